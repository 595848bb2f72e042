//! Bundle expressions.
//!
//! ```text
//! sum   := term ("+" term)*
//! term  := base ["(" int ")"] ["^" uint]
//! base  := "O(" int ")" | "w" index ("," index)* | "[" int ("," int)* "]"
//! ```
//!
//! `w1,6` is `ϖ1 + ϖ6`, `w1,1` is `2ϖ1`. A parenthesised integer after a base
//! twists by `O(t)`. Whitespace is ignored.

use bwbforge_core::{BundleSum, HomSpace, Weight};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty expression")]
    EmptyExpression,
    #[error("at {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("at {pos}: fundamental weight index {index} outside 1..={rank}")]
    BadIndex { pos: usize, index: usize, rank: usize },
    #[error("at {pos}: weight has {got} coordinates, expected {expected}")]
    Rank { pos: usize, got: usize, expected: usize },
    #[error("at {pos}: {weight} is not dominant for the Levi factor of {space}")]
    NotDominant { pos: usize, weight: String, space: String },
    #[error("at {pos}: multiplicity must be positive")]
    ZeroMultiplicity { pos: usize },
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Cursor { chars, at: 0, src }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos(), expected: what })
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.at += 1;
        }
        let v: i64 = digits.parse().map_err(|_| ParseError::Syntax { pos, expected: "integer" })?;
        Ok(if neg { -v } else { v })
    }

    fn done(&self) -> bool {
        self.at == self.chars.len()
    }
}

fn small(v: i64, pos: usize) -> Result<i32, ParseError> {
    i32::try_from(v).map_err(|_| ParseError::Syntax { pos, expected: "integer in 32-bit range" })
}

fn term(cur: &mut Cursor, x: &HomSpace) -> Result<(Weight, usize), ParseError> {
    let r = x.rank();
    let start = cur.pos();
    let mut w = Weight::zero(r);
    match cur.peek() {
        Some('O') => {
            cur.at += 1;
            cur.expect('(', "'(' after O")?;
            let p = cur.pos();
            w.0[x.k - 1] = small(cur.int()?, p)?;
            cur.expect(')', "')'")?;
        }
        Some('w') => {
            cur.at += 1;
            loop {
                let p = cur.pos();
                let i = cur.int()?;
                if i < 1 || i as usize > r {
                    return Err(ParseError::BadIndex { pos: p, index: i.max(0) as usize, rank: r });
                }
                w.0[i as usize - 1] += 1;
                if !cur.eat(',') {
                    break;
                }
            }
        }
        Some('[') => {
            cur.at += 1;
            let mut c = Vec::new();
            loop {
                let p = cur.pos();
                c.push(small(cur.int()?, p)?);
                if !cur.eat(',') {
                    break;
                }
            }
            cur.expect(']', "']'")?;
            if c.len() != r {
                return Err(ParseError::Rank { pos: start, got: c.len(), expected: r });
            }
            w = Weight::new(c);
        }
        _ => return Err(ParseError::Syntax { pos: start, expected: "'O(', 'w' or '['" }),
    }
    if cur.eat('(') {
        let p = cur.pos();
        w.0[x.k - 1] += small(cur.int()?, p)?;
        cur.expect(')', "')'")?;
    }
    let mut mult = 1;
    if cur.eat('^') {
        let p = cur.pos();
        let m = cur.int()?;
        if m <= 0 {
            return Err(ParseError::ZeroMultiplicity { pos: p });
        }
        mult = m as usize;
    }
    if x.require_p_dominant(&w).is_err() {
        return Err(ParseError::NotDominant { pos: start, weight: w.to_string(), space: x.to_string() });
    }
    Ok((w, mult))
}

pub fn parse_bundle(expr: &str, x: &HomSpace) -> Result<BundleSum, ParseError> {
    let mut cur = Cursor::new(expr);
    if cur.done() {
        return Err(ParseError::EmptyExpression);
    }
    let mut terms = vec![term(&mut cur, x)?];
    while !cur.done() {
        cur.expect('+', "'+' or end of input")?;
        terms.push(term(&mut cur, x)?);
    }
    Ok(BundleSum::new(terms))
}

/// A single irreducible summand, without multiplicity.
pub fn parse_weight(expr: &str, x: &HomSpace) -> Result<Weight, ParseError> {
    let mut cur = Cursor::new(expr);
    if cur.done() {
        return Err(ParseError::EmptyExpression);
    }
    let (w, m) = term(&mut cur, x)?;
    if m != 1 || !cur.done() {
        return Err(ParseError::Syntax { pos: cur.pos(), expected: "a single weight" });
    }
    Ok(w)
}

/// Inverse of [`parse_weight`].
pub fn print_weight(w: &Weight, x: &HomSpace) -> String {
    let k = x.k - 1;
    let t = w[k];
    let mut base = w.clone();
    base.0[k] = 0;
    if base.is_zero() {
        return format!("O({t})");
    }
    let total: i32 = base.0.iter().sum();
    let mut s = if total <= 3 {
        let idx: Vec<String> = base
            .0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n((i + 1).to_string(), c as usize))
            .collect();
        format!("w{}", idx.join(","))
    } else {
        base.to_string()
    };
    if t != 0 {
        s.push_str(&format!("({t})"));
    }
    s
}

/// Inverse of [`parse_bundle`]. Higher-rank summands come first, by
/// fundamental index; line bundles last, by degree.
pub fn print_bundle(b: &BundleSum, x: &HomSpace) -> String {
    let k = x.k - 1;
    let is_line = |w: &Weight| w.0.iter().enumerate().all(|(i, &c)| i == k || c == 0);
    let mut terms: Vec<&(Weight, usize)> = b.summands().iter().collect();
    terms.sort_by(|(a, _), (b, _)| match (is_line(a), is_line(b)) {
        (false, false) => b.cmp(a),
        (true, true) => a.cmp(b),
        (la, lb) => la.cmp(&lb),
    });
    terms
        .into_iter()
        .map(|(w, c)| {
            let s = print_weight(w, x);
            if *c == 1 {
                s
            } else {
                format!("{s}^{c}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> HomSpace {
        s.parse().unwrap()
    }

    #[test]
    fn lines() {
        let s = x("E6/P1");
        let b = parse_bundle("O(1)^12", &s).unwrap();
        assert_eq!(b, BundleSum::new([(s.line(1), 12)]));
        assert_eq!(print_bundle(&b, &s), "O(1)^12");
    }

    #[test]
    fn mixed() {
        let s = x("E6/P2");
        let b = parse_bundle("w1^2 + O(1)^5", &s).unwrap();
        let w1 = Weight::new([1, 0, 0, 0, 0, 0]);
        assert_eq!(b, BundleSum::new([(w1, 2), (s.line(1), 5)]));
        assert_eq!(parse_bundle(&print_bundle(&b, &s), &s).unwrap(), b);
        let t = x("E6/P3");
        assert_eq!(print_bundle(&parse_bundle("w6^4+O(1)", &t).unwrap(), &t), "w6^4 + O(1)");
    }

    #[test]
    fn twists_and_brackets() {
        let s = x("G2/P1");
        let b = parse_bundle("w2(1)", &s).unwrap();
        assert_eq!(b, BundleSum::new([(Weight::new([1, 1]), 1)]));
        assert_eq!(print_bundle(&b, &s), "w2(1)");
        assert_eq!(parse_bundle("[1,1]", &s).unwrap(), b);
        let f = x("F4/P4");
        let big = parse_bundle("[5,0,0,0](-2)^3", &f).unwrap();
        assert_eq!(print_bundle(&big, &f), "[5,0,0,0](-2)^3");
        assert_eq!(parse_bundle(&print_bundle(&big, &f), &f).unwrap(), big);
    }

    #[test]
    fn errors() {
        let s = x("E6/P2");
        assert_eq!(parse_bundle("", &s), Err(ParseError::EmptyExpression));
        assert_eq!(parse_bundle("   ", &s), Err(ParseError::EmptyExpression));
        assert!(matches!(parse_bundle("w7", &s), Err(ParseError::BadIndex { pos: 1, .. })));
        assert!(matches!(parse_bundle("O(1) + ", &s), Err(ParseError::Syntax { pos: 7, .. })));
        assert!(matches!(parse_bundle("[1,0]", &s), Err(ParseError::Rank { .. })));
        assert!(matches!(parse_bundle("[-1,0,0,0,0,0]", &s), Err(ParseError::NotDominant { .. })));
        assert!(matches!(parse_bundle("O(1)^0", &s), Err(ParseError::ZeroMultiplicity { .. })));
        assert!(matches!(parse_bundle("O(1) O(2)", &s), Err(ParseError::Syntax { pos: 5, .. })));
    }
}

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use super::{checked_add, checked_mul, Character, Mult, ReductiveContext};
use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::rootdata::{Coords, Weight};

type Key = (ReductiveContext, Weight);

fn dominant_memo() -> &'static Memo<Key, Vec<(Weight, Mult)>> {
    static M: OnceLock<Memo<Key, Vec<(Weight, Mult)>>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

fn character_memo() -> &'static Memo<Key, Character> {
    static M: OnceLock<Memo<Key, Character>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// Multiplicities of the context-dominant weights of `V(λ)`, by Freudenthal's
/// recursion. Sorted by depth below `λ`, then by weight.
pub fn dominant_multiplicities(ctx: &ReductiveContext, lambda: &Weight) -> Result<Arc<Vec<(Weight, Mult)>>> {
    ctx.require_dominant(lambda)?;
    dominant_memo().get_or_try(&(*ctx, lambda.clone()), || freudenthal(ctx, lambda))
}

/// The full character of `V(λ)` in ambient coordinates.
pub fn weight_multiplicities(ctx: &ReductiveContext, lambda: &Weight) -> Result<Arc<Character>> {
    ctx.require_dominant(lambda)?;
    character_memo().get_or_try(&(*ctx, lambda.clone()), || {
        let dom = dominant_multiplicities(ctx, lambda)?;
        let d = ctx.root_data();
        let mut terms = Vec::new();
        for (mu, m) in dom.iter() {
            // W-orbit of a dominant weight by breadth-first reflection.
            let mut seen: HashSet<Coords> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(mu.0.clone());
            queue.push_back(mu.0.clone());
            while let Some(v) = queue.pop_front() {
                for i in 0..ctx.rank() {
                    if ctx.levi & (1 << i) == 0 || v[i] == 0 {
                        continue;
                    }
                    let mut u = v.clone();
                    d.reflect(&mut u, i);
                    if seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
            terms.extend(seen.into_iter().map(|v| (Weight(v), *m)));
        }
        terms.sort();
        Ok(Character::from_sorted(terms))
    })
}

fn freudenthal(ctx: &ReductiveContext, lambda: &Weight) -> Result<Vec<(Weight, Mult)>> {
    let d = ctx.root_data();
    let r = ctx.rank();
    let mask = ctx.levi;
    let sym = d.symmetrizer();
    let idx = ctx.root_indices();
    let roots: Vec<(&[i32], &[i32])> = idx
        .iter()
        .map(|&i| (d.positive_roots()[i].coords(), d.root_weights()[i].coords()))
        .collect();

    // Dominant weights below λ: subtract positive roots while staying dominant.
    // Each carries its depth λ - μ in simple-root coordinates.
    let mut depth: HashMap<Coords, Coords> = HashMap::new();
    depth.insert(lambda.0.clone(), smallvec::smallvec![0; r]);
    let mut queue = VecDeque::from([lambda.0.clone()]);
    while let Some(mu) = queue.pop_front() {
        let n = depth[&mu].clone();
        for (c, aw) in &roots {
            let nu: Coords = mu.iter().zip(aw.iter()).map(|(x, y)| x - y).collect();
            if !(0..r).all(|i| mask & (1 << i) == 0 || nu[i] >= 0) || depth.contains_key(&nu) {
                continue;
            }
            let m: Coords = n.iter().zip(c.iter()).map(|(x, y)| x + y).collect();
            depth.insert(nu.clone(), m);
            queue.push_back(nu);
        }
    }
    let mut order: Vec<(Coords, Coords)> = depth.into_iter().collect();
    order.sort_by(|(w1, n1), (w2, n2)| {
        let h1: i32 = n1.iter().sum();
        let h2: i32 = n2.iter().sum();
        h1.cmp(&h2).then_with(|| w2.cmp(w1))
    });

    let mut mult: HashMap<Coords, Mult> = HashMap::with_capacity(order.len());
    let mut out = Vec::with_capacity(order.len());
    for (mu, n) in &order {
        if n.iter().all(|&x| x == 0) {
            mult.insert(mu.clone(), 1);
            out.push((Weight(mu.clone()), 1));
            continue;
        }
        // (λ+ρ, λ+ρ) - (μ+ρ, μ+ρ) = Σ n_i e_i (λ + μ + 2ρ)_i
        let den: i64 = (0..r)
            .map(|i| n[i] as i64 * sym[i] * (lambda[i] as i64 + mu[i] as i64 + 2))
            .sum();
        let mut num: Mult = 0;
        for (c, aw) in &roots {
            let mut v: Coords = mu.clone();
            loop {
                for (x, y) in v.iter_mut().zip(aw.iter()) {
                    *x += y;
                }
                let mut dom = v.clone();
                d.dominant_conjugate_in_place(&mut dom, mask);
                let Some(&m) = mult.get(&dom) else { break };
                let pair = d.pair_root(&v, c) as Mult;
                num = checked_add(num, checked_mul(m, pair)?)?;
            }
        }
        num = checked_mul(num, 2)?;
        if den <= 0 || num % den as Mult != 0 {
            return Err(Error::Internal(format!("Freudenthal quotient {num}/{den} at {}", Weight(mu.clone()))));
        }
        let m = num / den as Mult;
        if m < 0 {
            return Err(Error::Internal("negative weight multiplicity".into()));
        }
        if m > 0 {
            mult.insert(mu.clone(), m);
            out.push((Weight(mu.clone()), m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcalc::weyl_dim;
    use num_bigint::BigInt;

    fn g(s: &str) -> ReductiveContext {
        ReductiveContext::group(s.parse().unwrap())
    }

    #[test]
    fn g2_adjoint_zero_weight() {
        let ch = weight_multiplicities(&g("G2"), &Weight::new([0, 1])).unwrap();
        assert_eq!(ch.get(&Weight::zero(2)), 2);
        assert_eq!(ch.total(), 14);
        assert_eq!(ch.len(), 13);
    }

    #[test]
    fn levi_a1_string() {
        let ctx = ReductiveContext::with_simples("G2".parse().unwrap(), &[1]).unwrap();
        let ch = weight_multiplicities(&ctx, &Weight::new([1, 0])).unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch.iter().all(|(_, m)| m == 1));
    }

    #[test]
    fn spin7_standard_in_f4() {
        let ctx = ReductiveContext::levi_of("F4".parse().unwrap(), 4).unwrap();
        let ch = weight_multiplicities(&ctx, &Weight::new([1, 0, 0, 0])).unwrap();
        assert_eq!(ch.len(), 7);
        assert_eq!(ch.total(), 7);
    }

    #[test]
    fn totals_match_weyl_dim() {
        for (s, w) in [
            ("E6", vec![1, 0, 0, 0, 0, 1]),
            ("E7", vec![0, 0, 0, 0, 0, 0, 2]),
            ("F4", vec![1, 0, 0, 1]),
            ("B3", vec![1, 1, 1]),
            ("C3", vec![0, 2, 1]),
            ("D5", vec![0, 0, 1, 0, 1]),
            ("A4", vec![2, 0, 1, 1]),
        ] {
            let ctx = g(s);
            let w = Weight::new(w);
            let ch = weight_multiplicities(&ctx, &w).unwrap();
            assert_eq!(BigInt::from(ch.total()), weyl_dim(&ctx, &w).unwrap(), "{s} {w}");
            assert!(ch.is_invariant(&ctx));
        }
    }

    #[test]
    fn e8_adjoint() {
        let ch = weight_multiplicities(&g("E8"), &Weight::fundamental(8, 8)).unwrap();
        assert_eq!(ch.get(&Weight::zero(8)), 8);
        assert_eq!(ch.total(), 248);
    }
}

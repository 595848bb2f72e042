//! Exact-sequence bookkeeping over nonnegative integer unknowns.
//!
//! Unknowns are dimensions (cohomology groups, ranks of maps, cancellations in
//! spectral sequences). Constraints are linear equations. A value counts as
//! determined only when every nonnegative integer solution agrees on it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VarId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimValue {
    Exact(BigInt),
    /// `upper = None` means unbounded.
    Bounds { lower: BigInt, upper: Option<BigInt> },
}

impl DimValue {
    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            DimValue::Exact(v) => Some(v),
            DimValue::Bounds { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DimValue::Exact(_))
    }

    pub fn zero() -> Self {
        DimValue::Exact(BigInt::zero())
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Exact(v) => write!(f, "{v}"),
            DimValue::Bounds { lower, upper: Some(u) } => write!(f, "{lower}..{u}"),
            DimValue::Bounds { lower, upper: None } => write!(f, "{lower}..inf"),
        }
    }
}

#[derive(Clone, Debug)]
struct Equation {
    terms: Vec<(VarId, i64)>,
    rhs: BigInt,
}

#[derive(Clone, Debug, Default)]
pub struct Ledger {
    names: Vec<String>,
    eqs: Vec<Equation>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    names: Vec<String>,
    lower: Vec<BigInt>,
    upper: Vec<Option<BigInt>>,
}

impl Solution {
    pub fn value(&self, v: VarId) -> DimValue {
        match &self.upper[v] {
            Some(u) if *u == self.lower[v] => DimValue::Exact(u.clone()),
            u => DimValue::Bounds { lower: self.lower[v].clone(), upper: u.clone() },
        }
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    /// Sum of several unknowns, with bounds added componentwise when not exact.
    pub fn sum(&self, vars: &[VarId]) -> DimValue {
        let lower: BigInt = vars.iter().map(|&v| &self.lower[v]).sum();
        let upper: Option<BigInt> = vars.iter().map(|&v| self.upper[v].clone()).sum();
        match upper {
            Some(u) if u == lower => DimValue::Exact(u),
            u => DimValue::Bounds { lower, upper: u },
        }
    }
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn var(&mut self, name: impl Into<String>) -> VarId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    /// `Σ coeff·var = rhs`.
    pub fn equation(&mut self, terms: Vec<(VarId, i64)>, rhs: impl Into<BigInt>) {
        let mut merged: Vec<(VarId, i64)> = Vec::new();
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(e) => e.1 += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        self.eqs.push(Equation { terms: merged, rhs: rhs.into() });
    }

    pub fn fix(&mut self, v: VarId, value: impl Into<BigInt>) {
        self.equation(vec![(v, 1)], value);
    }

    pub fn equal(&mut self, a: VarId, b: VarId) {
        self.equation(vec![(a, 1), (b, -1)], 0);
    }

    /// Long exact sequence `0 → T_0 → T_1 → … → T_n → 0` with one image-rank
    /// unknown per map.
    pub fn exact_sequence(&mut self, terms: &[VarId], label: &str) {
        let ranks: Vec<VarId> = (0..terms.len().saturating_sub(1)).map(|j| self.var(format!("{label}.im{j}"))).collect();
        for (j, &t) in terms.iter().enumerate() {
            let mut eq = vec![(t, 1)];
            if j > 0 {
                eq.push((ranks[j - 1], -1));
            }
            if j < ranks.len() {
                eq.push((ranks[j], -1));
            }
            self.equation(eq, 0);
        }
    }

    pub fn solve(&self) -> Result<Solution> {
        let n = self.names.len();
        let mut lower = vec![BigInt::zero(); n];
        let mut upper: Vec<Option<BigInt>> = vec![None; n];
        for _round in 0..1000 {
            let mut progress = self.propagate(&mut lower, &mut upper)?;
            if !progress {
                progress = self.eliminate(&mut lower, &mut upper)?;
            }
            if !progress {
                break;
            }
        }
        Ok(Solution { names: self.names.clone(), lower, upper })
    }

    fn known(lower: &[BigInt], upper: &[Option<BigInt>], v: VarId) -> Option<BigInt> {
        match &upper[v] {
            Some(u) if *u == lower[v] => Some(u.clone()),
            _ => None,
        }
    }

    /// Interval propagation; returns whether any bound moved.
    fn propagate(&self, lower: &mut [BigInt], upper: &mut [Option<BigInt>]) -> Result<bool> {
        let mut any = false;
        for _pass in 0..200 {
            let mut moved = false;
            for eq in &self.eqs {
                if eq.terms.is_empty() {
                    if !eq.rhs.is_zero() {
                        return Err(Error::Inconsistent("0 = nonzero".into()));
                    }
                    continue;
                }
                // Bounds of each term a·x.
                let term_bounds: Vec<(BigInt, Option<BigInt>, Option<BigInt>)> = eq
                    .terms
                    .iter()
                    .map(|&(v, a)| {
                        let a = BigInt::from(a);
                        let lo = &a * &lower[v];
                        let hi = upper[v].as_ref().map(|u| &a * u);
                        if a.is_positive() {
                            (a, Some(lo), hi)
                        } else {
                            (a, hi, Some(lo))
                        }
                    })
                    .collect();
                // min/max of the whole sum (None = -inf / +inf)
                let sum_min: Option<BigInt> = term_bounds.iter().map(|t| t.1.clone()).sum();
                let sum_max: Option<BigInt> = term_bounds.iter().map(|t| t.2.clone()).sum();
                if let Some(m) = &sum_min {
                    if *m > eq.rhs {
                        return Err(Error::Inconsistent(format!("{} exceeds rhs", self.describe(eq))));
                    }
                }
                if let Some(m) = &sum_max {
                    if *m < eq.rhs {
                        return Err(Error::Inconsistent(format!("{} below rhs", self.describe(eq))));
                    }
                }
                for (idx, &(v, _)) in eq.terms.iter().enumerate() {
                    let (a, tmin, tmax) = &term_bounds[idx];
                    // others' range
                    let others_min = match (&sum_min, tmin) {
                        (Some(s), Some(t)) => Some(s - t),
                        _ => term_bounds.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, t)| t.1.clone()).sum(),
                    };
                    let others_max = match (&sum_max, tmax) {
                        (Some(s), Some(t)) => Some(s - t),
                        _ => term_bounds.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, t)| t.2.clone()).sum(),
                    };
                    // a·x ∈ [rhs - others_max, rhs - others_min]
                    let ax_lo = others_max.map(|m| &eq.rhs - m);
                    let ax_hi = others_min.map(|m| &eq.rhs - m);
                    let (x_lo, x_hi) = if a.is_positive() {
                        (ax_lo.map(|v| ceil_div(&v, a)), ax_hi.map(|v| floor_div(&v, a)))
                    } else {
                        (ax_hi.map(|v| ceil_div(&v, a)), ax_lo.map(|v| floor_div(&v, a)))
                    };
                    if let Some(l) = x_lo {
                        if l > lower[v] {
                            lower[v] = l;
                            moved = true;
                        }
                    }
                    if let Some(h) = x_hi {
                        if upper[v].as_ref().is_none_or(|u| h < *u) {
                            upper[v] = Some(h);
                            moved = true;
                        }
                    }
                    if let Some(u) = &upper[v] {
                        if *u < lower[v] {
                            return Err(Error::Inconsistent(format!("empty range for {}", self.names[v])));
                        }
                    }
                }
            }
            if !moved {
                break;
            }
            any = true;
        }
        Ok(any)
    }

    /// Rational row reduction over the unknowns. A pivot row without free
    /// columns determines its variable; a row with all coefficients of one sign
    /// and zero right side forces zeros.
    fn eliminate(&self, lower: &mut [BigInt], upper: &mut [Option<BigInt>]) -> Result<bool> {
        let unknown: Vec<VarId> =
            (0..self.names.len()).filter(|&v| Self::known(lower, upper, v).is_none()).collect();
        if unknown.is_empty() {
            return Ok(false);
        }
        let col: std::collections::HashMap<VarId, usize> = unknown.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let m = unknown.len();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for eq in &self.eqs {
            let mut row = vec![BigRational::zero(); m + 1];
            let mut rhs = eq.rhs.clone();
            let mut has = false;
            for &(v, a) in &eq.terms {
                match col.get(&v) {
                    Some(&c) => {
                        row[c] += BigRational::from_integer(BigInt::from(a));
                        has = true;
                    }
                    None => rhs -= BigInt::from(a) * Self::known(lower, upper, v).unwrap(),
                }
            }
            if has {
                row[m] = BigRational::from_integer(rhs);
                rows.push(row);
            }
        }
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for c in 0..m {
            let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
            rows.swap(pivot_row, p);
            let inv = rows[pivot_row][c].clone();
            for x in rows[pivot_row].iter_mut() {
                *x /= &inv;
            }
            let prow = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            pivot_row += 1;
            if pivot_row == rows.len() {
                break;
            }
        }
        let mut progress = false;
        for row in rows.iter().take(pivot_row) {
            let nz: Vec<usize> = (0..m).filter(|&c| !row[c].is_zero()).collect();
            if nz.len() == 1 {
                let v = unknown[nz[0]];
                let val = &row[m] / &row[nz[0]];
                if !val.is_integer() || val.is_negative() {
                    return Err(Error::Inconsistent(format!("{} = {val}", self.names[v])));
                }
                let val = val.to_integer();
                lower[v] = val.clone();
                upper[v] = Some(val);
                progress = true;
            } else if row[m].is_zero() && (nz.iter().all(|&c| row[c].is_positive()) || nz.iter().all(|&c| row[c].is_negative())) {
                for &c in &nz {
                    let v = unknown[c];
                    lower[v] = BigInt::zero();
                    upper[v] = Some(BigInt::zero());
                }
                progress = true;
            }
        }
        for row in rows.iter().skip(pivot_row) {
            if !row[m].is_zero() {
                return Err(Error::Inconsistent("rank-deficient system with nonzero residue".into()));
            }
        }
        Ok(progress)
    }

    fn describe(&self, eq: &Equation) -> String {
        let lhs: Vec<String> = eq.terms.iter().map(|(v, a)| format!("{a}·{}", self.names[*v])).collect();
        format!("{} = {}", lhs.join(" + "), eq.rhs)
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -num_integer::Integer::div_floor(&-a, b)
}

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{checked_add, checked_mul, weight_multiplicities, Character, IrrDecomp, Mult, ReductiveContext};
use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::rootdata::{Coords, Weight};

/// Accumulates `coeff · V(w·(base))` into `acc` using the dot action.
#[inline]
fn push_dot(ctx: &ReductiveContext, mut v: Coords, coeff: Mult, acc: &mut HashMap<Coords, Mult>) -> Result<()> {
    if let Some(sign) = ctx.dot_dominant(&mut v) {
        let e = acc.entry(v).or_default();
        *e = checked_add(*e, checked_mul(sign, coeff)?)?;
    }
    Ok(())
}

fn finish(acc: HashMap<Coords, Mult>, divisor: Mult) -> Result<IrrDecomp> {
    let mut out = IrrDecomp::new();
    for (w, c) in acc {
        if c == 0 {
            continue;
        }
        if c < 0 || c % divisor != 0 {
            return Err(Error::Internal(format!("non-effective decomposition at {}: {c}/{divisor}", Weight(w))));
        }
        out.add(Weight(w), c / divisor);
    }
    Ok(out)
}

/// Decompose an invariant character using Brauer's dot-action formula.
pub fn decompose(ctx: &ReductiveContext, ch: &Character) -> Result<IrrDecomp> {
    let mut acc = HashMap::new();
    for (mu, m) in ch.iter() {
        push_dot(ctx, mu.0.clone(), m, &mut acc)?;
    }
    finish(acc, 1)
}

/// Decompose by repeatedly removing the character of a maximal weight.
/// Slow; kept as an independent check on [`decompose`].
pub fn decompose_by_peeling(ctx: &ReductiveContext, ch: &Character) -> Result<IrrDecomp> {
    let d = ctx.root_data();
    let idx = ctx.root_indices();
    // f(μ) = (μ, 2ρ_L) strictly increases along Levi simple roots.
    let mut grade = vec![0i64; ctx.rank()];
    for &i in idx.iter() {
        for (g, (&c, &e)) in grade.iter_mut().zip(d.positive_roots()[i].coords().iter().zip(d.symmetrizer())) {
            *g += c as i64 * e;
        }
    }
    let f = |w: &Weight| -> i64 { w.0.iter().zip(&grade).map(|(&x, &g)| x as i64 * g).sum() };
    let mut rest: HashMap<Weight, Mult> = ch.iter().map(|(w, c)| (w.clone(), c)).collect();
    let mut out = IrrDecomp::new();
    loop {
        rest.retain(|_, c| *c != 0);
        let Some((top, c)) = rest.iter().max_by(|(a, _), (b, _)| f(a).cmp(&f(b)).then_with(|| a.cmp(b))).map(|(w, c)| (w.clone(), *c)) else {
            break;
        };
        if c < 0 || !ctx.is_dominant(&top) {
            return Err(Error::Internal(format!("peeling stalled at {top}")));
        }
        for (mu, m) in weight_multiplicities(ctx, &top)?.iter() {
            let e = rest.entry(mu.clone()).or_default();
            *e = checked_add(*e, -checked_mul(m, c)?)?;
        }
        out.add(top, c);
    }
    Ok(out)
}

fn dim_estimate(ctx: &ReductiveContext, rep: &IrrDecomp) -> Result<BigInt> {
    rep.dim(ctx)
}

/// `a ⊗ b` by the Brauer-Klimyk rule, expanding the smaller factor.
pub fn tensor_decompose(ctx: &ReductiveContext, a: &IrrDecomp, b: &IrrDecomp) -> Result<IrrDecomp> {
    let (small, big) = if dim_estimate(ctx, a)? <= dim_estimate(ctx, b)? { (a, b) } else { (b, a) };
    let ch = small.character(ctx)?;
    let mut acc = HashMap::new();
    for (nu, c) in big.iter() {
        for (mu, m) in ch.iter() {
            let v: Coords = nu.0.iter().zip(mu.0.iter()).map(|(x, y)| x + y).collect();
            push_dot(ctx, v, checked_mul(c, m)?, &mut acc)?;
        }
    }
    finish(acc, 1)
}

/// Newton recursion for the λ-operations (`alternate`) or σ-operations:
/// `k·e_k = Σ_i (∓1)^{i-1} ψ^i(χ)·e_{k-i}`, each product decomposed by the dot action.
fn newton(ctx: &ReductiveContext, rep: &IrrDecomp, top: usize, alternate: bool) -> Result<Vec<IrrDecomp>> {
    let ch = rep.character(ctx)?;
    let chi: Vec<(&Weight, Mult)> = ch.iter().collect();
    let mut table = vec![IrrDecomp::trivial(ctx.rank())];
    for k in 1..=top {
        let mut acc: HashMap<Coords, Mult> = HashMap::new();
        for i in 1..=k {
            let sign: Mult = if alternate && i % 2 == 0 { -1 } else { 1 };
            let scale = i as i32;
            for (nu, c) in table[k - i].iter() {
                let c = checked_mul(c, sign)?;
                for &(mu, m) in &chi {
                    let v: Coords = nu.0.iter().zip(mu.0.iter()).map(|(x, y)| x + scale * y).collect();
                    push_dot(ctx, v, checked_mul(c, m)?, &mut acc)?;
                }
            }
        }
        table.push(finish(acc, k as Mult)?);
    }
    Ok(table)
}

fn total_rank(ctx: &ReductiveContext, rep: &IrrDecomp) -> Result<usize> {
    let r = rep.dim(ctx)?;
    r.to_usize().ok_or(Error::Overflow)
}

type TableKey = (ReductiveContext, IrrDecomp);

/// `Λ^k(rep)` for every `k` from 0 to the rank of `rep`.
pub fn exterior_table(ctx: &ReductiveContext, rep: &IrrDecomp) -> Result<Arc<Vec<IrrDecomp>>> {
    static M: OnceLock<Memo<TableKey, Vec<IrrDecomp>>> = OnceLock::new();
    if !rep.is_valid(ctx) {
        return Err(Error::NotDominant(format!("{rep:?}")));
    }
    M.get_or_init(Memo::new).get_or_try(&(*ctx, rep.clone()), || {
        let n = total_rank(ctx, rep)?;
        newton(ctx, rep, n, true)
    })
}

/// Only the powers up to `k` are built, so large representations work for
/// small `k`.
pub fn exterior_power(ctx: &ReductiveContext, rep: &IrrDecomp, k: usize) -> Result<IrrDecomp> {
    static M: OnceLock<Memo<(ReductiveContext, IrrDecomp, usize), IrrDecomp>> = OnceLock::new();
    if !rep.is_valid(ctx) {
        return Err(Error::NotDominant(format!("{rep:?}")));
    }
    let n = rep.dim(ctx)?;
    if BigInt::from(k) > n {
        return Err(Error::PowerOutOfRange { k, rank: n.to_string() });
    }
    let v = M.get_or_init(Memo::new).get_or_try(&(*ctx, rep.clone(), k), || {
        Ok(newton(ctx, rep, k, true)?.pop().unwrap())
    })?;
    Ok((*v).clone())
}

pub fn symmetric_power(ctx: &ReductiveContext, rep: &IrrDecomp, k: usize) -> Result<IrrDecomp> {
    static M: OnceLock<Memo<(ReductiveContext, IrrDecomp, usize), IrrDecomp>> = OnceLock::new();
    if !rep.is_valid(ctx) {
        return Err(Error::NotDominant(format!("{rep:?}")));
    }
    let v = M.get_or_init(Memo::new).get_or_try(&(*ctx, rep.clone(), k), || {
        Ok(newton(ctx, rep, k, false)?.pop().unwrap())
    })?;
    Ok((*v).clone())
}

//! Brute-force permutation oracles and the reduction of "permutes F_q" to
//! "permutes μ_d" for polynomials of the shape `x^r·h(x^{(q−1)/d})`.
//!
//! [`is_permutation`] and [`bijects_on`] only ever evaluate; they are the
//! ground truth every predicted condition is checked against.

use std::collections::HashMap;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::poly::{DensePoly, Evaluate, TermSum};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Witness {
    /// Two distinct inputs with the same image; the first is earlier in enumeration order.
    Collision(FieldElem, FieldElem),
    /// An input whose image falls outside the domain.
    Escape(FieldElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermReport {
    pub is_perm: bool,
    /// First failure in enumeration order, absent iff `is_perm`.
    pub witness: Option<Witness>,
    /// Number of distinct images lying in the domain.
    pub image_size: usize,
}

/// Evaluates `f` on all of F_q in index order.
pub fn is_permutation<F: Evaluate + ?Sized>(ctx: &FieldCtx, f: &F) -> PermReport {
    let q = ctx.order();
    let mut preimage = vec![u32::MAX; q as usize];
    let mut image_size = 0;
    let mut witness = None;
    for i in 0..q {
        let x = ctx.element(i);
        let y = ctx.index_of(f.evaluate(ctx, x)) as usize;
        if preimage[y] == u32::MAX {
            preimage[y] = i as u32;
            image_size += 1;
        } else if witness.is_none() {
            witness = Some(Witness::Collision(ctx.element(preimage[y] as u64), x));
        }
    }
    PermReport {
        is_perm: witness.is_none(),
        witness,
        image_size,
    }
}

/// Whether `f` maps the duplicate-free set `domain` onto itself.
pub fn bijects_on<F: Evaluate + ?Sized>(
    ctx: &FieldCtx,
    f: &F,
    domain: &[FieldElem],
) -> Result<PermReport> {
    let slots: HashMap<FieldElem, usize> =
        domain.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if slots.len() != domain.len() {
        return Err(Error::PreconditionFailed(
            "domain contains duplicates".into(),
        ));
    }
    let mut preimage: Vec<Option<FieldElem>> = vec![None; domain.len()];
    let mut image_size = 0;
    let mut witness = None;
    for &x in domain {
        let y = f.evaluate(ctx, x);
        match slots.get(&y) {
            None => {
                witness.get_or_insert(Witness::Escape(x));
            }
            Some(&slot) => match preimage[slot] {
                None => {
                    preimage[slot] = Some(x);
                    image_size += 1;
                }
                Some(first) => {
                    witness.get_or_insert(Witness::Collision(first, x));
                }
            },
        }
    }
    Ok(PermReport {
        is_perm: witness.is_none(),
        witness,
        image_size,
    })
}

/// The subgroup μ_d of F_q^*, listed as `g^{s·i}` with `s = (q − 1)/d`.
pub fn roots_of_unity(ctx: &FieldCtx, d: u64) -> Result<Vec<FieldElem>> {
    let s = cofactor(ctx, d)?;
    let w = ctx.pow(ctx.generator(), s);
    let mut cur = ctx.one();
    Ok((0..d)
        .map(|_| {
            let v = cur;
            cur = ctx.mul(cur, w);
            v
        })
        .collect())
}

fn cofactor(ctx: &FieldCtx, d: u64) -> Result<u64> {
    let n = ctx.order() - 1;
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidDivisor {
            d,
            order_minus_one: n,
        });
    }
    Ok(n / d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TzVerdict {
    pub verdict: bool,
    /// `gcd(r, (q − 1)/d) = 1`.
    pub cond1: bool,
    /// `x^r·h(x)^{(q−1)/d}` permutes μ_d.
    pub cond2: bool,
}

/// Predicts whether `x^r·h(x^{(q−1)/d})` permutes F_q from the two
/// conditions on μ_d.
pub fn tz_criterion(ctx: &FieldCtx, r: u64, h: &DensePoly, d: u64) -> Result<TzVerdict> {
    if r == 0 {
        return Err(Error::PreconditionFailed("r must be positive".into()));
    }
    if h.ctx_id() != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    let s = cofactor(ctx, d)?;
    let cond1 = gcd(r, s) == 1;
    let mu_d = roots_of_unity(ctx, d)?;
    let g = |x: FieldElem| ctx.mul(ctx.pow(x, r), ctx.pow(h.evaluate(ctx, x), s));
    let cond2 = bijects_on(ctx, &g, &mu_d)?.is_perm;
    Ok(TzVerdict {
        verdict: cond1 && cond2,
        cond1,
        cond2,
    })
}

/// `x^r·h(x^{(q−1)/d})` as a sparse polynomial.
pub fn tz_polynomial(ctx: &FieldCtx, r: u64, h: &DensePoly, d: u64) -> Result<TermSum> {
    let s = cofactor(ctx, d)?;
    h.to_term_sum(ctx)?.substitute_monomial(s)?.shift(ctx, r)
}

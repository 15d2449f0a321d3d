//! Sparse and dense polynomials over F_{Q²}.
//!
//! The families under test have a handful of terms but degrees near q, so
//! [`TermSum`] is the working representation; [`DensePoly`] is used for
//! reduced forms and for the small inner polynomials `h`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};

/// Largest exponent a [`TermSum`] may carry.
pub const MAX_EXPONENT: u64 = i64::MAX as u64;
/// Largest degree (and hence largest field order) handled densely.
pub const DENSE_CAP: u64 = 1 << 20;

/// Anything that can be evaluated pointwise on F_{Q²}.
pub trait Evaluate {
    fn evaluate(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem;
}

impl<F: Fn(FieldElem) -> FieldElem> Evaluate for F {
    fn evaluate(&self, _ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        self(x)
    }
}

/// Sparse polynomial: strictly increasing exponents, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermSum {
    terms: Vec<(u64, FieldElem)>,
    ctx: u32,
}

impl TermSum {
    pub fn zero(ctx: &FieldCtx) -> Self {
        TermSum {
            terms: Vec::new(),
            ctx: ctx.id(),
        }
    }

    pub fn monomial(ctx: &FieldCtx, exponent: u64, coeff: FieldElem) -> Result<Self> {
        Self::from_terms(ctx, [(exponent, coeff)])
    }

    /// Collects terms in any order; repeated exponents are summed and zero
    /// coefficients dropped.
    pub fn from_terms<I>(ctx: &FieldCtx, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, FieldElem)>,
    {
        let mut raw: Vec<(u64, FieldElem)> = Vec::new();
        for (e, c) in terms {
            ctx.check(c)?;
            if e > MAX_EXPONENT {
                return Err(Error::Overflow);
            }
            raw.push((e, c));
        }
        Ok(Self::normalize(ctx, raw))
    }

    fn normalize(ctx: &FieldCtx, mut raw: Vec<(u64, FieldElem)>) -> Self {
        raw.sort_by_key(|&(e, _)| e);
        let mut terms: Vec<(u64, FieldElem)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc = ctx.add(*lc, c),
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        TermSum {
            terms,
            ctx: ctx.id(),
        }
    }

    pub fn terms(&self) -> &[(u64, FieldElem)] {
        &self.terms
    }

    pub fn ctx_id(&self) -> u32 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|&(e, _)| e)
    }

    /// Coefficient of `x^e` (zero when absent).
    pub fn coeff(&self, ctx: &FieldCtx, e: u64) -> FieldElem {
        match self.terms.binary_search_by_key(&e, |&(x, _)| x) {
            Ok(i) => self.terms[i].1,
            Err(_) => ctx.zero(),
        }
    }

    fn same_ctx(&self, ctx: &FieldCtx) -> Result<()> {
        if self.ctx == ctx.id() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> Result<FieldElem> {
        self.same_ctx(ctx)?;
        ctx.check(x)?;
        Ok(self.evaluate(ctx, x))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &TermSum) -> Result<TermSum> {
        self.same_ctx(ctx)?;
        other.same_ctx(ctx)?;
        let raw = self.terms.iter().chain(&other.terms).copied().collect();
        Ok(Self::normalize(ctx, raw))
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElem) -> Result<TermSum> {
        self.same_ctx(ctx)?;
        ctx.check(c)?;
        let raw = self
            .terms
            .iter()
            .map(|&(e, a)| (e, ctx.mul(a, c)))
            .collect();
        Ok(Self::normalize(ctx, raw))
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, ctx: &FieldCtx, shift: u64) -> Result<TermSum> {
        self.same_ctx(ctx)?;
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| {
                e.checked_add(shift)
                    .filter(|&s| s <= MAX_EXPONENT)
                    .map(|s| (s, c))
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TermSum {
            terms,
            ctx: self.ctx,
        })
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &TermSum) -> Result<TermSum> {
        self.same_ctx(ctx)?;
        other.same_ctx(ctx)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                let e = e1
                    .checked_add(e2)
                    .filter(|&s| s <= MAX_EXPONENT)
                    .ok_or(Error::Overflow)?;
                raw.push((e, ctx.mul(c1, c2)));
            }
        }
        Ok(Self::normalize(ctx, raw))
    }

    /// Formal power by square-and-multiply on polynomials.
    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Result<TermSum> {
        let mut acc = TermSum::monomial(ctx, 0, ctx.one())?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base)?;
            }
        }
        Ok(acc)
    }

    /// `f(x^s)`.
    pub fn substitute_monomial(&self, s: u64) -> Result<TermSum> {
        if s == 0 {
            return Err(Error::Overflow);
        }
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| {
                e.checked_mul(s)
                    .filter(|&v| v <= MAX_EXPONENT)
                    .map(|v| (v, c))
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TermSum {
            terms,
            ctx: self.ctx,
        })
    }

    /// The unique polynomial of degree < q agreeing with `self` on F_q.
    /// Exponent 0 stays 0; `e > 0` maps to `((e − 1) mod (q − 1)) + 1`.
    pub fn reduce_mod_field(&self, ctx: &FieldCtx) -> Result<DensePoly> {
        self.same_ctx(ctx)?;
        let q = ctx.order();
        if q > DENSE_CAP {
            return Err(Error::CapExceeded(format!(
                "field order {q} above {DENSE_CAP}"
            )));
        }
        let mut coeffs = vec![ctx.zero(); q as usize];
        for &(e, c) in &self.terms {
            let r = if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 };
            coeffs[r as usize] = ctx.add(coeffs[r as usize], c);
        }
        Ok(DensePoly::from_coeffs_unchecked(ctx, coeffs))
    }

    pub fn to_dense(&self, ctx: &FieldCtx) -> Result<DensePoly> {
        self.same_ctx(ctx)?;
        let deg = self.degree().unwrap_or(0);
        if deg >= DENSE_CAP {
            return Err(Error::CapExceeded(format!(
                "degree {deg} above {DENSE_CAP}"
            )));
        }
        let mut coeffs = vec![ctx.zero(); deg as usize + 1];
        for &(e, c) in &self.terms {
            coeffs[e as usize] = c;
        }
        Ok(DensePoly::from_coeffs_unchecked(ctx, coeffs))
    }

    /// Parses `"e1:c1;e2:c2;..."`; `"0"` or an empty string is the zero polynomial.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<TermSum> {
        let pairs = parse_pairs(text)?;
        let terms = pairs
            .into_iter()
            .map(|(e, c)| Ok((e, ctx.parse_elem(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ctx, terms)
    }
}

impl Evaluate for TermSum {
    fn evaluate(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        self.terms.iter().fold(ctx.zero(), |acc, &(e, c)| {
            ctx.add(acc, ctx.mul(c, ctx.pow(x, e)))
        })
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pairs(f, self.terms.iter().map(|(e, c)| (*e, c)))
    }
}

/// Split `"e:c;e:c"` into exponent / coefficient-text pairs.
pub(crate) fn parse_pairs(text: &str) -> Result<Vec<(u64, &str)>> {
    let s = text.trim();
    if s.is_empty() || s == "0" {
        return Ok(Vec::new());
    }
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (e, c) = part.split_once(':').ok_or_else(|| Error::ParsePoly {
                input: text.to_string(),
                reason: format!("term {part:?} lacks ':'"),
            })?;
            let e = e.trim().parse::<u64>().map_err(|err| Error::ParsePoly {
                input: text.to_string(),
                reason: format!("exponent {e:?}: {err}"),
            })?;
            Ok((e, c))
        })
        .collect()
}

fn write_pairs<'a>(
    f: &mut fmt::Formatter<'_>,
    pairs: impl Iterator<Item = (u64, &'a FieldElem)>,
) -> fmt::Result {
    let mut any = false;
    for (e, c) in pairs {
        if any {
            f.write_str(";")?;
        }
        write!(f, "{e}:{c}")?;
        any = true;
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// Dense polynomial, index = degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensePoly {
    coeffs: Vec<FieldElem>,
    ctx: u32,
}

impl DensePoly {
    pub fn zero(ctx: &FieldCtx) -> Self {
        DensePoly {
            coeffs: Vec::new(),
            ctx: ctx.id(),
        }
    }

    pub fn from_coeffs(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> Result<Self> {
        for &c in &coeffs {
            ctx.check(c)?;
        }
        if coeffs.len() as u64 > DENSE_CAP + 1 {
            return Err(Error::CapExceeded(format!("{} coefficients", coeffs.len())));
        }
        Ok(Self::from_coeffs_unchecked(ctx, coeffs))
    }

    fn from_coeffs_unchecked(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly {
            coeffs,
            ctx: ctx.id(),
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn ctx_id(&self) -> u32 {
        self.ctx
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_else(|| ctx.zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> Result<FieldElem> {
        if self.ctx != ctx.id() {
            return Err(Error::ContextMismatch);
        }
        ctx.check(x)?;
        Ok(self.evaluate(ctx, x))
    }

    pub fn to_term_sum(&self, ctx: &FieldCtx) -> Result<TermSum> {
        TermSum::from_terms(
            ctx,
            self.coeffs.iter().enumerate().map(|(i, &c)| (i as u64, c)),
        )
    }

    /// Same text format as [`TermSum::parse`].
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<DensePoly> {
        TermSum::parse(ctx, text)?.to_dense(ctx)
    }
}

impl Evaluate for DensePoly {
    fn evaluate(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pairs(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u64, c)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(ctx: &FieldCtx, pairs: &[(u64, i64)]) -> TermSum {
        TermSum::from_terms(ctx, pairs.iter().map(|&(e, c)| (e, ctx.from_int(c)))).unwrap()
    }

    #[test]
    fn eval_trinomial_over_f4() {
        let ctx = FieldCtx::new(2).unwrap();
        let t = ctx.parse_elem("0,1").unwrap();
        let f = ts(&ctx, &[(3, 1), (4, 1), (6, 1)]);
        assert_eq!(f.eval(&ctx, t).unwrap(), t);
        assert_eq!(f.eval(&ctx, ctx.zero()).unwrap(), ctx.zero());
    }

    #[test]
    fn eval_constant_and_zero() {
        let ctx = FieldCtx::new(3).unwrap();
        let f = ts(&ctx, &[(0, 2), (5, 1)]);
        assert_eq!(f.eval(&ctx, ctx.zero()).unwrap(), ctx.from_int(2));
        let z = TermSum::zero(&ctx);
        for a in ctx.elements() {
            assert!(z.eval(&ctx, a).unwrap().is_zero());
        }
    }

    #[test]
    fn normalization_merges_and_drops() {
        let ctx = FieldCtx::new(3).unwrap();
        let f = ts(&ctx, &[(5, 1), (2, 1), (5, 2), (0, 0)]);
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].0, 2);
    }

    #[test]
    fn reduce_examples() {
        let ctx = FieldCtx::new(4).unwrap();
        let f = ts(&ctx, &[(112, 1)]);
        let r = f.reduce_mod_field(&ctx).unwrap();
        assert_eq!(r.degree(), Some(7));
        assert_eq!(
            ts(&ctx, &[(16, 1)])
                .reduce_mod_field(&ctx)
                .unwrap()
                .degree(),
            Some(1)
        );
        // x^{q-1} and x^0 stay distinct
        let g = ts(&ctx, &[(0, 1), (15, 1)]).reduce_mod_field(&ctx).unwrap();
        assert_eq!(g.coeffs().len(), 16);
        let low = ts(&ctx, &[(0, 1), (3, 1), (15, 1)]);
        assert_eq!(
            low.reduce_mod_field(&ctx).unwrap(),
            low.to_dense(&ctx).unwrap()
        );
    }

    #[test]
    fn reduce_sums_collisions() {
        let ctx = FieldCtx::new(3).unwrap();
        // q = 9: x^9 → x, so x + x^9 → 2x
        let r = ts(&ctx, &[(1, 1), (9, 1)]).reduce_mod_field(&ctx).unwrap();
        assert_eq!(r.coeffs().len(), 2);
        assert_eq!(r.coeffs()[1], ctx.from_int(2));
    }

    #[test]
    fn substitute_examples() {
        let ctx = FieldCtx::new(4).unwrap();
        let f = ts(&ctx, &[(2, 1), (0, 1)]);
        assert_eq!(
            f.substitute_monomial(3).unwrap(),
            ts(&ctx, &[(6, 1), (0, 1)])
        );
        assert_eq!(f.substitute_monomial(1).unwrap(), f);
        let g = ts(&ctx, &[(8, 1), (11, 3), (17, -1)]);
        let exps: Vec<u64> = g
            .substitute_monomial(14)
            .unwrap()
            .terms()
            .iter()
            .map(|t| t.0)
            .collect();
        assert_eq!(exps, [112, 154, 238]);
        assert_eq!(
            ts(&ctx, &[(1 << 62, 1)]).substitute_monomial(4),
            Err(Error::Overflow)
        );
    }

    #[test]
    fn formal_pow_matches_pointwise() {
        let ctx = FieldCtx::new(3).unwrap();
        let f = ts(&ctx, &[(0, 1), (1, 2), (3, 1)]);
        let f5 = f.pow(&ctx, 5).unwrap();
        for a in ctx.elements() {
            assert_eq!(f5.evaluate(&ctx, a), ctx.pow(f.evaluate(&ctx, a), 5));
        }
    }

    #[test]
    fn text_round_trip() {
        let ctx = FieldCtx::new(3).unwrap();
        let f = TermSum::parse(&ctx, "0:1,0;4:g^3;10:2,1").unwrap();
        assert_eq!(TermSum::parse(&ctx, &f.to_string()).unwrap(), f);
        assert!(TermSum::parse(&ctx, "0").unwrap().is_zero());
        assert_eq!(TermSum::zero(&ctx).to_string(), "0");
        assert!(TermSum::parse(&ctx, "3").is_err());
        assert!(TermSum::parse(&ctx, "x:1,0").is_err());
    }

    #[test]
    fn dense_trims_and_evaluates() {
        let ctx = FieldCtx::new(2).unwrap();
        let d = DensePoly::from_coeffs(&ctx, vec![ctx.one(), ctx.one(), ctx.zero()]).unwrap();
        assert_eq!(d.degree(), Some(1));
        // 1 + x vanishes at 1 in characteristic 2
        assert!(d.eval(&ctx, ctx.one()).unwrap().is_zero());
        assert!(DensePoly::zero(&ctx).degree().is_none());
    }

    #[test]
    fn context_mismatch() {
        let a = FieldCtx::new(2).unwrap();
        let b = FieldCtx::new(3).unwrap();
        let f = ts(&a, &[(1, 1)]);
        assert_eq!(f.eval(&b, b.one()), Err(Error::ContextMismatch));
        assert_eq!(f.eval(&a, b.one()), Err(Error::ContextMismatch));
    }
}

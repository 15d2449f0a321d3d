//! Degree-one rational functions on the projective line over F_{Q²} and the
//! classification of those that biject μ_{Q+1}, either onto itself or onto
//! F_Q ∪ {∞}.
//!
//! A map is stored as `(a·x + b)/(c·x + d)` scaled so that the first nonzero
//! entry of `(a, b, c, d)` is 1, which makes structural equality coincide with
//! equality of maps.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    /// `x ↦ x^n` extended to the projective line (∞ is fixed).
    pub fn pow(self, ctx: &FieldCtx, n: u64) -> ProjPoint {
        match self {
            ProjPoint::Finite(x) => ProjPoint::Finite(ctx.pow(x, n)),
            ProjPoint::Infinity => ProjPoint::Infinity,
        }
    }

    pub fn finite(self) -> Option<FieldElem> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mobius {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: FieldElem,
}

impl Mobius {
    /// `(a·x + b)/(c·x + d)`, normalized.
    pub fn new(
        ctx: &FieldCtx,
        a: FieldElem,
        b: FieldElem,
        c: FieldElem,
        d: FieldElem,
    ) -> Result<Self> {
        for x in [a, b, c, d] {
            ctx.check(x)?;
        }
        let det = ctx.sub(ctx.mul(a, d), ctx.mul(b, c));
        if det.is_zero() {
            return Err(Error::Degenerate);
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).unwrap();
        let s = ctx.inv(lead)?;
        Ok(Mobius {
            a: ctx.mul(a, s),
            b: ctx.mul(b, s),
            c: ctx.mul(c, s),
            d: ctx.mul(d, s),
        })
    }

    /// `(α·x − δ)/(γ·x − β)`, the parametrization with negated constants.
    pub fn from_minus_form(
        ctx: &FieldCtx,
        alpha: FieldElem,
        delta: FieldElem,
        gamma: FieldElem,
        beta: FieldElem,
    ) -> Result<Self> {
        Self::new(ctx, alpha, ctx.neg(delta), gamma, ctx.neg(beta))
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::new(ctx, ctx.one(), ctx.zero(), ctx.zero(), ctx.one()).unwrap()
    }

    /// `β/x`.
    pub fn inversion(ctx: &FieldCtx, beta: FieldElem) -> Result<Self> {
        Self::new(ctx, ctx.zero(), beta, ctx.one(), ctx.zero())
    }

    /// `(x − γ^Q·β)/(γ·x − β)`.
    pub fn two_param(ctx: &FieldCtx, beta: FieldElem, gamma: FieldElem) -> Result<Self> {
        let shift = ctx.mul(ctx.frobenius(gamma), beta);
        Self::from_minus_form(ctx, ctx.one(), shift, gamma, beta)
    }

    /// `(δ·x − β·δ^Q)/(x − β)`.
    pub fn line_form(ctx: &FieldCtx, beta: FieldElem, delta: FieldElem) -> Result<Self> {
        let shift = ctx.mul(beta, ctx.frobenius(delta));
        Self::from_minus_form(ctx, delta, shift, ctx.one(), beta)
    }

    /// Normalized `[a, b, c, d]`.
    pub fn coefficients(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, ctx: &FieldCtx, point: ProjPoint) -> ProjPoint {
        match point {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(ctx.div(self.a, self.c).unwrap())
                }
            }
            ProjPoint::Finite(x) => {
                let num = ctx.add(ctx.mul(self.a, x), self.b);
                let den = ctx.add(ctx.mul(self.c, x), self.d);
                match ctx.div(num, den) {
                    Ok(v) => ProjPoint::Finite(v),
                    Err(_) => ProjPoint::Infinity,
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, ctx: &FieldCtx, other: &Mobius) -> Mobius {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        let dot = |x: FieldElem, y: FieldElem, z: FieldElem, w: FieldElem| {
            ctx.add(ctx.mul(x, y), ctx.mul(z, w))
        };
        Mobius::new(
            ctx,
            dot(a, e, b, g),
            dot(a, f, b, h),
            dot(c, e, d, g),
            dot(c, f, d, h),
        )
        .expect("product of invertible matrices is invertible")
    }

    pub fn invert(&self, ctx: &FieldCtx) -> Mobius {
        Mobius::new(ctx, self.d, ctx.neg(self.b), ctx.neg(self.c), self.a)
            .expect("adjugate of an invertible matrix is invertible")
    }

    /// The point sent to ∞.
    pub fn pole(&self, ctx: &FieldCtx) -> ProjPoint {
        self.invert(ctx).apply(ctx, ProjPoint::Infinity)
    }

    /// Every element of PGL₂(F_q), `q³ − q` maps, in a fixed order.
    pub fn enumerate_all(ctx: &FieldCtx) -> Vec<Mobius> {
        let elems: Vec<FieldElem> = ctx.elements().collect();
        let (zero, one) = (ctx.zero(), ctx.one());
        let mut out = Vec::new();
        for &b in &elems {
            for &c in &elems {
                for &d in &elems {
                    if ctx.sub(d, ctx.mul(b, c)).is_zero() {
                        continue;
                    }
                    out.push(Mobius { a: one, b, c, d });
                }
            }
        }
        for &c in elems.iter().filter(|c| !c.is_zero()) {
            for &d in &elems {
                out.push(Mobius {
                    a: zero,
                    b: one,
                    c,
                    d,
                });
            }
        }
        out
    }

    /// Parses `"a|b|c|d"` with entries in the element text format.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Mobius> {
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != 4 {
            return Err(Error::ParseElement {
                input: text.to_string(),
                reason: "expected four '|'-separated entries".to_string(),
            });
        }
        let e = parts
            .iter()
            .map(|s| ctx.parse_elem(s))
            .collect::<Result<Vec<_>>>()?;
        Mobius::new(ctx, e[0], e[1], e[2], e[3])
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}|{}", self.a, self.b, self.c, self.d)
    }
}

/// Whether `m` maps μ_{Q+1} onto itself, by enumerating the image.
pub fn bijects_mu(ctx: &FieldCtx, m: &Mobius) -> bool {
    let mut seen = HashSet::with_capacity(ctx.unit_circle().len());
    ctx.unit_circle()
        .iter()
        .all(|&alpha| match m.apply(ctx, ProjPoint::Finite(alpha)) {
            ProjPoint::Finite(v) => ctx.is_in_unit_circle(v) && seen.insert(v),
            ProjPoint::Infinity => false,
        })
}

/// Coefficient criterion for `m` to biject μ_{Q+1}: with `m = (αx − δ)/(γx − β)`,
/// `x^{Q+1} − 1` divides the numerator of `m(x)^{Q+1} − 1` iff
/// `α^Q·δ = γ^Q·β` and `α^{Q+1} + δ^{Q+1} = γ^{Q+1} + β^{Q+1}`.
///
/// Maps whose pole lies in μ_{Q+1} cannot biject it and return false.
pub fn divisibility_test(ctx: &FieldCtx, m: &Mobius) -> bool {
    let [a, b, c, d] = m.coefficients();
    let (alpha, delta, gamma, beta) = (a, ctx.neg(b), c, ctx.neg(d));
    if let ProjPoint::Finite(pole) = m.pole(ctx) {
        if ctx.is_in_unit_circle(pole) {
            return false;
        }
    }
    let q = ctx.sub_order();
    let lhs1 = ctx.mul(ctx.pow(alpha, q), delta);
    let rhs1 = ctx.mul(ctx.pow(gamma, q), beta);
    let lhs2 = ctx.add(ctx.pow(alpha, q + 1), ctx.pow(delta, q + 1));
    let rhs2 = ctx.add(ctx.pow(gamma, q + 1), ctx.pow(beta, q + 1));
    lhs1 == rhs1 && lhs2 == rhs2
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MuBijectorClass {
    /// `β/x`, `β ∈ μ_{Q+1}`.
    Inversion {
        beta: FieldElem,
    },
    /// `(x − γ^Q·β)/(γ·x − β)`, `β ∈ μ_{Q+1}`, `γ^{Q+1} ≠ 1` (γ = 0 allowed).
    TwoParam {
        beta: FieldElem,
        gamma: FieldElem,
    },
    NotABijector,
}

impl MuBijectorClass {
    pub fn tag(&self) -> &'static str {
        match self {
            MuBijectorClass::Inversion { .. } => "TypeInversion",
            MuBijectorClass::TwoParam { .. } => "TypeTwoParam",
            MuBijectorClass::NotABijector => "NotABijector",
        }
    }

    pub fn is_bijector(&self) -> bool {
        !matches!(self, MuBijectorClass::NotABijector)
    }
}

/// Matches the normalized coefficients against the two canonical families.
/// Normalized, `β/x` has `a = 0` and the second family has `a = 1`, so the
/// families cannot overlap.
pub fn classify_mu_bijector(ctx: &FieldCtx, m: &Mobius) -> MuBijectorClass {
    let [a, b, c, d] = m.coefficients();
    if a.is_zero() && d.is_zero() {
        // (0·x + 1)/(c·x + 0) = (1/c)/x
        let beta = ctx.inv(c).expect("nonzero by determinant");
        if ctx.is_in_unit_circle(beta) {
            return MuBijectorClass::Inversion { beta };
        }
    } else if a == ctx.one() {
        let gamma = c;
        let beta = ctx.neg(d);
        let expected_b = ctx.neg(ctx.mul(ctx.frobenius(gamma), beta));
        if ctx.is_in_unit_circle(beta) && !ctx.is_in_unit_circle(gamma) && b == expected_b {
            return MuBijectorClass::TwoParam { beta, gamma };
        }
    }
    MuBijectorClass::NotABijector
}

/// Whether `m` maps μ_{Q+1} bijectively onto F_Q ∪ {∞}, by enumeration.
pub fn maps_mu_to_line(ctx: &FieldCtx, m: &Mobius) -> bool {
    let mut seen = HashSet::with_capacity(ctx.unit_circle().len());
    ctx.unit_circle().iter().all(|&alpha| {
        let image = m.apply(ctx, ProjPoint::Finite(alpha));
        let on_line = match image {
            ProjPoint::Finite(v) => ctx.is_in_subfield(v),
            ProjPoint::Infinity => true,
        };
        on_line && seen.insert(image)
    })
}

/// Recovers `(β, δ)` when `m` equals `(δx − βδ^Q)/(x − β)` up to scalar with
/// `β ∈ μ_{Q+1}` and `δ ∉ F_Q`.
pub fn line_form_params(ctx: &FieldCtx, m: &Mobius) -> Option<(FieldElem, FieldElem)> {
    let [a, b, c, d] = m.coefficients();
    // normalized by δ: (1, −βδ^Q/δ, 1/δ, −β/δ)
    if a != ctx.one() || c.is_zero() {
        return None;
    }
    let delta = ctx.inv(c).ok()?;
    let beta = ctx.neg(ctx.mul(d, delta));
    let expected_b = ctx.neg(ctx.mul(beta, ctx.mul(ctx.frobenius(delta), c)));
    let ok = ctx.is_in_unit_circle(beta) && !ctx.is_in_subfield(delta) && b == expected_b;
    ok.then_some((beta, delta))
}

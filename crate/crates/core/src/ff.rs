//! Exact arithmetic in the tower F_p ⊂ F_Q ⊂ F_{Q²}.
//!
//! F_Q is realised as F_p[t]/(modulus_mid) and F_{Q²} as F_Q[y]/(modulus_top).
//! An element of F_{Q²} is stored as its 2m coordinates over F_p: the m
//! coordinates of the F_Q part, then the m coordinates of the y part, each
//! block low degree first.
//!
//! Elements are enumerated by their *index*, the base-p integer whose digits
//! are the coordinates with `c0` least significant. Index order is used for
//! generator selection, sampling and witness reporting. The subfield F_Q is
//! exactly the set of elements with index < Q.

use std::fmt;

use crate::arith::{prime_factors, prime_power};
use crate::error::{Error, Result};

/// Largest supported subfield order Q (so q = Q² ≤ 2²⁰).
pub const MAX_SUB_ORDER: u64 = 1024;

const MAX_M: usize = 10;
const MAX_COORDS: usize = 2 * MAX_M;

/// Coordinates of an F_Q element over F_p.
type Sub = [u16; MAX_M];

/// An element of F_{Q²}, bound to the context that created it.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coords: [u16; MAX_COORDS],
    len: u8,
    ctx: u32,
}

impl FieldElem {
    /// Coordinates over F_p in the tower basis, low degree first.
    pub fn coords(&self) -> &[u16] {
        &self.coords[..self.len as usize]
    }

    pub fn ctx_id(&self) -> u32 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

/// F_Q = F_p[t]/(modulus), arithmetic on coordinate arrays.
#[derive(Debug, Clone)]
struct SubField {
    p: u32,
    m: usize,
    /// Monic, `m + 1` coefficients, low degree first.
    modulus: Vec<u32>,
}

impl SubField {
    fn zero(&self) -> Sub {
        [0; MAX_M]
    }

    fn one(&self) -> Sub {
        let mut s = [0; MAX_M];
        s[0] = 1;
        s
    }

    fn is_zero(&self, a: &Sub) -> bool {
        a[..self.m].iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Sub, b: &Sub) -> Sub {
        let p = self.p;
        let mut out = [0; MAX_M];
        for i in 0..self.m {
            out[i] = ((a[i] as u32 + b[i] as u32) % p) as u16;
        }
        out
    }

    fn sub(&self, a: &Sub, b: &Sub) -> Sub {
        let p = self.p;
        let mut out = [0; MAX_M];
        for i in 0..self.m {
            out[i] = ((a[i] as u32 + p - b[i] as u32) % p) as u16;
        }
        out
    }

    fn mul(&self, a: &Sub, b: &Sub) -> Sub {
        let m = self.m;
        let p = self.p as u64;
        if m == 1 {
            let mut out = [0; MAX_M];
            out[0] = ((a[0] as u64 * b[0] as u64) % p) as u16;
            return out;
        }
        let mut t = [0u64; 2 * MAX_M];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                t[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        for deg in (m..2 * m - 1).rev() {
            let c = t[deg] % p;
            t[deg] = 0;
            if c == 0 {
                continue;
            }
            let shift = deg - m;
            for j in 0..m {
                t[shift + j] += (p - c) * self.modulus[j] as u64;
            }
        }
        let mut out = [0; MAX_M];
        for i in 0..m {
            out[i] = (t[i] % p) as u16;
        }
        out
    }

    fn index(&self, a: &Sub) -> u64 {
        a[..self.m]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    fn from_index(&self, mut index: u64) -> Sub {
        let mut out = [0; MAX_M];
        for slot in out.iter_mut().take(self.m) {
            *slot = (index % self.p as u64) as u16;
            index /= self.p as u64;
        }
        out
    }

    fn order(&self) -> u64 {
        (self.p as u64).pow(self.m as u32)
    }

    /// True iff `y² + c1·y + c0` has no root in F_Q.
    fn quadratic_is_irreducible(&self, c0: &Sub, c1: &Sub) -> bool {
        (0..self.order()).all(|i| {
            let z = self.from_index(i);
            let v = self.add(&self.add(&self.mul(&z, &z), &self.mul(c1, &z)), c0);
            !self.is_zero(&v)
        })
    }
}

/// Remainder of `f` modulo the monic polynomial `g` over F_p (low degree first).
fn fp_poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    while r.len() > dg {
        let lead = r.pop().unwrap() % p;
        if lead != 0 {
            let shift = r.len() - dg;
            for j in 0..dg {
                r[shift + j] = (r[shift + j] + (p - lead) * g[j] as u64) % p;
            }
        }
    }
    r.into_iter().map(|c| (c % p) as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn fp_poly_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for dg in 1..=deg / 2 {
        let count = (p as u64).pow(dg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(dg + 1);
            let mut r = idx;
            for _ in 0..dg {
                g.push((r % p as u64) as u32);
                r /= p as u64;
            }
            g.push(1);
            if fp_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `m` over F_p, lower coefficients
/// compared lexicographically with `c0` first.
fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let total = (p as u64).pow(m as u32);
    for idx in 0..total {
        let mut f = vec![0u32; m + 1];
        let mut r = idx;
        for slot in f[..m].iter_mut().rev() {
            *slot = (r % p as u64) as u32;
            r /= p as u64;
        }
        f[m] = 1;
        if fp_poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Immutable description of the tower F_p ⊂ F_Q ⊂ F_{Q²}.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    id: u32,
    sub: SubField,
    sub_order: u64,
    order: u64,
    /// `[c0, c1]` of `y² + c1·y + c0`.
    modulus_top: [Sub; 2],
    /// `y^Q` written as `u0 + u1·y`.
    frob_y: (Sub, Sub),
    generator: FieldElem,
    mu: Vec<FieldElem>,
}

impl FieldCtx {
    /// Builds the tower for subfield order `sub_order` = Q with the
    /// lexicographically smallest moduli.
    pub fn new(sub_order: u64) -> Result<Self> {
        let (p, m) = Self::check_order(sub_order)?;
        let sub = SubField {
            p,
            m,
            modulus: smallest_irreducible(p, m),
        };
        let top = Self::smallest_top(&sub);
        Ok(Self::assemble(sub, top))
    }

    /// Builds the tower from explicit moduli. `mid` is monic of degree m over
    /// F_p; `top` holds the F_Q coordinates of `c0` and `c1` in `y² + c1·y + c0`.
    pub fn with_moduli(sub_order: u64, mid: &[u32], top: [&[u32]; 2]) -> Result<Self> {
        let (p, m) = Self::check_order(sub_order)?;
        let describe = |what: &str| Error::ReducibleModulus(what.to_string());
        if mid.len() != m + 1 || mid[m] != 1 || mid.iter().any(|&c| c >= p) {
            return Err(describe(
                "modulus_mid must be monic of degree m with entries < p",
            ));
        }
        if !fp_poly_is_irreducible(mid, p) {
            return Err(describe("modulus_mid"));
        }
        let sub = SubField {
            p,
            m,
            modulus: mid.to_vec(),
        };
        let mut coeffs = [[0u16; MAX_M]; 2];
        for (dst, src) in coeffs.iter_mut().zip(top) {
            if src.len() != m || src.iter().any(|&c| c >= p) {
                return Err(describe("modulus_top coefficients must have m entries < p"));
            }
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = s as u16;
            }
        }
        if !sub.quadratic_is_irreducible(&coeffs[0], &coeffs[1]) {
            return Err(describe("modulus_top"));
        }
        Ok(Self::assemble(sub, coeffs))
    }

    fn check_order(sub_order: u64) -> Result<(u32, usize)> {
        if sub_order > MAX_SUB_ORDER {
            return Err(Error::TooLarge(sub_order));
        }
        let (p, m) = prime_power(sub_order).ok_or(Error::NotAPrimePower(sub_order))?;
        Ok((p as u32, m as usize))
    }

    fn smallest_top(sub: &SubField) -> [Sub; 2] {
        let order = sub.order();
        for i0 in 0..order {
            let c0 = sub.from_index(i0);
            for i1 in 0..order {
                let c1 = sub.from_index(i1);
                if sub.quadratic_is_irreducible(&c0, &c1) {
                    return [c0, c1];
                }
            }
        }
        unreachable!("irreducible quadratics exist over every finite field")
    }

    fn assemble(sub: SubField, modulus_top: [Sub; 2]) -> Self {
        let sub_order = sub.order();
        let order = sub_order * sub_order;
        let id = fingerprint(&sub, &modulus_top);
        let mut ctx = FieldCtx {
            id,
            sub,
            sub_order,
            order,
            modulus_top,
            frob_y: ([0; MAX_M], [0; MAX_M]),
            generator: FieldElem {
                coords: [0; MAX_COORDS],
                len: 0,
                ctx: id,
            },
            mu: Vec::new(),
        };

        let y = ctx.join(ctx.sub.zero(), ctx.sub.one());
        let y_q = ctx.pow(y, sub_order);
        ctx.frob_y = ctx.split(y_q);

        let group = order - 1;
        let cofactors: Vec<u64> = prime_factors(group)
            .into_iter()
            .map(|r| group / r)
            .collect();
        let one = ctx.one();
        ctx.generator = (1..order)
            .map(|i| ctx.element(i))
            .find(|&a| cofactors.iter().all(|&c| ctx.pow(a, c) != one))
            .expect("F_q^* is cyclic");

        let w = ctx.pow(ctx.generator, sub_order - 1);
        let mut cur = one;
        ctx.mu = (0..=sub_order)
            .map(|_| {
                let v = cur;
                cur = ctx.mul(cur, w);
                v
            })
            .collect();
        ctx
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    /// Characteristic p.
    pub fn p(&self) -> u32 {
        self.sub.p
    }

    /// Degree m of F_Q over F_p.
    pub fn m(&self) -> usize {
        self.sub.m
    }

    /// Q = p^m.
    pub fn sub_order(&self) -> u64 {
        self.sub_order
    }

    /// q = Q², the order of the big field.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic coefficients of the F_Q modulus over F_p, low degree first.
    pub fn modulus_mid(&self) -> &[u32] {
        &self.sub.modulus
    }

    /// Coefficients `[c0, c1, 1]` of the F_{Q²} modulus over F_Q, each as its
    /// m coordinates over F_p.
    pub fn modulus_top(&self) -> [Vec<u32>; 3] {
        let m = self.sub.m;
        let conv = |s: &Sub| s[..m].iter().map(|&c| c as u32).collect::<Vec<_>>();
        [
            conv(&self.modulus_top[0]),
            conv(&self.modulus_top[1]),
            conv(&self.sub.one()),
        ]
    }

    /// Fixed multiplicative generator of F_q^*: the smallest-index element of order q − 1.
    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    /// μ_{Q+1} listed as `(g^{Q−1})^i` for `i = 0..=Q`.
    pub fn unit_circle(&self) -> &[FieldElem] {
        &self.mu
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coords: [0; MAX_COORDS],
            len: (2 * self.sub.m) as u8,
            ctx: self.id,
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Image of `n` under the canonical map ℤ → F_{Q²}.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let mut out = self.zero();
        out.coords[0] = n.rem_euclid(self.sub.p as i64) as u16;
        out
    }

    /// The element with the given enumeration index, `index < q`.
    pub fn element(&self, index: u64) -> FieldElem {
        assert!(index < self.order, "element index {index} out of range");
        let lo = self.sub.from_index(index % self.sub_order);
        let hi = self.sub.from_index(index / self.sub_order);
        self.join(lo, hi)
    }

    /// Enumeration index of `a`.
    pub fn index_of(&self, a: FieldElem) -> u64 {
        self.expect(a);
        let (lo, hi) = self.split(a);
        self.sub.index(&hi) * self.sub_order + self.sub.index(&lo)
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    /// The Q elements of F_Q, in index order.
    pub fn subfield_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.sub_order).map(move |i| self.element(i))
    }

    /// Builds an element from its coordinates; each must lie in `[0, p)`.
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        let len = 2 * self.sub.m;
        if coords.len() != len {
            return Err(Error::ParseElement {
                input: format!("{coords:?}"),
                reason: format!("expected {len} coordinates"),
            });
        }
        let mut out = self.zero();
        for (i, &c) in coords.iter().enumerate() {
            if c >= self.sub.p {
                return Err(Error::ParseElement {
                    input: format!("{coords:?}"),
                    reason: format!("coordinate {c} not below p = {}", self.sub.p),
                });
            }
            out.coords[i] = c as u16;
        }
        Ok(out)
    }

    /// Parses `"0"`, `"g^k"` or `"c0,c1,...,c_{2m-1}"`.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem> {
        let s = text.trim();
        let bad = |reason: String| Error::ParseElement {
            input: text.to_string(),
            reason,
        };
        if s == "0" {
            return Ok(self.zero());
        }
        if let Some(k) = s.strip_prefix("g^") {
            let k: u64 = k.trim().parse().map_err(|e| bad(format!("{e}")))?;
            return Ok(self.pow(self.generator, k));
        }
        let coords = s
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|e| bad(format!("{e}"))))
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(&coords).map_err(|e| match e {
            Error::ParseElement { reason, .. } => bad(reason),
            other => other,
        })
    }

    /// Errors unless `a` was created by this context.
    pub fn check(&self, a: FieldElem) -> Result<()> {
        if a.ctx == self.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    #[track_caller]
    fn expect(&self, a: FieldElem) {
        assert_eq!(a.ctx, self.id, "element from a different field context");
    }

    fn split(&self, a: FieldElem) -> (Sub, Sub) {
        let m = self.sub.m;
        let mut lo = [0; MAX_M];
        let mut hi = [0; MAX_M];
        lo[..m].copy_from_slice(&a.coords[..m]);
        hi[..m].copy_from_slice(&a.coords[m..2 * m]);
        (lo, hi)
    }

    fn join(&self, lo: Sub, hi: Sub) -> FieldElem {
        let m = self.sub.m;
        let mut out = self.zero();
        out.coords[..m].copy_from_slice(&lo[..m]);
        out.coords[m..2 * m].copy_from_slice(&hi[..m]);
        out
    }

    // The plain operations panic on mixed contexts; the `try_` forms return
    // `ContextMismatch` instead.

    #[track_caller]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.expect(a);
        self.expect(b);
        let p = self.sub.p;
        let mut out = a;
        for i in 0..2 * self.sub.m {
            out.coords[i] = ((a.coords[i] as u32 + b.coords[i] as u32) % p) as u16;
        }
        out
    }

    #[track_caller]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[track_caller]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.expect(a);
        let p = self.sub.p;
        let mut out = a;
        for i in 0..2 * self.sub.m {
            out.coords[i] = ((p - a.coords[i] as u32) % p) as u16;
        }
        out
    }

    #[track_caller]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.expect(a);
        self.expect(b);
        let s = &self.sub;
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        if s.is_zero(&a1) && s.is_zero(&b1) {
            return self.join(s.mul(&a0, &b0), s.zero());
        }
        let t0 = s.mul(&a0, &b0);
        let t1 = s.add(&s.mul(&a0, &b1), &s.mul(&a1, &b0));
        let t2 = s.mul(&a1, &b1);
        // y² = −c1·y − c0
        let r0 = s.sub(&t0, &s.mul(&self.modulus_top[0], &t2));
        let r1 = s.sub(&t1, &s.mul(&self.modulus_top[1], &t2));
        self.join(r0, r1)
    }

    /// Square-and-multiply; `pow(a, 0) = 1` for every `a`, including 0.
    #[track_caller]
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        self.expect(a);
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    #[track_caller]
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        self.expect(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    #[track_caller]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn try_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub(a, b))
    }

    pub fn try_neg(&self, a: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.neg(a))
    }

    pub fn try_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.inv(a)
    }

    pub fn try_pow(&self, a: FieldElem, e: u64) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.pow(a, e))
    }

    /// `a^Q`, computed as `a0 + a1·y^Q` with `y^Q` precomputed.
    #[track_caller]
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.expect(a);
        let s = &self.sub;
        let (a0, a1) = self.split(a);
        let (u0, u1) = &self.frob_y;
        self.join(s.add(&a0, &s.mul(&a1, u0)), s.mul(&a1, u1))
    }

    /// `a^{Q+1}`, which lies in F_Q.
    #[track_caller]
    pub fn norm(&self, a: FieldElem) -> FieldElem {
        self.mul(a, self.frobenius(a))
    }

    #[track_caller]
    pub fn is_in_subfield(&self, a: FieldElem) -> bool {
        self.frobenius(a) == a
    }

    /// `a ∈ μ_{Q+1}`.
    #[track_caller]
    pub fn is_in_unit_circle(&self, a: FieldElem) -> bool {
        self.norm(a) == self.one()
    }
}

fn fingerprint(sub: &SubField, top: &[Sub; 2]) -> u32 {
    const OFFSET: u32 = 0x811c_9dc5;
    const PRIME: u32 = 0x0100_0193;
    let mut h = OFFSET;
    let mut feed = |v: u32| {
        for b in v.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(sub.p);
    feed(sub.m as u32);
    for &c in &sub.modulus {
        feed(c);
    }
    for c in top {
        for &v in &c[..sub.m] {
            feed(v as u32);
        }
    }
    h
}

//! Permutation-polynomial families of the form `x^r·h(x^{Q−1})` over F_{Q²},
//! their predicted permutation conditions, and the pointwise identities on
//! μ_{Q+1} that explain them.
//!
//! | variant    | polynomial                                                          |
//! |------------|---------------------------------------------------------------------|
//! | `ThmB`     | `x^{n+k(Q+1)}·((γx^{Q−1} − β)^n − γ(x^{Q−1} − γ^Qβ)^n)`               |
//! | `ThmA`     | `x^{n+k(Q+1)}·((δx^{Q−1} − βδ^Q)^n − δ(x^{Q−1} − β)^n)`               |
//! | `CorMain`  | `x^{k(Q+1)+3} + 3x^{k(Q+1)+Q+2} − x^{k(Q+1)+3Q}`                      |
//! | `MainCor1` | `x^{2Q−1} + 3x^Q − x^{Q²−Q+1}`                                        |
//! | `MainCor2` | `x^{Q+4} + 3x^{2Q+3} − x^{4Q+1}`                                      |
//! | `MainCor3` | `x^3 + 3x^{Q+2} − x^{3Q}`                                             |
//! | `GenThm`   | `x^r·h(x^{Q−1})` with `a_{d−i} = (β·a_i)^Q`                          |
//! | `GenCor`   | `x^{r+d(Q−1)} + β^{−1}·x^r`                                           |

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_signed};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::mobius::{Mobius, ProjPoint};
use crate::permcheck::{is_permutation, Witness};
use crate::poly::{parse_pairs, DensePoly, Evaluate, TermSum};

/// Largest Rédei exponent `n` accepted by the binomial expansions.
pub const MAX_N: i64 = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    ThmB,
    ThmA,
    CorMain,
    MainCor1,
    MainCor2,
    MainCor3,
    GenThm,
    GenCor,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::ThmB,
        Variant::ThmA,
        Variant::CorMain,
        Variant::MainCor1,
        Variant::MainCor2,
        Variant::MainCor3,
        Variant::GenThm,
        Variant::GenCor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::ThmB => "thmb",
            Variant::ThmA => "thma",
            Variant::CorMain => "cormain",
            Variant::MainCor1 => "maincor1",
            Variant::MainCor2 => "maincor2",
            Variant::MainCor3 => "maincor3",
            Variant::GenThm => "genthm",
            Variant::GenCor => "gencor",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == lower)
            .ok_or_else(|| Error::SpecViolation(format!("unknown family {s:?}")))
    }
}

/// A field element named without a context: `"0"`, `"g^k"`, coordinates
/// `"c0,c1,..."`, or `"#i"`, the i-th entry of the enumeration that fits the
/// parameter's role (μ_{Q+1} for β, valid γ or δ candidates, all of F_q otherwise).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ElemSpec {
    Zero,
    GenPow(u64),
    Coords(Vec<u32>),
    Index(u64),
}

impl ElemSpec {
    pub fn from_elem(e: FieldElem) -> Self {
        ElemSpec::Coords(e.coords().iter().map(|&c| c as u32).collect())
    }

    fn resolve(&self, ctx: &FieldCtx, role: Role) -> Result<FieldElem> {
        match self {
            ElemSpec::Zero => Ok(ctx.zero()),
            ElemSpec::GenPow(k) => Ok(ctx.pow(ctx.generator(), *k)),
            ElemSpec::Coords(c) => ctx.from_coords(c),
            ElemSpec::Index(i) => {
                let missing =
                    || Error::SpecViolation(format!("{} index #{i} out of range", role.name()));
                match role {
                    Role::Beta => ctx
                        .unit_circle()
                        .get(*i as usize)
                        .copied()
                        .ok_or_else(missing),
                    Role::Gamma => gamma_candidates(ctx).nth(*i as usize).ok_or_else(missing),
                    Role::Delta => delta_candidates(ctx).nth(*i as usize).ok_or_else(missing),
                    Role::Coeff => (*i < ctx.order())
                        .then(|| ctx.element(*i))
                        .ok_or_else(missing),
                }
            }
        }
    }
}

impl fmt::Display for ElemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemSpec::Zero => f.write_str("0"),
            ElemSpec::GenPow(k) => write!(f, "g^{k}"),
            ElemSpec::Index(i) => write!(f, "#{i}"),
            ElemSpec::Coords(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for ElemSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = |reason: String| Error::ParseElement {
            input: text.to_string(),
            reason,
        };
        if s == "0" {
            Ok(ElemSpec::Zero)
        } else if let Some(k) = s.strip_prefix("g^") {
            k.trim()
                .parse()
                .map(ElemSpec::GenPow)
                .map_err(|e| bad(format!("{e}")))
        } else if let Some(i) = s.strip_prefix('#') {
            i.trim()
                .parse()
                .map(ElemSpec::Index)
                .map_err(|e| bad(format!("{e}")))
        } else {
            s.split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|e| bad(format!("{e}"))))
                .collect::<Result<Vec<_>>>()
                .map(ElemSpec::Coords)
        }
    }
}

impl TryFrom<String> for ElemSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ElemSpec> for String {
    fn from(e: ElemSpec) -> String {
        e.to_string()
    }
}

/// A polynomial named without a context, in the `"e:c;e:c"` text format.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PolySpec(pub Vec<(u64, ElemSpec)>);

impl PolySpec {
    pub fn from_dense(h: &DensePoly) -> Self {
        PolySpec(
            h.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| (i as u64, ElemSpec::from_elem(c)))
                .collect(),
        )
    }

    pub fn resolve(&self, ctx: &FieldCtx) -> Result<DensePoly> {
        let terms = self
            .0
            .iter()
            .map(|(e, c)| Ok((*e, c.resolve(ctx, Role::Coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        TermSum::from_terms(ctx, terms)?.to_dense(ctx)
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(e, c)| format!("{e}:{c}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for PolySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pairs(s)?
            .into_iter()
            .map(|(e, c)| Ok((e, c.parse()?)))
            .collect::<Result<Vec<_>>>()
            .map(PolySpec)
    }
}

impl TryFrom<String> for PolySpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PolySpec> for String {
    fn from(p: PolySpec) -> String {
        p.to_string()
    }
}

#[derive(Clone, Copy)]
enum Role {
    Beta,
    Gamma,
    Delta,
    Coeff,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Beta => "beta",
            Role::Gamma => "gamma",
            Role::Delta => "delta",
            Role::Coeff => "coefficient",
        }
    }
}

/// Parameters naming one member of one family.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub variant: Variant,
    #[serde(rename = "Q")]
    pub sub_order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ElemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<ElemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<ElemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<PolySpec>,
}

impl FamilySpec {
    pub fn new(variant: Variant, sub_order: u64) -> Self {
        FamilySpec {
            variant,
            sub_order,
            n: None,
            k: None,
            beta: None,
            gamma: None,
            delta: None,
            r: None,
            d: None,
            h: None,
        }
    }

    pub fn with_n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_r(mut self, r: i64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_d(mut self, d: i64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_beta(mut self, e: ElemSpec) -> Self {
        self.beta = Some(e);
        self
    }

    pub fn with_gamma(mut self, e: ElemSpec) -> Self {
        self.gamma = Some(e);
        self
    }

    pub fn with_delta(mut self, e: ElemSpec) -> Self {
        self.delta = Some(e);
        self
    }

    pub fn with_h(mut self, h: PolySpec) -> Self {
        self.h = Some(h);
        self
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Q={}", self.variant, self.sub_order)?;
        let ints = [("n", self.n), ("k", self.k), ("r", self.r), ("d", self.d)];
        for (name, v) in ints {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        let elems = [
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
        ];
        for (name, v) in elems {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        if let Some(h) = &self.h {
            write!(f, " h={h}")?;
        }
        Ok(())
    }
}

/// Elements γ with `γ^{Q+1} ≠ 1`, in index order (0 comes first).
pub fn gamma_candidates(ctx: &FieldCtx) -> impl Iterator<Item = FieldElem> + '_ {
    ctx.elements().filter(move |&g| !ctx.is_in_unit_circle(g))
}

/// Elements δ ∉ F_Q, in index order.
pub fn delta_candidates(ctx: &FieldCtx) -> impl Iterator<Item = FieldElem> + '_ {
    ctx.elements().filter(move |&d| !ctx.is_in_subfield(d))
}

/// Validated, context-resolved parameters.
#[derive(Clone, Debug)]
struct Params {
    variant: Variant,
    n: u64,
    k: u64,
    r: u64,
    d: u64,
    beta: Option<FieldElem>,
    gamma: Option<FieldElem>,
    delta: Option<FieldElem>,
    h: Option<DensePoly>,
}

fn violation(msg: impl Into<String>) -> Error {
    Error::SpecViolation(msg.into())
}

fn resolve(spec: &FamilySpec, ctx: &FieldCtx) -> Result<Params> {
    use Variant::*;
    let q = ctx.sub_order();
    if spec.sub_order != q {
        return Err(violation(format!(
            "spec has Q = {} but the field context has Q = {q}",
            spec.sub_order
        )));
    }
    let v = spec.variant;
    let uses = |field: &str| -> bool {
        matches!(
            (v, field),
            (ThmB, "n" | "k" | "beta" | "gamma")
                | (ThmA, "n" | "k" | "beta" | "delta")
                | (CorMain, "k")
                | (GenThm, "r" | "d" | "beta" | "h")
                | (GenCor, "r" | "d" | "beta")
        )
    };
    let present = [
        ("n", spec.n.is_some()),
        ("k", spec.k.is_some()),
        ("beta", spec.beta.is_some()),
        ("gamma", spec.gamma.is_some()),
        ("delta", spec.delta.is_some()),
        ("r", spec.r.is_some()),
        ("d", spec.d.is_some()),
        ("h", spec.h.is_some()),
    ];
    for (field, is_set) in present {
        if is_set && !uses(field) {
            return Err(violation(format!("{v} does not take parameter {field}")));
        }
    }
    let required = |field: &str, value: Option<i64>| {
        value.ok_or_else(|| violation(format!("{v} requires {field}")))
    };

    let mut p = Params {
        variant: v,
        n: 0,
        k: 0,
        r: 0,
        d: 0,
        beta: None,
        gamma: None,
        delta: None,
        h: None,
    };

    if matches!(v, ThmB | ThmA) {
        let n = required("n", spec.n)?;
        if n <= 0 {
            return Err(violation("n must be positive"));
        }
        if n > MAX_N {
            return Err(violation(format!("n must be at most {MAX_N}")));
        }
        p.n = n as u64;
    }
    if matches!(v, ThmB | ThmA | CorMain) {
        let k = required("k", spec.k)?;
        if k < 0 {
            return Err(violation("k must be nonnegative"));
        }
        p.k = k as u64;
    }
    if matches!(v, GenThm | GenCor) {
        let r = required("r", spec.r)?;
        if r <= 0 {
            return Err(violation("r must be positive"));
        }
        p.r = r as u64;
    }
    if v == GenCor {
        let d = required("d", spec.d)?;
        if d <= 0 {
            return Err(violation("d must be positive"));
        }
        p.d = d as u64;
    }
    if matches!(v, MainCor1 | MainCor2 | MainCor3) && q % 3 == 0 {
        return Err(violation(format!("{v} requires 3 ∤ Q")));
    }

    if matches!(v, ThmB | ThmA | GenThm | GenCor) {
        let beta = spec
            .beta
            .as_ref()
            .ok_or_else(|| violation(format!("{v} requires beta")))?
            .resolve(ctx, Role::Beta)?;
        if !ctx.is_in_unit_circle(beta) {
            return Err(violation("beta^(Q+1) != 1"));
        }
        p.beta = Some(beta);
    }
    if v == ThmB {
        let gamma = spec
            .gamma
            .as_ref()
            .ok_or_else(|| violation("thmb requires gamma"))?
            .resolve(ctx, Role::Gamma)?;
        if ctx.is_in_unit_circle(gamma) {
            return Err(violation("gamma^(Q+1) = 1"));
        }
        p.gamma = Some(gamma);
    }
    if v == ThmA {
        let delta = spec
            .delta
            .as_ref()
            .ok_or_else(|| violation("thma requires delta"))?
            .resolve(ctx, Role::Delta)?;
        if ctx.is_in_subfield(delta) {
            return Err(violation("delta lies in F_Q"));
        }
        p.delta = Some(delta);
    }
    if v == GenThm {
        let h = spec
            .h
            .as_ref()
            .ok_or_else(|| violation("genthm requires h"))?
            .resolve(ctx)?;
        if h.coeff(ctx, 0).is_zero() {
            return Err(violation("h(0) = 0"));
        }
        let deg = h.degree().unwrap() as u64;
        if let Some(d) = spec.d {
            if d != deg as i64 {
                return Err(violation(format!("d = {d} but h has degree {deg}")));
            }
        }
        if !h_symmetry_check(ctx, &h, p.beta.unwrap()) {
            return Err(violation("h fails (x^d h(1/x))^Q = beta h(x^Q)"));
        }
        p.d = deg;
        p.h = Some(h);
    }

    // exponent sanity: r = n + k(Q+1) and the top exponents must fit
    let top = match v {
        ThmB | ThmA => {
            p.k.checked_mul(q + 1)
                .and_then(|x| x.checked_add(p.n))
                .and_then(|r| p.n.checked_mul(q - 1).and_then(|x| x.checked_add(r)))
        }
        CorMain => p.k.checked_mul(q + 1).and_then(|x| x.checked_add(3 * q)),
        GenThm | GenCor => p.d.checked_mul(q - 1).and_then(|x| x.checked_add(p.r)),
        _ => Some(0),
    };
    if top.map_or(true, |t| t > crate::poly::MAX_EXPONENT) {
        return Err(violation("exponents overflow"));
    }
    Ok(p)
}

/// `Σ_i C(n, i)·lead^i·constant^{n−i}·x^{i·step}`, i.e. `(lead·x^step + constant)^n`.
fn binomial_power(
    ctx: &FieldCtx,
    lead: FieldElem,
    constant: FieldElem,
    n: u64,
    step: u64,
) -> TermSum {
    let mut coeff: u128 = 1;
    let mut terms = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let c = ctx.from_int((coeff % ctx.p() as u128) as i64);
        let t = ctx.mul(c, ctx.mul(ctx.pow(lead, i), ctx.pow(constant, n - i)));
        terms.push((i * step, t));
        coeff = coeff * (n - i) as u128 / (i + 1) as u128;
    }
    TermSum::from_terms(ctx, terms).expect("exponents bounded by resolve")
}

fn ints(ctx: &FieldCtx, pairs: &[(u64, i64)]) -> TermSum {
    TermSum::from_terms(ctx, pairs.iter().map(|&(e, c)| (e, ctx.from_int(c))))
        .expect("exponents bounded by resolve")
}

/// The inner polynomial `h` with `f = x^r·h(x^{Q−1})`, written with
/// `x^step` in place of x.
fn inner(ctx: &FieldCtx, p: &Params, step: u64) -> TermSum {
    use Variant::*;
    let q = ctx.sub_order();
    let sub = |a: &TermSum, b: &TermSum| {
        a.add(ctx, &b.scale(ctx, ctx.from_int(-1)).unwrap())
            .unwrap()
    };
    match p.variant {
        ThmB => {
            let (beta, gamma) = (p.beta.unwrap(), p.gamma.unwrap());
            let first = binomial_power(ctx, gamma, ctx.neg(beta), p.n, step);
            let shift = ctx.neg(ctx.mul(ctx.frobenius(gamma), beta));
            let second = binomial_power(ctx, ctx.one(), shift, p.n, step)
                .scale(ctx, gamma)
                .unwrap();
            sub(&first, &second)
        }
        ThmA => {
            let (beta, delta) = (p.beta.unwrap(), p.delta.unwrap());
            let shift = ctx.neg(ctx.mul(beta, ctx.frobenius(delta)));
            let first = binomial_power(ctx, delta, shift, p.n, step);
            let second = binomial_power(ctx, ctx.one(), ctx.neg(beta), p.n, step)
                .scale(ctx, delta)
                .unwrap();
            sub(&first, &second)
        }
        CorMain | MainCor2 | MainCor3 => ints(ctx, &[(0, 1), (step, 3), (3 * step, -1)]),
        MainCor1 => ints(ctx, &[(0, 3), (step, 1), ((q - 1) * step, -1)]),
        GenThm => {
            p.h.as_ref()
                .unwrap()
                .to_term_sum(ctx)
                .unwrap()
                .substitute_monomial(step)
                .unwrap()
        }
        GenCor => {
            let binv = ctx.inv(p.beta.unwrap()).unwrap();
            TermSum::from_terms(ctx, [(p.d * step, ctx.one()), (0, binv)]).unwrap()
        }
    }
}

fn leading_exponent(q: u64, p: &Params) -> u64 {
    use Variant::*;
    match p.variant {
        ThmB | ThmA => p.n + p.k * (q + 1),
        CorMain => p.k * (q + 1) + 3,
        MainCor1 => q,
        MainCor2 => q + 4,
        MainCor3 => 3,
        GenThm | GenCor => p.r,
    }
}

/// The displayed polynomial of a corollary, written term by term.
fn corollary_literal(ctx: &FieldCtx, p: &Params) -> Option<TermSum> {
    use Variant::*;
    let q = ctx.sub_order();
    let base = p.k * (q + 1);
    let exps = match p.variant {
        CorMain => [base + 3, base + q + 2, base + 3 * q],
        MainCor1 => [2 * q - 1, q, q * q - q + 1],
        MainCor2 => [q + 4, 2 * q + 3, 4 * q + 1],
        MainCor3 => [3, q + 2, 3 * q],
        _ => return None,
    };
    Some(ints(ctx, &[(exps[0], 1), (exps[1], 3), (exps[2], -1)]))
}

fn predict(ctx: &FieldCtx, p: &Params) -> bool {
    use Variant::*;
    let q = ctx.sub_order();
    let (n, k) = (p.n, p.k);
    match p.variant {
        ThmB => gcd(n + 2 * k, q - 1) == 1 && gcd(n, q + 1) == 1,
        ThmA => gcd(n * (n + 2 * k), q - 1) == 1,
        CorMain => gcd(2 * k + 3, q - 1) == 1 && q % 3 != 0,
        MainCor1 => true,
        MainCor2 => q % 5 != 1,
        MainCor3 => q % 3 == 2,
        GenThm => {
            let h = p.h.as_ref().unwrap();
            gen_gcd_conditions(q, p.r, p.d)
                && ctx
                    .unit_circle()
                    .iter()
                    .all(|&a| !h.evaluate(ctx, a).is_zero())
        }
        GenCor => {
            let minus_beta = ctx.neg(p.beta.unwrap());
            let e = (q + 1) / gcd(q + 1, p.d);
            gen_gcd_conditions(q, p.r, p.d) && ctx.pow(minus_beta, e) != ctx.one()
        }
    }
}

fn gen_gcd_conditions(q: u64, r: u64, d: u64) -> bool {
    gcd(r, q - 1) == 1 && gcd_signed(r as i64 - d as i64, q + 1) == 1
}

/// The condition under which the family member is claimed to permute F_{Q²}.
pub fn predicted_condition(spec: &FamilySpec, ctx: &FieldCtx) -> Result<bool> {
    let p = resolve(spec, ctx)?;
    Ok(predict(ctx, &p))
}

/// One constructed family member.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    /// The input spec with every element written as coordinates.
    pub spec: FamilySpec,
    pub f: TermSum,
    /// Inner polynomial with `f = x^r·h_mu(x^{Q−1})`.
    pub h_mu: DensePoly,
    pub r: u64,
    pub predicted: bool,
    /// Conjugating map for the Rédei variants.
    pub ell: Option<Mobius>,
    /// Rédei exponent for the Rédei variants.
    pub n_exp: Option<u64>,
    /// `c` with `x^r·h(x)^{Q−1} = c·ℓ⁻¹(ℓ(x)^n)` on μ_{Q+1}.
    pub prop_const: Option<FieldElem>,
    gcd_assumption: bool,
}

pub fn instantiate(spec: &FamilySpec, ctx: &FieldCtx) -> Result<FamilyInstance> {
    let p = resolve(spec, ctx)?;
    let q = ctx.sub_order();
    let r = leading_exponent(q, &p);
    let f = match corollary_literal(ctx, &p) {
        Some(lit) => lit,
        None => inner(ctx, &p, q - 1).shift(ctx, r)?,
    };
    let h_mu = inner(ctx, &p, 1).to_dense(ctx)?;

    let (ell, prop_const) = match p.variant {
        Variant::ThmB => {
            let (beta, gamma) = (p.beta.unwrap(), p.gamma.unwrap());
            let c = ctx.inv(ctx.pow(beta, p.n + 1))?;
            (Some(Mobius::two_param(ctx, beta, gamma)?), Some(c))
        }
        Variant::ThmA => {
            let (beta, delta) = (p.beta.unwrap(), p.delta.unwrap());
            let c = ctx.neg(ctx.inv(ctx.pow(beta, p.n + 1))?);
            (Some(Mobius::line_form(ctx, beta, delta)?), Some(c))
        }
        _ => (None, None),
    };
    let n_exp = ell.map(|_| p.n);

    let mut canonical = spec.clone();
    canonical.beta = p.beta.map(ElemSpec::from_elem);
    canonical.gamma = p.gamma.map(ElemSpec::from_elem);
    canonical.delta = p.delta.map(ElemSpec::from_elem);
    canonical.h = p.h.as_ref().map(PolySpec::from_dense);

    Ok(FamilyInstance {
        spec: canonical,
        f,
        h_mu,
        r,
        predicted: predict(ctx, &p),
        ell,
        n_exp,
        prop_const,
        gcd_assumption: gcd(p.n + 2 * p.k, q - 1) == 1,
    })
}

/// Outcome of checking one family member against brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub spec: FamilySpec,
    pub predicted: bool,
    pub brute: bool,
    pub agree: bool,
    pub witness: Option<(FieldElem, FieldElem)>,
}

/// Predicted condition versus exhaustive evaluation. Disagreement is
/// reported in the verdict, not as an error.
pub fn verify(spec: &FamilySpec, ctx: &FieldCtx) -> Result<Verdict> {
    let inst = instantiate(spec, ctx)?;
    let report = is_permutation(ctx, &inst.f);
    let witness = match report.witness {
        Some(Witness::Collision(a, b)) => Some((a, b)),
        _ => None,
    };
    Ok(Verdict {
        spec: inst.spec,
        predicted: inst.predicted,
        brute: report.is_perm,
        agree: inst.predicted == report.is_perm,
        witness,
    })
}

/// Coefficient form of `(x^d·h(1/x))^Q = β·h(x^Q)`: `a_{d−i} = (β·a_i)^Q`.
pub fn h_symmetry_check(ctx: &FieldCtx, h: &DensePoly, beta: FieldElem) -> bool {
    let Some(d) = h.degree() else {
        return false;
    };
    (0..=d).all(|i| h.coeff(ctx, d - i) == ctx.frobenius(ctx.mul(beta, h.coeff(ctx, i))))
}

/// The same condition checked as a polynomial identity, raising the
/// reversed polynomial to the Q-th power by repeated multiplication.
pub fn h_symmetry_functional(ctx: &FieldCtx, h: &DensePoly, beta: FieldElem) -> Result<bool> {
    let Some(d) = h.degree() else {
        return Ok(false);
    };
    let reversed = TermSum::from_terms(
        ctx,
        h.coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| ((d - i) as u64, c)),
    )?;
    let lhs = reversed.pow(ctx, ctx.sub_order())?;
    let rhs = h
        .to_term_sum(ctx)?
        .substitute_monomial(ctx.sub_order())?
        .scale(ctx, beta)?;
    Ok(lhs == rhs)
}

/// `G = ℓ⁻¹ ∘ x^n ∘ ℓ` together with the constant `c` relating it to
/// `g(x) = x^r·h(x)^{Q−1}` on μ_{Q+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RedeiDecomposition {
    pub ell: Mobius,
    pub n: u64,
    pub c: FieldElem,
}

impl RedeiDecomposition {
    /// `G(α)`; infinite only if α leaves the domain where G is defined.
    pub fn apply(&self, ctx: &FieldCtx, alpha: FieldElem) -> ProjPoint {
        let inner = self
            .ell
            .apply(ctx, ProjPoint::Finite(alpha))
            .pow(ctx, self.n);
        self.ell.invert(ctx).apply(ctx, inner)
    }
}

pub fn redei_decomposition(inst: &FamilyInstance) -> Result<RedeiDecomposition> {
    let (Some(ell), Some(n), Some(c)) = (inst.ell, inst.n_exp, inst.prop_const) else {
        return Err(Error::PreconditionFailed(format!(
            "{} has no Rédei decomposition",
            inst.spec.variant
        )));
    };
    if !inst.gcd_assumption {
        return Err(Error::PreconditionFailed("gcd(n + 2k, Q − 1) ≠ 1".into()));
    }
    Ok(RedeiDecomposition { ell, n, c })
}

/// `g(α) = x^r·h(x)^{Q−1}` evaluated at α.
pub fn mu_map(ctx: &FieldCtx, inst: &FamilyInstance, alpha: FieldElem) -> FieldElem {
    let h = inst.h_mu.evaluate(ctx, alpha);
    ctx.mul(ctx.pow(alpha, inst.r), ctx.pow(h, ctx.sub_order() - 1))
}

/// Checks `g(α) = c·G(α)` at every α ∈ μ_{Q+1}.
pub fn redei_identity_holds(ctx: &FieldCtx, inst: &FamilyInstance) -> Result<bool> {
    let dec = redei_decomposition(inst)?;
    Ok(ctx
        .unit_circle()
        .iter()
        .all(|&alpha| match dec.apply(ctx, alpha) {
            ProjPoint::Finite(g) => mu_map(ctx, inst, alpha) == ctx.mul(dec.c, g),
            ProjPoint::Infinity => false,
        }))
}

/// True iff the inner polynomial has no root on μ_{Q+1}.
pub fn h_nonvanishing(ctx: &FieldCtx, inst: &FamilyInstance) -> bool {
    ctx.unit_circle()
        .iter()
        .all(|&a| !inst.h_mu.evaluate(ctx, a).is_zero())
}

/// Checks `x^r·h(x)^{Q−1} = α^{r−d}·β` at every α ∈ μ_{Q+1}.
pub fn genthm_mu_image(ctx: &FieldCtx, r: u64, h: &DensePoly, beta: FieldElem) -> Result<bool> {
    let Some(d) = h.degree() else {
        return Err(Error::PreconditionFailed("h is zero".into()));
    };
    if !h_symmetry_check(ctx, h, beta) {
        return Err(Error::PreconditionFailed(
            "h fails the symmetry condition".into(),
        ));
    }
    let q = ctx.sub_order();
    let mu = ctx.unit_circle();
    if mu.iter().any(|&a| h.evaluate(ctx, a).is_zero()) {
        return Err(Error::PreconditionFailed("h has a root in μ_{Q+1}".into()));
    }
    let shift = (r as i64 - d as i64).rem_euclid(q as i64 + 1) as u64;
    Ok(mu.iter().all(|&a| {
        let g = ctx.mul(ctx.pow(a, r), ctx.pow(h.evaluate(ctx, a), q - 1));
        g == ctx.mul(ctx.pow(a, shift), beta)
    }))
}

/// Remark-form `h` of degree `d`: random `a_i` for `i ≤ d/2` with `a_0 ≠ 0`,
/// `a_{d−i} = (β·a_i)^Q`; a middle coefficient is drawn until it is self-paired.
pub fn random_symmetric_h<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    rng: &mut R,
    d: usize,
    beta: FieldElem,
) -> DensePoly {
    let mut a = vec![ctx.zero(); d + 1];
    for i in 0..=d / 2 {
        let j = d - i;
        loop {
            let x = ctx.element(rng.gen_range(0..ctx.order()));
            if i == 0 && x.is_zero() {
                continue;
            }
            let mirror = ctx.frobenius(ctx.mul(beta, x));
            if i == j && mirror != x {
                continue;
            }
            a[i] = x;
            a[j] = mirror;
            break;
        }
    }
    DensePoly::from_coeffs(ctx, a).expect("coefficients from ctx")
}

/// Reduces `g(x^{Q²−2})` mod `x^{Q²} − x` for the `k = Q − 3` member of
/// `CorMain`, returning it with the trinomial `x^{2Q−1} + 3x^Q − x^{Q²−Q+1}`.
pub fn cor14_reduction(ctx: &FieldCtx) -> Result<(DensePoly, DensePoly)> {
    let q = ctx.sub_order();
    if q % 3 == 0 || q < 4 {
        return Err(Error::PreconditionFailed(format!(
            "need 3 ∤ Q and Q ≥ 4, got Q = {q}"
        )));
    }
    let spec = FamilySpec::new(Variant::CorMain, q).with_k(q as i64 - 3);
    let g = instantiate(&spec, ctx)?.f;
    let reduced = g.substitute_monomial(q * q - 2)?.reduce_mod_field(ctx)?;
    let target = ints(ctx, &[(2 * q - 1, 1), (q, 3), (q * q - q + 1, -1)]).reduce_mod_field(ctx)?;
    Ok((reduced, target))
}

pub fn cor14_reduction_identity(ctx: &FieldCtx) -> Result<bool> {
    let (reduced, target) = cor14_reduction(ctx)?;
    Ok(reduced == target)
}

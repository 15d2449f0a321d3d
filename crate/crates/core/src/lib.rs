//! Finite-field tower arithmetic and exhaustive checks for permutation
//! polynomials of the shape `x^r·h(x^{Q−1})` over F_{Q²}.
//!
//! - [`ff`]: the tower F_p ⊂ F_Q ⊂ F_{Q²}, Frobenius, μ_{Q+1}.
//! - [`poly`]: sparse ([`TermSum`]) and dense ([`DensePoly`]) polynomials.
//! - [`mobius`]: degree-one rational functions and their action on μ_{Q+1}.
//! - [`permcheck`]: brute-force permutation oracles and the μ_d reduction.
//! - [`families`]: the families, their predicted conditions and identities.

pub mod arith;
pub mod error;
pub mod families;
pub mod ff;
pub mod mobius;
pub mod permcheck;
pub mod poly;

pub use error::{Error, Result};
pub use families::{
    instantiate, predicted_condition, verify, ElemSpec, FamilyInstance, FamilySpec, PolySpec,
    Variant, Verdict,
};
pub use ff::{FieldCtx, FieldElem};
pub use mobius::{Mobius, MuBijectorClass, ProjPoint};
pub use permcheck::{is_permutation, PermReport, Witness};
pub use poly::{DensePoly, Evaluate, TermSum};

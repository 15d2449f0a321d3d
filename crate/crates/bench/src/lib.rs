//! Shared fixtures for the criterion benchmarks in `benches/`.

use ppverify_core::{ElemSpec, FamilySpec, FieldCtx, FieldElem, Variant};

/// Deterministic pseudo-random elements (SplitMix64 over the index space).
pub fn sample_elements(ctx: &FieldCtx, count: usize, seed: u64) -> Vec<FieldElem> {
    let mut state = seed;
    (0..count)
        .map(|_| {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            ctx.element((z ^ (z >> 31)) % ctx.order())
        })
        .collect()
}

/// Two-parameter family members over F_{Q²}: every β, γ = 0, n ≤ 6, k ≤ 4.
pub fn two_parameter_grid(q: u64) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for beta in 0..=q {
        for n in 1..=6 {
            for k in 0..=4 {
                specs.push(
                    FamilySpec::new(Variant::ThmB, q)
                        .with_n(n)
                        .with_k(k)
                        .with_beta(ElemSpec::Index(beta))
                        .with_gamma(ElemSpec::Zero),
                );
            }
        }
    }
    specs
}

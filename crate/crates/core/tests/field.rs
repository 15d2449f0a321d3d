use ppverify_core::arith::{gcd, prime_factors};
use ppverify_core::{Error, FieldCtx, FieldElem};
use proptest::prelude::*;

const SMALL: [u64; 6] = [2, 3, 4, 5, 7, 8];

fn all(ctx: &FieldCtx) -> Vec<FieldElem> {
    ctx.elements().collect()
}

#[test]
fn field_axioms_exhaustive_small() {
    for q in SMALL {
        let ctx = FieldCtx::new(q).unwrap();
        let els = all(&ctx);
        let (zero, one) = (ctx.zero(), ctx.one());
        for &a in &els {
            assert_eq!(ctx.add(a, zero), a);
            assert_eq!(ctx.mul(a, one), a);
            assert_eq!(ctx.add(a, ctx.neg(a)), zero);
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), one);
            }
            for &b in &els {
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(ctx.sub(ctx.add(a, b), b), a);
                if q <= 5 {
                    for &c in &els {
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                    }
                }
            }
        }
        assert_eq!(ctx.inv(zero), Err(Error::DivisionByZero));
    }
}

#[test]
fn generator_is_primitive() {
    for q in [
        2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 1024,
    ] {
        let ctx = FieldCtx::new(q).unwrap();
        let n = ctx.order() - 1;
        let g = ctx.generator();
        assert_eq!(ctx.pow(g, n), ctx.one());
        for r in prime_factors(n) {
            assert_ne!(ctx.pow(g, n / r), ctx.one(), "Q={q}");
        }
    }
}

#[test]
fn unit_circle_characterization() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17] {
        let ctx = FieldCtx::new(q).unwrap();
        let mu = ctx.unit_circle();
        assert_eq!(mu.len() as u64, q + 1);
        let mut seen = std::collections::HashSet::new();
        for &a in mu {
            assert!(seen.insert(a));
            assert_eq!(ctx.pow(a, q + 1), ctx.one());
        }
        let members = ctx.elements().filter(|&a| ctx.is_in_unit_circle(a)).count() as u64;
        assert_eq!(members, q + 1);
        for a in ctx.elements() {
            assert_eq!(ctx.is_in_unit_circle(a), ctx.norm(a) == ctx.one());
            assert_eq!(ctx.is_in_unit_circle(a), seen.contains(&a));
        }
    }
}

#[test]
fn subfield_is_fixed_by_frobenius() {
    for q in SMALL.into_iter().chain([9, 16, 27]) {
        let ctx = FieldCtx::new(q).unwrap();
        let fixed = ctx.elements().filter(|&a| ctx.frobenius(a) == a).count() as u64;
        assert_eq!(fixed, q);
        assert_eq!(ctx.subfield_elements().count() as u64, q);
        for a in ctx.subfield_elements() {
            assert!(ctx.is_in_subfield(a));
        }
        for a in ctx.elements() {
            assert_eq!(ctx.frobenius(a), ctx.pow(a, q));
            assert_eq!(ctx.frobenius(ctx.frobenius(a)), a);
            assert!(ctx.is_in_subfield(ctx.norm(a)));
        }
    }
}

#[test]
fn alternative_moduli_are_isomorphic() {
    // F_64 over F_8 = F_2[t]/(t³ + t + 1) instead of the default t³ + t² + 1
    let std8 = FieldCtx::new(8).unwrap();
    let bits = |c: u32| [c & 1, (c >> 1) & 1, (c >> 2) & 1];
    let alt8 = (0..64u32)
        .find_map(|i| FieldCtx::with_moduli(8, &[1, 1, 0, 1], [&bits(i % 8), &bits(i / 8)]).ok())
        .unwrap();
    assert_eq!(std8.modulus_mid(), &[1, 0, 1, 1]);
    assert_ne!(std8.id(), alt8.id());
    for ctx in [&std8, &alt8] {
        for e in 1..63u64 {
            let image: std::collections::HashSet<_> =
                ctx.elements().map(|a| ctx.pow(a, e)).collect();
            assert_eq!(image.len() == 64, gcd(e, 63) == 1);
        }
        assert_eq!(ctx.unit_circle().len(), 9);
    }
    // F_25 with y² − 3 versus the default
    let alt5 = FieldCtx::with_moduli(5, &[0, 1], [&[2], &[0]]).unwrap();
    assert_eq!(alt5.modulus_top()[0], vec![2]);
    assert!(
        FieldCtx::with_moduli(5, &[0, 1], [&[1], &[0]]).is_err(),
        "y² + 1 splits mod 5"
    );
}

#[test]
fn rejected_orders() {
    assert_eq!(FieldCtx::new(6).unwrap_err(), Error::NotAPrimePower(6));
    assert_eq!(FieldCtx::new(1).unwrap_err(), Error::NotAPrimePower(1));
    assert_eq!(FieldCtx::new(2048).unwrap_err(), Error::TooLarge(2048));
    assert!(FieldCtx::new(1024).is_ok());
}

fn big_ctx() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(vec![16u64, 27, 32, 121, 243, 256, 1021, 1024])
        .prop_map(|q| FieldCtx::new(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_random(ctx in big_ctx(), seeds in prop::array::uniform3(any::<u64>())) {
        let [a, b, c] = seeds.map(|s| ctx.element(s % ctx.order()));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b)), ctx.mul(ctx.frobenius(a), ctx.frobenius(b)));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b)), ctx.add(ctx.frobenius(a), ctx.frobenius(b)));
        prop_assert_eq!(ctx.frobenius(a), ctx.pow(a, ctx.sub_order()));
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            prop_assert_eq!(ctx.pow(a, ctx.order() - 1), ctx.one());
            prop_assert!(ctx.is_in_unit_circle(ctx.div(ctx.frobenius(a), a).unwrap()));
        }
    }

    #[test]
    fn text_round_trip(ctx in big_ctx(), s in any::<u64>()) {
        let a = ctx.element(s % ctx.order());
        prop_assert_eq!(ctx.parse_elem(&a.to_string()).unwrap(), a);
        prop_assert_eq!(ctx.element(ctx.index_of(a)), a);
        let k = s % (ctx.order() - 1);
        prop_assert_eq!(ctx.parse_elem(&format!("g^{k}")).unwrap(), ctx.pow(ctx.generator(), k));
    }

    #[test]
    fn from_int_is_a_ring_map(q in prop::sample::select(vec![2u64, 3, 4, 9, 25, 49]), a in -1000i64..1000, b in -1000i64..1000) {
        let ctx = FieldCtx::new(q).unwrap();
        prop_assert_eq!(ctx.from_int(a + b), ctx.add(ctx.from_int(a), ctx.from_int(b)));
        prop_assert_eq!(ctx.from_int(a * b), ctx.mul(ctx.from_int(a), ctx.from_int(b)));
        prop_assert!(ctx.is_in_subfield(ctx.from_int(a)));
    }
}

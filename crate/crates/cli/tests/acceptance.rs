//! Acceptance suite. Every check is exact: zero disagreements are tolerated.
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ppverify_cli::commands::classify_mobius;
use ppverify_cli::{render, run_sweep, Format, RunRecord, Selection, SweepConfig};
use ppverify_core::arith::gcd;
use ppverify_core::families::{
    cor14_reduction_identity, genthm_mu_image, h_nonvanishing, random_symmetric_h,
    redei_identity_holds,
};
use ppverify_core::permcheck::{tz_criterion, tz_polynomial};
use ppverify_core::{
    instantiate, is_permutation, verify, DensePoly, ElemSpec, Evaluate, FamilySpec, FieldCtx,
    PolySpec, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Shared {
    two_param: Vec<RunRecord>,
    two_param_csv: Vec<u8>,
    line: Vec<RunRecord>,
}

fn family_sweep(variant: Variant, workers: usize) -> Result<(Vec<RunRecord>, Vec<u8>), String> {
    let mut c = SweepConfig::new(variant, vec![2, 3, 4, 5, 7, 8, 9]);
    c.n = "1..=6".parse().unwrap();
    c.k = "0..=4".parse().unwrap();
    c.beta = Selection::All;
    c.gamma = Selection::First(4);
    c.delta = Selection::First(3);
    c.workers = workers;
    let out = run_sweep(&c).map_err(|e| format!("{e:#}"))?;
    let csv = render(&out.records, Format::Csv).map_err(|e| e.to_string())?;
    Ok((out.records, csv))
}

fn check_family_records(records: &[RunRecord], oracle: impl Fn(u64, u64, u64) -> bool) -> Outcome {
    let mut predicted_true = 0;
    for r in records {
        let (q, n, k) = (r.sub_order, r.n.unwrap() as u64, r.k.unwrap() as u64);
        ensure(r.predicted == oracle(q, n, k), || {
            format!("predicted condition wrong for {}", r.spec())
        })?;
        ensure(r.agree, || format!("disagreement at {}", r.spec()))?;
        predicted_true += r.predicted as usize;
    }
    Ok(format!(
        "{} specs, {predicted_true} predicted permutations, 0 disagreements",
        records.len()
    ))
}

fn criterion_1(shared: &Shared) -> Outcome {
    // γ = 0 plus three more per β (Q = 2 has γ = 0 only)
    let expected: usize = [2u64, 3, 4, 5, 7, 8, 9]
        .iter()
        .map(|&q| (q as usize + 1) * (q as usize * q as usize - q as usize - 1).min(4) * 30)
        .sum();
    ensure(shared.two_param.len() == expected, || {
        format!("expected {expected} specs, got {}", shared.two_param.len())
    })?;
    check_family_records(&shared.two_param, |q, n, k| {
        gcd(n + 2 * k, q - 1) == 1 && gcd(n, q + 1) == 1
    })
}

fn criterion_2(shared: &Shared) -> Outcome {
    // three δ ∉ F_Q per β (Q = 2 has only two)
    let expected: usize = [2usize, 3, 4, 5, 7, 8, 9]
        .iter()
        .map(|&q| (q + 1) * (q * q - q).min(3) * 30)
        .sum();
    ensure(shared.line.len() == expected, || {
        format!("expected {expected} specs, got {}", shared.line.len())
    })?;
    check_family_records(&shared.line, |q, n, k| gcd(n * (n + 2 * k), q - 1) == 1)
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 4, 5, 7, 8, 11, 13] {
        let ctx = FieldCtx::new(q).unwrap();
        for k in 0..=6 {
            let spec = FamilySpec::new(Variant::CorMain, q).with_k(k);
            let v = verify(&spec, &ctx).map_err(|e| e.to_string())?;
            ensure(v.predicted == (gcd(2 * k as u64 + 3, q - 1) == 1), || {
                format!("predicted wrong: {spec}")
            })?;
            ensure(v.agree, || format!("disagreement at {spec}"))?;
            checked += 1;
        }
        let expect = [
            (Variant::MainCor1, true),
            (Variant::MainCor2, q % 5 != 1),
            (Variant::MainCor3, [2, 5, 8, 11].contains(&q)),
        ];
        for (variant, brute_expected) in expect {
            let inst =
                instantiate(&FamilySpec::new(variant, q), &ctx).map_err(|e| e.to_string())?;
            let brute = is_permutation(&ctx, &inst.f).is_perm;
            ensure(brute == brute_expected, || {
                format!("{variant} Q={q}: brute {brute}")
            })?;
            ensure(inst.predicted == brute, || {
                format!("{variant} Q={q}: predicted {}", inst.predicted)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} polynomials, 0 disagreements"))
}

fn criterion_4_5(line: bool) -> Outcome {
    let mut summary = Vec::new();
    for q in [2u64, 3, 4] {
        let ctx = FieldCtx::new(q).unwrap();
        let dump = classify_mobius(&ctx).map_err(|e| e.to_string())?;
        let big = q * q;
        ensure(dump.rows.len() as u64 == big * big * big - big, || {
            format!("Q={q}: {} maps", dump.rows.len())
        })?;
        let relevant: Vec<&String> = dump
            .mismatches
            .iter()
            .filter(|m| m.contains("maps_mu_to_line") == line)
            .collect();
        ensure(relevant.is_empty(), || format!("Q={q}: {}", relevant[0]))?;
        let count = dump
            .rows
            .iter()
            .filter(|r| {
                if line {
                    r.maps_mu_to_line
                } else {
                    r.bijects_mu
                }
            })
            .count() as u64;
        // both sets are cosets of PGL₂(F_Q), of order Q³ − Q
        ensure(count == q * q * q - q, || format!("Q={q}: {count} maps"))?;
        summary.push(format!("Q={q}: {}/{count}", dump.rows.len()));
    }
    Ok(format!("{}, 0 mismatches", summary.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a);
    let mut checked = 0;
    for q in [2u64, 3, 4, 5] {
        let ctx = FieldCtx::new(q).unwrap();
        let n = ctx.order() - 1;
        for d in (1..=n).filter(|d| n % d == 0) {
            for _ in 0..50 {
                let len = rng.gen_range(1..=5);
                let coeffs = (0..len)
                    .map(|_| ctx.element(rng.gen_range(0..ctx.order())))
                    .collect();
                let h = DensePoly::from_coeffs(&ctx, coeffs).unwrap();
                for r in 1..=6 {
                    let tz = tz_criterion(&ctx, r, &h, d).map_err(|e| e.to_string())?;
                    let f = tz_polynomial(&ctx, r, &h, d).map_err(|e| e.to_string())?;
                    let brute = is_permutation(&ctx, &f).is_perm;
                    ensure(tz.verdict == brute, || {
                        format!("q={} d={d} r={r} h={h}", ctx.order())
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (q, d, r, h) cases, 0 disagreements"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let (mut genthm, mut images, mut gencor) = (0, 0, 0);
    for q in [2u64, 3, 4, 5, 7] {
        let ctx = FieldCtx::new(q).unwrap();
        for _ in 0..25 {
            let beta = ctx.unit_circle()[rng.gen_range(0..=q as usize)];
            let d = rng.gen_range(1..=6);
            let h = random_symmetric_h(&ctx, &mut rng, d, beta);
            let roots = ctx
                .unit_circle()
                .iter()
                .any(|&a| h.evaluate(&ctx, a).is_zero());
            for r in 1..=10u64 {
                let spec = FamilySpec::new(Variant::GenThm, q)
                    .with_r(r as i64)
                    .with_beta(ElemSpec::from_elem(beta))
                    .with_h(PolySpec::from_dense(&h));
                let v = verify(&spec, &ctx).map_err(|e| e.to_string())?;
                let oracle = gcd(r, q - 1) == 1
                    && gcd((r as i64 - d as i64).unsigned_abs(), q + 1) == 1
                    && !roots;
                ensure(v.predicted == oracle, || format!("predicted wrong: {spec}"))?;
                ensure(v.agree, || format!("disagreement at {spec}"))?;
                genthm += 1;
                if !roots {
                    let holds = genthm_mu_image(&ctx, r, &h, beta).map_err(|e| e.to_string())?;
                    ensure(holds, || format!("image identity fails: {spec}"))?;
                    images += 1;
                }
            }
        }
        for beta in 0..=q {
            for d in 1..=6 {
                for r in 1..=10 {
                    let spec = FamilySpec::new(Variant::GenCor, q)
                        .with_r(r)
                        .with_d(d)
                        .with_beta(ElemSpec::Index(beta));
                    let v = verify(&spec, &ctx).map_err(|e| e.to_string())?;
                    ensure(v.agree, || format!("disagreement at {spec}"))?;
                    gencor += 1;
                }
            }
        }
    }
    Ok(format!(
        "{genthm} symmetric-h specs ({images} image checks), {gencor} binomial specs, 0 disagreements"
    ))
}

fn criterion_8(shared: &Shared) -> Outcome {
    let mut checked = 0;
    let mut contexts = std::collections::BTreeMap::new();
    for r in shared.two_param.iter().chain(&shared.line) {
        let (q, n, k) = (r.sub_order, r.n.unwrap() as u64, r.k.unwrap() as u64);
        if gcd(n + 2 * k, q - 1) != 1 {
            continue;
        }
        let ctx = contexts
            .entry(q)
            .or_insert_with(|| FieldCtx::new(q).unwrap());
        let inst = instantiate(r.spec(), ctx).map_err(|e| e.to_string())?;
        let identity = redei_identity_holds(ctx, &inst).map_err(|e| e.to_string())?;
        ensure(identity, || format!("g ≠ c·G on μ_(Q+1) for {}", r.spec()))?;
        ensure(h_nonvanishing(ctx, &inst), || {
            format!("h vanishes on μ_(Q+1) for {}", r.spec())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} instances, 0 failures"))
}

fn criterion_9() -> Outcome {
    let qs = [4u64, 5, 7, 8, 11, 13, 16];
    for q in qs {
        let ok = cor14_reduction_identity(&FieldCtx::new(q).unwrap()).map_err(|e| e.to_string())?;
        ensure(ok, || format!("identity fails at Q={q}"))?;
    }
    Ok(format!("identity holds for Q in {qs:?}"))
}

fn criterion_10(shared: &Shared) -> Outcome {
    let (_, four) = family_sweep(Variant::ThmB, 4)?;
    ensure(four == shared.two_param_csv, || {
        "CSV differs between 1 and 4 workers".into()
    })?;
    Ok(format!(
        "{} bytes identical for workers 1 and 4",
        four.len()
    ))
}

fn main() {
    let start = Instant::now();
    let shared = (|| -> Result<Shared, String> {
        let (two_param, two_param_csv) = family_sweep(Variant::ThmB, 1)?;
        let (line, _) = family_sweep(Variant::ThmA, 1)?;
        Ok(Shared {
            two_param,
            two_param_csv,
            line,
        })
    })();
    let setup = start.elapsed();

    let criteria: Vec<(&str, Duration, Box<dyn Fn(&Shared) -> Outcome>)> = vec![
        (
            "1 two-parameter family equivalence",
            Duration::from_secs(300),
            Box::new(criterion_1),
        ),
        (
            "2 line family equivalence",
            Duration::from_secs(300),
            Box::new(criterion_2),
        ),
        (
            "3 three-term family and fixed trinomials",
            Duration::from_secs(120),
            Box::new(|_| criterion_3()),
        ),
        (
            "4 unit-circle bijector classification",
            Duration::from_secs(60),
            Box::new(|_| criterion_4_5(false)),
        ),
        (
            "5 unit-circle to line classification",
            Duration::from_secs(60),
            Box::new(|_| criterion_4_5(true)),
        ),
        (
            "6 roots-of-unity reduction criterion",
            Duration::from_secs(180),
            Box::new(|_| criterion_6()),
        ),
        (
            "7 symmetric-h and binomial families",
            Duration::from_secs(180),
            Box::new(|_| criterion_7()),
        ),
        (
            "8 Rédei decomposition on the unit circle",
            Duration::from_secs(300),
            Box::new(criterion_8),
        ),
        (
            "9 reduction identity",
            Duration::from_secs(30),
            Box::new(|_| criterion_9()),
        ),
        (
            "10 determinism across worker counts",
            Duration::from_secs(300),
            Box::new(criterion_10),
        ),
    ];

    let mut failures = 0;
    for (name, budget, check) in criteria {
        let t = Instant::now();
        let outcome = match &shared {
            Err(e) => Err(format!("sweep setup failed: {e}")),
            Ok(s) => catch_unwind(AssertUnwindSafe(|| check(s)))
                .unwrap_or_else(|_| Err("panicked".to_string())),
        };
        // the two equivalence sweeps run once up front and are shared
        let elapsed = t.elapsed()
            + if name.starts_with("1 ") || name.starts_with("2 ") {
                setup / 2
            } else {
                Duration::ZERO
            };
        let outcome = outcome.and_then(|msg| {
            if elapsed > budget {
                Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  criterion {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

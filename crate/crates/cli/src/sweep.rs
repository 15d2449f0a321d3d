//! Parallel parameter sweeps and their CSV / JSON records.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use ppverify_core::{verify, ElemSpec, FamilySpec, FieldCtx, Variant, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, SweepConfig};

pub const CSV_HEADER: [&str; 18] = [
    "variant",
    "Q",
    "n",
    "k",
    "beta",
    "gamma",
    "delta",
    "r",
    "d",
    "predicted",
    "brute",
    "agree",
    "witness_x1",
    "witness_x2",
    "p",
    "m",
    "modulus_mid",
    "modulus_top",
];

/// One verified spec with the field metadata needed to rerun it exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub variant: Variant,
    #[serde(rename = "Q")]
    pub sub_order: u64,
    pub n: Option<i64>,
    pub k: Option<i64>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub r: Option<i64>,
    pub d: Option<i64>,
    pub h: Option<String>,
    pub predicted: bool,
    pub brute: bool,
    pub agree: bool,
    pub witness_x1: Option<String>,
    pub witness_x2: Option<String>,
    pub p: u32,
    pub m: usize,
    pub modulus_mid: String,
    pub modulus_top: String,
    pub generator: String,
    pub wall_time_ms: f64,
    #[serde(skip)]
    spec: FamilySpec,
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

impl RunRecord {
    pub fn new(verdict: &Verdict, ctx: &FieldCtx, wall_time_ms: f64) -> Self {
        let spec = &verdict.spec;
        let text = |e: &Option<ElemSpec>| e.as_ref().map(|e| e.to_string());
        let top = ctx.modulus_top();
        RunRecord {
            variant: spec.variant,
            sub_order: spec.sub_order,
            n: spec.n,
            k: spec.k,
            beta: text(&spec.beta),
            gamma: text(&spec.gamma),
            delta: text(&spec.delta),
            r: spec.r,
            d: spec.d,
            h: spec.h.as_ref().map(|h| h.to_string()),
            predicted: verdict.predicted,
            brute: verdict.brute,
            agree: verdict.agree,
            witness_x1: verdict.witness.map(|(a, _)| a.to_string()),
            witness_x2: verdict.witness.map(|(_, b)| b.to_string()),
            p: ctx.p(),
            m: ctx.m(),
            modulus_mid: join(ctx.modulus_mid(), ","),
            modulus_top: top
                .iter()
                .map(|c| join(c, ","))
                .collect::<Vec<_>>()
                .join(";"),
            generator: ctx.generator().to_string(),
            wall_time_ms,
            spec: spec.clone(),
        }
    }

    /// The canonical spec this record was produced from.
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn csv_row(&self) -> [String; 18] {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        let int = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.variant.to_string(),
            self.sub_order.to_string(),
            int(self.n),
            int(self.k),
            opt(&self.beta),
            opt(&self.gamma),
            opt(&self.delta),
            int(self.r),
            int(self.d),
            self.predicted.to_string(),
            self.brute.to_string(),
            self.agree.to_string(),
            opt(&self.witness_x1),
            opt(&self.witness_x2),
            self.p.to_string(),
            self.m.to_string(),
            self.modulus_mid.clone(),
            self.modulus_top.clone(),
        ]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub predicted_true: usize,
    pub agree: usize,
}

impl Summary {
    pub fn of(records: &[RunRecord]) -> Self {
        Summary {
            total: records.len(),
            predicted_true: records.iter().filter(|r| r.predicted).count(),
            agree: records.iter().filter(|r| r.agree).count(),
        }
    }

    pub fn all_agree(&self) -> bool {
        self.agree == self.total
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total={} predicted_true={} agree={} disagree={}",
            self.total,
            self.predicted_true,
            self.agree,
            self.total - self.agree
        )
    }
}

/// Cartesian product of the configured parameters, one context per Q.
pub fn expand(config: &SweepConfig, contexts: &BTreeMap<u64, FieldCtx>) -> Vec<FamilySpec> {
    use Variant::*;
    let v = config.family;
    let ints = |list: &[i64], used: bool| -> Vec<Option<i64>> {
        if used {
            list.iter().copied().map(Some).collect()
        } else {
            vec![None]
        }
    };
    let ns = ints(&config.n.0, matches!(v, ThmB | ThmA));
    let ks = ints(&config.k.0, matches!(v, ThmB | ThmA | CorMain));
    let rs = ints(&config.r.0, matches!(v, GenThm | GenCor));
    let ds = ints(&config.d.0, v == GenCor);

    let mut specs = Vec::new();
    for (&q, ctx) in contexts {
        let big = ctx.order();
        let some = |list: Vec<ElemSpec>| list.into_iter().map(Some).collect::<Vec<_>>();
        let betas = if matches!(v, ThmB | ThmA | GenThm | GenCor) {
            some(config.beta.expand(q + 1))
        } else {
            vec![None]
        };
        let gammas = if v == ThmB {
            some(config.gamma.expand(big - q - 1))
        } else {
            vec![None]
        };
        let deltas = if v == ThmA {
            some(config.delta.expand(big - q))
        } else {
            vec![None]
        };
        for beta in &betas {
            for gamma in &gammas {
                for delta in &deltas {
                    for &n in &ns {
                        for &k in &ks {
                            for &r in &rs {
                                for &d in &ds {
                                    specs.push(FamilySpec {
                                        variant: v,
                                        sub_order: q,
                                        n,
                                        k,
                                        beta: beta.clone(),
                                        gamma: gamma.clone(),
                                        delta: delta.clone(),
                                        r,
                                        d,
                                        h: config.h.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    specs
}

pub struct SweepOutcome {
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

/// Verifies every spec of the sweep on a pool of `config.workers` threads
/// and returns the records sorted by canonical spec.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let mut contexts = BTreeMap::new();
    for &q in &config.sub_orders {
        let ctx = FieldCtx::new(q).with_context(|| format!("Q = {q}"))?;
        contexts.insert(q, ctx);
    }
    let specs = expand(config, &contexts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")?;
    let mut records = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| {
                let ctx = &contexts[&spec.sub_order];
                let start = Instant::now();
                let verdict = verify(spec, ctx).with_context(|| format!("{spec}"))?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                Ok(RunRecord::new(&verdict, ctx, ms))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| a.spec.cmp(&b.spec));
    let summary = Summary::of(&records);
    Ok(SweepOutcome { records, summary })
}

pub fn render(records: &[RunRecord], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            Ok(w.into_inner()?)
        }
        Format::Json => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

/// Writes through a temporary file in the target directory so a failed
/// run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

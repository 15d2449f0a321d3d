//! Command-line front end. Each command writes its result to `out`,
//! diagnostics to `err`, and returns the process exit code.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ppverify_core::families::cor14_reduction;
use ppverify_core::mobius::{
    bijects_mu, classify_mu_bijector, divisibility_test, line_form_params, maps_mu_to_line,
};
use ppverify_core::{verify, DensePoly, FamilySpec, FieldCtx, Mobius, Variant};

use crate::config::{parse_q_list, ConfigFile, Format, IntList, Selection, SweepConfig};
use crate::sweep::{render, run_sweep, write_atomic, RunRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Largest Q accepted by `classify-mobius`.
pub const CLASSIFY_MAX_Q: u64 = 4;
/// Largest Q accepted by `reduce`.
pub const REDUCE_MAX_Q: u64 = 32;

#[derive(Debug, Parser)]
#[command(
    name = "ppverify",
    version,
    about = "Verify permutation-polynomial families over F_{Q²} by exhaustive evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one family member: predicted condition versus brute force.
    Verify(VerifyArgs),
    /// Check every member of a parameter grid.
    Sweep(SweepArgs),
    /// Dump all Möbius maps over F_{Q²} with their action on μ_{Q+1}.
    ClassifyMobius(QArg),
    /// Reduce g(x^{Q²−2}) for the k = Q−3 three-term member and compare.
    Reduce(QArg),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long = "Q")]
    pub q: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Inner polynomial as `e:c;e:c`.
    #[arg(long)]
    pub h: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// Key-value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated list of Q.
    #[arg(long = "Q")]
    pub q: Option<String>,
    /// Range `a..=b`, `a..b`, or list `a,b,c`.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    /// `all`, a count of leading candidates, or `;`-separated elements.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, env = "PPVERIFY_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QArg {
    #[arg(long = "Q")]
    pub q: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::ClassifyMobius(a) => cmd_classify_mobius(a, out, err),
        Command::Reduce(a) => cmd_reduce(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INVALID
        }
    }
}

fn parse_opt<T>(v: &Option<String>) -> Result<Option<T>>
where
    T: std::str::FromStr,
    T::Err: Into<anyhow::Error>,
{
    v.as_deref()
        .map(|s| s.parse::<T>().map_err(Into::into))
        .transpose()
}

pub fn verify_spec(a: &VerifyArgs) -> Result<FamilySpec> {
    let variant: Variant = a.family.parse()?;
    Ok(FamilySpec {
        variant,
        sub_order: a.q,
        n: a.n,
        k: a.k,
        beta: parse_opt(&a.beta)?,
        gamma: parse_opt(&a.gamma)?,
        delta: parse_opt(&a.delta)?,
        r: a.r,
        d: a.d,
        h: parse_opt(&a.h)?,
    })
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = verify_spec(a)?;
    let ctx = FieldCtx::new(a.q)?;
    let start = Instant::now();
    let verdict = verify(&spec, &ctx)?;
    let record = RunRecord::new(&verdict, &ctx, start.elapsed().as_secs_f64() * 1e3);
    writeln!(out, "{}", serde_json::to_string(&record)?)?;
    Ok(if verdict.agree {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

/// Merges the config file (if any) with flags; flags win.
pub fn sweep_config(a: &SweepArgs) -> Result<SweepConfig> {
    let file = match &a.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let pick = |flag: &Option<String>, file: &Option<String>| flag.clone().or_else(|| file.clone());

    let family = pick(&a.family, &file.family).context("missing --family")?;
    let sub_orders = match &a.q {
        Some(s) => parse_q_list(s)?,
        None => file.sub_orders.clone().context("missing --Q")?,
    };
    let mut c = SweepConfig::new(family.parse()?, sub_orders);
    let range = |flag: &Option<String>, file: &Option<String>| -> Result<IntList> {
        Ok(parse_opt(&pick(flag, file))?.unwrap_or_default())
    };
    c.n = range(&a.n, &file.n)?;
    c.k = range(&a.k, &file.k)?;
    c.r = range(&a.r, &file.r)?;
    c.d = range(&a.d, &file.d)?;
    for (dst, flag, f) in [
        (&mut c.beta, &a.beta, &file.beta),
        (&mut c.gamma, &a.gamma, &file.gamma),
        (&mut c.delta, &a.delta, &file.delta),
    ] {
        if let Some(sel) = parse_opt::<Selection>(&pick(flag, f))? {
            *dst = sel;
        }
    }
    c.h = parse_opt(&pick(&a.h, &file.h))?;
    c.out = a.out.clone().or(file.out);
    c.format = parse_opt::<Format>(&pick(&a.format, &file.format))?.unwrap_or_default();
    c.workers = a
        .workers
        .or(file.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    c.validate()?;
    Ok(c)
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = sweep_config(a)?;
    let outcome = run_sweep(&config)?;
    let bytes = render(&outcome.records, config.format)?;
    match &config.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => out.write_all(&bytes)?,
    }
    writeln!(err, "{}", outcome.summary)?;
    Ok(if outcome.summary.all_agree() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

pub struct MobiusRow {
    pub map: Mobius,
    pub bijects_mu: bool,
    pub class_tag: &'static str,
    pub maps_mu_to_line: bool,
}

pub struct MobiusDump {
    pub rows: Vec<MobiusRow>,
    /// One line per map where enumeration and classification disagree.
    pub mismatches: Vec<String>,
}

pub fn classify_mobius(ctx: &FieldCtx) -> Result<MobiusDump> {
    if ctx.sub_order() > CLASSIFY_MAX_Q {
        bail!(
            "classify-mobius supports Q ≤ {CLASSIFY_MAX_Q}, got {}",
            ctx.sub_order()
        );
    }
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for map in Mobius::enumerate_all(ctx) {
        let class = classify_mu_bijector(ctx, &map);
        let bij = bijects_mu(ctx, &map);
        let line = maps_mu_to_line(ctx, &map);
        if bij != class.is_bijector() || bij != divisibility_test(ctx, &map) {
            mismatches.push(format!("{map}: bijects_mu={bij} class={}", class.tag()));
        }
        if line != line_form_params(ctx, &map).is_some() {
            mismatches.push(format!(
                "{map}: maps_mu_to_line={line} disagrees with the line family"
            ));
        }
        rows.push(MobiusRow {
            map,
            bijects_mu: bij,
            class_tag: class.tag(),
            maps_mu_to_line: line,
        });
    }
    Ok(MobiusDump { rows, mismatches })
}

pub fn cmd_classify_mobius(a: &QArg, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if a.q > CLASSIFY_MAX_Q {
        bail!("classify-mobius supports Q ≤ {CLASSIFY_MAX_Q}, got {}", a.q);
    }
    let ctx = FieldCtx::new(a.q)?;
    let dump = classify_mobius(&ctx)?;
    if !dump.mismatches.is_empty() {
        for m in &dump.mismatches {
            writeln!(err, "mismatch: {m}")?;
        }
        return Ok(EXIT_MISMATCH);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["map", "bijects_mu", "class_tag", "maps_mu_to_line"])?;
    for r in &dump.rows {
        w.write_record([
            r.map.to_string(),
            r.bijects_mu.to_string(),
            r.class_tag.to_string(),
            r.maps_mu_to_line.to_string(),
        ])?;
    }
    let bytes = w.into_inner()?;
    match &a.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => out.write_all(&bytes)?,
    }
    let bijectors = dump.rows.iter().filter(|r| r.bijects_mu).count();
    let lines = dump.rows.iter().filter(|r| r.maps_mu_to_line).count();
    writeln!(
        err,
        "maps={} bijectors={bijectors} line_maps={lines} mismatches=0",
        dump.rows.len()
    )?;
    Ok(EXIT_OK)
}

pub fn reduce(q: u64) -> Result<(DensePoly, DensePoly)> {
    if !(4..=REDUCE_MAX_Q).contains(&q) || q % 3 == 0 {
        bail!("reduce needs 4 ≤ Q ≤ {REDUCE_MAX_Q} with 3 ∤ Q, got {q}");
    }
    let ctx = FieldCtx::new(q)?;
    Ok(cor14_reduction(&ctx)?)
}

pub fn cmd_reduce(a: &QArg, out: &mut dyn Write) -> Result<i32> {
    let (reduced, target) = reduce(a.q)?;
    let text = format!(
        "reduced: {reduced}\ntarget:  {target}\nequal: {}\n",
        reduced == target
    );
    match &a.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if reduced == target {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

//! Sweep configuration: integer ranges, element selections, and the flat
//! key-value config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ppverify_core::{ElemSpec, PolySpec, Variant};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?} (expected csv or json)"),
        }
    }
}

/// Integer list written as `a..=b`, `a..b`, `a`, or `a,b,c`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        let int = |t: &str| -> Result<i64> {
            t.trim()
                .parse()
                .with_context(|| format!("bad integer {t:?} in {text:?}"))
        };
        if let Some((lo, hi)) = s.split_once("..=") {
            return Ok(IntList((int(lo)?..=int(hi)?).collect()));
        }
        if let Some((lo, hi)) = s.split_once("..") {
            return Ok(IntList((int(lo)?..int(hi)?).collect()));
        }
        if s.is_empty() {
            return Ok(IntList(Vec::new()));
        }
        s.split(',').map(int).collect::<Result<_>>().map(IntList)
    }
}

/// Which field elements a sweep uses for β, γ or δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Every valid element for the role.
    All,
    /// The first N valid elements in enumeration order.
    First(u64),
    /// Explicit elements, separated by `;`.
    Explicit(Vec<ElemSpec>),
}

impl Selection {
    /// Indices or elements to use, given how many valid elements exist.
    pub fn expand(&self, available: u64) -> Vec<ElemSpec> {
        match self {
            Selection::All => (0..available).map(ElemSpec::Index).collect(),
            Selection::First(n) => (0..(*n).min(available)).map(ElemSpec::Index).collect(),
            Selection::Explicit(v) => v.clone(),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::All => f.write_str("all"),
            Selection::First(n) => write!(f, "{n}"),
            Selection::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

impl FromStr for Selection {
    type Err = anyhow::Error;

    /// `all`, a positive count, or `;`-separated elements (`0`, `g^k`, `#i`, `c0,c1,...`).
    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(Selection::All);
        }
        if let Ok(n) = s.parse::<u64>() {
            if n > 0 {
                return Ok(Selection::First(n));
            }
        }
        s.split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.parse::<ElemSpec>().map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()
            .map(Selection::Explicit)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: Variant,
    pub sub_orders: Vec<u64>,
    pub n: IntList,
    pub k: IntList,
    pub r: IntList,
    pub d: IntList,
    pub beta: Selection,
    pub gamma: Selection,
    pub delta: Selection,
    pub h: Option<PolySpec>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: usize,
}

impl SweepConfig {
    /// Defaults for everything but the family and Q list: all β, four γ
    /// (γ = 0 and the next three), three δ, CSV, one worker.
    pub fn new(family: Variant, sub_orders: Vec<u64>) -> Self {
        SweepConfig {
            family,
            sub_orders,
            n: IntList::default(),
            k: IntList::default(),
            r: IntList::default(),
            d: IntList::default(),
            beta: Selection::All,
            gamma: Selection::First(4),
            delta: Selection::First(3),
            h: None,
            out: None,
            format: Format::Csv,
            workers: 1,
        }
    }

    /// Checks that every range the family uses is present and nonempty and
    /// that no unused range was given.
    pub fn validate(&self) -> Result<()> {
        use Variant::*;
        if self.sub_orders.is_empty() {
            bail!("Q list is empty");
        }
        if self.workers == 0 {
            bail!("worker count must be at least 1");
        }
        let v = self.family;
        let ranges = [
            ("n", &self.n, matches!(v, ThmB | ThmA)),
            ("k", &self.k, matches!(v, ThmB | ThmA | CorMain)),
            ("r", &self.r, matches!(v, GenThm | GenCor)),
            ("d", &self.d, v == GenCor),
        ];
        for (name, list, used) in ranges {
            match (used, list.0.is_empty()) {
                (true, true) => bail!("{name} range is empty"),
                (false, false) => bail!("{v} does not take {name}"),
                _ => {}
            }
        }
        if (v == GenThm) != self.h.is_some() {
            bail!("h is required by genthm and only by genthm");
        }
        if v == GenThm && !matches!(self.beta, Selection::Explicit(_)) {
            bail!("genthm sweeps need an explicit beta matching h");
        }
        Ok(())
    }
}

/// Contents of a config file. Every key is optional; flags fill the rest.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<String>,
    #[serde(rename = "Q")]
    pub sub_orders: Option<Vec<u64>>,
    pub n: Option<String>,
    pub k: Option<String>,
    pub r: Option<String>,
    pub d: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub h: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub workers: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

pub fn parse_q_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad Q {t:?}"))
        })
        .collect()
}

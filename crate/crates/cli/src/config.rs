//! Run configuration. Every subcommand owns one optional section of a JSON
//! config file; flags given on the command line replace the matching fields.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, ValueEnum};
use labelsearch::{LearnerKind, SpeedupRegime64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gen_data: Option<GenDataArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chance_hit: Option<ChanceHitArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_model_table: Option<CostTableArgs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_model_ledger: Option<CostLedgerArgs>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// Field-wise overlay: every flag that was given wins over the file value.
pub fn overlay<T: Serialize + DeserializeOwned>(file: Option<&T>, flags: &T) -> anyhow::Result<T> {
    let mut merged = match file {
        Some(section) => serde_json::to_value(section)?,
        None => Value::Object(Map::new()),
    };
    if let (Value::Object(base), Value::Object(given)) = (&mut merged, serde_json::to_value(flags)?) {
        for (key, value) in given {
            if !value.is_null() {
                base.insert(key, value);
            }
        }
    }
    Ok(serde_json::from_value(merged)?)
}

/// Inclusive `a:b`, a comma list, or a single value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NValues(pub Vec<u32>);

impl FromStr for NValues {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("`{t}` is not a count"));
        let values = if let Some((lo, hi)) = s.split_once(':') {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range `{s}`"));
            }
            (lo..=hi).collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        Ok(Self(values))
    }
}

impl fmt::Display for NValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.0;
        if v.len() > 1 && v.windows(2).all(|w| w[1] == w[0] + 1) {
            return write!(f, "{}:{}", v[0], v[v.len() - 1]);
        }
        let parts: Vec<String> = v.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// `const:L`, `poly:alpha` or `exp:beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeArg(pub SpeedupRegime64);

impl FromStr for RegimeArg {
    type Err = labelsearch::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Self)
    }
}

impl fmt::Display for RegimeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

macro_rules! string_serde {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

string_serde!(NValues, RegimeArg);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Exhaustive,
    Random,
    Greedy,
    Anneal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMethod {
    Conventional,
    Selftrain,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct GenDataArgs {
    /// Trusted examples in A [default: 8]
    #[arg(long)]
    pub m: Option<usize>,
    /// Unlabeled pool size [default: 12]
    #[arg(long)]
    pub n: Option<usize>,
    /// Feature dimension [default: 2]
    #[arg(long)]
    pub d: Option<usize>,
    /// Distance between the class means [default: 4.0]
    #[arg(long)]
    pub sep: Option<f64>,
    /// Per-coordinate noise [default: 1.0]
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Task file to write (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SearchArgs {
    #[arg(value_enum)]
    pub method: Option<SearchMethod>,
    #[arg(long)]
    pub task: Option<PathBuf>,
    /// centroid or nn [default: centroid]
    #[arg(long)]
    pub learner: Option<LearnerKind>,
    /// Search threads [default: available parallelism]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Largest pool the exhaustive search accepts [default: 24]
    #[arg(long)]
    pub cap: Option<u32>,
    /// Evaluations allowed to a heuristic [default: 10000]
    #[arg(long)]
    pub budget: Option<u64>,
    /// Extra greedy climbs or annealing runs [default: 4]
    #[arg(long)]
    pub restarts: Option<u32>,
    /// Initial annealing temperature [default: 2.0]
    #[arg(long)]
    pub t0: Option<f64>,
    /// Annealing decay per step [default: 0.995]
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ChanceHitArgs {
    #[arg(long)]
    pub task: Option<PathBuf>,
    #[arg(long)]
    pub learner: Option<LearnerKind>,
    /// Uniform draws [default: 100000]
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BaselineArgs {
    #[arg(value_enum)]
    pub method: Option<BaselineMethod>,
    #[arg(long)]
    pub task: Option<PathBuf>,
    #[arg(long)]
    pub learner: Option<LearnerKind>,
    /// Share of the remaining pool pseudo-labeled per round [default: 0.25]
    #[arg(long)]
    pub quantile: Option<f64>,
    /// [default: 10]
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Threads for the exhaustive comparison
    #[arg(long)]
    pub workers: Option<usize>,
    /// Pools above this size skip the exhaustive comparison [default: 24]
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScalingArgs {
    /// Pool sizes, `a:b` or a comma list [default: 12:20]
    #[arg(long)]
    pub n: Option<NValues>,
    /// [default: 16]
    #[arg(long)]
    pub m: Option<usize>,
    /// [default: 4]
    #[arg(long)]
    pub d: Option<usize>,
    /// [default: 1.0]
    #[arg(long)]
    pub sep: Option<f64>,
    /// [default: 1.0]
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub learner: Option<LearnerKind>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Timed sweeps per n, fastest kept [default: 3]
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub cap: Option<u32>,
    /// Per-n CSV (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary with the fitted slope
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CostTableArgs {
    /// [default: 1:24]
    #[arg(long)]
    pub n: Option<NValues>,
    /// Time per evaluation in milliseconds; table times are in seconds [default: 1]
    #[arg(long)]
    pub tc_ms: Option<f64>,
    /// Comma list of const:L, poly:alpha, exp:beta [default: const:4,poly:2,exp:0.5]
    #[arg(long, value_delimiter = ',')]
    pub regimes: Option<Vec<RegimeArg>>,
    /// CSV table (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary with the fitted log2 slopes
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CostLedgerArgs {
    #[arg(long)]
    pub label: Option<f64>,
    #[arg(long)]
    pub curate: Option<f64>,
    #[arg(long)]
    pub compute: Option<f64>,
    #[arg(long)]
    pub latency: Option<f64>,
    #[arg(long)]
    pub risk: Option<f64>,
    /// Quality score for the performance-per-cost ratio
    #[arg(long)]
    pub quality: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

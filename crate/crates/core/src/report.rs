//! Serializable result records shared by `compute`, `verify` and `sweep`.
//!
//! Exact rationals travel as `"p/q"` strings so nothing is lost between
//! tools; floats are written with shortest round-trip formatting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{parse_rational, CirculantSpec};
use crate::oracles::OracleValue;

macro_rules! kebab_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "kebab-case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::Parse(format!(
                        "unknown {} {s:?} (expected one of: {})",
                        stringify!($name).to_lowercase(),
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }
    };
}

kebab_enum!(
    /// The invariant being computed.
    Quantity {
        Resistance => "resistance",
        Trees => "trees",
        Forests => "forests",
        Hitting => "hitting",
        Kirchhoff => "kirchhoff",
        Eigenvalues => "eigenvalues",
    }
);

kebab_enum!(
    /// The route used to compute it.
    Method {
        Closed => "closed",
        Spectral => "spectral",
        Oracle => "oracle",
        MonteCarlo => "monte-carlo",
    }
);

kebab_enum!(
    /// How `value` should be read.
    Representation {
        Rational => "rational",
        Float => "float",
        Log => "log",
    }
);

impl Quantity {
    /// Quantities indexed by a vertex pair.
    pub fn needs_pair(&self) -> bool {
        matches!(self, Quantity::Resistance | Quantity::Forests | Quantity::Hitting)
    }
}

/// A scalar result, a list of eigenvalues, or an exact rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Exact(String),
    List(Vec<f64>),
}

impl Value {
    pub fn exact(r: &BigRational) -> Self {
        Value::Exact(format_rational(r))
    }

    pub fn integer(k: &BigInt) -> Self {
        Value::Exact(k.to_string())
    }

    /// Float reading of a scalar value; `None` for lists.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            Value::Exact(s) => parse_rational(s).ok().and_then(|r| r.to_f64()),
            Value::List(_) => None,
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Value::Exact(s) => parse_rational(s).ok(),
            _ => None,
        }
    }
}

impl From<&OracleValue> for Value {
    fn from(v: &OracleValue) -> Self {
        match v {
            OracleValue::Exact(r) => Value::exact(r),
            OracleValue::Float(x) => Value::Number(*x),
        }
    }
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Per-record context. Absent fields are omitted from JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    /// Distance class `r` the closed form was transported from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

/// One computed invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantResult {
    pub spec: CirculantSpec,
    pub quantity: Quantity,
    pub method: Method,
    pub representation: Representation,
    pub value: Value,
    #[serde(default)]
    pub metadata: Metadata,
}

/// One CSV line; field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub s_or_r: String,
    pub quantity: String,
    pub method: String,
    pub q: Option<usize>,
    pub u: Option<usize>,
    pub v: Option<usize>,
    pub value: Option<f64>,
    pub exact_value: Option<String>,
    pub limit: Option<f64>,
    pub deviation: Option<f64>,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "n",
    "s_or_r",
    "quantity",
    "method",
    "q",
    "u",
    "v",
    "value",
    "exact_value",
    "limit",
    "deviation",
];

/// Class label for the `s_or_r` column: `1;3` for deletions, `w:1=1/2;2=1` otherwise.
pub fn class_label(spec: &CirculantSpec) -> String {
    match spec.deleted() {
        Some(s) => s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
        None => format!(
            "w:{}",
            spec.weights()
                .iter()
                .map(|(k, w)| format!("{k}={}", format_rational(w)))
                .collect::<Vec<_>>()
                .join(";")
        ),
    }
}

impl InvariantResult {
    /// CSV rows for this record; eigenvalue lists expand to one row per index `j`
    /// (carried in the `q` column).
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let base = CsvRow {
            n: self.spec.n(),
            s_or_r: class_label(&self.spec),
            quantity: self.quantity.to_string(),
            method: self.method.to_string(),
            q: self.metadata.q,
            u: self.metadata.u,
            v: self.metadata.v,
            value: None,
            exact_value: None,
            limit: self.metadata.limit,
            deviation: self.metadata.deviation,
        };
        match &self.value {
            Value::Number(x) => vec![CsvRow {
                value: Some(*x),
                ..base
            }],
            Value::Exact(s) => vec![CsvRow {
                value: self.value.to_f64(),
                exact_value: Some(s.clone()),
                ..base
            }],
            Value::List(xs) => xs
                .iter()
                .enumerate()
                .map(|(j, &x)| CsvRow {
                    q: Some(j),
                    value: Some(x),
                    ..base.clone()
                })
                .collect(),
        }
    }
}

/// Pass/fail thresholds, defaulting to the acceptance values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative tolerance for float-vs-anything comparisons of resistance.
    pub resistance: f64,
    pub trees: f64,
    pub forests: f64,
    pub hitting: f64,
    pub kirchhoff: f64,
    pub eigenvalues: f64,
    /// Monte Carlo means must fall within this many standard errors.
    pub monte_carlo_sigmas: f64,
    pub root_of_unity: f64,
    pub tree_ratio: f64,
    pub resistance_scaled: f64,
    pub kirchhoff_scaled: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            resistance: 1e-9,
            trees: 1e-9,
            forests: 1e-9,
            hitting: 1e-9,
            kirchhoff: 1e-9,
            eigenvalues: 1e-9,
            monte_carlo_sigmas: 4.0,
            root_of_unity: 1e-9,
            tree_ratio: 1e-2,
            resistance_scaled: 1e-2,
            kirchhoff_scaled: 1e-1,
        }
    }
}

impl Tolerances {
    /// Relative tolerance for a quantity.
    pub fn relative(&self, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Resistance => self.resistance,
            Quantity::Trees => self.trees,
            Quantity::Forests => self.forests,
            Quantity::Hitting => self.hitting,
            Quantity::Kirchhoff => self.kirchhoff,
            Quantity::Eigenvalues => self.eigenvalues,
        }
    }
}

/// One cross-method comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub spec: CirculantSpec,
    pub quantity: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    pub values: BTreeMap<Method, Value>,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    /// Monte Carlo deviation from the reference, in standard errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo_sigmas: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_abs_dev: f64,
    pub worst_rel_dev: f64,
    /// Specs whose closed-form checks were skipped, with the reason.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: Vec<VerificationCase>,
    pub summary: VerificationSummary,
}

impl VerificationReport {
    pub fn new(
        tolerances: Tolerances,
        seed: Option<u64>,
        cases: Vec<VerificationCase>,
        skipped: Vec<String>,
    ) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let worst = |f: fn(&VerificationCase) -> f64| cases.iter().map(f).fold(0.0, f64::max);
        let summary = VerificationSummary {
            cases: cases.len(),
            passed,
            failed: cases.len() - passed,
            worst_abs_dev: worst(|c| c.max_abs_dev),
            worst_rel_dev: worst(|c| c.max_rel_dev),
            skipped,
        };
        Self {
            tolerances,
            seed,
            cases,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// A few lines for humans: counts, worst deviations, first failures.
    pub fn human_summary(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{} cases: {} passed, {} failed; worst abs dev {:.3e}, worst rel dev {:.3e}\n",
            s.cases, s.passed, s.failed, s.worst_abs_dev, s.worst_rel_dev
        );
        for note in &s.skipped {
            out.push_str(&format!("skipped: {note}\n"));
        }
        for c in self.cases.iter().filter(|c| !c.pass).take(20) {
            out.push_str(&format!(
                "FAIL {} N={} {}{}: rel dev {:.3e} {}\n",
                c.spec.label(),
                c.spec.n(),
                c.quantity,
                c.pair.map(|(u, v)| format!(" ({u},{v})")).unwrap_or_default(),
                c.max_rel_dev,
                c.notes.join("; ")
            ));
        }
        out
    }
}

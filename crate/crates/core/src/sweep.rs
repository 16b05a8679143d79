//! Large-`N` tables comparing closed forms for `G_{N,1}` with their limits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{self, rho_constants};
use crate::error::{Error, Result};
use crate::report::CsvRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepQuantity {
    /// `τ(G_{N,1}) / N^{N−2}`, tending to `e⁻²`.
    TreeRatio,
    /// `N·R(q)/2` at fixed `q`, tending to 1.
    ResistanceScaled,
    /// `Kf / N`, tending to 1.
    KirchhoffScaled,
    /// `(N − 2 − 1/N) − ρ`, tending to 0.
    RhoGap,
}

impl SweepQuantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepQuantity::TreeRatio => "tree-ratio",
            SweepQuantity::ResistanceScaled => "resistance-scaled",
            SweepQuantity::KirchhoffScaled => "kirchhoff-scaled",
            SweepQuantity::RhoGap => "rho-gap",
        }
    }

    pub fn limit(&self) -> f64 {
        match self {
            SweepQuantity::TreeRatio => (-2.0f64).exp(),
            SweepQuantity::ResistanceScaled | SweepQuantity::KirchhoffScaled => 1.0,
            SweepQuantity::RhoGap => 0.0,
        }
    }
}

impl fmt::Display for SweepQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree-ratio" => Ok(SweepQuantity::TreeRatio),
            "resistance-scaled" => Ok(SweepQuantity::ResistanceScaled),
            "kirchhoff-scaled" => Ok(SweepQuantity::KirchhoffScaled),
            "rho-gap" => Ok(SweepQuantity::RhoGap),
            _ => Err(Error::Parse(format!(
                "unknown sweep quantity {s:?} (expected tree-ratio, resistance-scaled, kirchhoff-scaled or rho-gap)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub quantity: SweepQuantity,
    pub n_min: usize,
    pub n_max: usize,
    pub step: usize,
    /// Residue for `resistance-scaled`.
    pub q: usize,
}

impl SweepConfig {
    pub fn new(quantity: SweepQuantity, n_max: usize) -> Self {
        Self {
            quantity,
            n_min: 5,
            n_max,
            step: 2,
            q: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub quantity: SweepQuantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    pub value: f64,
    pub limit: f64,
    pub deviation: f64,
}

impl SweepRow {
    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            n: self.n,
            s_or_r: "1".into(),
            quantity: self.quantity.to_string(),
            method: "closed".into(),
            q: self.q,
            u: None,
            v: None,
            value: Some(self.value),
            exact_value: None,
            limit: Some(self.limit),
            deviation: Some(self.deviation),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Even `N` in the range, which closed forms do not cover.
    pub skipped_even: usize,
    /// Odd `N` too small for the requested residue.
    pub skipped_small: usize,
}

impl SweepTable {
    pub fn footer(&self) -> String {
        format!(
            "{} rows; skipped {} even N, {} N too small for q",
            self.rows.len(),
            self.skipped_even,
            self.skipped_small
        )
    }
}

/// The scaled quantity at one odd `N`.
pub fn sweep_value(quantity: SweepQuantity, n: usize, q: usize) -> Result<f64> {
    let nf = n as f64;
    match quantity {
        SweepQuantity::TreeRatio => {
            Ok((closed_form::tree_count_closed_log(n)? - (nf - 2.0) * nf.ln()).exp())
        }
        SweepQuantity::ResistanceScaled => Ok(nf * closed_form::resistance_closed(n, q)? / 2.0),
        SweepQuantity::KirchhoffScaled => Ok(closed_form::kirchhoff_closed(n)? / nf),
        SweepQuantity::RhoGap => {
            // ρ + 1/ρ = N − 2, so the gap is 1/ρ − 1/N = (2 + 1/ρ)/(Nρ); no cancellation.
            let rho = rho_constants(n)?.rho;
            Ok((2.0 + 1.0 / rho) / (nf * rho))
        }
    }
}

/// Rows for every odd `N` in `n_min..=n_max` stepping by `step`, in increasing `N`.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    if cfg.step == 0 {
        return Err(Error::Domain("step must be >= 1".into()));
    }
    if cfg.n_min > cfg.n_max {
        return Err(Error::Domain(format!(
            "empty range: n_min = {} > n_max = {}",
            cfg.n_min, cfg.n_max
        )));
    }
    let candidates: Vec<usize> = (cfg.n_min..=cfg.n_max).step_by(cfg.step).collect();
    let skipped_even = candidates.iter().filter(|&&n| n % 2 == 0).count();
    let uses_q = cfg.quantity == SweepQuantity::ResistanceScaled;
    let odd: Vec<usize> = candidates
        .into_iter()
        .filter(|&n| n % 2 == 1 && n >= 5)
        .collect();
    let (usable, small): (Vec<usize>, Vec<usize>) =
        odd.into_iter().partition(|&n| !uses_q || cfg.q < n);
    let limit = cfg.quantity.limit();
    let rows = usable
        .par_iter()
        .map(|&n| {
            let value = sweep_value(cfg.quantity, n, cfg.q)?;
            if !value.is_finite() {
                return Err(Error::Domain(format!(
                    "{} is not finite at N = {n}",
                    cfg.quantity
                )));
            }
            Ok(SweepRow {
                n,
                quantity: cfg.quantity,
                q: uses_q.then_some(cfg.q),
                value,
                limit,
                deviation: (value - limit).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        rows,
        skipped_even,
        skipped_small: small.len(),
    })
}

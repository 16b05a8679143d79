//! Laplacian spectra of circulant graphs and the invariants they determine.
//!
//! The Laplacian of a circulant graph is diagonalised by the Fourier basis,
//! so `λ_j = Σ_k m(k)·w(k)·(1 − cos(2πjk/N))` where `m(k)` is the number of
//! neighbours at distance `k`. Every quantity below is a finite sum or
//! product over these eigenvalues.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{oriented_residue, CirculantSpec};
use crate::numeric::{compensated_sum, CompensatedSum};

/// Eigenvalues below `CONNECTIVITY_TOLERANCE · N` are treated as zero.
pub const CONNECTIVITY_TOLERANCE: f64 = 1e-9;

/// Largest `N` for which [`TreeCount::nearest_integer`] may be claimed.
pub const INTEGER_CLAIM_MAX_N: usize = 60;

/// Laplacian spectrum `λ_0..λ_{N−1}` together with a connectivity verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    /// `min_{j≥1} λ_j` (the algebraic connectivity).
    pub min_positive: f64,
    pub connected: bool,
    /// `1 − cos(2πr/N)` indexed by residue `r`.
    one_minus_cos: Vec<f64>,
}

/// `1 − cos(2πr/N) = 2 sin²(πr/N)` for each residue, exactly symmetric in `r ↦ N − r`.
fn one_minus_cos_table(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n];
    for r in 1..=n / 2 {
        let s = (std::f64::consts::PI * r as f64 / n as f64).sin();
        table[r] = 2.0 * s * s;
        table[n - r] = table[r];
    }
    table
}

/// Laplacian eigenvalues of any circulant spec.
pub fn eigenvalues(spec: &CirculantSpec) -> Spectrum {
    let n = spec.n();
    let table = one_minus_cos_table(n);
    let support: Vec<(usize, f64)> = spec
        .support()
        .map(|k| (k, spec.multiplicity(k) as f64 * spec.weight_f64(k)))
        .collect();

    let mut eigenvalues = vec![0.0; n];
    for j in 1..=n / 2 {
        let lambda = compensated_sum(support.iter().map(|&(k, mw)| mw * table[j * k % n]));
        eigenvalues[j] = lambda;
        eigenvalues[n - j] = lambda;
    }
    let min_positive = eigenvalues[1..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Spectrum {
        n,
        connected: min_positive > CONNECTIVITY_TOLERANCE * n as f64,
        eigenvalues,
        min_positive,
        one_minus_cos: table,
    }
}

/// The deletion-set form `λ_j = N − 2|S| + 2 Σ_{k∈S} cos(2πjk/N)`, odd `N` only.
///
/// Kept separate from [`eigenvalues`] so the two can be checked against
/// each other.
pub fn eigenvalues_deletion_form(n: usize, deleted: &[usize]) -> Result<Vec<f64>> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::Domain(format!(
            "deletion form needs odd N >= 3, got {n}"
        )));
    }
    if let Some(&k) = deleted.iter().find(|&&k| k == 0 || k > n / 2) {
        return Err(Error::Domain(format!("distance {k} outside 1..={}", n / 2)));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = vec![0.0; n];
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = CompensatedSum::new();
        acc.add(n as f64 - 2.0 * deleted.len() as f64);
        for &k in deleted {
            acc.add(2.0 * (two_pi * ((j * k) % n) as f64 / n as f64).cos());
        }
        *slot = acc.value();
    }
    Ok(out)
}

/// A spanning-tree count carried in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeCount {
    /// `log τ`; `-∞` for a disconnected graph.
    pub log: f64,
    /// `τ` as a float (may be `+∞` once it exceeds the f64 range).
    pub value: f64,
    /// Nearest integer, claimed only when `N ≤ 60` and the float lies within
    /// `1e-6` of it.
    pub nearest_integer: Option<u64>,
}

impl TreeCount {
    pub fn zero() -> Self {
        Self {
            log: f64::NEG_INFINITY,
            value: 0.0,
            nearest_integer: Some(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log == f64::NEG_INFINITY
    }
}

impl Spectrum {
    fn require_connected(&self) -> Result<()> {
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected { n: self.n })
        }
    }

    fn positive(&self) -> &[f64] {
        &self.eigenvalues[1..]
    }

    /// Effective resistance between vertices whose oriented residue is `q`.
    pub fn resistance(&self, q: usize) -> Result<f64> {
        self.require_connected()?;
        let n = self.n;
        if q % n == 0 {
            return Ok(0.0);
        }
        let sum = compensated_sum(
            (1..n).map(|j| self.one_minus_cos[(j * q) % n] / self.eigenvalues[j]),
        );
        Ok(2.0 * sum / n as f64)
    }

    /// `R(q)` for every residue `q = 0..N`.
    pub fn resistance_profile(&self) -> Result<Vec<f64>> {
        (0..self.n).map(|q| self.resistance(q)).collect()
    }

    /// Matrix–tree theorem: `τ = (1/N) Π_{j≥1} λ_j`.
    pub fn tree_count(&self) -> TreeCount {
        if !self.connected {
            return TreeCount::zero();
        }
        let n = self.n as f64;
        let log = compensated_sum(self.positive().iter().map(|l| l.ln())) - n.ln();
        // The direct product is more accurate than exp(log) while it stays finite.
        let product = self.positive().iter().product::<f64>() / n;
        let value = if product.is_finite() {
            product
        } else {
            log.exp()
        };
        let nearest_integer = if self.n <= INTEGER_CLAIM_MAX_N && value < 2f64.powi(53) {
            let rounded = value.round();
            ((value - rounded).abs() < 1e-6).then(|| rounded as u64)
        } else {
            None
        };
        TreeCount {
            log,
            value,
            nearest_integer,
        }
    }

    /// Kirchhoff index `N · Σ_{j≥1} 1/λ_j`.
    pub fn kirchhoff(&self) -> Result<f64> {
        self.require_connected()?;
        Ok(self.n as f64 * compensated_sum(self.positive().iter().map(|l| 1.0 / l)))
    }
}

/// Spectral effective resistance `R(u, v)`.
pub fn resistance_spectral(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    let q = oriented_residue(u, v, spec.n())?;
    eigenvalues(spec).resistance(q)
}

/// Spanning-tree count from the eigenvalue product.
pub fn tree_count_spectral(spec: &CirculantSpec) -> TreeCount {
    eigenvalues(spec).tree_count()
}

/// Two-component spanning forests separating `u` and `v`: `τ · R(u, v)`.
pub fn forest_count_spectral(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    let q = oriented_residue(u, v, spec.n())?;
    if q == 0 {
        return Err(Error::Domain("forest count needs u != v".into()));
    }
    let spectrum = eigenvalues(spec);
    let r = spectrum.resistance(q)?;
    let tau = spectrum.tree_count();
    Ok(if tau.value.is_finite() {
        tau.value * r
    } else {
        (tau.log + r.ln()).exp()
    })
}

/// Expected hitting time `H(u, v) = (vol/2) · R(u, v)`.
pub fn hitting_time_spectral(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    let r = resistance_spectral(spec, u, v)?;
    let vol = spec.volume().to_f64().unwrap_or(f64::NAN);
    Ok(0.5 * vol * r)
}

/// Kirchhoff index from the spectrum.
pub fn kirchhoff_spectral(spec: &CirculantSpec) -> Result<f64> {
    eigenvalues(spec).kirchhoff()
}

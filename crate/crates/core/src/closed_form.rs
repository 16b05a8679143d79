//! Closed forms for `G_{N,1}` (odd `N ≥ 5`) and, through the isomorphism
//! `x ↦ r⁻¹x`, for every `G_{N,r}` with `gcd(r, N) = 1`.
//!
//! With `Δ = √(N(N−4))` and `ρ = (N − 2 + Δ)/2` every invariant is a
//! rational function of `ρ^N` and a few small powers of `ρ`. Two backends
//! evaluate them:
//!
//! * floating point, with every power rewritten as `ρ^{−m}` relative to the
//!   dominant `ρ^N` so nothing overflows even at `N ≈ 10⁴`;
//! * exact, in [`QuadElem`] arithmetic, where the irrational parts must
//!   cancel and tree and forest counts must come out as integers.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::quadfield::QuadElem;

/// `Δ`, `ρ` and `log ρ` for a fixed odd `N ≥ 5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoConstants {
    pub n: usize,
    pub delta: f64,
    pub rho: f64,
    pub log_rho: f64,
}

fn require_odd(n: usize) -> Result<()> {
    if n % 2 == 1 && n >= 5 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "closed forms require odd N >= 5 (got N = {n})"
        )))
    }
}

fn require_residue(n: usize, q: usize) -> Result<()> {
    if q < n {
        Ok(())
    } else {
        Err(Error::Domain(format!("residue {q} not in 0..{n}")))
    }
}

fn sign(q: usize) -> f64 {
    if q % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn rho_constants(n: usize) -> Result<RhoConstants> {
    require_odd(n)?;
    let nf = n as f64;
    let delta = (nf * (nf - 4.0)).sqrt();
    let rho = (nf - 2.0 + delta) / 2.0;
    Ok(RhoConstants {
        n,
        delta,
        rho,
        log_rho: rho.ln(),
    })
}

impl RhoConstants {
    /// `ρ^{−m}`, computed in log domain.
    fn inv_pow(&self, m: f64) -> f64 {
        (-m * self.log_rho).exp()
    }

    /// `{ρ^N − 1 + (−1)^q(ρ^q − ρ^{N−q})} / ρ^N`, the bracket with the
    /// dominant term factored out.
    fn scaled_bracket(&self, q: usize) -> f64 {
        let n = self.n as f64;
        let q_f = q as f64;
        1.0 - self.inv_pow(n) + sign(q) * (self.inv_pow(n - q_f) - self.inv_pow(q_f))
    }

    /// `(ρ^N + 1) / ρ^N`.
    fn scaled_denominator(&self) -> f64 {
        1.0 + self.inv_pow(self.n as f64)
    }

    /// `log(ρ^N + 1)`.
    fn log_rho_n_plus_one(&self) -> f64 {
        self.n as f64 * self.log_rho + self.inv_pow(self.n as f64).ln_1p()
    }
}

/// Effective resistance in `G_{N,1}` between vertices at oriented residue `q`.
pub fn resistance_closed(n: usize, q: usize) -> Result<f64> {
    let c = rho_constants(n)?;
    require_residue(n, q)?;
    if q == 0 {
        return Ok(0.0);
    }
    Ok(2.0 / c.delta * c.scaled_bracket(q) / c.scaled_denominator())
}

/// `log τ(G_{N,1})`.
pub fn tree_count_closed_log(n: usize) -> Result<f64> {
    let c = rho_constants(n)?;
    let nf = n as f64;
    // τ = (ρ^N + 1)² / (N ρ^{N−1} (ρ + 1)²)
    Ok(2.0 * c.log_rho_n_plus_one()
        - (nf - 1.0) * c.log_rho
        - 2.0 * c.rho.ln_1p()
        - nf.ln())
}

/// Two-component spanning forests separating vertices at residue `q ≠ 0`.
pub fn forest_count_closed(n: usize, q: usize) -> Result<f64> {
    let c = rho_constants(n)?;
    require_residue(n, q)?;
    if q == 0 {
        return Err(Error::Domain("forest count needs q != 0".into()));
    }
    let nf = n as f64;
    // 2(ρ^N+1) ρ^N · scaled_bracket / (Δ N ρ^{N−1} (ρ+1)²)
    let log = std::f64::consts::LN_2 + c.log_rho_n_plus_one() + nf * c.log_rho
        + c.scaled_bracket(q).ln()
        - c.delta.ln()
        - nf.ln()
        - (nf - 1.0) * c.log_rho
        - 2.0 * c.rho.ln_1p();
    Ok(log.exp())
}

/// Expected hitting time in `G_{N,1}`, `N(N−3)/2 · R`.
pub fn hitting_time_closed(n: usize, q: usize) -> Result<f64> {
    let r = resistance_closed(n, q)?;
    let nf = n as f64;
    Ok(0.5 * nf * (nf - 3.0) * r)
}

/// Kirchhoff index of `G_{N,1}`.
pub fn kirchhoff_closed(n: usize) -> Result<f64> {
    let c = rho_constants(n)?;
    let nf = n as f64;
    // N/(Δ(ρ^N+1)) · {(N−1)(ρ^N−1) + 2(ρ^N−ρ)/(ρ+1)}, divided through by ρ^N
    let inner = (nf - 1.0) * (1.0 - c.inv_pow(nf)) + 2.0 * (1.0 - c.inv_pow(nf - 1.0)) / (c.rho + 1.0);
    Ok(nf / c.delta * inner / c.scaled_denominator())
}

/// The relabelling `x ↦ s·x mod N` with `s = r⁻¹`, carrying `G_{N,r}` onto `G_{N,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaMap {
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

impl DeltaMap {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("N = {n} < 3")));
        }
        let r = r % n;
        let ext = (r as i64).extended_gcd(&(n as i64));
        if ext.gcd != 1 {
            return Err(Error::Unsupported(format!(
                "gcd(r, N) = gcd({r}, {n}) = {} > 1; only coprime deletions reduce to r = 1",
                ext.gcd
            )));
        }
        let s = ext.x.rem_euclid(n as i64) as usize;
        Ok(Self { n, r, s })
    }

    /// Image of a vertex under the isomorphism.
    pub fn map_vertex(&self, x: usize) -> usize {
        (self.s * x) % self.n
    }

    /// Distance in `G_{N,1}` corresponding to residue `q` in `G_{N,r}`.
    pub fn reduce(&self, q: usize) -> usize {
        let m = (self.s * (q % self.n)) % self.n;
        m.min(self.n - m)
    }
}

/// `δ_r(q) = min(sq mod N, N − (sq mod N))` with `s = r⁻¹ mod N`.
pub fn reduce_coprime(n: usize, r: usize, q: usize) -> Result<usize> {
    Ok(DeltaMap::new(n, r)?.reduce(q))
}

/// Resistance in `G_{N,r}` transported from `G_{N,1}`.
pub fn resistance_closed_coprime(n: usize, r: usize, q: usize) -> Result<f64> {
    require_odd(n)?;
    require_residue(n, q)?;
    resistance_closed(n, reduce_coprime(n, r, q)?)
}

/// Hitting time in `G_{N,r}` transported from `G_{N,1}`.
pub fn hitting_time_closed_coprime(n: usize, r: usize, q: usize) -> Result<f64> {
    require_odd(n)?;
    require_residue(n, q)?;
    hitting_time_closed(n, reduce_coprime(n, r, q)?)
}

/// Forest count in `G_{N,r}` transported from `G_{N,1}`.
pub fn forest_count_closed_coprime(n: usize, r: usize, q: usize) -> Result<f64> {
    require_odd(n)?;
    require_residue(n, q)?;
    forest_count_closed(n, reduce_coprime(n, r, q)?)
}

/// `log τ(G_{N,r}) = log τ(G_{N,1})` for coprime `r`.
pub fn tree_count_closed_log_coprime(n: usize, r: usize) -> Result<f64> {
    DeltaMap::new(n, r)?;
    tree_count_closed_log(n)
}

/// Laplacian spectrum of `G_{N,r}`: `λ_j = N − 2 + 2cos(2πjr/N)` for `j ≥ 1`.
pub fn eigenvalues_closed(n: usize, r: usize) -> Result<Vec<f64>> {
    require_odd(n)?;
    DeltaMap::new(n, r)?;
    let nf = n as f64;
    Ok((0..n)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                let t = std::f64::consts::PI * ((j * r) % n) as f64 / nf;
                // N − 2 + 2cos(2t) = N − 4sin²(t)
                nf - 4.0 * t.sin().powi(2)
            }
        })
        .collect())
}

/// `S_m(ρ) = Σ_{j=0}^{N−1} ω^{jm} / (ρ + ω^j)` by direct summation.
pub fn root_of_unity_sum(n: usize, m: i64, rho: f64) -> Complex64 {
    let nf = n as f64;
    let m_bar = m.rem_euclid(n as i64) as usize;
    (0..n)
        .map(|j| {
            let omega_j = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / nf);
            let omega_jm = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * ((j * m_bar) % n) as f64 / nf,
            );
            omega_jm / (rho + omega_j)
        })
        .sum()
}

/// `S_m(ρ)` by direct summation in multiprecision arithmetic, for every `m`
/// at a fixed `(N, ρ)`.
///
/// For real `ρ` the sum is real, `Σ_j (ρ cos mθ_j + cos (m−1)θ_j) / (ρ² + 2ρ cos θ_j + 1)`
/// with `θ_j = 2πj/N`. Its value can be as small as `ρ^{−N}` while the terms
/// are of order `1/ρ`, so the working precision grows with `N log₂ ρ`.
pub struct PreciseRootSum {
    n: usize,
    precision: usize,
    rho: BigFloat,
    /// `cos(2πk/N)` for `k = 0..N`.
    cos: Vec<BigFloat>,
    /// `ρ² + 2ρ cos θ_j + 1`.
    denominators: Vec<BigFloat>,
    consts: Consts,
}

const RM: RoundingMode = RoundingMode::ToEven;

impl PreciseRootSum {
    pub fn new(n: usize, rho: f64) -> Result<Self> {
        if n == 0 || !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!(
                "root-of-unity sum needs N >= 1 and finite rho > 0 (got N = {n}, rho = {rho})"
            )));
        }
        let p = 128 + (n as f64 * rho.log2().abs()).ceil() as usize;
        let mut consts =
            Consts::new().map_err(|e| Error::Domain(format!("multiprecision setup: {e}")))?;
        let two_pi = consts.pi(p, RM).mul(&BigFloat::from_f64(2.0, p), p, RM);
        let nb = BigFloat::from_u64(n as u64, p);
        let cos: Vec<BigFloat> = (0..n)
            .map(|k| {
                two_pi
                    .mul(&BigFloat::from_u64(k as u64, p), p, RM)
                    .div(&nb, p, RM)
                    .cos(p, RM, &mut consts)
            })
            .collect();
        let rho_b = BigFloat::from_f64(rho, p);
        let base = rho_b.mul(&rho_b, p, RM).add(&BigFloat::from_f64(1.0, p), p, RM);
        let two_rho = rho_b.mul(&BigFloat::from_f64(2.0, p), p, RM);
        let denominators = cos
            .iter()
            .map(|c| base.add(&two_rho.mul(c, p, RM), p, RM))
            .collect();
        Ok(Self {
            n,
            precision: p,
            rho: rho_b,
            cos,
            denominators,
            consts,
        })
    }

    pub fn eval(&mut self, m: i64) -> Result<f64> {
        let (n, p) = (self.n, self.precision);
        let m_bar = m.rem_euclid(n as i64) as usize;
        let mut total = BigFloat::from_f64(0.0, p);
        for j in 0..n {
            let num = self
                .rho
                .mul(&self.cos[(j * m_bar) % n], p, RM)
                .add(&self.cos[(j * (m_bar + n - 1)) % n], p, RM);
            total = total.add(&num.div(&self.denominators[j], p, RM), p, RM);
        }
        let text = total
            .format(Radix::Dec, RM, &mut self.consts)
            .map_err(|e| Error::Domain(format!("multiprecision format: {e}")))?;
        text.replace(".e", "e")
            .parse::<f64>()
            .map_err(|e| Error::Domain(format!("multiprecision result {text:?}: {e}")))
    }
}

/// One-off [`PreciseRootSum`] evaluation.
pub fn root_of_unity_sum_precise(n: usize, m: i64, rho: f64) -> Result<f64> {
    PreciseRootSum::new(n, rho)?.eval(m)
}

/// The evaluated form of `S_m(ρ)` for odd `N`.
pub fn root_of_unity_sum_closed(n: usize, m: i64, rho: f64) -> Result<f64> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::Domain(format!("root-of-unity sum needs odd N, got {n}")));
    }
    if rho <= 0.0 {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let nf = n as f64;
    let m_bar = m.rem_euclid(n as i64);
    let log_rho = rho.ln();
    // both branches divided through by ρ^N
    let denom = 1.0 + (-nf * log_rho).exp();
    Ok(if m_bar == 0 {
        nf * (-log_rho).exp() / denom
    } else {
        -nf * sign(m_bar as usize) * ((m_bar as f64 - 1.0 - nf) * log_rho).exp() / denom
    })
}

/// Leading-order large-`N` predictions next to the exact ratio they describe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPredictors {
    pub rho_approx: f64,
    pub resistance_limit: f64,
    pub kirchhoff_approx: f64,
    /// `τ(G_{N,1}) / N^{N−2}`.
    pub tree_ratio: f64,
    pub tree_ratio_limit: f64,
}

pub fn asymptotic_predictors(n: usize) -> Result<AsymptoticPredictors> {
    let c = rho_constants(n)?;
    let nf = n as f64;
    Ok(AsymptoticPredictors {
        rho_approx: nf - 2.0 - 1.0 / nf,
        resistance_limit: 2.0 / nf,
        kirchhoff_approx: nf * (nf - 1.0) / c.delta,
        tree_ratio: (tree_count_closed_log(n)? - (nf - 2.0) * nf.ln()).exp(),
        tree_ratio_limit: (-2.0f64).exp(),
    })
}

/// Exact evaluation of the closed forms in `Q(ρ)`.
#[derive(Debug, Clone)]
pub struct ExactClosedForm {
    n: u64,
    rho: QuadElem,
    rho_n: QuadElem,
    /// `2 / (Δ(ρ^N + 1))`
    resistance_prefactor: QuadElem,
}

impl ExactClosedForm {
    pub fn new(n: usize) -> Result<Self> {
        require_odd(n)?;
        let nq = n as u64;
        let rho = QuadElem::rho(nq);
        let rho_n = rho.pow(nq);
        let one = QuadElem::from_integer(1, nq);
        let denom = &QuadElem::delta(nq) * &(&rho_n + &one);
        let resistance_prefactor = QuadElem::from_integer(2, nq).checked_div(&denom)?;
        Ok(Self {
            n: nq,
            rho,
            rho_n,
            resistance_prefactor,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    fn int(&self, x: i64) -> QuadElem {
        QuadElem::from_integer(x, self.n)
    }

    /// `ρ^N − 1 + (−1)^q(ρ^q − ρ^{N−q})`.
    fn bracket(&self, q: usize) -> QuadElem {
        let q = q as u64;
        let diff = &self.rho.pow(q) - &self.rho.pow(self.n - q);
        let signed = if q % 2 == 0 { diff } else { -diff };
        &(&self.rho_n - &self.int(1)) + &signed
    }

    /// The resistance as a field element, before the rationality check.
    pub fn resistance_elem(&self, q: usize) -> Result<QuadElem> {
        require_residue(self.n(), q)?;
        if q == 0 {
            return Ok(self.int(0));
        }
        Ok(&self.resistance_prefactor * &self.bracket(q))
    }

    pub fn resistance(&self, q: usize) -> Result<BigRational> {
        let elem = self.resistance_elem(q)?;
        into_rational(elem, || format!("R(N={}, q={q})", self.n))
    }

    /// `τ(G_{N,1})` as an exact integer.
    pub fn tree_count_elem(&self) -> Result<QuadElem> {
        let one = self.int(1);
        let num = &(&self.rho_n + &one) * &(&self.rho_n + &one);
        let rho_plus_one = &self.rho + &one;
        let den = &(&self.int(self.n as i64) * &self.rho.pow(self.n - 1))
            * &(&rho_plus_one * &rho_plus_one);
        num.checked_div(&den)
    }

    pub fn tree_count(&self) -> Result<BigInt> {
        let elem = self.tree_count_elem()?;
        into_natural(elem, || format!("tau(G_{{{},1}})", self.n))
    }

    /// Forest count `2(ρ^N+1)/(ΔNρ^{N−1}(ρ+1)²) · bracket(q)` as an exact integer.
    pub fn forest_count(&self, q: usize) -> Result<BigInt> {
        require_residue(self.n(), q)?;
        if q == 0 {
            return Err(Error::Domain("forest count needs q != 0".into()));
        }
        let one = self.int(1);
        let rho_plus_one = &self.rho + &one;
        let den = &(&(&QuadElem::delta(self.n) * &self.int(self.n as i64))
            * &self.rho.pow(self.n - 1))
            * &(&rho_plus_one * &rho_plus_one);
        let num = &(&self.int(2) * &(&self.rho_n + &one)) * &self.bracket(q);
        into_natural(num.checked_div(&den)?, || {
            format!("F(N={}, q={q})", self.n)
        })
    }

    pub fn hitting_time(&self, q: usize) -> Result<BigRational> {
        let n = self.n as i64;
        let half_vol = BigRational::new((n * (n - 3)).into(), 2.into());
        Ok(self.resistance(q)? * half_vol)
    }

    /// Kirchhoff index from its closed form.
    pub fn kirchhoff(&self) -> Result<BigRational> {
        let one = self.int(1);
        let n = self.n as i64;
        let geometric = (&self.int(2) * &(&self.rho_n - &self.rho)).checked_div(&(&self.rho + &one))?;
        let braced = &(&self.int(n - 1) * &(&self.rho_n - &one)) + &geometric;
        let den = &QuadElem::delta(self.n) * &(&self.rho_n + &one);
        let elem = (&self.int(n) * &braced).checked_div(&den)?;
        into_rational(elem, || format!("Kf(G_{{{n},1}})"))
    }
}

fn into_rational(elem: QuadElem, what: impl FnOnce() -> String) -> Result<BigRational> {
    match elem.as_rational() {
        Some(r) => Ok(r.clone()),
        None => Err(Error::NotIntegral(format!(
            "{} has irrational part: {elem}",
            what()
        ))),
    }
}

fn into_natural(elem: QuadElem, what: impl FnOnce() -> String) -> Result<BigInt> {
    let r = match elem.as_rational() {
        Some(r) => r,
        None => {
            return Err(Error::NotIntegral(format!(
                "{} has irrational part: {elem}",
                what()
            )))
        }
    };
    if !r.is_integer() || r.is_negative() {
        return Err(Error::NotIntegral(format!(
            "{} = {r} is not a nonnegative integer",
            what()
        )));
    }
    Ok(r.to_integer())
}

/// Exact `τ(G_{N,1})`.
pub fn tree_count_closed_exact(n: usize) -> Result<BigInt> {
    ExactClosedForm::new(n)?.tree_count()
}

/// Exact resistance `R^{(1)}(q)`.
pub fn resistance_closed_exact(n: usize, q: usize) -> Result<BigRational> {
    ExactClosedForm::new(n)?.resistance(q)
}

/// Exact forest count for `G_{N,1}`.
pub fn forest_count_closed_exact(n: usize, q: usize) -> Result<BigInt> {
    ExactClosedForm::new(n)?.forest_count(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn rel(a: f64, b: f64) -> f64 {
        crate::numeric::relative_deviation(a, b)
    }

    #[test]
    fn constants() {
        let c = rho_constants(5).unwrap();
        assert!((c.delta - 2.2360679).abs() < 1e-7);
        assert!((c.rho - 2.6180339887).abs() < 1e-10);
        assert!((c.rho + 1.0 / c.rho - 3.0).abs() < 1e-12);
        let c = rho_constants(7).unwrap();
        assert!((c.delta - 4.5825757).abs() < 1e-7);
        assert!((c.rho - 4.7912878).abs() < 1e-7);
        assert!(matches!(rho_constants(4), Err(Error::Domain(_))));
        assert!(matches!(rho_constants(3), Err(Error::Domain(_))));
    }

    #[test]
    fn rho_identities() {
        for n in (5..=10001).step_by(2) {
            let c = rho_constants(n).unwrap();
            assert!(c.rho > 1.0);
            assert!(rel(c.rho + 1.0 / c.rho, n as f64 - 2.0) < 1e-12);
            assert!(rel(c.rho - 1.0 / c.rho, c.delta) < 1e-12, "N={n}");
        }
    }

    #[test]
    fn resistance_examples() {
        assert!((resistance_closed(5, 2).unwrap() - 0.8).abs() < 1e-14);
        assert!((resistance_closed(5, 1).unwrap() - 1.2).abs() < 1e-14);
        assert_eq!(resistance_closed(9, 0).unwrap(), 0.0);
        assert!(matches!(resistance_closed(6, 1), Err(Error::Domain(_))));
        assert!(matches!(resistance_closed(5, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_values_from_independent_oracle() {
        // frozen from a sympy grounded-Laplacian solve and cofactor expansion
        let e7 = ExactClosedForm::new(7).unwrap();
        assert_eq!(e7.resistance(1).unwrap(), r(48, 91));
        assert_eq!(e7.resistance(2).unwrap(), r(38, 91));
        assert_eq!(e7.resistance(3).unwrap(), r(40, 91));
        assert_eq!(e7.tree_count().unwrap(), BigInt::from(1183));
        assert_eq!(e7.forest_count(1).unwrap(), BigInt::from(624));
        assert_eq!(e7.forest_count(2).unwrap(), BigInt::from(494));
        assert_eq!(e7.kirchhoff().unwrap(), r(126, 13));

        let e9 = ExactClosedForm::new(9).unwrap();
        assert_eq!(e9.tree_count().unwrap(), BigInt::from(412164));
        assert_eq!(e9.resistance(3).unwrap(), r(32, 107));
        assert_eq!(e9.hitting_time(4).unwrap(), r(861, 107));
        assert_eq!(e9.kirchhoff().unwrap(), r(1185, 107));

        assert_eq!(tree_count_closed_exact(5).unwrap(), BigInt::from(5));
        assert_eq!(tree_count_closed_exact(11).unwrap(), BigInt::from(225829571));
        assert_eq!(tree_count_closed_exact(13).unwrap(), BigInt::from(183218439157u64));
        assert_eq!(forest_count_closed_exact(13, 6).unwrap(), BigInt::from(33877083120u64));
        assert_eq!(ExactClosedForm::new(5).unwrap().kirchhoff().unwrap(), r(10, 1));
    }

    #[test]
    fn forest_and_hitting_examples() {
        assert!((forest_count_closed(5, 2).unwrap() - 4.0).abs() < 1e-12);
        assert!((forest_count_closed(5, 1).unwrap() - 6.0).abs() < 1e-12);
        assert!((forest_count_closed(7, 1).unwrap() - 624.0).abs() < 1e-9);
        assert!(matches!(forest_count_closed(5, 0), Err(Error::Domain(_))));
        assert!(matches!(forest_count_closed_exact(5, 0), Err(Error::Domain(_))));
        assert!((hitting_time_closed(5, 2).unwrap() - 4.0).abs() < 1e-13);
        assert!((hitting_time_closed(5, 1).unwrap() - 6.0).abs() < 1e-13);
        assert_eq!(hitting_time_closed(7, 0).unwrap(), 0.0);
        assert!((tree_count_closed_log(7).unwrap() - 1183f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn kirchhoff_examples() {
        assert!((kirchhoff_closed(5).unwrap() - 10.0).abs() < 1e-12);
        assert!(rel(kirchhoff_closed(7).unwrap(), 126.0 / 13.0) < 1e-12);
        let pairwise: f64 = (1..9).map(|q| resistance_closed(9, q).unwrap()).sum::<f64>() * 4.5;
        assert!(rel(kirchhoff_closed(9).unwrap(), pairwise) < 1e-9);
    }

    #[test]
    fn exact_reflection_and_positivity() {
        for n in (5..=31).step_by(2) {
            let e = ExactClosedForm::new(n).unwrap();
            for q in 1..n {
                let a = e.resistance(q).unwrap();
                assert_eq!(a, e.resistance(n - q).unwrap(), "N={n} q={q}");
                assert!(a.is_positive());
                let f = e.forest_count(q).unwrap();
                assert!(f.is_positive());
                let fl = resistance_closed(n, q).unwrap();
                assert!(rel(a.to_f64().unwrap(), fl) < 1e-12);
            }
            assert!(e.tree_count().unwrap().is_positive());
        }
    }

    #[test]
    fn large_n_stays_finite() {
        for n in [201usize, 1001, 10001] {
            let r = resistance_closed(n, 3).unwrap();
            assert!(r.is_finite() && r > 0.0);
            assert!(kirchhoff_closed(n).unwrap().is_finite());
            assert!(tree_count_closed_log(n).unwrap().is_finite());
            assert!(forest_count_closed(n, 1).unwrap().is_infinite() || n < 300);
        }
    }

    #[test]
    fn coprime_reduction_examples() {
        assert_eq!(reduce_coprime(5, 2, 1).unwrap(), 2);
        assert!((resistance_closed_coprime(5, 2, 1).unwrap() - 0.8).abs() < 1e-14);
        assert_eq!(reduce_coprime(7, 2, 1).unwrap(), 3);
        assert_eq!(reduce_coprime(9, 1, 4).unwrap(), 4);
        assert!(matches!(reduce_coprime(9, 3, 1), Err(Error::Unsupported(_))));
        assert!(matches!(
            tree_count_closed_log_coprime(15, 5),
            Err(Error::Unsupported(_))
        ));
        let m = DeltaMap::new(7, 2).unwrap();
        assert_eq!(m.s, 4);
        let mut image: Vec<_> = (0..7).map(|x| m.map_vertex(x)).collect();
        image.sort_unstable();
        assert_eq!(image, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn eigenvalues_match_fourier_sums() {
        for (n, r) in [(5, 1), (7, 2), (9, 4), (15, 7)] {
            let spec = crate::CirculantSpec::single_class(n, r).unwrap();
            let spectral = crate::spectral::eigenvalues(&spec).eigenvalues;
            let closed = eigenvalues_closed(n, r).unwrap();
            for (a, b) in closed.iter().zip(&spectral) {
                assert!((a - b).abs() < 1e-12 * n as f64, "N={n} r={r}");
            }
        }
        assert!(eigenvalues_closed(9, 3).is_err());
    }

    #[test]
    fn root_of_unity_sum_examples() {
        let rho = rho_constants(5).unwrap().rho;
        let direct = root_of_unity_sum(5, 0, rho);
        let expected = 5.0 * rho.powi(4) / (rho.powi(5) + 1.0);
        assert!((direct.re - 1.894427191).abs() < 1e-9);
        assert!(rel(direct.re, expected) < 1e-12 && direct.im.abs() < 1e-12);
        assert!((root_of_unity_sum(5, 5, rho) - direct).norm() < 1e-12);
        let rho7 = rho_constants(7).unwrap().rho;
        let s = root_of_unity_sum(7, 3, rho7);
        let expected = 7.0 * rho7.powi(2) / (rho7.powi(7) + 1.0);
        assert!(rel(s.re, expected) < 1e-12);
        assert!(rel(root_of_unity_sum_closed(7, 3, rho7).unwrap(), expected) < 1e-12);
        assert!(root_of_unity_sum_closed(6, 0, 2.0).is_err());
        assert!(rel(root_of_unity_sum_precise(7, 3, rho7).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn precise_sum_resolves_exponentially_small_values() {
        // m = 1 at N = 31 is about ρ^{−31} ≈ 1e-45, far below f64 summation noise
        let rho = rho_constants(31).unwrap().rho;
        let closed = root_of_unity_sum_closed(31, 1, rho).unwrap();
        assert!(closed.abs() < 1e-40);
        let precise = root_of_unity_sum_precise(31, 1, rho).unwrap();
        assert!(rel(precise, closed) < 1e-12, "{precise} vs {closed}");
        assert!(root_of_unity_sum_precise(5, 0, -1.0).is_err());
    }

    #[test]
    fn asymptotics() {
        let a = asymptotic_predictors(5).unwrap();
        assert!((a.rho_approx - 2.8).abs() < 1e-12);
        assert!((a.tree_ratio_limit - 0.1353352832).abs() < 1e-10);
        let a = asymptotic_predictors(2001).unwrap();
        assert!((a.tree_ratio - a.tree_ratio_limit).abs() < 1e-2);
    }

    proptest! {
        #[test]
        fn float_reflection(k in 2usize..2000, q in 1usize..4000) {
            let n = 2 * k + 1;
            let q = q % n;
            prop_assume!(q != 0);
            let a = resistance_closed(n, q).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!(rel(a, resistance_closed(n, n - q).unwrap()) < 1e-13);
        }

        #[test]
        fn root_of_unity_identity(k in 2usize..16, m in -100i64..100, rho in 0.1f64..40.0) {
            let n = 2 * k + 1;
            let direct = root_of_unity_sum(n, m, rho);
            let closed = root_of_unity_sum_closed(n, m, rho).unwrap();
            prop_assert!((direct.re - closed).abs() <= 1e-9 * closed.abs().max(1e-12) + 1e-14);
            prop_assert!(direct.im.abs() <= 1e-9 * closed.abs().max(1.0));
        }
    }
}

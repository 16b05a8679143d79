//! Cross-method verification: closed forms, spectral sums and oracles
//! evaluated side by side on every spec in a range of `N`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::closed_form::{self, DeltaMap, ExactClosedForm};
use crate::compute::closed_form_class;
use crate::error::{Error, Result};
use crate::graph::CirculantSpec;
use crate::numeric::relative_deviation;
use crate::oracles::{self, OracleValue, WalkConfig, EXACT_SOLVE_MAX_N};
use crate::report::{Method, Quantity, Tolerances, Value, VerificationCase, VerificationReport};
use crate::spectral;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub odd_only: bool,
    /// Deletion sets to check at every `N`; `None` means each single class
    /// `r ∈ 1..=⌊N/2⌋`.
    pub classes: Option<Vec<Vec<usize>>>,
    pub tolerances: Tolerances,
    /// `(seed, walks)` to add a Monte Carlo hitting-time check per spec.
    pub monte_carlo: Option<(u64, usize)>,
}

impl VerifyConfig {
    pub fn new(n_min: usize, n_max: usize) -> Self {
        Self {
            n_min,
            n_max,
            odd_only: false,
            classes: None,
            tolerances: Tolerances::default(),
            monte_carlo: None,
        }
    }

    fn specs(&self) -> Result<Vec<CirculantSpec>> {
        if self.n_min < 3 || self.n_min > self.n_max {
            return Err(Error::Domain(format!(
                "invalid range {}..={} (need 3 <= n_min <= n_max)",
                self.n_min, self.n_max
            )));
        }
        if self.n_max > EXACT_SOLVE_MAX_N {
            return Err(Error::Domain(format!(
                "verify covers N <= {EXACT_SOLVE_MAX_N}, the exact oracle range (got n_max = {})",
                self.n_max
            )));
        }
        let mut specs = Vec::new();
        for n in self.n_min..=self.n_max {
            if self.odd_only && n % 2 == 0 {
                continue;
            }
            match &self.classes {
                Some(sets) => {
                    for s in sets {
                        specs.push(CirculantSpec::deletion(n, s.iter().copied())?);
                    }
                }
                None => {
                    for r in 1..=n / 2 {
                        specs.push(CirculantSpec::single_class(n, r)?);
                    }
                }
            }
        }
        Ok(specs)
    }
}

/// Run the full matrix. Case order is deterministic: by `N`, then class, then
/// quantity, then pair.
pub fn verify(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let specs = cfg.specs()?;
    let per_spec: Vec<(Vec<VerificationCase>, Option<String>)> = specs
        .par_iter()
        .map(|spec| verify_spec(spec, cfg))
        .collect::<Result<_>>()?;
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for (c, s) in per_spec {
        cases.extend(c);
        skipped.extend(s);
    }
    Ok(VerificationReport::new(
        cfg.tolerances,
        cfg.monte_carlo.map(|(seed, _)| seed),
        cases,
        skipped,
    ))
}

/// Deviations across every pair of methods.
#[derive(Debug, Default, Clone, Copy)]
struct Deviation {
    abs: f64,
    rel: f64,
    exact_mismatch: bool,
}

fn deviation(values: &BTreeMap<Method, OracleValue>) -> Deviation {
    let list: Vec<&OracleValue> = values.values().collect();
    let mut d = Deviation::default();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            let (abs, rel) = match (a.exact(), b.exact()) {
                (Some(x), Some(y)) => {
                    let diff = x - y;
                    d.exact_mismatch |= !diff.is_zero();
                    (
                        diff.to_f64().unwrap_or(f64::INFINITY).abs(),
                        relative_deviation(a.to_f64(), b.to_f64()),
                    )
                }
                _ => {
                    let (x, y) = (a.to_f64(), b.to_f64());
                    ((x - y).abs(), relative_deviation(x, y))
                }
            };
            d.abs = d.abs.max(abs);
            d.rel = d.rel.max(rel);
        }
    }
    d
}

fn make_case(
    spec: &CirculantSpec,
    quantity: Quantity,
    pair: Option<(usize, usize)>,
    values: BTreeMap<Method, OracleValue>,
    tol: f64,
    mut notes: Vec<String>,
) -> VerificationCase {
    let d = deviation(&values);
    if d.exact_mismatch {
        notes.push("exact values disagree".into());
    }
    let finite = values.values().all(|v| v.to_f64().is_finite());
    if !finite {
        notes.push("non-finite value".into());
    }
    let pass = !d.exact_mismatch && finite && d.rel <= tol && notes.iter().all(|n| !n.starts_with("identity"));
    VerificationCase {
        spec: spec.clone(),
        quantity,
        pair,
        values: values.iter().map(|(m, v)| (*m, Value::from(v))).collect(),
        max_abs_dev: d.abs,
        max_rel_dev: d.rel,
        monte_carlo_sigmas: None,
        pass,
        notes,
    }
}

fn exact(r: BigRational) -> OracleValue {
    OracleValue::Exact(r)
}

fn exact_int(k: BigInt) -> OracleValue {
    OracleValue::Exact(BigRational::from_integer(k))
}

fn verify_spec(
    spec: &CirculantSpec,
    cfg: &VerifyConfig,
) -> Result<(Vec<VerificationCase>, Option<String>)> {
    let n = spec.n();
    let tol = &cfg.tolerances;
    let spectrum = spectral::eigenvalues(spec);

    if !spec.is_connected() {
        let mut values = BTreeMap::new();
        values.insert(Method::Spectral, OracleValue::Float(spectrum.tree_count().value));
        values.insert(Method::Oracle, exact(oracles::tree_count_oracle(spec)));
        let mut notes = vec!["disconnected".to_string()];
        if spectrum.resistance(1).is_ok() {
            notes.push("identity: spectral resistance should fail on a disconnected graph".into());
        }
        let mut case = make_case(spec, Quantity::Trees, None, values, tol.trees, notes);
        let tau_zero = case.values.values().all(|v| v.to_f64() == Some(0.0));
        case.pass &= tau_zero;
        return Ok((vec![case], None));
    }

    let (delta, skipped) = match closed_form_class(spec) {
        Ok(d) => (Some(d), None),
        Err(e) => (
            None,
            Some(format!("N={n} {}: closed forms skipped ({e})", spec.label())),
        ),
    };
    let closed = delta.map(|_| ExactClosedForm::new(n)).transpose()?;
    let transport_note = |d: &DeltaMap| -> Vec<String> {
        if d.r == 1 {
            vec![]
        } else {
            vec![format!("closed form transported from r = 1 via x -> {}x", d.s)]
        }
    };

    let mut cases = Vec::new();
    let vol = spec.volume();
    let resist_col = oracles::resistances_to(spec, 0)?;
    let hit_col = oracles::hitting_times_to(spec, 0)?;
    let tau_oracle = oracles::tree_count_oracle(spec);

    // spanning trees
    {
        let mut values = BTreeMap::new();
        let tau = spectrum.tree_count();
        values.insert(Method::Spectral, OracleValue::Float(tau.value));
        values.insert(Method::Oracle, exact(tau_oracle.clone()));
        let mut notes = Vec::new();
        if let (Some(cf), Some(d)) = (&closed, &delta) {
            values.insert(Method::Closed, exact_int(cf.tree_count()?));
            notes = transport_note(d);
        }
        if let Some(k) = tau.nearest_integer {
            if BigRational::from_integer(k.into()) != tau_oracle {
                notes.push(format!("identity: rounded spectral count {k} differs from oracle"));
            }
        }
        cases.push(make_case(spec, Quantity::Trees, None, values, tol.trees, notes));
    }

    for q in 1..n {
        let pair = Some((q, 0));
        let h = delta.map(|d| d.reduce(q));
        let r_oracle = resist_col[q].clone();

        let mut values = BTreeMap::new();
        values.insert(Method::Spectral, OracleValue::Float(spectrum.resistance(n - q)?));
        values.insert(Method::Oracle, exact(r_oracle.clone()));
        let mut notes = delta.as_ref().map(transport_note).unwrap_or_default();
        if let (Some(cf), Some(h)) = (&closed, h) {
            values.insert(Method::Closed, exact(cf.resistance(h)?));
            // the float backend is held to the same tolerance
            let float = closed_form::resistance_closed(n, h)?;
            let dev = relative_deviation(float, r_oracle.to_f64().unwrap_or(f64::NAN));
            if dev > tol.resistance {
                notes.push(format!("identity: float closed form off by {dev:.3e}"));
            }
        }
        cases.push(make_case(spec, Quantity::Resistance, pair, values, tol.resistance, notes));

        let mut values = BTreeMap::new();
        let forest_oracle = oracles::forest_count_oracle(spec, q, 0)?;
        values.insert(Method::Spectral, OracleValue::Float(spectral::forest_count_spectral(spec, q, 0)?));
        values.insert(Method::Oracle, exact(forest_oracle.clone()));
        if let (Some(cf), Some(h)) = (&closed, h) {
            values.insert(Method::Closed, exact_int(cf.forest_count(h)?));
        }
        let mut notes = Vec::new();
        if forest_oracle != &tau_oracle * &r_oracle {
            notes.push("identity: forest minor differs from tau * R".into());
        }
        cases.push(make_case(spec, Quantity::Forests, pair, values, tol.forests, notes));

        let mut values = BTreeMap::new();
        let h_oracle = hit_col[q].clone();
        values.insert(
            Method::Spectral,
            OracleValue::Float(spectral::hitting_time_spectral(spec, q, 0)?),
        );
        values.insert(Method::Oracle, exact(h_oracle.clone()));
        if let (Some(cf), Some(h)) = (&closed, h) {
            values.insert(Method::Closed, exact(cf.hitting_time(h)?));
        }
        let mut notes = Vec::new();
        // H(q, 0) + H(0, q) = vol · R, with H(0, q) = H(N − q, 0) by rotation
        if &h_oracle + &hit_col[n - q] != &vol * &r_oracle {
            notes.push("identity: commute time differs from vol * R".into());
        }
        if h_oracle != hit_col[n - q] {
            notes.push("identity: hitting times are not symmetric".into());
        }
        let mut case = make_case(spec, Quantity::Hitting, pair, values, tol.hitting, notes);
        if let (Some((seed, walks)), true) = (cfg.monte_carlo, q == n / 2) {
            let est = oracles::hitting_time_monte_carlo(spec, q, 0, &WalkConfig::new(seed, walks, n))?;
            let reference = h_oracle.to_f64().unwrap_or(f64::NAN);
            let sigmas = if est.stderr > 0.0 {
                (est.mean - reference).abs() / est.stderr
            } else if est.mean == reference {
                0.0
            } else {
                f64::INFINITY
            };
            case.values.insert(Method::MonteCarlo, Value::Number(est.mean));
            case.monte_carlo_sigmas = Some(sigmas);
            if sigmas > tol.monte_carlo_sigmas {
                case.pass = false;
                case.notes.push(format!("monte carlo off by {sigmas:.2} standard errors"));
            }
        }
        cases.push(case);
    }

    {
        let mut values = BTreeMap::new();
        values.insert(Method::Spectral, OracleValue::Float(spectrum.kirchhoff()?));
        let total: BigRational = resist_col.iter().cloned().sum();
        values.insert(
            Method::Oracle,
            exact(total * BigRational::new(BigInt::from(n), BigInt::from(2))),
        );
        if let Some(cf) = &closed {
            values.insert(Method::Closed, exact(cf.kirchhoff()?));
        }
        cases.push(make_case(spec, Quantity::Kirchhoff, None, values, tol.kirchhoff, vec![]));
    }

    cases.push(eigen_case(spec, &spectrum.eigenvalues, delta, tol.eigenvalues)?);
    Ok((cases, skipped))
}

/// Spectra compared as sorted multisets, relative to the largest eigenvalue.
fn eigen_case(
    spec: &CirculantSpec,
    spectral_values: &[f64],
    delta: Option<DeltaMap>,
    tol: f64,
) -> Result<VerificationCase> {
    let mut lists: BTreeMap<Method, Vec<f64>> = BTreeMap::new();
    lists.insert(Method::Spectral, spectral_values.to_vec());
    lists.insert(Method::Oracle, oracles::eigenvalues_oracle(spec));
    if let Some(d) = delta {
        lists.insert(Method::Closed, closed_form::eigenvalues_closed(spec.n(), d.r)?);
    }
    let sorted: Vec<Vec<f64>> = lists
        .values()
        .map(|l| {
            let mut l = l.clone();
            l.sort_by(f64::total_cmp);
            l
        })
        .collect();
    let scale = sorted[0].iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut abs = 0.0f64;
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            for (x, y) in a.iter().zip(b) {
                abs = abs.max((x - y).abs());
            }
        }
    }
    let rel = abs / scale;
    Ok(VerificationCase {
        spec: spec.clone(),
        quantity: Quantity::Eigenvalues,
        pair: None,
        values: lists.into_iter().map(|(m, l)| (m, Value::List(l))).collect(),
        max_abs_dev: abs,
        max_rel_dev: rel,
        monte_carlo_sigmas: None,
        pass: rel <= tol,
        notes: vec![],
    })
}

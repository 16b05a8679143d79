//! Dispatch of `(quantity, method)` requests to the three computation paths.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::closed_form::{self, DeltaMap, ExactClosedForm};
use crate::error::{Error, Result};
use crate::graph::{CirculantSpec, VertexPair};
use crate::oracles::{self, OracleValue, WalkConfig};
use crate::report::{InvariantResult, Metadata, Method, Quantity, Representation, Value};
use crate::spectral::{self, Spectrum};

/// Walks used by Monte Carlo when none are requested.
pub const DEFAULT_WALKS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct Request {
    pub spec: CirculantSpec,
    pub quantity: Quantity,
    pub method: Method,
    /// Vertex pairs for pair quantities; empty means `(0, q)` for every `q ≥ 1`.
    pub pairs: Vec<(usize, usize)>,
    /// Ask for exact rationals instead of floats.
    pub exact: bool,
    pub seed: u64,
    pub walks: Option<usize>,
}

impl Request {
    pub fn new(spec: CirculantSpec, quantity: Quantity, method: Method) -> Self {
        Self {
            spec,
            quantity,
            method,
            pairs: Vec::new(),
            exact: false,
            seed: 0,
            walks: None,
        }
    }

    fn resolved_pairs(&self) -> Result<Vec<VertexPair>> {
        let n = self.spec.n();
        if self.pairs.is_empty() {
            (1..n).map(|q| VertexPair::new(0, q, n)).collect()
        } else {
            self.pairs
                .iter()
                .map(|&(u, v)| VertexPair::new(u, v, n))
                .collect()
        }
    }
}

/// The deleted class `r` and its reduction map, when closed forms apply.
pub fn closed_form_class(spec: &CirculantSpec) -> Result<DeltaMap> {
    let n = spec.n();
    if n % 2 == 0 || n < 5 {
        return Err(Error::Domain(format!(
            "closed forms require odd N >= 5 (got N = {n})"
        )));
    }
    let r = spec.single_deleted_class().ok_or_else(|| {
        Error::Unsupported(format!(
            "closed forms require exactly one deleted distance class (got {})",
            spec.label()
        ))
    })?;
    DeltaMap::new(n, r)
}

/// Evaluate one request; one record per pair for pair quantities, one record otherwise.
pub fn compute(req: &Request) -> Result<Vec<InvariantResult>> {
    if req.exact && matches!(req.method, Method::Spectral | Method::MonteCarlo) {
        return Err(Error::Unsupported(format!(
            "{} results are floating point; exact values need --method closed or oracle",
            req.method
        )));
    }
    if req.method == Method::MonteCarlo && req.quantity != Quantity::Hitting {
        return Err(Error::Unsupported(
            "monte-carlo estimates hitting times only".into(),
        ));
    }
    let mut engine = Engine::new(req)?;
    if req.quantity.needs_pair() {
        let pairs = req.resolved_pairs()?;
        pairs
            .into_iter()
            .map(|p| engine.record(Some(p)))
            .collect()
    } else {
        Ok(vec![engine.record(None)?])
    }
}

/// Per-request caches so that many pairs share one spectrum, one exact
/// closed-form field, or one grounded solve.
struct Engine<'a> {
    req: &'a Request,
    delta: Option<DeltaMap>,
    exact_closed: Option<ExactClosedForm>,
    spectrum: Option<Spectrum>,
    oracle_columns: HashMap<usize, Vec<BigRational>>,
}

impl<'a> Engine<'a> {
    fn new(req: &'a Request) -> Result<Self> {
        let delta = if req.method == Method::Closed {
            Some(closed_form_class(&req.spec)?)
        } else {
            None
        };
        if req.quantity == Quantity::Eigenvalues && req.exact {
            return Err(Error::Unsupported(
                "eigenvalues are irrational; drop --exact".into(),
            ));
        }
        Ok(Self {
            req,
            delta,
            exact_closed: None,
            spectrum: None,
            oracle_columns: HashMap::new(),
        })
    }

    fn n(&self) -> usize {
        self.req.spec.n()
    }

    fn exact_closed(&mut self) -> Result<&ExactClosedForm> {
        if self.exact_closed.is_none() {
            self.exact_closed = Some(ExactClosedForm::new(self.n())?);
        }
        Ok(self.exact_closed.as_ref().expect("just set"))
    }

    fn spectrum(&mut self) -> &Spectrum {
        let spec = &self.req.spec;
        self.spectrum.get_or_insert_with(|| spectral::eigenvalues(spec))
    }

    fn record(&mut self, pair: Option<VertexPair>) -> Result<InvariantResult> {
        let start = Instant::now();
        let mut metadata = Metadata::default();
        if let Some(p) = pair {
            metadata.q = Some(p.q);
            metadata.u = Some(p.u);
            metadata.v = Some(p.v);
        }
        if let Some(d) = self.delta {
            metadata.r = Some(d.r);
        }
        let (representation, value) = match self.req.method {
            Method::Closed => self.closed(pair)?,
            Method::Spectral => self.spectral(pair, &mut metadata)?,
            Method::Oracle => self.oracle(pair, &mut metadata)?,
            Method::MonteCarlo => self.monte_carlo(pair.expect("pair quantity"), &mut metadata)?,
        };
        metadata.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        Ok(InvariantResult {
            spec: self.req.spec.clone(),
            quantity: self.req.quantity,
            method: self.req.method,
            representation,
            value,
            metadata,
        })
    }

    fn closed(&mut self, pair: Option<VertexPair>) -> Result<(Representation, Value)> {
        let n = self.n();
        let delta = self.delta.expect("closed requests carry a DeltaMap");
        let reduced = pair.map(|p| delta.reduce(p.q));
        let exact = self.req.exact;
        Ok(match self.req.quantity {
            Quantity::Resistance => {
                let h = reduced.expect("pair quantity");
                if exact {
                    rational(&self.exact_closed()?.resistance(h)?)
                } else {
                    float(closed_form::resistance_closed(n, h)?)
                }
            }
            Quantity::Hitting => {
                let h = reduced.expect("pair quantity");
                if exact {
                    rational(&self.exact_closed()?.hitting_time(h)?)
                } else {
                    float(closed_form::hitting_time_closed(n, h)?)
                }
            }
            Quantity::Forests => {
                let h = reduced.expect("pair quantity");
                if exact {
                    integer(&self.exact_closed()?.forest_count(h)?)
                } else {
                    float(closed_form::forest_count_closed(n, h)?)
                }
            }
            Quantity::Trees => {
                if exact {
                    integer(&self.exact_closed()?.tree_count()?)
                } else {
                    log_or_float(closed_form::tree_count_closed_log(n)?)
                }
            }
            Quantity::Kirchhoff => {
                if exact {
                    rational(&self.exact_closed()?.kirchhoff()?)
                } else {
                    float(closed_form::kirchhoff_closed(n)?)
                }
            }
            Quantity::Eigenvalues => (
                Representation::Float,
                Value::List(closed_form::eigenvalues_closed(n, delta.r)?),
            ),
        })
    }

    fn spectral(
        &mut self,
        pair: Option<VertexPair>,
        metadata: &mut Metadata,
    ) -> Result<(Representation, Value)> {
        let req = self.req;
        let vol = req.spec.volume().to_f64().unwrap_or(f64::NAN);
        let spectrum = self.spectrum();
        Ok(match req.quantity {
            Quantity::Resistance => float(spectrum.resistance(pair.expect("pair").q)?),
            Quantity::Hitting => float(0.5 * vol * spectrum.resistance(pair.expect("pair").q)?),
            Quantity::Forests => {
                let p = pair.expect("pair");
                if p.q == 0 {
                    return Err(Error::Domain("forest count needs u != v".into()));
                }
                let r = spectrum.resistance(p.q)?;
                let tau = spectrum.tree_count();
                if tau.value.is_finite() {
                    float(tau.value * r)
                } else {
                    (Representation::Log, Value::Number(tau.log + r.ln()))
                }
            }
            Quantity::Trees => {
                let tau = spectrum.tree_count();
                if let Some(k) = tau.nearest_integer {
                    metadata.note = Some(format!("nearest integer {k}"));
                }
                if tau.value.is_finite() {
                    float(tau.value)
                } else {
                    (Representation::Log, Value::Number(tau.log))
                }
            }
            Quantity::Kirchhoff => float(spectrum.kirchhoff()?),
            Quantity::Eigenvalues => (
                Representation::Float,
                Value::List(spectrum.eigenvalues.clone()),
            ),
        })
    }

    /// Exact column `R(·, v)` or `H(·, v)` from one grounded solve.
    fn oracle_column(&mut self, v: usize) -> Result<&Vec<BigRational>> {
        if !self.oracle_columns.contains_key(&v) {
            let column = match self.req.quantity {
                Quantity::Resistance => oracles::resistances_to(&self.req.spec, v)?,
                Quantity::Hitting => oracles::hitting_times_to(&self.req.spec, v)?,
                _ => unreachable!("only resistance and hitting use columns"),
            };
            self.oracle_columns.insert(v, column);
        }
        Ok(&self.oracle_columns[&v])
    }

    fn oracle(
        &mut self,
        pair: Option<VertexPair>,
        metadata: &mut Metadata,
    ) -> Result<(Representation, Value)> {
        let req = self.req;
        let spec = &req.spec;
        let exact = req.exact || self.n() <= oracles::EXACT_SOLVE_MAX_N;
        Ok(match req.quantity {
            Quantity::Resistance | Quantity::Hitting => {
                let p = pair.expect("pair");
                if exact {
                    let value = self.oracle_column(p.v)?[p.u].clone();
                    rational(&value)
                } else if req.quantity == Quantity::Resistance {
                    float(oracles::resistance_oracle_float(spec, p.u, p.v)?)
                } else {
                    float(oracles::hitting_time_oracle_float(spec, p.u, p.v)?)
                }
            }
            Quantity::Forests => {
                let p = pair.expect("pair");
                rational(&oracles::forest_count_oracle(spec, p.u, p.v)?)
            }
            Quantity::Trees => rational(&oracles::tree_count_oracle(spec)),
            Quantity::Kirchhoff => {
                if exact && self.n() > oracles::EXACT_SOLVE_MAX_N {
                    let column = oracles::resistances_to(spec, 0)?;
                    let total: BigRational = column.into_iter().sum();
                    rational(&(total * BigRational::new(BigInt::from(self.n()), BigInt::from(2))))
                } else {
                    match oracles::kirchhoff_oracle(spec)? {
                        OracleValue::Exact(r) => rational(&r),
                        OracleValue::Float(x) => float(x),
                    }
                }
            }
            Quantity::Eigenvalues => {
                metadata.note = Some("sorted ascending".into());
                (
                    Representation::Float,
                    Value::List(oracles::eigenvalues_oracle(spec)),
                )
            }
        })
    }

    fn monte_carlo(
        &mut self,
        pair: VertexPair,
        metadata: &mut Metadata,
    ) -> Result<(Representation, Value)> {
        let walks = self.req.walks.unwrap_or(DEFAULT_WALKS);
        let cfg = WalkConfig::new(self.req.seed, walks, self.n());
        let est = oracles::hitting_time_monte_carlo(&self.req.spec, pair.u, pair.v, &cfg)?;
        metadata.seed = Some(est.seed);
        metadata.walks = Some(walks);
        metadata.max_steps = Some(cfg.max_steps);
        metadata.truncated = Some(est.truncated);
        metadata.stderr = Some(est.stderr);
        Ok(float(est.mean))
    }
}

fn float(x: f64) -> (Representation, Value) {
    (Representation::Float, Value::Number(x))
}

fn rational(r: &BigRational) -> (Representation, Value) {
    (Representation::Rational, Value::exact(r))
}

fn integer(k: &BigInt) -> (Representation, Value) {
    (Representation::Rational, Value::integer(k))
}

/// `τ` as a float while it fits, otherwise `log τ`.
fn log_or_float(log: f64) -> (Representation, Value) {
    let value = log.exp();
    if value.is_finite() {
        float(value)
    } else {
        (Representation::Log, Value::Number(log))
    }
}

//! Circulant graph specifications on `Z_N`.
//!
//! A graph is described by its vertex count and a weight for every
//! circulant distance `k ∈ {1..⌊N/2⌋}`; two vertices at distance `k` are
//! joined by an edge of weight `w(k)`. Deleting distance classes from `K_N`
//! is the special case of 0/1 weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

/// Oriented residue `(v - u) mod n`.
pub fn oriented_residue(u: usize, v: usize, n: usize) -> Result<usize> {
    check_vertex(u, n)?;
    check_vertex(v, n)?;
    Ok((v + n - u) % n)
}

/// Unoriented circulant distance `min(q, n - q)`.
pub fn circulant_distance(u: usize, v: usize, n: usize) -> Result<usize> {
    let q = oriented_residue(u, v, n)?;
    Ok(q.min(n - q))
}

fn check_vertex(x: usize, n: usize) -> Result<()> {
    if x < n {
        Ok(())
    } else {
        Err(Error::Domain(format!("vertex {x} is not in Z_{n}")))
    }
}

/// A validated ordered pair of vertices with its residue and distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexPair {
    pub u: usize,
    pub v: usize,
    pub q: usize,
    pub h: usize,
}

impl VertexPair {
    pub fn new(u: usize, v: usize, n: usize) -> Result<Self> {
        let q = oriented_residue(u, v, n)?;
        Ok(Self {
            u,
            v,
            q,
            h: q.min(n - q),
        })
    }
}

/// Vertex count plus a distance-weight profile.
///
/// Weights are stored for every distance `1..=⌊N/2⌋`; distances missing from
/// a weighted constructor get weight zero. When the spec was built from a
/// deletion set, `deleted` remembers it and the weights are its 0/1 indicator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct CirculantSpec {
    n: usize,
    weights: BTreeMap<usize, BigRational>,
    deleted: Option<BTreeSet<usize>>,
}

impl CirculantSpec {
    /// `K_n` with every edge whose circulant distance lies in `deleted` removed.
    pub fn deletion<I: IntoIterator<Item = usize>>(n: usize, deleted: I) -> Result<Self> {
        check_n(n)?;
        let deleted: BTreeSet<usize> = deleted.into_iter().collect();
        for &k in &deleted {
            check_distance(k, n)?;
        }
        let weights = (1..=n / 2)
            .map(|k| {
                let w = if deleted.contains(&k) {
                    BigRational::zero()
                } else {
                    BigRational::one()
                };
                (k, w)
            })
            .collect();
        Ok(Self {
            n,
            weights,
            deleted: Some(deleted),
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::deletion(n, [])
    }

    /// `G_{n,r}`: `K_n` minus the single distance class `r`.
    pub fn single_class(n: usize, r: usize) -> Result<Self> {
        Self::deletion(n, [r])
    }

    /// General nonnegative rational weights; absent distances get weight 0.
    pub fn weighted(n: usize, weights: BTreeMap<usize, BigRational>) -> Result<Self> {
        check_n(n)?;
        for (&k, w) in &weights {
            check_distance(k, n)?;
            if w.is_negative() {
                return Err(Error::InvalidSpec(format!(
                    "weight w({k}) = {w} is negative"
                )));
            }
        }
        let weights = (1..=n / 2)
            .map(|k| (k, weights.get(&k).cloned().unwrap_or_else(BigRational::zero)))
            .collect();
        Ok(Self {
            n,
            weights,
            deleted: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The deletion set, when the spec was built from one.
    pub fn deleted(&self) -> Option<&BTreeSet<usize>> {
        self.deleted.as_ref()
    }

    /// `Some(r)` when the spec is `K_n` minus exactly one distance class.
    pub fn single_deleted_class(&self) -> Option<usize> {
        match &self.deleted {
            Some(s) if s.len() == 1 => s.iter().next().copied(),
            _ => None,
        }
    }

    pub fn weights(&self) -> &BTreeMap<usize, BigRational> {
        &self.weights
    }

    /// `w(k)` for `k ∈ 1..=⌊N/2⌋`; zero for anything else.
    pub fn weight(&self, k: usize) -> BigRational {
        self.weights
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn weight_f64(&self, k: usize) -> f64 {
        self.weights
            .get(&k)
            .and_then(|w| w.to_f64())
            .unwrap_or(0.0)
    }

    /// True when every weight is 0 or 1, so counts are integers.
    pub fn is_unweighted(&self) -> bool {
        self.weights
            .values()
            .all(|w| w.is_zero() || w.is_one())
    }

    /// Weight of the edge `{u, v}` (zero for `u = v`).
    pub fn edge_weight(&self, u: usize, v: usize) -> Result<BigRational> {
        let h = circulant_distance(u, v, self.n)?;
        Ok(if h == 0 {
            BigRational::zero()
        } else {
            self.weight(h)
        })
    }

    /// Number of vertices adjacent at distance `k` (2, or 1 for the antipodal class).
    pub fn multiplicity(&self, k: usize) -> usize {
        if 2 * k == self.n {
            1
        } else {
            2
        }
    }

    /// Weighted degree, identical at every vertex.
    pub fn degree(&self) -> BigRational {
        self.weights
            .iter()
            .map(|(&k, w)| w * BigRational::from_integer(self.multiplicity(k).into()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Total weighted degree `N · deg`.
    pub fn volume(&self) -> BigRational {
        self.degree() * BigRational::from_integer(self.n.into())
    }

    /// Distances carrying a positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(&k, _)| k)
    }

    /// Exact criterion: the circulant graph is connected iff
    /// `gcd(N, support) = 1`.
    pub fn connected_by_gcd(&self) -> bool {
        self.support().fold(self.n, |g, k| g.gcd(&k)) == 1
    }

    /// Connectivity: the gcd criterion for deletion specs, the spectral
    /// threshold for general weights.
    pub fn is_connected(&self) -> bool {
        if self.deleted.is_some() {
            self.connected_by_gcd()
        } else {
            spectral::eigenvalues(self).connected
        }
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected { n: self.n })
        }
    }

    /// Short label such as `S={1,3}` or `w={1:1/2,2:1}`.
    pub fn label(&self) -> String {
        match &self.deleted {
            Some(s) => format!(
                "S={{{}}}",
                s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
            ),
            None => format!(
                "w={{{}}}",
                self.weights
                    .iter()
                    .map(|(k, w)| format!("{k}:{w}"))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

impl fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} {}", self.n, self.label())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n >= 3 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("vertex count {n} < 3")))
    }
}

fn check_distance(k: usize, n: usize) -> Result<()> {
    if (1..=n / 2).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "distance {k} outside 1..={}",
            n / 2
        )))
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let r: BigRational = s
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(r)
}

/// Wire form: `{"n": 7, "deleted": [1]}` or `{"n": 6, "weights": {"1": "1/2"}}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpecRepr {
    Deletion {
        n: usize,
        deleted: Vec<usize>,
    },
    Weighted {
        n: usize,
        weights: BTreeMap<String, String>,
    },
}

impl TryFrom<SpecRepr> for CirculantSpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::Deletion { n, deleted } => CirculantSpec::deletion(n, deleted),
            SpecRepr::Weighted { n, weights } => {
                let weights = weights
                    .into_iter()
                    .map(|(k, w)| {
                        let k: usize = k
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("not a distance: {k:?}")))?;
                        Ok((k, parse_rational(&w)?))
                    })
                    .collect::<Result<_>>()?;
                CirculantSpec::weighted(n, weights)
            }
        }
    }
}

impl From<CirculantSpec> for SpecRepr {
    fn from(spec: CirculantSpec) -> Self {
        match spec.deleted {
            Some(s) => SpecRepr::Deletion {
                n: spec.n,
                deleted: s.into_iter().collect(),
            },
            None => SpecRepr::Weighted {
                n: spec.n,
                weights: spec
                    .weights
                    .into_iter()
                    .map(|(k, w)| (k.to_string(), w.to_string()))
                    .collect(),
            },
        }
    }
}

//! Brute-force reference implementations built from the dense Laplacian.
//!
//! Nothing here looks at eigenvalues or closed forms: determinants come from
//! fraction-free elimination over big integers, resistances and hitting times
//! from grounded linear solves, and tree counts for tiny graphs from plain
//! enumeration. The spectral and closed-form paths are checked against these.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{circulant_distance, CirculantSpec};

/// Largest `N` for which resistance and hitting-time oracles solve exactly.
pub const EXACT_SOLVE_MAX_N: usize = 30;

/// Largest `N` accepted by [`spanning_tree_enumerate`].
pub const ENUMERATE_MAX_N: usize = 9;

/// Dense Laplacian `L = D − A` with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLaplacian {
    pub n: usize,
    pub entries: Vec<Vec<BigRational>>,
}

pub fn build_laplacian(spec: &CirculantSpec) -> DenseLaplacian {
    let n = spec.n();
    let degree = spec.degree();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        degree.clone()
                    } else {
                        let h = circulant_distance(i, j, n).expect("vertices in range");
                        -spec.weight(h)
                    }
                })
                .collect()
        })
        .collect();
    DenseLaplacian { n, entries }
}

impl DenseLaplacian {
    /// The submatrix with the listed rows and columns removed.
    pub fn minor(&self, removed: &[usize]) -> Vec<Vec<BigRational>> {
        let keep: Vec<usize> = (0..self.n).filter(|i| !removed.contains(i)).collect();
        keep.iter()
            .map(|&i| keep.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            self.entries[i][j].to_f64().unwrap_or(f64::NAN)
        })
    }
}

/// Fraction-free forward elimination of `[A | B]` in place.
///
/// Returns the sign of the row permutation, or `None` when `A` is singular.
/// Afterwards `m[k][k]` holds the `k`-th leading principal minor of the
/// permuted matrix, so `m[n−1][n−1] = ±det A`.
fn bareiss_forward(m: &mut [Vec<BigInt>], n: usize) -> Option<i32> {
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        if pivot != k {
            m.swap(pivot, k);
            sign = -sign;
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..width {
                let t = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                row[j] = t / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = head[k][k].clone();
    }
    Some(sign)
}

/// Exact determinant of an integer matrix by Bareiss elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    match bareiss_forward(&mut m, n) {
        Some(sign) => &m[n - 1][n - 1] * sign,
        None => BigInt::zero(),
    }
}

/// Solves `A·Y = d·B` over the integers, returning `(d, Y)` with `d = ±det A`.
///
/// `Y` is integral because `d·A⁻¹` is, so the back substitution divides exactly.
pub fn bareiss_solve(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Result<(BigInt, Vec<Vec<BigInt>>)> {
    let n = a.len();
    let rhs = b.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ar, br)| ar.iter().chain(br).cloned().collect())
        .collect();
    if n == 0 {
        return Ok((BigInt::one(), Vec::new()));
    }
    bareiss_forward(&mut m, n).ok_or_else(|| Error::Singular(format!("{n}x{n} system")))?;
    let d = m[n - 1][n - 1].clone();
    let mut y = vec![vec![BigInt::zero(); rhs]; n];
    for c in 0..rhs {
        for i in (0..n).rev() {
            let mut acc = &d * &m[i][n + c];
            for j in i + 1..n {
                acc -= &m[i][j] * &y[j][c];
            }
            let (quot, rem) = acc.div_rem(&m[i][i]);
            debug_assert!(rem.is_zero(), "inexact back substitution");
            y[i][c] = quot;
        }
    }
    Ok((d, y))
}

fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a BigRational>>(xs: I) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scale_to_integers(row: &[BigRational], scale: &BigInt) -> Vec<BigInt> {
    row.iter()
        .map(|x| (x * BigRational::from_integer(scale.clone())).to_integer())
        .collect()
}

/// Exact determinant of a rational matrix: clear denominators with one LCM,
/// eliminate over the integers, rescale.
pub fn rational_determinant(m: &[Vec<BigRational>]) -> BigRational {
    let scale = lcm_of_denominators(m.iter().flatten());
    let ints = m.iter().map(|row| scale_to_integers(row, &scale)).collect();
    let det = bareiss_determinant(ints);
    BigRational::new(det, num_traits::pow(scale, m.len()))
}

/// Exact solution of `A·X = B` for rational `A` and several right-hand sides.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    // row scaling leaves the solution unchanged
    let (ai, bi): (Vec<_>, Vec<_>) = a
        .iter()
        .zip(b)
        .map(|(ar, br)| {
            let scale = lcm_of_denominators(ar.iter().chain(br));
            (scale_to_integers(ar, &scale), scale_to_integers(br, &scale))
        })
        .unzip();
    let (d, y) = bareiss_solve(&ai, &bi)?;
    Ok(y.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| BigRational::new(v, d.clone()))
                .collect()
        })
        .collect())
}

/// A reference value, exact when the instance is small enough.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleValue {
    Exact(BigRational),
    Float(f64),
}

impl OracleValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            OracleValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            OracleValue::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            OracleValue::Exact(r) => Some(r),
            OracleValue::Float(_) => None,
        }
    }
}

/// Weighted spanning-tree count as the `(0,0)` cofactor of `L`.
pub fn tree_count_oracle(spec: &CirculantSpec) -> BigRational {
    rational_determinant(&build_laplacian(spec).minor(&[0]))
}

/// Two-component forests separating `u` and `v`: the minor of `L` with rows
/// and columns `u` and `v` removed.
pub fn forest_count_oracle(spec: &CirculantSpec, u: usize, v: usize) -> Result<BigRational> {
    circulant_distance(u, v, spec.n())?;
    if u == v {
        return Err(Error::Domain("forest count needs u != v".into()));
    }
    Ok(rational_determinant(&build_laplacian(spec).minor(&[u, v])))
}

/// Grounded Laplacian (row and column `v` removed) with its index map.
fn grounded(spec: &CirculantSpec, v: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let lap = build_laplacian(spec);
    let keep = (0..spec.n()).filter(|&x| x != v).collect();
    (lap.minor(&[v]), keep)
}

fn unit_columns(size: usize) -> Vec<Vec<BigRational>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

/// Exact `R(u, v)` for every `u`, grounding at `v`: `R(u, v) = (L̃⁻¹)_{uu}`.
pub fn resistances_to(spec: &CirculantSpec, v: usize) -> Result<Vec<BigRational>> {
    circulant_distance(v, v, spec.n())?;
    spec.require_connected()?;
    let (a, keep) = grounded(spec, v);
    let inv = solve_rational(&a, &unit_columns(a.len()))?;
    let mut out = vec![BigRational::zero(); spec.n()];
    for (i, &x) in keep.iter().enumerate() {
        out[x] = inv[i][i].clone();
    }
    Ok(out)
}

/// Exact effective resistance: solve `L̃x = e_u` with `v` grounded, return `x_u`.
pub fn resistance_oracle_exact(spec: &CirculantSpec, u: usize, v: usize) -> Result<BigRational> {
    circulant_distance(u, v, spec.n())?;
    spec.require_connected()?;
    if u == v {
        return Ok(BigRational::zero());
    }
    let (a, keep) = grounded(spec, v);
    let iu = keep.iter().position(|&x| x == u).expect("u != v");
    let rhs: Vec<Vec<BigRational>> = (0..a.len())
        .map(|i| vec![if i == iu { BigRational::one() } else { BigRational::zero() }])
        .collect();
    let x = solve_rational(&a, &rhs)?;
    Ok(x[iu][0].clone())
}

/// Floating-point grounded solve, for graphs beyond the exact range.
pub fn resistance_oracle_float(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    circulant_distance(u, v, spec.n())?;
    spec.require_connected()?;
    if u == v {
        return Ok(0.0);
    }
    let n = spec.n();
    let lap = build_laplacian(spec).to_f64();
    let keep: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    let a = lap.select_rows(&keep).select_columns(&keep);
    let iu = keep.iter().position(|&x| x == u).expect("u != v");
    let mut rhs = DVector::zeros(n - 1);
    rhs[iu] = 1.0;
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("grounded Laplacian".into()))?;
    Ok(x[iu])
}

/// Effective resistance from a grounded solve: exact for `N ≤ 30`.
pub fn resistance_oracle(spec: &CirculantSpec, u: usize, v: usize) -> Result<OracleValue> {
    if spec.n() <= EXACT_SOLVE_MAX_N {
        resistance_oracle_exact(spec, u, v).map(OracleValue::Exact)
    } else {
        resistance_oracle_float(spec, u, v).map(OracleValue::Float)
    }
}

/// Kirchhoff index `Σ_{x<y} R(x, y) = (N/2) Σ_x R(x, 0)` from one grounded
/// inverse (the graph is vertex-transitive). Exact for `N ≤ 30`.
pub fn kirchhoff_oracle(spec: &CirculantSpec) -> Result<OracleValue> {
    let half_n = BigRational::new(BigInt::from(spec.n()), BigInt::from(2));
    if spec.n() <= EXACT_SOLVE_MAX_N {
        let total = resistances_to(spec, 0)?
            .into_iter()
            .fold(BigRational::zero(), |acc, r| acc + r);
        return Ok(OracleValue::Exact(total * half_n));
    }
    spec.require_connected()?;
    let n = spec.n();
    let lap = build_laplacian(spec).to_f64();
    let keep: Vec<usize> = (1..n).collect();
    let inv = lap
        .select_rows(&keep)
        .select_columns(&keep)
        .try_inverse()
        .ok_or_else(|| Error::Singular("grounded Laplacian".into()))?;
    let total = crate::numeric::compensated_sum(inv.diagonal().iter().copied());
    Ok(OracleValue::Float(total * n as f64 / 2.0))
}

/// Laplacian eigenvalues from a dense symmetric eigensolver, sorted ascending.
pub fn eigenvalues_oracle(spec: &CirculantSpec) -> Vec<f64> {
    let mut values: Vec<f64> = build_laplacian(spec)
        .to_f64()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Transition probabilities `P(x, y) = w(x, y) / deg` as exact rationals.
fn transition_matrix(spec: &CirculantSpec) -> Result<Vec<Vec<BigRational>>> {
    let n = spec.n();
    let deg = spec.degree();
    if deg.is_zero() {
        return Err(Error::Disconnected { n });
    }
    (0..n)
        .map(|x| (0..n).map(|y| Ok(spec.edge_weight(x, y)? / &deg)).collect())
        .collect()
}

/// Exact hitting times `H(x, v)` for every start `x`, by first-step analysis:
/// `H(x, v) = 1 + Σ_y P(x, y) H(y, v)` for `x ≠ v`, `H(v, v) = 0`.
pub fn hitting_times_to(spec: &CirculantSpec, v: usize) -> Result<Vec<BigRational>> {
    circulant_distance(v, v, spec.n())?;
    spec.require_connected()?;
    let n = spec.n();
    let p = transition_matrix(spec)?;
    let keep: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    // (I − P restricted to V∖{v}) h = 1
    let a: Vec<Vec<BigRational>> = keep
        .iter()
        .map(|&x| {
            keep.iter()
                .map(|&y| {
                    let id = if x == y { BigRational::one() } else { BigRational::zero() };
                    id - &p[x][y]
                })
                .collect()
        })
        .collect();
    let b = vec![vec![BigRational::one()]; keep.len()];
    let h = solve_rational(&a, &b)?;
    let mut out = vec![BigRational::zero(); n];
    for (i, &x) in keep.iter().enumerate() {
        out[x] = h[i][0].clone();
    }
    Ok(out)
}

pub fn hitting_time_oracle_exact(spec: &CirculantSpec, u: usize, v: usize) -> Result<BigRational> {
    circulant_distance(u, v, spec.n())?;
    Ok(hitting_times_to(spec, v)?.swap_remove(u))
}

pub fn hitting_time_oracle_float(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    circulant_distance(u, v, spec.n())?;
    spec.require_connected()?;
    if u == v {
        return Ok(0.0);
    }
    let n = spec.n();
    let deg = spec.degree().to_f64().unwrap_or(f64::NAN);
    let keep: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    let weight = |x: usize, y: usize| spec.edge_weight(x, y).map(|w| w.to_f64().unwrap_or(f64::NAN));
    let mut a = DMatrix::zeros(n - 1, n - 1);
    for (i, &x) in keep.iter().enumerate() {
        for (j, &y) in keep.iter().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            a[(i, j)] = id - weight(x, y)? / deg;
        }
    }
    let h = a
        .lu()
        .solve(&DVector::from_element(n - 1, 1.0))
        .ok_or_else(|| Error::Singular("first-step system".into()))?;
    Ok(h[keep.iter().position(|&x| x == u).expect("u != v")])
}

/// Expected hitting time by first-step analysis: exact for `N ≤ 30`.
pub fn hitting_time_oracle(spec: &CirculantSpec, u: usize, v: usize) -> Result<OracleValue> {
    if spec.n() <= EXACT_SOLVE_MAX_N {
        hitting_time_oracle_exact(spec, u, v).map(OracleValue::Exact)
    } else {
        hitting_time_oracle_float(spec, u, v).map(OracleValue::Float)
    }
}

/// Random-walk simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub seed: u64,
    pub walks: usize,
    pub max_steps: u64,
}

impl WalkConfig {
    /// `max_steps` defaults to `N³`.
    pub fn new(seed: u64, walks: usize, n: usize) -> Self {
        Self {
            seed,
            walks,
            max_steps: (n as u64).pow(3),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.walks == 0 {
            return Err(Error::Domain("walks must be >= 1".into()));
        }
        if self.max_steps < (n as u64).pow(2) {
            return Err(Error::Domain(format!(
                "max_steps = {} is below N^2 = {}",
                self.max_steps,
                n * n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Walks that reached the target.
    pub completed: usize,
    pub truncated: usize,
    pub seed: u64,
}

/// Mean hitting time from `u` to `v` over independent weighted random walks.
///
/// Walk `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so the estimate
/// does not depend on how walks are scheduled across threads.
pub fn hitting_time_monte_carlo(
    spec: &CirculantSpec,
    u: usize,
    v: usize,
    cfg: &WalkConfig,
) -> Result<MonteCarloEstimate> {
    let n = spec.n();
    circulant_distance(u, v, n)?;
    cfg.validate(n)?;
    spec.require_connected()?;
    if u == v {
        return Ok(MonteCarloEstimate {
            mean: 0.0,
            stderr: 0.0,
            completed: cfg.walks,
            truncated: 0,
            seed: cfg.seed,
        });
    }
    let offsets: Vec<usize> = (1..n).collect();
    let weights: Vec<f64> = offsets
        .iter()
        .map(|&d| spec.weight_f64(d.min(n - d)))
        .collect();
    let step = WeightedIndex::new(&weights)
        .map_err(|e| Error::Domain(format!("transition weights: {e}")))?;

    let lengths: Vec<Option<u64>> = (0..cfg.walks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let mut pos = u;
            let mut steps = 0u64;
            while pos != v {
                if steps == cfg.max_steps {
                    return None;
                }
                pos = (pos + offsets[step.sample(&mut rng)]) % n;
                steps += 1;
            }
            Some(steps)
        })
        .collect();

    let truncated = lengths.iter().filter(|l| l.is_none()).count();
    if truncated * 1000 > cfg.walks {
        return Err(Error::Truncated {
            truncated,
            walks: cfg.walks,
            max_steps: cfg.max_steps,
        });
    }
    let done: Vec<f64> = lengths.into_iter().flatten().map(|s| s as f64).collect();
    let k = done.len() as f64;
    let mean = done.iter().sum::<f64>() / k;
    let var = if done.len() > 1 {
        done.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean,
        stderr: (var / k).sqrt(),
        completed: done.len(),
        truncated,
        seed: cfg.seed,
    })
}

/// Counts spanning trees by enumerating acyclic `(N−1)`-edge subsets.
///
/// Weighted specs sum the product of edge weights over each tree.
pub fn spanning_tree_enumerate(spec: &CirculantSpec) -> Result<BigRational> {
    let n = spec.n();
    if n > ENUMERATE_MAX_N {
        return Err(Error::TooLarge(format!(
            "enumeration is limited to N <= {ENUMERATE_MAX_N}, got {n}"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = spec.edge_weight(i, j)?;
            if !w.is_zero() {
                edges.push((i, j, w));
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut total = BigRational::zero();
    let unit = spec.is_unweighted();
    let mut count = 0u64;
    extend_forest(
        &edges,
        0,
        n - 1,
        &mut parent,
        &BigRational::one(),
        unit,
        &mut count,
        &mut total,
    );
    Ok(if unit {
        BigRational::from_integer(count.into())
    } else {
        total
    })
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

#[allow(clippy::too_many_arguments)]
fn extend_forest(
    edges: &[(usize, usize, BigRational)],
    start: usize,
    needed: usize,
    parent: &mut Vec<usize>,
    weight: &BigRational,
    unit: bool,
    count: &mut u64,
    total: &mut BigRational,
) {
    if needed == 0 {
        if unit {
            *count += 1;
        } else {
            *total += weight;
        }
        return;
    }
    for e in start..edges.len() {
        if edges.len() - e < needed {
            break;
        }
        let (a, b, ref w) = edges[e];
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra == rb {
            continue;
        }
        parent[ra] = rb;
        let next = if unit { weight.clone() } else { weight * w };
        extend_forest(edges, e + 1, needed - 1, parent, &next, unit, count, total);
        parent[ra] = ra;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn del(n: usize, s: &[usize]) -> CirculantSpec {
        CirculantSpec::deletion(n, s.iter().copied()).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn int(x: i64) -> BigRational {
        r(x, 1)
    }

    #[test]
    fn laplacian_shapes() {
        let l = build_laplacian(&del(5, &[1]));
        for i in 0..5 {
            assert_eq!(l.entries[i][i], int(2));
            let row_sum = l.entries[i].iter().fold(BigRational::zero(), |a, x| a + x);
            assert!(row_sum.is_zero());
            for j in 0..5 {
                let h = circulant_distance(i, j, 5).unwrap();
                let expected = match h {
                    0 => int(2),
                    1 => int(0),
                    _ => int(-1),
                };
                assert_eq!(l.entries[i][j], expected);
                assert_eq!(l.entries[i][j], l.entries[j][i]);
            }
        }
        let k3 = build_laplacian(&del(3, &[]));
        assert_eq!(k3.entries[0], vec![int(2), int(-1), int(-1)]);
        let l6 = build_laplacian(&del(6, &[3]));
        assert_eq!(l6.entries[0][0], int(4));
        assert_eq!(l6.entries[0][3], int(0));
        assert_eq!(l6.entries[2][5], int(0));
        assert_eq!(l6.entries[0][2], int(-1));
    }

    #[test]
    fn determinants() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(bareiss_determinant(m(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        // needs a row swap
        assert_eq!(bareiss_determinant(m(&[&[0, 1, 2], &[3, 0, 1], &[1, 1, 0]])), BigInt::from(7));
        assert_eq!(bareiss_determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(bareiss_determinant(Vec::new()), BigInt::one());
        let q = vec![vec![r(1, 2), r(1, 3)], vec![r(1, 5), r(2, 7)]];
        assert_eq!(rational_determinant(&q), r(1, 7) - r(1, 15));
    }

    #[test]
    fn rational_solve() {
        let a = vec![vec![r(2, 1), r(1, 2)], vec![r(0, 1), r(3, 4)]];
        let b = vec![vec![int(1)], vec![int(3)]];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![vec![r(-1, 2)], vec![int(4)]]);
        let singular = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(matches!(solve_rational(&singular, &b), Err(Error::Singular(_))));
    }

    #[test]
    fn resistance_examples() {
        assert_eq!(resistance_oracle_exact(&del(5, &[1]), 0, 2).unwrap(), r(4, 5));
        assert_eq!(resistance_oracle_exact(&del(4, &[]), 0, 1).unwrap(), r(1, 2));
        assert_eq!(resistance_oracle_exact(&del(5, &[1]), 1, 1).unwrap(), int(0));
        assert_eq!(resistance_oracle_exact(&del(7, &[2]), 0, 1).unwrap(), r(40, 91));
        assert_eq!(resistance_oracle_exact(&del(5, &[2]), 0, 1).unwrap(), r(4, 5));
        assert!(matches!(
            resistance_oracle_exact(&del(6, &[1, 2]), 0, 3),
            Err(Error::Disconnected { .. })
        ));
        let to0 = resistances_to(&del(9, &[1]), 0).unwrap();
        assert_eq!(to0[4], r(287, 963));
        assert_eq!(to0[5], r(287, 963));
        let f = resistance_oracle_float(&del(9, &[1]), 4, 0).unwrap();
        assert!((f - 287.0 / 963.0).abs() < 1e-13);
        assert!(matches!(resistance_oracle(&del(31, &[1]), 0, 1), Ok(OracleValue::Float(_))));
        assert!(matches!(resistance_oracle(&del(9, &[1]), 0, 1), Ok(OracleValue::Exact(_))));
    }

    #[test]
    fn tree_and_forest_examples() {
        assert_eq!(tree_count_oracle(&del(5, &[1])), int(5));
        assert_eq!(tree_count_oracle(&del(7, &[1])), int(1183));
        assert_eq!(tree_count_oracle(&del(5, &[])), int(125));
        assert_eq!(tree_count_oracle(&del(9, &[1])), int(412164));
        assert_eq!(tree_count_oracle(&del(6, &[1, 2])), int(0));
        assert_eq!(forest_count_oracle(&del(5, &[1]), 0, 2).unwrap(), int(4));
        assert_eq!(forest_count_oracle(&del(5, &[1]), 0, 1).unwrap(), int(6));
        assert_eq!(forest_count_oracle(&del(4, &[]), 0, 1).unwrap(), int(8));
        assert_eq!(forest_count_oracle(&del(7, &[1]), 0, 1).unwrap(), int(624));
        assert!(matches!(forest_count_oracle(&del(5, &[1]), 3, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn kirchhoff_and_eigen_oracles() {
        assert_eq!(kirchhoff_oracle(&del(5, &[1])).unwrap().exact(), Some(&int(10)));
        assert_eq!(kirchhoff_oracle(&del(7, &[1])).unwrap().exact(), Some(&r(126, 13)));
        let big = kirchhoff_oracle(&del(33, &[1])).unwrap().to_f64();
        assert!(big.is_finite() && big > 0.0);
        // C_5: 2 − 2cos(2πj/5)
        let eig = eigenvalues_oracle(&del(5, &[2]));
        let mut expected: Vec<f64> = (0..5)
            .map(|j| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * j as f64 / 5.0).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hitting_examples() {
        assert_eq!(hitting_time_oracle_exact(&del(5, &[1]), 0, 2).unwrap(), int(4));
        assert_eq!(hitting_time_oracle_exact(&del(5, &[1]), 0, 1).unwrap(), int(6));
        assert_eq!(hitting_time_oracle_exact(&del(7, &[]), 0, 1).unwrap(), int(6));
        assert_eq!(hitting_time_oracle_exact(&del(9, &[1]), 0, 4).unwrap(), r(861, 107));
        let f = hitting_time_oracle_float(&del(9, &[1]), 0, 4).unwrap();
        assert!((f - 861.0 / 107.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_oracles_stay_exact() {
        let w = std::collections::BTreeMap::from([(1, r(1, 2)), (2, r(3, 1))]);
        let spec = CirculantSpec::weighted(5, w).unwrap();
        let tau = tree_count_oracle(&spec);
        assert_eq!(tau, spanning_tree_enumerate(&spec).unwrap());
        let res = resistance_oracle_exact(&spec, 0, 1).unwrap();
        assert_eq!(forest_count_oracle(&spec, 0, 1).unwrap(), &tau * &res);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(spanning_tree_enumerate(&del(5, &[1])).unwrap(), int(5));
        assert_eq!(spanning_tree_enumerate(&del(4, &[])).unwrap(), int(16));
        assert_eq!(spanning_tree_enumerate(&del(6, &[1, 2])).unwrap(), int(0));
        assert!(matches!(spanning_tree_enumerate(&del(10, &[1])), Err(Error::TooLarge(_))));
    }

    #[test]
    fn monte_carlo_smoke() {
        let spec = del(5, &[1]);
        let cfg = WalkConfig::new(42, 20_000, 5);
        let est = hitting_time_monte_carlo(&spec, 0, 2, &cfg).unwrap();
        assert!((est.mean - 4.0).abs() < 4.0 * est.stderr, "{est:?}");
        // reproducible regardless of thread scheduling
        assert_eq!(est, hitting_time_monte_carlo(&spec, 0, 2, &cfg).unwrap());
        let same = hitting_time_monte_carlo(&spec, 3, 3, &cfg).unwrap();
        assert_eq!((same.mean, same.stderr), (0.0, 0.0));
    }

    #[test]
    fn monte_carlo_rejects_bad_configs() {
        let spec = del(5, &[1]);
        let mut cfg = WalkConfig::new(1, 0, 5);
        assert!(matches!(hitting_time_monte_carlo(&spec, 0, 2, &cfg), Err(Error::Domain(_))));
        cfg.walks = 10;
        cfg.max_steps = 24;
        assert!(matches!(hitting_time_monte_carlo(&spec, 0, 2, &cfg), Err(Error::Domain(_))));
        assert!(matches!(
            hitting_time_monte_carlo(&del(6, &[1, 2]), 0, 1, &WalkConfig::new(1, 10, 6)),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn monte_carlo_truncation_aborts() {
        // on a 31-cycle the walk from 0 to 15 takes 240 steps on average
        let spec = CirculantSpec::deletion(31, 2..=15).unwrap();
        let cfg = WalkConfig {
            seed: 7,
            walks: 2000,
            max_steps: 31 * 31,
        };
        match hitting_time_monte_carlo(&spec, 0, 15, &cfg) {
            Err(Error::Truncated { truncated, walks, .. }) => {
                assert!(truncated * 1000 > walks);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }
}

//! Effective resistance, spanning trees, two-component spanning forests,
//! hitting times and Kirchhoff indices of circulant graphs obtained from
//! `K_N` by deleting distance classes.
//!
//! Each invariant is available through three independent routes:
//!
//! * [`closed_form`]: exponential-type formulas in `ρ = (N − 2 + √(N(N−4)))/2`
//!   for a single deleted class `r` with odd `N` and `gcd(r, N) = 1`, in both
//!   floating-point and exact `Q(ρ)` arithmetic;
//! * [`spectral`]: finite Fourier sums over the Laplacian eigenvalues, valid
//!   for any distance weights;
//! * [`oracles`]: dense exact linear algebra, enumeration and simulation.
//!
//! [`verify`] cross-checks all three and [`sweep`] tabulates large-`N` limits.

pub mod closed_form;
pub mod compute;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod oracles;
pub mod quadfield;
pub mod report;
pub mod spectral;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{circulant_distance, oriented_residue, CirculantSpec, VertexPair};
pub use quadfield::QuadElem;
pub use report::{InvariantResult, Method, Quantity, Representation, Tolerances, Value, VerificationReport};
pub use spectral::{eigenvalues, Spectrum, TreeCount};

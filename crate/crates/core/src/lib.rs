//! Exact and numerical tools for non-Hermitian tridiagonal models:
//! matrix families, secular polynomials, discriminants, metrics,
//! spectra and exceptional-point location.

pub mod charpoly;
pub mod ep;
pub mod error;
pub mod fixture;
pub mod matrix;
pub mod metric;
pub mod model;
pub mod path;
pub mod poly;
pub mod rational;
pub mod spectra;

pub use ep::{ep_for_path, ep_on_path, EpReport};
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, TriMatrix};
pub use metric::{DiagonalMetric, MetricBundle, Pseudometric, SpectralMetric, TridiagMetric};
pub use model::{CouplingVector, ModelSpec};
pub use path::{secular_on_path, Grid, PathSpec, Slot};
pub use poly::{BiPoly, BigIntPoly, Poly, UniPoly};
pub use rational::Rational;
pub use spectra::{ComplexificationEvent, SweepResult};

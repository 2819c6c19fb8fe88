//! Double vector bundles in decomposed coordinates.
//!
//! * [`chartcalc`]: chart expressions, forward-mode jets, Jacobians and brackets.
//! * [`dvbcore`]: decomposed DVB elements, the four duals, pairings and the
//!   duality isomorphisms.
//! * [`gridwarp`]: linear sections, grids, warps and squarecap sections.
//! * [`tangentmodels`]: `T²M`, `T(A)` and the cotangent models built from them.
//! * [`sampling`]: seeded random instances for the verification sweeps.
//!
//! The algebraic layers are generic over [`Field`]; everything that
//! differentiates is generic over [`Real`]. The aliases below fix the
//! common choices.

pub mod chartcalc;
pub mod dvbcore;
pub mod gridwarp;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod tangentmodels;

use thiserror::Error;

pub use chartcalc::{ChartError, ChartMap, Expr, Jet, MatrixMap, SmoothMap};
pub use dvbcore::{DvbError, DvbShape};
pub use linalg::Matrix;
pub use scalar::{scaled_residual, Analytic, Field, Real, Ring};

/// Exact scalar for the algebraic layers.
pub type Rational = num_rational::BigRational;

pub type Jet64 = Jet<f64>;
/// Second-order jets, for symplectic and Liouville form checks.
pub type Jet2 = Jet<Jet<f64>>;

pub type DvbElement64 = dvbcore::DvbElement<f64>;
pub type DualAElement64 = dvbcore::DualAElement<f64>;
pub type DualBElement64 = dvbcore::DualBElement<f64>;
pub type IterBCElement64 = dvbcore::IterBCElement<f64>;
pub type IterACElement64 = dvbcore::IterACElement<f64>;

pub type RationalDvbElement = dvbcore::DvbElement<Rational>;
pub type RationalDualAElement = dvbcore::DualAElement<Rational>;
pub type RationalDualBElement = dvbcore::DualBElement<Rational>;
pub type RationalIterBCElement = dvbcore::IterBCElement<Rational>;
pub type RationalIterACElement = dvbcore::IterACElement<Rational>;

pub type Grid64 = gridwarp::Grid<f64>;
pub type LinearSectionA64 = gridwarp::LinearSectionA<f64>;
pub type LinearSectionB64 = gridwarp::LinearSectionB<f64>;

/// Any failure raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Dvb(#[from] DvbError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Ising-model (`S = -1`) form factors, their analyticity properties, and
//! truncated Fock-space realisations of the associated local observables.
//!
//! The numerical kernels (geometry, kinematics, quadrature, test functions,
//! Laurent polynomials, Pfaffians and form factors) are generic over the
//! scalar type; the Fock-space layer and the diagnostics built on it work in
//! `f64`. Aliases at the crate root fix the generic types to `f64`.

pub mod analyticity;
pub mod bessel;
pub mod error;
pub mod fock;
pub mod formfactors;
pub mod geometry;
pub mod kinematics;
pub mod laurent;
pub mod locality;
pub mod omega;
pub mod oracle;
pub mod pfaffian;
pub mod quadrature;
pub mod scalar;
pub mod scattering;
pub mod testfunctions;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type Point2D = geometry::Point2D<f64>;
pub type Wedge = geometry::Wedge<f64>;
pub type DoubleCone = geometry::DoubleCone<f64>;
pub type Region = geometry::Region<f64>;
pub type Momentum = kinematics::Momentum<f64>;
pub type OmegaIndicatrix = omega::OmegaIndicatrix<f64>;
pub type BumpFunction = testfunctions::BumpFunction<f64>;
pub type FourierCache = testfunctions::FourierCache<f64>;

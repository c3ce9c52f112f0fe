//! Numerical laboratory for character theory on compact tori.
//!
//! The crate evaluates irreducible characters of split simple groups via the
//! Weyl character formula, integrates them against Sato-Tate and Plancherel
//! measures with spectrally exact torus quadrature, and runs seeded Monte
//! Carlo experiments reproducing the Gaussian behaviour of normalized
//! Hecke-eigenvalue sums over pseudo-families of Satake parameters.
//!
//! Exact data (weights, roots, Weyl group matrices, weight multiplicities,
//! Bernoulli numbers) is kept in integer or big-rational arithmetic; only the
//! evaluation layer works in floating point, generically over [`scalar::Real`]
//! with `f64` aliases at the crate root.

pub mod characters;
pub mod clt;
pub mod dims;
pub mod error;
pub mod measures;
pub mod rng;
pub mod root_systems;
pub mod scalar;
pub mod sympow;

pub use error::{Error, Result};
pub use root_systems::{Family, GroupType, RootSystem, Weight};

/// Default scalar used by the CLI and the acceptance suite.
pub type Real = f64;

pub type TorusPoint = characters::TorusPoint<f64>;
pub type CharExpansion = characters::CharExpansion<f64>;
pub type TorusQuadrature = measures::TorusQuadrature<f64>;
pub type MeasureDensity = measures::MeasureDensity<f64>;
pub type CharacterMoments = measures::CharacterMoments<f64>;

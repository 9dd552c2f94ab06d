//! Volume-preserving slow diffeomorphisms built as skew products over circle
//! rotations.
//!
//! On a chart `U ≅ T² × D` the map is
//! `f(φ₁, φ₂, u) = (φ₁ + α, φ₂ + A(u)·F(φ₁), u)` where `F` is a zero-mean
//! trigonometric polynomial, `α` a rotation number and `A` a smooth cutoff on
//! the disc. Its iterates are driven by the Weyl sums of `F` along the
//! rotation, and the growth of `‖d fⁿ‖` follows `max |W'(n,·,α)|`.
//!
//! Modules, bottom up:
//! - [`circle`], [`fourier`], [`bump`], [`rotation`], [`resonant`]: the
//!   ingredients `F`, `α`, `A`;
//! - [`weyl`]: Weyl sums, direct and closed form, and grid extrema;
//! - [`diffeo`]: the chart map, its iterates and Jacobians, and the two maps on
//!   `S¹ × S²`;
//! - [`psi`], [`growth`]: the growth sequence `Γₙ` and ratio reports;
//! - [`quadrature`], [`flux`], [`volume`]: flux values and the volume check;
//! - [`config`], [`cli`], [`check`]: configuration, the command-line runner and
//!   the invariant suite.

pub mod bump;
pub mod check;
pub mod circle;
pub mod cli;
pub mod config;
pub mod diffeo;
pub mod error;
pub mod flux;
pub mod fourier;
pub mod growth;
pub mod psi;
pub mod quadrature;
pub mod resonant;
pub mod rotation;
pub mod volume;
pub mod weyl;

pub use bump::BumpProfile;
pub use circle::{circle_dist, circle_reduce, CircleValue};

pub use diffeo::{ChartPoint, MapConfig, SpherePoint, Variant};
pub use growth::{GridSpec, GrowthSeries};
pub use error::{Error, Result};
pub use fourier::{FourierSeries, Harmonic};

pub use psi::PsiSpec;
pub use rotation::RotationNumber;
pub use weyl::WeylScanResult;

//! Hyperbolic geometry of Koenigs domains.
//!
//! This crate models one-parameter semigroups of holomorphic self-maps of the
//! unit disk through their Koenigs domains — planar domains starlike at
//! infinity — and decides whether a petal of the semigroup is conformal at its
//! α-point. The toolbox underneath is classical geometric function theory:
//!
//! * densities of the hyperbolic metric (curvature −1 convention,
//!   `λ_D(z) = 2/(1−|z|²)`) and conformal radii `R = 2/λ`,
//! * Green's functions and harmonic measure for the disk, strips and slit
//!   planes, linked by the strong Markov property,
//! * a walk-on-spheres Monte Carlo estimator for log-conformal radii of
//!   domains that only expose a distance-to-boundary oracle,
//! * adaptive improper quadrature over `(−∞, 0]` with an explicit
//!   finite / divergent / inconclusive classification,
//! * Koenigs coordinates for semigroup orbits: Abel's equation
//!   `h(φ_t(z)) = h(z) + t`, pre-models at repulsive fixed points, and rate
//!   constants of backward orbits.
//!
//! All numerical kernels are generic over the scalar type via [`Real`]
//! (`f32` or `f64`); the orchestration layers (criteria, reports, self-test)
//! are instantiated at `f64` through the aliases at the crate root.

pub mod config;
pub mod criteria;
pub mod domain;
pub mod error;
pub mod geom;
pub mod maps;
pub mod metric;
pub mod parabolic;
pub mod potential;
pub mod profile;
pub mod quad;
pub mod real;
pub mod report;
pub mod selftest;
pub mod semigroup;
pub mod wos;

pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use real::Real;

/// Complex scalar used by the `f64`-instantiated layers.
pub type Cx = num_complex::Complex<f64>;
/// Horizontal strip with `f64` boundary heights.
pub type Strip = geom::StripSpec<f64>;
/// Domain catalog over `f64`.
pub type Domain = domain::DomainModel<f64>;
/// Boundary gap profile over `f64`.
pub type Profile = profile::BoundaryProfile<f64>;
/// Quadrature outcome over `f64`.
pub type Quadrature = quad::QuadratureResult<f64>;
/// Monte Carlo estimate over `f64`.
pub type Estimate = wos::McEstimate<f64>;

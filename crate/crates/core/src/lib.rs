//! Forward scattering by a homogeneous dielectric ball.
//!
//! The crate collects the exact Mie series, the perturbative Born ladder with
//! its norm bounds, the semigroup closed-form amplitude built from the volume
//! term `F1` and surface-corrected term `F2`, brute-force quadrature oracles
//! for those closed forms, and a small voxelized Green-operator laboratory
//! used to probe the evolution semigroup `exp(-i tau G)` numerically.
//!
//! Time convention is `exp(+i omega t)`: outgoing waves carry `exp(-i k r)`
//! and absorbing media have `Im chi < 0`.

pub mod approx;
pub mod bounds;
pub mod config;
pub mod error;
pub mod mie;
pub mod operator;
pub mod oracle;
pub mod quad;
pub mod semigroup;
pub mod specfun;

pub use config::{AmplitudeResult, Method, ScatterConfig, Warning};
pub use error::{Result, ScatterError};
pub use num_complex::Complex64;

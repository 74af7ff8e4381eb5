//! Exact Mie series for the total scattering cross-section of a transparent
//! sphere, written with the 2x2 determinants of spherical Bessel and Hankel
//! functions and Riccati derivatives `[z f_l(z)]' = z f_{l-1}(z) - l f_l(z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::config::{AmplitudeResult, Method, ScatterConfig};
use crate::error::{Result, ScatterError};
use crate::specfun::{spherical_h2_seq, spherical_j_seq};

/// Relative size of the last retained term required for convergence.
const TAIL_TOL: f64 = 1e-12;
/// Orders whose Bessel values leave this range contribute below `1e-250`.
const NEGLIGIBLE: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MieTruncation {
    /// `L = ceil(kR + 4 (kR)^{1/3} + margin)`.
    Auto { margin: usize },
    /// Exactly `L` orders.
    Fixed(usize),
}

impl Default for MieTruncation {
    fn default() -> Self {
        MieTruncation::Auto { margin: 10 }
    }
}

impl MieTruncation {
    pub fn order_count(&self, kr: f64) -> usize {
        match *self {
            MieTruncation::Auto { margin } => (kr + 4.0 * kr.cbrt() + margin as f64).ceil() as usize,
            MieTruncation::Fixed(l) => l,
        }
    }
}

struct Columns {
    jn: Vec<Complex64>,
    j: Vec<Complex64>,
    h: Vec<Complex64>,
}

fn riccati_derivative(f: &[Complex64], z: Complex64, ell: usize) -> Complex64 {
    z * f[ell - 1] - ell as f64 * f[ell]
}

fn real_index(cfg: &ScatterConfig) -> Result<f64> {
    if !cfg.is_real() || cfg.n.im != 0.0 || cfg.n.re <= 0.0 {
        return Err(ScatterError::InvalidConfig("the Mie series is implemented for real n > 0".into()));
    }
    Ok(cfg.n.re)
}

fn columns(cfg: &ScatterConfig, lmax: usize) -> Result<Columns> {
    let n = real_index(cfg)?;
    let xi = Complex64::new(cfg.size_parameter(), 0.0);
    Ok(Columns { jn: spherical_j_seq(lmax, n * xi)?, j: spherical_j_seq(lmax, xi)?, h: spherical_h2_seq(lmax, xi)? })
}

fn term_from(cols: &Columns, ell: usize, n: f64, xi: f64) -> Result<(Complex64, Complex64)> {
    let (jn, j, h) = (cols.jn[ell], cols.j[ell], cols.h[ell]);
    let zero = Complex64::new(0.0, 0.0);
    if !(h.re.is_finite() && h.im.is_finite())
        || h.norm() > 1.0 / NEGLIGIBLE
        || jn.norm() < NEGLIGIBLE
        || j.norm() < NEGLIGIBLE
    {
        return Ok((zero, zero));
    }
    let xi_c = Complex64::new(xi, 0.0);
    let djn = riccati_derivative(&cols.jn, n * xi_c, ell);
    let dj = riccati_derivative(&cols.j, xi_c, ell);
    let dh = riccati_derivative(&cols.h, xi_c, ell);
    if !(dh.re.is_finite() && dh.im.is_finite()) {
        return Ok((zero, zero));
    }
    let n2 = n * n;
    let den_a = n2 * jn * dh - h * djn;
    let den_b = jn * dh - h * djn;
    if den_a.norm() < 1e-300 || den_b.norm() < 1e-300 {
        return Err(ScatterError::DegenerateDeterminant { ell });
    }
    let a = (n2 * jn * dj - j * djn) / den_a;
    let b = (jn * dj - j * djn) / den_b;
    Ok((a, b))
}

/// The two determinant ratios of order `ell >= 1`:
/// `det[n^2 j(n xi), [z j]'(n xi); j(xi), [z j]'(xi)] / det[..; h2(xi), [z h2]'(xi)]`
/// and the same with `n^2` replaced by 1.
pub fn mie_term(ell: usize, cfg: &ScatterConfig) -> Result<(Complex64, Complex64)> {
    if ell == 0 {
        return Err(ScatterError::InvalidConfig("Mie orders start at 1".into()));
    }
    let cols = columns(cfg, ell)?;
    term_from(&cols, ell, cfg.n.re, cfg.size_parameter())
}

/// Forward amplitude and total scattering cross-section from the Mie series.
///
/// With `S = sum (2l + 1)(a_l + b_l)` the amplitude is `i (2 pi / k^2) S` and
/// `sigma_N = (2 / xi^2) Re S`.
pub fn mie_sigma(cfg: &ScatterConfig, trunc: MieTruncation) -> Result<AmplitudeResult> {
    let n = real_index(cfg)?;
    let xi = cfg.size_parameter();
    if xi > 200.0 {
        return Err(ScatterError::InvalidConfig(format!("size parameter {xi} exceeds 200")));
    }
    let lmax = trunc.order_count(xi).max(1);
    let cols = columns(cfg, lmax)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = Complex64::new(0.0, 0.0);
    for ell in 1..=lmax {
        let (a, b) = term_from(&cols, ell, n, xi)?;
        last = (2 * ell + 1) as f64 * (a + b);
        sum += last;
    }
    if last.norm() > TAIL_TOL * sum.norm() {
        return Err(ScatterError::NonConvergence { terms: lmax, tail: last.norm() / sum.norm() });
    }
    let k = cfg.k;
    let amp = Complex64::new(0.0, 2.0 * PI / (k * k)) * sum;
    let sigma_n = 2.0 / (xi * xi) * sum.re;
    Ok(AmplitudeResult {
        forward_amplitude: Some(amp),
        sigma_sc: sigma_n * cfg.geometric_area(),
        sigma_n,
        method: Method::Mie,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_one_gives_nothing() {
        let cfg = ScatterConfig::from_index(1.0, 3.0, 1.0).unwrap();
        assert_eq!(mie_sigma(&cfg, MieTruncation::default()).unwrap().sigma_n, 0.0);
        let (a, b) = mie_term(2, &cfg).unwrap();
        assert_eq!((a.norm(), b.norm()), (0.0, 0.0));
    }

    #[test]
    fn small_size_terms_scale_as_odd_powers() {
        // a_l, b_l = O(xi^{2l+1}); compare two sizes a factor 2 apart
        for ell in [1usize, 2] {
            let t1 = mie_term(ell, &ScatterConfig::from_index(1.0, 0.01, 1.5).unwrap()).unwrap().0.norm();
            let t2 = mie_term(ell, &ScatterConfig::from_index(1.0, 0.02, 1.5).unwrap()).unwrap().0.norm();
            let slope = (t2 / t1).log2();
            assert!((slope - (2 * ell + 1) as f64).abs() < 0.01, "ell={ell} slope={slope}");
        }
    }

    #[test]
    fn insufficient_fixed_truncation_is_reported() {
        let cfg = ScatterConfig::from_index(1.0, 30.0, 1.5).unwrap();
        assert!(matches!(mie_sigma(&cfg, MieTruncation::Fixed(5)), Err(ScatterError::NonConvergence { .. })));
    }

    #[test]
    fn complex_index_is_rejected() {
        let cfg = ScatterConfig::new(1.0, 1.0, Complex64::new(0.2, -0.1)).unwrap();
        assert!(mie_sigma(&cfg, MieTruncation::default()).is_err());
    }

    #[test]
    fn auto_order_count_formula() {
        assert_eq!(MieTruncation::default().order_count(8.0), 26);
        assert_eq!(MieTruncation::Fixed(7).order_count(100.0), 7);
    }
}

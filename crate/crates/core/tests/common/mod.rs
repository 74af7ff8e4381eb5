//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

/// `J_{nu-1}(x) / J_nu(x)` by the modified Lentz algorithm.
fn bessel_ratio_cf(nu: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = 2.0 * nu / x;
    if f == 0.0 {
        f = tiny;
    }
    let (mut c, mut d) = (f, 0.0);
    for j in 1..100_000 {
        let b = 2.0 * (nu + j as f64) / x;
        d = b - d;
        if d == 0.0 {
            d = tiny;
        }
        c = b - 1.0 / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// Logarithmic derivatives `D_n(x) = psi_n'(x) / psi_n(x)` of the Riccati-Bessel
/// function for `n = 0..=nmax`, seeded by a continued fraction and recurred down.
fn log_derivatives(nmax: usize, x: f64) -> Vec<f64> {
    let mut d = vec![0.0; nmax + 1];
    let top = nmax as f64;
    d[nmax] = -top / x + bessel_ratio_cf(top + 0.5, x);
    for n in (1..=nmax).rev() {
        let q = n as f64 / x;
        d[n - 1] = q - 1.0 / (d[n] + q);
    }
    d
}

/// Normalized scattering cross-section of a sphere with real index `m` and size
/// parameter `x`, in the Bohren-Huffman coefficient form.
pub fn bh_sigma_n(m: f64, x: f64) -> f64 {
    let nstop = (x + 4.0 * x.cbrt() + 20.0).ceil() as usize;
    let dm = log_derivatives(nstop, m * x);
    let dx = log_derivatives(nstop, x);
    let (mut psi_prev, mut chi_prev) = (x.sin(), x.cos());
    let mut chi = x.cos() / x + x.sin();
    let mut sum = 0.0;
    for n in 1..=nstop {
        let q = n as f64 / x;
        let psi = psi_prev / (dx[n] + q);
        if n > 1 {
            let next = (2.0 * n as f64 - 1.0) / x * chi - chi_prev;
            chi_prev = chi;
            chi = next;
        }
        let (xi_re, xi_im) = (psi, -chi);
        let (xp_re, xp_im) = (psi_prev, -chi_prev);
        let ta = dm[n] / m + q;
        let tb = m * dm[n] + q;
        let an = ratio(ta * psi - psi_prev, ta * xi_re - xp_re, ta * xi_im - xp_im);
        let bn = ratio(tb * psi - psi_prev, tb * xi_re - xp_re, tb * xi_im - xp_im);
        sum += (2 * n + 1) as f64 * (an + bn);
        psi_prev = psi;
    }
    2.0 / (x * x) * sum
}

/// `|num / (den_re + i den_im)|^2` for real `num`.
fn ratio(num: f64, den_re: f64, den_im: f64) -> f64 {
    num * num / (den_re * den_re + den_im * den_im)
}

/// Composite Gauss-Legendre on `[a, b]` with `panels` panels of 20 nodes.
pub fn gauss_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = scatter_core::quad::gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * f(lo + 0.5 * h * (xi + 1.0));
        }
    }
    0.5 * h * total
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

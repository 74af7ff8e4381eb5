//! Quadrature building blocks: Gauss–Legendre rules and adaptive
//! Gauss–Kronrod (7/15) integration of complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Result, ScatterError};

/// Kronrod abscissae on `[0, 1]`; odd indices are the 7-point Gauss nodes.
pub(crate) const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
pub(crate) const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Weights of the embedded 7-point Gauss rule at `GK_NODES[1], [3], [5], [7]`.
pub(crate) const G7_WEIGHTS: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}

/// Kronrod 15-point offsets and weights on `[a, b]` (nodes ascending).
pub(crate) fn gk15_rule(a: f64, b: f64) -> ([f64; 15], [f64; 15], [f64; 15]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut nodes = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for j in 0..7 {
        nodes[j] = c - h * GK_NODES[j];
        nodes[14 - j] = c + h * GK_NODES[j];
        wk[j] = h * GK_WEIGHTS[j];
        wk[14 - j] = h * GK_WEIGHTS[j];
        if j % 2 == 1 {
            wg[j] = h * G7_WEIGHTS[j / 2];
            wg[14 - j] = h * G7_WEIGHTS[j / 2];
        }
    }
    nodes[7] = c;
    wk[7] = h * GK_WEIGHTS[7];
    wg[7] = h * G7_WEIGHTS[3];
    (nodes, wk, wg)
}

/// One Gauss–Kronrod panel: the 15-point estimate and `|K15 - G7|`.
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let (nodes, wk, wg) = gk15_rule(a, b);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for j in 0..15 {
        let v = f(nodes[j]);
        k += wk[j] * v;
        g += wg[j] * v;
    }
    (k, (k - g).norm())
}

/// Globally adaptive bisection on `[a, b]` until the summed panel error
/// estimate drops below `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<(Complex64, f64)> {
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(ScatterError::Quadrature("non-finite integrand".into()));
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if panels.len() >= max_panels {
            return Err(ScatterError::Quadrature(format!(
                "error estimate {err:.3e} above tolerance after {max_panels} panels"
            )));
        }
        let (idx, _) =
            panels.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).expect("panel list is never empty");
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 41] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((approx - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn kronrod_panel_is_exact_for_degree_22() {
        let (v, _) = gk15(&mut |t: f64| Complex64::new(t.powi(22), t.powi(21)), 0.0, 1.0);
        assert!((v - Complex64::new(1.0 / 23.0, 1.0 / 22.0)).norm() < 1e-15);
        let (v, _) = gk15(&mut |t: f64| Complex64::new(t.powi(12), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let (v, _) = integrate_adaptive(|t| Complex64::new(0.0, 40.0 * t).exp(), 0.0, 3.0, 1e-14, 1e-13, 500).unwrap();
        let exact = (Complex64::new(0.0, 120.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((v - exact).norm() < 1e-12);
    }
}

//! Brute-force quadrature for the two pieces of the semigroup amplitude and
//! for the bulk field they come from, independent of the closed forms.
//!
//! The volume potential `int_ball g_n(|r - r'|) e^{-ikz'} d^3r'` is taken in
//! spherical coordinates centred at `r`, where the radial integral is done
//! analytically and the `1/|r - r'|` singularity disappears into the measure.
//! The angular integral is graded around the equator of the local frame when
//! `r` approaches the surface, where the chord length has a kink.
//!
//! The surface term uses, for each outer point, coordinates whose pole sits at
//! that point; the Jacobian `R cos(gamma/2)/(4 pi)` then cancels the kernel
//! singularity exactly.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::config::ScatterConfig;
use crate::error::{Result, ScatterError};
use crate::quad::{gauss_legendre, gauss_legendre_on};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Node budget of the nested rules; refinement multiplies every count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub radial_nodes: usize,
    pub angular_order: usize,
    /// Points closer than this fraction of `R` to the surface are rejected by
    /// [`bulk_field`]; it is also the floor of the angular grading.
    pub singularity_split: f64,
    pub target_rel_err: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self { radial_nodes: 12, angular_order: 10, singularity_split: 0.05, target_rel_err: 1e-6 }
    }
}

impl QuadratureControl {
    fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 || self.angular_order < 8 {
            return Err(ScatterError::InvalidConfig("quadrature needs at least 8 nodes per direction".into()));
        }
        if !(self.target_rel_err >= 1e-6) {
            return Err(ScatterError::InvalidConfig("target_rel_err below 1e-6 is not supported".into()));
        }
        if !(self.singularity_split > 0.0 && self.singularity_split < 0.5) {
            return Err(ScatterError::InvalidConfig("singularity_split must lie in (0, 0.5)".into()));
        }
        Ok(())
    }
}

/// Refinement factors applied to every node count.
const LEVELS: [f64; 6] = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// Change between the last two refinement levels.
    pub error_estimate: f64,
    pub levels_used: usize,
}

fn refine<F: FnMut(f64) -> Result<Complex64>>(qc: &QuadratureControl, mut eval: F) -> Result<OracleValue> {
    qc.validate()?;
    let mut prev = eval(LEVELS[0])?;
    for (i, &s) in LEVELS.iter().enumerate().skip(1) {
        let next = eval(s)?;
        let diff = (next - prev).norm();
        if diff <= qc.target_rel_err * next.norm() {
            return Ok(OracleValue { value: next, error_estimate: diff, levels_used: i + 1 });
        }
        prev = next;
    }
    Err(ScatterError::Quadrature(format!("oracle did not reach relative error {:.1e}", qc.target_rel_err)))
}

fn scaled(n: usize, s: f64) -> usize {
    (n as f64 * s).round() as usize
}

/// `int_0^S s e^{-c s} ds / S^2 = (1 - e^{-x}(1 + x)) / x^2`, `x = c S`.
fn radial_factor(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 2.0;
        for m in 2..14 {
            if m > 2 {
                pow *= -x;
                fact *= m as f64;
            }
            sum += pow * ((m - 1) as f64 / fact);
        }
        sum
    } else {
        (1.0 - (-x).exp() * (1.0 + x)) / (x * x)
    }
}

/// Breakpoints on `[0, 1]` refined geometrically towards 0 from `delta`.
fn graded_breaks(delta: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    if delta < 0.25 {
        let mut t = delta;
        while t < 0.25 {
            b.push(t);
            t *= 4.0;
        }
    }
    b.push(1.0);
    b
}

fn frame(r: [f64; 3]) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if rho == 0.0 {
        return ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    }
    let u = [r[0] / rho, r[1] / rho, r[2] / rho];
    let helper = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = helper[0] * u[0] + helper[1] * u[1] + helper[2] * u[2];
    let mut e1 = [helper[0] - d * u[0], helper[1] - d * u[1], helper[2] - d * u[2]];
    let m = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / m, e1[1] / m, e1[2] / m];
    let e2 = [u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]];
    (u, e1, e2)
}

/// `e^{ikz} int_ball g_n(|r - r'|) e^{-ikz'} d^3r'` at an interior point.
fn volume_potential(r: [f64; 3], n: Complex64, k: f64, radius: f64, na: usize, nb: usize) -> Complex64 {
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let (u, e1, e2) = frame(r);
    let eps = (radius * radius - rho * rho).max(0.0).sqrt();
    let delta = if rho > 0.0 { (eps / rho).max(1e-10) } else { 1.0 };
    let breaks = graded_breaks(delta);
    let (ga, wa) = gauss_legendre(na);
    let dbeta = 2.0 * PI / nb as f64;
    let trig: Vec<(f64, f64)> = (0..nb).map(|j| ((dbeta * j as f64).cos(), (dbeta * j as f64).sin())).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for side in [1.0, -1.0] {
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let half = 0.5 * (hi - lo);
            for (x, wx) in ga.iter().zip(&wa) {
                let t = side * (0.5 * (lo + hi) + half * x);
                let st = (1.0 - t * t).max(0.0).sqrt();
                let s_len = -rho * t + (radius * radius - rho * rho * (1.0 - t * t)).max(0.0).sqrt();
                let mut acc = Complex64::new(0.0, 0.0);
                for &(cb, sb) in &trig {
                    let wz = t * u[2] + st * (cb * e1[2] + sb * e2[2]);
                    let c = I * k * (n + wz);
                    acc += radial_factor(c * s_len);
                }
                total += acc * (s_len * s_len * wx * half * dbeta);
            }
        }
    }
    total / (4.0 * PI)
}

/// `<E_inc, -chi k F1>` by nested quadrature over the ball.
pub fn f1_quadrature(cfg: &ScatterConfig, qc: &QuadratureControl) -> Result<OracleValue> {
    if cfg.chi.im >= 0.0 {
        return Err(ScatterError::InvalidConfig("the oracle needs Im chi < 0".into()));
    }
    let (k, radius, n, chi) = (cfg.k, cfg.radius, cfg.n, cfg.chi);
    refine(qc, |s| {
        let nr = scaled(qc.radial_nodes, s);
        let na = scaled(qc.angular_order, s);
        let (rr, wr) = gauss_legendre_on(nr, 0.0, radius);
        let (tt, wt) = gauss_legendre_on(nr, 0.0, PI);
        let mut integral = Complex64::new(0.0, 0.0);
        for (rho, w_rho) in rr.iter().zip(&wr) {
            for (th, w_th) in tt.iter().zip(&wt) {
                let r = [rho * th.sin(), 0.0, rho * th.cos()];
                let v = volume_potential(r, n, k, radius, na, 2 * na);
                integral += v * (2.0 * PI * rho * rho * th.sin() * w_rho * w_th);
            }
        }
        Ok(-chi * k * (cfg.volume() + chi * k * k * integral))
    })
}

/// `<E_inc, -chi k F2>` as `chi^2 k/(1 + chi)` times the double surface integral
/// `oint oint (n . E_inc)^*(r) g_n(|r - r'|) (n' . E_inc)(r') dS dS'`.
pub fn f2_quadrature(cfg: &ScatterConfig, qc: &QuadratureControl) -> Result<OracleValue> {
    if cfg.chi.im >= 0.0 {
        return Err(ScatterError::InvalidConfig("the oracle needs Im chi < 0".into()));
    }
    if (1.0 + cfg.chi).norm() == 0.0 {
        return Err(ScatterError::InvalidConfig("chi = -1 is excluded".into()));
    }
    let (k, radius, n, chi) = (cfg.k, cfg.radius, cfg.n, cfg.chi);
    let kr = k * radius;
    refine(qc, |s| {
        let nt = scaled(qc.radial_nodes, s) + (kr as usize);
        let ng = scaled(qc.angular_order, s) + (2.0 * kr * n.norm()) as usize;
        let nb = 2 * scaled(qc.angular_order, s);
        let (tt, wt) = gauss_legendre_on(nt, 0.0, PI);
        let (gg, wg) = gauss_legendre_on(ng, 0.0, PI);
        let dbeta = 2.0 * PI / nb as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for (th, w_th) in tt.iter().zip(&wt) {
            let (st, ct) = th.sin_cos();
            let outer = 0.5 * st * st * (I * kr * ct).exp() * w_th;
            let mut inner = Complex64::new(0.0, 0.0);
            for (gam, w_g) in gg.iter().zip(&wg) {
                let (sg, cg) = gam.sin_cos();
                let chord = 2.0 * radius * (0.5 * gam).sin();
                let kernel = radius * (0.5 * gam).cos() / (4.0 * PI) * (-I * n * k * chord).exp();
                let mut ring = Complex64::new(0.0, 0.0);
                for j in 0..nb {
                    let cb = (dbeta * j as f64).cos();
                    // r' = cos g r^ + sin g (cos b e_theta + sin b e_phi)
                    let x = cg * st + sg * cb * ct;
                    let z = cg * ct - sg * cb * st;
                    ring += x * (-I * kr * z).exp();
                }
                inner += ring * kernel * (w_g * dbeta);
            }
            total += outer * inner;
        }
        let j = 2.0 * PI * radius * radius * total;
        Ok(chi * chi * k / (1.0 + chi) * j)
    })
}

/// Bulk field `E_inc + chi k^2 int g_n E_inc - (chi/(1+chi)) grad oint (n' . E_inc) g_n dS'`
/// at an interior point.
pub fn bulk_field(cfg: &ScatterConfig, r: [f64; 3], qc: &QuadratureControl) -> Result<[Complex64; 3]> {
    qc.validate()?;
    let (k, radius, n, chi) = (cfg.k, cfg.radius, cfg.n, cfg.chi);
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if rho >= radius * (1.0 - qc.singularity_split) {
        return Err(ScatterError::InvalidConfig(format!(
            "point at |r| = {rho} lies within the excluded shell next to the surface"
        )));
    }
    let phase = (-I * k * r[2]).exp();
    let mut field = [phase, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    if chi.norm() == 0.0 {
        return Ok(field);
    }
    let na = 2 * qc.angular_order;
    let vol = volume_potential(r, n, k, radius, na, 2 * na);
    field[0] += chi * k * k * phase * vol;

    // surface gradient with the pole of the sphere coordinates along r^
    let (u, e1, e2) = frame(r);
    let nt = 2 * qc.radial_nodes + (2.0 * k * radius) as usize;
    let np = 2 * nt;
    let (ct_nodes, wt) = gauss_legendre(nt);
    let dphi = 2.0 * PI / np as f64;
    let mut grad = [Complex64::new(0.0, 0.0); 3];
    for (ct, w) in ct_nodes.iter().zip(&wt) {
        let st = (1.0 - ct * ct).sqrt();
        for j in 0..np {
            let (sp, cp) = (dphi * j as f64).sin_cos();
            let nn = [
                ct * u[0] + st * (cp * e1[0] + sp * e2[0]),
                ct * u[1] + st * (cp * e1[1] + sp * e2[1]),
                ct * u[2] + st * (cp * e1[2] + sp * e2[2]),
            ];
            let rp = [radius * nn[0], radius * nn[1], radius * nn[2]];
            let density = nn[0] * (-I * k * rp[2]).exp();
            let dv = [r[0] - rp[0], r[1] - rp[1], r[2] - rp[2]];
            let d = (dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]).sqrt();
            // d/dd [e^{-inkd}/(4 pi d)] = -e^{-inkd}(1 + inkd)/(4 pi d^2)
            let dg = -(-I * n * k * d).exp() * (1.0 + I * n * k * d) / (4.0 * PI * d * d);
            let weight = density * dg * (w * dphi * radius * radius / d);
            for p in 0..3 {
                grad[p] += weight * dv[p];
            }
        }
    }
    let factor = chi / (1.0 + chi);
    for p in 0..3 {
        field[p] -= factor * grad[p];
    }
    Ok(field)
}

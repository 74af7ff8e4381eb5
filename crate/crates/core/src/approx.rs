//! The approximation ladder for the forward amplitude of a ball:
//! first Born / Rayleigh–Gans, the Rayleigh quartic law, van de Hulst's
//! anomalous diffraction, the Evans–Fournier correction, and the semigroup
//! closed form `F1 + F2`.
//!
//! `F1` is written as `2 pi i n R^2 - pi i (n+1)^2 R^2 phi(u) + pi i (n-1)^2 R^2 phi(v)`
//! with `u = 2i(n-1)kR`, `v = 2i(n+1)kR`, `phi(x) = (1 - e^{-x}(1 + x)) / x^2`,
//! which is the same expression with the `(n-1)^{-2}` pole cancelled.
//!
//! `F2` contains `Ei(-u) - Ei(-v) + log((n+1)/(n-1))` with
//! `Ei(z) = -int_{-z}^inf e^{-t}/t dt = -E1(-z)`. On `Im n < 0` that bracket
//! equals `gamma + ln(2kR) + i pi/2 + Log(n+1) - Ein(u) + E1(v)`, which is
//! analytic across `n = 1` and continuous onto the real axis; that form is
//! what gets evaluated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::config::{AmplitudeResult, Method, ScatterConfig, Warning};
use crate::error::{Result, ScatterError};
use crate::specfun::{cin, ein, expint_e1, sinint_si, EULER_GAMMA};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `|(n-1) kR|` the closed forms switch to cancellation-free paths.
pub const CANCELLATION_THRESHOLD: f64 = 1e-2;

/// Which evaluation path produced a closed-form value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalPath {
    ClosedForm,
    SeriesFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathValue {
    pub value: Complex64,
    pub path: EvalPath,
}

fn phi_series(x: Complex64) -> Complex64 {
    // sum_{m>=2} (-1)^m (m-1) x^{m-2} / m!
    let mut pow = Complex64::new(1.0, 0.0);
    let mut fact = 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 2..40 {
        if m > 2 {
            pow *= -x;
            fact *= m as f64;
        }
        let add = pow * ((m - 1) as f64 / fact);
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// `(1 - e^{-x}(1 + x)) / x^2`.
fn phi(x: Complex64, series: bool) -> Complex64 {
    if series {
        phi_series(x)
    } else {
        (1.0 - (-x).exp() * (1.0 + x)) / (x * x)
    }
}

/// Volume part `<E_inc, -chi k F1>` of the semigroup amplitude.
pub fn f1_amplitude(cfg: &ScatterConfig) -> Result<PathValue> {
    let (n, kr, r) = (cfg.n, cfg.size_parameter(), cfg.radius);
    let eps = n - 1.0;
    let u = 2.0 * I * eps * kr;
    let v = 2.0 * I * (n + 1.0) * kr;
    let series = (eps * kr).norm() < CANCELLATION_THRESHOLD;
    let r2 = r * r;
    let value = 2.0 * PI * I * n * r2 - PI * I * (n + 1.0).powi(2) * r2 * phi(u, series)
        + PI * I * eps * eps * r2 * phi(v, false);
    let path = if series { EvalPath::SeriesFallback } else { EvalPath::ClosedForm };
    Ok(PathValue { value, path })
}

fn f2_closed(n: Complex64, k: f64, r: f64) -> Result<Complex64> {
    let kr = k * r;
    let chi = n * n - 1.0;
    let u = 2.0 * I * (n - 1.0) * kr;
    let v = 2.0 * I * (n + 1.0) * kr;
    let bracket = EULER_GAMMA + (2.0 * kr).ln() + I * FRAC_PI_2 + (n + 1.0).ln() - ein(u)? + expint_e1(v)?;
    let t1 = -2.0 * I * chi * chi * (2.0 * (chi + 2.0) * kr * kr - 1.0) * bracket;
    let t2 = 4.0 * I * n * (2.0 * chi * chi * kr * kr - chi - 2.0);
    let t3 = (-v).exp() * (n - 1.0).powi(2) * (2.0 * (n + 1.0) * (chi + 2.0) * kr + I * (n * n + 4.0 * n + 1.0));
    let t4 = -(-u).exp() * (n + 1.0).powi(2) * (2.0 * (n - 1.0) * (chi + 2.0) * kr + I * (n * n - 4.0 * n + 1.0));
    Ok(PI / (16.0 * k * k * n * n) * (t1 + t2 + t3 + t4))
}

/// `F2` near `n = 1`: the closed form is sampled on a circle in `eps = n - 1`
/// where it is well conditioned, its Taylor coefficients are recovered by a
/// discrete Cauchy integral, and the known double zero at `eps = 0` is imposed
/// by dropping the constant and linear coefficients.
fn f2_cauchy(n: Complex64, k: f64, r: f64) -> Result<Complex64> {
    const M: usize = 32;
    let kr = k * r;
    let rho = (0.5 / kr).min(0.1);
    let eps = n - 1.0;
    let mut samples = Vec::with_capacity(M);
    for j in 0..M {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / M as f64);
        samples.push((w, f2_closed(1.0 + rho * w, k, r)?));
    }
    let t = eps / rho;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 2..M {
        let cm: Complex64 = samples.iter().map(|(w, g)| g * w.powu(m as u32).conj()).sum::<Complex64>() / M as f64;
        total += cm * t.powu(m as u32);
    }
    Ok(total)
}

/// Surface-corrected part `<E_inc, -chi k F2>` of the semigroup amplitude.
pub fn f2_amplitude(cfg: &ScatterConfig) -> Result<PathValue> {
    let (n, k, r) = (cfg.n, cfg.k, cfg.radius);
    if ((n - 1.0) * cfg.size_parameter()).norm() < CANCELLATION_THRESHOLD {
        Ok(PathValue { value: f2_cauchy(n, k, r)?, path: EvalPath::SeriesFallback })
    } else {
        Ok(PathValue { value: f2_closed(n, k, r)?, path: EvalPath::ClosedForm })
    }
}

/// Semigroup forward amplitude `F1 + F2`; `sigma_sc` is its imaginary part.
pub fn semigroup_amplitude(cfg: &ScatterConfig) -> Result<AmplitudeResult> {
    let amp = f1_amplitude(cfg)?.value + f2_amplitude(cfg)?.value;
    let mut res = AmplitudeResult::from_amplitude(cfg, amp, Method::Semigroup);
    if cfg.n.re >= std::f64::consts::SQRT_2 {
        res.warnings.push(Warning::IndexAboveSqrt2);
    }
    Ok(res)
}

/// Brace of the Rayleigh–Gans formula as a function of `y = 4kR`:
/// `5/2 + y^2/8 - sin y / y - 7 (1 - cos y) / y^2 + (8/y^2 - 2) Cin(y)`.
fn rg_brace(y: f64) -> f64 {
    if y <= 2.0 {
        // even power series; the y^0 and y^2 coefficients vanish
        let y2 = y * y;
        let mut sum = 0.0;
        let mut pow = y2 * y2;
        let mut f2m = 24.0; // (2m)!
        for m in 2..30 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let f2m1 = f2m * (2 * m + 1) as f64;
            let f2m2 = f2m1 * (2 * m + 2) as f64;
            let c = -sign / f2m1 - 7.0 * sign / f2m2
                + 8.0 * sign / ((2 * m + 2) as f64 * f2m2)
                + 2.0 * sign / (2 * m) as f64 / f2m;
            let add = c * pow;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow *= y2;
            f2m = f2m2;
        }
        sum
    } else {
        2.5 + y * y / 8.0 - y.sin() / y - 7.0 * (1.0 - y.cos()) / (y * y) + (8.0 / (y * y) - 2.0) * cin(y)
    }
}

/// Rayleigh–Gans (first Born) total scattering cross-section for real `chi`.
pub fn rayleigh_gans(cfg: &ScatterConfig) -> Result<AmplitudeResult> {
    let chi = cfg.require_real("Rayleigh-Gans")?;
    let sigma = cfg.geometric_area() * chi * chi / 4.0 * rg_brace(4.0 * cfg.size_parameter());
    Ok(AmplitudeResult::from_sigma(cfg, sigma, Method::RayleighGans))
}

/// Rayleigh quartic law `8 pi k^4 R^6 chi^2 / 27`.
pub fn rayleigh_quartic(cfg: &ScatterConfig) -> Result<f64> {
    let chi = cfg.require_real("Rayleigh quartic law")?;
    Ok(8.0 * PI * cfg.k.powi(4) * cfg.radius.powi(6) * chi * chi / 27.0)
}

/// Anomalous-diffraction efficiency `2 - (4/rho) sin rho + (4/rho^2)(1 - cos rho)`.
pub fn van_de_hulst(rho: f64) -> f64 {
    let rho = rho.abs();
    if rho < 0.1 {
        // -4 sum_{m>=1} (-1)^m (2m+1) rho^{2m} / (2m+2)!
        let r2 = rho * rho;
        let mut pow = r2;
        let mut fact = 24.0;
        let mut sum = 0.0;
        for m in 1..12 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += -4.0 * sign * (2 * m + 1) as f64 * pow / fact;
            pow *= r2;
            fact *= ((2 * m + 3) * (2 * m + 4)) as f64;
        }
        sum
    } else {
        2.0 - 4.0 / rho * rho.sin() + 4.0 / (rho * rho) * (1.0 - rho.cos())
    }
}

/// Phase-shift variable `rho = 2 (n - 1) kR`.
pub fn phase_shift(cfg: &ScatterConfig) -> f64 {
    2.0 * (cfg.n.re - 1.0) * cfg.size_parameter()
}

/// van de Hulst cross-section for a real index.
pub fn van_de_hulst_sigma(cfg: &ScatterConfig) -> Result<AmplitudeResult> {
    cfg.require_real("van de Hulst")?;
    let sigma_n = van_de_hulst(phase_shift(cfg));
    Ok(AmplitudeResult::from_sigma(cfg, sigma_n * cfg.geometric_area(), Method::VanDeHulst))
}

/// van de Hulst times `2 - exp(-(kR)^{-2/3})`. Outside `1.01 <= n <= 2` the
/// value is still returned, tagged with `Warning::OutsideFitRange`.
pub fn evans_fournier(cfg: &ScatterConfig) -> Result<AmplitudeResult> {
    cfg.require_real("Evans-Fournier")?;
    let kr = cfg.size_parameter();
    let factor = 2.0 - (-kr.powf(-2.0 / 3.0)).exp();
    let sigma_n = van_de_hulst(phase_shift(cfg)) * factor;
    let mut res = AmplitudeResult::from_sigma(cfg, sigma_n * cfg.geometric_area(), Method::EvansFournier);
    if !(1.01..=2.0).contains(&cfg.n.re) {
        res.warnings.push(Warning::OutsideFitRange);
    }
    Ok(res)
}

fn re_c_scaled_series(x: f64) -> f64 {
    // odd power series of (4x^2-1)/2 Si(4x) - 8x^3/3 + (x/4) cos 4x + (7/16) sin 4x
    let si = |j: usize| -> f64 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * 4f64.powi(2 * j as i32 + 1) / ((2 * j + 1) as f64 * factorial(2 * j + 1))
    };
    let mut sum = 0.0;
    for m in 1..25usize {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mut c = 2.0 * si(m - 1) - 0.5 * si(m);
        if m == 1 {
            c -= 8.0 / 3.0;
        }
        c += 0.25 * sign * 16f64.powi(m as i32) / factorial(2 * m);
        c += 7.0 / 16.0 * sign * 4f64.powi(2 * m as i32 + 1) / factorial(2 * m + 1);
        sum += c * x.powi(2 * m as i32 + 1);
    }
    sum
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Coefficient `C` of `(n-1)^2` in the small-contrast expansion of `F1 + F2`:
/// `pi/k^2 { (4x^2-1)/2 [Si(4x) + i Ci(4x) - i log 4x - i gamma] + i(2x^4 + 8i x^3/3 + 5x^2/2 - 7/16)
///  + e^{-4ix}(x/4 + 7i/16) }`, `x = kR`. The imaginary part equals
/// `pi R^2` times the Rayleigh–Gans brace and is evaluated that way.
pub fn second_order_coefficient(k: f64, radius: f64) -> Complex64 {
    let x = k * radius;
    let re_scaled = if x < 0.5 {
        re_c_scaled_series(x)
    } else {
        (4.0 * x * x - 1.0) / 2.0 * sinint_si(4.0 * x) - 8.0 * x.powi(3) / 3.0
            + x / 4.0 * (4.0 * x).cos()
            + 7.0 / 16.0 * (4.0 * x).sin()
    };
    Complex64::new(PI / (k * k) * re_scaled, PI * radius * radius * rg_brace(4.0 * x))
}

/// `-(n-1) 8 pi k R^3 / 3 + (n-1)^2 C`, valid for `|n - 1| <= 0.2`.
pub fn small_n_expansion(cfg: &ScatterConfig) -> Result<Complex64> {
    let eps = cfg.n - 1.0;
    if eps.norm() > 0.2 {
        return Err(ScatterError::InvalidConfig(format!("|n - 1| = {} exceeds 0.2", eps.norm())));
    }
    let kr3 = cfg.k * cfg.radius.powi(3);
    Ok(-eps * 8.0 * PI * kr3 / 3.0 + eps * eps * second_order_coefficient(cfg.k, cfg.radius))
}

/// Forward amplitude through second order in `chi`:
/// `-chi k |V| - chi^2 k <E_inc, G E_inc>`, i.e. `-chi 4 pi k R^3/3 + chi^2 (pi k R^3/3 + C/4)`.
/// For real `chi` its imaginary part is the Rayleigh–Gans cross-section.
pub fn born_amplitude(cfg: &ScatterConfig) -> AmplitudeResult {
    let chi = cfg.chi;
    let kr3 = cfg.k * cfg.radius.powi(3);
    let c = second_order_coefficient(cfg.k, cfg.radius);
    let amp = -chi * 4.0 * PI * kr3 / 3.0 + chi * chi * (PI * kr3 / 3.0 + c / 4.0);
    let mut res = AmplitudeResult::from_amplitude(cfg, amp, Method::Born);
    if cfg.is_real() {
        res.sigma_sc = cfg.geometric_area() * chi.re * chi.re / 4.0 * rg_brace(4.0 * cfg.size_parameter());
        res.sigma_n = res.sigma_sc / cfg.geometric_area();
    }
    res
}

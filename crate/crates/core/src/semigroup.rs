//! The evolution semigroup `psi_tau = exp(-i tau G) E_inc` on the voxel grid.
//!
//! Provides evolution traces, the Bochner-integral form of the resolvent
//! `(I - chi G)^{-1} = (1/(i chi)) int_0^inf e^{i tau / chi} exp(-i tau G) dtau`,
//! strong-stability and skin-effect probes, and the scalar identity
//! `1 - e^{-i tau G} = int_0^inf exp(-s^2/(4 i tau G)) J1(s) ds`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;

use crate::error::{Result, ScatterError};
use crate::operator::{FieldState, GreenMatrix, VoxelGrid};
use crate::quad::{gk15_rule, integrate_adaptive};
use crate::specfun::bessel_j1;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cache of propagators `exp(-i dt A)`. A step twice a cached one is obtained
/// by squaring, so geometric checkpoints cost one exponential plus squarings.
pub struct Propagator<'a> {
    matrix: &'a DMatrix<Complex64>,
    cache: HashMap<u64, DMatrix<Complex64>>,
}

impl<'a> Propagator<'a> {
    pub fn new(matrix: &'a DMatrix<Complex64>) -> Self {
        Self { matrix, cache: HashMap::new() }
    }

    /// `exp(-i dt A)`; `dt` may be negative.
    pub fn step(&mut self, dt: f64) -> Result<&DMatrix<Complex64>> {
        let key = dt.to_bits();
        if !self.cache.contains_key(&key) {
            let half = (0.5 * dt).to_bits();
            let e = match self.cache.get(&half) {
                Some(h) => h * h,
                None => (self.matrix * Complex64::new(0.0, -dt)).exp(),
            };
            if !e.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
                return Err(ScatterError::StepFailure(dt));
            }
            self.cache.insert(key, e);
        }
        Ok(&self.cache[&key])
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub taus: Vec<f64>,
    pub norms: Vec<f64>,
    pub states: Option<Vec<FieldState>>,
}

impl EvolutionTrace {
    /// Largest `norm[i+1] - norm[i]`, relative to the initial norm.
    pub fn max_relative_increase(&self) -> f64 {
        let n0 = self.norms.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        self.norms.windows(2).map(|w| (w[1] - w[0]) / n0).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_monotone(&self, slack: f64) -> bool {
        self.norms.len() < 2 || self.max_relative_increase() <= slack
    }
}

fn check_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() || taus[0] < 0.0 || taus.windows(2).any(|w| w[1] <= w[0]) || taus.iter().any(|t| !t.is_finite())
    {
        return Err(ScatterError::InvalidConfig("tau grid must be finite, nonnegative and strictly increasing".into()));
    }
    Ok(())
}

/// Evolves `psi0` through the checkpoints `taus`, stepping between them with
/// scaling-and-squaring matrix exponentials.
pub fn evolve(g: &GreenMatrix, psi0: &FieldState, taus: &[f64], keep_states: bool) -> Result<EvolutionTrace> {
    check_grid(taus)?;
    let mut prop = Propagator::new(&g.entries);
    let mut current = psi0.values.clone();
    let mut prev = 0.0;
    let mut norms = Vec::with_capacity(taus.len());
    let mut states = keep_states.then(Vec::new);
    for &tau in taus {
        let dt = tau - prev;
        if dt > 0.0 {
            current = prop.step(dt)? * &current;
        }
        prev = tau;
        let state = FieldState { values: current.clone(), tau, voxel_volume: psi0.voxel_volume };
        norms.push(state.norm());
        if let Some(s) = states.as_mut() {
            s.push(state);
        }
    }
    Ok(EvolutionTrace { taus: taus.to_vec(), norms, states })
}

/// `0` followed by `tau_max 2^{-levels}, ..., tau_max / 2, tau_max`.
pub fn geometric_checkpoints(tau_max: f64, levels: usize) -> Vec<f64> {
    let mut taus = vec![0.0];
    taus.extend((0..=levels).rev().map(|j| tau_max / 2f64.powi(j as i32)));
    taus
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub trace: EvolutionTrace,
    /// `||psi_{tau_max}|| / ||psi_0||`.
    pub decay_ratio: f64,
    /// Every consecutive norm ratio is at most `1 + 1e-9`.
    pub monotone: bool,
}

pub fn stability_probe(g: &GreenMatrix, e_inc: &FieldState, tau_max: f64) -> Result<StabilityReport> {
    let trace = evolve(g, e_inc, &geometric_checkpoints(tau_max, 12), false)?;
    let monotone = trace.norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    let decay_ratio = trace.norms.last().copied().unwrap_or(0.0) / trace.norms[0].max(f64::MIN_POSITIVE);
    Ok(StabilityReport { trace, decay_ratio, monotone })
}

/// Largest singular value of `exp(-i tau G)` by power iteration.
pub fn propagator_norm(g: &GreenMatrix, tau: f64) -> Result<f64> {
    let mut prop = Propagator::new(&g.entries);
    let e = prop.step(tau)?;
    let n = e.nrows();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0, 0.1 * (i % 5) as f64));
    let mut sigma = 0.0;
    for _ in 0..500 {
        let w = e.ad_mul(&(e * &v));
        let nrm = w.norm();
        let next = nrm.sqrt();
        v = w / Complex64::new(nrm, 0.0);
        if (next - sigma).abs() < 1e-14 * next {
            return Ok(next);
        }
        sigma = next;
    }
    Ok(sigma)
}

/// One row of the energy-rate comparison at a checkpoint.
#[derive(Debug, Clone, Copy)]
pub struct EnergyRate {
    pub tau: f64,
    /// Five-point central difference of `||psi_tau||^2`.
    pub finite_difference: f64,
    /// `-2 Im <G psi_tau, psi_tau>`.
    pub exact: f64,
}

pub fn energy_rate_check(g: &GreenMatrix, psi0: &FieldState, taus: &[f64], step: f64) -> Result<Vec<EnergyRate>> {
    let trace = evolve(g, psi0, taus, true)?;
    let mut prop = Propagator::new(&g.entries);
    let mut out = Vec::with_capacity(taus.len());
    for state in trace.states.expect("states were kept") {
        let mut sq = [0.0; 5];
        for (slot, j) in sq.iter_mut().zip([-2i32, -1, 0, 1, 2]) {
            let v = if j == 0 { state.values.clone() } else { prop.step(j as f64 * step)? * &state.values };
            *slot = v.norm_squared() * state.voxel_volume;
        }
        let fd = (sq[0] - 8.0 * sq[1] + 8.0 * sq[3] - sq[4]) / (12.0 * step);
        let exact = -2.0 * g.apply(&state).inner(&state).im;
        out.push(EnergyRate { tau: state.tau, finite_difference: fd, exact });
    }
    Ok(out)
}

/// Controls for the Bochner-integral resolvent.
#[derive(Debug, Clone, Copy)]
pub struct BochnerControl {
    /// Initial panel width; `None` picks `2 / (||G|| + 1/|chi|)`.
    pub panel: Option<f64>,
    /// Relative tolerance on the summed Kronrod–Gauss error estimate.
    pub rel_tol: f64,
    /// The integrand is truncated once `|e^{i tau/chi}|` falls below this.
    pub tail: f64,
    pub max_refinements: usize,
}

impl Default for BochnerControl {
    fn default() -> Self {
        Self { panel: None, rel_tol: 1e-10, tail: 1e-12, max_refinements: 6 }
    }
}

#[derive(Debug, Clone)]
pub struct BochnerResult {
    pub values: DVector<Complex64>,
    pub error_estimate: f64,
    pub panels: usize,
    pub tau_cutoff: f64,
}

/// `(1/(i chi)) int_0^T e^{i tau/chi} exp(-i tau A) v dtau` for any square `A`
/// with `exp(-i tau A)` contractive, evaluated with Gauss–Kronrod panels.
pub fn bochner_integral(
    a: &DMatrix<Complex64>,
    a_norm: f64,
    chi: Complex64,
    v0: &DVector<Complex64>,
    ctrl: &BochnerControl,
) -> Result<BochnerResult> {
    if chi.im >= 0.0 {
        return Err(ScatterError::InvalidConfig("the Bochner resolvent needs Im chi < 0".into()));
    }
    let decay = (I / chi).re; // = Im chi / |chi|^2 < 0
    let tau_cutoff = ctrl.tail.ln() / decay;
    let mut width = ctrl.panel.unwrap_or(2.0 / (a_norm + 1.0 / chi.norm()));
    for _ in 0..=ctrl.max_refinements {
        let panels = (tau_cutoff / width).ceil().max(1.0) as usize;
        let w = tau_cutoff / panels as f64;
        let (nodes, wk, wg) = gk15_rule(0.0, w);
        let mut prop = Propagator::new(a);
        let node_props: Vec<DMatrix<Complex64>> =
            nodes.iter().map(|&t| prop.step(t).cloned()).collect::<Result<_>>()?;
        let panel_prop = prop.step(w)?.clone();
        let mut start = v0.clone();
        let mut k_sum = DVector::<Complex64>::zeros(v0.len());
        let mut err = 0.0;
        for p in 0..panels {
            let t0 = p as f64 * w;
            let mut kp = DVector::<Complex64>::zeros(v0.len());
            let mut gp = DVector::<Complex64>::zeros(v0.len());
            for j in 0..15 {
                let weight = (I * (t0 + nodes[j]) / chi).exp();
                let val = &node_props[j] * &start * weight;
                kp.axpy(Complex64::new(wk[j], 0.0), &val, Complex64::new(1.0, 0.0));
                if wg[j] != 0.0 {
                    gp.axpy(Complex64::new(wg[j], 0.0), &val, Complex64::new(1.0, 0.0));
                }
            }
            err += (&kp - &gp).norm();
            k_sum += kp;
            start = &panel_prop * &start;
        }
        let scale = 1.0 / (I * chi);
        let values = k_sum * scale;
        let error_estimate = err * scale.norm();
        if error_estimate <= ctrl.rel_tol * values.norm() {
            return Ok(BochnerResult { values, error_estimate, panels, tau_cutoff });
        }
        width = w / 2.0;
    }
    Err(ScatterError::Quadrature("Bochner integral did not reach its tolerance".into()))
}

/// Resolvent `(I - chi G)^{-1} E_inc` through the semigroup.
pub fn bochner_resolvent(
    g: &GreenMatrix,
    chi: Complex64,
    e_inc: &FieldState,
    ctrl: &BochnerControl,
) -> Result<FieldState> {
    let res = bochner_integral(&g.entries, g.operator_norm(), chi, &e_inc.values, ctrl)?;
    Ok(FieldState { values: res.values, tau: 0.0, voxel_volume: e_inc.voxel_volume })
}

/// Compactly supported test function sampled on the voxels together with the
/// conductivity-like magnitudes `|chi|` at which the probe is evaluated.
#[derive(Debug, Clone)]
pub struct SkinProbe {
    pub f: Vec<f64>,
    pub chi_magnitudes: Vec<f64>,
}

impl SkinProbe {
    /// `f(r) = exp(1 - 1/(1 - |r|^2/(rho_f R)^2))` inside `|r| < rho_f R`, else 0.
    pub fn bump(grid: &VoxelGrid, rho_f: f64, chi_magnitudes: Vec<f64>) -> Result<Self> {
        if !(rho_f > 0.0 && rho_f < 1.0) {
            return Err(ScatterError::InvalidConfig("bump support fraction must lie in (0, 1)".into()));
        }
        let s = rho_f * grid.radius;
        let f = grid
            .centers
            .iter()
            .map(|c| {
                let t = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) / (s * s);
                if t < 1.0 {
                    (1.0 - 1.0 / (1.0 - t)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self { f, chi_magnitudes })
    }
}

/// `(|chi|, |chi| |int f (I + i|chi| G)^{-1} E_inc|)` for every probe magnitude.
/// The conducting limit is taken along `chi = -i|chi|`; the variant without
/// the `i`, `(I + |chi| G)^{-1}`, is not implemented.
pub fn skin_effect_probe(g: &GreenMatrix, e_inc: &FieldState, probe: &SkinProbe) -> Result<Vec<(f64, f64)>> {
    if probe.f.len() * 3 != g.dim() {
        return Err(ScatterError::Grid("probe and operator sizes differ".into()));
    }
    let n = g.dim();
    let mut out = Vec::with_capacity(probe.chi_magnitudes.len());
    for &mag in &probe.chi_magnitudes {
        if probe.f.iter().all(|&v| v == 0.0) {
            out.push((mag, 0.0));
            continue;
        }
        let m = DMatrix::<Complex64>::identity(n, n) + &g.entries * Complex64::new(0.0, mag);
        let e = m.lu().solve(&e_inc.values).ok_or(ScatterError::Singular(f64::INFINITY))?;
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for (i, fi) in probe.f.iter().enumerate() {
            for (p, a) in acc.iter_mut().enumerate() {
                *a += e[3 * i + p] * (fi * g.voxel_volume);
            }
        }
        let size = acc.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        out.push((mag, mag * size));
    }
    Ok(out)
}

/// `|1 - e^{-i tau G} - int_0^inf exp(-s^2/(4 i tau G)) J1(s) ds|` for scalar `G`.
pub fn j1_identity_check(g: Complex64, tau: f64) -> Result<f64> {
    if g.im >= 0.0 || tau <= 0.0 {
        return Err(ScatterError::InvalidConfig("need Im G < 0 and tau > 0".into()));
    }
    let a = -1.0 / (4.0 * I * tau * g);
    if a.re > -1e-8 {
        return Err(ScatterError::Quadrature("Gaussian envelope decays too slowly".into()));
    }
    let s_max = (40.0 / -a.re).sqrt();
    let mut f = |s: f64| (a * s * s).exp() * bessel_j1(s);
    let mut total = Complex64::new(0.0, 0.0);
    // split into unit-ish panels so the oscillation is resolved before bisection
    let pieces = (s_max / 8.0).ceil() as usize;
    for p in 0..pieces {
        let lo = s_max * p as f64 / pieces as f64;
        let hi = s_max * (p + 1) as f64 / pieces as f64;
        total += integrate_adaptive(&mut f, lo, hi, 1e-14, 1e-13, 2000)?.0;
    }
    Ok((1.0 - (-I * tau * g).exp() - total).norm())
}

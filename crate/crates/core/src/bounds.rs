//! Norm bounds for the Green operator of a ball and the error bounds of the
//! first Born approximation built on them.
//!
//! The bound on `||G||` is quoted with a `(4/5) kR` term, while the
//! phase-type validity criterion is quoted with `(109/80) kR`. Both are kept
//! verbatim: [`green_norm_bound`] uses `4/5`, [`validity_criteria`] uses `109/80`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::config::ScatterConfig;
use crate::error::Result;

/// A bound that may be infinite because a Neumann series stops converging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundValue {
    Finite(f64),
    Divergent,
}

impl BoundValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            BoundValue::Finite(v) => Some(v),
            BoundValue::Divergent => None,
        }
    }
}

fn cube_root_term(kr: f64) -> f64 {
    let c = (kr + 0.5).cbrt();
    (c + 4.0 / (9.0 * c)) / (2.0 * PI)
}

/// `g(kR) = min{(11/45)(kR)^3, (9/16) kR}`, bounding the positive part `gamma_S`.
pub fn gamma_s_bound(kr: f64) -> f64 {
    (11.0 / 45.0 * kr.powi(3)).min(9.0 / 16.0 * kr)
}

/// `G(kR) = min{1/2 + (3/(5 pi))(4 pi/3)^{2/3} (kR)^2, 2 + (4/5) kR + cube-root term} + g(kR)`.
pub fn green_norm_bound(kr: f64) -> f64 {
    let a = 0.5 + 3.0 / (5.0 * PI) * (4.0 * PI / 3.0).powf(2.0 / 3.0) * kr * kr;
    let b = 2.0 + 0.8 * kr + cube_root_term(kr);
    a.min(b) + gamma_s_bound(kr)
}

/// Relative field error of the first Born approximation,
/// `|chi| G / (1 - |chi| G)`, divergent once `|chi| G >= 1`.
pub fn born_field_error(cfg: &ScatterConfig) -> BoundValue {
    let x = cfg.chi.norm() * green_norm_bound(cfg.size_parameter());
    if x >= 1.0 {
        BoundValue::Divergent
    } else {
        BoundValue::Finite(x / (1.0 - x))
    }
}

/// Bound on `|sigma_Born - sigma|` for real `chi`:
/// `(4 pi R^2 / 3) |chi|^3 kR g G (|chi| G + 2) / (1 - chi G)^2`.
pub fn cross_section_error(cfg: &ScatterConfig) -> Result<BoundValue> {
    let chi = cfg.require_real("the cross-section error bound")?;
    let kr = cfg.size_parameter();
    let big_g = green_norm_bound(kr);
    let a = chi.abs();
    if a * big_g >= 1.0 {
        return Ok(BoundValue::Divergent);
    }
    let num = 4.0 * PI * cfg.radius.powi(2) / 3.0 * a.powi(3) * kr * gamma_s_bound(kr) * big_g * (a * big_g + 2.0);
    Ok(BoundValue::Finite(num / (1.0 - chi * big_g).powi(2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `|chi| [2 + (109/80) kR + cube-root term] < 1`.
    pub phase_ok: bool,
    /// Small-sphere relative-error factor `(11/10)|chi|(|chi| + 4)/(2 - |chi|)^2`.
    pub small_sphere_factor: f64,
    pub threshold: f64,
    pub small_sphere_ok: bool,
}

pub fn validity_criteria(cfg: &ScatterConfig, threshold: f64) -> Result<ValidityReport> {
    let chi = cfg.require_real("the validity criteria")?.abs();
    let kr = cfg.size_parameter();
    let phase_ok = chi * (2.0 + 109.0 / 80.0 * kr + cube_root_term(kr)) < 1.0;
    let small_sphere_factor = if chi >= 2.0 { f64::INFINITY } else { 1.1 * chi * (chi + 4.0) / (2.0 - chi).powi(2) };
    Ok(ValidityReport { phase_ok, small_sphere_factor, threshold, small_sphere_ok: small_sphere_factor < threshold })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub g_norm_bound: f64,
    pub gs_bound: f64,
    pub born_field_error: BoundValue,
    pub cross_section_error: BoundValue,
    /// `|chi| G(kR) < 1`: the Neumann series converges under the norm bound.
    pub criterion_perturbative: bool,
    /// The `109/80` phase-type criterion.
    pub criterion_phase: bool,
    pub validity: ValidityReport,
}

impl BoundReport {
    pub fn new(cfg: &ScatterConfig, threshold: f64) -> Result<Self> {
        let kr = cfg.size_parameter();
        let g = green_norm_bound(kr);
        let validity = validity_criteria(cfg, threshold)?;
        Ok(Self {
            g_norm_bound: g,
            gs_bound: gamma_s_bound(kr),
            born_field_error: born_field_error(cfg),
            cross_section_error: cross_section_error(cfg)?,
            criterion_perturbative: cfg.chi.norm() * g < 1.0,
            criterion_phase: validity.phase_ok,
            validity,
        })
    }
}

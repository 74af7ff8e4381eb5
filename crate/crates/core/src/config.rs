//! Physical configuration and the common amplitude record.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Result, ScatterError};
use crate::specfun::BranchTag;

/// Wavenumber, radius and susceptibility of the ball, with the refractive
/// index `n = sqrt(1 + chi)` fixed on the decaying branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub k: f64,
    pub radius: f64,
    pub chi: Complex64,
    pub n: Complex64,
    pub branch: BranchTag,
}

impl ScatterConfig {
    /// Builds a configuration from the susceptibility. `Im chi > 0` (gain) is
    /// rejected; real `chi` is treated as the limit from `Im chi < 0`.
    pub fn new(k: f64, radius: f64, chi: Complex64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(ScatterError::InvalidConfig(format!("wavenumber must be positive, got {k}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ScatterError::InvalidConfig(format!("radius must be positive, got {radius}")));
        }
        if !(chi.re.is_finite() && chi.im.is_finite()) {
            return Err(ScatterError::InvalidConfig("susceptibility must be finite".into()));
        }
        if chi.im > 0.0 {
            return Err(ScatterError::InvalidConfig("Im chi > 0 lies outside the lower-half-plane branch".into()));
        }
        let (n, branch) = if chi.im < 0.0 {
            ((1.0 + chi).sqrt(), BranchTag::LowerHalfChi)
        } else {
            let w = 1.0 + chi.re;
            let n = if w >= 0.0 { Complex64::new(w.sqrt(), 0.0) } else { Complex64::new(0.0, -(-w).sqrt()) };
            (n, BranchTag::RealAxisLimit)
        };
        Ok(Self { k, radius, chi: Complex64::new(chi.re, if chi.im == 0.0 { 0.0 } else { chi.im }), n, branch })
    }

    /// Builds a configuration from a real refractive index `n > 0`, keeping
    /// `n` exact and deriving `chi = n^2 - 1`.
    pub fn from_index(k: f64, radius: f64, n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(ScatterError::InvalidConfig(format!("refractive index must be positive, got {n}")));
        }
        let mut cfg = Self::new(k, radius, Complex64::new(n * n - 1.0, 0.0))?;
        cfg.n = Complex64::new(n, 0.0);
        Ok(cfg)
    }

    /// Size parameter `xi = k R`.
    pub fn size_parameter(&self) -> f64 {
        self.k * self.radius
    }

    pub fn is_real(&self) -> bool {
        self.chi.im == 0.0
    }

    /// Geometric cross-section `pi R^2`.
    pub fn geometric_area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn volume(&self) -> f64 {
        4.0 * PI * self.radius.powi(3) / 3.0
    }

    pub(crate) fn require_real(&self, what: &'static str) -> Result<f64> {
        if self.is_real() {
            Ok(self.chi.re)
        } else {
            Err(ScatterError::InvalidConfig(format!("{what} requires a real susceptibility")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mie,
    RayleighGans,
    RayleighQuartic,
    VanDeHulst,
    EvansFournier,
    Semigroup,
    Born,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mie => "mie",
            Method::RayleighGans => "rayleigh_gans",
            Method::RayleighQuartic => "rayleigh_quartic",
            Method::VanDeHulst => "vdh",
            Method::EvansFournier => "evans_fournier",
            Method::Semigroup => "semigroup",
            Method::Born => "born",
        }
    }
}

/// Non-fatal conditions attached to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// The semigroup amplitude is used at `n >= sqrt(2)`, beyond the radius
    /// of convergence of its underlying expansion.
    IndexAboveSqrt2,
    /// Complex `chi`: the imaginary part of the forward amplitude is an
    /// extinction-like quantity, not a scattering cross-section.
    ExtinctionLike,
    /// Evans–Fournier evaluated outside its fitted range `1.01 <= n <= 2`.
    OutsideFitRange,
}

/// Forward amplitude `<E_inc, -chi k (I - chi G)^{-1} E_inc>` or an
/// approximation of it, with the cross-section it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeResult {
    pub forward_amplitude: Option<Complex64>,
    pub sigma_sc: f64,
    pub sigma_n: f64,
    pub method: Method,
    pub warnings: Vec<Warning>,
}

impl AmplitudeResult {
    pub(crate) fn from_amplitude(cfg: &ScatterConfig, amp: Complex64, method: Method) -> Self {
        let sigma_sc = amp.im;
        let mut warnings = Vec::new();
        if !cfg.is_real() {
            warnings.push(Warning::ExtinctionLike);
        }
        Self { forward_amplitude: Some(amp), sigma_sc, sigma_n: sigma_sc / cfg.geometric_area(), method, warnings }
    }

    pub(crate) fn from_sigma(cfg: &ScatterConfig, sigma_sc: f64, method: Method) -> Self {
        Self {
            forward_amplitude: None,
            sigma_sc,
            sigma_n: sigma_sc / cfg.geometric_area(),
            method,
            warnings: Vec::new(),
        }
    }
}

//! Cross-section sweeps over size parameter or relative phase shift.

use anyhow::{bail, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use scatter_core::approx::{evans_fournier, rayleigh_gans, rayleigh_quartic, semigroup_amplitude, van_de_hulst_sigma};
use scatter_core::mie::{mie_sigma, MieTruncation};
use scatter_core::{AmplitudeResult, Method, ScatterConfig};
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::parse;

pub const HEADER: &str = "kR,rho,method,sigma_n,amp_re,amp_im,flag";

/// Which variable the sweep steps through.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    SizeParameter(Vec<f64>),
    /// `rho = 2 (n - 1) kR`; each index gets its own `kR` values.
    PhaseShift(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub methods: Vec<Method>,
    pub n: Vec<f64>,
    pub axis: Axis,
    pub truncation: MieTruncation,
}

pub fn parse_method(name: &str) -> Result<Method> {
    Ok(match name.trim() {
        "mie" => Method::Mie,
        "rayleigh_gans" | "rg" => Method::RayleighGans,
        "semigroup" | "sg" => Method::Semigroup,
        "vdh" | "van_de_hulst" => Method::VanDeHulst,
        "evans_fournier" | "ef" => Method::EvansFournier,
        "rayleigh_quartic" | "quartic" => Method::RayleighQuartic,
        other => bail!("unknown method `{other}`"),
    })
}

pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let methods: Vec<Method> =
        list.split(',').filter(|s| !s.trim().is_empty()).map(parse_method).collect::<Result<_>>()?;
    if methods.is_empty() {
        bail!("no methods given");
    }
    Ok(methods)
}

pub fn parse_truncation(s: &str) -> Result<MieTruncation> {
    match s.trim() {
        "auto" => Ok(MieTruncation::default()),
        v => match v.parse::<usize>() {
            Ok(l) if l > 0 => Ok(MieTruncation::Fixed(l)),
            _ => bail!("truncation must be `auto` or a positive order count, got `{s}`"),
        },
    }
}

/// Fixed parameter sets for the three comparison presets.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let spec = match name {
        "fig5-1" => SweepSpec {
            methods: vec![Method::Mie, Method::RayleighGans, Method::Semigroup],
            n: vec![9.0 / 8.0],
            axis: Axis::SizeParameter(parse::range("0.1:30:0.1")?),
            truncation: MieTruncation::Fixed(200),
        },
        "fig5-2" => SweepSpec {
            methods: vec![Method::Mie, Method::Semigroup, Method::VanDeHulst, Method::EvansFournier],
            n: vec![1.5, 4.0 / 3.0],
            axis: Axis::PhaseShift(parse::range("0.1:20:0.1")?),
            truncation: MieTruncation::Fixed(100),
        },
        "fig5-3" => SweepSpec {
            methods: vec![Method::Mie, Method::RayleighGans, Method::Semigroup, Method::VanDeHulst],
            n: parse::range("1:2.5:0.01")?,
            axis: Axis::SizeParameter(vec![PI, 2.0 * PI]),
            truncation: MieTruncation::Fixed(50),
        },
        other => bail!("unknown preset `{other}` (expected fig5-1, fig5-2 or fig5-3)"),
    };
    Ok(spec)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            bail!("no methods given");
        }
        if self.n.iter().any(|n| !(*n > 0.0 && n.is_finite())) {
            bail!("refractive indices must be positive");
        }
        let values = match &self.axis {
            Axis::SizeParameter(v) | Axis::PhaseShift(v) => v,
        };
        if values.is_empty() || values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            bail!("sweep axis values must be positive");
        }
        if matches!(self.axis, Axis::PhaseShift(_)) && self.n.contains(&1.0) {
            bail!("a phase-shift axis needs n != 1");
        }
        Ok(())
    }

    /// `(n, kR)` pairs in output order: index-major, then along the axis.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for &n in &self.n {
            match &self.axis {
                Axis::SizeParameter(krs) => pts.extend(krs.iter().map(|&kr| (n, kr))),
                Axis::PhaseShift(rhos) => pts.extend(rhos.iter().map(|&rho| (n, rho / (2.0 * (n - 1.0)).abs()))),
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub kr: f64,
    pub rho: f64,
    pub method: Method,
    pub sigma_n: f64,
    pub amplitude: Option<Complex64>,
    pub flags: Vec<String>,
}

fn warning_name(w: &scatter_core::Warning) -> String {
    serde_json::to_value(w).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_else(|| format!("{w:?}"))
}

fn evaluate(cfg: &ScatterConfig, method: Method, trunc: MieTruncation) -> scatter_core::Result<AmplitudeResult> {
    match method {
        Method::Mie => mie_sigma(cfg, trunc),
        Method::RayleighGans => rayleigh_gans(cfg),
        Method::Semigroup => semigroup_amplitude(cfg),
        Method::VanDeHulst => van_de_hulst_sigma(cfg),
        Method::EvansFournier => evans_fournier(cfg),
        Method::RayleighQuartic => {
            let sigma_sc = rayleigh_quartic(cfg)?;
            Ok(AmplitudeResult {
                forward_amplitude: None,
                sigma_sc,
                sigma_n: sigma_sc / cfg.geometric_area(),
                method,
                warnings: Vec::new(),
            })
        }
        Method::Born => Ok(scatter_core::approx::born_amplitude(cfg)),
    }
}

fn row(n: f64, kr: f64, method: Method, trunc: MieTruncation) -> Row {
    let rho = 2.0 * (n - 1.0) * kr;
    let mut flags = Vec::new();
    let result = ScatterConfig::from_index(1.0, kr, n).and_then(|cfg| evaluate(&cfg, method, trunc));
    let (sigma_n, amplitude) = match result {
        Ok(res) => {
            flags.extend(res.warnings.iter().map(warning_name));
            (res.sigma_n, res.forward_amplitude)
        }
        Err(e) => {
            flags.push(format!("error: {e}").replace([',', '\n', '"'], " "));
            (f64::NAN, None)
        }
    };
    if !sigma_n.is_finite() {
        flags.push("nonfinite".into());
    }
    if amplitude.is_none() {
        flags.push("no_amplitude".into());
    }
    Row { kr, rho, method, sigma_n, amplitude, flags }
}

/// Evaluates every point concurrently and returns rows in input order.
pub fn run(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let rows: Vec<Vec<Row>> = spec
        .points()
        .par_iter()
        .map(|&(n, kr)| spec.methods.iter().map(|&m| row(n, kr, m, spec.truncation)).collect())
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "nan".into()
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let (re, im) = match r.amplitude {
            Some(a) => (num(a.re), num(a.im)),
            None => ("nan".into(), "nan".into()),
        };
        let flag = if r.flags.is_empty() { "ok".to_owned() } else { r.flags.join(";") };
        let _ = writeln!(out, "{},{},{},{},{re},{im},{flag}", num(r.kr), num(r.rho), r.method.name(), num(r.sigma_n));
    }
    out
}

//! Born-series norm bounds and validity criteria as CSV or JSON.

use anyhow::{bail, Result};
use num_complex::Complex64;
use scatter_core::bounds::{BoundReport, BoundValue};
use scatter_core::ScatterConfig;
use serde::Serialize;
use std::fmt::Write as _;

pub const HEADER: &str =
    "kR,chi,g_norm_bound,gs_bound,born_field_error,cross_section_error,criterion_perturbative,criterion_phase,small_sphere_factor,small_sphere_ok";

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub kr: f64,
    pub chi: f64,
    #[serde(flatten)]
    pub report: BoundReport,
}

pub fn run(chi: Complex64, krs: &[f64], threshold: f64) -> Result<Vec<BoundRow>> {
    if chi.im != 0.0 {
        bail!("the bounds are stated for real chi, got {chi}");
    }
    krs.iter()
        .map(|&kr| {
            let cfg = ScatterConfig::new(1.0, kr, chi)?;
            Ok(BoundRow { kr, chi: chi.re, report: BoundReport::new(&cfg, threshold)? })
        })
        .collect()
}

fn bound(v: BoundValue) -> String {
    match v {
        BoundValue::Finite(x) => format!("{x}"),
        BoundValue::Divergent => "divergent".into(),
    }
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "nan".into()
    } else {
        "divergent".into()
    }
}

pub fn to_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let b = &r.report;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.kr,
            r.chi,
            num(b.g_norm_bound),
            num(b.gs_bound),
            bound(b.born_field_error),
            bound(b.cross_section_error),
            b.criterion_perturbative,
            b.criterion_phase,
            num(b.validity.small_sphere_factor),
            b.validity.small_sphere_ok
        );
    }
    out
}

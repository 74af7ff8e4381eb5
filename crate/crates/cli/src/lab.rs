//! Voxel-grid semigroup laboratory: energy trace, Bochner resolvent against a
//! direct solve, and the large-contrast interior probe.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use scatter_core::operator::{assemble_green, build_grid, plane_wave, solve_born};
use scatter_core::semigroup::{
    bochner_resolvent, evolve, geometric_checkpoints, skin_effect_probe, BochnerControl, SkinProbe,
};
use scatter_core::ScatterConfig;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Dense solves and matrix exponentials stay interactive below this size.
pub const MAX_VOXELS: usize = 500;

#[derive(Debug, Clone)]
pub struct LabSpec {
    pub voxels_per_diameter: usize,
    pub kr: f64,
    pub chi: Vec<Complex64>,
    pub tau_max: Option<f64>,
    pub skin: Vec<f64>,
    pub rho_f: f64,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabOutput {
    pub voxels: usize,
    pub trace: Vec<(f64, f64)>,
    pub resolvent: Vec<(Complex64, f64)>,
    pub skin: Vec<(f64, f64)>,
}

pub fn run(spec: &LabSpec) -> Result<LabOutput> {
    if spec.chi.iter().any(|c| c.im >= 0.0) {
        bail!("resolvent susceptibilities need Im chi < 0");
    }
    // the operator depends only on the grid; chi is carried for validation
    let cfg = ScatterConfig::new(1.0, spec.kr, spec.chi.first().copied().unwrap_or(Complex64::new(0.0, -1.0)))?;
    let grid = build_grid(&cfg, spec.voxels_per_diameter)?;
    if grid.len() > MAX_VOXELS {
        bail!("grid has {} voxels; the lab is capped at {MAX_VOXELS}", grid.len());
    }
    let g = assemble_green(&grid, cfg.k)?;
    let e = plane_wave(&grid, cfg.k);

    let tau_max = spec.tau_max.unwrap_or(50.0 / g.operator_norm());
    let trace = evolve(&g, &e, &geometric_checkpoints(tau_max, 16), false)?;
    let trace = trace.taus.iter().copied().zip(trace.norms.iter().copied()).collect();

    let mut resolvent = Vec::with_capacity(spec.chi.len());
    for &chi in &spec.chi {
        let b = bochner_resolvent(&g, chi, &e, &BochnerControl::default())?;
        let d = solve_born(&g, chi, &e)?;
        resolvent.push((chi, (&b.values - &d.values).norm() / d.values.norm()));
    }

    let probe = SkinProbe::bump(&grid, spec.rho_f, spec.skin.clone())?;
    let skin = skin_effect_probe(&g, &e, &probe)?;
    Ok(LabOutput { voxels: grid.len(), trace, resolvent, skin })
}

pub fn write(out: &LabOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut trace = String::from("tau,norm\n");
    for (t, n) in &out.trace {
        let _ = writeln!(trace, "{t},{n}");
    }
    let mut resolvent = String::from("chi,rel_err_vs_direct\n");
    for (c, r) in &out.resolvent {
        let _ = writeln!(resolvent, "{c},{r}");
    }
    let mut skin = String::from("chi_mag,functional\n");
    for (m, v) in &out.skin {
        let _ = writeln!(skin, "{m},{v}");
    }
    for (name, body) in [("trace.csv", trace), ("resolvent.csv", resolvent), ("skin.csv", skin)] {
        let path = dir.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

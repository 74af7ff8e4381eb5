//! Acceptance suite: fourteen criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed on a plain
//! `cargo test`; the process exits nonzero if any criterion fails.

mod common;

use common::{bh_sigma_n, rel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scatter_core::approx::*;
use scatter_core::bounds::{cross_section_error, green_norm_bound, BoundValue};
use scatter_core::mie::{mie_sigma, MieTruncation};
use scatter_core::operator::*;
use scatter_core::oracle::{f1_quadrature, f2_quadrature, QuadratureControl};
use scatter_core::semigroup::*;
use scatter_core::{Complex64, ScatterConfig};
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn lossy(kr: f64, n: Complex64) -> ScatterConfig {
    ScatterConfig::new(1.0, kr, n * n - 1.0).unwrap()
}

fn index(kr: f64, n: f64) -> ScatterConfig {
    ScatterConfig::from_index(1.0, kr, n).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| start + i as f64 * step).collect()
}

fn closed_form_gate() -> Outcome {
    let lattice = [(1.2, -0.1, 2.0), (1.1, -0.05, 1.0), (1.5, -0.2, 3.0), (1.3, -0.01, 5.0), (0.9, -0.1, 1.5)];
    let qc = QuadratureControl::default();
    let mut worst: f64 = 0.0;
    for (a, b, kr) in lattice {
        let cfg = lossy(kr, Complex64::new(a, b));
        let f1 = f1_amplitude(&cfg).unwrap().value;
        let f2 = f2_amplitude(&cfg).unwrap().value;
        let q1 = f1_quadrature(&cfg, &qc).unwrap().value;
        let q2 = f2_quadrature(&cfg, &qc).unwrap().value;
        worst = worst.max((f1 - q1).norm() / q1.norm()).max((f2 - q2).norm() / q2.norm());
    }
    (worst <= 1e-4, format!("max rel err {worst:.2e} over 5 points (tol 1e-4)"))
}

fn rayleigh_gans_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    for kr in [0.5, 1.0, 5.0] {
        let cfg = index(kr, 1.001);
        let sg = semigroup_amplitude(&cfg).unwrap().sigma_sc;
        let rg = rayleigh_gans(&cfg).unwrap().sigma_sc;
        worst = worst.max((sg / rg - 1.0).abs());
    }
    (worst <= 1e-3, format!("max |ratio - 1| {worst:.2e} at n = 1.001 (tol 1e-3)"))
}

fn quartic_limit() -> Outcome {
    let cfg = index(0.01, 1.5);
    let d = (rayleigh_gans(&cfg).unwrap().sigma_sc / rayleigh_quartic(&cfg).unwrap() - 1.0).abs();
    (d <= 0.02, format!("|ratio - 1| {d:.2e} at kR = 0.01 (tol 2e-2)"))
}

fn small_contrast_dominance() -> Outcome {
    let (mut sg, mut rg) = (Vec::new(), Vec::new());
    for kr in 1..=30 {
        let cfg = index(kr as f64, 9.0 / 8.0);
        let mie = mie_sigma(&cfg, MieTruncation::Fixed(200)).unwrap().sigma_n;
        sg.push((semigroup_amplitude(&cfg).unwrap().sigma_n - mie).abs());
        rg.push((rayleigh_gans(&cfg).unwrap().sigma_n - mie).abs());
    }
    let (a, b) = (median(sg), median(rg));
    (a < b, format!("median error semigroup {a:.3e} vs Rayleigh-Gans {b:.3e}"))
}

fn phase_axis_dominance() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [1.5, 4.0 / 3.0] {
        let (mut sg, mut vdh) = (Vec::new(), Vec::new());
        for rho in steps(0.1, 20.0, 0.1) {
            let cfg = index(rho / (2.0 * (n - 1.0)), n);
            let mie = mie_sigma(&cfg, MieTruncation::Fixed(100)).unwrap().sigma_n;
            sg.push((semigroup_amplitude(&cfg).unwrap().sigma_n - mie).abs());
            vdh.push((van_de_hulst(rho) - mie).abs());
        }
        let (a, b) = (mean(&sg), mean(&vdh));
        pass &= a <= b;
        detail.push(format!("n={n:.4}: {a:.3e} vs {b:.3e}"));
    }
    (pass, format!("mean error semigroup vs van de Hulst, {}", detail.join(", ")))
}

fn van_de_hulst_anchor() -> Outcome {
    let v = van_de_hulst(2.0 * PI);
    (v == 2.0, format!("value {v:.17} at rho = 2 pi"))
}

fn mie_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(1.001..=2.5);
        let kr = rng.gen_range(0.05..=50.0);
        let ours = mie_sigma(&index(kr, n), MieTruncation::default()).unwrap().sigma_n;
        worst = worst.max(rel(ours, bh_sigma_n(n, kr)));
    }
    (worst <= 1e-8, format!("max rel err {worst:.2e} over 10 random points (tol 1e-8)"))
}

fn ball(kr: f64) -> ScatterConfig {
    ScatterConfig::new(1.0, kr, Complex64::new(0.5, -0.1)).unwrap()
}

fn dissipativity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut sizes = Vec::new();
    for m in [1, 4, 8] {
        let grid = build_grid(&ball(1.0), m).unwrap();
        let g = assemble_green(&grid, 1.0).unwrap();
        let top = g.anti_hermitian_eigenvalues().last().copied().unwrap();
        worst = worst.max(top / g.operator_norm());
        sizes.push(grid.len().to_string());
    }
    (worst <= 1e-8, format!("max eig / |G| = {worst:.2e} on N = {} (tol 1e-8)", sizes.join(", ")))
}

fn optical_theorem() -> Outcome {
    let mut residuals = Vec::new();
    let mut size = 0;
    for (m, rule) in
        [(4, AngularRule::Lebedev26), (6, AngularRule::ProductGauss(6)), (8, AngularRule::ProductGauss(10))]
    {
        let cfg = ball(1.0);
        let grid = build_grid(&cfg, m).unwrap();
        let g = assemble_green(&grid, 1.0).unwrap();
        let psi = solve_born(&g, cfg.chi, &plane_wave(&grid, 1.0)).unwrap();
        let ff = FarFieldForm::new(&grid, 1.0, &psi, rule);
        residuals.push(optical_theorem_residual(&g, &psi, &ff).unwrap());
        size = grid.len();
    }
    let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
    let last = *residuals.last().unwrap();
    let shown: Vec<String> = residuals.iter().map(|r| format!("{r:.2e}")).collect();
    (monotone && last <= 5e-2, format!("residuals {} ending at N = {size} (tol 5e-2, decreasing)", shown.join(" > ")))
}

fn resolvent_equivalence() -> Outcome {
    let grid = build_grid(&ball(1.0), 5).unwrap();
    let g = assemble_green(&grid, 1.0).unwrap();
    let e = plane_wave(&grid, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let chi = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..-0.05));
        let b = bochner_resolvent(&g, chi, &e, &BochnerControl::default()).unwrap();
        let d = solve_born(&g, chi, &e).unwrap();
        worst = worst.max((&b.values - &d.values).norm() / d.values.norm());
    }
    (worst <= 1e-4, format!("max rel err {worst:.2e} on N = {} (tol 1e-4)", grid.len()))
}

fn energy_decay() -> Outcome {
    let mut worst_increase: f64 = 0.0;
    for m in [2, 4, 6] {
        let grid = build_grid(&ball(1.0), m).unwrap();
        let g = assemble_green(&grid, 1.0).unwrap();
        let e = plane_wave(&grid, 1.0);
        let trace = evolve(&g, &e, &geometric_checkpoints(50.0 / g.operator_norm(), 12), false).unwrap();
        worst_increase = worst_increase.max(trace.max_relative_increase());
    }
    let grid = build_grid(&ball(1.0), 4).unwrap();
    let g = assemble_green(&grid, 1.0).unwrap();
    let e = plane_wave(&grid, 1.0);
    let last = |psi: &FieldState, t: f64| evolve(&g, psi, &[0.0, t], true).unwrap().states.unwrap().pop().unwrap();
    let direct = last(&e, 3.4);
    let composed = last(&last(&e, 0.9), 2.5);
    let comp = (&composed.values - &direct.values).norm() / direct.values.norm();
    (
        worst_increase <= 1e-9 && comp <= 1e-8,
        format!("max relative norm increase {worst_increase:.2e} (tol 1e-9), composition {comp:.2e} (tol 1e-8)"),
    )
}

fn j1_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let gs = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..=-0.1));
        let tau = rng.gen_range(0.1..5.0);
        worst = worst.max(j1_identity_check(gs, tau).unwrap());
    }
    (worst <= 1e-8, format!("max residual {worst:.2e} over 10 random (G, tau) (tol 1e-8)"))
}

fn skin_trend() -> Outcome {
    // Fixed by the pilot scan before looking at the acceptance outcome.
    let grid = build_grid(&ball(1.0), 6).unwrap();
    let g = assemble_green(&grid, 1.0).unwrap();
    let e = plane_wave(&grid, 1.0);
    let probe = SkinProbe::bump(&grid, 0.5, vec![10.0, 100.0, 1000.0]).unwrap();
    let vals = skin_effect_probe(&g, &e, &probe).unwrap();
    let decreasing = vals.windows(2).all(|w| w[1].1 < w[0].1);
    let shown: Vec<String> = vals.iter().map(|(m, v)| format!("{m:.0}: {v:.3e}")).collect();
    (decreasing, format!("functional on N = {}: {} (need strictly decreasing)", grid.len(), shown.join(", ")))
}

/// Every sweep point of the three comparison presets.
fn preset_points() -> Vec<ScatterConfig> {
    let mut pts: Vec<ScatterConfig> = steps(0.1, 30.0, 0.1).into_iter().map(|kr| index(kr, 9.0 / 8.0)).collect();
    for n in [1.5, 4.0 / 3.0] {
        pts.extend(steps(0.1, 20.0, 0.1).into_iter().map(|rho| index(rho / (2.0 * (n - 1.0)), n)));
    }
    for kr in [PI, 2.0 * PI] {
        pts.extend(steps(1.0, 2.5, 0.01).into_iter().map(|n| index(kr, n)));
    }
    pts
}

fn bound_honesty() -> Outcome {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for cfg in preset_points() {
        if cfg.chi.norm() * green_norm_bound(cfg.size_parameter()) >= 0.5 {
            continue;
        }
        let BoundValue::Finite(bound) = cross_section_error(&cfg).unwrap() else {
            violations += 1;
            continue;
        };
        let mie = mie_sigma(&cfg, MieTruncation::default()).unwrap().sigma_n;
        let rg = rayleigh_gans(&cfg).unwrap().sigma_n;
        let observed = (rg - mie).abs() * cfg.geometric_area();
        checked += 1;
        if observed > bound {
            violations += 1;
        }
        if bound > 0.0 {
            worst = worst.max(observed / bound);
        }
    }
    (
        checked > 0 && violations == 0,
        format!("{checked} points checked, {violations} violations, max observed/bound {worst:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("closed-form/oracle gate", closed_form_gate),
        ("Rayleigh-Gans recovery", rayleigh_gans_recovery),
        ("quartic-law limit", quartic_limit),
        ("n = 9/8 dominance over Rayleigh-Gans", small_contrast_dominance),
        ("phase-axis dominance over van de Hulst", phase_axis_dominance),
        ("van de Hulst anchor", van_de_hulst_anchor),
        ("Mie oracle equivalence", mie_oracle),
        ("operator dissipativity", dissipativity),
        ("optical-theorem residual", optical_theorem),
        ("resolvent equivalence", resolvent_equivalence),
        ("monotone energy decay", energy_decay),
        ("J1 identity", j1_identity),
        ("skin-effect trend", skin_trend),
        ("Born error-bound honesty", bound_honesty),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run();
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{verdict}] {name}: {detail} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 14 criteria pass");
    } else {
        println!("acceptance: {} of 14 pass; failing: {failed:?}", 14 - failed.len());
        std::process::exit(1);
    }
}

//! Voxelized Green operator on a ball.
//!
//! Voxel centres sit on the offset cubic lattice of spacing `h = 2R/m` and are
//! kept when strictly inside the ball. Off-diagonal 3x3 blocks are
//! `h^3 (k^2 + grad grad) e^{-ik r}/(4 pi r)` evaluated centre to centre.
//! The diagonal block is the principal-value self term of an equal-volume
//! sphere of radius `a`, `-1/3 + (2/3) Re[(1 + ika) e^{-ika} - 1]`, plus the
//! radiative reaction `-i k^3 h^3 / (6 pi)`. With that choice
//! `Im G = -h^3 K` where `K_ab = (k^3/16 pi^2) int (I - nn) e^{ik n.(r_a - r_b)} dOmega`
//! is a Gram matrix, so the discrete operator is dissipative exactly and the
//! discrete optical theorem holds up to the angular quadrature.
//!
//! Inner products follow `<F, G> = h^3 sum conj(F) . G`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::config::ScatterConfig;
use crate::error::{Result, ScatterError};
use crate::quad::gauss_legendre;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Voxel centres inside the ball, ordered lexicographically by `(z, y, x)`.
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    pub centers: Vec<[f64; 3]>,
    pub spacing: f64,
    pub radius: f64,
    /// Set when `h` exceeds a tenth of the wavelength.
    pub coarse: bool,
}

impl VoxelGrid {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn voxel_volume(&self) -> f64 {
        self.spacing.powi(3)
    }
}

pub fn build_grid(cfg: &ScatterConfig, voxels_per_diameter: usize) -> Result<VoxelGrid> {
    if voxels_per_diameter == 0 {
        return Err(ScatterError::Grid("voxels_per_diameter must be at least 1".into()));
    }
    let r = cfg.radius;
    let h = 2.0 * r / voxels_per_diameter as f64;
    let coord = |i: usize| -r + h * (i as f64 + 0.5);
    let mut centers = Vec::new();
    for iz in 0..voxels_per_diameter {
        for iy in 0..voxels_per_diameter {
            for ix in 0..voxels_per_diameter {
                let c = [coord(ix), coord(iy), coord(iz)];
                if c[0] * c[0] + c[1] * c[1] + c[2] * c[2] < r * r {
                    centers.push(c);
                }
            }
        }
    }
    if centers.is_empty() {
        return Err(ScatterError::Grid("no voxel centre falls inside the ball".into()));
    }
    let wavelength = 2.0 * PI / cfg.k;
    Ok(VoxelGrid { centers, spacing: h, radius: r, coarse: h > wavelength / 10.0 })
}

/// Dense `3N x 3N` discretization of the Green operator.
#[derive(Debug, Clone)]
pub struct GreenMatrix {
    pub entries: DMatrix<Complex64>,
    pub k: f64,
    pub voxel_volume: f64,
    /// Scalar multiplying the identity in every diagonal 3x3 block.
    pub self_term: Complex64,
}

impl GreenMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `G psi` as a field on the same grid.
    pub fn apply(&self, psi: &FieldState) -> FieldState {
        FieldState { values: &self.entries * &psi.values, tau: psi.tau, voxel_volume: psi.voxel_volume }
    }

    /// Largest singular value, by power iteration on `G^H G`.
    pub fn operator_norm(&self) -> f64 {
        let n = self.dim();
        let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
        let mut sigma = 0.0;
        for _ in 0..300 {
            let w = self.entries.ad_mul(&(&self.entries * &v));
            let nrm = w.norm();
            if nrm == 0.0 {
                return 0.0;
            }
            let next = nrm.sqrt();
            v = w / Complex64::new(nrm, 0.0);
            if (next - sigma).abs() <= 1e-13 * next {
                sigma = next;
                break;
            }
            sigma = next;
        }
        sigma
    }

    /// Eigenvalues of the Hermitian matrix `(G - G^H)/(2i)`, ascending.
    pub fn anti_hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries - self.entries.adjoint()) * Complex64::new(0.0, -0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// 3x3 dyadic block `h^3 (k^2 + grad grad) e^{-ikr}/(4 pi r)` for separation `r`.
pub fn dyadic_block(k: f64, r: [f64; 3], voxel_volume: f64) -> [[Complex64; 3]; 3] {
    let d = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let g = (-I * k * d).exp() / (4.0 * PI * d) * voxel_volume;
    let a = g * (k * k - I * k / d - 1.0 / (d * d));
    let b = g * (-k * k + 3.0 * I * k / d + 3.0 / (d * d));
    let u = [r[0] / d, r[1] / d, r[2] / d];
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, v) in row.iter_mut().enumerate() {
            *v = b * u[p] * u[q];
            if p == q {
                *v += a;
            }
        }
    }
    out
}

/// Diagonal self term for a cubic voxel of side `h`.
pub fn self_term(k: f64, h: f64) -> Complex64 {
    let a = h * (3.0 / (4.0 * PI)).cbrt();
    let x = k * a;
    let re = -1.0 / 3.0 + 2.0 / 3.0 * (x.cos() + x * x.sin() - 1.0);
    Complex64::new(re, -(k * h).powi(3) / (6.0 * PI))
}

pub fn assemble_green(grid: &VoxelGrid, k: f64) -> Result<GreenMatrix> {
    if grid.is_empty() {
        return Err(ScatterError::Grid("empty grid".into()));
    }
    let n = grid.len();
    let vol = grid.voxel_volume();
    let diag = self_term(k, grid.spacing);
    let mut m = DMatrix::<Complex64>::zeros(3 * n, 3 * n);
    for a in 0..n {
        for p in 0..3 {
            m[(3 * a + p, 3 * a + p)] = diag;
        }
        for b in (a + 1)..n {
            let ca = grid.centers[a];
            let cb = grid.centers[b];
            let r = [ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2]];
            if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt() < 1e-12 * grid.spacing {
                return Err(ScatterError::Grid(format!("voxels {a} and {b} coincide")));
            }
            let blk = dyadic_block(k, r, vol);
            for p in 0..3 {
                for q in 0..3 {
                    m[(3 * a + p, 3 * b + q)] = blk[p][q];
                    m[(3 * b + q, 3 * a + p)] = blk[p][q];
                }
            }
        }
    }
    Ok(GreenMatrix { entries: m, k, voxel_volume: vol, self_term: diag })
}

/// Field sampled at voxel centres, three Cartesian components per voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub values: DVector<Complex64>,
    pub tau: f64,
    pub voxel_volume: f64,
}

impl FieldState {
    pub fn zeros(len: usize, voxel_volume: f64) -> Self {
        Self { values: DVector::zeros(len), tau: 0.0, voxel_volume }
    }

    /// `<self, other> = h^3 sum conj(self) . other`.
    pub fn inner(&self, other: &FieldState) -> Complex64 {
        self.values.dotc(&other.values) * self.voxel_volume
    }

    pub fn norm(&self) -> f64 {
        (self.values.norm_squared() * self.voxel_volume).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// `e_x exp(-ikz)` sampled at the voxel centres.
pub fn plane_wave(grid: &VoxelGrid, k: f64) -> FieldState {
    let mut values = DVector::zeros(3 * grid.len());
    for (i, c) in grid.centers.iter().enumerate() {
        values[3 * i] = (-I * k * c[2]).exp();
    }
    FieldState { values, tau: 0.0, voxel_volume: grid.voxel_volume() }
}

/// Solves `(I - chi G) E = E_inc` by dense LU.
pub fn solve_born(g: &GreenMatrix, chi: Complex64, e_inc: &FieldState) -> Result<FieldState> {
    let n = g.dim();
    let m = DMatrix::<Complex64>::identity(n, n) - &g.entries * chi;
    let sol = m.clone().lu().solve(&e_inc.values).ok_or(ScatterError::Singular(f64::INFINITY))?;
    let resid = (&m * &sol - &e_inc.values).norm() / e_inc.values.norm().max(f64::MIN_POSITIVE);
    if !resid.is_finite() || resid > 1e-10 {
        return Err(ScatterError::Singular(resid));
    }
    Ok(FieldState { values: sol, tau: e_inc.tau, voxel_volume: e_inc.voxel_volume })
}

/// Quadrature rule on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularRule {
    /// 26-point Lebedev rule, exact through degree 7.
    Lebedev26,
    /// `p` Gauss–Legendre nodes in `cos theta` times `2p` uniform azimuths.
    ProductGauss(usize),
}

impl AngularRule {
    /// Unit directions and weights summing to `4 pi`.
    pub fn nodes(self) -> (Vec<[f64; 3]>, Vec<f64>) {
        match self {
            AngularRule::Lebedev26 => {
                let mut dirs = Vec::new();
                let mut w = Vec::new();
                for axis in 0..3 {
                    for s in [1.0, -1.0] {
                        let mut d = [0.0; 3];
                        d[axis] = s;
                        dirs.push(d);
                        w.push(4.0 * PI / 21.0);
                    }
                }
                let r2 = 0.5f64.sqrt();
                for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                    for s in [1.0, -1.0] {
                        for t in [1.0, -1.0] {
                            let mut d = [0.0; 3];
                            d[p] = s * r2;
                            d[q] = t * r2;
                            dirs.push(d);
                            w.push(4.0 * PI * 4.0 / 105.0);
                        }
                    }
                }
                let r3 = (1.0f64 / 3.0).sqrt();
                for s in [1.0, -1.0] {
                    for t in [1.0, -1.0] {
                        for u in [1.0, -1.0] {
                            dirs.push([s * r3, t * r3, u * r3]);
                            w.push(4.0 * PI * 9.0 / 280.0);
                        }
                    }
                }
                (dirs, w)
            }
            AngularRule::ProductGauss(p) => {
                let (x, wx) = gauss_legendre(p.max(1));
                let nphi = 2 * p.max(1);
                let dphi = 2.0 * PI / nphi as f64;
                let mut dirs = Vec::with_capacity(x.len() * nphi);
                let mut w = Vec::with_capacity(x.len() * nphi);
                for (ct, wt) in x.iter().zip(&wx) {
                    let st = (1.0 - ct * ct).sqrt();
                    for j in 0..nphi {
                        let ph = dphi * j as f64;
                        dirs.push([st * ph.cos(), st * ph.sin(), *ct]);
                        w.push(wt * dphi);
                    }
                }
                (dirs, w)
            }
        }
    }
}

/// Far-field form factors `psi~(n) = h^3 sum_j psi_j e^{ik n.r_j}` on a sphere rule.
#[derive(Debug, Clone)]
pub struct FarFieldForm {
    pub directions: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub form_factor: Vec<[Complex64; 3]>,
}

impl FarFieldForm {
    pub fn new(grid: &VoxelGrid, k: f64, psi: &FieldState, rule: AngularRule) -> Self {
        let (directions, weights) = rule.nodes();
        let vol = grid.voxel_volume();
        let form_factor = directions
            .iter()
            .map(|n| {
                let mut acc = [Complex64::new(0.0, 0.0); 3];
                for (j, c) in grid.centers.iter().enumerate() {
                    let phase = (I * k * (n[0] * c[0] + n[1] * c[1] + n[2] * c[2])).exp() * vol;
                    for (p, a) in acc.iter_mut().enumerate() {
                        *a += psi.values[3 * j + p] * phase;
                    }
                }
                acc
            })
            .collect();
        Self { directions, weights, form_factor }
    }

    /// `(k^3 / 8 pi^2) sum_n w |n x psi~(n)|^2`.
    pub fn radiated_flux(&self, k: f64) -> f64 {
        let mut total = 0.0;
        for ((n, w), f) in self.directions.iter().zip(&self.weights).zip(&self.form_factor) {
            let cross = [n[1] * f[2] - n[2] * f[1], n[2] * f[0] - n[0] * f[2], n[0] * f[1] - n[1] * f[0]];
            total += w * cross.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        k.powi(3) / (8.0 * PI * PI) * total
    }
}

/// Relative mismatch between `2 Im <G psi, psi>` and the radiated flux.
/// Returns 0 for a vanishing field.
pub fn optical_theorem_residual(g: &GreenMatrix, psi: &FieldState, ff: &FarFieldForm) -> Result<f64> {
    if psi.values.len() != g.dim() {
        return Err(ScatterError::Grid("field and operator dimensions differ".into()));
    }
    let lhs = 2.0 * g.apply(psi).inner(psi).im;
    let rhs = ff.radiated_flux(g.k);
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((lhs - rhs).abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: f64) -> ScatterConfig {
        ScatterConfig::new(k, 1.0, Complex64::new(0.5, 0.0)).unwrap()
    }

    #[test]
    fn grid_counts_and_order() {
        let counts: Vec<usize> = (1..=8).map(|m| build_grid(&cfg(1.0), m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 8, 19, 32, 81, 136, 179, 280]);
        let g = build_grid(&cfg(1.0), 1).unwrap();
        assert_eq!(g.centers[0], [0.0, 0.0, 0.0]);
        let g = build_grid(&cfg(1.0), 6).unwrap();
        let key = |c: &[f64; 3]| (c[2], c[1], c[0]);
        assert!(g.centers.windows(2).all(|w| key(&w[0]) < key(&w[1])));
        let g = build_grid(&cfg(1.0), 16).unwrap();
        let vol = g.len() as f64 * g.voxel_volume();
        assert!((vol / (4.0 * PI / 3.0) - 1.0).abs() < 0.1);
        assert!(build_grid(&cfg(1.0), 0).is_err());
        assert!(build_grid(&cfg(10.0), 4).unwrap().coarse);
    }

    #[test]
    fn static_limit_is_dipole_tensor() {
        let r = [0.3, -1.1, 2.0];
        let d: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        let blk = dyadic_block(1e-9, r, 0.2);
        for p in 0..3 {
            for q in 0..3 {
                let delta = if p == q { 1.0 } else { 0.0 };
                let expected = (3.0 * r[p] * r[q] / (d * d) - delta) / (4.0 * PI * d.powi(3)) * 0.2;
                assert!((blk[p][q] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reciprocity_and_single_voxel() {
        let grid = build_grid(&cfg(1.0), 4).unwrap();
        let g = assemble_green(&grid, 1.0).unwrap();
        assert_eq!(g.entries, g.entries.transpose());
        let one = assemble_green(&build_grid(&cfg(1.0), 1).unwrap(), 1.0).unwrap();
        let ev = one.anti_hermitian_eigenvalues();
        assert!(ev.iter().all(|&e| e <= 0.0));
        assert!((ev[0] - one.self_term.im).abs() < 1e-15);
    }

    #[test]
    fn lebedev_and_product_rules_integrate_low_degree() {
        for rule in [AngularRule::Lebedev26, AngularRule::ProductGauss(6)] {
            let (d, w) = rule.nodes();
            assert!((w.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
            let x2z4: f64 = d.iter().zip(&w).map(|(n, w)| w * n[0].powi(2) * n[2].powi(4)).sum();
            assert!((x2z4 - 4.0 * PI / 35.0).abs() < 1e-12, "{rule:?}");
        }
    }

    #[test]
    fn plane_wave_samples() {
        let grid = build_grid(&cfg(2.0), 5).unwrap();
        let e = plane_wave(&grid, 2.0);
        let origin = grid.centers.iter().position(|c| c.iter().all(|v| v.abs() < 1e-14)).unwrap();
        assert_eq!(e.values[3 * origin], Complex64::new(1.0, 0.0));
        assert!((e.norm().powi(2) - grid.voxel_volume() * grid.len() as f64).abs() < 1e-12);
        assert!(
            optical_theorem_residual(
                &assemble_green(&grid, 2.0).unwrap(),
                &FieldState::zeros(e.values.len(), e.voxel_volume),
                &FarFieldForm::new(
                    &grid,
                    2.0,
                    &FieldState::zeros(e.values.len(), e.voxel_volume),
                    AngularRule::Lebedev26
                )
            )
            .unwrap()
                == 0.0
        );
    }

    #[test]
    fn zero_susceptibility_solve_is_identity() {
        let grid = build_grid(&cfg(1.0), 4).unwrap();
        let g = assemble_green(&grid, 1.0).unwrap();
        let e = plane_wave(&grid, 1.0);
        let s = solve_born(&g, Complex64::new(0.0, 0.0), &e).unwrap();
        assert_eq!(s.values, e.values);
    }
}

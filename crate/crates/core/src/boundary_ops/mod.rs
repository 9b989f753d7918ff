//! Nyström discretizations of the boundary operators C_Σ, 𝒞_m, 𝒞_z, Θ_z,
//! Λ_z, Γ and S_z, and of the layer potential Φ_z.
//!
//! Spinor operators act on densities stored interleaved by node:
//! index 2i is the first component at node i, 2i+1 the second.

mod export;
mod potential;
mod weights;

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64 as c64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::QuadratureGrid;
use crate::kernels::Coupling;
use crate::linalg::{self, CMat};
use crate::special::{bessel_i0, bessel_i1, k0k1, xk1_minus_one, EULER_GAMMA};

pub use export::{read_dsh1, write_csv, write_dsh1};
pub use potential::{distance_to_curve, evaluate_potential, PotentialValue};
pub use weights::SingularWeights;

/// Smallest grid accepted by the assembly routines.
pub const MIN_NODES: usize = 16;

const I: c64 = c64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    Cauchy,
    Cm,
    Cz,
    Theta,
    Lambda,
    Gamma,
    Sz,
    Derived,
}

/// Which operator a matrix represents, and at which spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorTag {
    pub kind: OperatorKind,
    pub z: Option<f64>,
}

/// Dense N×N operator on scalar densities.
#[derive(Debug, Clone)]
pub struct ScalarOperator {
    pub matrix: CMat,
    pub weights: Vec<f64>,
    pub tag: OperatorTag,
}

/// Dense 2N×2N operator on ℂ²-valued densities.
#[derive(Debug, Clone)]
pub struct SpinorOperator {
    pub matrix: CMat,
    /// Quadrature weight of each node (length N).
    pub weights: Vec<f64>,
    pub tag: OperatorTag,
}

fn spinor_weights(w: &[f64]) -> Vec<f64> {
    w.iter().flat_map(|&x| [x, x]).collect()
}

impl ScalarOperator {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// W^{1/2} A W^{−1/2}: the matrix of the operator in an L²(ds)-orthonormal basis.
    pub fn symmetrized(&self) -> CMat {
        linalg::similarity_scale(&self.matrix, &self.weights)
    }

    pub fn apply(&self, g: &[c64]) -> Vec<c64> {
        linalg::matvec(&self.matrix, g)
    }
}

impl SpinorOperator {
    /// Number of nodes N.
    pub fn nodes(&self) -> usize {
        self.weights.len()
    }

    pub fn symmetrized(&self) -> CMat {
        linalg::similarity_scale(&self.matrix, &spinor_weights(&self.weights))
    }

    /// max |A − Aᴴ| in the L²(ds)-orthonormal basis.
    pub fn hermiticity_residual(&self) -> f64 {
        linalg::hermiticity_residual(&self.symmetrized())
    }

    pub fn apply(&self, g: &[c64]) -> Vec<c64> {
        linalg::matvec(&self.matrix, g)
    }

    /// The 2×2 block (i, j).
    pub fn block(&self, i: usize, j: usize) -> crate::kernels::SpinorMatrix {
        let m = &self.matrix;
        crate::kernels::SpinorMatrix::new(
            m[(2 * i, 2 * j)],
            m[(2 * i, 2 * j + 1)],
            m[(2 * i + 1, 2 * j)],
            m[(2 * i + 1, 2 * j + 1)],
        )
    }

    fn derived(matrix: CMat, weights: Vec<f64>, kind: OperatorKind, z: Option<f64>) -> Self {
        SpinorOperator { matrix, weights, tag: OperatorTag { kind, z } }
    }
}

fn check_grid(grid: &QuadratureGrid) -> Result<()> {
    if grid.len() < MIN_NODES {
        return Err(Error::GridTooCoarse { nodes: grid.len(), min: MIN_NODES });
    }
    Ok(())
}

/// Build an n×n matrix row-parallel from a row generator.
fn par_rows<F>(n_rows: usize, n_cols: usize, f: F) -> CMat
where
    F: Fn(usize, &mut [c64]) + Sync,
{
    let mut buf = vec![c64::new(0.0, 0.0); n_rows * n_cols];
    buf.par_chunks_mut(n_cols).enumerate().for_each(|(i, row)| f(i, row));
    Mat::from_fn(n_rows, n_cols, |i, j| buf[i * n_cols + j])
}

/// C_Σ g(x) = (i/2π) pv∫ g(y)/(x − y) dy.
pub fn assemble_cauchy(grid: &QuadratureGrid) -> Result<ScalarOperator> {
    check_grid(grid)?;
    let w = SingularWeights::for_grid(grid);
    let n = grid.len();
    let f = -I / (2.0 * PI);
    let matrix = Mat::from_fn(n, n, |i, j| f * w.cauchy[(i, j)]);
    Ok(ScalarOperator { matrix, weights: grid.weights.clone(), tag: OperatorTag { kind: OperatorKind::Cauchy, z: None } })
}

/// 𝒞_m = [[0, C_Σ t*], [t C_Σ*, 0]].
#[allow(non_snake_case)]
pub fn assemble_Cm(grid: &QuadratureGrid) -> Result<SpinorOperator> {
    check_grid(grid)?;
    let w = SingularWeights::for_grid(grid);
    let n = grid.len();
    let f = -I / (2.0 * PI);
    let tau: Vec<c64> = grid.tangents.iter().map(|t| t.to_complex()).collect();
    let matrix = par_rows(2 * n, 2 * n, |row, out| {
        let i = row / 2;
        if row % 2 == 0 {
            for j in 0..n {
                out[2 * j + 1] = f * w.cauchy[(i, j)] * tau[j].conj();
            }
        } else {
            for j in 0..n {
                out[2 * j] = f * w.cauchy[(i, j)].conj() * tau[j];
            }
        }
    });
    Ok(SpinorOperator::derived(matrix, grid.weights.clone(), OperatorKind::Cm, None))
}

/// Pieces of the 𝒞_z − 𝒞_m and S_z kernels at one source/target pair.
struct PairTerms {
    /// Discretized K₀(κ|x−y|) ds contribution (without 1/2π).
    s: f64,
    /// (1,2) entry of the difference kernel.
    d12: c64,
    /// (2,1) entry of the difference kernel.
    d21: c64,
}

fn pair_terms(d: c64, kappa: f64, weight: f64, log_weight: f64) -> PairTerms {
    let r = d.norm();
    let x = kappa * r;
    let (k0, _) = k0k1(x);
    let i0 = bessel_i0(x);
    let i1 = bessel_i1(x);
    let corr = log_weight - weight * r.ln();
    let s = k0 * weight - i0 * corr;
    // i·c·(κK₁(κr)/r − 1/r²)/(2π) with log coefficient i·c·κI₁(κr)/(2πr)
    let smooth = xk1_minus_one(x) / (r * r) * weight + kappa * i1 / r * corr;
    let f = I * smooth / (2.0 * PI);
    PairTerms { s, d12: f * d.conj(), d21: f * d }
}

fn s_diagonal(kappa: f64, weight: f64, log_weight: f64) -> f64 {
    -log_weight + (-(0.5 * kappa).ln() - EULER_GAMMA) * weight
}

/// 𝒞_z for z in the gap; z = m gives 𝒞_m.
#[allow(non_snake_case)]
pub fn assemble_Cz(grid: &QuadratureGrid, z: f64, coupling: &Coupling) -> Result<SpinorOperator> {
    if z == coupling.mass {
        let mut c = assemble_Cm(grid)?;
        c.tag = OperatorTag { kind: OperatorKind::Cz, z: Some(z) };
        return Ok(c);
    }
    let kappa = coupling.kappa(z)?;
    check_grid(grid)?;
    let w = SingularWeights::for_grid(grid);
    let n = grid.len();
    let m = coupling.mass;
    let f = -I / (2.0 * PI);
    let tau: Vec<c64> = grid.tangents.iter().map(|t| t.to_complex()).collect();
    let x: Vec<c64> = grid.nodes.iter().map(|p| p.to_complex()).collect();
    let wt = &grid.weights;
    let inv2pi = 1.0 / (2.0 * PI);
    let matrix = par_rows(2 * n, 2 * n, |row, out| {
        let i = row / 2;
        let first = row % 2 == 0;
        for j in 0..n {
            if i == j {
                let s = s_diagonal(kappa, wt[i], w.log[(i, i)]) * inv2pi;
                if first {
                    out[2 * j] = c64::new((m + z) * s, 0.0);
                    out[2 * j + 1] = f * w.cauchy[(i, j)] * tau[j].conj();
                } else {
                    out[2 * j] = f * w.cauchy[(i, j)].conj() * tau[j];
                    out[2 * j + 1] = c64::new((z - m) * s, 0.0);
                }
                continue;
            }
            let t = pair_terms(x[i] - x[j], kappa, wt[j], w.log[(i, j)]);
            let s = t.s * inv2pi;
            if first {
                out[2 * j] = c64::new((m + z) * s, 0.0);
                out[2 * j + 1] = f * w.cauchy[(i, j)] * tau[j].conj() + t.d12;
            } else {
                out[2 * j] = f * w.cauchy[(i, j)].conj() * tau[j] + t.d21;
                out[2 * j + 1] = c64::new((z - m) * s, 0.0);
            }
        }
    });
    Ok(SpinorOperator::derived(matrix, grid.weights.clone(), OperatorKind::Cz, Some(z)))
}

/// S_z g(x) = (1/2π) ∫ K₀(κ|x−y|) g(y) ds(y).
#[allow(non_snake_case)]
pub fn assemble_Sz(grid: &QuadratureGrid, z: f64, coupling: &Coupling) -> Result<ScalarOperator> {
    let kappa = coupling.kappa(z)?;
    check_grid(grid)?;
    let w = SingularWeights::for_grid(grid);
    let n = grid.len();
    let x: Vec<c64> = grid.nodes.iter().map(|p| p.to_complex()).collect();
    let wt = &grid.weights;
    let matrix = par_rows(n, n, |i, out| {
        for j in 0..n {
            let s = if i == j {
                s_diagonal(kappa, wt[i], w.log[(i, i)])
            } else {
                let r = (x[i] - x[j]).norm();
                let k0 = k0k1(kappa * r).0;
                k0 * wt[j] - bessel_i0(kappa * r) * (w.log[(i, j)] - wt[j] * r.ln())
            };
            out[j] = c64::new(s / (2.0 * PI), 0.0);
        }
    });
    Ok(ScalarOperator { matrix, weights: grid.weights.clone(), tag: OperatorTag { kind: OperatorKind::Sz, z: Some(z) } })
}

fn scale_rows(c: &CMat, first: f64, second: f64) -> CMat {
    Mat::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)] * if i % 2 == 0 { first } else { second })
}

/// Θ_z = I + (εσ₀ + μσ₃)𝒞_z.
pub fn assemble_theta(grid: &QuadratureGrid, z: f64, coupling: &Coupling) -> Result<SpinorOperator> {
    let c = assemble_Cz(grid, z, coupling)?;
    Ok(theta_from_cz(&c, coupling))
}

/// Θ_z from an already assembled 𝒞_z.
pub fn theta_from_cz(cz: &SpinorOperator, coupling: &Coupling) -> SpinorOperator {
    let (e, u) = (coupling.epsilon, coupling.mu);
    let mut m = scale_rows(&cz.matrix, e + u, e - u);
    for k in 0..m.nrows() {
        m[(k, k)] += c64::new(1.0, 0.0);
    }
    SpinorOperator::derived(m, cz.weights.clone(), OperatorKind::Theta, cz.tag.z)
}

/// Λ_z = (εσ₀ − μσ₃)/(ε² − μ²) + 𝒞_z.
pub fn assemble_lambda(grid: &QuadratureGrid, z: f64, coupling: &Coupling) -> Result<SpinorOperator> {
    if coupling.is_critical() {
        return Err(Error::CriticalCoupling(coupling.epsilon.abs()));
    }
    let c = assemble_Cz(grid, z, coupling)?;
    lambda_from_cz(&c, coupling)
}

/// Λ_z from an already assembled 𝒞_z.
pub fn lambda_from_cz(cz: &SpinorOperator, coupling: &Coupling) -> Result<SpinorOperator> {
    if coupling.is_critical() {
        return Err(Error::CriticalCoupling(coupling.epsilon.abs()));
    }
    let (e, u) = (coupling.epsilon, coupling.mu);
    let d = coupling.delta();
    let mut m = cz.matrix.clone();
    for k in 0..m.nrows() {
        let shift = if k % 2 == 0 { (e - u) / d } else { (e + u) / d };
        m[(k, k)] += c64::new(shift, 0.0);
    }
    Ok(SpinorOperator::derived(m, cz.weights.clone(), OperatorKind::Lambda, cz.tag.z))
}

/// Γ = [[−μ, (ε²−μ²) C_Σ t*], [(ε²−μ²) t C_Σ*, μ]].
pub fn assemble_gamma(grid: &QuadratureGrid, coupling: &Coupling) -> Result<SpinorOperator> {
    let cm = assemble_Cm(grid)?;
    let d = coupling.delta();
    let mut m = Mat::from_fn(cm.matrix.nrows(), cm.matrix.ncols(), |i, j| cm.matrix[(i, j)] * d);
    for k in 0..m.nrows() {
        m[(k, k)] += c64::new(if k % 2 == 0 { -coupling.mu } else { coupling.mu }, 0.0);
    }
    Ok(SpinorOperator::derived(m, grid.weights.clone(), OperatorKind::Gamma, Some(coupling.mass)))
}

/// Multiplication by σ·ν (block diagonal).
pub fn sigma_nu(grid: &QuadratureGrid) -> SpinorOperator {
    let n = grid.len();
    let mut m = linalg::zeros(2 * n, 2 * n);
    for (i, nu) in grid.normals.iter().enumerate() {
        m[(2 * i, 2 * i + 1)] = c64::new(nu.x, -nu.y);
        m[(2 * i + 1, 2 * i)] = c64::new(nu.x, nu.y);
    }
    SpinorOperator::derived(m, grid.weights.clone(), OperatorKind::Derived, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, discretize, CurveSpec};
    use crate::special::{bessel_i0, k0k1};

    fn circle(n: usize) -> QuadratureGrid {
        discretize(&build_curve(&CurveSpec::circle(1.0)).unwrap(), n, 3.0).unwrap()
    }

    fn mode(grid: &QuadratureGrid, k: i32) -> Vec<c64> {
        grid.nodes.iter().map(|p| c64::from_polar(1.0, k as f64 * p.y.atan2(p.x))).collect()
    }

    #[test]
    fn cauchy_on_circle_modes() {
        let g = circle(256);
        let c = assemble_cauchy(&g).unwrap();
        for (k, lam) in [(0, 0.5), (1, 0.5), (-1, -0.5)] {
            let v = mode(&g, k);
            let cv = c.apply(&v);
            for i in 0..g.len() {
                assert!((cv[i] - v[i] * lam).norm() < 1e-8, "mode {k}");
            }
        }
    }

    #[test]
    fn grid_too_coarse() {
        let g = circle(8);
        assert!(matches!(assemble_cauchy(&g), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn cm_structure_and_symmetry() {
        let g = circle(256);
        let cm = assemble_Cm(&g).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let b = cm.block(i, j);
                assert_eq!(b.get(0, 0), c64::new(0.0, 0.0));
                assert_eq!(b.get(1, 1), c64::new(0.0, 0.0));
            }
        }
        let diff = cm.matrix.clone() - cm.matrix.adjoint().to_owned();
        assert!(linalg::op_norm(&diff).unwrap() <= 1e-8);
        // Upper-right block on g ≡ 1 is C_Σ applied to t̄ = e^{−iφ}·(−i)… i.e. the mode −1 times conj(i).
        let mut ones = vec![c64::new(0.0, 0.0); 2 * g.len()];
        for i in 0..g.len() {
            ones[2 * i + 1] = c64::new(1.0, 0.0);
        }
        let out = cm.apply(&ones);
        for (i, p) in g.nodes.iter().enumerate() {
            // t̄(φ) = −i e^{−iφ}; C_Σ e^{−iφ} = −e^{−iφ}/2
            let tbar = c64::new(0.0, -1.0) * c64::from_polar(1.0, -p.y.atan2(p.x));
            assert!((out[2 * i] - tbar * (-0.5)).norm() < 1e-8);
        }
    }

    #[test]
    fn sz_matches_fourier_symbol_on_circle() {
        // S_z e^{inφ} = I_n(κ)K_n(κ) e^{inφ} on the unit circle; check n = 0 with I0 K0.
        let g = circle(128);
        let cpl = Coupling::unit_mass(0.0, 0.0);
        let z = 0.3;
        let s = assemble_Sz(&g, z, &cpl).unwrap();
        let kappa = cpl.kappa(z).unwrap();
        let want = bessel_i0(kappa) * k0k1(kappa).0;
        let v = mode(&g, 0);
        let sv = s.apply(&v);
        for i in 0..g.len() {
            assert!((sv[i] - v[i] * want).norm() < 1e-13);
        }
        let asym = linalg::max_abs(&(s.matrix.clone() - s.matrix.transpose().to_owned()));
        assert!(asym <= 1e-12);
    }

    #[test]
    fn cz_blocks_relate_to_sz() {
        let g = circle(64);
        let cpl = Coupling::unit_mass(0.0, 0.0);
        let z = 0.3;
        let cz = assemble_Cz(&g, z, &cpl).unwrap();
        let s = assemble_Sz(&g, z, &cpl).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let want = s.matrix[(i, j)] * (z + 1.0);
                assert!((cz.matrix[(2 * i, 2 * j)] - want).norm() <= 1e-12);
            }
        }
        assert!(cz.hermiticity_residual() <= 1e-10);
    }

    #[test]
    fn theta_and_lambda_definitions() {
        let g = circle(32);
        let z = 0.4;
        let zero = Coupling::unit_mass(0.0, 0.0);
        let th = assemble_theta(&g, z, &zero).unwrap();
        assert_eq!(linalg::max_abs(&(th.matrix.clone() - linalg::identity(64))), 0.0);

        let c = Coupling::unit_mass(3.0, 1.0);
        let cz = assemble_Cz(&g, z, &c).unwrap();
        let th = theta_from_cz(&cz, &c);
        let la = lambda_from_cz(&cz, &c).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let scale = if i % 2 == 0 { 4.0 } else { 2.0 };
                assert!((la.matrix[(i, j)] * scale - th.matrix[(i, j)]).norm() <= 1e-13);
                let id = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
                assert_eq!(th.matrix[(i, j)], cz.matrix[(i, j)] * scale + id);
            }
        }

        let two = Coupling::unit_mass(2.0, 0.0);
        let la = assemble_lambda(&g, z, &two).unwrap();
        let cz = assemble_Cz(&g, z, &two).unwrap();
        for k in 0..64 {
            assert!((la.matrix[(k, k)] - cz.matrix[(k, k)] - 0.5).norm() <= 1e-15);
        }
        assert!(matches!(assemble_lambda(&g, z, &Coupling::unit_mass(1.0, -1.0)), Err(Error::CriticalCoupling(_))));
    }

    #[test]
    fn theta_at_equal_couplings_touches_first_rows_only() {
        let g = circle(32);
        let c = Coupling::unit_mass(0.7, 0.7);
        let cz = assemble_Cz(&g, 0.1, &c).unwrap();
        let th = theta_from_cz(&cz, &c);
        for i in 0..64 {
            for j in 0..64 {
                let id = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
                let want = if i % 2 == 0 { id + cz.matrix[(i, j)] * (2.0 * 0.7) } else { id };
                assert_eq!(th.matrix[(i, j)], want);
            }
        }
    }

    #[test]
    fn gamma_relation() {
        let g = circle(32);
        let c = Coupling::unit_mass(1.0, 2.0);
        let gam = assemble_gamma(&g, &c).unwrap();
        let lam = assemble_lambda(&g, c.mass, &c).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let lhs = lam.matrix[(i, j)] * c.delta();
                let rhs = gam.matrix[(i, j)] + if i == j { c64::new(c.epsilon, 0.0) } else { c64::new(0.0, 0.0) };
                assert!((lhs - rhs).norm() <= 1e-13);
            }
        }
        let g0 = assemble_gamma(&g, &Coupling::unit_mass(1.0, 0.0)).unwrap();
        for i in 0..32 {
            assert_eq!(g0.block(i, i).get(0, 0), c64::new(0.0, 0.0));
            assert_eq!(g0.block(i, i).get(1, 1), c64::new(0.0, 0.0));
        }
    }

    #[test]
    fn spectral_parameter_checked() {
        let g = circle(32);
        let c = Coupling::unit_mass(1.0, 0.0);
        assert!(matches!(assemble_Cz(&g, 1.5, &c), Err(Error::SpectralParameter { .. })));
        assert!(matches!(assemble_Sz(&g, -1.0, &c), Err(Error::SpectralParameter { .. })));
        assert!(assemble_Cz(&g, 1.0, &c).is_ok());
    }

    fn bessel_in(n: usize, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = 0.0;
        for k in 0..60 {
            sum += term;
            term *= 0.25 * x * x / ((k + 1) as f64 * (k + 1 + n) as f64);
        }
        sum
    }

    fn bessel_kn(n: usize, x: f64) -> f64 {
        let (mut a, mut b) = k0k1(x);
        for k in 1..n.max(1) {
            let c = a + 2.0 * k as f64 / x * b;
            a = b;
            b = c;
        }
        if n == 0 {
            a
        } else {
            b
        }
    }

    #[test]
    fn sz_fourier_modes_and_hilbert_schmidt_norm() {
        let cpl = Coupling::unit_mass(0.0, 0.0);
        let z = 0.3;
        let kappa = cpl.kappa(z).unwrap();
        let g = circle(256);
        let s = assemble_Sz(&g, z, &cpl).unwrap();
        for n in 0..12 {
            let v = mode(&g, n as i32);
            let sv = s.apply(&v);
            let want = bessel_in(n, kappa) * bessel_kn(n, kappa);
            for i in (0..g.len()).step_by(17) {
                assert!((sv[i] - v[i] * want).norm() < 1e-12, "mode {n}");
            }
        }
        let hs = |n: usize| {
            let m = assemble_Sz(&circle(n), z, &cpl).unwrap().symmetrized();
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += m[(i, j)].norm_sqr();
                }
            }
            acc.sqrt()
        };
        // The symbol I_n K_n ~ 1/(2n) is square-summable; the HS norm grows by the
        // modes 64 ≤ |n| < 128 added when N doubles.
        let (a, b) = (hs(128), hs(256));
        let tail: f64 = (64..128).map(|n| 2.0 / (4.0 * (n as f64 * n as f64 + kappa * kappa))).sum();
        assert!(((b * b - a * a) / tail - 1.0).abs() < 0.05, "{a} {b} {tail}");
    }

    #[test]
    fn equal_coupling_factorization() {
        let g = circle(64);
        let c = Coupling::unit_mass(0.8, 0.8);
        let z = 0.25;
        let th = assemble_theta(&g, z, &c).unwrap();
        let s = assemble_Sz(&g, z, &c).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let id = if i == j { 1.0 } else { 0.0 };
                let lam = s.matrix[(i, j)] * (z + 1.0) + id / (2.0 * 0.8);
                assert!((th.matrix[(2 * i, 2 * j)] - lam * (2.0 * 0.8)).norm() <= 1e-12);
                assert_eq!(th.matrix[(2 * i + 1, 2 * j)], c64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn hermitian_near_gap_edge_and_on_ellipse() {
        let cpl = Coupling::unit_mass(1.0, 0.5);
        assert!(assemble_Cz(&circle(128), 0.999, &cpl).unwrap().hermiticity_residual() <= 1e-8);
        let e = discretize(&build_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap(), 128, 3.0).unwrap();
        assert!(assemble_lambda(&e, 0.5, &cpl).unwrap().hermiticity_residual() <= 1e-10);
        let sq = discretize(&build_curve(&CurveSpec::square(1.0)).unwrap(), 32, 3.0).unwrap();
        assert!(assemble_Cz(&sq, 0.5, &cpl).unwrap().matrix.as_ref().is_all_finite());
    }

    #[test]
    fn difference_operator_is_compact_proxy() {
        let cpl = Coupling::unit_mass(0.0, 0.0);
        let top = |n: usize| {
            let g = circle(n);
            let d = assemble_Cz(&g, 0.5, &cpl).unwrap().symmetrized() - assemble_Cm(&g).unwrap().symmetrized();
            linalg::op_norm(&d).unwrap()
        };
        let (a, b) = (top(128), top(256));
        assert!(((a - b) / b).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn cauchy_adjoint_difference_decays_on_ellipse() {
        let g = discretize(&build_curve(&CurveSpec::ellipse(1.5, 1.0)).unwrap(), 128, 3.0).unwrap();
        let c = assemble_cauchy(&g).unwrap().symmetrized();
        let sv = linalg::singular_values(&(c.clone() - c.adjoint().to_owned())).unwrap();
        assert!(sv[g.len() / 4] <= 1e-3 * sv[0], "{} {}", sv[g.len() / 4], sv[0]);
    }

    #[test]
    fn resolvent_cancellation() {
        let g = circle(64);
        let c = Coupling::unit_mass(3.0, 1.0);
        let cz = assemble_Cz(&g, 0.3, &c).unwrap();
        let la = lambda_from_cz(&cz, &c).unwrap();
        let inv = linalg::inverse(&la.matrix);
        let prod = &cz.matrix * &inv;
        let n = prod.nrows();
        let lhs = Mat::from_fn(n, n, |i, j| {
            let id = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
            let s = if i % 2 == 0 { 4.0 } else { 2.0 };
            (id - prod[(i, j)]) * s - inv[(i, j)]
        });
        let cond = linalg::condition_number(&la.matrix).unwrap();
        assert!(linalg::max_abs(&lhs) <= 1e-9 * cond);
    }
}

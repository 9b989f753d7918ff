//! Discrete eigenvalues of B in the gap (−m, m).
//!
//! z is an eigenvalue exactly when Θ_z has a kernel, and f = Φ_z g for g in
//! that kernel. Off the critical line Θ_z = (εσ₀ + μσ₃)Λ_z with Λ_z Hermitian
//! for real z, so roots show up as sign changes of single eigenvalue branches
//! of Λ_z. For ε = ±μ ≠ 0 the scalar operator λ_z = 1/(2ε) + (z ± m)S_z on
//! the range of P_± takes that role.

mod verify;

use std::collections::HashMap;

use num_complex::Complex64 as c64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary_ops::{
    assemble_Cz, assemble_Sz, distance_to_curve, evaluate_potential, lambda_from_cz, theta_from_cz,
};
use crate::error::{Error, Result};
use crate::geometry::{QuadratureGrid, Vec2};
use crate::kernels::{Coupling, SpinorMatrix};
use crate::linalg::{self, CMat};

pub use verify::{
    cauchy_square_defect, cc2_residual, jump_residuals, random_smooth_density, resolvent_residual, verify_identities,
    IdentityCheck, VerificationReport, VerificationTolerances,
};

pub const DEFAULT_SAMPLES: usize = 128;
pub const MIN_SAMPLES: usize = 16;
/// Default root tolerance in z.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Target size of the branch eigenvalue at a refined root.
pub const ROOT_VALUE_TOL: f64 = 1e-10;
/// Inter-sample jumps must stay below this fraction of the local eigenvalue spacing.
pub const MATCH_FRACTION: f64 = 0.25;
/// Second-smallest |eigenvalue| below this at a root raises the IllConditioned flag.
pub const ILL_CONDITIONED: f64 = 1e-6;
/// PDE residual above this marks a root as spurious.
pub const PDE_TOL: f64 = 1e-3;
pub const FREE_NOTE: &str = "B = A, spec A = (−∞,−|m|]∪[|m|,∞)";

const MAX_BRENT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// ε = μ = 0: Θ_z = I, nothing to compute.
    Free,
    /// |ε| ≠ |μ|: Hermitian Λ_z.
    Lambda,
    /// ε = ±μ ≠ 0: Hermitian scalar λ_z.
    Scalar,
    /// ε = ±μ ≠ 0 through the eigenvalues of the full Θ_z. Cross-check only.
    FullTheta,
}

impl Route {
    pub fn for_coupling(c: &Coupling) -> Route {
        if c.epsilon == 0.0 && c.mu == 0.0 {
            Route::Free
        } else if c.is_critical() {
            Route::Scalar
        } else {
            Route::Lambda
        }
    }
}

/// (−0.99m, 0.99m).
pub fn default_window(c: &Coupling) -> (f64, f64) {
    (-0.99 * c.mass, 0.99 * c.mass)
}

/// Sorted spectra of the route operator along a z grid.
#[derive(Debug, Clone, Serialize)]
pub struct BranchData {
    pub route: Route,
    pub z: Vec<f64>,
    /// `eigenvalues[k]` is the ascending spectrum at `z[k]`; branch b is column b.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Largest inter-sample jump of a branch divided by its local spacing.
    pub max_jump_ratio: f64,
    /// Largest inter-sample jump of a branch.
    pub max_jump: f64,
    /// Largest max-entry deviation from Hermitian symmetry (Λ_z, λ_z) or
    /// largest |Im| of an eigenvalue (full Θ_z) over the samples.
    pub symmetry_residual: f64,
    pub notes: Vec<String>,
}

impl BranchData {
    fn free() -> Self {
        BranchData {
            route: Route::Free,
            z: Vec::new(),
            eigenvalues: Vec::new(),
            max_jump_ratio: 0.0,
            max_jump: 0.0,
            symmetry_residual: 0.0,
            notes: vec![FREE_NOTE.to_string()],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn branch_count(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    pub fn trajectory(&self, b: usize) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e[b]).collect()
    }

    /// (branch, k) for each branch whose sign differs between z[k] and z[k+1].
    pub fn sign_changes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.z.len().saturating_sub(1) {
            let (a, b) = (&self.eigenvalues[k], &self.eigenvalues[k + 1]);
            for br in 0..a.len() {
                if (a[br] < 0.0) != (b[br] < 0.0) {
                    out.push((br, k));
                }
            }
        }
        out
    }

    /// Long-format CSV `branch,z,value`, one row per branch and sample.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "branch,z,value")?;
        for b in 0..self.branch_count() {
            for (k, z) in self.z.iter().enumerate() {
                writeln!(out, "{b},{z:.16e},{:.16e}", self.eigenvalues[k][b])?;
            }
        }
        Ok(())
    }
}

/// Distance from e[i] to the nearest eigenvalue that is not degenerate with it.
fn local_spacing(e: &[f64], i: usize) -> f64 {
    let tol = 1e-9 * (1.0 + e[i].abs());
    let below = e[..i].iter().rev().map(|&v| e[i] - v).find(|&d| d > tol);
    let above = e[i + 1..].iter().map(|&v| v - e[i]).find(|&d| d > tol);
    below.unwrap_or(f64::INFINITY).min(above.unwrap_or(f64::INFINITY))
}

// In one dimension the order-preserving assignment is the minimal-cost
// nearest-neighbour matching, so branch b is the b-th sorted eigenvalue.
fn jump_ratio(prev: &[f64], next: &[f64]) -> f64 {
    (0..prev.len()).map(|i| (next[i] - prev[i]).abs() / local_spacing(prev, i)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub smallest: f64,
    pub second_smallest: f64,
    /// Second-smallest |eigenvalue| below 1e−6: possible multiplicity.
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Eigenpair {
    pub z0: f64,
    pub branch: usize,
    pub cluster: usize,
    /// Branch eigenvalue at z0.
    pub branch_value: f64,
    /// Kernel density, interleaved, unit norm in L²(Σ, ds; ℂ²).
    #[serde(skip)]
    pub density: Vec<c64>,
    /// ‖Θ_{z0} g‖ in L²(ds).
    pub residual: f64,
    pub condition: Condition,
    /// Relative finite-difference residual of (D − z0)Φ_{z0}g, if checked.
    pub pde_residual: Option<f64>,
    pub spurious: bool,
    #[serde(skip)]
    pub coupling: Coupling,
}

#[derive(Debug, Clone)]
pub struct RootOptions {
    pub z_range: (f64, f64),
    pub samples: usize,
    pub tol: f64,
    /// Force a route; `None` picks it from the coupling.
    pub route: Option<Route>,
    /// Run the PDE-residual check on every root.
    pub check_pde: bool,
}

impl RootOptions {
    pub fn new(coupling: &Coupling) -> Self {
        RootOptions { z_range: default_window(coupling), samples: DEFAULT_SAMPLES, tol: DEFAULT_TOL, route: None, check_pde: true }
    }
}

#[derive(Debug, Clone)]
pub struct RootReport {
    pub sweep: BranchData,
    pub pairs: Vec<Eigenpair>,
}

struct Spectrum {
    values: Vec<f64>,
    symmetry: f64,
}

/// The route operator as a function of z.
struct Pencil<'a> {
    grid: &'a QuadratureGrid,
    coupling: &'a Coupling,
    route: Route,
}

impl Pencil<'_> {
    fn new<'a>(grid: &'a QuadratureGrid, coupling: &'a Coupling, route: Route) -> Result<Pencil<'a>> {
        let natural = Route::for_coupling(coupling);
        let ok = match route {
            Route::FullTheta => natural == Route::Scalar,
            r => r == natural,
        };
        if !ok {
            return Err(Error::Domain(format!("route {route:?} does not apply to (ε, μ) = ({}, {})", coupling.epsilon, coupling.mu)));
        }
        Ok(Pencil { grid, coupling, route })
    }

    /// Hermitian matrix in the L²(ds)-orthonormal basis, with its raw asymmetry.
    fn hermitian(&self, z: f64) -> Result<(CMat, f64)> {
        let s = match self.route {
            Route::Lambda => {
                let cz = assemble_Cz(self.grid, z, self.coupling)?;
                lambda_from_cz(&cz, self.coupling)?.symmetrized()
            }
            Route::Scalar => {
                let sz = assemble_Sz(self.grid, z, self.coupling)?;
                let shift = z + self.coupling.mass * self.coupling.mu.signum() * self.coupling.epsilon.signum();
                let mut m = sz.symmetrized();
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        m[(i, j)] *= shift;
                    }
                    m[(i, i)] += c64::new(0.5 / self.coupling.epsilon, 0.0);
                }
                m
            }
            _ => unreachable!("no Hermitian matrix for this route"),
        };
        let asym = linalg::hermiticity_residual(&s);
        Ok((linalg::hermitian_part(&s), asym))
    }

    fn theta(&self, z: f64) -> Result<CMat> {
        let cz = assemble_Cz(self.grid, z, self.coupling)?;
        Ok(theta_from_cz(&cz, self.coupling).symmetrized())
    }

    fn spectrum(&self, z: f64) -> Result<Spectrum> {
        match self.route {
            Route::FullTheta => {
                let ev = linalg::general_eigenvalues(&self.theta(z)?)?;
                let symmetry = ev.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
                let mut values: Vec<f64> = ev.iter().map(|v| v.re).collect();
                values.sort_by(f64::total_cmp);
                Ok(Spectrum { values, symmetry })
            }
            _ => {
                let (h, symmetry) = self.hermitian(z)?;
                Ok(Spectrum { values: linalg::hermitian_eigenvalues(&h)?, symmetry })
            }
        }
    }

    /// Unit densities spanning the `k` directions closest to the kernel at z.
    fn kernel_densities(&self, z: f64, k: usize) -> Result<Vec<Vec<c64>>> {
        let w = &self.grid.weights;
        let vectors: Vec<Vec<c64>> = match self.route {
            Route::FullTheta => {
                let (_, v) = linalg::smallest_singular_vectors(&self.theta(z)?, k)?;
                (0..v.ncols()).map(|c| (0..v.nrows()).map(|r| v[(r, c)]).collect()).collect()
            }
            _ => {
                let (h, _) = self.hermitian(z)?;
                let (vals, v) = linalg::hermitian_eigen(&h)?;
                let mut order: Vec<usize> = (0..vals.len()).collect();
                order.sort_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()));
                order.truncate(k);
                order.iter().map(|&c| (0..v.nrows()).map(|r| v[(r, c)]).collect()).collect()
            }
        };
        // back from the orthonormal basis: g = W^{−1/2} v
        Ok(vectors
            .into_iter()
            .map(|v| match self.route {
                Route::Scalar => {
                    let slot = if self.coupling.epsilon == self.coupling.mu { 0 } else { 1 };
                    let mut g = vec![c64::new(0.0, 0.0); 2 * w.len()];
                    for (i, x) in v.iter().enumerate() {
                        g[2 * i + slot] = x / w[i].sqrt();
                    }
                    g
                }
                _ => v.iter().enumerate().map(|(r, x)| x / w[r / 2].sqrt()).collect(),
            })
            .collect())
    }
}

fn check_window(coupling: &Coupling, (a, b): (f64, f64)) -> Result<()> {
    for z in [a, b] {
        coupling.kappa(z)?;
    }
    if !(a < b) {
        return Err(Error::Domain(format!("empty z window ({a}, {b})")));
    }
    Ok(())
}

fn sweep(pencil: &Pencil, z_range: (f64, f64), samples: usize) -> Result<BranchData> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("at least {MIN_SAMPLES} sweep samples required, got {samples}")));
    }
    check_window(pencil.coupling, z_range)?;
    let (a, b) = z_range;
    let z: Vec<f64> = (0..samples).map(|k| a + (b - a) * k as f64 / (samples - 1) as f64).collect();
    let spectra = z.par_iter().map(|&x| pencil.spectrum(x)).collect::<Result<Vec<_>>>()?;
    let symmetry_residual = spectra.iter().map(|s| s.symmetry).fold(0.0, f64::max);
    let eigenvalues: Vec<Vec<f64>> = spectra.into_iter().map(|s| s.values).collect();
    let max_jump_ratio = eigenvalues.windows(2).map(|w| jump_ratio(&w[0], &w[1])).fold(0.0, f64::max);
    let max_jump = eigenvalues
        .windows(2)
        .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (b - a).abs()))
        .fold(0.0, f64::max);
    let mut notes = Vec::new();
    if max_jump_ratio >= MATCH_FRACTION {
        notes.push(format!("branches cross or cluster: jump/spacing reaches {max_jump_ratio:.3e}"));
    }
    if pencil.route == Route::Lambda && (pencil.coupling.delta() - 4.0).abs() < 1e-12 {
        notes.push("ε² − μ² = 4: Λ_z is not Fredholm, roots accumulate and are unreliable".into());
    }
    Ok(BranchData { route: pencil.route, z, eigenvalues, max_jump_ratio, max_jump, symmetry_residual, notes })
}

/// Sorted eigenvalues of Λ_z (|ε| ≠ |μ|) or λ_z (ε = ±μ ≠ 0) at `samples`
/// equispaced points of `z_range`. Empty for ε = μ = 0.
pub fn gap_sweep(grid: &QuadratureGrid, coupling: &Coupling, z_range: (f64, f64), samples: usize) -> Result<BranchData> {
    let route = Route::for_coupling(coupling);
    if route == Route::Free {
        return Ok(BranchData::free());
    }
    sweep(&Pencil::new(grid, coupling, route)?, z_range, samples)
}

/// Eigenvalues in `z_range` with default sampling and the PDE check.
pub fn find_eigenvalues(grid: &QuadratureGrid, coupling: &Coupling, z_range: (f64, f64), tol: f64) -> Result<Vec<Eigenpair>> {
    let opts = RootOptions { z_range, tol, ..RootOptions::new(coupling) };
    Ok(find_eigenvalues_with(grid, coupling, &opts)?.pairs)
}

/// Sweep, detect branch sign changes, refine, and attach kernel densities.
pub fn find_eigenvalues_with(grid: &QuadratureGrid, coupling: &Coupling, opts: &RootOptions) -> Result<RootReport> {
    if !(opts.tol >= 1e-12) {
        return Err(Error::Domain(format!("root tolerance must be at least 1e-12, got {}", opts.tol)));
    }
    let route = opts.route.unwrap_or_else(|| Route::for_coupling(coupling));
    if route == Route::Free {
        return Ok(RootReport { sweep: BranchData::free(), pairs: Vec::new() });
    }
    let pencil = Pencil::new(grid, coupling, route)?;
    let data = sweep(&pencil, opts.z_range, opts.samples)?;

    let mut cache: HashMap<u64, Vec<f64>> = HashMap::new();
    for (k, z) in data.z.iter().enumerate() {
        cache.insert(z.to_bits(), data.eigenvalues[k].clone());
    }
    let mut eval = |z: f64, b: usize| -> Result<f64> {
        if let Some(v) = cache.get(&z.to_bits()) {
            return Ok(v[b]);
        }
        let v = pencil.spectrum(z)?.values;
        let out = v[b];
        cache.insert(z.to_bits(), v);
        Ok(out)
    };

    let mut roots: Vec<(f64, usize, f64)> = Vec::new();
    for (b, k) in data.sign_changes() {
        let (za, zb) = (data.z[k], data.z[k + 1]);
        let (z0, v) = brent(|z| eval(z, b), za, data.eigenvalues[k][b], zb, data.eigenvalues[k + 1][b], opts.tol)?;
        if v.abs() > ROOT_VALUE_TOL {
            log::warn!("branch {b} near z = {z0}: |eigenvalue| = {:e} at tolerance {}", v.abs(), opts.tol);
        }
        if !roots.iter().any(|&(z, br, _)| br == b && (z - z0).abs() < 10.0 * opts.tol) {
            roots.push((z0, b, v));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // chains of roots closer than 10·tol share a cluster
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..roots.len() {
        match clusters.last_mut() {
            Some(c) if roots[i].0 - roots[*c.last().unwrap()].0 < 10.0 * opts.tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut pairs = Vec::with_capacity(roots.len());
    for (id, members) in clusters.iter().enumerate() {
        let zc = members.iter().map(|&i| roots[i].0).sum::<f64>() / members.len() as f64;
        let densities = pencil.kernel_densities(zc, members.len())?;
        let mut mags: Vec<f64> = pencil.spectrum(zc)?.values.iter().map(|v| v.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let condition = Condition {
            smallest: mags[0],
            second_smallest: mags.get(1).copied().unwrap_or(f64::INFINITY),
            ill_conditioned: mags.get(1).is_some_and(|&s| s < ILL_CONDITIONED),
        };
        if condition.ill_conditioned {
            log::warn!("IllConditioned: second-smallest eigenvalue {:e} at z = {zc} (possible multiplicity)", condition.second_smallest);
        }
        for (&i, g) in members.iter().zip(densities) {
            let (z0, branch, branch_value) = roots[i];
            let residual = theta_residual(grid, coupling, z0, &g)?;
            let mut pair = Eigenpair {
                z0,
                branch,
                cluster: id,
                branch_value,
                density: g,
                residual,
                condition,
                pde_residual: None,
                spurious: false,
                coupling: *coupling,
            };
            if opts.check_pde {
                let r = pde_residual(grid, &pair, 20, 0.2, 1e-4, 0x5eed)?;
                pair.pde_residual = Some(r);
                pair.spurious = !(r <= PDE_TOL);
            }
            pairs.push(pair);
        }
    }
    Ok(RootReport { sweep: data, pairs })
}

/// ‖Θ_z g‖ in L²(ds).
pub fn theta_residual(grid: &QuadratureGrid, coupling: &Coupling, z: f64, g: &[c64]) -> Result<f64> {
    let th = theta_from_cz(&assemble_Cz(grid, z, coupling)?, coupling);
    Ok(l2_norm(grid, &th.apply(g)))
}

/// L²(Σ, ds; ℂ²) norm of an interleaved density.
pub fn l2_norm(grid: &QuadratureGrid, g: &[c64]) -> f64 {
    g.iter().enumerate().map(|(k, v)| grid.weights[k / 2] * v.norm_sqr()).sum::<f64>().sqrt()
}

/// Brent's method on a bracketing pair; stops when the bracket is below `xtol`.
fn brent(mut f: impl FnMut(f64) -> Result<f64>, a: f64, fa: f64, b: f64, fb: f64, xtol: f64) -> Result<(f64, f64)> {
    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_BRENT {
        if (fb < 0.0) == (fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok((b, fb));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)), (q - 1.0) * (r - 1.0) * (s - 1.0))
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::Convergence(format!("root refinement did not converge near z = {b}")))
}

/// f = Φ_{z0} g at points off Σ.
pub fn eigenfunction(grid: &QuadratureGrid, pair: &Eigenpair, points: &[Vec2]) -> Result<Vec<[c64; 2]>> {
    Ok(evaluate_potential(grid, &pair.density, pair.z0, &pair.coupling, points)?.into_iter().map(|v| v.value).collect())
}

/// `count` seeded random points at distance at least `min_dist` from Σ, in
/// the bounding box of the curve enlarged by 1.
pub fn sample_points_off_curve(grid: &QuadratureGrid, count: usize, min_dist: f64, seed: u64) -> Vec<Vec2> {
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &grid.nodes {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Vec2::new(rng.gen_range(lo.x - 1.0..hi.x + 1.0), rng.gen_range(lo.y - 1.0..hi.y + 1.0));
        if distance_to_curve(grid, p) >= min_dist {
            out.push(p);
        }
    }
    out
}

/// Max over random points of |(D − z0)f| / (|σ·∇f| + (m + |z0|)|f|), with D
/// = −iσ·∇ + mσ₃ and centred differences of step `h`.
pub fn pde_residual(grid: &QuadratureGrid, pair: &Eigenpair, count: usize, min_dist: f64, h: f64, seed: u64) -> Result<f64> {
    let points = sample_points_off_curve(grid, count, min_dist, seed);
    let mut stencil = Vec::with_capacity(5 * points.len());
    for &p in &points {
        stencil.extend([p, p + Vec2::new(h, 0.0), p - Vec2::new(h, 0.0), p + Vec2::new(0.0, h), p - Vec2::new(0.0, h)]);
    }
    let f = eigenfunction(grid, pair, &stencil)?;
    let (m, z) = (pair.coupling.mass, pair.z0);
    let sigma1 = SpinorMatrix::sigma(1);
    let sigma2 = SpinorMatrix::sigma(2);
    let sigma3 = SpinorMatrix::sigma(3);
    let norm = |v: [c64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let mut worst: f64 = 0.0;
    for s in f.chunks(5) {
        let d1 = [(s[1][0] - s[2][0]) / (2.0 * h), (s[1][1] - s[2][1]) / (2.0 * h)];
        let d2 = [(s[3][0] - s[4][0]) / (2.0 * h), (s[3][1] - s[4][1]) / (2.0 * h)];
        let a = sigma1.apply(d1);
        let b = sigma2.apply(d2);
        let grad = [a[0] + b[0], a[1] + b[1]];
        let mass = sigma3.apply(s[0]);
        let i = c64::new(0.0, 1.0);
        let res = [-i * grad[0] + mass[0] * m - s[0][0] * z, -i * grad[1] + mass[1] * m - s[0][1] * z];
        let scale = norm(grad) + (m + z.abs()) * norm(s[0]);
        if scale > 0.0 {
            worst = worst.max(norm(res) / scale);
        }
    }
    Ok(worst)
}

/// Relative residual of the transmission condition
/// (εσ₀ + μσ₃)(f₊ + f₋)/2 + i(σ·ν)(f₊ − f₋) = 0 at the given nodes, with
/// one-sided values taken at distance `h` along the normal.
pub fn transmission_residual(grid: &QuadratureGrid, pair: &Eigenpair, h: f64, nodes: &[usize]) -> Result<f64> {
    let mut pts = Vec::with_capacity(2 * nodes.len());
    for &i in nodes {
        let (x, nu) = (grid.nodes[i], grid.normals[i]);
        pts.extend([x - nu * h, x + nu * h]);
    }
    let f = eigenfunction(grid, pair, &pts)?;
    let c = SpinorMatrix::coupling(pair.coupling.epsilon, pair.coupling.mu);
    let norm = |v: [c64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let i = c64::new(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for (k, &node) in nodes.iter().enumerate() {
        let (fp, fm) = (f[2 * k], f[2 * k + 1]);
        let avg = c.apply([(fp[0] + fm[0]) * 0.5, (fp[1] + fm[1]) * 0.5]);
        let jump = SpinorMatrix::sigma_dot(grid.normals[node]).apply([fp[0] - fm[0], fp[1] - fm[1]]);
        let jump = [i * jump[0], i * jump[1]];
        let res = [avg[0] + jump[0], avg[1] + jump[1]];
        let scale = norm(avg) + norm(jump);
        if scale > 0.0 {
            worst = worst.max(norm(res) / scale);
        }
    }
    Ok(worst)
}

/// max |f| on the circle |x| = r2 over max |f| on |x| = r1 (64 angles each).
pub fn decay_ratio(grid: &QuadratureGrid, pair: &Eigenpair, r1: f64, r2: f64) -> Result<f64> {
    let ring = |r: f64| -> Vec<Vec2> { (0..64).map(|k| Vec2::from_angle(k as f64 * std::f64::consts::TAU / 64.0) * r).collect() };
    let peak = |pts: &[Vec2]| -> Result<f64> {
        Ok(eigenfunction(grid, pair, pts)?.iter().map(|v| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()).fold(0.0, f64::max))
    };
    Ok(peak(&ring(r2))? / peak(&ring(r1))?)
}

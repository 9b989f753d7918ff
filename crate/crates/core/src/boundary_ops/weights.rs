//! Quadrature weights for the two singular integrals every operator is built from:
//!
//! * `cauchy[(i, j)]`: ∫ g(y)/(y − x_i) dy ≈ Σ_j cauchy_ij g_j (principal value when x_i ∈ Σ),
//! * `log[(i, j)]`:    ∫ g(y) ln|y − x_i| ds(y) ≈ Σ_j log_ij g_j.
//!
//! Periodic grids use the alternate-point trapezoid rule and Kress' logarithmic
//! quadrature. Panel grids use product integration against monomials on every
//! panel close to the target, with plain Gauss weights elsewhere.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use num_complex::Complex64 as c64;

use crate::geometry::{GridLayout, QuadratureGrid};
use crate::linalg::{inverse, CMat};

/// Targets whose local panel coordinate lies within this radius get product integration.
const NEAR_RADIUS: f64 = 1.6;

#[derive(Debug, Clone)]
pub struct SingularWeights {
    pub cauchy: CMat,
    pub log: Mat<f64>,
}

impl SingularWeights {
    pub fn for_grid(grid: &QuadratureGrid) -> &SingularWeights {
        grid.singular.get_or_init(|| match grid.layout() {
            GridLayout::Periodic { n } => periodic(grid, *n),
            GridLayout::Panels { .. } => panels(grid),
        })
    }
}

fn tau_c(grid: &QuadratureGrid, j: usize) -> c64 {
    grid.tangents[j].to_complex()
}

/// Kress weights R_j(t_i), which depend only on (i − j) mod N.
fn kress_vector(n_total: usize) -> Vec<f64> {
    let n = n_total / 2;
    let h = TAU / n_total as f64;
    (0..n_total)
        .map(|d| {
            let s = d as f64 * h;
            let mut acc = 0.0;
            for m in 1..n {
                acc += (m as f64 * s).cos() / m as f64;
            }
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / n as f64 * acc - PI / (n * n) as f64 * sign
        })
        .collect()
}

fn periodic(grid: &QuadratureGrid, n: usize) -> SingularWeights {
    let h = TAU / n as f64;
    let kress = kress_vector(n);
    // speed with respect to s ∈ [0, 2π)
    let sp: Vec<f64> = grid.speed.iter().map(|s| s / TAU).collect();
    let x: Vec<c64> = grid.nodes.iter().map(|p| p.to_complex()).collect();
    let cauchy = Mat::from_fn(n, n, |i, j| {
        if (i + n - j) % 2 == 1 {
            2.0 * grid.weights[j] * tau_c(grid, j) / (x[j] - x[i])
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let log = Mat::from_fn(n, n, |i, j| {
        let d = (i + n - j) % n;
        if d == 0 {
            0.5 * kress[0] * sp[i] + h * sp[i] * sp[i].ln()
        } else {
            let r2 = (x[i] - x[j]).norm_sqr();
            let s2 = 4.0 * (0.5 * d as f64 * h).sin().powi(2);
            0.5 * kress[d] * sp[j] + 0.5 * h * sp[j] * (r2 / s2).ln()
        }
    });
    SingularWeights { cauchy, log }
}

struct PanelData {
    center: c64,
    half: c64,
    /// Nodes in local coordinates ζ = (y − center)/half.
    local: Vec<c64>,
    /// Inverse of V with V[k][j] = ζ_j^k.
    vinv: CMat,
    /// Weights for ∫ f dζ on the panel.
    plain: Vec<c64>,
}

fn moments_rhs(n: usize) -> Vec<c64> {
    (1..=n)
        .map(|k| {
            let kf = k as f64;
            c64::new((1.0 - (-1.0f64).powi(k as i32)) / kf, 0.0)
        })
        .collect()
}

fn apply(m: &CMat, v: &[c64]) -> Vec<c64> {
    crate::linalg::matvec(m, v)
}

fn panel_data(grid: &QuadratureGrid) -> Vec<PanelData> {
    grid.panels()
        .iter()
        .map(|p| {
            let a = grid.curve().point(p.edge, p.t0).to_complex();
            let b = grid.curve().point(p.edge, p.t1).to_complex();
            let center = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let local: Vec<c64> = p.range().map(|j| (grid.nodes[j].to_complex() - center) / half).collect();
            let n = local.len();
            let v = Mat::from_fn(n, n, |k, j| local[j].powi(k as i32));
            let vinv = inverse(&v);
            let plain = apply(&vinv, &moments_rhs(n));
            PanelData { center, half, local, vinv, plain }
        })
        .collect()
}

/// Cauchy and log product-integration weights on one panel for local target `z`.
/// `pole` is the index of the node that coincides with the target, if any.
fn product_weights(pd: &PanelData, z: c64, pole: Option<usize>) -> (Vec<c64>, Vec<c64>) {
    let n = pd.local.len();
    let mut path: Vec<c64> = Vec::with_capacity(n + 2);
    path.push(c64::new(-1.0, 0.0));
    for (k, &t) in pd.local.iter().enumerate() {
        if Some(k) != pole {
            path.push(t);
        }
    }
    path.push(c64::new(1.0, 0.0));
    let mut winding = 0.0;
    for k in 0..path.len() - 1 {
        let rat = (path[k + 1] - z) / (path[k] - z);
        // Across the pole the direction reverses; the principal value drops that half-turn.
        winding += if Some(k) == pole { (-rat).arg() } else { rat.arg() };
    }
    let one = c64::new(1.0, 0.0);
    let p1 = c64::new((one - z).norm().ln() - (-one - z).norm().ln(), winding);
    let mut p = vec![c64::new(0.0, 0.0); n + 1];
    p[0] = p1;
    for k in 1..=n {
        let kf = k as f64;
        p[k] = z * p[k - 1] + (1.0 - (-1.0f64).powi(k as i32)) / kf;
    }
    let cauchy = apply(&pd.vinv, &p[..n]);
    let l_end = (one - z).ln();
    let l_start = l_end - p1;
    let q: Vec<c64> = (1..=n)
        .map(|k| {
            let kf = k as f64;
            let sign = (-1.0f64).powi(k as i32);
            (l_end - l_start * sign) / kf - p[k] / kf
        })
        .collect();
    let log = apply(&pd.vinv, &q);
    (cauchy, log)
}

fn panels(grid: &QuadratureGrid) -> SingularWeights {
    let n = grid.len();
    let data = panel_data(grid);
    let x: Vec<c64> = grid.nodes.iter().map(|p| p.to_complex()).collect();
    let tau: Vec<c64> = (0..n).map(|j| tau_c(grid, j)).collect();
    let mut cauchy = Mat::from_fn(n, n, |i, j| {
        if i == j {
            c64::new(0.0, 0.0)
        } else {
            grid.weights[j] * tau[j] / (x[j] - x[i])
        }
    });
    let mut log = Mat::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            grid.weights[j] * (x[j] - x[i]).norm().ln()
        }
    });
    for (pi, (panel, pd)) in grid.panels().iter().zip(&data).enumerate() {
        let log_half = pd.half.ln();
        for i in 0..n {
            let z = (x[i] - pd.center) / pd.half;
            let own = grid.panel_index[i] == pi;
            if !own && z.norm() >= NEAR_RADIUS {
                continue;
            }
            let pole = if own { Some(i - panel.start) } else { None };
            let (cw, lw) = product_weights(pd, z, pole);
            for (k, j) in panel.range().enumerate() {
                cauchy[(i, j)] = cw[k];
                log[(i, j)] = (tau[j].conj() * pd.half * (lw[k] + log_half * pd.plain[k])).re;
            }
        }
    }
    SingularWeights { cauchy, log }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, discretize, CurveSpec};

    #[test]
    fn kress_weights_integrate_log_sine() {
        // ∫_0^{2π} ln(4 sin²(s/2)) cos(ms) ds = −2π/m for m ≥ 1, and 0 for m = 0.
        let n = 32;
        let r = kress_vector(n);
        let h = TAU / n as f64;
        for m in 0..6 {
            let q: f64 = (0..n).map(|j| r[j] * (m as f64 * j as f64 * h).cos()).sum();
            let want = if m == 0 { 0.0 } else { -TAU / m as f64 };
            assert!((q - want).abs() < 1e-12, "m={m}: {q}");
        }
    }

    #[test]
    fn log_weights_on_circle() {
        // ∫_{|y|=1} ln|x − y| ds(y) = 0 for |x| = 1.
        let c = build_curve(&CurveSpec::circle(1.0)).unwrap();
        let g = discretize(&c, 64, 3.0).unwrap();
        let w = SingularWeights::for_grid(&g);
        for i in 0..64 {
            let s: f64 = (0..64).map(|j| w.log[(i, j)]).sum();
            assert!(s.abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn log_weights_on_square_edge() {
        // ∫ ln|x − y| ds over the square boundary, checked against adaptive quadrature per edge.
        let c = build_curve(&CurveSpec::square(1.0)).unwrap();
        let g = discretize(&c, 64, 3.0).unwrap();
        let w = SingularWeights::for_grid(&g);
        for &i in &[0usize, 7, 40, 100] {
            let x = g.nodes[i];
            let mut exact = 0.0;
            for e in 0..4 {
                let edge = &c.edges()[e];
                let f = |t: f64| (edge.point(t) - x).norm().max(1e-300).ln();
                // split at the target parameter when it lies on this edge
                let cut = if g.edge_index[i] == e { g.params[i] } else { 0.5 };
                exact += crate::quad::integrate_real(f, 0.0, cut, 1e-14, 1e-13).unwrap()
                    + crate::quad::integrate_real(f, cut, 1.0, 1e-14, 1e-13).unwrap();
            }
            let s: f64 = (0..g.len()).map(|j| w.log[(i, j)]).sum();
            assert!((s - exact).abs() < 1e-10, "node {i}: {s} vs {exact}");
        }
    }

    #[test]
    fn cauchy_weights_reproduce_half_on_square() {
        // pv ∫ dy/(y − x) = iπ for x on a smooth part of a closed curve traversed anticlockwise.
        let c = build_curve(&CurveSpec::square(1.0)).unwrap();
        let g = discretize(&c, 64, 3.0).unwrap();
        let w = SingularWeights::for_grid(&g);
        for i in 0..g.len() {
            let s: c64 = (0..g.len()).map(|j| w.cauchy[(i, j)]).sum();
            assert!((s - c64::new(0.0, PI)).norm() < 1e-10, "node {i}: {s}");
        }
    }
}

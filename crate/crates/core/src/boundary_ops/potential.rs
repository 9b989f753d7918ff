//! Φ_z g(x) = ∫_Σ φ_z(x − y) g(y) ds(y) at points off the curve.
//!
//! Far from Σ the grid quadrature is used as is. Points within ten local mesh
//! widths are flagged `close`; for those the density is interpolated onto a
//! finer rule (FFT zero-padding on periodic grids, Lagrange interpolation on
//! bisected panels) before summing.

use std::collections::HashMap;

use num_complex::Complex64 as c64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridLayout, QuadratureGrid, Vec2};
use crate::kernels::{phi_m, phi_z, Coupling, SpinorMatrix};
use crate::quad::gauss_legendre;

/// Nodes on the refined rule are kept at least this many spacings from the target.
const SPACING_RATIO: f64 = 6.0;
const MAX_UPSAMPLE: usize = 1 << 21;
const MAX_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialValue {
    pub value: [c64; 2],
    /// Closer than ten local mesh widths to the curve.
    pub close: bool,
    pub distance: f64,
}

fn kernel(d: Vec2, z: f64, coupling: &Coupling) -> Result<SpinorMatrix> {
    if z == coupling.mass {
        phi_m(d)
    } else {
        phi_z(d, z, coupling)
    }
}

/// Distance from `x` to the curve.
pub fn distance_to_curve(grid: &QuadratureGrid, x: Vec2) -> f64 {
    nearest(grid, x).0
}

/// Distance from `x` to the curve and the nearest grid node.
fn nearest(grid: &QuadratureGrid, x: Vec2) -> (f64, usize) {
    let (near, _) = grid
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, (p - x).norm()))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let curve = grid.curve();
    let e = grid.edge_index[near];
    let t = grid.params[near];
    // bracket from the neighbouring nodes on the same edge
    let spread = {
        let mut s: f64 = 0.0;
        for k in [near.wrapping_sub(1), near + 1] {
            if k < grid.len() && grid.edge_index[k] == e {
                s = s.max((grid.params[k] - t).abs());
            }
        }
        if s == 0.0 {
            1.0 / grid.len() as f64
        } else {
            s
        }
    };
    let clamp = |u: f64| if grid.is_periodic() { u } else { u.clamp(0.0, 1.0) };
    let f = |u: f64| (curve.point(e, clamp(u)) - x).norm();
    let (mut a, mut b) = (t - spread, t + spread);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let best = fc.min(fd).min((grid.nodes[near] - x).norm());
    // corners sit at edge ends and are covered by clamping, except the far end of the adjacent edge
    let corner = curve.corners().iter().map(|k| (k.position - x).norm()).fold(f64::INFINITY, f64::min);
    (best.min(corner), near)
}

/// Layer potential of the ℂ²-density `g` (interleaved, length 2N) at `points`.
pub fn evaluate_potential(
    grid: &QuadratureGrid,
    g: &[c64],
    z: f64,
    coupling: &Coupling,
    points: &[Vec2],
) -> Result<Vec<PotentialValue>> {
    if g.len() != 2 * grid.len() {
        return Err(Error::DimensionMismatch { expected: 2 * grid.len(), got: g.len() });
    }
    if z != coupling.mass {
        coupling.kappa(z)?;
    }
    let tiny = 1e-10 * grid.curve().scale().max(1.0);
    let mut upsampled: HashMap<usize, Fine> = HashMap::new();
    let mut out = Vec::with_capacity(points.len());
    for &x in points {
        let (dist, near) = nearest(grid, x);
        if dist < tiny {
            return Err(Error::PointOnCurve { x: x.x, y: x.y });
        }
        let close = dist < 10.0 * grid.mesh_width(near);
        let value = if !close {
            sum_rule(grid.nodes.iter().copied(), grid.weights.iter().copied(), g.chunks(2), x, z, coupling)?
        } else if let GridLayout::Periodic { n } = grid.layout() {
            let mut m = *n;
            while grid.mesh_width(near) * (*n as f64) / (m as f64) > dist / SPACING_RATIO && m < MAX_UPSAMPLE {
                m *= 2;
            }
            if !upsampled.contains_key(&m) {
                upsampled.insert(m, upsample_periodic(grid, g, m));
            }
            let fine = &upsampled[&m];
            sum_rule(fine.nodes.iter().copied(), fine.weights.iter().copied(), fine.density.chunks(2), x, z, coupling)?
        } else {
            panel_close(grid, g, x, dist, z, coupling)?
        };
        out.push(PotentialValue { value, close, distance: dist });
    }
    Ok(out)
}

fn sum_rule<'a>(
    nodes: impl Iterator<Item = Vec2>,
    weights: impl Iterator<Item = f64>,
    density: impl Iterator<Item = &'a [c64]>,
    x: Vec2,
    z: f64,
    coupling: &Coupling,
) -> Result<[c64; 2]> {
    let mut acc = [c64::new(0.0, 0.0); 2];
    for ((y, w), gj) in nodes.zip(weights).zip(density) {
        if gj[0] == c64::new(0.0, 0.0) && gj[1] == c64::new(0.0, 0.0) {
            continue;
        }
        let v = kernel(x - y, z, coupling)?.apply([gj[0], gj[1]]);
        acc[0] += v[0] * w;
        acc[1] += v[1] * w;
    }
    Ok(acc)
}

struct Fine {
    nodes: Vec<Vec2>,
    weights: Vec<f64>,
    density: Vec<c64>,
}

fn upsample_periodic(grid: &QuadratureGrid, g: &[c64], m: usize) -> Fine {
    let n = grid.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(m);
    let mut density = vec![c64::new(0.0, 0.0); 2 * m];
    for comp in 0..2 {
        let mut buf: Vec<c64> = (0..n).map(|i| g[2 * i + comp]).collect();
        fwd.process(&mut buf);
        let mut wide = vec![c64::new(0.0, 0.0); m];
        let half = n / 2;
        for k in 0..half {
            wide[k] = buf[k];
        }
        for k in half + 1..n {
            wide[m - n + k] = buf[k];
        }
        // split the Nyquist mode symmetrically
        wide[half] = buf[half] * 0.5;
        wide[m - half] += buf[half] * 0.5;
        inv.process(&mut wide);
        for (i, v) in wide.iter().enumerate() {
            density[2 * i + comp] = v / n as f64;
        }
    }
    let curve = grid.curve();
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for k in 0..m {
        let t = k as f64 / m as f64;
        nodes.push(curve.point(0, t));
        weights.push(curve.derivative(0, t).norm() / m as f64);
    }
    Fine { nodes, weights, density }
}

fn lagrange_row(reference: &[f64], s: f64) -> Vec<f64> {
    let n = reference.len();
    (0..n)
        .map(|j| {
            let mut l = 1.0;
            for k in 0..n {
                if k != j {
                    l *= (s - reference[k]) / (reference[j] - reference[k]);
                }
            }
            l
        })
        .collect()
}

fn panel_close(grid: &QuadratureGrid, g: &[c64], x: Vec2, dist: f64, z: f64, coupling: &Coupling) -> Result<[c64; 2]> {
    let (reference, gw) = match grid.layout() {
        GridLayout::Panels { reference, .. } => (reference.clone(), gauss_legendre(reference.len()).1),
        GridLayout::Periodic { .. } => unreachable!(),
    };
    let curve = grid.curve();
    let mut acc = [c64::new(0.0, 0.0); 2];
    for p in grid.panels() {
        let len: f64 = grid.weights[p.range()].iter().sum();
        let mid = curve.point(p.edge, 0.5 * (p.t0 + p.t1));
        if (mid - x).norm() > 2.0 * len {
            let v = sum_rule(
                grid.nodes[p.range()].iter().copied(),
                grid.weights[p.range()].iter().copied(),
                g[2 * p.start..2 * (p.start + p.order)].chunks(2),
                x,
                z,
                coupling,
            )?;
            acc[0] += v[0];
            acc[1] += v[1];
            continue;
        }
        // bisect the reference interval until each piece is far enough from x
        let mut stack = vec![(-1.0f64, 1.0f64, 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let ta = p.t0 + 0.5 * (a + 1.0) * (p.t1 - p.t0);
            let tb = p.t0 + 0.5 * (b + 1.0) * (p.t1 - p.t0);
            let piece = (curve.point(p.edge, tb) - curve.point(p.edge, ta)).norm();
            let centre = curve.point(p.edge, 0.5 * (ta + tb));
            if (centre - x).norm() < 1.5 * piece && depth < MAX_DEPTH && piece > dist / SPACING_RATIO {
                let c = 0.5 * (a + b);
                stack.push((a, c, depth + 1));
                stack.push((c, b, depth + 1));
                continue;
            }
            let h = 0.5 * (b - a);
            for (r, w) in reference.iter().zip(&gw) {
                let s = a + h * (r + 1.0);
                let t = p.t0 + 0.5 * (s + 1.0) * (p.t1 - p.t0);
                let y = curve.point(p.edge, t);
                let ds = curve.derivative(p.edge, t).norm() * 0.5 * (p.t1 - p.t0) * h * w;
                let l = lagrange_row(&reference, s);
                let mut gy = [c64::new(0.0, 0.0); 2];
                for (k, lk) in l.iter().enumerate() {
                    gy[0] += g[2 * (p.start + k)] * lk;
                    gy[1] += g[2 * (p.start + k) + 1] * lk;
                }
                let v = kernel(x - y, z, coupling)?.apply(gy);
                acc[0] += v[0] * ds;
                acc[1] += v[1] * ds;
            }
        }
    }
    Ok(acc)
}

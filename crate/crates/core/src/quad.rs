//! One-dimensional quadrature: Gauss–Legendre rules and an adaptive
//! Gauss–Kronrod (7/15) integrator for complex-valued integrands.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use num_complex::Complex64 as c64;

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> c64>(f: &F, a: f64, b: f64) -> (c64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: c64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: c64,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
/// `initial` splits the interval uniformly before adaptation starts, which
/// helps oscillatory integrands.
pub fn integrate<F: Fn(f64) -> c64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    initial: usize,
    max_segments: usize,
) -> Result<Integral> {
    let initial = initial.max(1);
    let mut heap = BinaryHeap::new();
    let mut total = c64::new(0.0, 0.0);
    let mut err = 0.0;
    let h = (b - a) / initial as f64;
    for k in 0..initial {
        let lo = a + h * k as f64;
        let hi = if k + 1 == initial { b } else { lo + h };
        let (v, e) = gk15(&f, lo, hi);
        total += v;
        err += e;
        heap.push(Segment { a: lo, b: hi, value: v, err: e });
    }
    let mut evaluations = 15 * initial;
    while err > abs_tol.max(rel_tol * total.norm()) {
        if heap.len() >= max_segments {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a}, {b}] reached {max_segments} segments with error estimate {err:e}"
            )));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        evaluations += 30;
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().fold(c64::new(0.0, 0.0), |s, seg| s + seg.value);
    let error = heap.iter().map(|s| s.err).sum();
    Ok(Integral { value, error, evaluations })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    integrate(|x| c64::new(f(x), 0.0), a, b, abs_tol, rel_tol, 1, 4096).map(|r| r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 8, 16, 23] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n={n} deg={deg}: {q} vs {exact}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x| c64::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-12, 1e-12, 1, 2000).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_oscillatory() {
        // ∫_0^{20π} e^{ix} dx = 0, ∫_0^{10} cos(3x) = sin(30)/3
        let r = integrate(|x| c64::from_polar(1.0, x), 0.0, 20.0 * std::f64::consts::PI, 1e-13, 0.0, 8, 2000)
            .unwrap();
        assert!(r.value.norm() < 1e-12);
        let v = integrate_real(|x| (3.0 * x).cos(), 0.0, 10.0, 1e-14, 1e-14).unwrap();
        assert!((v - 30f64.sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_reports_failure() {
        let r = integrate(|x| c64::new(1.0 / x, 0.0), 0.0, 1.0, 1e-14, 0.0, 1, 50);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }
}

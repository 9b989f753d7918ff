//! Corner symbols of Λ_z on curvilinear polygons.
//!
//! At a corner of interior angle θ the Fredholm symbol on the line
//! ξ = η + i/2 is Δ(ξ) = (1 − (ε² − μ²) M_θ(2η))², with
//! M_θ(x) = cosh((π − θ)x) / (2(1 + cosh πx)) and m(θ) = sup M_θ.

use std::f64::consts::PI;

use num_complex::Complex64 as c64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{sharpest_angle, Vec2};
use crate::kernels::{Coupling, SpinorMatrix};
use crate::quad;

/// Default integration window |t| ≤ T for [`delta_direct`].
pub const DEFAULT_TRUNCATION: f64 = 80.0;
pub const DEFAULT_SYMBOL_TOL: f64 = 1e-12;

const I: c64 = c64 { re: 0.0, im: 1.0 };

/// M_θ(x), written with decaying exponentials only.
pub fn m_theta(theta: f64, x: f64) -> f64 {
    let a = (PI - theta).abs() * x.abs();
    let b = PI * x.abs();
    let eb = (-b).exp();
    (a - b).exp() * (1.0 + (-2.0 * a).exp()) / (2.0 * (1.0 + eb) * (1.0 + eb))
}

fn check_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::Domain(format!("corner angle {theta} is outside (0, 2π)")));
    }
    Ok(())
}

/// m(θ) and a maximizer x* ≥ 0, to within `tol` in the value.
pub fn m_argmax(theta: f64, tol: f64) -> Result<(f64, f64)> {
    check_angle(theta)?;
    if !(tol >= 1e-13) {
        return Err(Error::Domain(format!("tolerance {tol} is below 1e-13")));
    }
    let omega = theta.min(2.0 * PI - theta);
    // M_θ(x) ≤ e^{−ωx} ≤ 1/4 = M_θ(0) beyond this point.
    let x_max = 4f64.ln() / omega;
    let n = 2000;
    let h = x_max / n as f64;
    let f = |x: f64| m_theta(theta, x);
    let (mut best_k, mut best) = (0usize, f(0.0));
    for k in 1..=n {
        let v = f(k as f64 * h);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    if best_k == 0 {
        return Ok((best, 0.0));
    }
    let (mut a, mut b) = ((best_k - 1) as f64 * h, ((best_k + 1) as f64 * h).min(x_max));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 * (1.0 + b) {
        if fc > fd {
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
    let (x, v) = if fc > fd { (c, fc) } else { (d, fd) };
    Ok(if v > best { (v, x) } else { (best, best_k as f64 * h) })
}

/// m(θ) = sup_x M_θ(x).
pub fn m_of(theta: f64, tol: f64) -> Result<f64> {
    Ok(m_argmax(theta, tol)?.0)
}

/// Δ(η + i/2) = (1 − (ε² − μ²) M_θ(2η))².
pub fn delta_closed(theta: f64, eta: f64, coupling: &Coupling) -> f64 {
    let r = 1.0 - coupling.delta() * m_theta(theta, 2.0 * eta);
    r * r
}

/// Quadrature evaluation of the symbol at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinResult {
    /// (τ, ν) coefficients of the first Mellin integral.
    pub a: [c64; 2],
    /// (τ, ν) coefficients of the second Mellin integral.
    pub b: [c64; 2],
    /// Coupling factors of H⁽¹⁾ and H⁽²⁾; the Mellin pairs enter through ⟨A, B⟩.
    pub h1: SpinorMatrix,
    pub h2: SpinorMatrix,
    /// 4 sin²θ ⟨A, B⟩ / 4π², which equals 2 sin²θ cosh(2η(π−θ)) / (1 + cosh 2πη).
    pub s: c64,
    pub delta: c64,
}

fn integrate_line<F: Fn(f64) -> c64>(f: F, trunc: f64, tol: f64) -> Result<c64> {
    let left = quad::integrate(&f, -trunc, 0.0, tol, tol, 16, 4000)?;
    let right = quad::integrate(&f, 0.0, trunc, tol, tol, 16, 4000)?;
    let err = left.error + right.error;
    if !(err <= 10.0 * tol * (1.0 + (left.value + right.value).norm())) {
        return Err(Error::Convergence(format!("symbol quadrature error estimate {err:e} exceeds tolerance {tol:e}")));
    }
    Ok(left.value + right.value)
}

/// Δ(η + i/2) from the Mellin integrals in the model frame τ = (1, 0), ν = (0, 1).
pub fn delta_direct(theta: f64, eta: f64, coupling: &Coupling, trunc: f64, tol: f64) -> Result<MellinResult> {
    check_angle(theta)?;
    if !(trunc >= 40.0) {
        return Err(Error::Domain(format!("truncation {trunc} is below 40")));
    }
    if !(tol >= 1e-12) {
        return Err(Error::Domain(format!("tolerance {tol} is below 1e-12")));
    }
    let xi = c64::new(eta, 0.5);
    let xib = xi.conj();
    let (cos, sin) = (theta.cos(), theta.sin());
    let den = move |t: f64| t.exp() + (-t).exp() - 2.0 * cos;
    // A = ∫ ((e^{iξ̄t} cos θ − e^{iξt}) τ − e^{iξ̄t} sin θ ν) / den dt, B swaps ξ and ξ̄.
    let coef = |p: c64, q: c64, comp: usize| {
        move |t: f64| {
            let ep = (I * p * t).exp();
            let eq = (I * q * t).exp();
            let v = if comp == 0 { ep * cos - eq } else { -ep * sin };
            v / den(t)
        }
    };
    let a = [integrate_line(coef(xib, xi, 0), trunc, tol)?, integrate_line(coef(xib, xi, 1), trunc, tol)?];
    let b = [integrate_line(coef(xi, xib, 0), trunc, tol)?, integrate_line(coef(xi, xib, 1), trunc, tol)?];
    let (ep, em) = (coupling.epsilon + coupling.mu, coupling.epsilon - coupling.mu);
    let o = c64::new(0.0, 0.0);
    // The frame coefficients are real, so the conjugate-frame integrals coincide
    // with A and B and both symbol matrices share the pairing ⟨A, B⟩.
    let ab = a[0] * b[0] + a[1] * b[1];
    let f1 = -I / (2.0 * PI);
    let h1 = SpinorMatrix::new(o, f1 * ep, f1 * em, o);
    let h2 = SpinorMatrix::new(o, -f1 * ep, -f1 * em, o);
    let prod = (h1 * h2).scale(ab);
    let delta = (SpinorMatrix::identity() - prod).det();
    let s = ab * (4.0 * sin * sin / (4.0 * PI * PI));
    Ok(MellinResult { a, b, h1, h2, s, delta })
}

fn csinc(w: c64) -> c64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        c64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

fn check_mellin(alpha: c64, omega: f64, b: f64) -> Result<()> {
    if !(alpha.re > 0.0 && alpha.re < 2.0 && alpha.im.is_finite()) {
        return Err(Error::Domain(format!("Re α = {} is outside (0, 2)", alpha.re)));
    }
    if !(omega.abs() > 0.0 && omega.abs() < PI) {
        return Err(Error::Domain(format!("ω = {omega} is outside 0 < |ω| < π")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!("b = {b} must be positive")));
    }
    Ok(())
}

/// ∫₀^∞ x^{α−1} / (x² + 2bx cos ω + b²) dx
///   = −π b^{α−2} sin((α−1)ω) / (sin ω sin απ)
///   = b^{α−2} (ω / sin ω) sinc((α−1)ω) / sinc((α−1)π),
/// the second form being regular at α = 1.
pub fn mellin_reference(alpha: c64, omega: f64, b: f64) -> Result<c64> {
    check_mellin(alpha, omega, b)?;
    let d = alpha - 1.0;
    let pow = (c64::new(b.ln(), 0.0) * (alpha - 2.0)).exp();
    Ok(pow * (omega / omega.sin()) * csinc(d * omega) / csinc(d * PI))
}

/// The same integral by adaptive quadrature in t = ln x with analytic tails.
pub fn mellin_quadrature(alpha: c64, omega: f64, b: f64, tol: f64) -> Result<c64> {
    check_mellin(alpha, omega, b)?;
    let lb = b.ln();
    let f = |t: f64| {
        let x = t.exp();
        (alpha * t).exp() / (x * x + 2.0 * b * x * omega.cos() + b * b)
    };
    // Leading tails e^{αt}/b² on the left and e^{(α−2)t} on the right; the next
    // terms are smaller by e^{−|t − ln b|}, negligible past 40 units.
    let t1 = lb - (40.0f64).max(36.0 / alpha.re);
    let t2 = lb + (40.0f64).max(36.0 / (2.0 - alpha.re));
    let body = quad::integrate(f, t1, t2, tol * 1e-2, tol * 1e-2, 64, 20000)?;
    let left = (alpha * t1).exp() / (alpha * b * b);
    let right = ((alpha - 2.0) * t2).exp() / (2.0 - alpha);
    Ok(body.value + left + right)
}

/// Outcome of the polygon Fredholm test for Λ_z.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FredholmDecision {
    pub fredholm: bool,
    /// Sharpest opening min(θ, 2π − θ) over the corners.
    pub omega: f64,
    pub m_omega: f64,
    /// Index of the corner realizing ω.
    pub corner: usize,
    /// η* with M_θ(2η*) = 1/(ε² − μ²), when not Fredholm.
    pub witness_eta: Option<f64>,
}

/// Λ_z is Fredholm on a polygon with these corner angles iff ε² − μ² < 1/m(ω).
pub fn fredholm_polygon(angles: &[f64], coupling: &Coupling) -> Result<FredholmDecision> {
    if coupling.is_critical() {
        return Err(Error::CriticalCoupling(coupling.epsilon.abs()));
    }
    let omega = sharpest_angle(angles)?;
    let corner = angles
        .iter()
        .enumerate()
        .map(|(k, &t)| (k, t.min(2.0 * PI - t)))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
        .0;
    let (m, x_star) = m_argmax(omega, 1e-13)?;
    let d = coupling.delta();
    let fredholm = d < 1.0 / m;
    let witness_eta = if fredholm { None } else { Some(witness(omega, d, x_star)) };
    Ok(FredholmDecision { fredholm, omega, m_omega: m, corner, witness_eta })
}

/// A zero of η ↦ d M_ω(2η) − 1 on η ≥ 0, given d ≥ 1/m(ω).
fn witness(omega: f64, d: f64, x_star: f64) -> f64 {
    let f = |eta: f64| d * m_theta(omega, 2.0 * eta) - 1.0;
    // M(2η) ≤ e^{−2ωη}, so every zero lies below ln(d)/(2ω).
    let reach = 8f64.max(d.ln() / (2.0 * omega));
    let n = 2000;
    let h = reach / n as f64;
    let mut prev = f(0.0);
    if prev == 0.0 {
        return 0.0;
    }
    for k in 1..=n {
        let (a, b) = ((k - 1) as f64 * h, k as f64 * h);
        let cur = f(b);
        if cur == 0.0 {
            return b;
        }
        if (prev < 0.0) != (cur < 0.0) {
            let (mut lo, mut hi, mut flo) = (a, b, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + hi) {
                    break;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
    }
    // d = 1/m exactly: tangency at the maximizer.
    0.5 * x_star
}

/// The matrix function G(x, y, ν(x), ν(y), ζ) of the Dirac case, for which
/// Θ_m = I − T_G; it depends on the direction ζ = (x − y)/|x − y| only.
pub fn shelepov_kernel(coupling: &Coupling, zeta: Vec2) -> SpinorMatrix {
    let z = zeta.to_complex();
    let f = -I / (2.0 * PI);
    let o = c64::new(0.0, 0.0);
    SpinorMatrix::new(o, f * (coupling.epsilon + coupling.mu) * z.conj(), f * (coupling.epsilon - coupling.mu) * z, o)
}

/// Result of testing |G_ij| ≤ C(|⟨ξ,ζ⟩| + |⟨η,ζ⟩|) on sampled arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShelepovReport {
    pub samples: usize,
    pub violations: usize,
    /// max |G_ij| / (|⟨ξ,ζ⟩| + |⟨η,ζ⟩|) over the samples.
    pub worst_ratio: f64,
}

/// Checks the bound on the given (ξ, η, ζ) unit-vector triples.
pub fn check_shelepov_bound(coupling: &Coupling, constant: f64, samples: &[(Vec2, Vec2, Vec2)]) -> ShelepovReport {
    let mut violations = 0;
    let mut worst = 0.0f64;
    for &(xi, eta, zeta) in samples {
        let g = shelepov_kernel(coupling, zeta).max_abs();
        let rhs = xi.dot(zeta).abs() + eta.dot(zeta).abs();
        if g > constant * rhs {
            violations += 1;
        }
        worst = worst.max(if rhs == 0.0 { f64::INFINITY } else { g / rhs });
    }
    ShelepovReport { samples: samples.len(), violations, worst_ratio: worst }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn m_theta_values() {
        for th in [0.1, 1.0, PI / 2.0, 4.0, 6.0] {
            assert_eq!(m_theta(th, 0.0), 0.25);
        }
        assert!(m_theta(0.4 * PI, 50.0) < 1e-10);
        assert!((m_theta(0.7 * PI, 1.3) - m_theta(1.3 * PI, 1.3)).abs() <= 1e-15);
        // against the naive formula where it does not overflow
        for &(th, x) in &[(0.3, 2.0), (2.0, -1.5), (5.5, 7.0)] {
            let naive = ((PI - th) * x).cosh() / (2.0 * (1.0 + (PI * x).cosh()));
            assert!((m_theta(th, x) - naive).abs() <= 1e-15 * naive.max(1e-300) * 10.0);
        }
        assert!(m_theta(0.01, 1e4).is_finite());
    }

    #[test]
    fn m_of_examples() {
        assert!((m_of(PI / 2.0, 1e-12).unwrap() - 0.25).abs() <= 1e-10);
        // m(ω) → 1/2 slowly: reference values from 30-digit arithmetic
        assert!((m_of(0.005 * PI, 1e-12).unwrap() - 0.482_829_561_996_142_07).abs() <= 1e-12);
        assert!((m_of(0.0005 * PI, 1e-12).unwrap() - 0.497_681_940_442_436_13).abs() <= 1e-12);
        assert!(m_of(0.000_05 * PI, 1e-12).unwrap() >= 0.499);
        let a = m_of(0.4 * PI, 1e-12).unwrap();
        let b = m_of(0.6 * PI, 1e-12).unwrap();
        assert!((0.25..=0.5).contains(&a) && a >= b);
        assert!(m_of(0.0, 1e-12).is_err());
        assert!(m_of(1.0, 1e-14).is_err());
    }

    #[test]
    fn m_symmetry_and_monotonicity() {
        for k in 1..=50 {
            let th = PI * k as f64 / 51.0;
            let a = m_of(th, 1e-13).unwrap();
            let b = m_of(2.0 * PI - th, 1e-13).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
        let mut last = f64::INFINITY;
        for k in 1..=200 {
            let v = m_of(PI * k as f64 / 201.0, 1e-13).unwrap();
            assert!(v <= last + 1e-12);
            last = v;
        }
    }

    #[test]
    fn closed_symbol_examples() {
        let c = Coupling::unit_mass(0.7, 0.7);
        assert_eq!(delta_closed(1.1, 0.4, &c), 1.0);
        assert_eq!(delta_closed(PI / 2.0, 0.0, &Coupling::unit_mass(2.0, 0.0)), 0.0);
        assert_eq!(delta_closed(PI / 2.0, 0.0, &Coupling::unit_mass(1.0, 0.0)), 0.5625);
    }

    #[test]
    fn direct_symbol_matches_closed_form() {
        let c = Coupling::unit_mass(2.0, 0.0);
        let r = delta_direct(0.5 * PI, 0.7, &c, DEFAULT_TRUNCATION, DEFAULT_SYMBOL_TOL).unwrap();
        assert!((r.delta - delta_closed(0.5 * PI, 0.7, &c)).norm() <= 1e-8);
        assert!(r.delta.im.abs() <= 1e-9);
        for m in [r.h1, r.h2] {
            assert_eq!(m.get(0, 0), c64::new(0.0, 0.0));
            assert_eq!(m.get(1, 1), c64::new(0.0, 0.0));
        }
        let (th, eta) = (1.2 * PI, -0.4);
        let r = delta_direct(th, eta, &Coupling::unit_mass(1.0, 3.0), DEFAULT_TRUNCATION, DEFAULT_SYMBOL_TOL).unwrap();
        let s = 2.0 * th.sin().powi(2) * (2.0 * eta * (PI - th)).cosh() / (1.0 + (2.0 * PI * eta).cosh());
        assert!((r.s - s).norm() <= 1e-8);
        assert!(delta_direct(th, eta, &c, 30.0, 1e-12).is_err());
    }

    #[test]
    fn mellin_examples() {
        let v = mellin_reference(c64::new(1.0, 0.0), PI / 2.0, 1.0).unwrap();
        assert!((v - c64::new(PI / 2.0, 0.0)).norm() < 1e-15);
        // the raw formula on both sides of α = 1
        let raw = |a: f64| -PI * ((a - 1.0) * PI / 2.0).sin() / (a * PI).sin();
        let avg = 0.5 * (raw(1.0 + 1e-6) + raw(1.0 - 1e-6));
        assert!((avg - PI / 2.0).abs() < 1e-8);

        let a = c64::new(1.5, 0.0);
        let exact = mellin_reference(a, 0.3 * PI, 1.0).unwrap();
        let q = mellin_quadrature(a, 0.3 * PI, 1.0, 1e-12).unwrap();
        assert!((exact - q).norm() <= 1e-10);

        let a = c64::new(0.7, 0.4);
        let ratio = mellin_reference(a, 1.0, 2.0).unwrap() / mellin_reference(a, 1.0, 1.0).unwrap();
        let want = (c64::new(2f64.ln(), 0.0) * (a - 2.0)).exp();
        assert!((ratio - want).norm() <= 1e-10);

        assert!(mellin_reference(c64::new(2.0, 0.0), 1.0, 1.0).is_err());
        assert!(mellin_reference(c64::new(1.0, 0.0), PI, 1.0).is_err());
        assert!(mellin_reference(c64::new(1.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn fredholm_examples() {
        let sq = [PI / 2.0; 4];
        let d = fredholm_polygon(&sq, &Coupling::unit_mass(1.0, 0.0)).unwrap();
        assert!(d.fredholm && d.witness_eta.is_none());
        let d = fredholm_polygon(&sq, &Coupling::unit_mass(2.0, 0.0)).unwrap();
        assert!(!d.fredholm);
        assert_eq!(d.witness_eta, Some(0.0));

        let angles = [0.3 * PI, PI / 2.0];
        let m = m_of(0.3 * PI, 1e-13).unwrap();
        let d = fredholm_polygon(&angles, &Coupling::unit_mass(2.0, 0.0)).unwrap();
        assert_eq!(d.fredholm, 4.0 < 1.0 / m);
        assert_eq!(d.corner, 0);

        let d = fredholm_polygon(&[PI / 3.0], &Coupling::unit_mass(3.0, 0.0)).unwrap();
        let eta = d.witness_eta.unwrap();
        assert!((9.0 * m_theta(PI / 3.0, 2.0 * eta) - 1.0).abs() < 1e-12);

        assert!(matches!(fredholm_polygon(&sq, &Coupling::unit_mass(1.0, 1.0)), Err(Error::CriticalCoupling(_))));
        assert!(matches!(fredholm_polygon(&[], &Coupling::unit_mass(1.0, 0.0)), Err(Error::EmptyCorners)));
    }

    #[test]
    fn shelepov_bound_fails_for_orthogonal_directions() {
        let c = Coupling::unit_mass(1.0, 0.5);
        let bound = (c.epsilon.abs() + c.mu.abs()) / PI;
        // straight edge: both normals orthogonal to the chord direction
        let nu = Vec2::new(0.0, 1.0);
        let zeta = Vec2::new(1.0, 0.0);
        let r = check_shelepov_bound(&c, bound, &[(nu, nu, zeta)]);
        assert_eq!(r.violations, 1);
        assert!(r.worst_ratio.is_infinite());
        assert!((shelepov_kernel(&c, zeta).max_abs() - 1.5 / (2.0 * PI)).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<_> = (0..1000)
            .map(|_| {
                let mut v = || Vec2::from_angle(rng.gen_range(0.0..2.0 * PI));
                (v(), v(), v())
            })
            .collect();
        let r = check_shelepov_bound(&c, bound, &samples);
        assert_eq!(r.samples, 1000);
        assert!(r.violations > 0);
    }

    proptest! {
        #[test]
        fn m_between_quarter_and_half(theta in 0.01f64..6.27) {
            let m = m_of(theta, 1e-12).unwrap();
            prop_assert!((0.25..=0.5).contains(&m));
        }

        #[test]
        fn closed_symbol_vanishes_only_on_critical_level(theta in 0.2f64..6.0, eta in -3.0f64..3.0) {
            let mval = m_theta(theta, 2.0 * eta);
            let c = Coupling::unit_mass((1.0 / mval).sqrt(), 0.0);
            prop_assert!(delta_closed(theta, eta, &c) < 1e-24);
        }
    }
}

//! Modified Bessel functions I₀, I₁, K₀, K₁ of real positive argument.
//!
//! Power series for x ≤ 2. For x > 2, K uses Steed's continued fraction
//! (Temme's CF2) and I the Hankel asymptotic series once x > 50.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 2.0;

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("modified Bessel K needs x > 0, got {x}")))
    }
}

/// K₀(x) for x > 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(k0k1(x).0)
}

/// K₁(x) for x > 0.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(k0k1(x).1)
}

/// (K₀(x), K₁(x)) without argument checks; x must be positive.
pub fn k0k1(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX {
        (k0_series(x), k1_series(x))
    } else {
        let (k0, k1) = k0k1_scaled_cf(x);
        let e = (-x).exp();
        (k0 * e, k1 * e)
    }
}

/// (e^x K₀(x), e^x K₁(x)).
pub fn k0k1_scaled(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX {
        let e = x.exp();
        (k0_series(x) * e, k1_series(x) * e)
    } else {
        k0k1_scaled_cf(x)
    }
}

/// x·K₁(x) − 1, accurate for small x where the difference is O(x² ln x).
pub fn xk1_minus_one(x: f64) -> f64 {
    if x <= SERIES_MAX {
        let y = 0.25 * x * x;
        let (i1, _) = i1_series_parts(x);
        let mut term = 1.0; // y^k / (k! (k+1)!)
        let mut hk = 0.0;
        let mut sum = 0.0;
        for k in 0..60 {
            let kf = k as f64;
            let hk1 = hk + 1.0 / (kf + 1.0);
            let psi = -2.0 * EULER_GAMMA + hk + hk1;
            let t = psi * term;
            sum += t;
            if t.abs() < 1e-17 * sum.abs() && k > 2 {
                break;
            }
            hk = hk1;
            term *= y / ((kf + 1.0) * (kf + 2.0));
        }
        x * (0.5 * x).ln() * i1 - y * sum
    } else {
        x * k0k1(x).1 - 1.0
    }
}

/// I₀(x), x ≥ 0.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x > 50.0 {
        i_asymptotic(0.0, x)
    } else {
        let y = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= y / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    }
}

/// I₁(x).
pub fn bessel_i1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_i1(-x);
    }
    if x > 50.0 {
        i_asymptotic(1.0, x)
    } else {
        i1_series_parts(x).0
    }
}

fn i1_series_parts(x: f64) -> (f64, usize) {
    let y = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 0usize;
    while term > 1e-17 * sum {
        k += 1;
        let kf = k as f64;
        term *= y / (kf * (kf + 1.0));
        sum += term;
        if k > 400 {
            break;
        }
    }
    (sum, k)
}

fn i_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= -(mu - odd * odd) / (kf * 8.0 * x);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * sum
}

fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let i0 = bessel_i0(x);
    let mut term = 1.0;
    let mut hk = 0.0;
    let mut sum = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * kf);
        hk += 1.0 / kf;
        sum += hk * term;
        if hk * term < 1e-17 * sum {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + sum
}

fn k1_series(x: f64) -> f64 {
    (xk1_minus_one(x) + 1.0) / x
}

/// Steed's method for e^x K₀ and e^x K₁, valid for x ≳ 2.
fn k0k1_scaled_cf(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

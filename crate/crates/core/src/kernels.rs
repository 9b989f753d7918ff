//! Pauli algebra, couplings and the Dirac fundamental solutions φ_z, φ_m.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::special::k0k1;

const I: c64 = c64 { re: 0.0, im: 1.0 };

/// A 2×2 complex matrix. Entries are stored row-major with zero-based
/// indices, so `self.0[0][1]` is the (1,2) entry.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpinorMatrix(pub [[c64; 2]; 2]);

impl SpinorMatrix {
    pub const ZERO: SpinorMatrix = SpinorMatrix([[c64 { re: 0.0, im: 0.0 }; 2]; 2]);

    pub fn new(a: c64, b: c64, c: c64, d: c64) -> Self {
        SpinorMatrix([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::sigma(0)
    }

    /// Pauli matrix σ_k for k ∈ {0,1,2,3}; σ₀ is the identity.
    pub fn sigma(k: usize) -> Self {
        let o = c64::new(0.0, 0.0);
        let l = c64::new(1.0, 0.0);
        match k {
            0 => Self::new(l, o, o, l),
            1 => Self::new(o, l, l, o),
            2 => Self::new(o, -I, I, o),
            3 => Self::new(l, o, o, -l),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

    /// σ·x = x₁σ₁ + x₂σ₂.
    pub fn sigma_dot(x: Vec2) -> Self {
        let o = c64::new(0.0, 0.0);
        Self::new(o, c64::new(x.x, -x.y), c64::new(x.x, x.y), o)
    }

    /// Diagonal coupling matrix εσ₀ + μσ₃.
    pub fn coupling(epsilon: f64, mu: f64) -> Self {
        let o = c64::new(0.0, 0.0);
        Self::new(c64::new(epsilon + mu, 0.0), o, o, c64::new(epsilon - mu, 0.0))
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.0[row][col]
    }

    pub fn scale(&self, s: c64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn det(&self) -> c64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [c64; 2]) -> [c64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for SpinorMatrix {
    type Output = SpinorMatrix;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for SpinorMatrix {
    type Output = SpinorMatrix;
    fn sub(self, o: Self) -> Self {
        self + o.scale(c64::new(-1.0, 0.0))
    }
}

impl Mul for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// Interaction strengths and Dirac mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub epsilon: f64,
    pub mu: f64,
    pub mass: f64,
}

impl Coupling {
    pub fn new(epsilon: f64, mu: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        if !epsilon.is_finite() || !mu.is_finite() {
            return Err(Error::Domain("coupling strengths must be finite".into()));
        }
        Ok(Coupling { epsilon, mu, mass })
    }

    /// Coupling with unit mass.
    pub fn unit_mass(epsilon: f64, mu: f64) -> Self {
        Coupling { epsilon, mu, mass: 1.0 }
    }

    /// ε² − μ².
    pub fn delta(&self) -> f64 {
        self.epsilon * self.epsilon - self.mu * self.mu
    }

    pub fn is_critical(&self) -> bool {
        self.epsilon.abs() == self.mu.abs()
    }

    /// The unitarily equivalent coupling (−4ε/(ε²−μ²), −4μ/(ε²−μ²)).
    pub fn partner(&self) -> Result<Self> {
        if self.is_critical() {
            return Err(Error::CriticalCoupling(self.epsilon.abs()));
        }
        let d = self.delta();
        Ok(Coupling { epsilon: -4.0 * self.epsilon / d, mu: -4.0 * self.mu / d, mass: self.mass })
    }

    /// κ = √(m² − z²) for z in the gap.
    pub fn kappa(&self, z: f64) -> Result<f64> {
        if !(z.abs() < self.mass) {
            return Err(Error::SpectralParameter { z, mass: self.mass });
        }
        Ok(((self.mass - z) * (self.mass + z)).sqrt())
    }
}

/// φ_z(x) = (1/2π)K₀(κ|x|)(mσ₃ + zσ₀) + i(κ/2π|x|)K₁(κ|x|)(σ·x).
pub fn phi_z(x: Vec2, z: f64, coupling: &Coupling) -> Result<SpinorMatrix> {
    let kappa = coupling.kappa(z)?;
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::SingularPoint);
    }
    let (k0, k1) = k0k1(kappa * r);
    let m = coupling.mass;
    let a = k0 / (2.0 * PI);
    let b = I * (kappa * k1 / (2.0 * PI * r));
    Ok(SpinorMatrix::new(
        c64::new(a * (z + m), 0.0),
        b * c64::new(x.x, -x.y),
        b * c64::new(x.x, x.y),
        c64::new(a * (z - m), 0.0),
    ))
}

/// φ_m(x) = (i/2π)[[0, 1/(x₁+ix₂)], [1/(x₁−ix₂), 0]].
pub fn phi_m(x: Vec2) -> Result<SpinorMatrix> {
    if x.norm() == 0.0 {
        return Err(Error::SingularPoint);
    }
    let w = c64::new(x.x, x.y);
    let f = I / (2.0 * PI);
    let o = c64::new(0.0, 0.0);
    Ok(SpinorMatrix::new(o, f / w, f / w.conj(), o))
}

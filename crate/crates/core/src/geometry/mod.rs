//! Closed piecewise-smooth curves, their corners, and quadrature grids.

mod curve;
mod grid;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

pub use curve::{build_curve, interior_angles, sharpest_angle, Corner, Curve, CurveSpec, EdgeShape};
pub use grid::{discretize, GridLayout, Panel, QuadratureGrid, DEFAULT_GRADING};

/// A point or vector in ℝ².
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(phi: f64) -> Self {
        Vec2::new(phi.cos(), phi.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Vec2 {
        self * (1.0 / self.norm())
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, phi: f64) -> Vec2 {
        let (s, c) = phi.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn to_complex(self) -> c64 {
        c64::new(self.x, self.y)
    }

    pub fn from_complex(z: c64) -> Self {
        Vec2::new(z.re, z.im)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

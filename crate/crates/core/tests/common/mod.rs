//! Shared fixtures for the integration tests.

use std::f64::consts::PI;

use dirac_shell_core::classify::{classify, golden_row, CurveClass, GOLDEN_HEADER};
use dirac_shell_core::{build_curve, Coupling, CurveSpec};

pub fn golden_rows() -> Vec<(&'static str, CurveClass, f64, f64)> {
    let from = |spec: CurveSpec| CurveClass::from_curve(&build_curve(&spec).unwrap());
    let square = from(CurveSpec::square(1.0));
    let l_shape = from(CurveSpec::l_shape(1.0));
    let sharp = from(CurveSpec::isosceles_triangle(0.1 * PI));
    vec![
        ("Lipschitz", CurveClass::Lipschitz, 1.0, 1.0),
        ("Lipschitz", CurveClass::Lipschitz, 1.0, 2.0),
        ("Lipschitz", CurveClass::Lipschitz, 2.0, 0.0),
        ("C1", from(CurveSpec::ellipse(2.0, 1.0)), 1.0, 0.0),
        ("C1", CurveClass::C1Smooth, 2.0, 0.0),
        ("square", square.clone(), 3.0, 0.0),
        ("square", square.clone(), 2.0, 0.0),
        ("square", square, 1.0, 0.0),
        ("L-shape", l_shape, 1.9, 0.0),
        ("sharp-triangle", sharp.clone(), 1.5, 0.0),
        ("sharp-triangle", sharp.clone(), 1.8, 0.0),
        ("sharp-triangle", sharp, 2.5, 0.0),
    ]
}

/// The classification table as CSV text.
pub fn golden_table() -> String {
    let mut text = String::from(GOLDEN_HEADER);
    text.push('\n');
    for (label, class, e, m) in golden_rows() {
        let c = Coupling::unit_mass(e, m);
        text.push_str(&golden_row(label, &c, &classify(&class, &c).unwrap()));
        text.push('\n');
    }
    text
}

pub const GOLDEN: &str = include_str!("../data/classification_golden.csv");

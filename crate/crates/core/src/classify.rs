//! Self-adjointness verdicts for (curve class, ε, μ).
//!
//! The decision order is fixed: |ε| ≤ |μ| on any curve, then ε² − μ² ≠ 4 on C¹
//! curves, then the two corner thresholds 1/m(ω) and 16 m(ω) on polygons.
//! `Unknown` only means that no criterion applies.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corner_symbol::m_of;
use crate::error::{Error, Result};
use crate::geometry::{interior_angles, sharpest_angle, Curve};
use crate::kernels::Coupling;

/// Distance to a threshold below which a verdict is flagged as borderline.
pub const BORDERLINE: f64 = 1e-12;
const M_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "angles")]
pub enum CurveClass {
    Lipschitz,
    C1Smooth,
    /// Interior angles θ_j ∈ (0, 2π) \ {π}.
    Polygon(Vec<f64>),
}

impl CurveClass {
    pub fn from_curve(curve: &Curve) -> CurveClass {
        if curve.corners().is_empty() {
            CurveClass::C1Smooth
        } else {
            CurveClass::Polygon(interior_angles(curve))
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CurveClass::Lipschitz => "Lipschitz",
            CurveClass::C1Smooth => "C1",
            CurveClass::Polygon(_) => "Polygon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SelfAdjoint,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    #[serde(rename = "Thm3.1")]
    Thm3_1,
    #[serde(rename = "Cor4.4")]
    Cor4_4,
    #[serde(rename = "Thm4.5")]
    Thm4_5,
    #[serde(rename = "Thm5.4-lower")]
    Thm5_4Lower,
    #[serde(rename = "Thm5.4-upper")]
    Thm5_4Upper,
    #[serde(rename = "Cor5.5a")]
    Cor5_5a,
    #[serde(rename = "Cor5.5b")]
    Cor5_5b,
    #[serde(rename = "Cor5.5c")]
    Cor5_5c,
    #[serde(rename = "Rmk1.2-reduction")]
    Rmk1_2Reduction,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::Thm3_1 => "Thm3.1",
            Certificate::Cor4_4 => "Cor4.4",
            Certificate::Thm4_5 => "Thm4.5",
            Certificate::Thm5_4Lower => "Thm5.4-lower",
            Certificate::Thm5_4Upper => "Thm5.4-upper",
            Certificate::Cor5_5a => "Cor5.5a",
            Certificate::Cor5_5b => "Cor5.5b",
            Certificate::Cor5_5c => "Cor5.5c",
            Certificate::Rmk1_2Reduction => "Rmk1.2-reduction",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    /// ε² − μ².
    pub delta: f64,
    pub omega: Option<f64>,
    pub m_omega: Option<f64>,
    /// 1/m(ω).
    pub lower_threshold: Option<f64>,
    /// 16 m(ω).
    pub upper_threshold: Option<f64>,
    /// Whether Λ_z is Fredholm, where that is decided.
    pub fredholm: Option<bool>,
    /// ε² − μ² lies within 1e−12 of a threshold.
    pub borderline: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    /// Parts (a), (b), (c) of the polygon corollary that hold independently.
    pub corollary_flags: Vec<Certificate>,
    pub evidence: Evidence,
    pub notes: Vec<String>,
}

/// ε² − μ² as an unevaluated sum hi + lo.
fn delta_dd(c: &Coupling) -> (f64, f64) {
    let e2 = c.epsilon * c.epsilon;
    let e2_err = c.epsilon.mul_add(c.epsilon, -e2);
    let m2 = c.mu * c.mu;
    let m2_err = c.mu.mul_add(c.mu, -m2);
    let s = e2 - m2;
    // two-sum of e2 and −m2
    let bb = s - e2;
    let err = (e2 - (s - bb)) + (-m2 - bb);
    (s, err + e2_err - m2_err)
}

/// Sign of (hi + lo) − t, evaluated without forming hi + lo first.
fn compare(d: (f64, f64), t: f64) -> f64 {
    (d.0 - t) + d.1
}

fn validate(class: &CurveClass) -> Result<()> {
    if let CurveClass::Polygon(angles) = class {
        for &t in angles {
            if !(t > 0.0 && t < 2.0 * PI) || (t - PI).abs() <= 1e-9 {
                return Err(Error::Domain(format!("polygon angle {t} is outside (0, 2π) \\ {{π}}")));
            }
        }
    }
    Ok(())
}

pub fn classify(class: &CurveClass, coupling: &Coupling) -> Result<ClassificationResult> {
    validate(class)?;
    let mut result = classify_direct(class, coupling)?;
    if result.verdict == Verdict::Unknown && !coupling.is_critical() && coupling.delta() != 0.0 {
        let partner = coupling.partner()?;
        let twin = classify_direct(class, &partner)?;
        if twin.verdict == Verdict::SelfAdjoint {
            result.verdict = Verdict::SelfAdjoint;
            result.certificate = Some(Certificate::Rmk1_2Reduction);
            result.notes.push(format!(
                "unitarily equivalent to (ε, μ) = ({}, {}), certified by {}",
                partner.epsilon,
                partner.mu,
                twin.certificate.map(Certificate::name).unwrap_or("-")
            ));
        }
    }
    Ok(result)
}

fn classify_direct(class: &CurveClass, coupling: &Coupling) -> Result<ClassificationResult> {
    let mut notes = Vec::new();
    let class = match class {
        CurveClass::Polygon(a) if a.is_empty() => {
            notes.push("polygon without corners treated as a C1 curve".to_string());
            &CurveClass::C1Smooth
        }
        c => c,
    };
    let d = delta_dd(coupling);
    let delta = d.0 + d.1;
    let mut ev = Evidence {
        delta,
        omega: None,
        m_omega: None,
        lower_threshold: None,
        upper_threshold: None,
        fredholm: None,
        borderline: false,
    };
    let mut flags = Vec::new();
    if let CurveClass::Polygon(angles) = class {
        let omega = sharpest_angle(angles)?;
        let m = m_of(omega, M_TOL)?;
        let (lo, hi) = (1.0 / m, 16.0 * m);
        ev.omega = Some(omega);
        ev.m_omega = Some(m);
        ev.lower_threshold = Some(lo);
        ev.upper_threshold = Some(hi);
        ev.borderline = compare(d, lo).abs() < BORDERLINE || compare(d, hi).abs() < BORDERLINE;
        if !coupling.is_critical() {
            ev.fredholm = Some(compare(d, lo) < 0.0);
        }
        if compare(d, 2.0) < 0.0 {
            flags.push(Certificate::Cor5_5a);
        }
        if compare(d, 8.0) > 0.0 {
            flags.push(Certificate::Cor5_5b);
        }
        let right_angles = angles.iter().all(|&t| (PI / 2.0..=1.5 * PI).contains(&t));
        if compare(d, 4.0) != 0.0 && right_angles {
            flags.push(Certificate::Cor5_5c);
        }
    }
    if let CurveClass::C1Smooth = class {
        ev.borderline = compare(d, 4.0).abs() < BORDERLINE;
        if !coupling.is_critical() {
            ev.fredholm = Some(compare(d, 4.0) != 0.0);
        }
    }

    let done = |cert: Option<Certificate>, ev: Evidence, flags: Vec<Certificate>, notes: Vec<String>| {
        Ok(ClassificationResult {
            verdict: if cert.is_some() { Verdict::SelfAdjoint } else { Verdict::Unknown },
            certificate: cert,
            corollary_flags: flags,
            evidence: ev,
            notes,
        })
    };

    if coupling.is_critical() {
        if coupling.epsilon == 0.0 {
            notes.push("ε = μ = 0: free operator, B = A".to_string());
        }
        return done(Some(Certificate::Thm3_1), ev, flags, notes);
    }
    if coupling.epsilon.abs() < coupling.mu.abs() {
        return done(Some(Certificate::Cor4_4), ev, flags, notes);
    }
    match class {
        CurveClass::Lipschitz => done(None, ev, flags, notes),
        CurveClass::C1Smooth => {
            let cert = (compare(d, 4.0) != 0.0).then_some(Certificate::Thm4_5);
            done(cert, ev, flags, notes)
        }
        CurveClass::Polygon(_) => {
            let (lo, hi) = (ev.lower_threshold.unwrap(), ev.upper_threshold.unwrap());
            let cert = if compare(d, lo) < 0.0 {
                Some(Certificate::Thm5_4Lower)
            } else if compare(d, hi) > 0.0 {
                notes.push(format!(
                    "upper branch: the partner coupling has ε² − μ² = {} below 1/m(ω); Λ_z is not Fredholm",
                    16.0 / delta
                ));
                Some(Certificate::Thm5_4Upper)
            } else {
                None
            };
            done(cert, ev, flags, notes)
        }
    }
}

/// Boundary values of ε² − μ² where the certified region changes.
pub fn critical_set(class: &CurveClass) -> Result<Vec<f64>> {
    validate(class)?;
    Ok(match class {
        CurveClass::Polygon(a) if !a.is_empty() => {
            let m = m_of(sharpest_angle(a)?, M_TOL)?;
            vec![1.0 / m, 16.0 * m]
        }
        CurveClass::Polygon(_) | CurveClass::C1Smooth => vec![4.0],
        CurveClass::Lipschitz => vec![0.0],
    })
}

fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Header of the golden classification table.
pub const GOLDEN_HEADER: &str = "curve,epsilon,mu,verdict,certificate,corollary";

/// One line of the golden classification table.
pub fn golden_row(label: &str, coupling: &Coupling, result: &ClassificationResult) -> String {
    let verdict = match result.verdict {
        Verdict::SelfAdjoint => "SelfAdjoint",
        Verdict::Unknown => "Unknown",
    };
    let cert = result.certificate.map(Certificate::name).unwrap_or("-");
    let flags: String = result
        .corollary_flags
        .iter()
        .map(|c| match c {
            Certificate::Cor5_5a => 'a',
            Certificate::Cor5_5b => 'b',
            _ => 'c',
        })
        .collect();
    format!(
        "{label},{},{},{verdict},{cert},{}",
        format_number(coupling.epsilon),
        format_number(coupling.mu),
        if flags.is_empty() { "-".to_string() } else { flags }
    )
}

//! Run configuration: a TOML file of flat sections, overridable from flags.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dirac_shell_core::classify::CurveClass;
use dirac_shell_core::geometry::EdgeShape;
use dirac_shell_core::spectral::{Route, VerificationTolerances, DEFAULT_SAMPLES, DEFAULT_TOL};
use dirac_shell_core::{build_curve, Coupling, CurveSpec, Vec2};
use serde::Deserialize;

use crate::CliError;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: Option<CurveSection>,
    pub coupling: Option<CouplingSection>,
    pub discretization: Option<Discretization>,
    pub mtheta: Option<MthetaSection>,
    pub symbol: Option<SymbolSection>,
    pub eigs: Option<EigsSection>,
    pub verify: Option<VerifySection>,
    pub sweep: Option<SweepSection>,
    pub output: Option<OutputSection>,
}

/// Curve presets by name. Angles given as `*_over_pi` are in units of π.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSection {
    Circle {
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Square {
        #[serde(default = "one")]
        side: f64,
    },
    LShape {
        #[serde(default = "one")]
        arm: f64,
    },
    RegularPolygon {
        sides: usize,
        #[serde(default = "one")]
        circumradius: f64,
    },
    IsoscelesTriangle {
        apex_over_pi: f64,
    },
    RoundedSquare {
        side: f64,
        radius: f64,
    },
    Polygon {
        name: Option<String>,
        vertices: Vec<[f64; 2]>,
    },
    Custom {
        name: Option<String>,
        edges: Vec<EdgeSection>,
    },
    /// No geometry: the generic Lipschitz class (classify and sweep only).
    Lipschitz {},
    /// No geometry: the generic C¹ class (classify and sweep only).
    C1 {},
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EdgeSection {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        end: f64,
    },
    Polynomial {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Trigonometric {
        center: [f64; 2],
        #[serde(default)]
        cos_x: Vec<f64>,
        #[serde(default)]
        sin_x: Vec<f64>,
        #[serde(default)]
        cos_y: Vec<f64>,
        #[serde(default)]
        sin_y: Vec<f64>,
        start: f64,
        end: f64,
    },
}

fn v2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

impl EdgeSection {
    fn shape(&self) -> EdgeShape {
        match self.clone() {
            EdgeSection::Line { from, to } => EdgeShape::Line { from: v2(from), to: v2(to) },
            EdgeSection::Arc { center, radius, start, end } => EdgeShape::Arc { center: v2(center), radius, start, end },
            EdgeSection::Polynomial { x, y } => EdgeShape::Polynomial { x, y },
            EdgeSection::Trigonometric { center, cos_x, sin_x, cos_y, sin_y, start, end } => {
                EdgeShape::Trigonometric { center: v2(center), cos_x, sin_x, cos_y, sin_y, start, end }
            }
        }
    }
}

impl CurveSection {
    /// Parses the `--curve` flag: `name` or `name(p1, p2, ...)` with positional parameters.
    pub fn parse_flag(s: &str) -> Result<CurveSection, CliError> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            Some(_) => return Err(CliError::Config(format!("malformed curve `{s}`"))),
            None => (s, ""),
        };
        let p: Vec<f64> = args
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(|a| a.parse::<f64>().map_err(|_| CliError::Config(format!("bad curve parameter `{a}`"))))
            .collect::<Result<_, _>>()?;
        let arity = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(CliError::Config(format!("curve `{name}` takes {n} parameter(s), got {}", p.len())))
            }
        };
        let or_one = |p: &[f64]| -> Result<f64, CliError> {
            match p {
                [] => Ok(1.0),
                [x] => Ok(*x),
                _ => Err(CliError::Config(format!("curve `{name}` takes at most one parameter"))),
            }
        };
        Ok(match name.trim() {
            "circle" => CurveSection::Circle { radius: or_one(&p)? },
            "square" => CurveSection::Square { side: or_one(&p)? },
            "l_shape" => CurveSection::LShape { arm: or_one(&p)? },
            "ellipse" => {
                arity(2)?;
                CurveSection::Ellipse { a: p[0], b: p[1] }
            }
            "regular_polygon" => {
                arity(2)?;
                if p[0].fract() != 0.0 || p[0] < 3.0 {
                    return Err(CliError::Config(format!("regular_polygon needs an integer number of sides ≥ 3, got {}", p[0])));
                }
                CurveSection::RegularPolygon { sides: p[0] as usize, circumradius: p[1] }
            }
            "isosceles_triangle" => {
                arity(1)?;
                CurveSection::IsoscelesTriangle { apex_over_pi: p[0] }
            }
            "rounded_square" => {
                arity(2)?;
                CurveSection::RoundedSquare { side: p[0], radius: p[1] }
            }
            "lipschitz" => {
                arity(0)?;
                CurveSection::Lipschitz {}
            }
            "c1" => {
                arity(0)?;
                CurveSection::C1 {}
            }
            other => return Err(CliError::Config(format!("unknown curve preset `{other}`"))),
        })
    }

    /// The geometric description, or `None` for the class-only presets.
    pub fn spec(&self) -> Option<CurveSpec> {
        Some(match self {
            CurveSection::Circle { radius } => CurveSpec::circle(*radius),
            CurveSection::Ellipse { a, b } => CurveSpec::ellipse(*a, *b),
            CurveSection::Square { side } => CurveSpec::square(*side),
            CurveSection::LShape { arm } => CurveSpec::l_shape(*arm),
            CurveSection::RegularPolygon { sides, circumradius } => CurveSpec::regular_polygon(*sides, *circumradius),
            CurveSection::IsoscelesTriangle { apex_over_pi } => CurveSpec::isosceles_triangle(apex_over_pi * PI),
            CurveSection::RoundedSquare { side, radius } => CurveSpec::rounded_square(*side, *radius),
            CurveSection::Polygon { name, vertices } => {
                let v: Vec<Vec2> = vertices.iter().copied().map(v2).collect();
                CurveSpec::polygon(name.clone().unwrap_or_else(|| "polygon".into()), &v)
            }
            CurveSection::Custom { name, edges } => {
                CurveSpec::new(name.clone().unwrap_or_else(|| "custom".into()), edges.iter().map(EdgeSection::shape).collect())
            }
            CurveSection::Lipschitz {} | CurveSection::C1 {} => return None,
        })
    }

    pub fn label(&self) -> String {
        match self {
            CurveSection::Lipschitz {} => "Lipschitz".into(),
            CurveSection::C1 {} => "C1".into(),
            _ => self.spec().map(|s| s.name).unwrap_or_default(),
        }
    }

    pub fn class(&self) -> Result<CurveClass, CliError> {
        Ok(match self {
            CurveSection::Lipschitz {} => CurveClass::Lipschitz,
            CurveSection::C1 {} => CurveClass::C1Smooth,
            _ => CurveClass::from_curve(&build_curve(&self.spec().expect("geometric preset"))?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    pub epsilon: f64,
    pub mu: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Discretization {
    pub nodes_per_edge: usize,
    pub grading_exponent: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization { nodes_per_edge: 128, grading_exponent: dirac_shell_core::geometry::DEFAULT_GRADING }
    }
}

/// θ grid in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MthetaSection {
    pub theta_min: f64,
    pub theta_max: f64,
    pub step: f64,
    pub tol: f64,
}

impl Default for MthetaSection {
    fn default() -> Self {
        MthetaSection { theta_min: 0.05, theta_max: 0.95, step: 0.05, tol: 1e-13 }
    }
}

/// (θ, η) grid; θ in units of π, θ = π is skipped.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymbolSection {
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_count: usize,
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_count: usize,
    pub truncation: f64,
    pub tol: f64,
}

impl Default for SymbolSection {
    fn default() -> Self {
        SymbolSection {
            theta_min: 0.3,
            theta_max: 1.7,
            theta_count: 21,
            eta_min: -5.0,
            eta_max: 5.0,
            eta_count: 21,
            truncation: dirac_shell_core::corner_symbol::DEFAULT_TRUNCATION,
            tol: dirac_shell_core::corner_symbol::DEFAULT_SYMBOL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigsSection {
    /// Defaults to ±0.99 m.
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub samples: usize,
    pub tol: f64,
    pub route: Option<Route>,
    pub check_pde: bool,
    /// Also write the branch trajectories to `branches.csv`.
    pub branches: bool,
}

impl Default for EigsSection {
    fn default() -> Self {
        EigsSection {
            z_min: None,
            z_max: None,
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            route: None,
            check_pde: true,
            branches: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub z: f64,
    pub cc2: Option<f64>,
    pub jump: Option<f64>,
    pub trace: Option<f64>,
    pub jump_offset: Option<f64>,
    pub cauchy_square: Option<f64>,
    pub resolvent: Option<f64>,
}

impl VerifySection {
    pub fn tolerances(&self) -> VerificationTolerances {
        let d = VerificationTolerances::default();
        VerificationTolerances {
            cc2: self.cc2.unwrap_or(d.cc2),
            jump: self.jump.unwrap_or(d.jump),
            trace: self.trace.unwrap_or(d.trace),
            jump_offset: self.jump_offset.unwrap_or(d.jump_offset),
            cauchy_square: self.cauchy_square.unwrap_or(d.cauchy_square),
            resolvent: self.resolvent.unwrap_or(d.resolvent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_count: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_count: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { epsilon_min: -4.0, epsilon_max: 4.0, epsilon_count: 41, mu_min: -4.0, mu_max: 4.0, mu_count: 41 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }

    pub fn curve(&self) -> Result<&CurveSection, CliError> {
        self.curve.as_ref().ok_or_else(|| missing("curve"))
    }

    pub fn coupling(&self) -> Result<Coupling, CliError> {
        let c = self.coupling.ok_or_else(|| missing("coupling"))?;
        Ok(Coupling::new(c.epsilon, c.mu, c.mass)?)
    }
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing [{section}] section (or the matching command-line flags)"))
}

/// `count` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_presets_and_rejects_unknown_keys() {
        let c: RunConfig = toml::from_str("[curve]\npreset = \"square\"\nside = 2.0\n[coupling]\nepsilon = 3\nmu = 0\n").unwrap();
        assert_eq!(c.curve, Some(CurveSection::Square { side: 2.0 }));
        assert_eq!(c.coupling().unwrap().mass, 1.0);
        assert!(toml::from_str::<RunConfig>("[curve]\npreset = \"square\"\nradius = 2.0\n").is_err());
        assert!(toml::from_str::<RunConfig>("[coupling]\nepsilon = 1\nmu = 0\nnu = 3\n").is_err());
        assert!(toml::from_str::<RunConfig>("[nonsense]\n").is_err());
        assert!(toml::from_str::<RunConfig>("[eigs]\nsample = 3\n").is_err());
    }

    #[test]
    fn custom_edges() {
        let text = "[curve]\npreset = \"custom\"\nname = \"lens\"\n\
            [[curve.edges]]\nkind = \"arc\"\ncenter = [0.0, -0.5]\nradius = 1.0\nstart = 0.5235987755982989\nend = 2.6179938779914944\n\
            [[curve.edges]]\nkind = \"arc\"\ncenter = [0.0, 0.5]\nradius = 1.0\nstart = 3.665191429188092\nend = 5.759586531581287\n";
        let c: RunConfig = toml::from_str(text).unwrap();
        let curve = build_curve(&c.curve().unwrap().spec().unwrap()).unwrap();
        assert_eq!(curve.corners().len(), 2);
    }

    #[test]
    fn curve_flag() {
        assert_eq!(CurveSection::parse_flag("square(1)").unwrap(), CurveSection::Square { side: 1.0 });
        assert_eq!(CurveSection::parse_flag("circle").unwrap(), CurveSection::Circle { radius: 1.0 });
        assert_eq!(
            CurveSection::parse_flag("regular_polygon(5, 2)").unwrap(),
            CurveSection::RegularPolygon { sides: 5, circumradius: 2.0 }
        );
        assert!(CurveSection::parse_flag("ellipse(1)").is_err());
        assert!(CurveSection::parse_flag("blob").is_err());
        assert!(CurveSection::parse_flag("square(1").is_err());
    }
}

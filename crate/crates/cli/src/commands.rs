use std::f64::consts::PI;

use dirac_shell_core::classify::{classify as classify_curve, golden_row, ClassificationResult, CurveClass, GOLDEN_HEADER};
use dirac_shell_core::corner_symbol::{delta_closed, delta_direct, m_of};
use dirac_shell_core::spectral::{default_window, find_eigenvalues_with, verify_identities, RootOptions};
use dirac_shell_core::{build_curve, discretize, Coupling, QuadratureGrid};
use serde::Serialize;

use crate::config::{linspace, Format, RunConfig};
use crate::output::{to_json, Artifact, Cell, Table};
use crate::CliError;

/// Files to write, plus a failure to report once they are on disk.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(artifacts: Vec<Artifact>) -> Self {
        Outcome { artifacts, failure: None }
    }
}

fn artifact(stem: &str, format: Format, contents: String) -> Artifact {
    Artifact { file: format!("{stem}.{}", format.extension()), contents }
}

fn grid(cfg: &RunConfig) -> Result<QuadratureGrid, CliError> {
    let curve = cfg.curve()?;
    let spec = curve
        .spec()
        .ok_or_else(|| CliError::Config(format!("curve preset `{}` has no geometry; this command needs one", curve.label())))?;
    let d = cfg.discretization.unwrap_or_default();
    Ok(discretize(&build_curve(&spec)?, d.nodes_per_edge, d.grading_exponent)?)
}

fn positive(what: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what} must be positive, got {x}")))
    }
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    curve: String,
    class: &'a CurveClass,
    coupling: Coupling,
    #[serde(flatten)]
    result: &'a ClassificationResult,
}

pub fn classify(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let curve = cfg.curve()?;
    let coupling = cfg.coupling()?;
    let class = curve.class()?;
    let result = classify_curve(&class, &coupling)?;
    let label = curve.label();
    let text = match format {
        Format::Json => to_json(&ClassifyOutput { curve: label, class: &class, coupling, result: &result })?,
        Format::Csv => format!("{GOLDEN_HEADER}\n{}\n", golden_row(&label, &coupling, &result)),
    };
    Ok(Outcome::ok(vec![artifact("classify", format, text)]))
}

pub fn mtheta(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let s = cfg.mtheta.unwrap_or_default();
    positive("mtheta.step", s.step)?;
    if !(s.theta_min > 0.0 && s.theta_max <= 1.0 && s.theta_min <= s.theta_max) {
        return Err(CliError::Config(format!("mtheta range [{}, {}]π must lie in (0, 1]π", s.theta_min, s.theta_max)));
    }
    let n = ((s.theta_max - s.theta_min) / s.step + 1e-9).floor() as usize + 1;
    let mut t = Table::new(&["theta", "theta_over_pi", "m"]);
    for k in 0..n {
        let u = s.theta_min + k as f64 * s.step;
        t.push(vec![(u * PI).into(), u.into(), m_of(u * PI, s.tol)?.into()]);
    }
    Ok(Outcome::ok(vec![artifact("mtheta", format, t.render(format)?)]))
}

pub fn symbol(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let s = cfg.symbol.unwrap_or_default();
    let coupling = cfg.coupling()?;
    let thetas: Vec<f64> = linspace(s.theta_min, s.theta_max, s.theta_count)
        .into_iter()
        .filter(|u| (u - 1.0).abs() > 1e-12)
        .map(|u| u * PI)
        .collect();
    let mut t = Table::new(&["theta", "eta", "delta_closed", "delta_direct_re", "delta_direct_im", "abs_diff"]);
    for &theta in &thetas {
        for eta in linspace(s.eta_min, s.eta_max, s.eta_count) {
            let closed = delta_closed(theta, eta, &coupling);
            let direct = delta_direct(theta, eta, &coupling, s.truncation, s.tol)?.delta;
            t.push(vec![
                theta.into(),
                eta.into(),
                closed.into(),
                direct.re.into(),
                direct.im.into(),
                (direct - closed).norm().into(),
            ]);
        }
    }
    Ok(Outcome::ok(vec![artifact("symbol", format, t.render(format)?)]))
}

pub fn eigs(cfg: &RunConfig, format: Format, strict: bool) -> Result<Outcome, CliError> {
    let coupling = cfg.coupling()?;
    let grid = grid(cfg)?;
    let s = cfg.eigs.unwrap_or_default();
    let (lo, hi) = default_window(&coupling);
    let opts = RootOptions {
        z_range: (s.z_min.unwrap_or(lo), s.z_max.unwrap_or(hi)),
        samples: s.samples,
        tol: s.tol,
        route: s.route,
        check_pde: s.check_pde,
    };
    let report = find_eigenvalues_with(&grid, &coupling, &opts)?;
    for note in &report.sweep.notes {
        eprintln!("note: {note}");
    }
    let text = match format {
        Format::Json => to_json(&report.pairs)?,
        Format::Csv => {
            let mut t = Table::new(&[
                "z0",
                "branch",
                "cluster",
                "residual",
                "smallest",
                "second_smallest",
                "ill_conditioned",
                "pde_residual",
                "spurious",
            ]);
            for p in &report.pairs {
                t.push(vec![
                    p.z0.into(),
                    p.branch.into(),
                    p.cluster.into(),
                    p.residual.into(),
                    p.condition.smallest.into(),
                    p.condition.second_smallest.into(),
                    p.condition.ill_conditioned.into(),
                    p.pde_residual.into(),
                    p.spurious.into(),
                ]);
            }
            t.to_csv()?
        }
    };
    let mut artifacts = vec![artifact("eigs", format, text)];
    if s.branches {
        let mut buf = Vec::new();
        report.sweep.write_csv(&mut buf)?;
        artifacts.push(Artifact { file: "branches.csv".into(), contents: String::from_utf8_lossy(&buf).into_owned() });
    }
    let flagged: Vec<String> = report
        .pairs
        .iter()
        .filter(|p| p.condition.ill_conditioned || p.spurious)
        .map(|p| format!("{:.12}", p.z0))
        .collect();
    let failure = (strict && !flagged.is_empty()).then(|| {
        CliError::Core(dirac_shell_core::Error::IllConditioned(format!(
            "roots at z = {} are ill-conditioned or fail the PDE check",
            flagged.join(", ")
        )))
    });
    Ok(Outcome { artifacts, failure })
}

pub fn verify(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let coupling = cfg.coupling()?;
    let grid = grid(cfg)?;
    let s = cfg.verify.unwrap_or_default();
    let report = verify_identities(&grid, s.z, &coupling, &s.tolerances());
    let text = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["name", "residual", "tolerance", "passed", "note"]);
            for c in &report.checks {
                let note = c.note.as_deref().map_or(Cell::Empty, Cell::from);
                t.push(vec![c.name.as_str().into(), c.residual.into(), c.tolerance.into(), c.passed.into(), note]);
            }
            t.to_csv()?
        }
    };
    Ok(Outcome::ok(vec![artifact("verify", format, text)]))
}

pub fn sweep(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let class = cfg.curve()?.class()?;
    let s = cfg.sweep.unwrap_or_default();
    let mass = cfg.coupling.map_or(1.0, |c| c.mass);
    let mut t = Table::new(&["epsilon", "mu", "delta", "verdict", "certificate", "borderline"]);
    for e in linspace(s.epsilon_min, s.epsilon_max, s.epsilon_count) {
        for m in linspace(s.mu_min, s.mu_max, s.mu_count) {
            let c = Coupling::new(e, m, mass)?;
            let r = classify_curve(&class, &c)?;
            let verdict = serde_json::to_value(r.verdict).map_err(|e| CliError::Io(e.to_string()))?;
            t.push(vec![
                e.into(),
                m.into(),
                c.delta().into(),
                verdict.as_str().unwrap_or_default().into(),
                r.certificate.map_or("-", |c| c.name()).into(),
                r.evidence.borderline.into(),
            ]);
        }
    }
    Ok(Outcome::ok(vec![artifact("sweep", format, t.render(format)?)]))
}

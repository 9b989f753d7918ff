use std::sync::OnceLock;

use super::{Curve, Vec2};
use crate::boundary_ops::SingularWeights;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Default exponent q of the corner grading t ↦ t^q.
pub const DEFAULT_GRADING: f64 = 3.0;

/// A Gauss–Legendre panel on one edge, covering parameters [t0, t1].
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub edge: usize,
    pub t0: f64,
    pub t1: f64,
    /// Index of the first node of the panel.
    pub start: usize,
    pub order: usize,
}

impl Panel {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.order
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridLayout {
    /// Equispaced nodes t_k = k/n on a single smooth closed edge.
    Periodic { n: usize },
    /// Composite Gauss–Legendre panels; `reference` holds the nodes on [−1, 1].
    Panels { panels: Vec<Panel>, order: usize, reference: Vec<f64> },
}

/// Nodes, weights and frames on the curve.
#[derive(Debug)]
pub struct QuadratureGrid {
    curve: Curve,
    layout: GridLayout,
    pub nodes: Vec<Vec2>,
    /// Arclength weights.
    pub weights: Vec<f64>,
    pub tangents: Vec<Vec2>,
    /// Unit normals pointing out of the bounded domain.
    pub normals: Vec<Vec2>,
    /// Edge parameter of each node.
    pub params: Vec<f64>,
    pub edge_index: Vec<usize>,
    /// Panel of each node (0 on periodic grids).
    pub panel_index: Vec<usize>,
    pub corner_distance: Vec<f64>,
    /// |dx/dt| at each node.
    pub speed: Vec<f64>,
    pub(crate) singular: OnceLock<SingularWeights>,
}

impl Clone for QuadratureGrid {
    fn clone(&self) -> Self {
        QuadratureGrid {
            curve: self.curve.clone(),
            layout: self.layout.clone(),
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            tangents: self.tangents.clone(),
            normals: self.normals.clone(),
            params: self.params.clone(),
            edge_index: self.edge_index.clone(),
            panel_index: self.panel_index.clone(),
            corner_distance: self.corner_distance.clone(),
            speed: self.speed.clone(),
            singular: OnceLock::new(),
        }
    }
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn layout(&self) -> &GridLayout {
        &self.layout
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.layout, GridLayout::Periodic { .. })
    }

    pub fn panels(&self) -> &[Panel] {
        match &self.layout {
            GridLayout::Panels { panels, .. } => panels,
            GridLayout::Periodic { .. } => &[],
        }
    }

    /// Local node spacing in arclength at node i.
    pub fn mesh_width(&self, i: usize) -> f64 {
        match &self.layout {
            GridLayout::Periodic { .. } => self.weights[i],
            GridLayout::Panels { panels, order, .. } => {
                let p = &panels[self.panel_index[i]];
                self.weights[p.range()].iter().sum::<f64>() / *order as f64
            }
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn grading_map(u: f64, q: f64, corner_start: bool, corner_end: bool) -> f64 {
    match (corner_start, corner_end) {
        (true, true) => {
            if u <= 0.5 {
                0.5 * (2.0 * u).powf(q)
            } else {
                1.0 - 0.5 * (2.0 * (1.0 - u)).powf(q)
            }
        }
        (true, false) => u.powf(q),
        (false, true) => 1.0 - (1.0 - u).powf(q),
        (false, false) => u,
    }
}

fn panel_order(nodes_per_edge: usize) -> Result<usize> {
    if nodes_per_edge >= 64 && nodes_per_edge % 16 == 0 {
        Ok(16)
    } else if nodes_per_edge % 8 == 0 {
        Ok(8)
    } else {
        Err(Error::InvalidRefinement(format!(
            "nodes_per_edge must be a multiple of 8 on piecewise curves, got {nodes_per_edge}"
        )))
    }
}

/// Build the quadrature grid. Single smooth closed curves get the periodic
/// trapezoid rule with `nodes_per_edge` nodes; everything else gets graded
/// Gauss–Legendre panels.
pub fn discretize(curve: &Curve, nodes_per_edge: usize, grading_exponent: f64) -> Result<QuadratureGrid> {
    if nodes_per_edge < 8 {
        return Err(Error::InvalidRefinement(format!("nodes_per_edge must be at least 8, got {nodes_per_edge}")));
    }
    if !(grading_exponent >= 1.0) {
        return Err(Error::InvalidRefinement(format!("grading exponent must be >= 1, got {grading_exponent}")));
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut tangents = Vec::new();
    let mut params = Vec::new();
    let mut edge_index = Vec::new();
    let mut panel_index = Vec::new();
    let mut speed = Vec::new();
    let mut push = |e: usize, t: f64, w: f64, panel: usize| {
        let p = curve.point(e, t);
        let d = curve.derivative(e, t);
        let s = d.norm();
        nodes.push(p);
        weights.push(w * s);
        tangents.push(d * (1.0 / s));
        params.push(t);
        edge_index.push(e);
        panel_index.push(panel);
        speed.push(s);
    };

    let layout = if curve.is_periodic_smooth() {
        let n = nodes_per_edge;
        if n % 2 == 1 {
            return Err(Error::InvalidRefinement(format!(
                "the alternate-point rule needs an even node count, got {n}"
            )));
        }
        for k in 0..n {
            push(0, k as f64 / n as f64, 1.0 / n as f64, 0);
        }
        GridLayout::Periodic { n }
    } else {
        let order = panel_order(nodes_per_edge)?;
        let per_edge = nodes_per_edge / order;
        let (reference, gw) = gauss_legendre(order);
        let mut panels = Vec::new();
        for e in 0..curve.edges().len() {
            let cs = curve.corner_at_start(e).is_some();
            let ce = curve.corner_at_end(e).is_some();
            for k in 0..per_edge {
                let t0 = grading_map(k as f64 / per_edge as f64, grading_exponent, cs, ce);
                let t1 = grading_map((k + 1) as f64 / per_edge as f64, grading_exponent, cs, ce);
                let start = panels.len() * order;
                let h = 0.5 * (t1 - t0);
                for (x, w) in reference.iter().zip(&gw) {
                    push(e, t0 + h * (x + 1.0), h * w, panels.len());
                }
                panels.push(Panel { edge: e, t0, t1, start, order });
            }
        }
        GridLayout::Panels { panels, order, reference }
    };

    let normals = tangents.iter().map(|t| Vec2::new(t.y, -t.x)).collect();
    let corner_distance = nodes
        .iter()
        .map(|&x| curve.corners().iter().map(|c| (x - c.position).norm()).fold(f64::INFINITY, f64::min))
        .collect();

    Ok(QuadratureGrid {
        curve: curve.clone(),
        layout,
        nodes,
        weights,
        tangents,
        normals,
        params,
        edge_index,
        panel_index,
        corner_distance,
        speed,
        singular: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, CurveSpec};
    use std::f64::consts::TAU;

    #[test]
    fn circle_trapezoid() {
        let c = build_curve(&CurveSpec::circle(1.0)).unwrap();
        let g = discretize(&c, 64, DEFAULT_GRADING).unwrap();
        assert_eq!(g.len(), 64);
        for k in 0..64 {
            let phi = TAU * k as f64 / 64.0;
            assert!((g.nodes[k] - Vec2::from_angle(phi)).norm() < 1e-15);
            assert!((g.weights[k] - TAU / 64.0).abs() < 1e-15);
            // outward normal
            assert!((g.normals[k] - Vec2::from_angle(phi)).norm() < 1e-15);
        }
        assert!(matches!(discretize(&c, 63, 3.0), Err(Error::InvalidRefinement(_))));
        assert!(matches!(discretize(&c, 6, 3.0), Err(Error::InvalidRefinement(_))));
    }

    #[test]
    fn frame_convention() {
        for spec in [CurveSpec::ellipse(2.0, 1.0), CurveSpec::l_shape(1.0), CurveSpec::rounded_square(2.0, 0.3)] {
            let g = discretize(&build_curve(&spec).unwrap(), 32, 3.0).unwrap();
            for (t, n) in g.tangents.iter().zip(&g.normals) {
                assert_eq!(*t, Vec2::new(-n.y, n.x));
                assert!((t.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn square_grading() {
        let c = build_curve(&CurveSpec::square(1.0)).unwrap();
        let g = discretize(&c, 32, 3.0).unwrap();
        assert_eq!(g.len(), 128);
        assert!((g.total_weight() - 4.0).abs() < 1e-8);
        let panels = g.panels();
        assert_eq!(panels.len(), 16);
        // breakpoints g(k/4) = ½(2k/4)³ near the start corner
        assert!((panels[1].t0 - 0.5 * 0.5f64.powi(3)).abs() < 1e-15);
        assert!((panels[0].t1 - panels[0].t0) < (panels[1].t1 - panels[1].t0));
        assert!(g.corner_distance.iter().all(|&d| d > 0.0));
    }

    #[test]
    fn length_converges_under_refinement() {
        let specs = [
            CurveSpec::circle(1.0),
            CurveSpec::ellipse(1.5, 0.5),
            CurveSpec::square(1.0),
            CurveSpec::l_shape(1.0),
            CurveSpec::regular_polygon(5, 1.0),
            CurveSpec::rounded_square(2.0, 0.4),
        ];
        for spec in specs {
            let c = build_curve(&spec).unwrap();
            let mut last = f64::INFINITY;
            for npe in [16, 32, 64] {
                let n = if c.is_periodic_smooth() { 4 * npe } else { npe };
                let err = (discretize(&c, n, 3.0).unwrap().total_weight() - c.length()).abs();
                assert!(err <= last.max(1e-13), "{}: {err} after {last}", spec.name);
                last = err;
            }
            assert!(last < 1e-10, "{}: {last}", spec.name);
        }
    }
}

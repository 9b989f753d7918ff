use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as c64;

use super::Vec2;
use crate::error::{Error, Result};
use crate::quad;

/// Tolerance for deciding that a junction is smooth (θ = π) or a cusp.
const ANGLE_TOL: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-12;
const SAMPLES_PER_EDGE: usize = 64;
const ARC_TABLE_SIZE: usize = 32;

/// One smooth parametric arc, parameter t ∈ [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeShape {
    Line { from: Vec2, to: Vec2 },
    /// Circular arc; runs anticlockwise when `end > start`.
    Arc { center: Vec2, radius: f64, start: f64, end: f64 },
    /// x(t) = Σ x[k] t^k, y(t) = Σ y[k] t^k.
    Polynomial { x: Vec<f64>, y: Vec<f64> },
    /// With φ = start + (end − start)t:
    /// x = center.x + Σ_k cos_x[k] cos((k+1)φ) + sin_x[k] sin((k+1)φ), likewise y.
    Trigonometric {
        center: Vec2,
        cos_x: Vec<f64>,
        sin_x: Vec<f64>,
        cos_y: Vec<f64>,
        sin_y: Vec<f64>,
        start: f64,
        end: f64,
    },
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn horner_deriv(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &a)| acc * t + k as f64 * a)
}

fn harmonic_sum(cs: &[f64], ss: &[f64], phi: f64) -> (f64, f64) {
    let n = cs.len().max(ss.len());
    let (mut v, mut d) = (0.0, 0.0);
    for k in 0..n {
        let f = (k + 1) as f64;
        let (s, c) = (f * phi).sin_cos();
        let a = cs.get(k).copied().unwrap_or(0.0);
        let b = ss.get(k).copied().unwrap_or(0.0);
        v += a * c + b * s;
        d += f * (b * c - a * s);
    }
    (v, d)
}

impl EdgeShape {
    pub fn point(&self, t: f64) -> Vec2 {
        match self {
            EdgeShape::Line { from, to } => *from + (*to - *from) * t,
            EdgeShape::Arc { center, radius, start, end } => {
                *center + Vec2::from_angle(start + (end - start) * t) * *radius
            }
            EdgeShape::Polynomial { x, y } => Vec2::new(horner(x, t), horner(y, t)),
            EdgeShape::Trigonometric { center, cos_x, sin_x, cos_y, sin_y, start, end } => {
                let phi = start + (end - start) * t;
                *center + Vec2::new(harmonic_sum(cos_x, sin_x, phi).0, harmonic_sum(cos_y, sin_y, phi).0)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Vec2 {
        match self {
            EdgeShape::Line { from, to } => *to - *from,
            EdgeShape::Arc { radius, start, end, .. } => {
                Vec2::from_angle(start + (end - start) * t).perp() * (radius * (end - start))
            }
            EdgeShape::Polynomial { x, y } => Vec2::new(horner_deriv(x, t), horner_deriv(y, t)),
            EdgeShape::Trigonometric { cos_x, sin_x, cos_y, sin_y, start, end, .. } => {
                let phi = start + (end - start) * t;
                Vec2::new(harmonic_sum(cos_x, sin_x, phi).1, harmonic_sum(cos_y, sin_y, phi).1) * (end - start)
            }
        }
    }

    /// Image under p ↦ scale·R(rotation)·p + shift.
    pub fn transformed(&self, rotation: f64, scale: f64, shift: Vec2) -> EdgeShape {
        let map = |p: Vec2| p.rotate(rotation) * scale + shift;
        let (s, c) = rotation.sin_cos();
        let rot_pair = |a: &[f64], b: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let n = a.len().max(b.len());
            let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
            let xs = (0..n).map(|k| scale * (c * get(a, k) - s * get(b, k))).collect();
            let ys = (0..n).map(|k| scale * (s * get(a, k) + c * get(b, k))).collect();
            (xs, ys)
        };
        match self {
            EdgeShape::Line { from, to } => EdgeShape::Line { from: map(*from), to: map(*to) },
            EdgeShape::Arc { center, radius, start, end } => EdgeShape::Arc {
                center: map(*center),
                radius: radius * scale,
                start: start + rotation,
                end: end + rotation,
            },
            EdgeShape::Polynomial { x, y } => {
                let (mut px, mut py) = rot_pair(x, y);
                if px.is_empty() {
                    px.push(0.0);
                    py.push(0.0);
                }
                px[0] += shift.x;
                py[0] += shift.y;
                EdgeShape::Polynomial { x: px, y: py }
            }
            EdgeShape::Trigonometric { center, cos_x, sin_x, cos_y, sin_y, start, end } => {
                let (cx, cy) = rot_pair(cos_x, cos_y);
                let (sx, sy) = rot_pair(sin_x, sin_y);
                EdgeShape::Trigonometric {
                    center: map(*center),
                    cos_x: cx,
                    sin_x: sx,
                    cos_y: cy,
                    sin_y: sy,
                    start: *start,
                    end: *end,
                }
            }
        }
    }
}

/// Input description of a closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub edges: Vec<EdgeShape>,
    pub closed: bool,
}

impl CurveSpec {
    pub fn new(name: impl Into<String>, edges: Vec<EdgeShape>) -> Self {
        CurveSpec { name: name.into(), edges, closed: true }
    }

    pub fn circle(radius: f64) -> Self {
        Self::new(
            format!("circle({radius})"),
            vec![EdgeShape::Arc { center: Vec2::default(), radius, start: 0.0, end: TAU }],
        )
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(
            format!("ellipse({a}, {b})"),
            vec![EdgeShape::Trigonometric {
                center: Vec2::default(),
                cos_x: vec![a],
                sin_x: vec![0.0],
                cos_y: vec![0.0],
                sin_y: vec![b],
                start: 0.0,
                end: TAU,
            }],
        )
    }

    /// Straight-edged polygon through `vertices`, in order.
    pub fn polygon(name: impl Into<String>, vertices: &[Vec2]) -> Self {
        let n = vertices.len();
        let edges =
            (0..n).map(|k| EdgeShape::Line { from: vertices[k], to: vertices[(k + 1) % n] }).collect();
        Self::new(name, edges)
    }

    /// Regular k-gon with the given circumradius, centred at the origin, first vertex on the x-axis.
    pub fn regular_polygon(k: usize, circumradius: f64) -> Self {
        let v: Vec<Vec2> = (0..k).map(|j| Vec2::from_angle(TAU * j as f64 / k as f64) * circumradius).collect();
        Self::polygon(format!("regular_polygon({k}, {circumradius})"), &v)
    }

    /// Isosceles triangle with apex angle `apex` at the origin and legs of unit length.
    pub fn isosceles_triangle(apex: f64) -> Self {
        let v = [Vec2::default(), Vec2::from_angle(-0.5 * apex), Vec2::from_angle(0.5 * apex)];
        Self::polygon(format!("isosceles_triangle({apex})"), &v)
    }

    /// Axis-aligned square [−s/2, s/2]².
    pub fn square(side: f64) -> Self {
        let h = 0.5 * side;
        let v = [Vec2::new(-h, -h), Vec2::new(h, -h), Vec2::new(h, h), Vec2::new(-h, h)];
        Self::polygon(format!("square({side})"), &v)
    }

    /// L-shaped hexagon with vertices (0,0), (2a,0), (2a,a), (a,a), (a,2a), (0,2a).
    pub fn l_shape(arm: f64) -> Self {
        let a = arm;
        let v = [
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0 * a, 0.0),
            Vec2::new(2.0 * a, a),
            Vec2::new(a, a),
            Vec2::new(a, 2.0 * a),
            Vec2::new(0.0, 2.0 * a),
        ];
        Self::polygon(format!("l_shape({arm})"), &v)
    }

    /// Square [−s/2, s/2]² with corners replaced by quarter circles of radius `r`.
    pub fn rounded_square(side: f64, r: f64) -> Self {
        let h = 0.5 * side;
        let c = h - r;
        let mut edges = Vec::with_capacity(8);
        for k in 0..4 {
            let phi = PI / 2.0 * k as f64;
            let rot = |p: Vec2| p.rotate(phi);
            edges.push(EdgeShape::Line { from: rot(Vec2::new(-c, -h)), to: rot(Vec2::new(c, -h)) });
            edges.push(EdgeShape::Arc {
                center: rot(Vec2::new(c, -c)),
                radius: r,
                start: phi - PI / 2.0,
                end: phi,
            });
        }
        Self::new(format!("rounded_square({side}, {r})"), edges)
    }

    pub fn transformed(&self, rotation: f64, scale: f64, shift: Vec2) -> CurveSpec {
        CurveSpec {
            name: self.name.clone(),
            edges: self.edges.iter().map(|e| e.transformed(rotation, scale, shift)).collect(),
            closed: self.closed,
        }
    }

    /// Same curve traversed the other way.
    pub fn reversed(&self) -> CurveSpec {
        let edges = self.edges.iter().rev().map(reverse_shape).collect();
        CurveSpec { name: self.name.clone(), edges, closed: self.closed }
    }
}

fn reverse_shape(e: &EdgeShape) -> EdgeShape {
    match e {
        EdgeShape::Line { from, to } => EdgeShape::Line { from: *to, to: *from },
        EdgeShape::Arc { center, radius, start, end } => {
            EdgeShape::Arc { center: *center, radius: *radius, start: *end, end: *start }
        }
        EdgeShape::Polynomial { x, y } => {
            // p(1 − t): expand with binomial coefficients.
            let flip = |c: &[f64]| {
                let n = c.len();
                let mut out = vec![0.0; n];
                for (k, &a) in c.iter().enumerate() {
                    // a (1 − t)^k
                    let mut binom = 1.0;
                    for j in 0..=k {
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        out[j] += a * binom * sign;
                        binom = binom * (k - j) as f64 / (j + 1) as f64;
                    }
                }
                out
            };
            EdgeShape::Polynomial { x: flip(x), y: flip(y) }
        }
        EdgeShape::Trigonometric { center, cos_x, sin_x, cos_y, sin_y, start, end } => EdgeShape::Trigonometric {
            center: *center,
            cos_x: cos_x.clone(),
            sin_x: sin_x.clone(),
            cos_y: cos_y.clone(),
            sin_y: sin_y.clone(),
            start: *end,
            end: *start,
        },
    }
}

/// A corner point a_j with its one-sided tangents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub position: Vec2,
    /// Interior angle, measured inside the bounded domain.
    pub theta: f64,
    /// Unit tangent leaving the corner along the outgoing edge.
    pub tau_plus: Vec2,
    /// Unit tangent leaving the corner back along the incoming edge.
    pub tau_minus: Vec2,
    /// Left positive tangent, −τ₋.
    pub tau: Vec2,
    /// τ rotated by +π/2.
    pub nu: Vec2,
    /// Index of the edge that starts at this corner.
    pub edge: usize,
}

/// A validated, anticlockwise closed curve.
#[derive(Debug, Clone)]
pub struct Curve {
    name: String,
    edges: Vec<EdgeShape>,
    corners: Vec<Corner>,
    /// `junction_corner[j]` is the corner at the start of edge j, if any.
    junction_corner: Vec<Option<usize>>,
    lengths: Vec<f64>,
    arc_tables: Vec<Vec<f64>>,
    reversed_input: bool,
    scale: f64,
}

impl Curve {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn edges(&self) -> &[EdgeShape] {
        &self.edges
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn corner_at_start(&self, edge: usize) -> Option<&Corner> {
        self.junction_corner[edge].map(|k| &self.corners[k])
    }

    pub fn corner_at_end(&self, edge: usize) -> Option<&Corner> {
        self.corner_at_start((edge + 1) % self.edges.len())
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Cumulative arclength of `edge` at t = k/32, k = 0..=32.
    pub fn arclength_table(&self, edge: usize) -> &[f64] {
        &self.arc_tables[edge]
    }

    /// True when the input was clockwise and had to be reversed.
    pub fn was_reversed(&self) -> bool {
        self.reversed_input
    }

    /// Diameter of the bounding box.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// A single closed edge without corners: eligible for the periodic rule.
    pub fn is_periodic_smooth(&self) -> bool {
        self.edges.len() == 1 && self.corners.is_empty()
    }

    pub fn point(&self, edge: usize, t: f64) -> Vec2 {
        self.edges[edge].point(t)
    }

    pub fn derivative(&self, edge: usize, t: f64) -> Vec2 {
        self.edges[edge].derivative(t)
    }

    /// Fine polyline through the curve, `per_edge` segments per edge.
    pub fn polyline(&self, per_edge: usize) -> Vec<Vec2> {
        let mut pts = Vec::with_capacity(per_edge * self.edges.len());
        for e in &self.edges {
            for k in 0..per_edge {
                pts.push(e.point(k as f64 / per_edge as f64));
            }
        }
        pts
    }

    /// Winding number of the curve around `p` (1 inside, 0 outside), from a
    /// fine polyline; unreliable within about 1e-4·scale of the curve.
    pub fn winding_number(&self, p: Vec2) -> i32 {
        let pts = self.polyline(512);
        let n = pts.len();
        let mut total = 0.0;
        for k in 0..n {
            let a = (pts[k] - p).to_complex();
            let b = (pts[(k + 1) % n] - p).to_complex();
            total += (b / a).arg();
        }
        (total / TAU).round() as i32
    }

    /// A point just inside the curve near corner `k`, on the bisector of the interior angle.
    pub fn interior_sample(&self, k: usize) -> Vec2 {
        let c = &self.corners[k];
        c.position + c.tau_plus.rotate(0.5 * c.theta) * (1e-3 * self.scale)
    }
}

fn signed_area(edges: &[EdgeShape]) -> f64 {
    // Shoelace on a fine polyline.
    let per = 256;
    let mut pts = Vec::new();
    for e in edges {
        for k in 0..per {
            pts.push(e.point(k as f64 / per as f64));
        }
    }
    let n = pts.len();
    (0..n).map(|k| pts[k].cross(pts[(k + 1) % n])).sum::<f64>() * 0.5
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    o1 * o2 <= 0.0 && o3 * o4 <= 0.0
}

fn check_self_intersection(edges: &[EdgeShape]) -> Result<()> {
    let s = SAMPLES_PER_EDGE;
    let mut segs: Vec<(Vec2, Vec2, usize)> = Vec::new();
    for (ei, e) in edges.iter().enumerate() {
        for k in 0..s {
            segs.push((e.point(k as f64 / s as f64), e.point((k + 1) as f64 / s as f64), ei));
        }
    }
    let n = segs.len();
    for i in 0..n {
        let (a, b, ea) = segs[i];
        let (lo_a, hi_a) = (Vec2::new(a.x.min(b.x), a.y.min(b.y)), Vec2::new(a.x.max(b.x), a.y.max(b.y)));
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d, eb) = segs[j];
            if c.x.max(d.x) < lo_a.x || c.x.min(d.x) > hi_a.x || c.y.max(d.y) < lo_a.y || c.y.min(d.y) > hi_a.y {
                continue;
            }
            if segments_cross(a, b, c, d) {
                return Err(Error::SelfIntersection { first: ea, second: eb });
            }
        }
    }
    Ok(())
}

fn arclength_table(e: &EdgeShape) -> Result<Vec<f64>> {
    let mut table = vec![0.0; ARC_TABLE_SIZE + 1];
    for k in 0..ARC_TABLE_SIZE {
        let a = k as f64 / ARC_TABLE_SIZE as f64;
        let b = (k + 1) as f64 / ARC_TABLE_SIZE as f64;
        let piece = quad::integrate(|t| c64::new(e.derivative(t).norm(), 0.0), a, b, 0.0, 1e-12, 1, 2000)?;
        table[k + 1] = table[k] + piece.value.re;
    }
    Ok(table)
}

/// Validate `spec`, normalize it to anticlockwise orientation and locate its corners.
pub fn build_curve(spec: &CurveSpec) -> Result<Curve> {
    if spec.edges.is_empty() {
        return Err(Error::Domain("curve has no edges".into()));
    }
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for e in &spec.edges {
        for k in 0..=SAMPLES_PER_EDGE {
            let p = e.point(k as f64 / SAMPLES_PER_EDGE as f64);
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(Error::Domain("curve parameterization is not finite".into()));
            }
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
            if e.derivative(k as f64 / SAMPLES_PER_EDGE as f64).norm() == 0.0 {
                return Err(Error::Domain("edge parameterization has a stationary point".into()));
            }
        }
    }
    let scale = (hi - lo).norm();
    let n = spec.edges.len();
    for k in 0..n {
        let gap = (spec.edges[k].point(1.0) - spec.edges[(k + 1) % n].point(0.0)).norm();
        if !spec.closed || gap > CLOSURE_TOL * scale.max(1.0) {
            return Err(Error::OpenCurve { index: k, gap });
        }
    }

    let area = signed_area(&spec.edges);
    let reversed_input = area < 0.0;
    let edges: Vec<EdgeShape> = if reversed_input { spec.reversed().edges } else { spec.edges.clone() };

    let mut corners = Vec::new();
    let mut junction_corner = vec![None; n];
    for j in 0..n {
        let incoming = edges[(j + n - 1) % n].derivative(1.0).normalized();
        let outgoing = edges[j].derivative(0.0).normalized();
        let tau_plus = outgoing;
        let tau_minus = -incoming;
        let mut theta = tau_plus.cross(tau_minus).atan2(tau_plus.dot(tau_minus));
        if theta < 0.0 {
            theta += TAU;
        }
        if (theta - PI).abs() <= ANGLE_TOL {
            continue;
        }
        if theta <= ANGLE_TOL || theta >= TAU - ANGLE_TOL {
            return Err(Error::Cusp { index: j, theta });
        }
        let tau = -tau_minus;
        junction_corner[j] = Some(corners.len());
        corners.push(Corner {
            position: edges[j].point(0.0),
            theta,
            tau_plus,
            tau_minus,
            tau,
            nu: tau.perp(),
            edge: j,
        });
    }

    check_self_intersection(&edges)?;

    let arc_tables = edges.iter().map(arclength_table).collect::<Result<Vec<_>>>()?;
    let lengths = arc_tables.iter().map(|t| t[ARC_TABLE_SIZE]).collect();

    Ok(Curve {
        name: spec.name.clone(),
        edges,
        corners,
        junction_corner,
        lengths,
        arc_tables,
        reversed_input,
        scale,
    })
}

/// Interior angles θ_j of all corners, in curve order.
pub fn interior_angles(curve: &Curve) -> Vec<f64> {
    curve.corners.iter().map(|c| c.theta).collect()
}

/// ω = min_j min(θ_j, 2π − θ_j).
pub fn sharpest_angle(angles: &[f64]) -> Result<f64> {
    angles.iter().map(|&t| t.min(TAU - t)).reduce(f64::min).ok_or(Error::EmptyCorners)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circle_has_no_corners() {
        let c = build_curve(&CurveSpec::circle(1.0)).unwrap();
        assert!(c.corners().is_empty());
        assert!(interior_angles(&c).is_empty());
        assert!((c.length() - TAU).abs() < 1e-10);
        assert!(c.is_periodic_smooth());
    }

    #[test]
    fn square_corners() {
        let c = build_curve(&CurveSpec::square(1.0)).unwrap();
        let a = interior_angles(&c);
        assert_eq!(a.len(), 4);
        for t in &a {
            assert!((t - PI / 2.0).abs() < 1e-14);
        }
        assert!((c.length() - 4.0).abs() < 1e-12);
        for k in 0..4 {
            assert_eq!(c.winding_number(c.interior_sample(k)), 1);
            let corner = c.corners()[k];
            assert!((corner.nu - corner.tau.perp()).norm() < 1e-15);
            let between = corner.tau_plus.cross(corner.tau_minus).atan2(corner.tau_plus.dot(corner.tau_minus));
            assert!((between.rem_euclid(TAU) - corner.theta).abs() < 1e-14);
        }
    }

    #[test]
    fn l_shape_has_one_reentrant_corner() {
        let c = build_curve(&CurveSpec::l_shape(1.0)).unwrap();
        let a = interior_angles(&c);
        assert_eq!(a.len(), 6);
        assert_eq!(a.iter().filter(|t| (*t - 1.5 * PI).abs() < 1e-12).count(), 1);
        assert_eq!(a.iter().filter(|t| (*t - 0.5 * PI).abs() < 1e-12).count(), 5);
        for k in 0..6 {
            assert_eq!(c.winding_number(c.interior_sample(k)), 1);
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let spec = CurveSpec::l_shape(1.0).reversed();
        let c = build_curve(&spec).unwrap();
        assert!(c.was_reversed());
        let mut a = interior_angles(&c);
        a.sort_by(f64::total_cmp);
        assert!((a[5] - 1.5 * PI).abs() < 1e-12);
        assert!((a[0] - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn rounded_square_is_smooth_but_not_periodic() {
        let c = build_curve(&CurveSpec::rounded_square(2.0, 0.25)).unwrap();
        assert!(c.corners().is_empty());
        assert!(!c.is_periodic_smooth());
        let want = 4.0 * 1.5 + TAU * 0.25;
        assert!((c.length() - want).abs() < 1e-10);
    }

    #[test]
    fn open_curve_rejected() {
        let spec = CurveSpec::new(
            "open",
            vec![
                EdgeShape::Line { from: Vec2::new(0.0, 0.0), to: Vec2::new(1.0, 0.0) },
                EdgeShape::Line { from: Vec2::new(1.0, 0.0), to: Vec2::new(0.0, 1.0) },
                EdgeShape::Line { from: Vec2::new(0.0, 1.0), to: Vec2::new(0.0, 0.1) },
            ],
        );
        assert!(matches!(build_curve(&spec), Err(Error::OpenCurve { index: 2, .. })));
    }

    #[test]
    fn cusp_rejected() {
        // Two arcs tangent at both junctions in opposite directions: a lens with zero angles.
        let spec = CurveSpec::new(
            "cusp",
            vec![
                EdgeShape::Line { from: Vec2::new(0.0, 0.0), to: Vec2::new(1.0, 0.0) },
                EdgeShape::Polynomial { x: vec![1.0, 0.0, -1.0], y: vec![0.0, 0.0, 1.0] },
                EdgeShape::Line { from: Vec2::new(0.0, 1.0), to: Vec2::new(0.0, 0.0) },
            ],
        );
        // Junction at (1,0): incoming (1,0), outgoing (0,0)+... derivative (0,0) at t=0 -> rejected as stationary.
        assert!(build_curve(&spec).is_err());
        let spike = CurveSpec::new(
            "spike",
            vec![
                EdgeShape::Line { from: Vec2::new(0.0, 0.0), to: Vec2::new(1.0, 0.0) },
                EdgeShape::Polynomial { x: vec![1.0, -1.0, 0.0], y: vec![0.0, 0.0, 1.0] },
                EdgeShape::Line { from: Vec2::new(0.0, 1.0), to: Vec2::new(0.0, 0.0) },
            ],
        );
        // Outgoing tangent at (1,0) is (−1, 0): the edge folds straight back.
        assert!(matches!(build_curve(&spike), Err(Error::Cusp { index: 1, .. })));
    }

    #[test]
    fn self_intersection_rejected() {
        let bowtie = CurveSpec::new(
            "bowtie",
            vec![
                EdgeShape::Line { from: Vec2::new(0.0, 0.0), to: Vec2::new(1.0, 1.0) },
                EdgeShape::Line { from: Vec2::new(1.0, 1.0), to: Vec2::new(1.0, 0.0) },
                EdgeShape::Line { from: Vec2::new(1.0, 0.0), to: Vec2::new(0.0, 1.0) },
                EdgeShape::Line { from: Vec2::new(0.0, 1.0), to: Vec2::new(0.0, 0.0) },
            ],
        );
        assert!(matches!(build_curve(&bowtie), Err(Error::SelfIntersection { .. })));
    }

    #[test]
    fn sharpest_angle_examples() {
        assert!((sharpest_angle(&[PI / 2.0; 4]).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((sharpest_angle(&[1.5 * PI]).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((sharpest_angle(&[0.3 * PI, 1.4 * PI]).unwrap() - 0.3 * PI).abs() < 1e-15);
        assert_eq!(sharpest_angle(&[]), Err(Error::EmptyCorners));
    }

    #[test]
    fn polynomial_reversal_traces_same_points() {
        let e = EdgeShape::Polynomial { x: vec![0.5, 1.0, -2.0, 0.3], y: vec![0.0, 2.0, 0.5] };
        let r = reverse_shape(&e);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((e.point(t) - r.point(1.0 - t)).norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn angles_invariant_under_similarity(rot in -3.0f64..3.0, scale in 0.1f64..10.0, sx in -5.0f64..5.0, sy in -5.0f64..5.0) {
            for spec in [CurveSpec::l_shape(1.0), CurveSpec::regular_polygon(5, 1.0)] {
                let base = interior_angles(&build_curve(&spec).unwrap());
                let moved = interior_angles(&build_curve(&spec.transformed(rot, scale, Vec2::new(sx, sy))).unwrap());
                prop_assert_eq!(base.len(), moved.len());
                for (a, b) in base.iter().zip(&moved) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }
}

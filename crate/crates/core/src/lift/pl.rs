//! PL lifts of plane curves. Every complementary region of the curve carries a label
//! m ∈ ℤ² (the slope of the tropical polynomial there); each vertex lifts to the
//! coamoeba of the polygon spanned by the labels around it and each edge to the
//! circles ⟨u, y⟩ ≡ (π/2)⟨u, m⟩ orthogonal to its direction u.

use crate::coamoeba::{unit_pairing, wrap};
use crate::error::{input, Error, Result};
use crate::polyhedral::exact::{primitive, q, Q};
use crate::tropical::{EdgeKind, Leg, PlaneCurve};
use num_traits::Zero;
use serde::Serialize;
use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

pub fn rot(u: [i64; 2]) -> [i64; 2] {
    [-u[1], u[0]]
}

/// Region labels of a curve, fixed up to one translation per connected component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualData {
    /// legs of each vertex in counterclockwise order
    pub legs: Vec<Vec<Leg>>,
    /// label of the region following each leg counterclockwise
    pub sectors: Vec<Vec<[i64; 2]>>,
    /// labels to the right and to the left of each edge, along its direction
    pub sides: Vec<([i64; 2], [i64; 2])>,
}

fn angle(u: [i64; 2]) -> f64 {
    (u[1] as f64).atan2(u[0] as f64)
}

fn sub(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(w: u64, a: [i64; 2]) -> [i64; 2] {
    [w as i64 * a[0], w as i64 * a[1]]
}

/// Direction of an edge (from `a` to `b` for segments).
pub fn edge_dir(curve: &PlaneCurve, edge: usize) -> [i64; 2] {
    match curve.edges[edge].kind {
        EdgeKind::Segment { a, b } => curve.segment_dir(a, b),
        EdgeKind::Ray { dir, .. } | EdgeKind::Line { dir, .. } => dir,
    }
}

pub fn dual_data(curve: &PlaneCurve) -> Result<DualData> {
    let nv = curve.vertices.len();
    let legs: Vec<Vec<Leg>> = (0..nv)
        .map(|v| {
            let mut s = curve.star(v);
            s.sort_by(|a, b| angle(a.dir).total_cmp(&angle(b.dir)));
            s
        })
        .collect();
    // relative labels: crossing leg i counterclockwise subtracts w·rot(u_i)
    let relative: Vec<Vec<[i64; 2]>> = legs
        .iter()
        .map(|ls| {
            let mut out = vec![[0, 0]];
            for l in ls.iter().skip(1) {
                let prev = *out.last().unwrap();
                out.push(sub(prev, scale(l.weight, rot(l.dir))));
            }
            out
        })
        .collect();
    for (v, ls) in legs.iter().enumerate() {
        if ls.len() < 2 {
            return input(format!("vertex {v} has fewer than two edges"));
        }
    }
    let mut base: Vec<Option<[i64; 2]>> = vec![None; nv];
    let leg_index = |v: usize, edge: usize| legs[v].iter().position(|l| l.edge == edge).unwrap();
    let sector = |base: &[Option<[i64; 2]>], v: usize, i: usize| add(base[v].unwrap(), relative[v][i]);
    for root in 0..nv {
        if base[root].is_some() {
            continue;
        }
        base[root] = Some([0, 0]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (i, l) in legs[v].iter().enumerate() {
                let EdgeKind::Segment { a, b } = curve.edges[l.edge].kind else { continue };
                let other = if a == v { b } else { a };
                let k = legs[v].len();
                let left = sector(&base, v, i);
                // at the other end the edge points back, so sides swap
                let j = leg_index(other, l.edge);
                let want = sector(&base, v, (i + k - 1) % k);
                let candidate = sub(want, relative[other][j]);
                match base[other] {
                    None => {
                        base[other] = Some(candidate);
                        queue.push_back(other);
                    }
                    Some(b0) if b0 != candidate => {
                        return Err(Error::Degenerate(format!("inconsistent region labels around vertex {other}")))
                    }
                    _ => {}
                }
                let ko = legs[other].len();
                if sector(&base, other, (j + ko - 1) % ko) != left {
                    return Err(Error::Degenerate(format!("edge {} is not dual to a lattice segment", l.edge)));
                }
            }
        }
    }
    let sectors: Vec<Vec<[i64; 2]>> = (0..nv).map(|v| (0..legs[v].len()).map(|i| sector(&base, v, i)).collect()).collect();
    let mut sides = Vec::with_capacity(curve.edges.len());
    for (e, edge) in curve.edges.iter().enumerate() {
        let s = match edge.kind {
            EdgeKind::Segment { a: v, .. } | EdgeKind::Ray { base: v, .. } => {
                let i = leg_index(v, e);
                let k = legs[v].len();
                (sectors[v][(i + k - 1) % k], sectors[v][i])
            }
            EdgeKind::Line { dir, .. } => ([0, 0], sub([0, 0], scale(edge.weight, rot(dir)))),
        };
        sides.push(s);
    }
    Ok(DualData { legs, sectors, sides })
}

/// Twice the area of the polygon spanned by the labels around a vertex.
pub fn normalized_area(poly: &[[i64; 2]]) -> i64 {
    let n = poly.len();
    (0..n).map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]).sum::<i64>().abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexPiece {
    pub vertex: usize,
    pub point: [f64; 2],
    /// (π/2)·labels, counterclockwise
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgePiece {
    pub edge: usize,
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub dir: [i64; 2],
    pub weight: u64,
    /// the fibre is {⟨dir, y⟩ ≡ circle + jπ/weight}
    pub circle: f64,
    pub unbounded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlTopology {
    pub euler: i64,
    pub punctures: u64,
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlLift {
    pub vertices: Vec<VertexPiece>,
    pub edges: Vec<EdgePiece>,
    /// rays and lines are cut at this distance from their base point
    pub truncation: f64,
    pub topology: PlTopology,
}

fn unit(u: [i64; 2]) -> [f64; 2] {
    let n = ((u[0] * u[0] + u[1] * u[1]) as f64).sqrt();
    [u[0] as f64 / n, u[1] as f64 / n]
}

pub fn pl_lift(curve: &PlaneCurve, truncation: f64) -> Result<PlLift> {
    if !(truncation > 0.0) {
        return input("truncation radius must be positive");
    }
    let dual = dual_data(curve)?;
    let vertices: Vec<VertexPiece> = (0..curve.vertices.len())
        .map(|v| VertexPiece {
            vertex: v,
            point: curve.vertex_f64(v),
            polygon: dual.sectors[v].iter().map(|m| [FRAC_PI_2 * m[0] as f64, FRAC_PI_2 * m[1] as f64]).collect(),
        })
        .collect();
    let mut edges = Vec::new();
    let mut punctures = 0;
    for (e, edge) in curve.edges.iter().enumerate() {
        let dir = edge_dir(curve, e);
        let m = dual.sides[e].0;
        let circle = FRAC_PI_2 * (dir[0] * m[0] + dir[1] * m[1]) as f64;
        let uu = unit(dir);
        let (start, end, unbounded) = match edge.kind {
            EdgeKind::Segment { a, b } => (curve.vertex_f64(a), curve.vertex_f64(b), false),
            EdgeKind::Ray { base, .. } => {
                let p = curve.vertex_f64(base);
                punctures += edge.weight;
                (p, [p[0] + truncation * uu[0], p[1] + truncation * uu[1]], true)
            }
            EdgeKind::Line { point, .. } => {
                let p = [crate::polyhedral::exact::to_f64(&point[0]), crate::polyhedral::exact::to_f64(&point[1])];
                punctures += 2 * edge.weight;
                (
                    [p[0] - truncation * uu[0], p[1] - truncation * uu[1]],
                    [p[0] + truncation * uu[0], p[1] + truncation * uu[1]],
                    true,
                )
            }
        };
        edges.push(EdgePiece { edge: e, start, end, dir, weight: edge.weight, circle, unbounded });
    }
    let euler = -dual.sectors.iter().map(|s| normalized_area(s)).sum::<i64>();
    let genus = (2 - euler - punctures as i64) / 2;
    Ok(PlLift { vertices, edges, truncation, topology: PlTopology { euler, punctures, genus } })
}

fn dist2_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let s = if l2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) };
    let q = [a[0] + s * d[0] - p[0], a[1] + s * d[1] - p[1]];
    q[0] * q[0] + q[1] * q[1]
}

/// Squared distance from a point of ℝ² to a convex counterclockwise polygon.
fn dist2_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let inside = (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
    });
    if inside {
        return 0.0;
    }
    (0..n).map(|i| dist2_segment(p, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Flat distance in ℝ²/πℤ² from y to the polygon together with its ι-image.
pub fn torus_polygon_distance(poly: &[[f64; 2]], y: [f64; 2]) -> f64 {
    let n = poly.len() as f64;
    let c = [poly.iter().map(|p| p[0]).sum::<f64>() / n, poly.iter().map(|p| p[1]).sum::<f64>() / n];
    let diam = poly.iter().map(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt()).fold(0.0, f64::max);
    let k = (diam / PI).ceil() as i64 + 1;
    let mut best = f64::INFINITY;
    for s in [1.0, -1.0] {
        let z = [s * y[0], s * y[1]];
        let base = [c[0] + wrap(z[0] - c[0], -FRAC_PI_2), c[1] + wrap(z[1] - c[1], -FRAC_PI_2)];
        for i in -k..=k {
            for j in -k..=k {
                let p = [base[0] + PI * i as f64, base[1] + PI * j as f64];
                best = best.min(dist2_polygon(p, poly));
            }
        }
    }
    best.sqrt()
}

/// Flat distance from y to the circles {⟨u, y⟩ ≡ c + jπ/w}.
pub fn circle_distance(dir: [i64; 2], c: f64, weight: u64, y: [f64; 2]) -> f64 {
    let n = ((dir[0] * dir[0] + dir[1] * dir[1]) as f64).sqrt();
    let spacing = PI / weight as f64;
    let v = dir[0] as f64 * y[0] + dir[1] as f64 * y[1] - c;
    (v - spacing * (v / spacing).round()).abs() / n
}

impl PlLift {
    /// Distance in the product metric from (x, y) to the lift.
    pub fn distance(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for v in &self.vertices {
            let dx = (x[0] - v.point[0]).powi(2) + (x[1] - v.point[1]).powi(2);
            if dx >= best * best {
                continue;
            }
            let dy = torus_polygon_distance(&v.polygon, y);
            best = best.min((dx + dy * dy).sqrt());
        }
        for e in &self.edges {
            let dx = dist2_segment(x, e.start, e.end);
            if dx >= best * best {
                continue;
            }
            let dy = circle_distance(e.dir, e.circle, e.weight, y);
            best = best.min((dx + dy * dy).sqrt());
        }
        best
    }

    /// Points (x₁, x₂, y₁, y₂) on the lift, `res` samples per parameter direction.
    pub fn sample(&self, res: usize) -> Vec<[f64; 4]> {
        let mut out = Vec::new();
        for v in &self.vertices {
            let p = &v.polygon;
            for t in 1..p.len() - 1 {
                for i in 0..=res {
                    for j in 0..=(res - i) {
                        let (a, b) = (i as f64 / res as f64, j as f64 / res as f64);
                        let c = 1.0 - a - b;
                        let y = [a * p[0][0] + b * p[t][0] + c * p[t + 1][0], a * p[0][1] + b * p[t][1] + c * p[t + 1][1]];
                        out.push([v.point[0], v.point[1], y[0], y[1]]);
                        out.push([v.point[0], v.point[1], -y[0], -y[1]]);
                    }
                }
            }
        }
        for e in &self.edges {
            let s = unit_pairing(e.dir);
            let r = rot(e.dir);
            for k in 0..e.weight {
                let c = e.circle + k as f64 * PI / e.weight as f64;
                for i in 0..=res {
                    let a = i as f64 / res as f64;
                    let x = [e.start[0] + a * (e.end[0] - e.start[0]), e.start[1] + a * (e.end[1] - e.start[1])];
                    for j in 0..res {
                        let th = PI * j as f64 / res as f64;
                        out.push([x[0], x[1], c * s[0] as f64 + th * r[0] as f64, c * s[1] as f64 + th * r[1] as f64]);
                    }
                }
            }
        }
        out
    }
}

/// Exactness data: c_f = ⟨e_f, x⟩ for a point x on the edge and the primitive normal
/// e_f whose first non-zero entry is positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub exact: bool,
    pub constants: Vec<EdgeConstant>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeConstant {
    pub edge: usize,
    pub normal: [i64; 2],
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn exactness_check(curve: &PlaneCurve) -> ExactnessReport {
    let constants: Vec<EdgeConstant> = curve
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let d = edge_dir(curve, e);
            let mut normal = [-d[1], d[0]];
            let p = primitive(&[q(normal[0]), q(normal[1])]);
            normal = [p[0], p[1]];
            if normal[0] < 0 || (normal[0] == 0 && normal[1] < 0) {
                normal = [-normal[0], -normal[1]];
            }
            let x = match edge.kind {
                EdgeKind::Segment { a, .. } => curve.vertices[a],
                EdgeKind::Ray { base, .. } => curve.vertices[base],
                EdgeKind::Line { point, .. } => point,
            };
            let value = Q::from_integer(normal[0] as i128) * x[0] + Q::from_integer(normal[1] as i128) * x[1];
            EdgeConstant { edge: e, normal, value }
        })
        .collect();
    ExactnessReport { exact: constants.iter().all(|c| c.value.is_zero()), constants }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tropical::CurveEdge;

    pub(crate) fn example_curve() -> PlaneCurve {
        let v = |a: i64, b: i64| [q(a), q(b)];
        let seg = |a, b| CurveEdge { kind: EdgeKind::Segment { a, b }, weight: 1, cell: None };
        let ray = |base, dir| CurveEdge { kind: EdgeKind::Ray { base, dir }, weight: 1, cell: None };
        PlaneCurve {
            vertices: vec![v(0, 0), v(1, 0), v(0, 1)],
            edges: vec![seg(0, 1), seg(0, 2), seg(1, 2), ray(0, [-1, -1]), ray(1, [2, -1]), ray(2, [-1, 2])],
        }
    }

    fn standard_line() -> PlaneCurve {
        let ray = |dir| CurveEdge { kind: EdgeKind::Ray { base: 0, dir }, weight: 1, cell: None };
        PlaneCurve { vertices: vec![[q(0), q(0)]], edges: vec![ray([1, 0]), ray([0, 1]), ray([-1, -1])] }
    }

    #[test]
    fn standard_line_labels() {
        let d = dual_data(&standard_line()).unwrap();
        // min(0, x₁, x₂) has slopes 0, e₁, e₂ up to a common translation
        let t = d.sectors[0].iter().copied().min().unwrap();
        let mut m: Vec<[i64; 2]> = d.sectors[0].iter().map(|x| sub(*x, t)).collect();
        let shift = m.iter().copied().fold([0, 0], |a, x| [a[0].min(x[0]), a[1].min(x[1])]);
        m = m.iter().map(|x| sub(*x, shift)).collect();
        m.sort();
        assert_eq!(m, vec![[0, 0], [0, 1], [1, 0]]);
        let pl = pl_lift(&standard_line(), 3.0).unwrap();
        assert_eq!(pl.topology, PlTopology { euler: -1, punctures: 3, genus: 0 });
    }

    #[test]
    fn example_curve_lift() {
        let c = example_curve();
        let d = dual_data(&c).unwrap();
        for s in &d.sectors {
            assert_eq!(normalized_area(s), 1);
        }
        let pl = pl_lift(&c, 3.0).unwrap();
        // three pants glued along three cylinders: a torus with three punctures
        assert_eq!(pl.topology, PlTopology { euler: -3, punctures: 3, genus: 1 });
        // every edge circle passes through the images of the dual segment ends
        for e in &pl.edges {
            let (r, l) = d.sides[e.edge];
            for m in [r, l] {
                let y = [FRAC_PI_2 * m[0] as f64, FRAC_PI_2 * m[1] as f64];
                assert!(circle_distance(e.dir, e.circle, 1, y) < 1e-12);
                assert!(circle_distance(e.dir, e.circle, 1, [-y[0], -y[1]]) < 1e-12);
            }
        }
        // the lift contains its samples
        for p in pl.sample(6) {
            assert!(pl.distance([p[0], p[1]], [p[2], p[3]]) < 1e-9);
        }
        assert!(pl.distance([0.5, 0.5], [0.3, 0.3]) > 0.1);
    }

    #[test]
    fn weighted_edge_has_parallel_circles() {
        let line = PlaneCurve {
            vertices: vec![],
            edges: vec![CurveEdge { kind: EdgeKind::Line { point: [q(0), q(0)], dir: [1, 0] }, weight: 2, cell: None }],
        };
        let pl = pl_lift(&line, 1.0).unwrap();
        let e = &pl.edges[0];
        assert_eq!(e.weight, 2);
        assert!(circle_distance(e.dir, e.circle, 2, [e.circle, 0.3]) < 1e-12);
        assert!(circle_distance(e.dir, e.circle, 2, [e.circle + FRAC_PI_2, 0.3]) < 1e-12);
        assert!(circle_distance(e.dir, e.circle, 1, [e.circle + FRAC_PI_2, 0.3]) > 1.0);
        assert_eq!(pl.topology.punctures, 4);
    }

    #[test]
    fn exactness_examples() {
        assert!(exactness_check(&standard_line()).exact);
        let r = exactness_check(&example_curve());
        assert!(!r.exact);
        let ray = r.constants.iter().find(|c| c.edge == 4).unwrap();
        assert_eq!(ray.normal, [1, 2]);
        assert_eq!(ray.value, q(1));
    }

    #[test]
    fn torus_distances() {
        let tri = vec![[0.0, 0.0], [FRAC_PI_2, 0.0], [0.0, FRAC_PI_2]];
        assert_eq!(torus_polygon_distance(&tri, [0.1, 0.1]), 0.0);
        assert_eq!(torus_polygon_distance(&tri, [-0.1 + PI, -0.1]), 0.0);
        assert!((torus_polygon_distance(&tri, [FRAC_PI_2, FRAC_PI_2]) - (FRAC_PI_2 / 2f64.sqrt())).abs() < 1e-12);
        assert!((circle_distance([1, 1], 0.0, 1, [0.5, 0.0]) - 0.5 / 2f64.sqrt()).abs() < 1e-12);
    }
}

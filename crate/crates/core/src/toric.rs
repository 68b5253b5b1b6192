//! Moment polygons, boundary behaviour of curves inside them, topology of the
//! closed-up lifts and the area/Maslov arithmetic for disks on lifted tori.

use crate::error::{input, Error, Result};
use crate::polyhedral::exact::{det2, gcd_vec, primitive, q, Q};
use crate::tropical::{parse_q, q_json, EdgeKind, PlaneCurve};
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

/// Half-plane {x : ⟨normal, x⟩ ≥ level} with primitive inward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Facet {
    pub normal: [i64; 2],
    pub level: Q,
}

impl Facet {
    /// Primitive tangent, oriented so the polygon lies to its left.
    pub fn tangent(&self) -> [i64; 2] {
        [self.normal[1], -self.normal[0]]
    }

    /// Lattice distance of a point from the facet line (negative outside).
    pub fn distance(&self, p: &[Q; 2]) -> Q {
        p[0] * q(self.normal[0]) + p[1] * q(self.normal[1]) - self.level
    }
}

/// Convex polygon cut out by facets listed counterclockwise. When `closed` is false
/// the first and last facets are unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct DelzantPolygon {
    pub facets: Vec<Facet>,
    pub closed: bool,
}

fn pair_point(a: &Facet, b: &Facet) -> Option<[Q; 2]> {
    let d = det2(a.normal, b.normal);
    if d == 0 {
        return None;
    }
    let d = q(d);
    let x = (a.level * q(b.normal[1]) - b.level * q(a.normal[1])) / d;
    let y = (q(a.normal[0]) * b.level - q(b.normal[0]) * a.level) / d;
    Some([x, y])
}

impl DelzantPolygon {
    /// Convex hull given by its corners in either orientation.
    pub fn from_vertices(pts: &[[Q; 2]]) -> Result<DelzantPolygon> {
        let n = pts.len();
        if n < 3 {
            return input("a compact polygon needs at least three corners");
        }
        let twice_area: Q = (0..n).map(|i| pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1]).fold(Q::zero(), |a, b| a + b);
        if twice_area.is_zero() {
            return input("polygon has no area");
        }
        let mut v = pts.to_vec();
        if twice_area.is_negative() {
            v.reverse();
        }
        let facets = (0..n)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                let t = primitive(&[b[0] - a[0], b[1] - a[1]]);
                let normal = [-t[1], t[0]];
                Facet { normal, level: a[0] * q(normal[0]) + a[1] * q(normal[1]) }
            })
            .collect();
        let p = DelzantPolygon { facets, closed: true };
        p.validate()?;
        Ok(p)
    }

    /// Facets given as (inward normal, level) in counterclockwise order.
    pub fn from_halfplanes(facets: Vec<Facet>, closed: bool) -> Result<DelzantPolygon> {
        for f in &facets {
            if gcd_vec(&f.normal) != 1 {
                return input(format!("facet normal {:?} is not primitive", f.normal));
            }
        }
        let p = DelzantPolygon { facets, closed };
        p.validate()?;
        Ok(p)
    }

    /// The closed positive quadrant, moment polygon of ℂ².
    pub fn quadrant() -> DelzantPolygon {
        DelzantPolygon { facets: vec![Facet { normal: [1, 0], level: q(0) }, Facet { normal: [0, 1], level: q(0) }], closed: false }
    }

    fn validate(&self) -> Result<()> {
        if self.facets.len() < 2 {
            return input("polygon needs at least two edges");
        }
        for (i, j) in self.corner_pairs() {
            let (a, b) = (&self.facets[i], &self.facets[j]);
            if det2(a.normal, b.normal) <= 0 {
                return input(format!("facets {i} and {j} do not turn counterclockwise"));
            }
            let p = pair_point(a, b).unwrap();
            if self.facets.iter().any(|f| f.distance(&p).is_negative()) {
                return input(format!("corner of facets {i} and {j} is cut off by another facet"));
            }
        }
        Ok(())
    }

    fn corner_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.facets.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m).map(|i| (i, (i + 1) % n)).collect()
    }

    pub fn corners(&self) -> Vec<[Q; 2]> {
        self.corner_pairs().into_iter().map(|(i, j)| pair_point(&self.facets[i], &self.facets[j]).unwrap()).collect()
    }

    pub fn contains(&self, p: &[Q; 2]) -> bool {
        self.facets.iter().all(|f| !f.distance(p).is_negative())
    }

    pub fn is_interior(&self, p: &[Q; 2]) -> bool {
        self.facets.iter().all(|f| f.distance(p).is_positive())
    }

    pub fn from_json(v: &Value) -> Result<DelzantPolygon> {
        if let Some(pts) = v.get("vertices").and_then(|x| x.as_array()) {
            let mut out = Vec::new();
            for p in pts {
                let a = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Input(format!("bad corner {p}")))?;
                out.push([parse_q(&a[0])?, parse_q(&a[1])?]);
            }
            return DelzantPolygon::from_vertices(&out);
        }
        if let Some(hs) = v.get("halfplanes").and_then(|x| x.as_array()) {
            let mut facets = Vec::new();
            for h in hs {
                let parts = h.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Input(format!("halfplane must be [[a, b], level], got {h}")))?;
                let n = parts[0].as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Input(format!("bad normal in {h}")))?;
                let c = |x: &Value| x.as_i64().ok_or_else(|| Error::Input(format!("bad normal in {h}")));
                facets.push(Facet { normal: [c(&n[0])?, c(&n[1])?], level: parse_q(&parts[1])? });
            }
            let closed = v.get("closed").and_then(|x| x.as_bool()).unwrap_or(false);
            return DelzantPolygon::from_halfplanes(facets, closed);
        }
        input("polygon needs \"vertices\" or \"halfplanes\"")
    }
}

/// True when the primitive edge tangents at every corner form a lattice basis.
pub fn delzant_check(poly: &DelzantPolygon) -> bool {
    poly.corner_pairs().into_iter().all(|(i, j)| det2(poly.facets[i].tangent(), poly.facets[j].tangent()).abs() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HitKind {
    /// index one in the interior of a facet: the lift gets a boundary circle
    CircleBoundary,
    /// unimodular against both facets at a corner: the circle closes up to a point
    SmoothPoint,
    /// index two in the interior of a facet: a Möbius band is glued in
    Moebius,
    Unsupported,
}

/// Point where an edge of the curve leaves the polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryHit {
    pub point: [Q; 2],
    pub edge: usize,
    /// primitive direction of the edge, pointing out of the polygon
    pub dir: [i64; 2],
    pub weight: u64,
    pub facets: Vec<usize>,
    /// |det(dir, facet tangent)| for each facet in `facets`
    pub index: Vec<i64>,
    pub kind: HitKind,
}

impl BoundaryHit {
    pub fn to_json(&self) -> Value {
        json!({
            "point": [q_json(&self.point[0]), q_json(&self.point[1])],
            "edge": self.edge,
            "dir": self.dir,
            "weight": self.weight,
            "facets": self.facets,
            "index": self.index,
            "kind": self.kind,
        })
    }
}

/// Part of an edge inside the polygon, as a parameter interval along `base + s·step`.
/// `None` bounds are infinite.
#[derive(Clone, Debug)]
struct Span {
    base: [Q; 2],
    step: [Q; 2],
    lo: Option<Q>,
    hi: Option<Q>,
    /// facet constraints responsible for each finite end
    lo_cut: bool,
    hi_cut: bool,
}

impl Span {
    fn at(&self, s: Q) -> [Q; 2] {
        [self.base[0] + s * self.step[0], self.base[1] + s * self.step[1]]
    }
}

fn edge_span(curve: &PlaneCurve, e: usize, facets: &[Facet]) -> Result<Option<Span>> {
    let (base, step, mut lo, mut hi) = match curve.edges[e].kind {
        EdgeKind::Segment { a, b } => {
            let (p, r) = (curve.vertices[a], curve.vertices[b]);
            (p, [r[0] - p[0], r[1] - p[1]], Some(q(0)), Some(q(1)))
        }
        EdgeKind::Ray { base, dir } => (curve.vertices[base], [q(dir[0]), q(dir[1])], Some(q(0)), None),
        EdgeKind::Line { point, dir } => (point, [q(dir[0]), q(dir[1])], None, None),
    };
    let (mut lo_cut, mut hi_cut) = (false, false);
    for f in facets {
        let g0 = f.distance(&base);
        let slope = step[0] * q(f.normal[0]) + step[1] * q(f.normal[1]);
        if slope.is_zero() {
            if g0.is_negative() {
                return Ok(None);
            }
            if g0.is_zero() {
                return input(format!("edge {e} runs along the boundary"));
            }
            continue;
        }
        let s = -g0 / slope;
        if slope.is_positive() {
            if lo.map_or(true, |l| s > l) {
                lo = Some(s);
                lo_cut = true;
            }
        } else if hi.map_or(true, |h| s < h) {
            hi = Some(s);
            hi_cut = true;
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => Ok(None),
        (Some(l), Some(h)) if l == h => input(format!("edge {e} touches the boundary at a single point")),
        _ => Ok(Some(Span { base, step, lo, hi, lo_cut, hi_cut })),
    }
}

fn check_vertices(curve: &PlaneCurve, poly: &DelzantPolygon) -> Result<()> {
    for (i, v) in curve.vertices.iter().enumerate() {
        if poly.contains(v) && !poly.is_interior(v) {
            return input(format!("curve vertex {i} lies on the boundary of the polygon"));
        }
    }
    Ok(())
}

fn classify(point: [Q; 2], edge: usize, dir: [i64; 2], weight: u64, poly: &DelzantPolygon) -> BoundaryHit {
    let facets: Vec<usize> = (0..poly.facets.len()).filter(|&i| poly.facets[i].distance(&point).is_zero()).collect();
    let index: Vec<i64> = facets.iter().map(|&i| det2(dir, poly.facets[i].tangent()).abs()).collect();
    let kind = match (facets.len(), index.as_slice()) {
        (1, [1]) => HitKind::CircleBoundary,
        (1, [2]) if weight == 1 => HitKind::Moebius,
        (2, [1, 1]) if weight == 1 => HitKind::SmoothPoint,
        _ => HitKind::Unsupported,
    };
    BoundaryHit { point, edge, dir, weight, facets, index, kind }
}

/// Every point where the curve meets the boundary of the polygon, classified by
/// the lattice index of the edge against the facets it reaches.
pub fn classify_boundary(curve: &PlaneCurve, poly: &DelzantPolygon) -> Result<Vec<BoundaryHit>> {
    check_vertices(curve, poly)?;
    let mut hits = Vec::new();
    for e in 0..curve.edges.len() {
        let Some(span) = edge_span(curve, e, &poly.facets)? else { continue };
        let step = primitive(&span.step);
        let d = [step[0], step[1]];
        let w = curve.edges[e].weight;
        if span.lo_cut {
            hits.push(classify(span.at(span.lo.unwrap()), e, [-d[0], -d[1]], w, poly));
        }
        if span.hi_cut {
            hits.push(classify(span.at(span.hi.unwrap()), e, d, w, poly));
        }
    }
    Ok(hits)
}

/// Covering degree of the pants piece over a vertex: twice the area of the dual polygon.
pub fn vertex_degree(curve: &PlaneCurve, v: usize) -> i64 {
    let mut legs = curve.star(v);
    legs.sort_by(|a, b| (a.dir[1] as f64).atan2(a.dir[0] as f64).total_cmp(&(b.dir[1] as f64).atan2(b.dir[0] as f64)));
    let mut p = [0i64, 0];
    let mut area = 0;
    for l in &legs {
        let w = l.weight as i64;
        let next = [p[0] - w * l.dir[1], p[1] + w * l.dir[0]];
        area += p[0] * next[1] - next[0] * p[1];
        p = next;
    }
    area.abs()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftTopology {
    pub euler: i64,
    pub orientable: bool,
    pub components: usize,
    pub boundary_circles: u64,
    pub punctures: u64,
    /// total genus when orientable
    pub genus: Option<i64>,
    /// total number of cross-caps when not orientable
    pub crosscaps: Option<i64>,
    pub disk_caps: u64,
    pub moebius_caps: u64,
    /// χ ≡ 0 mod 4, reported for closed non-orientable lifts in ℂ²
    pub audin: Option<bool>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Topology of the closure of the lift of the part of the curve inside the polygon
/// (the whole plane when `poly` is `None`). Pants pieces contribute −(degree) to χ,
/// annuli nothing, disk caps one and Möbius caps nothing.
pub fn lift_topology(curve: &PlaneCurve, poly: Option<&DelzantPolygon>) -> Result<LiftTopology> {
    let facets: &[Facet] = poly.map_or(&[], |p| &p.facets);
    let hits = match poly {
        Some(p) => classify_boundary(curve, p)?,
        None => Vec::new(),
    };
    if let Some(h) = hits.iter().find(|h| h.kind == HitKind::Unsupported) {
        return Err(Error::Unsupported(format!("edge {} meets the boundary with index {:?} and weight {}", h.edge, h.index, h.weight)));
    }
    let inside: Vec<bool> = curve.vertices.iter().map(|v| poly.map_or(true, |p| p.is_interior(v))).collect();
    let nv = curve.vertices.len();
    let mut euler: i64 = -(0..nv).filter(|&v| inside[v]).map(|v| vertex_degree(curve, v)).sum::<i64>();
    let disk_caps = hits.iter().filter(|h| h.kind == HitKind::SmoothPoint).count() as u64;
    let moebius_caps = hits.iter().filter(|h| h.kind == HitKind::Moebius).count() as u64;
    let boundary_circles: u64 = hits.iter().filter(|h| h.kind == HitKind::CircleBoundary).map(|h| h.weight).sum();
    euler += disk_caps as i64;

    // pieces: inside vertices, then one node per circle of an edge without inside endpoints
    let mut parent: Vec<usize> = (0..nv).collect();
    let mut punctures = 0u64;
    let mut free = 0usize;
    for e in 0..curve.edges.len() {
        let Some(span) = edge_span(curve, e, facets)? else { continue };
        let w = curve.edges[e].weight;
        punctures += w * (span.lo.is_none() as u64 + span.hi.is_none() as u64);
        let ends: Vec<usize> = match curve.edges[e].kind {
            EdgeKind::Segment { a, b } => vec![a, b],
            EdgeKind::Ray { base, .. } => vec![base],
            EdgeKind::Line { .. } => vec![],
        };
        let ends: Vec<usize> = ends.into_iter().filter(|&v| inside[v]).collect();
        match ends.as_slice() {
            [] => free += w as usize,
            [a, b] => {
                let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                parent[ra] = rb;
            }
            _ => {}
        }
    }
    let roots: std::collections::BTreeSet<usize> = (0..nv).filter(|&v| inside[v]).map(|v| find(&mut parent, v)).collect();
    let components = roots.len() + free;
    let orientable = moebius_caps == 0;
    let rest = 2 * components as i64 - euler - boundary_circles as i64 - punctures as i64;
    let (genus, crosscaps) = if orientable {
        if rest < 0 || rest % 2 != 0 {
            return Err(Error::Degenerate(format!("inconsistent orientable surface: χ = {euler}, b = {boundary_circles}, p = {punctures}")));
        }
        (Some(rest / 2), None)
    } else {
        if rest < moebius_caps as i64 {
            return Err(Error::Degenerate(format!("inconsistent non-orientable surface: χ = {euler}")));
        }
        (None, Some(rest))
    };
    let plane_like = poly.map_or(false, |p| p.facets.len() == 2 && !p.closed);
    let audin = (!orientable && plane_like && boundary_circles == 0 && punctures == 0).then(|| euler.rem_euclid(4) == 0);
    Ok(LiftTopology { euler, orientable, components, boundary_circles, punctures, genus, crosscaps, disk_caps, moebius_caps, audin })
}

/// Relative class on a lifted torus with its Maslov index and area.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskClass {
    pub name: String,
    /// coefficients on the facet disks
    pub facets: Vec<i64>,
    pub maslov: Q,
    pub area: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneReport {
    pub vertex: [Q; 2],
    pub classes: Vec<DiskClass>,
    pub proportional: bool,
    pub factor: Option<Q>,
}

impl MonotoneReport {
    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| json!({ "class": c.name, "facets": c.facets, "maslov": q_json(&c.maslov), "area": q_json(&c.area) }))
            .collect();
        json!({
            "vertex": [q_json(&self.vertex[0]), q_json(&self.vertex[1])],
            "classes": classes,
            "proportional": self.proportional,
            "factor": self.factor.as_ref().map(q_json),
        })
    }
}

/// Areas and Maslov indices of disks on the lift of a one-vertex curve, computed as
/// if their boundaries lay in the torus fibre over the vertex. The disk through
/// facet i has area equal to the lattice distance to it and Maslov index 2; sphere
/// classes are integral relations among the facet normals; the fibre class is null.
pub fn monotone_report(curve: &PlaneCurve, poly: &DelzantPolygon) -> Result<MonotoneReport> {
    check_vertices(curve, poly)?;
    let inner: Vec<usize> = (0..curve.vertices.len()).filter(|&v| poly.is_interior(&curve.vertices[v])).collect();
    if inner.len() != 1 {
        return input(format!("expected exactly one curve vertex inside the polygon, found {}", inner.len()));
    }
    let vertex = curve.vertices[inner[0]];
    let k = poly.facets.len();
    let unit = |i: usize| (0..k).map(|j| (i == j) as i64).collect::<Vec<_>>();
    let mut classes = Vec::new();
    let class = |name: String, c: Vec<i64>| {
        let maslov = q(2 * c.iter().sum::<i64>());
        let area = c.iter().zip(&poly.facets).fold(Q::zero(), |a, (&ci, f)| a + q(ci) * f.distance(&vertex));
        DiskClass { name, facets: c, maslov, area }
    };
    // sphere classes from a unimodular corner
    if let Some((i0, i1)) = poly.corner_pairs().into_iter().find(|&(i, j)| det2(poly.facets[i].normal, poly.facets[j].normal).abs() == 1) {
        let (a, b) = (poly.facets[i0].normal, poly.facets[i1].normal);
        let det = det2(a, b);
        let mut n = 0;
        for j in (0..k).filter(|&j| j != i0 && j != i1) {
            let v = poly.facets[j].normal;
            // v = s·a + t·b
            let (s, t) = (det2(v, b) / det, det2(a, v) / det);
            let mut c = unit(j);
            c[i0] -= s;
            c[i1] -= t;
            if c.iter().sum::<i64>() < 0 {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            n += 1;
            classes.push(class(if k == 3 { "tau".into() } else { format!("sphere{n}") }, c));
        }
    }
    for i in 0..k {
        classes.push(class(format!("facet{i}"), unit(i)));
    }
    classes.push(class("fibre".into(), vec![0; k]));
    let factor = classes.iter().find(|c| !c.area.is_zero()).map(|c| c.maslov / c.area);
    let proportional = factor.map_or(false, |f| classes.iter().all(|c| c.maslov == f * c.area));
    Ok(MonotoneReport { vertex, classes, proportional, factor: if proportional { factor } else { None } })
}

/// Classification, topology and (for one-vertex curves) the monotonicity table.
pub fn toric_report(curve: &PlaneCurve, poly: &DelzantPolygon) -> Result<Value> {
    let hits = classify_boundary(curve, poly)?;
    let topo = lift_topology(curve, Some(poly));
    let inner = curve.vertices.iter().filter(|v| poly.is_interior(v)).count();
    let mono = if inner == 1 { Some(monotone_report(curve, poly)?.to_json()) } else { None };
    Ok(json!({
        "delzant": delzant_check(poly),
        "hits": hits.iter().map(|h| h.to_json()).collect::<Vec<_>>(),
        "topology": match &topo {
            Ok(t) => serde_json::to_value(t).unwrap(),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "monotone": mono,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::exact::qv;
    use proptest::prelude::*;
    use serde_json::json;

    fn pts(v: &[[i64; 2]]) -> Vec<[Q; 2]> {
        v.iter().map(|p| [q(p[0]), q(p[1])]).collect()
    }

    fn curve(v: Value) -> PlaneCurve {
        PlaneCurve::from_json(&v).unwrap()
    }

    #[test]
    fn delzant_examples() {
        let poly = |v: &[[i64; 2]]| DelzantPolygon::from_vertices(&pts(v)).unwrap();
        assert!(delzant_check(&poly(&[[0, 0], [3, 0], [0, 3]])));
        assert!(delzant_check(&poly(&[[0, 0], [2, 0], [2, 2], [0, 2]])));
        // unimodular at (2, 0) but the corner (0, 1) has tangents (0, -1), (2, -1) of determinant 2
        assert!(!delzant_check(&poly(&[[0, 0], [2, 0], [0, 1]])));
        assert!(delzant_check(&poly(&[[0, 0], [2, 0], [1, 1], [0, 1]])));
        assert!(!delzant_check(&poly(&[[0, 0], [2, 0], [1, 2]])));
        // clockwise input is reoriented
        assert!(delzant_check(&poly(&[[0, 0], [0, 3], [3, 0]])));
        assert!(delzant_check(&DelzantPolygon::quadrant()));
        assert_eq!(poly(&[[0, 0], [3, 0], [0, 3]]).corners(), pts(&[[3, 0], [0, 3], [0, 0]]));
        assert!(DelzantPolygon::from_vertices(&pts(&[[0, 0], [1, 1], [2, 2]])).is_err());
    }

    #[test]
    fn p2_torus_hits_corners() {
        let c = curve(json!({"vertices": [[2, 2], [5, 2], [2, 5]], "edges": [[0, 1], [0, 2], [1, 2]], "rays": [[0, [-1, -1]], [1, [2, -1]], [2, [-1, 2]]]}));
        let p = DelzantPolygon::from_vertices(&pts(&[[0, 0], [9, 0], [0, 9]])).unwrap();
        let hits = classify_boundary(&c, &p).unwrap();
        assert_eq!(hits.len(), 3);
        assert!(hits.iter().all(|h| h.kind == HitKind::SmoothPoint));
        let t = lift_topology(&c, Some(&p)).unwrap();
        assert_eq!((t.euler, t.orientable, t.boundary_circles, t.genus), (0, true, 0, Some(1)));
    }

    #[test]
    fn boundary_indices() {
        // a downward leg crossing the bottom edge leaves a boundary circle
        let c = curve(json!({"vertices": [[1, 1]], "rays": [[0, [0, -1]], [0, [-1, 0]], [0, [1, 1]]]}));
        let hits = classify_boundary(&c, &DelzantPolygon::quadrant()).unwrap();
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|h| h.kind == HitKind::CircleBoundary && h.index == vec![1]));
        let t = lift_topology(&c, Some(&DelzantPolygon::quadrant())).unwrap();
        assert_eq!((t.euler, t.boundary_circles, t.punctures, t.genus), (-1, 2, 1, Some(0)));
        // index two and three
        let c = curve(json!({"vertices": [[1, 3]], "rays": [[0, [1, -2]], [0, [-1, 1]], [0, [0, 1]]]}));
        let p = DelzantPolygon::from_halfplanes(vec![Facet { normal: [0, 1], level: q(0) }], false);
        assert!(p.is_err());
        let hits = classify_boundary(&c, &DelzantPolygon::quadrant()).unwrap();
        let kinds: Vec<HitKind> = hits.iter().map(|h| h.kind).collect();
        assert_eq!(kinds, vec![HitKind::Moebius, HitKind::CircleBoundary]);
        let c = curve(json!({"vertices": [[1, 4]], "rays": [[0, [1, -3]], [0, [-1, 0]], [0, [0, 1]]], "weights": [1, 1, 3]}));
        let hits = classify_boundary(&c, &DelzantPolygon::quadrant()).unwrap();
        assert!(hits.iter().any(|h| h.kind == HitKind::Unsupported && h.index == vec![3]));
        assert!(matches!(lift_topology(&c, Some(&DelzantPolygon::quadrant())), Err(Error::Unsupported(_))));
    }

    #[test]
    fn vertex_on_boundary_is_rejected() {
        let c = curve(json!({"vertices": [[0, 1]], "rays": [[0, [-1, 0]], [0, [0, -1]], [0, [1, 1]]]}));
        assert!(matches!(classify_boundary(&c, &DelzantPolygon::quadrant()), Err(Error::Input(_))));
    }

    #[test]
    fn plane_topologies() {
        let line = curve(json!({"vertices": [[0, 0]], "rays": [[0, [-1, 0]], [0, [0, -1]], [0, [1, 1]]]}));
        let t = lift_topology(&line, None).unwrap();
        assert_eq!((t.euler, t.punctures, t.genus), (-1, 3, Some(0)));
        let w2 = curve(json!({"vertices": [[0, 0]], "rays": [[0, [-1, 0]], [0, [0, -1]], [0, [1, 1]]], "weights": [2, 2, 2]}));
        let t = lift_topology(&w2, None).unwrap();
        assert_eq!((t.euler, t.punctures, t.genus), (-4, 6, Some(0)));
        let fat = curve(json!({"vertices": [[0, 0]], "rays": [[0, [1, 1]], [0, [-2, 1]], [0, [1, -2]]]}));
        let t = lift_topology(&fat, None).unwrap();
        assert_eq!((t.euler, t.punctures, t.genus), (-3, 3, Some(1)));
        let four = curve(json!({"vertices": [[0, 0]], "rays": [[0, [1, 1]], [0, [-1, 1]], [0, [-1, -1]], [0, [1, -1]]]}));
        assert_eq!(vertex_degree(&four, 0), 4);
        // a weighted line is a union of parallel cylinders
        let l = curve(json!({"lines": [[[0, 0], [1, 0]]], "weights": [3]}));
        let t = lift_topology(&l, None).unwrap();
        assert_eq!((t.euler, t.components, t.punctures, t.genus), (0, 3, 6, Some(0)));
    }

    #[test]
    fn weighted_genus_formula() {
        for w in 1..6u64 {
            let c = curve(json!({"vertices": [[0, 0]], "rays": [[0, [-1, 0]], [0, [0, -1]], [0, [1, 1]]], "weights": [w, w, w]}));
            let t = lift_topology(&c, None).unwrap();
            let w = w as i64;
            assert_eq!(t.euler, -w * w);
            assert_eq!(t.genus, Some((w - 1) * (w - 2) / 2));
            assert_eq!(t.punctures as i64, 3 * w);
        }
    }

    #[test]
    fn non_orientable_in_plane() {
        let c = curve(json!({
            "vertices": [[2, 2], [4, 2], [6, 1], [1, 6], [2, 4]],
            "edges": [[0, 1], [0, 4], [1, 2], [1, 4], [2, 3], [3, 4]],
            "rays": [[0, [-1, -1]], [2, [3, -2]], [3, [-2, 3]]]
        }));
        assert!(c.is_smooth());
        let hits = classify_boundary(&c, &DelzantPolygon::quadrant()).unwrap();
        let mut kinds: Vec<HitKind> = hits.iter().map(|h| h.kind).collect();
        kinds.sort_by_key(|k| *k as u8);
        assert_eq!(kinds, vec![HitKind::SmoothPoint, HitKind::Moebius, HitKind::Moebius]);
        let t = lift_topology(&c, Some(&DelzantPolygon::quadrant())).unwrap();
        assert_eq!((t.euler, t.orientable, t.boundary_circles, t.punctures), (-4, false, 0, 0));
        assert_eq!(t.crosscaps, Some(6));
        assert_eq!(t.audin, Some(true));
    }

    #[test]
    fn monotone_arithmetic() {
        let tri = DelzantPolygon::from_vertices(&pts(&[[0, 0], [3, 0], [0, 3]])).unwrap();
        let c = curve(json!({"vertices": [[1, 1]], "rays": [[0, [-1, -1]], [0, [2, -1]], [0, [-1, 2]]]}));
        let r = monotone_report(&c, &tri).unwrap();
        let get = |n: &str| r.classes.iter().find(|c| c.name == n).map(|c| (c.maslov, c.area)).unwrap();
        assert_eq!(get("tau"), (q(6), q(3)));
        assert_eq!(get("fibre"), (q(0), q(0)));
        for i in 0..3 {
            assert_eq!(get(&format!("facet{i}")), (q(2), q(1)));
        }
        assert!(r.proportional);
        assert_eq!(r.factor, Some(q(2)));
        let t = lift_topology(&c, Some(&tri)).unwrap();
        assert_eq!((t.euler, t.genus), (0, Some(1)));

        let off = curve(json!({"vertices": [["1/2", "1/2"]], "rays": [[0, [-1, -1]], [0, [2, -1]], [0, [-1, 2]]]}));
        let r = monotone_report(&off, &tri).unwrap();
        let areas: Vec<Q> = r.classes.iter().filter(|c| c.name.starts_with("facet")).map(|c| c.area).collect();
        assert_eq!(areas, qv(&[1, 4, 1]).iter().map(|a| a / q(2)).collect::<Vec<_>>());
        assert!(!r.proportional);

        let sq = DelzantPolygon::from_vertices(&pts(&[[0, 0], [2, 0], [2, 2], [0, 2]])).unwrap();
        let four = curve(json!({"vertices": [[1, 1]], "rays": [[0, [1, 1]], [0, [-1, 1]], [0, [-1, -1]], [0, [1, -1]]]}));
        let r = monotone_report(&four, &sq).unwrap();
        let facets: Vec<(Q, Q)> = r.classes.iter().filter(|c| c.name.starts_with("facet")).map(|c| (c.maslov, c.area)).collect();
        assert_eq!(facets, vec![(q(2), q(1)); 4]);
        assert!(r.proportional && r.factor == Some(q(2)));
        assert_eq!(lift_topology(&four, Some(&sq)).unwrap().genus, Some(1));

        let two = curve(json!({"vertices": [[1, 1], [2, 1]], "edges": [[0, 1]], "rays": [[0, [0, 1]], [0, [-1, -1]], [1, [1, -1]], [1, [0, 1]]]}));
        assert!(monotone_report(&two, &DelzantPolygon::from_vertices(&pts(&[[0, 0], [9, 0], [0, 9]])).unwrap()).is_err());
    }

    fn apply(m: [[i64; 2]; 2], t: [i64; 2], c: &PlaneCurve) -> PlaneCurve {
        let mv = |d: [i64; 2]| [m[0][0] * d[0] + m[0][1] * d[1], m[1][0] * d[0] + m[1][1] * d[1]];
        let mp = |p: [Q; 2]| {
            [p[0] * q(m[0][0]) + p[1] * q(m[0][1]) + q(t[0]), p[0] * q(m[1][0]) + p[1] * q(m[1][1]) + q(t[1])]
        };
        let mut out = c.clone();
        out.vertices = c.vertices.iter().map(|&p| mp(p)).collect();
        for e in &mut out.edges {
            e.kind = match e.kind {
                EdgeKind::Ray { base, dir } => EdgeKind::Ray { base, dir: mv(dir) },
                EdgeKind::Line { point, dir } => EdgeKind::Line { point: mp(point), dir: mv(dir) },
                k => k,
            };
        }
        out
    }

    fn apply_poly(m: [[i64; 2]; 2], t: [i64; 2], p: &DelzantPolygon) -> DelzantPolygon {
        let c = PlaneCurve { vertices: p.corners(), edges: vec![] };
        DelzantPolygon::from_vertices(&apply(m, t, &c).vertices).unwrap()
    }

    proptest! {
        #[test]
        fn classification_is_affine_invariant(a in -3i64..4, b in -3i64..4, flip in any::<bool>(), tx in -5i64..6, ty in -5i64..6) {
            // unimodular matrix [[1, a], [0, 1]]·[[1, 0], [b, 1]], optionally reflected
            let m0 = [[1 + a * b, a], [b, 1]];
            let m = if flip { [[m0[1][0], m0[1][1]], [m0[0][0], m0[0][1]]] } else { m0 };
            let tri = DelzantPolygon::from_vertices(&pts(&[[0, 0], [9, 0], [0, 9]])).unwrap();
            let c = curve(json!({"vertices": [[2, 2], [5, 2], [2, 5]], "edges": [[0, 1], [0, 2], [1, 2]], "rays": [[0, [-1, -1]], [1, [2, -1]], [2, [-1, 2]]]}));
            let before: Vec<(HitKind, Vec<i64>)> = classify_boundary(&c, &tri).unwrap().into_iter().map(|h| (h.kind, h.index)).collect();
            let after: Vec<(HitKind, Vec<i64>)> = classify_boundary(&apply(m, [tx, ty], &c), &apply_poly(m, [tx, ty], &tri)).unwrap().into_iter().map(|h| (h.kind, h.index)).collect();
            prop_assert_eq!(before, after);
            prop_assert_eq!(lift_topology(&apply(m, [tx, ty], &c), Some(&apply_poly(m, [tx, ty], &tri))).unwrap().euler, 0);
        }
    }
}

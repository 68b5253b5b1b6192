//! Tropical hypersurfaces as weighted polyhedral complexes, plane curves,
//! tangent lines and adapted integral frames.

use crate::error::{input, Error, Result};
use crate::polyhedral::exact::{det2, det_int, gcd_vec, primitive, q, qv, to_f64, Q};
use crate::polyhedral::{discrete_legendre, Polyhedron, Subdivision};
use num_traits::{One, Zero};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct TropicalCell {
    pub poly: Polyhedron,
    /// lattice length of the dual edge for top-dimensional cells, 1 otherwise
    pub weight: u64,
    pub dual_face: usize,
}

#[derive(Clone, Debug)]
pub struct TropicalComplex {
    pub ambient: usize,
    pub cells: Vec<TropicalCell>,
    pub subdivision: Subdivision,
    face_to_cell: Vec<Option<usize>>,
}

impl TropicalComplex {
    /// Face of the subdivision dual to a cell.
    pub fn dual_cell(&self, cell: usize) -> usize {
        self.cells[cell].dual_face
    }

    /// Cell dual to a face of dimension at least one.
    pub fn dual_face(&self, face: usize) -> Option<usize> {
        self.face_to_cell[face]
    }

    pub fn top_cells(&self) -> impl Iterator<Item = usize> + '_ {
        let top = self.ambient - 1;
        (0..self.cells.len()).filter(move |&c| self.cells[c].poly.dim == top)
    }

    pub fn is_smooth(&self) -> bool {
        crate::polyhedral::is_unimodal(&self.subdivision)
    }

    pub fn to_plane_curve(&self) -> Result<PlaneCurve> {
        if self.ambient != 2 {
            return Err(Error::Unsupported("plane curve view needs ambient dimension 2".into()));
        }
        let mut vcells: Vec<usize> = (0..self.cells.len()).filter(|&c| self.cells[c].poly.dim == 0).collect();
        vcells.sort_by(|a, b| self.cells[*a].poly.vertices.cmp(&self.cells[*b].poly.vertices));
        let vertices: Vec<[Q; 2]> = vcells
            .iter()
            .map(|&c| {
                let v = &self.cells[c].poly.vertices[0];
                [v[0], v[1]]
            })
            .collect();
        let vertex_index = |p: &Vec<Q>| vertices.iter().position(|v| v[0] == p[0] && v[1] == p[1]);
        let mut segments = Vec::new();
        let mut rays = Vec::new();
        let mut lines = Vec::new();
        for c in self.top_cells() {
            let cell = &self.cells[c];
            let p = &cell.poly;
            let face = Some(c);
            if !p.lineality.is_empty() {
                let v = &p.vertices[0];
                let d = &p.lineality[0];
                lines.push(CurveEdge {
                    kind: EdgeKind::Line { point: [v[0], v[1]], dir: [d[0], d[1]] },
                    weight: cell.weight,
                    cell: face,
                });
            } else if !p.rays.is_empty() {
                let base = vertex_index(&p.vertices[0]).expect("ray base is a vertex");
                let r = &p.rays[0];
                rays.push(CurveEdge { kind: EdgeKind::Ray { base, dir: [r[0], r[1]] }, weight: cell.weight, cell: face });
            } else {
                let a = vertex_index(&p.vertices[0]).expect("segment end is a vertex");
                let b = vertex_index(&p.vertices[1]).expect("segment end is a vertex");
                segments.push(CurveEdge { kind: EdgeKind::Segment { a, b }, weight: cell.weight, cell: face });
            }
        }
        segments.sort_by_key(|e| match e.kind {
            EdgeKind::Segment { a, b } => (a, b),
            _ => unreachable!(),
        });
        rays.sort_by_key(|e| match e.kind {
            EdgeKind::Ray { base, dir } => (base, dir),
            _ => unreachable!(),
        });
        let mut edges = segments;
        edges.extend(rays);
        edges.extend(lines);
        Ok(PlaneCurve { vertices, edges })
    }
}

/// Dual complex of the subdivision: cells ě for every face e of positive dimension.
pub fn tropical_hypersurface(s: &Subdivision) -> TropicalComplex {
    let (_, dual) = discrete_legendre(s);
    let mut cells = Vec::new();
    let mut face_to_cell = vec![None; s.faces.len()];
    for (f, face) in s.faces.iter().enumerate() {
        if face.dim == 0 {
            continue;
        }
        let weight = if face.dim == 1 {
            let v = crate::polyhedral::diff_i(s.point(face.vertices[0]), s.point(face.vertices[1]));
            gcd_vec(&v).unsigned_abs()
        } else {
            1
        };
        face_to_cell[f] = Some(cells.len());
        cells.push(TropicalCell { poly: dual.cells[f].clone(), weight, dual_face: f });
    }
    TropicalComplex { ambient: s.polytope.ambient_dim(), cells, subdivision: s.clone(), face_to_cell }
}

/// Weighted balancing at every codimension-one cell (ambient dimension at most 3).
pub fn balancing_check(x: &TropicalComplex) -> bool {
    let d = x.ambient;
    if d == 1 {
        return true;
    }
    if d > 3 {
        return true;
    }
    let top: Vec<usize> = x.top_cells().collect();
    for (si, s) in x.cells.iter().enumerate() {
        if s.poly.dim + 2 != d {
            continue;
        }
        let ps = relint_point(&s.poly);
        let sdir: Option<Vec<i64>> = if d == 3 { Some(lin_direction(&s.poly)) } else { None };
        let mut sum = vec![0i64; d];
        for &t in &top {
            if !x.subdivision.is_subface(x.dual_cell(t), x.dual_cell(si)) {
                continue;
            }
            let pt = relint_point(&x.cells[t].poly);
            let u: Vec<Q> = pt.iter().zip(&ps).map(|(a, b)| a - b).collect();
            let g = match &sdir {
                None => primitive(&u),
                Some(sv) => {
                    let sv = qv(sv);
                    primitive(&[
                        sv[1] * u[2] - sv[2] * u[1],
                        sv[2] * u[0] - sv[0] * u[2],
                        sv[0] * u[1] - sv[1] * u[0],
                    ])
                }
            };
            for i in 0..d {
                sum[i] += x.cells[t].weight as i64 * g[i];
            }
        }
        if sum.iter().any(|&v| v != 0) {
            return false;
        }
    }
    true
}

fn relint_point(p: &Polyhedron) -> Vec<Q> {
    let d = p.ambient_dim();
    let n = Q::from_integer(p.vertices.len() as i128);
    let mut c = vec![Q::zero(); d];
    for v in &p.vertices {
        for i in 0..d {
            c[i] += v[i] / n;
        }
    }
    for r in &p.rays {
        for i in 0..d {
            c[i] += q(r[i]);
        }
    }
    c
}

fn lin_direction(p: &Polyhedron) -> Vec<i64> {
    if let Some(l) = p.lineality.first() {
        return l.clone();
    }
    if let Some(r) = p.rays.first() {
        return r.clone();
    }
    let d: Vec<Q> = p.vertices[1].iter().zip(&p.vertices[0]).map(|(a, b)| a - b).collect();
    primitive(&d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Segment { a: usize, b: usize },
    Ray { base: usize, dir: [i64; 2] },
    Line { point: [Q; 2], dir: [i64; 2] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveEdge {
    pub kind: EdgeKind,
    pub weight: u64,
    /// originating cell when built from a subdivision
    pub cell: Option<usize>,
}

/// A plane tropical curve given explicitly by vertices, segments, rays and lines.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    pub vertices: Vec<[Q; 2]>,
    pub edges: Vec<CurveEdge>,
}

/// One outgoing direction at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Leg {
    pub dir: [i64; 2],
    pub weight: u64,
    pub edge: usize,
}

impl PlaneCurve {
    pub fn vertex_f64(&self, i: usize) -> [f64; 2] {
        [to_f64(&self.vertices[i][0]), to_f64(&self.vertices[i][1])]
    }

    /// Primitive direction of a segment from `a` to `b`.
    pub fn segment_dir(&self, a: usize, b: usize) -> [i64; 2] {
        let d = [self.vertices[b][0] - self.vertices[a][0], self.vertices[b][1] - self.vertices[a][1]];
        let p = primitive(&d);
        [p[0], p[1]]
    }

    pub fn star(&self, v: usize) -> Vec<Leg> {
        let mut legs = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            match e.kind {
                EdgeKind::Segment { a, b } => {
                    if a == v {
                        legs.push(Leg { dir: self.segment_dir(a, b), weight: e.weight, edge: i });
                    }
                    if b == v {
                        legs.push(Leg { dir: self.segment_dir(b, a), weight: e.weight, edge: i });
                    }
                }
                EdgeKind::Ray { base, dir } if base == v => legs.push(Leg { dir, weight: e.weight, edge: i }),
                _ => {}
            }
        }
        legs
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.vertices.len()).all(|v| {
            let s = self.star(v);
            let sx: i64 = s.iter().map(|l| l.weight as i64 * l.dir[0]).sum();
            let sy: i64 = s.iter().map(|l| l.weight as i64 * l.dir[1]).sum();
            sx == 0 && sy == 0
        })
    }

    /// Trivalent with weight one and pairwise unimodular directions everywhere.
    pub fn is_smooth(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1)
            && (0..self.vertices.len()).all(|v| {
                let s = self.star(v);
                s.len() == 3
                    && (0..3).all(|i| (i + 1..3).all(|j| det2(s[i].dir, s[j].dir).abs() == 1))
            })
    }

    pub fn tangent_line(&self, v: usize) -> Result<TropicalLine> {
        if v >= self.vertices.len() {
            return input(format!("vertex {v} not found"));
        }
        Ok(TropicalLine {
            center: self.vertices[v].to_vec(),
            rays: self.star(v).iter().map(|l| l.dir.to_vec()).collect(),
            weights: self.star(v).iter().map(|l| l.weight).collect(),
        })
    }

    pub fn find_vertex(&self, p: [Q; 2]) -> Option<usize> {
        self.vertices.iter().position(|v| *v == p)
    }

    /// Euclidean diameter of the vertex set (1 when there is at most one vertex).
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in 0..i {
                let a = self.vertex_f64(i);
                let b = self.vertex_f64(j);
                d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        if d == 0.0 {
            1.0
        } else {
            d
        }
    }

    pub fn from_json(v: &Value) -> Result<PlaneCurve> {
        let arr = |key: &str| v.get(key).and_then(|x| x.as_array()).cloned().unwrap_or_default();
        let mut vertices = Vec::new();
        for p in arr("vertices") {
            vertices.push(parse_point(&p)?);
        }
        let mut edges = Vec::new();
        for e in arr("edges") {
            let ij = int_list(&e)?;
            if ij.len() != 2 || ij.iter().any(|&i| i < 0 || i as usize >= vertices.len()) || ij[0] == ij[1] {
                return input(format!("bad edge {e}"));
            }
            edges.push(CurveEdge { kind: EdgeKind::Segment { a: ij[0] as usize, b: ij[1] as usize }, weight: 1, cell: None });
        }
        for r in arr("rays") {
            let parts = r.as_array().ok_or_else(|| Error::Input(format!("bad ray {r}")))?;
            if parts.len() != 2 {
                return input(format!("ray must be [vertex, [dx, dy]], got {r}"));
            }
            let base = parts[0].as_u64().ok_or_else(|| Error::Input(format!("bad ray base {r}")))? as usize;
            let dir = int_list(&parts[1])?;
            if base >= vertices.len() || dir.len() != 2 || gcd_vec(&dir) != 1 {
                return input(format!("ray needs a valid vertex and a primitive direction, got {r}"));
            }
            edges.push(CurveEdge { kind: EdgeKind::Ray { base, dir: [dir[0], dir[1]] }, weight: 1, cell: None });
        }
        for l in arr("lines") {
            let parts = l.as_array().ok_or_else(|| Error::Input(format!("bad line {l}")))?;
            if parts.len() != 2 {
                return input(format!("line must be [[x, y], [dx, dy]], got {l}"));
            }
            let point = parse_point(&parts[0])?;
            let dir = int_list(&parts[1])?;
            if dir.len() != 2 || gcd_vec(&dir) != 1 {
                return input(format!("line direction must be primitive, got {l}"));
            }
            edges.push(CurveEdge { kind: EdgeKind::Line { point, dir: [dir[0], dir[1]] }, weight: 1, cell: None });
        }
        let weights = arr("weights");
        if !weights.is_empty() {
            if weights.len() != edges.len() {
                return input(format!("{} weights for {} edges", weights.len(), edges.len()));
            }
            for (e, w) in edges.iter_mut().zip(&weights) {
                let w = w.as_u64().filter(|&w| w >= 1).ok_or_else(|| Error::Input(format!("bad weight {w}")))?;
                e.weight = w;
            }
        }
        if edges.is_empty() {
            return input("curve has no edges");
        }
        let c = PlaneCurve { vertices, edges };
        if !c.is_balanced() {
            return input("curve is not balanced");
        }
        Ok(c)
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self.vertices.iter().map(|p| json!([q_json(&p[0]), q_json(&p[1])])).collect();
        let mut edges = Vec::new();
        let mut rays = Vec::new();
        let mut lines = Vec::new();
        let mut weights = Vec::new();
        for e in &self.edges {
            if let EdgeKind::Segment { a, b } = e.kind {
                edges.push(json!([a, b]));
                weights.push(e.weight);
            }
        }
        for e in &self.edges {
            if let EdgeKind::Ray { base, dir } = e.kind {
                rays.push(json!([base, dir]));
                weights.push(e.weight);
            }
        }
        for e in &self.edges {
            if let EdgeKind::Line { point, dir } = e.kind {
                lines.push(json!([[q_json(&point[0]), q_json(&point[1])], dir]));
                weights.push(e.weight);
            }
        }
        let mut out = json!({ "vertices": vertices, "edges": edges, "rays": rays, "weights": weights });
        if !lines.is_empty() {
            out["lines"] = Value::Array(lines);
        }
        out
    }
}

pub fn q_json(x: &Q) -> Value {
    if x.is_integer() {
        json!(x.to_integer() as i64)
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn parse_q(v: &Value) -> Result<Q> {
    if let Some(i) = v.as_i64() {
        return Ok(q(i));
    }
    if let Some(s) = v.as_str() {
        let parse = |t: &str| t.trim().parse::<i128>().map_err(|_| Error::Input(format!("bad rational {s:?}")));
        return match s.split_once('/') {
            Some((a, b)) => {
                let d = parse(b)?;
                if d == 0 {
                    return input(format!("zero denominator in {s:?}"));
                }
                Ok(Q::new(parse(a)?, d))
            }
            None => Ok(Q::from_integer(parse(s)?)),
        };
    }
    if let Some(f) = v.as_f64() {
        let r = num_rational::Ratio::<i64>::approximate_float(f).ok_or_else(|| Error::Input(format!("bad number {f}")))?;
        return Ok(Q::new(*r.numer() as i128, *r.denom() as i128));
    }
    input(format!("expected a number, got {v}"))
}

fn parse_point(v: &Value) -> Result<[Q; 2]> {
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Input(format!("expected a 2d point, got {v}")))?;
    Ok([parse_q(&a[0])?, parse_q(&a[1])?])
}

fn int_list(v: &Value) -> Result<Vec<i64>> {
    let a = v.as_array().ok_or_else(|| Error::Input(format!("expected an integer list, got {v}")))?;
    a.iter().map(|x| x.as_i64().ok_or_else(|| Error::Input(format!("expected an integer, got {x}")))).collect()
}

/// Cone over the star of a vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalLine {
    pub center: Vec<Q>,
    pub rays: Vec<Vec<i64>>,
    pub weights: Vec<u64>,
}

impl TropicalLine {
    pub fn standard(n: usize) -> TropicalLine {
        let d = n + 1;
        let mut rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
        rays.push(vec![-1; d]);
        TropicalLine { center: vec![Q::zero(); d], rays, weights: vec![1; d + 1] }
    }

    pub fn is_balanced(&self) -> bool {
        let d = self.center.len();
        (0..d).all(|i| self.rays.iter().zip(&self.weights).map(|(r, w)| *w as i64 * r[i]).sum::<i64>() == 0)
    }

    /// Every choice of all but one generator is a lattice basis.
    pub fn is_smooth(&self) -> bool {
        let d = self.center.len();
        self.rays.len() == d + 1
            && self.weights.iter().all(|&w| w == 1)
            && (0..self.rays.len()).all(|skip| {
                let m: Vec<Vec<i64>> = (0..self.rays.len()).filter(|&i| i != skip).map(|i| self.rays[i].clone()).collect();
                det_int(&m).abs() == 1
            })
    }
}

/// Integral affine change of coordinates `x ↦ A (x − origin)` with `|det A| = 1`,
/// acting on the torus by the inverse transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFrame {
    pub origin: Vec<Q>,
    pub a: Vec<Vec<i64>>,
    pub a_inv: Vec<Vec<i64>>,
    /// generator order (u0, u1, ..., u_{n+1}) as indices into the line's rays
    pub order: Vec<usize>,
}

fn colex(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl AffineFrame {
    pub fn identity(d: usize) -> AffineFrame {
        let id: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
        AffineFrame { origin: vec![Q::zero(); d], a: id.clone(), a_inv: id, order: (0..=d).collect() }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn to_local(&self, x: &[Q]) -> Vec<Q> {
        let d = self.dim();
        (0..d).map(|i| (0..d).fold(Q::zero(), |acc, j| acc + q(self.a[i][j]) * (x[j] - self.origin[j]))).collect()
    }

    pub fn from_local(&self, x: &[Q]) -> Vec<Q> {
        let d = self.dim();
        (0..d).map(|i| (0..d).fold(self.origin[i], |acc, j| acc + q(self.a_inv[i][j]) * x[j])).collect()
    }

    pub fn vec_to_local(&self, v: &[i64]) -> Vec<i64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.a[i][j] * v[j]).sum()).collect()
    }

    pub fn vec_from_local_f64(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.a_inv[i][j] as f64 * v[j]).sum()).collect()
    }

    pub fn point_from_local_f64(&self, v: &[f64]) -> Vec<f64> {
        let w = self.vec_from_local_f64(v);
        w.iter().zip(&self.origin).map(|(a, o)| a + to_f64(o)).collect()
    }

    /// Global torus vector from a local one: `y = Aᵀ y_loc`.
    pub fn torus_from_local_f64(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.a[j][i] as f64 * y[j]).sum()).collect()
    }

    /// Local torus vector from a global one: `y_loc = A⁻ᵀ y`.
    pub fn torus_to_local_f64(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.a_inv[j][i] as f64 * y[j]).sum()).collect()
    }

    pub fn compose_inverse_is_identity(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (0..d).map(|k| self.a[i][k] * self.a_inv[k][j]).sum::<i64>() == (i == j) as i64))
    }
}

/// Frame sending the center to 0 and the ordered generators u1, ..., u_{n+1} to the
/// standard basis. u0 is the generator that is smallest when coordinates are compared
/// from the last one backwards; the rest follow in the same order, with the last two
/// swapped if needed to make the frame orientation preserving.
pub fn adapted_frame(l: &TropicalLine) -> Result<AffineFrame> {
    if !l.is_smooth() {
        return Err(Error::Unsupported("tangent line is not smooth; use the covering model".into()));
    }
    let d = l.center.len();
    let mut order: Vec<usize> = (0..l.rays.len()).collect();
    order.sort_by(|&i, &j| colex(&l.rays[i], &l.rays[j]));
    // columns u1..u_{n+1}
    let cols = |ord: &[usize]| -> Vec<Vec<i64>> { (0..d).map(|i| ord[1..].iter().map(|&k| l.rays[k][i]).collect()).collect() };
    if d >= 2 && det_int(&cols(&order)) < 0 {
        order.swap(d - 1, d);
    }
    let u = cols(&order);
    let a_inv = u.clone();
    let a = integer_inverse(&u)?;
    Ok(AffineFrame { origin: l.center.clone(), a, a_inv, order })
}

/// Inverse of a unimodular integer matrix.
pub fn integer_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let d = m.len();
    let rows: Vec<Vec<Q>> = m.iter().map(|r| qv(r)).collect();
    let mut inv = vec![vec![0i64; d]; d];
    for j in 0..d {
        let e: Vec<Q> = (0..d).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        let col = crate::polyhedral::exact::solve(&rows, &e).ok_or_else(|| Error::Degenerate("singular frame".into()))?;
        for i in 0..d {
            if !col[i].is_integer() {
                return Err(Error::Degenerate("frame is not unimodular".into()));
            }
            inv[i][j] = col[i].to_integer() as i64;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::{regular_subdivision, LatticePolytope, LiftingFunction};

    pub(crate) fn example_curve() -> PlaneCurve {
        let p = LatticePolytope::new(&[vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap();
        let mut nu = LiftingFunction::constant(&p, 0);
        nu.values.insert(vec![0, 0], 1);
        let s = regular_subdivision(&p, &nu).unwrap();
        tropical_hypersurface(&s).to_plane_curve().unwrap()
    }

    #[test]
    fn example_curve_shape() {
        let c = example_curve();
        assert_eq!(c.vertices, vec![[q(0), q(0)], [q(0), q(1)], [q(1), q(0)]]);
        let mut rays: Vec<([i64; 2], [i64; 2])> = c
            .edges
            .iter()
            .filter_map(|e| match e.kind {
                EdgeKind::Ray { base, dir } => Some(([c.vertices[base][0].to_integer() as i64, c.vertices[base][1].to_integer() as i64], dir)),
                _ => None,
            })
            .collect();
        rays.sort();
        assert_eq!(rays, vec![([0, 0], [-1, -1]), ([0, 1], [-1, 2]), ([1, 0], [2, -1])]);
        // the interior edge (0,0)-(1,1) is dual to the segment on x1 + x2 = 1
        let mut segs: Vec<(usize, usize)> = c
            .edges
            .iter()
            .filter_map(|e| match e.kind {
                EdgeKind::Segment { a, b } => Some((a, b)),
                _ => None,
            })
            .collect();
        segs.sort();
        assert_eq!(segs, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(c.edges.iter().all(|e| e.weight == 1));
        assert!(c.is_smooth() && c.is_balanced());
    }

    #[test]
    fn standard_simplex_gives_standard_line() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let s = regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap();
        let x = tropical_hypersurface(&s);
        assert!(balancing_check(&x));
        let c = x.to_plane_curve().unwrap();
        assert_eq!(c.vertices, vec![[q(0), q(0)]]);
        let mut dirs: Vec<[i64; 2]> = c.star(0).iter().map(|l| l.dir).collect();
        dirs.sort();
        assert_eq!(dirs, vec![[-1, -1], [0, 1], [1, 0]]);
    }

    #[test]
    fn segment_gives_weight_two_line() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![2, 0]]).unwrap();
        let s = regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap();
        let x = tropical_hypersurface(&s);
        let c = x.to_plane_curve().unwrap();
        assert_eq!(c.edges.len(), 1);
        assert_eq!(c.edges[0].weight, 2);
        assert!(matches!(c.edges[0].kind, EdgeKind::Line { dir, .. } if dir == [0, 1] || dir == [0, -1]));
        assert!(!x.is_smooth());
    }

    #[test]
    fn duality_round_trip() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap();
        let mut nu = LiftingFunction::constant(&p, 0);
        nu.values.insert(vec![0, 0], 1);
        let x = tropical_hypersurface(&regular_subdivision(&p, &nu).unwrap());
        for c in 0..x.cells.len() {
            assert_eq!(x.dual_face(x.dual_cell(c)), Some(c));
        }
    }

    #[test]
    fn space_surface_is_balanced() {
        let p = LatticePolytope::new(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let x = tropical_hypersurface(&regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap());
        assert!(balancing_check(&x));
        assert_eq!(x.top_cells().count(), 6);
    }

    #[test]
    fn tangent_lines() {
        let c = example_curve();
        let mut at0 = c.tangent_line(0).unwrap().rays;
        at0.sort();
        assert_eq!(at0, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        let v = c.find_vertex([q(1), q(0)]).unwrap();
        let mut at1 = c.tangent_line(v).unwrap().rays;
        at1.sort();
        assert_eq!(at1, vec![vec![-1, 0], vec![-1, 1], vec![2, -1]]);
        assert!(c.tangent_line(9).is_err());
    }

    #[test]
    fn frames() {
        let std = TropicalLine::standard(1);
        let f = adapted_frame(&std).unwrap();
        assert_eq!(f.a, vec![vec![1, 0], vec![0, 1]]);
        let l = TropicalLine { center: vec![q(1), q(0)], rays: vec![vec![-1, 0], vec![2, -1], vec![-1, 1]], weights: vec![1; 3] };
        let f = adapted_frame(&l).unwrap();
        assert_eq!(f.vec_to_local(&[-1, 1]), vec![1, 0]);
        assert_eq!(f.vec_to_local(&[-1, 0]), vec![0, 1]);
        assert_eq!(f.vec_to_local(&[2, -1]), vec![-1, -1]);
        assert!(f.compose_inverse_is_identity());
        assert_eq!(f.to_local(&[q(1), q(0)]), vec![q(0), q(0)]);
        let bad = TropicalLine { center: vec![q(0), q(0)], rays: vec![vec![1, 1], vec![-2, 1], vec![1, -2]], weights: vec![1; 3] };
        assert!(adapted_frame(&bad).is_err());
        assert!(adapted_frame(&TropicalLine::standard(2)).unwrap().a.iter().enumerate().all(|(i, r)| r[i] == 1));
    }

    #[test]
    fn balancing_examples() {
        let mk = |dirs: &[[i64; 2]], w: &[u64]| PlaneCurve {
            vertices: vec![[q(0), q(0)]],
            edges: dirs
                .iter()
                .zip(w)
                .map(|(d, w)| CurveEdge { kind: EdgeKind::Ray { base: 0, dir: *d }, weight: *w, cell: None })
                .collect(),
        };
        assert!(mk(&[[1, 1], [-2, 1], [1, -2]], &[1, 1, 1]).is_balanced());
        assert!(!mk(&[[1, 1], [-2, 1], [1, -2]], &[1, 1, 1]).is_smooth());
        assert!(!mk(&[[1, 0], [0, 1], [-1, -1]], &[1, 1, 2]).is_balanced());
    }

    #[test]
    fn json_round_trip() {
        let c = example_curve();
        let back = PlaneCurve::from_json(&c.to_json()).unwrap();
        assert_eq!(back.vertices, c.vertices);
        assert_eq!(back.edges.len(), c.edges.len());
        let unbalanced = json!({"vertices": [[0, 0]], "rays": [[0, [1, 0]], [0, [0, 1]], [0, [-1, -1]]], "weights": [1, 1, 2]});
        assert!(PlaneCurve::from_json(&unbalanced).is_err());
    }
}

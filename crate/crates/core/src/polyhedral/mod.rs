//! Exact lattice polytopes, regular subdivisions and the discrete Legendre transform.

pub mod exact;
pub mod hull;
mod legendre;

pub use exact::Q;
pub use legendre::{discrete_legendre, DualDecomposition, PiecewiseAffine, Polyhedron};

use crate::error::{input, Error, Result};
use exact::{det_int, q, qv, sub, to_f64};
use hull::{combinations, hull, Hull};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Integer lattice of a given rank in standard coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub rank: usize,
}

impl Lattice {
    pub fn new(rank: usize) -> Result<Lattice> {
        if rank == 0 {
            return input("lattice rank must be positive");
        }
        Ok(Lattice { rank })
    }

    /// A change of basis is admissible when it is square of full size with determinant ±1.
    pub fn is_basis_change(&self, m: &[Vec<i64>]) -> bool {
        m.len() == self.rank && m.iter().all(|r| r.len() == self.rank) && det_int(m).abs() == 1
    }
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: Vec<Vec<i64>>,
    hull: Hull,
    hull_points: Vec<Vec<i64>>,
}

impl LatticePolytope {
    /// Convex hull of the given integer points.
    pub fn new(points: &[Vec<i64>]) -> Result<LatticePolytope> {
        if points.is_empty() {
            return input("polytope needs at least one point");
        }
        let d = points[0].len();
        if d == 0 || points.iter().any(|p| p.len() != d) {
            return input("points must share a positive dimension");
        }
        let mut pts: Vec<Vec<i64>> = points.to_vec();
        pts.sort();
        pts.dedup();
        let h = hull(&pts.iter().map(|p| qv(p)).collect::<Vec<_>>());
        let vertices: Vec<Vec<i64>> = h.vertices.iter().map(|&i| pts[i].clone()).collect();
        let mut poly = LatticePolytope { vertices, lattice_points: Vec::new(), hull: h, hull_points: pts };
        let lo: Vec<i64> = (0..d).map(|i| poly.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..d).map(|i| poly.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut cur = lo.clone();
        loop {
            if poly.contains(&qv(&cur)) {
                poly.lattice_points.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == d {
                    poly.lattice_points.sort();
                    return Ok(poly);
                }
                cur[i] += 1;
                if cur[i] <= hi[i] {
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        match self.hull.affine.local(p) {
            Some(u) => self.hull.contains_local(&u),
            None => false,
        }
    }

    pub fn contains_f64(&self, p: &[f64], tol: f64) -> bool {
        let d = self.ambient_dim();
        let k = self.dim();
        let base: Vec<f64> = self.hull.affine.base.iter().map(to_f64).collect();
        let basis: Vec<Vec<f64>> = self.hull.affine.basis.iter().map(|b| b.iter().map(to_f64).collect()).collect();
        // least squares local coordinates via normal equations
        let diff: Vec<f64> = (0..d).map(|i| p[i] - base[i]).collect();
        let mut g = nalgebra::DMatrix::<f64>::zeros(k, k);
        let mut rhs = nalgebra::DVector::<f64>::zeros(k);
        for a in 0..k {
            for b in 0..k {
                g[(a, b)] = (0..d).map(|i| basis[a][i] * basis[b][i]).sum();
            }
            rhs[a] = (0..d).map(|i| basis[a][i] * diff[i]).sum();
        }
        let u = if k == 0 { nalgebra::DVector::zeros(0) } else { g.lu().solve(&rhs).unwrap() };
        let resid: f64 = (0..d)
            .map(|i| {
                let r = diff[i] - (0..k).map(|a| u[a] * basis[a][i]).sum::<f64>();
                r * r
            })
            .sum::<f64>()
            .sqrt();
        if resid > tol {
            return false;
        }
        self.hull
            .facets
            .iter()
            .all(|f| (0..k).map(|a| to_f64(&f.normal[a]) * u[a]).sum::<f64>() >= to_f64(&f.offset) - tol)
    }

    /// Facets as vertex lists.
    pub fn facet_vertices(&self) -> Vec<Vec<Vec<i64>>> {
        self.hull
            .facets
            .iter()
            .map(|f| {
                f.points
                    .iter()
                    .filter(|&&i| self.hull.vertices.contains(&i))
                    .map(|&i| self.hull_points[i].clone())
                    .collect()
            })
            .collect()
    }

    /// Normalized lattice volume for a full-dimensional simplex, None otherwise.
    pub fn simplex_volume(&self) -> Option<i64> {
        let k = self.dim();
        if self.vertices.len() != k + 1 || k != self.ambient_dim() {
            return None;
        }
        let rows: Vec<Vec<i64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(&self.vertices[0]).map(|(a, b)| a - b).collect())
            .collect();
        Some(det_int(&rows).abs())
    }
}

/// Integer heights on the lattice points of a polytope.
#[derive(Clone, Debug, Default)]
pub struct LiftingFunction {
    pub values: BTreeMap<Vec<i64>, i64>,
}

impl LiftingFunction {
    pub fn get(&self, p: &[i64]) -> Option<i64> {
        self.values.get(p).copied()
    }

    pub fn constant(p: &LatticePolytope, c: i64) -> LiftingFunction {
        LiftingFunction { values: p.lattice_points.iter().map(|v| (v.clone(), c)).collect() }
    }
}

/// A face of the subdivision, stored by its vertex indices into the lattice-point list.
#[derive(Clone, Debug)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub points: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub polytope: LatticePolytope,
    pub lifting: LiftingFunction,
    pub faces: Vec<Face>,
    /// indices of top-dimensional cells
    pub cells: Vec<usize>,
}

impl Subdivision {
    pub fn point(&self, i: usize) -> &Vec<i64> {
        &self.polytope.lattice_points[i]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.lifting.get(self.point(i)).expect("lifting checked on construction")
    }

    pub fn face_vertices(&self, f: usize) -> Vec<Vec<i64>> {
        self.faces[f].vertices.iter().map(|&i| self.point(i).clone()).collect()
    }

    /// Inclusion in the face lattice.
    pub fn is_subface(&self, a: usize, b: usize) -> bool {
        self.faces[a].vertices.iter().all(|v| self.faces[b].vertices.contains(v))
    }

    pub fn cell_polytope(&self, f: usize) -> LatticePolytope {
        LatticePolytope::new(&self.face_vertices(f)).expect("faces are nonempty")
    }

    pub fn find_face(&self, vertices: &[Vec<i64>]) -> Option<usize> {
        let mut idx: Vec<usize> = vertices
            .iter()
            .map(|v| self.polytope.lattice_points.iter().position(|p| p == v))
            .collect::<Option<Vec<_>>>()?;
        idx.sort();
        self.faces.iter().position(|f| f.vertices == idx)
    }
}

/// Projected lower hull of the lifted lattice points.
pub fn regular_subdivision(p: &LatticePolytope, nu: &LiftingFunction) -> Result<Subdivision> {
    for v in &p.lattice_points {
        if nu.get(v).is_none() {
            return input(format!("missing lifting value at {v:?}"));
        }
    }
    let k = p.dim();
    if k == 0 {
        return Err(Error::Degenerate("polytope is a single point".into()));
    }
    let pts = &p.lattice_points;
    let local: Vec<Vec<Q>> = pts.iter().map(|v| p.hull.affine.local(&qv(v)).unwrap()).collect();
    let heights: Vec<Q> = pts.iter().map(|v| q(nu.get(v).unwrap())).collect();

    // lower facets: affine functions through k+1 lifted points lying below all others
    let mut top: Vec<Vec<usize>> = Vec::new();
    for combo in combinations(pts.len(), k + 1) {
        let a: Vec<Vec<Q>> = combo
            .iter()
            .map(|&i| {
                let mut r = local[i].clone();
                r.push(q(1));
                r
            })
            .collect();
        let b: Vec<Q> = combo.iter().map(|&i| heights[i]).collect();
        let Some(coef) = exact::solve(&a, &b) else { continue };
        let slack: Vec<Q> = (0..pts.len())
            .map(|i| heights[i] - exact::dot(&coef[..k], &local[i]) - coef[k])
            .collect();
        if slack.iter().any(|s| *s < Q::zero()) {
            continue;
        }
        let on: Vec<usize> = (0..pts.len()).filter(|&i| slack[i].is_zero()).collect();
        if !top.contains(&on) {
            top.push(on);
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    let mut cells = Vec::new();
    for cell in &top {
        let idx = add_faces(pts, cell, &mut faces);
        cells.push(idx);
    }
    Ok(Subdivision { polytope: p.clone(), lifting: nu.clone(), faces, cells })
}

/// Registers the face spanned by `points` and all its subfaces; returns its index.
fn add_faces(pts: &[Vec<i64>], points: &[usize], faces: &mut Vec<Face>) -> usize {
    let h = hull(&points.iter().map(|&i| qv(&pts[i])).collect::<Vec<_>>());
    let mut vertices: Vec<usize> = h.vertices.iter().map(|&j| points[j]).collect();
    vertices.sort();
    if let Some(i) = faces.iter().position(|f| f.vertices == vertices) {
        return i;
    }
    let dim = h.dim();
    faces.push(Face { vertices, points: points.to_vec(), dim });
    let me = faces.len() - 1;
    for f in &h.facets {
        let sub: Vec<usize> = f.points.iter().map(|&j| points[j]).collect();
        add_faces(pts, &sub, faces);
    }
    me
}

/// True iff every top cell is a simplex of normalized volume one.
pub fn is_unimodal(s: &Subdivision) -> bool {
    let k = s.polytope.dim();
    s.cells.iter().all(|&c| {
        let f = &s.faces[c];
        if f.vertices.len() != k + 1 {
            return false;
        }
        // lattice points of the cell other than its vertices rule out unit volume
        let poly = s.cell_polytope(c);
        if poly.lattice_points.len() != k + 1 {
            return false;
        }
        if k == s.polytope.ambient_dim() {
            return poly.simplex_volume() == Some(1);
        }
        // lower-dimensional cell: edge vectors must extend to a lattice basis,
        // equivalently the gcd of maximal minors is one
        let verts = s.face_vertices(c);
        let rows: Vec<Vec<i64>> = verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect()).collect();
        maximal_minor_gcd(&rows) == 1
    })
}

fn maximal_minor_gcd(rows: &[Vec<i64>]) -> i64 {
    let k = rows.len();
    let d = rows[0].len();
    let mut g = 0i64;
    for cols in combinations(d, k) {
        let m: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        g = num_integer::gcd(g, det_int(&m));
    }
    g
}

/// Parses `{ "vertices": [[i,j],...], "lifting": {"i,j": value, ...} }`.
pub fn parse_polytope_json(v: &serde_json::Value, default_zero: bool) -> Result<(LatticePolytope, LiftingFunction)> {
    let verts = v
        .get("vertices")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Input("missing \"vertices\" array".into()))?;
    let mut pts = Vec::new();
    for p in verts {
        let arr = p.as_array().ok_or_else(|| Error::Input("vertex must be an array".into()))?;
        let ints: Option<Vec<i64>> = arr.iter().map(|x| x.as_i64()).collect();
        pts.push(ints.ok_or_else(|| Error::Input("vertex coordinates must be integers".into()))?);
    }
    let poly = LatticePolytope::new(&pts)?;
    let mut nu = LiftingFunction::default();
    if let Some(map) = v.get("lifting") {
        let map = map.as_object().ok_or_else(|| Error::Input("\"lifting\" must be an object".into()))?;
        for (key, val) in map {
            let coords: std::result::Result<Vec<i64>, _> = key.split(',').map(|s| s.trim().parse::<i64>()).collect();
            let coords = coords.map_err(|_| Error::Input(format!("bad lifting key {key:?}")))?;
            let h = val.as_i64().ok_or_else(|| Error::Input(format!("lifting value at {key:?} must be an integer")))?;
            if !poly.lattice_points.contains(&coords) {
                return input(format!("lifting key {key:?} is not a lattice point of the polytope"));
            }
            nu.values.insert(coords, h);
        }
    }
    if default_zero {
        for p in &poly.lattice_points {
            nu.values.entry(p.clone()).or_insert(0);
        }
    }
    Ok((poly, nu))
}

pub(crate) fn diff_i(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn qsub(a: &[Q], b: &[Q]) -> Vec<Q> {
    sub(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift(pairs: &[(&[i64], i64)]) -> LiftingFunction {
        LiftingFunction { values: pairs.iter().map(|(p, v)| (p.to_vec(), *v)).collect() }
    }

    pub(crate) fn example_triangle() -> (LatticePolytope, LiftingFunction) {
        let p = LatticePolytope::new(&[vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap();
        let nu = lift(&[(&[0, 0], 1), (&[1, 1], 0), (&[2, 1], 0), (&[1, 2], 0)]);
        (p, nu)
    }

    #[test]
    fn triangle_lattice_points() {
        let (p, _) = example_triangle();
        assert_eq!(p.lattice_points, vec![vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(p.vertices.len(), 3);
    }

    #[test]
    fn triangle_subdivision_is_three_unit_triangles() {
        let (p, nu) = example_triangle();
        let s = regular_subdivision(&p, &nu).unwrap();
        let mut cells: Vec<Vec<Vec<i64>>> = s.cells.iter().map(|&c| s.face_vertices(c)).collect();
        cells.sort();
        assert_eq!(
            cells,
            vec![
                vec![vec![0, 0], vec![1, 1], vec![1, 2]],
                vec![vec![0, 0], vec![1, 1], vec![2, 1]],
                vec![vec![1, 1], vec![1, 2], vec![2, 1]],
            ]
        );
        assert!(is_unimodal(&s));
    }

    #[test]
    fn constant_lift_is_single_cell() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let s = regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert!(is_unimodal(&s));
    }

    #[test]
    fn segment_with_dip_splits() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![2, 0]]).unwrap();
        let nu = lift(&[(&[0, 0], 0), (&[1, 0], -1), (&[2, 0], 0)]);
        let s = regular_subdivision(&p, &nu).unwrap();
        let mut cells: Vec<Vec<Vec<i64>>> = s.cells.iter().map(|&c| s.face_vertices(c)).collect();
        cells.sort();
        assert_eq!(cells, vec![vec![vec![0, 0], vec![1, 0]], vec![vec![1, 0], vec![2, 0]]]);
    }

    #[test]
    fn big_triangle_not_unimodal() {
        let p = LatticePolytope::new(&[vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap();
        let s = regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap();
        assert!(!is_unimodal(&s));
    }

    #[test]
    fn missing_lifting_is_input_error() {
        let (p, mut nu) = example_triangle();
        nu.values.remove(&vec![1, 1]);
        assert!(matches!(regular_subdivision(&p, &nu), Err(Error::Input(_))));
    }

    #[test]
    fn tetrahedron_faces() {
        let p = LatticePolytope::new(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let s = regular_subdivision(&p, &LiftingFunction::constant(&p, 0)).unwrap();
        let count = |d: usize| s.faces.iter().filter(|f| f.dim == d).count();
        assert_eq!((count(0), count(1), count(2), count(3)), (4, 6, 4, 1));
    }
}

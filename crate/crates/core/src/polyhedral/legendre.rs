use super::exact::{dot, nullspace, primitive, q, qv, rank, solve, to_f64, Q};
use super::hull::combinations;
use super::Subdivision;
use num_traits::Zero;

/// Minimum of finitely many affine functions `<v, m> + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAffine {
    pub pieces: Vec<(Vec<i64>, Q)>,
}

impl PiecewiseAffine {
    pub fn eval(&self, m: &[Q]) -> Q {
        self.pieces
            .iter()
            .map(|(v, c)| dot(&qv(v), m) + c)
            .min()
            .expect("at least one piece")
    }

    pub fn eval_f64(&self, m: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|(v, c)| v.iter().zip(m).map(|(a, b)| *a as f64 * b).sum::<f64>() + to_f64(c))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Polyhedron given by vertices, primitive recession rays and a lineality basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
    pub dim: usize,
}

impl Polyhedron {
    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, |v| v.len())
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect()
    }
}

/// Dual cells indexed like the faces of the subdivision.
#[derive(Clone, Debug)]
pub struct DualDecomposition {
    pub cells: Vec<Polyhedron>,
}

/// Discrete Legendre transform of the lifting, with the dual cell of every face.
pub fn discrete_legendre(s: &Subdivision) -> (PiecewiseAffine, DualDecomposition) {
    let mut used: Vec<usize> = s.faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    used.sort();
    used.dedup();
    let pieces = used.iter().map(|&i| (s.point(i).clone(), q(s.height(i)))).collect();
    let cells = (0..s.faces.len()).map(|f| dual_cell(s, f)).collect();
    (PiecewiseAffine { pieces }, DualDecomposition { cells })
}

/// { m : <v,m> + nu(v) is minimal exactly along the face }.
fn dual_cell(s: &Subdivision, f: usize) -> Polyhedron {
    let d = s.polytope.ambient_dim();
    let face = &s.faces[f];
    let v0 = face.vertices[0];
    let p0 = qv(s.point(v0));
    let h0 = q(s.height(v0));
    let mut eq_rows: Vec<Vec<Q>> = Vec::new();
    let mut eq_rhs: Vec<Q> = Vec::new();
    for &v in &face.vertices[1..] {
        eq_rows.push(super::qsub(&qv(s.point(v)), &p0));
        eq_rhs.push(h0 - q(s.height(v)));
    }
    let mut ineq_rows: Vec<Vec<Q>> = Vec::new();
    let mut ineq_rhs: Vec<Q> = Vec::new();
    for (w, pt) in s.polytope.lattice_points.iter().enumerate() {
        if face.vertices.contains(&w) {
            continue;
        }
        ineq_rows.push(super::qsub(&p0, &qv(pt)));
        ineq_rhs.push(q(s.height(w)) - h0);
    }
    let all: Vec<Vec<Q>> = eq_rows.iter().chain(&ineq_rows).cloned().collect();
    let lin = nullspace(&all, d);
    let lineality: Vec<Vec<i64>> = lin.iter().map(|v| primitive(v)).collect();
    // restrict to the orthogonal complement of the lineality space
    let mut e_rows = eq_rows.clone();
    let mut e_rhs = eq_rhs.clone();
    for l in &lin {
        e_rows.push(l.clone());
        e_rhs.push(Q::zero());
    }
    let re = rank(&e_rows, d);
    let feasible = |m: &[Q]| ineq_rows.iter().zip(&ineq_rhs).all(|(a, b)| dot(a, m) <= *b);

    let mut vertices: Vec<Vec<Q>> = Vec::new();
    for combo in combinations(ineq_rows.len(), d - re) {
        let mut a = e_rows.clone();
        let mut b = e_rhs.clone();
        for &i in &combo {
            a.push(ineq_rows[i].clone());
            b.push(ineq_rhs[i]);
        }
        if rank(&a, d) < d {
            continue;
        }
        // pick d independent rows for the square solve
        let Some(m) = solve_overdetermined(&a, &b, d) else { continue };
        if feasible(&m) && !vertices.contains(&m) {
            vertices.push(m);
        }
    }

    let mut rays: Vec<Vec<i64>> = Vec::new();
    if d > re {
        for combo in combinations(ineq_rows.len(), d - re - 1) {
            let mut a: Vec<Vec<Q>> = e_rows.clone();
            for &i in &combo {
                a.push(ineq_rows[i].clone());
            }
            if rank(&a, d) != d - 1 {
                continue;
            }
            let r = nullspace(&a, d).remove(0);
            for sign in [1i128, -1] {
                let rr: Vec<Q> = r.iter().map(|x| x * Q::from_integer(sign)).collect();
                if ineq_rows.iter().all(|row| dot(row, &rr) <= Q::zero()) {
                    let p = primitive(&rr);
                    if !rays.contains(&p) {
                        rays.push(p);
                    }
                }
            }
        }
    }
    let mut span: Vec<Vec<Q>> = vertices.iter().skip(1).map(|v| super::qsub(v, &vertices[0])).collect();
    span.extend(rays.iter().map(|r| qv(r)));
    span.extend(lineality.iter().map(|r| qv(r)));
    let dim = rank(&span, d);
    vertices.sort();
    rays.sort();
    Polyhedron { vertices, rays, lineality, dim }
}

fn solve_overdetermined(a: &[Vec<Q>], b: &[Q], d: usize) -> Option<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for (r, &bi) in a.iter().zip(b) {
        let mut trial = rows.clone();
        trial.push(r.clone());
        if rank(&trial, d) > rows.len() {
            rows.push(r.clone());
            rhs.push(bi);
        }
    }
    let m = solve(&rows, &rhs)?;
    a.iter().zip(b).all(|(r, bi)| dot(r, &m) == *bi).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::super::tests::example_triangle;
    use super::super::*;
    use super::*;

    #[test]
    fn example_pieces() {
        let (p, nu) = example_triangle();
        let s = regular_subdivision(&p, &nu).unwrap();
        let (f, dual) = discrete_legendre(&s);
        let mut pieces = f.pieces.clone();
        pieces.sort();
        assert_eq!(
            pieces,
            vec![(vec![0, 0], q(1)), (vec![1, 1], q(0)), (vec![1, 2], q(0)), (vec![2, 1], q(0))]
        );
        for (fi, face) in s.faces.iter().enumerate() {
            assert_eq!(face.dim + dual.cells[fi].dim, 2);
        }
    }

    #[test]
    fn edges_dual_to_orthogonal_hyperplanes() {
        let (p, nu) = example_triangle();
        let s = regular_subdivision(&p, &nu).unwrap();
        let (_, dual) = discrete_legendre(&s);
        for (fi, face) in s.faces.iter().enumerate().filter(|(_, f)| f.dim == 1) {
            let (a, b) = (face.vertices[0], face.vertices[1]);
            let diff = qv(&diff_i(s.point(a), s.point(b)));
            let rhs = q(s.height(b) - s.height(a));
            for v in &dual.cells[fi].vertices {
                assert_eq!(dot(&diff, v), rhs);
            }
            for r in &dual.cells[fi].rays {
                assert!(dot(&diff, &qv(r)).is_zero());
            }
        }
    }
}

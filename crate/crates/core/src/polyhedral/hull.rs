//! Brute-force convex hulls in the affine hull of a small rational point set.

use super::exact::{dot, nullspace, rank, rref, solve, sub, Q};
use num_traits::Zero;

/// Affine hull given by a base point and independent direction rows.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub base: Vec<Q>,
    pub basis: Vec<Vec<Q>>,
}

impl AffineHull {
    pub fn of(points: &[Vec<Q>]) -> AffineHull {
        let base = points[0].clone();
        let d = base.len();
        let mut basis: Vec<Vec<Q>> = Vec::new();
        for p in &points[1..] {
            let v = sub(p, &base);
            let mut trial = basis.clone();
            trial.push(v.clone());
            if rank(&trial, d) > basis.len() {
                basis.push(v);
            }
        }
        AffineHull { base, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Local coordinates of p, or None when p is off the hull.
    pub fn local(&self, p: &[Q]) -> Option<Vec<Q>> {
        let d = self.base.len();
        let k = self.dim();
        let diff = sub(p, &self.base);
        if k == 0 {
            return diff.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        // columns of the d×k matrix are basis vectors
        let a: Vec<Vec<Q>> = (0..d).map(|i| (0..k).map(|j| self.basis[j][i]).collect()).collect();
        let aug: Vec<Vec<Q>> = a
            .iter()
            .zip(&diff)
            .map(|(r, &b)| {
                let mut r = r.clone();
                r.push(b);
                r
            })
            .collect();
        let (_, piv) = rref(&aug, k + 1);
        if piv.contains(&k) {
            return None;
        }
        solve(&a, &diff)
    }
}

/// Facet inequality `normal · u >= offset` in local coordinates.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub affine: AffineHull,
    pub local: Vec<Vec<Q>>,
    pub facets: Vec<Facet>,
    pub vertices: Vec<usize>,
}

impl Hull {
    pub fn dim(&self) -> usize {
        self.affine.dim()
    }

    pub fn contains_local(&self, u: &[Q]) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, u) >= f.offset)
    }
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Hull of distinct points. Facets are found by testing every hyperplane through
/// `dim` affinely independent points.
pub fn hull(points: &[Vec<Q>]) -> Hull {
    let affine = AffineHull::of(points);
    let k = affine.dim();
    let local: Vec<Vec<Q>> = points.iter().map(|p| affine.local(p).expect("point on own hull")).collect();
    let mut facets: Vec<Facet> = Vec::new();
    if k > 0 {
        for combo in combinations(points.len(), k) {
            let diffs: Vec<Vec<Q>> = combo[1..].iter().map(|&i| sub(&local[i], &local[combo[0]])).collect();
            if rank(&diffs, k) != k - 1 {
                continue;
            }
            let ns = nullspace(&diffs, k);
            let mut normal = ns[0].clone();
            let offset0 = dot(&normal, &local[combo[0]]);
            let vals: Vec<Q> = local.iter().map(|u| dot(&normal, u) - offset0).collect();
            let pos = vals.iter().any(|v| *v > Q::zero());
            let neg = vals.iter().any(|v| *v < Q::zero());
            if pos && neg {
                continue;
            }
            if neg {
                normal = normal.iter().map(|x| -x).collect();
            }
            let offset = dot(&normal, &local[combo[0]]);
            let on: Vec<usize> = (0..points.len()).filter(|&i| vals[i].is_zero()).collect();
            if facets.iter().any(|f| f.points == on) {
                continue;
            }
            facets.push(Facet { normal, offset, points: on });
        }
    }
    let vertices: Vec<usize> = if k == 0 {
        vec![0]
    } else {
        (0..points.len())
            .filter(|&i| {
                let normals: Vec<Vec<Q>> =
                    facets.iter().filter(|f| f.points.contains(&i)).map(|f| f.normal.clone()).collect();
                rank(&normals, k) == k
            })
            .collect()
    };
    Hull { affine, local, facets, vertices }
}

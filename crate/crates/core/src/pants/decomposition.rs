//! Explicit decomposition of H for n = 2 into the pieces H_J over the faces of the
//! tetrahedron: a central tetrahedron, one family of triangles along each leg and
//! the part of H over a region Q_J of each two-dimensional cone.

use super::region::RegionH;
use crate::coamoeba::Symmetry;
use crate::error::{input, Error, Result};

pub const FIRST_LEVEL: f64 = 1.0 / 9.0;

/// The positive root of 9z²(2z + 3t) = 1, which lies in (0, 1/3] for t ≥ 1/9.
pub fn z_of_t(t: f64) -> Result<f64> {
    if !(t >= FIRST_LEVEL) || !t.is_finite() {
        return Err(Error::Domain(format!("level {t} is below 1/9")));
    }
    let g = |z: f64| 9.0 * z * z * (2.0 * z + 3.0 * t) - 1.0;
    let dg = |z: f64| 54.0 * z * z + 54.0 * t * z;
    // g is increasing on z > 0, negative at 0 and non-negative at 1/3
    let (mut lo, mut hi) = (0.0, 1.0 / 3.0);
    let mut z = hi;
    for _ in 0..200 {
        let v = g(z);
        if v == 0.0 {
            return Ok(z);
        }
        if v > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let newton = z - v / dg(z);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - z).abs() <= 1e-16 * z.max(1e-300) || hi - lo <= 1e-300 {
            return Ok(next);
        }
        z = next;
    }
    Ok(z)
}

fn apply(k: usize, p: [f64; 3]) -> Result<[f64; 3]> {
    if k > 3 {
        return input(format!("vertex index {k} out of range 0..=3"));
    }
    if k == 0 {
        return Ok(p);
    }
    let v = Symmetry::new(3, k)?.base(&p);
    Ok([v[0], v[1], v[2]])
}

/// q_k = R*_k(1/3, 1/3, 1/3), the vertices of the central piece.
pub fn q_vertex(k: usize) -> Result<[f64; 3]> {
    apply(k, [1.0 / 3.0; 3])
}

/// q_{k,t} = R*_k q_{0,t} with q_{0,t} = ((2/3)z + t, z, z) on S_0.
pub fn q_level(k: usize, t: f64) -> Result<[f64; 3]> {
    let z = z_of_t(t)?;
    apply(k, [2.0 * z / 3.0 + t, z, z])
}

/// The boundary curve of Q_J as a graph x₁ = 1/(108 x₂²) − x₂ over (0, 1/6].
pub fn tau_height(s: f64) -> f64 {
    1.0 / (108.0 * s * s) - s
}

/// τ₁ (which = 1) or τ₂ (which = 2) at parameter s ∈ (0, 1/6], in the plane x₃ = 0.
pub fn tau(which: usize, s: f64) -> Result<[f64; 3]> {
    if !(s > 0.0 && s <= 1.0 / 6.0) {
        return Err(Error::Domain(format!("curve parameter {s} outside (0, 1/6]")));
    }
    match which {
        1 => Ok([tau_height(s), s, 0.0]),
        2 => Ok([s, tau_height(s), 0.0]),
        _ => input("curve index must be 1 or 2"),
    }
}

/// Membership of projected coordinates in Q_J for J = {1, 2}.
pub fn in_q(p: [f64; 2], tol: f64) -> bool {
    let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
    a >= 1.0 / 6.0 - tol || (a > 0.0 && b >= tau_height(a) - tol)
}

/// The group element as a sequence of generators (applied left to right) sending
/// the label `from` to `to`.
fn label_path(from: usize, to: usize) -> Vec<usize> {
    if from == to {
        vec![]
    } else if from == 0 {
        vec![to]
    } else if to == 0 {
        vec![from]
    } else {
        vec![from, to, from]
    }
}

fn follow(path: &[usize], x: &[f64; 3]) -> Result<[f64; 3]> {
    let mut p = *x;
    for &k in path {
        p = apply(k, p)?;
    }
    Ok(p)
}

fn sorted_labels(path: &[usize], labels: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = labels
        .iter()
        .map(|&j| path.iter().fold(j, |l, &k| Symmetry { k, dim: 3 }.label(l)))
        .collect();
    out.sort();
    out
}

/// Barycentric coordinates of `x` relative to a tetrahedron.
fn tetra_coords(v: &[[f64; 3]; 4], x: &[f64; 3]) -> Option<[f64; 4]> {
    let m = nalgebra::Matrix3::from_fn(|i, j| v[j + 1][i] - v[0][i]);
    let r = nalgebra::Vector3::from_fn(|i, _| x[i] - v[0][i]);
    let s = m.lu().solve(&r)?;
    Some([1.0 - s.sum(), s[0], s[1], s[2]])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub tol: f64,
}

impl Default for Decomposition {
    fn default() -> Self {
        Decomposition { tol: 1e-9 }
    }
}

impl Decomposition {
    /// x ∈ H_∅ = conv{q_0, …, q_3}.
    pub fn in_center(&self, x: &[f64; 3]) -> Result<bool> {
        let v = [q_vertex(0)?, q_vertex(1)?, q_vertex(2)?, q_vertex(3)?];
        Ok(tetra_coords(&v, x).map_or(false, |b| b.iter().all(|&c| c >= -self.tol)))
    }

    /// x ∈ H_{1}: the union over t ≥ 1/9 of the triangles q_{0,t} q_{2,t} q_{3,t},
    /// each lying in the plane x₁ − (x₂ + x₃)/3 = t.
    fn in_first_leg(&self, x: &[f64; 3]) -> Result<bool> {
        let t = x[0] - (x[1] + x[2]) / 3.0;
        if t < FIRST_LEVEL - self.tol {
            return Ok(false);
        }
        let z = z_of_t(t.max(FIRST_LEVEL))?;
        // in the (x₂, x₃) plane the triangle is (z, z), (−z, 0), (0, −z)
        let (a, b) = (x[1] / z, x[2] / z);
        let l0 = (a + b + 1.0) / 3.0;
        Ok([l0, l0 - a, l0 - b].iter().all(|&c| c >= -self.tol))
    }

    /// x ∈ H_{12}: the part of H over Q_J in the coordinates (x₁ − x₃/2, x₂ − x₃/2).
    fn in_first_sheet(&self, x: &[f64; 3]) -> Result<bool> {
        let p = [x[0] - x[2] / 2.0, x[1] - x[2] / 2.0];
        Ok(in_q(p, self.tol) && RegionH::new(2, 1.0)?.contains(x, self.tol)?)
    }

    /// Membership in H_J for a proper face J of {0, 1, 2, 3} with |J| ≤ 2; the empty
    /// face is the central piece.
    pub fn in_piece(&self, face: &[usize], x: &[f64; 3]) -> Result<bool> {
        let mut f = face.to_vec();
        f.sort();
        f.dedup();
        if f.len() != face.len() || f.len() > 2 || f.iter().any(|&j| j > 3) {
            return input(format!("{face:?} is not a face with at most two labels"));
        }
        match f.len() {
            0 => self.in_center(x),
            1 => {
                let path = label_path(f[0], 1);
                self.in_first_leg(&follow(&path, x)?)
            }
            _ => {
                // move the pair onto {1, 2}
                let first = label_path(f[0], 1);
                let rest = sorted_labels(&first, &f);
                let other = *rest.iter().find(|&&j| j != 1).unwrap();
                let second: Vec<usize> = if other == 2 {
                    vec![]
                } else if other == 0 {
                    // (0 2) fixes 1 and sends 0 to 2
                    vec![2]
                } else {
                    // (2 3) = R_2 R_3 R_2 fixes 1
                    vec![2, 3, 2]
                };
                let path: Vec<usize> = first.iter().chain(second.iter()).cloned().collect();
                debug_assert_eq!(sorted_labels(&path, &f), vec![1, 2]);
                self.in_first_sheet(&follow(&path, x)?)
            }
        }
    }

    /// All faces J whose piece contains x.
    pub fn pieces(&self, x: &[f64; 3]) -> Result<Vec<Vec<usize>>> {
        let mut faces: Vec<Vec<usize>> = vec![vec![]];
        faces.extend((0..4).map(|j| vec![j]));
        for a in 0..4 {
            for b in a + 1..4 {
                faces.push(vec![a, b]);
            }
        }
        let mut out = Vec::new();
        for f in faces {
            if self.in_piece(&f, x)? {
                out.push(f);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pants::gradient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constants() {
        assert!((z_of_t(1.0 / 9.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let q = q_level(0, 1.0 / 9.0).unwrap();
        for c in q {
            assert!((c - 1.0 / 3.0).abs() < 1e-12);
        }
        let r = RegionH::new(2, 1.0).unwrap();
        assert!(r.surface_residual(0, &q_vertex(0).unwrap()).unwrap().abs() < 1e-14);
        let a = tau(1, 1.0 / 6.0).unwrap();
        let b = tau(2, 1.0 / 6.0).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-12);
            assert!((a[i] - [1.0 / 6.0, 1.0 / 6.0, 0.0][i]).abs() < 1e-12);
        }
        assert!(z_of_t(0.1).is_err());
    }

    #[test]
    fn levels_lie_on_the_boundary_surfaces() {
        let r = RegionH::new(2, 1.0).unwrap();
        for &t in &[1.0 / 9.0, 0.2, 1.0, 7.5, 100.0] {
            let z = z_of_t(t).unwrap();
            assert!(z > 0.0 && z <= 1.0 / 3.0 + 1e-15);
            assert!((9.0 * z * z * (2.0 * z + 3.0 * t) - 1.0).abs() < 1e-12);
            for k in [0, 2, 3] {
                assert!(r.surface_residual(k, &q_level(k, t).unwrap()).unwrap().abs() < 1e-10);
            }
            // the midpoint of q_{0,t} q_{3,t} lies on τ₁
            let (p, q) = (q_level(0, t).unwrap(), q_level(3, t).unwrap());
            let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
            assert!(m[2].abs() < 1e-14);
            let tm = tau(1, m[1]).unwrap();
            assert!((tm[0] - m[0]).abs() < 1e-9 * m[0].max(1.0));
        }
    }

    #[test]
    fn piece_examples() {
        let dec = Decomposition::default();
        assert!(dec.in_piece(&[], &q_vertex(2).unwrap()).unwrap());
        assert!(dec.in_piece(&[1], &[5.0, 0.0, 0.0]).unwrap());
        assert!(!dec.in_piece(&[2], &[5.0, 0.0, 0.0]).unwrap());
        assert!(dec.in_piece(&[2], &[0.0, 5.0, 0.0]).unwrap());
        assert!(dec.in_piece(&[3], &[0.0, 0.0, 5.0]).unwrap());
        assert!(dec.in_piece(&[0], &[-5.0, -5.0, -5.0]).unwrap());
        assert!(dec.in_piece(&[1, 2], &[5.0, 5.0, 0.0]).unwrap());
        assert!(dec.in_piece(&[1, 3], &[5.0, 0.0, 5.0]).unwrap());
        assert!(dec.in_piece(&[0, 1], &[0.0, -5.0, -5.0]).unwrap());
        assert!(!dec.in_piece(&[1, 2], &[5.0, 0.0, 5.0]).unwrap());
        assert!(dec.in_piece(&[0, 1, 2], &[0.0; 3]).is_err());
    }

    #[test]
    fn pieces_cover_sampled_image() {
        let dec = Decomposition { tol: 1e-7 };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let w: Vec<f64> = (0..4).map(|_| rng.gen_range(0.001..1.0)).collect();
            let s: f64 = w.iter().sum();
            let y: Vec<f64> = w[1..].iter().map(|v| FRAC_PI_2 * v / s).collect();
            let h = gradient(2, 1.0, &y).unwrap();
            let x = [h[0], h[1], h[2]];
            assert!(!dec.pieces(&x).unwrap().is_empty(), "{x:?}");
        }
    }
}

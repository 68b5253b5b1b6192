//! The region H = ∪ H_k on the base and the cell systems on both sides.
//! H_0 = {x ≥ 0, Π x ≤ d^{-d}} in units of λ, and H_k = R*_k H_0.
//! On the torus, barycentric coordinates β of the plus simplex give the half-spaces
//! Δ_jk = {β_k ≥ β_j}; on the base c = (0, x₁, …) gives D_jk = {c_j ≥ c_k}.

use super::{locate, Half};
use crate::coamoeba::{wrap, Coamoeba, Membership, Symmetry};
use crate::error::{input, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionH {
    pub n: usize,
    pub lambda: f64,
}

/// Pieces H_k containing x and surfaces S_k through it; empty lists mean outside.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegionClass {
    pub pieces: Vec<usize>,
    pub surfaces: Vec<usize>,
}

impl RegionClass {
    pub fn is_outside(&self) -> bool {
        self.pieces.is_empty()
    }
}

impl RegionH {
    pub fn new(n: usize, lambda: f64) -> Result<RegionH> {
        if !(lambda > 0.0) {
            return input("scale must be positive");
        }
        Ok(RegionH { n, lambda })
    }

    fn dim(&self) -> usize {
        self.n + 1
    }

    /// x/λ moved into the frame of H_0.
    fn to_first(&self, k: usize, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return input("point dimension does not match");
        }
        let u: Vec<f64> = x.iter().map(|v| v / self.lambda).collect();
        Ok(if k == 0 { u } else { Symmetry::new(self.dim(), k)?.base(&u) })
    }

    fn bound(&self) -> f64 {
        let d = self.dim() as f64;
        d.powf(-d)
    }

    /// min(min x_j, d^{-d} − Π x_j) after moving into H_0; non-negative inside H_k.
    pub fn slack(&self, k: usize, x: &[f64]) -> Result<f64> {
        let u = self.to_first(k, x)?;
        let m = u.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(m.min(self.bound() - u.iter().product::<f64>()))
    }

    /// d^d Π x_j − 1 after moving into H_0; zero on S_k.
    pub fn surface_residual(&self, k: usize, x: &[f64]) -> Result<f64> {
        let u = self.to_first(k, x)?;
        Ok(u.iter().product::<f64>() / self.bound() - 1.0)
    }

    pub fn classify(&self, x: &[f64], tol: f64) -> Result<RegionClass> {
        let mut c = RegionClass::default();
        for k in 0..=self.dim() {
            if self.slack(k, x)? >= -tol {
                c.pieces.push(k);
                let u = self.to_first(k, x)?;
                if u.iter().all(|&v| v >= -tol) && self.surface_residual(k, x)?.abs() <= tol {
                    c.surfaces.push(k);
                }
            }
        }
        Ok(c)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(!self.classify(x, tol)?.is_outside())
    }
}

/// Barycentric coordinates (β_0, …, β_d) of a point of the plus simplex.
pub fn barycentric(z: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> = z.iter().map(|v| v / FRAC_PI_2).collect();
    b.insert(0, 1.0 - b.iter().sum::<f64>());
    b
}

pub fn in_delta(beta: &[f64], j: usize, k: usize, tol: f64) -> bool {
    beta[k] >= beta[j] - tol
}

/// W_{J,k} = ∩_{j ∈ J} Δ_jk.
pub fn in_w_k(beta: &[f64], face: &[usize], k: usize, tol: f64) -> bool {
    face.iter().all(|&j| in_delta(beta, j, k, tol))
}

/// W_J = ∩_{k ∉ J, j ∈ J} Δ_jk.
pub fn in_w(beta: &[f64], face: &[usize], tol: f64) -> bool {
    (0..beta.len()).filter(|k| !face.contains(k)).all(|k| in_w_k(beta, face, k, tol))
}

/// Base coordinates c = (0, x₁, …, x_d) for the conical cells.
pub fn base_coords(x: &[f64]) -> Vec<f64> {
    let mut c = x.to_vec();
    c.insert(0, 0.0);
    c
}

pub fn in_d(c: &[f64], j: usize, k: usize, tol: f64) -> bool {
    c[j] >= c[k] - tol
}

pub fn in_v_k(c: &[f64], face: &[usize], k: usize, tol: f64) -> bool {
    face.iter().all(|&j| in_d(c, j, k, tol))
}

pub fn in_v(c: &[f64], face: &[usize], tol: f64) -> bool {
    (0..c.len()).filter(|k| !face.contains(k)).all(|k| in_v_k(c, face, k, tol))
}

/// Proper non-empty subsets of {0, …, d}.
pub fn proper_faces(d: usize) -> Vec<Vec<usize>> {
    let m = d + 1;
    (1..(1u64 << m) - 1).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub plus: bool,
    pub beta: Vec<f64>,
    /// all (J, k) with the point in W_{J,k}
    pub cells: Vec<(Vec<usize>, usize)>,
    /// all J with the point in W_J
    pub faces: Vec<Vec<usize>>,
}

pub const CELL_TOL: f64 = 1e-12;

pub fn cell_classify(n: usize, y: &[f64]) -> Result<CellReport> {
    let (plus, z) = match locate(n, y)? {
        Half::Plus(z) => (true, z),
        Half::Minus(z) => (false, z),
        Half::Boundary => {
            // closed faces: use the half whose closure contains the point
            let plus = !matches!(Coamoeba::standard(n).membership(y), Membership::Face { plus: false, .. });
            let s = if plus { 1.0 } else { -1.0 };
            (plus, y.iter().map(|&v| wrap(s * v, -FRAC_PI_4)).collect())
        }
    };
    let beta = barycentric(&z);
    let mut cells = Vec::new();
    let mut faces = Vec::new();
    for face in proper_faces(n + 1) {
        for k in (0..beta.len()).filter(|k| !face.contains(k)) {
            if in_w_k(&beta, &face, k, CELL_TOL) {
                cells.push((face.clone(), k));
            }
        }
        if in_w(&beta, &face, CELL_TOL) {
            faces.push(face);
        }
    }
    Ok(CellReport { plus, beta, cells, faces })
}

/// All (J, k) with x in V_{J,k}.
pub fn base_classify(x: &[f64], tol: f64) -> Vec<(Vec<usize>, usize)> {
    let c = base_coords(x);
    let mut out = Vec::new();
    for face in proper_faces(x.len()) {
        for k in (0..c.len()).filter(|k| !face.contains(k)) {
            if in_v_k(&c, &face, k, tol) {
                out.push((face.clone(), k));
            }
        }
    }
    out
}

//! Torus side: standard coamoebas, their faces and symmetries, blow-up charts,
//! coamoebas of dual cells, covering models and the four-valent model.

use crate::error::{input, Error, Result};
use crate::polyhedral::exact::{det2, gcd_vec};
use crate::polyhedral::LatticePolytope;
use crate::tropical::TropicalLine;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Tolerance for face classification.
pub const FACE_TOL: f64 = 1e-10;

/// Flat torus of period π in every coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatTorus {
    pub dim: usize,
}

/// Representative of `a` in `[lo, lo + π)`.
pub fn wrap(a: f64, lo: f64) -> f64 {
    let r = (a - lo).rem_euclid(PI) + lo;
    if r >= lo + PI {
        lo
    } else {
        r
    }
}

impl FlatTorus {
    pub fn reduce(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&v| wrap(v, 0.0)).collect()
    }

    /// Quotient distance: shortest representative of the difference.
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| wrap(x - y, -FRAC_PI_2).powi(2)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    InteriorPlus,
    InteriorMinus,
    Vertex(usize),
    /// open face; `plus` tells which half's closure it lies on
    Face { j: Vec<usize>, plus: bool },
    Outside,
}

/// Standard coamoeba of dimension n+1: two simplices glued at their vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coamoeba {
    pub n: usize,
}

impl Coamoeba {
    pub fn standard(n: usize) -> Coamoeba {
        Coamoeba { n }
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn torus(&self) -> FlatTorus {
        FlatTorus { dim: self.dim() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 2
    }

    /// p_0 = 0 and p_k = (π/2) e_k.
    pub fn vertex(&self, k: usize) -> Vec<f64> {
        (0..self.dim()).map(|i| if k >= 1 && i == k - 1 { FRAC_PI_2 } else { 0.0 }).collect()
    }

    /// Slacks of the plus simplex: s_0 = π/2 − Σy, s_j = y_j.
    pub fn slacks(y: &[f64]) -> Vec<f64> {
        let mut s = Vec::with_capacity(y.len() + 1);
        s.push(FRAC_PI_2 - y.iter().sum::<f64>());
        s.extend_from_slice(y);
        s
    }

    fn classify_half(&self, y: &[f64]) -> Option<Vec<usize>> {
        let z: Vec<f64> = y.iter().map(|&v| wrap(v, -FRAC_PI_4)).collect();
        let s = Coamoeba::slacks(&z);
        if s.iter().any(|&v| v < -FACE_TOL) {
            return None;
        }
        Some((0..s.len()).filter(|&i| s[i].abs() <= FACE_TOL).collect())
    }

    pub fn membership(&self, y: &[f64]) -> Membership {
        let d = self.dim();
        let label = |zero: Vec<usize>, plus: bool| {
            if zero.is_empty() {
                if plus {
                    Membership::InteriorPlus
                } else {
                    Membership::InteriorMinus
                }
            } else if zero.len() == d {
                let k = (0..=d).find(|i| !zero.contains(i)).unwrap();
                Membership::Vertex(k)
            } else {
                Membership::Face { j: zero, plus }
            }
        };
        if let Some(z) = self.classify_half(y) {
            return label(z, true);
        }
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        if let Some(z) = self.classify_half(&neg) {
            return label(z, false);
        }
        Membership::Outside
    }

    /// Points of C: the two open halves plus the vertices.
    pub fn contains(&self, y: &[f64]) -> bool {
        matches!(
            self.membership(y),
            Membership::InteriorPlus | Membership::InteriorMinus | Membership::Vertex(_)
        )
    }

    /// Closed face Ē_J: slacks indexed by J vanish.
    pub fn on_closed_face(&self, j: &[usize], y: &[f64]) -> bool {
        for sign in [1.0, -1.0] {
            let z: Vec<f64> = y.iter().map(|&v| wrap(sign * v, -FRAC_PI_4)).collect();
            let s = Coamoeba::slacks(&z);
            if s.iter().all(|&v| v >= -FACE_TOL) && j.iter().all(|&i| s[i].abs() <= FACE_TOL) {
                return true;
            }
        }
        false
    }

    /// Barycentric point of the open face E_J^+ with given positive weights on the
    /// vertices of the face (vertices p_k with k ∉ J).
    pub fn face_point(&self, j: &[usize], weights: &[f64]) -> Vec<f64> {
        let ks: Vec<usize> = (0..=self.dim()).filter(|k| !j.contains(k)).collect();
        let total: f64 = weights.iter().sum();
        let mut y = vec![0.0; self.dim()];
        for (k, w) in ks.iter().zip(weights) {
            let p = self.vertex(*k);
            for i in 0..y.len() {
                y[i] += w / total * p[i];
            }
        }
        y
    }
}

pub fn iota(y: &[f64]) -> Vec<f64> {
    y.iter().map(|v| -v).collect()
}

/// The involutive symmetry exchanging p_0 and p_k, with its dual on the base.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetry {
    pub k: usize,
    pub dim: usize,
}

impl Symmetry {
    pub fn new(dim: usize, k: usize) -> Result<Symmetry> {
        if k == 0 || k > dim {
            return input(format!("symmetry index {k} out of range 1..={dim}"));
        }
        Ok(Symmetry { k, dim })
    }

    /// Matrix of the base action `I − 𝟙e_kᵀ − e_k e_kᵀ`.
    pub fn base_matrix(&self) -> Vec<Vec<i64>> {
        let c = self.k - 1;
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| (i == j) as i64 - (j == c) as i64 - (i == c && j == c) as i64).collect())
            .collect()
    }

    pub fn base(&self, x: &[f64]) -> Vec<f64> {
        let c = self.k - 1;
        let xk = x[c];
        (0..self.dim).map(|i| if i == c { -xk } else { x[i] - xk }).collect()
    }

    pub fn torus(&self, y: &[f64]) -> Vec<f64> {
        let c = self.k - 1;
        let s: f64 = y.iter().sum();
        (0..self.dim).map(|i| if i == c { FRAC_PI_2 - s } else { y[i] }).collect()
    }

    /// Linear part of the torus action (the transpose of the base matrix).
    pub fn torus_linear(&self, v: &[f64]) -> Vec<f64> {
        let c = self.k - 1;
        let s: f64 = v.iter().sum();
        (0..self.dim).map(|i| if i == c { -s } else { v[i] }).collect()
    }

    /// Action on face labels: the transposition of 0 and k.
    pub fn label(&self, j: usize) -> usize {
        if j == 0 {
            self.k
        } else if j == self.k {
            0
        } else {
            j
        }
    }

    pub fn labels(&self, js: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = js.iter().map(|&j| self.label(j)).collect();
        out.sort();
        out
    }
}

/// Polar blow-up chart around a vertex: y_axis = t, y_i = t α_i for the other
/// coordinates, composed with the vertex symmetry when k ≠ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupChart {
    pub k: usize,
    pub axis: usize,
    pub dim: usize,
}

/// Fraction of the shortest edge of a simplex half that a chart may reach.
pub const CHART_REACH: f64 = 0.3;

impl BlowupChart {
    pub fn new(c: &Coamoeba, k: usize) -> Result<BlowupChart> {
        if k > c.dim() {
            return input(format!("vertex {k} out of range"));
        }
        Ok(BlowupChart { k, axis: c.dim() - 1, dim: c.dim() })
    }

    /// Chart at p_0 before applying the vertex symmetry.
    pub fn at_origin(&self, alpha: &[f64], t: f64) -> Vec<f64> {
        let mut z = vec![0.0; self.dim];
        let mut ai = alpha.iter();
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = if i == self.axis { t } else { t * ai.next().unwrap() };
        }
        z
    }

    pub fn to_torus(&self, alpha: &[f64], t: f64) -> Vec<f64> {
        let z = self.at_origin(alpha, t);
        if self.k == 0 {
            z
        } else {
            Symmetry { k: self.k, dim: self.dim }.torus(&z)
        }
    }

    /// Chart coordinates of a torus point near the vertex (away from t = 0).
    pub fn from_torus(&self, y: &[f64]) -> (Vec<f64>, f64) {
        let z = if self.k == 0 { y.to_vec() } else { Symmetry { k: self.k, dim: self.dim }.torus(y) };
        let z: Vec<f64> = z.iter().map(|&v| wrap(v, -FRAC_PI_2)).collect();
        let t = z[self.axis];
        let alpha = (0..self.dim).filter(|&i| i != self.axis).map(|i| z[i] / t).collect();
        (alpha, t)
    }

    pub fn in_reach(&self, alpha: &[f64], t: f64) -> bool {
        let r2: f64 = 1.0 + alpha.iter().map(|a| a * a).sum::<f64>();
        alpha.iter().all(|&a| a > 0.0) && t.abs() * r2.sqrt() <= CHART_REACH * FRAC_PI_2
    }
}

/// Coamoeba of a cell e of a subdivision: (π/2)e + πℤ^d together with its ι-image.
/// Edges of lattice length w give w parallel closed geodesics.
#[derive(Clone, Debug)]
pub struct CellCoamoeba {
    pub cell: LatticePolytope,
    /// for edges: primitive direction, primitive normal (2d), lattice length
    edge: Option<([i64; 2], [i64; 2], u64)>,
}

pub fn cell_coamoeba(cell: &LatticePolytope) -> Result<CellCoamoeba> {
    if cell.dim() == 0 {
        return input("cell coamoebas need a cell of positive dimension");
    }
    let mut edge = None;
    if cell.dim() == 1 && cell.ambient_dim() == 2 {
        let v = &cell.vertices;
        let d = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
        let g = gcd_vec(&d);
        let p = [d[0] / g, d[1] / g];
        edge = Some((p, [-p[1], p[0]], g.unsigned_abs()));
    }
    Ok(CellCoamoeba { cell: cell.clone(), edge })
}

impl CellCoamoeba {
    pub fn contains(&self, y: &[f64]) -> bool {
        if let Some((_, n, w)) = self.edge {
            let v0 = &self.cell.vertices[0];
            let c0 = FRAC_PI_2 * (n[0] * v0[0] + n[1] * v0[1]) as f64;
            let val = n[0] as f64 * y[0] + n[1] as f64 * y[1];
            return (0..w).any(|j| wrap(val - c0 - j as f64 * PI / w as f64, -FRAC_PI_2).abs() <= 1e-9);
        }
        self.contains_half(y) || self.contains_half(&iota(y))
    }

    fn contains_half(&self, y: &[f64]) -> bool {
        let d = y.len();
        let z: Vec<f64> = y.iter().map(|v| v / FRAC_PI_2).collect();
        let lo: Vec<i64> = (0..d).map(|i| self.cell.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..d).map(|i| self.cell.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let ranges: Vec<(i64, i64)> = (0..d)
            .map(|i| (((z[i] - hi[i] as f64) / 2.0).floor() as i64 - 1, ((z[i] - lo[i] as f64) / 2.0).ceil() as i64 + 1))
            .collect();
        let mut m: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let p: Vec<f64> = (0..d).map(|i| z[i] - 2.0 * m[i] as f64).collect();
            if self.cell.contains_f64(&p, 1e-9) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == d {
                    return false;
                }
                m[i] += 1;
                if m[i] <= ranges[i].1 {
                    break;
                }
                m[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    /// Points sampled on the closed set, `res` per parameter direction.
    pub fn sample(&self, res: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if let Some((p, n, w)) = self.edge {
            let v0 = &self.cell.vertices[0];
            let base = [FRAC_PI_2 * v0[0] as f64, FRAC_PI_2 * v0[1] as f64];
            // shift between parallel circles along a vector pairing to 1 with n
            let s = unit_pairing(n);
            for j in 0..w {
                let off = j as f64 * PI / w as f64;
                for i in 0..res {
                    let a = PI * i as f64 / res as f64;
                    out.push(vec![base[0] + a * p[0] as f64 + off * s[0] as f64, base[1] + a * p[1] as f64 + off * s[1] as f64]);
                }
            }
            return out;
        }
        let v = &self.cell.vertices;
        if v.len() == 3 && v[0].len() == 2 {
            for i in 0..=res {
                for j in 0..=(res - i) {
                    let (a, b) = (i as f64 / res as f64, j as f64 / res as f64);
                    let c = 1.0 - a - b;
                    let y: Vec<f64> = (0..2).map(|k| FRAC_PI_2 * (a * v[0][k] as f64 + b * v[1][k] as f64 + c * v[2][k] as f64)).collect();
                    out.push(iota(&y));
                    out.push(y);
                }
            }
        }
        out
    }
}

/// Integer vector s with ⟨n, s⟩ = 1 for a primitive n.
pub fn unit_pairing(n: [i64; 2]) -> [i64; 2] {
    let (g, a, b) = ext_gcd(n[0], n[1]);
    [a * g.signum(), b * g.signum()]
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Covering model of a weighted trivalent vertex: the standard pants pulled back
/// along the torus covering y ↦ Bᵀ y with B = [w₁u₁ w₂u₂].
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringModel {
    /// columns w₁u₁ and w₂u₂
    pub b: [[i64; 2]; 2],
    pub degree: u64,
    pub rays: Vec<[i64; 2]>,
    pub weights: Vec<u64>,
}

pub fn covering_coamoeba(l: &TropicalLine) -> Result<CoveringModel> {
    if l.center.len() != 2 || l.rays.len() != 3 {
        return input("covering model needs a trivalent plane vertex");
    }
    if !l.is_balanced() {
        return input("vertex is not balanced");
    }
    let rays: Vec<[i64; 2]> = l.rays.iter().map(|r| [r[0], r[1]]).collect();
    let wv = |i: usize| [rays[i][0] * l.weights[i] as i64, rays[i][1] * l.weights[i] as i64];
    let (c1, c2) = (wv(1), wv(2));
    let det = det2(c1, c2);
    if det == 0 {
        return Err(Error::Degenerate("collinear rays".into()));
    }
    // orient so that the covering preserves orientation
    let (c1, c2) = if det > 0 { (c1, c2) } else { (c2, c1) };
    Ok(CoveringModel { b: [c1, c2], degree: det.unsigned_abs(), rays, weights: l.weights.clone() })
}

impl CoveringModel {
    pub fn covering(&self, y: &[f64]) -> [f64; 2] {
        let [c1, c2] = self.b;
        [c1[0] as f64 * y[0] + c1[1] as f64 * y[1], c2[0] as f64 * y[0] + c2[1] as f64 * y[1]]
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        Coamoeba::standard(1).contains(&self.covering(y))
    }

    pub fn potential(&self, y: &[f64]) -> Result<f64> {
        crate::pants::potential(1, 1.0, &self.covering(y))
    }

    pub fn gradient(&self, y: &[f64]) -> Result<[f64; 2]> {
        let h = crate::pants::gradient(1, 1.0, &self.covering(y))?;
        let [c1, c2] = self.b;
        Ok([c1[0] as f64 * h[0] + c2[0] as f64 * h[1], c1[1] as f64 * h[0] + c2[1] as f64 * h[1]])
    }

    /// Euler characteristic of the covering pants.
    pub fn euler_characteristic(&self) -> i64 {
        -(self.degree as i64)
    }

    /// Boundary circles over each leg: components of the preimage of that leg's circle.
    pub fn punctures_per_leg(&self) -> Vec<u64> {
        self.rays
            .iter()
            .map(|r| {
                let d = [-r[1], r[0]];
                let [c1, c2] = self.b;
                let a = c1[0] * d[0] + c1[1] * d[1];
                let b = c2[0] * d[0] + c2[1] * d[1];
                self.degree / gcd_vec(&[a, b]).unsigned_abs()
            })
            .collect()
    }

    pub fn genus(&self) -> i64 {
        let p: u64 = self.punctures_per_leg().iter().sum();
        (2 - self.euler_characteristic() - p as i64) / 2
    }
}

/// Potential of the four-valent vertex with rays (±1, ±1): ε(y)·(Π|sin(⟨u_j, y⟩ − π/4)|)^{1/2}
/// on the squares where cos 2(y₁+y₂)·cos 2(y₂−y₁) > 0, with ε = sign cos 2(y₁+y₂).
pub fn four_valent_potential(y: &[f64]) -> Result<f64> {
    let (cs, cd) = four_valent_factors(y)?;
    Ok(cs.signum() * (cs * cd).max(0.0).sqrt() / 2.0)
}

fn four_valent_factors(y: &[f64]) -> Result<(f64, f64)> {
    if y.len() != 2 {
        return input("four-valent model is two-dimensional");
    }
    let s = y[0] + y[1];
    let d = y[1] - y[0];
    let (cs, cd) = ((2.0 * s).cos(), (2.0 * d).cos());
    if cs * cd < -FACE_TOL {
        return Err(Error::Domain(format!("{y:?} is outside the four-valent coamoeba")));
    }
    Ok((cs, cd))
}

pub fn four_valent_gradient(y: &[f64]) -> Result<[f64; 2]> {
    let (cs, cd) = four_valent_factors(y)?;
    let c = cs * cd;
    if c <= 0.0 {
        return Err(Error::Domain("gradient undefined on the square boundary".into()));
    }
    let s = y[0] + y[1];
    let d = y[1] - y[0];
    let e = cs.signum();
    let fs = e * (-2.0 * (2.0 * s).sin() * cd) / (4.0 * c.sqrt());
    let fd = e * (-2.0 * cs * (2.0 * d).sin()) / (4.0 * c.sqrt());
    Ok([fs - fd, fs + fd])
}

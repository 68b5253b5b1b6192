//! The Lagrangian pair of pants: the potential F on the coamoeba, its gradient map
//! h (smoothly extended over the blown-up vertices), the Hessian, the region H,
//! projections with Legendre inversion, and explicit decomposition data.

pub mod appendix;
pub mod chart;
pub mod decomposition;
pub mod fiber;
pub mod region;

use crate::coamoeba::{wrap, BlowupChart, Coamoeba, Membership, Symmetry};
use crate::error::{input, Error, Result};
use crate::tropical::AffineFrame;
use nalgebra::DMatrix;
use std::f64::consts::FRAC_PI_4;

/// Below this distance to a vertex, evaluation goes through the blow-up chart.
pub const CHART_SWITCH: f64 = 1e-3;

/// Which half of the coamoeba a point lies in, with its representative in C⁺
/// (for the minus half the representative of −y).
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Half {
    Plus(Vec<f64>),
    Minus(Vec<f64>),
    Boundary,
}

pub(crate) fn locate(n: usize, y: &[f64]) -> Result<Half> {
    if y.len() != n + 1 {
        return input(format!("point has {} coordinates, expected {}", y.len(), n + 1));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return input("non-finite coordinate");
    }
    let rep = |s: f64| y.iter().map(|&v| wrap(s * v, -FRAC_PI_4)).collect();
    match Coamoeba::standard(n).membership(y) {
        Membership::InteriorPlus => Ok(Half::Plus(rep(1.0))),
        Membership::InteriorMinus => Ok(Half::Minus(rep(-1.0))),
        Membership::Outside => Err(Error::Domain(format!("{y:?} is outside the coamoeba"))),
        _ => Ok(Half::Boundary),
    }
}

fn plus_potential(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let x = z.iter().sum::<f64>().cos() * z.iter().map(|v| v.sin()).product::<f64>();
    x.max(0.0).powf(1.0 / d)
}

/// Gradient on the plus half, routed through a chart near the vertices.
fn plus_gradient(z: &[f64]) -> Result<Vec<f64>> {
    let d = z.len();
    for k in 0..=d {
        let w = if k == 0 { z.to_vec() } else { Symmetry::new(d, k)?.torus(z) };
        if w.iter().map(|v| v * v).sum::<f64>().sqrt() < CHART_SWITCH {
            let hw = near_origin_gradient(&w)?;
            return Ok(if k == 0 { hw } else { Symmetry::new(d, k)?.base(&hw) });
        }
    }
    let f = plus_potential(z);
    let tan_s = z.iter().sum::<f64>().tan();
    Ok(z.iter().map(|v| f * (1.0 / v.tan() - tan_s) / d as f64).collect())
}

/// Chart evaluation for a point of C⁺ close to p_0, using its largest coordinate as axis.
fn near_origin_gradient(w: &[f64]) -> Result<Vec<f64>> {
    let d = w.len();
    let axis = (0..d).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
    let t = w[axis];
    if t <= 0.0 {
        return Err(Error::Domain("gradient is undefined at a vertex; use a chart point".into()));
    }
    let alpha: Vec<f64> = (0..d).filter(|&i| i != axis).map(|i| w[i] / t).collect();
    let (_, hp) = chart::origin_values(&alpha, t)?;
    let mut h = vec![0.0; d];
    let mut it = hp.iter();
    for (i, hi) in h.iter_mut().enumerate() {
        if i != axis {
            *hi = *it.next().unwrap();
        }
    }
    h[axis] = hp[d - 1];
    Ok(h)
}

fn plus_hessian(z: &[f64]) -> DMatrix<f64> {
    let d = z.len();
    let df = d as f64;
    let f = plus_potential(z);
    let s: f64 = z.iter().sum();
    let sec2 = 1.0 / s.cos().powi(2);
    let g: Vec<f64> = z.iter().map(|v| 1.0 / v.tan() - s.tan()).collect();
    DMatrix::from_fn(d, d, |j, k| {
        let diag = if j == k { 1.0 / z[j].sin().powi(2) } else { 0.0 };
        f / df * (g[j] * g[k] / df - diag - sec2)
    })
}

/// λ·F at a torus point: (cos Σy · Π sin y_j)^{1/(n+1)} on C⁺, odd under ι, zero on ∂C.
pub fn potential(n: usize, lambda: f64, y: &[f64]) -> Result<f64> {
    Ok(match locate(n, y)? {
        Half::Plus(z) => lambda * plus_potential(&z),
        Half::Minus(z) => -lambda * plus_potential(&z),
        Half::Boundary => 0.0,
    })
}

/// λ·h = λ·∇F at an interior torus point; h is even under ι.
pub fn gradient(n: usize, lambda: f64, y: &[f64]) -> Result<Vec<f64>> {
    match locate(n, y)? {
        Half::Plus(z) | Half::Minus(z) => Ok(plus_gradient(&z)?.into_iter().map(|v| lambda * v).collect()),
        Half::Boundary => Err(Error::Domain(format!("gradient is unbounded or undefined on the boundary at {y:?}"))),
    }
}

/// λ·Hess F at an interior point. Negative definite on C⁺ and, since F is odd under
/// ι, positive definite on C⁻.
pub fn hessian(n: usize, lambda: f64, y: &[f64]) -> Result<DMatrix<f64>> {
    match locate(n, y)? {
        Half::Plus(z) => Ok(plus_hessian(&z) * lambda),
        Half::Minus(z) => Ok(plus_hessian(&z) * -lambda),
        Half::Boundary => Err(Error::Domain(format!("Hessian is undefined on the boundary at {y:?}"))),
    }
}

/// A point of the blown-up coamoeba.
#[derive(Clone, Debug, PartialEq)]
pub enum PantsPoint {
    Torus(Vec<f64>),
    Chart { vertex: usize, alpha: Vec<f64>, t: f64 },
}

impl PantsPoint {
    pub fn torus_point(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            PantsPoint::Torus(y) => Ok(y.clone()),
            PantsPoint::Chart { vertex, alpha, t } => {
                Ok(BlowupChart::new(&Coamoeba::standard(n), *vertex)?.to_torus(alpha, *t))
            }
        }
    }
}

/// Rescaled pair of pants placed at a vertex by an affine frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PantsMap {
    pub n: usize,
    pub lambda: f64,
    pub frame: AffineFrame,
}

impl PantsMap {
    pub fn new(n: usize, lambda: f64) -> Result<PantsMap> {
        PantsMap::with_frame(n, lambda, AffineFrame::identity(n + 1))
    }

    pub fn with_frame(n: usize, lambda: f64, frame: AffineFrame) -> Result<PantsMap> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return input(format!("scale must be positive, got {lambda}"));
        }
        if frame.dim() != n + 1 {
            return input("frame dimension does not match");
        }
        Ok(PantsMap { n, lambda, frame })
    }

    pub fn potential(&self, p: &PantsPoint) -> Result<f64> {
        match p {
            PantsPoint::Torus(y) => potential(self.n, self.lambda, y),
            PantsPoint::Chart { vertex, alpha, t } => {
                self.check_chart(*vertex, alpha)?;
                Ok(self.lambda * chart::origin_values(alpha, *t)?.0)
            }
        }
    }

    pub fn gradient(&self, p: &PantsPoint) -> Result<Vec<f64>> {
        match p {
            PantsPoint::Torus(y) => gradient(self.n, self.lambda, y),
            PantsPoint::Chart { vertex, alpha, t } => {
                self.check_chart(*vertex, alpha)?;
                let jet = chart::vertex_jet(*vertex, alpha, *t)?;
                Ok(jet.h.iter().map(|v| self.lambda * v).collect())
            }
        }
    }

    pub fn hessian(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        hessian(self.n, self.lambda, y)
    }

    fn check_chart(&self, vertex: usize, alpha: &[f64]) -> Result<()> {
        if vertex > self.n + 1 || alpha.len() != self.n {
            return input("chart point does not match the dimension");
        }
        Ok(())
    }

    /// The point (λh, y) in model coordinates.
    pub fn local_point(&self, p: &PantsPoint) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((self.gradient(p)?, p.torus_point(self.n)?))
    }

    /// The point mapped by the frame: x = frame(λh), y = Aᵀ y_local.
    pub fn global_point(&self, p: &PantsPoint) -> Result<(Vec<f64>, Vec<f64>)> {
        let (x, y) = self.local_point(p)?;
        Ok((self.frame.point_from_local_f64(&x), self.frame.torus_from_local_f64(&y)))
    }
}

//! Sampled smooth lifts. Every leg of every vertex carries two patches in its leg
//! chart with coordinates (x₁, c): a kite of the pants, where the pants is the graph
//! of its fibre solution, and a collar, the graph of d(ηG) for the generating function
//! G = −λF(q) + x₁q₁ cut off by η. Edges carry flat cylinders joining the collars.

use super::pl::{edge_dir, rot};
use super::schedule::{GluingSchedule, LegSchedule};
use crate::coamoeba::{unit_pairing, wrap};
use crate::error::{Error, Result};
use crate::pants::chart::origin_values;
use crate::pants::fiber::collar_jet;
use crate::polyhedral::exact::to_f64;
use crate::tropical::{EdgeKind, PlaneCurve};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_6, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PatchKind {
    Pants { vertex: usize, edge: usize },
    Collar { vertex: usize, edge: usize },
    Flat { edge: usize },
}

/// A sample with its tangent plane, spanned by the images of ∂/∂x₁ and ∂/∂c.
/// Tangent vectors are (dx₁, dx₂, dy₁, dy₂).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshPoint {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub frame: [[f64; 4]; 2],
    /// chart coordinates (x₁, c)
    pub param: [f64; 2],
}

/// Grid of samples, row-major; rows run along the leg, columns around the circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Patch {
    pub kind: PatchKind,
    pub rows: usize,
    pub cols: usize,
    pub points: Vec<MeshPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LagrangianMesh {
    pub scale: f64,
    pub resolution: usize,
    pub truncation: f64,
    pub patches: Vec<Patch>,
}

impl LagrangianMesh {
    pub fn points(&self) -> impl Iterator<Item = &MeshPoint> {
        self.patches.iter().flat_map(|p| p.points.iter())
    }

    pub fn len(&self) -> usize {
        self.patches.iter().map(|p| p.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lower end of the pants kite of a leg: the kite is the part of the pants where the
/// barycentric coordinate of the leg's edge is the smallest one.
pub fn kite_floor(lambda: f64, c: f64) -> f64 {
    let cw = wrap(c, 0.0);
    let m = cw.min(PI - cw);
    if m >= FRAC_PI_6 {
        return 0.0;
    }
    // on the diagonal y₁ = y₂ = m, through the chart at p₀ when m is small
    lambda * origin_values(&[1.0], m).map(|(_, h)| h[0]).unwrap_or(0.5)
}

/// Point and frame of the lift over chart coordinates (x₁, c) of a leg.
pub fn leg_point(leg: &LegSchedule, lambda: f64, x1: f64, c: f64) -> Result<MeshPoint> {
    let (eta, d1, d2) = leg.cutoff(x1);
    let (xl, yl, v, w) = if eta == 0.0 && d1 == 0.0 {
        ([x1, 0.0], [0.0, c], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0])
    } else {
        let j = collar_jet(x1 / lambda, c)?;
        let h2 = lambda * j.h[1];
        let q1 = j.q[0];
        let g = -lambda * j.f + x1 * q1;
        (
            [x1, eta * h2],
            [d1 * g + eta * q1, c],
            [1.0, d1 * h2 + eta * j.dh[1][0], d2 * g + 2.0 * d1 * q1 + eta * j.dq[0][0] / lambda, 0.0],
            [0.0, eta * lambda * j.dh[1][1], -d1 * h2 + eta * j.dq[0][1], 1.0],
        )
    };
    let f = &leg.frame;
    let (x, y) = f.to_global(xl, yl);
    let tv = |t: [f64; 4]| {
        let (dx, dy) = f.vec_to_global([t[0], t[1]], [t[2], t[3]]);
        [dx[0], dx[1], dy[0], dy[1]]
    };
    Ok(MeshPoint { x, y, frame: [tv(v), tv(w)], param: [x1, c] })
}

/// Relative positions along a kite, spaced evenly in arc length of a representative
/// fibre curve, so that both the region near the vertex and the leg are resolved.
pub fn kite_grading(lambda: f64, top: f64, rows: usize) -> Result<Vec<f64>> {
    let k = 600;
    let kappa = (1.0 + top / (0.01 * lambda)).ln();
    let xs: Vec<f64> = (0..=k).map(|i| top * ((kappa * i as f64 / k as f64).exp() - 1.0) / (kappa.exp() - 1.0)).collect();
    let pts: Vec<[f64; 3]> = xs
        .iter()
        .map(|&x| collar_jet(x / lambda, PI / 4.0).map(|j| [x, lambda * j.h[1], j.q[0]]))
        .collect::<Result<_>>()?;
    let mut arc = vec![0.0];
    for w in pts.windows(2) {
        let d = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2) + (w[1][2] - w[0][2]).powi(2)).sqrt();
        arc.push(arc.last().unwrap() + d);
    }
    let total = *arc.last().unwrap();
    let mut out = Vec::with_capacity(rows);
    let mut seg = 0;
    for i in 0..rows {
        let s = total * i as f64 / (rows - 1) as f64;
        while seg + 1 < k && arc[seg + 1] < s {
            seg += 1;
        }
        let u = ((s - arc[seg]) / (arc[seg + 1] - arc[seg])).clamp(0.0, 1.0);
        out.push((xs[seg] + u * (xs[seg + 1] - xs[seg])) / top);
    }
    out[rows - 1] = 1.0;
    Ok(out)
}

fn grid(kind: PatchKind, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Result<MeshPoint> + Sync) -> Result<Patch> {
    let points = (0..rows * cols).into_par_iter().map(|i| f(i / cols, i % cols)).collect::<Result<Vec<_>>>()?;
    Ok(Patch { kind, rows, cols, points })
}

fn circle(j: usize, cols: usize) -> f64 {
    PI * j as f64 / cols as f64
}

/// Smooth lift of a smooth curve with every pants at t times its scheduled scale.
pub fn smooth_lift(curve: &PlaneCurve, sched: &GluingSchedule, t: f64, resolution: usize) -> Result<LagrangianMesh> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Config(format!("scale factor {t} outside (0, 1]")));
    }
    if resolution < 8 {
        return Err(Error::Config("resolution must be at least 8".into()));
    }
    if sched.vertices.len() != curve.vertices.len() {
        return Err(Error::Config("schedule does not match the curve".into()));
    }
    let (rows, cols) = (resolution, resolution);
    let mut patches = Vec::new();
    for vs in &sched.vertices {
        let lambda = t * vs.lambda;
        for leg in &vs.legs {
            let top = leg.radii[1];
            let grading = kite_grading(lambda, top, rows)?;
            let (vertex, edge) = (vs.vertex, leg.frame.edge);
            patches.push(grid(PatchKind::Pants { vertex, edge }, rows, cols, |i, j| {
                let c = circle(j, cols);
                let b = kite_floor(lambda, c);
                leg_point(leg, lambda, b + (top - b) * grading[i], c)
            })?);
            let (lo, hi) = (leg.radii[0], leg.radii[3]);
            patches.push(grid(PatchKind::Collar { vertex, edge }, rows, cols, |i, j| {
                leg_point(leg, lambda, lo + (hi - lo) * i as f64 / (rows - 1) as f64, circle(j, cols))
            })?);
        }
    }
    for (e, edge) in curve.edges.iter().enumerate() {
        let kind = PatchKind::Flat { edge: e };
        if let EdgeKind::Line { point, dir } = edge.kind {
            patches.push(line_patch(kind, [to_f64(&point[0]), to_f64(&point[1])], dir, sched.truncation, rows, cols));
            continue;
        }
        let (leg, lo, hi) = sched.flat_range(curve, e).ok_or_else(|| Error::Config(format!("edge {e} has no leg in the schedule")))?;
        let lambda = t * sched.vertices[leg.frame.vertex].lambda;
        patches.push(grid(kind, rows, cols, |i, j| leg_point(leg, lambda, lo + (hi - lo) * i as f64 / (rows - 1) as f64, circle(j, cols)))?);
    }
    Ok(LagrangianMesh { scale: t, resolution, truncation: sched.truncation, patches })
}

/// Cylinder over a whole line; the circle goes through the origin of the torus.
fn line_patch(kind: PatchKind, p: [f64; 2], dir: [i64; 2], cut: f64, rows: usize, cols: usize) -> Patch {
    let n = ((dir[0] * dir[0] + dir[1] * dir[1]) as f64).sqrt();
    let r = rot(dir);
    let mut points = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let s = -cut / n + 2.0 * cut / n * i as f64 / (rows - 1) as f64;
        for j in 0..cols {
            let c = circle(j, cols);
            points.push(MeshPoint {
                x: [p[0] + s * dir[0] as f64, p[1] + s * dir[1] as f64],
                y: [c * r[0] as f64, c * r[1] as f64],
                frame: [[dir[0] as f64, dir[1] as f64, 0.0, 0.0], [0.0, 0.0, r[0] as f64, r[1] as f64]],
                param: [s, c],
            });
        }
    }
    Patch { kind, rows, cols, points }
}

/// Shifts the flat cylinder of each listed edge once around the torus by n_f turns,
/// through the circle direction σ_f(s) = α + πn_fφ(s) with φ rising from 0 to 1 along
/// the flat stretch. The base projection is untouched.
pub fn twist(mesh: &LagrangianMesh, curve: &PlaneCurve, windings: &[(usize, i64)]) -> Result<LagrangianMesh> {
    let mut out = mesh.clone();
    for &(edge, n) in windings {
        if edge >= curve.edges.len() {
            return Err(Error::Input(format!("edge {edge} not in the curve")));
        }
        let u = edge_dir(curve, edge);
        let s = unit_pairing(u);
        let patch = out
            .patches
            .iter_mut()
            .find(|p| p.kind == PatchKind::Flat { edge })
            .ok_or_else(|| Error::Input(format!("edge {edge} has no flat cylinder")))?;
        let (lo, hi) = (patch.points[0].param[0], patch.points[patch.points.len() - 1].param[0]);
        // the row frame is ∂/∂x₁ in the chart of the patch
        for p in patch.points.iter_mut() {
            let (phi, dphi, _) = super::schedule::smooth_step((p.param[0] - lo) / (hi - lo));
            let k = PI * n as f64;
            p.y[0] += k * phi * s[0] as f64;
            p.y[1] += k * phi * s[1] as f64;
            p.frame[0][2] += k * dphi / (hi - lo) * s[0] as f64;
            p.frame[0][3] += k * dphi / (hi - lo) * s[1] as f64;
        }
    }
    Ok(out)
}

/// Total winding of a twist.
pub fn twist_class(windings: &[(usize, i64)]) -> i64 {
    windings.iter().map(|w| w.1).sum()
}

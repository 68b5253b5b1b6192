//! Numerical checks on sampled lifts.

use super::mesh::{leg_point, LagrangianMesh, MeshPoint, PatchKind};
use super::pl::PlLift;
use super::schedule::{GluingSchedule, LegSchedule};
use crate::coamoeba::wrap;
use crate::error::{Error, Result};
use crate::pants::gradient;
use kiddo::{ImmutableKdTree, SquaredEuclidean};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

fn norm(v: &[f64; 4]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// ω(v, w)/(|v||w|) for the standard form Σ dx_i ∧ dy_i.
pub fn symplectic_ratio(frame: &[[f64; 4]; 2]) -> f64 {
    let [v, w] = frame;
    let om = v[0] * w[2] - w[0] * v[2] + v[1] * w[3] - w[1] * v[3];
    om / (norm(v) * norm(w))
}

/// Largest normalized value of ω on the sampled tangent planes.
pub fn symplectic_residual(mesh: &LagrangianMesh) -> f64 {
    mesh.patches.par_iter().flat_map_iter(|p| p.points.iter().map(|q| symplectic_ratio(&q.frame).abs())).reduce(|| 0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HausdorffReport {
    pub mesh_to_pl: f64,
    pub pl_to_mesh: f64,
    pub distance: f64,
}

/// Hausdorff distance between the mesh and the PL lift in the product of the flat
/// metrics. Mesh to lift is exact per sample; lift to mesh uses `pl_res` samples per
/// direction of every PL piece and a k-d tree over the mesh.
pub fn hausdorff(mesh: &LagrangianMesh, pl: &PlLift, pl_res: usize) -> HausdorffReport {
    let pts: Vec<&MeshPoint> = mesh.points().collect();
    let mesh_to_pl = pts.par_iter().map(|p| pl.distance(p.x, p.y)).reduce(|| 0.0, f64::max);
    let reduced: Vec<[f64; 4]> = pts.iter().map(|p| [p.x[0], p.x[1], wrap(p.y[0], 0.0), wrap(p.y[1], 0.0)]).collect();
    let tree = match ImmutableKdTree::<f64, 4>::new_from_slice(&reduced) {
        Ok(t) => t,
        Err(_) => return HausdorffReport { mesh_to_pl, pl_to_mesh: f64::INFINITY, distance: f64::INFINITY },
    };
    let pl_to_mesh = pl
        .sample(pl_res)
        .par_iter()
        .map(|s| {
            let (a, b) = (wrap(s[2], 0.0), wrap(s[3], 0.0));
            let near = |q: [f64; 4]| tree.query(&q).nearest_one::<SquaredEuclidean<f64>>().execute().distance;
            let mut best = near([s[0], s[1], a, b]);
            // translates only matter when the fundamental square is closer than the best match
            for i in -1..=1 {
                for j in -1..=1 {
                    let gap = |v: f64| if v < 0.0 { -v } else if v > PI { v - PI } else { 0.0 };
                    let (qa, qb) = (a + PI * i as f64, b + PI * j as f64);
                    if (i, j) != (0, 0) && gap(qa).powi(2) + gap(qb).powi(2) < best {
                        best = best.min(near([s[0], s[1], qa, qb]));
                    }
                }
            }
            best.sqrt()
        })
        .reduce(|| 0.0, f64::max);
    HausdorffReport { mesh_to_pl, pl_to_mesh, distance: mesh_to_pl.max(pl_to_mesh) }
}

/// Phase of dz₁ ∧ dz₂ on a frame, z = y + ix.
pub fn phase(frame: &[[f64; 4]; 2]) -> f64 {
    let [v, w] = frame;
    let (a, b) = ((v[2], v[0]), (v[3], v[1]));
    let (c, d) = ((w[2], w[0]), (w[3], w[1]));
    let m = |p: (f64, f64), q: (f64, f64)| (p.0 * q.0 - p.1 * q.1, p.0 * q.1 + p.1 * q.0);
    let (l, r) = (m(a, d), m(b, c));
    (l.1 - r.1).atan2(l.0 - r.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopReport {
    pub vertex: usize,
    pub edge: usize,
    pub winding: i64,
    pub samples: usize,
    pub max_step: f64,
}

const MAX_PHASE_STEP: f64 = 0.01;

/// Winding of the phase around the circle {x₁} × [0, π) of a leg chart, with the
/// circle refined until consecutive phases differ by at most 0.01 rad.
pub fn leg_loop_winding(leg: &LegSchedule, lambda: f64, x1: f64) -> Result<LoopReport> {
    let ph = |c: f64| leg_point(leg, lambda, x1, c).map(|p| phase(&p.frame));
    let step = |a: f64, b: f64| {
        let d = (b - a).rem_euclid(2.0 * PI);
        if d > PI { d - 2.0 * PI } else { d }
    };
    let n0 = 512;
    let mut cs: Vec<f64> = (0..=n0).map(|i| PI * i as f64 / n0 as f64).collect();
    let mut ps: Vec<f64> = cs.iter().map(|&c| ph(c)).collect::<Result<_>>()?;
    for _ in 0..30 {
        let bad: Vec<usize> = (0..cs.len() - 1).filter(|&i| step(ps[i], ps[i + 1]).abs() > MAX_PHASE_STEP).collect();
        if bad.is_empty() {
            break;
        }
        if cs.len() > 2_000_000 {
            return Err(Error::Numeric("phase does not settle along the loop".into()));
        }
        let mut nc = Vec::with_capacity(cs.len() + bad.len());
        let mut np = Vec::with_capacity(cs.len() + bad.len());
        let mut k = 0;
        for i in 0..cs.len() {
            nc.push(cs[i]);
            np.push(ps[i]);
            if k < bad.len() && bad[k] == i {
                let m = 0.5 * (cs[i] + cs[i + 1]);
                nc.push(m);
                np.push(ph(m)?);
                k += 1;
            }
        }
        cs = nc;
        ps = np;
    }
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for w in ps.windows(2) {
        let d = step(w[0], w[1]);
        max_step = max_step.max(d.abs());
        total += d;
    }
    Ok(LoopReport {
        vertex: leg.frame.vertex,
        edge: leg.frame.edge,
        winding: (total / (2.0 * PI)).round() as i64,
        samples: cs.len(),
        max_step,
    })
}

/// Windings around the circles over the first two legs of every vertex, at x₁ = r′.
pub fn maslov_loops(sched: &GluingSchedule, t: f64) -> Result<Vec<LoopReport>> {
    let mut out = Vec::new();
    for v in &sched.vertices {
        for leg in v.legs.iter().take(2) {
            out.push(leg_loop_winding(leg, t * v.lambda, leg.radii[0])?);
        }
    }
    Ok(out)
}

/// Largest base distance between mesh samples where η = 1 and the pants point over
/// the same torus point. Samples on exceptional circles are skipped.
pub fn overlap_consistency(mesh: &LagrangianMesh, sched: &GluingSchedule) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in &mesh.patches {
        let (vertex, edge) = match p.kind {
            PatchKind::Pants { vertex, edge } | PatchKind::Collar { vertex, edge } => (vertex, edge),
            PatchKind::Flat { .. } => continue,
        };
        let leg = sched.leg(vertex, edge).ok_or_else(|| Error::Config("patch without a leg".into()))?;
        let lambda = mesh.scale * sched.vertices[vertex].lambda;
        let f = &leg.frame;
        for q in &p.points {
            let cw = wrap(q.param[1], 0.0);
            if q.param[0] > leg.radii[1] || cw < 1e-6 || cw > PI - 1e-6 || (cw - PI / 2.0).abs() < 1e-6 {
                continue;
            }
            // back to leg coordinates: y_leg = L⁻ᵀ(y − s) + o
            let d = [q.y[0] - f.shift[0], q.y[1] - f.shift[1]];
            let li = f.l_inv;
            let yl = [li[0][0] as f64 * d[0] + li[1][0] as f64 * d[1] + f.offset[0], li[0][1] as f64 * d[0] + li[1][1] as f64 * d[1] + f.offset[1]];
            let h = gradient(1, lambda, &yl).map_err(|e| Error::Numeric(format!("{e} at {yl:?} param {:?}", q.param)))?;
            let xl = f.to_leg(q.x);
            worst = worst.max((h[0] - xl[0]).abs()).max((h[1] - xl[1]).abs());
        }
    }
    Ok(worst)
}

/// Largest distance from a kite sample to its vertex.
pub fn kite_extent(mesh: &LagrangianMesh, sched: &GluingSchedule) -> f64 {
    let mut worst: f64 = 0.0;
    for p in &mesh.patches {
        if let PatchKind::Pants { vertex, edge } = p.kind {
            let o = sched.leg(vertex, edge).unwrap().frame.origin;
            for q in &p.points {
                worst = worst.max(((q.x[0] - o[0]).powi(2) + (q.x[1] - o[1]).powi(2)).sqrt());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::mesh::{smooth_lift, twist};
    use crate::lift::pl::{pl_lift, tests::example_curve};

    #[test]
    fn phases_of_flat_planes() {
        // a cylinder over the x₁-axis has phase ±π/2
        let f = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        assert!((phase(&f).abs() - PI / 2.0).abs() < 1e-15);
        assert_eq!(symplectic_ratio(&f), 0.0);
        assert!((symplectic_ratio(&[[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn example_mesh_checks() {
        let c = example_curve();
        let s = GluingSchedule::new(&c).unwrap();
        let m = smooth_lift(&c, &s, 1.0, 24).unwrap();
        assert!(symplectic_residual(&m) < 1e-6, "{}", symplectic_residual(&m));
        assert!(overlap_consistency(&m, &s).unwrap() < 1e-8);
        assert!(kite_extent(&m, &s) < s.radius);
        let tw = twist(&m, &c, &[(0, 2)]).unwrap();
        assert!(symplectic_residual(&tw) < 1e-6);
        let pl = pl_lift(&c, s.truncation).unwrap();
        let h = hausdorff(&m, &pl, 12);
        assert!(h.distance.is_finite() && h.distance < 1.0, "{h:?}");
        for l in maslov_loops(&s, 1.0).unwrap() {
            assert_eq!(l.winding, 0, "{l:?}");
            assert!(l.max_step <= MAX_PHASE_STEP);
        }
    }
}

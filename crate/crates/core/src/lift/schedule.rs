//! Frames and radii for gluing pants along the edges of a smooth plane curve.
//!
//! Around a vertex v the curve looks like the standard line after x ↦ A(x − v). Each
//! leg gets its own chart x_leg = L(x − v), L = P·A, in which the leg is the
//! positive x₁-axis and the pants is the standard one shifted by a torus offset. P is
//! the identity, the coordinate swap, or R*_1, which fix the standard pants.

use super::pl::{dual_data, edge_dir, DualData};
use crate::coamoeba::Symmetry;
use crate::error::{Error, Result};
use crate::tropical::{adapted_frame, EdgeKind, PlaneCurve};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// Fractions of the ball radius for r′ < r″ < r̄ < r.
pub const DEFAULT_FRACTIONS: [f64; 4] = [0.5, 0.65, 0.8, 0.95];
/// Ball radius as a fraction of the smallest distance between vertices.
pub const RADIUS_FACTOR: f64 = 0.45;
/// The largest admissible scale is shrunk by this factor.
pub const SCALE_MARGIN: f64 = 0.9;

const TABLE: usize = 1000;

fn bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        (-1.0 / (s * (1.0 - s))).exp()
    }
}

fn bump_d(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        let u = s * (1.0 - s);
        bump(s) * (1.0 - 2.0 * s) / (u * u)
    }
}

struct StepTable {
    values: Vec<f64>,
    total: f64,
}

fn step_table() -> &'static StepTable {
    static T: OnceLock<StepTable> = OnceLock::new();
    T.get_or_init(|| {
        // Simpson on 16 sub-intervals per table cell
        let sub = 16;
        let h = 1.0 / (TABLE * sub) as f64;
        let mut values = vec![0.0; TABLE + 1];
        let mut acc = 0.0;
        for i in 0..TABLE {
            for k in 0..sub / 2 {
                let a = ((i * sub + 2 * k) as f64) * h;
                acc += h / 3.0 * (bump(a) + 4.0 * bump(a + h) + bump(a + 2.0 * h));
            }
            values[i + 1] = acc;
        }
        StepTable { total: acc, values: values.iter().map(|v| v / acc).collect() }
    })
}

/// Smooth step B: [0, 1] → [0, 1] with B′ ∝ exp(−1/(s(1 − s))), with B′ and B″.
/// Values come from a cubic Hermite interpolation of a tabulated integral.
pub fn smooth_step(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if s >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let t = step_table();
    let pos = s * TABLE as f64;
    let i = (pos.floor() as usize).min(TABLE - 1);
    let u = pos - i as f64;
    let h = 1.0 / TABLE as f64;
    let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
    let (ma, mb) = (bump(a) / t.total * h, bump(b) / t.total * h);
    let (u2, u3) = (u * u, u * u * u);
    let v = (2.0 * u3 - 3.0 * u2 + 1.0) * t.values[i] + (u3 - 2.0 * u2 + u) * ma + (-2.0 * u3 + 3.0 * u2) * t.values[i + 1] + (u3 - u2) * mb;
    (v, bump(s) / t.total, bump_d(s) / t.total)
}

pub type Mat = [[i64; 2]; 2];

fn mul(a: Mat, b: Mat) -> Mat {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

fn apply(m: Mat, v: [i64; 2]) -> [i64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn apply_f(m: Mat, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] as f64 * v[0] + m[0][1] as f64 * v[1], m[1][0] as f64 * v[0] + m[1][1] as f64 * v[1]]
}

fn to_mat(v: &[Vec<i64>]) -> Mat {
    [[v[0][0], v[0][1]], [v[1][0], v[1][1]]]
}

/// Chart in which one leg of a vertex is the positive x₁-axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegFrame {
    pub vertex: usize,
    pub edge: usize,
    /// which standard leg: 1 for e₁, 2 for e₂, 0 for (−1, −1)
    pub label: usize,
    pub dir: [i64; 2],
    pub origin: [f64; 2],
    /// x_leg = P x_vertex
    pub p: Mat,
    pub l: Mat,
    pub l_inv: Mat,
    /// torus offset of the leg chart relative to the vertex chart
    pub offset: [f64; 2],
    /// translation matching the standard coamoeba with the vertex coamoeba
    pub shift: [f64; 2],
}

impl LegFrame {
    /// x = v + L⁻¹x_leg, y = Lᵀ(y_leg − o) + s.
    pub fn to_global(&self, xl: [f64; 2], yl: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let (dx, dy) = self.vec_to_global(xl, [yl[0] - self.offset[0], yl[1] - self.offset[1]]);
        ([self.origin[0] + dx[0], self.origin[1] + dx[1]], [dy[0] + self.shift[0], dy[1] + self.shift[1]])
    }

    pub fn vec_to_global(&self, dxl: [f64; 2], dyl: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let li = self.l_inv;
        let l = self.l;
        (
            [li[0][0] as f64 * dxl[0] + li[0][1] as f64 * dxl[1], li[1][0] as f64 * dxl[0] + li[1][1] as f64 * dxl[1]],
            [l[0][0] as f64 * dyl[0] + l[1][0] as f64 * dyl[1], l[0][1] as f64 * dyl[0] + l[1][1] as f64 * dyl[1]],
        )
    }

    /// Leg coordinates of a global base point.
    pub fn to_leg(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        let l = self.l;
        [l[0][0] as f64 * d[0] + l[0][1] as f64 * d[1], l[1][0] as f64 * d[0] + l[1][1] as f64 * d[1]]
    }

    pub fn dir_norm(&self) -> f64 {
        ((self.dir[0] * self.dir[0] + self.dir[1] * self.dir[1]) as f64).sqrt()
    }
}

const SWAP: Mat = [[0, 1], [1, 0]];
const FLIP: Mat = [[-1, 0], [-1, 1]];

/// Leg frames of every vertex, in the counterclockwise leg order of `dual`.
pub fn leg_frames(curve: &PlaneCurve, dual: &DualData) -> Result<Vec<Vec<LegFrame>>> {
    let mut out = Vec::new();
    for v in 0..curve.vertices.len() {
        let frame = adapted_frame(&curve.tangent_line(v)?)?;
        let a = to_mat(&frame.a);
        let a_inv = to_mat(&frame.a_inv);
        // labels in local coordinates, m_loc = A⁻ᵀ m
        let local: Vec<[i64; 2]> = dual.sectors[v].iter().map(|m| [a_inv[0][0] * m[0] + a_inv[1][0] * m[1], a_inv[0][1] * m[0] + a_inv[1][1] * m[1]]).collect();
        let mut shift = None;
        'outer: for sign in [1, -1] {
            for c in &local {
                let mut moved: Vec<[i64; 2]> = local.iter().map(|m| [sign * (m[0] - c[0]), sign * (m[1] - c[1])]).collect();
                moved.sort();
                if moved == vec![[0, 0], [0, 1], [1, 0]] {
                    shift = Some(*c);
                    break 'outer;
                }
            }
        }
        let c = shift.ok_or_else(|| Error::Degenerate(format!("labels at vertex {v} do not span a unimodular triangle")))?;
        let yc = [FRAC_PI_2 * c[0] as f64, FRAC_PI_2 * c[1] as f64];
        let shift = [a[0][0] as f64 * yc[0] + a[1][0] as f64 * yc[1], a[0][1] as f64 * yc[0] + a[1][1] as f64 * yc[1]];
        let mut legs = Vec::new();
        for leg in &dual.legs[v] {
            let local_dir = apply(a, leg.dir);
            let (label, p, offset) = match local_dir {
                [1, 0] => (1, [[1, 0], [0, 1]], [0.0, 0.0]),
                [0, 1] => (2, SWAP, [0.0, 0.0]),
                [-1, -1] => (0, FLIP, [FRAC_PI_2, 0.0]),
                d => return Err(Error::Degenerate(format!("leg {d:?} of vertex {v} is not standard in its frame"))),
            };
            legs.push(LegFrame {
                vertex: v,
                edge: leg.edge,
                label,
                dir: leg.dir,
                origin: curve.vertex_f64(v),
                p,
                l: mul(p, a),
                l_inv: mul(a_inv, p),
                offset,
                shift,
            });
        }
        out.push(legs);
    }
    Ok(out)
}

/// Radii along one leg, in leg coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegSchedule {
    pub frame: LegFrame,
    /// r′, r″, r̄, r
    pub radii: [f64; 4],
}

impl LegSchedule {
    /// Cutoff η along the leg with its first two derivatives: 1 up to r″, 0 from r̄.
    pub fn cutoff(&self, x1: f64) -> (f64, f64, f64) {
        let w = self.radii[2] - self.radii[1];
        let (b, db, ddb) = smooth_step((x1 - self.radii[1]) / w);
        (1.0 - b, -db / w, -ddb / (w * w))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexSchedule {
    pub vertex: usize,
    /// largest admissible pants scale; the mesh uses t times this
    pub lambda: f64,
    pub legs: Vec<LegSchedule>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GluingSchedule {
    pub radius: f64,
    pub fractions: [f64; 4],
    /// Euclidean distance from its base at which a ray is cut
    pub truncation: f64,
    pub vertices: Vec<VertexSchedule>,
}

/// Points of the boundary surfaces S_0, S_1, S_2 of λH in vertex coordinates.
fn boundary_samples(lambda: f64, span: f64) -> Vec<[f64; 2]> {
    let m = 4000;
    let lo = (lambda / (4.0 * span)).ln();
    let hi = (4.0 * span / lambda).ln();
    let mut out = Vec::with_capacity(3 * (m + 1));
    for k in 0..3 {
        let sym = if k == 0 { None } else { Some(Symmetry::new(2, k).unwrap()) };
        for i in 0..=m {
            let s = (lo + (hi - lo) * i as f64 / m as f64).exp();
            let p = [lambda * s / 2.0, lambda / (2.0 * s)];
            out.push(match &sym {
                None => p,
                Some(sy) => {
                    let b = sy.base(&p);
                    [b[0], b[1]]
                }
            });
        }
    }
    out
}

/// Both conditions on the scale at one vertex: the trimmed region H minus the leg
/// ends beyond r lies in the open ball, and the part of each leg beyond r′ stays
/// inside the cone of that leg.
fn scale_admissible(legs: &[LegSchedule], radius: f64, lambda: f64) -> bool {
    let span = legs.iter().map(|l| l.radii[3]).fold(0.0, f64::max);
    for p in boundary_samples(lambda, span) {
        let mut inside = true;
        for leg in legs {
            let pl = apply_f(leg.frame.p, p);
            if pl[0] >= leg.radii[3] {
                inside = false;
            }
            if pl[0] >= leg.radii[0] && !(pl[0] > 0.0 && pl[0] > pl[1]) {
                return false;
            }
        }
        if inside {
            let f = &legs[0].frame;
            let (dx, _) = f.vec_to_global(apply_f(f.p, p), [0.0, 0.0]);
            if (dx[0] * dx[0] + dx[1] * dx[1]).sqrt() >= radius {
                return false;
            }
        }
    }
    true
}


fn largest_scale(legs: &[LegSchedule], radius: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 4.0 * radius);
    if scale_admissible(legs, radius, hi) {
        return Ok(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if scale_admissible(legs, radius, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::Config("no admissible pants scale".into()));
    }
    Ok(lo)
}

impl GluingSchedule {
    pub fn new(curve: &PlaneCurve) -> Result<GluingSchedule> {
        GluingSchedule::with(curve, DEFAULT_FRACTIONS, None)
    }

    pub fn with(curve: &PlaneCurve, fractions: [f64; 4], truncation: Option<f64>) -> Result<GluingSchedule> {
        if !curve.is_balanced() {
            return Err(Error::Input("curve is not balanced".into()));
        }
        if !curve.is_smooth() {
            return Err(Error::Unsupported("smooth lifts need a smooth curve; use the covering model".into()));
        }
        if !(fractions[0] > 0.0 && fractions.windows(2).all(|w| w[0] < w[1]) && fractions[3] < 1.0) {
            return Err(Error::Config(format!("radius fractions {fractions:?} must increase inside (0, 1)")));
        }
        let nv = curve.vertices.len();
        let mut min_dist = f64::INFINITY;
        for i in 0..nv {
            for j in 0..i {
                let (a, b) = (curve.vertex_f64(i), curve.vertex_f64(j));
                min_dist = min_dist.min(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        let radius = RADIUS_FACTOR * if min_dist.is_finite() { min_dist } else { 1.0 };
        let truncation = truncation.unwrap_or(3.0 * curve.diameter());
        if truncation <= radius {
            return Err(Error::Config(format!("truncation {truncation} must exceed the ball radius {radius}")));
        }
        let dual = dual_data(curve)?;
        let frames = leg_frames(curve, &dual)?;
        let mut vertices = Vec::new();
        for (v, fs) in frames.into_iter().enumerate() {
            let legs: Vec<LegSchedule> = fs
                .into_iter()
                .map(|frame| {
                    let n = frame.dir_norm();
                    LegSchedule { radii: fractions.map(|f| f * radius / n), frame }
                })
                .collect();
            let lambda = SCALE_MARGIN * largest_scale(&legs, radius)?;
            vertices.push(VertexSchedule { vertex: v, lambda, legs });
        }
        Ok(GluingSchedule { radius, fractions, truncation, vertices })
    }

    pub fn leg(&self, vertex: usize, edge: usize) -> Option<&LegSchedule> {
        self.vertices.get(vertex)?.legs.iter().find(|l| l.frame.edge == edge)
    }

    /// Flat stretch of an edge in the leg coordinates of its first end, with that leg.
    pub fn flat_range(&self, curve: &PlaneCurve, edge: usize) -> Option<(&LegSchedule, f64, f64)> {
        match curve.edges[edge].kind {
            EdgeKind::Segment { a, b } => {
                let la = self.leg(a, edge)?;
                let lb = self.leg(b, edge)?;
                let (pa, pb) = (curve.vertex_f64(a), curve.vertex_f64(b));
                let u = edge_dir(curve, edge);
                let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt() / ((u[0] * u[0] + u[1] * u[1]) as f64).sqrt();
                Some((la, la.radii[3], len - lb.radii[3]))
            }
            EdgeKind::Ray { base, .. } => {
                let l = self.leg(base, edge)?;
                Some((l, l.radii[3], self.truncation / l.frame.dir_norm()))
            }
            EdgeKind::Line { .. } => None,
        }
    }
}

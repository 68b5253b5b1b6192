//! Projections adapted to a face E_J and inversion of h along their fibres.
//! After applying R_k the pair (J, k) becomes (J', 0) with 0 ∉ J'; then the torus
//! projection keeps the coordinates outside J' and the base projection those inside.
//! Along a fibre the J'-block of h is the gradient of the concave function
//! F − ⟨x_J, ·⟩, so the inverse is its unique maximiser.

use super::chart::vertex_jet;
use super::{plus_gradient, plus_hessian, plus_potential, PantsPoint};
use crate::coamoeba::{wrap, Symmetry};
use crate::error::{input, Error, Result};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

pub const NEWTON_TOL: f64 = 1e-12;
pub const MAX_ITER: usize = 80;
const FACE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionPair {
    pub n: usize,
    pub face: Vec<usize>,
    pub aux: usize,
    /// R_aux(face), a set of labels in 1..=n+1
    pub reduced: Vec<usize>,
}

/// Solution of a fibre problem. `reduced_y` and `reduced_h` are in the frame where
/// the auxiliary index is 0; `y`, `h` are global. `h` and `f` carry the factor λ.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSolution {
    pub point: PantsPoint,
    pub reduced_y: Vec<f64>,
    pub reduced_h: Vec<f64>,
    pub y: Vec<f64>,
    pub h: Vec<f64>,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LegendreValue {
    pub g: f64,
    pub dg_dx: Vec<f64>,
    pub dg_dy: Vec<f64>,
    pub solution: FiberSolution,
}

pub fn project(n: usize, face: &[usize], aux: usize) -> Result<ProjectionPair> {
    let d = n + 1;
    let mut f = face.to_vec();
    f.sort();
    f.dedup();
    if f.len() != face.len() || f.is_empty() || f.len() > n || f.iter().any(|&j| j > d) {
        return input(format!("face {face:?} must be a set of 1..={n} labels in 0..={d}"));
    }
    if aux > d || f.contains(&aux) {
        return input(format!("auxiliary index {aux} must lie outside the face"));
    }
    let reduced = if aux == 0 { f.clone() } else { Symmetry::new(d, aux)?.labels(&f) };
    Ok(ProjectionPair { n, face: f, aux, reduced })
}

impl ProjectionPair {
    fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn ell(&self) -> usize {
        self.face.len()
    }

    fn sym(&self) -> Option<Symmetry> {
        (self.aux != 0).then(|| Symmetry { k: self.aux, dim: self.dim() })
    }

    fn ins(&self) -> Vec<usize> {
        self.reduced.iter().map(|l| l - 1).collect()
    }

    fn outs(&self) -> Vec<usize> {
        (0..self.dim()).filter(|i| !self.reduced.contains(&(i + 1))).collect()
    }

    pub fn reduce_y(&self, y: &[f64]) -> Vec<f64> {
        self.sym().map_or(y.to_vec(), |s| s.torus(y))
    }

    pub fn reduce_x(&self, x: &[f64]) -> Vec<f64> {
        self.sym().map_or(x.to_vec(), |s| s.base(x))
    }

    pub fn y_proj(&self, y: &[f64]) -> Vec<f64> {
        let r = self.reduce_y(y);
        self.outs().iter().map(|&i| r[i]).collect()
    }

    pub fn x_proj(&self, x: &[f64]) -> Vec<f64> {
        let r = self.reduce_x(x);
        self.ins().iter().map(|&i| r[i]).collect()
    }

    /// (x_J(λh(y)), y_J(y)), the map the fibre solve inverts.
    pub fn forward(&self, lambda: f64, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let h = super::gradient(self.n, lambda, y)?;
        Ok((self.x_proj(&h), self.y_proj(y)))
    }

    /// The point q with x_J(λh(q)) = `xj` and y_J(q) = `yp`, in the neighbourhood W̃_{J,k}.
    pub fn fiber_solve(&self, lambda: f64, xj: &[f64], yp: &[f64]) -> Result<FiberSolution> {
        let (ins, outs) = (self.ins(), self.outs());
        if xj.len() != ins.len() || yp.len() != outs.len() {
            return input("projection data has the wrong length");
        }
        if !(lambda > 0.0) {
            return input("scale must be positive");
        }
        let u: Vec<f64> = xj.iter().map(|v| v / lambda).collect();
        if u.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Domain(format!("{xj:?} is not in the interior of the cone")));
        }
        let (plus, w) = face_side(yp)?;
        let s = FRAC_PI_2 - w.iter().sum::<f64>();
        let at_lower = w.iter().any(|v| v.abs() <= FACE_TOL);
        let at_upper = s.abs() <= FACE_TOL;
        let d = self.dim();
        let (reduced_point, rz, rh, f) = if at_lower || at_upper {
            if self.ell() != self.n {
                return Err(Error::Unsupported(
                    "fibres over the boundary of a face are only solved for faces of dimension one".into(),
                ));
            }
            let (vertex, alpha) = exceptional_direction(d, ins.len(), outs[0], &u, at_upper)?;
            let jet = vertex_jet(vertex, &alpha, 0.0)?;
            let mut y = jet.y.clone();
            if !plus {
                y = y.iter().map(|v| -v).collect();
            }
            (PantsPoint::Chart { vertex, alpha, t: 0.0 }, y, jet.h, 0.0)
        } else {
            let v = if ins.len() == 1 {
                let assemble = |val: f64| assemble(d, &ins, &outs, &[val], &w);
                let phi = |val: f64| -> Result<(f64, f64)> {
                    let z = assemble(val);
                    Ok((plus_gradient(&z)?[ins[0]] - u[0], plus_hessian(&z)[(ins[0], ins[0])]))
                };
                vec![solve_decreasing(phi, 0.0, s / 2.0, NEWTON_TOL)?]
            } else {
                maximize_on_slice(d, &ins, &outs, &w, &u)?
            };
            let z = assemble(d, &ins, &outs, &v, &w);
            let h = plus_gradient(&z)?;
            let f = plus_potential(&z);
            if plus {
                (PantsPoint::Torus(z.clone()), z, h, f)
            } else {
                let m: Vec<f64> = z.iter().map(|v| -v).collect();
                (PantsPoint::Torus(m.clone()), m, h, -f)
            }
        };
        let reduced_h: Vec<f64> = rh.iter().map(|v| lambda * v).collect();
        let (point, y, h) = match self.sym() {
            None => (reduced_point, rz.clone(), reduced_h.clone()),
            Some(sym) => {
                let y = sym.torus(&rz);
                let point = match reduced_point {
                    PantsPoint::Torus(_) => PantsPoint::Torus(y.clone()),
                    PantsPoint::Chart { vertex, alpha, t } => {
                        let (v, a) = conjugate_direction(d, &sym, vertex, &alpha)?;
                        debug_assert_eq!(t, 0.0);
                        PantsPoint::Chart { vertex: v, alpha: a, t }
                    }
                };
                (point, y, sym.base(&reduced_h))
            }
        };
        Ok(FiberSolution { point, reduced_y: rz, reduced_h, y, h, f: lambda * f })
    }

    /// G = −λF(q) + ⟨x_J, q_J⟩ with ∂G/∂x_J = q_J and ∂G/∂y' = −λ h_{J^c}(q).
    pub fn legendre(&self, lambda: f64, xj: &[f64], yp: &[f64]) -> Result<LegendreValue> {
        let sol = self.fiber_solve(lambda, xj, yp)?;
        let qj: Vec<f64> = self.ins().iter().map(|&i| sol.reduced_y[i]).collect();
        let g = -sol.f + xj.iter().zip(&qj).map(|(a, b)| a * b).sum::<f64>();
        let dg_dy = self.outs().iter().map(|&i| -sol.reduced_h[i]).collect();
        Ok(LegendreValue { g, dg_dx: qj, dg_dy, solution: sol })
    }
}

/// Which closed half of the face E_{J'} carries y', with its plus representative.
fn face_side(yp: &[f64]) -> Result<(bool, Vec<f64>)> {
    for (plus, sign) in [(true, 1.0), (false, -1.0)] {
        let w: Vec<f64> = yp.iter().map(|&v| wrap(sign * v, -FRAC_PI_4)).collect();
        if w.iter().all(|&v| v >= -FACE_TOL) && w.iter().sum::<f64>() <= FRAC_PI_2 + FACE_TOL {
            return Ok((plus, w.iter().map(|v| v.max(0.0)).collect()));
        }
    }
    Err(Error::Domain(format!("{yp:?} does not lie on the closure of the face")))
}

fn assemble(d: usize, ins: &[usize], outs: &[usize], v: &[f64], w: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; d];
    for (i, val) in ins.iter().zip(v) {
        z[*i] = *val;
    }
    for (i, val) in outs.iter().zip(w) {
        z[*i] = *val;
    }
    z
}

/// Direction on the exceptional sphere solving the fibre over a vertex of a
/// one-dimensional face. `missing` is the coordinate outside J'. Returns the vertex
/// label and α in the chart with the axis last.
fn exceptional_direction(d: usize, ell: usize, missing: usize, u: &[f64], upper: bool) -> Result<(usize, Vec<f64>)> {
    let n = d - 1;
    debug_assert_eq!(ell, n);
    let df = d as f64;
    let prod: f64 = u.iter().product();
    let mut hat = vec![1.0; d];
    let others: Vec<usize> = (0..d).filter(|&i| i != missing).collect();
    if !upper {
        // p_0: α_j = 1 / (d^d x_j Π x)
        for (i, &c) in others.iter().enumerate() {
            hat[c] = 1.0 / (df.powi(d as i32) * u[i] * prod);
        }
    } else {
        // p_m: with c = (Π α)^{1/d}/d, d^d c Π(c + x_j) = 1 and α_j = c/(c + x_j)
        let g = |c: f64| df.powi(d as i32) * c * u.iter().map(|x| c + x).product::<f64>() - 1.0;
        let mut hi = 1.0;
        while g(hi) < 0.0 {
            hi *= 2.0;
        }
        let (mut lo, mut hi) = (0.0, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);
        for (i, &k) in others.iter().enumerate() {
            hat[k] = c / (c + u[i]);
        }
    }
    let alpha: Vec<f64> = hat[..d - 1].iter().map(|a| a / hat[d - 1]).collect();
    Ok((if upper { missing + 1 } else { 0 }, alpha))
}

/// Re-express the exceptional direction at reduced vertex `v` after applying `sym`.
fn conjugate_direction(d: usize, sym: &Symmetry, v: usize, alpha: &[f64]) -> Result<(usize, Vec<f64>)> {
    let target = sym.label(v);
    let mut hat = alpha.to_vec();
    hat.push(1.0);
    // R_target ∘ sym ∘ R_v fixes p_0, so its linear part permutes coordinates
    let mut dir = if v == 0 { hat } else { Symmetry::new(d, v)?.torus_linear(&hat) };
    dir = sym.torus_linear(&dir);
    if target != 0 {
        dir = Symmetry::new(d, target)?.torus_linear(&dir);
    }
    if dir.iter().any(|&a| a <= 0.0) {
        return Err(Error::Numeric("direction left the positive orthant".into()));
    }
    Ok((target, dir[..d - 1].iter().map(|a| a / dir[d - 1]).collect()))
}

/// Root of a decreasing function on (lo, hi): Newton steps kept inside a shrinking
/// bracket, bisection otherwise.
pub fn solve_decreasing(f: impl Fn(f64) -> Result<(f64, f64)>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut v = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (fv, dv) = f(v)?;
        if fv == 0.0 {
            return Ok(v);
        }
        if fv > 0.0 {
            lo = v;
        } else {
            hi = v;
        }
        let newton = v - fv / dv;
        let next = if dv < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - v).abs() <= tol || hi - lo <= tol {
            return Ok(next);
        }
        v = next;
    }
    Err(Error::Numeric(format!("no convergence in {MAX_ITER} iterations; bracket [{lo}, {hi}]")))
}

/// Damped Newton ascent for F − ⟨u, v⟩ over the slice of C⁺ with fixed coordinates `w`.
fn maximize_on_slice(d: usize, ins: &[usize], outs: &[usize], w: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let l = ins.len();
    let s = FRAC_PI_2 - w.iter().sum::<f64>();
    let inside = |v: &[f64]| v.iter().all(|&x| x > 0.0) && v.iter().sum::<f64>() < s;
    let psi = |v: &[f64]| plus_potential(&assemble(d, ins, outs, v, w)) - v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
    let mut v = vec![s / (l + 1) as f64; l];
    for _ in 0..MAX_ITER {
        let z = assemble(d, ins, outs, &v, w);
        let h = plus_gradient(&z)?;
        let g = DVector::from_fn(l, |i, _| h[ins[i]] - u[i]);
        let full = plus_hessian(&z);
        let hm = DMatrix::from_fn(l, l, |i, j| full[(ins[i], ins[j])]);
        let dir = match (-hm).cholesky() {
            Some(ch) => ch.solve(&g),
            None => g.clone(),
        };
        let slope = g.dot(&dir);
        let p0 = psi(&v);
        let mut a = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = v.iter().zip(dir.iter()).map(|(x, dx)| x + a * dx).collect();
            if inside(&cand) {
                let small = a * dir.amax() < 1e-8;
                if small || psi(&cand) >= p0 + 1e-4 * a * slope {
                    accepted = Some(cand);
                    break;
                }
            }
            a *= 0.5;
        }
        let cand = accepted.ok_or_else(|| Error::Numeric("line search failed".into()))?;
        let step = a * dir.amax();
        v = cand;
        if step <= NEWTON_TOL {
            // a stalled ascent at the boundary is not a critical point
            let h = plus_gradient(&assemble(d, ins, outs, &v, w))?;
            let res = ins.iter().zip(u).map(|(&i, ui)| (h[i] - ui).abs()).fold(0.0, f64::max);
            if res > 1e-6 * (1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max)) {
                return Err(Error::Numeric(format!("ascent stalled with gradient residual {res:e}")));
            }
            return Ok(v);
        }
    }
    Err(Error::Numeric(format!("fibre solve did not converge in {MAX_ITER} iterations")))
}

/// Legendre dual over the interior of H: G(x) = ⟨x, y⟩ − λF(y) with λh(y) = x and
/// y ∈ C⁺, so that ∂G/∂x = y. Returns (G, y).
pub fn full_legendre(n: usize, lambda: f64, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    let d = n + 1;
    if x.len() != d || !(lambda > 0.0) {
        return input("full Legendre transform needs a point of the base and λ > 0");
    }
    let u: Vec<f64> = x.iter().map(|v| v / lambda).collect();
    let ins: Vec<usize> = (0..d).collect();
    let y = maximize_on_slice(d, &ins, &[], &[], &u)
        .map_err(|e| Error::Domain(format!("{x:?} is not in the image of h ({e})")))?;
    let g = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() - lambda * plus_potential(&y);
    Ok((g, y))
}

/// Fibre data along the leg of the one-dimensional model (face {1}, auxiliary 0):
/// q solves h₁(q) = x, q₂ = c for x > 0 and c on the whole circle, including the
/// two exceptional fibres at c ≡ 0 and c ≡ π/2. Columns of `dq`, `dh` are ∂/∂x, ∂/∂c.
/// Nothing is scaled by λ; `f` is the signed potential.
#[derive(Clone, Debug, PartialEq)]
pub struct CollarJet {
    pub q: [f64; 2],
    pub h: [f64; 2],
    pub f: f64,
    pub dq: [[f64; 2]; 2],
    pub dh: [[f64; 2]; 2],
}

/// Width of the circle interval around an exceptional fibre handled in a chart.
pub const COLLAR_SWITCH: f64 = 1e-3;

pub fn collar_jet(x: f64, c: f64) -> Result<CollarJet> {
    if !(x.is_finite() && x >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("collar fibre needs x ≥ 0, got {x}")));
    }
    let cw = wrap(c, 0.0);
    let mut jet = if cw < COLLAR_SWITCH || cw > PI - COLLAR_SWITCH {
        origin_collar(x, if cw < COLLAR_SWITCH { cw } else { cw - PI })?
    } else if (cw - FRAC_PI_2).abs() < COLLAR_SWITCH {
        upper_collar(x, FRAC_PI_2 - cw)?
    } else if cw < FRAC_PI_2 {
        torus_collar(x, cw)?
    } else {
        let p = torus_collar(x, PI - cw)?;
        CollarJet {
            q: [-p.q[0], 0.0],
            h: p.h,
            f: -p.f,
            dq: [[-p.dq[0][0], p.dq[0][1]], [0.0, 1.0]],
            dh: [[p.dh[0][0], -p.dh[0][1]], [p.dh[1][0], -p.dh[1][1]]],
        }
    };
    jet.q[1] = c;
    Ok(jet)
}

/// Turns parameter Jacobians into derivatives in (x, c) by inverting
/// [∂h₁/∂p; ∂q₂/∂p].
fn frame_from_params(h: [f64; 2], f: f64, q1: f64, dh: [[f64; 2]; 2], dy: [[f64; 2]; 2]) -> Result<CollarJet> {
    let m = [[dh[0][0], dh[0][1]], [dy[1][0], dy[1][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Numeric("singular collar frame".into()));
    }
    // columns of m⁻¹: parameter derivatives along x and along c
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    let mul = |a: [[f64; 2]; 2]| {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * inv[0][j] + a[i][1] * inv[1][j];
            }
        }
        out
    };
    Ok(CollarJet { q: [q1, 0.0], h, f, dq: mul(dy), dh: mul(dh) })
}

fn vec2(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

fn mat2(v: &[Vec<f64>]) -> [[f64; 2]; 2] {
    [vec2(&v[0]), vec2(&v[1])]
}

fn torus_collar(x: f64, c: f64) -> Result<CollarJet> {
    let phi = |y1: f64| -> Result<(f64, f64)> {
        let z = [y1, c];
        Ok((plus_gradient(&z)?[0] - x, plus_hessian(&z)[(0, 0)]))
    };
    // h₁ vanishes exactly where β₀ = β₁
    let y1 = if x == 0.0 { (FRAC_PI_2 - c) / 2.0 } else { solve_decreasing(phi, 0.0, (FRAC_PI_2 - c) / 2.0, NEWTON_TOL)? };
    let z = [y1, c];
    let h = plus_gradient(&z)?;
    let hm = plus_hessian(&z);
    let dh = [[hm[(0, 0)], hm[(0, 1)]], [hm[(1, 0)], hm[(1, 1)]]];
    frame_from_params(vec2(&h), plus_potential(&z), y1, dh, [[1.0, 0.0], [0.0, 1.0]])
}

/// Log-parameter root search for a decreasing function of α on (0, α_hi).
fn solve_alpha(g: impl Fn(f64) -> Result<(f64, f64)>, alpha_hi: f64) -> Result<f64> {
    let top = alpha_hi.ln();
    let mut lo = top - 8.0;
    let mut tries = 0;
    while g(lo.exp())?.0 <= 0.0 {
        lo -= 8.0;
        tries += 1;
        if tries > 40 {
            return Err(Error::Numeric("could not bracket the collar fibre".into()));
        }
    }
    let phi = |l: f64| -> Result<(f64, f64)> {
        let a = l.exp();
        let (v, dv) = g(a)?;
        Ok((v, dv * a))
    };
    Ok(solve_decreasing(phi, lo, top, 1e-14)?.exp())
}

/// Chart at p_0 with the second coordinate as axis: q = (tα, t), t = c.
fn origin_collar(x: f64, t: f64) -> Result<CollarJet> {
    if x == 0.0 {
        return Err(Error::Domain("the fibre at x = 0 misses the exceptional circle".into()));
    }
    let alpha = if t == 0.0 {
        1.0 / (4.0 * x * x)
    } else {
        let hi = (FRAC_PI_2 - t.abs()) / (2.0 * t.abs());
        solve_alpha(
            |a| {
                let j = vertex_jet(0, &[a], t)?;
                Ok((j.h[0] - x, j.dh[0][0]))
            },
            hi,
        )?
    };
    let j = vertex_jet(0, &[alpha], t)?;
    frame_from_params(vec2(&j.h), j.f, j.y[0], mat2(&j.dh), mat2(&j.dy))
}

/// Chart at p_2: q = R_2(tα, t) so q₂ = π/2 − t(1 + α); with s = π/2 − c, t = s/(1 + α).
fn upper_collar(x: f64, s: f64) -> Result<CollarJet> {
    let alpha = if s == 0.0 {
        let r = (x * x + 1.0).sqrt() - x;
        r * r
    } else if x == 0.0 {
        1.0
    } else {
        solve_alpha(
            |a| {
                let t = s / (1.0 + a);
                let j = vertex_jet(2, &[a], t)?;
                Ok((j.h[0] - x, j.dh[0][0] - j.dh[0][1] * s / (1.0 + a).powi(2)))
            },
            1.0,
        )?
    };
    let j = vertex_jet(2, &[alpha], s / (1.0 + alpha))?;
    frame_from_params(vec2(&j.h), j.f, j.y[0], mat2(&j.dh), mat2(&j.dy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pants::gradient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_plus(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..=d).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s: f64 = w.iter().sum();
        w[1..].iter().map(|v| FRAC_PI_2 * v / s).collect()
    }

    #[test]
    fn project_validation() {
        assert!(project(1, &[1], 0).is_ok());
        assert!(project(1, &[1], 1).is_err());
        assert!(project(1, &[1, 2], 0).is_err());
        assert_eq!(project(2, &[0, 3], 1).unwrap().reduced, vec![1, 3]);
    }

    #[test]
    fn round_trip_one_dimensional() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pp = project(1, &[1], 0).unwrap();
        let mut count = 0;
        while count < 300 {
            let mut y = random_plus(&mut rng, 2);
            if 2.0 * y[0] + y[1] >= FRAC_PI_2 {
                continue;
            }
            if rng.gen_bool(0.5) {
                y = y.iter().map(|v| -v).collect();
            }
            count += 1;
            let (xj, yp) = pp.forward(1.3, &y).unwrap();
            let sol = pp.fiber_solve(1.3, &xj, &yp).unwrap();
            for i in 0..2 {
                assert!((wrap(sol.y[i] - y[i], -FRAC_PI_2)).abs() < 1e-8, "{y:?} {:?}", sol.y);
            }
        }
    }

    #[test]
    fn round_trip_with_symmetry_and_dimension_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (face, aux) in [(vec![1, 2], 0), (vec![3], 0), (vec![0], 2), (vec![0, 1], 3)] {
            let pp = project(2, &face, aux).unwrap();
            let mut count = 0;
            while count < 100 {
                let y = random_plus(&mut rng, 3);
                let (xj, yp) = pp.forward(1.0, &y).unwrap();
                if xj.iter().any(|v| *v <= 0.0) {
                    continue;
                }
                count += 1;
                let sol = pp.fiber_solve(1.0, &xj, &yp).unwrap();
                for i in 0..3 {
                    assert!((wrap(sol.y[i] - y[i], -FRAC_PI_2)).abs() < 1e-8, "{face:?} {aux} {y:?} {:?}", sol.y);
                }
            }
        }
    }

    #[test]
    fn exceptional_fibres() {
        // over p_0 the inverse of the exceptional map
        let pp = project(1, &[1], 0).unwrap();
        let sol = pp.fiber_solve(1.0, &[0.8], &[0.0]).unwrap();
        assert!((sol.h[0] - 0.8).abs() < 1e-14);
        assert!((4.0 * sol.h[0] * sol.h[1] - 1.0).abs() < 1e-12);
        let sol = pp.fiber_solve(1.0, &[0.8], &[FRAC_PI_2]).unwrap();
        assert!((sol.h[0] - 0.8).abs() < 1e-12);
        let pp2 = project(2, &[1, 2], 0).unwrap();
        let sol = pp2.fiber_solve(1.0, &[0.3, 0.7], &[0.0]).unwrap();
        assert!((sol.h[0] - 0.3).abs() < 1e-12 && (sol.h[1] - 0.7).abs() < 1e-12);
        assert!((27.0 * sol.h.iter().product::<f64>() - 1.0).abs() < 1e-12);
        let sol = pp2.fiber_solve(1.0, &[0.3, 0.7], &[FRAC_PI_2]).unwrap();
        assert!((sol.h[0] - 0.3).abs() < 1e-12 && (sol.h[1] - 0.7).abs() < 1e-12);
        // with a symmetry: the fibre lands at the image vertex
        let pp3 = project(1, &[0], 1).unwrap();
        let sol = pp3.fiber_solve(1.0, &[0.5], &[0.0]).unwrap();
        assert_eq!(pp3.x_proj(&sol.h), vec![sol.reduced_h[0]]);
        assert!(matches!(sol.point, PantsPoint::Chart { vertex: 1, .. }));
        let pp4 = project(2, &[1], 0).unwrap();
        assert!(matches!(pp4.fiber_solve(1.0, &[0.3], &[0.0, 0.4]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn approaching_the_cone_boundary() {
        // as x_J → 0 the solution tends to the hyperplane where h_j vanishes
        let pp = project(1, &[1], 0).unwrap();
        let c = 0.5;
        let sol = pp.fiber_solve(1.0, &[1e-9], &[c]).unwrap();
        assert!((2.0 * sol.y[0] + c - FRAC_PI_2).abs() < 1e-6);
        assert!(pp.fiber_solve(1.0, &[-0.1], &[c]).is_err());
    }

    #[test]
    fn legendre_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, face) in [(1, vec![1]), (2, vec![1, 2]), (2, vec![2])] {
            let pp = project(n, &face, 0).unwrap();
            let mut count = 0;
            while count < 30 {
                let y = random_plus(&mut rng, n + 1);
                let (xj, yp) = pp.forward(1.0, &y).unwrap();
                if xj.iter().any(|v| *v <= 0.0) {
                    continue;
                }
                count += 1;
                let lv = pp.legendre(1.0, &xj, &yp).unwrap();
                let step = 1e-6;
                for i in 0..xj.len() {
                    let mut a = xj.clone();
                    let mut b = xj.clone();
                    a[i] += step;
                    b[i] -= step;
                    let fd = (pp.legendre(1.0, &a, &yp).unwrap().g - pp.legendre(1.0, &b, &yp).unwrap().g) / (2.0 * step);
                    assert!((fd - lv.dg_dx[i]).abs() < 1e-6);
                }
                for i in 0..yp.len() {
                    let mut a = yp.clone();
                    let mut b = yp.clone();
                    a[i] += step;
                    b[i] -= step;
                    let fd = (pp.legendre(1.0, &xj, &a).unwrap().g - pp.legendre(1.0, &xj, &b).unwrap().g) / (2.0 * step);
                    assert!((fd - lv.dg_dy[i]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn full_legendre_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in [1, 2] {
            for _ in 0..20 {
                let y = random_plus(&mut rng, n + 1);
                let x = gradient(n, 1.0, &y).unwrap();
                let (_, ys) = full_legendre(n, 1.0, &x).unwrap();
                for i in 0..=n {
                    assert!((ys[i] - y[i]).abs() < 1e-8);
                }
                let step = 1e-6;
                for i in 0..=n {
                    let mut a = x.clone();
                    let mut b = x.clone();
                    a[i] += step;
                    b[i] -= step;
                    let fd = (full_legendre(n, 1.0, &a).unwrap().0 - full_legendre(n, 1.0, &b).unwrap().0) / (2.0 * step);
                    assert!((fd - y[i]).abs() < 1e-6);
                }
            }
        }
        assert!(full_legendre(1, 1.0, &[10.0, 10.0]).is_err());
    }

    #[test]
    fn collar_covers_the_circle() {
        for &x in &[0.05, 0.5, 3.0, 40.0] {
            let mut prev: Option<CollarJet> = None;
            let m = 4000;
            for i in 0..=m {
                let c = PI * i as f64 / m as f64;
                let j = collar_jet(x, c).unwrap();
                assert!((j.h[0] - x).abs() < 1e-9 * x.max(1.0), "x={x} c={c} h={:?}", j.h);
                if let Some(p) = prev {
                    let dc = PI / m as f64;
                    // trapezoid consistency of the frame along c, across branch switches
                    let (a, b) = (p.dq[0][1], j.dq[0][1]);
                    let pred = p.q[0] + 0.5 * (a + b) * dc;
                    assert!((pred - j.q[0]).abs() < 1e-2 * (a.abs() + b.abs()) * dc + 1e-12, "x={x} c={c}");
                }
                prev = Some(j);
            }
        }
    }

    #[test]
    fn collar_at_zero() {
        for c in [FRAC_PI_2 / 3.0, 0.9, FRAC_PI_2 - 5e-4, FRAC_PI_2, 2.0, PI - 0.2] {
            let j = collar_jet(0.0, c).unwrap();
            assert!(j.h[0].abs() < 1e-12, "{c} {:?}", j.h);
            let k = collar_jet(1e-9, c).unwrap();
            assert!((k.q[0] - j.q[0]).abs() < 1e-6 && (k.dq[0][1] - j.dq[0][1]).abs() < 1e-5);
        }
        assert!(collar_jet(0.0, 0.0).is_err());
    }

    #[test]
    fn collar_frames_match_differences() {
        for &(x, c) in &[(0.7, 0.3), (0.7, 5e-4), (0.7, FRAC_PI_2 - 4e-4), (0.7, 2.5), (2.0, PI - 2e-4), (0.3, 0.0), (0.3, FRAC_PI_2)] {
            let j = collar_jet(x, c).unwrap();
            let s = 1e-7;
            let jx = (collar_jet(x + s, c).unwrap(), collar_jet(x - s, c).unwrap());
            let jc = (collar_jet(x, c + s).unwrap(), collar_jet(x, c - s).unwrap());
            for i in 0..2 {
                let fq = [(jx.0.q[i] - jx.1.q[i]) / (2.0 * s), (jc.0.q[i] - jc.1.q[i]) / (2.0 * s)];
                let fh = [(jx.0.h[i] - jx.1.h[i]) / (2.0 * s), (jc.0.h[i] - jc.1.h[i]) / (2.0 * s)];
                for k in 0..2 {
                    assert!((fq[k] - j.dq[i][k]).abs() < 1e-5 * j.dq[i][k].abs().max(1.0), "q {x} {c} {i} {k}: {} vs {}", fq[k], j.dq[i][k]);
                    assert!((fh[k] - j.dh[i][k]).abs() < 1e-5 * j.dh[i][k].abs().max(1.0), "h {x} {c} {i} {k}: {} vs {}", fh[k], j.dh[i][k]);
                }
            }
        }
    }
}

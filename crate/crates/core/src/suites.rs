//! Verification suites: each measures one family of properties and judges it
//! against fixed tolerances. Sampling is deterministic for a given seed.

use crate::coamoeba::{iota, wrap, Symmetry};
use crate::error::{Error, Result};
use crate::fixtures::{curve_fixture, toric_fixture};
use crate::lift::mesh::smooth_lift;
use crate::lift::pl::{exactness_check, pl_lift, ExactnessReport};
use crate::lift::schedule::GluingSchedule;
use crate::lift::verify::{hausdorff, maslov_loops, symplectic_residual, LoopReport};
use crate::pants::appendix::{check_lemmas, AppendixReport};
use crate::pants::decomposition::{q_vertex, tau, z_of_t};
use crate::pants::fiber::project;
use crate::pants::region::{barycentric, in_w, RegionH};
use crate::pants::{gradient, hessian, PantsMap, PantsPoint};
use crate::toric::{lift_topology, monotone_report, LiftTopology, MonotoneReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

pub const SUITES: &[&str] = &[
    "hessian",
    "boundary",
    "region",
    "equivariance",
    "legendre",
    "decomposition",
    "appendix",
    "lift",
    "maslov",
    "exactness",
    "topology",
    "monotone",
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub passed: bool,
    pub detail: Value,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Halton points in the open unit cube, shifted by a seeded rotation.
pub fn halton(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    (1..=count as u64)
        .map(|i| (0..dim).map(|k| (radical_inverse(i, PRIMES[k]) + shift[k]).fract().clamp(1e-12, 1.0 - 1e-12)).collect())
        .collect()
}

/// Quasi-random interior points of C⁺ ⊂ T^{n+1}, via exponential spacings.
pub fn plus_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    halton(n + 2, count, seed)
        .into_iter()
        .map(|u| {
            let w: Vec<f64> = u.iter().map(|v| -v.ln()).collect();
            let s: f64 = w.iter().sum();
            w[..=n].iter().map(|v| FRAC_PI_2 * v / s).collect()
        })
        .collect()
}

fn random_plus(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n + 2).map(|_| rng.gen_range(0.001..1.0)).collect();
    let s: f64 = w.iter().sum();
    w[..=n].iter().map(|v| FRAC_PI_2 * v / s).collect()
}

/// Largest eigenvalue of Hess F over quasi-random points of C⁺.
pub fn hessian_max_eigenvalue(n: usize, samples: usize, seed: u64) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for y in plus_points(n, samples, seed) {
        let ev = hessian(n, 1.0, &y)?.symmetric_eigen().eigenvalues;
        worst = worst.max(ev.max());
    }
    Ok(worst)
}

/// Largest |(n+1)^{n+1} Π h_j − 1| over chart points on the exceptional set of p_0.
pub fn boundary_residual(n: usize, samples: usize, seed: u64) -> Result<f64> {
    let m = PantsMap::new(n, 1.0)?;
    let d = (n + 1) as f64;
    let mut worst: f64 = 0.0;
    for u in halton(n, samples, seed) {
        let alpha: Vec<f64> = u.iter().map(|v| (6.0 * v - 3.0).exp()).collect();
        let h = m.gradient(&PantsPoint::Chart { vertex: 0, alpha, t: 0.0 })?;
        worst = worst.max((d.powf(d) * h.iter().product::<f64>() - 1.0).abs());
    }
    Ok(worst)
}

/// Smallest slack of the first region inequality over the images of W̃ near p_0.
pub fn region_min_slack(n: usize, samples: usize, seed: u64) -> Result<f64> {
    let r = RegionH::new(n, 1.0)?;
    let face: Vec<usize> = (1..=n + 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut count, mut worst) = (0, f64::INFINITY);
    while count < samples {
        let y = random_plus(&mut rng, n);
        if !in_w(&barycentric(&y), &face, 0.0) {
            continue;
        }
        count += 1;
        worst = worst.min(r.slack(0, &gradient(n, 1.0, &y)?)?);
    }
    Ok(worst)
}

/// (max |h(R_k y) − R*_k h(y)| over all k, max |h(ι y) − h(y)|).
pub fn equivariance_errors(n: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sym, mut inv): (f64, f64) = (0.0, 0.0);
    let d = n + 1;
    for _ in 0..samples {
        let y = random_plus(&mut rng, n);
        let h = gradient(n, 1.0, &y)?;
        for k in 1..=d {
            let s = Symmetry::new(d, k)?;
            let lhs = gradient(n, 1.0, &s.torus(&y))?;
            let rhs = s.base(&h);
            sym = lhs.iter().zip(&rhs).fold(sym, |m, (a, b)| m.max((a - b).abs()));
        }
        let hm = gradient(n, 1.0, &iota(&y))?;
        inv = hm.iter().zip(&h).fold(inv, |m, (a, b)| m.max((a - b).abs()));
    }
    Ok((sym, inv))
}

/// (round-trip error of the fibre solve, worst finite-difference mismatch of ∂G).
pub fn legendre_errors(samples: usize, fd_samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: [(usize, &[usize], usize); 5] = [(1, &[1], 0), (2, &[1, 2], 0), (2, &[3], 0), (2, &[0], 2), (2, &[0, 1], 3)];
    let mut round: f64 = 0.0;
    let per = samples.div_ceil(configs.len());
    for (n, face, aux) in configs {
        let pp = project(n, face, aux)?;
        let mut count = 0;
        while count < per {
            let mut y = random_plus(&mut rng, n);
            if n == 1 && 2.0 * y[0] + y[1] >= FRAC_PI_2 {
                continue;
            }
            if n == 1 && rng.gen_bool(0.5) {
                y = iota(&y);
            }
            let (xj, yp) = pp.forward(1.0, &y)?;
            if xj.iter().any(|v| *v <= 0.0) {
                continue;
            }
            count += 1;
            let sol = pp.fiber_solve(1.0, &xj, &yp)?;
            round = sol.y.iter().zip(&y).fold(round, |m, (a, b)| m.max(wrap(a - b, -FRAC_PI_2).abs()));
        }
    }
    let mut fd: f64 = 0.0;
    let step = 1e-6;
    let fd_configs: [(usize, &[usize]); 3] = [(1, &[1]), (2, &[1, 2]), (2, &[2])];
    for (n, face) in fd_configs {
        let pp = project(n, face, 0)?;
        let mut count = 0;
        while count < fd_samples.div_ceil(3) {
            let y = random_plus(&mut rng, n);
            let (xj, yp) = pp.forward(1.0, &y)?;
            if xj.iter().any(|v| *v <= 0.0) {
                continue;
            }
            count += 1;
            let lv = pp.legendre(1.0, &xj, &yp)?;
            let g = |x: &[f64], p: &[f64]| pp.legendre(1.0, x, p).map(|l| l.g);
            for i in 0..xj.len() {
                let (mut a, mut b) = (xj.clone(), xj.clone());
                a[i] += step;
                b[i] -= step;
                fd = fd.max(((g(&a, &yp)? - g(&b, &yp)?) / (2.0 * step) - lv.dg_dx[i]).abs());
            }
            for i in 0..yp.len() {
                let (mut a, mut b) = (yp.clone(), yp.clone());
                a[i] += step;
                b[i] -= step;
                fd = fd.max(((g(&xj, &a)? - g(&xj, &b)?) / (2.0 * step) - lv.dg_dy[i]).abs());
            }
        }
    }
    Ok((round, fd))
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionConstants {
    pub z_first_level: f64,
    pub center_vertex: [f64; 3],
    pub center_surface_residual: f64,
    pub tau_meet: [[f64; 3]; 2],
}

pub fn decomposition_constants() -> Result<DecompositionConstants> {
    let q0 = q_vertex(0)?;
    Ok(DecompositionConstants {
        z_first_level: z_of_t(1.0 / 9.0)?,
        center_vertex: q0,
        center_surface_residual: RegionH::new(2, 1.0)?.surface_residual(0, &q0)?,
        tau_meet: [tau(1, 1.0 / 6.0)?, tau(2, 1.0 / 6.0)?],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftSample {
    pub t: f64,
    pub residual: f64,
    pub hausdorff: f64,
    /// wall time, kept out of reports so they stay reproducible
    #[serde(skip)]
    pub seconds: f64,
}

/// Meshes of a curve at the given scales with residuals and Hausdorff distances.
pub fn lift_samples(name: &str, ts: &[f64], resolution: usize) -> Result<Vec<LiftSample>> {
    let c = curve_fixture(name)?;
    let s = GluingSchedule::new(&c)?;
    let pl = pl_lift(&c, s.truncation)?;
    ts.iter()
        .map(|&t| {
            let start = Instant::now();
            let m = smooth_lift(&c, &s, t, resolution)?;
            let residual = symplectic_residual(&m);
            let h = hausdorff(&m, &pl, resolution);
            Ok(LiftSample { t, residual, hausdorff: h.distance, seconds: start.elapsed().as_secs_f64() })
        })
        .collect()
}

/// Least-squares slope of log(distance) against log(t).
pub fn log_slope(samples: &[LiftSample]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.t.ln(), s.hausdorff.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn standard_maslov() -> Result<Vec<LoopReport>> {
    let c = curve_fixture("standard-line")?;
    maslov_loops(&GluingSchedule::new(&c)?, 1.0)
}

pub fn exactness_table() -> Result<Vec<(&'static str, ExactnessReport)>> {
    ["standard-line", "triangle", "four-valent"].iter().map(|&n| Ok((n, exactness_check(&curve_fixture(n)?)))).collect()
}

pub fn topology_table() -> Result<Vec<(&'static str, LiftTopology)>> {
    let mut out = Vec::new();
    for n in ["standard-line", "weighted-line", "punctured-torus-vertex"] {
        out.push((n, lift_topology(&curve_fixture(n)?, None)?));
    }
    for n in ["p2-torus", "non-orientable"] {
        let (c, p) = toric_fixture(n)?;
        out.push((n, lift_topology(&c, Some(&p))?));
    }
    Ok(out)
}

pub fn monotone_table() -> Result<Vec<(&'static str, MonotoneReport)>> {
    ["p2-monotone", "p1p1-monotone"]
        .iter()
        .map(|&n| {
            let (c, p) = toric_fixture(n)?;
            Ok((n, monotone_report(&c, &p)?))
        })
        .collect()
}

pub const LIFT_SCALES: [f64; 3] = [1.0, 0.5, 0.1];
pub const LIFT_RESOLUTION: usize = 128;

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64()))
}

/// Runs one suite. Timing fields are reported but left out of the pass decision
/// except where a runtime bound is part of the property.
pub fn run(suite: &str, seed: u64) -> Result<Check> {
    let (passed, detail) = match suite {
        "hessian" => {
            let ((e1, e2), secs) = timed(|| Ok((hessian_max_eigenvalue(1, 10_000, seed)?, hessian_max_eigenvalue(2, 10_000, seed)?)))?;
            (e1 < 0.0 && e2 < 0.0 && secs < 10.0, json!({ "max_eigenvalue": [e1, e2], "samples": 10_000 }))
        }
        "boundary" => {
            let (r1, r2) = (boundary_residual(1, 1000, seed)?, boundary_residual(2, 1000, seed)?);
            (r1 <= 1e-9 && r2 <= 1e-9, json!({ "residual": [r1, r2] }))
        }
        "region" => {
            let (s1, s2) = (region_min_slack(1, 10_000, seed)?, region_min_slack(2, 10_000, seed)?);
            (s1 >= -1e-9 && s2 >= -1e-9, json!({ "min_slack": [s1, s2] }))
        }
        "equivariance" => {
            let (a1, b1) = equivariance_errors(1, 1000, seed)?;
            let (a2, b2) = equivariance_errors(2, 1000, seed)?;
            let worst = a1.max(b1).max(a2).max(b2);
            (worst <= 1e-10, json!({ "symmetry": [a1, a2], "involution": [b1, b2] }))
        }
        "legendre" => {
            let (round, fd) = legendre_errors(1000, 90, seed)?;
            (round <= 1e-8 && fd <= 1e-6, json!({ "round_trip": round, "derivative": fd }))
        }
        "decomposition" => {
            let d = decomposition_constants()?;
            let third = 1.0 / 3.0;
            let ok = (d.z_first_level - third).abs() <= 1e-12
                && d.center_vertex.iter().all(|v| (v - third).abs() <= 1e-12)
                && d.center_surface_residual.abs() <= 1e-12
                && d.tau_meet.iter().all(|p| (p[0] - 1.0 / 6.0).abs() <= 1e-12 && (p[1] - 1.0 / 6.0).abs() <= 1e-12 && p[2] == 0.0);
            (ok, serde_json::to_value(d).unwrap())
        }
        "appendix" => {
            let r: AppendixReport = check_lemmas(seed, 20)?;
            (r.passed(), json!({ "tuples": r.tuples, "gamma_worst": r.gamma_worst, "eta_worst": r.eta_worst }))
        }
        "lift" => {
            let (samples, secs) = timed(|| lift_samples("triangle", &LIFT_SCALES, LIFT_RESOLUTION))?;
            let slope = log_slope(&samples);
            let decreasing = samples.windows(2).all(|w| w[1].hausdorff < w[0].hausdorff);
            let ok = samples.iter().all(|s| s.residual < 1e-6) && decreasing && slope >= 0.8 && secs < 60.0;
            (ok, json!({ "samples": samples, "slope": slope }))
        }
        "maslov" => {
            let loops = standard_maslov()?;
            (loops.len() == 2 && loops.iter().all(|l| l.winding == 0), serde_json::to_value(&loops).unwrap())
        }
        "exactness" => {
            let t = exactness_table()?;
            let find = |n: &str| t.iter().find(|(m, _)| *m == n).map(|(_, r)| r).unwrap();
            let on_line = find("triangle").constants.iter().any(|c| c.normal == [1, 2] && c.value == crate::polyhedral::exact::q(1));
            let ok = find("standard-line").exact && !find("triangle").exact && on_line && find("four-valent").exact;
            (ok, json!(t.iter().map(|(n, r)| json!({ "fixture": n, "exact": r.exact, "constants": r.constants })).collect::<Vec<_>>()))
        }
        "topology" => {
            let t = topology_table()?;
            let get = |n: &str| &t.iter().find(|(m, _)| *m == n).unwrap().1;
            let ok = (get("standard-line").euler, get("standard-line").punctures) == (-1, 3)
                && (get("weighted-line").euler, get("weighted-line").genus, get("weighted-line").punctures) == (-4, Some(0), 6)
                && (get("punctured-torus-vertex").euler, get("punctured-torus-vertex").genus, get("punctured-torus-vertex").punctures) == (-3, Some(1), 3)
                && (get("p2-torus").euler, get("p2-torus").genus, get("p2-torus").orientable) == (0, Some(1), true)
                && (get("non-orientable").euler, get("non-orientable").orientable) == (-4, false);
            (ok, json!(t.iter().map(|(n, r)| json!({ "fixture": n, "topology": r })).collect::<Vec<_>>()))
        }
        "monotone" => {
            let t = monotone_table()?;
            let q = crate::polyhedral::exact::q;
            let pairs = |r: &MonotoneReport, prefix: &str| -> Vec<(crate::polyhedral::exact::Q, crate::polyhedral::exact::Q)> {
                r.classes.iter().filter(|c| c.name.starts_with(prefix)).map(|c| (c.maslov, c.area)).collect()
            };
            let (p2, p1p1) = (&t[0].1, &t[1].1);
            let ok = pairs(p2, "tau") == vec![(q(6), q(3))]
                && pairs(p2, "facet") == vec![(q(2), q(1)); 3]
                && pairs(p2, "fibre") == vec![(q(0), q(0))]
                && p2.factor == Some(q(2))
                && pairs(p1p1, "facet") == vec![(q(2), q(1)); 4]
                && p1p1.factor == Some(q(2));
            (ok, json!(t.iter().map(|(n, r)| json!({ "fixture": n, "report": r.to_json() })).collect::<Vec<_>>()))
        }
        _ => return Err(Error::Input(format!("unknown suite {suite:?}; expected one of {} or all", SUITES.join(", ")))),
    };
    let suite = SUITES.iter().find(|s| **s == suite).unwrap();
    Ok(Check { suite, passed, detail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_inside() {
        let a = halton(3, 100, 7);
        assert_eq!(a, halton(3, 100, 7));
        assert_ne!(a, halton(3, 100, 8));
        assert!(a.iter().flatten().all(|&v| v > 0.0 && v < 1.0));
        assert_eq!(radical_inverse(6, 2), 0.375);
        for y in plus_points(2, 50, 1) {
            assert!(y.iter().all(|&v| v > 0.0) && y.iter().sum::<f64>() < FRAC_PI_2);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let s: Vec<LiftSample> = [1.0, 0.5, 0.1].iter().map(|&t| LiftSample { t, residual: 0.0, hausdorff: 2.0 * t * t, seconds: 0.0 }).collect();
        assert!((log_slope(&s) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cheap_suites_pass() {
        for s in ["decomposition", "maslov", "exactness", "topology", "monotone"] {
            let c = run(s, 7).unwrap();
            assert!(c.passed, "{s}: {}", c.detail);
        }
        assert!(run("nope", 7).is_err());
    }
}

//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here and do
//! not depend on the thresholds used by `troplift verify`.

use std::io::Write;
use std::time::Instant;
use troplift::polyhedral::exact::q;
use troplift::suites::*;

const SEED: u64 = 20_241;

const HESSIAN_SAMPLES: usize = 10_000;
const HESSIAN_SECONDS: f64 = 10.0;
const BOUNDARY_TOL: f64 = 1e-9;
const REGION_TOL: f64 = 1e-9;
const EQUIVARIANCE_TOL: f64 = 1e-10;
const ROUND_TRIP_TOL: f64 = 1e-8;
const DERIVATIVE_TOL: f64 = 1e-6;
const CONSTANT_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-6;
const MIN_SLOPE: f64 = 0.8;
const LIFT_SECONDS: f64 = 60.0;

struct Line {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn hessian_negative() -> Line {
    let start = Instant::now();
    let e: Vec<f64> = [1, 2].iter().map(|&n| hessian_max_eigenvalue(n, HESSIAN_SAMPLES, SEED).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    Line { id: 1, name: "hessian negative definite on C+", ok: e.iter().all(|v| *v < 0.0) && secs < HESSIAN_SECONDS, detail: format!("max eigenvalue {e:?}, {secs:.2}s") }
}

fn exceptional_product() -> Line {
    let r: Vec<f64> = [1, 2].iter().map(|&n| boundary_residual(n, 1000, SEED).unwrap()).collect();
    Line { id: 2, name: "gradient product on exceptional set", ok: r.iter().all(|v| *v <= BOUNDARY_TOL), detail: format!("worst {r:?}") }
}

fn image_in_region() -> Line {
    let s: Vec<f64> = [1, 2].iter().map(|&n| region_min_slack(n, 10_000, SEED).unwrap()).collect();
    Line { id: 3, name: "gradient image inside region", ok: s.iter().all(|v| *v >= -REGION_TOL), detail: format!("min slack {s:?}") }
}

fn equivariance() -> Line {
    let e: Vec<(f64, f64)> = [1, 2].iter().map(|&n| equivariance_errors(n, 1000, SEED).unwrap()).collect();
    let ok = e.iter().all(|(a, b)| *a <= EQUIVARIANCE_TOL && *b <= EQUIVARIANCE_TOL);
    Line { id: 4, name: "symmetry and involution equivariance", ok, detail: format!("(symmetry, involution) {e:?}") }
}

fn legendre() -> Line {
    let (round, fd) = legendre_errors(1000, 90, SEED).unwrap();
    Line { id: 5, name: "fibre solve and Legendre derivatives", ok: round <= ROUND_TRIP_TOL && fd <= DERIVATIVE_TOL, detail: format!("round trip {round:.2e}, derivative {fd:.2e}") }
}

fn decomposition() -> Line {
    let d = decomposition_constants().unwrap();
    let third = 1.0 / 3.0;
    let sixth = 1.0 / 6.0;
    let ok = (d.z_first_level - third).abs() <= CONSTANT_TOL
        && d.center_vertex.iter().all(|v| (v - third).abs() <= CONSTANT_TOL)
        && d.center_surface_residual.abs() <= CONSTANT_TOL
        && d.tau_meet.iter().all(|p| (p[0] - sixth).abs() <= CONSTANT_TOL && (p[1] - sixth).abs() <= CONSTANT_TOL && p[2].abs() <= CONSTANT_TOL);
    Line { id: 6, name: "decomposition constants", ok, detail: format!("{d:?}") }
}

fn appendix() -> Line {
    let r = troplift::pants::appendix::check_lemmas(SEED, 20).unwrap();
    Line { id: 7, name: "sign lemmas on random tuples", ok: r.passed() && r.tuples == 20, detail: format!("tuples {}, gamma {:.3e}, eta {:.3e}", r.tuples, r.gamma_worst, r.eta_worst) }
}

fn lift_convergence() -> Line {
    let start = Instant::now();
    let s = lift_samples("triangle", &[1.0, 0.5, 0.1], 128).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let slope = log_slope(&s);
    let ok = s.iter().all(|x| x.residual < RESIDUAL_TOL) && s.windows(2).all(|w| w[1].hausdorff < w[0].hausdorff) && slope >= MIN_SLOPE && secs < LIFT_SECONDS;
    let d: Vec<String> = s.iter().map(|x| format!("t={} res={:.1e} d={:.4}", x.t, x.residual, x.hausdorff)).collect();
    Line { id: 8, name: "smooth lift converges to PL lift", ok, detail: format!("{}; slope {slope:.3}; {secs:.1}s", d.join(", ")) }
}

fn maslov() -> Line {
    let l = standard_maslov().unwrap();
    let w: Vec<i64> = l.iter().map(|r| r.winding).collect();
    Line { id: 9, name: "Maslov class of the standard line", ok: !w.is_empty() && w.iter().all(|x| *x == 0), detail: format!("windings {w:?}") }
}

fn exactness() -> Line {
    let t = exactness_table().unwrap();
    let get = |n: &str| &t.iter().find(|(m, _)| *m == n).unwrap().1;
    let witness = get("triangle").constants.iter().find(|c| c.normal == [1, 2]).map(|c| c.value);
    let ok = get("standard-line").exact && !get("triangle").exact && witness == Some(q(1)) && get("four-valent").exact;
    let d: Vec<String> = t.iter().map(|(n, r)| format!("{n}: {}", r.exact)).collect();
    Line { id: 10, name: "exactness", ok, detail: format!("{}; normal [1,2] constant {}", d.join(", "), witness.map_or("none".into(), |w| w.to_string())) }
}

fn topology() -> Line {
    let t = topology_table().unwrap();
    let get = |n: &str| &t.iter().find(|(m, _)| *m == n).unwrap().1;
    let checks = [
        ("standard-line", get("standard-line").euler == -1 && get("standard-line").genus == Some(0) && get("standard-line").punctures == 3),
        ("weighted-line", get("weighted-line").euler == -4 && get("weighted-line").genus == Some(0) && get("weighted-line").punctures == 6),
        ("punctured-torus-vertex", get("punctured-torus-vertex").euler == -3 && get("punctured-torus-vertex").genus == Some(1) && get("punctured-torus-vertex").punctures == 3),
        ("p2-torus", get("p2-torus").euler == 0 && get("p2-torus").orientable && get("p2-torus").genus == Some(1) && get("p2-torus").punctures == 0),
        ("non-orientable", get("non-orientable").euler == -4 && !get("non-orientable").orientable && get("non-orientable").audin == Some(true)),
    ];
    let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let d: Vec<String> = t.iter().map(|(n, r)| format!("{n}: chi {} genus {:?}", r.euler, r.genus)).collect();
    Line { id: 11, name: "lift topology", ok: bad.is_empty(), detail: format!("{}; failing {bad:?}", d.join(", ")) }
}

fn monotone() -> Line {
    let t = monotone_table().unwrap();
    let (p2, p1p1) = (&t[0].1, &t[1].1);
    let by = |r: &troplift::toric::MonotoneReport, p: &str| r.classes.iter().filter(|c| c.name.starts_with(p)).map(|c| (c.maslov, c.area)).collect::<Vec<_>>();
    let ok = by(p2, "tau") == [(q(6), q(3))]
        && by(p2, "facet") == [(q(2), q(1)); 3]
        && by(p2, "fibre") == [(q(0), q(0))]
        && p2.proportional
        && p2.factor == Some(q(2))
        && by(p1p1, "facet") == [(q(2), q(1)); 4]
        && p1p1.proportional;
    Line { id: 12, name: "monotone lifted tori", ok, detail: format!("P2 factor {:?}, P1xP1 factor {:?}", p2.factor.map(|f| f.to_string()), p1p1.factor.map(|f| f.to_string())) }
}

#[test]
fn acceptance_criteria() {
    let lines = [
        hessian_negative(),
        exceptional_product(),
        image_in_region(),
        equivariance(),
        legendre(),
        decomposition(),
        appendix(),
        lift_convergence(),
        maslov(),
        exactness(),
        topology(),
        monotone(),
    ];
    // written to the stdout handle directly so the lines survive output capture
    let mut out = std::io::stdout().lock();
    for l in &lines {
        writeln!(out, "{} [{:>2}] {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.id, l.name, l.detail).unwrap();
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing criteria {failed:?}");
}

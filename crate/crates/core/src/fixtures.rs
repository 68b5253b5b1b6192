//! Named example inputs shipped with the crate, and the loader shared by the
//! command line tool for curve-or-polytope JSON.

use crate::error::{Error, Result};
use crate::polyhedral::{parse_polytope_json, regular_subdivision};
use crate::toric::DelzantPolygon;
use crate::tropical::{tropical_hypersurface, PlaneCurve};
use serde_json::Value;

const FILES: &[(&str, &str)] = &[
    ("triangle", include_str!("../fixtures/triangle.json")),
    ("standard-line", include_str!("../fixtures/standard_line.json")),
    ("weighted-line", include_str!("../fixtures/weighted_line.json")),
    ("punctured-torus-vertex", include_str!("../fixtures/punctured_torus_vertex.json")),
    ("four-valent", include_str!("../fixtures/four_valent.json")),
    ("p2-torus", include_str!("../fixtures/p2_torus.json")),
    ("p2-monotone", include_str!("../fixtures/p2_monotone.json")),
    ("p1p1-torus", include_str!("../fixtures/p1p1_torus.json")),
    ("p1p1-monotone", include_str!("../fixtures/p1p1_monotone.json")),
    ("non-orientable", include_str!("../fixtures/non_orientable.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn fixture(name: &str) -> Result<Value> {
    let (_, text) = FILES.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::Input(format!("no fixture named {name:?}")))?;
    serde_json::from_str(text).map_err(|e| Error::Input(format!("fixture {name}: {e}")))
}

/// A curve given either explicitly (vertices with rays, edges or lines) or as a
/// lattice polygon with a lifting function.
pub fn load_curve(v: &Value, default_zero: bool) -> Result<PlaneCurve> {
    let explicit = ["rays", "edges", "lines"].iter().any(|k| v.get(*k).is_some());
    if explicit {
        return PlaneCurve::from_json(v);
    }
    let (poly, nu) = parse_polytope_json(v, default_zero)?;
    let sub = regular_subdivision(&poly, &nu)?;
    tropical_hypersurface(&sub).to_plane_curve()
}

pub fn curve_fixture(name: &str) -> Result<PlaneCurve> {
    let v = fixture(name)?;
    load_curve(v.get("curve").unwrap_or(&v), false)
}

/// Curve and polygon of a toric fixture.
pub fn toric_fixture(name: &str) -> Result<(PlaneCurve, DelzantPolygon)> {
    let v = fixture(name)?;
    load_toric(&v)
}

pub fn load_toric(v: &Value) -> Result<(PlaneCurve, DelzantPolygon)> {
    let c = v.get("curve").ok_or_else(|| Error::Input("missing \"curve\"".into()))?;
    let p = v.get("polygon").ok_or_else(|| Error::Input("missing \"polygon\"".into()))?;
    Ok((load_curve(c, false)?, DelzantPolygon::from_json(p)?))
}

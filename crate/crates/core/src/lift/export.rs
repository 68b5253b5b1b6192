//! OFF and OBJ writers for sampled lifts, projected to three coordinates.

use super::mesh::LagrangianMesh;
use crate::error::{Error, Result};
use std::io::Write;
use std::str::FromStr;

/// Which torus coordinate is kept next to the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Projection {
    #[default]
    FirstAngle,
    SecondAngle,
}

impl FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Projection> {
        match s {
            "y1" | "x1x2y1" => Ok(Projection::FirstAngle),
            "y2" | "x1x2y2" => Ok(Projection::SecondAngle),
            _ => Err(Error::Config(format!("unknown projection {s:?}, expected y1 or y2"))),
        }
    }
}

fn project(mesh: &LagrangianMesh, proj: Projection) -> Vec<[f64; 3]> {
    let k = match proj {
        Projection::FirstAngle => 0,
        Projection::SecondAngle => 1,
    };
    mesh.points().map(|p| [p.x[0], p.x[1], p.y[k]]).collect()
}

/// Quads of every patch grid. The seam between the last and first column is left
/// open since its corners sit on different torus translates.
fn quads(mesh: &LagrangianMesh) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let mut base = 0;
    for p in &mesh.patches {
        for i in 0..p.rows.saturating_sub(1) {
            for j in 0..p.cols.saturating_sub(1) {
                let a = base + i * p.cols + j;
                out.push([a, a + p.cols, a + p.cols + 1, a + 1]);
            }
        }
        base += p.points.len();
    }
    out
}

pub fn write_off(mesh: &LagrangianMesh, proj: Projection, w: &mut impl Write) -> Result<()> {
    let verts = project(mesh, proj);
    let faces = quads(mesh);
    writeln!(w, "OFF")?;
    writeln!(w, "{} {} 0", verts.len(), faces.len())?;
    for v in &verts {
        writeln!(w, "{:.9} {:.9} {:.9}", v[0], v[1], v[2])?;
    }
    for f in &faces {
        writeln!(w, "4 {} {} {} {}", f[0], f[1], f[2], f[3])?;
    }
    Ok(())
}

pub fn write_obj(mesh: &LagrangianMesh, proj: Projection, w: &mut impl Write) -> Result<()> {
    writeln!(w, "# scale {} resolution {}", mesh.scale, mesh.resolution)?;
    for v in project(mesh, proj) {
        writeln!(w, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2])?;
    }
    for f in quads(mesh) {
        writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
    }
    Ok(())
}

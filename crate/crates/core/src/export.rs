//! Stereographic projection of S³ to R³ and file output of sampled charts,
//! meshes and hypersurface patches.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format_float;
use crate::hypersurface::HypersurfacePatch;
use crate::surfaces::SurfaceChart;
use crate::vec4::Vec4;
use crate::verify::{gauss_curvature, CurvatureMethod};

/// Points closer to the pole than this (in `1 − ⟨l, pole⟩`) are not projected.
pub const POLE_TOL: f64 = 1e-9;

/// Orthonormal basis of the complement of the unit vector `pole`, obtained by
/// Gram–Schmidt on the standard basis with the vector most aligned to `pole` left out.
pub fn complement_basis(pole: Vec4) -> [Vec4; 3] {
    let drop = (0..4)
        .max_by(|&i, &j| pole[i].abs().total_cmp(&pole[j].abs()))
        .unwrap();
    let mut out = [Vec4::ZERO; 3];
    for (k, i) in (0..4).filter(|&i| i != drop).enumerate() {
        let mut b = Vec4::basis(i).reject(&pole);
        for prev in &out[..k] {
            b = b.reject(prev);
        }
        out[k] = b.normalized();
    }
    out
}

/// Projection from `pole` onto the hyperplane orthogonal to it.
pub fn stereographic(l: Vec4, pole: Vec4) -> Result<[f64; 3]> {
    let c = l.dot(&pole);
    if 1.0 - c < POLE_TOL {
        return Err(Error::AtPole { index: None });
    }
    let y = (l - pole * c) / (1.0 - c);
    let b = complement_basis(pole);
    Ok([y.dot(&b[0]), y.dot(&b[1]), y.dot(&b[2])])
}

pub fn inverse_stereographic(y: [f64; 3], pole: Vec4) -> Vec4 {
    let b = complement_basis(pole);
    let v = b[0] * y[0] + b[1] * y[1] + b[2] * y[2];
    let rho2 = v.norm_squared();
    (v * 2.0 + pole * (rho2 - 1.0)) / (rho2 + 1.0)
}

/// A chart sampled on a grid and projected to R³.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshR3 {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices, counter-clockwise in `(u, v)`.
    pub faces: Vec<Vec<usize>>,
    pub params: Vec<(f64, f64)>,
    pub points: Vec<Vec4>,
    /// Gauss curvature per vertex.
    pub k: Vec<f64>,
    /// Conformal factor `E` per vertex.
    pub e: Vec<f64>,
}

fn axis_nodes(lo: f64, hi: f64, n: usize, periodic: bool, shift: f64) -> Vec<f64> {
    if periodic {
        let d = (hi - lo) / n as f64;
        (0..n).map(|i| lo + (i as f64 + shift) * d).collect()
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Samples the chart on an `nu × nv` grid. Periodic directions wrap around;
/// if a periodic grid meets the pole it is moved by half a cell.
pub fn build_mesh(chart: &SurfaceChart, nu: usize, nv: usize, pole: Vec4) -> Result<MeshR3> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidParameter(format!("mesh grid {nu}x{nv} is too small")));
    }
    let d = *chart.domain();
    let can_shift = d.periodic_u || d.periodic_v;
    let mut shift = 0.0;
    let (us, vs, pts) = loop {
        let us = axis_nodes(d.u_min, d.u_max, nu, d.periodic_u, shift);
        let vs = axis_nodes(d.v_min, d.v_max, nv, d.periodic_v, shift);
        let mut pts = Vec::with_capacity(nu * nv);
        let mut hit = None;
        for (i, &u) in us.iter().enumerate() {
            for (k, &v) in vs.iter().enumerate() {
                let p = chart.point(u, v);
                if hit.is_none() && 1.0 - p.dot(&pole) < POLE_TOL {
                    hit = Some(i * nv + k);
                }
                pts.push(p);
            }
        }
        match hit {
            None => break (us, vs, pts),
            Some(_) if can_shift && shift == 0.0 => shift = 0.5,
            Some(index) => return Err(Error::AtPole { index: Some(index) }),
        }
    };
    let mut mesh = MeshR3 {
        vertices: Vec::with_capacity(pts.len()),
        faces: Vec::new(),
        params: Vec::with_capacity(pts.len()),
        points: pts,
        k: Vec::with_capacity(nu * nv),
        e: Vec::with_capacity(nu * nv),
    };
    for &u in &us {
        for &v in &vs {
            mesh.params.push((u, v));
            mesh.k.push(gauss_curvature(chart, u, v, CurvatureMethod::Forms)?);
            mesh.e.push(chart.jet(u, v).lu.norm_squared());
        }
    }
    for p in &mesh.points {
        mesh.vertices.push(stereographic(*p, pole)?);
    }
    let iu = if d.periodic_u { nu } else { nu - 1 };
    let iv = if d.periodic_v { nv } else { nv - 1 };
    let id = |i: usize, k: usize| (i % nu) * nv + (k % nv);
    for i in 0..iu {
        for k in 0..iv {
            mesh.faces.push(vec![id(i, k), id(i + 1, k), id(i + 1, k + 1), id(i, k + 1)]);
        }
    }
    Ok(mesh)
}

/// `v x y z` lines, then `f i j k l` lines with one-based indices.
pub fn mesh_to_obj(mesh: &MeshR3) -> String {
    let mut s = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(s, "v {} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]));
    }
    for f in &mesh.faces {
        s.push('f');
        for i in f {
            let _ = write!(s, " {}", i + 1);
        }
        s.push('\n');
    }
    s
}

pub const MESH_CSV_HEADER: &str = "u,v,x1,x2,x3,x4,K";

pub fn mesh_to_csv(mesh: &MeshR3) -> String {
    let mut s = String::from(MESH_CSV_HEADER);
    s.push('\n');
    for ((uv, p), k) in mesh.params.iter().zip(&mesh.points).zip(&mesh.k) {
        let cols = [uv.0, uv.1, p[0], p[1], p[2], p[3], *k];
        s.push_str(&join(&cols));
        s.push('\n');
    }
    s
}

pub fn mesh_to_json(mesh: &MeshR3) -> String {
    serde_json::to_string_pretty(mesh).expect("mesh serializes")
}

fn join(cols: &[f64]) -> String {
    cols.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(",")
}

pub const PATCH_CSV_HEADER: &str = "u,v,w,x1,x2,x3,x4";

/// Samples `patch` on an `nu × nv` grid of its domain (end points included) at each `w`.
pub fn patch_to_csv(patch: &HypersurfacePatch, nu: usize, nv: usize, ws: &[f64]) -> String {
    let d = patch.domain();
    let us = axis_nodes(d.u_min, d.u_max, nu.max(2), false, 0.0);
    let vs = axis_nodes(d.v_min, d.v_max, nv.max(2), false, 0.0);
    let mut s = String::from(PATCH_CSV_HEADER);
    s.push('\n');
    for &u in &us {
        for &v in &vs {
            for &w in ws {
                let x = patch.point(u, v, w);
                s.push_str(&join(&[u, v, w, x[0], x[1], x[2], x[3]]));
                s.push('\n');
            }
        }
    }
    s
}

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

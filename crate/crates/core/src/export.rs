//! OBJ meshes and CSV field tables for sampled surfaces.

use std::io::{self, Write};

use crate::weierstrass::SampledSurface;

/// How a point of R⁴ is flattened to three OBJ coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `(x⁰, x¹, x²)`: the θ = 0 slice has `x³` constant.
    DropX3,
    /// `(x¹, x², x³)` for the θ = π slice, which has `x⁰` constant.
    DropX0,
    /// `(x¹, x², x³)` for general θ; `x⁰` is kept in the CSV.
    Spatial,
}

const SLICE_TOLERANCE: f64 = 1e-6;

impl Projection {
    pub fn for_theta(theta: f64) -> Self {
        let t = theta.rem_euclid(std::f64::consts::TAU);
        if t < SLICE_TOLERANCE || std::f64::consts::TAU - t < SLICE_TOLERANCE {
            Projection::DropX3
        } else if (t - std::f64::consts::PI).abs() < SLICE_TOLERANCE {
            Projection::DropX0
        } else {
            Projection::Spatial
        }
    }

    pub fn indices(self) -> [usize; 3] {
        match self {
            Projection::DropX3 => [0, 1, 2],
            Projection::DropX0 | Projection::Spatial => [1, 2, 3],
        }
    }
}

/// Vertices in grid order and two triangles per grid cell, 1-based.
pub fn write_obj<W: Write>(surface: &SampledSurface, out: &mut W) -> io::Result<()> {
    let proj = Projection::for_theta(surface.theta);
    let [i0, i1, i2] = proj.indices();
    let g = &surface.nodes;
    writeln!(out, "# theta {}", surface.theta)?;
    writeln!(out, "# grid {}x{}, coordinates x{i0} x{i1} x{i2}", g.nu, g.nv)?;
    for n in &g.values {
        let p = n.point;
        writeln!(out, "v {} {} {}", num(p[i0]), num(p[i1]), num(p[i2]))?;
    }
    let id = |i: usize, j: usize| j * g.nu + i + 1;
    for j in 0..g.nv - 1 {
        for i in 0..g.nu - 1 {
            writeln!(out, "f {} {} {}", id(i, j), id(i + 1, j), id(i + 1, j + 1))?;
            writeln!(out, "f {} {} {}", id(i, j), id(i + 1, j + 1), id(i, j + 1))?;
        }
    }
    Ok(())
}

pub const CSV_HEADER: &str =
    "u,v,F0,F1,F2,F3,lambda2,K_closed,K_numeric,tau0,tau1,tau2,tau3,nu0,nu1,nu2,nu3,is_planar";

/// Shortest round-trip form, switching to exponent notation for very small or large magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv<W: Write>(surface: &SampledSurface, out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for n in &surface.nodes.values {
        let mut fields: Vec<String> = vec![num(n.w.re), num(n.w.im)];
        fields.extend(n.point.0.iter().copied().map(num));
        fields.extend([n.lambda2, n.k_closed, n.k_numeric].into_iter().map(num));
        fields.extend(n.frame.tau.0.iter().copied().map(num));
        fields.extend(n.frame.nu.0.iter().copied().map(num));
        fields.push(n.is_planar.to_string());
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

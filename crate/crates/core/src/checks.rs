//! The validation pipeline run by `thetafam check`: every invariant of a
//! scenario, each reduced to a worst value against a tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::association::{graph_jacobian, graph_jacobian_factored, pair_check_patches, AssociationError};
use crate::expr::EvalError;
use crate::geometry::{phi_map, planar_points, weingarten_check, GeometryError, Slice, PLANAR_TOLERANCE};
use crate::grid::Grid;
use crate::scenario::ScenarioConfig;
use crate::weierstrass::{monge_residual, SurfaceData, SurfaceError};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Association(#[from] AssociationError),
}

impl From<GeometryError> for CheckError {
    fn from(e: GeometryError) -> Self {
        CheckError::Surface(e.into())
    }
}

impl From<EvalError> for CheckError {
    fn from(e: EvalError) -> Self {
        CheckError::Surface(e.into())
    }
}

/// One line of the machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub worst_value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_node: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckLine {
    fn new(check: &str, worst_value: f64, tolerance: f64, pass: bool) -> Self {
        Self { check: check.into(), worst_value, tolerance, pass, theta: None, worst_node: None, detail: None }
    }

    /// `worst_value < tolerance`; NaN fails.
    fn below(check: &str, worst_value: f64, tolerance: f64) -> Self {
        Self::new(check, worst_value, tolerance, worst_value < tolerance)
    }

    fn at(mut self, w: Option<Complex64>) -> Self {
        self.worst_node = w.map(|w| [w.re, w.im]);
        self
    }

    fn theta(mut self, theta: f64) -> Self {
        self.theta = Some(theta);
        self
    }

    fn detail(mut self, d: String) -> Self {
        self.detail = Some(d);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report lines serialise")
    }

    pub fn human(&self) -> String {
        let mut s = format!(
            "{} {:<26} worst {:.3e} (tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.worst_value,
            self.tolerance
        );
        if let Some(t) = self.theta {
            s.push_str(&format!(" theta={t}"));
        }
        if let Some([u, v]) = self.worst_node {
            s.push_str(&format!(" at ({u}, {v})"));
        }
        if let Some(d) = &self.detail {
            s.push_str(&format!(" [{d}]"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }
}

/// Largest `f(node)` over the nodes, with its location; NaN wins.
fn worst<T>(nodes: impl Iterator<Item = (Complex64, T)>, f: impl Fn(&T) -> f64) -> (f64, Option<Complex64>) {
    let mut best = (f64::NEG_INFINITY, None);
    for (w, t) in nodes {
        let x = f(&t);
        if x > best.0 || x.is_nan() {
            best = (x, Some(w));
            if x.is_nan() {
                break;
            }
        }
    }
    if best.1.is_none() {
        best.0 = 0.0;
    }
    best
}

/// `(u, v)` to 7 decimals, without a sign on values that round to zero.
pub fn format_point(w: Complex64) -> String {
    let f = |x: f64| {
        let s = format!("{x:.7}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    };
    format!("({}, {})", f(w.re), f(w.im))
}

fn is_theta(theta: f64, target: f64) -> bool {
    (theta - target).abs() < 1e-12
}

/// Runs every check over an `nu x nv` grid on the scenario domain, with
/// finite-difference step `h`. Regularity is assumed to be validated already.
pub fn run_checks(cfg: &ScenarioConfig, sd: &SurfaceData, nu: usize, nv: usize, h: f64) -> Result<CheckReport, CheckError> {
    let tol = cfg.tolerances;
    let domain = sd.domain;
    let mut lines = Vec::new();

    for &theta in &cfg.thetas {
        let s = sd.sample_grid_in(theta, domain, nu, nv, h)?;
        let nodes = || s.nodes.values.iter().map(|n| (n.w, n));

        let (v, at) = worst(nodes(), |n| monge_residual(&n.fw, n.lambda2).0.norm());
        lines.push(CheckLine::below("monge_null", v, tol.monge_null).theta(theta).at(at));
        let (v, at) = worst(nodes(), |n| monge_residual(&n.fw, n.lambda2).1 / (1.0 + n.lambda2));
        lines.push(CheckLine::below("monge_conformal", v, tol.monge_conformal).theta(theta).at(at));

        let (v, at) = worst(nodes(), |n| n.frame.residuals().max_inner());
        lines.push(CheckLine::below("frame_inner_products", v, tol.frame).theta(theta).at(at));
        let (v, at) = worst(nodes(), |n| {
            let r = n.frame.residuals();
            r.tau3.max(r.nu0)
        });
        lines.push(CheckLine::below("frame_zero_components", v, tol.frame_zero).theta(theta).at(at));

        let interior = s.nodes.iter().filter(|(i, j, _, _)| *i > 0 && *j > 0 && *i + 1 < nu && *j + 1 < nv);
        let (v, at) = worst(interior.map(|(_, _, w, n)| (w, n)), |n| {
            (n.k_closed - n.k_numeric).abs() / (1.0 + n.k_closed.abs())
        });
        lines.push(CheckLine::below("curvature_closed_vs_numeric", v, tol.curvature).theta(theta).at(at));

        if is_theta(theta, 0.0) {
            let (v, at) = worst(nodes(), |n| -n.k_closed);
            lines.push(CheckLine::new("curvature_sign", v, tol.curvature_sign, v <= tol.curvature_sign).theta(theta).at(at));
            let phis = s
                .nodes
                .values
                .iter()
                .map(|n| Ok((n.w, phi_map(&n.frame.tau)?[3])))
                .collect::<Result<Vec<_>, GeometryError>>()?;
            let (v, at) = worst(phis.into_iter(), |x| *x);
            lines.push(CheckLine::new("gauss_image_south_hemisphere", v, 0.0, v < 0.0).theta(theta).at(at));
        } else if is_theta(theta, PI) {
            let (v, at) = worst(nodes(), |n| n.k_closed);
            lines.push(CheckLine::new("curvature_sign", v, tol.curvature_sign, v <= tol.curvature_sign).theta(theta).at(at));
        }

        let diffs = s
            .nodes
            .values
            .par_iter()
            .map(|n| {
                let corner = Complex64::new(n.w.re, sd.w0.im);
                let two_leg = sd.path_integral(theta, &[sd.w0, corner, n.w])?;
                Ok((n.w, 2.0 * (two_leg - n.integral).max_norm()))
            })
            .collect::<Result<Vec<_>, SurfaceError>>()?;
        let (v, at) = worst(diffs.into_iter(), |x| *x);
        lines.push(CheckLine::below("path_independence", v, tol.path_independence).theta(theta).at(at));
    }

    let inner = domain.inset(h);
    for (name, slice) in [("weingarten_lorentzian", Slice::Lorentzian), ("weingarten_euclidean", Slice::Euclidean)] {
        let r = weingarten_check(sd, slice, inner, nu, nv, h)?;
        lines.push(CheckLine::below(name, r.max, tol.weingarten).at(r.worst_at));
    }

    let pair = pair_check_patches(sd, 0.0, sd, PI, inner, nu, nv, h, tol.pair)?;
    lines.push(
        CheckLine::new("pair_relations", pair.max_residual(), tol.pair, pair.verdict)
            .at(pair.worst_at)
            .detail(format!("residuals {:.3e} {:.3e} {:.3e}", pair.max_residuals[0], pair.max_residuals[1], pair.max_residuals[2])),
    );

    let jac = Grid::try_from_fn(domain, nu, nv, |_, _, w| {
        Ok::<_, EvalError>((graph_jacobian(sd, w)? - graph_jacobian_factored(sd, w)?).norm())
    })?;
    let (v, at) = worst(jac.iter().map(|(_, _, w, x)| (w, *x)), |x| *x);
    lines.push(CheckLine::below("jacobian_identity", v, tol.jacobian).at(at));

    let scan = planar_points(&sd.a, cfg.planar_rect(), nu, nv, PLANAR_TOLERANCE)?;
    let line = if scan.identically_zero {
        CheckLine::new("planar_points", 0.0, PLANAR_TOLERANCE, true).detail("fully_planar, K ≡ 0".into())
    } else if scan.roots.is_empty() {
        CheckLine::new("planar_points", 0.0, PLANAR_TOLERANCE, true).detail("no planar points".into())
    } else {
        let v = scan.roots.iter().map(|r| r.abs_da).fold(0.0, f64::max);
        let pass = scan.roots.iter().all(|r| r.converged);
        let list: Vec<String> = scan
            .roots
            .iter()
            .map(|r| format!("{}{}", format_point(r.w), if r.converged { "" } else { " unrefined" }))
            .collect();
        CheckLine::new("planar_points", v, PLANAR_TOLERANCE, pass).detail(list.join(" "))
    };
    lines.push(line);

    Ok(CheckReport { lines })
}

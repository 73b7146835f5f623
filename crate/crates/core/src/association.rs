//! Associated-pair verification between the θ = 0 and θ = π slices, and the
//! graph-chart diagnostics built on `Im a`.
//!
//! The pair relations checked, with `·_w = (∂_u - i ∂_v)/2`:
//!
//! ```text
//! Y³_w = X⁰_w,    Y¹_w = -i X²_w,    Y²_w = i X¹_w
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, HolomorphicFn};
use crate::geometry::{planar_points, PlanarPoint, PLANAR_TOLERANCE};
use crate::grid::{Grid, Rect};
use crate::minkowski::RVec4;
use crate::weierstrass::{SurfaceData, SurfaceError};

pub const DEFAULT_PAIR_TOLERANCE: f64 = 1e-5;
pub const DEFAULT_ADMISSIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum AssociationError {
    #[error("surfaces are not sampled on the same grid ({detail})")]
    GridMismatch { detail: &'static str },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    /// Max moduli of `Y³_w - X⁰_w`, `Y¹_w + i X²_w`, `Y²_w - i X¹_w`.
    pub max_residuals: [f64; 3],
    pub grid_spacing: f64,
    pub tolerance: f64,
    pub verdict: bool,
    pub worst_at: Option<Complex64>,
}

impl PairReport {
    pub fn max_residual(&self) -> f64 {
        self.max_residuals.iter().copied().fold(0.0, f64::max)
    }

    fn merge(reports: &[PairReport], tolerance: f64) -> PairReport {
        let mut out = PairReport { max_residuals: [0.0; 3], grid_spacing: 0.0, tolerance, verdict: true, worst_at: None };
        let mut worst = -1.0;
        for r in reports {
            for k in 0..3 {
                out.max_residuals[k] = out.max_residuals[k].max(r.max_residuals[k]);
            }
            out.grid_spacing = out.grid_spacing.max(r.grid_spacing);
            if r.max_residual() > worst {
                worst = r.max_residual();
                out.worst_at = r.worst_at;
            }
        }
        out.verdict = out.max_residuals.iter().all(|&r| r < tolerance);
        out
    }
}

/// Central-difference `∂_w` of component `k` at interior node `(i, j)`.
fn d_w(g: &Grid<RVec4>, k: usize, i: usize, j: usize, hu: f64, hv: f64) -> Complex64 {
    let du = (g.get(i + 1, j)[k] - g.get(i - 1, j)[k]) / (2.0 * hu);
    let dv = (g.get(i, j + 1)[k] - g.get(i, j - 1)[k]) / (2.0 * hv);
    Complex64::new(du, -dv) * 0.5
}

/// Checks the pair relations between `x` (Lorentzian slice) and `y` (Euclidean
/// slice) at every interior node of their common grid.
pub fn pair_check(x: &Grid<RVec4>, y: &Grid<RVec4>, tolerance: f64) -> Result<PairReport, AssociationError> {
    if !x.same_nodes(y) {
        return Err(AssociationError::GridMismatch { detail: "node sets differ" });
    }
    if x.nu < 3 || x.nv < 3 {
        return Err(AssociationError::GridMismatch { detail: "central differences need at least 3x3 nodes" });
    }
    let (hu, hv) = x.spacing();
    let i = Complex64::i();
    let mut max_residuals = [0.0_f64; 3];
    let mut worst = -1.0;
    let mut worst_at = None;
    for jj in 1..x.nv - 1 {
        for ii in 1..x.nu - 1 {
            let dx = |k| d_w(x, k, ii, jj, hu, hv);
            let dy = |k| d_w(y, k, ii, jj, hu, hv);
            let r = [(dy(3) - dx(0)).norm(), (dy(1) + i * dx(2)).norm(), (dy(2) - i * dx(1)).norm()];
            for k in 0..3 {
                max_residuals[k] = max_residuals[k].max(r[k]);
            }
            let m = r.iter().copied().fold(0.0, f64::max);
            if m > worst || m.is_nan() {
                worst = m;
                worst_at = Some(x.node(ii, jj));
            }
        }
    }
    Ok(PairReport {
        max_residuals,
        grid_spacing: hu.max(hv),
        tolerance,
        verdict: max_residuals.iter().all(|&r| r < tolerance),
        worst_at,
    })
}

/// Positions of `F(θ; ·)` on a 3x3 patch of spacing `h` around `c`, relative
/// to `F(θ; c)`. Differences are all the pair relations need.
fn relative_patch(sd: &SurfaceData, theta: f64, c: Complex64, h: f64) -> Result<Grid<RVec4>, SurfaceError> {
    Grid::try_from_fn(Rect::around(c, h), 3, 3, |_, _, z| Ok(sd.segment(theta, c, z)?.re() * 2.0))
}

/// Pair relations between `F(theta_x)` of `sx` and `F(theta_y)` of `sy`,
/// evaluated by central differences of step `h` on 3x3 patches centred at the
/// nodes of an `nu x nv` grid over `rect`.
///
/// `rect` must lie inside both domains with a margin of at least `h`.
#[allow(clippy::too_many_arguments)]
pub fn pair_check_patches(
    sx: &SurfaceData,
    theta_x: f64,
    sy: &SurfaceData,
    theta_y: f64,
    rect: Rect,
    nu: usize,
    nv: usize,
    h: f64,
    tolerance: f64,
) -> Result<PairReport, AssociationError> {
    let reach = rect.inset(-h);
    if !sx.domain.contains_rect(&reach) || !sy.domain.contains_rect(&reach) {
        return Err(AssociationError::GridMismatch { detail: "check region leaves a surface domain" });
    }
    let centres = Grid::from_fn(rect, nu, nv, |_, _, w| w).values;
    let reports = centres
        .par_iter()
        .map(|&c| {
            let x = relative_patch(sx, theta_x, c, h)?;
            let y = relative_patch(sy, theta_y, c, h)?;
            pair_check(&x, &y, tolerance)
        })
        .collect::<Result<Vec<_>, AssociationError>>()?;
    Ok(PairReport::merge(&reports, tolerance))
}

/// `x_w conj(y_w) - conj(x_w) y_w` with `x_w = 2 μ a`, `y_w = μ (1 + a²)`.
pub fn graph_jacobian(sd: &SurfaceData, w: Complex64) -> Result<Complex64, EvalError> {
    let a = sd.a.eval(w)?;
    let mu = sd.mu.eval(w)?;
    let xw = 2.0 * mu * a;
    let yw = mu * (1.0 + a * a);
    Ok(xw * yw.conj() - xw.conj() * yw)
}

/// Factored form `4i |μ|² (1 - |a|²) Im a`.
pub fn graph_jacobian_factored(sd: &SurfaceData, w: Complex64) -> Result<Complex64, EvalError> {
    let a = sd.a.eval(w)?;
    let mu = sd.mu.eval(w)?;
    Ok(Complex64::new(0.0, 4.0 * mu.norm_sqr() * (1.0 - a.norm_sqr()) * a.im))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphReport {
    pub min_abs_im_a: f64,
    pub jacobian_values: Grid<Complex64>,
    pub admissible: bool,
    /// Nodes where `|Im a| <= tolerance`.
    pub near_zero: Vec<Complex64>,
}

/// A graph chart over the `(x, y)` plane needs `Im a ≠ 0` throughout.
pub fn graph_admissibility(sd: &SurfaceData, rect: Rect, nu: usize, nv: usize, tolerance: f64) -> Result<GraphReport, EvalError> {
    let im_a = Grid::try_from_fn(rect, nu, nv, |_, _, w| Ok::<_, EvalError>(sd.a.eval(w)?.im))?;
    let jacobian_values = Grid::try_from_fn(rect, nu, nv, |_, _, w| graph_jacobian(sd, w))?;
    let min_abs_im_a = im_a.values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let near_zero = im_a.iter().filter(|(_, _, _, v)| v.abs() <= tolerance).map(|(_, _, w, _)| w).collect();
    Ok(GraphReport { min_abs_im_a, jacobian_values, admissible: min_abs_im_a > tolerance, near_zero })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanarClass {
    Empty,
    /// `a'` vanishes at every scanned node.
    Everywhere,
    Discrete(Vec<PlanarPoint>),
}

/// Classifies the zero set of `a'` over the grid. Roots closer than twice the
/// grid spacing with `|a'|` vanishing at their midpoint are merged.
pub fn planar_discreteness_scan(a: &HolomorphicFn, rect: Rect, nu: usize, nv: usize) -> Result<PlanarClass, EvalError> {
    let scan = planar_points(a, rect, nu, nv, PLANAR_TOLERANCE)?;
    if scan.identically_zero {
        return Ok(PlanarClass::Everywhere);
    }
    let da = a.derivative();
    let mut kept: Vec<PlanarPoint> = Vec::new();
    for root in scan.roots {
        let mut joined = false;
        for k in &kept {
            if (k.w - root.w).norm() < 2.0 * scan.spacing && da.eval(0.5 * (k.w + root.w))?.norm() < PLANAR_TOLERANCE {
                joined = true;
                break;
            }
        }
        if !joined {
            kept.push(root);
        }
    }
    Ok(if kept.is_empty() { PlanarClass::Empty } else { PlanarClass::Discrete(kept) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn data(a: &str, mu: &str, domain: Rect) -> SurfaceData {
        SurfaceData::new(
            HolomorphicFn::parse(a).unwrap(),
            HolomorphicFn::parse(mu).unwrap(),
            domain,
            domain.centre(),
            RVec4::ZERO,
            RVec4::ZERO,
        )
        .unwrap()
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let x = Grid::from_fn(Rect::new(0.0, 1.0, 0.0, 1.0), 5, 5, |_, _, _| RVec4::ZERO);
        let y = Grid::from_fn(Rect::new(0.0, 1.0, 0.0, 1.1), 5, 5, |_, _, _| RVec4::ZERO);
        assert!(matches!(pair_check(&x, &y, 1e-5), Err(AssociationError::GridMismatch { .. })));
        let small = Grid::from_fn(Rect::new(0.0, 1.0, 0.0, 1.0), 2, 5, |_, _, _| RVec4::ZERO);
        assert!(matches!(pair_check(&small, &small, 1e-5), Err(AssociationError::GridMismatch { .. })));
    }

    #[test]
    fn constant_planes_pair_trivially() {
        let sd = data("0.4", "1", Rect::new(-1.0, 1.0, -1.0, 1.0));
        let r = pair_check_patches(&sd, 0.0, &sd, PI, Rect::new(-0.5, 0.5, -0.5, 0.5), 3, 3, 1e-3, 1e-5).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn family_slices_pair_on_coarse_grid_with_linear_data() {
        // the only truncation error is (h²/3)|G'''| with G' = 1 - w², i.e. 2h²/3
        let sd = data("w", "1", Rect::new(-0.5, 0.5, -0.5, 0.5));
        let rect = Rect::new(-0.4, 0.4, -0.4, 0.4);
        let x = sd.point_grid(0.0, rect, 9, 9).unwrap();
        let y = sd.point_grid(PI, rect, 9, 9).unwrap();
        let r = pair_check(&x, &y, 1e-2).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(r.max_residuals[0] < 1e-12);
        assert!((r.max_residuals[1] - 2.0 * 0.01 / 3.0).abs() < 1e-9, "{r:?}");
        // the same slice twice is not a pair
        let r = pair_check(&x, &x, 1e-5).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn patch_region_must_fit_both_domains() {
        let a = data("sin(w)", "1", Rect::new(0.2, 1.0, -0.4, 0.4));
        let r = pair_check_patches(&a, 0.0, &a, PI, Rect::new(0.2, 1.0, -0.4, 0.4), 3, 3, 1e-3, 1e-5);
        assert!(matches!(r, Err(AssociationError::GridMismatch { .. })));
    }

    #[test]
    fn jacobian_matches_factored_form_and_is_imaginary() {
        let sd = data("i*exp(w)", "exp(-w)", Rect::new(0.5, 1.5, -0.5, 0.5));
        for w in [c(0.6, 0.1), c(1.2, -0.3), c(0.9, 0.0)] {
            let j = graph_jacobian(&sd, w).unwrap();
            let f = graph_jacobian_factored(&sd, w).unwrap();
            assert_eq!(j.re, 0.0);
            assert!((j - f).norm() < 1e-12 * (1.0 + f.norm()));
        }
        let real = data("sin(w)", "1", Rect::new(0.2, 1.0, -0.4, 0.4));
        assert_eq!(graph_jacobian(&real, c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn admissibility() {
        let sine = data("sin(w)", "1", Rect::new(0.2, 1.0, -0.4, 0.4));
        let r = graph_admissibility(&sine, sine.domain, 5, 5, DEFAULT_ADMISSIBILITY_TOLERANCE).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.near_zero.len(), 5);
        assert!(r.near_zero.iter().all(|w| w.im == 0.0));

        let exp = data("i*exp(w)", "1", Rect::new(0.0, 1.0, -0.1, 0.1));
        let r = graph_admissibility(&exp, exp.domain, 9, 9, DEFAULT_ADMISSIBILITY_TOLERANCE).unwrap();
        assert!(r.admissible);
        assert!(r.min_abs_im_a > 0.99);

        let real = data("0.3", "1", Rect::new(0.0, 1.0, 0.0, 1.0));
        let r = graph_admissibility(&real, real.domain, 3, 3, DEFAULT_ADMISSIBILITY_TOLERANCE).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.near_zero.len(), 9);
    }

    #[test]
    fn discreteness_classes() {
        let sine = HolomorphicFn::parse("sin(w)").unwrap();
        match planar_discreteness_scan(&sine, Rect::new(0.0, 4.0, -1.0, 1.0), 17, 17).unwrap() {
            PlanarClass::Discrete(roots) => {
                assert_eq!(roots.len(), 1);
                assert!((roots[0].w - c(PI / 2.0, 0.0)).norm() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        let flat = HolomorphicFn::parse("2").unwrap();
        assert_eq!(planar_discreteness_scan(&flat, Rect::new(0.0, 1.0, 0.0, 1.0), 5, 5).unwrap(), PlanarClass::Everywhere);
        let ex38 = HolomorphicFn::parse("i*cos(w)/(sin(w)+1)").unwrap();
        assert_eq!(planar_discreteness_scan(&ex38, Rect::new(0.3, 1.3, -0.5, 0.5), 17, 17).unwrap(), PlanarClass::Empty);
    }
}

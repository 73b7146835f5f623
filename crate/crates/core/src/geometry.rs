//! Differential geometry of the θ-family: conformal factor, Gauss curvature
//! (closed form and a finite-difference route from `λ²` alone), the lightlike
//! normals and the orthonormal frame, Weingarten data, planar points and the
//! Gauss-map stereographic coordinates.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, HolomorphicFn};
use crate::grid::{Grid, Rect};
use crate::minkowski::{lorentz_dot, CVec4, RVec4};
use crate::weierstrass::{w_vector, Jet, SurfaceData};

/// `|a'| < PLANAR_TOLERANCE` declares a planar point.
pub const PLANAR_TOLERANCE: f64 = 1e-10;
const HYPERBOLIC_TOLERANCE: f64 = 1e-9;
const NEWTON_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum GeometryError {
    #[error("metric degenerates at w = {w}")]
    DegenerateMetric { w: Complex64 },
    #[error("{tau:?} is not a point of the upper hyperbolic plane")]
    InvalidHyperbolicPoint { tau: RVec4 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

// ---------------------------------------------------------------------------
// metric and curvature

/// `1 - 2|a|² cos θ + |a|⁴ = |1 - |a|² e^{-iθ}|²`.
fn denominator(a_sq: f64, theta: f64) -> f64 {
    1.0 - 2.0 * a_sq * theta.cos() + a_sq * a_sq
}

/// Conformal factor `λ² = 4|μ|²(1 - 2|a|² cos θ + |a|⁴)`.
pub fn lambda2_from(jet: &Jet, theta: f64) -> f64 {
    4.0 * jet.mu.norm_sqr() * denominator(jet.a_sq(), theta)
}

pub fn lambda2(sd: &SurfaceData, theta: f64, w: Complex64) -> Result<f64, EvalError> {
    Ok(lambda2_from(&sd.jet(w)?, theta))
}

/// `K = |a'|² ((1 + |a|⁴) cos θ - 2|a|²) / (|μ|² D³)` with `D = 1 - 2|a|² cos θ + |a|⁴`.
///
/// The cube on `D` is what the finite-difference route confirms; at θ = 0 it
/// reduces to `|a'|² / (|μ|² (1 - |a|²)⁴)`.
pub fn gauss_curvature_from(jet: &Jet, theta: f64) -> f64 {
    let s = jet.a_sq();
    let d = denominator(s, theta);
    jet.da.norm_sqr() * ((1.0 + s * s) * theta.cos() - 2.0 * s) / (jet.mu.norm_sqr() * d * d * d)
}

pub fn gauss_curvature_closed(sd: &SurfaceData, theta: f64, w: Complex64) -> Result<f64, EvalError> {
    Ok(gauss_curvature_from(&sd.jet(w)?, theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Standard 5-point Laplacian, `O(h²)`.
    FivePoint,
    /// `(4 L_h - L_2h) / 3` from the 5-point Laplacians at `h` and `2h`, `O(h⁴)`.
    Richardson,
}

impl Stencil {
    fn margin(self) -> usize {
        match self {
            Stencil::FivePoint => 1,
            Stencil::Richardson => 2,
        }
    }
}

/// `K = -Δ ln λ² / (2 λ²)` from a uniform grid of conformal factors. Nodes
/// closer to the boundary than the stencil reach are `None`.
pub fn gauss_curvature_numeric(lambda2: &Grid<f64>, stencil: Stencil) -> Result<Grid<Option<f64>>, GeometryError> {
    for (_, _, w, &l) in lambda2.iter() {
        if l.is_nan() || l <= 0.0 {
            return Err(GeometryError::DegenerateMetric { w });
        }
    }
    let log = lambda2.map(|l| l.ln());
    let (hu, hv) = lambda2.spacing();
    let m = stencil.margin();
    let (nu, nv) = (lambda2.nu, lambda2.nv);
    let laplacian = |i: usize, j: usize, step: usize| {
        let f = |i: usize, j: usize| *log.get(i, j);
        let c = f(i, j);
        let su = step as f64 * hu;
        let sv = step as f64 * hv;
        (f(i + step, j) - 2.0 * c + f(i - step, j)) / (su * su) + (f(i, j + step) - 2.0 * c + f(i, j - step)) / (sv * sv)
    };
    Ok(Grid::from_fn(lambda2.rect, nu, nv, |i, j, _| {
        if i < m || j < m || i + m >= nu || j + m >= nv {
            return None;
        }
        let lap = match stencil {
            Stencil::FivePoint => laplacian(i, j, 1),
            Stencil::Richardson => (4.0 * laplacian(i, j, 1) - laplacian(i, j, 2)) / 3.0,
        };
        Some(-lap / (2.0 * lambda2.get(i, j)))
    }))
}

/// Numerical curvature at `w` from a 5x5 patch of closed-form `λ²` values with
/// spacing `h`, Richardson-extrapolated.
pub fn curvature_by_stencil(sd: &SurfaceData, theta: f64, w: Complex64, h: f64) -> Result<f64, GeometryError> {
    let patch = Grid::try_from_fn(Rect::around(w, 2.0 * h), 5, 5, |_, _, z| lambda2(sd, theta, z))?;
    let k = gauss_curvature_numeric(&patch, Stencil::Richardson)?;
    Ok(k.get(2, 2).expect("centre of a 5x5 patch is interior"))
}

/// Closed-form and numerical curvature on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    pub theta: f64,
    pub nodes: Grid<CurvatureNode>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureNode {
    pub w: Complex64,
    pub k_closed: f64,
    pub k_numeric: f64,
    pub is_planar: bool,
}

impl CurvatureField {
    /// Largest `|K_closed - K_numeric| / (1 + |K_closed|)` and where it occurs.
    pub fn worst_relative_error(&self) -> (f64, Complex64) {
        self.nodes.values.iter().fold((0.0, Complex64::new(0.0, 0.0)), |(m, at), n| {
            let e = (n.k_closed - n.k_numeric).abs() / (1.0 + n.k_closed.abs());
            if e > m || e.is_nan() {
                (e, n.w)
            } else {
                (m, at)
            }
        })
    }
}

pub fn curvature_field(
    sd: &SurfaceData,
    theta: f64,
    rect: Rect,
    nu: usize,
    nv: usize,
    h: f64,
) -> Result<CurvatureField, GeometryError> {
    let nodes: Vec<Complex64> = Grid::from_fn(rect, nu, nv, |_, _, w| w).values;
    let values = nodes
        .par_iter()
        .map(|&w| {
            let jet = sd.jet(w)?;
            Ok(CurvatureNode {
                w,
                k_closed: gauss_curvature_from(&jet, theta),
                k_numeric: curvature_by_stencil(sd, theta, w, h)?,
                is_planar: jet.da.norm() < PLANAR_TOLERANCE,
            })
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    Ok(CurvatureField { theta, nodes: Grid { rect, nu, nv, values } })
}

// ---------------------------------------------------------------------------
// normals and frame

/// The lightlike normals `L₃(a)` and `L₀(e^{iθ} a)`.
pub fn lightlike_normals(a: Complex64, theta: f64) -> (RVec4, RVec4) {
    let b = Complex64::from_polar(1.0, theta) * a;
    let s = a.norm_sqr();
    let l3 = RVec4::new(1.0 + s, 2.0 * a.re, 2.0 * a.im, s - 1.0);
    let l0 = RVec4::new(1.0 + s, 2.0 * b.re, 2.0 * b.im, 1.0 - s);
    (l3, l0)
}

/// Minkowski frame at one point: timelike and spacelike unit normals plus the
/// normalised coordinate tangents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameAtPoint {
    pub tau: RVec4,
    pub nu: RVec4,
    pub e1: RVec4,
    pub e2: RVec4,
    pub lambda2: f64,
}

/// Deviations of a frame from its defining identities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameResiduals {
    /// `|<τ,τ> + 1|`
    pub tau_unit: f64,
    /// `|<ν,ν> - 1|`
    pub nu_unit: f64,
    /// `|<τ,ν>|`
    pub tau_nu: f64,
    /// `max_i |<τ,e_i>|`
    pub tau_tangent: f64,
    /// `max_i |<ν,e_i>|`
    pub nu_tangent: f64,
    /// `max_ij |<e_i,e_j> - δ_ij|`
    pub tangent_orthonormal: f64,
    pub tau3: f64,
    pub nu0: f64,
}

impl FrameResiduals {
    /// Largest of the six inner-product residuals.
    pub fn max_inner(&self) -> f64 {
        [self.tau_unit, self.nu_unit, self.tau_nu, self.tau_tangent, self.nu_tangent, self.tangent_orthonormal]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn merge(&self, other: &FrameResiduals) -> FrameResiduals {
        FrameResiduals {
            tau_unit: self.tau_unit.max(other.tau_unit),
            nu_unit: self.nu_unit.max(other.nu_unit),
            tau_nu: self.tau_nu.max(other.tau_nu),
            tau_tangent: self.tau_tangent.max(other.tau_tangent),
            nu_tangent: self.nu_tangent.max(other.nu_tangent),
            tangent_orthonormal: self.tangent_orthonormal.max(other.tangent_orthonormal),
            tau3: self.tau3.max(other.tau3),
            nu0: self.nu0.max(other.nu0),
        }
    }
}

impl FrameAtPoint {
    pub fn residuals(&self) -> FrameResiduals {
        let d = lorentz_dot;
        let (t, n, e1, e2) = (&self.tau, &self.nu, &self.e1, &self.e2);
        FrameResiduals {
            tau_unit: (d(t, t) + 1.0).abs(),
            nu_unit: (d(n, n) - 1.0).abs(),
            tau_nu: d(t, n).abs(),
            tau_tangent: d(t, e1).abs().max(d(t, e2).abs()),
            nu_tangent: d(n, e1).abs().max(d(n, e2).abs()),
            tangent_orthonormal: (d(e1, e1) - 1.0).abs().max((d(e2, e2) - 1.0).abs()).max(d(e1, e2).abs()),
            tau3: self.tau[3].abs(),
            nu0: self.nu[0].abs(),
        }
    }
}

pub fn frame_from(jet: &Jet, theta: f64) -> Result<FrameAtPoint, GeometryError> {
    let (l3, l0) = lightlike_normals(jet.a, theta);
    let norm = -2.0 * lorentz_dot(&l3, &l0);
    let lambda2 = lambda2_from(jet, theta);
    if norm.is_nan() || lambda2.is_nan() || norm <= 0.0 || lambda2 <= 0.0 {
        return Err(GeometryError::DegenerateMetric { w: jet.w });
    }
    let scale = norm.sqrt().recip();
    let fw = w_vector(jet.a, Complex64::from_polar(1.0, theta) * jet.a).scale(jet.mu);
    let lambda = lambda2.sqrt();
    Ok(FrameAtPoint {
        tau: (l3 + l0) * scale,
        nu: (l3 - l0) * scale,
        // f_u = f_w + conj f_w, f_v = i (f_w - conj f_w)
        e1: fw.re() * (2.0 / lambda),
        e2: fw.im() * (-2.0 / lambda),
        lambda2,
    })
}

pub fn frame(sd: &SurfaceData, theta: f64, w: Complex64) -> Result<FrameAtPoint, GeometryError> {
    frame_from(&sd.jet(w)?, theta)
}

// ---------------------------------------------------------------------------
// Weingarten data

/// `η` with `N_w = η conj(f_w)` for the relevant unit normal `N`, `Ω = η λ²/2`
/// and the phase of `η` (undefined where `η = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeingartenData {
    pub eta: Complex64,
    pub omega: Complex64,
    pub psi: Option<f64>,
}

fn weingarten_data(eta: Complex64, omega: Complex64) -> WeingartenData {
    let psi = (eta != Complex64::new(0.0, 0.0)).then(|| eta.arg());
    WeingartenData { eta, omega, psi }
}

/// Weingarten data of the θ = 0 slice with respect to the future-directed `τ`.
///
/// `η = a' / (conj(μ) (1 - |a|²)²)` where `|a| < 1`. Where `|a| > 1` the
/// future-directed normal flips orientation relative to `L₃ + L₀` and `η`
/// changes sign accordingly; `Ω` is `±2 μ a'` with the same sign.
pub fn weingarten_from(jet: &Jet) -> Result<WeingartenData, GeometryError> {
    let one_minus = 1.0 - jet.a_sq();
    if one_minus == 0.0 || jet.mu.norm() == 0.0 {
        return Err(GeometryError::DegenerateMetric { w: jet.w });
    }
    let eta = jet.da / (jet.mu.conj() * (one_minus * one_minus.abs()));
    let omega = 2.0 * jet.mu * jet.da * one_minus.signum();
    Ok(weingarten_data(eta, omega))
}

pub fn weingarten(sd: &SurfaceData, w: Complex64) -> Result<WeingartenData, GeometryError> {
    weingarten_from(&sd.jet(w)?)
}

/// Euclidean analogue on the θ = π slice: `ν_w = ξ conj(h_w)` with
/// `ξ = a' / (conj(μ) (1 + |a|²)²)`.
pub fn euclidean_weingarten_from(jet: &Jet) -> Result<WeingartenData, GeometryError> {
    let one_plus = 1.0 + jet.a_sq();
    if jet.mu.norm() == 0.0 {
        return Err(GeometryError::DegenerateMetric { w: jet.w });
    }
    let xi = jet.da / (jet.mu.conj() * (one_plus * one_plus));
    Ok(weingarten_data(xi, 2.0 * jet.mu * jet.da))
}

pub fn euclidean_weingarten(sd: &SurfaceData, w: Complex64) -> Result<WeingartenData, GeometryError> {
    euclidean_weingarten_from(&sd.jet(w)?)
}

/// Which slice of the family a Weingarten check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slice {
    /// θ = 0, normal `τ`, coefficient `η`.
    Lorentzian,
    /// θ = π, normal `ν`, coefficient `ξ`.
    Euclidean,
}

impl Slice {
    pub fn theta(self) -> f64 {
        match self {
            Slice::Lorentzian => 0.0,
            Slice::Euclidean => std::f64::consts::PI,
        }
    }

    fn normal(self, f: &FrameAtPoint) -> RVec4 {
        match self {
            Slice::Lorentzian => f.tau,
            Slice::Euclidean => f.nu,
        }
    }

    fn coefficient(self, jet: &Jet) -> Result<Complex64, GeometryError> {
        Ok(match self {
            Slice::Lorentzian => weingarten_from(jet)?.eta,
            Slice::Euclidean => euclidean_weingarten_from(jet)?.eta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeingartenResidual {
    pub per_component: [f64; 4],
    pub max: f64,
    pub worst_at: Option<Complex64>,
}

impl WeingartenResidual {
    fn absorb(&mut self, other: &WeingartenResidual) {
        for k in 0..4 {
            self.per_component[k] = self.per_component[k].max(other.per_component[k]);
        }
        if other.max > self.max {
            self.max = other.max;
            self.worst_at = other.worst_at;
        }
    }
}

/// Max over interior nodes of `|N_w - c conj(f_w)|` per component, with `N_w`
/// from central differences of the normal field.
pub fn weingarten_residual(normals: &Grid<RVec4>, coeff: &Grid<Complex64>, fw: &Grid<CVec4>) -> WeingartenResidual {
    let (hu, hv) = normals.spacing();
    let mut out = WeingartenResidual::default();
    for j in 1..normals.nv.saturating_sub(1) {
        for i in 1..normals.nu.saturating_sub(1) {
            let nu_ = (*normals.get(i + 1, j) - *normals.get(i - 1, j)) * (0.5 / hu);
            let nv_ = (*normals.get(i, j + 1) - *normals.get(i, j - 1)) * (0.5 / hv);
            // N_w = (N_u - i N_v) / 2
            let nw = (nu_.to_complex() - nv_.to_complex().scale(Complex64::i())) * 0.5;
            let rhs = fw.get(i, j).conj().scale(*coeff.get(i, j));
            let diff = nw - rhs;
            let mut node = WeingartenResidual { worst_at: Some(normals.node(i, j)), ..Default::default() };
            for k in 0..4 {
                node.per_component[k] = diff[k].norm();
            }
            node.max = node.per_component.iter().copied().fold(0.0, f64::max);
            out.absorb(&node);
        }
    }
    out
}

/// Weingarten residual over 3x3 patches of spacing `h` centred on every node
/// of an `nu x nv` grid over `rect`.
pub fn weingarten_check(
    sd: &SurfaceData,
    slice: Slice,
    rect: Rect,
    nu: usize,
    nv: usize,
    h: f64,
) -> Result<WeingartenResidual, GeometryError> {
    let theta = slice.theta();
    let centres = Grid::from_fn(rect, nu, nv, |_, _, w| w).values;
    let patches = centres
        .par_iter()
        .map(|&w| {
            let patch = Rect::around(w, h);
            let jets = Grid::try_from_fn(patch, 3, 3, |_, _, z| sd.jet(z))?;
            let normals = Grid::try_from_fn(patch, 3, 3, |i, j, _| Ok::<_, GeometryError>(slice.normal(&frame_from(jets.get(i, j), theta)?)))?;
            let coeff = Grid::try_from_fn(patch, 3, 3, |i, j, _| slice.coefficient(jets.get(i, j)))?;
            let fw = jets.map(|jet| w_vector(jet.a, Complex64::from_polar(1.0, theta) * jet.a).scale(jet.mu));
            Ok(weingarten_residual(&normals, &coeff, &fw))
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    let mut out = WeingartenResidual::default();
    for p in &patches {
        out.absorb(p);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// planar points

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub w: Complex64,
    pub abs_da: f64,
    /// False when Newton stalled inside the domain; `w` is then the unrefined candidate.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarScan {
    pub roots: Vec<PlanarPoint>,
    /// `|a'| < tol` at every scanned node.
    pub identically_zero: bool,
    pub spacing: f64,
}

enum NewtonOutcome {
    Converged(Complex64, f64),
    Left,
    Stalled,
}

fn newton(da: &HolomorphicFn, start: Complex64, bounds: &Rect, tol: f64) -> Result<NewtonOutcome, EvalError> {
    let mut w = start;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let f = da.eval(w)?;
        if f.norm() < tol {
            return Ok(NewtonOutcome::Converged(w, f.norm()));
        }
        let df = da.eval_deriv(w)?;
        if df.norm() == 0.0 {
            return Ok(NewtonOutcome::Stalled);
        }
        // complex Newton is 2-D Newton on (Re a', Im a') by Cauchy-Riemann
        w -= f / df;
        if !bounds.contains(w) {
            return Ok(NewtonOutcome::Left);
        }
    }
    let f = da.eval(w)?;
    Ok(if f.norm() < tol { NewtonOutcome::Converged(w, f.norm()) } else { NewtonOutcome::Stalled })
}

/// Zeros of `a'` in `rect`: candidate cells where both `Re a'` and `Im a'`
/// change sign, plus strict local minima of `|a'|`, each refined by Newton.
pub fn planar_points(a: &HolomorphicFn, rect: Rect, nu: usize, nv: usize, tol: f64) -> Result<PlanarScan, EvalError> {
    let da = a.derivative();
    let vals = Grid::try_from_fn(rect, nu, nv, |_, _, w| da.eval(w))?;
    let (hu, hv) = vals.spacing();
    let spacing = hu.max(hv);
    if vals.values.iter().all(|z| z.norm() < tol) {
        return Ok(PlanarScan { roots: Vec::new(), identically_zero: true, spacing });
    }

    let mut candidates = Vec::new();
    for j in 0..nv.saturating_sub(1) {
        for i in 0..nu.saturating_sub(1) {
            let corners = [vals.get(i, j), vals.get(i + 1, j), vals.get(i, j + 1), vals.get(i + 1, j + 1)];
            let spans = |f: fn(&Complex64) -> f64| {
                let lo = corners.iter().map(|z| f(z)).fold(f64::INFINITY, f64::min);
                let hi = corners.iter().map(|z| f(z)).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if spans(|z| z.re) && spans(|z| z.im) {
                candidates.push(0.5 * (vals.node(i, j) + vals.node(i + 1, j + 1)));
            }
        }
    }
    for j in 0..nv {
        for i in 0..nu {
            let here = vals.get(i, j).norm();
            let mut strict_min = true;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1), (-1, 1), (1, -1)] {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii < 0 || jj < 0 || ii >= nu as i64 || jj >= nv as i64 {
                    continue;
                }
                if vals.get(ii as usize, jj as usize).norm() <= here {
                    strict_min = false;
                    break;
                }
            }
            if strict_min {
                candidates.push(vals.node(i, j));
            }
        }
    }

    let bounds = Rect::new(rect.u_min - spacing, rect.u_max + spacing, rect.v_min - spacing, rect.v_max + spacing);
    let mut roots: Vec<PlanarPoint> = Vec::new();
    for start in candidates {
        let found = match newton(&da, start, &bounds, tol)? {
            NewtonOutcome::Converged(w, abs_da) if rect.contains(w) => PlanarPoint { w, abs_da, converged: true },
            NewtonOutcome::Converged(..) | NewtonOutcome::Left => continue,
            NewtonOutcome::Stalled => PlanarPoint { w: start, abs_da: da.eval(start)?.norm(), converged: false },
        };
        match roots.iter_mut().find(|r| (r.w - found.w).norm() <= spacing) {
            Some(existing) => {
                if (found.converged, -found.abs_da) > (existing.converged, -existing.abs_da) {
                    *existing = found;
                }
            }
            None => roots.push(found),
        }
    }
    roots.sort_by(|x, y| x.w.re.total_cmp(&y.w.re).then(x.w.im.total_cmp(&y.w.im)));
    Ok(PlanarScan { roots, identically_zero: false, spacing })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flatness {
    FullyPlanar,
    HasNonplanarPoint,
}

/// `FullyPlanar` iff `max |a'| < tol` over the grid; then `K(θ; ·) ≡ 0` for every θ.
pub fn flatness_classify(a: &HolomorphicFn, rect: Rect, nu: usize, nv: usize, tol: f64) -> Result<Flatness, EvalError> {
    let g = Grid::try_from_fn(rect, nu, nv, |_, _, w| a.eval_deriv(w))?;
    let max = g.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(if max < tol { Flatness::FullyPlanar } else { Flatness::HasNonplanarPoint })
}

// ---------------------------------------------------------------------------
// Gauss map

fn check_hyperbolic(tau: &RVec4) -> Result<(), GeometryError> {
    let scale = 1.0_f64.max(tau[0] * tau[0]);
    let ok = tau.is_finite()
        && tau[0] > 0.0
        && (lorentz_dot(tau, tau) + 1.0).abs() <= HYPERBOLIC_TOLERANCE * scale
        && tau[3].abs() <= HYPERBOLIC_TOLERANCE * scale.sqrt();
    if ok {
        Ok(())
    } else {
        Err(GeometryError::InvalidHyperbolicPoint { tau: *tau })
    }
}

/// Disk coordinate `(τ¹ + iτ²) / (τ⁰ + 1)` of a point of the hyperbolic plane.
pub fn gauss_map_stereo(tau: &RVec4) -> Result<Complex64, GeometryError> {
    check_hyperbolic(tau)?;
    Ok(Complex64::new(tau[1], tau[2]) / (tau[0] + 1.0))
}

/// `Φ(τ) = (0, τ¹, τ², -1) / τ⁰`, onto the open south hemisphere.
pub fn phi_map(tau: &RVec4) -> Result<RVec4, GeometryError> {
    check_hyperbolic(tau)?;
    Ok(RVec4::new(0.0, tau[1], tau[2], -1.0) * tau[0].recip())
}

/// Stereographic projection from the north pole `(0,0,0,1)` of the unit
/// sphere in the `(x¹, x², x³)` subspace.
pub fn north_stereographic(nu: &RVec4) -> Complex64 {
    Complex64::new(nu[1], nu[2]) / (1.0 - nu[3])
}

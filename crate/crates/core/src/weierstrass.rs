//! The θ-family `F(θ; w) = P + 2 Re ∫ μ W(a, e^{iθ} a) dξ` and its conjugate
//! family `H(θ; w) = Q + 2 Im ∫ ...`, built from a pair of holomorphic
//! functions `(a, μ)` on a rectangle of the `w`-plane.
//!
//! Integration runs along straight segments, which stay inside the domain
//! because it is convex. Grid sampling integrates to the first node once and
//! then telescopes: down the first column, then along every row, so each node
//! costs a single short segment.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, HolomorphicFn};
use crate::geometry::{self, FrameAtPoint, GeometryError};
use crate::grid::{Grid, Rect};
use crate::minkowski::{clorentz_dot, CVec4, RVec4};
use crate::quadrature::{integrate_segment, QuadratureError, QuadratureOptions};

/// Default regularity threshold on `|μ|` and `||a| - 1|`.
pub const REGULARITY_EPS: f64 = 1e-9;
/// Side of the probe grid used by [`SurfaceData::validate_regularity`].
pub const REGULARITY_PROBE: usize = 64;
/// Finite-difference step for per-node numerical curvature.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularityKind {
    /// `|μ|` falls below the threshold or μ winds around zero inside a probe cell.
    MuVanishes,
    /// `|a| = 1` is reached or crossed; the metric degenerates there.
    UnitModulus,
    /// `a` or `μ` cannot be evaluated.
    Singular,
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SurfaceError {
    #[error("base point {w0} lies outside the domain")]
    BaseOutsideDomain { w0: Complex64 },
    #[error("domain rectangle is degenerate")]
    DegenerateDomain,
    #[error("point {w} lies outside the domain")]
    OutsideDomain { w: Complex64 },
    #[error("grid must be at least 2x2, got {nu}x{nv}")]
    GridTooSmall { nu: usize, nv: usize },
    #[error("regularity failure ({kind:?}) near w = {w}")]
    Regularity { w: Complex64, kind: RegularityKind },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `(a, a', μ)` evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub w: Complex64,
    pub a: Complex64,
    pub da: Complex64,
    pub mu: Complex64,
}

impl Jet {
    /// `|a|²`.
    pub fn a_sq(&self) -> f64 {
        self.a.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceData {
    pub a: HolomorphicFn,
    pub mu: HolomorphicFn,
    pub domain: Rect,
    pub w0: Complex64,
    pub p: RVec4,
    pub q: RVec4,
    pub quadrature: QuadratureOptions,
}

/// One point of `F(θ; ·)` together with `f_w` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSample {
    pub theta: f64,
    pub w: Complex64,
    pub point: RVec4,
    pub fw: CVec4,
}

/// Everything computed at one grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSample {
    pub w: Complex64,
    /// `∫_{w0}^{w} μ W dξ` along the telescoping path.
    pub integral: CVec4,
    /// `F(θ; w)`.
    pub point: RVec4,
    /// `H(θ; w)`.
    pub conjugate: RVec4,
    pub fw: CVec4,
    pub lambda2: f64,
    pub k_closed: f64,
    /// Richardson-extrapolated finite-difference curvature from `λ²`.
    pub k_numeric: f64,
    pub frame: FrameAtPoint,
    pub abs_da: f64,
    pub is_planar: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSurface {
    pub theta: f64,
    pub nodes: Grid<NodeSample>,
}

impl SampledSurface {
    pub fn points(&self) -> Grid<RVec4> {
        self.nodes.map(|n| n.point)
    }

    pub fn conjugate_points(&self) -> Grid<RVec4> {
        self.nodes.map(|n| n.conjugate)
    }
}

/// `W(a, b) = (a + b, 1 + ab, i(1 - ab), a - b)`.
pub fn w_vector(a: Complex64, b: Complex64) -> CVec4 {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let ab = a * b;
    CVec4::new(a + b, one + ab, i * (one - ab), a - b)
}

/// `(<f_w, f_w>, 2 <f_w, conj f_w> - λ²)`; both vanish for a conformal immersion.
pub fn monge_residual(fw: &CVec4, lambda2: f64) -> (Complex64, f64) {
    let null = clorentz_dot(fw, fw);
    let norm = clorentz_dot(fw, &fw.conj()).re;
    (null, 2.0 * norm - lambda2)
}

fn integrand_from(jet: &Jet, theta: f64) -> CVec4 {
    let b = Complex64::from_polar(1.0, theta) * jet.a;
    w_vector(jet.a, b).scale(jet.mu)
}

impl SurfaceData {
    pub fn new(
        a: HolomorphicFn,
        mu: HolomorphicFn,
        domain: Rect,
        w0: Complex64,
        p: RVec4,
        q: RVec4,
    ) -> Result<Self, SurfaceError> {
        if !domain.is_nondegenerate() {
            return Err(SurfaceError::DegenerateDomain);
        }
        if !domain.contains(w0) {
            return Err(SurfaceError::BaseOutsideDomain { w0 });
        }
        Ok(Self { a, mu, domain, w0, p, q, quadrature: QuadratureOptions::default() })
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureOptions) -> Self {
        self.quadrature = quadrature;
        self
    }

    /// Same data with `μ` multiplied by a constant.
    pub fn with_scaled_mu(&self, factor: Complex64) -> Self {
        let mu = crate::expr::Expr::mul(crate::expr::Expr::Const(factor), self.mu.expr().clone());
        Self { mu: HolomorphicFn::from_expr(mu), ..self.clone() }
    }

    pub fn jet(&self, w: Complex64) -> Result<Jet, EvalError> {
        Ok(Jet { w, a: self.a.eval(w)?, da: self.a.eval_deriv(w)?, mu: self.mu.eval(w)? })
    }

    /// Checks `|μ| > eps` and `||a| - 1| > eps` on a `probe x probe` grid, and
    /// rejects cells across which `|a| - 1` changes sign or around which `μ`
    /// winds.
    pub fn validate_regularity(&self, probe: usize, eps: f64) -> Result<(), SurfaceError> {
        let probe = probe.max(2);
        let vals = Grid::try_from_fn(self.domain, probe, probe, |_, _, w| match (self.a.eval(w), self.mu.eval(w)) {
            (Ok(a), Ok(mu)) => Ok((a, mu)),
            _ => Err(SurfaceError::Regularity { w, kind: RegularityKind::Singular }),
        })?;
        for (_, _, w, &(a, mu)) in vals.iter() {
            if mu.norm() <= eps {
                return Err(SurfaceError::Regularity { w, kind: RegularityKind::MuVanishes });
            }
            if (a.norm() - 1.0).abs() <= eps {
                return Err(SurfaceError::Regularity { w, kind: RegularityKind::UnitModulus });
            }
        }
        for j in 0..probe {
            for i in 0..probe {
                let side = |i: usize, j: usize| vals.get(i, j).0.norm() > 1.0;
                let here = side(i, j);
                if (i + 1 < probe && side(i + 1, j) != here) || (j + 1 < probe && side(i, j + 1) != here) {
                    return Err(SurfaceError::Regularity { w: vals.node(i, j), kind: RegularityKind::UnitModulus });
                }
                if i + 1 < probe && j + 1 < probe {
                    let ring = [vals.get(i, j).1, vals.get(i + 1, j).1, vals.get(i + 1, j + 1).1, vals.get(i, j + 1).1];
                    let winding: f64 = (0..4).map(|k| (ring[(k + 1) % 4] / ring[k]).arg()).sum();
                    if winding.abs() > std::f64::consts::PI {
                        let centre = 0.5 * (vals.node(i, j) + vals.node(i + 1, j + 1));
                        return Err(SurfaceError::Regularity { w: centre, kind: RegularityKind::MuVanishes });
                    }
                }
            }
        }
        Ok(())
    }

    /// [`validate_regularity`](Self::validate_regularity) with the default probe and threshold.
    pub fn validate(&self) -> Result<(), SurfaceError> {
        self.validate_regularity(REGULARITY_PROBE, REGULARITY_EPS)
    }

    fn check_inside(&self, w: Complex64) -> Result<(), SurfaceError> {
        if self.domain.contains(w) {
            Ok(())
        } else {
            Err(SurfaceError::OutsideDomain { w })
        }
    }

    /// `μ(w) W(a(w), e^{iθ} a(w))`, which is `f_w` of `F(θ; ·)`.
    pub fn integrand(&self, theta: f64, w: Complex64) -> Result<CVec4, EvalError> {
        let a = self.a.eval(w)?;
        let mu = self.mu.eval(w)?;
        Ok(w_vector(a, Complex64::from_polar(1.0, theta) * a).scale(mu))
    }

    /// `∫ μ W dξ` along the straight segment `from -> to`.
    pub fn segment(&self, theta: f64, from: Complex64, to: Complex64) -> Result<CVec4, SurfaceError> {
        let r = integrate_segment(|w| self.integrand(theta, w), from, to, self.quadrature)?;
        Ok(r.value)
    }

    /// `∫ μ W dξ` along the polygonal path through `vertices`.
    pub fn path_integral(&self, theta: f64, vertices: &[Complex64]) -> Result<CVec4, SurfaceError> {
        for &w in vertices {
            self.check_inside(w)?;
        }
        vertices.windows(2).try_fold(CVec4::ZERO, |acc, leg| Ok(acc + self.segment(theta, leg[0], leg[1])?))
    }

    /// `∫_{w0}^{w} μ W dξ` along the straight segment.
    pub fn primitive(&self, theta: f64, w: Complex64) -> Result<CVec4, SurfaceError> {
        self.path_integral(theta, &[self.w0, w])
    }

    pub fn point_from_integral(&self, integral: &CVec4) -> RVec4 {
        self.p + integral.re() * 2.0
    }

    pub fn conjugate_from_integral(&self, integral: &CVec4) -> RVec4 {
        self.q + integral.im() * 2.0
    }

    /// `F(θ; w)`.
    pub fn integrate_point(&self, theta: f64, w: Complex64) -> Result<ThetaSample, SurfaceError> {
        let g = self.primitive(theta, w)?;
        Ok(ThetaSample { theta, w, point: self.point_from_integral(&g), fw: self.integrand(theta, w)? })
    }

    /// `H(θ; w)`.
    pub fn integrate_conjugate(&self, theta: f64, w: Complex64) -> Result<ThetaSample, SurfaceError> {
        let g = self.primitive(theta, w)?;
        Ok(ThetaSample { theta, w, point: self.conjugate_from_integral(&g), fw: self.integrand(theta, w)? })
    }

    /// Integrals `∫_{w0}^{node} μ W dξ` at every node of an `nu x nv` grid over
    /// `rect`, using telescoping paths. Rows run in parallel.
    pub fn integral_grid(&self, theta: f64, rect: Rect, nu: usize, nv: usize) -> Result<Grid<CVec4>, SurfaceError> {
        if nu < 2 || nv < 2 {
            return Err(SurfaceError::GridTooSmall { nu, nv });
        }
        if !rect.is_nondegenerate() {
            return Err(SurfaceError::DegenerateDomain);
        }
        for w in [rect.node(0, 0, nu, nv), rect.node(nu - 1, nv - 1, nu, nv)] {
            self.check_inside(w)?;
        }
        let node = |i, j| rect.node(i, j, nu, nv);
        let mut column = Vec::with_capacity(nv);
        let mut acc = self.segment(theta, self.w0, node(0, 0))?;
        column.push(acc);
        for j in 1..nv {
            acc = acc + self.segment(theta, node(0, j - 1), node(0, j))?;
            column.push(acc);
        }
        let rows: Vec<Vec<CVec4>> = column
            .par_iter()
            .enumerate()
            .map(|(j, &start)| {
                let mut row = Vec::with_capacity(nu);
                let mut acc = start;
                row.push(acc);
                for i in 1..nu {
                    acc = acc + self.segment(theta, node(i - 1, j), node(i, j))?;
                    row.push(acc);
                }
                Ok(row)
            })
            .collect::<Result<_, SurfaceError>>()?;
        Ok(Grid { rect, nu, nv, values: rows.into_iter().flatten().collect() })
    }

    /// `F(θ; ·)` on a grid over `rect`.
    pub fn point_grid(&self, theta: f64, rect: Rect, nu: usize, nv: usize) -> Result<Grid<RVec4>, SurfaceError> {
        Ok(self.integral_grid(theta, rect, nu, nv)?.map(|g| self.point_from_integral(g)))
    }

    /// Full sampling over the whole domain.
    pub fn sample_grid(&self, theta: f64, nu: usize, nv: usize) -> Result<SampledSurface, SurfaceError> {
        self.sample_grid_in(theta, self.domain, nu, nv, DEFAULT_FD_STEP)
    }

    /// Full sampling over `rect`, with numerical curvature from a local
    /// stencil of step `fd_step` around each node.
    pub fn sample_grid_in(
        &self,
        theta: f64,
        rect: Rect,
        nu: usize,
        nv: usize,
        fd_step: f64,
    ) -> Result<SampledSurface, SurfaceError> {
        let integrals = self.integral_grid(theta, rect, nu, nv)?;
        let values = integrals
            .values
            .par_iter()
            .enumerate()
            .map(|(k, integral)| {
                let w = integrals.node(k % nu, k / nu);
                let jet = self.jet(w)?;
                let fw = integrand_from(&jet, theta);
                let frame = geometry::frame_from(&jet, theta)?;
                let k_numeric = geometry::curvature_by_stencil(self, theta, w, fd_step)?;
                let abs_da = jet.da.norm();
                Ok(NodeSample {
                    w,
                    integral: *integral,
                    point: self.point_from_integral(integral),
                    conjugate: self.conjugate_from_integral(integral),
                    fw,
                    lambda2: geometry::lambda2_from(&jet, theta),
                    k_closed: geometry::gauss_curvature_from(&jet, theta),
                    k_numeric,
                    frame,
                    abs_da,
                    is_planar: abs_da < geometry::PLANAR_TOLERANCE,
                })
            })
            .collect::<Result<Vec<_>, SurfaceError>>()?;
        Ok(SampledSurface { theta, nodes: Grid { rect, nu, nv, values } })
    }
}

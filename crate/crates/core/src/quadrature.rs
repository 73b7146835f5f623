//! Adaptive Gauss–Kronrod integration of C⁴-valued integrands along straight
//! segments of the complex plane.

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::EvalError;
use crate::minkowski::CVec4;

/// Default absolute error target per component.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default cap on the number of accepted plus pending subintervals.
pub const DEFAULT_MAX_INTERVALS: usize = 4096;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, centre last) and
// weights, with the embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature from {from} to {to} did not reach tolerance {tol:e} within {max_intervals} subintervals (estimate {estimate:e})")]
    NoConvergence { from: Complex64, to: Complex64, tol: f64, max_intervals: usize, estimate: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOLERANCE, max_intervals: DEFAULT_MAX_INTERVALS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentIntegral {
    pub value: CVec4,
    /// Sum of the accepted local Kronrod–Gauss differences.
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn kronrod_15<F>(f: &F, from: Complex64, dw: Complex64, t0: f64, t1: f64) -> Result<(CVec4, f64), EvalError>
where
    F: Fn(Complex64) -> Result<CVec4, EvalError>,
{
    let half = 0.5 * (t1 - t0);
    let centre = 0.5 * (t0 + t1);
    let at = |t: f64| f(from + dw * t);
    let mut kron = CVec4::ZERO;
    let mut gauss = CVec4::ZERO;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let sum = if x == 0.0 { at(centre)? } else { at(centre - half * x)? + at(centre + half * x)? };
        kron = kron + sum * wk;
        if j % 2 == 1 {
            gauss = gauss + sum * WG[j / 2];
        }
    }
    let scale = dw * half;
    let kron = kron.scale(scale);
    let gauss = gauss.scale(scale);
    Ok((kron, (kron - gauss).max_norm()))
}

/// Integrates `f` along the straight segment `from -> to`.
///
/// Bisection is depth-first and deterministic; an interval of parameter
/// length `l` is accepted once its local error estimate is at most `tol * l`.
pub fn integrate_segment<F>(
    f: F,
    from: Complex64,
    to: Complex64,
    opts: QuadratureOptions,
) -> Result<SegmentIntegral, QuadratureError>
where
    F: Fn(Complex64) -> Result<CVec4, EvalError>,
{
    let dw = to - from;
    if dw.norm() == 0.0 {
        return Ok(SegmentIntegral { value: CVec4::ZERO, error_estimate: 0.0, evaluations: 0 });
    }
    let mut total = CVec4::ZERO;
    let mut error_estimate = 0.0;
    let mut evaluations = 0;
    let mut intervals = 1;
    let mut stack = vec![(0.0_f64, 1.0_f64)];
    while let Some((t0, t1)) = stack.pop() {
        let (value, err) = kronrod_15(&f, from, dw, t0, t1)?;
        evaluations += 15;
        if err <= opts.tol * (t1 - t0) {
            total = total + value;
            error_estimate += err;
            continue;
        }
        intervals += 1;
        if intervals > opts.max_intervals {
            return Err(QuadratureError::NoConvergence {
                from,
                to,
                tol: opts.tol,
                max_intervals: opts.max_intervals,
                estimate: err,
            });
        }
        let mid = 0.5 * (t0 + t1);
        // right half pushed first so the left half is processed next
        stack.push((mid, t1));
        stack.push((t0, mid));
    }
    Ok(SegmentIntegral { value: total, error_estimate, evaluations })
}

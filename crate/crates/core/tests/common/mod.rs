//! Closed-form reference surfaces shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;
use thetafam::minkowski::RVec4;

fn re4(z: [Complex64; 4]) -> RVec4 {
    RVec4(z.map(|c| c.re))
}

/// `F(θ; w)` for `a = i e^w`, `μ = e^{-w}` (base point contributions dropped).
pub fn exp_family(theta: f64, w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    let (s, c) = theta.sin_cos();
    RVec4::new(
        -2.0 * (u * s + v * (1.0 + c)),
        -2.0 * ((-u).exp() * v.cos() + u.exp() * (theta + v).cos()),
        -2.0 * ((-u).exp() * v.sin() + u.exp() * (theta + v).sin()),
        2.0 * (u * s - v * (1.0 - c)),
    )
}

/// Same data with the exponentials' real and imaginary arguments exchanged in
/// the middle components. Used to show that arrangement is not an antiderivative.
pub fn exp_family_swapped(theta: f64, w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    let (s, c) = theta.sin_cos();
    RVec4::new(
        -2.0 * (u * s + v * (1.0 + c)),
        -2.0 * ((-u).exp() * v.cos() + (-v).exp() * (theta + u).sin()),
        -2.0 * ((-u).exp() * v.sin() - (-v).exp() * (theta + u).cos()),
        -2.0 * (-u * s + v * (1.0 - c)),
    )
}

/// `F(0; w)` for `a = sin w`, `μ = 1`, as the real part of a complex vector.
pub fn sine_lorentzian_complex(w: Complex64) -> RVec4 {
    let i = Complex64::i();
    let s2 = (2.0 * w).sin() / 2.0;
    re4([-4.0 * w.cos(), 3.0 * w - s2, i * (w + s2), Complex64::new(0.0, 0.0)])
}

/// Real expansion of [`sine_lorentzian_complex`].
pub fn sine_lorentzian_real(w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    let (ch, sh) = (v.cosh(), v.sinh());
    let (su, cu) = u.sin_cos();
    RVec4::new(
        -4.0 * cu * ch,
        3.0 * u - su * cu * (ch * ch + sh * sh),
        -v + ch * sh * (su * su - cu * cu),
        0.0,
    )
}

/// `F(π; w)` for `a = sin w`, `μ = 1`.
pub fn sine_euclidean_complex(w: Complex64) -> RVec4 {
    let i = Complex64::i();
    let s2 = (2.0 * w).sin() / 2.0;
    re4([Complex64::new(0.0, 0.0), w + s2, i * (3.0 * w - s2), -4.0 * w.cos()])
}

pub fn sine_euclidean_real(w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    let (ch, sh) = (v.cosh(), v.sinh());
    let (su, cu) = u.sin_cos();
    RVec4::new(
        0.0,
        u + su * cu * (ch * ch + sh * sh),
        -3.0 * v - ch * sh * (su * su - cu * cu),
        -4.0 * cu * ch,
    )
}

/// Maximal surface in R³₁ paired with [`helicoidal_euclidean`].
pub fn catenoidal_lorentzian(w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    RVec4::new(u.sin() * v.cosh(), u.sin() * v.sinh(), u, 0.0)
}

pub fn helicoidal_euclidean(w: Complex64) -> RVec4 {
    let (u, v) = (w.re, w.im);
    RVec4::new(0.0, v, -u.cos() * v.cosh(), u.sin() * v.cosh())
}

/// Largest component difference between `f(w) - f(w_ref)` and `g(w) - g(w_ref)`.
pub fn offset_error(f: RVec4, f_ref: RVec4, g: RVec4, g_ref: RVec4) -> f64 {
    ((f - f_ref) - (g - g_ref)).max_abs()
}

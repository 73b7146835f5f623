//! Vectors of Minkowski 4-space and its complexification.
//!
//! The signature is fixed to `(-, +, +, +)` with index 0 timelike. The complex
//! form is the *bilinear* extension of the real one, not a Hermitian product:
//! `<z, w> = -z0 w0 + z1 w1 + z2 w2 + z3 w3` with no conjugation.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Default threshold on `|<v, v>|` below which a vector counts as lightlike.
pub const LIGHTLIKE_TOLERANCE: f64 = 1e-12;

const SIGNATURE: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("causal character is undefined for the zero vector")]
pub struct ZeroVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Point or vector of R⁴₁.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RVec4(pub [f64; 4]);

/// Vector of C⁴ carrying the complex bilinear Lorentz form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec4(pub [Complex64; 4]);

impl RVec4 {
    pub const ZERO: RVec4 = RVec4([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        RVec4([x0, x1, x2, x3])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        RVec4(v)
    }

    pub fn dot(&self, other: &RVec4) -> f64 {
        lorentz_dot(self, other)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn to_complex(self) -> CVec4 {
        CVec4(self.0.map(|x| Complex64::new(x, 0.0)))
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl CVec4 {
    pub const ZERO: CVec4 = CVec4([Complex64::new(0.0, 0.0); 4]);

    pub fn new(z0: Complex64, z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        CVec4([z0, z1, z2, z3])
    }

    pub fn dot(&self, other: &CVec4) -> Complex64 {
        clorentz_dot(self, other)
    }

    pub fn conj(&self) -> CVec4 {
        CVec4(self.0.map(|z| z.conj()))
    }

    pub fn re(&self) -> RVec4 {
        RVec4(self.0.map(|z| z.re))
    }

    pub fn im(&self) -> RVec4 {
        RVec4(self.0.map(|z| z.im))
    }

    pub fn scale(&self, s: Complex64) -> CVec4 {
        CVec4(self.0.map(|z| z * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }
}

/// `-u0 v0 + u1 v1 + u2 v2 + u3 v3`.
pub fn lorentz_dot(u: &RVec4, v: &RVec4) -> f64 {
    (0..4).map(|i| SIGNATURE[i] * u.0[i] * v.0[i]).sum()
}

/// Bilinear (not sesquilinear) extension of [`lorentz_dot`] to C⁴.
pub fn clorentz_dot(u: &CVec4, v: &CVec4) -> Complex64 {
    (0..4).map(|i| u.0[i] * v.0[i] * SIGNATURE[i]).sum()
}

pub fn causal_character(v: &RVec4) -> Result<CausalCharacter, ZeroVector> {
    causal_character_with(v, LIGHTLIKE_TOLERANCE)
}

pub fn causal_character_with(v: &RVec4, tol: f64) -> Result<CausalCharacter, ZeroVector> {
    if v.0.iter().all(|&x| x == 0.0) {
        return Err(ZeroVector);
    }
    let q = lorentz_dot(v, v);
    Ok(if q.abs() <= tol {
        CausalCharacter::Lightlike
    } else if q < 0.0 {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Spacelike
    })
}

impl Index<usize> for RVec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVec4 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Index<usize> for CVec4 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

macro_rules! impl_linear {
    ($t:ty, $s:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                let mut out = self;
                for i in 0..4 {
                    out.0[i] += rhs.0[i];
                }
                out
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                let mut out = self;
                for i in 0..4 {
                    out.0[i] -= rhs.0[i];
                }
                out
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                let mut out = self;
                for i in 0..4 {
                    out.0[i] = -out.0[i];
                }
                out
            }
        }

        impl Mul<$s> for $t {
            type Output = $t;
            fn mul(self, s: $s) -> $t {
                let mut out = self;
                for i in 0..4 {
                    out.0[i] *= s;
                }
                out
            }
        }
    };
}

impl_linear!(RVec4, f64);
impl_linear!(CVec4, Complex64);

impl Mul<f64> for CVec4 {
    type Output = CVec4;
    fn mul(self, s: f64) -> CVec4 {
        CVec4(self.0.map(|z| z * s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn signature() {
        assert_eq!(lorentz_dot(&RVec4::basis(0), &RVec4::basis(0)), -1.0);
        assert_eq!(lorentz_dot(&RVec4::basis(3), &RVec4::basis(3)), 1.0);
        assert_eq!(lorentz_dot(&RVec4::new(1.0, 1.0, 0.0, 0.0), &RVec4::new(1.0, -1.0, 0.0, 0.0)), -2.0);
    }

    #[test]
    fn complex_form_is_bilinear_not_hermitian() {
        let ie0 = CVec4::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(clorentz_dot(&ie0, &ie0), c(1.0, 0.0));
    }

    #[test]
    fn complex_form_restricts_to_real_form() {
        let u = RVec4::new(0.3, -1.2, 2.5, 0.7);
        let v = RVec4::new(-4.0, 0.1, 0.9, 3.3);
        let z = clorentz_dot(&u.to_complex(), &v.to_complex());
        assert_eq!(z.re, lorentz_dot(&u, &v));
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn causal_characters() {
        assert_eq!(causal_character(&RVec4::new(1.0, 0.0, 0.0, 0.0)), Ok(CausalCharacter::Timelike));
        assert_eq!(causal_character(&RVec4::new(0.0, 1.0, 0.0, 0.0)), Ok(CausalCharacter::Spacelike));
        assert_eq!(causal_character(&RVec4::new(1.0, 1.0, 0.0, 0.0)), Ok(CausalCharacter::Lightlike));
        assert_eq!(causal_character(&RVec4::ZERO), Err(ZeroVector));
        // per-call tolerance override
        let almost = RVec4::new(1.0, 1.0 + 1e-8, 0.0, 0.0);
        assert_eq!(causal_character(&almost), Ok(CausalCharacter::Spacelike));
        assert_eq!(causal_character_with(&almost, 1e-6), Ok(CausalCharacter::Lightlike));
    }

    #[test]
    fn vector_arithmetic() {
        let u = RVec4::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(u + u, u * 2.0);
        assert_eq!(u - u, RVec4::ZERO);
        assert_eq!(-u, u * -1.0);
        let z = u.to_complex().scale(c(0.0, 1.0));
        assert_eq!(z.im(), u);
        assert_eq!(z.conj().im(), -u);
    }
}

//! Axis-aligned rectangles in the `w = u + iv` plane and uniform node grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Self {
        Self { u_min, u_max, v_min, v_max }
    }

    /// Square of half-width `r` centred on `w`.
    pub fn around(w: Complex64, r: f64) -> Self {
        Self::new(w.re - r, w.re + r, w.im - r, w.im + r)
    }

    pub fn is_nondegenerate(&self) -> bool {
        [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite())
            && self.u_max > self.u_min
            && self.v_max > self.v_min
    }

    pub fn contains(&self, w: Complex64) -> bool {
        (self.u_min..=self.u_max).contains(&w.re) && (self.v_min..=self.v_max).contains(&w.im)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.u_min >= self.u_min && other.u_max <= self.u_max && other.v_min >= self.v_min && other.v_max <= self.v_max
    }

    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let r = Rect::new(
            self.u_min.max(other.u_min),
            self.u_max.min(other.u_max),
            self.v_min.max(other.v_min),
            self.v_max.min(other.v_max),
        );
        r.is_nondegenerate().then_some(r)
    }

    /// Shrinks every side by `margin`.
    pub fn inset(&self, margin: f64) -> Rect {
        Rect::new(self.u_min + margin, self.u_max - margin, self.v_min + margin, self.v_max - margin)
    }

    pub fn centre(&self) -> Complex64 {
        Complex64::new(0.5 * (self.u_min + self.u_max), 0.5 * (self.v_min + self.v_max))
    }

    /// Node `(i, j)` of an `nu x nv` grid spanning the rectangle, corners included.
    pub fn node(&self, i: usize, j: usize, nu: usize, nv: usize) -> Complex64 {
        let (hu, hv) = self.spacing(nu, nv);
        // pin the far edge exactly
        let u = if i + 1 == nu { self.u_max } else { self.u_min + i as f64 * hu };
        let v = if j + 1 == nv { self.v_max } else { self.v_min + j as f64 * hv };
        Complex64::new(u, v)
    }

    pub fn spacing(&self, nu: usize, nv: usize) -> (f64, f64) {
        (
            (self.u_max - self.u_min) / (nu.max(2) - 1) as f64,
            (self.v_max - self.v_min) / (nv.max(2) - 1) as f64,
        )
    }
}

/// Row-major `nu x nv` grid of values over a rectangle; index `j * nu + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub rect: Rect,
    pub nu: usize,
    pub nv: usize,
    pub values: Vec<T>,
}

impl<T> Grid<T> {
    pub fn from_fn(rect: Rect, nu: usize, nv: usize, mut f: impl FnMut(usize, usize, Complex64) -> T) -> Self {
        let mut values = Vec::with_capacity(nu * nv);
        for j in 0..nv {
            for i in 0..nu {
                values.push(f(i, j, rect.node(i, j, nu, nv)));
            }
        }
        Self { rect, nu, nv, values }
    }

    pub fn try_from_fn<E>(
        rect: Rect,
        nu: usize,
        nv: usize,
        mut f: impl FnMut(usize, usize, Complex64) -> Result<T, E>,
    ) -> Result<Self, E> {
        let mut values = Vec::with_capacity(nu * nv);
        for j in 0..nv {
            for i in 0..nu {
                values.push(f(i, j, rect.node(i, j, nu, nv))?);
            }
        }
        Ok(Self { rect, nu, nv, values })
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[j * self.nu + i]
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        self.rect.node(i, j, self.nu, self.nv)
    }

    pub fn spacing(&self) -> (f64, f64) {
        self.rect.spacing(self.nu, self.nv)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid { rect: self.rect, nu: self.nu, nv: self.nv, values: self.values.iter().map(&mut f).collect() }
    }

    /// Iterates `(i, j, w, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64, &T)> {
        self.values.iter().enumerate().map(move |(k, v)| {
            let (i, j) = (k % self.nu, k / self.nu);
            (i, j, self.node(i, j), v)
        })
    }

    /// True when both grids cover the same nodes (to a relative 1e-12 on the rectangle).
    pub fn same_nodes<U>(&self, other: &Grid<U>) -> bool {
        let scale = 1.0
            + [self.rect.u_min, self.rect.u_max, self.rect.v_min, self.rect.v_max]
                .iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()));
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * scale;
        self.nu == other.nu
            && self.nv == other.nv
            && close(self.rect.u_min, other.rect.u_min)
            && close(self.rect.u_max, other.rect.u_max)
            && close(self.rect.v_min, other.rect.v_min)
            && close(self.rect.v_max, other.rect.v_max)
    }
}

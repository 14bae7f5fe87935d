//! Dense 2x2 / 3x3 complex matrices, the per-point value of a matrix field.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Small square complex matrix (dimension 1..=3), stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat {
    dim: usize,
    a: [Complex64; 9],
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "matrix dimension {dim} unsupported");
        Self { dim, a: [ZERO; 9] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i * 3 + i] = ONE;
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.a[r * 3 + c] = *v;
            }
        }
        m
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.a[r * 3 + c] = Complex64::new(*v, 0.0);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        debug_assert!(r < self.dim && c < self.dim);
        self.a[r * 3 + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        debug_assert!(r < self.dim && c < self.dim);
        self.a[r * 3 + c] = v;
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        for v in m.a.iter_mut() {
            *v *= s;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.a[c * 3 + r] = self.a[r * 3 + c];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = self.transpose();
        for v in m.a.iter_mut() {
            *v = v.conj();
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.a[i * 3 + i]).sum()
    }

    pub fn det(&self) -> Complex64 {
        let a = &self.a;
        match self.dim {
            1 => a[0],
            2 => a[0] * a[4] - a[1] * a[3],
            _ => {
                a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                    + a[2] * (a[3] * a[7] - a[4] * a[6])
            }
        }
    }

    /// Inverse via the adjugate; `None` when `|det|` underflows relative to the entries.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        if det.norm() <= 1e-14 * scale.powi(self.dim as i32) {
            return None;
        }
        let a = &self.a;
        let mut m = Self::zeros(self.dim);
        match self.dim {
            1 => m.a[0] = ONE / a[0],
            2 => {
                m.a[0] = a[4] / det;
                m.a[1] = -a[1] / det;
                m.a[3] = -a[3] / det;
                m.a[4] = a[0] / det;
            }
            _ => {
                let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
                    a[r0 * 3 + c0] * a[r1 * 3 + c1] - a[r0 * 3 + c1] * a[r1 * 3 + c0]
                };
                m.a[0] = cof(1, 2, 1, 2) / det;
                m.a[1] = -cof(0, 2, 1, 2) / det;
                m.a[2] = cof(0, 1, 1, 2) / det;
                m.a[3] = -cof(1, 2, 0, 2) / det;
                m.a[4] = cof(0, 2, 0, 2) / det;
                m.a[5] = -cof(0, 1, 0, 2) / det;
                m.a[6] = cof(1, 2, 0, 1) / det;
                m.a[7] = -cof(0, 2, 0, 1) / det;
                m.a[8] = cof(0, 1, 0, 1) / det;
            }
        }
        Some(m)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().map(|v| v.norm_sqr()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.dim).flat_map(move |r| (0..self.dim).map(move |c| self.a[r * 3 + c]))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Matrix exponential by scaling and squaring of a Taylor series.
    pub fn exp(&self) -> Self {
        let norm = self.max_abs() * self.dim as f64;
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = self.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut term = Self::identity(self.dim);
        let mut sum = term;
        for n in 1..=20 {
            term = (term * scaled).scale(Complex64::new(1.0 / n as f64, 0.0));
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(mut self, rhs: Mat) -> Mat {
        self += rhs;
        self
    }
}

impl AddAssign for Mat {
    fn add_assign(&mut self, rhs: Mat) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.a.iter_mut().zip(rhs.a.iter()) {
            *a += *b;
        }
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(mut self, rhs: Mat) -> Mat {
        self -= rhs;
        self
    }
}

impl SubAssign for Mat {
    fn sub_assign(&mut self, rhs: Mat) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.a.iter_mut().zip(rhs.a.iter()) {
            *a -= *b;
        }
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(mut self) -> Mat {
        for v in self.a.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.a[r * 3 + k] * rhs.a[k * 3 + c];
                }
                out.a[r * 3 + c] = acc;
            }
        }
        out
    }
}

impl Mul<f64> for Mat {
    type Output = Mat;
    fn mul(self, rhs: f64) -> Mat {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for Mat {
    type Output = Mat;
    fn mul(self, rhs: Complex64) -> Mat {
        self.scale(rhs)
    }
}

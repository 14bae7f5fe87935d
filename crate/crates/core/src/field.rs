//! Sampled fields on a [`Grid2`]: real, complex and small-matrix valued.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::mat::Mat;

/// Per-point value of a field. The component view lets spectral operators
/// treat every kind uniformly as a bundle of complex scalar channels.
pub trait Sample: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<f64, Output = Self> {
    fn max_abs(&self) -> f64;
    /// Sum of squared moduli of all scalar entries.
    fn norm_sqr(&self) -> f64;
    /// Number of scalar entries (1 for scalars, dim^2 for matrices).
    fn entry_count(&self) -> usize;
    fn component(&self, c: usize) -> Complex64;
    /// Writes a component back. Real samples keep only the real part.
    fn set_component(&mut self, c: usize, v: Complex64);
    fn is_finite(&self) -> bool;
}

impl Sample for f64 {
    fn max_abs(&self) -> f64 {
        self.abs()
    }
    fn norm_sqr(&self) -> f64 {
        self * self
    }
    fn entry_count(&self) -> usize {
        1
    }
    fn component(&self, _c: usize) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn set_component(&mut self, _c: usize, v: Complex64) {
        *self = v.re;
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Sample for Complex64 {
    fn max_abs(&self) -> f64 {
        self.norm()
    }
    fn norm_sqr(&self) -> f64 {
        Complex64::norm_sqr(self)
    }
    fn entry_count(&self) -> usize {
        1
    }
    fn component(&self, _c: usize) -> Complex64 {
        *self
    }
    fn set_component(&mut self, _c: usize, v: Complex64) {
        *self = v;
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Sample for Mat {
    fn max_abs(&self) -> f64 {
        Mat::max_abs(self)
    }
    fn norm_sqr(&self) -> f64 {
        Mat::norm_sqr(self)
    }
    fn entry_count(&self) -> usize {
        self.dim() * self.dim()
    }
    fn component(&self, c: usize) -> Complex64 {
        self.get(c / self.dim(), c % self.dim())
    }
    fn set_component(&mut self, c: usize, v: Complex64) {
        let d = self.dim();
        self.set(c / d, c % d, v);
    }
    fn is_finite(&self) -> bool {
        Mat::is_finite(self)
    }
}

/// A value of type `T` at every point of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    grid: Grid2,
    data: Vec<T>,
}

pub type ScalarField = Field<f64>;
pub type ComplexField = Field<Complex64>;
pub type MatrixField = Field<Mat>;

impl<T: Sample> Field<T> {
    pub fn from_vec(grid: Grid2, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for a {}x{} grid",
                data.len(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn filled(grid: Grid2, value: T) -> Self {
        Self { grid, data: vec![value; grid.len()] }
    }

    /// Samples `f(x, y)` at the grid coordinates.
    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> T) -> Self {
        let data = (0..grid.len())
            .map(|idx| {
                let (i, j) = grid.coords(idx);
                f(grid.x(i), grid.y(j))
            })
            .collect();
        Self { grid, data }
    }

    pub fn from_index_fn(grid: Grid2, f: impl Fn(usize) -> T) -> Self {
        Self { grid, data: (0..grid.len()).map(f).collect() }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[self.grid.index(i, j)]
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field { grid: self.grid, data: self.data.iter().map(|v| f(*v)).collect() }
    }

    pub fn zip_map<S: Sample, U: Sample>(&self, other: &Field<S>, f: impl Fn(T, S) -> U) -> Field<U> {
        debug_assert!(self.grid.same_shape(other.grid()));
        Field {
            grid: self.grid,
            data: self.data.iter().zip(other.data()).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn check_same_grid<S: Sample>(&self, other: &Field<S>) -> Result<()> {
        self.grid.check_same(other.grid())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Sample::max_abs).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Sample::is_finite)
    }

    /// Linear combination `sum_i c_i * f_i` of same-grid fields.
    pub fn lin_comb(terms: &[(f64, &Field<T>)]) -> Field<T> {
        let (c0, f0) = terms[0];
        let mut out = f0.clone() * c0;
        for (c, f) in &terms[1..] {
            debug_assert!(out.grid.same_shape(f.grid()));
            for (o, v) in out.data.iter_mut().zip(f.data()) {
                *o = *o + *v * *c;
            }
        }
        out
    }
}

impl ScalarField {
    pub fn zeros(grid: Grid2) -> Self {
        Self::filled(grid, 0.0)
    }

    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl ComplexField {
    pub fn zeros(grid: Grid2) -> Self {
        Self::filled(grid, Complex64::new(0.0, 0.0))
    }

    pub fn re(&self) -> ScalarField {
        self.map(|v| v.re)
    }

    pub fn im(&self) -> ScalarField {
        self.map(|v| v.im)
    }

    pub fn conj(&self) -> ComplexField {
        self.map(|v| v.conj())
    }

    pub fn abs(&self) -> ScalarField {
        self.map(|v| v.norm())
    }

    pub fn scale(&self, s: Complex64) -> ComplexField {
        self.map(|v| v * s)
    }
}

impl MatrixField {
    pub fn zeros(grid: Grid2, dim: usize) -> Self {
        Self::filled(grid, Mat::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.data[0].dim()
    }

    pub fn entry(&self, r: usize, c: usize) -> ComplexField {
        self.map(|m| m.get(r, c))
    }

    /// Pointwise `s(x) * M(x)`.
    pub fn scale_by(&self, s: &ComplexField) -> MatrixField {
        self.zip_map(s, |m, v| m.scale(v))
    }

    pub fn scale(&self, s: Complex64) -> MatrixField {
        self.map(|m| m.scale(s))
    }

    /// Pointwise matrix product.
    pub fn matmul(&self, other: &MatrixField) -> Result<MatrixField> {
        self.check_compatible(other)?;
        Ok(self.zip_map(other, |a, b| a * b))
    }

    pub fn check_compatible(&self, other: &MatrixField) -> Result<()> {
        self.check_same_grid(other)?;
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!("matrix dim {} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    /// Pointwise inverse; errors with the first singular point.
    pub fn inverse(&self) -> Result<MatrixField> {
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, m) in self.data.iter().enumerate() {
            data.push(m.inverse().ok_or(Error::SingularGauge(idx))?);
        }
        Ok(Field { grid: self.grid, data })
    }
}

/// Pointwise `A B - B A`.
pub fn commutator(a: &MatrixField, b: &MatrixField) -> Result<MatrixField> {
    a.check_compatible(b)?;
    Ok(a.zip_map(b, |x, y| x.commutator(&y)))
}

impl<T: Sample> Add<&Field<T>> for &Field<T> {
    type Output = Field<T>;
    fn add(self, rhs: &Field<T>) -> Field<T> {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl<T: Sample> Sub<&Field<T>> for &Field<T> {
    type Output = Field<T>;
    fn sub(self, rhs: &Field<T>) -> Field<T> {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl<T: Sample> Add for Field<T> {
    type Output = Field<T>;
    fn add(self, rhs: Field<T>) -> Field<T> {
        &self + &rhs
    }
}

impl<T: Sample> Sub for Field<T> {
    type Output = Field<T>;
    fn sub(self, rhs: Field<T>) -> Field<T> {
        &self - &rhs
    }
}

impl<T: Sample> Neg for &Field<T> {
    type Output = Field<T>;
    fn neg(self) -> Field<T> {
        self.map(|v| -v)
    }
}

impl<T: Sample> Neg for Field<T> {
    type Output = Field<T>;
    fn neg(self) -> Field<T> {
        -&self
    }
}

impl<T: Sample> Mul<f64> for &Field<T> {
    type Output = Field<T>;
    fn mul(self, rhs: f64) -> Field<T> {
        self.map(|v| v * rhs)
    }
}

impl<T: Sample> Mul<f64> for Field<T> {
    type Output = Field<T>;
    fn mul(mut self, rhs: f64) -> Field<T> {
        for v in self.data.iter_mut() {
            *v = *v * rhs;
        }
        self
    }
}

/// Pointwise product (matrix product for matrix fields).
impl<T: Sample + Mul<Output = T>> Mul<&Field<T>> for &Field<T> {
    type Output = Field<T>;
    fn mul(self, rhs: &Field<T>) -> Field<T> {
        self.zip_map(rhs, |a, b| a * b)
    }
}

//! Seeded random band-limited fields for property tests and fixtures.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{MatrixField, ScalarField};
use crate::grid::Grid2;
use crate::mat::Mat;

/// Deterministic generator of smooth periodic fields.
pub struct SmoothRng {
    rng: ChaCha8Rng,
    /// Highest wavenumber (in units of the fundamental) along each axis.
    pub modes: usize,
}

impl SmoothRng {
    pub fn new(seed: u64, modes: usize) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), modes }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Sum of Fourier modes `|m|, |n| <= modes` with coefficients decaying
    /// like `1 / (1 + m^2 + n^2)`, scaled so the sup norm is about `amplitude`.
    /// The `(0, 0)` mode is omitted when `zero_mean` is set.
    pub fn field(&mut self, grid: Grid2, amplitude: f64, zero_mean: bool) -> ScalarField {
        let m = self.modes as i32;
        let mut terms = Vec::new();
        for a in 0..=m {
            for b in -m..=m {
                if a == 0 && b < 0 {
                    continue;
                }
                if a == 0 && b == 0 && zero_mean {
                    continue;
                }
                let w = 1.0 / (1.0 + (a * a + b * b) as f64);
                let c = self.rng.random_range(-1.0..1.0) * w;
                let s = self.rng.random_range(-1.0..1.0) * w;
                terms.push((a as f64, b as f64, c, s));
            }
        }
        let (lx, ly) = (grid.lx(), grid.ly());
        let f = ScalarField::from_fn(grid, |x, y| {
            terms
                .iter()
                .map(|&(a, b, c, s)| {
                    let ph = 2.0 * PI * (a * x / lx + b * y / ly);
                    c * ph.cos() + s * ph.sin()
                })
                .sum()
        });
        let scale = f.max_abs();
        if scale == 0.0 {
            f
        } else {
            &f * (amplitude / scale)
        }
    }

    /// Field whose x-mean vanishes on every row: the x-derivative of a smooth field.
    pub fn zero_x_mean_field(&mut self, grid: Grid2, amplitude: f64) -> ScalarField {
        let f = crate::spectral::dx(&self.field(grid, 1.0, false));
        let scale = f.max_abs();
        &f * (amplitude / scale)
    }

    /// Matrix field with independent smooth real entries.
    pub fn real_matrix_field(&mut self, grid: Grid2, dim: usize, amplitude: f64) -> MatrixField {
        let entries: Vec<ScalarField> = (0..dim * dim).map(|_| self.field(grid, amplitude, false)).collect();
        MatrixField::from_index_fn(grid, |idx| {
            let mut m = Mat::zeros(dim);
            for r in 0..dim {
                for c in 0..dim {
                    m.set(r, c, entries[r * dim + c].data()[idx].into());
                }
            }
            m
        })
    }

    /// Matrix field with independent smooth complex entries.
    pub fn complex_matrix_field(&mut self, grid: Grid2, dim: usize, amplitude: f64) -> MatrixField {
        let re = self.real_matrix_field(grid, dim, amplitude);
        let im = self.real_matrix_field(grid, dim, amplitude);
        re.zip_map(&im, |a, b| a + b * num_complex::Complex64::i())
    }
}

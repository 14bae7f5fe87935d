//! Fourier-spectral differentiation, the zero-mean inverse x-derivative and
//! band-limited interpolation.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Sample, ScalarField};
use crate::grid::{Axis, Grid2};

type Plan = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, Plan>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> Plan {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry(n)
            .or_insert_with(|| (planner.plan_fft_forward(n), planner.plan_fft_inverse(n)))
            .clone()
    })
}

/// Applies a diagonal Fourier multiplier along one axis, line by line, to
/// every scalar channel of the field. `symbol(m)` is evaluated per FFT bin.
pub fn apply_multiplier<T: Sample>(f: &Field<T>, axis: Axis, symbol: impl Fn(usize) -> Complex64) -> Field<T> {
    let grid = *f.grid();
    let n = grid.count(axis);
    let (fwd, inv) = plans(n);
    let weights: Vec<Complex64> = (0..n).map(|m| symbol(m) / n as f64).collect();
    let channels = f.data()[0].entry_count();
    let lines = grid.len() / n;
    let (stride, line_step) = match axis {
        Axis::X => (1, grid.nx()),
        Axis::Y => (grid.nx(), 1),
    };
    let mut out = f.clone();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..channels {
        for line in 0..lines {
            let base = line * line_step;
            for (k, b) in buf.iter_mut().enumerate() {
                *b = f.data()[base + k * stride].component(c);
            }
            fwd.process(&mut buf);
            for (b, w) in buf.iter_mut().zip(&weights) {
                *b *= *w;
            }
            inv.process(&mut buf);
            let data = out.data_mut();
            for (k, b) in buf.iter().enumerate() {
                data[base + k * stride].set_component(c, *b);
            }
        }
    }
    out
}

/// Fourier symbol of `d^order / d axis^order` at bin `m`. The Nyquist bin is
/// dropped for odd orders so that real data stays real.
pub fn derivative_symbol(grid: &Grid2, axis: Axis, order: u32, m: usize) -> Complex64 {
    let n = grid.count(axis);
    if m == n / 2 && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, grid.wavenumber(axis, m)).powu(order)
}

/// Spectral derivative of the given order along `axis`.
pub fn deriv<T: Sample>(f: &Field<T>, axis: Axis, order: u32) -> Result<Field<T>> {
    if order == 0 {
        return Err(Error::Argument("derivative order must be positive".into()));
    }
    let grid = *f.grid();
    Ok(apply_multiplier(f, axis, |m| derivative_symbol(&grid, axis, order, m)))
}

/// First derivative; infallible shorthand used throughout the residual code.
pub fn d<T: Sample>(f: &Field<T>, axis: Axis) -> Field<T> {
    let grid = *f.grid();
    apply_multiplier(f, axis, |m| derivative_symbol(&grid, axis, 1, m))
}

pub fn dx<T: Sample>(f: &Field<T>) -> Field<T> {
    d(f, Axis::X)
}

pub fn dy<T: Sample>(f: &Field<T>) -> Field<T> {
    d(f, Axis::Y)
}

pub fn dxx<T: Sample>(f: &Field<T>) -> Field<T> {
    let grid = *f.grid();
    apply_multiplier(f, Axis::X, |m| derivative_symbol(&grid, Axis::X, 2, m))
}

pub fn dyy<T: Sample>(f: &Field<T>) -> Field<T> {
    let grid = *f.grid();
    apply_multiplier(f, Axis::Y, |m| derivative_symbol(&grid, Axis::Y, 2, m))
}

/// Verifies that every row has vanishing x-mean relative to the field scale.
pub fn check_zero_x_mean<T: Sample>(f: &Field<T>) -> Result<()> {
    let grid = f.grid();
    let scale = f.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    let channels = f.data()[0].entry_count();
    for j in 0..grid.ny() {
        for c in 0..channels {
            let sum: Complex64 = (0..grid.nx()).map(|i| f.at(i, j).component(c)).sum();
            let mean = sum.norm() / grid.nx() as f64;
            if mean >= 1e-10 * scale && mean >= 1e-14 {
                return Err(Error::NonZeroMean { row: j, mean, scale });
            }
        }
    }
    Ok(())
}

/// The zero-x-mean antiderivative along x (symbol `1/(i k_x)`, zero mode 0).
pub fn inv_deriv_x<T: Sample>(f: &Field<T>) -> Result<Field<T>> {
    check_zero_x_mean(f)?;
    Ok(inv_deriv_x_unchecked(f))
}

/// As [`inv_deriv_x`] but silently discards the x-mean of each row.
pub fn inv_deriv_x_unchecked<T: Sample>(f: &Field<T>) -> Field<T> {
    let grid = *f.grid();
    let n = grid.nx();
    apply_multiplier(f, Axis::X, |m| {
        if m == 0 || m == n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / grid.wavenumber(Axis::X, m))
        }
    })
}

/// Band-limited interpolation of one periodic line onto `factor` times as
/// many equispaced points (zero padding with the Nyquist bin split).
pub fn upsample_line(values: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = values.len();
    if factor == 1 {
        return values.to_vec();
    }
    let (fwd, _) = plans(n);
    let big = n * factor;
    let (_, inv) = plans(big);
    let mut spec = values.to_vec();
    fwd.process(&mut spec);
    let mut padded = vec![Complex64::new(0.0, 0.0); big];
    let half = n / 2;
    for m in 0..half {
        padded[m] = spec[m];
    }
    for m in half + 1..n {
        padded[big - n + m] = spec[m];
    }
    padded[half] = spec[half] * 0.5;
    padded[big - half] = spec[half] * 0.5;
    inv.process(&mut padded);
    for v in padded.iter_mut() {
        *v /= n as f64;
    }
    padded
}

/// Full 2-D transform helper used by the time integrators.
pub struct Fft2 {
    grid: Grid2,
    fx: Plan,
    fy: Plan,
    col: RefCell<Vec<Complex64>>,
}

impl Fft2 {
    pub fn new(grid: Grid2) -> Self {
        Self { grid, fx: plans(grid.nx()), fy: plans(grid.ny()), col: RefCell::new(vec![Complex64::new(0.0, 0.0); grid.ny()]) }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    fn columns(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut col = self.col.borrow_mut();
        for i in 0..nx {
            for j in 0..ny {
                col[j] = data[j * nx + i];
            }
            plan.process(&mut col);
            for j in 0..ny {
                data[j * nx + i] = col[j];
            }
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.fx.0.process(data);
        self.columns(data, &self.fy.0);
    }

    /// Inverse transform including the `1/(nx ny)` normalisation.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.fx.1.process(data);
        self.columns(data, &self.fy.1);
        let s = 1.0 / self.grid.len() as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Wavenumber pair of spectral index `idx`.
    pub fn k(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.grid.coords(idx);
        (self.grid.wavenumber(Axis::X, i), self.grid.wavenumber(Axis::Y, j))
    }

    /// 2/3-rule mask: true for retained modes.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let (nx, ny) = (self.grid.nx() as i64, self.grid.ny() as i64);
        (0..self.grid.len())
            .map(|idx| {
                let (i, j) = self.grid.coords(idx);
                let si = if (i as i64) <= nx / 2 { i as i64 } else { i as i64 - nx };
                let sj = if (j as i64) <= ny / 2 { j as i64 } else { j as i64 - ny };
                3 * si.abs() < nx && 3 * sj.abs() < ny
            })
            .collect()
    }
}

/// Per-row x-means broadcast over the grid.
pub fn row_means(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let means: Vec<f64> = (0..g.ny()).map(|j| (0..g.nx()).map(|i| f.at(i, j)).sum::<f64>() / g.nx() as f64).collect();
    ScalarField::from_index_fn(g, |idx| means[g.coords(idx).1])
}

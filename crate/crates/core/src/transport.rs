//! Classical RK4 transport of linear systems `Y' = M Y` along grid lines.
//!
//! Coefficients are known only at grid samples. Along a periodic spatial
//! line the intermediate RK4 stages read trigonometric interpolants
//! (Fourier upsampling), so the step error is that of RK4 alone. Along time
//! the coefficients come from a [`TimeStack`] through its 5-point Lagrange
//! interpolation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::MatrixField;
use crate::grid::Axis;
use crate::mat::Mat;
use crate::spectral::upsample_line;
use crate::stack::TimeStack;

/// Optional pointwise projection applied after every step.
pub type Projector<'a> = &'a dyn Fn(Mat) -> Mat;

#[derive(Clone, Copy, Debug)]
pub struct TransportOptions {
    /// RK4 steps per grid cell.
    pub substeps: usize,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { substeps: 8 }
    }
}

fn rk4_step(y: Mat, h: f64, m0: Mat, mh: Mat, m1: Mat) -> Mat {
    let k1 = m0 * y;
    let k2 = mh * (y + k1 * (0.5 * h));
    let k3 = mh * (y + k2 * (0.5 * h));
    let k4 = m1 * (y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Trigonometric interpolation of a periodic line of matrices onto a grid
/// `factor` times finer.
fn upsample_mats(line: &[Mat], factor: usize) -> Vec<Mat> {
    let dim = line[0].dim();
    let n = line.len();
    let mut out = vec![Mat::zeros(dim); n * factor];
    for r in 0..dim {
        for c in 0..dim {
            let vals: Vec<Complex64> = line.iter().map(|m| m.get(r, c)).collect();
            for (o, v) in out.iter_mut().zip(upsample_line(&vals, factor)) {
                o.set(r, c, v);
            }
        }
    }
    out
}

/// Solves `Y' = M Y` along a periodic line sampled at spacing `h`, starting
/// from `y0` at sample 0. Returns `Y` at every sample (not wrapped around).
pub fn transport_line(line: &[Mat], h: f64, y0: Mat, opts: TransportOptions, project: Option<Projector<'_>>) -> Vec<Mat> {
    let sub = opts.substeps.max(1);
    let fine = upsample_mats(line, 2 * sub);
    let hs = h / sub as f64;
    let n = line.len();
    let mut out = Vec::with_capacity(n);
    let mut y = y0;
    out.push(y);
    for cell in 0..n - 1 {
        for s in 0..sub {
            let base = 2 * (cell * sub + s);
            y = rk4_step(y, hs, fine[base], fine[base + 1], fine[base + 2]);
            if let Some(p) = project {
                y = p(y);
            }
        }
        out.push(y);
    }
    out
}

fn line_of(field: &MatrixField, axis: Axis, fixed: usize) -> Vec<Mat> {
    let g = field.grid();
    match axis {
        Axis::X => (0..g.nx()).map(|i| field.data()[g.index(i, fixed)]).collect(),
        Axis::Y => (0..g.ny()).map(|j| field.data()[g.index(fixed, j)]).collect(),
    }
}

/// Transports `y0` from grid point `(0, 0)`: first along x on row 0 with
/// `mx`, then along y on every column with `my`. When `mx`, `my` satisfy the
/// zero-curvature condition the result is path independent.
pub fn transport_grid(
    mx: &MatrixField,
    my: &MatrixField,
    y0: Mat,
    opts: TransportOptions,
    project: Option<Projector<'_>>,
) -> Result<MatrixField> {
    mx.check_compatible(my)?;
    if y0.dim() != mx.dim() {
        return Err(Error::ShapeMismatch(format!("initial value of dim {} for coefficients of dim {}", y0.dim(), mx.dim())));
    }
    let grid = *mx.grid();
    let base = transport_line(&line_of(mx, Axis::X, 0), grid.dx(), y0, opts, project);
    let mut out = MatrixField::zeros(grid, mx.dim());
    for (i, start) in base.into_iter().enumerate() {
        let col = transport_line(&line_of(my, Axis::Y, i), grid.dy(), start, opts, project);
        for (j, v) in col.into_iter().enumerate() {
            out.data_mut()[grid.index(i, j)] = v;
        }
    }
    Ok(out)
}

/// Carries a field of solutions `y0` through the time stack of coefficients
/// `mt`, pointwise. Returns one field per stack slice.
pub fn transport_time(y0: &MatrixField, mt: &TimeStack<Mat>, opts: TransportOptions) -> Result<Vec<MatrixField>> {
    y0.check_compatible(&mt.slices()[0])?;
    let sub = opts.substeps.max(1);
    let hs = mt.dt() / sub as f64;
    let mut out = vec![y0.clone()];
    let mut y = y0.clone();
    let mut prev = mt.slice(0).clone();
    for step in 0..mt.len() - 1 {
        for s in 0..sub {
            let t = mt.time(step) + s as f64 * hs;
            let mid = mt.interpolate(t + 0.5 * hs)?;
            let end = if s + 1 == sub { mt.slice(step + 1).clone() } else { mt.interpolate(t + hs)? };
            let next: Vec<Mat> = (0..y.data().len())
                .map(|idx| rk4_step(y.data()[idx], hs, prev.data()[idx], mid.data()[idx], end.data()[idx]))
                .collect();
            y = MatrixField::from_vec(*y.grid(), next)?;
            prev = end;
        }
        out.push(y.clone());
    }
    Ok(out)
}

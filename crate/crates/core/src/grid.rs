use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spatial axis of a [`Grid2`]. For (1+1) data the second axis carries `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// Uniform periodic rectangular lattice, `x_i = i * lx / nx`, `y_j = j * ly / ny`.
///
/// Samples are stored row-major with x fastest: index `j * nx + i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2 {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::Argument(format!("{name} = {n}: need an even count >= 8")));
            }
        }
        if !(lx > 0.0 && lx.is_finite() && ly > 0.0 && ly.is_finite()) {
            return Err(Error::Argument(format!("periods must be positive, got ({lx}, {ly})")));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// Square grid of side `2 pi`.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn count(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
        }
    }

    pub fn period(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.lx,
            Axis::Y => self.ly,
        }
    }

    /// Angular wavenumber of FFT bin `m` along `axis` (standard FFT ordering).
    pub fn wavenumber(&self, axis: Axis, m: usize) -> f64 {
        let n = self.count(axis);
        let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
        2.0 * PI * signed / self.period(axis)
    }

    pub fn same_shape(&self, other: &Grid2) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }

    pub fn check_same(&self, other: &Grid2) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("grid {self:?} vs {other:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_counts() {
        assert!(Grid2::new(7, 8, 1.0, 1.0).is_err());
        assert!(Grid2::new(6, 8, 1.0, 1.0).is_err());
        assert!(Grid2::new(8, 9, 1.0, 1.0).is_err());
        assert!(Grid2::new(8, 8, 0.0, 1.0).is_err());
        assert!(Grid2::new(8, 8, 1.0, f64::NAN).is_err());
        assert!(Grid2::new(8, 8, 1.0, 1.0).is_ok());
    }

    #[test]
    fn wavenumbers_follow_fft_order() {
        let g = Grid2::new(8, 8, 2.0 * PI, 4.0 * PI).unwrap();
        let kx: Vec<f64> = (0..8).map(|m| g.wavenumber(Axis::X, m)).collect();
        assert_eq!(kx, vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.wavenumber(Axis::Y, 1), 0.5);
    }

    #[test]
    fn index_round_trip() {
        let g = Grid2::new(8, 10, 1.0, 1.0).unwrap();
        for idx in 0..g.len() {
            let (i, j) = g.coords(idx);
            assert_eq!(g.index(i, j), idx);
        }
    }
}

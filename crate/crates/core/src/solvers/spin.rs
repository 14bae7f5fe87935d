//! Heisenberg ferromagnet `S_t = S x S_xx` along x, integrated row by row
//! with spectral derivatives, classical Runge-Kutta and projection back to
//! the unit sphere after every step.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::reductions::ishimori::unit_defect;
use crate::solvers::etd::Spectral;
use crate::solvers::SolveConfig;
use crate::stack::TimeStack;
use crate::tolerance::UNIT;

/// Largest admissible `dt * k_max^2` (RK4 reaches 2.83 on the imaginary axis).
const STABILITY: f64 = 2.5;

/// Spin stacks with run diagnostics.
#[derive(Clone, Debug)]
pub struct SpinSolution {
    pub s: [TimeStack<f64>; 3],
    pub diagnostics: Vec<(String, f64)>,
}

impl SpinSolution {
    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

type Spin = [Vec<f64>; 3];

fn rhs(sp: &Spectral, s: &Spin) -> Spin {
    let sxx: Spin = std::array::from_fn(|c| {
        let mut v = sp.forward_real(&s[c]);
        for (i, z) in v.iter_mut().enumerate() {
            *z *= -sp.kx[i] * sp.kx[i];
        }
        sp.truncate(&mut v);
        sp.inverse_real(&v)
    });
    let n = s[0].len();
    let mut out: Spin = std::array::from_fn(|_| vec![0.0; n]);
    for i in 0..n {
        out[0][i] = s[1][i] * sxx[2][i] - s[2][i] * sxx[1][i];
        out[1][i] = s[2][i] * sxx[0][i] - s[0][i] * sxx[2][i];
        out[2][i] = s[0][i] * sxx[1][i] - s[1][i] * sxx[0][i];
    }
    out
}

fn shifted(s: &Spin, k: &Spin, h: f64) -> Spin {
    std::array::from_fn(|c| s[c].iter().zip(&k[c]).map(|(a, b)| a + h * b).collect())
}

fn rk4(sp: &Spectral, s: &Spin, h: f64) -> Spin {
    let k1 = rhs(sp, s);
    let k2 = rhs(sp, &shifted(s, &k1, h / 2.0));
    let k3 = rhs(sp, &shifted(s, &k2, h / 2.0));
    let k4 = rhs(sp, &shifted(s, &k3, h));
    std::array::from_fn(|c| (0..s[c].len()).map(|i| s[c][i] + h / 6.0 * (k1[c][i] + 2.0 * (k2[c][i] + k3[c][i]) + k4[c][i])).collect())
}

/// Normalizes in place and returns the largest `| |S| - 1 |` seen before.
fn project(s: &mut Spin) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..s[0].len() {
        let n = (s[0][i] * s[0][i] + s[1][i] * s[1][i] + s[2][i] * s[2][i]).sqrt();
        worst = worst.max((n - 1.0).abs());
        for c in s.iter_mut() {
            c[i] /= n;
        }
    }
    worst
}

pub fn solve_heisenberg1d(s0: &[ScalarField; 3], cfg: &SolveConfig) -> Result<SpinSolution> {
    cfg.validate()?;
    for c in s0 {
        cfg.grid.check_same(c.grid())?;
    }
    let mut s: Spin = std::array::from_fn(|c| s0[c].data().to_vec());
    let initial: f64 = (0..s[0].len())
        .map(|i| ((s[0][i] * s[0][i] + s[1][i] * s[1][i] + s[2][i] * s[2][i]).sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    if !(initial <= UNIT) {
        return Err(Error::NonUnitSpin(initial));
    }
    let sp = Spectral::new(cfg.grid, cfg.dealias);
    let kmax = sp.kx.iter().zip(&sp.mask).filter(|(_, &m)| m || !cfg.dealias).map(|(k, _)| k.abs()).fold(0.0, f64::max);
    if cfg.dt * kmax * kmax > STABILITY {
        return Err(Error::Argument(format!("dt * k_max^2 = {:.3} exceeds {STABILITY}", cfg.dt * kmax * kmax)));
    }
    let mut drift = 0.0f64;
    let mut slices: [Vec<ScalarField>; 3] = std::array::from_fn(|c| vec![s0[c].clone()]);
    for step in 1..=cfg.steps() {
        s = rk4(&sp, &s, cfg.dt);
        drift = drift.max(project(&mut s));
        if !s.iter().all(|c| c.iter().all(|x| x.is_finite())) {
            return Err(Error::BlowUp { t: step as f64 * cfg.dt, linf: f64::INFINITY });
        }
        if step % cfg.save_every == 0 {
            for c in 0..3 {
                slices[c].push(ScalarField::from_vec(cfg.grid, s[c].clone())?);
            }
        }
    }
    let h = cfg.dt * cfg.save_every as f64;
    let [a, b, c] = slices;
    let out = [TimeStack::new(0.0, h, a)?, TimeStack::new(0.0, h, b)?, TimeStack::new(0.0, h, c)?];
    let defect = unit_defect(&out);
    Ok(SpinSolution { s: out, diagnostics: vec![("unit_drift_before_projection".into(), drift), ("unit_defect".into(), defect)] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use crate::reductions::ishimori::{ishimori_residual, spin_wave, SpinField2p1};
    use crate::solvers::Scheme;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cfg(g: Grid2, t: f64, dt: f64) -> SolveConfig {
        SolveConfig::new(g, t, dt, Scheme::Rk4If).unwrap()
    }

    #[test]
    fn constant_spin_is_stationary() {
        let g = Grid2::square(16).unwrap();
        let s0 = [ScalarField::filled(g, 0.6), ScalarField::filled(g, 0.0), ScalarField::filled(g, 0.8)];
        let out = solve_heisenberg1d(&s0, &cfg(g, 0.05, 0.01)).unwrap();
        assert!((out.s[2].last() - &s0[2]).max_abs() < 1e-14);
    }

    #[test]
    fn spin_wave_and_residual() {
        let g = Grid2::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let out = solve_heisenberg1d(&spin_wave(g, 0.7, 2.0, 0.0), &cfg(g, 0.5, 1e-3).with_save_every(10).unwrap()).unwrap();
        let exact = spin_wave(g, 0.7, 2.0, 0.5);
        for c in 0..3 {
            assert!((out.s[c].last() - &exact[c]).max_abs() < 1e-8);
        }
        let u = TimeStack::constant(ScalarField::zeros(g), out.s[0].len(), out.s[0].dt());
        let sf = SpinField2p1::new(out.s.clone(), u, Complex64::new(1.0, 0.0)).unwrap();
        let r = ishimori_residual(&sf).unwrap();
        assert!(r[0].linf < 1e-5 && r[1].linf < 1e-10, "{r:?}");
        assert!(out.diagnostic("unit_defect").unwrap() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Grid2::square(16).unwrap();
        let s0 = [ScalarField::filled(g, 1.0), ScalarField::filled(g, 0.5), ScalarField::zeros(g)];
        assert!(matches!(solve_heisenberg1d(&s0, &cfg(g, 0.05, 0.01)), Err(Error::NonUnitSpin(_))));
        let s0 = spin_wave(g, 0.5, 1.0, 0.0);
        assert!(solve_heisenberg1d(&s0, &cfg(g, 5.0, 1.0)).is_err());
    }
}

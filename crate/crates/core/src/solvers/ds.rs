//! Split-step integrator for the elliptic (`alpha^2 = -1`) Schrodinger-type
//! system with `p = conj(q)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::reductions::ds::{ds_potential, DSStack};
use crate::solvers::etd::Spectral;
use crate::solvers::{Scheme, SolutionStack, SolveConfig};
use crate::stack::TimeStack;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Potential `v` from `|q|^2`: `v^ = 2 (k_y^2 - k_x^2) w^ / (k_x^2 + k_y^2)`.
fn potential(sp: &Spectral, q: &[Complex64]) -> Vec<f64> {
    let w: Vec<Complex64> = q.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    let mut w = sp.forward(w);
    for (i, c) in w.iter_mut().enumerate() {
        let (kx2, ky2) = (sp.kx[i] * sp.kx[i], sp.ky[i] * sp.ky[i]);
        *c = if kx2 + ky2 == 0.0 { Complex64::new(0.0, 0.0) } else { *c * 2.0 * (ky2 - kx2) / (kx2 + ky2) };
    }
    sp.truncate(&mut w);
    sp.inverse_real(&w)
}

fn linear(sp: &Spectral, q: &mut Vec<Complex64>, h: f64) {
    let mut v = sp.forward(std::mem::take(q));
    for (i, c) in v.iter_mut().enumerate() {
        *c *= (I * (sp.ky[i] * sp.ky[i] - sp.kx[i] * sp.kx[i]) * h).exp();
    }
    sp.truncate(&mut v);
    *q = sp.inverse(&v);
}

fn nonlinear(sp: &Spectral, q: &mut [Complex64], h: f64) {
    let v = potential(sp, q);
    for (z, vv) in q.iter_mut().zip(v) {
        *z *= (I * vv * h).exp();
    }
}

fn strang(sp: &Spectral, q: &mut Vec<Complex64>, h: f64) {
    linear(sp, q, h / 2.0);
    nonlinear(sp, q, h);
    linear(sp, q, h / 2.0);
}

/// Evolves `i q_t + q_xx - q_yy + v q = 0` with `v` from the elliptic
/// potential equation, by the fourth-order (triple-jump) composition of
/// Strang steps. Stored stacks hold `q`; use [`ds_stack`] for `(q, p, v)`.
pub fn solve_ds(q0: &ComplexField, cfg: &SolveConfig) -> Result<SolutionStack<Complex64>> {
    cfg.validate()?;
    if cfg.scheme != Scheme::SplitStep {
        return Err(Error::Argument("the Schrodinger-type system uses scheme = splitstep".into()));
    }
    cfg.grid.check_same(q0.grid())?;
    let sp = Spectral::new(cfg.grid, cfg.dealias);
    let cbrt2 = 2f64.cbrt();
    let w1 = 1.0 / (2.0 - cbrt2);
    let w0 = -cbrt2 / (2.0 - cbrt2);
    let mut q = q0.data().to_vec();
    let power = |z: &[Complex64]| z.iter().map(|c| c.norm_sqr()).sum::<f64>() / z.len() as f64;
    let p0 = power(&q);
    let mut drift = 0.0f64;
    let mut slices = vec![q0.clone()];
    for step in 1..=cfg.steps() {
        for w in [w1, w0, w1] {
            strang(&sp, &mut q, w * cfg.dt);
        }
        if step % cfg.save_every == 0 {
            let f = ComplexField::from_vec(cfg.grid, q.clone())?;
            let linf = f.max_abs();
            if !linf.is_finite() || linf > 1e6 {
                return Err(Error::BlowUp { t: step as f64 * cfg.dt, linf });
            }
            drift = drift.max((power(&q) - p0).abs());
            slices.push(f);
        }
    }
    let mut out = SolutionStack::new(0.0, cfg.dt * cfg.save_every as f64, slices)?;
    out.diagnostics.push(("power_drift".into(), drift * cfg.grid.lx() * cfg.grid.ly()));
    Ok(out)
}

/// `(q, conj(q), v)` over a solved stack, with `alpha = i`.
pub fn ds_stack(q: &TimeStack<Complex64>) -> Result<DSStack> {
    let alpha = I;
    let p = q.map(|f| f.conj());
    let v = q.map(|f| ds_potential(f, &f.conj(), alpha));
    DSStack::new(q.clone(), p, v, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use crate::reductions::ds::{ds_plane_wave, ds_residual};
    use crate::random::SmoothRng;
    use std::f64::consts::PI;

    #[test]
    fn zero_stays_zero() {
        let g = Grid2::square(16).unwrap();
        let cfg = SolveConfig::new(g, 0.05, 0.01, Scheme::SplitStep).unwrap();
        let s = solve_ds(&ComplexField::zeros(g), &cfg).unwrap();
        assert!(s.stack.slices().iter().all(|f| f.max_abs() == 0.0));
    }

    #[test]
    fn plane_wave_phase() {
        let g = Grid2::new(32, 32, 2.0 * PI, 4.0 * PI).unwrap();
        let alpha = Complex64::new(0.0, 1.0);
        let cfg = SolveConfig::new(g, 0.5, 0.01, Scheme::SplitStep).unwrap();
        let q0 = ds_plane_wave(g, 0.8, 2.0, 0.5, 0.0, alpha, 0.0).q;
        let s = solve_ds(&q0, &cfg).unwrap();
        let exact = ds_plane_wave(g, 0.8, 2.0, 0.5, 0.0, alpha, 0.5).q;
        assert!((s.stack.last() - &exact).max_abs() < 1e-5);
        assert!((s.stack.last().abs().max_abs() - 0.8).abs() < 1e-6);
    }

    #[test]
    fn evolved_data_has_small_residual() {
        let g = Grid2::square(32).unwrap();
        let mut rng = SmoothRng::new(21, 2);
        let q0 = ComplexField::from_index_fn(g, {
            let (a, b) = (rng.field(g, 0.5, false), rng.field(g, 0.5, false));
            move |i| Complex64::new(a.data()[i], b.data()[i])
        });
        let cfg = SolveConfig::new(g, 0.1, 0.002, Scheme::SplitStep).unwrap().with_save_every(5).unwrap();
        let s = solve_ds(&q0, &cfg).unwrap();
        let r = ds_residual(&ds_stack(&s.stack).unwrap()).unwrap();
        assert!(r.iter().all(|x| x.linf < 1e-4), "{r:?}");
        assert!(s.diagnostic("power_drift").unwrap() < 1e-6 * 0.1);
    }
}

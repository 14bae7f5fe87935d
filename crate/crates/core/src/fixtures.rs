//! Reference data shared by the command-line suites and the tests: exact
//! solutions sampled onto stacks, random smooth inputs, and the
//! perturbations used to show that each residual detects a wrong field.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Result;
use crate::field::{ComplexField, MatrixField, ScalarField};
use crate::grid::Grid2;
use crate::mat::Mat;
use crate::mmlxii::{frame_basis, gauge_generated_triple, Triple};
use crate::random::SmoothRng;
use crate::reductions::ds::{ds_plane_wave, DSInputs, DSStack};
use crate::reductions::kp::kdv_soliton;
use crate::sdym::Connection4;
use crate::stack::TimeStack;

/// `m3 + fraction * max(|m3|, |k|) cos(2 pi x / L_x) cos(2 pi y / L_y)`.
/// The added mode has `y` dependence and nonzero `x` derivative, so it
/// shows up in every equation that involves `m3`.
pub fn perturb_m3(m3: &ScalarField, k: &ScalarField, fraction: f64) -> ScalarField {
    let g = *m3.grid();
    let s = fraction * m3.max_abs().max(k.max_abs());
    let (lx, ly) = (g.lx(), g.ly());
    m3 + &ScalarField::from_fn(g, |x, y| s * (2.0 * PI * x / lx).cos() * (2.0 * PI * y / ly).cos())
}

pub fn perturb_m3_stack(m3: &TimeStack<f64>, k: &TimeStack<f64>, fraction: f64) -> Result<TimeStack<f64>> {
    let slices = (0..m3.len()).map(|i| perturb_m3(m3.slice(i), k.slice(i), fraction)).collect();
    TimeStack::new(m3.t0(), m3.dt(), slices)
}

fn bump_mode(g: Grid2) -> ScalarField {
    let (lx, ly) = (g.lx(), g.ly());
    ScalarField::from_fn(g, |x, y| (2.0 * PI * x / lx).cos() * (2.0 * PI * y / ly).cos())
}

/// Adds `fraction * max(1, max |s|) * cos(2 pi x / L_x) cos(2 pi y / L_y) E`
/// to every slice, with the direction `E` scaled to unit largest entry.
pub fn perturb_matrix_stack(s: &TimeStack<Mat>, direction: &Mat, fraction: f64) -> TimeStack<Mat> {
    let scale = s.slices().iter().map(|f| f.max_abs()).fold(1.0, f64::max);
    let e = direction.clone() * (fraction * scale / direction.max_abs());
    let mode = bump_mode(*s.slice(0).grid());
    s.map(|f| f.zip_map(&mode, |m, v| m + e.clone() * v))
}

/// Complex analogue of [`perturb_m3`] with the stack's own scale.
pub fn perturb_complex_stack(s: &TimeStack<Complex64>, fraction: f64) -> TimeStack<Complex64> {
    let scale = fraction * s.slices().iter().map(|f| f.max_abs()).fold(0.0, f64::max);
    let mode = bump_mode(*s.slice(0).grid());
    s.map(|f| f.zip_map(&mode, |a, m| a + scale * m))
}

/// Random smooth matrix stacks `P + Q sin t` (no compatibility).
pub fn random_matrix_triple(grid: Grid2, dim: usize, seed: u64) -> Result<Triple> {
    let mut rng = SmoothRng::new(seed, 2);
    let mut st = || {
        let a = rng.real_matrix_field(grid, dim, 1.0);
        let b = rng.real_matrix_field(grid, dim, 1.0);
        TimeStack::sample(0.0, 0.05, 5, |t| &a + &(&b * t.sin()))
    };
    Triple::new(st()?, st()?, st()?)
}

/// Flat triple from `F = exp(f1 X1) exp(f2 X2) exp(f3 X3)` with
/// `f_j = u_j + w_j sin t` for random smooth `u_j, w_j`.
pub fn gauge_triple(grid: Grid2, basis: [Mat; 3], seed: u64, dt: f64, n: usize) -> Result<Triple> {
    let mut rng = SmoothRng::new(seed, 2);
    let base: Vec<ScalarField> = (0..3).map(|_| rng.field(grid, 0.4, false)).collect();
    let rate: Vec<ScalarField> = (0..3).map(|_| rng.field(grid, 0.4, false)).collect();
    let f = |t: f64| -> [ScalarField; 3] { std::array::from_fn(|j| &base[j] + &(&rate[j] * t.sin())) };
    let ft = |t: f64| -> [ScalarField; 3] { std::array::from_fn(|j| &rate[j] * t.cos()) };
    gauge_generated_triple(basis, f, ft, 0.0, dt, n)
}

/// Source triple and orthogonal gauge for the constant-length spin
/// construction: the source comes from a frame `F(x, y, t)` and the gauge
/// is `E = G(y, t) exp(a x X1) F^{-1}`, so the conjugated `A'` is
/// `a G X1 G^{-1}`.
#[derive(Clone, Debug)]
pub struct M0Fixture {
    pub source: Triple,
    pub gauge: TimeStack<Mat>,
    pub a: f64,
}

fn rotation_exponents(grid: Grid2, x_dependent: bool) -> (impl Fn(f64) -> [ScalarField; 3], impl Fn(f64) -> [ScalarField; 3]) {
    let f = move |t: f64| {
        [
            ScalarField::from_fn(grid, move |x, y| 0.4 * (y + t).sin() + if x_dependent { 0.2 * x.cos() } else { 0.0 }),
            ScalarField::from_fn(grid, move |_, y| 0.3 * (2.0 * y - t).cos()),
            ScalarField::from_fn(grid, move |_, y| 0.5 * t + 0.2 * y.sin()),
        ]
    };
    let ft = move |t: f64| {
        [
            ScalarField::from_fn(grid, move |_, y| 0.4 * (y + t).cos()),
            ScalarField::from_fn(grid, move |_, y| 0.3 * (2.0 * y - t).sin()),
            ScalarField::filled(grid, 0.5),
        ]
    };
    (f, ft)
}

fn frames_of(grid: Grid2, basis: [Mat; 3], f: &dyn Fn(f64) -> [ScalarField; 3], dt: f64, n: usize) -> Result<TimeStack<Mat>> {
    TimeStack::sample(0.0, dt, n, |t| {
        let e = f(t);
        MatrixField::from_index_fn(grid, |i| (basis[0] * e[0].data()[i]).exp() * (basis[1] * e[1].data()[i]).exp() * (basis[2] * e[2].data()[i]).exp())
    })
}

pub fn m0_fixture(grid: Grid2, a: f64, dt: f64, n: usize) -> Result<M0Fixture> {
    let basis = frame_basis(1.0);
    let (f, ft) = rotation_exponents(grid, true);
    let source = gauge_generated_triple(basis, &f, &ft, 0.0, dt, n)?;
    let frames = frames_of(grid, basis, &f, dt, n)?;
    let (g, _) = rotation_exponents(grid, false);
    let rot = frames_of(grid, basis, &g, dt, n)?;
    let turn = MatrixField::from_fn(grid, |x, _| (basis[0] * (a * x)).exp());
    let slices = (0..n)
        .map(|i| rot.slice(i).matmul(&turn)?.matmul(&frames.slice(i).inverse()?))
        .collect::<Result<Vec<_>>>()?;
    Ok(M0Fixture { source, gauge: TimeStack::new(0.0, dt, slices)?, a })
}

/// Smooth invertible gauge `exp(P + Q sin t)` with random complex `2x2` `P, Q`.
pub fn smooth_gauge(grid: Grid2, seed: u64, n: usize, dt: f64) -> Result<TimeStack<Mat>> {
    let mut rng = SmoothRng::new(seed, 2);
    let a = rng.complex_matrix_field(grid, 2, 0.5);
    let b = rng.complex_matrix_field(grid, 2, 0.5);
    TimeStack::sample(0.0, dt, n, |t| (&a + &(&b * t.sin())).map(|m| m.exp()))
}

/// Random smooth `2x2` connection (not self-dual).
pub fn random_connection(grid: Grid2, seed: u64, n: usize, dt: f64) -> Result<Connection4> {
    let mut rng = SmoothRng::new(seed, 2);
    let mut st = || {
        let a = rng.complex_matrix_field(grid, 2, 0.5);
        let b = rng.complex_matrix_field(grid, 2, 0.5);
        TimeStack::sample(0.0, dt, n, |t| &a + &(&b * (1.0 + t).cos()))
    };
    Connection4::new(st()?, st()?, st()?, st()?)
}

/// KdV soliton sampled at `n` times.
pub fn kdv_stack(grid: Grid2, kappa: f64, x0: f64, dt: f64, n: usize) -> Result<TimeStack<f64>> {
    TimeStack::sample(0.0, dt, n, |t| kdv_soliton(grid, kappa, x0, t))
}

/// Bound state `sech(x - x0 - 4t) e^{iy}` of the unit soliton's linear
/// problem with `alpha = i`.
pub fn kdv_bound_state(grid: Grid2, x0: f64, dt: f64, n: usize) -> Result<TimeStack<Complex64>> {
    TimeStack::sample(0.0, dt, n, |t| ComplexField::from_fn(grid, |x, y| Complex64::from_polar(1.0 / (x - x0 - 4.0 * t).cosh(), y)))
}

/// Plane-case data `k = m3 = A sin(x + y - c t)`, `omega3 = -c k`.
pub fn travelling_plane(grid: Grid2, amp: f64, c: f64, dt: f64, n: usize) -> Result<[TimeStack<f64>; 3]> {
    let k = TimeStack::sample(0.0, dt, n, |t| ScalarField::from_fn(grid, |x, y| amp * (x + y - c * t).sin()))?;
    let omega = k.map(|f| f * -c);
    Ok([k.clone(), k, omega])
}

/// Random coefficient fields for the Schrodinger-type construction, with
/// `k` kept away from zero.
#[derive(Clone, Debug)]
pub struct DsData {
    pub k: ScalarField,
    pub tau: ScalarField,
    pub m1: ScalarField,
    pub m2: ScalarField,
    pub m3: ScalarField,
}

impl DsData {
    pub fn random(grid: Grid2, seed: u64) -> Self {
        let mut rng = SmoothRng::new(seed, 3);
        let k = &rng.field(grid, 1.0, false) + &ScalarField::filled(grid, 2.0);
        let (tau, m1, m2, m3) = (rng.field(grid, 0.5, false), rng.field(grid, 0.5, false), rng.field(grid, 0.5, false), rng.field(grid, 0.5, false));
        Self { k, tau, m1, m2, m3 }
    }

    pub fn inputs(&self) -> DSInputs<'_> {
        DSInputs { k: &self.k, tau: &self.tau, m1: &self.m1, m2: &self.m2, m3: &self.m3 }
    }
}

/// Plane wave of the Schrodinger-type system sampled at `n` times.
pub fn ds_plane_wave_stack(grid: Grid2, amp: f64, kappa: f64, l: f64, v0: f64, alpha: Complex64, dt: f64, n: usize) -> Result<DSStack> {
    let slices: Vec<_> = (0..n).map(|i| ds_plane_wave(grid, amp, kappa, l, v0, alpha, i as f64 * dt)).collect();
    let st = |f: &dyn Fn(&crate::reductions::ds::DSFields) -> ComplexField| TimeStack::new(0.0, dt, slices.iter().map(f).collect());
    DSStack::new(st(&|s| s.q.clone())?, st(&|s| s.p.clone())?, st(&|s| s.v.clone())?, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmlxii::mmlxii_residual;
    use crate::reductions::spin::orthogonality_defect;

    #[test]
    fn perturbation_size() {
        let g = Grid2::square(16).unwrap();
        let k = ScalarField::filled(g, 2.0);
        let m3 = ScalarField::zeros(g);
        assert!(((&perturb_m3(&m3, &k, 0.1) - &m3).max_abs() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn m0_fixture_is_orthogonal_and_flat() {
        let g = Grid2::square(32).unwrap();
        let fx = m0_fixture(g, 2.0, 0.01, 5).unwrap();
        assert!(orthogonality_defect(&fx.gauge) < 1e-12);
        assert!(mmlxii_residual(&fx.source).unwrap().iter().all(|r| r.linf < 1e-5));
    }
}

//! Spin form of the (2+1) system with a scalar potential, and the
//! coefficients of the frame system produced by identifying the spin with
//! the first frame vector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, ScalarField};
use crate::grid::Axis;
use crate::residual::{residual_norm_slices, ResidualReport};
use crate::spectral::{d, dxx, dyy, inv_deriv_x};
use crate::stack::TimeStack;
use crate::tolerance::{K_FLOOR, UNIT};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Unit spin `S`, potential `u` and the complex constant `alpha` over a
/// time stack.
#[derive(Clone, Debug)]
pub struct SpinField2p1 {
    pub s: [TimeStack<f64>; 3],
    pub u: TimeStack<f64>,
    pub alpha: Complex64,
}

impl SpinField2p1 {
    pub fn new(s: [TimeStack<f64>; 3], u: TimeStack<f64>, alpha: Complex64) -> Result<Self> {
        s[0].check_aligned(&s[1])?;
        s[0].check_aligned(&s[2])?;
        s[0].check_aligned(&u)?;
        Ok(Self { s, u, alpha })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Largest `| |S| - 1 |` over all slices and points.
    pub fn unit_defect(&self) -> f64 {
        unit_defect(&self.s)
    }
}

pub fn unit_defect(s: &[TimeStack<f64>; 3]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..s[0].len() {
        let (a, b, c) = (s[0].slice(i).data(), s[1].slice(i).data(), s[2].slice(i).data());
        for p in 0..a.len() {
            worst = worst.max(((a[p] * a[p] + b[p] * b[p] + c[p] * c[p]).sqrt() - 1.0).abs());
        }
    }
    worst
}

type Vec3 = [ComplexField; 3];

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn dot(a: &Vec3, b: &Vec3) -> ComplexField {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// Residual fields of
/// `S_t - S x (S_xx + alpha^2 S_yy) - u_x S_y - u_y S_x` (three components)
/// and `u_xx - alpha^2 u_yy + 2 alpha^2 S . (S_x x S_y)` at slice `i`.
pub fn ishimori_fields_at(sf: &SpinField2p1, i: usize) -> Result<(Vec3, ComplexField)> {
    let a2 = sf.alpha * sf.alpha;
    let s: Vec3 = std::array::from_fn(|c| sf.s[c].slice(i).to_complex());
    let st: Vec<ComplexField> = (0..3).map(|c| sf.s[c].time_derivative(i).map(|f| f.to_complex())).collect::<Result<_>>()?;
    let sx: Vec3 = std::array::from_fn(|c| d(&s[c], Axis::X));
    let sy: Vec3 = std::array::from_fn(|c| d(&s[c], Axis::Y));
    let lap: Vec3 = std::array::from_fn(|c| &dxx(&s[c]) + &dyy(&s[c]).scale(a2));
    let u = sf.u.slice(i).to_complex();
    let (ux, uy) = (d(&u, Axis::X), d(&u, Axis::Y));
    let rot = cross(&s, &lap);
    let first: Vec3 = std::array::from_fn(|c| &(&(&st[c] - &rot[c]) - &(&ux * &sy[c])) - &(&uy * &sx[c]));
    let second = &(&dxx(&u) - &dyy(&u).scale(a2)) + &dot(&s, &cross(&sx, &sy)).scale(2.0 * a2);
    Ok((first, second))
}

/// Residuals of the spin equation and of the potential equation over all slices.
pub fn ishimori_residual(sf: &SpinField2p1) -> Result<[ResidualReport; 2]> {
    let defect = sf.unit_defect();
    if defect > UNIT {
        return Err(Error::NonUnitSpin(defect));
    }
    sf.u.require_derivative("S_t")?;
    let mut first = Vec::new();
    let mut second = Vec::new();
    for i in 0..sf.len() {
        let (a, b) = ishimori_fields_at(sf, i)?;
        first.extend(a);
        second.push(b);
    }
    Ok([residual_norm_slices(&first, "spin equation S_t - S x (S_xx + a^2 S_yy) - u_x S_y - u_y S_x"), residual_norm_slices(&second, "potential equation u_xx - a^2 u_yy + 2 a^2 S.(S_x x S_y)")])
}

/// `m_1..3` and `omega_1..3` of the frame system generated by the spin form.
#[derive(Clone, Debug)]
pub struct IshimoriCoefficients {
    pub m: [ComplexField; 3],
    pub omega: [ComplexField; 3],
}

/// `u_xx - alpha^2 u_yy`.
pub fn potential_operator(u: &ScalarField, alpha: Complex64) -> ComplexField {
    let u = u.to_complex();
    &dxx(&u) - &dyy(&u).scale(alpha * alpha)
}

pub(crate) fn check_k_floor(k: &ScalarField) -> Result<()> {
    let g = k.grid();
    for (idx, v) in k.data().iter().enumerate() {
        if v.abs() <= K_FLOOR {
            let (i, j) = g.coords(idx);
            return Err(Error::DivisionBySmallK { i, j, value: v.abs() });
        }
    }
    Ok(())
}

/// Frame coefficients for spin data at one time:
/// `m1 = dx^{-1}[tau_y - beta/(2 a^2) M u]`, `m2 = -M u / (2 a^2 k)`,
/// `m3 = dx^{-1}[k_y + tau M u / (2 a^2 k)]`, and
/// `omega2 = -k_x - a^2 (m3_y + m2 m1) + i m2 u_x`,
/// `omega3 = -k tau + a^2 (m2_y - m3 m1) + i k u_y + i m3 u_x`,
/// `omega1 = (-omega2_x + tau omega3) / k`, with `M u = u_xx - a^2 u_yy`.
pub fn ishimori_coefficients(k: &ScalarField, tau: &ScalarField, u: &ScalarField, alpha: Complex64, beta: f64) -> Result<IshimoriCoefficients> {
    k.check_same_grid(tau)?;
    k.check_same_grid(u)?;
    check_k_floor(k)?;
    let a2 = alpha * alpha;
    let mu = potential_operator(u, alpha);
    let kc = k.to_complex();
    let tc = tau.to_complex();
    let mu_over_k = mu.zip_map(&kc, |m, kv| m / (2.0 * a2 * kv));
    let m1 = inv_deriv_x(&(&d(&tc, Axis::Y) - &mu.scale(Complex64::from(beta) / (2.0 * a2))))?;
    let m2 = -&mu_over_k;
    let m3 = inv_deriv_x(&(&d(&kc, Axis::Y) + &(&tc * &mu_over_k)))?;
    let uc = u.to_complex();
    let (ux, uy) = (d(&uc, Axis::X), d(&uc, Axis::Y));
    let w2 = &(&(-&d(&kc, Axis::X)) - &(&d(&m3, Axis::Y) + &(&m2 * &m1)).scale(a2)) + &(&m2 * &ux).scale(I);
    let w3 = &(&(&(-&(&kc * &tc)) + &(&d(&m2, Axis::Y) - &(&m3 * &m1)).scale(a2)) + &(&kc * &uy).scale(I)) + &(&m3 * &ux).scale(I);
    let num = &(-&d(&w2, Axis::X)) + &(&tc * &w3);
    let w1 = num.zip_map(&kc, |a, b| a / b);
    Ok(IshimoriCoefficients { m: [m1, m2, m3], omega: [w1, w2, w3] })
}

/// Exact spin wave of the y-independent flow `S_t = S x S_xx`:
/// `S = (sin th0 cos phi, sin th0 sin phi, cos th0)`, `phi = kappa x - Omega t`,
/// `Omega = kappa^2 cos th0`.
pub fn spin_wave(grid: crate::grid::Grid2, theta0: f64, kappa: f64, t: f64) -> [ScalarField; 3] {
    let omega = kappa * kappa * theta0.cos();
    [
        ScalarField::from_fn(grid, |x, _| theta0.sin() * (kappa * x - omega * t).cos()),
        ScalarField::from_fn(grid, |x, _| theta0.sin() * (kappa * x - omega * t).sin()),
        ScalarField::filled(grid, theta0.cos()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use std::f64::consts::PI;

    fn constant_spin(g: Grid2, u: ScalarField, alpha: Complex64) -> SpinField2p1 {
        let n = 1.0 / 3.0f64.sqrt();
        let s = std::array::from_fn(|_| TimeStack::constant(ScalarField::filled(g, n), 5, 0.1));
        SpinField2p1::new(s, TimeStack::constant(u, 5, 0.1), alpha).unwrap()
    }

    #[test]
    fn constant_spin_residuals() {
        let g = Grid2::square(32).unwrap();
        let r = ishimori_residual(&constant_spin(g, ScalarField::zeros(g), Complex64::new(1.0, 0.0))).unwrap();
        assert!(r[0].linf < 1e-14 && r[1].linf < 1e-14);
        let u = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).sin());
        let r = ishimori_residual(&constant_spin(g, u.clone(), Complex64::new(0.0, 1.0))).unwrap();
        assert!(r[0].linf < 1e-12);
        // alpha^2 = -1: u_xx + u_yy = -5 sin
        assert!((r[1].linf - 5.0).abs() < 1e-9);
    }

    #[test]
    fn spin_wave_solves_flow() {
        let g = Grid2::new(64, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let (th, kappa) = (0.7, 2.0);
        let dt = 0.002;
        let slices: Vec<[ScalarField; 3]> = (0..7).map(|i| spin_wave(g, th, kappa, i as f64 * dt)).collect();
        let s = std::array::from_fn(|c| TimeStack::new(0.0, dt, slices.iter().map(|v| v[c].clone()).collect()).unwrap());
        let sf = SpinField2p1::new(s, TimeStack::constant(ScalarField::zeros(g), 7, dt), Complex64::new(1.3, 0.2)).unwrap();
        let r = ishimori_residual(&sf).unwrap();
        assert!(r[0].linf < 1e-5, "{}", r[0].linf);
        assert!(r[1].linf < 1e-12);
    }

    #[test]
    fn non_unit_spin_rejected() {
        let g = Grid2::square(8).unwrap();
        let s = std::array::from_fn(|_| TimeStack::constant(ScalarField::filled(g, 1.0), 5, 0.1));
        let sf = SpinField2p1::new(s, TimeStack::constant(ScalarField::zeros(g), 5, 0.1), Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(ishimori_residual(&sf), Err(Error::NonUnitSpin(_))));
    }

    #[test]
    fn hand_coefficients() {
        let g = Grid2::square(32).unwrap();
        let k = ScalarField::filled(g, 1.0);
        let tau = ScalarField::zeros(g);
        let u = ScalarField::from_fn(g, |x, _| x.sin());
        let c = ishimori_coefficients(&k, &tau, &u, Complex64::new(1.0, 0.0), 1.0).unwrap();
        let half_sin = ScalarField::from_fn(g, |x, _| 0.5 * x.sin()).to_complex();
        assert!((&c.m[1] - &half_sin).max_abs() < 1e-12);
        assert!(c.m[2].max_abs() < 1e-12);
        let mu = potential_operator(&u, Complex64::new(1.0, 0.0));
        let back = c.m[1].scale(Complex64::new(-2.0, 0.0));
        assert!((&back - &mu).max_abs() < 1e-12);
    }

    #[test]
    fn harmonic_potential_cascade() {
        let g = Grid2::square(32).unwrap();
        let k = ScalarField::filled(g, 0.8);
        let tau = ScalarField::filled(g, 0.3);
        let u = ScalarField::from_fn(g, |x, y| (x + y).sin());
        let c = ishimori_coefficients(&k, &tau, &u, Complex64::new(1.0, 0.0), 1.0).unwrap();
        for m in &c.m {
            assert!(m.max_abs() < 1e-12);
        }
    }

    #[test]
    fn small_k_rejected() {
        let g = Grid2::square(16).unwrap();
        let k = ScalarField::from_fn(g, |x, _| x.sin());
        let z = ScalarField::zeros(g);
        assert!(matches!(ishimori_coefficients(&k, &z, &z, Complex64::new(1.0, 0.0), 1.0), Err(Error::DivisionBySmallK { .. })));
    }
}

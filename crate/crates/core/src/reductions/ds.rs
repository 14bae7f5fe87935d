//! Complex fields `q, p` built from the frame coefficients and the
//! nonlinear Schrodinger-type system they satisfy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, ScalarField};
use crate::residual::{residual_norm_slices, ResidualReport};
use crate::spectral::{d, dxx, dyy, inv_deriv_x, row_means, Fft2};
use crate::grid::Axis;
use crate::stack::TimeStack;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Radicands below this are treated as zero; the phase integrand is set
/// to zero there.
pub const MODULUS_FLOOR: f64 = 1e-12;

/// The four auxiliary phase fields entering `b_1, b_2`.
#[derive(Clone, Debug)]
pub struct PhaseSources {
    pub a: ScalarField,
    pub a_bar: ScalarField,
    pub d: ScalarField,
    pub d_bar: ScalarField,
}

impl PhaseSources {
    pub fn zeros(grid: crate::grid::Grid2) -> Self {
        let z = ScalarField::zeros(grid);
        Self { a: z.clone(), a_bar: z.clone(), d: z.clone(), d_bar: z }
    }

    /// Sources with `A_bar - A + D - D_bar = c`.
    pub fn from_combination(c: ScalarField) -> Self {
        let mut s = Self::zeros(*c.grid());
        s.a_bar = c;
        s
    }

    /// `A_bar - A + D - D_bar`.
    pub fn combination(&self) -> ScalarField {
        &(&(&self.a_bar - &self.a) + &self.d) - &self.d_bar
    }
}

/// `q, p, v` at one time with the constant `alpha`.
#[derive(Clone, Debug)]
pub struct DSFields {
    pub q: ComplexField,
    pub p: ComplexField,
    pub v: ComplexField,
    pub alpha: Complex64,
}

/// Stacked `q, p, v` for the residual.
#[derive(Clone, Debug)]
pub struct DSStack {
    pub q: TimeStack<Complex64>,
    pub p: TimeStack<Complex64>,
    pub v: TimeStack<Complex64>,
    pub alpha: Complex64,
}

impl DSStack {
    pub fn new(q: TimeStack<Complex64>, p: TimeStack<Complex64>, v: TimeStack<Complex64>, alpha: Complex64) -> Result<Self> {
        q.check_aligned(&p)?;
        q.check_aligned(&v)?;
        Ok(Self { q, p, v, alpha })
    }
}

/// The frame coefficients entering the construction, at one time.
#[derive(Clone, Debug)]
pub struct DSInputs<'a> {
    pub k: &'a ScalarField,
    pub tau: &'a ScalarField,
    pub m1: &'a ScalarField,
    pub m2: &'a ScalarField,
    pub m3: &'a ScalarField,
}

/// `a_1^2` and `a_2^2`.
pub fn ds_moduli_squared(inp: &DSInputs, alpha: Complex64) -> (ScalarField, ScalarField) {
    let (ar, ai) = (alpha.re, alpha.im);
    let n2 = alpha.norm_sqr();
    let common = ScalarField::from_index_fn(*inp.k.grid(), |i| {
        let (k, m2, m3) = (inp.k.data()[i], inp.m2.data()[i], inp.m3.data()[i]);
        0.25 * k * k + 0.25 * n2 * (m3 * m3 + m2 * m2) - 0.5 * ai * k * m2
    });
    let cross = inp.k * inp.m3;
    (&common - &(&cross * (0.5 * ar)), &common + &(&cross * (0.5 * ar)))
}

/// `gamma_1` and `gamma_2`, both purely imaginary for real inputs.
pub fn ds_gammas(inp: &DSInputs, alpha: Complex64) -> (ComplexField, ComplexField) {
    let (ar, ai) = (alpha.re, alpha.im);
    let n2 = alpha.norm_sqr();
    let (kx, ky) = (d(inp.k, Axis::X), d(inp.k, Axis::Y));
    let m3x = d(inp.m3, Axis::X);
    let g = *inp.k.grid();
    let mut g1 = ComplexField::zeros(g);
    let mut g2 = ComplexField::zeros(g);
    for i in 0..g.len() {
        let (k, tau, m1, m2, m3) = (inp.k.data()[i], inp.tau.data()[i], inp.m1.data()[i], inp.m2.data()[i], inp.m3.data()[i]);
        let base = 0.5 * k * k * tau + 0.5 * n2 * (m3 * k * m1 + m2 * ky.data()[i]);
        let real_part = 0.5 * ar * (k * k * m1 + m3 * k * tau + m2 * kx.data()[i]);
        let imag_part = 0.5 * ai * (k * (2.0 * ky.data()[i] - m3x.data()[i]) - kx.data()[i] * m3);
        g1.data_mut()[i] = I * (base - real_part + imag_part);
        g2.data_mut()[i] = -I * (base + real_part + imag_part);
    }
    (g1, g2)
}

fn checked_modulus(a2: &ScalarField, label: &str) -> Result<ScalarField> {
    let worst = a2.min();
    let scale = a2.max_abs().max(1.0);
    if worst < -MODULUS_FLOOR * scale {
        return Err(Error::ConstraintViolated { what: format!("{label} >= 0"), deviation: -worst });
    }
    Ok(a2.map(|v| v.max(0.0).sqrt()))
}

/// Phase integrand `-gamma / (2 i a^2) - c`, zero where `a^2` is below the floor.
fn phase_integrand(gamma: &ComplexField, a2: &ScalarField, c: &ScalarField) -> ScalarField {
    ScalarField::from_index_fn(*a2.grid(), |i| {
        let a = a2.data()[i];
        let main = if a <= MODULUS_FLOOR { 0.0 } else { (-gamma.data()[i] / (2.0 * I * a)).re };
        main - c.data()[i]
    })
}

/// The two phase integrands, before `d_x^{-1}` is applied.
pub fn ds_phase_integrands(inp: &DSInputs, alpha: Complex64, ph: &PhaseSources) -> (ScalarField, ScalarField) {
    let (a1, a2) = ds_moduli_squared(inp, alpha);
    let (g1, g2) = ds_gammas(inp, alpha);
    let c = ph.combination();
    (phase_integrand(&g1, &a1, &c), phase_integrand(&g2, &a2, &(-&c)))
}

/// Builds `q = a_1 e^{i b_1}`, `p = a_2 e^{i b_2}` and the potential `v`
/// solving the third equation with zero mean.
pub fn ds_construct(inp: &DSInputs, alpha: Complex64, ph: &PhaseSources) -> Result<DSFields> {
    for f in [inp.tau, inp.m1, inp.m2, inp.m3] {
        inp.k.check_same_grid(f)?;
    }
    let (a1sq, a2sq) = ds_moduli_squared(inp, alpha);
    let a1 = checked_modulus(&a1sq, "a_1^2")?;
    let a2 = checked_modulus(&a2sq, "a_2^2")?;
    let (i1, i2) = ds_phase_integrands(inp, alpha, ph);
    let b1 = inv_deriv_x(&i1)?;
    let b2 = inv_deriv_x(&i2)?;
    let q = a1.zip_map(&b1, |a, b| Complex64::from_polar(a, b));
    let p = a2.zip_map(&b2, |a, b| Complex64::from_polar(a, b));
    let v = ds_potential(&q, &p, alpha);
    Ok(DSFields { q, p, v, alpha })
}

/// Like [`ds_construct`] with zero sources, but each phase integrand has its
/// own row mean removed. The moduli are those of [`ds_construct`]; this is
/// for inputs whose two integrands admit no common periodic phase.
pub fn ds_construct_detrended(inp: &DSInputs, alpha: Complex64) -> Result<DSFields> {
    let (a1sq, a2sq) = ds_moduli_squared(inp, alpha);
    let a1 = checked_modulus(&a1sq, "a_1^2")?;
    let a2 = checked_modulus(&a2sq, "a_2^2")?;
    let (i1, i2) = ds_phase_integrands(inp, alpha, &PhaseSources::zeros(*inp.k.grid()));
    let b1 = inv_deriv_x(&(&i1 - &row_means(&i1)))?;
    let b2 = inv_deriv_x(&(&i2 - &row_means(&i2)))?;
    let q = a1.zip_map(&b1, |a, b| Complex64::from_polar(a, b));
    let p = a2.zip_map(&b2, |a, b| Complex64::from_polar(a, b));
    let v = ds_potential(&q, &p, alpha);
    Ok(DSFields { q, p, v, alpha })
}

/// Solves `v_xx - alpha^2 v_yy = -2[(pq)_xx + alpha^2 (pq)_yy]` in Fourier
/// space; modes where the symbol vanishes are set to zero.
pub fn ds_potential(q: &ComplexField, p: &ComplexField, alpha: Complex64) -> ComplexField {
    let g = *q.grid();
    let a2 = alpha * alpha;
    let fft = Fft2::new(g);
    let mut w: Vec<Complex64> = (p * q).into_data();
    fft.forward(&mut w);
    for (idx, c) in w.iter_mut().enumerate() {
        let (kx, ky) = fft.k(idx);
        let lhs = -kx * kx + a2 * ky * ky;
        let rhs = (-kx * kx - a2 * ky * ky) * -2.0;
        *c = if lhs.norm() < 1e-12 { Complex64::new(0.0, 0.0) } else { *c * rhs / lhs };
    }
    fft.inverse(&mut w);
    ComplexField::from_vec(g, w).expect("grid length")
}

/// Residual fields of the three equations at slice `i`.
pub fn ds_fields_at(ds: &DSStack, i: usize) -> Result<[ComplexField; 3]> {
    let a2 = ds.alpha * ds.alpha;
    let (q, p, v) = (ds.q.slice(i), ds.p.slice(i), ds.v.slice(i));
    let lin = |f: &ComplexField| &dxx(f) + &dyy(f).scale(a2);
    let ra = &(&ds.q.time_derivative(i)?.scale(I) + &lin(q)) + &(v * q);
    let rb = &(&ds.p.time_derivative(i)?.scale(-I) + &lin(p)) + &(v * p);
    let rc = &(&dxx(v) - &dyy(v).scale(a2)) + &lin(&(p * q)).scale(Complex64::new(2.0, 0.0));
    Ok([ra, rb, rc])
}

pub fn ds_residual(ds: &DSStack) -> Result<[ResidualReport; 3]> {
    ds.q.require_derivative("q_t and p_t")?;
    let mut parts: [Vec<ComplexField>; 3] = Default::default();
    for i in 0..ds.q.len() {
        for (dst, f) in parts.iter_mut().zip(ds_fields_at(ds, i)?) {
            dst.push(f);
        }
    }
    Ok([
        residual_norm_slices(&parts[0], "i q_t + q_xx + a^2 q_yy + v q"),
        residual_norm_slices(&parts[1], "-i p_t + p_xx + a^2 p_yy + v p"),
        residual_norm_slices(&parts[2], "v_xx - a^2 v_yy + 2[(pq)_xx + a^2 (pq)_yy]"),
    ])
}

/// Plane wave `q = A exp(i(kappa x + l y - omega t))`, `p = conj(q)`,
/// `v = v0`, with `omega = kappa^2 + alpha^2 l^2 - v0` (real `alpha^2`).
pub fn ds_plane_wave(grid: crate::grid::Grid2, amp: f64, kappa: f64, l: f64, v0: f64, alpha: Complex64, t: f64) -> DSFields {
    let omega = kappa * kappa + (alpha * alpha).re * l * l - v0;
    let q = ComplexField::from_fn(grid, |x, y| Complex64::from_polar(amp, kappa * x + l * y - omega * t));
    DSFields { p: q.conj(), q, v: ComplexField::filled(grid, v0.into()), alpha }
}

/// `|q| - |p|` and `|q|^2 - |p|^2 + k m3` sup norms.
pub fn ds_modulus_defects(ds: &DSFields, k: &ScalarField, m3: &ScalarField) -> (f64, f64) {
    let (aq, ap) = (ds.q.abs(), ds.p.abs());
    let first = (&aq - &ap).max_abs();
    let second = (&(&(&aq * &aq) - &(&ap * &ap)) + &(k * m3)).max_abs();
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use crate::random::SmoothRng;
    use std::f64::consts::PI;

    #[test]
    fn zero_inputs_give_zero_fields() {
        let g = Grid2::square(16).unwrap();
        let z = ScalarField::zeros(g);
        let inp = DSInputs { k: &z, tau: &z, m1: &z, m2: &z, m3: &z };
        let ds = ds_construct(&inp, Complex64::new(0.0, 1.0), &PhaseSources::zeros(g)).unwrap();
        assert_eq!(ds.q.max_abs(), 0.0);
        assert_eq!(ds.p.max_abs(), 0.0);
    }

    #[test]
    fn ds2_moduli_agree() {
        let g = Grid2::square(32).unwrap();
        let mut rng = SmoothRng::new(3, 3);
        let k = &rng.field(g, 1.0, false) + &ScalarField::filled(g, 2.0);
        let (tau, m1, m2, m3) = (rng.field(g, 0.5, false), rng.field(g, 0.5, false), rng.field(g, 0.5, false), rng.field(g, 0.5, false));
        let inp = DSInputs { k: &k, tau: &tau, m1: &m1, m2: &m2, m3: &m3 };
        let alpha = Complex64::new(0.0, 1.0);
        let (i1, _) = ds_phase_integrands(&inp, alpha, &PhaseSources::zeros(g));
        let c = row_means(&i1);
        let ds = ds_construct(&inp, alpha, &PhaseSources::from_combination(c)).unwrap();
        let (dm, _) = ds_modulus_defects(&ds, &k, &m3);
        assert!(dm < 1e-12, "{dm}");
        assert!(ds.q.max_abs() > 0.1);
    }

    #[test]
    fn moduli_are_perfect_squares() {
        // a1 = |k - conj(alpha)(m3 + i m2)| / 2, a2 = |k + conj(alpha)(m3 - i m2)| / 2
        let g = Grid2::square(16).unwrap();
        let mut rng = SmoothRng::new(5, 2);
        let (k, m2, m3) = (rng.field(g, 1.0, false), rng.field(g, 1.0, false), rng.field(g, 1.0, false));
        let z = ScalarField::zeros(g);
        let alpha = Complex64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        let inp = DSInputs { k: &k, tau: &z, m1: &z, m2: &m2, m3: &m3 };
        let (a1, a2) = ds_moduli_squared(&inp, alpha);
        for i in 0..g.len() {
            let w = Complex64::new(m3.data()[i], m2.data()[i]);
            let e1 = 0.25 * (k.data()[i] - alpha.conj() * w).norm_sqr();
            let e2 = 0.25 * (k.data()[i] + alpha.conj() * w.conj()).norm_sqr();
            assert!((a1.data()[i] - e1).abs() < 1e-12 && (a2.data()[i] - e2).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_satisfies_system() {
        let g = Grid2::new(32, 32, 2.0 * PI, 4.0 * PI).unwrap();
        for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let dt = 0.002;
            let slices: Vec<DSFields> = (0..5).map(|i| ds_plane_wave(g, 0.7, 1.0, 0.5, 0.3, alpha, i as f64 * dt)).collect();
            let st = |f: &dyn Fn(&DSFields) -> ComplexField| TimeStack::new(0.0, dt, slices.iter().map(f).collect()).unwrap();
            let ds = DSStack::new(st(&|s| s.q.clone()), st(&|s| s.p.clone()), st(&|s| s.v.clone()), alpha).unwrap();
            let r = ds_residual(&ds).unwrap();
            assert!(r.iter().all(|x| x.linf < 1e-10), "{r:?}");
        }
    }

    #[test]
    fn potential_solves_third_equation() {
        let g = Grid2::square(32).unwrap();
        let mut rng = SmoothRng::new(9, 3);
        let q = rng.field(g, 1.0, false).to_complex();
        let p = q.conj();
        let alpha = Complex64::new(0.0, 1.0);
        let v = ds_potential(&q, &p, alpha);
        let a2 = alpha * alpha;
        let pq = &p * &q;
        let r = &(&dxx(&v) - &dyy(&v).scale(a2)) + &(&dxx(&pq) + &dyy(&pq).scale(a2)).scale(2.0.into());
        assert!(r.max_abs() < 1e-9, "{}", r.max_abs());
    }
}

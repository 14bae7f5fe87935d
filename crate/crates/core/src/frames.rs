//! The (1+1)-dimensional frame hierarchy: frame transport, its 3x3 and 2x2
//! zero-curvature forms, spectral-parameter expansions and the named
//! reductions (ZS-AKNS, WKI, principal chiral field, spin systems).
//!
//! On a 1+1 grid the first axis is `x` and the second axis plays the role
//! of `t`; both are periodic.
//!
//! The frame is stored as the matrix whose rows are `e1, e2, e3`, so that
//! transport reads `F_x = C F`, `F_t = G F`. With the ambient form
//! `eta = diag(beta, 1, 1)` the Gram matrix `F eta F^T` equals `eta` for the
//! identity frame and is conserved by transport; it is evaluated with the
//! bilinear (not Hermitian) product so complex coefficient sets are covered.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{commutator, ComplexField, MatrixField};
use crate::grid::Axis;
use crate::mat::Mat;
use crate::residual::{residual_norm, ResidualReport};
use crate::spectral::d;
use crate::tolerance::TRANSPORT_PRECONDITION;
use crate::transport::{transport_grid, TransportOptions};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// 3x3 matrix with the frame-transport pattern
/// `[[0, k, -s], [-beta k, 0, t], [beta s, -t, 0]]`.
pub fn frame_matrix(k: Complex64, sigma: Complex64, tau: Complex64, beta: f64) -> Mat {
    let z = Complex64::new(0.0, 0.0);
    Mat::from_rows([[z, k, -sigma], [-k * beta, z, tau], [sigma * beta, -tau, z]])
}

/// 2x2 matrix `(1 / 2i) [[t, k - i s], [k + i s, -t]]`.
pub fn su2_matrix(k: Complex64, sigma: Complex64, tau: Complex64) -> Mat {
    let f = 1.0 / (2.0 * I);
    Mat::from_rows([[tau * f, (k - I * sigma) * f], [(k + I * sigma) * f, -tau * f]])
}

/// Reads `(k, sigma, tau)` back from a matrix with the frame pattern.
pub fn frame_pattern_coefficients(m: &Mat) -> (Complex64, Complex64, Complex64) {
    (m.get(0, 1), -m.get(0, 2), m.get(1, 2))
}

/// Maps a field with the frame pattern to the corresponding 2x2 field.
pub fn frame_to_su2(m: &MatrixField) -> MatrixField {
    m.map(|a| {
        let (k, s, t) = frame_pattern_coefficients(&a);
        su2_matrix(k, s, t)
    })
}

/// `k, sigma, tau` and `omega_1..3` over an `(x, t)` grid.
#[derive(Clone, Debug)]
pub struct CoefficientSet1p1 {
    pub k: ComplexField,
    pub sigma: ComplexField,
    pub tau: ComplexField,
    pub omega: [ComplexField; 3],
    pub beta: f64,
}

impl CoefficientSet1p1 {
    pub fn new(k: ComplexField, sigma: ComplexField, tau: ComplexField, omega: [ComplexField; 3], beta: f64) -> Result<Self> {
        if beta != 1.0 && beta != -1.0 {
            return Err(Error::Argument(format!("beta must be +1 or -1, got {beta}")));
        }
        for f in [&sigma, &tau, &omega[0], &omega[1], &omega[2]] {
            k.check_same_grid(f)?;
        }
        Ok(Self { k, sigma, tau, omega, beta })
    }

    /// Recovers coefficients from a pair of pattern matrices.
    pub fn from_frame_matrices(c: &MatrixField, g: &MatrixField, beta: f64) -> Result<Self> {
        let pick = |m: &MatrixField, which: usize| {
            m.map(|a| {
                let t = frame_pattern_coefficients(&a);
                [t.0, t.1, t.2][which]
            })
        };
        Self::new(pick(c, 0), pick(c, 1), pick(c, 2), [pick(g, 2), pick(g, 1), pick(g, 0)], beta)
    }
}

/// `(C, G)`, the 3x3 transport matrices.
pub fn frame_matrices(c: &CoefficientSet1p1) -> (MatrixField, MatrixField) {
    let b = c.beta;
    let cm = MatrixField::from_index_fn(*c.k.grid(), |i| frame_matrix(c.k.data()[i], c.sigma.data()[i], c.tau.data()[i], b));
    let gm = MatrixField::from_index_fn(*c.k.grid(), |i| {
        frame_matrix(c.omega[2].data()[i], c.omega[1].data()[i], c.omega[0].data()[i], b)
    });
    (cm, gm)
}

/// `(U, V)`, the 2x2 Lax matrices.
pub fn to_su2(c: &CoefficientSet1p1) -> (MatrixField, MatrixField) {
    let u = MatrixField::from_index_fn(*c.k.grid(), |i| su2_matrix(c.k.data()[i], c.sigma.data()[i], c.tau.data()[i]));
    let v = MatrixField::from_index_fn(*c.k.grid(), |i| {
        su2_matrix(c.omega[2].data()[i], c.omega[1].data()[i], c.omega[0].data()[i])
    });
    (u, v)
}

/// Residual field `M_t - N_x + [M, N]` on an `(x, t)` grid.
pub fn zero_curvature_field(mx: &MatrixField, mt: &MatrixField) -> Result<MatrixField> {
    let br = commutator(mx, mt)?;
    Ok(&(&d(mx, Axis::Y) - &d(mt, Axis::X)) + &br)
}

pub fn zero_curvature_residual_1p1(mx: &MatrixField, mt: &MatrixField) -> Result<ResidualReport> {
    Ok(residual_norm(&zero_curvature_field(mx, mt)?, "zero-curvature M_t - N_x + [M,N]"))
}

/// A transported trihedral over an `(x, t)` grid.
#[derive(Clone, Debug)]
pub struct FrameField1p1 {
    /// Rows are `e1, e2, e3`.
    pub frame: MatrixField,
    pub beta: f64,
}

impl FrameField1p1 {
    /// `e_j` at every point.
    pub fn e(&self, j: usize) -> Vec<[Complex64; 3]> {
        self.frame.data().iter().map(|m| [m.get(j, 0), m.get(j, 1), m.get(j, 2)]).collect()
    }

    /// Largest entry of `F eta F^T - diag(beta, 1, 1)`.
    pub fn gram_drift(&self) -> f64 {
        let eta = eta(self.beta);
        self.frame.data().iter().map(|f| (*f * eta * f.transpose() - eta).max_abs()).fold(0.0, f64::max)
    }
}

pub fn eta(beta: f64) -> Mat {
    Mat::from_real_rows([[beta, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
}

/// One Newton step towards `F eta F^T = eta`.
pub fn renormalize_frame(f: Mat, beta: f64) -> Mat {
    let eta = eta(beta);
    let gram = f * eta * f.transpose();
    (Mat::identity(3) * 1.5 - gram * eta * 0.5) * f
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FrameOptions {
    pub transport: TransportOptions,
    /// Re-impose the Gram invariant after every step. Off by default because
    /// the drift is a measured quantity.
    pub renormalize: bool,
}

/// Transports `frame0` from the origin along `x` at `t = 0`, then along `t`.
pub fn integrate_frame_1p1(c: &CoefficientSet1p1, frame0: Mat, opts: FrameOptions) -> Result<FrameField1p1> {
    let (cm, gm) = frame_matrices(c);
    let pre = zero_curvature_residual_1p1(&cm, &gm)?;
    if pre.linf > TRANSPORT_PRECONDITION {
        return Err(Error::CurvatureObstruction { residual: pre.linf, limit: TRANSPORT_PRECONDITION });
    }
    let beta = c.beta;
    let project = move |m: Mat| renormalize_frame(m, beta);
    let proj: Option<&dyn Fn(Mat) -> Mat> = if opts.renormalize { Some(&project) } else { None };
    let frame = transport_grid(&cm, &gm, frame0, opts.transport, proj)?;
    Ok(FrameField1p1 { frame, beta })
}

/// A term of a spectral-parameter expansion.
#[derive(Clone)]
pub enum LambdaTerm {
    /// `lambda^j f`.
    Power(i32, ComplexField),
    /// `h(lambda) f` for an arbitrary weight `h`.
    Weighted(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>, ComplexField),
}

/// Finite sum of [`LambdaTerm`]s.
#[derive(Clone, Default)]
pub struct LambdaSeries {
    pub terms: Vec<LambdaTerm>,
}

impl LambdaSeries {
    pub fn power(j: i32, f: ComplexField) -> Self {
        Self { terms: vec![LambdaTerm::Power(j, f)] }
    }

    pub fn plus(mut self, t: LambdaTerm) -> Self {
        self.terms.push(t);
        self
    }

    pub fn evaluate(&self, lambda: Complex64, grid: crate::grid::Grid2) -> ComplexField {
        let mut out = ComplexField::zeros(grid);
        for t in &self.terms {
            let (w, f) = match t {
                LambdaTerm::Power(j, f) => (lambda.powi(*j), f),
                LambdaTerm::Weighted(h, f) => (h(lambda), f),
            };
            out = out.zip_map(f, |a, b| a + w * b);
        }
        out
    }
}

/// Coefficients of a [`CoefficientSet1p1`] as series in `lambda`.
#[derive(Clone)]
pub struct LambdaExpansion {
    pub grid: crate::grid::Grid2,
    pub k: LambdaSeries,
    pub sigma: LambdaSeries,
    pub tau: LambdaSeries,
    pub omega: [LambdaSeries; 3],
    pub beta: f64,
}

impl LambdaExpansion {
    pub fn new(grid: crate::grid::Grid2, beta: f64) -> Self {
        Self {
            grid,
            k: LambdaSeries::default(),
            sigma: LambdaSeries::default(),
            tau: LambdaSeries::default(),
            omega: Default::default(),
            beta,
        }
    }

    pub fn evaluate(&self, lambda: Complex64) -> Result<CoefficientSet1p1> {
        let e = |s: &LambdaSeries| s.evaluate(lambda, self.grid);
        CoefficientSet1p1::new(
            e(&self.k),
            e(&self.sigma),
            e(&self.tau),
            [e(&self.omega[0]), e(&self.omega[1]), e(&self.omega[2])],
            self.beta,
        )
    }
}

/// ZS-AKNS: `k_0 = i(p + q)`, `sigma_0 = p - q`, `tau_1 = -2`.
pub fn zs_akns_expansion(p: &ComplexField, q: &ComplexField) -> Result<LambdaExpansion> {
    p.check_same_grid(q)?;
    let grid = *p.grid();
    let mut e = LambdaExpansion::new(grid, 1.0);
    e.k = LambdaSeries::power(0, (p + q).map(|v| I * v));
    e.sigma = LambdaSeries::power(0, p - q);
    e.tau = LambdaSeries::power(1, ComplexField::filled(grid, Complex64::new(-2.0, 0.0)));
    Ok(e)
}

/// WKI: `k_1 = i(p + q)`, `sigma_1 = p - q`, `tau_1 = -2`.
pub fn wki_expansion(p: &ComplexField, q: &ComplexField) -> Result<LambdaExpansion> {
    p.check_same_grid(q)?;
    let grid = *p.grid();
    let mut e = LambdaExpansion::new(grid, 1.0);
    e.k = LambdaSeries::power(1, (p + q).map(|v| I * v));
    e.sigma = LambdaSeries::power(1, p - q);
    e.tau = LambdaSeries::power(1, ComplexField::filled(grid, Complex64::new(-2.0, 0.0)));
    Ok(e)
}

/// `U(lambda)` of ZS-AKNS assembled through the expansion and the 2x2 map.
pub fn zs_akns(p: &ComplexField, q: &ComplexField, lambda: Complex64) -> Result<MatrixField> {
    Ok(to_su2(&zs_akns_expansion(p, q)?.evaluate(lambda)?).0)
}

/// `[[i lambda, q], [p, -i lambda]]` written down directly.
pub fn zs_akns_direct(p: &ComplexField, q: &ComplexField, lambda: Complex64) -> Result<MatrixField> {
    p.check_same_grid(q)?;
    Ok(p.zip_map(q, |pv, qv| Mat::from_rows([[I * lambda, qv], [pv, -I * lambda]])))
}

pub fn wki(p: &ComplexField, q: &ComplexField, lambda: Complex64) -> Result<MatrixField> {
    Ok(to_su2(&wki_expansion(p, q)?.evaluate(lambda)?).0)
}

/// `lambda [[i, q], [p, -i]]` written down directly.
pub fn wki_direct(p: &ComplexField, q: &ComplexField, lambda: Complex64) -> Result<MatrixField> {
    p.check_same_grid(q)?;
    Ok(p.zip_map(q, |pv, qv| Mat::from_rows([[I * lambda, lambda * qv], [lambda * pv, -I * lambda]])))
}

fn check_pole(lambda: f64) -> Result<()> {
    if (lambda - 1.0).abs() < 1e-12 || (lambda + 1.0).abs() < 1e-12 {
        return Err(Error::PoleAtLambda(lambda));
    }
    Ok(())
}

/// `U = u / (1 - lambda)`, `V = v / (1 + lambda)`.
pub fn chiral_pair(u: &MatrixField, v: &MatrixField, lambda: f64) -> Result<(MatrixField, MatrixField)> {
    check_pole(lambda)?;
    u.check_compatible(v)?;
    Ok((u * (1.0 / (1.0 - lambda)), v * (1.0 / (1.0 + lambda))))
}

/// Residual fields `u_t + [u, v] / 2` and `v_x - [u, v] / 2`.
pub fn chiral_fields(u: &MatrixField, v: &MatrixField) -> Result<(MatrixField, MatrixField)> {
    let half = &commutator(u, v)? * 0.5;
    Ok((&d(u, Axis::Y) + &half, &d(v, Axis::X) - &half))
}

pub fn chiral_residual(u: &MatrixField, v: &MatrixField) -> Result<[ResidualReport; 2]> {
    let (a, b) = chiral_fields(u, v)?;
    Ok([residual_norm(&a, "chiral u_t + [u,v]/2"), residual_norm(&b, "chiral v_x - [u,v]/2")])
}

/// Difference between the zero-curvature field of the chiral pair and
/// `r1 / (1 - lambda) - r2 / (1 + lambda)`; vanishes for any `u`, `v`.
pub fn chiral_identity_defect(u: &MatrixField, v: &MatrixField, lambda: f64) -> Result<f64> {
    let (cu, cv) = chiral_pair(u, v, lambda)?;
    let zc = zero_curvature_field(&cu, &cv)?;
    let (r1, r2) = chiral_fields(u, v)?;
    let combo = &(&r1 * (1.0 / (1.0 - lambda))) - &(&r2 * (1.0 / (1.0 + lambda)));
    Ok((&zc - &combo).max_abs())
}

/// Spin vector with the sign pattern of `S3^2 + s1 S1^2 + s2 S2^2 = 1`.
#[derive(Clone, Debug)]
pub struct SpinField {
    pub s: [ComplexField; 3],
    pub signs: (f64, f64),
}

impl SpinField {
    /// `[[S3, S1 - i S2], [S1 + i S2, -S3]]`.
    pub fn matrix(&self) -> MatrixField {
        MatrixField::from_index_fn(*self.s[0].grid(), |i| {
            let (s1, s2, s3) = (self.s[0].data()[i], self.s[1].data()[i], self.s[2].data()[i]);
            Mat::from_rows([[s3, s1 - I * s2], [s1 + I * s2, -s3]])
        })
    }

    pub fn constraint_defect(&self) -> f64 {
        let (a, b) = self.signs;
        (0..self.s[0].data().len())
            .map(|i| {
                let (s1, s2, s3) = (self.s[0].data()[i], self.s[1].data()[i], self.s[2].data()[i]);
                (s3 * s3 + a * s1 * s1 + b * s2 * s2 - 1.0).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `S = (k, sigma, tau) / n` after checking `tau^2 + s1 k^2 + s2 sigma^2 = n^2`.
pub fn spin_from_coeffs(c: &CoefficientSet1p1, n: f64, signs: (f64, f64)) -> Result<SpinField> {
    let dev = (0..c.k.data().len())
        .map(|i| {
            let (k, s, t) = (c.k.data()[i], c.sigma.data()[i], c.tau.data()[i]);
            (t * t + signs.0 * k * k + signs.1 * s * s - n * n).norm()
        })
        .fold(0.0, f64::max);
    if dev > 1e-8 {
        return Err(Error::ConstraintViolated { what: "tau^2 + s1 k^2 + s2 sigma^2 = n^2".into(), deviation: dev });
    }
    let inv = 1.0 / n;
    Ok(SpinField { s: [&c.k * inv, &c.sigma * inv, &c.tau * inv], signs })
}

/// Residual of the spin form of the zero-curvature equation. Since
/// `U = (n / 2i) S`, the consistent normalization is
/// `S_t - (2i / n) V_x + [S, V]`; `paper_literal` uses `1 / n` instead.
pub fn m0_residual_1p1(s: &SpinField, v: &MatrixField, n: f64, paper_literal: bool) -> Result<ResidualReport> {
    let sm = s.matrix();
    let factor = if paper_literal { Complex64::new(1.0 / n, 0.0) } else { 2.0 * I / n };
    let r = &(&d(&sm, Axis::Y) - &d(v, Axis::X).scale(factor)) + &commutator(&sm, v)?;
    Ok(residual_norm(&r, "spin S_t - c V_x + [S,V]"))
}

/// Coefficients of the focusing NLS plane wave `q = A exp(i(kappa x - Omega t))`,
/// `p = -conj(q)`, `Omega = kappa^2 - 2 A^2`, at spectral parameter `lambda`.
/// `V = [[-2i l^2 - i q p, -2 l q + i q_x], [-2 l p - i p_x, 2i l^2 + i q p]]`.
pub fn nls_plane_wave(grid: crate::grid::Grid2, amp: f64, kappa: f64, lambda: f64) -> Result<CoefficientSet1p1> {
    let omega_freq = kappa * kappa - 2.0 * amp * amp;
    let q = ComplexField::from_fn(grid, |x, t| Complex64::from_polar(amp, kappa * x - omega_freq * t));
    let p = q.map(|v| -v.conj());
    let u = zs_akns_direct(&p, &q, lambda.into())?;
    let qx = d(&q, Axis::X);
    let px = d(&p, Axis::X);
    let l = Complex64::new(lambda, 0.0);
    let v = MatrixField::from_index_fn(grid, |i| {
        let (qv, pv) = (q.data()[i], p.data()[i]);
        Mat::from_rows([
            [-2.0 * I * l * l - I * qv * pv, -2.0 * l * qv + I * qx.data()[i]],
            [-2.0 * l * pv - I * px.data()[i], 2.0 * I * l * l + I * qv * pv],
        ])
    });
    from_su2_pair(&u, &v, 1.0)
}

/// Reads `(k, sigma, tau)` and `omega` back from 2x2 matrices of the form
/// `(1/2i)[[t, k - i s], [k + i s, -t]]`.
pub fn from_su2_pair(u: &MatrixField, v: &MatrixField, beta: f64) -> Result<CoefficientSet1p1> {
    let parts = |m: &MatrixField| {
        let t = m.map(|a| 2.0 * I * a.get(0, 0));
        let k = m.map(|a| I * (a.get(0, 1) + a.get(1, 0)));
        let s = m.map(|a| a.get(1, 0) - a.get(0, 1));
        (k, s, t)
    };
    let (k, s, t) = parts(u);
    let (w3, w2, w1) = parts(v);
    CoefficientSet1p1::new(k, s, t, [w1, w2, w3], beta)
}

/// Compatible coefficients for either signature: `C = F_x F^{-1}`,
/// `G = F_t F^{-1}` with `F = exp(f1 X1) exp(f2 X2) exp(f3 X3)` for smooth
/// `f_j` and the pattern basis `X_j`.
pub fn gauge_generated_coefficients(f: [&crate::field::ScalarField; 3], beta: f64) -> Result<CoefficientSet1p1> {
    let grid = *f[0].grid();
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let basis = [frame_matrix(one, z, z, beta), frame_matrix(z, one, z, beta), frame_matrix(z, z, one, beta)];
    let fx: Vec<_> = f.iter().map(|g| d(*g, Axis::X)).collect();
    let ft: Vec<_> = f.iter().map(|g| d(*g, Axis::Y)).collect();
    let build = |der: &[crate::field::ScalarField]| {
        MatrixField::from_index_fn(grid, |i| {
            let e1 = (basis[0] * f[0].data()[i]).exp();
            let e2 = (basis[1] * f[1].data()[i]).exp();
            let e1i = e1.inverse().unwrap_or(Mat::identity(3));
            let e12 = e1 * e2;
            let e12i = e12.inverse().unwrap_or(Mat::identity(3));
            basis[0] * der[0].data()[i] + e1 * basis[1] * e1i * der[1].data()[i] + e12 * basis[2] * e12i * der[2].data()[i]
        })
    };
    CoefficientSet1p1::from_frame_matrices(&build(&fx), &build(&ft), beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use crate::random::SmoothRng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn frame_matrix_entries() {
        let m = frame_matrix(c(1.0), c(0.0), c(0.0), 1.0);
        assert_eq!(m, Mat::from_real_rows([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]));
        let m = frame_matrix(c(0.0), c(2.0), c(0.0), -1.0);
        assert_eq!(m.get(0, 2), c(-2.0));
        assert_eq!(m.get(2, 0), c(-2.0));
    }

    #[test]
    fn su2_entries() {
        let u = su2_matrix(c(2.0), c(0.0), c(0.0));
        assert!((u - Mat::from_rows([[c(0.0), -I], [-I, c(0.0)]])).max_abs() < 1e-15);
        let u = su2_matrix(c(0.0), c(0.0), c(2.0));
        assert!((u - Mat::from_rows([[-I, c(0.0)], [c(0.0), I]])).max_abs() < 1e-15);
    }

    #[test]
    fn zs_akns_examples() {
        let g = Grid2::square(8).unwrap();
        let zero = ComplexField::zeros(g);
        let u = zs_akns(&zero, &zero, c(1.0)).unwrap();
        assert!((u.data()[0] - Mat::from_rows([[I, c(0.0)], [c(0.0), -I]])).max_abs() < 1e-15);
        let p = ComplexField::filled(g, c(1.0));
        let q = ComplexField::filled(g, c(-1.0));
        let u = zs_akns(&p, &q, c(0.0)).unwrap();
        assert!((u.data()[3] - Mat::from_real_rows([[0.0, -1.0], [1.0, 0.0]])).max_abs() < 1e-15);
        let u = zs_akns(&zero, &zero, c(2.0)).unwrap();
        assert!((u.data()[5] - Mat::from_rows([[2.0 * I, c(0.0)], [c(0.0), -2.0 * I]])).max_abs() < 1e-15);
    }

    #[test]
    fn wki_examples() {
        let g = Grid2::square(8).unwrap();
        let p = ComplexField::filled(g, c(1.0));
        assert!(wki(&p, &p, c(0.0)).unwrap().max_abs() == 0.0);
        let zero = ComplexField::zeros(g);
        let u = wki(&zero, &zero, c(1.0)).unwrap();
        assert!((u.data()[0] - Mat::from_rows([[I, c(0.0)], [c(0.0), -I]])).max_abs() < 1e-15);
        let a = wki(&p, &p, c(1.0)).unwrap();
        let b = wki_direct(&p, &p, c(1.0)).unwrap();
        assert!((&a - &b).max_abs() < 1e-15);
        assert!((a.data()[0] - Mat::from_rows([[I, c(1.0)], [c(1.0), -I]])).max_abs() < 1e-15);
    }

    #[test]
    fn chiral_examples() {
        let g = Grid2::square(8).unwrap();
        let m = MatrixField::filled(g, Mat::from_real_rows([[1.0, 2.0], [3.0, 4.0]]));
        let [a, b] = chiral_residual(&m, &m).unwrap();
        assert_eq!(a.linf + b.linf, 0.0);
        let (u, v) = chiral_pair(&m, &m, 3.0).unwrap();
        assert!((&u - &(&m * -0.5)).max_abs() < 1e-15);
        assert!((&v - &(&m * 0.25)).max_abs() < 1e-15);
        assert!(matches!(chiral_pair(&m, &m, 1.0), Err(Error::PoleAtLambda(_))));
        assert!(matches!(chiral_pair(&m, &m, -1.0), Err(Error::PoleAtLambda(_))));
        let mut rng = SmoothRng::new(3, 2);
        let u = rng.complex_matrix_field(g, 2, 1.0);
        let v = rng.complex_matrix_field(g, 2, 1.0);
        assert!(chiral_identity_defect(&u, &v, 0.3).unwrap() < 1e-12);
    }

    #[test]
    fn circle_rotation() {
        let g = Grid2::square(64).unwrap();
        let one = ComplexField::filled(g, c(1.0));
        let z = ComplexField::zeros(g);
        let cs = CoefficientSet1p1::new(one, z.clone(), z.clone(), [z.clone(), z.clone(), z], 1.0).unwrap();
        let fr = integrate_frame_1p1(&cs, Mat::identity(3), FrameOptions::default()).unwrap();
        let e1 = fr.e(0);
        for (idx, v) in e1.iter().enumerate() {
            let x = g.x(g.coords(idx).0);
            assert!((v[0] - x.cos()).norm() < 1e-8 && (v[1] - x.sin()).norm() < 1e-8 && v[2].norm() < 1e-12);
        }
    }

    #[test]
    fn spin_examples() {
        let g = Grid2::square(8).unwrap();
        let n = ComplexField::filled(g, c(2.0));
        let z = ComplexField::zeros(g);
        let cs = CoefficientSet1p1::new(n, z.clone(), z.clone(), [z.clone(), z.clone(), z.clone()], 1.0).unwrap();
        let s = spin_from_coeffs(&cs, 2.0, (1.0, 1.0)).unwrap();
        assert!((s.matrix().data()[0] - Mat::from_real_rows([[0.0, 1.0], [1.0, 0.0]])).max_abs() < 1e-15);
        let v = MatrixField::zeros(g, 2);
        assert_eq!(m0_residual_1p1(&s, &v, 2.0, false).unwrap().linf, 0.0);
        assert!(spin_from_coeffs(&cs, 1.0, (1.0, 1.0)).is_err());
    }

    #[test]
    fn nls_plane_wave_is_compatible() {
        let g = Grid2::square(32).unwrap();
        let cs = nls_plane_wave(g, 1.0, 1.0, 0.5).unwrap();
        let (u, v) = to_su2(&cs);
        assert!(zero_curvature_residual_1p1(&u, &v).unwrap().linf < 1e-10);
        let (cm, gm) = frame_matrices(&cs);
        assert!(zero_curvature_residual_1p1(&cm, &gm).unwrap().linf < 1e-10);
        let n = (4.0 * 0.25 + 4.0f64).sqrt();
        let s = spin_from_coeffs(&cs, n, (1.0, 1.0)).unwrap();
        assert!(m0_residual_1p1(&s, &v, n, false).unwrap().linf < 1e-10);
        assert!(m0_residual_1p1(&s, &v, n, true).unwrap().linf > 0.05);
    }

    #[test]
    fn gauge_generated_sets_are_compatible() {
        let g = Grid2::square(32).unwrap();
        for beta in [1.0, -1.0] {
            let mut rng = SmoothRng::new(11, 2);
            let f: Vec<_> = (0..3).map(|_| rng.field(g, 0.5, false)).collect();
            let cs = gauge_generated_coefficients([&f[0], &f[1], &f[2]], beta).unwrap();
            let (cm, gm) = frame_matrices(&cs);
            assert!(zero_curvature_residual_1p1(&cm, &gm).unwrap().linf < 1e-9);
        }
    }
}

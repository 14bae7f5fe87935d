//! The (2+1)-dimensional frame system: coefficient matrices `A, B, D`
//! (3x3) and `U, V, T` (2x2), the three zero-curvature residuals, the Lax
//! operators with parameters `a, e, lambda`, the plane case and the
//! linear-problem regrouping.
//!
//! Grids are over `(x, y)`; time enters through [`TimeStack`]s.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{commutator, ComplexField, MatrixField, ScalarField};
use crate::frames::{frame_matrix, su2_matrix};
use crate::grid::Axis;
use crate::mat::Mat;
use crate::residual::{residual_norm, residual_norm_slices, ResidualReport};
use crate::spectral::{d, inv_deriv_x};
use crate::stack::TimeStack;
use crate::transport::{transport_grid, transport_time, TransportOptions};

/// `k, sigma, tau`, `m_1..3`, `omega_1..3` at one time.
#[derive(Clone, Debug)]
pub struct CoefficientSet2p1 {
    pub k: ComplexField,
    pub sigma: ComplexField,
    pub tau: ComplexField,
    pub m: [ComplexField; 3],
    pub omega: [ComplexField; 3],
    pub beta: f64,
}

impl CoefficientSet2p1 {
    pub fn new(
        k: ComplexField,
        sigma: ComplexField,
        tau: ComplexField,
        m: [ComplexField; 3],
        omega: [ComplexField; 3],
        beta: f64,
    ) -> Result<Self> {
        if beta != 1.0 && beta != -1.0 {
            return Err(Error::Argument(format!("beta must be +1 or -1, got {beta}")));
        }
        for f in [&sigma, &tau, &m[0], &m[1], &m[2], &omega[0], &omega[1], &omega[2]] {
            k.check_same_grid(f)?;
        }
        Ok(Self { k, sigma, tau, m, omega, beta })
    }

    /// Plane case: only `k`, `m_3`, `omega_3` are nonzero.
    pub fn plane(k: &ScalarField, m3: &ScalarField, omega3: &ScalarField, beta: f64) -> Result<Self> {
        let z = ComplexField::zeros(*k.grid());
        Self::new(
            k.to_complex(),
            z.clone(),
            z.clone(),
            [z.clone(), z.clone(), m3.to_complex()],
            [z.clone(), z, omega3.to_complex()],
            beta,
        )
    }
}

/// The six coefficient matrices at one time.
#[derive(Clone, Debug)]
pub struct Matrices2p1 {
    pub a: MatrixField,
    pub b: MatrixField,
    pub d: MatrixField,
    pub u: MatrixField,
    pub v: MatrixField,
    pub t: MatrixField,
}

pub fn matrices_2p1(c: &CoefficientSet2p1) -> Matrices2p1 {
    let g = *c.k.grid();
    let three = |x: &ComplexField, s: &ComplexField, t: &ComplexField| {
        MatrixField::from_index_fn(g, |i| frame_matrix(x.data()[i], s.data()[i], t.data()[i], c.beta))
    };
    let two = |x: &ComplexField, s: &ComplexField, t: &ComplexField| {
        MatrixField::from_index_fn(g, |i| su2_matrix(x.data()[i], s.data()[i], t.data()[i]))
    };
    Matrices2p1 {
        a: three(&c.k, &c.sigma, &c.tau),
        b: three(&c.m[2], &c.m[1], &c.m[0]),
        d: three(&c.omega[2], &c.omega[1], &c.omega[0]),
        u: two(&c.k, &c.sigma, &c.tau),
        v: two(&c.m[2], &c.m[1], &c.m[0]),
        t: two(&c.omega[2], &c.omega[1], &c.omega[0]),
    }
}

/// Matrix-valued data along `x`, `y`, `t` over a time stack; either the
/// 3x3 triple `(A, B, D)` or the 2x2 triple `(U, V, T)`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub a: TimeStack<Mat>,
    pub b: TimeStack<Mat>,
    pub d: TimeStack<Mat>,
}

impl Triple {
    pub fn new(a: TimeStack<Mat>, b: TimeStack<Mat>, d: TimeStack<Mat>) -> Result<Self> {
        a.check_aligned(&b)?;
        a.check_aligned(&d)?;
        a.slice(0).check_compatible(b.slice(0))?;
        a.slice(0).check_compatible(d.slice(0))?;
        Ok(Self { a, b, d })
    }

    /// Builds both representations from coefficient sets at uniform times.
    pub fn from_coefficients(sets: &[CoefficientSet2p1], t0: f64, dt: f64) -> Result<(Triple, Triple)> {
        let mats: Vec<Matrices2p1> = sets.iter().map(matrices_2p1).collect();
        let pick = |f: fn(&Matrices2p1) -> &MatrixField| TimeStack::new(t0, dt, mats.iter().map(|m| f(m).clone()).collect());
        Ok((
            Triple::new(pick(|m| &m.a)?, pick(|m| &m.b)?, pick(|m| &m.d)?)?,
            Triple::new(pick(|m| &m.u)?, pick(|m| &m.v)?, pick(|m| &m.t)?)?,
        ))
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `P_v - Q_u + [P, Q]` for two spatial directions of one slice.
pub fn spatial_curvature(p: &MatrixField, q: &MatrixField, pu: Axis, qv: Axis) -> Result<MatrixField> {
    let br = commutator(p, q)?;
    Ok(&(&d(p, qv) - &d(q, pu)) + &br)
}

/// Residual fields of the three zero-curvature equations at slice `i`:
/// `A_y - B_x + [A,B]`, `A_t - D_x + [A,D]`, `B_t - D_y + [B,D]`.
pub fn mmlxii_fields_at(tr: &Triple, i: usize) -> Result<[MatrixField; 3]> {
    let (a, b, dd) = (tr.a.slice(i), tr.b.slice(i), tr.d.slice(i));
    let r1 = spatial_curvature(a, b, Axis::X, Axis::Y)?;
    let at = tr.a.time_derivative(i)?;
    let bt = tr.b.time_derivative(i)?;
    let r2 = &(&at - &d(dd, Axis::X)) + &commutator(a, dd)?;
    let r3 = &(&bt - &d(dd, Axis::Y)) + &commutator(b, dd)?;
    Ok([r1, r2, r3])
}

/// Residual fields at every slice.
pub fn mmlxii_fields(tr: &Triple) -> Result<Vec<[MatrixField; 3]>> {
    tr.a.require_derivative("A_t and B_t")?;
    (0..tr.len()).map(|i| mmlxii_fields_at(tr, i)).collect()
}

pub fn mmlxii_residual(tr: &Triple) -> Result<[ResidualReport; 3]> {
    let f = mmlxii_fields(tr)?;
    let col = |j: usize| f.iter().map(|s| s[j].clone()).collect::<Vec<_>>();
    Ok([
        residual_norm_slices(&col(0), "xy: A_y - B_x + [A,B]"),
        residual_norm_slices(&col(1), "xt: A_t - D_x + [A,D]"),
        residual_norm_slices(&col(2), "yt: B_t - D_y + [B,D]"),
    ])
}

/// The `x-y` residual alone; needs no time data.
pub fn mmlxii_xy_residual(a: &MatrixField, b: &MatrixField) -> Result<ResidualReport> {
    Ok(residual_norm(&spatial_curvature(a, b, Axis::X, Axis::Y)?, "xy: A_y - B_x + [A,B]"))
}

/// Largest ratio `linf(2x2 residual) / linf(3x3 residual)` over the three
/// equations with a nonzero 3x3 residual, and the two report sets.
pub fn representation_ratio(three: &Triple, two: &Triple) -> Result<(f64, [ResidualReport; 3], [ResidualReport; 3])> {
    let r3 = mmlxii_residual(three)?;
    let r2 = mmlxii_residual(two)?;
    let ratio = r3
        .iter()
        .zip(&r2)
        .filter(|(a, _)| a.linf > 0.0)
        .map(|(a, b)| b.linf / a.linf)
        .fold(0.0, f64::max);
    Ok((ratio, r3, r2))
}

/// Parameters of `L = d_x + a l d_y - (U + a l V)`, `M = d_t + e l^2 d_y - (T + e l^2 V)`.
#[derive(Clone, Copy, Debug)]
pub struct LaxParams {
    pub a: f64,
    pub e: f64,
    pub lambda: Complex64,
}

/// `(L g, M g)` at every slice for a stack of test matrices `g`.
pub fn lax_apply(uvt: &Triple, params: LaxParams, g: &TimeStack<Mat>) -> Result<Vec<(MatrixField, MatrixField)>> {
    uvt.a.check_aligned(g)?;
    g.require_derivative("g_t")?;
    let al = params.lambda * params.a;
    let el = params.lambda * params.lambda * params.e;
    (0..g.len())
        .map(|i| {
            let gi = g.slice(i);
            let gy = d(gi, Axis::Y);
            let (u, v, t) = (uvt.a.slice(i), uvt.b.slice(i), uvt.d.slice(i));
            let lg = &(&d(gi, Axis::X) + &gy.scale(al)) - &(u + &v.scale(al)).matmul(gi)?;
            let mg = &(&g.time_derivative(i)? + &gy.scale(el)) - &(t + &v.scale(el)).matmul(gi)?;
            Ok((lg, mg))
        })
        .collect()
}

/// Solution of `g_x = U g`, `g_y = V g`, `g_t = T g` with `g = 1` at the
/// origin of the first slice.
pub fn lax_transport(uvt: &Triple, opts: TransportOptions) -> Result<TimeStack<Mat>> {
    let dim = uvt.a.slice(0).dim();
    let g0 = transport_grid(uvt.a.slice(0), uvt.b.slice(0), Mat::identity(dim), opts, None)?;
    let slices = transport_time(&g0, &uvt.d, opts)?;
    TimeStack::new(uvt.a.t0(), uvt.a.dt(), slices)
}

/// Plane-case `m_3 = d_x^{-1} k_y`.
pub fn plane_m3(k: &ScalarField) -> Result<ScalarField> {
    inv_deriv_x(&d(k, Axis::Y))
}

/// Residuals `k_y - m3_x`, `k_t - omega3_x`, `m3_t - omega3_y`.
pub fn plane_case_residual(k: &TimeStack<f64>, m3: &TimeStack<f64>, omega3: &TimeStack<f64>) -> Result<[ResidualReport; 3]> {
    k.check_aligned(m3)?;
    k.check_aligned(omega3)?;
    k.require_derivative("k_t and m3_t")?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for i in 0..k.len() {
        a.push(&d(k.slice(i), Axis::Y) - &d(m3.slice(i), Axis::X));
        b.push(&k.time_derivative(i)? - &d(omega3.slice(i), Axis::X));
        c.push(&m3.time_derivative(i)? - &d(omega3.slice(i), Axis::Y));
    }
    Ok([
        residual_norm_slices(&a, "plane k_y - m3_x"),
        residual_norm_slices(&b, "plane k_t - omega3_x"),
        residual_norm_slices(&c, "plane m3_t - omega3_y"),
    ])
}

/// Linear-problem residual fields `L A - B_x`, `M A - D_x` with
/// `L = d_y - [B, .]`, `M = d_t - [D, .]`. This reading reproduces the
/// zero-curvature residuals exactly; `paper_literal` uses `[., B]` and
/// `[., D]`, which flips the sign of the commutator terms.
pub fn linear_problem_fields(tr: &Triple, i: usize, paper_literal: bool) -> Result<[MatrixField; 2]> {
    let (a, b, dd) = (tr.a.slice(i), tr.b.slice(i), tr.d.slice(i));
    let (cb, cd) = if paper_literal { (commutator(a, b)?, commutator(a, dd)?) } else { (commutator(b, a)?, commutator(dd, a)?) };
    let l = &(&d(a, Axis::Y) - &cb) - &d(b, Axis::X);
    let m = &(&tr.a.time_derivative(i)? - &cd) - &d(dd, Axis::X);
    Ok([l, m])
}

pub fn linear_problem_residual(tr: &Triple, paper_literal: bool) -> Result<[ResidualReport; 2]> {
    tr.a.require_derivative("A_t")?;
    let mut l = Vec::new();
    let mut m = Vec::new();
    for i in 0..tr.len() {
        let [x, y] = linear_problem_fields(tr, i, paper_literal)?;
        l.push(x);
        m.push(y);
    }
    Ok([residual_norm_slices(&l, "linear problem L A - B_x"), residual_norm_slices(&m, "linear problem M A - D_x")])
}

/// Compatible triple `P_u F^{-1}` for `F = exp(f1 X1) exp(f2 X2) exp(f3 X3)`.
/// `f(t)` gives the three exponents at time `t` and `ft(t)` their time
/// derivatives; spatial derivatives are spectral.
pub fn gauge_generated_triple(
    basis: [Mat; 3],
    f: impl Fn(f64) -> [ScalarField; 3],
    ft: impl Fn(f64) -> [ScalarField; 3],
    t0: f64,
    dt: f64,
    n: usize,
) -> Result<Triple> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ts = Vec::new();
    for s in 0..n {
        let t = t0 + s as f64 * dt;
        let fv = f(t);
        let grid = *fv[0].grid();
        let dx: Vec<ScalarField> = fv.iter().map(|g| d(g, Axis::X)).collect();
        let dy: Vec<ScalarField> = fv.iter().map(|g| d(g, Axis::Y)).collect();
        let dtv = ft(t);
        let build = |der: &[ScalarField]| {
            MatrixField::from_index_fn(grid, |i| {
                let e1 = (basis[0] * fv[0].data()[i]).exp();
                let e12 = e1 * (basis[1] * fv[1].data()[i]).exp();
                let e1i = e1.inverse().unwrap_or(Mat::identity(e1.dim()));
                let e12i = e12.inverse().unwrap_or(Mat::identity(e1.dim()));
                basis[0] * der[0].data()[i] + e1 * basis[1] * e1i * der[1].data()[i] + e12 * basis[2] * e12i * der[2].data()[i]
            })
        };
        xs.push(build(&dx));
        ys.push(build(&dy));
        ts.push(build(&dtv));
    }
    Triple::new(TimeStack::new(t0, dt, xs)?, TimeStack::new(t0, dt, ys)?, TimeStack::new(t0, dt, ts)?)
}

/// Pattern basis of the 3x3 algebra for signature `beta`.
pub fn frame_basis(beta: f64) -> [Mat; 3] {
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [frame_matrix(one, z, z, beta), frame_matrix(z, one, z, beta), frame_matrix(z, z, one, beta)]
}

/// The corresponding 2x2 basis.
pub fn su2_basis() -> [Mat; 3] {
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [su2_matrix(one, z, z), su2_matrix(z, one, z), su2_matrix(z, z, one)]
}

//! The constant-length constraint on `(k, sigma, tau)`, gauge conjugation
//! of a compatible triple, extraction of the spin pattern and the spin
//! form of the zero-curvature equations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{commutator, ComplexField, MatrixField};
use crate::frames::{frame_matrix, frame_pattern_coefficients, SpinField};
use crate::grid::Axis;
use crate::mat::Mat;
use crate::mmlxii::Triple;
use crate::residual::{residual_norm, residual_norm_slices, ResidualReport};
use crate::spectral::d;
use crate::stack::TimeStack;
use crate::tolerance::UNIT;

/// Residual `tau^2 + s1 k^2 + s2 sigma^2 - n^2` and, when it is within
/// `tol`, the spin `S = (k, sigma, tau) / n`.
pub fn spin_constraint_check(k: &ComplexField, sigma: &ComplexField, tau: &ComplexField, n: f64, signs: (f64, f64), tol: f64) -> Result<(ResidualReport, Option<SpinField>)> {
    k.check_same_grid(sigma)?;
    k.check_same_grid(tau)?;
    let r = ComplexField::from_index_fn(*k.grid(), |i| {
        let (kv, s, t) = (k.data()[i], sigma.data()[i], tau.data()[i]);
        t * t + kv * kv * signs.0 + s * s * signs.1 - n * n
    });
    let report = residual_norm(&r, "tau^2 + s1 k^2 + s2 sigma^2 - n^2");
    let spin = report.passes(tol).then(|| SpinField { s: [k * (1.0 / n), sigma * (1.0 / n), tau * (1.0 / n)], signs });
    Ok((report, spin))
}

/// Largest deviation of `E E^T` (3x3) or `E E^*` (2x2) from the identity.
pub fn orthogonality_defect(e: &TimeStack<Mat>) -> f64 {
    let mut worst = 0.0f64;
    for s in e.slices() {
        for m in s.data() {
            let p = if m.dim() == 2 { *m * m.adjoint() } else { *m * m.transpose() };
            worst = worst.max((p - Mat::identity(m.dim())).max_abs());
        }
    }
    worst
}

/// `A' = E A E^{-1} + E_x E^{-1}`, `B' = E B E^{-1} + E_y E^{-1}`,
/// `D' = E D E^{-1} + E_t E^{-1}`; `paper_literal` uses `E_x E^{-1}` in all three.
pub fn gauge_conjugate(e: &TimeStack<Mat>, tr: &Triple, paper_literal: bool) -> Result<Triple> {
    e.check_aligned(&tr.a)?;
    let defect = orthogonality_defect(e);
    if defect > UNIT {
        return Err(Error::NonOrthogonalGauge(defect));
    }
    e.require_derivative("E_t")?;
    let mut out: [Vec<MatrixField>; 3] = Default::default();
    for i in 0..tr.len() {
        let ei = e.slice(i);
        let inv = ei.inverse()?;
        let conj = |m: &MatrixField| -> Result<MatrixField> { ei.matmul(m)?.matmul(&inv) };
        let ex = d(ei, Axis::X).matmul(&inv)?;
        let (ey, et) = if paper_literal { (ex.clone(), ex.clone()) } else { (d(ei, Axis::Y).matmul(&inv)?, e.time_derivative(i)?.matmul(&inv)?) };
        out[0].push(&conj(tr.a.slice(i))? + &ex);
        out[1].push(&conj(tr.b.slice(i))? + &ey);
        out[2].push(&conj(tr.d.slice(i))? + &et);
    }
    let [a, b, dd] = out;
    let (t0, dt) = (tr.a.t0(), tr.a.dt());
    Triple::new(TimeStack::new(t0, dt, a)?, TimeStack::new(t0, dt, b)?, TimeStack::new(t0, dt, dd)?)
}

/// Fit of `A'` to `a [[0, S1, -S2], [-beta S1, 0, S3], [beta S2, -S3, 0]]`.
#[derive(Clone, Debug)]
pub struct StructureFit {
    /// Mean of the pointwise scale `a`.
    pub a: f64,
    /// `max a - min a`.
    pub a_spread: f64,
    /// Largest entry deviation from the pattern.
    pub pattern_defect: f64,
    pub s: [ComplexField; 3],
    /// Description of the mismatch when the fit exceeds the tolerance.
    pub mismatch: Option<String>,
}

/// Extracts `a` and `S` with `a^2 = |S3^2 + s1 S1^2 + s2 S2^2|` scaled out.
/// A mismatch is reported (not raised) when the pattern or the constancy of
/// `a` fails by more than `tol`.
pub fn extract_structure(ap: &MatrixField, beta: f64, signs: (f64, f64), tol: f64) -> StructureFit {
    let g = *ap.grid();
    let mut s: [ComplexField; 3] = std::array::from_fn(|_| ComplexField::zeros(g));
    let mut scale = Vec::with_capacity(g.len());
    let mut defect = 0.0f64;
    for (i, m) in ap.data().iter().enumerate() {
        let (c1, c2, c3) = frame_pattern_coefficients(m);
        defect = defect.max((*m - frame_matrix(c1, c2, c3, beta)).max_abs());
        let a = (c3 * c3 + c1 * c1 * signs.0 + c2 * c2 * signs.1).norm().sqrt();
        scale.push(a);
        let inv = if a > 0.0 { 1.0 / a } else { 0.0 };
        s[0].data_mut()[i] = c1 * inv;
        s[1].data_mut()[i] = c2 * inv;
        s[2].data_mut()[i] = c3 * inv;
    }
    let lo = scale.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scale.iter().cloned().fold(0.0, f64::max);
    let a = scale.iter().sum::<f64>() / scale.len() as f64;
    let mut notes = Vec::new();
    if defect > tol {
        notes.push(format!("pattern defect {defect:.3e}"));
    }
    if hi - lo > tol {
        notes.push(format!("scale a varies by {:.3e}", hi - lo));
    }
    StructureFit { a, a_spread: hi - lo, pattern_defect: defect, s, mismatch: (!notes.is_empty()).then(|| notes.join("; ")) }
}

/// Residual fields at slice `i`. The default pairs `S` with `V'` along y
/// and with `T'` along t: `S_y - V'_x / a + [S, V']`,
/// `S_t - T'_x / a + [S, T']`, `V'_t - T'_y + [V', T']`.
/// `paper_literal` swaps `S_y` and `S_t` in the first two.
pub fn m0_fields_at(s: &TimeStack<Mat>, vp: &TimeStack<Mat>, tp: &TimeStack<Mat>, a: f64, i: usize, paper_literal: bool) -> Result<[MatrixField; 3]> {
    let (sv, vv, tv) = (s.slice(i), vp.slice(i), tp.slice(i));
    let sy = d(sv, Axis::Y);
    let st = s.time_derivative(i)?;
    let (first, second) = if paper_literal { (st, sy) } else { (sy, st) };
    let r1 = &(&first - &(&d(vv, Axis::X) * (1.0 / a))) + &commutator(sv, vv)?;
    let r2 = &(&second - &(&d(tv, Axis::X) * (1.0 / a))) + &commutator(sv, tv)?;
    let r3 = &(&vp.time_derivative(i)? - &d(tv, Axis::Y)) + &commutator(vv, tv)?;
    Ok([r1, r2, r3])
}

pub fn m0_residual(s: &TimeStack<Mat>, vp: &TimeStack<Mat>, tp: &TimeStack<Mat>, a: f64, paper_literal: bool) -> Result<[ResidualReport; 3]> {
    s.check_aligned(vp)?;
    s.check_aligned(tp)?;
    s.require_derivative("S_t and V'_t")?;
    if a == 0.0 {
        return Err(Error::Argument("scale a must be nonzero".into()));
    }
    let mut parts: [Vec<MatrixField>; 3] = Default::default();
    for i in 0..s.len() {
        for (dst, f) in parts.iter_mut().zip(m0_fields_at(s, vp, tp, a, i, paper_literal)?) {
            dst.push(f);
        }
    }
    Ok([
        residual_norm_slices(&parts[0], "spin S_y - V'_x / a + [S, V']"),
        residual_norm_slices(&parts[1], "spin S_t - T'_x / a + [S, T']"),
        residual_norm_slices(&parts[2], "V'_t - T'_y + [V', T']"),
    ])
}

/// Spin matrix `A' / a` of a conjugated triple, stacked.
pub fn spin_matrices(tr: &Triple, a: f64) -> TimeStack<Mat> {
    tr.a.map(|m| m * (1.0 / a))
}

/// Constant rotation `exp(theta X)` for a pattern generator `X`.
pub fn constant_rotation(generator: Mat, theta: f64) -> Mat {
    (generator * Complex64::new(theta, 0.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use crate::grid::Grid2;
    use crate::mmlxii::{frame_basis, gauge_generated_triple, mmlxii_residual};
    use crate::random::SmoothRng;
    use std::f64::consts::PI;

    #[test]
    fn constraint_trivial_case() {
        let g = Grid2::square(8).unwrap();
        let n = 1.7;
        let k = ComplexField::filled(g, n.into());
        let z = ComplexField::zeros(g);
        let (r, s) = spin_constraint_check(&k, &z, &z, n, (1.0, 1.0), 1e-12).unwrap();
        assert_eq!(r.linf, 0.0);
        let s = s.unwrap();
        assert!((s.s[0].data()[0] - 1.0).norm() < 1e-15 && s.s[2].max_abs() == 0.0);
    }

    #[test]
    fn identity_gauge_is_noop() {
        let g = Grid2::square(16).unwrap();
        let mut rng = SmoothRng::new(1, 2);
        let st = |r: &mut SmoothRng| TimeStack::constant(r.real_matrix_field(g, 3, 1.0), 5, 0.1);
        let tr = Triple::new(st(&mut rng), st(&mut rng), st(&mut rng)).unwrap();
        let e = TimeStack::constant(MatrixField::filled(g, Mat::identity(3)), 5, 0.1);
        let out = gauge_conjugate(&e, &tr, false).unwrap();
        assert_eq!((&out.a.slice(2).clone() - tr.a.slice(2)).max_abs(), 0.0);
    }

    #[test]
    fn non_orthogonal_gauge_rejected() {
        let g = Grid2::square(8).unwrap();
        let z = TimeStack::constant(MatrixField::zeros(g, 3), 5, 0.1);
        let tr = Triple::new(z.clone(), z.clone(), z).unwrap();
        let e = TimeStack::constant(MatrixField::filled(g, Mat::identity(3) * 1.1), 5, 0.1);
        assert!(matches!(gauge_conjugate(&e, &tr, false), Err(Error::NonOrthogonalGauge(_))));
    }

    #[test]
    fn constant_rotation_rotates_spin() {
        let g = Grid2::square(8).unwrap();
        let basis = frame_basis(1.0);
        let (s1, s2, s3) = (0.6, 0.0, 0.8);
        let a = 2.5;
        let ap = frame_matrix(s1.into(), s2.into(), s3.into(), 1.0) * Complex64::new(a, 0.0);
        let r = constant_rotation(basis[1], 0.4);
        let rotated = MatrixField::filled(g, r * ap * r.transpose());
        let fit = extract_structure(&rotated, 1.0, (1.0, 1.0), 1e-12);
        assert!(fit.mismatch.is_none());
        assert!((fit.a - a).abs() < 1e-12);
        // the pattern encodes w = -a (S3, S2, S1) as an antisymmetric matrix
        let v = [s3, s2, s1];
        let rv: Vec<f64> = (0..3).map(|i| (0..3).map(|j| r.get(i, j).re * v[j]).sum()).collect();
        let got = [fit.s[2].data()[0].re, fit.s[1].data()[0].re, fit.s[0].data()[0].re];
        for i in 0..3 {
            assert!((rv[i] - got[i]).abs() < 1e-12, "{rv:?} {got:?}");
        }
    }

    fn rotation_triple(g: Grid2, dt: f64, n: usize, x_dependent: bool) -> (Triple, TimeStack<Mat>) {
        let basis = frame_basis(1.0);
        let gf = move |t: f64| {
            [
                ScalarField::from_fn(g, move |x, y| 0.4 * (y + t).sin() + if x_dependent { 0.2 * x.cos() } else { 0.0 }),
                ScalarField::from_fn(g, move |_, y| 0.3 * (2.0 * y - t).cos()),
                ScalarField::from_fn(g, move |_, y| 0.5 * t + 0.2 * y.sin()),
            ]
        };
        let gt = move |t: f64| {
            [
                ScalarField::from_fn(g, move |_, y| 0.4 * (y + t).cos()),
                ScalarField::from_fn(g, move |_, y| 0.3 * (2.0 * y - t).sin()),
                ScalarField::filled(g, 0.5),
            ]
        };
        let tr = gauge_generated_triple(basis, gf, gt, 0.0, dt, n).unwrap();
        let frames = TimeStack::sample(0.0, dt, n, |t| {
            let f = gf(t);
            MatrixField::from_index_fn(g, |i| {
                (basis[0] * f[0].data()[i]).exp() * (basis[1] * f[1].data()[i]).exp() * (basis[2] * f[2].data()[i]).exp()
            })
        })
        .unwrap();
        (tr, frames)
    }

    #[test]
    fn gauge_to_spin_pattern_and_m0() {
        let g = Grid2::new(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let (a, dt, n) = (2.0, 0.01, 7);
        let basis = frame_basis(1.0);
        // source triple from an x-dependent frame F, target R = G(y,t) exp(a x X1)
        let (src, f) = rotation_triple(g, dt, n, true);
        let (_, gy) = rotation_triple(g, dt, n, false);
        assert!(mmlxii_residual(&src).unwrap().iter().all(|r| r.linf < 1e-6));
        let e = TimeStack::new(
            0.0,
            dt,
            (0..n)
                .map(|i| {
                    let rot = MatrixField::from_fn(g, |x, _| (basis[0] * (a * x)).exp());
                    gy.slice(i).matmul(&rot).unwrap().matmul(&f.slice(i).inverse().unwrap()).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let out = gauge_conjugate(&e, &src, false).unwrap();
        let fit = extract_structure(out.a.slice(3), 1.0, (1.0, 1.0), 1e-8);
        assert!(fit.mismatch.is_none(), "{:?}", fit.mismatch);
        assert!((fit.a - a).abs() < 1e-8);
        let s = spin_matrices(&out, fit.a);
        let r = m0_residual(&s, &out.b, &out.d, fit.a, false).unwrap();
        assert!(r.iter().all(|x| x.linf < 1e-6), "{r:?}");
        let lit = m0_residual(&s, &out.b, &out.d, fit.a, true).unwrap();
        assert!(lit[0].linf > 0.05);
        let lit = gauge_conjugate(&e, &src, true).unwrap();
        assert!(mmlxii_residual(&lit).unwrap()[0].linf > 0.05);
    }
}

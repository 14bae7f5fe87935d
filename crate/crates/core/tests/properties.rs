use proptest::prelude::*;
use std::f64::consts::PI;

use sdym_chain::field::{commutator, ComplexField, MatrixField, ScalarField};
use sdym_chain::fixtures::{gauge_triple, random_connection, random_matrix_triple, smooth_gauge, DsData};
use sdym_chain::frames::{
    frame_matrices, gauge_generated_coefficients, integrate_frame_1p1, nls_plane_wave, to_su2, wki, wki_direct, zero_curvature_residual_1p1, zs_akns,
    zs_akns_direct, zs_akns_expansion, CoefficientSet1p1, FrameOptions, LambdaSeries,
};
use sdym_chain::grid::{Axis, Grid2};
use sdym_chain::io::{decode_values, encode_values, AnyField};
use sdym_chain::mat::Mat;
use sdym_chain::mmlxii::{lax_apply, lax_transport, mmlxii_fields, mmlxii_residual, plane_case_residual, su2_basis, CoefficientSet2p1, LaxParams, Triple};
use sdym_chain::random::SmoothRng;
use sdym_chain::reductions::ds::ds_phase_integrands;
use sdym_chain::reductions::ishimori::unit_defect;
use sdym_chain::reductions::{ds_construct, ds_construct_detrended, ds_modulus_defects, kp_residual, miura_lax_field, PhaseSources};
use sdym_chain::sdym::{bianchi_defect, bogomolny_fields, embedding_defect, gauge_covariance_defect, HiggsTriple};
use sdym_chain::solvers::{solve_ds, solve_heisenberg1d, solve_kp, Scheme, SolveConfig};
use sdym_chain::spectral::{d, deriv, inv_deriv_x, row_means};
use sdym_chain::surface::{christoffel, curvatures, fundamental_forms, metric_compatibility, riemann, sphere_chart, sphere_euler_characteristic, torus_chart};
use sdym_chain::{Complex64, TimeStack};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn random_complex(rng: &mut SmoothRng, g: Grid2, amp: f64) -> ComplexField {
    let (a, b) = (rng.field(g, amp, false), rng.field(g, amp, false));
    a.zip_map(&b, Complex64::new)
}

fn random_mat(rng: &mut SmoothRng, dim: usize) -> Mat {
    let mut m = Mat::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            m.set(r, c, Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
        }
    }
    m
}

fn cheap() -> ProptestConfig {
    ProptestConfig { cases: 12, ..ProptestConfig::default() }
}

fn costly() -> ProptestConfig {
    ProptestConfig { cases: 4, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn derivative_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, order in 1u32..4) {
        let g = Grid2::new(32, 16, 2.0 * PI, 3.0).unwrap();
        let mut rng = SmoothRng::new(seed, 4);
        let (f, h) = (rng.field(g, 1.0, false), rng.field(g, 1.0, false));
        for axis in [Axis::X, Axis::Y] {
            let lhs = deriv(&(&(&f * a) + &(&h * b)), axis, order).unwrap();
            let rhs = &(&deriv(&f, axis, order).unwrap() * a) + &(&deriv(&h, axis, order).unwrap() * b);
            prop_assert!((&lhs - &rhs).max_abs() < 1e-12 * (1.0 + rhs.max_abs()));
        }
    }

    #[test]
    fn inverse_x_derivative_round_trip(seed in any::<u64>()) {
        let g = Grid2::new(32, 16, 5.0, 2.0 * PI).unwrap();
        let f = SmoothRng::new(seed, 4).zero_x_mean_field(g, 1.0);
        let back = d(&inv_deriv_x(&f).unwrap(), Axis::X);
        prop_assert!((&back - &f).max_abs() < 1e-10);
    }

    #[test]
    fn commutator_is_antisymmetric_and_jacobi(seed in any::<u64>(), dim in 2usize..4) {
        let mut rng = SmoothRng::new(seed, 1);
        let g = Grid2::square(8).unwrap();
        let [a, b, c] = [(); 3].map(|_| MatrixField::filled(g, random_mat(&mut rng, dim)));
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!(ab.data().iter().zip(ba.data()).all(|(x, y)| x.entries().zip(y.entries()).all(|(u, v)| u == -v)));
        let jac = &(&commutator(&a, &commutator(&b, &c).unwrap()).unwrap() + &commutator(&b, &commutator(&c, &a).unwrap()).unwrap())
            + &commutator(&c, &ab).unwrap();
        prop_assert!(jac.max_abs() < 1e-12);
    }

    #[test]
    fn spectral_pair_two_path(seed in any::<u64>(), re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let g = Grid2::square(16).unwrap();
        let mut rng = SmoothRng::new(seed, 3);
        let (p, q) = (random_complex(&mut rng, g, 2.0), random_complex(&mut rng, g, 2.0));
        let l = Complex64::new(re, im);
        prop_assert!((&zs_akns(&p, &q, l).unwrap() - &zs_akns_direct(&p, &q, l).unwrap()).max_abs() < 1e-14);
        prop_assert!((&wki(&p, &q, l).unwrap() - &wki_direct(&p, &q, l).unwrap()).max_abs() < 1e-14);
    }

    #[test]
    fn lambda_expansion_is_linear_in_coefficients(seed in any::<u64>(), s in -2.0f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let g = Grid2::square(16).unwrap();
        let mut rng = SmoothRng::new(seed, 3);
        let (p, q, f) = (random_complex(&mut rng, g, 1.0), random_complex(&mut rng, g, 1.0), random_complex(&mut rng, g, 1.0));
        let l = Complex64::new(re, im);
        let base = zs_akns_expansion(&p, &q).unwrap();
        let mut shifted = base.clone();
        shifted.sigma = shifted.sigma.plus(sdym_chain::frames::LambdaTerm::Power(2, f.scale(Complex64::new(s, 0.0))));
        let (c0, c1) = (base.evaluate(l).unwrap(), shifted.evaluate(l).unwrap());
        let expected = &c0.sigma + &f.scale(l * l * s);
        prop_assert!((&c1.sigma - &expected).max_abs() < 1e-12 * (1.0 + expected.max_abs()));
        prop_assert!((&c1.k - &c0.k).max_abs() == 0.0);
        let doubled = LambdaSeries::power(1, f.clone()).plus(sdym_chain::frames::LambdaTerm::Power(1, f.clone()));
        prop_assert!((&doubled.evaluate(l, g) - &f.scale(l * 2.0)).max_abs() < 1e-12 * (1.0 + f.max_abs()));
    }

    #[test]
    fn frame_and_spin_forms_vanish_together(kappa in -2i32..=2, m in 1u32..=8, lambda in -1.5f64..1.5, corrupt in any::<bool>()) {
        let g = Grid2::square(32).unwrap();
        let amp = (f64::from(m) / 2.0).sqrt();
        let mut cs = nls_plane_wave(g, amp, f64::from(kappa), lambda).unwrap();
        if corrupt {
            cs = CoefficientSet1p1::new(cs.k.scale(Complex64::new(1.1, 0.0)), cs.sigma, cs.tau, cs.omega, cs.beta).unwrap();
        }
        let (fx, ft) = frame_matrices(&cs);
        let (ux, ut) = to_su2(&cs);
        let three = zero_curvature_residual_1p1(&fx, &ft).unwrap().linf;
        let two = zero_curvature_residual_1p1(&ux, &ut).unwrap().linf;
        prop_assert_eq!(three < 1e-10, two < 1e-10, "3x3 {} 2x2 {}", three, two);
        prop_assert_eq!(three < 1e-10, !corrupt);
    }

    #[test]
    fn ds_modulus_identities(seed in any::<u64>()) {
        let g = Grid2::square(16).unwrap();
        let data = DsData::random(g, seed);
        let inp = data.inputs();
        let (i1, _) = ds_phase_integrands(&inp, I, &PhaseSources::zeros(g));
        let ds = ds_construct(&inp, I, &PhaseSources::from_combination(row_means(&i1))).unwrap();
        prop_assert!(ds_modulus_defects(&ds, &data.k, &data.m3).0 < 1e-12);
        let ds = ds_construct_detrended(&inp, ONE).unwrap();
        prop_assert!(ds_modulus_defects(&ds, &data.k, &data.m3).1 < 1e-12);
    }

    #[test]
    fn miura_identity_for_any_zero_mean_data(seed in any::<u64>(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let g = Grid2::square(128).unwrap();
        let k = SmoothRng::new(seed, 4).zero_x_mean_field(g, 0.8);
        prop_assert!(miura_lax_field(&k, Complex64::new(re, im)).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn field_blocks_round_trip(values in prop::collection::vec(any::<f64>(), 0..64)) {
        let back = decode_values(&encode_values(&values)).unwrap();
        prop_assert_eq!(back.len(), values.len());
        prop_assert!(back.iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn any_field_values_round_trip(seed in any::<u64>(), dim in 2usize..4) {
        let g = Grid2::new(8, 10, 1.5, 2.5).unwrap();
        let mut rng = SmoothRng::new(seed, 2);
        let fields = [
            AnyField::Real(rng.field(g, 1.0, false)),
            AnyField::Complex(random_complex(&mut rng, g, 1.0)),
            AnyField::Matrix(rng.complex_matrix_field(g, dim, 1.0)),
        ];
        for f in fields {
            let h = f.header("f");
            prop_assert_eq!(AnyField::from_values(&h, &f.values()).unwrap(), f);
        }
    }
}

proptest! {
    #![proptest_config(costly())]

    #[test]
    fn frame_transport_preserves_gram(seed in any::<u64>(), lorentzian in any::<bool>()) {
        let beta = if lorentzian { -1.0 } else { 1.0 };
        let g = Grid2::square(32).unwrap();
        let mut rng = SmoothRng::new(seed, 2);
        let f: Vec<ScalarField> = (0..3).map(|_| rng.field(g, 0.5, false)).collect();
        let cs = gauge_generated_coefficients([&f[0], &f[1], &f[2]], beta).unwrap();
        let fr = integrate_frame_1p1(&cs, Mat::identity(3), FrameOptions::default()).unwrap();
        prop_assert!(fr.gram_drift() < 1e-7, "{}", fr.gram_drift());
    }

    #[test]
    fn transport_of_flat_triple_solves_lax_pair(seed in any::<u64>(), re in -1.0f64..1.0, im in 0.1f64..1.0) {
        let g = Grid2::square(32).unwrap();
        let tr = gauge_triple(g, su2_basis(), seed, 0.02, 7).unwrap();
        let eps = mmlxii_residual(&tr).unwrap().iter().map(|r| r.linf).fold(0.0, f64::max);
        let gs = lax_transport(&tr, Default::default()).unwrap();
        let params = LaxParams { a: 0.7, e: -0.3, lambda: Complex64::new(re, im) };
        let worst = lax_apply(&tr, params, &gs).unwrap().iter().map(|(l, m)| l.max_abs().max(m.max_abs())).fold(0.0, f64::max);
        prop_assert!(worst < 10.0 * eps.max(1e-9), "Lax {worst:e} vs residual {eps:e}");
    }

    #[test]
    fn plane_data_specializes_general_system(seed in any::<u64>()) {
        let g = Grid2::square(32).unwrap();
        let mut rng = SmoothRng::new(seed, 3);
        let (k0, m0, w0) = (rng.field(g, 1.0, false), rng.field(g, 1.0, false), rng.field(g, 1.0, false));
        let dt = 0.01;
        let at = |f: &ScalarField, t: f64| f * (1.0 + t);
        let n = 5;
        let sets: Vec<CoefficientSet2p1> =
            (0..n).map(|i| { let t = i as f64 * dt; CoefficientSet2p1::plane(&at(&k0, t), &at(&m0, t.sin()), &at(&w0, t * t), 1.0).unwrap() }).collect();
        let (three, _) = Triple::from_coefficients(&sets, 0.0, dt).unwrap();
        let k = TimeStack::sample(0.0, dt, n, |t| at(&k0, t)).unwrap();
        let m3 = TimeStack::sample(0.0, dt, n, |t| at(&m0, t.sin())).unwrap();
        let om = TimeStack::sample(0.0, dt, n, |t| at(&w0, t * t)).unwrap();
        let plane = plane_case_residual(&k, &m3, &om).unwrap().map(|r| r.linf);
        let general = mmlxii_residual(&three).unwrap().map(|r| r.linf);
        let (pmax, gmax) = (plane.iter().cloned().fold(0.0, f64::max), general.iter().cloned().fold(0.0, f64::max));
        prop_assert!((pmax - gmax).abs() < 1e-14 * (1.0 + pmax), "plane {plane:?} general {general:?}");
        let kp = kp_residual(&k, &m3, ONE).unwrap();
        prop_assert!((kp[1].linf - plane[0]).abs() < 1e-14 * (1.0 + plane[0]));
    }

    #[test]
    fn bogomolny_collapse_and_embedding(seed in any::<u64>(), dim in 2usize..4) {
        let g = Grid2::square(16).unwrap();
        let tr = random_matrix_triple(g, dim, seed).unwrap();
        let zero = tr.a.map(|s| MatrixField::zeros(*s.grid(), dim));
        let b = bogomolny_fields(&HiggsTriple::new(zero, tr.clone()).unwrap()).unwrap();
        let m = mmlxii_fields(&tr).unwrap();
        for (x, y) in b.iter().zip(&m) {
            for j in 0..3 {
                prop_assert!((&x[j] - &y[j]).max_abs() <= 1e-15);
            }
        }
        prop_assert!(embedding_defect(&tr).unwrap() < 1e-10);
    }

    #[test]
    fn field_strength_is_gauge_covariant(seed in any::<u64>()) {
        let g = Grid2::square(64).unwrap();
        let conn = random_connection(g, seed, 7, 0.005).unwrap();
        let phi = smooth_gauge(g, seed.wrapping_add(1), 7, 0.005).unwrap();
        let cov = gauge_covariance_defect(&conn, &phi).unwrap();
        prop_assert!(cov < 1e-8, "{cov:e}");
        let b = bianchi_defect(&conn).unwrap();
        prop_assert!(b < 1e-7, "{b:e}");
    }

    #[test]
    fn kp_solver_conserves_mass(seed in any::<u64>(), imaginary in any::<bool>()) {
        let g = Grid2::square(32).unwrap();
        let alpha = if imaginary { I } else { ONE };
        let k0 = SmoothRng::new(seed, 3).zero_x_mean_field(g, 0.2);
        let cfg = SolveConfig::new(g, 0.01, 1e-3, Scheme::Etd4).unwrap();
        let s = solve_kp(&k0, alpha, &cfg).unwrap();
        prop_assert!(s.diagnostic("mass_drift").unwrap() / cfg.t_end < 1e-10);
    }

    #[test]
    fn ds_solver_conserves_power(seed in any::<u64>()) {
        let g = Grid2::square(32).unwrap();
        let q0 = random_complex(&mut SmoothRng::new(seed, 3), g, 0.3);
        let cfg = SolveConfig::new(g, 0.05, 0.005, Scheme::SplitStep).unwrap();
        let s = solve_ds(&q0, &cfg).unwrap();
        prop_assert!(s.diagnostic("power_drift").unwrap() / cfg.t_end < 1e-6);
    }

    #[test]
    fn heisenberg_solver_keeps_unit_spin(seed in any::<u64>()) {
        let g = Grid2::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let mut rng = SmoothRng::new(seed, 2);
        let v: Vec<ScalarField> = (0..3).map(|_| rng.field(g, 0.5, false)).collect();
        let z = v[2].map(|x| x + 1.0);
        let norm = ScalarField::from_index_fn(g, |i| (v[0].data()[i].powi(2) + v[1].data()[i].powi(2) + z.data()[i].powi(2)).sqrt());
        let s0 = [&v[0], &v[1], &z].map(|f| f.zip_map(&norm, |a, n| a / n));
        let cfg = SolveConfig::new(g, 0.05, 1e-3, Scheme::Rk4If).unwrap().with_save_every(10).unwrap();
        let sol = solve_heisenberg1d(&s0, &cfg).unwrap();
        prop_assert!(unit_defect(&sol.s) < 1e-8);
    }
}

#[test]
fn theorema_egregium_and_metric_compatibility() {
    for p in [sphere_chart(128, 2.0).unwrap(), torus_chart(128, 2.0, 0.7).unwrap()] {
        let geom = fundamental_forms(&p).unwrap();
        let gamma = christoffel(&geom).unwrap();
        let (k, _) = curvatures(&geom).unwrap();
        let intrinsic = riemann(&gamma).r1212.zip_map(&geom.det_g(), |r, dg| r / dg);
        let mask = geom.mask();
        let worst = k
            .data()
            .iter()
            .zip(intrinsic.data())
            .enumerate()
            .filter(|(i, _)| mask.is_none_or(|m| m[*i]))
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst:e}");
        assert!(metric_compatibility(&geom, &gamma).linf < 1e-8);
    }
}

#[test]
fn euler_characteristic_is_refinement_invariant() {
    let chi: Vec<f64> = [64, 128, 256].iter().map(|n| sphere_euler_characteristic(*n, 2.0).unwrap()).collect();
    for w in chi.windows(2) {
        assert!((w[0] - w[1]).abs() < 1e-6, "{chi:?}");
    }
}

//! The named suites. Each builds its fixtures, evaluates the residual
//! operators and records one check per identity.

use std::f64::consts::PI;

use sdym_chain::field::{ComplexField, MatrixField, ScalarField};
use sdym_chain::fixtures::{
    ds_plane_wave_stack, gauge_triple, kdv_bound_state, kdv_stack, m0_fixture, perturb_m3, perturb_m3_stack, random_matrix_triple, smooth_gauge,
    travelling_plane, DsData,
};
use sdym_chain::frames::{
    frame_matrices, gauge_generated_coefficients, integrate_frame_1p1, m0_residual_1p1, nls_plane_wave, spin_from_coeffs, to_su2, wki, wki_direct,
    zero_curvature_residual_1p1, zs_akns, zs_akns_direct, CoefficientSet1p1, FrameOptions,
};
use sdym_chain::grid::{Axis, Grid2};
use sdym_chain::mat::Mat;
use sdym_chain::mmlxii::{frame_basis, lax_apply, lax_transport, linear_problem_residual, mmlxii_fields, mmlxii_residual, plane_case_residual, su2_basis, LaxParams};
use sdym_chain::random::SmoothRng;
use sdym_chain::reductions::ds::{ds_construct_detrended, ds_phase_integrands};
use sdym_chain::reductions::ishimori::{spin_wave, unit_defect};
use sdym_chain::reductions::kp::{kdv_soliton, plane_spin};
use sdym_chain::reductions::spin::spin_matrices;
use sdym_chain::reductions::{
    ds_construct, ds_modulus_defects, ds_residual, extract_structure, gauge_conjugate, ishimori_residual, kp_lax_residual, kp_residual, m0_residual,
    miura_lax_field, miura_u, mkp_residual, mx_omega3, mx_residual, PhaseSources, SpinField2p1,
};
use sdym_chain::residual::{residual_norm, residual_norm_masked};
use sdym_chain::sdym::{
    bianchi_defect, bogomolny_fields, embed_bogomolny, embed_mmlxii, embedding_defect, gauge_covariance_defect, pure_gauge, sdym_fields, sdym_residual,
    HiggsTriple, StrengthForm,
};
use sdym_chain::solvers::ds::ds_stack;
use sdym_chain::solvers::{solve_ds, solve_heisenberg1d, solve_kp, solve_mkp, Scheme, SolveConfig};
use sdym_chain::spectral::{d, inv_deriv_x, row_means};
use sdym_chain::surface::{
    christoffel, curvatures, cylinder_chart, fundamental_forms, gauss_codazzi_residual, gw_residual, integral_curvature, metric_compatibility,
    sphere_chart, sphere_euler_characteristic, torus_chart, CurvaturePatch,
};
use sdym_chain::{Complex64, TimeStack};

use crate::{CliResult, Recorder};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn run_suite(rec: &mut Recorder) -> CliResult<()> {
    match rec.suite {
        "surface" => surface(rec),
        "frames-1p1" => frames_1p1(rec),
        "mmlxii" => mmlxii(rec),
        "ishimori-ds" => ishimori_ds(rec),
        "kp" => kp(rec),
        "mkp-miura" => mkp_miura(rec),
        "m0-spin" => m0_spin(rec),
        "sdym-embed" => sdym_embed(rec),
        "bogomolny" => bogomolny(rec),
        other => unreachable!("suite list and dispatch disagree on {other}"),
    }
}

fn m3_of(k: &TimeStack<f64>) -> CliResult<TimeStack<f64>> {
    Ok(k.try_map(|f| inv_deriv_x(&d(f, Axis::Y)))?)
}

fn corrupt(rec: &Recorder, m3: &TimeStack<f64>, k: &TimeStack<f64>) -> CliResult<TimeStack<f64>> {
    if rec.opts.corrupt_m3 > 0.0 {
        Ok(perturb_m3_stack(m3, k, rec.opts.corrupt_m3)?)
    } else {
        Ok(m3.clone())
    }
}

fn surface(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(64);
    let radius = 2.0;
    let p = sphere_chart(n, radius)?;
    let geom = fundamental_forms(&p)?;
    let gamma = christoffel(&geom)?;
    let (k, _) = curvatures(&geom)?;
    let dk = k.map(|v| v - 1.0 / (radius * radius));
    rec.report("sphere-gauss-curvature", "Gauss curvature of the round sphere equals 1/R^2", &residual_norm_masked(&dk, geom.mask(), "K - 1/R^2"), 1e-8);
    rec.report("sphere-gauss-codazzi", "Gauss and Codazzi-Mainardi compatibility of the fundamental forms", &gauss_codazzi_residual(&geom)?, 1e-7);
    rec.report("sphere-gauss-weingarten", "Gauss-Weingarten derivative formulas for the moving trihedral", &gw_residual(&p, &geom, &gamma)?, 1e-7);
    rec.report("sphere-metric-compatibility", "Christoffel symbols are metric compatible", &metric_compatibility(&geom, &gamma), 1e-8);
    rec.field("sphere_gauss_curvature", k);
    let chi = sphere_euler_characteristic(n, radius)?;
    rec.scalar("sphere-euler-characteristic", "Gauss-Bonnet: integral curvature of the sphere is 2", (chi - 2.0).abs(), 1e-6);
    let t = torus_chart(n, 2.0, 0.7)?;
    let tg = fundamental_forms(&t)?;
    let (tk, _) = curvatures(&tg)?;
    let chi_t = integral_curvature(&[CurvaturePatch { geom: &tg, curvature: &tk, weight: None }]);
    rec.scalar("torus-euler-characteristic", "Gauss-Bonnet: integral curvature of the torus is 0", chi_t.abs(), 1e-6);
    let c = cylinder_chart(n)?;
    let (ck, _) = curvatures(&fundamental_forms(&c)?)?;
    rec.report("cylinder-flat", "the cylinder is intrinsically flat", &residual_norm(&ck, "K"), 1e-12);
    Ok(())
}

fn random_complex(rng: &mut SmoothRng, g: Grid2) -> ComplexField {
    let (a, b) = (rng.field(g, 1.0, false), rng.field(g, 1.0, false));
    a.zip_map(&b, Complex64::new)
}

fn frames_1p1(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(32);
    let g = Grid2::square(n)?;
    let mut rng = SmoothRng::new(rec.opts.seed.wrapping_add(101), 2);
    let (mut zs, mut wk) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let (p, q) = (random_complex(&mut rng, g), random_complex(&mut rng, g));
        let lambda = Complex64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        zs = zs.max((&zs_akns(&p, &q, lambda)? - &zs_akns_direct(&p, &q, lambda)?).max_abs());
        wk = wk.max((&wki(&p, &q, lambda)? - &wki_direct(&p, &q, lambda)?).max_abs());
    }
    rec.scalar("zs-akns-two-path", "ZS-AKNS matrix from the spectral expansion equals [[i l, q], [p, -i l]]", zs, 1e-14);
    rec.scalar("wki-two-path", "WKI matrix from the spectral expansion equals its direct form", wk, 1e-14);

    let (amp, lambda) = (1.0, 0.5);
    let cs = nls_plane_wave(g, amp, 1.0, lambda)?;
    let (u, v) = to_su2(&cs);
    let (cm, gm) = frame_matrices(&cs);
    rec.report("nls-zero-curvature-2x2", "2x2 zero-curvature condition on the NLS plane wave", &zero_curvature_residual_1p1(&u, &v)?, 1e-10);
    rec.report("nls-zero-curvature-3x3", "3x3 frame compatibility on the NLS plane wave", &zero_curvature_residual_1p1(&cm, &gm)?, 1e-10);
    let nn = (4.0 * lambda * lambda + 4.0 * amp * amp).sqrt();
    let s = spin_from_coeffs(&cs, nn, (1.0, 1.0))?;
    rec.report("nls-spin-equation", "spin form of the zero-curvature condition", &m0_residual_1p1(&s, &v, nn, rec.opts.paper_literal)?, 1e-10);

    for (beta, label) in [(1.0, "frame-gram-drift-euclidean"), (-1.0, "frame-gram-drift-lorentzian")] {
        let mut rng = SmoothRng::new(rec.opts.seed.wrapping_add(11), 2);
        let f: Vec<ScalarField> = (0..3).map(|_| rng.field(g, 0.5, false)).collect();
        let cs = gauge_generated_coefficients([&f[0], &f[1], &f[2]], beta)?;
        let anchor = "frame transport preserves the Gram matrix diag(beta, 1, 1)";
        match integrate_frame_1p1(&cs, Mat::identity(3), FrameOptions::default()) {
            Ok(fr) => {
                rec.scalar(label, anchor, fr.gram_drift(), 1e-7);
                rec.field(label, fr.frame);
            }
            Err(sdym_chain::Error::CurvatureObstruction { residual, .. }) => rec.scalar(label, anchor, residual, 1e-7),
            Err(e) => return Err(e.into()),
        }
        let bad = CoefficientSet1p1::new(cs.k.scale(Complex64::new(1.1, 0.0)), cs.sigma.clone(), cs.tau.clone(), cs.omega.clone(), beta)?;
        let rejected = matches!(integrate_frame_1p1(&bad, Mat::identity(3), FrameOptions::default()), Err(sdym_chain::Error::CurvatureObstruction { .. }));
        let name = format!("{label}-corrupted-rejected");
        rec.scalar(&name, "transport refuses coefficients with nonzero curvature", if rejected { 0.0 } else { 1.0 }, 0.0);
    }
    Ok(())
}

fn mmlxii(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(32);
    let g = Grid2::square(n)?;
    let seed = rec.opts.seed;
    let frame = gauge_triple(g, frame_basis(1.0), seed.wrapping_add(9), 0.02, 7)?;
    rec.reports("gauge-triple-zero-curvature-3x3", "(2+1) zero-curvature system for a flat 3x3 triple", &mmlxii_residual(&frame)?, 1e-6);
    let spin = gauge_triple(g, su2_basis(), seed.wrapping_add(9), 0.02, 7)?;
    rec.reports("gauge-triple-zero-curvature-2x2", "(2+1) zero-curvature system for a flat 2x2 triple", &mmlxii_residual(&spin)?, 1e-6);
    rec.reports("linear-problem", "linear-operator form of the (2+1) system", &linear_problem_residual(&frame, rec.opts.paper_literal)?, 1e-6);
    let gs = lax_transport(&spin, Default::default())?;
    let params = LaxParams { a: 0.7, e: -0.3, lambda: Complex64::new(0.4, 0.2) };
    let worst = lax_apply(&spin, params, &gs)?.iter().map(|(l, m)| l.max_abs().max(m.max_abs())).fold(0.0, f64::max);
    rec.scalar("lax-pair-kernel", "the transported frame solves the spectral-parameter Lax pair", worst, 1e-6);

    let [k, m3, omega] = travelling_plane(g, 0.5, 1.5, 1e-3, 5)?;
    let m3 = corrupt(rec, &m3, &k)?;
    rec.reports("plane-case", "plane case: k_y = m3_x, k_t = omega3_x, m3_t = omega3_y", &plane_case_residual(&k, &m3, &omega)?, 1e-8);
    Ok(())
}

fn ishimori_ds(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(32);
    let g = Grid2::new(n, 8, 2.0 * PI, 2.0 * PI)?;
    let s = [0, 1, 2].map(|c| TimeStack::sample(0.0, 1e-3, 5, |t| spin_wave(g, 0.7, 2.0, t)[c].clone()));
    let [s0, s1, s2] = s;
    let s = [s0?, s1?, s2?];
    let u = TimeStack::constant(ScalarField::zeros(g), 5, 1e-3);
    let sf = SpinField2p1::new(s, u.clone(), ONE)?;
    rec.reports("spin-wave", "spin equation with potential on an exact spin wave", &ishimori_residual(&sf)?, 1e-6);

    let cfg = SolveConfig::new(g, 0.5, 1e-3, Scheme::Rk4If)?.with_save_every(10)?;
    let sol = solve_heisenberg1d(&spin_wave(g, 0.7, 2.0, 0.0), &cfg)?;
    let u = TimeStack::constant(ScalarField::zeros(g), sol.s[0].len(), sol.s[0].dt());
    let sf = SpinField2p1::new(sol.s.clone(), u, ONE)?;
    rec.reports("heisenberg-solver", "spin equation on the Heisenberg solver output", &ishimori_residual(&sf)?, 1e-5);
    rec.scalar("heisenberg-unit-length", "|S| = 1 along the solver output", unit_defect(&sol.s), 1e-12);

    let gw = Grid2::new(32, 32, 2.0 * PI, 4.0 * PI)?;
    for (alpha, label) in [(ONE, "ds-plane-wave-hyperbolic"), (I, "ds-plane-wave-elliptic")] {
        let st = ds_plane_wave_stack(gw, 0.7, 1.0, 0.5, 0.3, alpha, 0.002, 5)?;
        rec.reports(label, "Schrodinger-type system on its plane wave", &ds_residual(&st)?, 1e-8);
    }

    let gs = Grid2::square(32)?;
    let data = DsData::random(gs, rec.opts.seed.wrapping_add(3));
    let inp = data.inputs();
    let (i1, _) = ds_phase_integrands(&inp, I, &PhaseSources::zeros(gs));
    let ds = ds_construct(&inp, I, &PhaseSources::from_combination(row_means(&i1)))?;
    let m3 = if rec.opts.corrupt_m3 > 0.0 { perturb_m3(&data.m3, &data.k, rec.opts.corrupt_m3) } else { data.m3.clone() };
    let (dm, _) = ds_modulus_defects(&ds, &data.k, &m3);
    rec.scalar("ds-modulus-elliptic", "|q| = |p| when Re(alpha) = 0", dm, 1e-12);
    let ds1 = ds_construct_detrended(&inp, ONE)?;
    let (_, dq) = ds_modulus_defects(&ds1, &data.k, &m3);
    rec.scalar("ds-modulus-hyperbolic", "|q|^2 - |p|^2 + k m3 = 0 when Im(alpha) = 0", dq, 1e-12);
    rec.field("ds_q", ds.q);

    let q0 = ComplexField::from_fn(gs, |x, y| Complex64::new(0.3 * (x + y).cos() + 0.2 * (2.0 * y).sin(), 0.25 * (x - 2.0 * y).sin()));
    let cfg = SolveConfig::new(gs, 0.1, 0.002, Scheme::SplitStep)?.with_save_every(5)?;
    let sol = solve_ds(&q0, &cfg)?;
    rec.reports("ds-solver", "Schrodinger-type system on split-step solver output", &ds_residual(&ds_stack(&sol.stack)?)?, 1e-4);
    rec.scalar("ds-solver-power", "drift of the integral of |q|^2 per unit time", sol.diagnostic("power_drift").unwrap_or(f64::NAN) / cfg.t_end, 1e-6);
    Ok(())
}

fn kp(rec: &mut Recorder) -> CliResult<()> {
    let nx = rec.n(256);
    let g = Grid2::new(nx, 8, 40.0, 2.0 * PI)?;
    let k = kdv_stack(g, 1.0, 20.0, 1e-3, 5)?;
    let m3 = corrupt(rec, &TimeStack::constant(ScalarField::zeros(g), 5, 1e-3), &k)?;
    let [r, c] = kp_residual(&k, &m3, ONE)?;
    rec.report("kdv-soliton", "KP equation on the KdV soliton", &r, 1e-6);
    rec.report("kdv-soliton-constraint", "KP constraint m3_x = k_y", &c, 1e-10);

    let cfg = SolveConfig::new(g, 1.0, 0.002, Scheme::Etd4)?.with_save_every(50)?;
    let sol = solve_kp(&kdv_soliton(g, 1.0, 15.0, 0.0), ONE, &cfg)?;
    let err = (sol.stack.last() - &kdv_soliton(g, 1.0, 15.0, 1.0)).max_abs();
    rec.scalar("solver-soliton-shape", "KP solver translates the soliton at speed 4 kappa^2", err, 1e-4);
    rec.scalar("solver-mass", "KP solver conserves the integral of k", sol.diagnostic("mass_drift").unwrap_or(f64::NAN), 1e-10);
    rec.field("solver_final", sol.stack.last().clone());

    let gr = Grid2::square(32)?;
    let k0 = SmoothRng::new(rec.opts.seed.wrapping_add(5), 3).zero_x_mean_field(gr, 1e-3);
    let cfg = SolveConfig::new(gr, 0.005, 5e-4, Scheme::Etd4)?;
    let sol = solve_kp(&k0, ONE, &cfg)?;
    let m3 = corrupt(rec, &m3_of(&sol.stack)?, &sol.stack)?;
    rec.reports("solver-random-data", "KP equation on solver output from small random data", &kp_residual(&sol.stack, &m3, ONE)?, 1e-5);

    let gb = Grid2::new(384, 8, 60.0, 2.0 * PI)?;
    let kb = kdv_stack(gb, 1.0, 30.0, 1e-3, 5)?;
    let psi = kdv_bound_state(gb, 30.0, 1e-3, 5)?;
    let [l1, l2] = kp_lax_residual(&psi, &kb, &TimeStack::constant(ScalarField::zeros(gb), 5, 1e-3), I)?;
    rec.report("lax-spatial", "spatial KP linear problem on the soliton bound state", &l1, 1e-8);
    rec.report("lax-temporal", "temporal KP linear problem on the soliton bound state", &l2, 1e-6);
    Ok(())
}

fn mkp_miura(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(64);
    let g = Grid2::square(n)?;
    let mut rng = SmoothRng::new(rec.opts.seed.wrapping_add(11), 4);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        worst = worst.max(miura_lax_field(&rng.zero_x_mean_field(g, 0.8), Complex64::new(1.3, 0.0))?.max_abs());
    }
    rec.scalar("miura-lax-identity", "Miura image u with psi = exp(dx^-1 k) solves the spatial linear problem", worst, 1e-9);

    let g = Grid2::square(32)?;
    let mut rng = SmoothRng::new(rec.opts.seed.wrapping_add(9), 3);
    let modes: Vec<(f64, f64)> = (1..=3).map(|_| (rng.uniform(-0.1, 0.1), rng.uniform(0.0, 2.0 * PI))).collect();
    let k0 = ScalarField::from_fn(g, |x, y| modes.iter().enumerate().map(|(m, (a, p))| a * ((m + 1) as f64 * (x + y) + p).cos()).sum());
    let cfg = SolveConfig::new(g, 0.01, 1e-3, Scheme::Etd4)?;
    let sol = solve_mkp(&k0, ONE, &cfg)?;
    let w = m3_of(&sol.stack)?;
    rec.reports("mkp-solver", "mKP equation on solver output", &mkp_residual(&sol.stack, &w, ONE)?, 1e-5);
    let slices: Vec<ScalarField> = (0..sol.stack.len()).map(|i| miura_u(sol.stack.slice(i), w.slice(i), ONE).re()).collect();
    let u = TimeStack::new(sol.stack.t0(), sol.stack.dt(), slices)?;
    let um3 = corrupt(rec, &m3_of(&u)?, &u)?;
    rec.reports("miura-image-kp", "Miura image of an mKP solution solves KP", &kp_residual(&u, &um3, ONE)?, 1e-4);

    let c = 1.0;
    let bump = SmoothRng::new(rec.opts.seed.wrapping_add(17), 2).zero_x_mean_field(g, 0.1);
    let sol = solve_kp(&bump.map(|v| c + v), ONE, &cfg)?;
    let m3 = m3_of(&sol.stack)?;
    let omega = TimeStack::new(
        sol.stack.t0(),
        sol.stack.dt(),
        (0..sol.stack.len()).map(|i| mx_omega3(sol.stack.slice(i), m3.slice(i), ONE, false).map(|f| f.re())).collect::<Result<Vec<_>, _>>()?,
    )?;
    let spin = plane_spin(&sol.stack, &omega, c)?;
    let m3 = corrupt(rec, &m3, &sol.stack)?;
    rec.report("mx-spin-flow", "plane spin built from KP data solves the spin flow", &mx_residual(&spin, &sol.stack, &m3, ONE, rec.opts.paper_literal)?, 1e-4);
    Ok(())
}

fn m0_spin(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(32);
    let g = Grid2::square(n)?;
    let fx = m0_fixture(g, 2.0, 0.01, 7)?;
    rec.reports("source-triple", "(2+1) zero-curvature system on the source triple", &mmlxii_residual(&fx.source)?, 1e-6);
    let out = gauge_conjugate(&fx.gauge, &fx.source, rec.opts.paper_literal)?;
    rec.reports("conjugated-triple", "gauge conjugation preserves zero curvature", &mmlxii_residual(&out)?, 1e-6);
    let fit = extract_structure(out.a.slice(3), 1.0, (1.0, 1.0), 1e-8);
    rec.scalar("spin-pattern", "conjugated x-component has the constant-length spin pattern", fit.pattern_defect, 1e-8);
    rec.scalar("spin-scale-constant", "the scale a of the spin pattern is constant", fit.a_spread, 1e-8);
    let a = if fit.a > 0.0 { fit.a } else { 1.0 };
    let s = spin_matrices(&out, a);
    rec.reports("spin-system", "spin-valued zero-curvature system", &m0_residual(&s, &out.b, &out.d, a, rec.opts.paper_literal)?, 1e-6);
    rec.field("spin_s1", fit.s[0].clone());
    Ok(())
}

fn sdym_embed(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(16);
    let g = Grid2::square(n)?;
    let tr = random_matrix_triple(g, 3, rec.opts.seed.wrapping_add(8))?;
    rec.scalar("embedding-map", "self-duality components equal the mapped (2+1) residuals", embedding_defect(&tr)?, 1e-10);
    let flat = gauge_triple(Grid2::square(rec.n(32))?, su2_basis(), rec.opts.seed.wrapping_add(9), 0.02, 7)?;
    rec.reports("embedded-flat-triple", "embedding of a flat triple is self-dual", &sdym_residual(&embed_mmlxii(&flat)?)?, 1e-6);
    let g32 = Grid2::square(rec.n(32))?;
    let phi = smooth_gauge(g32, rec.opts.seed.wrapping_add(1), 7, 0.005)?;
    rec.reports("pure-gauge", "pure gauge connection is self-dual", &sdym_residual(&pure_gauge(&phi)?)?, 1e-8);
    let conn = sdym_chain::fixtures::random_connection(g32, rec.opts.seed.wrapping_add(4), 7, 0.005)?;
    let phi = smooth_gauge(g32, rec.opts.seed.wrapping_add(5), 7, 0.005)?;
    rec.scalar("gauge-covariance", "field strength transforms by conjugation", gauge_covariance_defect(&conn, &phi)?, 1e-8);
    rec.scalar("bianchi", "Bianchi identity", bianchi_defect(&conn)?, 1e-7);
    Ok(())
}

fn bogomolny(rec: &mut Recorder) -> CliResult<()> {
    let n = rec.n(64);
    let g = Grid2::square(n)?;
    let tr = random_matrix_triple(g, 3, rec.opts.seed.wrapping_add(2))?;
    let zero = tr.a.map(|s| MatrixField::zeros(*s.grid(), 3));
    let h = HiggsTriple::new(zero, tr.clone())?;
    let b = bogomolny_fields(&h)?;
    let m = mmlxii_fields(&tr)?;
    let diff = b.iter().zip(&m).flat_map(|(x, y)| (0..3).map(move |j| (&x[j] - &y[j]).max_abs())).fold(0.0, f64::max);
    rec.scalar("collapse", "with zero Higgs field the Bogomolny residuals equal the (2+1) residuals", diff, 1e-15);

    let mut rng = SmoothRng::new(rec.opts.seed.wrapping_add(12), 2);
    let p0 = rng.real_matrix_field(g, 3, 1.0);
    let psi = TimeStack::sample(0.0, 0.05, 5, |t| &p0 * (1.0 + t))?;
    let h = HiggsTriple::new(psi, tr.clone())?;
    let s = sdym_fields(&embed_bogomolny(&h)?, StrengthForm::Commutator)?;
    let e = bogomolny_fields(&h)?;
    let mut worst = 0.0f64;
    for i in 0..s.len() {
        let [_, e2, e3] = &e[i];
        worst = worst.max((&s[i][0] - &(e3 + &e2.scale(I))).max_abs());
        worst = worst.max((&s[i][1] - &(e3 - &e2.scale(I))).max_abs());
    }
    rec.scalar("embedding", "self-duality components are x +- i y combinations of the Bogomolny residuals", worst, 1e-10);

    let flat = gauge_triple(Grid2::square(rec.n(32))?, su2_basis(), rec.opts.seed.wrapping_add(9), 0.02, 7)?;
    let zero = flat.a.map(|s| MatrixField::zeros(*s.grid(), 2));
    rec.reports("flat-zero-higgs", "Bogomolny equations on a flat triple with zero Higgs field", &sdym_chain::sdym::bogomolny_residual(&HiggsTriple::new(zero, flat)?)?, 1e-6);
    Ok(())
}

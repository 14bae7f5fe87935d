//! Pseudo-spectral KP and mKP integrators. The stiff linear part
//! `-k_xxx - 3 alpha^2 dx^{-1} k_yy` is diagonal in Fourier space and is
//! treated exactly, either by exponential time differencing or by an
//! integrating factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Axis;
use crate::solvers::{Scheme, SolutionStack, SolveConfig};
use crate::spectral::{check_zero_x_mean, d, Fft2};

const I: Complex64 = Complex64::new(0.0, 1.0);
const CONTOUR_POINTS: usize = 32;
const BLOW_UP: f64 = 1e6;

/// Fourier workspace for real fields on one grid.
pub(crate) struct Spectral {
    pub fft: Fft2,
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    /// `i k_x` with the Nyquist column removed.
    pub ikx: Vec<Complex64>,
    pub mask: Vec<bool>,
    pub dealias: bool,
}

impl Spectral {
    pub fn new(grid: crate::grid::Grid2, dealias: bool) -> Self {
        let fft = Fft2::new(grid);
        let n = grid.len();
        let mut kx = Vec::with_capacity(n);
        let mut ky = Vec::with_capacity(n);
        let mut ikx = Vec::with_capacity(n);
        for idx in 0..n {
            let (a, b) = fft.k(idx);
            let (i, _) = grid.coords(idx);
            kx.push(a);
            ky.push(b);
            ikx.push(if i == grid.nx() / 2 { Complex64::new(0.0, 0.0) } else { I * a });
        }
        let mask = fft.dealias_mask();
        Self { fft, kx, ky, ikx, mask, dealias }
    }

    pub fn forward_real(&self, f: &[f64]) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = f.iter().map(|&x| x.into()).collect();
        self.fft.forward(&mut v);
        v
    }

    pub fn forward(&self, mut v: Vec<Complex64>) -> Vec<Complex64> {
        self.fft.forward(&mut v);
        v
    }

    pub fn inverse(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut w = v.to_vec();
        self.fft.inverse(&mut w);
        w
    }

    pub fn inverse_real(&self, v: &[Complex64]) -> Vec<f64> {
        self.inverse(v).into_iter().map(|z| z.re).collect()
    }

    pub fn truncate(&self, v: &mut [Complex64]) {
        if self.dealias {
            for (c, keep) in v.iter_mut().zip(&self.mask) {
                if !keep {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Symbol of `dx^{-1}`, zero on the `k_x = 0` column and the Nyquist column.
    pub fn inv_dx(&self, idx: usize) -> Complex64 {
        if self.ikx[idx].norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            1.0 / self.ikx[idx]
        }
    }
}

/// Linear symbol `i k_x^3 - 3 i alpha^2 k_y^2 / k_x` shared by KP and mKP.
fn kp_symbol(sp: &Spectral, alpha2: f64) -> Vec<Complex64> {
    (0..sp.kx.len())
        .map(|i| {
            if sp.ikx[i].norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let kx = sp.kx[i];
                I * kx * kx * kx + 3.0 * alpha2 * sp.ky[i] * sp.ky[i] * sp.inv_dx(i)
            }
        })
        .collect()
}

/// Exponential time-differencing coefficients (contour-integral evaluation).
struct EtdCoefficients {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl EtdCoefficients {
    fn new(lin: &[Complex64], h: f64) -> Self {
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64))
            .flat_map(|r| [r, r.conj()])
            .collect();
        let m = roots.len() as f64;
        let mut out = Self { e: vec![], e2: vec![], q: vec![], f1: vec![], f2: vec![], f3: vec![] };
        for &l in lin {
            let z = l * h;
            out.e.push(z.exp());
            out.e2.push((z / 2.0).exp());
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &r0 in &roots {
                let r = z + r0;
                let er = r.exp();
                let r3 = r * r * r;
                q += ((r / 2.0).exp() - 1.0) / r;
                f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
                f2 += (2.0 + r + er * (r - 2.0)) / r3;
                f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
            }
            out.q.push(q * h / m);
            out.f1.push(f1 * h / m);
            out.f2.push(f2 * h / m);
            out.f3.push(f3 * h / m);
        }
        out
    }
}

type Nonlinear<'a> = dyn Fn(&[Complex64]) -> Vec<Complex64> + 'a;

fn axpy(a: &[Complex64], x: &[Complex64], b: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(x).zip(b.iter().zip(y)).map(|((a, x), (b, y))| a * x + b * y).collect()
}

fn etd_step(v: &[Complex64], c: &EtdCoefficients, n: &Nonlinear) -> Vec<Complex64> {
    let nv = n(v);
    let a = axpy(&c.e2, v, &c.q, &nv);
    let na = n(&a);
    let b = axpy(&c.e2, v, &c.q, &na);
    let nb = n(&b);
    let two_nb_minus: Vec<Complex64> = nb.iter().zip(&nv).map(|(b, v)| 2.0 * b - v).collect();
    let cc = axpy(&c.e2, &a, &c.q, &two_nb_minus);
    let nc = n(&cc);
    (0..v.len()).map(|i| c.e[i] * v[i] + nv[i] * c.f1[i] + 2.0 * (na[i] + nb[i]) * c.f2[i] + nc[i] * c.f3[i]).collect()
}

fn if_step(v: &[Complex64], lin: &[Complex64], h: f64, n: &Nonlinear) -> Vec<Complex64> {
    let e2: Vec<Complex64> = lin.iter().map(|l| (l * h / 2.0).exp()).collect();
    let e: Vec<Complex64> = e2.iter().map(|x| x * x).collect();
    let a: Vec<Complex64> = n(v).into_iter().map(|x| x * h).collect();
    let s1: Vec<Complex64> = (0..v.len()).map(|i| e2[i] * (v[i] + a[i] / 2.0)).collect();
    let b: Vec<Complex64> = n(&s1).into_iter().map(|x| x * h).collect();
    let s2: Vec<Complex64> = (0..v.len()).map(|i| e2[i] * v[i] + b[i] / 2.0).collect();
    let c: Vec<Complex64> = n(&s2).into_iter().map(|x| x * h).collect();
    let s3: Vec<Complex64> = (0..v.len()).map(|i| e[i] * v[i] + e2[i] * c[i]).collect();
    let dd: Vec<Complex64> = n(&s3).into_iter().map(|x| x * h).collect();
    (0..v.len()).map(|i| e[i] * v[i] + (e[i] * a[i] + 2.0 * e2[i] * (b[i] + c[i]) + dd[i]) / 6.0).collect()
}

/// Snapshots produced before an optional abort.
#[derive(Debug)]
pub struct PartialRun {
    pub slices: Vec<ScalarField>,
    pub t0: f64,
    pub dt: f64,
    pub error: Option<Error>,
}

fn integrate(k0: &ScalarField, lin: &[Complex64], n: &Nonlinear, sp: &Spectral, cfg: &SolveConfig) -> PartialRun {
    let grid = *k0.grid();
    let mut v = sp.forward_real(k0.data());
    let coeffs = (cfg.scheme == Scheme::Etd4).then(|| EtdCoefficients::new(lin, cfg.dt));
    let mut run = PartialRun { slices: vec![k0.clone()], t0: 0.0, dt: cfg.dt * cfg.save_every as f64, error: None };
    for step in 1..=cfg.steps() {
        v = match &coeffs {
            Some(c) => etd_step(&v, c, n),
            None => if_step(&v, lin, cfg.dt, n),
        };
        if step % cfg.save_every == 0 {
            let f = ScalarField::from_vec(grid, sp.inverse_real(&v)).expect("grid length");
            let linf = f.max_abs();
            if !linf.is_finite() || linf > BLOW_UP {
                run.error = Some(Error::BlowUp { t: step as f64 * cfg.dt, linf });
                return run;
            }
            run.slices.push(f);
        }
    }
    run
}

fn check_scheme(cfg: &SolveConfig) -> Result<()> {
    match cfg.scheme {
        Scheme::Etd4 | Scheme::Rk4If => Ok(()),
        Scheme::SplitStep => Err(Error::Argument("KP-type equations use etd4 or rk4-if".into())),
    }
}

fn real_alpha2(alpha: Complex64) -> Result<f64> {
    let a2 = alpha * alpha;
    if a2.im.abs() > 1e-14 {
        return Err(Error::Argument(format!("alpha^2 = {a2} must be real for real evolution")));
    }
    Ok(a2.re)
}

/// Advective step bound `dt * k_max * speed <= 2`.
fn check_cfl(cfg: &SolveConfig, speed: f64) -> Result<()> {
    let kmax = std::f64::consts::PI * cfg.grid.nx() as f64 / cfg.grid.lx();
    let c = cfg.dt * kmax * speed;
    if c > 2.0 {
        return Err(Error::Argument(format!("dt = {} too large for the nonlinear term (dt k_max |speed| = {c:.2} > 2)", cfg.dt)));
    }
    Ok(())
}

fn finish(run: PartialRun, k0: &ScalarField) -> Result<SolutionStack<f64>> {
    if let Some(e) = run.error {
        return Err(e);
    }
    let mass0 = k0.mean();
    let l20 = (k0 * k0).mean();
    let mass_drift = run.slices.iter().map(|s| (s.mean() - mass0).abs()).fold(0.0, f64::max) * k0.grid().lx() * k0.grid().ly();
    let l2_drift = run.slices.iter().map(|s| ((s * s).mean() - l20).abs()).fold(0.0, f64::max) / l20.max(f64::MIN_POSITIVE);
    let mut out = SolutionStack::new(run.t0, run.dt, run.slices)?;
    out.diagnostics.push(("mass_drift".into(), mass_drift));
    out.diagnostics.push(("l2_relative_drift".into(), l2_drift));
    Ok(out)
}

/// Evolves `k_t = -6 k k_x - k_xxx - 3 alpha^2 dx^{-1} k_yy`, returning the
/// snapshots produced so far and the abort reason, if any.
pub fn solve_kp_partial(k0: &ScalarField, alpha: Complex64, cfg: &SolveConfig) -> Result<PartialRun> {
    cfg.validate()?;
    check_scheme(cfg)?;
    cfg.grid.check_same(k0.grid())?;
    check_zero_x_mean(&d(k0, Axis::Y))?;
    let alpha2 = real_alpha2(alpha)?;
    check_cfl(cfg, 6.0 * k0.max_abs())?;
    let sp = Spectral::new(cfg.grid, cfg.dealias);
    let lin = kp_symbol(&sp, alpha2);
    let n = |v: &[Complex64]| {
        let k = sp.inverse_real(v);
        let mut sq = sp.forward_real(&k.iter().map(|x| x * x).collect::<Vec<_>>());
        for (c, ik) in sq.iter_mut().zip(&sp.ikx) {
            *c *= -3.0 * ik;
        }
        sp.truncate(&mut sq);
        sq
    };
    Ok(integrate(k0, &lin, &n, &sp, cfg))
}

pub fn solve_kp(k0: &ScalarField, alpha: Complex64, cfg: &SolveConfig) -> Result<SolutionStack<f64>> {
    finish(solve_kp_partial(k0, alpha, cfg)?, k0)
}

/// Evolves `k_t = 6 k^2 k_x - k_xxx + 3 alpha (2 k_x w - alpha w_y)` with
/// `w = dx^{-1} k_y`.
pub fn solve_mkp(k0: &ScalarField, alpha: Complex64, cfg: &SolveConfig) -> Result<SolutionStack<f64>> {
    cfg.validate()?;
    check_scheme(cfg)?;
    cfg.grid.check_same(k0.grid())?;
    check_zero_x_mean(&d(k0, Axis::Y))?;
    let alpha2 = real_alpha2(alpha)?;
    if alpha.im.abs() > 1e-14 {
        return Err(Error::Argument("mKP evolution needs real alpha".into()));
    }
    let a = alpha.re;
    let w0 = crate::spectral::inv_deriv_x(&d(k0, Axis::Y))?;
    check_cfl(cfg, 6.0 * k0.max_abs().powi(2) + 6.0 * a.abs() * w0.max_abs())?;
    let sp = Spectral::new(cfg.grid, cfg.dealias);
    let lin = kp_symbol(&sp, alpha2);
    let n = |v: &[Complex64]| {
        let k = sp.inverse_real(v);
        let kx = sp.inverse_real(&v.iter().zip(&sp.ikx).map(|(c, ik)| c * ik).collect::<Vec<_>>());
        let w = sp.inverse_real(&(0..v.len()).map(|i| v[i] * I * sp.ky[i] * sp.inv_dx(i)).collect::<Vec<_>>());
        let mut cube = sp.forward_real(&k.iter().map(|x| x * x * x).collect::<Vec<_>>());
        let coupling = sp.forward_real(&kx.iter().zip(&w).map(|(p, q)| p * q).collect::<Vec<_>>());
        for i in 0..cube.len() {
            cube[i] = 2.0 * sp.ikx[i] * cube[i] + 6.0 * a * coupling[i];
        }
        sp.truncate(&mut cube);
        cube
    };
    finish(integrate(k0, &lin, &n, &sp, cfg), k0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2;
    use crate::reductions::kp::kdv_soliton;

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid2::square(16).unwrap();
        let cfg = SolveConfig::new(g, 0.05, 0.01, Scheme::Etd4).unwrap();
        let s = solve_kp(&ScalarField::zeros(g), 1.0.into(), &cfg).unwrap();
        assert!(s.stack.slices().iter().all(|f| f.max_abs() == 0.0));
    }

    #[test]
    fn soliton_translates() {
        let g = Grid2::new(256, 8, 40.0, 2.0 * std::f64::consts::PI).unwrap();
        let cfg = SolveConfig::new(g, 1.0, 0.002, Scheme::Etd4).unwrap().with_save_every(50).unwrap();
        let s = solve_kp(&kdv_soliton(g, 1.0, 15.0, 0.0), 1.0.into(), &cfg).unwrap();
        let err = (s.stack.last() - &kdv_soliton(g, 1.0, 15.0, 1.0)).max_abs();
        assert!(err < 1e-4, "{err}");
        assert!(s.diagnostic("mass_drift").unwrap() < 1e-10);
    }

    #[test]
    fn nonzero_mean_in_y_rejected() {
        let g = Grid2::square(16).unwrap();
        let cfg = SolveConfig::new(g, 0.05, 0.01, Scheme::Etd4).unwrap();
        let k0 = ScalarField::from_fn(g, |_, y| y.sin());
        assert!(matches!(solve_kp(&k0, 1.0.into(), &cfg), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn large_step_rejected() {
        let g = Grid2::square(64).unwrap();
        let cfg = SolveConfig::new(g, 5.0, 1.0, Scheme::Etd4).unwrap();
        let k0 = ScalarField::from_fn(g, |x, _| 3.0 * x.sin());
        assert!(solve_kp(&k0, 1.0.into(), &cfg).is_err());
    }
}

//! Browser bindings: KP residual of the KdV soliton, a KP solver run and
//! the curvature of a sampled sphere.

use sdym_chain::fixtures::{kdv_stack, perturb_m3_stack};
use sdym_chain::grid::Grid2;
use sdym_chain::reductions::kp::kdv_soliton;
use sdym_chain::reductions::kp_residual;
use sdym_chain::residual::residual_norm_masked;
use sdym_chain::solvers::{solve_kp, Scheme, SolveConfig};
use sdym_chain::surface::{curvatures, fundamental_forms, sphere_chart, sphere_euler_characteristic};
use sdym_chain::{Complex64, ScalarField, TimeStack};
use wasm_bindgen::prelude::*;

const BOX: f64 = 40.0;

fn js(e: sdym_chain::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn soliton_grid(nx: usize) -> Result<Grid2, JsError> {
    Grid2::new(nx, 8, BOX, 2.0 * std::f64::consts::PI).map_err(js)
}

/// `[linf, l2]` of the KP residual on the KdV soliton, with `m3`
/// perturbed by the relative amount `corrupt`.
#[wasm_bindgen]
pub fn kp_soliton_residual(nx: usize, kappa: f64, corrupt: f64) -> Result<Vec<f64>, JsError> {
    let g = soliton_grid(nx)?;
    let k = kdv_stack(g, kappa, BOX / 2.0, 1e-3, 5).map_err(js)?;
    let mut m3 = TimeStack::constant(ScalarField::zeros(g), 5, 1e-3);
    if corrupt > 0.0 {
        m3 = perturb_m3_stack(&m3, &k, corrupt).map_err(js)?;
    }
    let [r, _] = kp_residual(&k, &m3, Complex64::new(1.0, 0.0)).map_err(js)?;
    Ok(vec![r.linf, r.l2])
}

/// Solver and exact soliton along the first grid row at `t_end`.
#[wasm_bindgen]
pub struct Profile {
    x: Vec<f64>,
    numeric: Vec<f64>,
    exact: Vec<f64>,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn numeric(&self) -> Vec<f64> {
        self.numeric.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn max_error(&self) -> f64 {
        self.numeric.iter().zip(&self.exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[wasm_bindgen]
pub fn kp_evolve(nx: usize, kappa: f64, t_end: f64, dt: f64) -> Result<Profile, JsError> {
    let g = soliton_grid(nx)?;
    let x0 = BOX / 4.0;
    let cfg = SolveConfig::new(g, t_end, dt, Scheme::Etd4).map_err(js)?;
    let every = (cfg.steps() / 4).max(1);
    let cfg = cfg.with_save_every(every).map_err(js)?;
    let sol = solve_kp(&kdv_soliton(g, kappa, x0, 0.0), Complex64::new(1.0, 0.0), &cfg).map_err(js)?;
    let row = |f: &ScalarField| (0..nx).map(|i| f.at(i, 0)).collect::<Vec<f64>>();
    Ok(Profile {
        x: (0..nx).map(|i| g.x(i)).collect(),
        numeric: row(sol.stack.last()),
        exact: row(&kdv_soliton(g, kappa, x0, sol.stack.time(sol.stack.len() - 1))),
    })
}

/// `[max |K - 1/R^2| over the band, integral curvature / 2 pi]`.
#[wasm_bindgen]
pub fn sphere_curvature(n: usize, radius: f64) -> Result<Vec<f64>, JsError> {
    let geom = fundamental_forms(&sphere_chart(n, radius).map_err(js)?).map_err(js)?;
    let (k, _) = curvatures(&geom).map_err(js)?;
    let dk = k.map(|v| v - 1.0 / (radius * radius));
    Ok(vec![residual_norm_masked(&dk, geom.mask(), "K").linf, sphere_euler_characteristic(n, radius).map_err(js)?])
}

//! Closed-form fields by name, for dumping and for seeding runs.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid2;
use crate::io::AnyField;
use crate::mat::Mat;
use crate::mmlxii::su2_basis;
use crate::reductions::ds::ds_plane_wave;
use crate::reductions::kp::kdv_soliton;
use crate::sdym::pure_gauge;
use crate::stack::{TimeStack, MIN_SLICES};
use crate::surface::{cylinder_chart, sphere_chart, PositionField};

pub const CATALOG_NAMES: [&str; 6] = ["kdv-soliton", "ds-plane-wave", "constant-spin", "sphere-chart", "cylinder-chart", "pure-gauge-connection"];

/// Named fields with a one-line description.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub fields: Vec<(String, AnyField)>,
    pub note: String,
}

fn get(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn chart_fields(p: &PositionField) -> Vec<(String, AnyField)> {
    let g = *p.grid();
    ["x", "y", "z"]
        .iter()
        .enumerate()
        .map(|(c, n)| (n.to_string(), ScalarField::from_index_fn(g, |idx| p.position(idx)[c]).into()))
        .collect()
}

/// Builds the entry `name` on `grid`. Unused parameters are ignored.
pub fn exact_catalog(name: &str, params: &BTreeMap<String, f64>, grid: Grid2) -> Result<CatalogEntry> {
    let p = |k: &str, d: f64| get(params, k, d);
    let entry = match name {
        "kdv-soliton" => {
            let (kappa, t) = (p("kappa", 1.0), p("t", 0.0));
            let k = kdv_soliton(grid, kappa, p("x0", 0.0), t);
            CatalogEntry { fields: vec![("k".into(), k.into())], note: format!("KdV soliton, kappa = {kappa}, t = {t}") }
        }
        "ds-plane-wave" => {
            let alpha = if p("alpha2", -1.0) < 0.0 { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
            let f = ds_plane_wave(grid, p("amp", 0.8), p("kappa", 1.0), p("l", 0.5), p("v0", 0.0), alpha, p("t", 0.0));
            CatalogEntry {
                fields: vec![("q".into(), f.q.into()), ("p".into(), f.p.into()), ("v".into(), f.v.into())],
                note: format!("plane wave with alpha = {alpha}"),
            }
        }
        "constant-spin" => {
            let (th, ph) = (p("theta", 0.0), p("phi", 0.0));
            let s = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            CatalogEntry {
                fields: (0..3).map(|c| (format!("s{}", c + 1), ScalarField::filled(grid, s[c]).into())).collect(),
                note: format!("constant unit spin, theta = {th}, phi = {ph}"),
            }
        }
        "sphere-chart" => {
            let r = p("radius", 1.0);
            CatalogEntry { fields: chart_fields(&sphere_chart(grid.nx(), r)?), note: format!("sphere of radius {r} on an {0}x{0} chart", grid.nx()) }
        }
        "cylinder-chart" => CatalogEntry { fields: chart_fields(&cylinder_chart(grid.nx())?), note: "unit cylinder".into() },
        "pure-gauge-connection" => {
            let (a, b) = (p("a", 0.5), p("b", 0.3));
            let e = su2_basis();
            let dt = p("dt", 0.01);
            let phi = TimeStack::sample(0.0, dt, MIN_SLICES, |t| {
                crate::field::MatrixField::from_fn(grid, |x, y| {
                    let gen: Mat = e[0].clone() * (a * x.sin()) + e[1].clone() * (b * (y + t).cos());
                    gen.exp()
                })
            })?;
            let conn = pure_gauge(&phi)?;
            let mid = MIN_SLICES / 2;
            CatalogEntry {
                fields: vec![
                    ("a_alpha".into(), conn.alpha.slice(mid).clone().into()),
                    ("a_alphabar".into(), conn.alpha_bar.slice(mid).clone().into()),
                    ("a_beta".into(), conn.beta.slice(mid).clone().into()),
                    ("a_betabar".into(), conn.beta_bar.slice(mid).clone().into()),
                ],
                note: format!("pure gauge of exp(a sin x e1 + b cos(y + t) e2), a = {a}, b = {b}, at t = {}", mid as f64 * dt),
            }
        }
        other => return Err(Error::UnknownName(format!("{other} (known: {})", CATALOG_NAMES.join(", ")))),
    };
    Ok(entry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        let g = Grid2::square(16).unwrap();
        for name in CATALOG_NAMES {
            let e = exact_catalog(name, &BTreeMap::new(), g).unwrap();
            assert!(!e.fields.is_empty(), "{name}");
            assert!(e.fields.iter().all(|(_, f)| f.values().iter().all(|v| v.is_finite())));
        }
        assert!(matches!(exact_catalog("nope", &BTreeMap::new(), g), Err(Error::UnknownName(_))));
    }

    #[test]
    fn constant_spin_is_unit() {
        let g = Grid2::square(8).unwrap();
        let e = exact_catalog("constant-spin", &BTreeMap::new(), g).unwrap();
        let n: f64 = e.fields.iter().map(|(_, f)| f.values()[0].powi(2)).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}

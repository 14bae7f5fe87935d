//! Time integrators that manufacture solution stacks for the residual
//! operators, plus a catalog of closed-form fields.

pub mod catalog;
pub mod ds;
pub mod etd;
pub mod spin;

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Field, Sample};
use crate::grid::Grid2;
use crate::io::{write_stack, AnyField, StackManifest};
use crate::stack::TimeStack;

pub use catalog::{exact_catalog, CatalogEntry, CATALOG_NAMES};
pub use ds::solve_ds;
pub use etd::{solve_kp, solve_kp_partial, solve_mkp};
pub use spin::solve_heisenberg1d;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Exponential time differencing, fourth order.
    Etd4,
    /// Integrating-factor classical Runge-Kutta.
    Rk4If,
    /// Fourth-order composition of Strang splittings.
    SplitStep,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "etd4" => Ok(Scheme::Etd4),
            "rk4-if" => Ok(Scheme::Rk4If),
            "splitstep" => Ok(Scheme::SplitStep),
            other => Err(Error::Argument(format!("unknown scheme '{other}' (etd4, rk4-if, splitstep)"))),
        }
    }
}

/// Grid, step, horizon and output cadence of a run. Keys not used by the
/// solver itself are kept in `params` for callers.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub grid: Grid2,
    pub t_end: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    /// Steps between stored slices.
    pub save_every: usize,
    pub params: BTreeMap<String, String>,
}

impl SolveConfig {
    pub fn new(grid: Grid2, t_end: f64, dt: f64, scheme: Scheme) -> Result<Self> {
        let cfg = Self { grid, t_end, dt, scheme, dealias: true, save_every: 1, params: BTreeMap::new() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_save_every(mut self, n: usize) -> Result<Self> {
        self.save_every = n;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Argument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt) {
            return Err(Error::Argument(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt)));
        }
        if self.save_every == 0 {
            return Err(Error::Argument("save_every must be positive".into()));
        }
        if self.slices() < crate::stack::MIN_SLICES {
            return Err(Error::Argument(format!("run stores {} slices; at least {} are needed", self.slices(), crate::stack::MIN_SLICES)));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Number of stored slices including the initial one.
    pub fn slices(&self) -> usize {
        self.steps() / self.save_every + 1
    }

    /// Parses flat `key = value` text. `#` starts a comment. Recognized keys:
    /// `nx`, `ny`, `lx`, `ly`, `t_end`, `dt`, `scheme`, `dealias`,
    /// `save_every`; everything else lands in `params`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Argument(format!("line {}: expected key = value", no + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_map(map)
    }

    pub fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        fn take<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
            match map.remove(key) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| Error::Argument(format!("bad value for {key}: '{v}'"))),
            }
        }
        let nx = take(&mut map, "nx", 64usize)?;
        let ny = take(&mut map, "ny", nx)?;
        let lx = take(&mut map, "lx", 2.0 * std::f64::consts::PI)?;
        let ly = take(&mut map, "ly", lx)?;
        let t_end = take(&mut map, "t_end", 0.1)?;
        let dt = take(&mut map, "dt", 0.01)?;
        let scheme = take(&mut map, "scheme", Scheme::Etd4)?;
        let dealias = take(&mut map, "dealias", true)?;
        let save_every = take(&mut map, "save_every", 1usize)?;
        let cfg = Self { grid: Grid2::new(nx, ny, lx, ly)?, t_end, dt, scheme, dealias, save_every, params: map };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn param<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Argument(format!("bad value for {key}: '{v}'"))),
        }
    }
}

/// Uniformly spaced snapshots with run diagnostics.
#[derive(Clone, Debug)]
pub struct SolutionStack<T> {
    pub stack: TimeStack<T>,
    pub diagnostics: Vec<(String, f64)>,
}

impl<T: Sample> SolutionStack<T> {
    pub fn new(t0: f64, dt: f64, slices: Vec<Field<T>>) -> Result<Self> {
        if slices.len() < crate::stack::MIN_SLICES {
            return Err(Error::Argument(format!("a solution stack needs >= {} slices", crate::stack::MIN_SLICES)));
        }
        if let Some(i) = slices.iter().position(|s| !s.is_finite()) {
            return Err(Error::Argument(format!("slice {i} is not finite")));
        }
        Ok(Self { stack: TimeStack::new(t0, dt, slices)?, diagnostics: Vec::new() })
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<StackManifest>
    where
        AnyField: From<Field<T>>,
    {
        write_stack(dir, name, &self.stack)
    }
}

//! Uniformly spaced time slices of a field and fourth-order time derivatives.

use crate::error::{Error, Result};
use crate::field::{Field, Sample};

/// Snapshots `slices[i]` at times `t0 + i * dt`.
#[derive(Clone, Debug)]
pub struct TimeStack<T> {
    t0: f64,
    dt: f64,
    slices: Vec<Field<T>>,
}

/// Minimum number of slices for a fourth-order centred time derivative.
pub const MIN_SLICES: usize = 5;

impl<T: Sample> TimeStack<T> {
    pub fn new(t0: f64, dt: f64, slices: Vec<Field<T>>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::MissingTimeStack("empty stack".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Argument(format!("time spacing must be positive, got {dt}")));
        }
        let g = *slices[0].grid();
        for s in &slices[1..] {
            g.check_same(s.grid())?;
        }
        Ok(Self { t0, dt, slices })
    }

    /// Samples `f(t)` at `n` slices.
    pub fn sample(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> Field<T>) -> Result<Self> {
        Self::new(t0, dt, (0..n).map(|i| f(t0 + i as f64 * dt)).collect())
    }

    /// A stack of identical slices, i.e. time-independent data.
    pub fn constant(field: Field<T>, n: usize, dt: f64) -> Self {
        Self { t0: 0.0, dt, slices: vec![field; n] }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn slice(&self, i: usize) -> &Field<T> {
        &self.slices[i]
    }

    pub fn slices(&self) -> &[Field<T>] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<Field<T>> {
        self.slices
    }

    pub fn last(&self) -> &Field<T> {
        self.slices.last().expect("non-empty stack")
    }

    pub fn grid(&self) -> &crate::grid::Grid2 {
        self.slices[0].grid()
    }

    /// Applies `f` slice by slice, keeping the time axis.
    pub fn map<U: Sample>(&self, f: impl Fn(&Field<T>) -> Field<U>) -> TimeStack<U> {
        TimeStack { t0: self.t0, dt: self.dt, slices: self.slices.iter().map(f).collect() }
    }

    pub fn try_map<U: Sample>(&self, f: impl Fn(&Field<T>) -> Result<Field<U>>) -> Result<TimeStack<U>> {
        Ok(TimeStack { t0: self.t0, dt: self.dt, slices: self.slices.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn check_aligned<S: Sample>(&self, other: &TimeStack<S>) -> Result<()> {
        self.grid().check_same(other.grid())?;
        if self.len() != other.len() || (self.dt - other.dt).abs() > 1e-14 * self.dt || (self.t0 - other.t0).abs() > 1e-12 {
            return Err(Error::ShapeMismatch(format!(
                "time stacks differ: {} slices dt={} vs {} slices dt={}",
                self.len(),
                self.dt,
                other.len(),
                other.dt
            )));
        }
        Ok(())
    }

    /// Slices at which the centred five-point stencil applies.
    pub fn interior(&self) -> std::ops::Range<usize> {
        if self.len() < MIN_SLICES {
            0..0
        } else {
            2..self.len() - 2
        }
    }

    pub fn require_derivative(&self, what: &str) -> Result<()> {
        if self.len() < MIN_SLICES {
            return Err(Error::MissingTimeStack(format!("{what} needs >= {MIN_SLICES} slices, got {}", self.len())));
        }
        Ok(())
    }

    /// Fourth-order finite-difference time derivative at slice `i`
    /// (centred in the interior, one-sided at the two ends).
    pub fn time_derivative(&self, i: usize) -> Result<Field<T>> {
        self.require_derivative("time derivative")?;
        let n = self.len();
        let h = 12.0 * self.dt;
        let s = &self.slices;
        let f = if (2..n - 2).contains(&i) {
            Field::lin_comb(&[(1.0 / h, &s[i - 2]), (-8.0 / h, &s[i - 1]), (8.0 / h, &s[i + 1]), (-1.0 / h, &s[i + 2])])
        } else if i == 0 {
            Field::lin_comb(&[(-25.0 / h, &s[0]), (48.0 / h, &s[1]), (-36.0 / h, &s[2]), (16.0 / h, &s[3]), (-3.0 / h, &s[4])])
        } else if i == 1 {
            Field::lin_comb(&[(-3.0 / h, &s[0]), (-10.0 / h, &s[1]), (18.0 / h, &s[2]), (-6.0 / h, &s[3]), (1.0 / h, &s[4])])
        } else if i == n - 2 {
            Field::lin_comb(&[(3.0 / h, &s[n - 1]), (10.0 / h, &s[n - 2]), (-18.0 / h, &s[n - 3]), (6.0 / h, &s[n - 4]), (-1.0 / h, &s[n - 5])])
        } else if i == n - 1 {
            Field::lin_comb(&[(25.0 / h, &s[n - 1]), (-48.0 / h, &s[n - 2]), (36.0 / h, &s[n - 3]), (-16.0 / h, &s[n - 4]), (3.0 / h, &s[n - 5])])
        } else {
            return Err(Error::Argument(format!("slice {i} out of range")));
        };
        Ok(f)
    }

    /// Five-point Lagrange interpolation at time `t` (fourth order).
    pub fn interpolate(&self, t: f64) -> Result<Field<T>> {
        self.require_derivative("interpolation")?;
        let n = self.len();
        let s = (t - self.t0) / self.dt;
        let centre = s.round().clamp(2.0, (n - 3) as f64) as usize;
        let nodes: Vec<usize> = (centre - 2..=centre + 2).collect();
        let weights: Vec<f64> = nodes
            .iter()
            .map(|&a| {
                nodes.iter().filter(|&&b| b != a).map(|&b| (s - b as f64) / (a as f64 - b as f64)).product()
            })
            .collect();
        let terms: Vec<(f64, &Field<T>)> = weights.iter().zip(&nodes).map(|(w, &k)| (*w, &self.slices[k])).collect();
        Ok(Field::lin_comb(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use crate::grid::Grid2;

    #[test]
    fn fourth_order_derivative_of_polynomial_in_time() {
        let g = Grid2::square(8).unwrap();
        // quartic in t: the five-point formulas are exact.
        let stack = TimeStack::sample(0.3, 0.1, 7, |t| ScalarField::filled(g, t.powi(4) - 2.0 * t)).unwrap();
        for i in 0..7 {
            let t = stack.time(i);
            let d = stack.time_derivative(i).unwrap();
            assert!((d.at(0, 0) - (4.0 * t.powi(3) - 2.0)).abs() < 1e-11, "slice {i}");
        }
    }

    #[test]
    fn short_stack_has_no_derivative() {
        let g = Grid2::square(8).unwrap();
        let stack = TimeStack::constant(ScalarField::zeros(g), 4, 0.1);
        assert!(matches!(stack.time_derivative(1), Err(Error::MissingTimeStack(_))));
        assert!(stack.interior().is_empty());
    }

    #[test]
    fn interpolation_exact_for_quartic() {
        let g = Grid2::square(8).unwrap();
        let stack = TimeStack::sample(0.0, 0.25, 9, |t| ScalarField::filled(g, t.powi(4) + t)).unwrap();
        for t in [0.01, 0.6, 1.13, 1.99] {
            let v = stack.interpolate(t).unwrap().at(3, 3);
            assert!((v - (t.powi(4) + t)).abs() < 1e-12);
        }
    }
}

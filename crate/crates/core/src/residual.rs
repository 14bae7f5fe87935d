use serde::{Deserialize, Serialize};

use crate::field::{Field, Sample};

/// Summary norms of a residual field.
///
/// `linf` is the largest entry modulus, `l2` the root-mean-square over all
/// scalar entries (every grid point weighs the same on a uniform grid).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub linf: f64,
    pub l2: f64,
    #[serde(default)]
    pub components: Vec<(String, f64)>,
}

impl ResidualReport {
    pub fn zero(name: impl Into<String>) -> Self {
        Self { name: name.into(), linf: 0.0, l2: 0.0, components: Vec::new() }
    }

    pub fn with_component(mut self, label: impl Into<String>, linf: f64) -> Self {
        self.components.push((label.into(), linf));
        self
    }

    /// Merges several reports: max of the sup norms, RMS of the RMS norms,
    /// each input kept as a labelled component.
    pub fn merge(name: impl Into<String>, parts: &[ResidualReport]) -> Self {
        let linf = parts.iter().map(|r| r.linf).fold(0.0, f64::max);
        let l2 = if parts.is_empty() {
            0.0
        } else {
            (parts.iter().map(|r| r.l2 * r.l2).sum::<f64>() / parts.len() as f64).sqrt()
        };
        Self { name: name.into(), linf, l2, components: parts.iter().map(|r| (r.name.clone(), r.linf)).collect() }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.linf <= tol
    }
}

pub fn residual_norm<T: Sample>(f: &Field<T>, name: impl Into<String>) -> ResidualReport {
    residual_norm_masked(f, None, name)
}

/// Norms restricted to the points where `mask` is true.
pub fn residual_norm_masked<T: Sample>(f: &Field<T>, mask: Option<&[bool]>, name: impl Into<String>) -> ResidualReport {
    let mut linf = 0.0f64;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (idx, v) in f.data().iter().enumerate() {
        if mask.is_some_and(|m| !m[idx]) {
            continue;
        }
        linf = linf.max(v.max_abs());
        sum += v.norm_sqr();
        count += v.entry_count();
    }
    let l2 = if count == 0 { 0.0 } else { (sum / count as f64).sqrt() };
    ResidualReport { name: name.into(), linf, l2, components: Vec::new() }
}

/// Norms over a sequence of slices (e.g. the interior of a time stack).
pub fn residual_norm_slices<T: Sample>(slices: &[Field<T>], name: impl Into<String>) -> ResidualReport {
    let name = name.into();
    let parts: Vec<ResidualReport> = slices.iter().map(|s| residual_norm(s, name.clone())).collect();
    let linf = parts.iter().map(|r| r.linf).fold(0.0, f64::max);
    let l2 = if parts.is_empty() { 0.0 } else { (parts.iter().map(|r| r.l2 * r.l2).sum::<f64>() / parts.len() as f64).sqrt() };
    ResidualReport { name, linf, l2, components: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{MatrixField, ScalarField};
    use crate::grid::Grid2;
    use crate::mat::Mat;

    #[test]
    fn zero_and_constant_fields() {
        let g = Grid2::square(16).unwrap();
        let r = residual_norm(&ScalarField::zeros(g), "z");
        assert_eq!((r.linf, r.l2), (0.0, 0.0));
        let r = residual_norm(&ScalarField::filled(g, 2.0), "c");
        assert!((r.linf - 2.0).abs() < 1e-15 && (r.l2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_spike_rms() {
        let g = Grid2::square(64).unwrap();
        let mut f = ScalarField::zeros(g);
        f.data_mut()[123] = 5.0;
        let r = residual_norm(&f, "spike");
        assert_eq!(r.linf, 5.0);
        assert!((r.l2 - 5.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_norm_uses_entries() {
        let g = Grid2::square(8).unwrap();
        let m = MatrixField::filled(g, Mat::from_real_rows([[3.0, -4.0], [0.0, 0.0]]));
        let r = residual_norm(&m, "m");
        assert_eq!(r.linf, 4.0);
        assert!((r.l2 - (25.0f64 / 4.0).sqrt()).abs() < 1e-15);
    }
}

//! Classical surface theory on a periodic chart: fundamental forms,
//! Christoffel symbols, the Riemann tensor, curvatures, the Gauss-Weingarten
//! and Gauss-Codazzi residuals, and the integral curvature.
//!
//! Index conventions: coordinates `u^1 = x`, `u^2 = y` of the grid, Greek
//! indices run over `0..2` in code. Christoffel symbols use the standard
//! lowered metric derivatives. The mean curvature is `H = g^{mn} b_{mn} / 2`.
//! The normal is `n = r_1 x r_2 / sqrt(det g)`.
//!
//! When geometry comes from an immersion, all derivatives of `g`, `b` and `n`
//! are obtained by the chain rule from spectral derivatives of the position
//! vector. Charts whose coordinate singularities fall between grid points
//! (a sphere with its poles, say) therefore stay accurate away from them; an
//! optional mask restricts checks and reports to the well-behaved region.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{Axis, Grid2};
use crate::residual::{residual_norm_masked, ResidualReport};
use crate::spectral;
use crate::tolerance::DET_FLOOR;

type V3 = [f64; 3];
type T2 = [[f64; 2]; 2];
type T3 = [[[f64; 2]; 2]; 2];
type T4 = [[[[f64; 2]; 2]; 2]; 2];

const AXES: [Axis; 2] = [Axis::X, Axis::Y];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn add3(a: &V3, b: &V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn inv2(m: &T2) -> (T2, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    ([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]], det)
}

/// Immersion `r(u^1, u^2)`: a periodic part plus a constant-slope part
/// (`slopes[c][a]` is the `u^a` slope of component `c`), so that planes and
/// cylinders fit on a periodic grid.
#[derive(Clone, Debug)]
pub struct PositionField {
    periodic: [ScalarField; 3],
    slopes: [[f64; 2]; 3],
    mask: Option<Vec<bool>>,
}

impl PositionField {
    pub fn new(periodic: [ScalarField; 3], slopes: [[f64; 2]; 3]) -> Result<Self> {
        periodic[0].check_same_grid(&periodic[1])?;
        periodic[0].check_same_grid(&periodic[2])?;
        Ok(Self { periodic, slopes, mask: None })
    }

    /// Samples `r(u1, u2)`; the linear part `slopes * u` is split off so the
    /// stored remainder is periodic.
    pub fn sample(grid: Grid2, slopes: [[f64; 2]; 3], r: impl Fn(f64, f64) -> V3) -> Self {
        let comp = |c: usize| {
            ScalarField::from_fn(grid, |u1, u2| r(u1, u2)[c] - slopes[c][0] * u1 - slopes[c][1] * u2)
        };
        Self { periodic: [comp(0), comp(1), comp(2)], slopes, mask: None }
    }

    /// Restricts degeneracy checks and residual norms to the masked points.
    pub fn with_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.grid().len() {
            return Err(Error::ShapeMismatch(format!("mask of length {} for {} points", mask.len(), self.grid().len())));
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn grid(&self) -> &Grid2 {
        self.periodic[0].grid()
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    /// Full position value at a grid point.
    pub fn position(&self, idx: usize) -> V3 {
        let g = self.grid();
        let (i, j) = g.coords(idx);
        let u = [g.x(i), g.y(j)];
        std::array::from_fn(|c| self.periodic[c].data()[idx] + self.slopes[c][0] * u[0] + self.slopes[c][1] * u[1])
    }

    fn jet(&self) -> PositionJet {
        let d1: [[ScalarField; 3]; 2] = std::array::from_fn(|a| std::array::from_fn(|c| spectral::d(&self.periodic[c], AXES[a])));
        let d2: [[[ScalarField; 3]; 2]; 2] = std::array::from_fn(|a| {
            std::array::from_fn(|b| std::array::from_fn(|c| spectral::d(&d1[a][c], AXES[b])))
        });
        let d3: [[[[ScalarField; 3]; 2]; 2]; 2] = std::array::from_fn(|a| {
            std::array::from_fn(|b| std::array::from_fn(|m| std::array::from_fn(|c| spectral::d(&d2[a][b][c], AXES[m]))))
        });
        let points = (0..self.grid().len())
            .map(|idx| {
                let r1: [V3; 2] = std::array::from_fn(|a| std::array::from_fn(|c| d1[a][c].data()[idx] + self.slopes[c][a]));
                let r2: [[V3; 2]; 2] = std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| d2[a][b][c].data()[idx])));
                let r3: [[[V3; 2]; 2]; 2] = std::array::from_fn(|a| {
                    std::array::from_fn(|b| std::array::from_fn(|m| std::array::from_fn(|c| d3[a][b][m][c].data()[idx])))
                });
                PointJet { r1, r2, r3 }
            })
            .collect();
        PositionJet { points }
    }
}

struct PointJet {
    r1: [V3; 2],
    r2: [[V3; 2]; 2],
    r3: [[[V3; 2]; 2]; 2],
}

impl PointJet {
    fn metric(&self) -> T2 {
        std::array::from_fn(|a| std::array::from_fn(|b| dot(&self.r1[a], &self.r1[b])))
    }

    fn raw_normal(&self) -> V3 {
        cross(&self.r1[0], &self.r1[1])
    }

    /// `d_m n` by the chain rule applied to `n = N / sqrt(det g)`.
    fn normal_derivative(&self, det: f64, dg: &T3) -> [V3; 2] {
        let big_n = self.raw_normal();
        let s = det.sqrt();
        std::array::from_fn(|m| {
            let dn = add3(&cross(&self.r2[0][m], &self.r1[1]), &cross(&self.r1[0], &self.r2[1][m]));
            let g = self.metric();
            let ddet = dg[m][0][0] * g[1][1] + g[0][0] * dg[m][1][1] - 2.0 * g[0][1] * dg[m][0][1];
            std::array::from_fn(|c| dn[c] / s - big_n[c] * ddet / (2.0 * det * s))
        })
    }
}

struct PositionJet {
    points: Vec<PointJet>,
}

/// Metric, second fundamental form and normal at one point, with the
/// derivatives needed downstream.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointGeometry {
    pub g: T2,
    /// `dg[m][a][b] = d_m g_ab`
    pub dg: T3,
    /// `ddg[m][k][a][b] = d_m d_k g_ab`
    pub ddg: T4,
    pub b: T2,
    /// `db[m][a][b] = d_m b_ab`
    pub db: T3,
    pub n: V3,
}

impl PointGeometry {
    pub fn det_g(&self) -> f64 {
        self.g[0][0] * self.g[1][1] - self.g[0][1] * self.g[1][0]
    }
}

/// First and second fundamental forms over a chart.
#[derive(Clone, Debug)]
pub struct GeometryData {
    grid: Grid2,
    points: Vec<PointGeometry>,
    mask: Option<Vec<bool>>,
}

fn check_metric(grid: &Grid2, points: &[PointGeometry], mask: Option<&[bool]>) -> Result<()> {
    let mut worst: Option<(usize, f64)> = None;
    for (idx, p) in points.iter().enumerate() {
        if mask.is_some_and(|m| !m[idx]) {
            continue;
        }
        let det = p.det_g();
        if !(det > DET_FLOOR) && worst.is_none_or(|(_, w)| det < w || det.is_nan()) {
            worst = Some((idx, det));
        }
    }
    match worst {
        Some((idx, det)) => {
            let (i, j) = grid.coords(idx);
            Err(Error::SingularMetric { i, j, det })
        }
        None => Ok(()),
    }
}

/// `g`, `b`, `n` from an immersion.
pub fn fundamental_forms(p: &PositionField) -> Result<GeometryData> {
    let jet = p.jet();
    let grid = *p.grid();
    let mut points = Vec::with_capacity(grid.len());
    for pj in &jet.points {
        let g = pj.metric();
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let big_n = pj.raw_normal();
        let s = det.max(0.0).sqrt();
        let n: V3 = std::array::from_fn(|c| big_n[c] / s);
        let b: T2 = std::array::from_fn(|a| std::array::from_fn(|c| dot(&pj.r2[a][c], &n)));
        let dg: T3 = std::array::from_fn(|m| {
            std::array::from_fn(|a| std::array::from_fn(|c| dot(&pj.r2[a][m], &pj.r1[c]) + dot(&pj.r1[a], &pj.r2[c][m])))
        });
        let ddg: T4 = std::array::from_fn(|m| {
            std::array::from_fn(|k| {
                std::array::from_fn(|a| {
                    std::array::from_fn(|c| {
                        dot(&pj.r3[a][m][k], &pj.r1[c])
                            + dot(&pj.r2[a][m], &pj.r2[c][k])
                            + dot(&pj.r2[a][k], &pj.r2[c][m])
                            + dot(&pj.r1[a], &pj.r3[c][m][k])
                    })
                })
            })
        });
        let dn = if det > 0.0 { pj.normal_derivative(det, &dg) } else { [[f64::NAN; 3]; 2] };
        let db: T3 = std::array::from_fn(|m| {
            std::array::from_fn(|a| std::array::from_fn(|c| dot(&pj.r3[a][c][m], &n) + dot(&pj.r2[a][c], &dn[m])))
        });
        points.push(PointGeometry { g, dg, ddg, b, db, n });
    }
    check_metric(&grid, &points, p.mask())?;
    Ok(GeometryData { grid, points, mask: p.mask.clone() })
}

impl GeometryData {
    /// Geometry from given forms (not necessarily compatible). Derivatives
    /// are taken spectrally, so the components must be periodic.
    pub fn from_forms(g: [&ScalarField; 3], b: [&ScalarField; 3], n: [&ScalarField; 3]) -> Result<Self> {
        let grid = *g[0].grid();
        for f in g.iter().chain(b.iter()).chain(n.iter()) {
            grid.check_same(f.grid())?;
        }
        // symmetric storage order: 11, 12, 22
        let slot = |a: usize, c: usize| match (a, c) {
            (0, 0) => 0,
            (1, 1) => 2,
            _ => 1,
        };
        let dg: [[ScalarField; 3]; 2] = std::array::from_fn(|m| std::array::from_fn(|s| spectral::d(g[s], AXES[m])));
        let ddg: [[[ScalarField; 3]; 2]; 2] =
            std::array::from_fn(|m| std::array::from_fn(|k| std::array::from_fn(|s| spectral::d(&dg[m][s], AXES[k]))));
        let db: [[ScalarField; 3]; 2] = std::array::from_fn(|m| std::array::from_fn(|s| spectral::d(b[s], AXES[m])));
        let points: Vec<PointGeometry> = (0..grid.len())
            .map(|idx| PointGeometry {
                g: std::array::from_fn(|a| std::array::from_fn(|c| g[slot(a, c)].data()[idx])),
                dg: std::array::from_fn(|m| std::array::from_fn(|a| std::array::from_fn(|c| dg[m][slot(a, c)].data()[idx]))),
                ddg: std::array::from_fn(|m| {
                    std::array::from_fn(|k| std::array::from_fn(|a| std::array::from_fn(|c| ddg[m][k][slot(a, c)].data()[idx])))
                }),
                b: std::array::from_fn(|a| std::array::from_fn(|c| b[slot(a, c)].data()[idx])),
                db: std::array::from_fn(|m| std::array::from_fn(|a| std::array::from_fn(|c| db[m][slot(a, c)].data()[idx]))),
                n: std::array::from_fn(|c| n[c].data()[idx]),
            })
            .collect();
        check_metric(&grid, &points, None)?;
        Ok(Self { grid, points, mask: None })
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn points(&self) -> &[PointGeometry] {
        &self.points
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn with_mask(mut self, mask: Option<Vec<bool>>) -> Self {
        self.mask = mask;
        self
    }

    fn field(&self, f: impl Fn(&PointGeometry) -> f64) -> ScalarField {
        ScalarField::from_index_fn(self.grid, |idx| f(&self.points[idx]))
    }

    pub fn g(&self, a: usize, c: usize) -> ScalarField {
        self.field(|p| p.g[a][c])
    }

    pub fn b(&self, a: usize, c: usize) -> ScalarField {
        self.field(|p| p.b[a][c])
    }

    pub fn normal(&self, c: usize) -> ScalarField {
        self.field(|p| p.n[c])
    }

    pub fn det_g(&self) -> ScalarField {
        self.field(PointGeometry::det_g)
    }

    /// Adds `delta` to `b_ab` (and `b_ba`); used to build corrupted fixtures.
    pub fn perturb_b(&self, a: usize, c: usize, delta: f64) -> Self {
        let mut out = self.clone();
        for p in out.points.iter_mut() {
            p.b[a][c] += delta;
            if a != c {
                p.b[c][a] += delta;
            }
        }
        out
    }

    fn norm(&self, f: &ScalarField, name: &str) -> ResidualReport {
        residual_norm_masked(f, self.mask(), name)
    }
}

/// Christoffel symbols of the second kind and their first derivatives.
#[derive(Clone, Debug)]
pub struct ChristoffelField {
    grid: Grid2,
    /// `gamma[idx][c][a][b] = Gamma^c_ab`
    gamma: Vec<T3>,
    /// `dgamma[idx][m][c][a][b] = d_m Gamma^c_ab`
    dgamma: Vec<T4>,
    metric: Vec<T2>,
    mask: Option<Vec<bool>>,
}

impl ChristoffelField {
    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    /// `Gamma^c_ab` as a field.
    pub fn symbol(&self, c: usize, a: usize, b: usize) -> ScalarField {
        ScalarField::from_index_fn(self.grid, |idx| self.gamma[idx][c][a][b])
    }

    pub fn at(&self, idx: usize) -> &T3 {
        &self.gamma[idx]
    }
}

pub fn christoffel(geom: &GeometryData) -> Result<ChristoffelField> {
    check_metric(&geom.grid, &geom.points, geom.mask())?;
    let mut gamma = Vec::with_capacity(geom.points.len());
    let mut dgamma = Vec::with_capacity(geom.points.len());
    for p in &geom.points {
        let (ginv, _) = inv2(&p.g);
        // first kind: Gamma_{l a b} = (d_a g_lb + d_b g_al - d_l g_ab) / 2
        let first: T3 = std::array::from_fn(|l| {
            std::array::from_fn(|a| std::array::from_fn(|b| 0.5 * (p.dg[a][l][b] + p.dg[b][a][l] - p.dg[l][a][b])))
        });
        let dfirst: T4 = std::array::from_fn(|m| {
            std::array::from_fn(|l| {
                std::array::from_fn(|a| {
                    std::array::from_fn(|b| 0.5 * (p.ddg[m][a][l][b] + p.ddg[m][b][a][l] - p.ddg[m][l][a][b]))
                })
            })
        });
        // d_m g^{-1} = -g^{-1} (d_m g) g^{-1}
        let dginv: T3 = std::array::from_fn(|m| {
            std::array::from_fn(|c| {
                std::array::from_fn(|l| {
                    let mut s = 0.0;
                    for x in 0..2 {
                        for y in 0..2 {
                            s -= ginv[c][x] * p.dg[m][x][y] * ginv[y][l];
                        }
                    }
                    s
                })
            })
        });
        let g: T3 = std::array::from_fn(|c| {
            std::array::from_fn(|a| std::array::from_fn(|b| (0..2).map(|l| ginv[c][l] * first[l][a][b]).sum()))
        });
        let dg: T4 = std::array::from_fn(|m| {
            std::array::from_fn(|c| {
                std::array::from_fn(|a| {
                    std::array::from_fn(|b| (0..2).map(|l| dginv[m][c][l] * first[l][a][b] + ginv[c][l] * dfirst[m][l][a][b]).sum())
                })
            })
        });
        gamma.push(g);
        dgamma.push(dg);
    }
    Ok(ChristoffelField {
        grid: geom.grid,
        gamma,
        dgamma,
        metric: geom.points.iter().map(|p| p.g).collect(),
        mask: geom.mask.clone(),
    })
}

/// Riemann tensor `R^c_{a b l}` per point and the lowered `R_1212`.
#[derive(Clone, Debug)]
pub struct RiemannField {
    grid: Grid2,
    /// `full[idx][c][a][b][l] = R^c_{abl}`
    pub full: Vec<T4>,
    pub r1212: ScalarField,
    mask: Option<Vec<bool>>,
}

impl RiemannField {
    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    /// Fully lowered `R_{c a b l} = g_{c d} R^d_{abl}` at point `idx`.
    pub fn lowered(&self, idx: usize, metric: &T2) -> T4 {
        let r = &self.full[idx];
        std::array::from_fn(|c| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| std::array::from_fn(|l| (0..2).map(|d| metric[c][d] * r[d][a][b][l]).sum()))
            })
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.full
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.mask.as_ref().is_none_or(|m| m[*idx]))
            .flat_map(|(_, t)| t.iter().flatten().flatten().flatten().copied())
            .fold(0.0, |a, v: f64| a.max(v.abs()))
    }
}

/// `R^c_{abl} = d_b Gamma^c_al - d_l Gamma^c_ab + Gamma^c_mb Gamma^m_al - Gamma^c_ml Gamma^m_ab`.
pub fn riemann(gamma: &ChristoffelField) -> RiemannField {
    let full: Vec<T4> = gamma
        .gamma
        .iter()
        .zip(&gamma.dgamma)
        .map(|(g, dg)| {
            std::array::from_fn(|c| {
                std::array::from_fn(|a| {
                    std::array::from_fn(|b| {
                        std::array::from_fn(|l| {
                            let mut s = dg[b][c][a][l] - dg[l][c][a][b];
                            for m in 0..2 {
                                s += g[c][m][b] * g[m][a][l] - g[c][m][l] * g[m][a][b];
                            }
                            s
                        })
                    })
                })
            })
        })
        .collect();
    let r1212 = ScalarField::from_index_fn(gamma.grid, |idx| {
        (0..2).map(|c| gamma.metric[idx][0][c] * full[idx][c][1][0][1]).sum()
    });
    RiemannField { grid: gamma.grid, full, r1212, mask: gamma.mask.clone() }
}

/// `D_m f_a = d_m f_a - Gamma^c_{a m} f_c`, returned as `[m][a]`.
pub fn covariant_deriv_covector(f: [&ScalarField; 2], gamma: &ChristoffelField) -> [[ScalarField; 2]; 2] {
    let df: [[ScalarField; 2]; 2] = std::array::from_fn(|m| std::array::from_fn(|a| spectral::d(f[a], AXES[m])));
    std::array::from_fn(|m| {
        std::array::from_fn(|a| {
            ScalarField::from_index_fn(gamma.grid, |idx| {
                let g = &gamma.gamma[idx];
                df[m][a].data()[idx] - (0..2).map(|c| g[c][a][m] * f[c].data()[idx]).sum::<f64>()
            })
        })
    })
}

/// `D_m f^a = d_m f^a + Gamma^a_{l m} f^l`, returned as `[m][a]`.
pub fn covariant_deriv_vector(f: [&ScalarField; 2], gamma: &ChristoffelField) -> [[ScalarField; 2]; 2] {
    let df: [[ScalarField; 2]; 2] = std::array::from_fn(|m| std::array::from_fn(|a| spectral::d(f[a], AXES[m])));
    std::array::from_fn(|m| {
        std::array::from_fn(|a| {
            ScalarField::from_index_fn(gamma.grid, |idx| {
                let g = &gamma.gamma[idx];
                df[m][a].data()[idx] + (0..2).map(|l| g[a][l][m] * f[l].data()[idx]).sum::<f64>()
            })
        })
    })
}

/// `D_m g_ab` evaluated from the metric jet; zero for a Levi-Civita connection.
pub fn metric_compatibility(geom: &GeometryData, gamma: &ChristoffelField) -> ResidualReport {
    let f = ScalarField::from_index_fn(geom.grid, |idx| {
        let p = &geom.points[idx];
        let g = &gamma.gamma[idx];
        let mut worst = 0.0f64;
        for m in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let mut v = p.dg[m][a][b];
                    for c in 0..2 {
                        v -= g[c][a][m] * p.g[c][b] + g[c][b][m] * p.g[a][c];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    });
    geom.norm(&f, "metric-compatibility D_m g_ab")
}

/// Gaussian curvature `det(g^{-1} b)` and mean curvature `tr(g^{-1} b) / 2`.
pub fn curvatures(geom: &GeometryData) -> Result<(ScalarField, ScalarField)> {
    check_metric(&geom.grid, &geom.points, geom.mask())?;
    let shape = |p: &PointGeometry| {
        let (ginv, _) = inv2(&p.g);
        let s: T2 = std::array::from_fn(|a| std::array::from_fn(|c| (0..2).map(|l| ginv[a][l] * p.b[l][c]).sum()));
        s
    };
    let k = geom.field(|p| {
        let s = shape(p);
        s[0][0] * s[1][1] - s[0][1] * s[1][0]
    });
    let h = geom.field(|p| {
        let s = shape(p);
        0.5 * (s[0][0] + s[1][1])
    });
    Ok((k, h))
}

/// Gauss equation `R_{cabl} = b_cb b_al - b_cl b_ab` and Codazzi equation
/// `D_m b_ab = D_a b_mb`, both over all index combinations.
pub fn gauss_codazzi_residual(geom: &GeometryData) -> Result<ResidualReport> {
    let gamma = christoffel(geom)?;
    let riem = riemann(&gamma);
    let gauss = ScalarField::from_index_fn(geom.grid, |idx| {
        let p = &geom.points[idx];
        let low = riem.lowered(idx, &p.g);
        let b = &p.b;
        let mut worst = 0.0f64;
        for c in 0..2 {
            for a in 0..2 {
                for bb in 0..2 {
                    for l in 0..2 {
                        let v = low[c][a][bb][l] - (b[c][bb] * b[a][l] - b[c][l] * b[a][bb]);
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        worst
    });
    let codazzi = ScalarField::from_index_fn(geom.grid, |idx| {
        let p = &geom.points[idx];
        let g = &gamma.gamma[idx];
        let cov = |m: usize, a: usize, b: usize| {
            let mut v = p.db[m][a][b];
            for c in 0..2 {
                v -= g[c][a][m] * p.b[c][b] + g[c][b][m] * p.b[a][c];
            }
            v
        };
        let mut worst = 0.0f64;
        for m in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    worst = worst.max((cov(m, a, b) - cov(a, m, b)).abs());
                }
            }
        }
        worst
    });
    let g_rep = geom.norm(&gauss, "gauss R_cabl - (b_cb b_al - b_cl b_ab)");
    let c_rep = geom.norm(&codazzi, "codazzi D_m b_ab - D_a b_mb");
    Ok(ResidualReport::merge("gauss-codazzi", &[g_rep, c_rep]))
}

/// Gauss-Weingarten residuals `r_ab - Gamma^c_ab r_c - b_ab n` and
/// `n_a + g^{cb} b_ac r_b`.
pub fn gw_residual(p: &PositionField, geom: &GeometryData, gamma: &ChristoffelField) -> Result<ResidualReport> {
    p.grid().check_same(geom.grid())?;
    check_metric(&geom.grid, &geom.points, geom.mask())?;
    let jet = p.jet();
    let gauss = ScalarField::from_index_fn(geom.grid, |idx| {
        let pj = &jet.points[idx];
        let pg = &geom.points[idx];
        let gm = &gamma.gamma[idx];
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..3 {
                    let v = pj.r2[a][b][c] - gm[0][a][b] * pj.r1[0][c] - gm[1][a][b] * pj.r1[1][c] - pg.b[a][b] * pg.n[c];
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    });
    let weingarten = ScalarField::from_index_fn(geom.grid, |idx| {
        let pj = &jet.points[idx];
        let pg = &geom.points[idx];
        let g = pj.metric();
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let dg: T3 = std::array::from_fn(|m| {
            std::array::from_fn(|a| std::array::from_fn(|c| dot(&pj.r2[a][m], &pj.r1[c]) + dot(&pj.r1[a], &pj.r2[c][m])))
        });
        let dn = pj.normal_derivative(det, &dg);
        let (ginv, _) = inv2(&pg.g);
        let mut worst = 0.0f64;
        for a in 0..2 {
            for c in 0..3 {
                let mut v = dn[a][c];
                for gg in 0..2 {
                    for b in 0..2 {
                        v += ginv[gg][b] * pg.b[a][gg] * pj.r1[b][c];
                    }
                }
                worst = worst.max(v.abs());
            }
        }
        worst
    });
    let a = geom.norm(&gauss, "gauss-weingarten r_ab");
    let b = geom.norm(&weingarten, "gauss-weingarten n_a");
    Ok(ResidualReport::merge("gauss-weingarten", &[a, b]))
}

/// One chart of a surface decomposition for the integral curvature.
pub struct CurvaturePatch<'a> {
    pub geom: &'a GeometryData,
    pub curvature: &'a ScalarField,
    /// Partition-of-unity weight; `None` means weight one everywhere.
    pub weight: Option<&'a ScalarField>,
}

/// `chi = (1 / 2 pi) sum_patches integral K w sqrt(det g) d^2u`, trapezoidal
/// (spectrally accurate for smooth periodic integrands).
pub fn integral_curvature(patches: &[CurvaturePatch<'_>]) -> f64 {
    let mut total = 0.0;
    for patch in patches {
        let grid = patch.geom.grid();
        let area = grid.dx() * grid.dy();
        let s: f64 = (0..grid.len())
            .map(|idx| {
                let w = patch.weight.map_or(1.0, |w| w.data()[idx]);
                if w == 0.0 {
                    return 0.0;
                }
                w * patch.curvature.data()[idx] * patch.geom.points[idx].det_g().sqrt()
            })
            .sum();
        total += s * area;
    }
    total / (2.0 * PI)
}

/// Round sphere of radius `radius` on a `[0, 2pi)^2` grid. The polar angle
/// is shifted by half a cell so no sample sits on a pole; the mask keeps the
/// band `u1 in [0.3 pi, 0.7 pi]`. The normal points outward, so `b = -g / R`.
pub fn sphere_chart(n: usize, radius: f64) -> Result<PositionField> {
    let grid = Grid2::square(n)?;
    let shift = 0.5 * grid.dx();
    let p = PositionField::sample(grid, [[0.0; 2]; 3], |x, u2| {
        let u1 = x + shift;
        [radius * u1.sin() * u2.cos(), radius * u1.sin() * u2.sin(), radius * u1.cos()]
    });
    let mask = (0..grid.len())
        .map(|idx| {
            let u1 = grid.x(grid.coords(idx).0) + shift;
            (0.3 * PI..=0.7 * PI).contains(&u1)
        })
        .collect();
    p.with_mask(mask)
}

/// Polar angle of the sphere chart at column `i`.
pub fn sphere_polar_angle(grid: &Grid2, i: usize) -> f64 {
    grid.x(i) + 0.5 * grid.dx()
}

/// Cylinder `(cos u1, sin u1, u2)` of unit radius.
pub fn cylinder_chart(n: usize) -> Result<PositionField> {
    let grid = Grid2::square(n)?;
    Ok(PositionField::sample(grid, [[0.0; 2], [0.0; 2], [0.0, 1.0]], |u1, u2| [u1.cos(), u1.sin(), u2]))
}

/// Torus of revolution with tube radius `minor` around a circle of radius `major`.
pub fn torus_chart(n: usize, major: f64, minor: f64) -> Result<PositionField> {
    let grid = Grid2::square(n)?;
    Ok(PositionField::sample(grid, [[0.0; 2]; 3], |u1, u2| {
        let rho = major + minor * u1.cos();
        [rho * u2.cos(), rho * u2.sin(), minor * u1.sin()]
    }))
}

/// Smooth bump equal to one on the middle of `[a, b]` and vanishing with all
/// derivatives at the ends.
pub fn bump_window(u: f64, a: f64, b: f64) -> f64 {
    if u <= a || u >= b {
        return 0.0;
    }
    let s = (u - a) / (b - a);
    (4.0 - 1.0 / (s * (1.0 - s))).exp()
}

/// Euler characteristic of the round sphere from one chart: the windowed
/// band is integrated on the grid and the cap contributions outside the
/// window are added from the closed form `K sqrt(g) = sin u1`.
pub fn sphere_euler_characteristic(n: usize, radius: f64) -> Result<f64> {
    let (a, b) = (0.1 * PI, 0.9 * PI);
    let p = sphere_chart(n, radius)?;
    let geom = fundamental_forms(&p)?.with_mask(None);
    let (k, _) = curvatures(&geom)?;
    let grid = *geom.grid();
    let weight = ScalarField::from_index_fn(grid, |idx| bump_window(sphere_polar_angle(&grid, grid.coords(idx).0), a, b));
    let band = integral_curvature(&[CurvaturePatch { geom: &geom, curvature: &k, weight: Some(&weight) }]);
    // (1 / 2 pi) * 2 pi * integral_0^pi (1 - w) sin u du, composite Simpson
    let m = 20_000;
    let h = PI / m as f64;
    let f = |u: f64| (1.0 - bump_window(u, a, b)) * u.sin();
    let mut caps = f(0.0) + f(PI);
    for i in 1..m {
        caps += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    Ok(band + caps * h / 3.0)
}

//! Shared on-disk field format: a flat little-endian block of `f64` in
//! row-major (x fastest) order, plus a JSON sidecar describing the grid.
//!
//! Complex samples are interleaved `(re, im)`. Matrix samples store their
//! `dim x dim` entries row-major, each entry interleaved `(re, im)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, MatrixField, Sample, ScalarField};
use crate::grid::Grid2;
use crate::mat::Mat;
use crate::stack::TimeStack;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
    Matrix,
}

/// JSON sidecar of a binary field block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub name: String,
    pub nx: usize,
    pub ny: usize,
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Ly")]
    pub ly: f64,
    pub kind: FieldKind,
    pub dim: usize,
}

impl FieldHeader {
    pub fn grid(&self) -> Result<Grid2> {
        Grid2::new(self.nx, self.ny, self.lx, self.ly)
    }

    /// Number of `f64` values in the binary block.
    pub fn value_count(&self) -> usize {
        let per = match self.kind {
            FieldKind::Real => 1,
            FieldKind::Complex => 2,
            FieldKind::Matrix => 2 * self.dim * self.dim,
        };
        self.nx * self.ny * per
    }
}

/// A field of any of the three kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Real(ScalarField),
    Complex(ComplexField),
    Matrix(MatrixField),
}

impl AnyField {
    pub fn grid(&self) -> &Grid2 {
        match self {
            AnyField::Real(f) => f.grid(),
            AnyField::Complex(f) => f.grid(),
            AnyField::Matrix(f) => f.grid(),
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            AnyField::Real(_) => FieldKind::Real,
            AnyField::Complex(_) => FieldKind::Complex,
            AnyField::Matrix(_) => FieldKind::Matrix,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyField::Matrix(f) => f.dim(),
            _ => 1,
        }
    }

    pub fn header(&self, name: &str) -> FieldHeader {
        let g = self.grid();
        FieldHeader { name: name.to_string(), nx: g.nx(), ny: g.ny(), lx: g.lx(), ly: g.ly(), kind: self.kind(), dim: self.dim() }
    }

    /// Flattened values in file order.
    pub fn values(&self) -> Vec<f64> {
        fn flat<T: Sample>(f: &Field<T>, complex: bool) -> Vec<f64> {
            let mut out = Vec::new();
            for v in f.data() {
                for c in 0..v.entry_count() {
                    let z = v.component(c);
                    out.push(z.re);
                    if complex {
                        out.push(z.im);
                    }
                }
            }
            out
        }
        match self {
            AnyField::Real(f) => f.data().to_vec(),
            AnyField::Complex(f) => flat(f, true),
            AnyField::Matrix(f) => flat(f, true),
        }
    }

    pub fn from_values(header: &FieldHeader, values: &[f64]) -> Result<Self> {
        if values.len() != header.value_count() {
            return Err(Error::Format(format!("expected {} values, found {}", header.value_count(), values.len())));
        }
        let grid = header.grid().map_err(|e| Error::Format(e.to_string()))?;
        Ok(match header.kind {
            FieldKind::Real => AnyField::Real(Field::from_vec(grid, values.to_vec())?),
            FieldKind::Complex => AnyField::Complex(Field::from_vec(
                grid,
                values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect(),
            )?),
            FieldKind::Matrix => {
                let d = header.dim;
                if !(1..=3).contains(&d) {
                    return Err(Error::Format(format!("matrix dim {d} unsupported")));
                }
                let data = values
                    .chunks_exact(2 * d * d)
                    .map(|chunk| {
                        let mut m = Mat::zeros(d);
                        for (c, p) in chunk.chunks_exact(2).enumerate() {
                            m.set_component(c, Complex64::new(p[0], p[1]));
                        }
                        m
                    })
                    .collect();
                AnyField::Matrix(Field::from_vec(grid, data)?)
            }
        })
    }
}

impl From<ScalarField> for AnyField {
    fn from(f: ScalarField) -> Self {
        AnyField::Real(f)
    }
}

impl From<ComplexField> for AnyField {
    fn from(f: ComplexField) -> Self {
        AnyField::Complex(f)
    }
}

impl From<MatrixField> for AnyField {
    fn from(f: MatrixField) -> Self {
        AnyField::Matrix(f)
    }
}

/// Paths of the `.bin` block and `.json` sidecar for a stem or either file.
pub fn paths(path: &Path) -> (PathBuf, PathBuf) {
    let stem = match path.extension().and_then(|e| e.to_str()) {
        Some("bin") | Some("json") => path.with_extension(""),
        _ => path.to_path_buf(),
    };
    let mut bin = stem.clone().into_os_string();
    bin.push(".bin");
    let mut json = stem.into_os_string();
    json.push(".json");
    (PathBuf::from(bin), PathBuf::from(json))
}

pub fn encode_values(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_values(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Format(format!("binary block length {} is not a multiple of 8", bytes.len())));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect())
}

pub fn write_field(path: &Path, name: &str, field: &AnyField) -> Result<()> {
    let (bin, json) = paths(path);
    fs::write(&bin, encode_values(&field.values()))?;
    fs::write(&json, serde_json::to_string_pretty(&field.header(name))?)?;
    Ok(())
}

pub fn read_header(path: &Path) -> Result<FieldHeader> {
    let (_, json) = paths(path);
    let text = fs::read_to_string(&json)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", json.display())))
}

pub fn read_field(path: &Path) -> Result<(FieldHeader, AnyField)> {
    let header = read_header(path)?;
    let (bin, _) = paths(path);
    let values = decode_values(&fs::read(&bin)?)?;
    let field = AnyField::from_values(&header, &values)?;
    Ok((header, field))
}

/// Manifest of a serialized time stack: one field file per slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StackManifest {
    pub name: String,
    pub t0: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub slices: Vec<String>,
}

pub fn write_stack<T: Sample>(dir: &Path, name: &str, stack: &TimeStack<T>) -> Result<StackManifest>
where
    AnyField: From<Field<T>>,
{
    fs::create_dir_all(dir)?;
    let mut slices = Vec::with_capacity(stack.len());
    for (i, s) in stack.slices().iter().enumerate() {
        let stem = format!("{name}_{i:04}");
        write_field(&dir.join(&stem), &stem, &AnyField::from(s.clone()))?;
        slices.push(stem);
    }
    let manifest = StackManifest {
        name: name.to_string(),
        t0: stack.t0(),
        dt: stack.dt(),
        times: (0..stack.len()).map(|i| stack.time(i)).collect(),
        slices,
    };
    fs::write(dir.join(format!("{name}_manifest.json")), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// CSV dump with header `x,y,value` (complex: `x,y,re,im`; matrix: one
/// `re_rc,im_rc` pair per entry).
pub fn to_csv(field: &AnyField) -> String {
    let g = *field.grid();
    let mut out = String::new();
    match field {
        AnyField::Real(_) => out.push_str("x,y,value\n"),
        AnyField::Complex(_) => out.push_str("x,y,re,im\n"),
        AnyField::Matrix(m) => {
            out.push_str("x,y");
            let d = m.dim();
            for r in 0..d {
                for c in 0..d {
                    out.push_str(&format!(",re_{r}{c},im_{r}{c}"));
                }
            }
            out.push('\n');
        }
    }
    let values = field.values();
    let per = values.len() / g.len();
    for idx in 0..g.len() {
        let (i, j) = g.coords(idx);
        out.push_str(&format!("{},{}", g.x(i), g.y(j)));
        for v in &values[idx * per..(idx + 1) * per] {
            out.push_str(&format!(",{v:e}"));
        }
        out.push('\n');
    }
    out
}

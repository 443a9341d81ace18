//! On-disk forms: kernels as dense CSV or a compact binary format, outcome
//! vectors as single-column CSV.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inequality::Kernel;

/// Magic bytes of the binary kernel format: `HFK1`, then the matrix order
/// as little-endian u64, then n*n little-endian f64 in row-major order.
const KERNEL_MAGIC: &[u8; 4] = b"HFK1";

impl Kernel {
    /// Dense CSV: a header line holding `n`, then n comma-separated rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let n = self.n();
        let mut out = String::with_capacity(n * n * 8);
        out.push_str(&format!("{n}\n"));
        for i in 0..n {
            let row: Vec<String> = self
                .matrix()
                .row(i)
                .iter()
                .map(|v| format!("{v}"))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty kernel file"))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("header `{header}` is not a size")))?;
        let mut matrix = Array2::zeros((n, n));
        let mut filled = 0usize;
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if filled >= n {
                return Err(Error::parse(idx + 1, "more rows than the header promises"));
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(idx + 1, format!("bad entry `{v}`")))
                })
                .collect::<Result<_>>()?;
            if values.len() != n {
                return Err(Error::parse(
                    idx + 1,
                    format!("expected {n} columns, got {}", values.len()),
                ));
            }
            for (j, v) in values.into_iter().enumerate() {
                matrix[[filled, j]] = v;
            }
            filled += 1;
        }
        if filled != n {
            return Err(Error::Invalid(format!("expected {n} rows, got {filled}")));
        }
        Kernel::new(matrix)
    }

    /// Compact binary form (`HFK1` magic, u64 order, f64 row-major, all
    /// little-endian).
    pub fn write_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let n = self.n();
        let mut buf = Vec::with_capacity(4 + 8 + n * n * 8);
        buf.extend_from_slice(KERNEL_MAGIC);
        buf.extend_from_slice(&(n as u64).to_le_bytes());
        for v in self.matrix().iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&buf).map_err(|e| Error::io(path, e))
    }

    pub fn read_binary(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut buf = Vec::new();
        f.read_to_end(&mut buf).map_err(|e| Error::io(path, e))?;
        if buf.len() < 12 || &buf[0..4] != KERNEL_MAGIC {
            return Err(Error::Invalid("not a kernel file (bad magic)".into()));
        }
        let n = u64::from_le_bytes(buf[4..12].try_into().unwrap()) as usize;
        let expected = 12 + n * n * 8;
        if buf.len() != expected {
            return Err(Error::Invalid(format!(
                "kernel file holds {} bytes, expected {expected}",
                buf.len()
            )));
        }
        let mut matrix = Array2::zeros((n, n));
        for (idx, chunk) in buf[12..].chunks_exact(8).enumerate() {
            matrix[[idx / n, idx % n]] = f64::from_le_bytes(chunk.try_into().unwrap());
        }
        Kernel::new(matrix)
    }
}

/// Per-node outcomes with optional per-node weights; the file form is a
/// single-column CSV (weights, when present, live in a second column).
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeVector {
    pub values: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl OutcomeVector {
    pub fn new(values: Vec<f64>) -> Self {
        OutcomeVector {
            values,
            weights: None,
        }
    }

    pub fn with_weights(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::Dimension(
                "values and weights differ in length".into(),
            ));
        }
        Ok(OutcomeVector {
            values,
            weights: Some(weights),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            match &self.weights {
                Some(w) => out.push_str(&format!("{v},{}\n", w[i])),
                None => out.push_str(&format!("{v}\n")),
            }
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(idx + 1, format!("bad value `{s}`")))
            };
            // Allow a non-numeric header once at the top.
            if idx == 0 && fields.iter().any(|f| parse(f).is_err()) {
                continue;
            }
            values.push(parse(fields[0])?);
            if fields.len() > 1 {
                weights.push(parse(fields[1])?);
            }
        }
        if values.is_empty() {
            return Err(Error::Invalid(format!(
                "{} holds no values",
                path.display()
            )));
        }
        if !weights.is_empty() && weights.len() != values.len() {
            return Err(Error::Invalid("weight column is incomplete".into()));
        }
        Ok(OutcomeVector {
            values,
            weights: if weights.is_empty() {
                None
            } else {
                Some(weights)
            },
        })
    }
}

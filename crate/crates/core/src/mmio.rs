//! Matrix Market (coordinate) reader and writer.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::{Error, Result};
use crate::linalg::{c64, SparseHermitianMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmField {
    Real,
    Complex,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMarketHeader {
    pub format: MmFormat,
    pub field: MmField,
    pub symmetry: MmSymmetry,
}

impl MatrixMarketHeader {
    fn parse(line: &str) -> Result<Self> {
        let lower = line.trim().to_ascii_lowercase();
        let tokens: Vec<&str> = lower.split_whitespace().collect();
        if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
            return Err(Error::parse(
                1,
                "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
            ));
        }
        if tokens[1] != "matrix" {
            return Err(Error::parse(
                1,
                format!("unsupported object '{}'", tokens[1]),
            ));
        }
        let format = match tokens[2] {
            "coordinate" => MmFormat::Coordinate,
            "array" => MmFormat::Array,
            other => return Err(Error::parse(1, format!("unknown format '{other}'"))),
        };
        let field = match tokens[3] {
            "real" | "double" => MmField::Real,
            "complex" => MmField::Complex,
            "integer" => MmField::Integer,
            "pattern" => MmField::Pattern,
            other => return Err(Error::parse(1, format!("unknown field '{other}'"))),
        };
        let symmetry = match tokens[4] {
            "general" => MmSymmetry::General,
            "symmetric" => MmSymmetry::Symmetric,
            "hermitian" => MmSymmetry::Hermitian,
            "skew-symmetric" => MmSymmetry::SkewSymmetric,
            other => return Err(Error::parse(1, format!("unknown symmetry '{other}'"))),
        };
        let header = MatrixMarketHeader {
            format,
            field,
            symmetry,
        };
        header.validate()?;
        Ok(header)
    }

    fn validate(&self) -> Result<()> {
        if self.format != MmFormat::Coordinate {
            return Err(Error::parse(1, "only coordinate format is supported"));
        }
        if self.field == MmField::Pattern {
            return Err(Error::parse(1, "pattern matrices carry no values"));
        }
        if self.symmetry == MmSymmetry::SkewSymmetric {
            return Err(Error::parse(
                1,
                "skew-symmetric matrices cannot be Hermitian",
            ));
        }
        if self.symmetry == MmSymmetry::Hermitian && self.field != MmField::Complex {
            return Err(Error::parse(
                1,
                "hermitian symmetry requires the complex field",
            ));
        }
        Ok(())
    }
}

/// Parses a Matrix Market coordinate stream. Symmetric and Hermitian files are
/// mirrored to full storage (conjugated for Hermitian, not for symmetric);
/// duplicate entries are summed.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparseHermitianMatrix> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => MatrixMarketHeader::parse(&line?)?,
        None => return Err(Error::parse(1, "empty input")),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
    let mut expected = 0usize;
    let mut seen = 0usize;

    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let Some((rows, cols)) = size else {
            let rows = parse_usize(tok.next(), lineno)?;
            let cols = parse_usize(tok.next(), lineno)?;
            expected = parse_usize(tok.next(), lineno)?;
            if rows != cols {
                return Err(Error::parse(
                    lineno,
                    format!("matrix is {rows}x{cols}, not square"),
                ));
            }
            size = Some((rows, cols));
            triplets.reserve(expected * 2);
            continue;
        };
        if seen == expected {
            return Err(Error::parse(lineno, "more entries than declared"));
        }
        let i = parse_usize(tok.next(), lineno)?;
        let j = parse_usize(tok.next(), lineno)?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::parse(
                lineno,
                format!("index ({i}, {j}) out of range"),
            ));
        }
        let re = parse_f64(tok.next(), lineno)?;
        let im = match header.field {
            MmField::Complex => parse_f64(tok.next(), lineno)?,
            _ => 0.0,
        };
        let v = c64(re, im);
        let (i, j) = (i - 1, j - 1);
        triplets.push((i, j, v));
        if i != j {
            match header.symmetry {
                MmSymmetry::Symmetric => triplets.push((j, i, v)),
                MmSymmetry::Hermitian => triplets.push((j, i, v.conj())),
                _ => {}
            }
        }
        seen += 1;
    }

    let Some((n, _)) = size else {
        return Err(Error::parse(1, "missing size line"));
    };
    if seen != expected {
        return Err(Error::parse(
            0,
            format!("declared {expected} entries, found {seen}"),
        ));
    }
    SparseHermitianMatrix::from_triplets(n, &triplets)
}

/// Reads only the banner line of a Matrix Market file.
pub fn read_matrix_market_header(path: impl AsRef<Path>) -> Result<MatrixMarketHeader> {
    let mut first = String::new();
    open_maybe_gz(path.as_ref())?.read_line(&mut first)?;
    MatrixMarketHeader::parse(&first)
}

fn open_maybe_gz(path: &Path) -> Result<BufReader<Box<dyn Read>>> {
    let file = File::open(path)?;
    let gz = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("gz"));
    let inner: Box<dyn Read> = if gz {
        Box::new(GzDecoder::new(file))
    } else {
        Box::new(file)
    };
    Ok(BufReader::new(inner))
}

/// Reads a Matrix Market file; a `.gz` suffix is decompressed transparently.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseHermitianMatrix> {
    parse_matrix_market(open_maybe_gz(path.as_ref())?)
}

/// Writes every stored entry with `general` symmetry. Values use the shortest
/// representation that parses back to the same double.
pub fn write_matrix_market<W: Write>(a: &SparseHermitianMatrix, mut w: W) -> Result<()> {
    let field = if a.is_real() { "real" } else { "complex" };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
    writeln!(w, "{} {} {}", a.n(), a.n(), a.nnz())?;
    for i in 0..a.n() {
        for pos in a.row_ptr()[i]..a.row_ptr()[i + 1] {
            let v = a.values()[pos];
            let j = a.col_idx()[pos];
            if a.is_real() {
                writeln!(w, "{} {} {:e}", i + 1, j + 1, v.re)?;
            } else {
                writeln!(w, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im)?;
            }
        }
    }
    Ok(())
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing integer"))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid integer '{tok}'")))
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing value"))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid number '{tok}'")))
}

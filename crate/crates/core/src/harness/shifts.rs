//! Shift sets.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lanczos::{Lanczos, StepOutcome};
use crate::linalg::{SparseHermitianMatrix, C64};
use crate::oracle::{DenseHermitianMatrix, SpectralDecomposition, ORACLE_MAX_N};

/// `z_i = exp(-(2i + 1) pi i / (2m))` for `i = 1..m`.
pub fn generate_unit_circle_shifts(m: usize) -> Result<Vec<C64>> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "unit-circle shift count must be >= 1".into(),
        ));
    }
    Ok((1..=m)
        .map(|i| {
            let theta = -((2 * i + 1) as f64) * std::f64::consts::PI / (2 * m) as f64;
            C64::from_polar(1.0, theta)
        })
        .collect())
}

/// Which end of the spectrum a spectrum-offset sweep attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaChoice {
    Min,
    Max,
}

impl LambdaChoice {
    pub fn name(&self) -> &'static str {
        match self {
            LambdaChoice::Min => "min",
            LambdaChoice::Max => "max",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    UnitCircle {
        m: usize,
    },
    /// One shift per line in a text file.
    List(PathBuf),
    Explicit(Vec<C64>),
    /// `z = lambda + zeta i` for every `zeta`.
    SpectrumOffset {
        zeta: Vec<f64>,
        lambda: LambdaChoice,
    },
}

impl Default for ShiftSpec {
    fn default() -> Self {
        ShiftSpec::UnitCircle { m: 16 }
    }
}

impl FromStr for ShiftSpec {
    type Err = Error;

    /// `unit-circle:m=16`, `list:shifts.txt`, `values:1+2i,3-0.5i`,
    /// `spectrum-offset:zeta=1e-1,1e-2;lambda=max`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(format!("shift spec '{s}': {msg}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "unit-circle" => {
                let mut m = 16;
                for (k, v) in key_values(rest) {
                    match k {
                        "m" => m = v.parse().map_err(|_| bad(format!("bad m '{v}'")))?,
                        _ => return Err(bad(format!("unknown key '{k}'"))),
                    }
                }
                Ok(ShiftSpec::UnitCircle { m })
            }
            "list" if !rest.is_empty() => Ok(ShiftSpec::List(PathBuf::from(rest))),
            "values" => {
                let shifts = rest
                    .split(',')
                    .map(|t| parse_complex(t.trim()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ShiftSpec::Explicit(shifts))
            }
            "spectrum-offset" => {
                let mut zeta = Vec::new();
                let mut lambda = LambdaChoice::Max;
                for (k, v) in key_values(rest) {
                    match k {
                        "zeta" => {
                            zeta = v
                                .split(',')
                                .map(|t| {
                                    t.trim()
                                        .parse::<f64>()
                                        .map_err(|_| bad(format!("bad zeta '{t}'")))
                                })
                                .collect::<Result<Vec<_>>>()?
                        }
                        "lambda" => {
                            lambda = match v {
                                "min" => LambdaChoice::Min,
                                "max" => LambdaChoice::Max,
                                _ => {
                                    return Err(bad(format!(
                                        "lambda must be min or max, got '{v}'"
                                    )))
                                }
                            }
                        }
                        _ => return Err(bad(format!("unknown key '{k}'"))),
                    }
                }
                if zeta.is_empty() {
                    return Err(bad("zeta list is empty".into()));
                }
                Ok(ShiftSpec::SpectrumOffset { zeta, lambda })
            }
            _ => Err(bad(
                "expected unit-circle, list, values or spectrum-offset".into()
            )),
        }
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSpec::UnitCircle { m } => write!(f, "unit-circle:m={m}"),
            ShiftSpec::List(p) => write!(f, "list:{}", p.display()),
            ShiftSpec::Explicit(z) => {
                let parts: Vec<String> = z.iter().map(|z| format_complex(*z)).collect();
                write!(f, "values:{}", parts.join(","))
            }
            ShiftSpec::SpectrumOffset { zeta, lambda } => {
                let parts: Vec<String> = zeta.iter().map(|z| format!("{z:e}")).collect();
                write!(
                    f,
                    "spectrum-offset:zeta={};lambda={}",
                    parts.join(","),
                    lambda.name()
                )
            }
        }
    }
}

/// `a=1;b=2` pairs (`;` separated so values may contain commas).
fn key_values(s: &str) -> impl Iterator<Item = (&str, &str)> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(|t| {
        t.split_once('=')
            .map_or((t.trim(), ""), |(k, v)| (k.trim(), v.trim()))
    })
}

/// `a+bi`, `a-bi`, `bi`, `a`, or two numbers separated by whitespace.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidParameter(format!("cannot parse complex number '{s}'"));
    let t = s.trim();
    let parts: Vec<&str> = t.split_whitespace().collect();
    if parts.len() == 2 {
        let re = parts[0].parse().map_err(|_| bad())?;
        let im = parts[1].parse().map_err(|_| bad())?;
        return Ok(C64::new(re, im));
    }
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // Split at the last sign that is not part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&p| {
            (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E')
        });
        return match split {
            Some(p) => {
                let re = body[..p].parse().map_err(|_| bad())?;
                let im_txt = &body[p..];
                let im = match im_txt {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_txt.parse().map_err(|_| bad())?,
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => body.parse().map_err(|_| bad())?,
                };
                Ok(C64::new(0.0, im))
            }
        };
    }
    Ok(C64::new(t.parse().map_err(|_| bad())?, 0.0))
}

pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{:e}-{:e}i", z.re, -z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

/// One shift per nonblank line; `#` starts a comment.
pub fn parse_shift_list(text: &str) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let body = body.replace(',', " ");
        out.push(parse_complex(&body).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn read_shift_list(path: &Path) -> Result<Vec<C64>> {
    parse_shift_list(&std::fs::read_to_string(path)?)
}

/// Smallest and largest eigenvalue: exact for `n <= ORACLE_MAX_N`, otherwise
/// the extreme Ritz values of `ritz_steps` Lanczos steps from a uniform start.
pub fn spectrum_extremes(a: &SparseHermitianMatrix, ritz_steps: usize) -> Result<(f64, f64)> {
    if a.n() <= ORACLE_MAX_N {
        let dense = DenseHermitianMatrix::from_sparse(a)?;
        let eig = SpectralDecomposition::compute(&dense)?.eigenvalues;
        return Ok((eig[0], eig[eig.len() - 1]));
    }
    ritz_extremes(a, ritz_steps)
}

pub fn ritz_extremes(a: &SparseHermitianMatrix, steps: usize) -> Result<(f64, f64)> {
    let v = vec![C64::new(1.0, 0.0); a.n()];
    let mut lanczos = Lanczos::new(a, &v)?;
    while lanczos.k() < steps.max(1) {
        if let StepOutcome::InvariantSubspace { .. } = lanczos.step()? {
            break;
        }
    }
    let c = lanczos.coefficients();
    let k = c.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            c.alpha[i]
        } else if i + 1 == j {
            c.beta[i]
        } else if j + 1 == i {
            c.beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t).eigenvalues;
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Resolves a spec against a matrix. Spectrum-offset sweeps need the
/// matrix; the others ignore it.
pub fn resolve_shifts(spec: &ShiftSpec, a: Option<&SparseHermitianMatrix>) -> Result<Vec<C64>> {
    let shifts = match spec {
        ShiftSpec::UnitCircle { m } => generate_unit_circle_shifts(*m)?,
        ShiftSpec::List(p) => read_shift_list(p)?,
        ShiftSpec::Explicit(z) => z.clone(),
        ShiftSpec::SpectrumOffset { zeta, lambda } => {
            let a = a.ok_or_else(|| {
                Error::InvalidParameter("spectrum-offset shifts need a matrix".into())
            })?;
            let (lo, hi) = spectrum_extremes(a, 300)?;
            let base = match lambda {
                LambdaChoice::Min => lo,
                LambdaChoice::Max => hi,
            };
            zeta.iter().map(|&z| C64::new(base, z)).collect()
        }
    };
    if shifts.is_empty() {
        return Err(Error::EmptyShifts);
    }
    for (i, z) in shifts.iter().enumerate() {
        if shifts[..i].contains(z) {
            return Err(Error::InvalidParameter(format!(
                "duplicate shift {}",
                format_complex(*z)
            )));
        }
    }
    Ok(shifts)
}

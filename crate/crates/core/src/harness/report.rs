//! CSV convergence histories, JSON summaries and a plain-text table.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use super::experiment::Report;
use crate::convergence::{Method, ShiftStatus};
use crate::error::{Error, Result};
use crate::linalg::C64;

pub const CSV_HEADER: &str = "method,shift_index,iteration,value_re,value_im,mu,nu,rel_err,status";

/// One history row.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub shift_index: usize,
    pub iteration: usize,
    pub value: C64,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub rel_err: Option<f64>,
    /// `active` on every row but a shift's last, which carries the final
    /// status.
    pub status: ShiftStatus,
}

pub fn history_records(report: &Report) -> Vec<ConvergenceRecord> {
    let mut out = Vec::new();
    for m in &report.methods {
        let Some(result) = &m.result else { continue };
        for (i, shift) in result.shifts.iter().enumerate() {
            let last = shift.history.len();
            for (row, h) in shift.history.iter().enumerate() {
                out.push(ConvergenceRecord {
                    method: m.method,
                    shift_index: i,
                    iteration: h.k,
                    value: h.value,
                    mu: h.mu,
                    nu: h.nu,
                    rel_err: h.rel_err,
                    status: if row + 1 == last {
                        shift.status
                    } else {
                        ShiftStatus::Active
                    },
                });
            }
        }
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn write_history_csv<W: Write>(records: &[ConvergenceRecord], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{:e},{:e},{},{},{},{}",
            r.method,
            r.shift_index,
            r.iteration,
            r.value.re,
            r.value.im,
            opt(r.mu),
            opt(r.nu),
            opt(r.rel_err),
            r.status
        )?;
    }
    Ok(())
}

pub fn parse_history_csv<R: BufRead>(reader: R) -> Result<Vec<ConvergenceRecord>> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim_end) != Some(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header '{CSV_HEADER}'"),
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse {
            line: lineno,
            message: m,
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(err(format!("expected 9 fields, found {}", f.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(format!("bad number '{s}'")))
        };
        let opt_num = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.push(ConvergenceRecord {
            method: f[0].parse().map_err(|e: Error| err(e.to_string()))?,
            shift_index: f[1]
                .parse()
                .map_err(|_| err(format!("bad index '{}'", f[1])))?,
            iteration: f[2]
                .parse()
                .map_err(|_| err(format!("bad iteration '{}'", f[2])))?,
            value: C64::new(num(f[3])?, num(f[4])?),
            mu: opt_num(f[5])?,
            nu: opt_num(f[6])?,
            rel_err: opt_num(f[7])?,
            status: f[8].parse().map_err(|e: Error| err(e.to_string()))?,
        });
    }
    Ok(out)
}

fn complex_json(z: C64) -> serde_json::Value {
    json!([z.re, z.im])
}

pub fn summary_json(report: &Report) -> serde_json::Value {
    let methods: Vec<serde_json::Value> = report
        .methods
        .iter()
        .map(|m| {
            let shifts: Vec<serde_json::Value> = m
                .result
                .iter()
                .flat_map(|r| r.shifts.iter().enumerate())
                .map(|(i, s)| {
                    json!({
                        "index": i,
                        "z": complex_json(s.z),
                        "value": complex_json(s.value),
                        "iterations": s.iterations,
                        "status": s.status.name(),
                    })
                })
                .collect();
            let converged = m.result.as_ref().map_or(0, |r| {
                r.shifts.iter().filter(|s| s.status.is_success()).count()
            });
            json!({
                "method": m.method.name(),
                "skipped": m.skipped,
                "iterations": m.iterations,
                "vector_iterations": m.result.as_ref().map(|r| r.iterations),
                "wall_time_s": m.wall_time_s,
                "max_rel_err": m.max_rel_err,
                "converged_shifts": converged,
                "shifts": shifts,
            })
        })
        .collect();
    let reference = report.reference.as_ref().map(|r| {
        json!({
            "values": r.values.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            "lambda_min": r.spectrum.map(|s| s.0),
            "lambda_max": r.spectrum.map(|s| s.1),
            "condition_numbers": r.condition_numbers,
        })
    });
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "config": report.config.to_json(),
        "problem": {
            "n": report.n,
            "nnz": report.nnz,
            "shifts": report.shifts.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        },
        "reference": reference,
        "methods": methods,
        "warnings": report.warnings,
        "metadata": {
            "version": env!("CARGO_PKG_VERSION"),
            "unix_time": unix_time,
            "os": std::env::consts::OS,
            "arch": std::env::consts::ARCH,
        },
    })
}

/// Per-method iterations and times, one line per method.
pub fn render_table(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>10} {:>10} {:>12}  shifts",
        "method", "iterations", "time [s]", "max rel err"
    );
    for m in &report.methods {
        if let Some(why) = &m.skipped {
            let _ = writeln!(
                s,
                "{:<10} {:>10} {:>10} {:>12}  skipped: {why}",
                m.method.name(),
                "-",
                "-",
                "-"
            );
            continue;
        }
        let r = m.result.as_ref().expect("ran");
        let ok = r.shifts.iter().filter(|x| x.status.is_success()).count();
        let err = m
            .max_rel_err
            .map_or("-".to_string(), |e| format!("{e:.2e}"));
        let _ = writeln!(
            s,
            "{:<10} {:>10} {:>10.3} {:>12}  {}/{} converged",
            m.method.name(),
            m.iterations,
            m.wall_time_s,
            err,
            ok,
            r.shifts.len()
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub summary: PathBuf,
    pub history: Option<PathBuf>,
}

/// Writes `summary.json` and, when histories were recorded, `history.csv`
/// into `dir`.
pub fn write_report(report: &Report, dir: &Path) -> Result<ReportFiles> {
    std::fs::create_dir_all(dir)?;
    let summary = dir.join("summary.json");
    let text =
        serde_json::to_string_pretty(&summary_json(report)).map_err(|e| Error::Io(e.into()))?;
    std::fs::write(&summary, text + "\n")?;
    let history = if report.config.history {
        let path = dir.join("history.csv");
        let mut buf = Vec::new();
        write_history_csv(&history_records(report), &mut buf)?;
        std::fs::write(&path, buf)?;
        Some(path)
    } else {
        None
    };
    Ok(ReportFiles { summary, history })
}

//! Experiment configuration: defaults, `key = value` files and overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use super::shifts::{parse_shift_list, ShiftSpec};
use crate::convergence::{Method, DEFAULT_LAG, DEFAULT_RTOL};
use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Debug, Clone, PartialEq, Default)]
pub enum VectorSpec {
    /// `n^{-1/2} (1, ..., 1)`.
    #[default]
    Uniform,
    /// One entry per line.
    File(PathBuf),
    /// Entries uniform in `[-1, 1]`, normalized, from a seeded ChaCha stream.
    Random { seed: u64 },
}

impl VectorSpec {
    pub fn build(&self, n: usize) -> Result<Vec<C64>> {
        match self {
            VectorSpec::Uniform => Ok(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n]),
            VectorSpec::File(p) => {
                let v = parse_shift_list(&std::fs::read_to_string(p)?)?;
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        actual: v.len(),
                    });
                }
                Ok(v)
            }
            VectorSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                Ok(v.iter().map(|x| C64::new(x / nrm, 0.0)).collect())
            }
        }
    }
}

impl FromStr for VectorSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "uniform" => Ok(VectorSpec::Uniform),
            "file" if !rest.is_empty() => Ok(VectorSpec::File(PathBuf::from(rest))),
            "random" => {
                let seed = match rest.trim().strip_prefix("seed=") {
                    Some(v) => v
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad random seed '{v}'")))?,
                    None if rest.trim().is_empty() => 0,
                    None => return Err(Error::InvalidParameter(format!("bad vector spec '{s}'"))),
                };
                Ok(VectorSpec::Random { seed })
            }
            _ => Err(Error::InvalidParameter(format!(
                "vector spec '{s}': expected uniform, file:PATH or random:seed=N"
            ))),
        }
    }
}

impl fmt::Display for VectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorSpec::Uniform => f.write_str("uniform"),
            VectorSpec::File(p) => write!(f, "file:{}", p.display()),
            VectorSpec::Random { seed } => write!(f, "random:seed={seed}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReferenceMode {
    #[default]
    None,
    /// Direct dense solves.
    Dense,
    /// Eigendecomposition and partial fractions.
    Spectral,
}

impl ReferenceMode {
    pub fn name(&self) -> &'static str {
        match self {
            ReferenceMode::None => "none",
            ReferenceMode::Dense => "dense",
            ReferenceMode::Spectral => "spectral",
        }
    }
}

impl FromStr for ReferenceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(ReferenceMode::None),
            "dense" => Ok(ReferenceMode::Dense),
            "spectral" => Ok(ReferenceMode::Spectral),
            other => Err(Error::InvalidParameter(format!(
                "reference mode '{other}': expected none, dense or spectral"
            ))),
        }
    }
}

impl fmt::Display for ReferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub matrix: Option<PathBuf>,
    pub vector: VectorSpec,
    pub shifts: ShiftSpec,
    pub methods: Vec<Method>,
    pub rtol: f64,
    pub max_iter: usize,
    pub lag: usize,
    pub reference: ReferenceMode,
    /// Seed shift index for COCG/COCR; `None` picks the largest `|Im z|`.
    pub seed_shift: Option<usize>,
    pub history: bool,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            matrix: None,
            vector: VectorSpec::Uniform,
            shifts: ShiftSpec::default(),
            methods: Method::ALL.to_vec(),
            rtol: DEFAULT_RTOL,
            max_iter: 10_000,
            lag: DEFAULT_LAG,
            reference: ReferenceMode::None,
            seed_shift: None,
            history: false,
            out: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StringOrList {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    matrix: Option<PathBuf>,
    vector: Option<String>,
    shifts: Option<String>,
    methods: Option<StringOrList>,
    rtol: Option<f64>,
    max_iter: Option<usize>,
    lag: Option<usize>,
    reference: Option<String>,
    seed_shift: Option<usize>,
    history: Option<bool>,
    out: Option<PathBuf>,
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Method::from_str)
        .collect()
}

impl ExperimentConfig {
    /// Applies a `key = value` configuration text on top of `self`. Keys
    /// accept `-` or `_` separators.
    pub fn merge_config_text(&mut self, text: &str) -> Result<()> {
        let normalized: String = text
            .lines()
            .map(|line| match line.split_once('=') {
                Some((k, v)) => format!("{}={}\n", k.trim().replace('_', "-"), v),
                None => format!("{line}\n"),
            })
            .collect();
        let file: ConfigFile = toml::from_str(&normalized)
            .map_err(|e| Error::InvalidParameter(format!("config file: {e}")))?;
        if let Some(m) = file.matrix {
            self.matrix = Some(m);
        }
        if let Some(v) = file.vector {
            self.vector = v.parse()?;
        }
        if let Some(s) = file.shifts {
            self.shifts = s.parse()?;
        }
        if let Some(m) = file.methods {
            self.methods = match m {
                StringOrList::One(s) => parse_methods(&s)?,
                StringOrList::Many(v) => v.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            };
        }
        if let Some(r) = file.rtol {
            self.rtol = r;
        }
        if let Some(m) = file.max_iter {
            self.max_iter = m;
        }
        if let Some(d) = file.lag {
            self.lag = d;
        }
        if let Some(r) = file.reference {
            self.reference = r.parse()?;
        }
        if let Some(s) = file.seed_shift {
            self.seed_shift = Some(s);
        }
        if let Some(h) = file.history {
            self.history = h;
        }
        if let Some(o) = file.out {
            self.out = Some(o);
        }
        Ok(())
    }

    pub fn merge_config_file(&mut self, path: &Path) -> Result<()> {
        self.merge_config_text(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.methods.is_empty() {
            return bad("methods list is empty");
        }
        if self.rtol.is_nan() || self.rtol <= 0.0 {
            return bad("rtol must be positive");
        }
        if self.lag == 0 {
            return bad("estimator lag must be >= 1");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be >= 1");
        }
        if let ShiftSpec::UnitCircle { m: 0 } = self.shifts {
            return bad("unit-circle shift count must be >= 1");
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "matrix": self.matrix.as_ref().map(|p| p.display().to_string()),
            "vector": self.vector.to_string(),
            "shifts": self.shifts.to_string(),
            "methods": self.methods.iter().map(Method::name).collect::<Vec<_>>(),
            "rtol": self.rtol,
            "max_iter": self.max_iter,
            "lag": self.lag,
            "reference": self.reference.name(),
            "seed_shift": self.seed_shift,
            "history": self.history,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.rtol, 1e-10);
        assert_eq!(c.lag, 5);
    }

    #[test]
    fn empty_methods_rejected() {
        let c = ExperimentConfig {
            methods: vec![],
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_text() {
        let mut c = ExperimentConfig::default();
        c.merge_config_text(
            "# protocol\nmatrix = \"data/a.mtx\"\nmethods = \"lanczos, minres\"\nrtol = 1e-8\nmax_iter = 50\n\
             reference = \"dense\"\nshifts = \"unit-circle:m=4\"\nvector = \"random:seed=3\"\nhistory = true\n",
        )
        .unwrap();
        assert_eq!(c.methods, vec![Method::Lanczos, Method::Minres]);
        assert_eq!(c.rtol, 1e-8);
        assert_eq!(c.max_iter, 50);
        assert_eq!(c.reference, ReferenceMode::Dense);
        assert_eq!(c.shifts, ShiftSpec::UnitCircle { m: 4 });
        assert_eq!(c.vector, VectorSpec::Random { seed: 3 });
        assert!(c.history);

        let mut c = ExperimentConfig::default();
        c.merge_config_text("methods = [\"cocg\", \"cocr\"]\nseed-shift = 2\n")
            .unwrap();
        assert_eq!(c.methods, vec![Method::Cocg, Method::Cocr]);
        assert_eq!(c.seed_shift, Some(2));

        assert!(ExperimentConfig::default()
            .merge_config_text("unknown = 1\n")
            .is_err());
        assert!(ExperimentConfig::default()
            .merge_config_text("methods = \"gmres\"\n")
            .is_err());
    }

    #[test]
    fn vectors() {
        let u = VectorSpec::Uniform.build(4).unwrap();
        assert!(u.iter().all(|x| *x == C64::new(0.5, 0.0)));
        let a = VectorSpec::Random { seed: 7 }.build(10).unwrap();
        let b = VectorSpec::Random { seed: 7 }.build(10).unwrap();
        assert_eq!(a, b);
        assert!((a.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(
            "random:seed=7".parse::<VectorSpec>().unwrap(),
            VectorSpec::Random { seed: 7 }
        );
        assert!("gaussian".parse::<VectorSpec>().is_err());
    }
}

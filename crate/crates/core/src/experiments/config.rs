//! Flat `key = value` experiment configs.
//!
//! ```text
//! # theta scan at fixed lambda
//! beta = 0.5, 0.8, 1.2, 2, 4
//! lambda = 6
//! sizes = 256, 1024, 4096
//! samples = 2000
//! seed = 7
//! ```
//!
//! Lists are comma separated; `#` starts a comment. The grid is the
//! Cartesian product of `beta x lambda x q x s x sizes`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{validate_params, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Sample,
    PBad,
    Pbar,
    Lemma2,
    Thm2Events,
    Multiscale,
    FkTheta,
    Magnetization,
    ThetaScan,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Sample,
        Kind::PBad,
        Kind::Pbar,
        Kind::Lemma2,
        Kind::Thm2Events,
        Kind::Multiscale,
        Kind::FkTheta,
        Kind::Magnetization,
        Kind::ThetaScan,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Sample => "sample",
            Kind::PBad => "p-bad",
            Kind::Pbar => "pbar",
            Kind::Lemma2 => "lemma2",
            Kind::Thm2Events => "thm2-events",
            Kind::Multiscale => "multiscale",
            Kind::FkTheta => "fk-theta",
            Kind::Magnetization => "magnetization",
            Kind::ThetaScan => "theta-scan",
        }
    }

    /// Keys beyond the common ones that this kind reads.
    fn extra_keys(&self) -> &'static [&'static str] {
        match self {
            Kind::Sample => &[],
            Kind::PBad => &["theta"],
            Kind::Pbar => &["window_halfwidth"],
            Kind::Lemma2 => &["c", "r", "theta"],
            Kind::Thm2Events => &["condition_on_b"],
            Kind::Multiscale => &["c1", "theta1", "c0", "theta_inf", "max_level"],
            Kind::FkTheta | Kind::Magnetization | Kind::ThetaScan => &["burn_in", "batches"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown experiment kind `{s}`")))
    }
}


#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub betas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub qs: Vec<f64>,
    pub ss: Vec<f64>,
    /// `L` or `K` values, depending on the kind.
    pub sizes: Vec<u64>,
    pub samples: usize,
    pub master_seed: u64,
    /// CSV file name inside the output directory.
    pub output: Option<String>,
    pub extra: BTreeMap<String, String>,
}

/// One point of the parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub params: ModelParams,
    /// `None` for kinds without a size axis.
    pub size: Option<u64>,
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(|v| {
            v.trim().parse::<T>().map_err(|e| Error::Parse {
                line,
                msg: format!("{key}: `{}`: {e}", v.trim()),
            })
        })
        .collect()
}

fn parse_one<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    let mut v = parse_list::<T>(line, key, value)?;
    if v.len() != 1 {
        return Err(Error::Parse {
            line,
            msg: format!("{key} takes a single value"),
        });
    }
    Ok(v.remove(0))
}

impl ExperimentConfig {
    /// Parses config text for `kind`; a `kind` key in the text must agree.
    pub fn parse(text: &str, kind: Kind) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            kind,
            betas: Vec::new(),
            lambdas: Vec::new(),
            qs: vec![1.0],
            ss: vec![2.0],
            sizes: Vec::new(),
            samples: 1000,
            master_seed: 0,
            output: None,
            extra: BTreeMap::new(),
        };
        let mut seen = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `key = value`, got `{body}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), line).is_some() {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            match key {
                "kind" => {
                    let k: Kind = value.parse()?;
                    if k != kind {
                        return Err(Error::Parse {
                            line,
                            msg: format!("config is for `{k}`, not `{kind}`"),
                        });
                    }
                }
                "beta" => cfg.betas = parse_list(line, key, value)?,
                "lambda" => cfg.lambdas = parse_list(line, key, value)?,
                "q" => cfg.qs = parse_list(line, key, value)?,
                "s" => cfg.ss = parse_list(line, key, value)?,
                "sizes" => cfg.sizes = parse_list(line, key, value)?,
                "samples" => cfg.samples = parse_one(line, key, value)?,
                "seed" => cfg.master_seed = parse_one(line, key, value)?,
                "output" => cfg.output = Some(value.to_string()),
                _ if kind.extra_keys().contains(&key) => {
                    cfg.extra.insert(key.to_string(), value.to_string());
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown key `{key}` for `{kind}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.betas.is_empty() {
            problems.push("beta is required".to_string());
        }
        if self.lambdas.is_empty() {
            problems.push("lambda is required".to_string());
        }
        if self.kind != Kind::Multiscale && self.sizes.is_empty() {
            problems.push("sizes is required".to_string());
        }
        if self.sizes.contains(&0) {
            problems.push("sizes must be positive".to_string());
        }
        if !problems.is_empty() {
            return Err(Error::InvalidParams(problems));
        }
        for p in self.param_grid() {
            validate_params(p)?;
        }
        for key in self.kind.extra_keys() {
            if let Some(v) = self.extra.get(*key) {
                if v.contains(',') {
                    return Err(Error::InvalidParams(vec![format!("{key} takes a single value")]));
                }
            }
        }
        Ok(())
    }

    fn param_grid(&self) -> Vec<ModelParams> {
        let mut out = Vec::new();
        for &beta in &self.betas {
            for &lambda in &self.lambdas {
                for &q in &self.qs {
                    for &s in &self.ss {
                        out.push(ModelParams::raw(beta, lambda).with_q(q).with_s(s));
                    }
                }
            }
        }
        out
    }

    /// Grid points in output order: `beta` slowest, `sizes` fastest.
    pub fn grid(&self) -> Vec<GridPoint> {
        let sizes: Vec<Option<u64>> = if self.kind == Kind::Multiscale {
            vec![None]
        } else {
            self.sizes.iter().map(|&s| Some(s)).collect()
        };
        let mut out = Vec::new();
        for params in self.param_grid() {
            for &size in &sizes {
                out.push(GridPoint {
                    index: out.len(),
                    params,
                    size,
                });
            }
        }
        out
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.extra
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::InvalidParams(vec![format!("{key} = `{v}`: {e}")]))
            })
            .transpose()
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| Error::InvalidParams(vec![format!("`{}` needs key `{key}`", self.kind)]))
    }

    /// Canonical text form (stable key order), as recorded in manifests.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut s = format!("kind = {}\n", self.kind);
        s += &format!("beta = {}\n", join(&self.betas));
        s += &format!("lambda = {}\n", join(&self.lambdas));
        s += &format!("q = {}\n", join(&self.qs));
        s += &format!("s = {}\n", join(&self.ss));
        if !self.sizes.is_empty() {
            let sizes: Vec<String> = self.sizes.iter().map(|x| x.to_string()).collect();
            s += &format!("sizes = {}\n", sizes.join(", "));
        }
        s += &format!("samples = {}\n", self.samples);
        s += &format!("seed = {}\n", self.master_seed);
        if let Some(o) = &self.output {
            s += &format!("output = {o}\n");
        }
        for (k, v) in &self.extra {
            s += &format!("{k} = {v}\n");
        }
        s
    }
}

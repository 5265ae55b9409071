//! Flat `key = value` experiment files.
//!
//! Blank lines and lines starting with `#` or `;` are ignored. Every key may
//! appear at most once; errors name the offending line.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use punctum::{Complex64, Dim, PerturbationK, Point, PunctureSpectrum, SpectralBasis};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub source: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{l}: {}", self.source, self.message),
            None => write!(f, "{}: {}", self.source, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Zero,
    Delta,
    Alpha,
    Tangential,
}

impl Preset {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "zero" => Some(Preset::Zero),
            "delta" => Some(Preset::Delta),
            "alpha" => Some(Preset::Alpha),
            "tangential" => Some(Preset::Tangential),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dim: Dim,
    pub puncture: Vec<f64>,
    pub cutoff: usize,
    pub preset: Preset,
    pub k: f64,
    pub alpha: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub count: usize,
    /// One-based eigenvalue index for the shifted-eigenvalue scenario.
    pub index: usize,
    /// Force `C_0N = 0` in that scenario.
    pub zero_entry: bool,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub complex_search: bool,
}

const KEYS: &[&str] = &[
    "dimension",
    "puncture",
    "cutoff",
    "preset",
    "k",
    "alpha",
    "alpha_im",
    "weights",
    "lambda_min",
    "lambda_max",
    "lambda_points",
    "count",
    "index",
    "zero_entry",
    "samples",
    "tol",
    "seed",
    "complex_search",
];

impl ExperimentConfig {
    /// The defaults every command starts from.
    pub fn base() -> Self {
        ExperimentConfig {
            dim: Dim::One,
            puncture: vec![0.3],
            cutoff: 200,
            preset: Preset::Delta,
            k: 1.0,
            alpha: Vec::new(),
            weights: Vec::new(),
            lambda_min: -30.0,
            lambda_max: -1.0,
            lambda_points: 10,
            count: 5,
            index: 2,
            zero_entry: false,
            samples: 20,
            tol: 1e-6,
            seed: 0,
            complex_search: false,
        }
    }

    pub fn load(path: &Path, defaults: ExperimentConfig) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: path.display().to_string(),
            line: None,
            message: e.to_string(),
        })?;
        Self::parse(&path.display().to_string(), &text, defaults)
    }

    pub fn parse(source: &str, text: &str, defaults: ExperimentConfig) -> Result<Self, ConfigError> {
        let err = |line: Option<usize>, message: String| ConfigError {
            source: source.to_string(),
            line,
            message,
        };
        let mut entries: HashMap<String, (usize, String)> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(Some(lineno), format!("expected `key = value`, found `{line}`")));
            };
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(err(Some(lineno), format!("unknown key `{key}`")));
            }
            if let Some((first, _)) = entries.get(&key) {
                return Err(err(Some(lineno), format!("duplicate key `{key}` (first set on line {first})")));
            }
            entries.insert(key, (lineno, value.trim().to_string()));
        }

        let mut c = defaults;
        let line_of = |key: &str| entries.get(key).map(|(l, _)| *l);
        let get = |key: &str| entries.get(key).map(|(l, v)| (*l, v.as_str()));

        if let Some((l, v)) = get("dimension") {
            c.dim = match v {
                "1" => Dim::One,
                "3" => Dim::Three,
                _ => return Err(err(Some(l), format!("dimension must be 1 or 3, got `{v}`"))),
            };
            if get("puncture").is_none() {
                c.puncture = match c.dim {
                    Dim::One => vec![0.3],
                    Dim::Three => vec![0.2, -0.1, 0.15],
                };
            }
            if get("weights").is_none() && !c.weights.is_empty() {
                c.weights = vec![c.weights[0]; c.dim.n()];
            }
        }
        if let Some((l, v)) = get("puncture") {
            c.puncture = float_list(v).map_err(|m| err(Some(l), m))?;
        }
        if let Some((l, v)) = get("cutoff") {
            c.cutoff = parse_num(v).map_err(|m| err(Some(l), m))?;
        }
        if let Some((l, v)) = get("preset") {
            c.preset = Preset::parse(v)
                .ok_or_else(|| err(Some(l), format!("unknown preset `{v}` (zero, delta, alpha, tangential)")))?;
        }
        if let Some((l, v)) = get("k") {
            c.k = parse_num(v).map_err(|m| err(Some(l), m))?;
        }
        if let Some((l, v)) = get("alpha") {
            let re = float_list(v).map_err(|m| err(Some(l), m))?;
            c.alpha = re.iter().map(|r| Complex64::new(*r, 0.0)).collect();
        }
        if let Some((l, v)) = get("alpha_im") {
            let im = float_list(v).map_err(|m| err(Some(l), m))?;
            if im.len() != c.alpha.len() {
                return Err(err(Some(l), format!("alpha_im has {} entries, alpha has {}", im.len(), c.alpha.len())));
            }
            for (a, b) in c.alpha.iter_mut().zip(im) {
                a.im = b;
            }
        }
        if let Some((l, v)) = get("weights") {
            c.weights = float_list(v).map_err(|m| err(Some(l), m))?;
        }
        for (key, slot) in [("lambda_min", &mut c.lambda_min), ("lambda_max", &mut c.lambda_max), ("tol", &mut c.tol)] {
            if let Some((l, v)) = get(key) {
                *slot = parse_num(v).map_err(|m| err(Some(l), m))?;
            }
        }
        for (key, slot) in [
            ("lambda_points", &mut c.lambda_points),
            ("count", &mut c.count),
            ("index", &mut c.index),
            ("samples", &mut c.samples),
        ] {
            if let Some((l, v)) = get(key) {
                *slot = parse_num(v).map_err(|m| err(Some(l), m))?;
            }
        }
        if let Some((l, v)) = get("seed") {
            c.seed = parse_num(v).map_err(|m| err(Some(l), m))?;
        }
        for (key, slot) in [("zero_entry", &mut c.zero_entry), ("complex_search", &mut c.complex_search)] {
            if let Some((l, v)) = get(key) {
                *slot = match v {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(err(Some(l), format!("expected a boolean, got `{v}`"))),
                };
            }
        }

        c.validate().map_err(|(key, m)| err(key.and_then(line_of), m))?;
        Ok(c)
    }

    /// Checks the invariants; the error names the key to blame.
    fn validate(&self) -> Result<(), (Option<&'static str>, String)> {
        if self.puncture.len() != self.dim.n() {
            return Err((
                Some("puncture"),
                format!("puncture has {} coordinates, dimension is {}", self.puncture.len(), self.dim.n()),
            ));
        }
        Point::puncture(&self.puncture).map_err(|e| (Some("puncture"), e.to_string()))?;
        if self.cutoff < 8 {
            return Err((Some("cutoff"), format!("cutoff must be at least 8, got {}", self.cutoff)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err((Some("tol"), "tolerance must be positive".into()));
        }
        if !(self.lambda_min < self.lambda_max) {
            return Err((Some("lambda_max"), "lambda_max must exceed lambda_min".into()));
        }
        if self.lambda_points == 0 {
            return Err((Some("lambda_points"), "lambda_points must be positive".into()));
        }
        if self.index == 0 || self.index > self.cutoff {
            return Err((Some("index"), format!("index must lie in 1..={}", self.cutoff)));
        }
        if !self.k.is_finite() {
            return Err((Some("k"), "k must be finite".into()));
        }
        match self.preset {
            Preset::Alpha if self.alpha.len() != self.dim.n_functionals() => Err((
                Some("alpha"),
                format!("alpha needs {} entries for dimension {}", self.dim.n_functionals(), self.dim.n()),
            )),
            Preset::Tangential if self.weights.len() != self.dim.n() => Err((
                Some("weights"),
                format!("weights needs {} entries for dimension {}", self.dim.n(), self.dim.n()),
            )),
            _ => Ok(()),
        }
    }

    pub fn context(&self, kappa: f64) -> punctum::Result<PunctureSpectrum> {
        PunctureSpectrum::new(
            SpectralBasis::new(self.dim, self.cutoff)?,
            Point::puncture(&self.puncture)?,
            kappa,
        )
    }

    pub fn table(&self, ctx: &PunctureSpectrum) -> punctum::Result<PerturbationK> {
        match self.preset {
            Preset::Zero => Ok(PerturbationK::zero(ctx)),
            Preset::Delta => Ok(PerturbationK::delta_coupling(self.k, ctx)),
            Preset::Alpha => PerturbationK::alpha_family(&self.alpha, ctx),
            Preset::Tangential => PerturbationK::tangential(&self.weights, ctx),
        }
    }

    /// `lambda_points` equally spaced values in `[lambda_min, lambda_max]`.
    pub fn lambda_grid(&self) -> Vec<f64> {
        let n = self.lambda_points;
        if n == 1 {
            return vec![self.lambda_min];
        }
        (0..n)
            .map(|i| self.lambda_min + (self.lambda_max - self.lambda_min) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn preset_label(&self) -> String {
        match self.preset {
            Preset::Zero => "zero".into(),
            Preset::Delta => format!("delta(k={})", self.k),
            Preset::Alpha => {
                let parts: Vec<String> = self.alpha.iter().map(|a| format!("{a}")).collect();
                format!("alpha({})", parts.join(" "))
            }
            Preset::Tangential => {
                let parts: Vec<String> = self.weights.iter().map(|w| format!("{w}")).collect();
                format!("tangential({})", parts.join(" "))
            }
        }
    }
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse `{v}` as a number"))
}

fn float_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',').map(|s| parse_num::<f64>(s.trim())).collect()
}

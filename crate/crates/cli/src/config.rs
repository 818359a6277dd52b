//! TOML run configuration.
//!
//! ```toml
//! mode = "cl"            # ds | cl | mfl-spectral | mfl-grid
//! kernel = "kuramoto"    # or { type = "kuramoto", coupling = 2.0 }, odd_trig, tabulated
//! n_labels = 256
//! T = 1.0
//! initial = { type = "oa", alpha = 0.3, beta = 0.1, q = 0.0 }
//! ```

use std::path::{Path, PathBuf};

use kuramoto_limits::{Geometry, GradientTable, InteractionKernel, TailClosure};
use serde::Deserialize;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_OUTPUT_EVERY: f64 = 0.1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", match .line {
        Some(l) => format!("parse error at line {l}: {message}"),
        None => format!("parse error: {message}"),
    })]
    Parse {
        line: Option<usize>,
        message: String,
    },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ds,
    Cl,
    MflSpectral,
    MflGrid,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ds => "ds",
            Mode::Cl => "cl",
            Mode::MflSpectral => "mfl-spectral",
            Mode::MflGrid => "mfl-grid",
        }
    }

    fn size_key(self) -> &'static str {
        match self {
            Mode::Ds => "N",
            Mode::Cl => "n_labels",
            Mode::MflSpectral => "n_modes",
            Mode::MflGrid => "n_cells",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Equispaced positions, the uniform density or `c_n = 0`.
    Uniform,
    Twisted {
        winding: i64,
        q: f64,
    },
    Oa {
        alpha: f64,
        beta: f64,
        q: f64,
    },
    File(PathBuf),
    /// Independent uniform positions drawn from the seeded generator.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub kernel: InteractionKernel,
    /// `N`, `n_labels`, `n_modes` or `n_cells`, depending on the mode.
    pub size: usize,
    pub dt: f64,
    pub t_end: f64,
    pub output_every: f64,
    pub initial: InitialCondition,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub frequencies: Option<Vec<f64>>,
    pub closure: TailClosure,
    /// The document as parsed, echoed into output metadata.
    pub document: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: String,
    kernel: toml::Value,
    #[serde(rename = "N")]
    n_particles: Option<i64>,
    n_labels: Option<i64>,
    n_modes: Option<i64>,
    n_cells: Option<i64>,
    dt: Option<f64>,
    #[serde(rename = "T")]
    t_end: f64,
    output_every: Option<f64>,
    initial: Option<toml::Value>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    frequencies: Option<Vec<f64>>,
    closure: Option<String>,
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    // relative initial-data paths are resolved against the config file
    if let InitialCondition::File(p) = &mut cfg.initial {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        message: e.message().to_string(),
    })?;
    let document: toml::Value = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: None,
        message: e.message().to_string(),
    })?;
    let document = serde_json::to_value(document).unwrap_or(serde_json::Value::Null);

    let mut errors = Vec::new();
    let mode = match raw.mode.as_str() {
        "ds" => Some(Mode::Ds),
        "cl" => Some(Mode::Cl),
        "mfl-spectral" => Some(Mode::MflSpectral),
        "mfl-grid" => Some(Mode::MflGrid),
        other => {
            errors.push(format!(
                "mode: unknown mode '{other}' (ds, cl, mfl-spectral, mfl-grid)"
            ));
            None
        }
    };
    let kernel = parse_kernel(&raw.kernel, &mut errors);

    let dt = raw.dt.unwrap_or(DEFAULT_DT);
    if !(dt > 0.0 && dt.is_finite()) {
        errors.push(format!("dt: must be positive, got {dt}"));
    }
    if !(raw.t_end >= 0.0 && raw.t_end.is_finite()) {
        errors.push(format!("T: must be nonnegative, got {}", raw.t_end));
    }
    let output_every = raw.output_every.unwrap_or(DEFAULT_OUTPUT_EVERY);
    if !(output_every > 0.0 && output_every.is_finite()) {
        errors.push(format!(
            "output_every: must be positive, got {output_every}"
        ));
    }

    let sizes = [
        ("N", raw.n_particles),
        ("n_labels", raw.n_labels),
        ("n_modes", raw.n_modes),
        ("n_cells", raw.n_cells),
    ];
    for (key, value) in sizes {
        if let Some(v) = value {
            if v <= 0 {
                errors.push(format!("{key}: must be positive, got {v}"));
            }
        }
    }
    let mut size = 0;
    if let Some(mode) = mode {
        let key = mode.size_key();
        match sizes.iter().find(|(k, _)| *k == key).and_then(|(_, v)| *v) {
            Some(v) if v > 0 => size = v as usize,
            Some(_) => {}
            None => errors.push(format!("{key}: required for mode {}", mode.name())),
        }
        for (other, value) in sizes {
            if other != key && value.is_some() {
                errors.push(format!("{other}: not used by mode {}", mode.name()));
            }
        }
        if mode == Mode::MflSpectral && size > 0 && size < kuramoto_limits::mean_field::MIN_MODES {
            errors.push(format!(
                "n_modes: must be at least {}",
                kuramoto_limits::mean_field::MIN_MODES
            ));
        }
        if mode == Mode::MflGrid && size > 0 && size < 3 {
            errors.push("n_cells: must be at least 3".to_string());
        }
    }

    let initial = match &raw.initial {
        None => Some(InitialCondition::Uniform),
        Some(v) => parse_initial(v, &mut errors),
    };
    if let (Some(mode), Some(init)) = (mode, &initial) {
        let allowed = match init {
            InitialCondition::Uniform | InitialCondition::Oa { .. } | InitialCondition::File(_) => {
                true
            }
            InitialCondition::Twisted { .. } | InitialCondition::Random => {
                matches!(mode, Mode::Ds | Mode::Cl)
            }
        };
        if !allowed {
            errors.push(format!(
                "initial: {} initial data needs mode ds or cl",
                initial_name(init)
            ));
        }
    }

    if let Some(freqs) = &raw.frequencies {
        if mode != Some(Mode::Ds) {
            errors.push("frequencies: only mode ds has natural frequencies".to_string());
        } else if size > 0 && freqs.len() != size {
            errors.push(format!(
                "frequencies: {} values for N = {size}",
                freqs.len()
            ));
        }
        if freqs.iter().any(|w| !w.is_finite()) {
            errors.push("frequencies: values must be finite".to_string());
        }
    }

    let closure = match raw.closure.as_deref() {
        None | Some("truncate") => TailClosure::Truncate,
        Some("ott-antonsen") => TailClosure::OttAntonsen,
        Some(other) => {
            errors.push(format!(
                "closure: unknown closure '{other}' (truncate, ott-antonsen)"
            ));
            TailClosure::Truncate
        }
    };
    if raw.closure.is_some() && mode != Some(Mode::MflSpectral) {
        errors.push("closure: only used by mode mfl-spectral".to_string());
    }

    if let (Some(Mode::MflSpectral), Some(k)) = (mode, &kernel) {
        if *k != InteractionKernel::kuramoto(1.0) {
            errors.push(
                "kernel: mode mfl-spectral solves the unit-coupling Kuramoto kernel only"
                    .to_string(),
            );
        }
    }

    match (mode, kernel, initial) {
        (Some(mode), Some(kernel), Some(initial)) if errors.is_empty() => Ok(RunConfig {
            mode,
            kernel,
            size,
            dt,
            t_end: raw.t_end,
            output_every,
            initial,
            output: raw.output,
            seed: raw.seed.unwrap_or(0),
            frequencies: raw.frequencies,
            closure,
            document,
        }),
        _ => Err(ConfigError::Validation(errors)),
    }
}

fn initial_name(init: &InitialCondition) -> &'static str {
    match init {
        InitialCondition::Uniform => "uniform",
        InitialCondition::Twisted { .. } => "twisted",
        InitialCondition::Oa { .. } => "oa",
        InitialCondition::File(_) => "file",
        InitialCondition::Random => "random",
    }
}

fn float_field(
    table: &toml::Table,
    ctx: &str,
    key: &str,
    default: Option<f64>,
    errors: &mut Vec<String>,
) -> Option<f64> {
    match table.get(key) {
        Some(toml::Value::Float(x)) => Some(*x),
        Some(toml::Value::Integer(i)) => Some(*i as f64),
        Some(_) => {
            errors.push(format!("{ctx}.{key}: expected a number"));
            None
        }
        None if default.is_some() => default,
        None => {
            errors.push(format!("{ctx}.{key}: required"));
            None
        }
    }
}

fn float_array(
    table: &toml::Table,
    ctx: &str,
    key: &str,
    errors: &mut Vec<String>,
) -> Option<Vec<f64>> {
    let Some(toml::Value::Array(items)) = table.get(key) else {
        errors.push(format!("{ctx}.{key}: expected an array of numbers"));
        return None;
    };
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        match item {
            toml::Value::Float(x) => out.push(*x),
            toml::Value::Integer(i) => out.push(*i as f64),
            _ => {
                errors.push(format!("{ctx}.{key}: expected an array of numbers"));
                return None;
            }
        }
    }
    Some(out)
}

fn check_keys(table: &toml::Table, ctx: &str, allowed: &[&str], errors: &mut Vec<String>) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            errors.push(format!("{ctx}.{key}: unknown key"));
        }
    }
}

fn parse_kernel(value: &toml::Value, errors: &mut Vec<String>) -> Option<InteractionKernel> {
    let (kind, table) = match value {
        toml::Value::String(s) => (s.clone(), toml::Table::new()),
        toml::Value::Table(t) => match t.get("type") {
            Some(toml::Value::String(s)) => (s.clone(), t.clone()),
            _ => {
                errors.push("kernel.type: required string".to_string());
                return None;
            }
        },
        _ => {
            errors.push("kernel: expected a kernel name or table".to_string());
            return None;
        }
    };
    match kind.as_str() {
        "kuramoto" => {
            check_keys(&table, "kernel", &["type", "coupling"], errors);
            let k = float_field(&table, "kernel", "coupling", Some(1.0), errors)?;
            if !k.is_finite() {
                errors.push("kernel.coupling: must be finite".to_string());
                return None;
            }
            Some(InteractionKernel::kuramoto(k))
        }
        "odd_trig" => {
            check_keys(&table, "kernel", &["type", "coefficients"], errors);
            let coefficients = float_array(&table, "kernel", "coefficients", errors)?;
            if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                errors.push("kernel.coefficients: need at least one finite value".to_string());
                return None;
            }
            Some(InteractionKernel::OddTrig { coefficients })
        }
        "tabulated" => {
            check_keys(&table, "kernel", &["type", "lo", "hi", "samples"], errors);
            let lo = float_field(&table, "kernel", "lo", None, errors);
            let hi = float_field(&table, "kernel", "hi", None, errors);
            let samples = float_array(&table, "kernel", "samples", errors);
            let table = GradientTable::new(lo?, hi?, samples?)
                .map_err(|e| errors.push(format!("kernel: {e}")))
                .ok()?;
            let kernel = InteractionKernel::TabulatedGradient(table);
            if let Err(e) = kernel.validate_for(Geometry::Circle) {
                errors.push(format!("kernel: {e}"));
                return None;
            }
            Some(kernel)
        }
        other => {
            errors.push(format!(
                "kernel: unknown kernel '{other}' (kuramoto, odd_trig, tabulated)"
            ));
            None
        }
    }
}

fn parse_initial(value: &toml::Value, errors: &mut Vec<String>) -> Option<InitialCondition> {
    let (kind, table) = match value {
        toml::Value::String(s) => (s.clone(), toml::Table::new()),
        toml::Value::Table(t) => match t.get("type") {
            Some(toml::Value::String(s)) => (s.clone(), t.clone()),
            _ => {
                errors.push("initial.type: required string".to_string());
                return None;
            }
        },
        _ => {
            errors.push("initial: expected a name or table".to_string());
            return None;
        }
    };
    match kind.as_str() {
        "uniform" => {
            check_keys(&table, "initial", &["type"], errors);
            Some(InitialCondition::Uniform)
        }
        "random" => {
            check_keys(&table, "initial", &["type"], errors);
            Some(InitialCondition::Random)
        }
        "twisted" => {
            check_keys(&table, "initial", &["type", "m", "q"], errors);
            let winding = match table.get("m") {
                Some(toml::Value::Integer(m)) => Some(*m),
                None => Some(1),
                Some(_) => {
                    errors.push("initial.m: expected an integer winding number".to_string());
                    None
                }
            };
            let q = float_field(&table, "initial", "q", Some(0.0), errors);
            Some(InitialCondition::Twisted {
                winding: winding?,
                q: q?,
            })
        }
        "oa" => {
            check_keys(&table, "initial", &["type", "alpha", "beta", "q"], errors);
            let alpha = float_field(&table, "initial", "alpha", None, errors);
            let beta = float_field(&table, "initial", "beta", None, errors);
            let q = float_field(&table, "initial", "q", Some(0.0), errors);
            let (alpha, beta, q) = (alpha?, beta?, q?);
            let mut ok = true;
            if !(0.0..1.0).contains(&beta) {
                errors.push(format!("initial.beta: must satisfy 0 ≤ β < 1, got {beta}"));
                ok = false;
            }
            if !alpha.is_finite() || !q.is_finite() {
                errors.push("initial: alpha and q must be finite".to_string());
                ok = false;
            }
            ok.then_some(InitialCondition::Oa { alpha, beta, q })
        }
        "file" => {
            check_keys(&table, "initial", &["type", "path"], errors);
            match table.get("path") {
                Some(toml::Value::String(p)) => Some(InitialCondition::File(PathBuf::from(p))),
                _ => {
                    errors.push("initial.path: required string".to_string());
                    None
                }
            }
        }
        other => {
            errors.push(format!(
                "initial: unknown initial condition '{other}' (uniform, twisted, oa, file, random)"
            ));
            None
        }
    }
}

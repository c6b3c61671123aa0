use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::ExperimentError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Linear,
    PrototypeNull,
    QuasiCaseA,
    QuasiCaseB,
    NonnullContrast,
    Custom,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Linear,
        Scenario::PrototypeNull,
        Scenario::QuasiCaseA,
        Scenario::QuasiCaseB,
        Scenario::NonnullContrast,
        Scenario::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Linear => "linear",
            Scenario::PrototypeNull => "prototype_null",
            Scenario::QuasiCaseA => "quasi_case_a",
            Scenario::QuasiCaseB => "quasi_case_b",
            Scenario::NonnullContrast => "nonnull_contrast",
            Scenario::Custom => "custom",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

/// Scenario description read from a flat `key = value` file.
///
/// Optional keys fall back to the defaults in [`ScenarioConfig::new`]. The
/// data are centred Gaussians ε·exp(−r²/σ²) with σ = `data_width`; a second
/// component of amplitude `two_scale_amplitude` and width `two_scale_width` is
/// added when the latter is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub grid_n: usize,
    pub half_width: f64,
    /// `None` means 0.4·h.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub report_every: usize,
    pub amplitude: f64,
    pub data_width: f64,
    pub two_scale_amplitude: f64,
    pub two_scale_width: f64,
    pub tensor_path: Option<PathBuf>,
    pub quasi_path: Option<PathBuf>,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub dealias: bool,
    pub seed: u64,
    /// Relative amplitude of a seeded smooth perturbation added to the data.
    pub noise: f64,
    pub ghost_oversample: usize,
    pub fit_t0: f64,
    pub gamma_threshold: f64,
    pub dump_fields: bool,
    pub output_path: PathBuf,
}

const KEYS: &[&str] = &[
    "scenario",
    "grid_n",
    "half_width",
    "dt",
    "t_end",
    "report_every",
    "amplitude",
    "data_width",
    "two_scale_amplitude",
    "two_scale_width",
    "tensor_path",
    "quasi_path",
    "picard_tol",
    "picard_max",
    "dealias",
    "seed",
    "noise",
    "ghost_oversample",
    "fit_t0",
    "gamma_threshold",
    "dump_fields",
    "output_path",
];

/// Parses a float, accepting a trailing `pi` factor (`20pi` = 20π, `pi` = π).
fn parse_real(v: &str) -> Result<f64, String> {
    let (num, scale) = match v.strip_suffix("pi") {
        Some("") => ("1", std::f64::consts::PI),
        Some(head) => (head.trim_end_matches('*').trim(), std::f64::consts::PI),
        None => (v, 1.0),
    };
    let x: f64 = num.parse().map_err(|_| format!("`{v}` is not a number"))?;
    let x = x * scale;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{v}` is not finite"))
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(format!("`{v}` is not a boolean")),
    }
}

fn parse_int<I: FromStr>(v: &str) -> Result<I, String> {
    v.parse()
        .map_err(|_| format!("`{v}` is not a nonnegative integer"))
}

impl ScenarioConfig {
    /// Defaults for everything except the scenario.
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            grid_n: 256,
            half_width: 20.0 * std::f64::consts::PI,
            dt: None,
            t_end: 40.0,
            report_every: 5,
            amplitude: 0.01,
            data_width: 3.0,
            two_scale_amplitude: 0.0,
            two_scale_width: 0.0,
            tensor_path: None,
            quasi_path: None,
            picard_tol: 1e-10,
            picard_max: 50,
            dealias: true,
            seed: 0,
            noise: 0.0,
            ghost_oversample: 1,
            fit_t0: 5.0,
            gamma_threshold: 0.1,
            dump_fields: false,
            output_path: PathBuf::from("out"),
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.grid_n as f64
    }

    pub fn effective_dt(&self) -> f64 {
        self.dt.unwrap_or(0.4 * self.spacing())
    }

    /// Radius beyond which the initial data are treated as negligible.
    pub fn support_radius(&self) -> f64 {
        let w = if self.two_scale_width > 0.0 {
            self.data_width.max(self.two_scale_width)
        } else {
            self.data_width
        };
        4.0 * w
    }

    /// Last time before waves leaving the support meet their periodic images.
    pub fn wraparound_horizon(&self) -> f64 {
        self.half_width - self.support_radius()
    }

    /// Parses the file text; relative paths inside are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self, ExperimentError> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let lineno = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ExperimentError::config(lineno, format!("expected `key = value`, found `{line}`"))
            })?;
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(ExperimentError::config(
                    lineno,
                    format!("unknown key `{key}`"),
                ));
            }
            if entries.iter().any(|(_, k2, _)| *k2 == key) {
                return Err(ExperimentError::config(
                    lineno,
                    format!("duplicate key `{key}`"),
                ));
            }
            entries.push((lineno, key, value.trim().to_string()));
        }
        let (scenario_line, scenario) = match entries.iter().find(|(_, k, _)| k == "scenario") {
            Some((l, _, v)) => (
                *l,
                v.parse::<Scenario>()
                    .map_err(|e| ExperimentError::config(*l, e))?,
            ),
            None => {
                return Err(ExperimentError::config(
                    0,
                    "missing required key `scenario`",
                ))
            }
        };
        let mut cfg = Self::new(scenario);
        let resolve = |v: &str| {
            let p = PathBuf::from(v);
            match base_dir {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        for (lineno, key, value) in &entries {
            let v = value.as_str();
            let res: Result<(), String> = (|| {
                match key.as_str() {
                    "scenario" => {}
                    "grid_n" => cfg.grid_n = parse_int(v)?,
                    "half_width" => cfg.half_width = parse_real(v)?,
                    "dt" => cfg.dt = Some(parse_real(v)?),
                    "t_end" => cfg.t_end = parse_real(v)?,
                    "report_every" => cfg.report_every = parse_int(v)?,
                    "amplitude" => cfg.amplitude = parse_real(v)?,
                    "data_width" => cfg.data_width = parse_real(v)?,
                    "two_scale_amplitude" => cfg.two_scale_amplitude = parse_real(v)?,
                    "two_scale_width" => cfg.two_scale_width = parse_real(v)?,
                    "tensor_path" => cfg.tensor_path = Some(resolve(v)),
                    "quasi_path" => cfg.quasi_path = Some(resolve(v)),
                    "picard_tol" => cfg.picard_tol = parse_real(v)?,
                    "picard_max" => cfg.picard_max = parse_int(v)?,
                    "dealias" => cfg.dealias = parse_bool(v)?,
                    "seed" => cfg.seed = parse_int(v)?,
                    "noise" => cfg.noise = parse_real(v)?,
                    "ghost_oversample" => cfg.ghost_oversample = parse_int(v)?,
                    "fit_t0" => cfg.fit_t0 = parse_real(v)?,
                    "gamma_threshold" => cfg.gamma_threshold = parse_real(v)?,
                    "dump_fields" => cfg.dump_fields = parse_bool(v)?,
                    "output_path" => cfg.output_path = resolve(v),
                    _ => unreachable!("keys are checked above"),
                }
                Ok(())
            })();
            res.map_err(|m| ExperimentError::config(*lineno, format!("{key}: {m}")))?;
        }
        cfg.validate()
            .map_err(|e| match e {
                ExperimentError::Config { line: 0, message } => ExperimentError::Config {
                    line: scenario_line,
                    message,
                },
                other => other,
            })
            .map(|_| cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    /// Checks the invariants; errors are reported without a line number.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |m: String| Err(ExperimentError::config(0, m));
        if self.grid_n < 16 || !self.grid_n.is_power_of_two() {
            return fail(format!(
                "grid_n must be a power of two >= 16, got {}",
                self.grid_n
            ));
        }
        if !(self.half_width > 0.0) {
            return fail(format!(
                "half_width must be positive, got {}",
                self.half_width
            ));
        }
        let dt = self.effective_dt();
        if !(dt > 0.0) || dt > 0.5 * self.spacing() {
            return fail(format!(
                "dt = {dt} must lie in (0, 0.5 h] with h = {}",
                self.spacing()
            ));
        }
        if !(self.t_end > 0.0) {
            return fail(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.t_end >= self.wraparound_horizon() {
            return fail(format!(
                "t_end = {} reaches the wraparound horizon L - 4 width = {}",
                self.t_end,
                self.wraparound_horizon()
            ));
        }
        if self.report_every == 0 {
            return fail("report_every must be at least 1".into());
        }
        if !(self.amplitude >= 0.0) || !(self.two_scale_amplitude >= 0.0) || !(self.noise >= 0.0) {
            return fail("amplitudes must be nonnegative".into());
        }
        if !(self.data_width > 0.0) || !(self.two_scale_width >= 0.0) {
            return fail("data widths must be positive".into());
        }
        if self.two_scale_amplitude > 0.0 && self.two_scale_width == 0.0 {
            return fail("two_scale_amplitude needs a positive two_scale_width".into());
        }
        if !(self.picard_tol > 0.0) || self.picard_max == 0 {
            return fail("picard_tol must be positive and picard_max at least 1".into());
        }
        if self.ghost_oversample == 0 || !self.ghost_oversample.is_power_of_two() {
            return fail("ghost_oversample must be a power of two".into());
        }
        if !(self.fit_t0 >= 1.0) {
            return fail(format!("fit_t0 must be at least 1, got {}", self.fit_t0));
        }
        if self.scenario == Scenario::Custom && self.tensor_path.is_none() {
            return fail("scenario = custom requires tensor_path".into());
        }
        Ok(())
    }
}

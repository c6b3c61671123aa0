use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Scenario, ScenarioConfig};
use super::ExperimentError;
use crate::diagnostics::{self, fit_growth_window, DecayFit, EnergyReport};
use crate::error::Error;
use crate::grid::{GridField, PeriodicGrid};
use crate::io::{self, FieldFormat};
use crate::nullform::{NullFormTensor, QuasiNullForm};
use crate::solver::{SolverConfig, WaveSolver};
use crate::spectral::Spectral;
use crate::transform::{self, FullyNonlinearIVP, QuasilinearIVP, TransformWarning};

/// Outcome of one scenario run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub scenario: Scenario,
    pub completed: bool,
    pub failure_time: Option<f64>,
    /// Growth fits of E1, E2 and the ghost-weighted energy over [fit_t0, t_end].
    pub fits: Vec<(&'static str, Option<DecayFit>)>,
    pub fit_window: (f64, f64),
    pub gamma_threshold: f64,
    /// max/min of ks_ratio over reports with t ≥ 1.
    pub ks_ratio_spread: f64,
    pub good_deriv_max: f64,
    pub lemma31_max: f64,
    /// lemma31_ratio at the first report with t ≥ 1.
    pub lemma31_at_t1: f64,
    /// Largest relative deviation of E1 from its initial value.
    pub e1_drift: f64,
    pub picard_max_iters: usize,
    pub picard_ambiguous: bool,
    pub warnings: Vec<String>,
    pub wall_time: f64,
}

impl RunSummary {
    pub fn fit(&self, channel: &str) -> Option<DecayFit> {
        self.fits
            .iter()
            .find(|(c, _)| *c == channel)
            .and_then(|(_, f)| *f)
    }

    /// 0 when the run reached t_end, 2 when it stopped on non-convergence.
    pub fn exit_code(&self) -> i32 {
        if self.completed {
            0
        } else {
            2
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub log: Vec<EnergyReport>,
}

/// ε·exp(−r²/σ²) plus the optional second scale and seeded perturbation.
pub fn gaussian_data(cfg: &ScenarioConfig, grid: PeriodicGrid<f64>) -> GridField<f64> {
    let bump = |x: f64, y: f64, a: f64, s: f64| a * (-(x * x + y * y) / (s * s)).exp();
    let mut f = GridField::from_fn(grid, |x, y| bump(x, y, cfg.amplitude, cfg.data_width));
    if cfg.two_scale_amplitude > 0.0 {
        f = f.zip_with(
            &GridField::from_fn(grid, |x, y| {
                bump(x, y, cfg.two_scale_amplitude, cfg.two_scale_width)
            }),
            |a, b| a + b,
        );
    }
    if cfg.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let s = cfg.data_width;
        let modes: Vec<[f64; 4]> = (0..6)
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0) / s,
                    rng.gen_range(-1.0..1.0) / s,
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(-1.0..1.0),
                ]
            })
            .collect();
        let pert = GridField::from_fn(grid, |x, y| {
            let wave: f64 = modes
                .iter()
                .map(|m| m[3] * (m[0] * x + m[1] * y + m[2]).cos())
                .sum();
            cfg.noise * bump(x, y, cfg.amplitude, s) * wave
        });
        f = f.zip_with(&pert, |a, b| a + b);
    }
    f
}

fn describe(w: &TransformWarning) -> String {
    match w {
        TransformWarning::MeanRemoved { mean } => {
            format!("elliptic right-hand side mean {mean:e} removed")
        }
        TransformWarning::SupportOutsideInnerBox {
            field,
            relative_max,
        } => {
            format!("{field} reaches relative size {relative_max:e} outside the inner half box")
        }
        TransformWarning::NonDecayingLineIntegral {
            field,
            relative_max,
        } => {
            format!("{field} line integral does not decay (relative {relative_max:e} at the right edge)")
        }
    }
}

fn file_error(path: &Path, e: Error) -> ExperimentError {
    match e {
        Error::Io(m) => ExperimentError::Io(format!("{}: {m}", path.display())),
        Error::Parse { line, message } => {
            ExperimentError::config(0, format!("{}:{line}: {message}", path.display()))
        }
        other => ExperimentError::config(0, format!("{}: {other}", path.display())),
    }
}

fn quasi_form(
    cfg: &ScenarioConfig,
    default_a: [f64; 3],
) -> Result<QuasiNullForm<f64>, ExperimentError> {
    match &cfg.quasi_path {
        Some(p) => io::read_quasi(p).map_err(|e| file_error(p, e)),
        None => Ok(QuasiNullForm::new(
            default_a,
            QuasiNullForm::<f64>::prototype().m,
        )?),
    }
}

/// Initial data and tensor for the configured scenario, plus data warnings.
pub fn build_ivp(
    cfg: &ScenarioConfig,
) -> Result<(FullyNonlinearIVP<f64>, Vec<String>), ExperimentError> {
    let grid = PeriodicGrid::new(cfg.grid_n, cfg.half_width)?;
    let data = gaussian_data(cfg, grid);
    let zero = GridField::zeros(grid);
    let plain = |tensor: NullFormTensor<f64>| -> Result<_, ExperimentError> {
        Ok((
            FullyNonlinearIVP::new(tensor.symmetrize(), data.clone(), zero.clone())?,
            Vec::new(),
        ))
    };
    let transformed =
        |t: transform::Transformed<f64>| (t.ivp, t.warnings.iter().map(describe).collect());
    match cfg.scenario {
        Scenario::Linear => plain(NullFormTensor::zero()),
        Scenario::NonnullContrast => plain(NullFormTensor::from_entries([((0, 0, 0, 0), 1.0)])),
        Scenario::Custom => {
            let p = cfg.tensor_path.as_ref().expect("validated");
            plain(io::read_tensor(p).map_err(|e| file_error(p, e))?)
        }
        Scenario::PrototypeNull => Ok(transformed(transform::transform_prototype(&data, &zero)?)),
        Scenario::QuasiCaseA => {
            // σ∂₁ of the bump integrates to zero along every horizontal line.
            let v0 = Spectral::new(grid)
                .derivative(&data, 1, 0)
                .scaled(cfg.data_width);
            let ivp = QuasilinearIVP::new(quasi_form(cfg, [0.0, 1.0, 0.0])?, v0, zero.clone())?;
            Ok(transformed(transform::transform_case_a(&ivp)?))
        }
        Scenario::QuasiCaseB => {
            let ivp = QuasilinearIVP::new(
                quasi_form(cfg, [1.0, 0.5, 0.0])?,
                data.clone(),
                zero.clone(),
            )?;
            Ok(transformed(transform::transform_case_b(&ivp, &ivp.v1)?))
        }
    }
}

/// Builds the data, evolves to t_end with a report every `report_every`
/// steps, and returns the summary and report log. Non-convergence ends the run
/// early and is recorded in the summary rather than returned as an error.
pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput, ExperimentError> {
    cfg.validate()?;
    let start = Instant::now();
    let (ivp, warnings) = build_ivp(cfg)?;
    let grid = *ivp.grid();
    let solver_cfg = SolverConfig::new(
        cfg.effective_dt(),
        cfg.picard_tol,
        cfg.picard_max,
        cfg.dealias,
    )?;
    let solver = WaveSolver::new(ivp.tensor().clone(), grid, solver_cfg)?;
    let dump_dir = cfg.output_path.join("snapshots");
    if cfg.dump_fields {
        std::fs::create_dir_all(&dump_dir)
            .map_err(|e| ExperimentError::Io(format!("{}: {e}", dump_dir.display())))?;
    }

    let mut log = Vec::new();
    let mut ambiguous = false;
    let result = solver.evolve(&ivp, cfg.t_end, cfg.report_every, |snap| {
        ambiguous |= snap.ambiguous;
        log.push(diagnostics::report(
            solver.spectral(),
            solver.tensor(),
            snap.state,
            snap.w,
            snap.picard_max_iters,
            cfg.ghost_oversample,
        )?);
        if cfg.dump_fields {
            let path = dump_dir.join(format!("step_{:06}.csv", snap.step));
            io::write_checkpoint(&path, snap.state, FieldFormat::Csv)?;
        }
        Ok(())
    });
    let failure_time = match result {
        Ok(_) => None,
        Err(Error::NonConvergence { t, .. }) => Some(t),
        Err(e) => return Err(e.into()),
    };
    let summary = summarize(
        cfg,
        &log,
        failure_time,
        ambiguous,
        warnings,
        start.elapsed().as_secs_f64(),
    );
    Ok(RunOutput { summary, log })
}

fn summarize(
    cfg: &ScenarioConfig,
    log: &[EnergyReport],
    failure_time: Option<f64>,
    ambiguous: bool,
    warnings: Vec<String>,
    wall_time: f64,
) -> RunSummary {
    let window = (cfg.fit_t0, cfg.t_end);
    let channel = |f: fn(&EnergyReport) -> f64| -> Option<DecayFit> {
        let series: Vec<_> = log.iter().map(|r| (r.t, f(r))).collect();
        fit_growth_window(&series, window.0, window.1).ok()
    };
    let fits = vec![
        ("E1", channel(|r| r.e1)),
        ("E2", channel(|r| r.e2)),
        ("ghost_E", channel(|r| r.ghost_e)),
    ];
    let late: Vec<_> = log.iter().filter(|r| r.t >= 1.0 - 1e-9).collect();
    let ks_max = late.iter().map(|r| r.ks_ratio).fold(0.0, f64::max);
    let ks_min = late
        .iter()
        .map(|r| r.ks_ratio)
        .fold(f64::INFINITY, f64::min);
    let e1_0 = log.first().map_or(0.0, |r| r.e1);
    RunSummary {
        scenario: cfg.scenario,
        completed: failure_time.is_none(),
        failure_time,
        fits,
        fit_window: window,
        gamma_threshold: cfg.gamma_threshold,
        ks_ratio_spread: if late.is_empty() || ks_min == 0.0 {
            0.0
        } else {
            ks_max / ks_min
        },
        good_deriv_max: log.iter().map(|r| r.good_deriv_ratio).fold(0.0, f64::max),
        lemma31_max: log.iter().map(|r| r.lemma31_ratio).fold(0.0, f64::max),
        lemma31_at_t1: late.first().map_or(0.0, |r| r.lemma31_ratio),
        e1_drift: if e1_0 > 0.0 {
            log.iter()
                .map(|r| ((r.e1 - e1_0) / e1_0).abs())
                .fold(0.0, f64::max)
        } else {
            0.0
        },
        picard_max_iters: log.iter().map(|r| r.picard_max_iters).max().unwrap_or(0),
        picard_ambiguous: ambiguous,
        warnings,
        wall_time,
    }
}

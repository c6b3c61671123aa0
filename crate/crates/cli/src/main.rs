use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nullwave::diagnostics::fit_growth_window;
use nullwave::experiment::{self, ExperimentError, ScenarioConfig};
use nullwave::io::{self, FieldFormat};
use nullwave::transform::{self, QuasilinearIVP};
use nullwave::{GridField64, NullFormTensor64};

#[derive(Parser)]
#[command(
    name = "nullwave",
    version,
    about = "2D fully nonlinear null-form wave laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config's output_path for `run`).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Format of field and checkpoint files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Suppress the summary printout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Binary,
}

impl From<Format> for FieldFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => FieldFormat::Csv,
            Format::Binary => FieldFormat::Binary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    A,
    B,
    Prototype,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write report.csv and summary.txt.
    Run { config: PathBuf },
    /// Report symmetry and the null-condition verdict of a tensor file.
    CheckTensor {
        tensor: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Build fully nonlinear initial data (phi, psi, tensor) from quasilinear data.
    Transform {
        /// Quasilinear form file; not needed for --case prototype.
        quasi: Option<PathBuf>,
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long)]
        v0: PathBuf,
        /// Defaults to zero.
        #[arg(long)]
        v1: Option<PathBuf>,
        /// ∂ₜv at t = 0 for case b; defaults to v1.
        #[arg(long)]
        vt0: Option<PathBuf>,
    },
    /// Fit power-law growth exponents to the energy columns of a report CSV.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        t0: f64,
        #[arg(long)]
        t1: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8, ExperimentError> {
    match &cli.command {
        Command::Run { config } => run(cli, config),
        Command::CheckTensor { tensor, tol } => check_tensor(tensor, *tol),
        Command::Transform {
            quasi,
            case,
            v0,
            v1,
            vt0,
        } => transform_cmd(
            cli,
            quasi.as_deref(),
            *case,
            v0,
            v1.as_deref(),
            vt0.as_deref(),
        ),
        Command::Fit { csv, t0, t1 } => fit(csv, *t0, *t1),
    }
}

fn run(cli: &Cli, config: &Path) -> Result<u8, ExperimentError> {
    let mut cfg = ScenarioConfig::load(config)?;
    if let Some(out) = &cli.output {
        cfg.output_path = out.clone();
    }
    let out = experiment::run(&cfg)?;
    experiment::emit_tables(&out.log, &out.summary, &cfg.output_path)?;
    if !cli.quiet {
        print!("{}", experiment::format_summary(&out.summary));
    }
    if let Some(t) = out.summary.failure_time {
        eprintln!("Picard iteration did not converge at t = {t}");
    }
    Ok(out.summary.exit_code() as u8)
}

fn check_tensor(path: &Path, tol: f64) -> Result<u8, ExperimentError> {
    let tensor = io::read_tensor(path).map_err(|e| file_error(path, e))?;
    let sym = tensor.symmetrize();
    let null = tensor.is_null(tol)?;
    println!("symmetric     {}", tensor.is_symmetric());
    println!("null          {null}");
    println!("nonzero       {}", tensor.nonzero_entries().len());
    println!("max |coeff|   {:e}", tensor.max_abs());
    if !tensor.is_symmetric() {
        println!("symmetrized form:");
        print!("{}", io::format_tensor(&sym));
    }
    Ok(0)
}

fn file_error(path: &Path, e: nullwave::Error) -> ExperimentError {
    match ExperimentError::from(e) {
        ExperimentError::Io(m) => ExperimentError::Io(format!("{}: {m}", path.display())),
        ExperimentError::Config { line, message } => {
            ExperimentError::config(0, format!("{}:{line}: {message}", path.display()))
        }
        other => other,
    }
}

fn read_field(path: &Path, format: FieldFormat) -> Result<GridField64, ExperimentError> {
    io::read_field(path, format).map_err(|e| file_error(path, e))
}

fn transform_cmd(
    cli: &Cli,
    quasi: Option<&Path>,
    case: Case,
    v0: &Path,
    v1: Option<&Path>,
    vt0: Option<&Path>,
) -> Result<u8, ExperimentError> {
    let format = FieldFormat::from(cli.format);
    let v0 = read_field(v0, format)?;
    let v1 = match v1 {
        Some(p) => read_field(p, format)?,
        None => GridField64::zeros(*v0.grid()),
    };
    let form = |q: Option<&Path>| match q {
        Some(p) => io::read_quasi(p).map_err(|e| file_error(p, e)),
        None => Err(ExperimentError::config(
            0,
            "cases a and b need a quasilinear form file",
        )),
    };
    let out = match case {
        Case::Prototype => transform::transform_prototype(&v0, &v1)?,
        Case::A => transform::transform_case_a(&QuasilinearIVP::new(form(quasi)?, v0, v1)?)?,
        Case::B => {
            let vt0 = match vt0 {
                Some(p) => read_field(p, format)?,
                None => v1.clone(),
            };
            transform::transform_case_b(&QuasilinearIVP::new(form(quasi)?, v0, v1)?, &vt0)?
        }
    };
    let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| ExperimentError::Io(format!("{}: {e}", dir.display())))?;
    let ext = match format {
        FieldFormat::Csv => "csv",
        FieldFormat::Binary => "bin",
    };
    let write = |name: &str, f: &GridField64| {
        let p = dir.join(format!("{name}.{ext}"));
        io::write_field(&p, f, format).map_err(|e| file_error(&p, e))
    };
    write("phi", out.ivp.phi())?;
    write("psi", out.ivp.psi())?;
    let tensor: &NullFormTensor64 = out.ivp.tensor();
    let tp = dir.join("tensor.txt");
    std::fs::write(&tp, io::format_tensor(tensor))
        .map_err(|e| ExperimentError::Io(format!("{}: {e}", tp.display())))?;
    if !cli.quiet {
        println!("wrote phi, psi and tensor to {}", dir.display());
        for w in &out.warnings {
            println!("warning: {w:?}");
        }
    }
    Ok(0)
}

fn fit(csv: &Path, t0: f64, t1: Option<f64>) -> Result<u8, ExperimentError> {
    let log = experiment::read_report_csv(csv)?;
    let t_last = log.iter().map(|r| r.t).fold(0.0, f64::max);
    let t1 = t1.unwrap_or(t_last);
    let channels: [(&str, fn(&nullwave::diagnostics::EnergyReport) -> f64); 3] = [
        ("E1", |r| r.e1),
        ("E2", |r| r.e2),
        ("ghost_E", |r| r.ghost_e),
    ];
    for (name, get) in channels {
        let series: Vec<_> = log.iter().map(|r| (r.t, get(r))).collect();
        match fit_growth_window(&series, t0, t1) {
            Ok(f) => println!(
                "{name:<8} gamma_hat = {:.6}  window = [{}, {}]  residual = {:.3e}",
                f.gamma_hat, f.t_window.0, f.t_window.1, f.residual
            ),
            Err(e) => println!("{name:<8} no fit: {e}"),
        }
    }
    Ok(0)
}

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::run::RunSummary;
use super::ExperimentError;
use crate::diagnostics::EnergyReport;

pub const CSV_HEADER: &str =
    "t,E1,E2,ghost_E,ghost_G,ks_ratio,good_deriv_ratio,lemma31_ratio,picard_max_iters";

/// Floats use the shortest exponent form that parses back to the same bits.
fn csv_text(log: &[EnergyReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in log {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.t,
            r.e1,
            r.e2,
            r.ghost_e,
            r.ghost_g,
            r.ks_ratio,
            r.good_deriv_ratio,
            r.lemma31_ratio,
            r.picard_max_iters
        )
        .expect("writing to a String");
    }
    out
}

fn io_err(path: &Path, e: std::io::Error) -> ExperimentError {
    ExperimentError::Io(format!("{}: {e}", path.display()))
}

pub fn write_report_csv(log: &[EnergyReport], path: &Path) -> Result<(), ExperimentError> {
    if log.is_empty() {
        return Err(ExperimentError::Io(
            "refusing to write an empty report log".into(),
        ));
    }
    fs::write(path, csv_text(log)).map_err(|e| io_err(path, e))
}

pub fn read_report_csv(path: &Path) -> Result<Vec<EnergyReport>, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let bad = |line: usize, m: String| {
        ExperimentError::config(0, format!("{}:{line}: {m}", path.display()))
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(bad(1, "missing or unexpected header".into())),
    }
    let mut out = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 9 {
            return Err(bad(
                k + 1,
                format!("expected 9 columns, found {}", cols.len()),
            ));
        }
        let f = |i: usize| -> Result<f64, ExperimentError> {
            cols[i]
                .parse()
                .map_err(|_| bad(k + 1, format!("`{}` is not a number", cols[i])))
        };
        out.push(EnergyReport {
            t: f(0)?,
            e1: f(1)?,
            e2: f(2)?,
            ghost_e: f(3)?,
            ghost_g: f(4)?,
            ks_ratio: f(5)?,
            good_deriv_ratio: f(6)?,
            lemma31_ratio: f(7)?,
            picard_max_iters: cols[8]
                .parse()
                .map_err(|_| bad(k + 1, format!("`{}` is not an integer", cols[8])))?,
        });
    }
    Ok(out)
}

pub fn format_summary(s: &RunSummary) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        writeln!(out, "{k:<22}{v}").expect("writing to a String");
    };
    line("scenario", s.scenario.to_string());
    line("completed", s.completed.to_string());
    line(
        "failure_time",
        s.failure_time
            .map_or_else(|| "none".to_string(), |t| format!("{t:e}")),
    );
    line(
        "fit_window",
        format!("[{}, {}]", s.fit_window.0, s.fit_window.1),
    );
    for (name, fit) in &s.fits {
        let v = match fit {
            Some(f) => {
                let verdict = if f.gamma_hat.abs() <= s.gamma_threshold {
                    "within"
                } else {
                    "outside"
                };
                format!(
                    "gamma_hat = {:.6} residual = {:.3e} ({verdict} |gamma| <= {})",
                    f.gamma_hat, f.residual, s.gamma_threshold
                )
            }
            None => "not enough samples in window".to_string(),
        };
        line(&format!("fit_{name}"), v);
    }
    line("e1_drift", format!("{:.3e}", s.e1_drift));
    line("ks_ratio_max/min", format!("{:.4}", s.ks_ratio_spread));
    line("good_deriv_max", format!("{:.6}", s.good_deriv_max));
    line(
        "lemma31_max",
        format!("{:.4e} (t=1 value {:.4e})", s.lemma31_max, s.lemma31_at_t1),
    );
    line("picard_max_iters", s.picard_max_iters.to_string());
    line("picard_ambiguous", s.picard_ambiguous.to_string());
    line("wall_time_s", format!("{:.2}", s.wall_time));
    for w in &s.warnings {
        line("warning", w.clone());
    }
    out
}

/// Writes `report.csv` and `summary.txt` into `dir`, creating it if needed.
///
/// A run that failed before its first report gets a header-only CSV.
pub fn emit_tables(
    log: &[EnergyReport],
    summary: &RunSummary,
    dir: &Path,
) -> Result<(), ExperimentError> {
    if log.is_empty() && summary.completed {
        return Err(ExperimentError::Io(
            "refusing to write an empty report log".into(),
        ));
    }
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let csv = dir.join("report.csv");
    fs::write(&csv, csv_text(log)).map_err(|e| io_err(&csv, e))?;
    let path = dir.join("summary.txt");
    fs::write(&path, format_summary(summary)).map_err(|e| io_err(&path, e))
}

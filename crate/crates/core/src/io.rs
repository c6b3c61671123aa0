//! Text and binary file formats.
//!
//! * Tensor files: one `α β μ ν value` entry per line, indices in 0..3.
//! * Quasilinear form files: a line with A₀ A₁ A₂ followed by three rows of m.
//! * Field files: a header line `n L`, then n×n samples.
//! * Checkpoints: a header line `t n L`, then u and ∂ₜu as n×n samples each.
//!
//! In all text formats `#` starts a comment and blank lines are ignored.
//! Sample blocks are either CSV rows (one grid row per line) or little-endian
//! f64 values directly after the header line.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::grid::{GridField, PeriodicGrid};
use crate::nullform::{NullFormTensor, QuasiNullForm};
use crate::solver::WaveState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldFormat {
    #[default]
    Csv,
    Binary,
}

impl std::str::FromStr for FieldFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FieldFormat::Csv),
            "binary" => Ok(FieldFormat::Binary),
            other => Err(Error::InvalidArgument(format!(
                "unknown format `{other}` (expected csv or binary)"
            ))),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("`{tok}` is not finite")));
    }
    Ok(v)
}

fn parse_numbers(line: &str, lineno: usize, count: usize) -> Result<Vec<f64>> {
    let vals = line
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64(t, lineno))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != count {
        return Err(parse_err(
            lineno,
            format!("expected {count} values, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

pub fn parse_tensor(text: &str) -> Result<NullFormTensor<f64>> {
    let mut coeffs = [0.0; 81];
    let mut seen = [false; 81];
    for (lineno, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(
                lineno,
                format!("expected `a b m n value`, found {} fields", toks.len()),
            ));
        }
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[..4]) {
            *slot = match tok.parse::<usize>() {
                Ok(v) if v < 3 => v,
                _ => {
                    return Err(parse_err(
                        lineno,
                        format!("index `{tok}` must be 0, 1 or 2"),
                    ))
                }
            };
        }
        let flat = 27 * idx[0] + 9 * idx[1] + 3 * idx[2] + idx[3];
        if seen[flat] {
            return Err(parse_err(lineno, format!("duplicate entry {idx:?}")));
        }
        seen[flat] = true;
        coeffs[flat] = parse_f64(toks[4], lineno)?;
    }
    NullFormTensor::new(coeffs)
}

pub fn format_tensor(tensor: &NullFormTensor<f64>) -> String {
    let mut out = String::from("# a b m n value\n");
    for ((a, b, m, n), v) in tensor.nonzero_entries() {
        out.push_str(&format!("{a} {b} {m} {n} {v:e}\n"));
    }
    out
}

pub fn read_tensor(path: &Path) -> Result<NullFormTensor<f64>> {
    parse_tensor(&fs::read_to_string(path)?)
}

pub fn parse_quasi(text: &str) -> Result<QuasiNullForm<f64>> {
    let lines: Vec<_> = content_lines(text).collect();
    if lines.len() != 4 {
        let at = lines
            .get(4)
            .map_or(lines.last().map_or(1, |l| l.0), |l| l.0);
        return Err(parse_err(
            at,
            format!(
                "expected 4 data lines (A and three rows of m), found {}",
                lines.len()
            ),
        ));
    }
    let a = parse_numbers(lines[0].1, lines[0].0, 3)?;
    let mut m = [[0.0; 3]; 3];
    for (row, &(lineno, line)) in m.iter_mut().zip(&lines[1..]) {
        row.copy_from_slice(&parse_numbers(line, lineno, 3)?);
    }
    QuasiNullForm::new([a[0], a[1], a[2]], m).map_err(|e| parse_err(lines[1].0, e.to_string()))
}

pub fn read_quasi(path: &Path) -> Result<QuasiNullForm<f64>> {
    parse_quasi(&fs::read_to_string(path)?)
}

/// Splits off the first line (the header) from raw bytes.
fn split_header(bytes: &[u8]) -> Result<(&str, &[u8])> {
    let end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| parse_err(1, "missing header line"))?;
    let header =
        std::str::from_utf8(&bytes[..end]).map_err(|_| parse_err(1, "header is not text"))?;
    Ok((header.trim(), &bytes[end + 1..]))
}

fn parse_grid(n: f64, l: f64) -> Result<PeriodicGrid<f64>> {
    if n.fract() != 0.0 || n < 0.0 {
        return Err(parse_err(1, format!("grid size `{n}` is not an integer")));
    }
    PeriodicGrid::new(n as usize, l).map_err(|e| parse_err(1, e.to_string()))
}

/// Reads `count` n×n blocks from the body following the header.
fn read_blocks(
    body: &[u8],
    n: usize,
    count: usize,
    format: FieldFormat,
) -> Result<Vec<Array2<f64>>> {
    match format {
        FieldFormat::Binary => {
            let expect = 8 * n * n * count;
            if body.len() != expect {
                return Err(parse_err(
                    2,
                    format!("expected {expect} bytes of samples, found {}", body.len()),
                ));
            }
            let vals: Vec<f64> = body
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect();
            Ok(vals
                .chunks_exact(n * n)
                .map(|c| Array2::from_shape_vec((n, n), c.to_vec()).expect("block shape"))
                .collect())
        }
        FieldFormat::Csv => {
            let text =
                std::str::from_utf8(body).map_err(|_| parse_err(2, "samples are not text"))?;
            let mut rows = Vec::with_capacity(n * count);
            for (lineno, line) in content_lines(text) {
                rows.push(parse_numbers(line, lineno + 1, n)?);
            }
            if rows.len() != n * count {
                return Err(parse_err(
                    2,
                    format!("expected {} sample rows, found {}", n * count, rows.len()),
                ));
            }
            Ok(rows
                .chunks_exact(n)
                .map(|block| Array2::from_shape_fn((n, n), |(i, j)| block[i][j]))
                .collect())
        }
    }
}

fn write_blocks(out: &mut Vec<u8>, blocks: &[&Array2<f64>], format: FieldFormat) {
    for block in blocks {
        match format {
            FieldFormat::Binary => {
                for v in block.iter() {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
            FieldFormat::Csv => {
                for row in block.rows() {
                    let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                    out.extend_from_slice(line.join(",").as_bytes());
                    out.push(b'\n');
                }
            }
        }
    }
}

pub fn encode_field(field: &GridField<f64>, format: FieldFormat) -> Vec<u8> {
    let g = field.grid();
    let mut out = format!("{} {:e}\n", g.n(), g.half_width()).into_bytes();
    write_blocks(&mut out, &[field.values()], format);
    out
}

pub fn decode_field(bytes: &[u8], format: FieldFormat) -> Result<GridField<f64>> {
    let (header, body) = split_header(bytes)?;
    let h = parse_numbers(header, 1, 2)?;
    let grid = parse_grid(h[0], h[1])?;
    let mut blocks = read_blocks(body, grid.n(), 1, format)?;
    GridField::new(grid, blocks.remove(0))
}

pub fn write_field(path: &Path, field: &GridField<f64>, format: FieldFormat) -> Result<()> {
    Ok(fs::write(path, encode_field(field, format))?)
}

pub fn read_field(path: &Path, format: FieldFormat) -> Result<GridField<f64>> {
    decode_field(&fs::read(path)?, format)
}

pub fn encode_checkpoint(state: &WaveState<f64>, format: FieldFormat) -> Vec<u8> {
    let g = state.grid();
    let mut out = format!("{:e} {} {:e}\n", state.t(), g.n(), g.half_width()).into_bytes();
    write_blocks(&mut out, &[state.u().values(), state.ut().values()], format);
    out
}

pub fn decode_checkpoint(bytes: &[u8], format: FieldFormat) -> Result<WaveState<f64>> {
    let (header, body) = split_header(bytes)?;
    let h = parse_numbers(header, 1, 3)?;
    let grid = parse_grid(h[1], h[2])?;
    let mut blocks = read_blocks(body, grid.n(), 2, format)?;
    let ut = GridField::new(grid, blocks.pop().expect("two blocks"))?;
    let u = GridField::new(grid, blocks.pop().expect("two blocks"))?;
    WaveState::new(h[0], u, ut)
}

pub fn write_checkpoint(path: &Path, state: &WaveState<f64>, format: FieldFormat) -> Result<()> {
    Ok(fs::write(path, encode_checkpoint(state, format))?)
}

pub fn read_checkpoint(path: &Path, format: FieldFormat) -> Result<WaveState<f64>> {
    decode_checkpoint(&fs::read(path)?, format)
}

//! Plain-text formats.
//!
//! Grid functions are CSV with header `index,value`, coefficient vectors use
//! `index,coefficient` and scaled kernels `index,scaled_value,scale_factor`.
//! Rows are listed by ascending index `0..2^M`. Floats are written with 17
//! significant digits so a round trip is lossless.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Result, WfError};
use crate::grid::GridFunction;
use crate::kernels::ScaledKernel;
use crate::MAX_SCALE;

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_error(line: u64, message: impl Into<String>) -> WfError {
    WfError::Parse {
        line,
        message: message.into(),
    }
}

fn csv_error(err: csv::Error) -> WfError {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => WfError::Io(e),
        other => parse_error(line, format!("{other:?}")),
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header).map_err(csv_error)?;
    for row in rows {
        writer.write_record(&row).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads an indexed two-column table and returns the value column.
fn read_indexed<R: Read>(input: R, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let found: Vec<String> = reader.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(parse_error(1, format!("expected header {}, found {}", header.join(","), found.join(","))));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let index: usize = record[0]
            .parse()
            .map_err(|_| parse_error(line, format!("bad index {:?}", &record[0])))?;
        if index != rows.len() {
            return Err(parse_error(line, format!("expected index {}, found {index}", rows.len())));
        }
        rows.push(record.iter().skip(1).map(str::to_owned).collect());
    }
    let len = rows.len();
    if !len.is_power_of_two() {
        return Err(WfError::NotPowerOfTwo(len));
    }
    if len.trailing_zeros() > MAX_SCALE {
        return Err(WfError::ScaleTooLarge(len.trailing_zeros()));
    }
    Ok(rows)
}

fn parse_float(field: &str, line: u64) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_error(line, format!("bad number {field:?}")))
}

pub fn write_grid<W: Write>(out: W, f: &GridFunction) -> Result<()> {
    let rows = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), format_float(*v)]);
    write_rows(out, &["index", "value"], rows)
}

pub fn read_grid<R: Read>(input: R) -> Result<GridFunction> {
    let rows = read_indexed(input, &["index", "value"])?;
    let values = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_float(&r[0], i as u64 + 2))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::from_values(values)
}

pub fn write_coefficients<W: Write>(out: W, coefficients: &[f64]) -> Result<()> {
    let rows = coefficients
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), format_float(*v)]);
    write_rows(out, &["index", "coefficient"], rows)
}

pub fn read_coefficients<R: Read>(input: R) -> Result<Vec<f64>> {
    let rows = read_indexed(input, &["index", "coefficient"])?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| parse_float(&r[0], i as u64 + 2))
        .collect()
}

pub fn write_kernel<W: Write>(out: W, kernel: &ScaledKernel) -> Result<()> {
    let factor = kernel.scale_factor().to_string();
    let rows = kernel
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), v.to_string(), factor.clone()]);
    write_rows(out, &["index", "scaled_value", "scale_factor"], rows)
}

/// Reads a kernel table back as `(scaled values, scale factor)`.
pub fn read_kernel<R: Read>(input: R) -> Result<(Vec<i64>, i64)> {
    let rows = read_indexed(input, &["index", "scaled_value", "scale_factor"])?;
    let mut factor = None;
    let mut values = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let line = i as u64 + 2;
        let int = |s: &str| s.parse::<i64>().map_err(|_| parse_error(line, format!("bad integer {s:?}")));
        values.push(int(&r[0])?);
        let f = int(&r[1])?;
        if *factor.get_or_insert(f) != f {
            return Err(parse_error(line, "scale factor changes between rows"));
        }
    }
    Ok((values, factor.unwrap_or(1)))
}

fn data_lines<R: Read>(input: R) -> impl Iterator<Item = Result<(u64, String)>> {
    BufReader::new(input)
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Ok(l) => {
                let t = l.trim();
                (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i as u64 + 1, t.to_owned())))
            }
            Err(e) => Some(Err(WfError::Io(e))),
        })
}

/// One nonnegative integer per line; blank lines and `#` comments are skipped.
pub fn read_indices<R: Read>(input: R) -> Result<Vec<u64>> {
    data_lines(input)
        .map(|item| {
            let (line, text) = item?;
            text.parse::<u64>()
                .map_err(|_| parse_error(line, format!("bad index {text:?}")))
        })
        .collect()
}

/// One weight per line; line `k` (ignoring blanks and comments) is `phi_k`.
pub fn read_weights<R: Read>(input: R) -> Result<Vec<f64>> {
    data_lines(input)
        .map(|item| {
            let (line, text) = item?;
            parse_float(&text, line)
        })
        .collect()
}

pub fn open(path: &Path) -> Result<File> {
    Ok(File::open(path)?)
}

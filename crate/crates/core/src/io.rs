//! UCR text files, z-normalization and matrix export.
//!
//! A UCR file holds one instance per line: the integer class label followed
//! by the values. Fields are separated by commas or by runs of whitespace;
//! the first nonblank line decides which.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::series::{ClassLabel, LabeledDataset, TimeSeries};

const LABEL_TOLERANCE: f64 = 1e-9;
const SIGMA_FLOOR: f64 = 1e-12;

pub fn read_ucr(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_ucr_lines(
        BufReader::new(file)
            .lines()
            .map(|l| l.map_err(|e| Error::io(path, e))),
    )
}

/// Parses UCR text already in memory.
pub fn parse_ucr(text: &str) -> Result<LabeledDataset> {
    parse_ucr_lines(text.lines().map(|l| Ok(l.to_string())))
}

fn parse_ucr_lines(lines: impl Iterator<Item = Result<String>>) -> Result<LabeledDataset> {
    let mut comma: Option<bool> = None;
    let mut width: Option<usize> = None;
    let mut series = Vec::new();
    let mut labels = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let line_no = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let comma = *comma.get_or_insert_with(|| trimmed.contains(','));
        let fields: Vec<&str> = if comma {
            trimmed.split(',').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(Error::RaggedRows {
                line: line_no,
                expected,
                found: fields.len(),
            });
        }
        if fields.len() < 2 {
            return Err(Error::Parse {
                line: line_no,
                field: 2,
                message: "no values after the label".into(),
            });
        }
        labels.push(parse_label(fields[0], line_no)?);
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(i, f)| parse_value(f, line_no, i + 2))
            .collect::<Result<Vec<f64>>>()?;
        series.push(TimeSeries::new(values).expect("nonempty, finite"));
    }
    LabeledDataset::from_parts(series, labels)
}

fn parse_label(field: &str, line: usize) -> Result<ClassLabel> {
    if let Ok(id) = i64::from_str(field) {
        return Ok(ClassLabel(id));
    }
    let parse_err = |message: String| Error::Parse {
        line,
        field: 1,
        message,
    };
    let v = f64::from_str(field).map_err(|_| parse_err(format!("label {field:?} is not numeric")))?;
    let rounded = v.round();
    if !v.is_finite() || (v - rounded).abs() > LABEL_TOLERANCE || rounded.abs() > i64::MAX as f64 {
        return Err(parse_err(format!("label {field:?} is not an integer")));
    }
    Ok(ClassLabel(rounded as i64))
}

fn parse_value(field: &str, line: usize, index: usize) -> Result<f64> {
    match f64::from_str(field) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Parse {
            line,
            field: index,
            message: format!("{field:?} is not finite"),
        }),
        Err(_) => Err(Error::Parse {
            line,
            field: index,
            message: format!("{field:?} is not a number"),
        }),
    }
}

/// Writes comma-separated rows, label first, values with 17 significant digits.
pub fn write_ucr(d: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_ucr_to(d, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_ucr_to(d: &LabeledDataset, w: &mut impl Write) -> std::io::Result<()> {
    for (s, label) in d.iter() {
        write!(w, "{label}")?;
        for v in s.iter() {
            write!(w, ",{v:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// `(x − μ)/σ` with the population σ; a flat series maps to zeros.
pub fn z_normalize(x: &TimeSeries) -> TimeSeries {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sigma = var.sqrt();
    let out: Vec<f64> = if sigma < SIGMA_FLOOR {
        vec![0.0; x.len()]
    } else {
        x.iter().map(|v| (v - mean) / sigma).collect()
    };
    TimeSeries::new(out).expect("finite")
}

pub fn z_normalize_dataset(d: &LabeledDataset) -> LabeledDataset {
    d.map_series(z_normalize).expect("shape preserved")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    /// Binary 8-bit graymap; darker means larger magnitude.
    Pgm,
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "pgm" => Ok(MatrixFormat::Pgm),
            _ => Err(Error::InvalidSpec(format!(
                "unknown matrix format {s:?} (csv or pgm)"
            ))),
        }
    }
}

pub fn export_matrix(m: &DMatrix<f64>, path: impl AsRef<Path>, format: MatrixFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let written = match format {
        MatrixFormat::Csv => write_csv(m, &mut w),
        MatrixFormat::Pgm => w.write_all(&pgm_bytes(m)),
    };
    written.and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn write_csv(m: &DMatrix<f64>, w: &mut impl Write) -> std::io::Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{:.16e}", m[(i, j)])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// P5 header plus row-major pixels `255 − round(255·|v|/max|v|)`.
pub fn pgm_bytes(m: &DMatrix<f64>) -> Vec<u8> {
    let max = m.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut out = format!("P5\n{} {}\n255\n", m.ncols(), m.nrows()).into_bytes();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let shade = if max > 0.0 {
                (255.0 * m[(i, j)].abs() / max).round()
            } else {
                0.0
            };
            out.push(255 - shade as u8);
        }
    }
    out
}

use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

/// What the numbers in an input file represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    /// Strictly positive prices; segmentation uses log-returns.
    #[default]
    Price,
    /// Arbitrary levels; segmentation uses first differences.
    Level,
    /// Returns, used as they are.
    Return,
}

impl FromStr for InputKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "price" => Ok(InputKind::Price),
            "level" => Ok(InputKind::Level),
            "return" => Ok(InputKind::Return),
            other => Err(Error::Config(format!("unknown input kind '{other}' (expected price, level or return)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSeries {
    pub series: TimeSeries,
    /// First column of multi-column rows, kept as labels.
    pub dates: Option<Vec<String>>,
    pub header: Option<Vec<String>>,
}

/// Reads one value per row, taken from the last column. A first column in
/// multi-column rows is kept as a date label. A non-numeric first row is a header.
pub fn parse_series_csv<R: Read>(reader: R) -> Result<LoadedSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut values = Vec::new();
    let mut dates = Vec::new();
    let mut header = None;
    let mut multi = None;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(i + 1),
            msg: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 1);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let last = rec.get(rec.len() - 1).unwrap_or("");
        match last.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                let is_multi = rec.len() > 1;
                if *multi.get_or_insert(is_multi) != is_multi {
                    return Err(Error::Parse { line, msg: "inconsistent column count".into() });
                }
                if is_multi {
                    dates.push(rec[0].to_string());
                }
                values.push(v);
            }
            Ok(_) => return Err(Error::Parse { line, msg: format!("non-finite value '{last}'") }),
            Err(_) if values.is_empty() && header.is_none() => {
                header = Some(rec.iter().map(str::to_string).collect());
            }
            Err(_) => return Err(Error::Parse { line, msg: format!("not a number: '{last}'") }),
        }
    }
    if values.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no numeric rows".into() });
    }
    Ok(LoadedSeries {
        series: TimeSeries::new(values)?,
        dates: if dates.is_empty() { None } else { Some(dates) },
        header,
    })
}

pub fn read_series_csv(path: &Path) -> Result<LoadedSeries> {
    parse_series_csv(File::open(path)?)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Writes equal-length numeric columns with a header row.
pub fn write_columns_csv(path: &Path, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.len() != headers.len() || columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Domain("column lengths differ".into()));
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(headers).map_err(csv_error)?;
    for r in 0..rows {
        w.write_record(columns.iter().map(|c| format!("{}", c[r]))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// `log(p_{t+1}/p_t)`; every price must be positive.
pub fn log_returns(prices: &TimeSeries) -> Result<TimeSeries> {
    let p = prices.values();
    if let Some(i) = p.iter().position(|v| *v <= 0.0) {
        return Err(Error::Domain(format!("price at index {i} is not positive")));
    }
    if p.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: p.len() });
    }
    TimeSeries::new(p.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

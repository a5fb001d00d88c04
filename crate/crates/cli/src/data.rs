//! Delimiter-separated numeric input: one observation per line, `#` starts
//! a comment, an optional non-numeric header line is skipped.

use std::path::Path;

use lrt_core::stats::DataMatrix;
use nalgebra::DMatrix;

use crate::error::{CliError, Result};

fn sniff(text: &str) -> Option<u8> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))?;
    b",\t;"
        .iter()
        .copied()
        .find(|&d| line.as_bytes().contains(&d))
}

fn records(text: &str, delimiter: Option<u8>) -> Result<Vec<Vec<String>>> {
    match delimiter.or_else(|| sniff(text)) {
        Some(d) => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .delimiter(d)
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .flexible(true)
                .from_reader(text.as_bytes());
            rdr.records()
                .map(|r| {
                    r.map(|rec| rec.iter().map(str::to_owned).collect::<Vec<String>>())
                        .map_err(|e| CliError::Data(e.to_string()))
                })
                .filter(|r| !matches!(r, Ok(v) if v.iter().all(String::is_empty)))
                .collect()
        }
        None => Ok(text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .map(|l| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
            .filter(|v| !v.is_empty())
            .collect()),
    }
}

/// Parses rows of numbers into an `n x p` matrix.
pub fn parse_matrix(text: &str, delimiter: Option<u8>, origin: &str) -> Result<DMatrix<f64>> {
    let mut rows = records(text, delimiter)?;
    let numeric = |v: &[String]| v.iter().all(|s| s.parse::<f64>().is_ok());
    if rows
        .first()
        .is_some_and(|r| !r.iter().any(|s| s.parse::<f64>().is_ok()))
    {
        log::info!("{origin}: skipping header line");
        rows.remove(0);
    }
    let Some(width) = rows.first().map(Vec::len) else {
        return Err(CliError::Data(format!("{origin}: no data rows")));
    };
    let mut values = Vec::with_capacity(rows.len() * width);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(CliError::Data(format!(
                "{origin}: row {} has {} fields, expected {width}",
                i + 1,
                row.len()
            )));
        }
        if !numeric(row) {
            return Err(CliError::Data(format!(
                "{origin}: row {} is not numeric: {}",
                i + 1,
                row.join(" ")
            )));
        }
        values.extend(row.iter().map(|s| s.parse::<f64>().expect("checked")));
    }
    Ok(DMatrix::from_row_slice(rows.len(), width, &values))
}

pub fn read_matrix(path: &Path, delimiter: Option<u8>) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text, delimiter, &path.display().to_string())
}

pub fn read_data(path: &Path, delimiter: Option<u8>) -> Result<DataMatrix> {
    DataMatrix::new(read_matrix(path, delimiter)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_delimiters() {
        for text in ["1,2\n3,4\n", "1\t2\n3\t4\n", "1;2\n3;4\n", "1 2\n 3   4 \n"] {
            let m = parse_matrix(text, None, "t").unwrap();
            assert_eq!(
                m,
                DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]),
                "{text:?}"
            );
        }
    }

    #[test]
    fn skips_header_and_comments() {
        let m = parse_matrix("# data\nx,y\n1,2\n\n3,4 \n", None, "t").unwrap();
        assert_eq!(m.shape(), (2, 2));
    }

    #[test]
    fn rejects_ragged_and_text() {
        assert!(matches!(
            parse_matrix("1,2\n3\n", None, "t"),
            Err(CliError::Data(_))
        ));
        assert!(matches!(
            parse_matrix("1,2\n3,abc\n", None, "t"),
            Err(CliError::Data(_))
        ));
        assert!(matches!(
            parse_matrix("# nothing\n", None, "t"),
            Err(CliError::Data(_))
        ));
    }
}

//! Plain CSV in the C locale: `{:.16e}` numbers, `\n` row endings.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// 17 significant digits in scientific notation.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter<W: Write> {
    out: BufWriter<W>,
    line: String,
}

impl CsvWriter<File> {
    pub fn create(path: &Path) -> io::Result<Self> {
        Ok(CsvWriter::new(File::create(path)?))
    }
}

impl<W: Write> CsvWriter<W> {
    pub fn new(inner: W) -> Self {
        CsvWriter {
            out: BufWriter::new(inner),
            line: String::new(),
        }
    }

    pub fn header<S: AsRef<str>>(&mut self, columns: &[S]) -> io::Result<()> {
        let names: Vec<&str> = columns.iter().map(|c| c.as_ref()).collect();
        writeln!(self.out, "{}", names.join(","))
    }

    pub fn row(&mut self, values: &[f64]) -> io::Result<()> {
        self.line.clear();
        for (k, v) in values.iter().enumerate() {
            if k > 0 {
                self.line.push(',');
            }
            self.line.push_str(&number(*v));
        }
        self.line.push('\n');
        self.out.write_all(self.line.as_bytes())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// A numeric table read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn read_table(path: &Path) -> io::Result<Table> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?
            .trim()
            .split(',')
            .map(|s| s.trim().to_string())
            .collect::<Vec<_>>(),
        None => return Err(io::Error::new(io::ErrorKind::InvalidData, "empty CSV file")),
    };
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| {
                io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", k + 2))
            })?;
        if row.len() != header.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!(
                    "line {}: {} fields, header has {}",
                    k + 2,
                    row.len(),
                    header.len()
                ),
            ));
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

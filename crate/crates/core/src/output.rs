//! Text formats for tabular and integer-sequence output.
//!
//! `tsv` and `csv` print a header row; `jsonl` prints one object per row with
//! keys in column order; `bfile` prints `n value` lines with `n` counting
//! from 1 and applies only to integer sequences.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::Error;
use crate::sieve::{FirstAppearance, SieveItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Csv,
    Jsonl,
    Bfile,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "tsv" => Ok(OutputFormat::Tsv),
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            "bfile" => Ok(OutputFormat::Bfile),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected tsv, csv, jsonl or bfile",
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Tsv => "tsv",
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
            OutputFormat::Bfile => "bfile",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Bool(bool),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.6}"),
            Cell::Text(v) => v.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Real(v) => serde_json::Number::from_f64(*v)
                .map_or_else(|| "null".to_string(), |n| n.to_string()),
            Cell::Text(v) => serde_json::Value::String(v.clone()).to_string(),
            Cell::Empty => "null".to_string(),
        }
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Cell {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cell!(i64, u64, usize);

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Bool(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Real(v)
    }
}

/// A row type with a fixed column list.
pub trait Record {
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

impl Record for SieveItem {
    const COLUMNS: &'static [&'static str] =
        &["index", "p", "q", "numerator", "denominator", "is_new"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.pair.p().into(),
            self.pair.q().into(),
            self.value.num().into(),
            self.value.den().into(),
            self.is_new_denominator.into(),
        ]
    }
}

/// A first appearance together with its 1-based position in the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankedFirst {
    pub rank: u64,
    pub first: FirstAppearance,
}

impl Record for RankedFirst {
    const COLUMNS: &'static [&'static str] = &["rank", "d", "index", "p", "q"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.rank.into(),
            self.first.d.into(),
            self.first.index.into(),
            self.first.pair.p().into(),
            self.first.pair.q().into(),
        ]
    }
}

/// One sample of the new-denominator count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub index: u64,
    pub new_denominators: u64,
}

impl Record for DensityRow {
    const COLUMNS: &'static [&'static str] = &["index", "new_denominators", "ratio"];

    fn cells(&self) -> Vec<Cell> {
        let ratio = if self.index == 0 {
            Cell::Empty
        } else {
            Cell::Real(self.new_denominators as f64 / (self.index as f64).sqrt())
        };
        vec![self.index.into(), self.new_denominators.into(), ratio]
    }
}

/// Writes `rows` as a table; nothing at all when there are no rows.
/// `bfile` is rejected here, see [`write_bfile`].
pub fn write_table<W, R, I>(out: &mut W, format: OutputFormat, rows: I) -> io::Result<()>
where
    W: Write,
    R: Record,
    I: IntoIterator<Item = R>,
{
    let sep = match format {
        OutputFormat::Tsv => "\t",
        OutputFormat::Csv => ",",
        OutputFormat::Jsonl => "",
        OutputFormat::Bfile => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "bfile output applies only to integer sequences",
            ))
        }
    };
    for (k, row) in rows.into_iter().enumerate() {
        if k == 0 && format != OutputFormat::Jsonl {
            writeln!(out, "{}", R::COLUMNS.join(sep))?;
        }
        let cells = row.cells();
        if format == OutputFormat::Jsonl {
            let body: Vec<String> = R::COLUMNS
                .iter()
                .zip(&cells)
                .map(|(k, c)| format!("\"{k}\":{}", c.json()))
                .collect();
            writeln!(out, "{{{}}}", body.join(","))?;
        } else {
            let body: Vec<String> = cells.iter().map(Cell::plain).collect();
            writeln!(out, "{}", body.join(sep))?;
        }
    }
    Ok(())
}

/// `n value` lines, `n` from 1.
pub fn write_bfile<W: Write>(
    out: &mut W,
    values: impl IntoIterator<Item = i128>,
) -> io::Result<()> {
    for (n, v) in values.into_iter().enumerate() {
        writeln!(out, "{} {}", n + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{first_appearance_order, sieve_stream};

    fn render<R: Record>(format: OutputFormat, rows: Vec<R>) -> String {
        let mut buf = Vec::new();
        write_table(&mut buf, format, rows).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn sieve_rows_in_each_format() {
        let rows: Vec<_> = sieve_stream(3, 2).unwrap().collect();
        assert_eq!(
            render(OutputFormat::Tsv, rows.clone()),
            "index\tp\tq\tnumerator\tdenominator\tis_new\n3\t4\t1\t3\t5\tfalse\n4\t4\t2\t1\t3\tfalse\n"
        );
        assert_eq!(
            render(OutputFormat::Csv, rows.clone()),
            "index,p,q,numerator,denominator,is_new\n3,4,1,3,5,false\n4,4,2,1,3,false\n"
        );
        assert_eq!(
            render(OutputFormat::Jsonl, rows[..1].to_vec()),
            "{\"index\":3,\"p\":4,\"q\":1,\"numerator\":3,\"denominator\":5,\"is_new\":false}\n"
        );
        let mut buf = Vec::new();
        assert!(write_table(&mut buf, OutputFormat::Bfile, rows).is_err());
        assert_eq!(render(OutputFormat::Tsv, Vec::<SieveItem>::new()), "");
    }

    #[test]
    fn bfile_lines() {
        let ds = first_appearance_order(3)
            .unwrap()
            .iter()
            .map(|fa| fa.d as i128)
            .collect::<Vec<_>>();
        let mut buf = Vec::new();
        write_bfile(&mut buf, ds).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 3\n2 2\n3 5\n");
    }

    #[test]
    fn density_rows() {
        let rows = vec![
            DensityRow {
                index: 0,
                new_denominators: 1,
            },
            DensityRow {
                index: 100,
                new_denominators: 21,
            },
        ];
        assert_eq!(
            render(OutputFormat::Csv, rows.clone()),
            "index,new_denominators,ratio\n0,1,\n100,21,2.100000\n"
        );
        assert_eq!(
            render(OutputFormat::Jsonl, rows),
            "{\"index\":0,\"new_denominators\":1,\"ratio\":null}\n{\"index\":100,\"new_denominators\":21,\"ratio\":2.1}\n"
        );
    }

    #[test]
    fn format_names() {
        for name in ["tsv", "csv", "jsonl", "bfile"] {
            assert_eq!(name.parse::<OutputFormat>().unwrap().to_string(), name);
        }
        assert!("json".parse::<OutputFormat>().is_err());
    }
}

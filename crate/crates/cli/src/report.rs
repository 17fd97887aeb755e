//! Report documents: a versioned JSON envelope or CSV with a header row.

use std::io::{self, Write};

use clap::ValueEnum;
use lcyclic::rational::{render, to_f64};
use lcyclic::FieldSpec;
use num_rational::BigRational;
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// An exact rational with a float convenience field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub float: f64,
}

impl Exact {
    pub fn of(r: &BigRational) -> Self {
        Exact { exact: render(r), float: to_f64(r) }
    }
}

pub fn opt_exact(r: &Option<Exact>) -> (String, String) {
    match r {
        Some(e) => (e.exact.clone(), e.float.to_string()),
        None => (String::new(), String::new()),
    }
}

#[derive(Debug, Serialize)]
struct FieldInfo {
    p: u32,
    e: u32,
    q: u32,
    ell: u32,
}

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    field: FieldInfo,
    result: &'a T,
}

/// A command result that can be rendered both ways.
pub trait Report: Serialize {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

pub fn emit<R: Report>(command: &str, fs: &FieldSpec, report: &R, format: Format, out: impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let doc = Envelope {
                schema: SCHEMA,
                command,
                field: FieldInfo { p: fs.p(), e: fs.e(), q: fs.q(), ell: fs.ell() },
                result: report,
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(report.csv_header())?;
            for row in report.csv_rows() {
                w.write_record(&row)?;
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lcyclic::rational::ratio;

    #[derive(Serialize)]
    struct Tiny {
        value: Exact,
    }

    impl Report for Tiny {
        fn csv_header(&self) -> Vec<&'static str> {
            vec!["exact", "float"]
        }

        fn csv_rows(&self) -> Vec<Vec<String>> {
            vec![vec![self.value.exact.clone(), self.value.float.to_string()]]
        }
    }

    #[test]
    fn envelope_and_csv() {
        let fs = FieldSpec::new(3, 1, 2).unwrap();
        let r = Tiny { value: Exact::of(&ratio(3, 8)) };
        let mut buf = Vec::new();
        emit("tiny", &fs, &r, Format::Json, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let keys: Vec<usize> =
            ["\"schema\"", "\"command\"", "\"field\"", "\"result\""].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.contains("\"exact\": \"3/8\""));
        let mut buf = Vec::new();
        emit("tiny", &fs, &r, Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "exact,float\n3/8,0.375\n");
    }
}

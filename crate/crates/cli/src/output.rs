//! Record sinks for the three output formats.
//!
//! Every record is serialized to a JSON object first. CSV takes its header
//! from the first record; nested values land in a cell as compact JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(format!("unknown format {s:?} (expected jsonl, csv or pretty)")),
        }
    }
}

pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
    header: Option<Vec<String>>,
}

impl Sink {
    pub fn new(format: Format, path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { format, out, header: None })
    }

    pub fn emit<T: Serialize>(&mut self, record: &T) -> io::Result<()> {
        let value = serde_json::to_value(record)?;
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut self.out, &value)?;
                self.out.write_all(b"\n")
            }
            Format::Pretty => {
                serde_json::to_writer_pretty(&mut self.out, &value)?;
                self.out.write_all(b"\n")
            }
            Format::Csv => self.emit_csv(&value),
        }
    }

    fn emit_csv(&mut self, value: &Value) -> io::Result<()> {
        let Value::Object(map) = value else {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "csv rows must be objects"));
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.header {
            None => {
                let h: Vec<String> = map.keys().cloned().collect();
                w.write_record(&h)?;
                self.header = Some(h);
            }
            Some(h) if !h.iter().eq(map.keys()) => {
                return Err(io::Error::new(io::ErrorKind::InvalidData, "csv rows must share one set of columns"));
            }
            Some(_) => {}
        }
        w.write_record(map.values().map(cell))?;
        let buf = w.into_inner().map_err(|e| e.into_error())?;
        self.out.write_all(&buf)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => serde_json::to_string(v).expect("json values serialize"),
    }
}

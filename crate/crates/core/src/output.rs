//! Occurrence records as TSV or JSON lines.

use std::io::{LineWriter, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" | "jsonl" => Ok(Format::Json),
            other => Err(Error::Domain(format!("unknown output format {other:?}"))),
        }
    }
}

pub const TSV_HEADER: &str = "pattern_id\tstart\tlength\tdistance\tmatched_substring";

/// One output line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record<'a> {
    pub pattern_id: usize,
    pub start: usize,
    pub length: usize,
    pub distance: usize,
    pub matched_substring: &'a str,
    /// Header of the FASTA record the hit belongs to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<&'a str>,
}

/// Writes records as they arrive, flushing at every line end.
///
/// In TSV mode a header line comes first, and a `#record\t<header>` line
/// precedes the hits of each FASTA record.
pub struct RecordWriter<W: Write> {
    out: LineWriter<W>,
    format: Format,
    started: bool,
    current_record: Option<String>,
    written: usize,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        RecordWriter {
            out: LineWriter::new(out),
            format,
            started: false,
            current_record: None,
            written: 0,
        }
    }

    /// Number of records written so far.
    pub fn written(&self) -> usize {
        self.written
    }

    /// Writes the TSV header if nothing was written yet.
    pub fn begin(&mut self) -> Result<()> {
        if !self.started {
            self.started = true;
            if self.format == Format::Tsv {
                writeln!(self.out, "{TSV_HEADER}").map_err(|e| Error::io("writing output", e))?;
            }
        }
        Ok(())
    }

    pub fn write(&mut self, r: &Record<'_>) -> Result<()> {
        self.begin()?;
        let io = |e| Error::io("writing output", e);
        match self.format {
            Format::Tsv => {
                if let Some(h) = r.record {
                    if self.current_record.as_deref() != Some(h) {
                        writeln!(self.out, "#record\t{h}").map_err(io)?;
                        self.current_record = Some(h.to_string());
                    }
                }
                writeln!(
                    self.out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.pattern_id, r.start, r.length, r.distance, r.matched_substring
                )
                .map_err(io)?;
            }
            Format::Json => {
                serde_json::to_writer(&mut self.out, r).map_err(|e| Error::io("writing output", e.into()))?;
                writeln!(self.out).map_err(io)?;
            }
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.begin()?;
        self.out
            .into_inner()
            .map_err(|e| Error::io("flushing output", e.into_error()))
    }
}

//! Incremental symbol reader for plain text and FASTA input.
//!
//! Input is decoded in fixed-size chunks, so memory stays bounded even when a
//! sequence is stored on one very long line. Lines starting with `>` are
//! record headers, lines starting with `;` are comments, whitespace is
//! ignored everywhere else.

use std::collections::VecDeque;
use std::io::{BufRead, Read};
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};

const BATCH: usize = 8192;

/// One unit of parsed input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// Start of a new record.
    Record(Arc<str>),
    /// Consecutive symbols of the current record.
    Symbols(Vec<Symbol>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineState {
    Start,
    Sequence,
    Header,
    Comment,
}

pub struct EventReader<R> {
    reader: R,
    alphabet: Alphabet,
    strict: bool,
    seen_header: bool,
    state: LineState,
    line: usize,
    header: String,
    batch: Vec<Symbol>,
    raw: Vec<u8>,
    pending: Vec<u8>,
    queued: VecDeque<Event>,
    eof: bool,
}

impl<R: Read> EventReader<R> {
    /// Accepts plain symbol streams as well as FASTA.
    pub fn new(reader: R, alphabet: &Alphabet) -> Self {
        EventReader {
            reader,
            alphabet: alphabet.clone(),
            strict: false,
            seen_header: false,
            state: LineState::Start,
            line: 1,
            header: String::new(),
            batch: Vec::new(),
            raw: vec![0; BATCH],
            pending: Vec::new(),
            queued: VecDeque::new(),
            eof: false,
        }
    }

    /// Requires a header before the first symbol.
    pub fn fasta(reader: R, alphabet: &Alphabet) -> Self {
        EventReader {
            strict: true,
            ..Self::new(reader, alphabet)
        }
    }

    /// Current line number, 1-based.
    pub fn line(&self) -> usize {
        self.line
    }

    pub fn next_event(&mut self) -> Result<Option<Event>> {
        loop {
            if let Some(e) = self.queued.pop_front() {
                return Ok(Some(e));
            }
            if self.batch.len() >= BATCH {
                return Ok(Some(Event::Symbols(std::mem::take(&mut self.batch))));
            }
            if self.eof {
                if self.state == LineState::Header {
                    self.end_header()?;
                    continue;
                }
                if !self.pending.is_empty() {
                    return Err(self.parse_error("invalid UTF-8"));
                }
                if self.batch.is_empty() {
                    return Ok(None);
                }
                return Ok(Some(Event::Symbols(std::mem::take(&mut self.batch))));
            }
            self.fill()?;
        }
    }

    fn fill(&mut self) -> Result<()> {
        let n = loop {
            match self.reader.read(&mut self.raw) {
                Ok(n) => break n,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(Error::io("reading input", e)),
            }
        };
        if n == 0 {
            self.eof = true;
            return Ok(());
        }
        self.pending.extend_from_slice(&self.raw[..n]);
        let valid = match std::str::from_utf8(&self.pending) {
            Ok(s) => s.len(),
            Err(e) if e.error_len().is_none() => e.valid_up_to(),
            Err(_) => return Err(self.parse_error("invalid UTF-8")),
        };
        let bytes: Vec<u8> = self.pending.drain(..valid).collect();
        let text = std::str::from_utf8(&bytes).expect("validated above");
        for c in text.chars() {
            self.feed(c)?;
        }
        Ok(())
    }

    fn feed(&mut self, c: char) -> Result<()> {
        if c == '\n' {
            if self.state == LineState::Header {
                self.end_header()?;
            }
            self.state = LineState::Start;
            self.line += 1;
            return Ok(());
        }
        match self.state {
            LineState::Header => self.header.push(c),
            LineState::Comment => {}
            LineState::Start if c == '>' => {
                self.state = LineState::Header;
                self.header.clear();
            }
            LineState::Start if c == ';' => self.state = LineState::Comment,
            LineState::Start | LineState::Sequence => {
                self.state = LineState::Sequence;
                if c.is_whitespace() {
                    return Ok(());
                }
                if self.strict && !self.seen_header {
                    return Err(self.parse_error("sequence data before the first header"));
                }
                match self.alphabet.encode(c) {
                    Some(s) => self.batch.push(s),
                    None => return Err(self.parse_error(&format!("symbol {c:?} is not part of the alphabet"))),
                }
            }
        }
        Ok(())
    }

    fn end_header(&mut self) -> Result<()> {
        self.state = LineState::Start;
        let header = self.header.trim();
        if header.is_empty() {
            return Err(self.parse_error("empty record header"));
        }
        let event = Event::Record(Arc::from(header));
        self.seen_header = true;
        if !self.batch.is_empty() {
            self.queued.push_back(Event::Symbols(std::mem::take(&mut self.batch)));
        }
        self.queued.push_back(event);
        Ok(())
    }

    fn parse_error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            message: message.to_string(),
        }
    }
}

impl<R: Read> Iterator for EventReader<R> {
    type Item = Result<Event>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_event().transpose()
    }
}

/// A FASTA record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub header: String,
    pub sequence: Vec<Symbol>,
}

impl FastaRecord {
    /// First word of the header.
    pub fn name(&self) -> &str {
        self.header.split_whitespace().next().unwrap_or("")
    }
}

/// Reads every record of a FASTA file into memory.
pub fn read_fasta(reader: impl BufRead, alphabet: &Alphabet) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for event in EventReader::fasta(reader, alphabet) {
        match event? {
            Event::Record(h) => records.push(FastaRecord {
                header: h.to_string(),
                sequence: Vec::new(),
            }),
            Event::Symbols(s) => records
                .last_mut()
                .expect("strict reader emits a header first")
                .sequence
                .extend(s),
        }
    }
    Ok(records)
}

/// Reads all events of a stream into memory.
pub fn read_events(reader: impl Read, alphabet: &Alphabet) -> Result<Vec<Event>> {
    EventReader::new(reader, alphabet).collect()
}

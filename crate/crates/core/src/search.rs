//! Running engines over input streams, for one pattern or many.

use std::borrow::Borrow;
use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Read, Write};
use std::sync::mpsc::sync_channel;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use crate::alphabet::Alphabet;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fasta::{Event, EventReader};
use crate::output::{Record, RecordWriter};
use crate::types::{Occurrence, Pattern};

/// Patterns searched together over one stream.
#[derive(Debug, Clone)]
pub struct PatternSet {
    alphabet: Alphabet,
    entries: Vec<PatternEntry>,
}

#[derive(Debug, Clone)]
pub struct PatternEntry {
    pub id: usize,
    pub text: String,
    pub pattern: Pattern,
}

impl PatternSet {
    pub fn new(alphabet: Alphabet) -> Self {
        PatternSet {
            alphabet,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, id: usize, text: &str, threshold: usize) -> Result<()> {
        if self.entries.iter().any(|e| e.id == id) {
            return Err(Error::Domain(format!("duplicate pattern id {id}")));
        }
        let pattern = Pattern::parse(text, threshold, &self.alphabet)?;
        self.entries.push(PatternEntry {
            id,
            text: text.to_string(),
            pattern,
        });
        Ok(())
    }

    /// One pattern per line, `id<TAB>pattern<TAB>K` or `pattern<TAB>K` (ids
    /// then count from zero). Blank lines and lines starting with `#` are
    /// skipped.
    pub fn parse(reader: impl BufRead, alphabet: Alphabet) -> Result<Self> {
        let mut set = PatternSet::new(alphabet);
        let mut seen = HashSet::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("reading pattern file", e))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: n + 1, message };
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let (id, text, k) = match fields.as_slice() {
                [id, text, k] => (
                    id.parse::<usize>()
                        .map_err(|_| parse_err(format!("invalid pattern id {id:?}")))?,
                    *text,
                    *k,
                ),
                [text, k] => (set.len(), *text, *k),
                _ => return Err(parse_err("expected id, pattern and threshold separated by tabs".into())),
            };
            let k = k
                .parse::<usize>()
                .map_err(|_| parse_err(format!("invalid threshold {k:?}")))?;
            if !seen.insert(id) {
                return Err(parse_err(format!("duplicate pattern id {id}")));
            }
            set.add(id, text, k).map_err(|e| match e {
                Error::Io { .. } => e,
                other => parse_err(other.to_string()),
            })?;
        }
        if set.is_empty() {
            return Err(Error::Domain("pattern file contains no patterns".into()));
        }
        Ok(set)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn entries(&self) -> &[PatternEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An occurrence with the text it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub occurrence: Occurrence,
    pub record: Option<Arc<str>>,
    pub matched: String,
}

impl Hit {
    fn record(&self) -> Record<'_> {
        Record {
            pattern_id: self.occurrence.pattern_id,
            start: self.occurrence.start,
            length: self.occurrence.length,
            distance: self.occurrence.distance,
            matched_substring: &self.matched,
            record: self.record.as_deref(),
        }
    }
}

/// One engine, restarted at every FASTA record.
struct Runner<'a> {
    pattern: &'a Pattern,
    id: usize,
    alphabet: &'a Alphabet,
    engine: Engine,
    record: Option<Arc<str>>,
}

impl<'a> Runner<'a> {
    fn new(pattern: &'a Pattern, id: usize, alphabet: &'a Alphabet) -> Self {
        Runner {
            pattern,
            id,
            alphabet,
            engine: Engine::with_id(pattern.clone(), id),
            record: None,
        }
    }

    fn feed(&mut self, event: &Event, emit: &mut impl FnMut(Hit) -> Result<()>) -> Result<()> {
        match event {
            Event::Record(header) => {
                self.finish(emit)?;
                self.engine = Engine::with_id(self.pattern.clone(), self.id);
                self.record = Some(header.clone());
            }
            Event::Symbols(symbols) => {
                for &s in symbols {
                    for o in self.engine.push(s)? {
                        emit(self.hit(o)?)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(&mut self, emit: &mut impl FnMut(Hit) -> Result<()>) -> Result<()> {
        if !self.engine.is_finalized() {
            for o in self.engine.finalize()? {
                emit(self.hit(o)?)?;
            }
        }
        Ok(())
    }

    fn hit(&self, o: Occurrence) -> Result<Hit> {
        let symbols = self
            .engine
            .recent(o.start, o.length)
            .ok_or_else(|| Error::Invariant(format!("symbols of {o:?} were discarded")))?;
        Ok(Hit {
            occurrence: o,
            record: self.record.clone(),
            matched: self.alphabet.decode_all(&symbols)?,
        })
    }

    fn history_len(&self) -> usize {
        self.engine.retained()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCount {
    pub pattern_id: usize,
    pub pattern: String,
    pub threshold: usize,
    pub occurrences: usize,
}

/// Summary of one run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub counts: Vec<PatternCount>,
    pub symbols: usize,
    pub records: usize,
    pub workers: usize,
    pub elapsed: Duration,
    /// Largest number of symbols any engine kept for printing matches.
    pub peak_history: usize,
}

impl RunReport {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|c| c.occurrences).sum()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "symbols={} records={} workers={} elapsed={:.3}s",
            self.symbols,
            self.records,
            self.workers,
            self.elapsed.as_secs_f64()
        )?;
        for c in &self.counts {
            writeln!(
                f,
                "pattern {} {} K={} occurrences={}",
                c.pattern_id, c.pattern, c.threshold, c.occurrences
            )?;
        }
        Ok(())
    }
}

fn count_input(event: &Event, symbols: &mut usize, records: &mut usize) {
    match event {
        Event::Record(_) => *records += 1,
        Event::Symbols(s) => *symbols += s.len(),
    }
}

/// Searches one pattern, writing every occurrence as soon as it is emitted.
pub fn run_search<W: Write>(
    pattern: &Pattern,
    pattern_text: &str,
    alphabet: &Alphabet,
    input: impl Read,
    writer: &mut RecordWriter<W>,
) -> Result<RunReport> {
    let started = Instant::now();
    writer.begin()?;
    let mut runner = Runner::new(pattern, 0, alphabet);
    let (mut symbols, mut records, mut occurrences, mut peak) = (0, 0, 0, 0);
    let mut emit = |h: Hit| {
        occurrences += 1;
        writer.write(&h.record())
    };
    for event in EventReader::new(input, alphabet) {
        let event = event?;
        count_input(&event, &mut symbols, &mut records);
        runner.feed(&event, &mut emit)?;
        peak = peak.max(runner.history_len());
    }
    runner.finish(&mut emit)?;
    Ok(RunReport {
        counts: vec![PatternCount {
            pattern_id: 0,
            pattern: pattern_text.to_string(),
            threshold: pattern.threshold(),
            occurrences,
        }],
        symbols,
        records,
        workers: 1,
        elapsed: started.elapsed(),
        peak_history: peak,
    })
}

/// Every hit of a pattern, in emission order.
#[derive(Debug, Clone)]
pub struct PatternHits {
    pub pattern_id: usize,
    pub hits: Vec<Hit>,
    pub peak_history: usize,
}

fn assign(set: &PatternSet, workers: usize) -> Vec<Vec<&PatternEntry>> {
    let workers = workers.clamp(1, set.len().max(1));
    let mut groups = vec![Vec::new(); workers];
    for (i, e) in set.entries().iter().enumerate() {
        groups[i % workers].push(e);
    }
    groups
}

fn run_group<'a>(
    group: &[&'a PatternEntry],
    alphabet: &'a Alphabet,
    events: impl Iterator<Item = impl Borrow<Event>>,
) -> Result<Vec<PatternHits>> {
    let mut runners: Vec<_> = group.iter().map(|e| Runner::new(&e.pattern, e.id, alphabet)).collect();
    let mut hits: Vec<Vec<Hit>> = vec![Vec::new(); runners.len()];
    let mut peaks = vec![0; runners.len()];
    for event in events {
        for (i, r) in runners.iter_mut().enumerate() {
            r.feed(event.borrow(), &mut |h| {
                hits[i].push(h);
                Ok(())
            })?;
            peaks[i] = peaks[i].max(r.history_len());
        }
    }
    for (i, r) in runners.iter_mut().enumerate() {
        r.finish(&mut |h| {
            hits[i].push(h);
            Ok(())
        })?;
    }
    Ok(group
        .iter()
        .zip(hits)
        .zip(peaks)
        .map(|((e, hits), peak_history)| PatternHits {
            pattern_id: e.id,
            hits,
            peak_history,
        })
        .collect())
}

fn join_all<T>(handles: Vec<thread::ScopedJoinHandle<'_, Result<Vec<T>>>>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut first_err = None;
    for h in handles {
        match h.join() {
            Ok(Ok(v)) => out.extend(v),
            Ok(Err(e)) => {
                first_err.get_or_insert(e);
            }
            Err(_) => {
                first_err.get_or_insert(Error::Invariant("search worker panicked".into()));
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Searches every pattern over an in-memory input. Each worker walks the
/// shared events with its own cursor.
pub fn msearch_events(set: &PatternSet, events: &[Event], workers: usize) -> Result<Vec<PatternHits>> {
    let groups = assign(set, workers);
    let mut all = thread::scope(|s| {
        let handles = groups
            .iter()
            .map(|g| s.spawn(move || run_group(g, set.alphabet(), events.iter())))
            .collect();
        join_all(handles)
    })?;
    all.sort_by_key(|h| h.pattern_id);
    Ok(all)
}

/// Searches every pattern over a stream. The reader broadcasts each parsed
/// event to all workers through bounded queues, so it blocks while the
/// slowest worker catches up.
pub fn msearch_stream(
    set: &PatternSet,
    input: impl Read,
    workers: usize,
) -> Result<(Vec<PatternHits>, usize, usize)> {
    let groups = assign(set, workers);
    let (mut symbols, mut records) = (0, 0);
    let mut all = thread::scope(|s| {
        let mut senders = Vec::new();
        let mut handles = Vec::new();
        for g in &groups {
            let (tx, rx) = sync_channel::<Arc<Event>>(16);
            senders.push(tx);
            handles.push(s.spawn(move || run_group(g, set.alphabet(), rx.into_iter())));
        }
        let mut read_err = None;
        for event in EventReader::new(input, set.alphabet()) {
            match event {
                Ok(event) => {
                    count_input(&event, &mut symbols, &mut records);
                    let event = Arc::new(event);
                    // a closed queue means the worker failed; its error surfaces on join
                    if senders.iter().any(|tx| tx.send(event.clone()).is_err()) {
                        break;
                    }
                }
                Err(e) => {
                    read_err = Some(e);
                    break;
                }
            }
        }
        drop(senders);
        let joined = join_all(handles);
        match read_err {
            Some(e) => Err(e),
            None => joined,
        }
    })?;
    all.sort_by_key(|h| h.pattern_id);
    Ok((all, symbols, records))
}

/// Input of a multi-pattern run.
pub enum MultiInput<R> {
    /// Fully read into memory and shared by all workers.
    Buffered(R),
    /// Parsed incrementally and fanned out to the workers.
    Stream(R),
}

/// Searches every pattern of `set` and writes the hits sorted by pattern id,
/// each pattern's hits in emission order. The output does not depend on the
/// number of workers.
pub fn run_msearch<R: Read, W: Write>(
    set: &PatternSet,
    input: MultiInput<R>,
    workers: usize,
    writer: &mut RecordWriter<W>,
) -> Result<RunReport> {
    let started = Instant::now();
    let (results, symbols, records) = match input {
        MultiInput::Buffered(r) => {
            let events = crate::fasta::read_events(r, set.alphabet())?;
            let (mut symbols, mut records) = (0, 0);
            events.iter().for_each(|e| count_input(e, &mut symbols, &mut records));
            (msearch_events(set, &events, workers)?, symbols, records)
        }
        MultiInput::Stream(r) => msearch_stream(set, r, workers)?,
    };
    writer.begin()?;
    for p in &results {
        for h in &p.hits {
            writer.write(&h.record())?;
        }
    }
    let counts = set
        .entries()
        .iter()
        .map(|e| PatternCount {
            pattern_id: e.id,
            pattern: e.text.clone(),
            threshold: e.pattern.threshold(),
            occurrences: results
                .iter()
                .find(|r| r.pattern_id == e.id)
                .map_or(0, |r| r.hits.len()),
        })
        .collect();
    Ok(RunReport {
        counts,
        symbols,
        records,
        workers: assign(set, workers).len(),
        elapsed: started.elapsed(),
        peak_history: results.iter().map(|r| r.peak_history).max().unwrap_or(0),
    })
}

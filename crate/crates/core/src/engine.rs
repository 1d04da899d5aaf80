//! The streaming filter.
//!
//! Candidates are evaluated one start position at a time, as soon as `l_p + K`
//! symbols from that start are buffered. Lengths are visited in ascending
//! order. At most one candidate per priority level (its edit distance) is
//! tracked; the tracked row with the smallest distance is the champion.
//!
//! Per start position `i`, for every candidate `(i, l, k)` with `k <= K`:
//!
//! * nothing tracked: track it at level `k`;
//! * overlaps the champion and `k` is smaller: track it at level `k`, it
//!   becomes the champion;
//! * overlaps the champion, same `k`: it replaces the champion only if it
//!   completes first, i.e. ends earlier, or ends at the same symbol and is
//!   shorter;
//! * otherwise it is discarded.
//!
//! After the candidates of a start are handled, the champion's validation
//! counter is compared to its length. On equality the table is flushed;
//! otherwise every tracked counter is incremented. A new row starts at 1.
//!
//! The flush emits the champion, then walks the lower priorities in order and
//! emits row `k` when `r(k) - l(k*) > l(k)`, `k*` being the last emitted row.

use std::collections::VecDeque;
use std::fmt;

use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::levdist::{WindowDistances, WindowScratch};
use crate::types::{Candidate, Occurrence, Pattern};

/// One tracked row of the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemRow {
    pub pos: usize,
    pub len: usize,
    pub counter: usize,
}

/// `K + 1` rows, one per priority level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemTable {
    rows: Vec<Option<MemRow>>,
}

impl MemTable {
    pub fn new(threshold: usize) -> Self {
        MemTable {
            rows: vec![None; threshold + 1],
        }
    }

    /// Builds a table from `(priority, row)` pairs.
    pub fn from_rows(threshold: usize, rows: impl IntoIterator<Item = (usize, MemRow)>) -> Self {
        let mut t = Self::new(threshold);
        for (k, row) in rows {
            t.rows[k] = Some(row);
        }
        t
    }

    pub fn threshold(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, k: usize) -> Option<MemRow> {
        self.rows.get(k).copied().flatten()
    }

    pub fn tracked(&self) -> impl Iterator<Item = (usize, MemRow)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.map(|r| (k, r)))
    }

    pub fn is_idle(&self) -> bool {
        self.rows.iter().all(Option::is_none)
    }

    /// Smallest tracked priority.
    pub fn champion(&self) -> Option<usize> {
        self.rows.iter().position(Option::is_some)
    }

    fn set(&mut self, k: usize, pos: usize, len: usize) {
        self.rows[k] = Some(MemRow {
            pos,
            len,
            counter: 1,
        });
    }

    fn tick(&mut self) {
        for row in self.rows.iter_mut().flatten() {
            row.counter += 1;
        }
    }

    fn reset(&mut self) {
        self.rows.iter_mut().for_each(|r| *r = None);
    }

    /// Validation cascade starting at priority `champion`. Pure: the table is
    /// left untouched.
    pub fn validate(&self, champion: usize) -> Vec<Candidate> {
        let Some(top) = self.row(champion) else {
            return Vec::new();
        };
        let mut out = vec![Candidate {
            start: top.pos,
            length: top.len,
            distance: champion,
        }];
        let mut last_len = top.len;
        for k in champion + 1..self.rows.len() {
            let Some(row) = self.row(k) else { continue };
            if row.counter.checked_sub(last_len).is_some_and(|gap| gap > row.len) {
                out.push(Candidate {
                    start: row.pos,
                    length: row.len,
                    distance: k,
                });
                last_len = row.len;
            }
        }
        out
    }

    fn check_invariants(&self, position: usize) -> Result<()> {
        let mut prev: Option<usize> = None;
        for (_, row) in self.tracked() {
            if row.counter > position + 1 - row.pos {
                return Err(Error::Invariant(format!(
                    "counter {} exceeds elapsed positions at {position}",
                    row.counter
                )));
            }
            if prev.is_some_and(|c| row.counter < c) {
                return Err(Error::Invariant("lower-priority counter fell behind".into()));
            }
            prev = Some(row.counter);
        }
        Ok(())
    }
}

impl fmt::Display for MemTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.rows.iter().enumerate() {
            match row {
                Some(r) => writeln!(f, "{k}: i={} l={} r={}", r.pos, r.len, r.counter)?,
                None => writeln!(f, "{k}: -")?,
            }
        }
        Ok(())
    }
}

/// Doubled ring buffer: every window of up to `cap` symbols is contiguous.
#[derive(Debug, Clone)]
struct Window {
    buf: Vec<Symbol>,
    cap: usize,
    head: usize,
    len: usize,
}

impl Window {
    fn new(cap: usize) -> Self {
        Window {
            buf: vec![Symbol(0); 2 * cap],
            cap,
            head: 0,
            len: 0,
        }
    }

    fn push(&mut self, s: Symbol) {
        debug_assert!(self.len < self.cap);
        let at = (self.head + self.len) % self.cap;
        self.buf[at] = s;
        self.buf[at + self.cap] = s;
        self.len += 1;
    }

    fn pop_front(&mut self) {
        self.head = (self.head + 1) % self.cap;
        self.len -= 1;
    }

    fn as_slice(&self) -> &[Symbol] {
        &self.buf[self.head..self.head + self.len]
    }
}

/// Streaming state for one pattern.
#[derive(Debug, Clone)]
pub struct Engine {
    pattern: Pattern,
    pattern_id: usize,
    window: Window,
    mem: MemTable,
    next_start: usize,
    finalized: bool,
    last_flush: Option<MemTable>,
    last_champion_end: Option<usize>,
    history: VecDeque<Symbol>,
    history_base: usize,
    scratch: WindowScratch,
    distances: WindowDistances,
}

impl Engine {
    pub fn new(pattern: Pattern) -> Self {
        Self::with_id(pattern, 0)
    }

    pub fn with_id(pattern: Pattern, pattern_id: usize) -> Self {
        let cap = pattern.max_len();
        let k = pattern.threshold();
        let distances = crate::levdist::window_distances(&pattern, pattern.symbols(), 0)
            .expect("pattern is never empty");
        Engine {
            window: Window::new(cap),
            mem: MemTable::new(k),
            pattern,
            pattern_id,
            next_start: 0,
            finalized: false,
            last_flush: None,
            last_champion_end: None,
            history: VecDeque::new(),
            history_base: 0,
            scratch: WindowScratch::new(),
            distances,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn pattern_id(&self) -> usize {
        self.pattern_id
    }

    /// Start position the next engine step will evaluate.
    pub fn next_start(&self) -> usize {
        self.next_start
    }

    /// Total symbols pushed so far.
    pub fn position(&self) -> usize {
        self.next_start + self.window.len
    }

    pub fn window_capacity(&self) -> usize {
        self.window.cap
    }

    pub fn buffered(&self) -> usize {
        self.window.len
    }

    pub fn mem(&self) -> &MemTable {
        &self.mem
    }

    /// Priority of the current champion; `K` when idle.
    pub fn idx(&self) -> usize {
        self.mem.champion().unwrap_or(self.pattern.threshold())
    }

    pub fn is_tracking(&self) -> bool {
        !self.mem.is_idle()
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Table contents as they were just before the most recent flush.
    pub fn last_flush(&self) -> Option<&MemTable> {
        self.last_flush.as_ref()
    }

    /// Appends one symbol; runs an engine step once a full window is buffered.
    pub fn push(&mut self, symbol: Symbol) -> Result<Vec<Occurrence>> {
        if self.finalized {
            return Err(Error::Finalized);
        }
        if !self.pattern.admits(symbol) {
            return Err(Error::UnknownCode(symbol.0));
        }
        self.trim_history();
        self.history.push_back(symbol);
        self.window.push(symbol);
        let mut out = Vec::new();
        if self.window.len == self.window.cap {
            self.step(&mut out)?;
            self.window.pop_front();
            self.next_start += 1;
        }
        Ok(out)
    }

    /// Pushes a slice, collecting every emitted occurrence.
    pub fn push_all(&mut self, symbols: &[Symbol]) -> Result<Vec<Occurrence>> {
        let mut out = Vec::new();
        for &s in symbols {
            out.extend(self.push(s)?);
        }
        Ok(out)
    }

    /// Evaluates the remaining start positions against truncated windows, then
    /// flushes whatever is still tracked. The engine is inert afterwards.
    pub fn finalize(&mut self) -> Result<Vec<Occurrence>> {
        if self.finalized {
            return Err(Error::Finalized);
        }
        self.finalized = true;
        let mut out = Vec::new();
        while self.window.len > 0 {
            self.step(&mut out)?;
            self.window.pop_front();
            self.next_start += 1;
        }
        if let Some(champion) = self.mem.champion() {
            self.flush(champion, &mut out)?;
        }
        Ok(out)
    }

    fn step(&mut self, out: &mut Vec<Occurrence>) -> Result<()> {
        let i = self.next_start;
        self.scratch
            .fill(&self.pattern, self.window.as_slice(), i, &mut self.distances)?;
        let lp = self.pattern.len();
        let k_max = self.pattern.threshold();
        for (len, k) in self.distances.present() {
            if k > k_max {
                continue;
            }
            let cand = Candidate::new(i, len, k, lp);
            match self.mem.champion() {
                None => self.mem.set(k, i, len),
                Some(idx) => {
                    let champ = self.mem.row(idx).expect("champion row");
                    let champ = Candidate::new(champ.pos, champ.len, idx, lp);
                    if !cand.overlaps(&champ) {
                        debug_assert!(false, "champion always spans the current start");
                        continue;
                    }
                    if k < idx || (k == idx && (cand.end(), cand.length) < (champ.end(), champ.length)) {
                        self.mem.set(k, i, len);
                    }
                }
            }
        }
        if let Some(idx) = self.mem.champion() {
            let champ = self.mem.row(idx).expect("champion row");
            if champ.counter == champ.len {
                self.flush(idx, out)?;
            } else {
                self.mem.tick();
                if cfg!(debug_assertions) {
                    self.mem.check_invariants(i + 1)?;
                }
            }
        }
        Ok(())
    }

    fn flush(&mut self, champion: usize, out: &mut Vec<Occurrence>) -> Result<()> {
        let emitted = self.mem.validate(champion);
        if cfg!(debug_assertions) {
            self.verify(&emitted)?;
        }
        self.last_champion_end = Some(emitted[0].end());
        out.extend(
            emitted
                .into_iter()
                .map(|c| Occurrence::from_candidate(self.pattern_id, c)),
        );
        self.last_flush = Some(self.mem.clone());
        self.mem.reset();
        Ok(())
    }

    // Symbols before the oldest tracked row and the next start are no longer
    // needed. Trimming happens on the next push, so the symbols of freshly
    // emitted occurrences stay readable until then.
    fn trim_history(&mut self) {
        let keep_from = self
            .mem
            .tracked()
            .map(|(_, r)| r.pos)
            .min()
            .unwrap_or(usize::MAX)
            .min(self.next_start);
        while self.history_base < keep_from && !self.history.is_empty() {
            self.history.pop_front();
            self.history_base += 1;
        }
    }

    /// Symbols `t[start, length]`, while they are still retained. Every
    /// occurrence returned by the last `push` or `finalize` is covered.
    pub fn recent(&self, start: usize, length: usize) -> Option<Vec<Symbol>> {
        let from = start.checked_sub(self.history_base)?;
        if from + length > self.history.len() {
            return None;
        }
        Some(self.history.range(from..from + length).copied().collect())
    }

    /// Number of symbols currently retained.
    pub fn retained(&self) -> usize {
        self.history.len()
    }

    // Re-derives each emitted distance, checks the validation condition of
    // every emitted row and that champions of successive flushes are disjoint.
    fn verify(&self, emitted: &[Candidate]) -> Result<()> {
        for c in emitted {
            let s = self
                .recent(c.start, c.length)
                .ok_or_else(|| Error::Invariant(format!("symbols of {c:?} were discarded")))?;
            let d = crate::levdist::wagner_fischer(self.pattern.symbols(), &s);
            if d != c.distance {
                return Err(Error::Invariant(format!("emitted {c:?} but distance is {d}")));
            }
        }
        for (a, b) in emitted.iter().zip(emitted.iter().skip(1)) {
            let r = self.mem.row(b.distance).map_or(0, |r| r.counter);
            if a.distance >= b.distance || r <= a.length + b.length {
                return Err(Error::Invariant(format!("{b:?} emitted after {a:?} with counter {r}")));
            }
        }
        if let (Some(end), Some(c)) = (self.last_champion_end, emitted.first()) {
            if c.start <= end {
                return Err(Error::Invariant(format!("champion {c:?} overlaps the previous one")));
            }
        }
        Ok(())
    }
}

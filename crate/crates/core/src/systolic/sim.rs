use std::io::Write;
use std::time::Duration;

use crate::alphabet::{pad_pattern, pad_stream, Symbol};
use crate::error::{Error, Result};
use crate::types::{Candidate, Occurrence, Pattern};

use super::pe::{l_comb, ProcessingElement};

/// Synthesis parameters of one core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreConfig {
    /// Number of processing elements.
    pub l_p_max: usize,
    /// Bits per symbol code.
    pub l_symb: u32,
    pub k_max: usize,
    pub t_clk: Duration,
}

impl CoreConfig {
    /// Smallest core able to run `pattern` with `l_symb`-bit codes.
    pub fn fitting(pattern: &Pattern, l_symb: u32) -> Self {
        CoreConfig {
            l_p_max: pattern.len(),
            l_symb,
            k_max: pattern.threshold(),
            t_clk: Duration::from_nanos(10),
        }
    }

    pub fn check(&self, pattern: &Pattern) -> Result<()> {
        if !(1..=16).contains(&self.l_symb) {
            return Err(Error::Domain(format!("l_symb must be 1..=16, got {}", self.l_symb)));
        }
        if pattern.len() > self.l_p_max {
            return Err(Error::Domain(format!(
                "pattern length {} exceeds l_p_max {}",
                pattern.len(),
                self.l_p_max
            )));
        }
        if pattern.threshold() > self.k_max {
            return Err(Error::Domain(format!(
                "threshold {} exceeds K_max {}",
                pattern.threshold(),
                self.k_max
            )));
        }
        Ok(())
    }

    fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s == pad_pattern(self.l_symb) || s == pad_stream(self.l_symb) {
            return Err(Error::ReservedSymbol(s.0));
        }
        if u32::from(s.0) >= 1 << self.l_symb {
            return Err(Error::UnknownCode(s.0));
        }
        Ok(())
    }
}

/// Registers of every PE at the end of one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRecord {
    /// Global clock cycle, starting at 1.
    pub cycle: u64,
    pub cnt: usize,
    pub pes: Vec<ProcessingElement>,
    /// Last-row value produced this cycle, when it is an admissible length.
    pub out: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleTrace {
    pub records: Vec<CycleRecord>,
}

impl CycleTrace {
    /// One line per cycle: `cycle`, `cnt`, one `p:sh:a:a_d` field per PE and
    /// the last-row output (`-` when none). The first line is a header.
    pub fn write_tsv(&self, mut w: impl Write) -> std::io::Result<()> {
        let n = self.records.first().map_or(0, |r| r.pes.len());
        write!(w, "cycle\tcnt")?;
        for j in 0..n {
            write!(w, "\tpe{j}")?;
        }
        writeln!(w, "\tout")?;
        for r in &self.records {
            write!(w, "{}\t{}", r.cycle, r.cnt)?;
            for pe in &r.pes {
                write!(w, "\t{pe}")?;
            }
            match r.out {
                Some(v) => writeln!(w, "\t{v}")?,
                None => writeln!(w, "\t-")?,
            }
        }
        Ok(())
    }
}

/// The distance array.
#[derive(Debug, Clone)]
struct LevCalc {
    pes: Vec<ProcessingElement>,
    next: Vec<usize>,
    vacant: Symbol,
    lp: usize,
    min_len: usize,
    max_len: usize,
}

impl LevCalc {
    fn new(pattern: &Pattern, cfg: &CoreConfig) -> Self {
        let vacant = pad_stream(cfg.l_symb);
        let unused = pad_pattern(cfg.l_symb);
        let pes = (0..cfg.l_p_max)
            .map(|j| ProcessingElement::new(pattern.symbols().get(j).copied().unwrap_or(unused), vacant))
            .collect();
        LevCalc {
            pes,
            next: vec![0; cfg.l_p_max],
            vacant,
            lp: pattern.len(),
            min_len: pattern.min_len(),
            max_len: pattern.max_len(),
        }
    }

    fn cycles_per_window(&self) -> usize {
        self.lp + self.max_len - 1
    }

    /// Runs one window; returns last-row values indexed by `length - min_len`.
    fn run(&mut self, window: &[Symbol], cycle: &mut u64, mut trace: Option<&mut CycleTrace>) -> Vec<Option<usize>> {
        let len = window.len();
        for pe in &mut self.pes {
            pe.sh_reg = self.vacant;
            pe.a_reg = 0;
            pe.a_reg_d = 0;
        }
        let mut finals = vec![None; self.max_len - self.min_len + 1];
        for cnt in 1..=self.cycles_per_window() {
            *cycle += 1;
            for j in (1..self.pes.len()).rev() {
                self.pes[j].sh_reg = self.pes[j - 1].sh_reg;
            }
            self.pes[0].sh_reg = window.get(cnt - 1).copied().unwrap_or(self.vacant);

            for j in 0..self.pes.len() {
                let prev = if j > 0 { Some(&self.pes[j - 1]) } else { None };
                self.next[j] = l_comb(j, cnt, &self.pes[j], prev);
            }
            let mut out = None;
            for (j, pe) in self.pes.iter_mut().enumerate() {
                pe.a_reg_d = pe.a_reg;
                let active = cnt > j && cnt - j <= len;
                if active {
                    pe.a_reg = self.next[j];
                }
                if active && j + 1 == self.lp {
                    let m = cnt - j;
                    if (self.min_len..=self.max_len).contains(&m) {
                        finals[m - self.min_len] = Some(pe.a_reg);
                        out = Some(pe.a_reg);
                    }
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.records.push(CycleRecord {
                    cycle: *cycle,
                    cnt,
                    pes: self.pes.clone(),
                    out,
                });
            }
        }
        finals
    }
}

#[derive(Debug, Clone, Copy)]
struct ORow {
    pos: usize,
    len: usize,
    r: usize,
}

/// Occurrence tracking, one `o_reg` row per priority.
#[derive(Debug, Clone)]
struct LevSearch {
    o_reg: Vec<Option<ORow>>,
    lp: usize,
    min_len: usize,
}

impl LevSearch {
    fn new(pattern: &Pattern) -> Self {
        LevSearch {
            o_reg: vec![None; pattern.threshold() + 1],
            lp: pattern.len(),
            min_len: pattern.min_len(),
        }
    }

    fn idx(&self) -> Option<usize> {
        self.o_reg.iter().position(Option::is_some)
    }

    /// Consumes one window's distances; returns the number of cycles spent.
    fn step(&mut self, start: usize, finals: &[Option<usize>], out: &mut Vec<Candidate>) -> usize {
        let k_max = self.o_reg.len() - 1;
        for (off, d) in finals.iter().enumerate() {
            let Some(k) = *d else { continue };
            if k > k_max {
                continue;
            }
            let len = self.min_len + off;
            match self.idx() {
                None => self.o_reg[k] = Some(ORow { pos: start, len, r: 1 }),
                Some(idx) => {
                    let c = self.o_reg[idx].unwrap();
                    let (end, c_end) = (start + len, c.pos + c.len);
                    let overlap = start < c_end && c.pos < end;
                    if overlap && (k < idx || (k == idx && (end, len) < (c_end, c.len))) {
                        self.o_reg[k] = Some(ORow { pos: start, len, r: 1 });
                    }
                }
            }
        }
        if let Some(idx) = self.idx() {
            let c = self.o_reg[idx].unwrap();
            if c.r == c.len {
                self.flush(idx, out);
                return 2 * k_max + 1;
            }
            for row in self.o_reg.iter_mut().flatten() {
                row.r += 1;
            }
        }
        k_max + 1
    }

    fn flush(&mut self, idx: usize, out: &mut Vec<Candidate>) {
        let top = self.o_reg[idx].unwrap();
        out.push(Candidate::new(top.pos, top.len, idx, self.lp));
        let mut last = top.len;
        for k in idx + 1..self.o_reg.len() {
            if let Some(row) = self.o_reg[k] {
                if row.r > last + row.len {
                    out.push(Candidate::new(row.pos, row.len, k, self.lp));
                    last = row.len;
                }
            }
        }
        self.o_reg.iter_mut().for_each(|r| *r = None);
    }
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub occurrences: Vec<Occurrence>,
    pub total_cycles: u64,
    pub windows: usize,
    pub cycles_per_window: usize,
    pub trace: Option<CycleTrace>,
}

impl SimReport {
    /// Cycle count converted to time at the configured clock.
    pub fn elapsed(&self, t_clk: Duration) -> Duration {
        Duration::from_nanos((t_clk.as_nanos() * u128::from(self.total_cycles)) as u64)
    }
}

/// Runs the core over a whole stream. One window is evaluated per start
/// position; windows near the end are truncated. The search unit works on
/// window `i` while the array computes window `i + 1`, so only the last
/// window's search latency adds to the array cycles. The first
/// `trace_windows` windows are recorded cycle by cycle.
pub fn simulate_core(pattern: &Pattern, text: &[Symbol], cfg: &CoreConfig, trace_windows: usize) -> Result<SimReport> {
    cfg.check(pattern)?;
    for &s in pattern.symbols() {
        cfg.check_symbol(s)?;
    }
    for &s in text {
        cfg.check_symbol(s)?;
        if !pattern.admits(s) {
            return Err(Error::UnknownCode(s.0));
        }
    }

    let mut calc = LevCalc::new(pattern, cfg);
    let mut search = LevSearch::new(pattern);
    let mut trace = (trace_windows > 0).then(CycleTrace::default);
    let mut cycle = 0u64;
    let mut found = Vec::new();
    let mut last_search = 0;

    for start in 0..text.len() {
        let end = (start + pattern.max_len()).min(text.len());
        let tr = if start < trace_windows { trace.as_mut() } else { None };
        let finals = calc.run(&text[start..end], &mut cycle, tr);
        last_search = search.step(start, &finals, &mut found);
    }
    if let Some(idx) = search.idx() {
        search.flush(idx, &mut found);
        last_search = 2 * pattern.threshold() + 1;
    }

    Ok(SimReport {
        occurrences: found.into_iter().map(|c| Occurrence::from_candidate(0, c)).collect(),
        total_cycles: cycle + last_search as u64,
        windows: text.len(),
        cycles_per_window: calc.cycles_per_window(),
        trace,
    })
}

/// Packs an occurrence into the 24-bit result word of the on-board RAM:
/// 16-bit index, 3-bit threshold, 5-bit length. `None` when a field does not
/// fit.
pub fn ram_word(o: &Occurrence) -> Option<u32> {
    if o.start >= 1 << 16 || o.distance >= 1 << 3 || o.length >= 1 << 5 {
        return None;
    }
    Some(((o.start as u32) << 8) | ((o.distance as u32) << 5) | o.length as u32)
}

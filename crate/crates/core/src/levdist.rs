//! Levenshtein distances: the classic two-vector recurrence, the multi-length
//! window (every admissible length read off one matrix) and the anti-diagonal
//! wave-front evaluation order used by the systolic array.
//!
//! All costs are unit costs: insertion, deletion and substitution each cost 1.

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::types::Pattern;

/// Edit distance between `a` and `b`, keeping a single column of the matrix.
pub fn wagner_fischer(a: &[Symbol], b: &[Symbol]) -> usize {
    let mut col: Vec<usize> = (0..=a.len()).collect();
    for (m, &sb) in b.iter().enumerate() {
        let mut diag = col[0];
        col[0] = m + 1;
        for n in 1..=a.len() {
            let up = col[n];
            col[n] = (up + 1)
                .min(col[n - 1] + 1)
                .min(diag + usize::from(a[n - 1] != sb));
            diag = up;
        }
    }
    col[a.len()]
}

/// [`wagner_fischer`] with both inputs checked against `alphabet`.
pub fn checked_distance(alphabet: &Alphabet, a: &[Symbol], b: &[Symbol]) -> Result<usize> {
    if let Some(s) = a.iter().chain(b).find(|s| !alphabet.contains(**s)) {
        return Err(Error::UnknownCode(s.0));
    }
    Ok(wagner_fischer(a, b))
}

/// A fully materialized distance matrix. Only the baselines and tests keep the
/// whole matrix; the streaming paths never do.
#[derive(Debug, Clone)]
pub struct LevMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<usize>,
}

impl LevMatrix {
    pub fn compute(a: &[Symbol], b: &[Symbol]) -> Self {
        let rows = a.len() + 1;
        let cols = b.len() + 1;
        let mut cells = vec![0; rows * cols];
        for n in 0..rows {
            for m in 0..cols {
                cells[n * cols + m] = if m == 0 {
                    n
                } else if n == 0 {
                    m
                } else {
                    let up = cells[(n - 1) * cols + m] + 1;
                    let left = cells[n * cols + m - 1] + 1;
                    let diag = cells[(n - 1) * cols + m - 1] + usize::from(a[n - 1] != b[m - 1]);
                    up.min(left).min(diag)
                };
            }
        }
        LevMatrix { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, n: usize, m: usize) -> usize {
        self.cells[n * self.cols + m]
    }

    pub fn distance(&self) -> usize {
        self.cells[self.cells.len() - 1]
    }
}

/// Distances between a pattern and every prefix `t[start, l]` of one window,
/// for `l` in `l_p - K ..= l_p + K`.
///
/// Lengths that run past the end of the window are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowDistances {
    start: usize,
    min_len: usize,
    values: Vec<Option<usize>>,
}

impl WindowDistances {
    fn empty(pattern: &Pattern, start: usize) -> Self {
        WindowDistances {
            start,
            min_len: pattern.min_len(),
            values: vec![None; pattern.span()],
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Entry `j` is the distance for length `l_p - K + j`.
    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn get(&self, length: usize) -> Option<usize> {
        length
            .checked_sub(self.min_len)
            .and_then(|j| self.values.get(j).copied().flatten())
    }

    /// `(length, distance)` for every present entry, lengths ascending.
    pub fn present(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(j, v)| v.map(|d| (self.min_len + j, d)))
    }

    pub fn effective_lengths(&self) -> Vec<usize> {
        self.present().map(|(l, _)| l).collect()
    }
}

/// Reusable column buffer for [`window_distances`] on hot paths.
#[derive(Debug, Default, Clone)]
pub struct WindowScratch {
    col: Vec<usize>,
}

impl WindowScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fills `out` for the window starting at `start`. `window` may be longer
    /// than `l_p + K`; extra symbols are ignored.
    pub fn fill(
        &mut self,
        pattern: &Pattern,
        window: &[Symbol],
        start: usize,
        out: &mut WindowDistances,
    ) -> Result<()> {
        if window.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let p = pattern.symbols();
        let (min_len, max_len) = (pattern.min_len(), pattern.max_len());
        let window = &window[..window.len().min(max_len)];

        out.start = start;
        out.min_len = min_len;
        out.values.clear();
        out.values.resize(pattern.span(), None);

        self.col.clear();
        self.col.extend(0..=p.len());
        let col = &mut self.col;
        for (m0, &s) in window.iter().enumerate() {
            let m = m0 + 1;
            let mut diag = col[0];
            col[0] = m;
            for n in 1..=p.len() {
                let up = col[n];
                col[n] = (up + 1)
                    .min(col[n - 1] + 1)
                    .min(diag + usize::from(p[n - 1] != s));
                diag = up;
            }
            if m >= min_len {
                out.values[m - min_len] = Some(col[p.len()]);
            }
        }
        Ok(())
    }
}

/// Row-wise evaluation: one matrix of `(l_p + 1) x (len + 1)` cells, last-row
/// cells read at every admissible length.
pub fn window_distances(pattern: &Pattern, window: &[Symbol], start: usize) -> Result<WindowDistances> {
    let mut out = WindowDistances::empty(pattern, start);
    WindowScratch::new().fill(pattern, window, start, &mut out)?;
    Ok(out)
}

/// Result of a wave-front evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wavefront {
    pub distances: WindowDistances,
    /// Number of anti-diagonal steps executed.
    pub steps: usize,
}

/// Anti-diagonal evaluation. Step `j` produces every cell with `n + m = j + 1`
/// from the two preceding anti-diagonals; only those two are retained.
///
/// A full window (`l_p + K` symbols) takes `2 l_p + K - 1` steps. A window
/// truncated by the end of the stream takes `l_p + len - 1`.
pub fn wavefront_distances(pattern: &Pattern, window: &[Symbol], start: usize) -> Result<Wavefront> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let p = pattern.symbols();
    let lp = p.len();
    let window = &window[..window.len().min(pattern.max_len())];
    let len = window.len();
    let min_len = pattern.min_len();

    let mut out = WindowDistances::empty(pattern, start);
    // indexed by row n; anti-diagonals d - 2, d - 1 and d
    let mut older = vec![0usize; lp + 1];
    let mut prev = vec![0usize; lp + 1];
    let mut cur = vec![0usize; lp + 1];
    prev[0] = 1.min(len);
    if lp >= 1 {
        prev[1] = 1;
    }
    older[0] = 0;

    let mut steps = 0;
    for d in 2..=lp + len {
        let lo = d.saturating_sub(len);
        let hi = d.min(lp);
        for n in lo..=hi {
            let m = d - n;
            cur[n] = if n == 0 {
                m
            } else if m == 0 {
                n
            } else {
                let up = prev[n - 1] + 1;
                let left = prev[n] + 1;
                let diag = older[n - 1] + usize::from(p[n - 1] != window[m - 1]);
                up.min(left).min(diag)
            };
        }
        if hi == lp {
            let m = d - lp;
            if m >= min_len {
                out.values[m - min_len] = Some(cur[lp]);
            }
        }
        std::mem::swap(&mut older, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
        steps += 1;
    }
    Ok(Wavefront {
        distances: out,
        steps,
    })
}

//! Reference searches: two naive baselines that report every hit, and a
//! deliberately simple offline re-implementation of the streaming filter.

use serde::Serialize;

use crate::alphabet::Symbol;
use crate::levdist::wagner_fischer;
use crate::types::{Candidate, Occurrence, Pattern};

/// A substring within the threshold, reported by [`fully_naive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NaiveHit {
    pub start: usize,
    pub length: usize,
    pub distance: usize,
}

/// An end position reported by [`less_naive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EndPositionHit {
    pub end: usize,
    pub distance: usize,
}

/// Every substring `t[start, length]` with distance at most `K`, sorted by
/// `(start, length)`.
///
/// Lengths are swept upward from each start with one DP column. Once every
/// cell of the column exceeds `K` no longer substring can come back under the
/// threshold, so the sweep stops there. With `prune` the sweep is further
/// limited to `l_p + K` symbols; both settings return the same hits.
pub fn fully_naive(pattern: &Pattern, text: &[Symbol], prune: bool) -> Vec<NaiveHit> {
    let p = pattern.symbols();
    let k = pattern.threshold();
    let mut hits = Vec::new();
    let mut col = vec![0usize; p.len() + 1];
    for start in 0..text.len() {
        let limit = if prune {
            pattern.max_len().min(text.len() - start)
        } else {
            text.len() - start
        };
        col.iter_mut().enumerate().for_each(|(n, c)| *c = n);
        for m in 1..=limit {
            let s = text[start + m - 1];
            let mut diag = col[0];
            col[0] = m;
            for n in 1..=p.len() {
                let up = col[n];
                col[n] = (up + 1)
                    .min(col[n - 1] + 1)
                    .min(diag + usize::from(p[n - 1] != s));
                diag = up;
            }
            if col[p.len()] <= k {
                hits.push(NaiveHit {
                    start,
                    length: m,
                    distance: col[p.len()],
                });
            }
            if col.iter().all(|&c| c > k) {
                break;
            }
        }
    }
    hits
}

/// End positions whose best substring is within `K`: the DP over the whole
/// text with a zeroed top row, reading the bottom row.
pub fn less_naive(pattern: &Pattern, text: &[Symbol]) -> Vec<EndPositionHit> {
    let p = pattern.symbols();
    let k = pattern.threshold();
    let mut col: Vec<usize> = (0..=p.len()).collect();
    let mut hits = Vec::new();
    for (j, &s) in text.iter().enumerate() {
        let mut diag = col[0];
        col[0] = 0;
        for n in 1..=p.len() {
            let up = col[n];
            col[n] = (up + 1)
                .min(col[n - 1] + 1)
                .min(diag + usize::from(p[n - 1] != s));
            diag = up;
        }
        if col[p.len()] <= k {
            hits.push(EndPositionHit {
                end: j,
                distance: col[p.len()],
            });
        }
    }
    hits
}

#[derive(Debug, Clone, Copy)]
struct Tracked {
    cand: Candidate,
    counter: usize,
}

/// Offline replay of the filter. Every candidate distance is computed from
/// scratch, then the rules are applied one start position at a time.
pub fn offline_oasm_oracle(pattern: &Pattern, text: &[Symbol]) -> Vec<Occurrence> {
    let lp = pattern.len();
    let k_max = pattern.threshold();

    let mut by_start: Vec<Vec<Candidate>> = vec![Vec::new(); text.len()];
    for (start, list) in by_start.iter_mut().enumerate() {
        for length in pattern.min_len()..=pattern.max_len() {
            if start + length > text.len() {
                break;
            }
            let d = wagner_fischer(pattern.symbols(), &text[start..start + length]);
            if d <= k_max {
                list.push(Candidate::new(start, length, d, lp));
            }
        }
    }

    let mut mem: Vec<Option<Tracked>> = vec![None; k_max + 1];
    let mut out = Vec::new();
    let champion = |mem: &[Option<Tracked>]| mem.iter().position(Option::is_some);

    for list in &by_start {
        for &c in list {
            match champion(&mem) {
                None => mem[c.distance] = Some(Tracked { cand: c, counter: 1 }),
                Some(idx) => {
                    let champ = mem[idx].unwrap().cand;
                    if !c.overlaps(&champ) {
                        continue;
                    }
                    let earlier = (c.end(), c.length) < (champ.end(), champ.length);
                    if c.distance < idx || (c.distance == idx && earlier) {
                        mem[c.distance] = Some(Tracked { cand: c, counter: 1 });
                    }
                }
            }
        }
        if let Some(idx) = champion(&mem) {
            let top = mem[idx].unwrap();
            if top.counter == top.cand.length {
                flush(&mut mem, idx, &mut out);
            } else {
                for t in mem.iter_mut().flatten() {
                    t.counter += 1;
                }
            }
        }
    }
    if let Some(idx) = champion(&mem) {
        flush(&mut mem, idx, &mut out);
    }
    out
}

fn flush(mem: &mut [Option<Tracked>], idx: usize, out: &mut Vec<Occurrence>) {
    let top = mem[idx].unwrap();
    out.push(Occurrence::from_candidate(0, top.cand));
    let mut last_len = top.cand.length;
    for t in mem[idx + 1..].iter().flatten() {
        if t.counter > last_len && t.counter - last_len > t.cand.length {
            out.push(Occurrence::from_candidate(0, t.cand));
            last_len = t.cand.length;
        }
    }
    mem.iter_mut().for_each(|t| *t = None);
}

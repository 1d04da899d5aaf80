use serde::Serialize;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// A query string with its inexactness threshold `K`.
///
/// Construction enforces `1 <= len` and `K < len`, so every admissible
/// candidate length `len - K ..= len + K` is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    symbols: Vec<Symbol>,
    threshold: usize,
    alphabet_len: usize,
}

impl Pattern {
    pub fn new(symbols: Vec<Symbol>, threshold: usize, alphabet_len: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if threshold >= symbols.len() {
            return Err(Error::Threshold {
                threshold,
                len: symbols.len(),
            });
        }
        if let Some(s) = symbols.iter().find(|s| s.0 as usize >= alphabet_len) {
            return Err(Error::UnknownCode(s.0));
        }
        Ok(Pattern {
            symbols,
            threshold,
            alphabet_len,
        })
    }

    pub fn parse(text: &str, threshold: usize, alphabet: &Alphabet) -> Result<Self> {
        Self::new(alphabet.encode_str(text)?, threshold, alphabet.len())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    pub fn admits(&self, s: Symbol) -> bool {
        (s.0 as usize) < self.alphabet_len
    }

    pub fn min_len(&self) -> usize {
        self.len() - self.threshold
    }

    pub fn max_len(&self) -> usize {
        self.len() + self.threshold
    }

    /// Number of candidate lengths per start, `2K + 1`.
    pub fn span(&self) -> usize {
        2 * self.threshold + 1
    }
}

/// A substring `t[start, length]` at edit distance `distance <= K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Candidate {
    pub start: usize,
    pub length: usize,
    pub distance: usize,
}

impl Candidate {
    /// Panics in debug builds when `distance < |length - pattern_len|`, which no
    /// edit distance can satisfy.
    pub fn new(start: usize, length: usize, distance: usize, pattern_len: usize) -> Self {
        debug_assert!(
            distance >= length.abs_diff(pattern_len),
            "distance {distance} below length bound for length {length} vs {pattern_len}"
        );
        Candidate {
            start,
            length,
            distance,
        }
    }

    /// Index of the last symbol.
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }

    pub fn overlaps(&self, other: &Candidate) -> bool {
        self.start <= other.end() && other.start <= self.end()
    }
}

/// A validated candidate, tagged with the pattern that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Occurrence {
    pub pattern_id: usize,
    pub start: usize,
    pub length: usize,
    pub distance: usize,
}

impl Occurrence {
    pub fn from_candidate(pattern_id: usize, c: Candidate) -> Self {
        Occurrence {
            pattern_id,
            start: c.start,
            length: c.length,
            distance: c.distance,
        }
    }

    pub fn candidate(&self) -> Candidate {
        Candidate {
            start: self.start,
            length: self.length,
            distance: self.distance,
        }
    }

    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }

    /// `(start, length, distance)`, handy in assertions.
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.start, self.length, self.distance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Alphabet {
        Alphabet::new("ABCD".chars()).unwrap()
    }

    #[test]
    fn pattern_threshold_must_stay_below_length() {
        let a = abcd();
        assert!(Pattern::parse("ABCD", 3, &a).is_ok());
        assert!(matches!(
            Pattern::parse("ABCD", 4, &a),
            Err(Error::Threshold { threshold: 4, len: 4 })
        ));
        assert!(matches!(Pattern::parse("", 0, &a), Err(Error::EmptyPattern)));
        assert!(matches!(
            Pattern::new(vec![Symbol(0), Symbol(6)], 0, a.len()),
            Err(Error::UnknownCode(6))
        ));
    }

    #[test]
    fn candidate_lengths() {
        let p = Pattern::parse("ACBDA", 2, &abcd()).unwrap();
        assert_eq!((p.min_len(), p.max_len(), p.span()), (3, 7, 5));
    }

    #[test]
    fn overlap() {
        let a = Candidate::new(3, 3, 2, 5);
        let b = Candidate::new(5, 6, 1, 5);
        let c = Candidate::new(7, 4, 1, 5);
        assert!(a.overlaps(&b) && b.overlaps(&a));
        assert!(!a.overlaps(&c));
        assert_eq!(c.end(), 10);
    }

    #[test]
    #[should_panic]
    #[cfg(debug_assertions)]
    fn candidate_rejects_impossible_distance() {
        Candidate::new(0, 7, 1, 5);
    }
}

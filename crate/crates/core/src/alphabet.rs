//! Finite alphabets and symbol coding.
//!
//! Tokens are single Unicode scalar values. Codes are assigned in declaration
//! order starting at zero. With a code width of `w` bits, the two largest codes
//! `2^w - 2` and `2^w - 1` are the pad symbols `$1` and `$2` used by the
//! systolic model; they never encode a declared token.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// A symbol code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u16);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How input characters are folded before lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fold {
    /// Characters must match a token exactly.
    Exact,
    /// ASCII case is ignored and `U` is read as `T` (RNA in a DNA alphabet).
    Nucleotide,
}

#[derive(Debug, Clone)]
pub struct Alphabet {
    tokens: Vec<char>,
    codes: HashMap<char, Symbol>,
    code_width_bits: u32,
    fold: Fold,
}

pub const MAX_CODE_WIDTH: u32 = 16;

impl Alphabet {
    /// Builds an alphabet with the smallest code width that still leaves room
    /// for the two pad symbols.
    pub fn new(tokens: impl IntoIterator<Item = char>) -> Result<Self> {
        let tokens: Vec<char> = tokens.into_iter().collect();
        let mut width = 1;
        while (1usize << width) < tokens.len() + 2 {
            width += 1;
        }
        Self::with_width(tokens, width)
    }

    pub fn with_width(tokens: impl IntoIterator<Item = char>, code_width_bits: u32) -> Result<Self> {
        if !(1..=MAX_CODE_WIDTH).contains(&code_width_bits) {
            return Err(Error::Alphabet(format!(
                "code width must be between 1 and {MAX_CODE_WIDTH} bits, got {code_width_bits}"
            )));
        }
        let tokens: Vec<char> = tokens.into_iter().collect();
        if tokens.is_empty() {
            return Err(Error::Alphabet("no tokens declared".into()));
        }
        let capacity = 1usize << code_width_bits;
        if tokens.len() > capacity {
            return Err(Error::Alphabet(format!(
                "{} tokens do not fit in {code_width_bits}-bit codes",
                tokens.len()
            )));
        }
        let mut codes = HashMap::with_capacity(tokens.len());
        for (i, &c) in tokens.iter().enumerate() {
            if codes.insert(c, Symbol(i as u16)).is_some() {
                return Err(Error::Alphabet(format!("duplicate token {c:?}")));
            }
        }
        Ok(Alphabet {
            tokens,
            codes,
            code_width_bits,
            fold: Fold::Exact,
        })
    }

    /// `A C G T N`, case-insensitive, with `U` folded onto `T`.
    pub fn nucleotide() -> Self {
        let mut a = Self::new("ACGTN".chars()).expect("static alphabet");
        a.fold = Fold::Nucleotide;
        a
    }

    /// Parses an alphabet declaration: one token per line, blank lines ignored.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut tokens = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("reading alphabet", e))?;
            let token = line.trim_end_matches(['\r', '\n']);
            if token.trim().is_empty() {
                continue;
            }
            if token == "$1" || token == "$2" {
                return Err(Error::ReservedToken(token.to_string()));
            }
            let mut chars = token.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => tokens.push(c),
                _ => {
                    return Err(Error::Parse {
                        line: n + 1,
                        message: format!("token {token:?} must be a single character"),
                    })
                }
            }
        }
        Self::new(tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn code_width_bits(&self) -> u32 {
        self.code_width_bits
    }

    pub fn fold(&self) -> Fold {
        self.fold
    }

    pub fn tokens(&self) -> &[char] {
        &self.tokens
    }

    /// True when the two pad codes do not collide with declared tokens.
    pub fn supports_pads(&self) -> bool {
        self.tokens.len() + 2 <= 1usize << self.code_width_bits
    }

    pub fn pad_pattern(&self) -> Symbol {
        pad_pattern(self.code_width_bits)
    }

    pub fn pad_stream(&self) -> Symbol {
        pad_stream(self.code_width_bits)
    }

    fn folded(&self, c: char) -> char {
        match self.fold {
            Fold::Exact => c,
            Fold::Nucleotide => match c.to_ascii_uppercase() {
                'U' => 'T',
                u => u,
            },
        }
    }

    pub fn encode(&self, c: char) -> Option<Symbol> {
        self.codes.get(&self.folded(c)).copied()
    }

    pub fn decode(&self, s: Symbol) -> Option<char> {
        self.tokens.get(s.0 as usize).copied()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        (s.0 as usize) < self.tokens.len()
    }

    /// Encodes every character of `text`, failing on the first unknown one.
    pub fn encode_str(&self, text: &str) -> Result<Vec<Symbol>> {
        text.chars()
            .map(|c| self.encode(c).ok_or(Error::UnknownToken(c)))
            .collect()
    }

    pub fn decode_all(&self, symbols: &[Symbol]) -> Result<String> {
        symbols
            .iter()
            .map(|&s| self.decode(s).ok_or(Error::UnknownCode(s.0)))
            .collect()
    }
}

/// `$1`: fills pattern registers beyond the pattern length.
pub fn pad_pattern(code_width_bits: u32) -> Symbol {
    Symbol(((1u32 << code_width_bits) - 2) as u16)
}

/// `$2`: fills vacant shift-register slots.
pub fn pad_stream(code_width_bits: u32) -> Symbol {
    Symbol(((1u32 << code_width_bits) - 1) as u16)
}

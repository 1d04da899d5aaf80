//! Streaming approximate string matching with on-the-fly suppression of
//! shadow hits, plus reference baselines and a cycle-level model of a
//! systolic hardware core.

pub mod alphabet;
pub mod baselines;
pub mod bench;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod fasta;
pub mod levdist;
pub mod output;
pub mod search;
pub mod systolic;
pub mod types;

pub use alphabet::{Alphabet, Fold, Symbol};
pub use engine::{Engine, MemRow, MemTable};
pub use error::{Error, Result};
pub use types::{Candidate, Occurrence, Pattern};

use std::fmt;

use crate::alphabet::Symbol;

/// Registers of one processing element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProcessingElement {
    /// Pattern symbol, or `$1` on PEs beyond the pattern length.
    pub p_reg: Symbol,
    /// Stream symbol currently shifted in, or `$2` when the slot is vacant.
    pub sh_reg: Symbol,
    /// Most recent anti-diagonal value.
    pub a_reg: usize,
    /// `a_reg` one cycle earlier.
    pub a_reg_d: usize,
}

impl ProcessingElement {
    pub fn new(p_reg: Symbol, vacant: Symbol) -> Self {
        ProcessingElement {
            p_reg,
            sh_reg: vacant,
            a_reg: 0,
            a_reg_d: 0,
        }
    }
}

impl fmt::Display for ProcessingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.p_reg, self.sh_reg, self.a_reg, self.a_reg_d)
    }
}

/// Combinational update of PE `j` at counter value `cnt` (1-based).
///
/// PE `j` fills the cell of matrix row `j + 1` on anti-diagonal `cnt + 1`.
/// The upper neighbour is the previous PE's result from the last cycle, the
/// left neighbour is this PE's own last result, and the upper-left one is the
/// previous PE's result two cycles back. Cells on the matrix border are
/// replaced by their closed-form values, derived from `cnt`.
pub fn l_comb(j: usize, cnt: usize, pe: &ProcessingElement, prev: Option<&ProcessingElement>) -> usize {
    let first_column = j + 1 >= cnt;
    let c_upper = match prev {
        Some(prev) if j > 0 => prev.a_reg,
        _ => cnt,
    };
    let c_left = if first_column { cnt } else { pe.a_reg };
    let c_upper_left = match prev {
        Some(prev) if j > 0 && !first_column => prev.a_reg_d,
        _ => cnt - 1,
    };
    let min = c_left.min(c_upper).min(c_upper_left);
    let phi = if c_upper_left > min {
        1
    } else {
        usize::from(pe.p_reg != pe.sh_reg)
    };
    min + phi
}

//! Closed-form delay and storage bounds of the streaming filter.

use crate::error::{Error, Result};

fn check(pattern_len: usize, k: usize) -> Result<()> {
    if k >= pattern_len {
        return Err(Error::Threshold {
            threshold: k,
            len: pattern_len,
        });
    }
    Ok(())
}

/// Worst-case number of stream symbols processed before an occurrence of
/// priority `k_min` can be emitted: `l_p (k_min + 1) + k_min (k_min - 1) / 2`.
pub fn worst_case_delay(pattern_len: usize, k_min: usize) -> Result<usize> {
    check(pattern_len, k_min)?;
    Ok(pattern_len * (k_min + 1) + k_min * k_min.saturating_sub(1) / 2)
}

/// The expression inside the asymptotic storage bound of the tracking table,
/// `l_p (K + 1) + K (K - 1) / 2 * (2K + 1)`.
///
/// Documentation and audit value only; the tracking table itself always has
/// exactly `K + 1` rows.
pub fn mem_space_bound(pattern_len: usize, k: usize) -> Result<usize> {
    check(pattern_len, k)?;
    Ok(pattern_len * (k + 1) + k * k.saturating_sub(1) / 2 * (2 * k + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delay_values() {
        assert_eq!(worst_case_delay(5, 0).unwrap(), 5);
        assert_eq!(worst_case_delay(5, 2).unwrap(), 16);
        assert_eq!(worst_case_delay(15, 3).unwrap(), 63);
        assert!(worst_case_delay(5, 5).is_err());
    }

    #[test]
    fn space_values() {
        assert_eq!(mem_space_bound(5, 0).unwrap(), 5);
        assert_eq!(mem_space_bound(5, 2).unwrap(), 20);
        assert_eq!(mem_space_bound(8, 4).unwrap(), 94);
        assert!(mem_space_bound(3, 3).is_err());
    }

    #[test]
    fn delay_strictly_increasing() {
        for lp in 1..40 {
            for k in 0..lp {
                let d = worst_case_delay(lp, k).unwrap();
                if k + 1 < lp {
                    assert!(worst_case_delay(lp, k + 1).unwrap() > d);
                }
                assert!(worst_case_delay(lp + 1, k).unwrap() > d);
            }
        }
    }
}

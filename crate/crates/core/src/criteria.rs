//! Recurrence criteria for the apwenian property on finite prefixes.
//!
//! A 0-1 sequence with `c_0 = 1` is apwenian iff `c_n ≡ c_{2n+1} + c_{2n+2}`
//! for all `n`; a ±1 sequence is apwenian iff
//! `(d_n + d_{n+1} - d_{2n+1} - d_{2n+2}) / 2` is odd for all `n`.
//! On a prefix of length `L` both are checked for every `n` with
//! `2n + 2 < L`, and the verdict covers that range only.

use std::fmt;

use crate::error::{ensure_len, Error, Result};
use crate::sequences::{BitSeq, SignSeq};
use crate::series::TruncatedSeriesGF2;

/// Outcome of a criterion check on a prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    checked_up_to: usize,
    violation: Option<usize>,
}

impl CriterionReport {
    fn new(checked_up_to: usize, violation: Option<usize>) -> Self {
        debug_assert!(violation.is_none_or(|v| v <= checked_up_to));
        CriterionReport {
            checked_up_to,
            violation,
        }
    }

    /// Largest index `n` examined.
    pub fn checked_up_to(&self) -> usize {
        self.checked_up_to
    }

    /// First failing index, if any.
    pub fn violation(&self) -> Option<usize> {
        self.violation
    }

    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    /// Whether every index `n <= bound` passed.
    pub fn passed_through(&self, bound: usize) -> bool {
        assert!(bound <= self.checked_up_to);
        self.violation.is_none_or(|v| v > bound)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violation {
            None => write!(f, "PASS up-to n={}", self.checked_up_to),
            Some(k) => write!(f, "FAIL at n={k}"),
        }
    }
}

fn checked_range(len: usize) -> Result<usize> {
    ensure_len(len, 3)?;
    Ok((len - 3) / 2)
}

/// ±1 criterion on a prefix.
pub fn check_pm(d: &SignSeq) -> Result<CriterionReport> {
    let upto = checked_range(d.len())?;
    let violation = (0..=upto).find(|&n| {
        let num = d.get(n) as i32 + d.get(n + 1) as i32
            - d.get(2 * n + 1) as i32
            - d.get(2 * n + 2) as i32;
        debug_assert!(num % 2 == 0);
        (num / 2).rem_euclid(2) != 1
    });
    Ok(CriterionReport::new(upto, violation))
}

/// 0-1 criterion on a prefix; requires `c_0 = 1`.
pub fn check_01(c: &BitSeq) -> Result<CriterionReport> {
    let upto = checked_range(c.len())?;
    if c.get(0) != 1 {
        return Err(Error::LeadingZero);
    }
    let violation = (0..=upto).find(|&n| c.get(n) != c.get(2 * n + 1) ^ c.get(2 * n + 2));
    Ok(CriterionReport::new(upto, violation))
}

/// Checks `1 + x² f(x²) ≡ x f^odd(x) + f^even(x)` over GF(2) modulo
/// `x^terms`, where `f` is the generating series of `c`.
pub fn functional_congruence_check(c: &BitSeq, terms: usize) -> Result<bool> {
    ensure_len(c.len(), terms)?;
    let f = TruncatedSeriesGF2::from_prefix(c, terms);
    let lhs = TruncatedSeriesGF2::one(terms).add(&f.compose_square().shift_up(2));
    let rhs = f.odd_part().shift_up(1).add(&f.even_part());
    Ok(lhs == rhs)
}

/// The unique 0-1 sequence satisfying the criterion with prescribed odd-indexed
/// values `c_{2n+1} = odd[n]`; returns `len` symbols.
pub fn extend_apwenian(odd: &BitSeq, len: usize) -> Result<BitSeq> {
    ensure_len(odd.len(), len / 2)?;
    let mut c = BitSeq::zeros(len);
    if len > 0 {
        c.set(0, 1);
    }
    for i in 1..len {
        let n = (i - 1) / 2;
        let bit = if i % 2 == 1 {
            odd.get(n)
        } else {
            c.get(n) ^ c.get(i - 1)
        };
        c.set(i, bit);
    }
    Ok(c)
}

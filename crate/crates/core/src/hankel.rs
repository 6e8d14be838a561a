//! Hankel determinants `H_n(a) = det(a_{i+j})_{0 <= i,j < n}`.
//!
//! Three routes are provided:
//! - [`hankel_gf2`]: bit-packed elimination over GF(2), the fast path;
//! - [`hankel_exact`]: exact big-integer determinant, used as the oracle;
//! - [`pm_profile`]: the parities of `H_n(d) / 2^{n-1}` for a ±1 sequence,
//!   through the projection `c_i = (d_i - d_{i+2}) / 2 mod 2`, for which
//!   `H_n(d) / 2^{n-1} ≡ H_{n-1}(c) (mod 2)`.
//!
//! `H_n` reads the first `2n - 1` terms only.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{ensure_len, Error, Result};
use crate::gf2::BitMatrix;
use crate::sequences::{conjugate, project_to_01, BitSeq, SignSeq};

/// Integer-valued sequence prefix.
pub trait Terms {
    fn term_count(&self) -> usize;
    fn term(&self, i: usize) -> BigInt;
}

impl Terms for BitSeq {
    fn term_count(&self) -> usize {
        self.len()
    }
    fn term(&self, i: usize) -> BigInt {
        BigInt::from(self.get(i))
    }
}

impl Terms for SignSeq {
    fn term_count(&self) -> usize {
        self.len()
    }
    fn term(&self, i: usize) -> BigInt {
        BigInt::from(self.get(i))
    }
}

impl Terms for [i64] {
    fn term_count(&self) -> usize {
        self.len()
    }
    fn term(&self, i: usize) -> BigInt {
        BigInt::from(self[i])
    }
}

impl Terms for [BigInt] {
    fn term_count(&self) -> usize {
        self.len()
    }
    fn term(&self, i: usize) -> BigInt {
        self[i].clone()
    }
}

/// Number of terms `H_n` depends on.
pub fn terms_needed(n: usize) -> usize {
    (2 * n).saturating_sub(1)
}

/// `H_n(c) mod 2` for a 0-1 prefix.
pub fn hankel_gf2(c: &BitSeq, n: usize) -> Result<u8> {
    if n == 0 {
        return Err(Error::InvalidArgument("Hankel order must be >= 1".into()));
    }
    ensure_len(c.len(), terms_needed(n))?;
    let mut m = BitMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if c.get(i + j) == 1 {
                m.set(i, j, 1);
            }
        }
    }
    Ok(m.determinant())
}

fn hankel_matrix<S: Terms + ?Sized>(a: &S, n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| a.term(i + j)).collect())
        .collect()
}

/// Exact `H_n(a)`.
///
/// Orders up to 4 use cofactor expansion; larger orders use fraction-free
/// elimination. Both are exposed in [`det`] for cross-checking.
pub fn hankel_exact<S: Terms + ?Sized>(a: &S, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument("Hankel order must be >= 1".into()));
    }
    ensure_len(a.term_count(), terms_needed(n))?;
    let m = hankel_matrix(a, n);
    Ok(if n <= 4 {
        det::cofactor(&m)
    } else {
        det::bareiss(m)
    })
}

pub mod det {
    //! Exact integer determinants.

    use super::*;

    /// Fraction-free (Bareiss) elimination with row pivoting.
    pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    // exact by Sylvester's identity
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Laplace expansion along the first row; exponential, meant for tiny matrices.
    pub fn cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        match n {
            0 => BigInt::one(),
            1 => m[0][0].clone(),
            2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
            _ => {
                let mut acc = BigInt::zero();
                for col in 0..n {
                    if m[0][col].is_zero() {
                        continue;
                    }
                    let minor: Vec<Vec<BigInt>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(j, _)| j != col)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    let term = &m[0][col] * cofactor(&minor);
                    if col % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
        }
    }
}

/// Parities of Hankel determinants, entry `n - 1` for order `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HankelProfile {
    bits: Vec<u8>,
}

impl HankelProfile {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        HankelProfile { bits }
    }

    pub fn nmax(&self) -> usize {
        self.bits.len()
    }

    /// Parity for order `n` (1-based).
    pub fn order(&self, n: usize) -> u8 {
        self.bits[n - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn all_ones(&self) -> bool {
        self.bits.iter().all(|&b| b == 1)
    }

    /// Smallest order whose parity is 0.
    pub fn first_zero(&self) -> Option<usize> {
        self.bits.iter().position(|&b| b == 0).map(|i| i + 1)
    }
}

impl fmt::Display for HankelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// 0-1 profile: `H_n(c) mod 2` for `n = 1..=nmax`.
pub fn profile_01(c: &BitSeq, nmax: usize) -> Result<HankelProfile> {
    ensure_len(c.len(), terms_needed(nmax))?;
    (1..=nmax)
        .map(|n| hankel_gf2(c, n))
        .collect::<Result<Vec<_>>>()
        .map(HankelProfile::from_bits)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProfilePath {
    /// GF(2) determinants of the projected 0-1 sequence.
    #[default]
    Fast,
    /// Exact determinants divided by `2^{n-1}`.
    Exact,
}

/// `(H_n(d) / 2^{n-1}) mod 2` for `n = 1..=nmax`.
///
/// Needs `2·nmax - 1` symbols, the same as `H_nmax(d)` itself.
pub fn pm_profile(d: &SignSeq, nmax: usize, path: ProfilePath) -> Result<HankelProfile> {
    if nmax == 0 {
        return Ok(HankelProfile::from_bits(vec![]));
    }
    ensure_len(d.len(), terms_needed(nmax))?;
    match path {
        ProfilePath::Fast => {
            let mut bits = vec![1u8];
            if nmax >= 2 {
                let c = project_to_01(d)?;
                for n in 2..=nmax {
                    bits.push(hankel_gf2(&c, n - 1)?);
                }
            }
            Ok(HankelProfile::from_bits(bits))
        }
        ProfilePath::Exact => (1..=nmax)
            .map(|n| pm_divided_exact(d, n).map(|q| u8::from(q.is_odd())))
            .collect::<Result<Vec<_>>>()
            .map(HankelProfile::from_bits),
    }
}

/// `H_n(d) / 2^{n-1}` exactly; fails loudly if the division is not exact.
pub fn pm_divided_exact(d: &SignSeq, n: usize) -> Result<BigInt> {
    let h = hankel_exact(d, n)?;
    let divisor = BigInt::one() << (n - 1);
    let (q, r) = h.div_rem(&divisor);
    if !r.is_zero() {
        return Err(Error::NotDivisible { order: n });
    }
    Ok(q)
}

/// Checks `H_n(c) + H_n(conj c) ≡ H_{n-1}(v) (mod 2)` for `2 <= n <= nmax`,
/// where `v_i = c_i + c_{i+2} mod 2`.
pub fn conjugate_relation_check(c: &BitSeq, nmax: usize) -> Result<bool> {
    ensure_len(c.len(), terms_needed(nmax).max(3))?;
    let cbar = conjugate(c);
    let v: BitSeq = (0..c.len() - 2).map(|i| c.get(i) ^ c.get(i + 2)).collect();
    for n in 2..=nmax {
        let lhs = hankel_gf2(c, n)? ^ hankel_gf2(&cbar, n)?;
        if lhs != hankel_gf2(&v, n - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Truncated power series over GF(2), bit-packed.

use std::fmt;

use crate::sequences::BitSeq;

/// `c_0 + c_1 x + ... + c_{terms-1} x^{terms-1}` over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeriesGF2 {
    coeffs: BitSeq,
}

impl TruncatedSeriesGF2 {
    pub fn zero(terms: usize) -> Self {
        TruncatedSeriesGF2 {
            coeffs: BitSeq::zeros(terms),
        }
    }

    pub fn one(terms: usize) -> Self {
        let mut s = Self::zero(terms);
        if terms > 0 {
            s.coeffs.set(0, 1);
        }
        s
    }

    /// Series whose coefficients are the first `terms` symbols of `c`.
    pub fn from_prefix(c: &BitSeq, terms: usize) -> Self {
        assert!(terms <= c.len());
        let mut coeffs = c.clone();
        coeffs.truncate(terms);
        TruncatedSeriesGF2 { coeffs }
    }

    pub fn from_bits(coeffs: BitSeq) -> Self {
        TruncatedSeriesGF2 { coeffs }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> u8 {
        if i < self.terms() {
            self.coeffs.get(i)
        } else {
            0
        }
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        self.coeffs.set(i, bit);
    }

    pub fn bits(&self) -> &BitSeq {
        &self.coeffs
    }

    pub fn into_bits(self) -> BitSeq {
        self.coeffs
    }

    pub fn truncated(&self, terms: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(terms);
        TruncatedSeriesGF2 { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.terms().min(other.terms());
        (0..terms).map(|i| self.coeff(i) ^ other.coeff(i)).collect()
    }

    /// Multiplication by `x^k`, keeping `self.terms()` terms.
    pub fn shift_up(&self, k: usize) -> Self {
        (0..self.terms())
            .map(|i| if i >= k { self.coeff(i - k) } else { 0 })
            .collect()
    }

    /// Division by `x^k`; the low `k` coefficients are dropped.
    pub fn shift_down(&self, k: usize) -> Self {
        (k..self.terms()).map(|i| self.coeff(i)).collect()
    }

    /// `f(x^2)`, keeping `self.terms()` terms.
    pub fn compose_square(&self) -> Self {
        (0..self.terms())
            .map(|i| if i % 2 == 0 { self.coeff(i / 2) } else { 0 })
            .collect()
    }

    /// `f^even(x) = Σ c_{2i} x^{2i}`.
    pub fn even_part(&self) -> Self {
        (0..self.terms())
            .map(|i| if i % 2 == 0 { self.coeff(i) } else { 0 })
            .collect()
    }

    /// `f^odd(x) = Σ c_{2i+1} x^{2i+1}`.
    pub fn odd_part(&self) -> Self {
        (0..self.terms())
            .map(|i| if i % 2 == 1 { self.coeff(i) } else { 0 })
            .collect()
    }

    /// Carry-less product truncated to `min(terms)` terms.
    pub fn mul(&self, other: &Self) -> Self {
        let terms = self.terms().min(other.terms());
        let nw = terms.div_ceil(64);
        let mut out = vec![0u64; nw];
        let b = other.coeffs.words();
        for i in (0..terms).filter(|&i| self.coeff(i) == 1) {
            let (ws, bs) = (i / 64, i % 64);
            for (k, &w) in b.iter().enumerate() {
                let lo = ws + k;
                if lo >= nw {
                    break;
                }
                out[lo] ^= w << bs;
                if bs != 0 && lo + 1 < nw {
                    out[lo + 1] ^= w >> (64 - bs);
                }
            }
        }
        (0..terms)
            .map(|i| ((out[i / 64] >> (i % 64)) & 1) as u8)
            .collect()
    }

    /// Inverse by Newton iteration `g <- f·g²` (valid in characteristic 2),
    /// doubling precision each step. Requires a constant term of 1.
    pub fn inverse(&self) -> Option<Self> {
        let terms = self.terms();
        if terms == 0 {
            return Some(self.clone());
        }
        if self.coeff(0) == 0 {
            return None;
        }
        let mut g = Self::one(1);
        let mut prec = 1;
        while prec < terms {
            prec = (2 * prec).min(terms);
            let gp = g.padded(prec);
            let g2 = gp.mul(&gp);
            g = self.truncated(prec).mul(&g2);
        }
        Some(g)
    }

    /// Term-by-term inverse, `g_k = Σ_{i=1..k} f_i g_{k-i}`.
    pub fn inverse_schoolbook(&self) -> Option<Self> {
        let terms = self.terms();
        if terms > 0 && self.coeff(0) == 0 {
            return None;
        }
        let mut g = vec![0u8; terms];
        for k in 0..terms {
            g[k] = if k == 0 {
                1
            } else {
                (1..=k).fold(0, |acc, i| acc ^ (self.coeff(i) & g[k - i]))
            };
        }
        Some(g.into_iter().collect())
    }

    fn padded(&self, terms: usize) -> Self {
        (0..terms).map(|i| self.coeff(i)).collect()
    }

    /// Index of the first coefficient where the two series differ, if any
    /// within the common length.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..self.terms().min(other.terms())).find(|&i| self.coeff(i) != other.coeff(i))
    }
}

impl FromIterator<u8> for TruncatedSeriesGF2 {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        TruncatedSeriesGF2 {
            coeffs: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for TruncatedSeriesGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coeffs.fmt(f)
    }
}

impl fmt::Debug for TruncatedSeriesGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeriesGF2({})", self.coeffs)
    }
}

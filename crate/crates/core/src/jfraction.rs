//! Jacobi continued fractions
//!
//! ```text
//! f(x) = v_0 / (1 + u_1 x - v_1 x² / (1 + u_2 x - v_2 x² / ...))
//! ```
//!
//! Over GF(2) a J-fraction exists up to depth `n` exactly when
//! `H_1, ..., H_n` are odd, and then every `v_k` is 1, so only the
//! `u`-vector is stored. The rational expansion is an exact oracle
//! for the identity `H_n = v_0^n v_1^{n-1} ... v_{n-1}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ensure_len, Error, Result};
use crate::hankel::{hankel_exact, Terms};
use crate::sequences::BitSeq;
use crate::series::TruncatedSeriesGF2;

/// GF(2) J-fraction with all `v_k = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JFracGF2 {
    u: BitSeq,
}

impl JFracGF2 {
    pub fn from_u(u: BitSeq) -> Self {
        JFracGF2 { u }
    }

    pub fn depth(&self) -> usize {
        self.u.len()
    }

    /// `u_k` for `k = 1..=depth`.
    pub fn u(&self, k: usize) -> u8 {
        self.u.get(k - 1)
    }

    pub fn u_bits(&self) -> &BitSeq {
        &self.u
    }
}

impl fmt::Display for JFracGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.u.fmt(f)
    }
}

/// Expands the series of `c` to a GF(2) J-fraction of the given depth.
///
/// Each level consumes two coefficients: with `g = 1 / f_{k-1}`,
/// `u_k = g_1` and `f_k = (g - 1 - u_k x) / x²`. Needs `2·depth + 1`
/// symbols.
pub fn jfrac_expand_gf2(c: &BitSeq, depth: usize) -> Result<JFracGF2> {
    ensure_len(c.len(), 2 * depth + 1)?;
    let mut f = TruncatedSeriesGF2::from_prefix(c, 2 * depth + 1);
    let mut u = BitSeq::with_capacity(depth);
    for k in 1..=depth {
        // f_{k-1}(0) plays the role of v_{k-1}
        let g = f.inverse().ok_or(Error::NotApwenianPrefix { order: k })?;
        let uk = g.coeff(1);
        u.push(uk);
        f = g.shift_down(2);
    }
    Ok(JFracGF2 { u })
}

/// The `n`-th approximant `J_n` as a series with `terms` coefficients.
///
/// `J_0 = 1`. Agreement with the expanded series is guaranteed on the
/// first `2n` coefficients.
pub fn jfrac_approximant_gf2(j: &JFracGF2, n: usize, terms: usize) -> Result<TruncatedSeriesGF2> {
    if n > j.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            depth: j.depth(),
        });
    }
    let mut tail = TruncatedSeriesGF2::zero(terms);
    for k in (1..=n).rev() {
        // 1 + u_k x + x² · tail   (signs vanish mod 2)
        let mut denom = tail.shift_up(2);
        if terms > 0 {
            denom.set(0, denom.coeff(0) ^ 1);
        }
        if terms > 1 {
            denom.set(1, denom.coeff(1) ^ j.u(k));
        }
        tail = denom.inverse().expect("constant term is 1");
    }
    if n == 0 {
        return Ok(TruncatedSeriesGF2::one(terms));
    }
    Ok(tail)
}

/// Number of leading coefficients on which `J_n` agrees with `c`.
pub fn approximant_agreement(c: &BitSeq, j: &JFracGF2, n: usize) -> Result<usize> {
    let approx = jfrac_approximant_gf2(j, n, c.len())?;
    let source = TruncatedSeriesGF2::from_prefix(c, c.len());
    Ok(source.first_difference(&approx).unwrap_or(c.len()))
}

/// Exact rational J-fraction coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JFracRational {
    /// `v_0, ..., v_{depth-1}`
    pub v: Vec<BigRational>,
    /// `u_1, ..., u_depth`
    pub u: Vec<BigRational>,
}

impl JFracRational {
    /// `v_0^n v_1^{n-1} ... v_{n-1}`.
    pub fn heilermann_product(&self, n: usize) -> BigRational {
        assert!(n <= self.v.len());
        (0..n).fold(BigRational::one(), |acc, i| {
            acc * num_traits::pow(self.v[i].clone(), n - i)
        })
    }
}

fn rat_series_inverse(f: &[BigRational]) -> Vec<BigRational> {
    let mut g: Vec<BigRational> = Vec::with_capacity(f.len());
    let inv0 = f[0].recip();
    for k in 0..f.len() {
        if k == 0 {
            g.push(inv0.clone());
        } else {
            let s = (1..=k).fold(BigRational::zero(), |acc, i| acc + &f[i] * &g[k - i]);
            g.push(-s * &inv0);
        }
    }
    g
}

/// Exact J-fraction expansion over the rationals to the given depth.
///
/// Requires `H_1 .. H_depth` to be nonzero; the first vanishing order is
/// reported. Needs `2·depth + 1` terms.
pub fn jfrac_expand_rational<S: Terms + ?Sized>(a: &S, depth: usize) -> Result<JFracRational> {
    ensure_len(a.term_count(), 2 * depth + 1)?;
    for n in 1..=depth {
        if hankel_exact(a, n)?.is_zero() {
            return Err(Error::ZeroHankel { order: n });
        }
    }
    let mut f: Vec<BigRational> = (0..2 * depth + 1)
        .map(|i| BigRational::from_integer(a.term(i)))
        .collect();
    let mut v = Vec::with_capacity(depth);
    let mut u = Vec::with_capacity(depth);
    for _ in 0..depth {
        let vk = f[0].clone();
        if vk.is_zero() {
            return Err(Error::Invariant(
                "nonzero Hankel determinants but vanishing v coefficient".into(),
            ));
        }
        // v_k / f_k = 1 + u_{k+1} x - x² f_{k+1}
        let g: Vec<BigRational> = rat_series_inverse(&f)
            .into_iter()
            .map(|x| x * &vk)
            .collect();
        u.push(g.get(1).cloned().unwrap_or_else(BigRational::zero));
        f = g.iter().skip(2).map(|x| -x.clone()).collect();
        v.push(vk);
        if f.is_empty() {
            break;
        }
    }
    Ok(JFracRational { v, u })
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

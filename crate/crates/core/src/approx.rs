//! Infinite products `f(z) = Π P(z^{p^i})`, their Padé approximants and the
//! rational approximations obtained at `z = 1/b`.
//!
//! Everything is exact; floating point only enters when logarithms of
//! errors are reported.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{hankel_exact, Terms};

/// Truncated integer power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Product with the polynomial `Σ v_j z^{j·q}`, truncated to `self.terms()`.
    fn mul_sparse(&self, v: &[i64], q: usize) -> IntSeries {
        let n = self.terms();
        let mut out = vec![BigInt::zero(); n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0 {
                continue;
            }
            let shift = j * q;
            if shift >= n {
                break;
            }
            for i in 0..n - shift {
                out[i + shift] += &self.coeffs[i] * vj;
            }
        }
        IntSeries { coeffs: out }
    }

    /// `f(z^p)` truncated to `self.terms()`.
    fn compose_power(&self, p: usize) -> IntSeries {
        let n = self.terms();
        IntSeries {
            coeffs: (0..n)
                .map(|i| {
                    if i % p == 0 {
                        self.coeffs[i / p].clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        }
    }
}

impl Terms for IntSeries {
    fn term_count(&self) -> usize {
        self.terms()
    }

    fn term(&self, i: usize) -> BigInt {
        self.coeffs[i].clone()
    }
}

fn validate_v(p: usize, v: &[i64]) -> Result<()> {
    if p < 2 || v.len() != p {
        return Err(Error::InvalidArgument(format!(
            "need p >= 2 and exactly p coefficients, got p={p} with {} coefficients",
            v.len()
        )));
    }
    if v[0] != 1 {
        return Err(Error::InvalidArgument(format!(
            "leading coefficient must be 1, got {}",
            v[0]
        )));
    }
    Ok(())
}

/// `Π_{p^i < terms} P(z^{p^i})` with `P(z) = v_0 + v_1 z + ... + v_{p-1} z^{p-1}`.
pub fn product_series(p: usize, v: &[i64], terms: usize) -> Result<IntSeries> {
    validate_v(p, v)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    let mut f = IntSeries::from_i64(&{
        let mut one = vec![0i64; terms];
        one[0] = 1;
        one
    });
    let mut q = 1usize;
    while q < terms {
        f = f.mul_sparse(v, q);
        q = match q.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(f)
}

/// Whether `f(z) = P(z) f(z^p)` holds on all `f.terms()` coefficients.
pub fn functional_equation_holds(f: &IntSeries, p: usize, v: &[i64]) -> Result<bool> {
    validate_v(p, v)?;
    Ok(f.compose_power(p).mul_sparse(v, 1) == *f)
}

/// Dense polynomial with rational coefficients, lowest degree first and no
/// trailing zeros.
pub type RatPoly = Vec<BigRational>;

fn trim(mut a: RatPoly) -> RatPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

/// Degree, with the zero polynomial at `-1`.
fn degree(a: &RatPoly) -> isize {
    a.len() as isize - 1
}

fn poly_sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_eval(a: &RatPoly, z: &BigRational) -> BigRational {
    a.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * z + c)
}

/// The `[(n-1)/n]` Padé approximant `P/Q` with `Q(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeApprox {
    pub n: usize,
    pub p: RatPoly,
    pub q: RatPoly,
}

impl PadeApprox {
    /// `P(z)/Q(z)`, or `None` when `Q(z) = 0`.
    pub fn eval(&self, z: &BigRational) -> Option<BigRational> {
        let den = poly_eval(&self.q, z);
        (!den.is_zero()).then(|| poly_eval(&self.p, z) / den)
    }

    /// Coefficients of `f - P/Q` below `f.terms()`.
    pub fn error_series(&self, f: &IntSeries) -> Vec<BigRational> {
        let n = f.terms();
        let zero = BigRational::zero();
        // P/Q by the recurrence g_k = P_k - Σ_{i>=1} Q_i g_{k-i}, using Q_0 = 1
        let mut g: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut gk = self.p.get(k).unwrap_or(&zero).clone();
            for i in 1..=k.min(self.q.len().saturating_sub(1)) {
                gk -= &self.q[i] * &g[k - i];
            }
            g.push(gk);
        }
        (0..n)
            .map(|k| BigRational::from_integer(f.coeff(k)) - &g[k])
            .collect()
    }
}

/// Index of the first nonzero coefficient, if any.
pub fn valuation(series: &[BigRational]) -> Option<usize> {
    series.iter().position(|c| !c.is_zero())
}

/// `[(n-1)/n]` approximant via the extended Euclidean algorithm on
/// `(z^{2n}, f mod z^{2n})`, stopped at the first remainder of degree
/// below `n`. Needs `H_n(f) != 0` and `2n + 1` terms.
pub fn pade(f: &IntSeries, n: usize) -> Result<PadeApprox> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Padé order must be at least 1".into(),
        ));
    }
    crate::error::ensure_len(f.terms(), 2 * n + 1)?;
    if hankel_exact(f, n)?.is_zero() {
        return Err(Error::ZeroHankel { order: n });
    }
    let mut r0: RatPoly = vec![BigRational::zero(); 2 * n];
    r0.push(BigRational::one());
    let mut r1 = trim(
        (0..2 * n)
            .map(|i| BigRational::from_integer(f.coeff(i)))
            .collect(),
    );
    let mut t0: RatPoly = Vec::new();
    let mut t1: RatPoly = vec![BigRational::one()];
    while degree(&r1) >= n as isize {
        let (quo, rem) = poly_divrem(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&quo, &t1));
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let q0 = t1.first().cloned().unwrap_or_else(BigRational::zero);
    if q0.is_zero() {
        return Err(Error::Invariant(format!(
            "denominator vanishes at 0 although H_{n} != 0"
        )));
    }
    let p: RatPoly = r1.iter().map(|c| c / &q0).collect();
    let q: RatPoly = t1.iter().map(|c| c / &q0).collect();
    if degree(&p) >= n as isize || degree(&q) > n as isize {
        return Err(Error::Invariant(format!(
            "degree bounds violated for order {n}: deg P = {}, deg Q = {}",
            degree(&p),
            degree(&q)
        )));
    }
    Ok(PadeApprox { n, p, q })
}

/// One rational approximation `r/s` of `ξ = f(1/b)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalApproxRecord {
    pub n: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub r: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub s: BigInt,
    /// `ln |ξ - r/s|`
    pub err_log: f64,
    /// `-err_log / ln s`; absent when `s = 1`.
    pub exponent_estimate: Option<f64>,
    /// `|ξ - r/s| · b^{2n}`
    pub c_n: f64,
    /// False when the error could not be separated from the product tail;
    /// `err_log` is then an upper bound.
    pub resolved: bool,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxRun {
    /// Truncated product used in place of `ξ`.
    pub xi: BigRational,
    /// Number of product factors in `xi`.
    pub factors: usize,
    /// Upper bound for `ln |ξ - xi|`.
    pub tail_log_bound: f64,
    pub records: Vec<RationalApproxRecord>,
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.sign() == Sign::Plus);
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |q|` for nonzero `q`.
pub fn ln_abs(q: &BigRational) -> f64 {
    ln_big(&q.numer().abs()) - ln_big(&q.denom().abs())
}

/// Decimal expansion of `q` truncated towards zero after `digits` places.
pub fn decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q.numer().abs() * &scale) / q.denom();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if q.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

/// Rational approximations of `ξ = Π P(b^{-p^i})` from the Padé
/// approximants of orders `1..=n_max`; orders with `H_n = 0` are skipped.
pub fn rational_approximations(p: usize, v: &[i64], b: u64, n_max: usize) -> Result<ApproxRun> {
    validate_v(p, v)?;
    if b < 2 {
        return Err(Error::InvalidArgument(format!(
            "base must be >= 2, got {b}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let f = product_series(p, v, 2 * n_max + 1)?;
    let z = BigRational::new(BigInt::one(), BigInt::from(b));
    let mut approximants = Vec::new();
    for n in 1..=n_max {
        match pade(&f, n) {
            Ok(pa) => {
                if let Some(val) = pa.eval(&z) {
                    approximants.push((n, val));
                }
            }
            Err(Error::ZeroHankel { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let vmax = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(1) as f64;
    let ln_b = (b as f64).ln();
    let vpoly: RatPoly = v
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect();
    // Beyond this tail size no Padé error of the requested orders is expected.
    let ln_tail_floor = -((4 * n_max + 40) as f64) * ln_b;

    // Tail after I factors: with x = b^{-p^I} and |P(x) - 1| <= 2 V x <= 1/2,
    // |log(1 + y)| <= 2|y| and x_{i+1} <= x_i / 2 give
    // |log Π_{i>=I} P(x_i)| <= 8 V x_I, so |ξ - ξ_I| <= 16 V x_I |ξ_I|
    // once 8 V x_I <= 1.
    let mut xi = BigRational::one();
    let mut factors = 0usize;
    let mut power: usize = 1;
    loop {
        let x = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(b), power));
        let factor = poly_eval(&vpoly, &x);
        if factor.is_zero() {
            return Err(Error::ZeroFactor { index: factors });
        }
        xi *= factor;
        factors += 1;
        power = power.saturating_mul(p);
        let ln_x = -(power as f64) * ln_b;
        let bound_valid = (8.0 * vmax).ln() + ln_x <= 0.0;
        let ln_tail = (16.0 * vmax).ln() + ln_x + ln_abs(&xi);
        let errs: Vec<BigRational> = approximants
            .iter()
            .map(|(_, val)| (&xi - val).abs())
            .collect();
        let margin = 60.0 * std::f64::consts::LN_2;
        let separated = |e: &BigRational| !e.is_zero() && ln_tail <= ln_abs(e) - margin;
        let done = bound_valid && (errs.iter().all(separated) || ln_tail <= ln_tail_floor);
        if !done {
            continue;
        }
        let records = approximants
            .iter()
            .zip(&errs)
            .map(|((n, val), err)| {
                let resolved = separated(err);
                // unresolved errors are reported by their upper bound
                let err_log = if resolved {
                    ln_abs(err)
                } else if err.is_zero() {
                    ln_tail
                } else {
                    ln_abs(err).max(ln_tail) + std::f64::consts::LN_2
                };
                let s = val.denom().clone();
                let exponent_estimate = (!s.is_one()).then(|| -err_log / ln_big(&s));
                RationalApproxRecord {
                    n: *n,
                    r: val.numer().clone(),
                    s,
                    err_log,
                    exponent_estimate,
                    c_n: (err_log + 2.0 * *n as f64 * ln_b).exp(),
                    resolved,
                }
            })
            .collect();
        return Ok(ApproxRun {
            xi,
            factors,
            tail_log_bound: ln_tail,
            records,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{fixed_point, named_sequence, NamedSequence, Substitution};

    fn tm_series(terms: usize) -> IntSeries {
        let d = named_sequence(NamedSequence::ThueMorsePm, terms)
            .into_signs()
            .unwrap();
        IntSeries::from_coeffs(d.iter().map(BigInt::from).collect())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn thue_morse_product() {
        assert_eq!(product_series(2, &[1, -1], 8).unwrap(), tm_series(8));
    }

    #[test]
    fn product_matches_fixed_point() {
        let f = product_series(3, &[1, 1, -1], 9).unwrap();
        let d = fixed_point(&Substitution::type2(&[1, 1, -1]).unwrap(), 9)
            .unwrap()
            .into_signs()
            .unwrap();
        let expected: Vec<BigInt> = d.iter().map(BigInt::from).collect();
        assert_eq!(f.coeffs(), expected.as_slice());
        for p in 2..6 {
            let ones = vec![1i64; p];
            let f = product_series(p, &ones, p).unwrap();
            assert!(f.coeffs().iter().all(One::is_one));
        }
    }

    #[test]
    fn product_rejects_bad_input() {
        assert!(product_series(3, &[-1, 1, 1], 9).is_err());
        assert!(product_series(3, &[1, 1], 9).is_err());
        assert!(product_series(2, &[1, 1], 0).is_err());
    }

    #[test]
    fn functional_equation() {
        let f = product_series(3, &[1, -1, -1], 512).unwrap();
        assert!(functional_equation_holds(&f, 3, &[1, -1, -1]).unwrap());
        assert!(!functional_equation_holds(&f, 3, &[1, 1, -1]).unwrap());
    }

    #[test]
    fn pade_thue_morse_order_one() {
        let f = tm_series(8);
        let pa = pade(&f, 1).unwrap();
        assert_eq!(pa.p, vec![rat(1, 1)]);
        assert_eq!(pa.q, vec![rat(1, 1), rat(1, 1)]);
        let err = pa.error_series(&f);
        assert_eq!(valuation(&err), Some(2));
        assert_eq!(err[2], rat(-2, 1));
    }

    #[test]
    fn pade_geometric_is_exact() {
        let f = IntSeries::from_i64(&[1; 12]);
        let pa = pade(&f, 1).unwrap();
        assert_eq!(pa.q, vec![rat(1, 1), rat(-1, 1)]);
        assert_eq!(valuation(&pa.error_series(&f)), None);
    }

    #[test]
    fn pade_error_matches_hankel_ratio() {
        let f = tm_series(40);
        for n in 1..=8 {
            let pa = pade(&f, n).unwrap();
            let err = pa.error_series(&f);
            assert!(valuation(&err).is_none_or(|v| v >= 2 * n));
            let hn = hankel_exact(&f, n).unwrap();
            let hn1 = hankel_exact(&f, n + 1).unwrap();
            assert_eq!(err[2 * n], BigRational::new(hn1, hn), "n={n}");
        }
    }

    #[test]
    fn pade_zero_hankel() {
        let f = IntSeries::from_i64(&[0, 1, 0, 0, 0]);
        assert_eq!(pade(&f, 1), Err(Error::ZeroHankel { order: 1 }));
        assert!(matches!(pade(&f, 3), Err(Error::TooShort { .. })));
    }

    #[test]
    fn decimal_format() {
        assert_eq!(decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal(&rat(-7, 2), 2), "-3.50");
        assert_eq!(decimal(&rat(1, 100), 3), "0.010");
    }

    #[test]
    fn thue_morse_constant() {
        let run = rational_approximations(2, &[1, -1], 2, 8).unwrap();
        assert_eq!(&decimal(&run.xi, 7), "0.3501838");
        let b2 = 2f64.ln();
        for r in &run.records {
            assert!(r.resolved);
            assert!(r.s >= BigInt::one());
            assert!(r.r.gcd(&r.s).is_one());
            // the recorded constant reproduces the error bound
            assert!(r.err_log <= r.c_n.ln() - 2.0 * r.n as f64 * b2 + 1e-9);
        }
    }

    #[test]
    fn errors_p3_match_reference() {
        // values from an independent linear-system Padé solve in exact arithmetic
        let expected = [
            (1, "2", "1", -0.4933490746907158),
            (2, "4", "3", -2.8808231919271714),
            (3, "10", "7", -3.2403670386614447),
            (4, "18", "13", -5.3377817657294555),
            (5, "82", "59", -7.802766591694893),
            (6, "25", "18", -7.53695797203109),
        ];
        let run = rational_approximations(3, &[1, 1, -1], 2, 6).unwrap();
        assert_eq!(run.records.len(), expected.len());
        for (rec, (n, r, s, e)) in run.records.iter().zip(expected) {
            assert_eq!(
                (rec.n, rec.r.to_string(), rec.s.to_string()),
                (n, r.into(), s.into())
            );
            assert!((rec.err_log - e).abs() < 1e-9);
        }
        // decreasing through n = 5; order 6 is worse than order 5
        for w in run.records[..5].windows(2) {
            assert!(w[1].err_log < w[0].err_log);
        }
        assert!(run.records[5].err_log > run.records[4].err_log);
    }

    #[test]
    fn positive_factors_and_zero_factor() {
        // the product telescopes to 1/(1 - 1/2) = 2, matched exactly at order 1
        let run = rational_approximations(2, &[1, 1], 2, 3).unwrap();
        assert!(run.xi > rat(1, 1) && run.xi < rat(2, 1));
        assert_eq!(run.records.len(), 1);
        assert_eq!(
            (run.records[0].r.clone(), run.records[0].s.clone()),
            (2.into(), 1.into())
        );
        assert!(!run.records[0].resolved);
        assert_eq!(
            rational_approximations(2, &[1, -2], 2, 3),
            Err(Error::ZeroFactor { index: 0 })
        );
    }
}

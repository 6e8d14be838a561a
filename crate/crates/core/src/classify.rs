//! Type II substitutions of odd length and the permutation `τ: j -> 2j+1 mod p`.
//!
//! For odd `p` the apwenian type II substitutions correspond to solutions
//! of `δ(j) + δ(τ(j)) = 1` over GF(2), one free bit per cycle of `τ`,
//! provided no cycle has odd length. Brute-force scans over whole
//! substitution families give finite evidence for the uniqueness results.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::criteria::{check_01, check_pm};
use crate::error::{Error, Result};
use crate::sequences::{
    fixed_point, named_sequence, Alphabet, NamedSequence, Sequence, Substitution,
};

/// Prefix length used when re-verifying enumerated vectors.
pub const VERIFY_PREFIX: usize = 4096;
/// Largest cycle count for which all `2^k` vectors are enumerated.
pub const MAX_ENUMERATED_CYCLES: usize = 20;
/// Largest `p` accepted by [`mu_laws_check`].
pub const MU_LAWS_MAX_BOUND: u64 = 10_000;

fn require_odd(p: u64) -> Result<()> {
    if p.is_multiple_of(2) {
        Err(Error::EvenModulus(p))
    } else if p < 3 {
        Err(Error::ModulusTooSmall(p))
    } else {
        Ok(())
    }
}

/// Cycles of `τ` on `{0, ..., p-2}`, each starting at its smallest element,
/// listed by increasing first element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub p: u64,
    pub cycles: Vec<Vec<u64>>,
}

impl CycleDecomposition {
    pub fn apply(&self, j: u64) -> u64 {
        (2 * j + 1) % self.p
    }

    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn has_odd_cycle(&self) -> bool {
        self.cycles.iter().any(|c| c.len() % 2 == 1)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let items: Vec<String> = c.iter().map(u64::to_string).collect();
            write!(f, "({})", items.join(","))?;
        }
        Ok(())
    }
}

pub fn tau_perm(p: u64) -> Result<CycleDecomposition> {
    require_odd(p)?;
    let m = (p - 1) as usize;
    let mut seen = vec![false; m];
    let mut cycles = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start as u64;
        loop {
            if j as usize >= m || seen[j as usize] {
                return Err(Error::Invariant(format!(
                    "2j+1 mod {p} is not a permutation of 0..{}",
                    p - 2
                )));
            }
            seen[j as usize] = true;
            cycle.push(j);
            j = (2 * j + 1) % p;
            if j == start as u64 {
                break;
            }
        }
        cycles.push(cycle);
    }
    Ok(CycleDecomposition { p, cycles })
}

/// Multiplicative order of 2 modulo odd `p >= 3`.
pub fn mu(p: u64) -> Result<u64> {
    require_odd(p)?;
    let mut x = 2 % p;
    let mut j = 1;
    while x != 1 {
        x = ((x as u128 * 2) % p as u128) as u64;
        j += 1;
    }
    Ok(j)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..)
        .take_while(|d| d * d <= n)
        .filter(|d| n.is_multiple_of(*d))
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Cycle count from the orbit-counting formula alone, without building `τ`.
pub fn burnside_formula(p: u64) -> Result<u64> {
    let m = mu(p)?;
    let mut sum: u64 = 0;
    let mut pow = 1 % p;
    for _ in 0..m {
        // 2^j - 1 reduced mod p; gcd(0, p) = p
        let r = (pow + p - 1) % p;
        sum += r.gcd(&p);
        pow = (pow * 2) % p;
    }
    if !sum.is_multiple_of(m) {
        return Err(Error::Invariant(format!(
            "orbit sum {sum} not divisible by mu({p}) = {m}"
        )));
    }
    Ok(sum / m - 1)
}

/// Number of cycles of `τ`, computed by the orbit-counting formula and
/// checked against the explicit decomposition.
pub fn burnside_k(p: u64) -> Result<u64> {
    let k = burnside_formula(p)?;
    let cycles = tau_perm(p)?.count() as u64;
    if k != cycles {
        return Err(Error::Invariant(format!(
            "formula gives {k} cycles for p={p}, decomposition has {cycles}"
        )));
    }
    Ok(k)
}

pub fn has_odd_cycle_by_scan(p: u64) -> Result<bool> {
    Ok(tau_perm(p)?.has_odd_cycle())
}

/// Some divisor `p1 >= 3` of `p` has odd `μ(p1)`.
pub fn has_odd_cycle_by_divisors(p: u64) -> Result<bool> {
    require_odd(p)?;
    for d in divisors(p).into_iter().filter(|&d| d >= 3) {
        if mu(d)? % 2 == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn has_odd_cycle(p: u64) -> Result<bool> {
    let scan = has_odd_cycle_by_scan(p)?;
    let div = has_odd_cycle_by_divisors(p)?;
    if scan != div {
        return Err(Error::Invariant(format!(
            "odd-cycle scan ({scan}) and divisor test ({div}) disagree for p={p}"
        )));
    }
    Ok(scan)
}

/// Number of apwenian ±1 series satisfying `f(z) = P(z) f(z^p)` with `f(0) = 1`.
pub fn count_apwenian(p: u64) -> Result<BigUint> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    if p.is_multiple_of(2) {
        return Ok(BigUint::from(u8::from(p.is_power_of_two())));
    }
    if has_odd_cycle(p)? {
        return Ok(BigUint::from(0u8));
    }
    Ok(BigUint::from(1u8) << burnside_k(p)?)
}

/// `N_p / 2` for odd `p`, counting series up to sign.
pub fn n_prime(p: u64) -> Result<BigUint> {
    require_odd(p)?;
    Ok(count_apwenian(p)? >> 1)
}

/// `δ(j) = 1` exactly when `v_j != v_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaVector {
    pub delta: Vec<u8>,
}

impl DeltaVector {
    /// Integrates from `v_0 = +1`.
    pub fn integrate(&self) -> Vec<i8> {
        let mut v = Vec::with_capacity(self.delta.len() + 1);
        v.push(1i8);
        for &d in &self.delta {
            let last = *v.last().unwrap();
            v.push(if d == 1 { -last } else { last });
        }
        v
    }

    pub fn from_v(v: &[i8]) -> Self {
        DeltaVector {
            delta: v.windows(2).map(|w| u8::from(w[0] != w[1])).collect(),
        }
    }
}

/// All solutions of `δ(j) + δ(τ(j)) = 1`, sorted lexicographically.
pub fn solve_delta_system(p: u64) -> Result<Vec<DeltaVector>> {
    let tau = tau_perm(p)?;
    if tau.has_odd_cycle() {
        return Ok(Vec::new());
    }
    let k = tau.count();
    if k > MAX_ENUMERATED_CYCLES {
        return Err(Error::SearchSpaceTooLarge(format!(
            "p={p} has {k} cycles; enumeration is limited to {MAX_ENUMERATED_CYCLES}"
        )));
    }
    let mut out = Vec::with_capacity(1 << k);
    for choice in 0u64..(1 << k) {
        let mut delta = vec![0u8; (p - 1) as usize];
        for (l, cycle) in tau.cycles.iter().enumerate() {
            let free = ((choice >> l) & 1) as u8;
            // positions along the cycle alternate, starting from the free bit
            for (i, &x) in cycle.iter().enumerate() {
                delta[x as usize] = free ^ (i as u8 & 1);
            }
        }
        out.push(DeltaVector { delta });
    }
    out.sort();
    Ok(out)
}

/// `(v_j + v_{j+1} - v_{2j+1} - v_{2j+2}) / 2` odd for `0 <= j <= p-2`,
/// indices taken mod `p`.
pub fn satisfies_type2_condition(v: &[i8]) -> bool {
    let p = v.len();
    (0..p.saturating_sub(1)).all(|j| {
        let s =
            v[j] as i32 + v[j + 1] as i32 - v[(2 * j + 1) % p] as i32 - v[(2 * j + 2) % p] as i32;
        (s / 2).rem_euclid(2) == 1
    })
}

/// Sort key placing `+1` before `-1`.
fn pm_key(v: &[i8]) -> Vec<u8> {
    v.iter().map(|&x| u8::from(x < 0)).collect()
}

fn fixed_point_passes(sub: &Substitution, len: usize) -> Result<bool> {
    Ok(match fixed_point(sub, len)? {
        Sequence::Binary(c) => check_01(&c)?.passed(),
        Sequence::Signed(d) => check_pm(&d)?.passed(),
    })
}

/// Every apwenian type II `v`-vector of odd length `p`, with `v_0 = +1`.
pub fn enumerate_type2(p: u64) -> Result<Vec<Vec<i8>>> {
    let mut out = Vec::new();
    for delta in solve_delta_system(p)? {
        let v = delta.integrate();
        if !satisfies_type2_condition(&v) {
            return Err(Error::Invariant(format!(
                "delta solution {:?} violates the type II condition",
                delta.delta
            )));
        }
        let sub = Substitution::type2(&v)?;
        if !fixed_point_passes(&sub, VERIFY_PREFIX)? {
            return Err(Error::Invariant(format!(
                "fixed point of {sub} fails the criterion on {VERIFY_PREFIX} terms"
            )));
        }
        out.push(v);
    }
    out.sort_by_key(|v| pm_key(v));
    Ok(out)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Closed-form cycle count for `p = p1^l` or `p = p1·p2`, checked against
/// [`burnside_k`].
pub fn corollary_k(p: u64) -> Result<u64> {
    require_odd(p)?;
    let f = factorize(p);
    let k = match *f.as_slice() {
        [(p1, l)] => {
            let m1 = mu(p1)?;
            if mu(p1 * p1)? != m1 * p1 {
                return Err(Error::WieferichCondition { prime: p1 });
            }
            (p1 - 1) / m1 * l as u64
        }
        [(p1, 1), (p2, 1)] => {
            let (m1, m2) = (mu(p1)?, mu(p2)?);
            (p1 - 1) * (p2 - 1) / m1.lcm(&m2) + (p1 - 1) / m1 + (p2 - 1) / m2
        }
        _ => return Err(Error::UnsupportedShape(p)),
    };
    let b = burnside_k(p)?;
    if k != b {
        return Err(Error::Invariant(format!(
            "closed form gives k={k} for p={p}, cycle count is {b}"
        )));
    }
    Ok(k)
}

/// Checks `μ(q1 q2) = lcm(μ(q1), μ(q2))` for distinct odd primes with
/// `q1 q2 < bound`, and that once `μ(q^s) = μ(q^{s-1}) q` holds for some
/// `s >= 2` it holds for every larger power below `bound`.
pub fn mu_laws_check(bound: u64) -> Result<bool> {
    if bound > MU_LAWS_MAX_BOUND {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} exceeds {MU_LAWS_MAX_BOUND}"
        )));
    }
    let primes: Vec<u64> = (3..bound).filter(|&n| is_prime(n)).collect();
    for (i, &q1) in primes.iter().enumerate() {
        for &q2 in &primes[i + 1..] {
            if q1 * q2 >= bound {
                break;
            }
            if mu(q1 * q2)? != mu(q1)?.lcm(&mu(q2)?) {
                return Ok(false);
            }
        }
        let mut powers = vec![1u64, q1];
        while powers.last().unwrap() * q1 < bound {
            powers.push(powers.last().unwrap() * q1);
        }
        let mus: Vec<u64> = powers
            .iter()
            .map(|&x| if x == 1 { Ok(1) } else { mu(x) })
            .collect::<Result<_>>()?;
        let mut established = false;
        for s in 2..mus.len() {
            let grows = mus[s] == mus[s - 1] * q1;
            if established && !grows {
                return Ok(false);
            }
            established |= grows;
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub p: u64,
    pub mu: u64,
    pub k: u64,
    pub has_odd_cycle: bool,
    #[serde(serialize_with = "ser_big")]
    pub n_p: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub n_prime: BigUint,
    pub cycles: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<i8>>>,
}

/// Numbers that fit in a `u64` serialize as JSON numbers, larger ones as strings.
fn ser_big<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(n) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

pub fn classify(p: u64, enumerate: bool) -> Result<ClassificationReport> {
    let tau = tau_perm(p)?;
    let has_odd = has_odd_cycle(p)?;
    let n_p = count_apwenian(p)?;
    let vectors = if enumerate {
        let vs = enumerate_type2(p)?;
        if BigUint::from(vs.len()) != n_p {
            return Err(Error::Invariant(format!(
                "enumerated {} vectors for p={p}, count is {n_p}",
                vs.len()
            )));
        }
        Some(vs)
    } else {
        None
    };
    Ok(ClassificationReport {
        p,
        mu: mu(p)?,
        k: burnside_k(p)?,
        has_odd_cycle: has_odd,
        n_prime: &n_p >> 1,
        n_p,
        cycles: tau.cycles,
        vectors,
    })
}

/// Substitution families covered by [`scan_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `1 -> 1w`, `0 -> v` over `{0, 1}`.
    Type1_01,
    /// `+1 -> v`, `-1 -> -v` with `v_0 = +1`.
    Type2Pm,
    /// `+1 -> v`, `-1 -> w` with `v_0 = +1`.
    GeneralPm,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Type1_01 => "type1_01",
            Family::Type2Pm => "type2_pm",
            Family::GeneralPm => "general_pm",
        }
    }

    fn alphabet(self) -> Alphabet {
        match self {
            Family::Type1_01 => Alphabet::ZeroOne,
            _ => Alphabet::PlusMinus,
        }
    }

    fn free_bits(self, p: usize) -> usize {
        match self {
            Family::Type2Pm => p - 1,
            _ => 2 * p - 1,
        }
    }

    fn max_p(self) -> u64 {
        match self {
            Family::Type2Pm => 25,
            _ => 12,
        }
    }

    /// Candidate with the given index. Bits are read most significant
    /// first; a 0 bit selects the letter 1 (resp. +1), so candidates come
    /// in lexicographic order with 1 before 0.
    fn candidate(self, p: usize, index: u64) -> Result<Substitution> {
        let total = self.free_bits(p);
        let mut bits = (0..total).map(|t| (index >> (total - 1 - t)) & 1 == 0);
        let mut image1 = vec![true];
        image1.extend(bits.by_ref().take(p - 1));
        let image0: Vec<bool> = match self {
            Family::Type2Pm => image1.iter().map(|&b| !b).collect(),
            _ => bits.collect(),
        };
        Substitution::new(self.alphabet(), image1, image0)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "type1_01" => Ok(Family::Type1_01),
            "type2_pm" => Ok(Family::Type2Pm),
            "general_pm" => Ok(Family::GeneralPm),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A substitution whose fixed point passed screening and re-verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSurvivor {
    pub substitution: Substitution,
    /// SHA-256 of the text form of the re-verified prefix.
    pub prefix_hash: String,
    pub type2: bool,
    /// Outcome of the exact type II condition, for odd length only.
    pub type2_exact: Option<bool>,
    /// The fixed point is not the expected known sequence.
    pub novel: bool,
}

impl Serialize for ScanSurvivor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sub = &self.substitution;
        let mut st = s.serialize_struct("ScanSurvivor", 7)?;
        st.serialize_field("alphabet", sub.alphabet().tag())?;
        st.serialize_field("image1", &sub.format_image(true))?;
        st.serialize_field("image0", &sub.format_image(false))?;
        st.serialize_field("prefix_hash", &self.prefix_hash)?;
        st.serialize_field("type2", &self.type2)?;
        st.serialize_field("type2_exact", &self.type2_exact)?;
        st.serialize_field("novel", &self.novel)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub family: String,
    pub p: u64,
    pub depth: usize,
    pub verify_depth: usize,
    pub candidates: u64,
    /// Type II candidates of odd length that passed the prefix screen but
    /// fail the exact condition.
    pub screen_only: u64,
    pub survivors: Vec<ScanSurvivor>,
}

pub const MIN_SCAN_DEPTH: usize = 256;
pub const VERIFY_FACTOR: usize = 16;

enum Outcome {
    Rejected,
    ScreenOnly,
    Survived(Box<ScanSurvivor>),
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn evaluate(family: Family, p: usize, index: u64, depth: usize) -> Result<Outcome> {
    let sub = family.candidate(p, index)?;
    let verify = depth * VERIFY_FACTOR;
    // a cheap short screen rejects most candidates early
    for len in [depth.min(64), depth] {
        if !fixed_point_passes(&sub, len)? {
            return Ok(Outcome::Rejected);
        }
    }
    let type2 = sub.is_type2();
    let type2_exact = (type2 && p % 2 == 1).then(|| satisfies_type2_condition(&sub.signs1()));
    if type2_exact == Some(false) {
        return Ok(Outcome::ScreenOnly);
    }
    let prefix = fixed_point(&sub, verify)?;
    let passes = match &prefix {
        Sequence::Binary(c) => check_01(c)?.passed(),
        Sequence::Signed(d) => check_pm(d)?.passed(),
    };
    if !passes {
        if type2_exact == Some(true) {
            return Err(Error::Invariant(format!(
                "{sub} satisfies the exact condition but fails at depth {verify}"
            )));
        }
        return Ok(Outcome::Rejected);
    }
    let novel = match family.alphabet() {
        Alphabet::ZeroOne => prefix != named_sequence(NamedSequence::PeriodDoubling, verify),
        Alphabet::PlusMinus => {
            !type2
                || (p.is_multiple_of(2)
                    && prefix != named_sequence(NamedSequence::ThueMorsePm, verify))
        }
    };
    Ok(Outcome::Survived(Box::new(ScanSurvivor {
        prefix_hash: sha256_hex(&prefix.to_string()),
        substitution: sub,
        type2,
        type2_exact,
        novel,
    })))
}

/// Enumerates every candidate of the family with length `p`, screens its
/// fixed point with the matching criterion on `depth` terms and re-verifies
/// survivors on `16·depth` terms. Runs on the current rayon pool; the
/// survivor list is in candidate order.
pub fn scan_family(family: Family, p: u64, depth: usize) -> Result<ScanReport> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    if p > family.max_p() {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{family} scans are limited to p <= {}",
            family.max_p()
        )));
    }
    if depth < MIN_SCAN_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "scan depth must be at least {MIN_SCAN_DEPTH}, got {depth}"
        )));
    }
    let pu = p as usize;
    let candidates = 1u64 << family.free_bits(pu);
    let outcomes: Vec<Outcome> = (0..candidates)
        .into_par_iter()
        .map(|i| evaluate(family, pu, i, depth))
        .filter(|o| !matches!(o, Ok(Outcome::Rejected)))
        .collect::<Result<_>>()?;
    let mut survivors = Vec::new();
    let mut screen_only = 0;
    for o in outcomes {
        match o {
            Outcome::Survived(s) => survivors.push(*s),
            Outcome::ScreenOnly => screen_only += 1,
            Outcome::Rejected => {}
        }
    }
    Ok(ScanReport {
        family: family.name().to_string(),
        p,
        depth,
        verify_depth: depth * VERIFY_FACTOR,
        candidates,
        screen_only,
        survivors,
    })
}

//! Finite prefixes of binary and ±1 sequences.
//!
//! Both kinds are bit-packed. A ±1 symbol `s` is stored as the bit
//! `(1 - s) / 2`, so `+1` is `0` and `-1` is `1`. Every identity on
//! ±1 values is translated to bit operations at this boundary only.
//!
//! Sturmian prefixes use the standard-word recursion
//! `s_k = s_{k-1}^{a_k} s_{k-2}` with `s_{-1} = 0` and `s_0 = 1`.
//! With all directives equal to 1 this gives the Fibonacci prefix
//! `10110101...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Bit-packed prefix of a 0-1 sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSeq {
    words: Vec<u64>,
    len: usize,
}

impl BitSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(len: usize) -> Self {
        BitSeq {
            words: Vec::with_capacity(len.div_ceil(WORD)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        BitSeq {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.mask_tail();
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        ((self.words[i / WORD] >> (i % WORD)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if bit & 1 == 1 {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: u8) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn truncate(&mut self, len: usize) {
        if len < self.len {
            self.len = len;
            self.words.truncate(len.div_ceil(WORD));
            self.mask_tail();
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copy of symbols `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitSeq {
        assert!(start + len <= self.len);
        (start..start + len).map(|i| self.get(i)).collect()
    }

    /// Packed storage; bits past `len` are zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl FromIterator<u8> for BitSeq {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut s = BitSeq::new();
        for b in iter {
            s.push(b);
        }
        s
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    index: i,
                    message: format!("expected '0' or '1', found {ch:?}"),
                }),
            })
            .collect()
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq({self})")
    }
}

/// Bit-packed prefix of a ±1 sequence (`+1` stored as 0, `-1` as 1).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SignSeq {
    bits: BitSeq,
}

impl SignSeq {
    pub fn from_bits(bits: BitSeq) -> Self {
        SignSeq { bits }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        signs
            .iter()
            .enumerate()
            .map(|(i, &s)| match s {
                1 => Ok(0u8),
                -1 => Ok(1u8),
                _ => Err(Error::Parse {
                    index: i,
                    message: format!("expected +1 or -1, found {s}"),
                }),
            })
            .collect::<Result<BitSeq>>()
            .map(SignSeq::from_bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        1 - 2 * self.bits.get(i) as i8
    }

    pub fn push(&mut self, sign: i8) {
        debug_assert!(sign == 1 || sign == -1);
        self.bits.push(u8::from(sign < 0));
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Underlying storage bits `b_i = (1 - d_i) / 2`.
    pub fn bits(&self) -> &BitSeq {
        &self.bits
    }

    pub fn negate(&self) -> SignSeq {
        SignSeq::from_bits(conjugate(&self.bits))
    }
}

impl FromStr for SignSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '+' => Ok(0u8),
                '-' => Ok(1u8),
                _ => Err(Error::Parse {
                    index: i,
                    message: format!("expected '+' or '-', found {ch:?}"),
                }),
            })
            .collect::<Result<BitSeq>>()
            .map(SignSeq::from_bits)
    }
}

impl fmt::Display for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter() {
            f.write_str(if b == 1 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignSeq({self})")
    }
}

/// Either kind of prefix, as produced by generators that serve both alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequence {
    Binary(BitSeq),
    Signed(SignSeq),
}

impl Sequence {
    pub fn len(&self) -> usize {
        match self {
            Sequence::Binary(s) => s.len(),
            Sequence::Signed(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Sequence::Binary(_) => Alphabet::ZeroOne,
            Sequence::Signed(_) => Alphabet::PlusMinus,
        }
    }

    pub fn into_bits(self) -> Option<BitSeq> {
        match self {
            Sequence::Binary(s) => Some(s),
            Sequence::Signed(_) => None,
        }
    }

    pub fn into_signs(self) -> Option<SignSeq> {
        match self {
            Sequence::Signed(s) => Some(s),
            Sequence::Binary(_) => None,
        }
    }

    /// Integer value of symbol `i` (0/1 or ±1).
    pub fn value(&self, i: usize) -> i64 {
        match self {
            Sequence::Binary(s) => s.get(i) as i64,
            Sequence::Signed(s) => s.get(i) as i64,
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Binary(s) => s.fmt(f),
            Sequence::Signed(s) => s.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Letters `1` and `0`.
    ZeroOne,
    /// Letters `+1` and `-1`.
    PlusMinus,
}

impl Alphabet {
    pub fn tag(self) -> &'static str {
        match self {
            Alphabet::ZeroOne => "01",
            Alphabet::PlusMinus => "pm",
        }
    }
}

/// Constant-length substitution on a two-letter alphabet.
///
/// Images are stored over abstract letters: `true` is the letter `1`
/// (resp. `+1`) and `false` is `0` (resp. `-1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    alphabet: Alphabet,
    image1: Vec<bool>,
    image0: Vec<bool>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, image1: Vec<bool>, image0: Vec<bool>) -> Result<Self> {
        if image1.len() != image0.len() {
            return Err(Error::InvalidSubstitution(format!(
                "image lengths differ ({} vs {})",
                image1.len(),
                image0.len()
            )));
        }
        if image1.len() < 2 {
            return Err(Error::InvalidSubstitution(format!(
                "length must be at least 2, got {}",
                image1.len()
            )));
        }
        Ok(Substitution {
            alphabet,
            image1,
            image0,
        })
    }

    /// Parses images such as `"10"`/`"11"` (0-1) or `"+-"`/`"-+"` (±1).
    pub fn parse(alphabet: Alphabet, image1: &str, image0: &str) -> Result<Self> {
        let word = |s: &str| -> Result<Vec<bool>> {
            s.trim()
                .chars()
                .enumerate()
                .map(|(i, ch)| match (alphabet, ch) {
                    (Alphabet::ZeroOne, '1') | (Alphabet::PlusMinus, '+') => Ok(true),
                    (Alphabet::ZeroOne, '0') | (Alphabet::PlusMinus, '-') => Ok(false),
                    _ => Err(Error::Parse {
                        index: i,
                        message: format!("letter {ch:?} not in alphabet {}", alphabet.tag()),
                    }),
                })
                .collect()
        };
        Self::new(alphabet, word(image1)?, word(image0)?)
    }

    /// The type II substitution `1 -> v`, `-1 -> -v`.
    pub fn type2(v: &[i8]) -> Result<Self> {
        let image1: Vec<bool> = v.iter().map(|&x| x > 0).collect();
        let image0 = image1.iter().map(|&x| !x).collect();
        Self::new(Alphabet::PlusMinus, image1, image0)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.image1.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn image1(&self) -> &[bool] {
        &self.image1
    }

    pub fn image0(&self) -> &[bool] {
        &self.image0
    }

    pub fn image(&self, letter: bool) -> &[bool] {
        if letter {
            &self.image1
        } else {
            &self.image0
        }
    }

    pub fn is_prolongable(&self) -> bool {
        self.image1[0]
    }

    /// Positions where both images carry the same letter.
    pub fn agreement_set(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.image1[j] == self.image0[j])
            .collect()
    }

    pub fn is_type2(&self) -> bool {
        self.alphabet == Alphabet::PlusMinus && self.agreement_set().is_empty()
    }

    /// Image of the letter 1 as ±1 values (only meaningful for `PlusMinus`).
    pub fn signs1(&self) -> Vec<i8> {
        self.image1
            .iter()
            .map(|&b| if b { 1 } else { -1 })
            .collect()
    }

    pub fn format_image(&self, letter: bool) -> String {
        self.image(letter)
            .iter()
            .map(|&b| match (self.alphabet, b) {
                (Alphabet::ZeroOne, true) => '1',
                (Alphabet::ZeroOne, false) => '0',
                (Alphabet::PlusMinus, true) => '+',
                (Alphabet::PlusMinus, false) => '-',
            })
            .collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (one, zero) = match self.alphabet {
            Alphabet::ZeroOne => ("1", "0"),
            Alphabet::PlusMinus => ("+", "-"),
        };
        write!(
            f,
            "{one}->{}, {zero}->{}",
            self.format_image(true),
            self.format_image(false)
        )
    }
}

/// First `len` letters of the fixed point `lim σ^n(1)`, as abstract letters.
pub fn fixed_point_letters(sub: &Substitution, len: usize) -> Result<Vec<bool>> {
    if !sub.is_prolongable() {
        return Err(Error::NotProlongable);
    }
    let p = sub.len();
    let mut buf: Vec<bool> = Vec::with_capacity(len + p);
    buf.extend_from_slice(sub.image1());
    // σ maps the buffer's n-th letter to the block at n·p; since p ≥ 2 the
    // block is always appended after its source letter is known.
    let mut n = 1;
    while buf.len() < len {
        let letter = buf[n];
        buf.extend_from_slice(sub.image(letter));
        n += 1;
    }
    buf.truncate(len);
    Ok(buf)
}

/// First `len` symbols of the fixed point of `sub` starting with the letter 1.
pub fn fixed_point(sub: &Substitution, len: usize) -> Result<Sequence> {
    let letters = fixed_point_letters(sub, len)?;
    Ok(match sub.alphabet() {
        Alphabet::ZeroOne => Sequence::Binary(letters.iter().map(|&b| u8::from(b)).collect()),
        Alphabet::PlusMinus => Sequence::Signed(SignSeq::from_bits(
            letters.iter().map(|&b| u8::from(!b)).collect(),
        )),
    })
}

/// Sequences defined by explicit recurrences rather than substitution expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSequence {
    /// `d_0 = 1`, `d_{2n} = d_n`, `d_{2n+1} = -d_n`.
    ThueMorsePm,
    /// `t_0 = 1`, `t_{2n} = t_n`, `t_{2n+1} = 1 - t_n`.
    ThueMorse01,
    /// `c_{2n} = 1`, `c_{2n+1} = 1 - c_n`.
    PeriodDoubling,
    /// Thue–Morse with every letter doubled:
    /// `d_{4n} = d_{4n+1} = d_{2n}`, `d_{4n+2} = d_{4n+3} = -d_{2n}`.
    DoubledThueMorse,
    /// Coding of `a -> a1, 1 -> -1 1, -1 -> 1 -1` from `a`:
    /// `d_0 = 1`, `d_{2n+1} = d_n`, `d_{2n+2} = -d_{n+1}`.
    CodedMorphism,
}

impl NamedSequence {
    pub const ALL: [NamedSequence; 5] = [
        NamedSequence::ThueMorsePm,
        NamedSequence::ThueMorse01,
        NamedSequence::PeriodDoubling,
        NamedSequence::DoubledThueMorse,
        NamedSequence::CodedMorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedSequence::ThueMorsePm => "thue-morse-pm",
            NamedSequence::ThueMorse01 => "thue-morse-01",
            NamedSequence::PeriodDoubling => "period-doubling",
            NamedSequence::DoubledThueMorse => "doubled-thue-morse",
            NamedSequence::CodedMorphism => "coded-morphism",
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            NamedSequence::ThueMorse01 | NamedSequence::PeriodDoubling => Alphabet::ZeroOne,
            _ => Alphabet::PlusMinus,
        }
    }
}

impl FromStr for NamedSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('_', "-");
        NamedSequence::ALL
            .into_iter()
            .find(|n| n.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown sequence name {s:?}")))
    }
}

/// Prefix of a named sequence, computed from its defining recurrences.
pub fn named_sequence(name: NamedSequence, len: usize) -> Sequence {
    // All recurrences below are written on storage bits; for ±1 sequences
    // negation is XOR with 1.
    let mut b = vec![0u8; len];
    for n in 0..len {
        b[n] = match name {
            NamedSequence::ThueMorsePm => {
                if n == 0 {
                    0
                } else {
                    b[n / 2] ^ (n as u8 & 1)
                }
            }
            NamedSequence::ThueMorse01 => {
                if n == 0 {
                    1
                } else {
                    b[n / 2] ^ (n as u8 & 1)
                }
            }
            NamedSequence::PeriodDoubling => {
                if n % 2 == 0 {
                    1
                } else {
                    1 ^ b[n / 2]
                }
            }
            NamedSequence::DoubledThueMorse => {
                if n < 2 {
                    0
                } else {
                    let base = b[2 * (n / 4)];
                    if n % 4 < 2 {
                        base
                    } else {
                        base ^ 1
                    }
                }
            }
            NamedSequence::CodedMorphism => {
                if n == 0 {
                    0
                } else if n % 2 == 1 {
                    b[(n - 1) / 2]
                } else {
                    b[n / 2] ^ 1
                }
            }
        };
    }
    let bits: BitSeq = b.into_iter().collect();
    match name.alphabet() {
        Alphabet::ZeroOne => Sequence::Binary(bits),
        Alphabet::PlusMinus => Sequence::Signed(SignSeq::from_bits(bits)),
    }
}

/// Continued-fraction partial quotients selecting a characteristic Sturmian word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SturmianSpec {
    directives: Vec<u32>,
}

impl SturmianSpec {
    pub fn new(directives: Vec<u32>) -> Result<Self> {
        if directives.is_empty() {
            return Err(Error::InvalidDirectives("directive list is empty".into()));
        }
        if let Some(pos) = directives.iter().position(|&a| a == 0) {
            return Err(Error::InvalidDirectives(format!(
                "directive {pos} is zero; all directives must be >= 1"
            )));
        }
        Ok(SturmianSpec { directives })
    }

    pub fn directives(&self) -> &[u32] {
        &self.directives
    }
}

impl FromStr for SturmianSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let directives = s
            .split(',')
            .enumerate()
            .map(|(i, tok)| {
                tok.trim().parse::<u32>().map_err(|e| Error::Parse {
                    index: i,
                    message: format!("directive {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SturmianSpec::new(directives)
    }
}

/// Prefix of the characteristic Sturmian word with the given directives.
///
/// Uses `s_{-1} = 0`, `s_0 = 1`, `s_k = s_{k-1}^{a_k} s_{k-2}`; each `s_k`
/// is a prefix of `s_{k+1}`, and the longest word built is truncated.
pub fn sturmian_characteristic(spec: &SturmianSpec, len: usize) -> Result<BitSeq> {
    let mut prev: Vec<u8> = vec![0];
    let mut cur: Vec<u8> = vec![1];
    for &a in spec.directives() {
        if cur.len() >= len {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() * a as usize + prev.len());
        for _ in 0..a {
            next.extend_from_slice(&cur);
            if next.len() >= len {
                break;
            }
        }
        next.extend_from_slice(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    if cur.len() < len {
        return Err(Error::InsufficientDirectives {
            needed: len,
            produced: cur.len(),
        });
    }
    Ok(cur[..len].iter().copied().collect())
}

/// `c_i = ((d_i - d_{i+2}) / 2) mod 2`, i.e. 1 exactly when `d_i != d_{i+2}`.
pub fn project_to_01(d: &SignSeq) -> Result<BitSeq> {
    crate::error::ensure_len(d.len(), 3)?;
    let b = d.bits();
    Ok((0..d.len() - 2).map(|i| b.get(i) ^ b.get(i + 2)).collect())
}

/// Symbolwise flip `c_i -> 1 - c_i`.
pub fn conjugate(c: &BitSeq) -> BitSeq {
    let mut out = c.clone();
    for w in out.words.iter_mut() {
        *w = !*w;
    }
    out.mask_tail();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(s: &str) -> SignSeq {
        s.replace(' ', "").parse().unwrap()
    }

    #[test]
    fn period_doubling_fixed_point() {
        let sub = Substitution::parse(Alphabet::ZeroOne, "10", "11").unwrap();
        let c = fixed_point(&sub, 15).unwrap().into_bits().unwrap();
        assert_eq!(c.to_string(), "101110101011101");
    }

    #[test]
    fn constant_image_gives_constant_sequence() {
        let sub = Substitution::parse(Alphabet::ZeroOne, "11", "01").unwrap();
        let c = fixed_point(&sub, 5).unwrap().into_bits().unwrap();
        assert_eq!(c.to_string(), "11111");
    }

    #[test]
    fn thue_morse_substitution_expansion() {
        let sub = Substitution::parse(Alphabet::PlusMinus, "+-", "-+").unwrap();
        let d = fixed_point(&sub, 8).unwrap().into_signs().unwrap();
        assert_eq!(d.to_string(), "+--+-++-");
    }

    #[test]
    fn not_prolongable() {
        let sub = Substitution::parse(Alphabet::ZeroOne, "01", "11").unwrap();
        assert_eq!(fixed_point(&sub, 4), Err(Error::NotProlongable));
    }

    #[test]
    fn substitution_validation() {
        assert!(Substitution::parse(Alphabet::ZeroOne, "1", "0").is_err());
        assert!(Substitution::parse(Alphabet::ZeroOne, "10", "110").is_err());
        assert!(Substitution::parse(Alphabet::ZeroOne, "1+", "11").is_err());
    }

    #[test]
    fn agreement_set_and_type2() {
        let sub = Substitution::parse(Alphabet::PlusMinus, "++-", "-+-").unwrap();
        assert_eq!(sub.agreement_set(), vec![1, 2]);
        assert!(!sub.is_type2());
        let t = Substitution::type2(&[1, 1, -1]).unwrap();
        assert!(t.is_type2());
        assert_eq!(t.to_string(), "+->++-, -->--+");
    }

    #[test]
    fn named_prefixes() {
        let coded = named_sequence(NamedSequence::CodedMorphism, 16);
        assert_eq!(
            coded,
            Sequence::Signed(pm("+ + - + + - - + - + + - + - - +"))
        );
        let doubled = named_sequence(NamedSequence::DoubledThueMorse, 16);
        assert_eq!(
            doubled,
            Sequence::Signed(pm("+ + - - - - + + - - + + + + - -"))
        );
        let pd = named_sequence(NamedSequence::PeriodDoubling, 4);
        assert_eq!(pd.to_string(), "1011");
        let tm01 = named_sequence(NamedSequence::ThueMorse01, 8);
        assert_eq!(tm01.to_string(), "10010110");
    }

    #[test]
    fn named_sequences_match_substitutions() {
        let tm = named_sequence(NamedSequence::ThueMorsePm, 512);
        let sub = Substitution::parse(Alphabet::PlusMinus, "+-", "-+").unwrap();
        assert_eq!(tm, fixed_point(&sub, 512).unwrap());

        let pd = named_sequence(NamedSequence::PeriodDoubling, 512);
        let sub = Substitution::parse(Alphabet::ZeroOne, "10", "11").unwrap();
        assert_eq!(pd, fixed_point(&sub, 512).unwrap());
    }

    #[test]
    fn doubled_thue_morse_matches_morphism_construction() {
        // Apply 1 -> 11, -1 -> -1-1 to the Thue–Morse prefix.
        let tm = named_sequence(NamedSequence::ThueMorsePm, 256)
            .into_signs()
            .unwrap();
        let mut doubled = SignSeq::default();
        for s in tm.iter() {
            doubled.push(s);
            doubled.push(s);
        }
        assert_eq!(
            named_sequence(NamedSequence::DoubledThueMorse, 512),
            Sequence::Signed(doubled)
        );
    }

    #[test]
    fn coded_morphism_matches_three_letter_substitution() {
        // a -> a1, 1 -> -1 1, -1 -> 1 -1, then code a -> 1.
        #[derive(Clone, Copy, PartialEq)]
        enum L {
            A,
            P,
            M,
        }
        let mut w = vec![L::A];
        while w.len() < 300 {
            w = w
                .iter()
                .flat_map(|&l| match l {
                    L::A => [L::A, L::P],
                    L::P => [L::M, L::P],
                    L::M => [L::P, L::M],
                })
                .collect();
        }
        let coded: Vec<i8> = w[..256]
            .iter()
            .map(|&l| if l == L::M { -1 } else { 1 })
            .collect();
        assert_eq!(
            named_sequence(NamedSequence::CodedMorphism, 256),
            Sequence::Signed(SignSeq::from_signs(&coded).unwrap())
        );
    }

    #[test]
    fn named_sequence_names_round_trip() {
        for n in NamedSequence::ALL {
            assert_eq!(n.name().parse::<NamedSequence>().unwrap(), n);
        }
        assert_eq!(
            "thue_morse_pm".parse::<NamedSequence>().unwrap(),
            NamedSequence::ThueMorsePm
        );
    }

    #[test]
    fn fibonacci_sturmian_prefix() {
        let spec = SturmianSpec::new(vec![1; 6]).unwrap();
        assert_eq!(
            sturmian_characteristic(&spec, 8).unwrap().to_string(),
            "10110101"
        );
        let one = SturmianSpec::new(vec![1]).unwrap();
        assert_eq!(sturmian_characteristic(&one, 1).unwrap().len(), 1);
    }

    #[test]
    fn sturmian_balanced_small() {
        let spec = SturmianSpec::new(vec![2, 1, 1, 1]).unwrap();
        let w = sturmian_characteristic(&spec, 5).unwrap();
        assert_eq!(w.to_string(), "11011");
        assert!(is_balanced(&w, 5));
    }

    #[test]
    fn sturmian_errors() {
        let spec = SturmianSpec::new(vec![1, 1]).unwrap();
        assert!(matches!(
            sturmian_characteristic(&spec, 100),
            Err(Error::InsufficientDirectives { .. })
        ));
        assert!(SturmianSpec::new(vec![]).is_err());
        assert!(SturmianSpec::new(vec![1, 0]).is_err());
        assert!("1, x".parse::<SturmianSpec>().is_err());
    }

    pub(crate) fn is_balanced(w: &BitSeq, max_len: usize) -> bool {
        (1..=max_len.min(w.len())).all(|l| {
            let counts: Vec<usize> = (0..=w.len() - l)
                .map(|s| (s..s + l).filter(|&i| w.get(i) == 1).count())
                .collect();
            counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1
        })
    }

    fn distinct_factors(w: &BitSeq, l: usize) -> usize {
        let mut set = std::collections::HashSet::new();
        for s in 0..=w.len() - l {
            set.insert(w.slice(s, l));
        }
        set.len()
    }

    #[test]
    fn sturmian_balance_and_complexity() {
        for dirs in [
            vec![1u32; 20],
            vec![2, 1, 3, 1, 2, 1, 1, 4, 1, 2, 3],
            vec![3, 2, 2, 2, 2, 2, 2, 2, 2],
        ] {
            let spec = SturmianSpec::new(dirs).unwrap();
            let w = sturmian_characteristic(&spec, 2000).unwrap();
            assert!(is_balanced(&w, 20));
            for l in 1..=20 {
                assert_eq!(distinct_factors(&w, l), l + 1, "factor length {l}");
            }
        }
    }

    #[test]
    fn projection_examples() {
        let tm = pm("+--+-++--++-+--+");
        assert_eq!(project_to_01(&tm).unwrap().to_string(), "11001111110011");
        let constant = SignSeq::from_bits(BitSeq::zeros(10));
        assert_eq!(project_to_01(&constant).unwrap(), BitSeq::zeros(8));
        let alt = pm("+-+-+-+-+");
        assert_eq!(project_to_01(&alt).unwrap(), BitSeq::zeros(7));
        assert_eq!(
            project_to_01(&pm("+-")),
            Err(Error::TooShort { needed: 3, got: 2 })
        );
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&"1011".parse().unwrap()).to_string(), "0100");
        assert_eq!(conjugate(&BitSeq::zeros(5)), BitSeq::ones(5));
    }

    #[test]
    fn parse_errors_name_the_index() {
        assert_eq!(
            "10x1".parse::<BitSeq>(),
            Err(Error::Parse {
                index: 2,
                message: "expected '0' or '1', found 'x'".into()
            })
        );
        assert!(matches!(
            "+-0".parse::<SignSeq>(),
            Err(Error::Parse { index: 2, .. })
        ));
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitSeq> {
        proptest::collection::vec(0u8..2, 0..max).prop_map(|v| v.into_iter().collect())
    }

    fn arb_sub() -> impl Strategy<Value = Substitution> {
        (2usize..7, any::<bool>()).prop_flat_map(|(p, pm)| {
            (
                proptest::collection::vec(any::<bool>(), p - 1),
                proptest::collection::vec(any::<bool>(), p),
            )
                .prop_map(move |(rest, image0)| {
                    let mut image1 = vec![true];
                    image1.extend(rest);
                    let alphabet = if pm {
                        Alphabet::PlusMinus
                    } else {
                        Alphabet::ZeroOne
                    };
                    Substitution::new(alphabet, image1, image0).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(c in arb_bits(300)) {
            prop_assert_eq!(conjugate(&conjugate(&c)), c);
        }

        #[test]
        fn text_round_trip(c in arb_bits(200)) {
            prop_assert_eq!(c.to_string().parse::<BitSeq>().unwrap(), c.clone());
            let d = SignSeq::from_bits(c);
            prop_assert_eq!(d.to_string().parse::<SignSeq>().unwrap(), d);
        }

        #[test]
        fn fixed_point_block_recurrence(sub in arb_sub(), len in 1usize..60) {
            let p = sub.len();
            let short = fixed_point_letters(&sub, len).unwrap();
            let long = fixed_point_letters(&sub, len * p).unwrap();
            for n in 0..len {
                for j in 0..p {
                    prop_assert_eq!(long[n * p + j], sub.image(short[n])[j]);
                }
            }
        }

        #[test]
        fn projection_commutes_with_shift_by_two(c in proptest::collection::vec(0u8..2, 5..200)) {
            let d = SignSeq::from_bits(c.iter().copied().collect());
            let shifted = SignSeq::from_bits(c[2..].iter().copied().collect());
            let projected = project_to_01(&d).unwrap();
            let lhs = project_to_01(&shifted).unwrap();
            prop_assert_eq!(lhs, projected.slice(2, projected.len() - 2));
        }
    }

    #[test]
    fn thue_morse_recurrences() {
        let d = named_sequence(NamedSequence::ThueMorsePm, 1000)
            .into_signs()
            .unwrap();
        for n in 0..500 {
            assert_eq!(d.get(2 * n), d.get(n));
            assert_eq!(d.get(2 * n + 1), -d.get(n));
        }
    }
}

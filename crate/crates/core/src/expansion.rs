//! Exact rationals and their radix-2 / radix-3 digit expansions.
//!
//! An expansion is a finite prefix followed by a finite tail repeated forever;
//! an empty tail stands for trailing zeros. Digits are stored most significant
//! first, so position `k` (counting from 1) is the coefficient of `base^-k`.
//!
//! Rationals of the form `m / base^n` have two expansions. [`expand`] returns
//! the non-terminating one (ending in repeated `base - 1`); the terminating
//! twin is available through [`expand_with`] and [`dual_representations`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number; the ground truth for every point of `[0, 1]`.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^-exponent` as an exact rational.
pub fn inverse_power(base: u32, exponent: u32) -> Rational {
    BigRational::new(BigInt::one(), BigInt::from(base).pow(exponent))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::domain(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

pub(crate) fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        Err(Error::domain(format!("{} lies outside [0, 1]", format_rational(x))))
    } else {
        Ok(())
    }
}

/// Radix of an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Binary,
    Ternary,
}

impl Base {
    pub const fn radix(self) -> u8 {
        match self {
            Base::Binary => 2,
            Base::Ternary => 3,
        }
    }

    pub const fn max_digit(self) -> u8 {
        self.radix() - 1
    }

    pub fn from_radix(radix: u32) -> Result<Self> {
        match radix {
            2 => Ok(Base::Binary),
            3 => Ok(Base::Ternary),
            r => Err(Error::domain(format!("unsupported base {r}; expected 2 or 3"))),
        }
    }
}

/// Which of the two expansions of a base-b rational `m / b^n` to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Ends in repeated `b - 1`. This is the canonical choice.
    #[default]
    NonTerminating,
    /// Ends in trailing zeros.
    Terminating,
}

/// Radix expansion `0.(prefix)(tail)(tail)...` in base 2 or 3.
///
/// Values are kept normalized: the tail is its own minimal period, the prefix
/// is as short as possible, and an all-zero tail is stored as empty. Two
/// expansions therefore compare equal exactly when their digit sequences do.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: Base,
    prefix: Vec<u8>,
    tail: Vec<u8>,
}

impl DigitExpansion {
    pub fn new(base: Base, prefix: Vec<u8>, tail: Vec<u8>) -> Result<Self> {
        if let Some(d) = prefix.iter().chain(&tail).find(|&&d| d > base.max_digit()) {
            return Err(Error::domain(format!(
                "digit {d} is not valid in base {}",
                base.radix()
            )));
        }
        let mut e = DigitExpansion { base, prefix, tail };
        e.normalize();
        Ok(e)
    }

    pub fn zero(base: Base) -> Self {
        DigitExpansion {
            base,
            prefix: Vec::new(),
            tail: Vec::new(),
        }
    }

    /// `0.(b-1)(b-1)...`, the expansion of 1.
    pub fn one(base: Base) -> Self {
        DigitExpansion {
            base,
            prefix: Vec::new(),
            tail: vec![base.max_digit()],
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> &[u8] {
        &self.tail
    }

    /// True when the digits are eventually zero.
    pub fn is_terminating(&self) -> bool {
        self.tail.is_empty()
    }

    /// Digit at `position`, counting from 1.
    pub fn digit(&self, position: usize) -> u8 {
        assert!(position >= 1, "digit positions start at 1");
        let i = position - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else if self.tail.is_empty() {
            0
        } else {
            self.tail[(i - self.prefix.len()) % self.tail.len()]
        }
    }

    /// The infinite digit sequence.
    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        let tail: Box<dyn Iterator<Item = u8> + '_> = if self.tail.is_empty() {
            Box::new(std::iter::repeat(0))
        } else {
            Box::new(self.tail.iter().copied().cycle())
        };
        self.prefix.iter().copied().chain(tail)
    }

    /// The first `k` digits, unrolling the tail as needed.
    pub fn truncate(&self, k: usize) -> Vec<u8> {
        self.digits().take(k).collect()
    }

    /// Number of digits after which the whole sequence is determined.
    pub fn period_end(&self) -> usize {
        self.prefix.len() + self.tail.len()
    }

    /// Position of the first digit satisfying `pred`, if any.
    ///
    /// Terminates because only prefix and one tail period need scanning.
    pub fn position_of(&self, pred: impl FnMut(u8) -> bool) -> Option<usize> {
        let scan = self.period_end().max(self.prefix.len() + 1);
        self.digits().take(scan).position(pred).map(|i| i + 1)
    }

    /// True when the digit never occurs anywhere in the expansion.
    pub fn avoids(&self, digit: u8) -> bool {
        self.position_of(|d| d == digit).is_none()
    }

    /// Exact value `sum(prefix) + geometric sum of the tail`.
    pub fn value(&self) -> Rational {
        let b = BigInt::from(self.base.radix());
        let word = |digits: &[u8]| digits.iter().fold(BigInt::zero(), |acc, &d| acc * &b + BigInt::from(d));
        let scale = b.pow(self.prefix.len() as u32);
        let head = BigRational::new(word(&self.prefix), scale.clone());
        if self.tail.is_empty() {
            return head;
        }
        let period = b.pow(self.tail.len() as u32) - BigInt::one();
        head + BigRational::new(word(&self.tail), period * scale)
    }

    /// Same digits with the one at `position` replaced.
    pub fn with_digit(&self, position: usize, digit: u8) -> Result<Self> {
        assert!(position >= 1, "digit positions start at 1");
        let (mut prefix, tail) = self.unrolled(position, 1);
        prefix[position - 1] = digit;
        DigitExpansion::new(self.base, prefix, tail)
    }

    /// Applies `f` digitwise, keeping the prefix/tail structure.
    pub fn map_digits(&self, base: Base, f: impl Fn(u8) -> u8) -> Result<Self> {
        DigitExpansion::new(
            base,
            self.prefix.iter().map(|&d| f(d)).collect(),
            self.tail.iter().map(|&d| f(d)).collect(),
        )
    }

    /// Equivalent (prefix, tail) pair where the prefix has at least
    /// `min_prefix` digits and the tail length is a multiple of
    /// `tail_multiple`. An empty tail is returned as empty.
    pub(crate) fn unrolled(&self, min_prefix: usize, tail_multiple: usize) -> (Vec<u8>, Vec<u8>) {
        let prefix_len = self.prefix.len().max(min_prefix);
        let prefix = self.truncate(prefix_len);
        if self.tail.is_empty() {
            return (prefix, Vec::new());
        }
        let t = self.tail.len();
        let tail_len = t / t.gcd(&tail_multiple) * tail_multiple;
        let tail = self.digits().skip(prefix_len).take(tail_len).collect();
        (prefix, tail)
    }

    fn normalize(&mut self) {
        // minimal period
        let t = self.tail.len();
        if let Some(p) = (1..t).find(|&p| t.is_multiple_of(p) && (p..t).all(|i| self.tail[i] == self.tail[i - p])) {
            self.tail.truncate(p);
        }
        // absorb prefix digits that already belong to the periodic part
        while let (Some(&last), Some(&tail_last)) = (self.prefix.last(), self.tail.last()) {
            if last != tail_last {
                break;
            }
            self.prefix.pop();
            self.tail.rotate_right(1);
        }
        if self.tail == [0] {
            self.tail.clear();
        }
        if self.tail.is_empty() {
            while self.prefix.last() == Some(&0) {
                self.prefix.pop();
            }
        }
    }
}

impl fmt::Display for DigitExpansion {
    /// `0.01(2)_3`: prefix `01`, tail `2`, base 3.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0.")?;
        if self.prefix.is_empty() && self.tail.is_empty() {
            f.write_str("0")?;
        }
        for d in &self.prefix {
            write!(f, "{d}")?;
        }
        if !self.tail.is_empty() {
            f.write_str("(")?;
            for d in &self.tail {
                write!(f, "{d}")?;
            }
            f.write_str(")")?;
        }
        write!(f, "_{}", self.base.radix())
    }
}

impl FromStr for DigitExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::domain(format!("malformed expansion {s:?}: {why}"));
        let body = s.trim().strip_prefix("0.").ok_or_else(|| bad("missing leading 0."))?;
        let (digits, radix) = body.rsplit_once('_').ok_or_else(|| bad("missing _base suffix"))?;
        let radix: u32 = radix.parse().map_err(|_| bad("base is not a number"))?;
        let base = Base::from_radix(radix)?;
        let (prefix, tail) = match digits.split_once('(') {
            Some((p, t)) => (p, t.strip_suffix(')').ok_or_else(|| bad("unclosed tail"))?),
            None => (digits, ""),
        };
        let parse = |part: &str| -> Result<Vec<u8>> {
            part.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| bad("non-digit character"))
                })
                .collect()
        };
        DigitExpansion::new(base, parse(prefix)?, parse(tail)?)
    }
}

/// If the reduced denominator of `x` is `base^n`, returns `n`.
pub fn base_power_exponent(x: &Rational, base: Base) -> Option<u32> {
    let b = BigInt::from(base.radix());
    let mut d = x.denom().clone();
    let mut n = 0;
    while d > BigInt::one() {
        let (q, r) = d.div_rem(&b);
        if !r.is_zero() {
            return None;
        }
        d = q;
        n += 1;
    }
    Some(n)
}

/// Canonical expansion of `x` in `base`: exact, periodic, and non-terminating
/// whenever `x` has two expansions.
pub fn expand(x: &Rational, base: Base) -> Result<DigitExpansion> {
    expand_with(x, base, Convention::NonTerminating)
}

/// Expansion of `x` by long division with remainder-cycle detection.
///
/// `convention` only matters for `x = m / base^n` with `0 < x < 1`. Zero
/// always expands to all zeros and one to all `base - 1`.
pub fn expand_with(x: &Rational, base: Base, convention: Convention) -> Result<DigitExpansion> {
    check_unit(x)?;
    if x.is_zero() {
        return Ok(DigitExpansion::zero(base));
    }
    if x.is_one() {
        return Ok(DigitExpansion::one(base));
    }
    let b = BigInt::from(base.radix());
    let q = x.denom();
    let mut r = x.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<u8> = Vec::new();
    loop {
        if r.is_zero() {
            // terminating: last digit is nonzero because x > 0
            let mut prefix = digits;
            if convention == Convention::NonTerminating {
                *prefix.last_mut().expect("x > 0 has a nonzero digit") -= 1;
                return DigitExpansion::new(base, prefix, vec![base.max_digit()]);
            }
            return DigitExpansion::new(base, prefix, Vec::new());
        }
        if let Some(&start) = seen.get(&r) {
            let tail = digits.split_off(start);
            return DigitExpansion::new(base, digits, tail);
        }
        seen.insert(r.clone(), digits.len());
        let (d, rem) = (r * &b).div_rem(q);
        digits.push(u8::try_from(&d).expect("long-division digit fits in u8"));
        r = rem;
    }
}

/// Result of [`dual_representations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representations {
    /// `x` has exactly one expansion (or is 0 or 1, by convention).
    Single(DigitExpansion),
    /// `x = m / base^n` with `0 < x < 1`.
    Dual {
        terminating: DigitExpansion,
        non_terminating: DigitExpansion,
    },
}

impl Representations {
    pub fn is_dual(&self) -> bool {
        matches!(self, Representations::Dual { .. })
    }

    /// All expansions, canonical first.
    pub fn expansions(&self) -> Vec<&DigitExpansion> {
        match self {
            Representations::Single(e) => vec![e],
            Representations::Dual {
                terminating,
                non_terminating,
            } => vec![non_terminating, terminating],
        }
    }
}

/// Both expansions of a base-b rational, or the unique one otherwise.
pub fn dual_representations(x: &Rational, base: Base) -> Result<Representations> {
    let canonical = expand(x, base)?;
    if x.is_zero() || x.is_one() || base_power_exponent(x, base).is_none() {
        return Ok(Representations::Single(canonical));
    }
    Ok(Representations::Dual {
        terminating: expand_with(x, base, Convention::Terminating)?,
        non_terminating: canonical,
    })
}

//! Iterates `C_n` of the middle-thirds construction, exact membership in the
//! Cantor set, the intervals removed at each step, and the Smith-Volterra-Cantor
//! family SVC(m) that removes a centered interval of length `m^-k` at step `k`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expansion::{
    check_unit, expand, expand_with, format_rational, inverse_power, ratio, Base, Convention, DigitExpansion, Rational,
};

/// Default cap on construction depth; `C_20` already has 2^20 pieces.
pub const DEFAULT_DEPTH_LIMIT: u32 = 20;

/// Closed interval `[left, right]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub left: Rational,
    pub right: Rational,
}

impl Interval {
    pub fn new(left: Rational, right: Rational) -> Self {
        Interval { left, right }
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.left <= *x && *x <= self.right
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

/// Sorted, pairwise disjoint closed intervals inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        for (i, iv) in intervals.iter().enumerate() {
            if iv.left > iv.right || iv.left < zero || iv.right > one {
                return Err(Error::domain(format!(
                    "interval [{}, {}] is not a subinterval of [0, 1]",
                    format_rational(&iv.left),
                    format_rational(&iv.right)
                )));
            }
            if i > 0 && intervals[i - 1].right >= iv.left {
                return Err(Error::domain("intervals must be sorted and disjoint"));
            }
        }
        Ok(IntervalSet { intervals })
    }

    pub fn unit() -> Self {
        IntervalSet {
            intervals: vec![Interval::new(Rational::zero(), Rational::one())],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> Rational {
        self.intervals.iter().map(Interval::length).sum()
    }

    /// Interval containing `x`, found by binary search.
    pub fn find(&self, x: &Rational) -> Option<&Interval> {
        let i = self
            .intervals
            .binary_search_by(|iv| {
                if iv.right < *x {
                    Ordering::Less
                } else if iv.left > *x {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            })
            .ok()?;
        Some(&self.intervals[i])
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.find(x).is_some()
    }

    /// True when every interval of `finer` lies inside one interval of `self`.
    pub fn is_refined_by(&self, finer: &IntervalSet) -> bool {
        finer
            .intervals
            .iter()
            .all(|iv| self.find(&iv.left).is_some_and(|outer| outer.contains_interval(iv)))
    }

    /// All endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<Rational> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.left.clone(), iv.right.clone()])
            .collect()
    }

    /// Removes an open interval of length `gap` from the center of every piece.
    fn remove_centered(&self, gap: &Rational, level: u32) -> Result<IntervalSet> {
        let two = ratio(2, 1);
        let mut out = Vec::with_capacity(self.intervals.len() * 2);
        for iv in &self.intervals {
            let len = iv.length();
            if *gap > len {
                return Err(Error::Construction {
                    level,
                    reason: format!(
                        "removal length {} exceeds piece length {}",
                        format_rational(gap),
                        format_rational(&len)
                    ),
                });
            }
            let side = (len - gap) / &two;
            out.push(Interval::new(iv.left.clone(), &iv.left + &side));
            out.push(Interval::new(&iv.right - &side, iv.right.clone()));
        }
        Ok(IntervalSet { intervals: out })
    }
}

fn check_depth(n: u32, limit: u32) -> Result<()> {
    if n > limit {
        Err(Error::DepthLimit { depth: n, limit })
    } else {
        Ok(())
    }
}

/// The `n`-th middle-thirds iterate `C_n`: `2^n` closed pieces of length `3^-n`.
pub fn cantor_iterate(n: u32) -> Result<IntervalSet> {
    cantor_iterate_with_limit(n, DEFAULT_DEPTH_LIMIT)
}

pub fn cantor_iterate_with_limit(n: u32, limit: u32) -> Result<IntervalSet> {
    check_depth(n, limit)?;
    let mut set = IntervalSet::unit();
    for _ in 0..n {
        let mut next = Vec::with_capacity(set.intervals.len() * 2);
        for iv in &set.intervals {
            let third = iv.length() / ratio(3, 1);
            next.push(Interval::new(iv.left.clone(), &iv.left + &third));
            next.push(Interval::new(&iv.right - &third, iv.right.clone()));
        }
        set.intervals = next;
    }
    Ok(set)
}

/// Smith-Volterra-Cantor iterate: at step `k` a centered open interval of
/// length `m^-k` is removed from every surviving piece. `m = 3` gives `C_n`.
pub fn svc_iterate(m: u32, n: u32) -> Result<IntervalSet> {
    svc_iterate_with_limit(m, n, DEFAULT_DEPTH_LIMIT)
}

pub fn svc_iterate_with_limit(m: u32, n: u32, limit: u32) -> Result<IntervalSet> {
    if m < 3 {
        return Err(Error::domain(format!("SVC(m) needs m >= 3, got {m}")));
    }
    check_depth(n, limit)?;
    let mut set = IntervalSet::unit();
    for k in 1..=n {
        set = set.remove_centered(&inverse_power(m, k), k)?;
    }
    Ok(set)
}

/// Remaining length of SVC(m) after `n` steps, from the removal series
/// `1 - sum_{k<=n} 2^(k-1) / m^k`.
pub fn svc_remaining_length(m: u32, n: u32) -> Rational {
    let removed: Rational = (1..=n)
        .map(|k| Rational::from_integer(BigUint::from(2u32).pow(k - 1).into()) * inverse_power(m, k))
        .sum();
    Rational::one() - removed
}

/// An open interval `(a, b)` deleted at step `level`.
///
/// `a_expansion` is the terminating ternary form of `a`, whose digit at
/// position `level` is 1; `b_expansion` is the terminating form of `b`, whose
/// digit there is 2. All earlier digits are 0 or 2 and shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedInterval {
    pub level: u32,
    pub a: Rational,
    pub b: Rational,
    pub a_expansion: DigitExpansion,
    pub b_expansion: DigitExpansion,
}

impl RemovedInterval {
    /// Builds the interval removed under the ternary word `word` (digits 0/2).
    pub fn from_word(word: &[u8]) -> Result<Self> {
        if word.iter().any(|&d| d != 0 && d != 2) {
            return Err(Error::domain("removed-interval words use digits 0 and 2 only"));
        }
        let mut a_digits = word.to_vec();
        a_digits.push(1);
        let mut b_digits = word.to_vec();
        b_digits.push(2);
        let a_expansion = DigitExpansion::new(Base::Ternary, a_digits, Vec::new())?;
        let b_expansion = DigitExpansion::new(Base::Ternary, b_digits, Vec::new())?;
        Ok(RemovedInterval {
            level: word.len() as u32 + 1,
            a: a_expansion.value(),
            b: b_expansion.value(),
            a_expansion,
            b_expansion,
        })
    }

    /// Open-interval membership.
    pub fn contains(&self, x: &Rational) -> bool {
        self.a < *x && *x < self.b
    }

    pub fn length(&self) -> Rational {
        &self.b - &self.a
    }
}

/// The `2^(n-1)` intervals deleted at exactly step `n`, left to right.
pub fn removed_intervals(n: u32) -> Result<Vec<RemovedInterval>> {
    if n == 0 {
        return Err(Error::domain("removal steps start at 1"));
    }
    check_depth(n, DEFAULT_DEPTH_LIMIT)?;
    let width = (n - 1) as usize;
    (0u64..1 << width)
        .map(|code| {
            let word: Vec<u8> = (0..width)
                .rev()
                .map(|bit| if code >> bit & 1 == 1 { 2 } else { 0 })
                .collect();
            RemovedInterval::from_word(&word)
        })
        .collect()
}

/// Where a rational sits relative to the Cantor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    InC,
    /// Inside the open interval removed at `interval.level`.
    RemovedAt(Box<RemovedInterval>),
}

impl Membership {
    pub fn is_in_c(&self) -> bool {
        matches!(self, Membership::InC)
    }
}

/// The ternary expansion of `x` using only digits 0 and 2, if one exists.
///
/// Tries the canonical expansion first and then its terminating twin, so a
/// point of `C` always yields its unique {0, 2} expansion.
pub fn cantor_digits(x: &Rational) -> Result<Option<DigitExpansion>> {
    let canonical = expand(x, Base::Ternary)?;
    if canonical.avoids(1) {
        return Ok(Some(canonical));
    }
    let twin = expand_with(x, Base::Ternary, Convention::Terminating)?;
    Ok(twin.avoids(1).then_some(twin))
}

pub(crate) fn require_cantor_digits(x: &Rational, hint: &str) -> Result<DigitExpansion> {
    cantor_digits(x)?.ok_or_else(|| Error::domain(format!("{} is not in the Cantor set; {hint}", format_rational(x))))
}

/// Exact membership test.
///
/// `x` is in `C` iff one of its ternary expansions avoids the digit 1.
/// Otherwise the first 1 of the canonical expansion sits at the same position
/// in every expansion of `x`; that position is the removal step, and the
/// preceding digits name the removed interval.
pub fn membership(x: &Rational) -> Result<Membership> {
    check_unit(x)?;
    if cantor_digits(x)?.is_some() {
        return Ok(Membership::InC);
    }
    let canonical = expand(x, Base::Ternary)?;
    let level = canonical
        .position_of(|d| d == 1)
        .expect("a point outside C has a digit 1");
    let removed = RemovedInterval::from_word(&canonical.truncate(level - 1))?;
    debug_assert!(removed.contains(x));
    Ok(Membership::RemovedAt(Box::new(removed)))
}

/// Exact length bookkeeping for `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureDiagnostics {
    pub level: u32,
    /// Total length of the `2^n` pieces of `C_n`.
    pub iterate_length: Rational,
    /// Total length removed in steps `1..=n`.
    pub removed_total: Rational,
}

/// Piece count times piece length for `C_n`, against the removal series
/// `sum_{k<=n} 2^(k-1) / 3^k`.
pub fn measure_diagnostics(n: u32) -> MeasureDiagnostics {
    let pieces = Rational::from_integer(BigUint::from(2u32).pow(n).into());
    let iterate_length = pieces * inverse_power(3, n);
    let removed_total = Rational::one() - svc_remaining_length(3, n);
    MeasureDiagnostics {
        level: n,
        iterate_length,
        removed_total,
    }
}

/// Box count of `C_n` at its own scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub level: u32,
    /// Number of boxes, `2^n`.
    pub box_count: BigUint,
    /// Reciprocal box side, `3^n`.
    pub inverse_side: BigUint,
}

impl DimensionEstimate {
    /// `ln(box_count)`.
    pub fn log_count(&self) -> f64 {
        big_ln(&self.box_count)
    }

    /// `ln(1 / side)`.
    pub fn log_scale(&self) -> f64 {
        big_ln(&self.inverse_side)
    }

    pub fn quotient(&self) -> f64 {
        self.log_count() / self.log_scale()
    }
}

fn big_ln(x: &BigUint) -> f64 {
    // ln x = ln(mantissa) + shift * ln 2, keeps huge counts finite
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().expect("64-bit value fits f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn dimension_estimate(n: u32) -> Result<DimensionEstimate> {
    if n == 0 {
        return Err(Error::domain("dimension estimate needs n >= 1"));
    }
    Ok(DimensionEstimate {
        level: n,
        box_count: BigUint::from(2u32).pow(n),
        inverse_side: BigUint::from(3u32).pow(n),
    })
}

/// Number of grid cells `[j/3^n, (j+1)/3^n]` meeting `set` in positive length.
pub fn occupied_cells(set: &IntervalSet, n: u32) -> usize {
    let scale = BigRational::from_integer(BigUint::from(3u32).pow(n).into());
    let mut cells = std::collections::BTreeSet::new();
    for iv in set.intervals() {
        let lo = (&iv.left * &scale).floor().to_integer();
        let hi = (&iv.right * &scale).ceil().to_integer();
        let mut j = lo;
        while j < hi {
            cells.insert(j.clone());
            j += 1;
        }
    }
    cells.len()
}

/// A point of `C` that is an endpoint of a piece of `C_n`, differs from `x`,
/// and lies within `3^-n` of it.
pub fn perfectness_witness(x: &Rational, n: u32) -> Result<Rational> {
    let digits = require_cantor_digits(x, "witnesses exist only for points of C")?;
    let left = DigitExpansion::new(Base::Ternary, digits.truncate(n as usize), Vec::new())?.value();
    let right = &left + inverse_power(3, n);
    let candidate = if *x != left && (*x == right || x - &left <= &right - x) {
        left
    } else {
        right
    };
    Ok(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(i64, i64, i64, i64)]) -> Vec<Interval> {
        pairs
            .iter()
            .map(|&(a, b, c, d)| Interval::new(ratio(a, b), ratio(c, d)))
            .collect()
    }

    #[test]
    fn first_iterates() {
        assert_eq!(cantor_iterate(0).unwrap().intervals(), set(&[(0, 1, 1, 1)]));
        assert_eq!(
            cantor_iterate(1).unwrap().intervals(),
            set(&[(0, 1, 1, 3), (2, 3, 1, 1)])
        );
        assert_eq!(
            cantor_iterate(2).unwrap().intervals(),
            set(&[(0, 1, 1, 9), (2, 9, 1, 3), (2, 3, 7, 9), (8, 9, 1, 1)])
        );
    }

    #[test]
    fn depth_limit_enforced() {
        assert_eq!(cantor_iterate(21), Err(Error::DepthLimit { depth: 21, limit: 20 }));
        assert!(cantor_iterate_with_limit(3, 2).is_err());
    }

    #[test]
    fn svc_examples() {
        assert_eq!(svc_iterate(3, 2).unwrap(), cantor_iterate(2).unwrap());
        assert_eq!(
            svc_iterate(4, 1).unwrap().intervals(),
            set(&[(0, 1, 3, 8), (5, 8, 1, 1)])
        );
        assert!(svc_iterate(2, 1).is_err());
        for n in 0..8 {
            let s = svc_iterate(4, n).unwrap();
            assert_eq!(s.len(), 1 << n);
            assert_eq!(s.total_length(), svc_remaining_length(4, n));
        }
    }

    #[test]
    fn oversize_removal_reports_level() {
        let err = IntervalSet::unit().remove_centered(&ratio(3, 2), 1).unwrap_err();
        assert!(matches!(err, Error::Construction { level: 1, .. }));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&ratio(1, 4)).unwrap(), Membership::InC);
        assert_eq!(membership(&ratio(1, 3)).unwrap(), Membership::InC);
        assert_eq!(membership(&ratio(0, 1)).unwrap(), Membership::InC);
        assert_eq!(membership(&ratio(1, 1)).unwrap(), Membership::InC);
        match membership(&ratio(1, 2)).unwrap() {
            Membership::RemovedAt(r) => {
                assert_eq!(r.level, 1);
                assert_eq!((r.a, r.b), (ratio(1, 3), ratio(2, 3)));
            }
            m => panic!("unexpected {m:?}"),
        }
        // 4/9 = 0.11_3 = 0.10(2)_3: both carry a 1 at position 1
        assert!(matches!(membership(&ratio(4, 9)).unwrap(), Membership::RemovedAt(r) if r.level == 1));
        assert!(membership(&ratio(3, 2)).is_err());
    }

    #[test]
    fn removed_interval_examples() {
        let one = removed_intervals(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].a.clone(), one[0].b.clone()), (ratio(1, 3), ratio(2, 3)));
        let two: Vec<_> = removed_intervals(2).unwrap().into_iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(two, vec![(ratio(1, 9), ratio(2, 9)), (ratio(7, 9), ratio(8, 9))]);
        assert_eq!(removed_intervals(4).unwrap().len(), 8);
        assert!(removed_intervals(0).is_err());
        for r in removed_intervals(4).unwrap() {
            assert_eq!(r.length(), inverse_power(3, 4));
            assert_eq!(r.a_expansion.digit(4), 1);
            assert_eq!(r.b_expansion.digit(4), 2);
            assert_eq!(r.a_expansion.prefix().len(), 4);
            assert_eq!(r.b_expansion.prefix().len(), 4);
        }
    }

    #[test]
    fn measure_examples() {
        let m = measure_diagnostics(1);
        assert_eq!((m.iterate_length, m.removed_total), (ratio(2, 3), ratio(1, 3)));
        let m = measure_diagnostics(4);
        assert_eq!((m.iterate_length, m.removed_total), (ratio(16, 81), ratio(65, 81)));
        let m = measure_diagnostics(0);
        assert_eq!((m.iterate_length, m.removed_total), (ratio(1, 1), ratio(0, 1)));
    }

    #[test]
    fn measure_agrees_with_construction() {
        for n in 0..=10 {
            let m = measure_diagnostics(n);
            assert_eq!(m.iterate_length, cantor_iterate(n).unwrap().total_length());
            let removed: Rational = (1..=n)
                .flat_map(|k| removed_intervals(k).unwrap())
                .map(|r| r.length())
                .sum();
            assert_eq!(m.removed_total, removed);
        }
    }

    #[test]
    fn dimension_examples() {
        let d1 = dimension_estimate(1).unwrap();
        assert_eq!(
            (d1.box_count.clone(), d1.inverse_side.clone()),
            (2u32.into(), 3u32.into())
        );
        assert!((d1.quotient() - 0.630_929_753_571_457_4).abs() < 1e-12);
        let d10 = dimension_estimate(10).unwrap();
        assert!((d10.quotient() - d1.quotient()).abs() < 1e-12);
        assert!(dimension_estimate(0).is_err());
        // the pieces of C_n occupy exactly 2^n triadic cells of side 3^-n
        for n in 1..=8 {
            let c = cantor_iterate(n).unwrap();
            assert_eq!(occupied_cells(&c, n), 1 << n);
            assert_eq!(occupied_cells(&svc_iterate(3, n).unwrap(), n), 1 << n);
        }
    }

    /// Brute-force nearest distinct endpoint of `C_n`.
    fn nearest_endpoint(x: &Rational, n: u32) -> Rational {
        cantor_iterate(n)
            .unwrap()
            .endpoints()
            .into_iter()
            .filter(|y| y != x)
            .min_by(|a, b| {
                let da = if a > x { a - x } else { x - a };
                let db = if b > x { b - x } else { x - b };
                da.cmp(&db)
            })
            .unwrap()
    }

    #[test]
    fn perfectness_examples() {
        assert_eq!(perfectness_witness(&ratio(0, 1), 2).unwrap(), ratio(1, 9));
        assert_eq!(perfectness_witness(&ratio(1, 1), 1).unwrap(), ratio(2, 3));
        let y = perfectness_witness(&ratio(1, 4), 1).unwrap();
        assert!(y == ratio(0, 1) || y == ratio(1, 3));
        assert!(perfectness_witness(&ratio(1, 2), 1).is_err());
    }

    #[test]
    fn perfectness_matches_endpoint_scan() {
        let points = [
            ratio(0, 1),
            ratio(1, 1),
            ratio(1, 4),
            ratio(3, 4),
            ratio(1, 3),
            ratio(2, 9),
            ratio(1, 10),
        ];
        for x in &points {
            for n in 1..=6 {
                let y = perfectness_witness(x, n).unwrap();
                let oracle = nearest_endpoint(x, n);
                let dist = |y: &Rational| if y > x { y - x } else { x - y };
                assert_eq!(dist(&y), dist(&oracle), "x={x} n={n}");
                assert!(dist(&y) <= inverse_power(3, n));
                assert!(membership(&y).unwrap().is_in_c());
                assert!(cantor_iterate(n).unwrap().endpoints().contains(&y));
            }
        }
    }
}

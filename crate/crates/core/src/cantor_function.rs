//! The Cantor-Lebesgue function ("devil's staircase").
//!
//! On the Cantor set it halves ternary digits into binary ones:
//! `0.e1 e2 e3..._3 -> 0.(e1/2)(e2/2)(e3/2)..._2` with every `e_k` in {0, 2}.
//! Off the set it is constant on each removed interval. The polygonal
//! approximants `F_n` flatten middle thirds recursively and converge to it
//! uniformly with `|F_m - F_n| <= 2^-m`.

use num_traits::{One, Signed, Zero};

use crate::cantor_set::{membership, require_cantor_digits, DEFAULT_DEPTH_LIMIT};
use crate::error::{Error, Result};
use crate::expansion::{check_unit, expand, inverse_power, ratio, Base, DigitExpansion, Rational};

/// `F(x)` together with the binary digits that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorFunctionValue {
    pub value: Rational,
    pub binary_expansion: DigitExpansion,
}

impl CantorFunctionValue {
    fn from_binary(binary_expansion: DigitExpansion) -> Self {
        CantorFunctionValue {
            value: binary_expansion.value(),
            binary_expansion,
        }
    }
}

/// `F` on the Cantor set by the digit map `eta_k = eps_k / 2`.
pub fn f_on_cantor(x: &Rational) -> Result<CantorFunctionValue> {
    let digits = require_cantor_digits(x, "use f_extended for points of [0, 1]")?;
    Ok(CantorFunctionValue::from_binary(halve_digits(&digits)?))
}

pub(crate) fn halve_digits(e: &DigitExpansion) -> Result<DigitExpansion> {
    e.map_digits(Base::Binary, |d| d / 2)
}

/// `F` on all of `[0, 1]`.
///
/// Off the Cantor set, with `j` the position of the first digit 1 of the
/// canonical ternary expansion, `F(x) = sum_{k<j} (eps_k/2) 2^-k + 2^-j`.
pub fn f_extended(x: &Rational) -> Result<CantorFunctionValue> {
    check_unit(x)?;
    let canonical = expand(x, Base::Ternary)?;
    let Some(j) = canonical.position_of(|d| d == 1) else {
        return Ok(CantorFunctionValue::from_binary(halve_digits(&canonical)?));
    };
    if membership(x)?.is_in_c() {
        // dual triadic point whose canonical form carries the 1
        return f_on_cantor(x);
    }
    let mut bits: Vec<u8> = canonical.truncate(j - 1).iter().map(|d| d / 2).collect();
    bits.push(1);
    Ok(CantorFunctionValue::from_binary(DigitExpansion::new(
        Base::Binary,
        bits,
        Vec::new(),
    )?))
}

/// Piecewise-linear approximant `F_n` stored as explicit breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonalApproximant {
    level: u32,
    breakpoints: Vec<(Rational, Rational)>,
}

/// Builds `F_n` from `F_1` by the three-branch recursion
/// `F_{n+1}(x) = F_n(3x)/2` on `[0, 1/3]`, `1/2` on the middle third, and
/// `F_n(3x - 2)/2 + 1/2` on `[2/3, 1]`.
pub fn polygonal(n: u32) -> Result<PolygonalApproximant> {
    if n == 0 {
        return Err(Error::domain("polygonal approximants start at n = 1"));
    }
    if n > DEFAULT_DEPTH_LIMIT {
        return Err(Error::DepthLimit {
            depth: n,
            limit: DEFAULT_DEPTH_LIMIT,
        });
    }
    let half = ratio(1, 2);
    let mut breakpoints = vec![
        (ratio(0, 1), ratio(0, 1)),
        (ratio(1, 3), half.clone()),
        (ratio(2, 3), half.clone()),
        (ratio(1, 1), ratio(1, 1)),
    ];
    let three = ratio(3, 1);
    let two = ratio(2, 1);
    for _ in 1..n {
        let left = breakpoints.iter().map(|(x, y)| (x / &three, y * &half));
        let right = breakpoints
            .iter()
            .map(|(x, y)| ((x + &two) / &three, y * &half + &half));
        breakpoints = left.chain(right).collect();
    }
    Ok(PolygonalApproximant { level: n, breakpoints })
}

impl PolygonalApproximant {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    /// Consecutive breakpoint pairs.
    pub fn segments(&self) -> impl Iterator<Item = (&(Rational, Rational), &(Rational, Rational))> {
        self.breakpoints.iter().zip(self.breakpoints.iter().skip(1))
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.segments()
            .map(|((x0, y0), (x1, y1))| (y1 - y0) / (x1 - x0))
            .collect()
    }

    pub fn flat_segment_count(&self) -> usize {
        self.slopes().iter().filter(|s| s.is_zero()).count()
    }

    /// Exact value at `x` by linear interpolation.
    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        check_unit(x)?;
        // first breakpoint strictly right of x; segments are half-open [a, b)
        let i = self.breakpoints.partition_point(|(bx, _)| bx <= x);
        if i == self.breakpoints.len() {
            return Ok(self.breakpoints[i - 1].1.clone());
        }
        let (x0, y0) = &self.breakpoints[i - 1];
        let (x1, y1) = &self.breakpoints[i];
        Ok(interpolate(x0, y0, x1, y1, x))
    }

    /// Values at `k / denominator` for `k = 0..=denominator`, in one sweep.
    pub fn sample_grid(&self, denominator: u64) -> Vec<Rational> {
        let mut out = Vec::with_capacity(denominator as usize + 1);
        let mut seg = 1;
        for k in 0..=denominator {
            let x = ratio(k as i64, denominator as i64);
            while seg < self.breakpoints.len() - 1 && self.breakpoints[seg].0 <= x {
                seg += 1;
            }
            let (x0, y0) = &self.breakpoints[seg - 1];
            let (x1, y1) = &self.breakpoints[seg];
            out.push(interpolate(x0, y0, x1, y1, &x));
        }
        out
    }
}

fn interpolate(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, x: &Rational) -> Rational {
    if y0 == y1 {
        return y0.clone();
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Largest deviation between two approximants on a rational grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub coarse: u32,
    pub fine: u32,
    pub grid: u64,
    pub max_gap: Rational,
    /// Grid point where `max_gap` is first attained.
    pub witness: Rational,
    /// `2^-coarse`.
    pub bound: Rational,
}

impl GapReport {
    pub fn within_bound(&self) -> bool {
        self.max_gap <= self.bound
    }
}

fn max_deviation(a: &[Rational], b: &[Rational], grid: u64) -> (Rational, Rational) {
    let mut best = (Rational::zero(), ratio(0, 1));
    for (k, (u, v)) in a.iter().zip(b).enumerate() {
        let d = (u - v).abs();
        if d > best.0 {
            best = (d, ratio(k as i64, grid as i64));
        }
    }
    best
}

/// `max_k |F_m(k/grid) - F_n(k/grid)|` against the bound `2^-min(m, n)`.
pub fn approximation_gap(m: u32, n: u32, grid: u64) -> Result<GapReport> {
    if grid == 0 {
        return Err(Error::domain("grid denominator must be positive"));
    }
    let fm = polygonal(m)?.sample_grid(grid);
    let fn_ = polygonal(n)?.sample_grid(grid);
    Ok(gap_report(m, n, grid, &fm, &fn_))
}

pub(crate) fn gap_report(m: u32, n: u32, grid: u64, fm: &[Rational], fn_: &[Rational]) -> GapReport {
    let (max_gap, witness) = max_deviation(fm, fn_, grid);
    GapReport {
        coarse: m.min(n),
        fine: m.max(n),
        grid,
        max_gap,
        witness,
        bound: inverse_power(2, m.min(n)),
    }
}

/// `max_k |F_n(k/grid) - F(k/grid)|`, bounded by `2^-n`. `fine` is reported as 0.
pub fn limit_gap(n: u32, grid: u64) -> Result<GapReport> {
    if grid == 0 {
        return Err(Error::domain("grid denominator must be positive"));
    }
    let fn_ = polygonal(n)?.sample_grid(grid);
    let f = (0..=grid)
        .map(|k| f_extended(&ratio(k as i64, grid as i64)).map(|v| v.value))
        .collect::<Result<Vec<_>>>()?;
    let (max_gap, witness) = max_deviation(&fn_, &f, grid);
    Ok(GapReport {
        coarse: n,
        fine: 0,
        grid,
        max_gap,
        witness,
        bound: inverse_power(2, n),
    })
}

/// Difference quotient of `F` against a point of `C` differing in one digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceQuotient {
    pub index: u32,
    /// `x` with ternary digit `2n + 1` flipped between 0 and 2.
    pub x_n: Rational,
    pub quotient: Rational,
}

/// `|F(x) - F(x_n)| / |x - x_n|` where `x_n` flips digit `2n + 1` of `x`.
///
/// Exactly `(3/4)(9/4)^n`: the argument moves by `2/3^(2n+1)` and the value
/// by `2^-(2n+1)`.
pub fn difference_quotient(x: &Rational, n: u32) -> Result<DifferenceQuotient> {
    let digits = require_cantor_digits(x, "difference quotients are taken on C")?;
    let position = 2 * n as usize + 1;
    let flipped = digits.with_digit(position, 2 - digits.digit(position))?;
    let x_n = flipped.value();
    let fx = halve_digits(&digits)?.value();
    let fxn = halve_digits(&flipped)?.value();
    let quotient = (fx - fxn).abs() / (x - &x_n).abs();
    Ok(DifferenceQuotient {
        index: n,
        x_n,
        quotient,
    })
}

/// Where `F_n` is flat and where it rises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub level: u32,
    /// Total length of the segments on which `F_n` is constant.
    pub flat_measure: Rational,
    /// Total increase of `F_n` over those segments; always 0.
    pub rise_on_flat: Rational,
    /// Total increase over the pieces of `C_n`; always 1.
    pub rise_on_iterate: Rational,
    /// Increase over a single piece of `C_n`.
    pub piece_increment: Rational,
}

/// Read off the breakpoints of `F_n`.
pub fn singularity_report(n: u32) -> Result<SingularityReport> {
    let approx = polygonal(n)?;
    let mut flat_measure = Rational::zero();
    let mut rise_on_flat = Rational::zero();
    let mut rise_on_iterate = Rational::zero();
    let mut increments = Vec::new();
    let expected_slope = ratio(3, 2).pow(n as i32);
    for ((x0, y0), (x1, y1)) in approx.segments() {
        let rise = y1 - y0;
        let slope = &rise / (x1 - x0);
        if slope.is_zero() {
            flat_measure += x1 - x0;
            rise_on_flat += rise;
        } else {
            if slope != expected_slope {
                return Err(Error::Construction {
                    level: n,
                    reason: format!("unexpected slope {slope} on an iterate piece"),
                });
            }
            rise_on_iterate += &rise;
            increments.push(rise);
        }
    }
    let piece_increment = increments.first().cloned().unwrap_or_else(Rational::one);
    if increments.iter().any(|r| *r != piece_increment) {
        return Err(Error::Construction {
            level: n,
            reason: "unequal rises across iterate pieces".into(),
        });
    }
    Ok(SingularityReport {
        level: n,
        flat_measure,
        rise_on_flat,
        rise_on_iterate,
        piece_increment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor_set::{cantor_iterate, removed_intervals, Membership};

    /// `F` on a gap via the removed interval's left endpoint.
    fn gap_lookup(x: &Rational) -> Rational {
        match membership(x).unwrap() {
            Membership::InC => f_on_cantor(x).unwrap().value,
            Membership::RemovedAt(r) => f_on_cantor(&r.a).unwrap().value,
        }
    }

    /// `F_n` straight from the iterate: slope `(3/2)^n` on each piece of `C_n`
    /// starting from `F` at its left endpoint, flat elsewhere.
    fn direct_fn(n: u32, x: &Rational) -> Rational {
        let c = cantor_iterate(n).unwrap();
        match c.find(x) {
            Some(piece) => f_on_cantor(&piece.left).unwrap().value + ratio(3, 2).pow(n as i32) * (x - &piece.left),
            None => gap_lookup(x),
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(f_on_cantor(&ratio(0, 1)).unwrap().value, ratio(0, 1));
        assert_eq!(f_on_cantor(&ratio(1, 1)).unwrap().value, ratio(1, 1));
        let third = f_on_cantor(&ratio(1, 3)).unwrap();
        assert_eq!(third.value, ratio(1, 2));
        assert_eq!(third.binary_expansion.to_string(), "0.0(1)_2");
        let quarter = f_on_cantor(&ratio(1, 4)).unwrap();
        assert_eq!(quarter.value, ratio(1, 3));
        assert_eq!(quarter.binary_expansion.to_string(), "0.(01)_2");
        assert!(matches!(f_on_cantor(&ratio(1, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn extended_values() {
        assert_eq!(f_extended(&ratio(1, 2)).unwrap().value, ratio(1, 2));
        assert_eq!(f_extended(&ratio(5, 27)).unwrap().value, ratio(1, 4));
        assert_eq!(f_extended(&ratio(1, 4)).unwrap().value, ratio(1, 3));
        assert_eq!(f_extended(&ratio(2, 3)).unwrap().value, ratio(1, 2));
        for k in 0..=243 {
            let x = ratio(k, 243);
            let v = f_extended(&x).unwrap();
            assert_eq!(v.value, gap_lookup(&x), "x = {x}");
            assert_eq!(v.value, v.binary_expansion.value());
        }
    }

    #[test]
    fn non_injective() {
        assert_eq!(
            f_on_cantor(&ratio(1, 3)).unwrap().value,
            f_on_cantor(&ratio(2, 3)).unwrap().value
        );
    }

    #[test]
    fn first_approximant_table() {
        let f1 = polygonal(1).unwrap();
        assert_eq!(
            f1.breakpoints(),
            &[
                (ratio(0, 1), ratio(0, 1)),
                (ratio(1, 3), ratio(1, 2)),
                (ratio(2, 3), ratio(1, 2)),
                (ratio(1, 1), ratio(1, 1)),
            ]
        );
        assert_eq!(f1.evaluate(&ratio(1, 2)).unwrap(), ratio(1, 2));
        assert_eq!(f1.evaluate(&ratio(1, 6)).unwrap(), ratio(1, 4));
        assert_eq!(f1.evaluate(&ratio(5, 6)).unwrap(), ratio(3, 4));
    }

    #[test]
    fn tabulated_values() {
        let f2 = polygonal(2).unwrap();
        for k in 0..=9 {
            let x = ratio(1, 9) + ratio(k, 81);
            assert_eq!(f2.evaluate(&x).unwrap(), ratio(1, 4));
        }
        let f3 = polygonal(3).unwrap();
        assert_eq!(f3.evaluate(&ratio(1, 27)).unwrap(), ratio(1, 8));
        // (27/8) x - 19/8 on [26/27, 1]
        assert_eq!(
            f3.evaluate(&ratio(80, 81)).unwrap(),
            ratio(27, 8) * ratio(80, 81) - ratio(19, 8)
        );
    }

    #[test]
    fn approximants_match_direct_form() {
        for n in 1..=5 {
            let f = polygonal(n).unwrap();
            let samples = f.sample_grid(729);
            for k in 0..=729 {
                let x = ratio(k, 729);
                let direct = direct_fn(n, &x);
                assert_eq!(f.evaluate(&x).unwrap(), direct, "n={n} x={x}");
                assert_eq!(samples[k as usize], direct);
            }
        }
    }

    #[test]
    fn slopes_and_flats() {
        for n in 1..=6 {
            let f = polygonal(n).unwrap();
            let steep = ratio(3, 2).pow(n as i32);
            assert!(f.slopes().iter().all(|s| s.is_zero() || *s == steep));
            assert_eq!(f.flat_segment_count(), (1 << n) - 1);
            assert_eq!(f.breakpoints().first().unwrap(), &(ratio(0, 1), ratio(0, 1)));
            assert_eq!(f.breakpoints().last().unwrap(), &(ratio(1, 1), ratio(1, 1)));
        }
        assert_eq!(polygonal(3).unwrap().flat_segment_count(), 7);
        assert!(polygonal(0).is_err());
    }

    #[test]
    fn gap_examples() {
        let r = approximation_gap(1, 2, 81).unwrap();
        assert!(r.within_bound());
        assert!(r.max_gap > Rational::zero());
        assert_eq!(r.bound, ratio(1, 2));
        assert_eq!(approximation_gap(3, 3, 81).unwrap().max_gap, Rational::zero());
        for n in 1..=6 {
            let r = limit_gap(n, 729).unwrap();
            assert!(r.within_bound(), "n={n} gap={}", r.max_gap);
        }
    }

    #[test]
    fn quotient_examples() {
        let q0 = difference_quotient(&ratio(0, 1), 0).unwrap();
        assert_eq!((q0.x_n, q0.quotient.clone()), (ratio(2, 3), ratio(3, 4)));
        let q1 = difference_quotient(&ratio(0, 1), 1).unwrap();
        assert_eq!((q1.x_n, q1.quotient.clone()), (ratio(2, 27), ratio(27, 16)));
        let mut prev = q0.quotient;
        for n in 1..=10 {
            let q = difference_quotient(&ratio(0, 1), n).unwrap().quotient;
            assert_eq!(&q / &prev, ratio(9, 4));
            prev = q;
        }
        // same growth away from 0
        let q = difference_quotient(&ratio(1, 4), 3).unwrap();
        assert_eq!(q.quotient, ratio(3, 4) * ratio(9, 4).pow(3));
        assert!(difference_quotient(&ratio(1, 2), 0).is_err());
    }

    #[test]
    fn singularity_examples() {
        let r = singularity_report(1).unwrap();
        assert_eq!(
            (r.flat_measure, r.rise_on_flat, r.rise_on_iterate),
            (ratio(1, 3), ratio(0, 1), ratio(1, 1))
        );
        let r = singularity_report(3).unwrap();
        assert_eq!(
            (r.flat_measure, r.rise_on_flat, r.rise_on_iterate, r.piece_increment),
            (ratio(19, 27), ratio(0, 1), ratio(1, 1), ratio(1, 8))
        );
    }

    #[test]
    fn gap_constancy_through_level_five() {
        for n in 1..=5 {
            for r in removed_intervals(n).unwrap() {
                let fa = f_extended(&r.a).unwrap().value;
                assert_eq!(fa, f_extended(&r.b).unwrap().value);
                for j in 1..5 {
                    let probe = &r.a + r.length() * ratio(j, 5);
                    assert_eq!(f_extended(&probe).unwrap().value, fa);
                }
            }
        }
    }
}

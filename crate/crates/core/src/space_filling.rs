//! Lebesgue's maps from the Cantor set onto `[0,1]^2` and `[0,1]^3`.
//!
//! The {0, 2} ternary digits of `x` are dealt out round-robin to the
//! coordinates and halved into binary digits. On each removed interval the
//! extension interpolates linearly between the images of the endpoints, which
//! gives a continuous curve through every point of the square (or cube).

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cantor_set::{membership, require_cantor_digits, Membership};
use crate::error::{Error, Result};
use crate::expansion::{check_unit, expand, format_rational, ratio, Base, DigitExpansion, Rational};

/// Largest ternary depth accepted by [`sample_curve`]; `3^12 + 1` samples.
pub const CURVE_DEPTH_LIMIT: u32 = 12;

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Max-norm distance.
    pub fn distance_inf(&self, other: &Point) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        let s = Rational::one() - t;
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a * &s + b * t)
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::domain("dimension must be at least 1"))
    } else {
        Ok(())
    }
}

/// Splits a {0, 2} ternary expansion into `dim` binary expansions, one per
/// stride class, halving every digit.
pub fn deinterleave(digits: &DigitExpansion, dim: usize) -> Result<Vec<DigitExpansion>> {
    check_dim(dim)?;
    let min_prefix = digits.prefix().len().div_ceil(dim) * dim;
    let (prefix, tail) = digits.unrolled(min_prefix, dim);
    (0..dim)
        .map(|c| {
            let pick = |word: &[u8]| -> Vec<u8> { word.iter().skip(c).step_by(dim).map(|d| d / 2).collect() };
            DigitExpansion::new(Base::Binary, pick(&prefix), pick(&tail))
        })
        .collect()
}

/// Inverse of [`deinterleave`]: binary coordinates become the doubled ternary
/// digits `(2 a1)(2 b1)(2 a2)(2 b2)...`.
pub fn interleave(coords: &[DigitExpansion]) -> Result<DigitExpansion> {
    let dim = coords.len();
    check_dim(dim)?;
    let prefix_len = coords.iter().map(|c| c.prefix().len()).max().unwrap_or(0);
    let period = coords
        .iter()
        .map(|c| c.tail().len().max(1))
        .fold(1, |acc, t| acc.lcm(&t));
    let columns: Vec<(Vec<u8>, Vec<u8>)> = coords
        .iter()
        .map(|c| {
            let all = c.truncate(prefix_len + period);
            (all[..prefix_len].to_vec(), all[prefix_len..].to_vec())
        })
        .collect();
    let weave = |parts: Vec<&[u8]>, len: usize| -> Vec<u8> {
        (0..len).flat_map(|i| parts.iter().map(move |p| 2 * p[i])).collect()
    };
    let prefix = weave(columns.iter().map(|c| &c.0[..]).collect(), prefix_len);
    let tail = weave(columns.iter().map(|c| &c.1[..]).collect(), period);
    DigitExpansion::new(Base::Ternary, prefix, tail)
}

/// `F^d` on the Cantor set.
pub fn lebesgue_map(x: &Rational, dim: usize) -> Result<Point> {
    let digits = require_cantor_digits(x, "use the extended map for points of [0, 1]")?;
    Ok(Point::new(
        deinterleave(&digits, dim)?.iter().map(DigitExpansion::value).collect(),
    ))
}

/// Lebesgue's map onto the unit square.
pub fn f2(x: &Rational) -> Result<Point> {
    lebesgue_map(x, 2)
}

/// Lebesgue's map onto the unit cube.
pub fn f3(x: &Rational) -> Result<Point> {
    lebesgue_map(x, 3)
}

/// A point of the Cantor set mapped onto `p`, built from the canonical
/// binary expansions of its coordinates.
pub fn preimage(p: &Point) -> Result<Rational> {
    let coords = p
        .coords()
        .iter()
        .map(|c| {
            check_unit(c)?;
            expand(c, Base::Binary)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(interleave(&coords)?.value())
}

pub fn preimage2(p: &Point) -> Result<Rational> {
    if p.dim() != 2 {
        return Err(Error::domain(format!("expected a 2-d point, got {p}")));
    }
    preimage(p)
}

pub fn preimage3(p: &Point) -> Result<Rational> {
    if p.dim() != 3 {
        return Err(Error::domain(format!("expected a 3-d point, got {p}")));
    }
    preimage(p)
}

/// `F^d` extended to `[0, 1]` by linear interpolation across removed intervals.
pub fn lebesgue_extended(x: &Rational, dim: usize) -> Result<Point> {
    match membership(x)? {
        Membership::InC => lebesgue_map(x, dim),
        Membership::RemovedAt(gap) => {
            let fa = lebesgue_map(&gap.a, dim)?;
            let fb = lebesgue_map(&gap.b, dim)?;
            let t = (x - &gap.a) / (&gap.b - &gap.a);
            Ok(fa.lerp(&fb, &t))
        }
    }
}

pub fn f2_extended(x: &Rational) -> Result<Point> {
    lebesgue_extended(x, 2)
}

pub fn f3_extended(x: &Rational) -> Result<Point> {
    lebesgue_extended(x, 3)
}

/// One vertex of a sampled curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSample {
    pub parameter: Rational,
    pub point: Point,
    pub on_cantor: bool,
}

/// The extended curve at `j / 3^depth`, keeping every `stride`-th parameter
/// and always the final one.
pub fn sample_curve(dim: usize, depth: u32, stride: usize) -> Result<Vec<CurveSample>> {
    if !(2..=3).contains(&dim) {
        return Err(Error::domain(format!("curves are 2- or 3-dimensional, got {dim}")));
    }
    if depth > CURVE_DEPTH_LIMIT {
        return Err(Error::DepthLimit {
            depth,
            limit: CURVE_DEPTH_LIMIT,
        });
    }
    if stride == 0 {
        return Err(Error::domain("stride must be positive"));
    }
    let count = 3i64.pow(depth);
    let mut js: Vec<i64> = (0..=count).step_by(stride).collect();
    if js.last() != Some(&count) {
        js.push(count);
    }
    js.into_iter()
        .map(|j| {
            let parameter = ratio(j, count);
            let on_cantor = membership(&parameter)?.is_in_c();
            let point = lebesgue_extended(&parameter, dim)?;
            Ok(CurveSample {
                parameter,
                point,
                on_cantor,
            })
        })
        .collect()
}

/// Coordinate of `F^2` whose digit is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// First coordinate, fed by odd ternary positions.
    Phi,
    /// Second coordinate, fed by even ternary positions.
    Psi,
}

impl Component {
    fn index(self) -> usize {
        match self {
            Component::Phi => 0,
            Component::Psi => 1,
        }
    }
}

/// `|c(x) - c(x')| / |x - x'|` for one coordinate `c` of `F^2`, where `x'`
/// flips ternary digit `position` of `x` between 0 and 2.
pub fn digit_flip_quotient(x: &Rational, position: usize, component: Component) -> Result<Rational> {
    if position == 0 {
        return Err(Error::domain("digit positions start at 1"));
    }
    let digits = require_cantor_digits(x, "difference quotients are taken on C")?;
    let flipped = digits.with_digit(position, 2 - digits.digit(position))?;
    let x_flipped = flipped.value();
    let c = component.index();
    let a = &deinterleave(&digits, 2)?[c].value();
    let b = &deinterleave(&flipped, 2)?[c].value();
    Ok((a - b).abs() / (x - x_flipped).abs())
}

/// Digit-flip quotient at index `n`: position `2n + 1` for [`Component::Phi`]
/// and `2n + 2` for [`Component::Psi`], so that the flipped digit always
/// feeds the chosen coordinate.
pub fn component_difference_quotient(x: &Rational, n: u32, component: Component) -> Result<Rational> {
    let position = 2 * n as usize + 1 + component.index();
    digit_flip_quotient(x, position, component)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    /// Value of a digit word given as explicit prefix and period.
    fn series(prefix: &[u8], tail: &[u8], radix: i64) -> Rational {
        let b = Rational::from_integer(radix.into());
        let mut acc = Rational::zero();
        let mut scale = Rational::one();
        for &d in prefix {
            scale /= &b;
            acc += &scale * Rational::from_integer(d.into());
        }
        if !tail.is_empty() {
            let mut period = Rational::zero();
            let mut s = Rational::one();
            for &d in tail {
                s /= &b;
                period += &s * Rational::from_integer(d.into());
            }
            // period repeats with ratio b^-len
            acc += scale * period / (Rational::one() - s);
        }
        acc
    }

    #[test]
    fn f2_examples() {
        assert_eq!(f2(&ratio(0, 1)).unwrap(), pt(&[(0, 1), (0, 1)]));
        // 3/4 = 0.(20)_3
        assert_eq!(series(&[], &[2, 0], 3), ratio(3, 4));
        assert_eq!(f2(&ratio(3, 4)).unwrap(), pt(&[(1, 1), (0, 1)]));
        // 1/9 = 0.0(2)_3 -> 0.0(1)_2 twice
        assert_eq!(series(&[0, 0], &[2], 3), ratio(1, 9));
        assert_eq!(f2(&ratio(1, 9)).unwrap(), pt(&[(1, 2), (1, 2)]));
        assert!(f2(&ratio(1, 2)).is_err());
    }

    #[test]
    fn f3_examples() {
        assert_eq!(f3(&ratio(0, 1)).unwrap(), pt(&[(0, 1), (0, 1), (0, 1)]));
        assert_eq!(f3(&ratio(1, 1)).unwrap(), pt(&[(1, 1), (1, 1), (1, 1)]));
        let x = series(&[], &[2, 0, 0], 3);
        assert_eq!(x, ratio(9, 13));
        assert_eq!(f3(&x).unwrap(), pt(&[(1, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(preimage2(&pt(&[(0, 1), (0, 1)])).unwrap(), ratio(0, 1));
        assert_eq!(preimage2(&pt(&[(1, 2), (1, 2)])).unwrap(), series(&[0, 0], &[2], 3));
        assert_eq!(preimage2(&pt(&[(1, 1), (0, 1)])).unwrap(), ratio(3, 4));
        assert_eq!(preimage3(&pt(&[(0, 1), (0, 1), (0, 1)])).unwrap(), ratio(0, 1));
        assert_eq!(preimage3(&pt(&[(1, 1), (1, 1), (1, 1)])).unwrap(), ratio(1, 1));
        // 0.0(1)_2 three times interleaves to 0.000(222)_3
        let x = preimage3(&pt(&[(1, 2), (1, 2), (1, 2)])).unwrap();
        assert_eq!(x, series(&[0, 0, 0], &[2, 2, 2], 3));
        assert_eq!(x, ratio(1, 27));
        assert!(preimage2(&pt(&[(1, 2)])).is_err());
        assert!(preimage2(&pt(&[(3, 2), (0, 1)])).is_err());
    }

    #[test]
    fn mixed_periods_round_trip() {
        // tails of length 2 and 3 force a woven period of 6 per coordinate
        let p = pt(&[(1, 3), (1, 7)]);
        let x = preimage2(&p).unwrap();
        assert_eq!(f2(&x).unwrap(), p);
        let q = pt(&[(2, 5), (1, 3), (5, 6)]);
        assert_eq!(f3(&preimage3(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn non_injective() {
        // coordinate 1/2 has twins 0.1_2 and 0.0(1)_2
        let canonical = preimage2(&pt(&[(1, 2), (0, 1)])).unwrap();
        let twin = interleave(&[
            DigitExpansion::new(Base::Binary, vec![1], vec![]).unwrap(),
            DigitExpansion::zero(Base::Binary),
        ])
        .unwrap()
        .value();
        assert_ne!(canonical, twin);
        assert_eq!(f2(&canonical).unwrap(), f2(&twin).unwrap());
    }

    #[test]
    fn extended_examples() {
        assert_eq!(f2(&ratio(1, 3)).unwrap(), pt(&[(1, 2), (1, 1)]));
        assert_eq!(f2(&ratio(2, 3)).unwrap(), pt(&[(1, 2), (0, 1)]));
        assert_eq!(f2_extended(&ratio(1, 2)).unwrap(), pt(&[(1, 2), (1, 2)]));
        assert_eq!(f2_extended(&ratio(1, 3)).unwrap(), pt(&[(1, 2), (1, 1)]));
        for n in 1..=4 {
            for gap in crate::cantor_set::removed_intervals(n).unwrap() {
                assert_eq!(f2_extended(&gap.a).unwrap(), f2(&gap.a).unwrap());
                assert_eq!(f2_extended(&gap.b).unwrap(), f2(&gap.b).unwrap());
                // affine on the gap: midpoint image is the midpoint of the images
                let mid = (&gap.a + &gap.b) / ratio(2, 1);
                let expect = f2(&gap.a).unwrap().lerp(&f2(&gap.b).unwrap(), &ratio(1, 2));
                assert_eq!(f2_extended(&mid).unwrap(), expect);
            }
        }
    }

    #[test]
    fn sample_examples() {
        let s = sample_curve(2, 0, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].point, pt(&[(0, 1), (0, 1)]));
        assert_eq!(s[1].point, pt(&[(1, 1), (1, 1)]));
        let s = sample_curve(2, 2, 1).unwrap();
        assert_eq!(s.len(), 10);
        for sample in &s {
            assert_eq!(sample.on_cantor, membership(&sample.parameter).unwrap().is_in_c());
        }
        let thinned = sample_curve(2, 2, 4).unwrap();
        let params: Vec<_> = thinned.iter().map(|s| s.parameter.clone()).collect();
        assert_eq!(params, vec![ratio(0, 1), ratio(4, 9), ratio(8, 9), ratio(1, 1)]);
        assert!(sample_curve(2, CURVE_DEPTH_LIMIT + 1, 1).is_err());
        assert!(sample_curve(4, 1, 1).is_err());
        assert!(sample_curve(2, 1, 0).is_err());
    }

    #[test]
    fn coverage_of_quarter_cells() {
        let samples = sample_curve(2, 4, 1).unwrap();
        let quarter = ratio(1, 4);
        for i in 0..4 {
            for j in 0..4 {
                let lo = [ratio(i, 4), ratio(j, 4)];
                let hit = samples.iter().any(|s| {
                    s.point
                        .coords()
                        .iter()
                        .zip(&lo)
                        .all(|(c, l)| l <= c && *c <= l + &quarter)
                });
                assert!(hit, "cell ({i}, {j}) missed");
            }
        }
    }

    #[test]
    fn component_quotients() {
        let zero = ratio(0, 1);
        // phi moves by 2^-(n+1) while x moves by 2 / 3^(2n+1)
        assert_eq!(
            component_difference_quotient(&zero, 0, Component::Phi).unwrap(),
            ratio(3, 4)
        );
        let mut prev = ratio(3, 4);
        for n in 1..=8 {
            let q = component_difference_quotient(&zero, n, Component::Phi).unwrap();
            assert_eq!(&q / &prev, ratio(9, 2));
            prev = q;
        }
        assert_eq!(
            component_difference_quotient(&zero, 0, Component::Psi).unwrap(),
            ratio(9, 4)
        );
        assert_eq!(digit_flip_quotient(&zero, 2, Component::Phi).unwrap(), Rational::zero());
        assert_eq!(digit_flip_quotient(&zero, 3, Component::Psi).unwrap(), Rational::zero());
        assert!(digit_flip_quotient(&ratio(1, 2), 1, Component::Phi).is_err());
    }
}

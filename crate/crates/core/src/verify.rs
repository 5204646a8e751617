//! Property suites. Each suite returns a [`SuiteReport`]; the CLI prints them.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cantor_function::{difference_quotient, f_extended, gap_report, polygonal, singularity_report};
use crate::cantor_set::{
    cantor_iterate, dimension_estimate, measure_diagnostics, membership, perfectness_witness, removed_intervals,
    svc_iterate, svc_remaining_length,
};
use crate::error::{Error, Result};
use crate::expansion::{
    dual_representations, expand, format_rational, inverse_power, ratio, Base, DigitExpansion, Rational,
};
use crate::hausdorff::{build_cover, hausdorff_map, modulus_check, CompactBoxSet};
use crate::space_filling::{
    component_difference_quotient, f2, f2_extended, f3_extended, preimage2, preimage3, Component, Point,
};

/// Names accepted by [`run_suite`], in run order.
pub const SUITES: &[&str] = &[
    "iterates",
    "measure",
    "dimension",
    "expansions",
    "monotonicity",
    "gaps",
    "convergence",
    "quotient-growth",
    "curve",
    "continuity",
    "hausdorff",
    "svc",
];

/// Knobs shared by all suites; `None` picks the suite's own default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub depth: Option<u32>,
    pub grid: Option<u64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            depth: None,
            grid: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    /// One exact witness per failed check.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{status} {} ({} checks, {} failed)",
            self.name,
            self.checks,
            self.failures.len()
        )?;
        for w in &self.failures {
            writeln!(f, "  failed: {w}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

/// Runs one named suite.
pub fn run_suite(name: &str, config: &VerifyConfig) -> Result<SuiteReport> {
    let depth = |default: u32| config.depth.unwrap_or(default);
    let grid = |default: u64| config.grid.unwrap_or(default);
    match name {
        "iterates" => iterates(depth(10)),
        "measure" => measure(depth(10)),
        "dimension" => dimension(depth(20)),
        "expansions" => expansions(depth(6)),
        "monotonicity" => monotonicity(grid(243)),
        "gaps" => gaps(depth(8)),
        "convergence" => convergence(depth(10), grid(3u64.pow(10))),
        "quotient-growth" => quotient_growth(depth(15)),
        "curve" => curve(),
        "continuity" => continuity(depth(8), config.seed),
        "hausdorff" => hausdorff(depth(5), config.seed),
        "svc" => svc(depth(20)),
        other => Err(Error::domain(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Runs every suite in [`SUITES`] order.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, config)).collect()
}

fn iterates(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("iterates");
    let mut prev = cantor_iterate(0)?;
    for n in 1..=depth {
        let cur = cantor_iterate(n)?;
        r.check(cur.len() == 1 << n, || format!("C_{n} has {} pieces", cur.len()));
        r.check(prev.is_refined_by(&cur), || format!("C_{n} not inside C_{}", n - 1));
        if n <= 6 {
            for e in cur.endpoints() {
                let in_c = membership(&e)?.is_in_c();
                r.check(in_c, || format!("endpoint {} of C_{n} not in C", q(&e)));
                let w = perfectness_witness(&e, n + 1)?;
                let near = w != e && membership(&w)?.is_in_c() && (&w - &e).abs() <= inverse_power(3, n + 1);
                r.check(near, || {
                    format!("no nearby point of C for {} at level {}", q(&e), n + 1)
                });
            }
        }
        prev = cur;
    }
    Ok(r)
}

fn measure(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("measure");
    for n in 0..=depth {
        let d = measure_diagnostics(n);
        let expected = ratio(2, 3).pow(n as i32);
        r.check(d.iterate_length == expected, || {
            format!("n={n}: length {}", q(&d.iterate_length))
        });
        let total = &d.iterate_length + &d.removed_total;
        r.check(total.is_one(), || format!("n={n}: length + removed = {}", q(&total)));
        if n <= 14 {
            let direct = cantor_iterate(n)?.total_length();
            r.check(direct == expected, || format!("n={n}: summed pieces {}", q(&direct)));
        }
    }
    Ok(r)
}

fn dimension(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("dimension");
    for n in 1..=depth {
        let e = dimension_estimate(n)?;
        let shown = format!("{:.6}", e.quotient());
        r.check(shown == "0.630930", || format!("n={n}: quotient {shown}"));
    }
    r.notes.push(format!("ln 2 / ln 3 = {:.6}", 2f64.ln() / 3f64.ln()));
    Ok(r)
}

fn expansions(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("expansions");
    for base in [Base::Binary, Base::Ternary] {
        let b = base.radix() as i64;
        let den = b.pow(depth);
        for k in 0..=den {
            let x = ratio(k, den);
            let e = expand(&x, base)?;
            r.check(e.value() == x, || {
                format!("{} in base {b} reads back as {}", q(&x), q(&e.value()))
            });
            let reps = dual_representations(&x, base)?;
            let dual_expected = k != 0 && k != den;
            r.check(reps.is_dual() == dual_expected, || {
                format!("{} in base {b}: dual = {}", q(&x), reps.is_dual())
            });
            for alt in reps.expansions() {
                r.check(alt.value() == x, || {
                    format!("{} in base {b}: twin {alt} has another value", q(&x))
                });
            }
        }
        // a few non-terminating values
        for (p, d) in [(1, 7), (5, 11), (2, 13)] {
            let x = ratio(p, d);
            let reps = dual_representations(&x, base)?;
            r.check(!reps.is_dual(), || format!("{} in base {b} claimed dual", q(&x)));
        }
    }
    Ok(r)
}

fn monotonicity(grid: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("monotonicity");
    if grid == 0 {
        return Err(Error::domain("grid must be positive"));
    }
    let mut prev = Rational::zero();
    for k in 0..=grid as i64 {
        let x = ratio(k, grid as i64);
        let y = f_extended(&x)?.value;
        r.check(y >= prev, || format!("F({}) = {} < {}", q(&x), q(&y), q(&prev)));
        prev = y;
    }
    r.check(prev.is_one(), || format!("F(1) = {}", q(&prev)));
    Ok(r)
}

fn gaps(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("gaps");
    let mut all = Vec::new();
    for level in 1..=depth {
        all.extend(removed_intervals(level)?);
    }
    for gap in all {
        let level_value = f_extended(&gap.a)?.value;
        let right_value = f_extended(&gap.b)?.value;
        r.check(level_value == right_value, || {
            format!("F differs at the ends of ({}, {})", q(&gap.a), q(&gap.b))
        });
        for i in 1..=5 {
            let x = &gap.a + (&gap.b - &gap.a) * ratio(i, 6);
            let y = f_extended(&x)?.value;
            r.check(y == level_value, || {
                format!("F({}) = {} on gap at level {}", q(&x), q(&y), gap.level)
            });
        }
    }
    for n in 1..=depth.min(12) {
        let s = singularity_report(n)?;
        let flat_expected = Rational::one() - ratio(2, 3).pow(n as i32);
        r.check(s.flat_measure == flat_expected, || {
            format!("F_{n} flat on length {}", q(&s.flat_measure))
        });
        r.check(s.rise_on_flat.is_zero() && s.rise_on_iterate.is_one(), || {
            format!("F_{n} rises off C_{n}")
        });
    }
    Ok(r)
}

fn convergence(depth: u32, grid: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("convergence");
    if grid == 0 {
        return Err(Error::domain("grid must be positive"));
    }
    // samples[n - 1] holds F_n
    let samples: Vec<Vec<Rational>> = (1..=depth)
        .map(|n| polygonal(n).map(|p| p.sample_grid(grid)))
        .collect::<Result<_>>()?;
    let limit: Vec<Rational> = (0..=grid as i64)
        .map(|k| f_extended(&ratio(k, grid as i64)).map(|v| v.value))
        .collect::<Result<_>>()?;
    for n in 2..=depth {
        for m in 1..n {
            let g = gap_report(m, n, grid, &samples[m as usize - 1], &samples[n as usize - 1]);
            r.check(g.within_bound(), || {
                format!(
                    "|F_{m} - F_{n}| = {} at {} exceeds {}",
                    q(&g.max_gap),
                    q(&g.witness),
                    q(&g.bound)
                )
            });
            if n == m + 1 {
                let bound = inverse_power(2, n);
                r.check(g.max_gap <= bound, || {
                    format!("|F_{n} - F_{m}| = {} > {}", q(&g.max_gap), q(&bound))
                });
            }
        }
    }
    for n in 1..=depth {
        let g = gap_report(n, n, grid, &samples[n as usize - 1], &limit);
        r.check(g.within_bound(), || {
            format!("|F - F_{n}| = {} at {}", q(&g.max_gap), q(&g.witness))
        });
    }
    Ok(r)
}

fn quotient_growth(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("quotient-growth");
    let zero = Rational::zero();
    let mut prev: Option<Rational> = None;
    let mut threshold_at = None;
    for n in 0..=depth {
        let d = difference_quotient(&zero, n)?;
        let expected = ratio(3, 4) * ratio(9, 4).pow(n as i32);
        r.check(d.quotient == expected, || format!("n={n}: quotient {}", q(&d.quotient)));
        if let Some(p) = &prev {
            let growth = &d.quotient / p;
            r.check(growth == ratio(9, 4), || format!("n={n}: ratio {}", q(&growth)));
        }
        if threshold_at.is_none() && d.quotient > ratio(10_000, 1) {
            threshold_at = Some(n);
        }
        prev = Some(d.quotient);
    }
    if depth >= 12 {
        r.check(threshold_at.is_some_and(|n| n <= 12), || {
            format!("quotient first exceeds 10^4 at {threshold_at:?}")
        });
    }
    for n in 0..=depth.min(8) {
        let phi = component_difference_quotient(&zero, n, Component::Phi)?;
        let expected = ratio(3, 4) * ratio(9, 2).pow(n as i32);
        r.check(phi == expected, || {
            format!("first coordinate of F2, n={n}: quotient {}", q(&phi))
        });
    }
    r.notes
        .push("successive quotients of F grow by exactly 9/4, so they are (3/4)(9/4)^n, not (9/2)^n".into());
    r.notes
        .push("the factor 9/2 is the growth of the first coordinate of F2 under the same digit flip".into());
    if let Some(n) = threshold_at {
        r.notes.push(format!("quotient first exceeds 10^4 at n = {n}"));
    }
    Ok(r)
}

fn dyadic_cells(points: &[Point], side: i64) -> Vec<Vec<i64>> {
    let dim = points.first().map_or(0, Point::dim);
    let cells = side.pow(dim as u32);
    let mut missing = Vec::new();
    for c in 0..cells {
        let cell: Vec<i64> = (0..dim).map(|a| c / side.pow(a as u32) % side).collect();
        let hit = points.iter().any(|p| {
            p.coords()
                .iter()
                .zip(&cell)
                .all(|(x, &i)| ratio(i, side) <= *x && *x <= ratio(i + 1, side))
        });
        if !hit {
            missing.push(cell);
        }
    }
    missing
}

fn curve() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("curve");
    for i in 0..=8 {
        for j in 0..=8 {
            let p = Point::new(vec![ratio(i, 8), ratio(j, 8)]);
            let back = f2(&preimage2(&p)?)?;
            r.check(back == p, || format!("F2(preimage({p})) = {back}"));
        }
    }
    for i in 0..=4 {
        for j in 0..=4 {
            for l in 0..=4 {
                let p = Point::new(vec![ratio(i, 4), ratio(j, 4), ratio(l, 4)]);
                let back = crate::space_filling::f3(&preimage3(&p)?)?;
                r.check(back == p, || format!("F3(preimage({p})) = {back}"));
            }
        }
    }
    let images2: Vec<Point> = (0..=81).map(|k| f2_extended(&ratio(k, 81))).collect::<Result<_>>()?;
    let missing = dyadic_cells(&images2, 4);
    r.check(missing.is_empty(), || {
        format!("no F2 image at k/81 meets cells {missing:?} of side 1/4")
    });
    let images3: Vec<Point> = (0..=729).map(|k| f3_extended(&ratio(k, 729))).collect::<Result<_>>()?;
    let missing = dyadic_cells(&images3, 4);
    r.check(missing.is_empty(), || {
        format!("no F3 image at k/729 meets cells {missing:?} of side 1/4")
    });
    let half = f2_extended(&ratio(1, 2))?;
    r.check(half == Point::new(vec![ratio(1, 2), ratio(1, 2)]), || {
        format!("F2(1/2) = {half}")
    });
    Ok(r)
}

/// Random terminating {0, 2} word of the given length.
fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| if rng.gen::<bool>() { 2 } else { 0 }).collect()
}

fn word_value(word: Vec<u8>) -> Result<Rational> {
    Ok(DigitExpansion::new(Base::Ternary, word, Vec::new())?.value())
}

fn continuity(depth: u32, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("continuity");
    if depth == 0 {
        return Err(Error::domain("continuity needs depth >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let n = rng.gen_range(1..=depth) as usize;
        let shared = random_word(&mut rng, 2 * n);
        let mut a = shared.clone();
        let mut b = shared;
        a.extend(random_word(&mut rng, 8));
        b.extend(random_word(&mut rng, 8));
        let (x, y) = (word_value(a)?, word_value(b)?);
        let (fx, fy) = (f2(&x)?, f2(&y)?);
        let bound = inverse_power(2, n as u32);
        for (c, (u, v)) in fx.coords().iter().zip(fy.coords()).enumerate() {
            r.check((u - v).abs() <= bound, || {
                format!(
                    "x={} x'={} share {} digits; coordinate {c} moves {}",
                    q(&x),
                    q(&y),
                    2 * n,
                    q(&(u - v).abs())
                )
            });
        }
    }
    let half = f2_extended(&ratio(1, 2))?;
    r.check(half == Point::new(vec![ratio(1, 2), ratio(1, 2)]), || {
        format!("F2(1/2) = {half}")
    });
    Ok(r)
}

fn hausdorff(depth: u32, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("hausdorff");
    let square = CompactBoxSet::unit_cube(2)?;
    let cover = build_cover(&square, depth)?;
    let violations = cover.soundness_violations();
    r.check(violations.is_empty(), || violations.join("; "));
    let leaves = cover.leaves().len();
    for leaf in 0..leaves {
        let x = cover.leaf_preimage(leaf)?;
        let t = crate::hausdorff::trace(&cover, &x)?;
        r.check(t.leaf == leaf, || {
            format!("leaf {leaf}: preimage {} lands on {}", q(&x), t.leaf)
        });
    }
    r.notes
        .push(format!("{leaves} leaves, block widths {:?}", cover.block_widths()));

    let widths = cover.block_widths();
    let budget = cover.digit_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let j = rng.gen_range(0..=widths.len());
        let shared_len: usize = widths[..j].iter().map(|&w| w as usize).sum();
        let a = random_word(&mut rng, budget);
        let mut b = a[..shared_len].to_vec();
        b.extend(random_word(&mut rng, budget - shared_len));
        let (x, y) = (word_value(a)?, word_value(b)?);
        let report = modulus_check(&cover, &x, &y)?;
        r.check(report.shared_blocks >= j && report.holds() != Some(false), || {
            format!(
                "x={} x'={}: {} shared blocks, distance {}",
                q(&x),
                q(&y),
                report.shared_blocks,
                q(&report.distance)
            )
        });
    }

    let point = Point::new(vec![ratio(1, 3), ratio(2, 7)]);
    let single = build_cover(&CompactBoxSet::points(std::slice::from_ref(&point))?, depth)?;
    for k in 0..=27 {
        let x = ratio(k, 27);
        if membership(&x)?.is_in_c() {
            let y = hausdorff_map(&single, &x)?;
            r.check(y == point, || format!("singleton map sends {} to {y}", q(&x)));
        }
    }
    Ok(r)
}

fn svc(depth: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("svc");
    let mut prev_removed = Rational::zero();
    for n in 1..=depth {
        let remaining = svc_remaining_length(4, n);
        let expected = ratio(1, 2) + ratio(1, 2) * inverse_power(2, n);
        r.check(remaining == expected, || {
            format!("SVC(4) level {n}: remaining {}", q(&remaining))
        });
        let removed = Rational::one() - &remaining;
        r.check(removed > prev_removed && removed < ratio(1, 2), || {
            format!("SVC(4) level {n}: removed {}", q(&removed))
        });
        prev_removed = removed;
        if n <= 12 {
            let direct = svc_iterate(4, n)?.total_length();
            r.check(direct == remaining, || {
                format!("SVC(4) level {n}: pieces sum to {}", q(&direct))
            });
        }
    }
    for n in 0..=depth.min(12) {
        let a = svc_iterate(3, n)?;
        let b = cantor_iterate(n)?;
        r.check(a == b, || format!("SVC(3) differs from C at level {n}"));
    }
    Ok(r)
}

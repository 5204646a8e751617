//! Hausdorff's surjection from the Cantor set onto a compact set, at finite
//! depth, for compact sets given as finite unions of rational boxes.
//!
//! Level `k` of the cover splits every piece of level `k - 1` into at most
//! `2^{n_k}` nonempty pieces, each inside a closed max-norm ball of radius
//! `2^{1-k}` around a point of the piece. Short covers are padded by repeating
//! their last piece, so a block of `n_k` halved ternary digits always names a
//! child. Reading the blocks of `x` left to right walks down the tree.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
#[cfg(test)]
use num_traits::Zero;

use crate::cantor_set::require_cantor_digits;
use crate::error::{Error, Result};
use crate::expansion::{format_rational, inverse_power, parse_rational, ratio, Base, DigitExpansion, Rational};
use crate::space_filling::Point;

/// Closed axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`; may be a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxD {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl BoxD {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::domain("box corners must share a positive dimension"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::domain("box lower corner exceeds upper corner"));
        }
        Ok(BoxD { lo, hi })
    }

    pub fn point(p: &Point) -> Self {
        BoxD {
            lo: p.coords().to_vec(),
            hi: p.coords().to_vec(),
        }
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| l <= c && c <= h)
    }

    pub fn intersect(&self, other: &BoxD) -> Option<BoxD> {
        let lo: Vec<Rational> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(b).clone()).collect();
        let hi: Vec<Rational> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(b).clone()).collect();
        lo.iter().zip(&hi).all(|(l, h)| l <= h).then_some(BoxD { lo, hi })
    }
}

/// Nonempty finite union of closed boxes in `R^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactBoxSet {
    dim: usize,
    boxes: Vec<BoxD>,
}

impl CompactBoxSet {
    pub fn new(boxes: Vec<BoxD>) -> Result<Self> {
        let Some(first) = boxes.first() else {
            return Err(Error::domain("compact set must be nonempty"));
        };
        let dim = first.dim();
        if boxes.iter().any(|b| b.dim() != dim) {
            return Err(Error::domain("all boxes must share one dimension"));
        }
        Ok(CompactBoxSet { dim, boxes })
    }

    /// Unit cube `[0, 1]^dim`.
    pub fn unit_cube(dim: usize) -> Result<Self> {
        CompactBoxSet::new(vec![BoxD::new(vec![ratio(0, 1); dim], vec![ratio(1, 1); dim])?])
    }

    pub fn points(points: &[Point]) -> Result<Self> {
        CompactBoxSet::new(points.iter().map(BoxD::point).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[BoxD] {
        &self.boxes
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        self.boxes.iter().any(|b| b.contains_point(p))
    }

    pub fn bounding_box(&self) -> BoxD {
        let lo = (0..self.dim)
            .map(|a| self.boxes.iter().map(|b| &b.lo[a]).min().unwrap().clone())
            .collect();
        let hi = (0..self.dim)
            .map(|a| self.boxes.iter().map(|b| &b.hi[a]).max().unwrap().clone())
            .collect();
        BoxD { lo, hi }
    }

    /// `self ∩ cell`, or `None` when empty.
    pub fn intersect_box(&self, cell: &BoxD) -> Option<CompactBoxSet> {
        let boxes: Vec<BoxD> = self.boxes.iter().filter_map(|b| b.intersect(cell)).collect();
        (!boxes.is_empty()).then_some(CompactBoxSet { dim: self.dim, boxes })
    }

    /// Lexicographically least lower corner among the boxes; a point of the set.
    pub fn representative(&self) -> Point {
        Point::new(self.boxes.iter().map(|b| &b.lo).min().unwrap().clone())
    }

    /// Exact containment of box unions.
    ///
    /// All box faces lie on the grid spanned by the corner coordinates of both
    /// sets, so each grid atom (a product of grid points and open gaps) is
    /// either inside a box or disjoint from it. Testing one representative
    /// per atom decides containment.
    pub fn is_subset_of(&self, other: &CompactBoxSet) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let axes: Vec<Vec<Rational>> = (0..self.dim)
            .map(|a| {
                let coords: BTreeSet<&Rational> = self
                    .boxes
                    .iter()
                    .chain(&other.boxes)
                    .flat_map(|b| [&b.lo[a], &b.hi[a]])
                    .collect();
                let coords: Vec<&Rational> = coords.into_iter().collect();
                let mut reps: Vec<Rational> = Vec::with_capacity(coords.len() * 2);
                for (i, c) in coords.iter().enumerate() {
                    reps.push((*c).clone());
                    if let Some(next) = coords.get(i + 1) {
                        reps.push((*c + *next) / ratio(2, 1));
                    }
                }
                reps
            })
            .collect();
        let mut index = vec![0usize; self.dim];
        loop {
            let p: Vec<Rational> = index.iter().enumerate().map(|(a, &i)| axes[a][i].clone()).collect();
            if self.contains_point(&p) && !other.contains_point(&p) {
                return false;
            }
            // odometer over the atom grid
            let mut a = 0;
            loop {
                if a == self.dim {
                    return true;
                }
                index[a] += 1;
                if index[a] < axes[a].len() {
                    break;
                }
                index[a] = 0;
                a += 1;
            }
        }
    }

    pub fn set_eq(&self, other: &CompactBoxSet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Reads the line format written by the `Display` impl:
    ///
    /// ```text
    /// # comment
    /// dimension 2
    /// box 0/1 0/1 1/1 1/1   # lower corner, then upper corner
    /// point 1/2 3/4
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut boxes = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let values: Vec<&str> = words.collect();
            let coords = |vals: &[&str]| -> Result<Vec<Rational>> {
                vals.iter()
                    .map(|v| parse_rational(v).map_err(|e| Error::parse(line_no, e.to_string())))
                    .collect()
            };
            match keyword {
                "dimension" => {
                    if dim.is_some() {
                        return Err(Error::parse(line_no, "dimension given twice"));
                    }
                    let [d] = values[..] else {
                        return Err(Error::parse(line_no, "expected `dimension <d>`"));
                    };
                    let d: usize = d
                        .parse()
                        .map_err(|_| Error::parse(line_no, "dimension is not an integer"))?;
                    if d == 0 {
                        return Err(Error::parse(line_no, "dimension must be positive"));
                    }
                    dim = Some(d);
                }
                "box" | "point" => {
                    let d = dim.ok_or_else(|| Error::parse(line_no, "`dimension` must come first"))?;
                    let b = if keyword == "box" {
                        if values.len() != 2 * d {
                            return Err(Error::parse(line_no, format!("box needs {} coordinates", 2 * d)));
                        }
                        let c = coords(&values)?;
                        BoxD::new(c[..d].to_vec(), c[d..].to_vec()).map_err(|e| Error::parse(line_no, e.to_string()))?
                    } else {
                        if values.len() != d {
                            return Err(Error::parse(line_no, format!("point needs {d} coordinates")));
                        }
                        BoxD::point(&Point::new(coords(&values)?))
                    };
                    boxes.push(b);
                }
                other => return Err(Error::parse(line_no, format!("unknown keyword {other:?}"))),
            }
        }
        if dim.is_none() {
            return Err(Error::parse(last_line.max(1), "missing `dimension` line"));
        }
        CompactBoxSet::new(boxes)
    }
}

impl fmt::Display for CompactBoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {}", self.dim)?;
        for b in &self.boxes {
            let words: Vec<String> = b.lo.iter().chain(&b.hi).map(format_rational).collect();
            writeln!(f, "box {}", words.join(" "))?;
        }
        Ok(())
    }
}

/// One node `K_{i_1 ... i_k}` of a nested cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub center: Point,
    pub radius: Rational,
    /// Index into the previous level; `None` on level 1.
    pub parent: Option<usize>,
    pub set: CompactBoxSet,
}

/// All pieces of one level, grouped by parent in parent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverLevel {
    /// `n_k`: every parent has exactly `2^{n_k}` children.
    pub block_width: u32,
    pub radius: Rational,
    pub pieces: Vec<Piece>,
}

/// Nested cover of a compact box set down to a finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedCover {
    root: CompactBoxSet,
    levels: Vec<CoverLevel>,
}

/// Splits `set` into nonempty pieces of side at most `radius`, each paired
/// with a point of itself, sorted by that point.
fn split_piece(set: &CompactBoxSet, radius: &Rational) -> Vec<(Point, CompactBoxSet)> {
    let bbox = set.bounding_box();
    let counts: Vec<usize> = (0..set.dim())
        .map(|a| {
            let cells = ((&bbox.hi[a] - &bbox.lo[a]) / radius).ceil().to_integer();
            cells.to_usize().unwrap_or(usize::MAX).max(1)
        })
        .collect();
    let mut out = Vec::new();
    let mut index = vec![0usize; set.dim()];
    'cells: loop {
        let lo: Vec<Rational> = index
            .iter()
            .enumerate()
            .map(|(a, &i)| &bbox.lo[a] + radius * Rational::from_integer(BigInt::from(i)))
            .collect();
        let hi: Vec<Rational> = lo.iter().map(|l| l + radius).collect();
        if let Some(piece) = set.intersect_box(&BoxD { lo, hi }) {
            out.push((piece.representative(), piece));
        }
        let mut a = 0;
        loop {
            if a == set.dim() {
                break 'cells;
            }
            index[a] += 1;
            if index[a] < counts[a] {
                break;
            }
            index[a] = 0;
            a += 1;
        }
    }
    // stable: ties keep cell order
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

fn ceil_log2(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Cover of `k` with radii `1, 1/2, 1/4, ...` on levels `1..=depth`.
pub fn build_cover(k: &CompactBoxSet, depth: u32) -> Result<NestedCover> {
    if depth == 0 {
        return Err(Error::domain("cover depth must be at least 1"));
    }
    if depth > 62 {
        return Err(Error::DepthLimit { depth, limit: 62 });
    }
    let mut levels: Vec<CoverLevel> = Vec::with_capacity(depth as usize);
    for level in 1..=depth {
        let radius = inverse_power(2, level - 1);
        let parents: Vec<&CompactBoxSet> = match levels.last() {
            Some(prev) => prev.pieces.iter().map(|p| &p.set).collect(),
            None => vec![k],
        };
        let children: Vec<Vec<(Point, CompactBoxSet)>> = parents.iter().map(|set| split_piece(set, &radius)).collect();
        let widest = children.iter().map(Vec::len).max().unwrap_or(1);
        let block_width = ceil_log2(widest);
        let fanout = 1usize << block_width;
        let mut pieces = Vec::with_capacity(parents.len() * fanout);
        for (parent, kids) in children.into_iter().enumerate() {
            let last = kids.last().expect("a nonempty set has a nonempty piece").clone();
            let padding = fanout - kids.len();
            for (center, set) in kids.into_iter().chain(std::iter::repeat_n(last, padding)) {
                pieces.push(Piece {
                    center,
                    radius: radius.clone(),
                    parent: (level > 1).then_some(parent),
                    set,
                });
            }
        }
        levels.push(CoverLevel {
            block_width,
            radius,
            pieces,
        });
    }
    Ok(NestedCover {
        root: k.clone(),
        levels,
    })
}

impl NestedCover {
    pub fn root(&self) -> &CompactBoxSet {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Levels `1..=depth`, stored from index 0.
    pub fn levels(&self) -> &[CoverLevel] {
        &self.levels
    }

    pub fn block_widths(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.block_width).collect()
    }

    /// Ternary digits consumed by a full descent, `n_1 + ... + n_depth`.
    pub fn digit_budget(&self) -> usize {
        self.levels.iter().map(|l| l.block_width as usize).sum()
    }

    pub fn leaves(&self) -> &[Piece] {
        &self.levels.last().expect("depth >= 1").pieces
    }

    /// Every structural invariant that fails, as human-readable lines.
    pub fn soundness_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let parents: Vec<&CompactBoxSet> = if k == 0 {
                vec![&self.root]
            } else {
                self.levels[k - 1].pieces.iter().map(|p| &p.set).collect()
            };
            let fanout = 1usize << level.block_width;
            if level.pieces.len() != parents.len() * fanout {
                bad.push(format!(
                    "level {}: {} pieces for {} parents",
                    k + 1,
                    level.pieces.len(),
                    parents.len()
                ));
                continue;
            }
            if level.radius != inverse_power(2, k as u32) {
                bad.push(format!("level {}: radius {}", k + 1, format_rational(&level.radius)));
            }
            for (p, parent) in parents.iter().enumerate() {
                let kids = &level.pieces[p * fanout..(p + 1) * fanout];
                for (i, kid) in kids.iter().enumerate() {
                    let ball = BoxD {
                        lo: kid.center.coords().iter().map(|c| c - &kid.radius).collect(),
                        hi: kid.center.coords().iter().map(|c| c + &kid.radius).collect(),
                    };
                    let ball_set = CompactBoxSet::new(vec![ball]).expect("nonempty");
                    if !kid.set.is_subset_of(&ball_set) || !kid.set.is_subset_of(parent) {
                        bad.push(format!(
                            "level {} piece {}: outside its ball or parent",
                            k + 1,
                            p * fanout + i
                        ));
                    }
                    if !kid.set.contains_point(kid.center.coords()) {
                        bad.push(format!(
                            "level {} piece {}: center outside piece",
                            k + 1,
                            p * fanout + i
                        ));
                    }
                }
                let union = CompactBoxSet::new(kids.iter().flat_map(|c| c.set.boxes.iter().cloned()).collect())
                    .expect("nonempty");
                if !union.set_eq(parent) {
                    bad.push(format!("level {} parent {}: children do not union to parent", k + 1, p));
                }
            }
        }
        bad
    }

    /// The ternary {0, 2} word (terminating) whose descent ends at `leaf`.
    pub fn leaf_preimage(&self, leaf: usize) -> Result<Rational> {
        if leaf >= self.leaves().len() {
            return Err(Error::domain(format!("leaf {leaf} out of range")));
        }
        let mut blocks = Vec::with_capacity(self.levels.len());
        let mut rest = leaf;
        for level in self.levels.iter().rev() {
            let w = level.block_width;
            blocks.push((rest & ((1 << w) - 1), w));
            rest >>= w;
        }
        let digits: Vec<u8> = blocks
            .iter()
            .rev()
            .flat_map(|&(i, w)| (0..w).rev().map(move |bit| if i >> bit & 1 == 1 { 2 } else { 0 }))
            .collect();
        Ok(DigitExpansion::new(Base::Ternary, digits, Vec::new())?.value())
    }
}

/// How `x` was routed through a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapTrace {
    pub x: Rational,
    /// Halved digits read at each level.
    pub blocks: Vec<Vec<u8>>,
    /// Child index `i_k` chosen at each level.
    pub indices: Vec<u64>,
    /// Index of the reached piece within the last level.
    pub leaf: usize,
    pub point: Point,
}

/// Descends the cover along the digit blocks of `x` and records the path.
pub fn trace(cover: &NestedCover, x: &Rational) -> Result<MapTrace> {
    let digits = require_cantor_digits(x, "the map is defined on C")?;
    let mut stream = digits.digits().map(|d| d / 2);
    let mut blocks = Vec::with_capacity(cover.depth());
    let mut indices = Vec::with_capacity(cover.depth());
    let mut global = 0usize;
    for level in &cover.levels {
        let block: Vec<u8> = stream.by_ref().take(level.block_width as usize).collect();
        let i = block.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b));
        global = (global << level.block_width) | i as usize;
        blocks.push(block);
        indices.push(i);
    }
    let point = cover.leaves()[global].center.clone();
    Ok(MapTrace {
        x: x.clone(),
        blocks,
        indices,
        leaf: global,
        point,
    })
}

/// `f(x)`: center of the deepest piece reached by `x`.
pub fn hausdorff_map(cover: &NestedCover, x: &Rational) -> Result<Point> {
    Ok(trace(cover, x)?.point)
}

/// Outcome of [`modulus_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusReport {
    /// Leading ternary digits the two points share, capped at the digit budget.
    pub shared_digits: usize,
    /// Largest `j` with `n_1 + ... + n_j <= shared_digits`.
    pub shared_blocks: usize,
    /// Max-norm distance between the images.
    pub distance: Rational,
    /// `2^-(j-2)` when `j >= 1`; `None` when no block is shared.
    pub bound: Option<Rational>,
}

impl ModulusReport {
    /// `None` when the bound is vacuous.
    pub fn holds(&self) -> Option<bool> {
        self.bound.as_ref().map(|b| self.distance < *b)
    }
}

/// Checks `||f(x) - f(x')|| < 2^-(j-2)` where `j` counts shared digit blocks.
pub fn modulus_check(cover: &NestedCover, x: &Rational, x_prime: &Rational) -> Result<ModulusReport> {
    let a = require_cantor_digits(x, "the map is defined on C")?;
    let b = require_cantor_digits(x_prime, "the map is defined on C")?;
    let budget = cover.digit_budget();
    let shared_digits = a
        .digits()
        .zip(b.digits())
        .take(budget)
        .take_while(|(p, q)| p == q)
        .count();
    let mut used = 0usize;
    let mut shared_blocks = 0usize;
    for level in &cover.levels {
        used += level.block_width as usize;
        if used > shared_digits {
            break;
        }
        shared_blocks += 1;
    }
    let distance = hausdorff_map(cover, x)?.distance_inf(&hausdorff_map(cover, x_prime)?);
    let bound = (shared_blocks >= 1).then(|| {
        // 2^(2 - j)
        if shared_blocks <= 2 {
            Rational::from_integer(BigInt::from(1u32 << (2 - shared_blocks)))
        } else {
            inverse_power(2, shared_blocks as u32 - 2)
        }
    });
    Ok(ModulusReport {
        shared_digits,
        shared_blocks,
        distance,
        bound,
    })
}

/// Radius bound on the distance from a depth-`depth` evaluation to the limit.
pub fn depth_error_bound(depth: u32) -> Rational {
    if depth >= 2 {
        inverse_power(2, depth - 2)
    } else {
        Rational::from_integer(BigInt::from(1u32 << (2 - depth)))
    }
}

//! Colored partitions on the `C_l^(1)` array and the downward-path rule.
//!
//! The array is extended on the left: column `-2` holds the highest-weight
//! coefficients `k_l, ..., k_0` on rows `0, 2, ..., 2l`, and column `-1` holds
//! zeros on the odd rows. A downward path visits one slot in every row, moving
//! one column left or right between consecutive rows. A colored partition (a
//! multiplicity for each array node) is admissible for `L(Λ)` when every
//! downward path collects at most the level of `Λ`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::affine::{AffineType, Spec};
use crate::array::{cols_per_period, spec_array, ArrayError, SpecArray};
use crate::formulas::{char_ratio, weyl_kac_c1, CharFamily, CharSpec, FormulaError, HighestWeight, VerifyReport};
use crate::qseries::Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("weight and specialization ranks differ ({weight} vs {spec})")]
    RankMismatch { weight: usize, spec: usize },
    #[error("level must be positive")]
    ZeroLevel,
    #[error("enumeration exceeded the work limit of {0} steps")]
    WorkLimit(u64),
    #[error("({row},{col}) is not an array node")]
    NotANode { row: usize, col: usize },
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Multiplicities of array nodes, keyed by `(row, col)`.
pub type ColoredPartition = BTreeMap<(usize, usize), u64>;

/// A dense grid of slot weights over columns `-2..ncols`.
struct Grid {
    l: usize,
    ncols: usize,
    w: Vec<u64>,
}

impl Grid {
    fn new(l: usize, ncols: usize, weight: &HighestWeight) -> Grid {
        let mut g = Grid { l, ncols, w: vec![0; (2 * l + 1) * (ncols + 2)] };
        for i in 0..=l {
            g.set(2 * i, -2, weight.0[l - i]);
        }
        g
    }

    fn idx(&self, row: usize, col: i64) -> usize {
        row * (self.ncols + 2) + (col + 2) as usize
    }

    fn set(&mut self, row: usize, col: i64, v: u64) {
        let i = self.idx(row, col);
        self.w[i] = v;
    }

    fn get(&self, row: usize, col: i64) -> u64 {
        if col >= self.ncols as i64 {
            return 0;
        }
        self.w[self.idx(row, col)]
    }

    /// Heaviest downward path using only columns in `[lo, hi]`.
    fn max_path(&self, lo: i64, hi: i64) -> u64 {
        let lo = lo.max(-2);
        let width = (hi - lo + 1) as usize;
        let mut prev: Vec<Option<u64>> = vec![None; width];
        for row in 0..=2 * self.l {
            let mut cur: Vec<Option<u64>> = vec![None; width];
            for (k, slot) in cur.iter_mut().enumerate() {
                let col = lo + k as i64;
                if (row as i64 + col).rem_euclid(2) != 0 {
                    continue;
                }
                let w = self.get(row, col);
                *slot = if row == 0 {
                    Some(w)
                } else {
                    let left = if k > 0 { prev[k - 1] } else { None };
                    let right = prev.get(k + 1).copied().flatten();
                    left.max(right).map(|b| b + w)
                };
            }
            prev = cur;
        }
        prev.into_iter().flatten().max().unwrap_or(0)
    }
}

/// Largest total multiplicity along a downward path of the extended array.
pub fn max_downpath(l: usize, weight: &HighestWeight, parts: &ColoredPartition) -> u64 {
    let ncols = parts.keys().map(|&(_, c)| c + 1).max().unwrap_or(0) + 2 * l + 2;
    let mut g = Grid::new(l, ncols, weight);
    for (&(r, c), &m) in parts {
        g.set(r, c as i64, m);
    }
    g.max_path(-2, ncols as i64 - 1)
}

pub fn is_admissible(l: usize, weight: &HighestWeight, parts: &ColoredPartition) -> bool {
    max_downpath(l, weight, parts) <= weight.level()
}

/// Weighted size `Σ m · label` of a colored partition.
pub fn norm(array: &SpecArray, parts: &ColoredPartition) -> Result<u64, PartitionError> {
    parts
        .iter()
        .map(|(&(row, col), &m)| array.label(row, col).map(|v| v * m).ok_or(PartitionError::NotANode { row, col }))
        .sum()
}

/// What to count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProblem {
    pub weight: HighestWeight,
    pub s: Vec<u64>,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumOptions {
    pub threads: usize,
    /// Maximum number of search steps.
    pub work_limit: u64,
    /// Also count by total root.
    pub refine: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { threads: 1, work_limit: 2_000_000_000, refine: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// `counts[n]` admissible partitions of norm `n`, for `n = 0..=bound`.
    pub counts: Vec<u64>,
    /// Counts keyed by the sum of the roots of all parts, when requested.
    pub refined: Option<BTreeMap<Vec<u64>, u64>>,
}

impl Enumeration {
    pub fn to_json(&self, problem: &PartitionProblem) -> String {
        serde_json::json!({
            "lambda": problem.weight.0,
            "s": problem.s,
            "bound": problem.bound,
            "counts": self.counts,
        })
        .to_string()
    }

    pub fn series(&self) -> Series {
        Series::from_coeffs(self.counts.iter().map(|&c| c.into()).collect())
    }
}

struct Slot {
    row: usize,
    label: u64,
    root: Vec<u64>,
}

struct Search<'a> {
    cols: &'a [Vec<Slot>],
    l: usize,
    level: u64,
    bound: u64,
    grid: Grid,
    counts: Vec<u64>,
    refined: Option<BTreeMap<Vec<u64>, u64>>,
    root_sum: Vec<u64>,
    steps: u64,
    limit: u64,
}

impl Search<'_> {
    fn window_ok(&self, col: usize) -> bool {
        let c = col as i64;
        self.grid.max_path(c - 2 * self.l as i64, c) <= self.level
    }

    fn tail_ok(&self) -> bool {
        let last = self.cols.len() as i64 - 1;
        (1..=2 * self.l as i64).all(|d| self.grid.max_path(last + d - 2 * self.l as i64, last + d) <= self.level)
    }

    fn run(&mut self, col: usize, slot: usize, total: u64) -> Result<(), PartitionError> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(PartitionError::WorkLimit(self.limit));
        }
        if col == self.cols.len() {
            if self.tail_ok() {
                self.counts[total as usize] += 1;
                if let Some(map) = self.refined.as_mut() {
                    *map.entry(self.root_sum.clone()).or_insert(0) += 1;
                }
            }
            return Ok(());
        }
        let slots = &self.cols[col];
        if slot == slots.len() {
            if self.window_ok(col) {
                self.run(col + 1, 0, total)?;
            }
            return Ok(());
        }
        let Slot { row, label, ref root } = slots[slot];
        let mut m = 0;
        loop {
            self.grid.set(row, col as i64, m);
            self.run(col, slot + 1, total + m * label)?;
            if m == self.level || total + (m + 1) * label > self.bound {
                break;
            }
            m += 1;
            self.root_sum.iter_mut().zip(root).for_each(|(a, b)| *a += b);
        }
        self.root_sum.iter_mut().zip(root).for_each(|(a, b)| *a -= m * b);
        self.grid.set(row, col as i64, 0);
        Ok(())
    }
}

/// Counts admissible colored partitions of norm at most `bound`.
pub fn enumerate(problem: &PartitionProblem, opts: &EnumOptions) -> Result<Enumeration, PartitionError> {
    let l = problem.weight.rank();
    if problem.s.len() != l + 1 {
        return Err(PartitionError::RankMismatch { weight: l, spec: problem.s.len().saturating_sub(1) });
    }
    let level = problem.weight.level();
    if level == 0 {
        return Err(PartitionError::ZeroLevel);
    }
    let spec = Spec::new(AffineType::C1, l, problem.s.clone()).map_err(FormulaError::from)?;
    let w = cols_per_period(AffineType::C1, l);
    let ncols = w * (problem.bound / spec.period() + 2) as usize;
    let array = spec_array(&spec, ncols)?;
    let mut cols: Vec<Vec<Slot>> = (0..ncols).map(|_| Vec::new()).collect();
    for n in &array.nodes {
        if n.label <= problem.bound {
            cols[n.node.col].push(Slot { row: n.node.row, label: n.label, root: n.node.root.0.clone() });
        }
    }
    while cols.last().is_some_and(|c| c.is_empty()) {
        cols.pop();
    }
    let fresh = |limit: u64| Search {
        cols: &cols,
        l,
        level,
        bound: problem.bound,
        grid: Grid::new(l, cols.len() + 2 * l + 1, &problem.weight),
        counts: vec![0; problem.bound as usize + 1],
        refined: opts.refine.then(BTreeMap::new),
        root_sum: vec![0; l + 1],
        steps: 0,
        limit,
    };

    let threads = opts.threads.max(1);
    if threads == 1 || cols.is_empty() {
        let mut s = fresh(opts.work_limit);
        s.run(0, 0, 0)?;
        return Ok(Enumeration { counts: s.counts, refined: s.refined });
    }

    // Split on the multiplicities of column 0.
    let first = &cols[0];
    let mut prefixes: Vec<Vec<u64>> = vec![vec![]];
    for slot in first {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                let used: u64 = p.iter().zip(first).map(|(m, s)| m * s.label).sum();
                (0..=level).take_while(move |m| used + m * slot.label <= problem.bound).map(move |m| {
                    let mut q = p.clone();
                    q.push(m);
                    q
                })
            })
            .collect();
    }
    let results: Vec<Result<Search, PartitionError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let mine: Vec<&Vec<u64>> = prefixes.iter().skip(t).step_by(threads).collect();
                let fresh = &fresh;
                let cols = &cols;
                scope.spawn(move || {
                    let mut s = fresh(opts.work_limit);
                    for p in mine {
                        let mut total = 0;
                        for (m, slot) in p.iter().zip(&cols[0]) {
                            s.grid.set(slot.row, 0, *m);
                            total += m * slot.label;
                            s.root_sum.iter_mut().zip(&slot.root).for_each(|(a, b)| *a += m * b);
                        }
                        if s.window_ok(0) {
                            s.run(1, 0, total)?;
                        }
                        for (m, slot) in p.iter().zip(&cols[0]) {
                            s.grid.set(slot.row, 0, 0);
                            s.root_sum.iter_mut().zip(&slot.root).for_each(|(a, b)| *a -= m * b);
                        }
                    }
                    Ok(s)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut counts = vec![0; problem.bound as usize + 1];
    let mut refined = opts.refine.then(BTreeMap::new);
    let mut steps = 0;
    for r in results {
        let s = r?;
        steps += s.steps;
        counts.iter_mut().zip(&s.counts).for_each(|(a, b)| *a += b);
        if let (Some(acc), Some(part)) = (refined.as_mut(), s.refined) {
            for (k, v) in part {
                *acc.entry(k).or_insert(0) += v;
            }
        }
    }
    if steps > opts.work_limit {
        return Err(PartitionError::WorkLimit(opts.work_limit));
    }
    Ok(Enumeration { counts, refined })
}

/// The character the partition counts should reproduce.
pub fn expected_character(problem: &PartitionProblem) -> Result<Series, PartitionError> {
    let l = problem.weight.rank();
    let order = problem.bound as usize;
    let s = &problem.s;
    let ones = |i: usize| i == 0 || i == l;
    let family = if s.iter().all(|&x| x == 1) {
        Some(CharFamily::Lepowsky)
    } else if s[0] == 2 && s[1..].iter().all(|&x| x == 1) {
        Some(CharFamily::W21_1)
    } else if s[l] == 2 && s[..l].iter().all(|&x| x == 1) {
        Some(CharFamily::W1_12)
    } else if s.iter().enumerate().all(|(i, &x)| x == if ones(i) { 2 } else { 1 }) {
        Some(CharFamily::W21_12)
    } else {
        None
    };
    Ok(match family {
        Some(f) => char_ratio(&CharSpec::weight(f, &problem.weight.0)?, order)?,
        None => weyl_kac_c1(&problem.weight, s, order, 0)?,
    })
}

/// Compares partition counts with the specialized character.
pub fn verify_conjecture(problem: &PartitionProblem, opts: &EnumOptions) -> Result<VerifyReport, PartitionError> {
    let counts = enumerate(problem, opts)?.series();
    let expected = expected_character(problem)?;
    Ok(VerifyReport::new("partitions", counts, expected)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(k: &[u64]) -> HighestWeight {
        HighestWeight(k.to_vec())
    }

    #[test]
    fn first_triangle_part_needs_level_two() {
        // (0,0) sits in the t^0 triangle of C_2^(1).
        let mut p = ColoredPartition::new();
        p.insert((0, 0), 1);
        assert_eq!(max_downpath(2, &hw(&[1, 0, 0]), &p), 2);
        assert!(!is_admissible(2, &hw(&[1, 0, 0]), &p));
        p.clear();
        p.insert((4, 0), 1);
        assert!(is_admissible(2, &hw(&[1, 0, 0]), &p));
    }

    #[test]
    fn level_one_counts() {
        let prob = PartitionProblem { weight: hw(&[1, 0, 0]), s: vec![2, 1, 1], bound: 5 };
        let e = enumerate(&prob, &EnumOptions::default()).unwrap();
        assert_eq!(e.counts, vec![1, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn threads_do_not_change_counts() {
        let prob = PartitionProblem { weight: hw(&[1, 1, 0]), s: vec![1, 1, 1], bound: 10 };
        let one = enumerate(&prob, &EnumOptions { refine: true, ..Default::default() }).unwrap();
        let four = enumerate(&prob, &EnumOptions { threads: 4, refine: true, ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn work_limit_is_reported() {
        let prob = PartitionProblem { weight: hw(&[2, 0, 0]), s: vec![1, 1, 1], bound: 20 };
        let r = enumerate(&prob, &EnumOptions { work_limit: 100, ..Default::default() });
        assert_eq!(r, Err(PartitionError::WorkLimit(100)));
    }

    #[test]
    fn json_shape() {
        let prob = PartitionProblem { weight: hw(&[1, 0, 0]), s: vec![2, 1, 1], bound: 3 };
        let e = enumerate(&prob, &EnumOptions::default()).unwrap();
        assert_eq!(e.to_json(&prob), r#"{"lambda":[1,0,0],"s":[2,1,1],"bound":3,"counts":[1,0,1,1]}"#);
    }
}

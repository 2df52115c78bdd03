//! Two-dimensional arrays of negative root vectors and their specialized labels.
//!
//! The grid has rows `0..=2l` (row 0 on top) and columns `0, 1, ...`; a slot
//! `(row, col)` can only hold a node when `row` and `col` have the same parity.
//! Each node records the root it represents as simple-root coordinates; the
//! label under a specialization `s` is the degree of that root.
//!
//! The array is assembled from triangles and diagonals of letter pairs taken
//! from the vector crystal of the finite algebra (`C_l` for `C1`, `B_l` for
//! the twisted types), one component per power of `t`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{simple_roots, AffineType, RootCoord, Spec};
use crate::qseries::{ProductExpr, Series};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("arrays need rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("node ({row},{col}) has a root outside the positive root lattice: {coords}")]
    BadRoot { row: usize, col: usize, coords: String },
    #[error("two nodes placed at ({row},{col})")]
    Collision { row: usize, col: usize },
    #[error("specialization is for {spec_type} rank {spec_l}, array is {ty} rank {l}")]
    SpecMismatch { spec_type: AffineType, spec_l: usize, ty: AffineType, l: usize },
    #[error("array has {have} columns, one period needs {need}")]
    TooFewColumns { have: usize, need: usize },
    #[error("first-period label {label} exceeds the period {period}")]
    LabelAbovePeriod { label: u64, period: u64 },
    #[error("malformed array document: {0}")]
    Json(String),
}

/// Which piece of the array a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    /// The clipped adjoint triangle of `t^0`.
    FirstTriangle,
    AdjointTriangle,
    VectorDiagonal,
    Sym2Triangle,
}

/// A component is identified by its kind and the power of `t^{-1}` it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentId {
    pub kind: ComponentKind,
    pub shift: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayNode {
    pub row: usize,
    pub col: usize,
    /// Power of `t`; never positive.
    pub tdeg: i64,
    /// Letter indices; `q` is `None` on diagonals.
    pub p: usize,
    pub q: Option<usize>,
    /// Sum of the letter weights in the `epsilon` basis.
    pub weight: Vec<i64>,
    pub root: RootCoord,
    pub component: ComponentId,
}

/// Root vectors placed on the grid, before specialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootArray {
    pub ty: AffineType,
    pub l: usize,
    pub ncols: usize,
    /// Sorted by `(col, row)`.
    pub nodes: Vec<ArrayNode>,
}

/// Letter weights of the vector crystal: `1..l, l̄..1̄` for `C_l` and
/// `1..l, 0, l̄..1̄` for `B_l`.
pub fn letter_weights(l: usize, with_zero: bool) -> Vec<Vec<i64>> {
    let e = |i: usize, c: i64| {
        let mut v = vec![0; l];
        v[i] = c;
        v
    };
    let mut w: Vec<Vec<i64>> = (0..l).map(|i| e(i, 1)).collect();
    if with_zero {
        w.push(vec![0; l]);
    }
    w.extend((0..l).map(|i| e(l - 1 - i, -1)));
    w
}

/// Columns after which the labels repeat (up to a row flip for `C1`, `D2`).
pub fn cols_per_period(ty: AffineType, l: usize) -> usize {
    match ty {
        AffineType::C1 => 2 * l,
        AffineType::D2 => 2 * (l + 1),
        AffineType::A2 | AffineType::A2T => 2 * (2 * l + 1),
    }
}

/// Row that `row` moves to under the one-period translation.
pub fn period_row(ty: AffineType, l: usize, row: usize) -> usize {
    match ty {
        AffineType::C1 | AffineType::D2 => 2 * l - row,
        AffineType::A2 | AffineType::A2T => row,
    }
}

/// Number of nodes in one period.
pub fn nodes_per_period(ty: AffineType, l: usize) -> usize {
    match ty {
        AffineType::C1 => l * (2 * l + 1),
        AffineType::D2 => (l + 1) * (2 * l + 1),
        AffineType::A2 | AffineType::A2T => 4 * l * (l + 1),
    }
}

type Q = Ratio<i64>;

/// Inverse of the matrix whose columns are the simple roots `(eps, delta)`.
fn coordinate_solver(ty: AffineType, l: usize) -> Vec<Vec<Q>> {
    let roots = simple_roots(ty, l);
    let n = l + 1;
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> =
                roots.iter().map(|a| Q::from_integer(if r < l { a.eps[r] } else { a.delta })).collect();
            row.extend((0..n).map(|c| if c == r { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero()).expect("simple roots are independent");
        m.swap(c, piv);
        let pv = m[c][c];
        m[c].iter_mut().for_each(|x| *x /= pv);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                let pivot_row = m[c].clone();
                m[r].iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

struct Builder {
    l: usize,
    ncols: usize,
    solver: Vec<Vec<Q>>,
    nodes: HashMap<(usize, usize), ArrayNode>,
}

impl Builder {
    fn place(
        &mut self,
        row: usize,
        col: i64,
        tdeg: i64,
        (p, q): (usize, Option<usize>),
        weight: Vec<i64>,
        component: ComponentId,
    ) -> Result<(), ArrayError> {
        if col < 0 || col as usize >= self.ncols {
            return Ok(());
        }
        let col = col as usize;
        // root = -(weight + tdeg * delta)
        let target: Vec<i64> = weight.iter().map(|w| -w).chain([-tdeg]).collect();
        let coords: Vec<Q> =
            self.solver.iter().map(|row| row.iter().zip(&target).map(|(a, &b)| a * Q::from_integer(b)).sum()).collect();
        if coords.iter().any(|c| !c.is_integer() || *c < Q::zero()) {
            let text: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            return Err(ArrayError::BadRoot { row, col, coords: text.join(",") });
        }
        let root = RootCoord(coords.iter().map(|c| c.to_integer() as u64).collect());
        let node = ArrayNode { row, col, tdeg, p, q, weight, root, component };
        if self.nodes.insert((row, col), node).is_some() {
            return Err(ArrayError::Collision { row, col });
        }
        Ok(())
    }

    /// Places a triangle of letter pairs `(p, q)`, `q <= p`.
    fn triangle(
        &mut self,
        pairs: &[(usize, usize, Vec<i64>)],
        up: bool,
        base: i64,
        tdeg: i64,
        kind: ComponentKind,
    ) -> Result<(), ArrayError> {
        let l2 = 2 * self.l as i64;
        let component = ComponentId { kind, shift: (-tdeg) as u64 };
        for (p, q, w) in pairs {
            let (pi, qi) = (*p as i64, *q as i64);
            let row = if up { pi - qi } else { l2 - pi + qi };
            self.place(row as usize, base + pi + qi, tdeg, (*p, Some(*q)), w.clone(), component)?;
        }
        Ok(())
    }

    fn diagonal(&mut self, letters: &[Vec<i64>], rising: bool, base: i64, tdeg: i64) -> Result<(), ArrayError> {
        let l2 = 2 * self.l;
        let component = ComponentId { kind: ComponentKind::VectorDiagonal, shift: (-tdeg) as u64 };
        for (p, w) in letters.iter().enumerate() {
            let row = if rising { l2 - p } else { p };
            self.place(row, base + p as i64, tdeg, (p, None), w.clone(), component)?;
        }
        Ok(())
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn kind_for(tdeg: i64, kind: ComponentKind) -> ComponentKind {
    if tdeg == 0 {
        ComponentKind::FirstTriangle
    } else {
        kind
    }
}

/// Builds the array with columns `0..ncols`.
pub fn build_array(ty: AffineType, l: usize, ncols: usize) -> Result<RootArray, ArrayError> {
    if l < 2 {
        return Err(ArrayError::RankTooSmall(l));
    }
    let mut b = Builder { l, ncols, solver: coordinate_solver(ty, l), nodes: HashMap::new() };
    let (li, n) = (l as i64, ncols as i64);
    let c = letter_weights(l, false);
    let bw = letter_weights(l, true);
    let adj = |w: &[Vec<i64>], shift: usize, maxp: usize| -> Vec<(usize, usize, Vec<i64>)> {
        (0..maxp).flat_map(|p| (0..=p).map(move |q| (p, q))).map(|(p, q)| (p, q, add(&w[p + shift], &w[q]))).collect()
    };
    match ty {
        AffineType::C1 => {
            let tri = adj(&c, 0, 2 * l);
            let mut j = 0i64;
            while 2 * li * (j - 1) < n {
                let t = -j;
                b.triangle(&tri, j % 2 == 0, 2 * li * (j - 1), t, kind_for(t, ComponentKind::AdjointTriangle))?;
                j += 1;
            }
        }
        AffineType::D2 => {
            let tri = adj(&bw, 1, 2 * l);
            let mut m = 0i64;
            while 2 * (li + 1) * m - 2 * li < n {
                let t = -2 * m;
                let base = 2 * (li + 1) * m;
                b.triangle(&tri, m % 2 == 0, base - 2 * li, t, kind_for(t, ComponentKind::AdjointTriangle))?;
                b.diagonal(&bw, m % 2 == 0, base, t - 1)?;
                m += 1;
            }
        }
        AffineType::A2 | AffineType::A2T => {
            let tri = adj(&bw, 1, 2 * l);
            let sym: Vec<_> = adj(&bw, 0, 2 * l + 1).into_iter().filter(|(p, q, _)| !(*p == l && *q == l)).collect();
            let mut m = 0i64;
            while 2 * (2 * li + 1) * m - 2 * li < n {
                let t = -2 * m;
                let base = 2 * (2 * li + 1) * m;
                b.triangle(&tri, true, base - 2 * li, t, kind_for(t, ComponentKind::AdjointTriangle))?;
                b.triangle(&sym, false, base, t - 1, ComponentKind::Sym2Triangle)?;
                m += 1;
            }
        }
    }
    let mut nodes: Vec<ArrayNode> = b.nodes.into_values().collect();
    nodes.sort_by_key(|n| (n.col, n.row));
    Ok(RootArray { ty, l, ncols, nodes })
}

/// A node together with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecNode {
    pub node: ArrayNode,
    pub label: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecArray {
    pub ty: AffineType,
    pub l: usize,
    pub s: Vec<u64>,
    pub period: u64,
    pub ncols: usize,
    pub nodes: Vec<SpecNode>,
    index: HashMap<(usize, usize), usize>,
}

/// Labels every node by the degree of its root.
pub fn specialize(array: &RootArray, spec: &Spec) -> Result<SpecArray, ArrayError> {
    if spec.ty != array.ty || spec.l != array.l {
        return Err(ArrayError::SpecMismatch { spec_type: spec.ty, spec_l: spec.l, ty: array.ty, l: array.l });
    }
    let nodes: Vec<SpecNode> =
        array.nodes.iter().map(|n| SpecNode { label: n.root.dot(&spec.s), node: n.clone() }).collect();
    let index = nodes.iter().enumerate().map(|(i, n)| ((n.node.row, n.node.col), i)).collect();
    Ok(SpecArray {
        ty: array.ty,
        l: array.l,
        s: spec.s.clone(),
        period: spec.period(),
        ncols: array.ncols,
        nodes,
        index,
    })
}

/// Convenience: build and specialize in one step.
pub fn spec_array(spec: &Spec, ncols: usize) -> Result<SpecArray, ArrayError> {
    specialize(&build_array(spec.ty, spec.l, ncols)?, spec)
}

impl SpecArray {
    pub fn node(&self, row: usize, col: usize) -> Option<&SpecNode> {
        self.index.get(&(row, col)).map(|&i| &self.nodes[i])
    }

    pub fn label(&self, row: usize, col: usize) -> Option<u64> {
        self.node(row, col).map(|n| n.label)
    }

    /// Fixed-width text grid, one line per row, top row first.
    pub fn render_text(&self) -> String {
        let width = self.nodes.iter().map(|n| n.label.to_string().len()).max().unwrap_or(1);
        let mut out = String::new();
        for row in 0..=2 * self.l {
            let cells: Vec<String> = (0..self.ncols)
                .map(|col| match self.label(row, col) {
                    Some(v) => format!("{v:>width$}"),
                    None => " ".repeat(width),
                })
                .collect();
            out.push_str(cells.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_doc(&self) -> ArrayDoc {
        ArrayDoc {
            ty: self.ty.name().to_string(),
            l: self.l,
            period: self.period,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    row: n.node.row,
                    col: n.node.col,
                    label: n.label,
                    root: n.node.root.0.clone(),
                    tdeg: n.node.tdeg,
                    component: n.node.component,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("plain data")
    }
}

/// Serialized form of a specialized array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDoc {
    #[serde(rename = "type")]
    pub ty: String,
    pub l: usize,
    pub period: u64,
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub row: usize,
    pub col: usize,
    pub label: u64,
    pub root: Vec<u64>,
    pub tdeg: i64,
    pub component: ComponentId,
}

impl ArrayDoc {
    pub fn from_json(text: &str) -> Result<ArrayDoc, ArrayError> {
        serde_json::from_str(text).map_err(|e| ArrayError::Json(e.to_string()))
    }
}

/// Labels of the nodes in the first period of columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodMultiset {
    pub period: u64,
    /// Sorted ascending.
    pub labels: Vec<u64>,
}

pub fn period_multiset(array: &SpecArray) -> Result<PeriodMultiset, ArrayError> {
    let need = cols_per_period(array.ty, array.l);
    if array.ncols < need {
        return Err(ArrayError::TooFewColumns { have: array.ncols, need });
    }
    let mut labels: Vec<u64> = array.nodes.iter().filter(|n| n.node.col < need).map(|n| n.label).collect();
    labels.sort_unstable();
    Ok(PeriodMultiset { period: array.period, labels })
}

/// `prod_a prod_{k>=0} (1-q^{a+kP})` over the first-period labels `a`, as a
/// congruence product modulo `P`.
pub fn period_product(array: &SpecArray) -> Result<ProductExpr, ArrayError> {
    let pm = period_multiset(array)?;
    let mut out = ProductExpr::new();
    for &a in &pm.labels {
        if a > pm.period {
            return Err(ArrayError::LabelAbovePeriod { label: a, period: pm.period });
        }
        out.push_periodic(pm.period, a % pm.period, 1).expect("period is positive");
    }
    Ok(out)
}

/// The denominator product read off the array.
pub fn q_from_array(array: &SpecArray, order: usize) -> Result<Series, ArrayError> {
    Ok(period_product(array)?.expand(order))
}

/// Checks the pairing inside each complete adjoint triangle: a node and the
/// node with opposite weight have labels summing to a multiple of `P`, and the
/// zero-weight nodes carry multiples of `P`.
pub fn check_mirror(array: &SpecArray) -> Result<usize, String> {
    let mut groups: BTreeMap<ComponentId, Vec<&SpecNode>> = BTreeMap::new();
    for n in &array.nodes {
        if n.node.component.kind == ComponentKind::AdjointTriangle {
            groups.entry(n.node.component).or_default().push(n);
        }
    }
    let full = array.l * (2 * array.l + 1);
    let p = array.period;
    let mut checked = 0;
    for (id, nodes) in groups.iter().filter(|(_, v)| v.len() == full) {
        let by_weight: HashMap<&[i64], &SpecNode> = nodes.iter().map(|n| (n.node.weight.as_slice(), *n)).collect();
        for n in nodes {
            let neg: Vec<i64> = n.node.weight.iter().map(|w| -w).collect();
            let partner = by_weight
                .get(neg.as_slice())
                .ok_or_else(|| format!("{id:?}: node ({},{}) has no mirror partner", n.node.row, n.node.col))?;
            if (n.label + partner.label) % p != 0 {
                return Err(format!(
                    "{id:?}: labels {} at ({},{}) and {} at ({},{}) do not sum to a multiple of {p}",
                    n.label, n.node.row, n.node.col, partner.label, partner.node.row, partner.node.col
                ));
            }
            if n.node.weight.iter().all(|&w| w == 0) && n.label % p != 0 {
                return Err(format!("{id:?}: zero-weight node carries {} (period {p})", n.label));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Checks `label(period_row(row), col + W) = label(row, col) + P` wherever both
/// slots are inside the array.
pub fn check_translation(array: &SpecArray) -> Result<(), String> {
    let w = cols_per_period(array.ty, array.l);
    for n in &array.nodes {
        let (r2, c2) = (period_row(array.ty, array.l, n.node.row), n.node.col + w);
        if c2 >= array.ncols {
            continue;
        }
        match array.label(r2, c2) {
            Some(v) if v == n.label + array.period => {}
            other => {
                return Err(format!(
                    "({},{}) carries {} but ({r2},{c2}) carries {other:?}",
                    n.node.row, n.node.col, n.label
                ))
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1(l: usize, s: &[u64], ncols: usize) -> SpecArray {
        spec_array(&Spec::new(AffineType::C1, l, s.to_vec()).unwrap(), ncols).unwrap()
    }

    #[test]
    fn c2_first_column() {
        let a = build_array(AffineType::C1, 2, 4).unwrap();
        let at = |r, c| a.nodes.iter().find(|n| n.row == r && n.col == c).unwrap().root.0.clone();
        assert_eq!(at(4, 0), vec![1, 0, 0]);
        assert_eq!(at(2, 0), vec![0, 1, 0]);
        assert_eq!(at(0, 0), vec![0, 0, 1]);
    }

    #[test]
    fn a2_vacancy() {
        let a = spec_array(&Spec::principal(AffineType::A2, 2).unwrap(), 10).unwrap();
        assert!(a.label(4, 4).is_none());
        assert_eq!(a.label(4, 2), Some(3));
        assert_eq!(a.label(4, 0), Some(1));
    }

    #[test]
    fn principal_c1_labels_follow_columns() {
        let a = c1(3, &[1, 1, 1, 1], 18);
        for n in &a.nodes {
            assert_eq!(n.label, n.node.col as u64 + 1);
        }
    }

    #[test]
    fn period_counts() {
        for ty in AffineType::ALL {
            for l in 2..5 {
                let spec = Spec::principal(ty, l).unwrap();
                let a = spec_array(&spec, 3 * cols_per_period(ty, l)).unwrap();
                let pm = period_multiset(&a).unwrap();
                assert_eq!(pm.labels.len(), nodes_per_period(ty, l), "{ty} l={l}");
                assert!(pm.labels.iter().all(|&x| x <= pm.period));
            }
        }
    }

    #[test]
    fn too_few_columns() {
        let a = c1(2, &[1, 1, 1], 3);
        assert_eq!(period_multiset(&a), Err(ArrayError::TooFewColumns { have: 3, need: 4 }));
    }

    #[test]
    fn rank_one_rejected() {
        assert_eq!(build_array(AffineType::C1, 1, 4), Err(ArrayError::RankTooSmall(1)));
    }

    #[test]
    fn render_shape() {
        let a = c1(2, &[1, 1, 1], 4);
        assert_eq!(a.render_text(), "1   3\n  2   4\n1   3\n  2   4\n1   3\n");
    }

    #[test]
    fn mirror_and_translation_hold() {
        let a = c1(4, &[2, 1, 1, 1, 1], 40);
        assert!(check_mirror(&a).unwrap() >= 3);
        check_translation(&a).unwrap();
    }
}

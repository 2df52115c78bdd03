//! Root data for `C_l^(1)`, `D_{l+1}^(2)`, `A_{2l}^(2)` and the transposed
//! labelling of `A_{2l}^(2)`.
//!
//! Roots are written as `x + n*delta` with `x` an integer vector in the
//! `epsilon` basis of the underlying finite root system (`C_l` for `C1`, `B_l`
//! for the twisted types). A specialization `s = (s_0, ..., s_l)` gives the
//! simple root `alpha_i` degree `s_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qseries::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AffineType {
    C1,
    D2,
    A2,
    /// `A_{2l}^(2)` with node `i` renamed `l - i`.
    A2T,
}

impl AffineType {
    pub const ALL: [AffineType; 4] = [AffineType::C1, AffineType::D2, AffineType::A2, AffineType::A2T];

    pub fn name(self) -> &'static str {
        match self {
            AffineType::C1 => "C1",
            AffineType::D2 => "D2",
            AffineType::A2 => "A2",
            AffineType::A2T => "A2T",
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AffineType {
    type Err = AffineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(AffineType::C1),
            "D2" => Ok(AffineType::D2),
            "A2" => Ok(AffineType::A2),
            "A2T" => Ok(AffineType::A2T),
            _ => Err(AffineError::UnknownType(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("unknown affine type '{0}' (expected C1, D2, A2 or A2T)")]
    UnknownType(String),
    #[error("rank must be at least {min}, got {got}")]
    RankTooSmall { min: usize, got: usize },
    #[error("specialization has {got} entries, expected {expected}")]
    SpecLength { expected: usize, got: usize },
    #[error("specialization entries must be positive")]
    ZeroEntry,
}

/// A validated specialization vector for a given type and rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spec {
    pub ty: AffineType,
    pub l: usize,
    pub s: Vec<u64>,
}

impl Spec {
    /// Rank 1 is accepted: it is the smallest case of the product identities.
    pub fn new(ty: AffineType, l: usize, s: Vec<u64>) -> Result<Spec, AffineError> {
        if l < 1 {
            return Err(AffineError::RankTooSmall { min: 1, got: l });
        }
        if s.len() != l + 1 {
            return Err(AffineError::SpecLength { expected: l + 1, got: s.len() });
        }
        if s.contains(&0) {
            return Err(AffineError::ZeroEntry);
        }
        Ok(Spec { ty, l, s })
    }

    /// The all-ones specialization.
    pub fn principal(ty: AffineType, l: usize) -> Result<Spec, AffineError> {
        Spec::new(ty, l, vec![1; l + 1])
    }

    /// Degree of `delta`.
    pub fn delta_degree(&self) -> u64 {
        delta_coeffs(self.ty, self.l).iter().zip(&self.s).map(|(a, b)| a * b).sum()
    }

    /// Period of the specialized array labels.
    pub fn period(&self) -> u64 {
        let s = &self.s;
        let l = self.l;
        let inner: u64 = s[1..l].iter().sum();
        match self.ty {
            AffineType::C1 => s[0] + 2 * inner + s[l],
            AffineType::D2 => 2 * s.iter().sum::<u64>(),
            AffineType::A2 => 2 * (s[l] + 2 * s[..l].iter().sum::<u64>()),
            AffineType::A2T => 2 * (s[0] + 2 * s[1..].iter().sum::<u64>()),
        }
    }
}

/// Coefficients of a root in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootCoord(pub Vec<u64>);

impl RootCoord {
    /// Degree under the specialization `s`.
    pub fn dot(&self, s: &[u64]) -> u64 {
        self.0.iter().zip(s).map(|(a, b)| a * b).sum()
    }
}

/// An affine root `eps + delta * delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub eps: Vec<i64>,
    pub delta: i64,
}

fn unit(l: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; l];
    v[i - 1] = c;
    v
}

fn diff(l: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; l];
    v[i - 1] += 1;
    v[j - 1] -= 1;
    v
}

/// Simple roots `alpha_0, ..., alpha_l`.
pub fn simple_roots(ty: AffineType, l: usize) -> Vec<AffineRoot> {
    let fin = |eps| AffineRoot { eps, delta: 0 };
    match ty {
        AffineType::C1 | AffineType::D2 => {
            let c = if ty == AffineType::C1 { 2 } else { 1 };
            let mut r = vec![AffineRoot { eps: unit(l, 1, -c), delta: 1 }];
            r.extend((1..l).map(|i| fin(diff(l, i, i + 1))));
            r.push(fin(unit(l, l, c)));
            r
        }
        AffineType::A2 => {
            let mut r = vec![fin(unit(l, l, 1))];
            r.extend((1..l).map(|i| fin(diff(l, l - i, l - i + 1))));
            r.push(AffineRoot { eps: unit(l, 1, -2), delta: 1 });
            r
        }
        AffineType::A2T => {
            let mut r = simple_roots(AffineType::A2, l);
            r.reverse();
            r
        }
    }
}

/// `delta` in the simple-root basis.
pub fn delta_coeffs(ty: AffineType, l: usize) -> Vec<u64> {
    let mut a = vec![1u64; l + 1];
    match ty {
        AffineType::C1 => a[1..l].iter_mut().for_each(|x| *x = 2),
        AffineType::D2 => {}
        AffineType::A2 => a[..l].iter_mut().for_each(|x| *x = 2),
        AffineType::A2T => a[1..].iter_mut().for_each(|x| *x = 2),
    }
    a
}

/// Generalized Cartan matrix `a_ij = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
pub fn cartan_matrix(ty: AffineType, l: usize) -> Vec<Vec<i64>> {
    let roots = simple_roots(ty, l);
    let ip = |a: &AffineRoot, b: &AffineRoot| -> i64 { a.eps.iter().zip(&b.eps).map(|(x, y)| x * y).sum() };
    roots.iter().map(|ai| roots.iter().map(|aj| 2 * ip(ai, aj) / ip(ai, ai)).collect()).collect()
}

/// Simple-root coordinates of `eps + n * delta`, or `None` if it is not in the
/// root lattice.
pub fn root_coords(ty: AffineType, l: usize, eps: &[i64], n: i64) -> Option<Vec<i64>> {
    let partial = |y: &[i64]| -> Vec<i64> {
        y.iter()
            .scan(0i64, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    };
    match ty {
        AffineType::C1 => {
            let mut y = eps.to_vec();
            y[0] += 2 * n;
            let c = partial(&y);
            if c[l - 1] % 2 != 0 {
                return None;
            }
            let mut k = vec![n];
            k.extend_from_slice(&c[..l - 1]);
            k.push(c[l - 1] / 2);
            Some(k)
        }
        AffineType::D2 => {
            let mut y = eps.to_vec();
            y[0] += n;
            let mut k = vec![n];
            k.extend(partial(&y));
            Some(k)
        }
        AffineType::A2 => {
            let mut y = eps.to_vec();
            y[0] += 2 * n;
            let c = partial(&y);
            let mut k = vec![c[l - 1]];
            k.extend((1..l).map(|i| c[l - i - 1]));
            k.push(n);
            Some(k)
        }
        AffineType::A2T => {
            let mut k = root_coords(AffineType::A2, l, eps, n)?;
            k.reverse();
            Some(k)
        }
    }
}

/// Roots of the finite root system in the `epsilon` basis.
/// `long_c` selects `+-2 eps_i` (type C); otherwise `+-eps_i` (type B).
fn finite_roots(l: usize, long_c: bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 1..=l {
        for j in i + 1..=l {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; l];
                v[i - 1] = a;
                v[j - 1] = b;
                out.push(v);
            }
        }
        let c = if long_c { 2 } else { 1 };
        out.push(unit(l, i, c));
        out.push(unit(l, i, -c));
    }
    out
}

/// Weights of the `t`-component with index `n`, each with multiplicity.
/// The zero weight carries the imaginary multiplicity.
fn component_weights(ty: AffineType, l: usize, n: i64) -> Vec<(Vec<i64>, u64)> {
    let zero = vec![0i64; l];
    match ty {
        AffineType::C1 => {
            let mut w: Vec<_> = finite_roots(l, true).into_iter().map(|r| (r, 1)).collect();
            w.push((zero, l as u64));
            w
        }
        AffineType::D2 => {
            if n % 2 == 0 {
                let mut w: Vec<_> = finite_roots(l, false).into_iter().map(|r| (r, 1)).collect();
                w.push((zero, l as u64));
                w
            } else {
                let mut w: Vec<_> = (1..=l).flat_map(|i| [(unit(l, i, 1), 1), (unit(l, i, -1), 1)]).collect();
                w.push((zero, 1));
                w
            }
        }
        AffineType::A2 | AffineType::A2T => {
            let mut w: Vec<_> = finite_roots(l, false).into_iter().map(|r| (r, 1)).collect();
            if n % 2 != 0 {
                w.extend((1..=l).flat_map(|i| [(unit(l, i, 2), 1), (unit(l, i, -2), 1)]));
            }
            w.push((zero, l as u64));
            w
        }
    }
}

/// Dimensions of the graded pieces of the negative nilpotent part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub s: Vec<u64>,
    /// `dims[j]` for `j = 0..=N`; `dims[0]` is always 0.
    pub dims: Vec<u64>,
}

impl GradedDims {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// `dims[j]` = number of positive roots (with multiplicity) of degree `j`.
pub fn graded_dims(spec: &Spec, order: usize) -> GradedDims {
    if spec.ty == AffineType::A2T {
        let mut rev = spec.clone();
        rev.ty = AffineType::A2;
        rev.s.reverse();
        let mut g = graded_dims(&rev, order);
        g.s = spec.s.clone();
        return g;
    }
    let l = spec.l;
    let mut dims = vec![0u64; order + 1];
    for n in 0..=order as i64 {
        for (w, mult) in component_weights(spec.ty, l, n) {
            let is_zero = w.iter().all(|&x| x == 0);
            if n == 0 && is_zero {
                continue;
            }
            let k = root_coords(spec.ty, l, &w, n).expect("root lattice element");
            if k.iter().any(|&c| c < 0) {
                debug_assert!(n == 0, "positive shift produced a negative coordinate");
                continue;
            }
            let deg: u64 = k.iter().zip(&spec.s).map(|(&c, &s)| c as u64 * s).sum();
            if (deg as usize) <= order {
                dims[deg as usize] += mult;
            }
        }
    }
    GradedDims { s: spec.s.clone(), dims }
}

/// `Q(s; A) = prod_j (1-q^j)^{dims[j]}`.
pub fn q_denominator(spec: &Spec, order: usize) -> Series {
    let g = graded_dims(spec, order);
    let mut out = Series::one(order);
    for (j, &d) in g.dims.iter().enumerate().skip(1) {
        out.mul_one_minus_pow(j, d as i64);
    }
    out
}

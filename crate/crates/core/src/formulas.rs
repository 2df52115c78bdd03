//! Congruence sets, character formulas and independent oracles.
//!
//! Every character is available in two forms: as a ratio of denominators
//! `Q(s; A)` computed from root data ([`char_ratio`]) and as an explicit
//! congruence product ([`char_explicit`]). [`weyl_kac_c1`] computes the
//! specialized character from the Weyl–Kac formula directly.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::affine::{cartan_matrix, q_denominator, AffineError, AffineType, Spec};
use crate::qseries::{ProductExpr, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("empty argument list")]
    Empty,
    #[error("{0} has no S-set")]
    NoSSet(AffineType),
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("weight has {got} entries, rank {l} needs {expected}", expected = .l + 1)]
    WeightLength { l: usize, got: usize },
    #[error("family {family} takes {expected}")]
    WrongParams { family: CharFamily, expected: &'static str },
    #[error("n must be at least 1")]
    ZeroN,
    #[error("weight {weight:?} is not the shape required by {family} for n = {n}")]
    WeightShape { family: CharFamily, weight: Vec<u64>, n: u64 },
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Partial sums of the walk attached to a segment of a specialization.
///
/// For `C1` the walk is `a_0, +a_1, ..., +a_{r-1}, +a_r, +a_{r-1}, ..., +a_1, +a_0`;
/// for the other families it is `a_0, +a_1, ..., +a_r, +a_r, +a_{r-1}, ..., +a_1`.
/// Arguments are given in the order they are written, so for `A2` the segment
/// is `(s_i, s_{i-1}, ..., s_0)`.
pub fn d_set(family: AffineType, seg: &[u64]) -> Result<Vec<u64>, FormulaError> {
    let r = seg.len().checked_sub(1).ok_or(FormulaError::Empty)?;
    let mut steps: Vec<u64> = Vec::with_capacity(2 * r);
    if r > 0 {
        match family {
            AffineType::C1 => {
                steps.extend_from_slice(&seg[1..=r]);
                steps.extend(seg[..r].iter().rev());
            }
            _ => {
                steps.extend_from_slice(&seg[1..=r]);
                steps.extend(seg[1..=r].iter().rev());
            }
        }
    }
    let mut acc = seg[0];
    let mut out = vec![acc];
    for s in steps {
        acc += s;
        out.push(acc);
    }
    Ok(out)
}

/// Union (with multiplicity) of [`d_set`] over all suffixes of `seq`.
pub fn triangle(family: AffineType, seq: &[u64]) -> Result<Vec<u64>, FormulaError> {
    if seq.is_empty() {
        return Err(FormulaError::Empty);
    }
    let mut out = Vec::new();
    for i in 0..seq.len() {
        out.extend(d_set(family, &seq[i..])?);
    }
    Ok(out)
}

/// `a_0, a_0 + 2a_1, a_0 + 2a_1 + 2a_2, ...` for the twisted `A` families.
pub fn s_set(family: AffineType, seq: &[u64]) -> Result<Vec<u64>, FormulaError> {
    if !matches!(family, AffineType::A2 | AffineType::A2T) {
        return Err(FormulaError::NoSSet(family));
    }
    let (first, rest) = seq.split_first().ok_or(FormulaError::Empty)?;
    let mut acc = *first;
    let mut out = vec![acc];
    for a in rest {
        acc += 2 * a;
        out.push(acc);
    }
    Ok(out)
}

/// Dominant integral weight `k_0 Λ_0 + ... + k_l Λ_l` of `C_l^(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HighestWeight(pub Vec<u64>);

impl HighestWeight {
    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    pub fn level(&self) -> u64 {
        self.0.iter().sum()
    }

    fn shifted(&self) -> Vec<u64> {
        self.0.iter().map(|k| k + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharFamily {
    /// Principal specialization `(1, ..., 1)`.
    Lepowsky,
    /// Specialization `(2, 1, ..., 1)`.
    W21_1,
    /// Specialization `(1, ..., 1, 2)`.
    W1_12,
    /// Specialization `(2, 1, ..., 1, 2)`.
    W21_12,
    Ps1,
    Ps2,
    Ps3,
    BorceaLhs,
    BorceaRhs,
}

impl CharFamily {
    pub const ALL: [CharFamily; 9] = [
        CharFamily::Lepowsky,
        CharFamily::W21_1,
        CharFamily::W1_12,
        CharFamily::W21_12,
        CharFamily::Ps1,
        CharFamily::Ps2,
        CharFamily::Ps3,
        CharFamily::BorceaLhs,
        CharFamily::BorceaRhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CharFamily::Lepowsky => "lepowsky",
            CharFamily::W21_1 => "w-21...1",
            CharFamily::W1_12 => "w-1...12",
            CharFamily::W21_12 => "w-21...12",
            CharFamily::Ps1 => "ps1",
            CharFamily::Ps2 => "ps2",
            CharFamily::Ps3 => "ps3",
            CharFamily::BorceaLhs => "borcea-lhs",
            CharFamily::BorceaRhs => "borcea-rhs",
        }
    }

    pub fn is_ps(self) -> bool {
        matches!(self, CharFamily::Ps1 | CharFamily::Ps2 | CharFamily::Ps3)
    }
}

impl fmt::Display for CharFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CharFamily {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CharFamily::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| FormulaError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharParams {
    Weight(HighestWeight),
    Ps { s: Vec<u64>, n: u64 },
}

/// A validated request for one character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSpec {
    pub family: CharFamily,
    pub l: usize,
    pub params: CharParams,
}

impl CharSpec {
    pub fn new(family: CharFamily, l: usize, params: CharParams) -> Result<CharSpec, FormulaError> {
        if l < 1 {
            return Err(AffineError::RankTooSmall { min: 1, got: l }.into());
        }
        match (&params, family.is_ps()) {
            (CharParams::Weight(w), false) => {
                if w.0.len() != l + 1 {
                    return Err(FormulaError::WeightLength { l, got: w.0.len() });
                }
            }
            (CharParams::Ps { s, n }, true) => {
                Spec::new(AffineType::C1, l, s.clone())?;
                if *n == 0 {
                    return Err(FormulaError::ZeroN);
                }
            }
            (_, true) => return Err(FormulaError::WrongParams { family, expected: "a specialization s and n >= 1" }),
            (_, false) => return Err(FormulaError::WrongParams { family, expected: "a highest weight" }),
        }
        Ok(CharSpec { family, l, params })
    }

    pub fn weight(family: CharFamily, weight: &[u64]) -> Result<CharSpec, FormulaError> {
        if weight.is_empty() {
            return Err(FormulaError::Empty);
        }
        CharSpec::new(family, weight.len() - 1, CharParams::Weight(HighestWeight(weight.to_vec())))
    }

    pub fn ps(family: CharFamily, s: &[u64], n: u64) -> Result<CharSpec, FormulaError> {
        if s.is_empty() {
            return Err(FormulaError::Empty);
        }
        CharSpec::new(family, s.len() - 1, CharParams::Ps { s: s.to_vec(), n })
    }

    /// The highest weight whose character this is.
    pub fn highest_weight(&self) -> HighestWeight {
        match &self.params {
            CharParams::Weight(w) => w.clone(),
            CharParams::Ps { n, .. } => ps_weight(self.family, self.l, *n).expect("ps family"),
        }
    }

    /// The `C_l^(1)` specialization the character is taken in.
    pub fn specialization(&self) -> Vec<u64> {
        let l = self.l;
        let mut s = vec![1u64; l + 1];
        match (&self.params, self.family) {
            (CharParams::Ps { s: given, .. }, _) => return given.clone(),
            (_, CharFamily::W21_1 | CharFamily::BorceaLhs | CharFamily::BorceaRhs) => s[0] = 2,
            (_, CharFamily::W1_12) => s[l] = 2,
            (_, CharFamily::W21_12) => {
                s[0] = 2;
                s[l] = 2;
            }
            _ => {}
        }
        s
    }

    fn weight_params(&self) -> &HighestWeight {
        match &self.params {
            CharParams::Weight(w) => w,
            CharParams::Ps { .. } => unreachable!("validated in CharSpec::new"),
        }
    }

    fn ps_params(&self) -> (&[u64], u64) {
        match &self.params {
            CharParams::Ps { s, n } => (s, *n),
            CharParams::Weight(_) => unreachable!("validated in CharSpec::new"),
        }
    }
}

/// Highest weight attached to a `ps` family and `n`.
pub fn ps_weight(family: CharFamily, l: usize, n: u64) -> Result<HighestWeight, FormulaError> {
    if n == 0 {
        return Err(FormulaError::ZeroN);
    }
    let (a, b) = (2 * n - 1, n - 1);
    let mut k = vec![a; l + 1];
    match family {
        CharFamily::Ps1 => k[l] = b,
        CharFamily::Ps2 => k[0] = b,
        CharFamily::Ps3 => {
            k[0] = b;
            k[l] = b;
        }
        _ => return Err(FormulaError::WrongParams { family, expected: "a highest weight" }),
    }
    Ok(HighestWeight(k))
}

/// Rejects a weight that does not match the `ps` pattern for `n`.
pub fn check_ps_weight(family: CharFamily, weight: &HighestWeight, n: u64) -> Result<(), FormulaError> {
    let expected = ps_weight(family, weight.rank(), n)?;
    if &expected != weight {
        return Err(FormulaError::WeightShape { family, weight: weight.0.clone(), n });
    }
    Ok(())
}

fn q(ty: AffineType, s: Vec<u64>, order: usize) -> Result<Series, FormulaError> {
    let l = s.len() - 1;
    Ok(q_denominator(&Spec::new(ty, l, s)?, order))
}

fn phi_pow(e: i64, order: usize) -> Series {
    ProductExpr::euler_pow(e).expand(order)
}

/// Odd residues `±1, ±3, ..., ±(2l-1)` modulo `2(2l+1)` with exponent `+1`.
pub fn borcea_factor(l: usize) -> ProductExpr {
    let m = 2 * (2 * l as u64 + 1);
    let mut p = ProductExpr::new();
    for i in 1..=l as i64 {
        push_pm(&mut p, m, &[2 * i as u64 - 1], 1);
    }
    p
}

/// Character as a ratio of denominators, expanded to `order`.
pub fn char_ratio(spec: &CharSpec, order: usize) -> Result<Series, FormulaError> {
    let l = spec.l;
    let n = order;
    use CharFamily::*;
    let out = match spec.family {
        Lepowsky => {
            let v = spec.weight_params().shifted();
            q(AffineType::D2, v, n)?.div(&q(AffineType::C1, vec![1; l + 1], n)?)?
        }
        W21_1 | BorceaLhs => {
            let v = w21_1_vector(spec.weight_params());
            phi_pow(-(l as i64), n).mul(&q(AffineType::A2, v, n)?)?
        }
        BorceaRhs => {
            let v = w21_1_vector(spec.weight_params());
            let principal = q(AffineType::A2, v, n)?.div(&q(AffineType::A2, vec![1; l + 1], n)?)?;
            borcea_factor(l).expand(n).mul(&principal)?
        }
        W1_12 => {
            let k = spec.weight_params().shifted();
            let mut v = k[..l].to_vec();
            v.push(2 * k[l]);
            phi_pow(-(l as i64), n).mul(&q(AffineType::A2, v, n)?)?
        }
        W21_12 => {
            let mut v = spec.weight_params().shifted();
            v[0] *= 2;
            v[l] *= 2;
            let mut base = vec![1; l + 1];
            base[0] = 2;
            base[l] = 2;
            q(AffineType::C1, v, n)?.div(&q(AffineType::C1, base, n)?)?
        }
        Ps1 | Ps2 | Ps3 => {
            let (s, k) = spec.ps_params();
            let num = match spec.family {
                Ps1 => {
                    let mut v = vec![k * s[l]];
                    v.extend(s[..l].iter().rev().map(|x| 2 * k * x));
                    q(AffineType::A2, v, n)?
                }
                Ps2 => {
                    let mut v = vec![k * s[0]];
                    v.extend(s[1..].iter().map(|x| 2 * k * x));
                    q(AffineType::A2, v, n)?
                }
                _ => q(AffineType::D2, ps3_vector(s, k), n)?,
            };
            num.div(&q(AffineType::C1, s.to_vec(), n)?)?
        }
    };
    Ok(out)
}

fn w21_1_vector(w: &HighestWeight) -> Vec<u64> {
    let k = w.shifted();
    let mut v: Vec<u64> = k[1..].iter().rev().copied().collect();
    v.push(2 * k[0]);
    v
}

fn ps3_vector(s: &[u64], n: u64) -> Vec<u64> {
    let l = s.len() - 1;
    let mut v: Vec<u64> = s.iter().map(|x| 2 * n * x).collect();
    v[0] = n * s[0];
    v[l] = n * s[l];
    v
}

fn push_pm(p: &mut ProductExpr, m: u64, vals: &[u64], e: i64) {
    for &b in vals {
        p.push_class(m, b as i64, e).expect("positive modulus");
        p.push_class(m, -(b as i64), e).expect("positive modulus");
    }
}

fn push_plain(p: &mut ProductExpr, m: u64, vals: &[u64], e: i64) {
    for &a in vals {
        p.push_class(m, a as i64, e).expect("positive modulus");
    }
}

/// `Q(s; C1)` as a congruence product modulo its period.
fn c1_denominator_product(s: &[u64]) -> Result<ProductExpr, FormulaError> {
    let l = s.len() - 1;
    let period = Spec::new(AffineType::C1, l, s.to_vec())?.period();
    let mut p = ProductExpr::new();
    p.push_periodic(period, 0, l as i64).expect("positive modulus");
    push_pm(&mut p, period, &triangle(AffineType::C1, &s[1..])?, 1);
    Ok(p)
}

/// `Q(v; A2T)` for `v = (v_0, ..., v_l)`, as a congruence product; the
/// half-period classes carry `Δ(v_1..v_l)` and the full-period classes the S-set.
fn a2t_product(v: &[u64]) -> Result<ProductExpr, FormulaError> {
    let l = v.len() - 1;
    let half = Spec::new(AffineType::A2T, l, v.to_vec())?.period() / 2;
    let mut p = ProductExpr::new();
    p.push_periodic(half, 0, l as i64).expect("positive modulus");
    push_pm(&mut p, half, &triangle(AffineType::A2T, &v[1..])?, 1);
    push_pm(&mut p, 2 * half, &s_set(AffineType::A2T, &v[..l])?, 1);
    Ok(p)
}

/// Same as [`a2t_product`] in the `A2` labelling.
fn a2_product(v: &[u64]) -> Result<ProductExpr, FormulaError> {
    let l = v.len() - 1;
    let half = Spec::new(AffineType::A2, l, v.to_vec())?.period() / 2;
    let rev_low: Vec<u64> = v[..l].iter().rev().copied().collect();
    let rev_high: Vec<u64> = v[1..].iter().rev().copied().collect();
    let mut p = ProductExpr::new();
    p.push_periodic(half, 0, l as i64).expect("positive modulus");
    push_pm(&mut p, half, &triangle(AffineType::A2, &rev_low)?, 1);
    push_pm(&mut p, 2 * half, &s_set(AffineType::A2, &rev_high)?, 1);
    Ok(p)
}

/// `Q(v; D2)` as a congruence product modulo `2 Σ v`.
fn d2_product(v: &[u64]) -> Result<ProductExpr, FormulaError> {
    let l = v.len() - 1;
    let m = 2 * v.iter().sum::<u64>();
    let mut p = ProductExpr::new();
    p.push_periodic(m, 0, l as i64).expect("positive modulus");
    push_plain(&mut p, m, &d_set(AffineType::D2, v)?, 1);
    if l >= 1 {
        push_pm(&mut p, m, &triangle(AffineType::D2, &v[1..])?, 1);
    }
    Ok(p)
}

/// Character as an explicit product of congruence classes.
pub fn char_explicit(spec: &CharSpec) -> Result<ProductExpr, FormulaError> {
    let l = spec.l;
    let li = l as i64;
    use CharFamily::*;
    let out = match spec.family {
        Lepowsky => {
            let v = spec.weight_params().shifted();
            let mut p = d2_product(&v)?;
            p.push_periodic(1, 0, -li).expect("valid");
            p.push_periodic(2, 1, -1).expect("valid");
            p
        }
        W21_12 => {
            let k = spec.weight_params().shifted();
            let m = 2 * k.iter().sum::<u64>();
            let mut seq = k[1..l].to_vec();
            seq.push(2 * k[l]);
            let mut p = ProductExpr::new();
            p.push_periodic(m, 0, li).expect("valid");
            push_pm(&mut p, m, &triangle(AffineType::C1, &seq)?, 1);
            p.push_periodic(1, 0, -(li - 1)).expect("valid");
            p.push_periodic(2, 0, -1).expect("valid");
            let r = l as u64 + 1;
            p.push_periodic(2 * r, r, -1).expect("valid");
            p
        }
        W1_12 => {
            let k = spec.weight_params().shifted();
            let mut v = k[..l].to_vec();
            v.push(2 * k[l]);
            a2_product(&v)?.mul(&ProductExpr::euler_pow(-li))
        }
        W21_1 | BorceaLhs => {
            let v = w21_1_vector(spec.weight_params());
            let mut t: Vec<u64> = v.clone();
            t.reverse();
            a2t_product(&t)?.mul(&ProductExpr::euler_pow(-li))
        }
        BorceaRhs => {
            // F * Q(v; A2) / Q(1; A2), with Q(1; A2) in closed form.
            let v = w21_1_vector(spec.weight_params());
            let mut t: Vec<u64> = v.clone();
            t.reverse();
            let mut principal = ProductExpr::euler_pow(li);
            let m = 2 * (2 * l as u64 + 1);
            for r in (1..m).step_by(2) {
                if r != 2 * l as u64 + 1 {
                    principal.push_periodic(m, r, 1).expect("valid");
                }
            }
            borcea_factor(l).mul(&a2t_product(&t)?).mul(&principal.inv())
        }
        Ps1 | Ps2 | Ps3 => {
            let (s, n) = spec.ps_params();
            let num = match spec.family {
                Ps1 => {
                    let mut t: Vec<u64> = s[..l].iter().map(|x| 2 * n * x).collect();
                    t.push(n * s[l]);
                    a2t_product(&t)?
                }
                Ps2 => {
                    let mut v = vec![n * s[0]];
                    v.extend(s[1..].iter().map(|x| 2 * n * x));
                    a2_product(&v)?
                }
                _ => d2_product(&ps3_vector(s, n))?,
            };
            num.mul(&c1_denominator_product(s)?.inv())
        }
    };
    Ok(out)
}

/// Outcome of comparing two expansions of the same character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub identity: String,
    pub order: usize,
    pub lhs: Series,
    pub rhs: Series,
    /// How each side was written: a printed product, or `"series"`.
    pub lhs_text: String,
    pub rhs_text: String,
    pub first_mismatch: Option<crate::qseries::Mismatch>,
}

impl VerifyReport {
    pub fn new(identity: impl Into<String>, lhs: Series, rhs: Series) -> Result<VerifyReport, FormulaError> {
        let order = lhs.order();
        let cmp = lhs.eq_to_order(&rhs, order)?;
        Ok(VerifyReport {
            identity: identity.into(),
            order,
            lhs,
            rhs,
            lhs_text: "series".into(),
            rhs_text: "series".into(),
            first_mismatch: cmp.first_mismatch,
        })
    }

    pub fn equal(&self) -> bool {
        self.first_mismatch.is_none()
    }

    /// `{"identity","order","equal","first_mismatch","lhs","rhs"}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "identity": self.identity,
            "order": self.order,
            "equal": self.equal(),
            "first_mismatch": self.first_mismatch.as_ref().map(|m| m.exponent),
            "lhs": self.lhs_text,
            "rhs": self.rhs_text,
        })
        .to_string()
    }
}

/// Compares the ratio form with the explicit product of a family.
pub fn verify_identity(spec: &CharSpec, order: usize) -> Result<VerifyReport, FormulaError> {
    let lhs = char_ratio(spec, order)?;
    let product = char_explicit(spec)?;
    let mut report = VerifyReport::new(spec.family.name(), lhs, product.expand(order))?;
    report.rhs_text = product.to_string();
    Ok(report)
}

/// Compares `ch^{(2,1..1)} L(k)` with `F(q) ch^{(1..1; A2)} L(2k_0+1, k_1, ..., k_l)`.
pub fn borcea_check(weight: &HighestWeight, order: usize) -> Result<VerifyReport, FormulaError> {
    let lhs = char_ratio(&CharSpec::weight(CharFamily::BorceaLhs, &weight.0)?, order)?;
    let rhs = char_ratio(&CharSpec::weight(CharFamily::BorceaRhs, &weight.0)?, order)?;
    VerifyReport::new("borcea", lhs, rhs)
}

/// Specialized character of `L(Λ)` for `C_l^(1)` from the Weyl–Kac formula.
///
/// The alternating sum runs over the Weyl group orbit of `Λ+ρ`, explored along
/// length-increasing simple reflections and cut off once the degree exceeds
/// `order`. `rho_delta` adds a multiple of `δ` to `ρ`; it must not change the
/// result.
pub fn weyl_kac_c1(weight: &HighestWeight, s: &[u64], order: usize, rho_delta: i64) -> Result<Series, FormulaError> {
    let l = weight.rank();
    let spec = Spec::new(AffineType::C1, l, s.to_vec())?;
    let a = cartan_matrix(AffineType::C1, l);
    // Inverse of the finite block (rows and columns 1..=l).
    type R = Ratio<i64>;
    let mut m: Vec<Vec<R>> = (1..=l)
        .map(|r| {
            let mut row: Vec<R> = (1..=l).map(|c| R::from_integer(a[r][c])).collect();
            row.extend((1..=l).map(|c| if c == r { R::one() } else { R::zero() }));
            row
        })
        .collect();
    for c in 0..l {
        let piv = (c..l).find(|&r| !m[r][c].is_zero()).expect("finite Cartan matrix is invertible");
        m.swap(c, piv);
        let pv = m[c][c];
        m[c].iter_mut().for_each(|x| *x /= pv);
        for r in 0..l {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                let pr = m[c].clone();
                m[r].iter_mut().zip(&pr).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    let inv: Vec<Vec<R>> = m.into_iter().map(|row| row[l..].to_vec()).collect();

    let start: Vec<i64> = weight.0.iter().map(|&k| k as i64 + 1).collect();
    let start_d = rho_delta;
    let degree = |lam: &[i64], d: i64| -> u64 {
        let c0 = start_d - d;
        let rhs: Vec<i64> = (1..=l).map(|mi| (start[mi] - lam[mi]) - c0 * a[mi][0]).collect();
        let mut deg = R::from_integer(c0) * R::from_integer(s[0] as i64);
        for i in 0..l {
            let ci: R = (0..l).map(|j| inv[i][j] * R::from_integer(rhs[j])).sum();
            assert!(ci.is_integer() && ci >= R::zero(), "orbit element outside the root cone");
            deg += ci * R::from_integer(s[i + 1] as i64);
        }
        assert!(c0 >= 0);
        deg.to_integer() as u64
    };

    let mut numerator = Series::zero(order);
    let mut coeffs: Vec<num_bigint::BigInt> = numerator.coeffs().to_vec();
    let mut seen: HashSet<(Vec<i64>, i64)> = HashSet::new();
    let mut queue: VecDeque<(Vec<i64>, i64, i64)> = VecDeque::new();
    seen.insert((start.clone(), start_d));
    queue.push_back((start.clone(), start_d, 1));
    while let Some((lam, d, sign)) = queue.pop_front() {
        let deg = degree(&lam, d) as usize;
        coeffs[deg] += sign;
        for i in 0..=l {
            let li = lam[i];
            if li <= 0 {
                continue;
            }
            let next: Vec<i64> = (0..=l).map(|mi| lam[mi] - li * a[mi][i]).collect();
            let nd = if i == 0 { d - li } else { d };
            if degree(&next, nd) as usize > order {
                continue;
            }
            if seen.insert((next.clone(), nd)) {
                queue.push_back((next, nd, -sign));
            }
        }
    }
    numerator = Series::from_coeffs(coeffs);
    Ok(numerator.div(&q_denominator(&spec, order))?)
}

/// One entry of the identity catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub specialization: &'static str,
    pub params: &'static str,
    /// Arguments that make `verify --identity NAME` check a known instance.
    pub sample: &'static str,
    pub description: &'static str,
}

pub fn list_identities() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "lepowsky",
            specialization: "(1,...,1)",
            params: "weight",
            sample: "--weight 1,0,1",
            description: "Q(k+1; D2)/Q(1; C1) against the product over residues mod 2(k+l+1)",
        },
        CatalogEntry {
            name: "w-21...1",
            specialization: "(2,1,...,1)",
            params: "weight",
            sample: "--weight 2,1,1,2,1",
            description: "phi^-l Q(k_l+1,...,k_1+1,2(k_0+1); A2) against its congruence product",
        },
        CatalogEntry {
            name: "w-1...12",
            specialization: "(1,...,1,2)",
            params: "weight",
            sample: "--weight 2,1,1,2,1",
            description: "phi^-l Q(k_0+1,...,k_{l-1}+1,2(k_l+1); A2) against its congruence product",
        },
        CatalogEntry {
            name: "w-21...12",
            specialization: "(2,1,...,1,2)",
            params: "weight",
            sample: "--weight 1,2,1,2,1",
            description: "Q(2(k_0+1),k_1+1,...,2(k_l+1); C1)/Q(2,1,...,1,2; C1) against its product",
        },
        CatalogEntry {
            name: "ps1",
            specialization: "any s",
            params: "spec, n",
            sample: "--spec 3,1,1 --n 2",
            description: "weight (2n-1,...,2n-1,n-1): Q(ns_l,2ns_{l-1},...,2ns_0; A2)/Q(s; C1)",
        },
        CatalogEntry {
            name: "ps2",
            specialization: "any s",
            params: "spec, n",
            sample: "--spec 1,3,1 --n 2",
            description: "weight (n-1,2n-1,...,2n-1): Q(ns_0,2ns_1,...,2ns_l; A2)/Q(s; C1)",
        },
        CatalogEntry {
            name: "ps3",
            specialization: "any s",
            params: "spec, n",
            sample: "--spec 3,1,1 --n 3",
            description: "weight (n-1,2n-1,...,2n-1,n-1): Q(ns_0,2ns_1,...,2ns_{l-1},ns_l; D2)/Q(s; C1)",
        },
        CatalogEntry {
            name: "borcea",
            specialization: "(2,1,...,1)",
            params: "weight",
            sample: "--weight 1,0,1",
            description: "ch^(2,1..1) L(k) = F(q) ch^(1..1; A2) L(2k_0+1,k_1,...,k_l)",
        },
        CatalogEntry {
            name: "conjecture",
            specialization: "any s",
            params: "weight, spec, bound",
            sample: "--weight 1,0,0 --spec 2,1,1 --bound 20",
            description: "admissible colored partitions counted by norm against the specialized character",
        },
    ]
}

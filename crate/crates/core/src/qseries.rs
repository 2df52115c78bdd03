//! Truncated power series in `q` with arbitrary-precision integer coefficients,
//! and products of factors `(1-q^j)^e` over congruence classes.
//!
//! A [`Series`] of order `N` stores the coefficients of `q^0..=q^N`. Binary
//! operations require both operands to have the same order; mixing orders is an
//! error rather than a silent truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors raised by series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series is not invertible: constant term is {0}, expected 1")]
    NotInvertible(BigInt),
    #[error("requested order {requested} exceeds available order {available}")]
    OrderTooLarge { requested: usize, available: usize },
}

/// A power series truncated after `q^order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    order: usize,
    coeffs: Vec<BigInt>,
}

/// The first exponent at which two series disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Result of [`Series::eq_to_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub order: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { order, coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Series { order: coeffs.len() - 1, coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Series::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    /// Coefficients as `i64`, or `None` if any does not fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    fn check_order(&self, other: &Series) -> Result<(), SeriesError> {
        if self.order != other.order {
            return Err(SeriesError::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Series { order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Series { order: self.order, coeffs })
    }

    pub fn neg(&self) -> Series {
        Series { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Series { order: n, coeffs: out })
    }

    /// Multiplicative inverse; requires constant term 1.
    pub fn inv(&self) -> Result<Series, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NotInvertible(self.coeffs[0].clone()));
        }
        let n = self.order;
        let mut b = vec![BigInt::zero(); n + 1];
        b[0] = BigInt::one();
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &b[k - i];
                }
            }
            b[k] = -acc;
        }
        Ok(Series { order: n, coeffs: b })
    }

    /// `self * other^{-1}`.
    pub fn div(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_order(other)?;
        self.mul(&other.inv()?)
    }

    /// Drops coefficients above `q^order`.
    pub fn truncate(&self, order: usize) -> Result<Series, SeriesError> {
        if order > self.order {
            return Err(SeriesError::OrderTooLarge { requested: order, available: self.order });
        }
        Ok(Series { order, coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Multiplies in place by `(1-q^j)^e`.
    pub fn mul_one_minus_pow(&mut self, j: usize, e: i64) {
        if j == 0 || j > self.order {
            return;
        }
        let n = self.order;
        if e >= 0 {
            for _ in 0..e {
                for i in (j..=n).rev() {
                    let t = self.coeffs[i - j].clone();
                    self.coeffs[i] -= t;
                }
            }
        } else {
            for _ in 0..(-e) {
                for i in j..=n {
                    let t = self.coeffs[i - j].clone();
                    self.coeffs[i] += t;
                }
            }
        }
    }

    /// Euler's function `prod_{j>=1} (1-q^j)`.
    pub fn euler_phi(order: usize) -> Series {
        let mut s = Series::one(order);
        for j in 1..=order {
            s.mul_one_minus_pow(j, 1);
        }
        s
    }

    /// Compares coefficients `0..=order` and reports the first disagreement.
    pub fn eq_to_order(&self, other: &Series, order: usize) -> Result<Comparison, SeriesError> {
        let avail = self.order.min(other.order);
        if order > avail {
            return Err(SeriesError::OrderTooLarge { requested: order, available: avail });
        }
        let first_mismatch = (0..=order).find(|&k| self.coeffs[k] != other.coeffs[k]).map(|k| Mismatch {
            exponent: k,
            lhs: self.coeffs[k].clone(),
            rhs: other.coeffs[k].clone(),
        });
        Ok(Comparison { order, first_mismatch })
    }
}

impl fmt::Display for Series {
    /// Space-separated coefficients, constant term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Errors raised when building a product expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} is not reduced modulo {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("finite factor base must be at least 1")]
    ZeroBase,
}

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// `prod_{j>0, j = residue (mod modulus)} (1-q^j)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodicFactor {
    pub modulus: u64,
    pub residue: u64,
    pub exponent: i64,
}

/// A single factor `(1-q^base)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteFactor {
    pub base: u64,
    pub exponent: i64,
}

/// A formal product of periodic and finite factors.
///
/// The representation is canonical: exponents of equal `(modulus, residue)` keys
/// are summed and zero exponents are removed. Classes with different moduli are
/// kept apart even when one refines the other.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ProductExpr {
    periodic: BTreeMap<(u64, u64), i64>,
    finite: BTreeMap<u64, i64>,
}

impl ProductExpr {
    /// The empty product.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.periodic.is_empty() && self.finite.is_empty()
    }

    /// Multiplies by a periodic factor.
    pub fn push_periodic(&mut self, modulus: u64, residue: u64, exponent: i64) -> Result<(), ProductError> {
        if modulus == 0 {
            return Err(ProductError::ZeroModulus);
        }
        if residue >= modulus {
            return Err(ProductError::ResidueOutOfRange { residue, modulus });
        }
        let slot = self.periodic.entry((modulus, residue)).or_insert(0);
        *slot += exponent;
        if *slot == 0 {
            self.periodic.remove(&(modulus, residue));
        }
        Ok(())
    }

    /// Multiplies by `prod_{j = r (mod m)} (1-q^j)^e` for an unreduced integer `r`.
    pub fn push_class(&mut self, modulus: u64, r: i64, exponent: i64) -> Result<(), ProductError> {
        if modulus == 0 {
            return Err(ProductError::ZeroModulus);
        }
        self.push_periodic(modulus, r.rem_euclid(modulus as i64) as u64, exponent)
    }

    /// Multiplies by `(1-q^base)^exponent`.
    pub fn push_finite(&mut self, base: u64, exponent: i64) -> Result<(), ProductError> {
        if base == 0 {
            return Err(ProductError::ZeroBase);
        }
        let slot = self.finite.entry(base).or_insert(0);
        *slot += exponent;
        if *slot == 0 {
            self.finite.remove(&base);
        }
        Ok(())
    }

    /// `phi(q)^e`.
    pub fn euler_pow(e: i64) -> Self {
        let mut p = ProductExpr::new();
        p.push_periodic(1, 0, e).expect("valid class");
        p
    }

    /// Product of two expressions.
    pub fn mul(&self, other: &ProductExpr) -> ProductExpr {
        let mut out = self.clone();
        for f in other.periodic_factors() {
            out.push_periodic(f.modulus, f.residue, f.exponent).expect("already validated");
        }
        for f in other.finite_factors() {
            out.push_finite(f.base, f.exponent).expect("already validated");
        }
        out
    }

    /// Reciprocal expression.
    pub fn inv(&self) -> ProductExpr {
        ProductExpr {
            periodic: self.periodic.iter().map(|(k, e)| (*k, -e)).collect(),
            finite: self.finite.iter().map(|(k, e)| (*k, -e)).collect(),
        }
    }

    /// Periodic factors in `(modulus, residue)` order.
    pub fn periodic_factors(&self) -> impl Iterator<Item = PeriodicFactor> + '_ {
        self.periodic.iter().map(|(&(modulus, residue), &exponent)| PeriodicFactor { modulus, residue, exponent })
    }

    pub fn finite_factors(&self) -> impl Iterator<Item = FiniteFactor> + '_ {
        self.finite.iter().map(|(&base, &exponent)| FiniteFactor { base, exponent })
    }

    /// Total exponent of `(1-q^j)` in the product.
    pub fn exponent_at(&self, j: u64) -> i64 {
        let p: i64 = self.periodic.iter().filter(|(&(m, r), _)| j % m == r).map(|(_, e)| *e).sum();
        p + self.finite.get(&j).copied().unwrap_or(0)
    }

    /// Expands the product as a series of the given order.
    pub fn expand(&self, order: usize) -> Series {
        let mut s = Series::one(order);
        for j in 1..=order {
            let e = self.exponent_at(j as u64);
            if e != 0 {
                s.mul_one_minus_pow(j, e);
            }
        }
        s
    }

    /// Parses the text form produced by [`fmt::Display`].
    ///
    /// ```text
    /// expr   := "1" | factor+
    /// factor := "(1-q^" (INT | "j") ")" "^" SINT [":" "j" "=" INT ("," INT)* "mod" INT]
    /// ```
    ///
    /// Whitespace between tokens is ignored; the residue clause is required
    /// exactly when the base is `j`.
    pub fn parse(text: &str) -> Result<ProductExpr, ParseError> {
        Parser { src: text.as_bytes(), pos: 0 }.expr()
    }
}

impl fmt::Display for ProductExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = Vec::new();
        let factors: Vec<PeriodicFactor> = self.periodic_factors().collect();
        let mut i = 0;
        while i < factors.len() {
            let head = factors[i];
            let mut residues = vec![head.residue.to_string()];
            let mut k = i + 1;
            while k < factors.len() && factors[k].modulus == head.modulus && factors[k].exponent == head.exponent {
                residues.push(factors[k].residue.to_string());
                k += 1;
            }
            parts.push(format!("(1-q^j)^{} : j = {} mod {}", head.exponent, residues.join(","), head.modulus));
            i = k;
        }
        for ff in self.finite_factors() {
            parts.push(format!("(1-q^{})^{}", ff.base, ff.exponent));
        }
        f.write_str(&parts.join(" "))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(format!("expected '{token}'"))
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn uint_at(&mut self) -> Result<(usize, u64), ParseError> {
        self.skip_ws();
        Ok((self.pos, self.uint()?))
    }

    fn sint(&mut self) -> Result<i64, ParseError> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let v = self.uint()?;
        let v = i64::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("exponent out of range")
        })?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<ProductExpr, ParseError> {
        let mut out = ProductExpr::new();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            if self.peek().is_some() {
                return self.err("trailing input after empty product");
            }
            return Ok(out);
        }
        loop {
            self.factor(&mut out)?;
            if self.peek().is_none() {
                return Ok(out);
            }
        }
    }

    fn factor(&mut self, out: &mut ProductExpr) -> Result<(), ParseError> {
        self.expect("(")?;
        self.expect("1")?;
        self.expect("-")?;
        self.expect("q")?;
        self.expect("^")?;
        let base = if self.peek() == Some(b'j') {
            self.pos += 1;
            None
        } else {
            let (at, b) = self.uint_at()?;
            if b == 0 {
                self.pos = at;
                return self.err("finite factor base must be at least 1");
            }
            Some(b)
        };
        self.expect(")")?;
        self.expect("^")?;
        let exponent = self.sint()?;
        match base {
            Some(b) => {
                if self.peek() == Some(b':') {
                    return self.err("residue clause is only allowed with base 'j'");
                }
                out.push_finite(b, exponent).expect("base checked");
            }
            None => {
                if self.peek() != Some(b':') {
                    return self.err("expected residue clause ': j = ... mod m'");
                }
                self.pos += 1;
                self.expect("j")?;
                self.expect("=")?;
                let mut residues = vec![self.uint_at()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    residues.push(self.uint_at()?);
                }
                self.expect("mod")?;
                let (mpos, modulus) = self.uint_at()?;
                if modulus == 0 {
                    self.pos = mpos;
                    return self.err("modulus must be at least 1");
                }
                for (at, r) in residues {
                    if r >= modulus {
                        self.pos = at;
                        return self.err(format!("residue {r} is not reduced modulo {modulus}"));
                    }
                    out.push_periodic(modulus, r, exponent).expect("checked");
                }
            }
        }
        Ok(())
    }
}

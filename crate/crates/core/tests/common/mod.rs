//! Reference data shared by the integration suites.
#![allow(dead_code)]

use lwchar_core::affine::{AffineType, Spec};
use lwchar_core::formulas::{CharFamily, CharSpec};
use lwchar_core::ProductExpr;

/// `(1-q^j)^e : j = r1,... mod m` over every residue except `skip`.
pub fn all_but(m: u64, skip: &[u64], e: i64) -> String {
    let rs: Vec<String> = (0..m).filter(|r| !skip.contains(r)).map(|r| r.to_string()).collect();
    format!("(1-q^j)^{e} : j = {} mod {m}", rs.join(","))
}

/// `prod_{i = r mod m} (1+q^i)` written as `(1-q^{2i})/(1-q^i)`.
pub fn one_plus(m: u64, residues: &[u64]) -> String {
    let dbl: Vec<String> = residues.iter().map(|r| (2 * r).to_string()).collect();
    let plain: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
    format!("(1-q^j)^1 : j = {} mod {} (1-q^j)^-1 : j = {} mod {m}", dbl.join(","), 2 * m, plain.join(","))
}

pub struct Worked {
    pub name: &'static str,
    pub spec: CharSpec,
    pub product: String,
}

fn w(name: &'static str, family: CharFamily, weight: &[u64], product: String) -> Worked {
    Worked { name, spec: CharSpec::weight(family, weight).unwrap(), product }
}

fn p(name: &'static str, family: CharFamily, s: &[u64], n: u64, product: String) -> Worked {
    Worked { name, spec: CharSpec::ps(family, s, n).unwrap(), product }
}

/// Worked character examples, hand-transcribed as products.
pub fn worked_examples() -> Vec<Worked> {
    use CharFamily::*;
    vec![
        w(
            "w-21...12 L(1,2,1,2,1)",
            W21_12,
            &[1, 2, 1, 2, 1],
            format!(
                "(1-q^j)^-2 : j = 1,6,11,13,18,23 mod 24 (1-q^j)^-1 : j = 2,8,16,22 mod 24 {} \
                 (1-q^j)^-1 : j = 2,4,6,8,10,14,16,18,20,22 mod 24 (1-q^j)^-1 : j = 5 mod 10",
                all_but(24, &[0, 12], -1)
            ),
        ),
        w(
            "w-1...12 L(2,1,1,2,1)",
            W1_12,
            &[2, 1, 1, 2, 1],
            format!(
                "{} (1-q^j)^-1 : j = 6,20,28,42 mod 48 (1-q^j)^-3 : j = 1,23 mod 24 \
                 (1-q^j)^-2 : j = 6,8,9,11,13,15,16,18 mod 24 (1-q^j)^-1 : j = 2,3,4,5,12,19,20,21,22 mod 24",
                all_but(24, &[0], -1)
            ),
        ),
        w(
            "w-21...1 L(2,1,1,2,1)",
            W21_1,
            &[2, 1, 1, 2, 1],
            format!(
                "{} (1-q^j)^-1 : j = 4,18,30,44 mod 48 (1-q^j)^-3 : j = 1,23 mod 24 \
                 (1-q^j)^-2 : j = 3,6,8,11,13,16,18,21 mod 24 (1-q^j)^-1 : j = 4,5,9,10,12,14,15,19,20 mod 24",
                all_but(24, &[0], -1)
            ),
        ),
        w("w-21...1 L(1,2,1,2,1)", W21_1, &[1, 2, 1, 2, 1], symmetric_12121()),
        w("w-1...12 L(1,2,1,2,1)", W1_12, &[1, 2, 1, 2, 1], symmetric_12121()),
        p(
            "ps1 s=(3,1,1) n=1",
            Ps1,
            &[3, 1, 1],
            1,
            format!("{} (1-q^j)^-1 : j = 1 mod 2 (1-q^j)^-1 : j = 6,18 mod 24", one_plus(12, &[5, 7])),
        ),
        p(
            "ps1 s=(3,1,1) n=2",
            Ps1,
            &[3, 1, 1],
            2,
            format!("{} (1-q^j)^-2 : j = 1 mod 2 (1-q^j)^-1 : j = 6,12,18 mod 24", one_plus(24, &[10, 14])),
        ),
        p(
            "ps1 s=(3,1,1) n=3",
            Ps1,
            &[3, 1, 1],
            3,
            format!(
                "{} (1-q^j)^-1 : j = 1,5,7,11,13,15,17,19,21,23,25,29,31,35 mod 36",
                all_but(72, &[0, 30, 42, 36], -1)
            ),
        ),
        p("ps2 s=(1,3,1) n=1", Ps2, &[1, 3, 1], 1, format!("{} (1-q^j)^-2 : j = 4,12 mod 16", one_plus(2, &[1]))),
        p(
            "ps2 s=(1,3,1) n=2",
            Ps2,
            &[1, 3, 1],
            2,
            format!(
                "{} (1-q^j)^-1 : j = 1 mod 2 (1-q^j)^-1 : j = 4,12,20,28 mod 32 (1-q^j)^-2 : j = 8,24 mod 32",
                one_plus(32, &[1, 31, 7, 25, 9, 23, 15, 17])
            ),
        ),
        p("ps3 s=(3,1,1) n=1", Ps3, &[3, 1, 1], 1, "(1-q^j)^-1 : j = 1,5 mod 6 (1-q^j)^-1 : j = 6 mod 12".to_string()),
        p("ps3 s=(3,1,1) n=2", Ps3, &[3, 1, 1], 2, "(1-q^j)^-2 : j = 1 mod 2 (1-q^j)^-1 : j = 12 mod 24".to_string()),
        p(
            "ps3 s=(3,1,1) n=3",
            Ps3,
            &[3, 1, 1],
            3,
            format!("{} (1-q^j)^-1 : j = 1,5 mod 6", all_but(72, &[0, 9, 63, 27, 45, 36], -1)),
        ),
    ]
}

fn symmetric_12121() -> String {
    format!(
        "{} (1-q^j)^-3 : j = 1,6,11,13,18,23 mod 24 (1-q^j)^-2 : j = 4,8,16,20 mod 24 \
         (1-q^j)^-1 : j = 2,3,9,10,14,15,21,22 mod 24",
        all_but(24, &[0, 12], -1)
    )
}

/// Closed-form denominators for principal and near-principal specializations.
pub fn closed_form_denominators(l: usize) -> Vec<(&'static str, Spec, ProductExpr)> {
    let lu = l as u64;
    let ones = vec![1u64; l + 1];
    let odd = ProductExpr::parse("(1-q^j)^1 : j = 1 mod 2").unwrap();
    let phi_l = ProductExpr::euler_pow(l as i64);

    let c_principal = phi_l.mul(&odd);

    let mut s2112 = ones.clone();
    s2112[0] = 2;
    s2112[l] = 2;
    let m = 2 * (lu + 1);
    let c_2112 = ProductExpr::euler_pow(l as i64 - 1)
        .mul(&ProductExpr::parse("(1-q^j)^1 : j = 0 mod 2").unwrap())
        .mul(&ProductExpr::parse(&format!("(1-q^j)^1 : j = {} mod {m}", lu + 1)).unwrap());

    let mut s211 = ones.clone();
    s211[0] = 2;

    let ma = 2 * (2 * lu + 1);
    let odd_a: Vec<String> = (1..ma).step_by(2).filter(|&r| r != 2 * lu + 1).map(|r| r.to_string()).collect();
    let a_principal = phi_l.mul(&ProductExpr::parse(&format!("(1-q^j)^1 : j = {} mod {ma}", odd_a.join(","))).unwrap());

    vec![
        ("C1 principal", Spec::new(AffineType::C1, l, ones.clone()).unwrap(), c_principal.clone()),
        ("C1 (2,1,...,1,2)", Spec::new(AffineType::C1, l, s2112).unwrap(), c_2112),
        ("C1 (2,1,...,1)", Spec::new(AffineType::C1, l, s211).unwrap(), phi_l.clone()),
        ("D2 principal", Spec::new(AffineType::D2, l, ones.clone()).unwrap(), c_principal),
        ("A2 principal", Spec::new(AffineType::A2, l, ones).unwrap(), a_principal),
    ]
}

/// Number of partitions of each `n <= order` into parts from `allowed`, by
/// direct recursion (no generating functions involved).
pub fn restricted_partitions(allowed: &[u64], order: usize) -> Vec<u64> {
    fn count(n: u64, parts: &[u64]) -> u64 {
        if n == 0 {
            return 1;
        }
        match parts.split_first() {
            None => 0,
            Some((&p, rest)) => {
                let mut total = 0;
                let mut k = 0;
                while k * p <= n {
                    total += count(n - k * p, rest);
                    k += 1;
                }
                total
            }
        }
    }
    let mut parts: Vec<u64> = allowed.iter().copied().filter(|&p| p as usize <= order).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    (0..=order as u64).map(|n| count(n, &parts)).collect()
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lwchar_cli::run;
use lwchar_core::affine::{q_denominator, AffineType, Spec};
use lwchar_core::array::{
    check_mirror, check_translation, cols_per_period, nodes_per_period, q_from_array, spec_array,
};
use lwchar_core::formulas::{
    borcea_check, char_explicit, char_ratio, weyl_kac_c1, CharFamily, CharSpec, HighestWeight,
};
use lwchar_core::partitions::{enumerate, verify_conjecture, EnumOptions, PartitionProblem};
use lwchar_core::ProductExpr;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn weights_up_to(l: usize, level: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..=l {
        out = out
            .into_iter()
            .flat_map(|w| {
                let used: u64 = w.iter().sum();
                (0..=level - used).map(move |k| {
                    let mut v = w.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn lw(args: &[&str]) -> lwchar_cli::Outcome {
    run(std::iter::once("lwchar").chain(args.iter().copied()))
}

fn array_fixtures() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let manifest: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let mut cells = 0;
    for entry in &manifest {
        let argv: Vec<&str> = entry["argv"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let out = lw(&argv);
        let golden = std::fs::read_to_string(dir.join(entry["golden"].as_str().unwrap())).map_err(|e| e.to_string())?;
        ensure(out.status == 0 && out.stdout == golden, || format!("{} differs", entry["id"]))?;
        cells += golden.split_whitespace().count();
    }
    Ok(format!("{} arrays, {cells} cells", manifest.len()))
}

fn oracle_equivalence() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut n = 0;
    for ty in AffineType::ALL {
        for l in 2..=4 {
            for _ in 0..10 {
                let s: Vec<u64> = (0..=l).map(|_| rng.gen_range(1..=4)).collect();
                let spec = Spec::new(ty, l, s.clone()).unwrap();
                let arr = spec_array(&spec, cols_per_period(ty, l)).map_err(|e| e.to_string())?;
                let a = q_from_array(&arr, 60).map_err(|e| e.to_string())?;
                ensure(a == q_denominator(&spec, 60), || format!("{ty} {s:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} specializations"))
}

fn closed_forms() -> Check {
    let mut n = 0;
    for l in 2..=6 {
        for (name, spec, prod) in common::closed_form_denominators(l) {
            let cmp = q_denominator(&spec, 200).eq_to_order(&prod.expand(200), 200).unwrap();
            ensure(cmp.is_equal(), || format!("l={l} {name}: {:?}", cmp.first_mismatch))?;
            n += 1;
        }
    }
    Ok(format!("{n} denominators to order 200"))
}

fn double_entry() -> Check {
    use CharFamily::*;
    let mut rng = StdRng::seed_from_u64(99);
    let families = [Lepowsky, W21_1, W1_12, W21_12, Ps1, Ps2, Ps3];
    for f in families {
        for _ in 0..25 {
            let l = rng.gen_range(2..=4);
            let spec = if f.is_ps() {
                let s: Vec<u64> = (0..=l).map(|_| rng.gen_range(1..=3)).collect();
                CharSpec::ps(f, &s, rng.gen_range(1..=3)).unwrap()
            } else {
                let k: Vec<u64> = (0..=l).map(|_| rng.gen_range(0..=3)).collect();
                CharSpec::weight(f, &k).unwrap()
            };
            let lhs = char_ratio(&spec, 60).map_err(|e| e.to_string())?;
            let rhs = char_explicit(&spec).map_err(|e| e.to_string())?.expand(60);
            ensure(lhs == rhs, || format!("{spec:?}"))?;
        }
    }
    Ok(format!("{} families x 25 draws", families.len()))
}

fn worked_examples() -> Check {
    let all = common::worked_examples();
    for ex in &all {
        let want = ProductExpr::parse(&ex.product).map_err(|e| e.to_string())?.expand(100);
        let got = char_ratio(&ex.spec, 100).map_err(|e| e.to_string())?;
        let cmp = got.eq_to_order(&want, 100).unwrap();
        ensure(cmp.is_equal(), || format!("{}: {:?}", ex.name, cmp.first_mismatch))?;
    }
    Ok(format!("{} instances to order 100", all.len()))
}

fn borcea() -> Check {
    let mut n = 0;
    for l in 1..=4 {
        for k in weights_up_to(l, 2) {
            let r = borcea_check(&HighestWeight(k.clone()), 200).map_err(|e| e.to_string())?;
            ensure(r.equal(), || format!("{k:?}: {:?}", r.first_mismatch))?;
            n += 1;
        }
    }
    let lhs = |k: &[u64]| char_ratio(&CharSpec::weight(CharFamily::BorceaLhs, k).unwrap(), 200).unwrap();
    let p10 = ProductExpr::parse("(1-q^j)^-1 : j = 2,3,9,10 mod 12").unwrap().expand(200);
    let p01 = ProductExpr::parse("(1-q^j)^1 : j = 2,10 mod 12 (1-q^j)^-1 : j = 1 mod 2").unwrap().expand(200);
    ensure(lhs(&[1, 0]) == p10, || "rank one, weight (1,0)".into())?;
    ensure(lhs(&[0, 1]) == p01, || "rank one, weight (0,1)".into())?;
    Ok(format!("{n} weights plus two rank-one products"))
}

fn weyl_kac() -> Check {
    let mut n = 0;
    for l in 2..=3 {
        for k in weights_up_to(l, 2) {
            let hw = HighestWeight(k.clone());
            let principal = weyl_kac_c1(&hw, &vec![1; l + 1], 40, 0).map_err(|e| e.to_string())?;
            let lep = char_ratio(&CharSpec::weight(CharFamily::Lepowsky, &k).unwrap(), 40).unwrap();
            ensure(principal == lep, || format!("principal {k:?}"))?;
            let mut s = vec![1; l + 1];
            s[0] = 2;
            let w = weyl_kac_c1(&hw, &s, 40, 0).map_err(|e| e.to_string())?;
            let r = char_ratio(&CharSpec::weight(CharFamily::W21_1, &k).unwrap(), 40).unwrap();
            ensure(w == r, || format!("(2,1,...,1) {k:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} weights, two specializations each"))
}

fn partition_identities() -> Check {
    let cases: [(&[u64], &[u64], u64); 5] = [
        (&[1, 0, 0], &[2, 1, 1], 20),
        (&[2, 0, 0], &[2, 1, 1], 15),
        (&[1, 0, 0], &[1, 1, 1], 15),
        (&[0, 1, 0], &[1, 1, 1], 15),
        (&[0, 0, 1], &[1, 1, 1], 15),
    ];
    let mut slowest = Duration::ZERO;
    for (k, s, bound) in cases {
        let problem = PartitionProblem { weight: HighestWeight(k.to_vec()), s: s.to_vec(), bound };
        let t = Instant::now();
        let r = verify_conjecture(&problem, &EnumOptions::default()).map_err(|e| e.to_string())?;
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        ensure(r.equal(), || format!("{k:?} {s:?}: {:?}", r.first_mismatch))?;
        ensure(dt < Duration::from_secs(60), || format!("{k:?} {s:?} took {dt:?}"))?;
    }
    let allowed: Vec<u64> = (1..=20).filter(|j| [2, 3, 4, 5, 11, 12, 13, 14].contains(&(j % 16))).collect();
    let counts = enumerate(
        &PartitionProblem { weight: HighestWeight(vec![1, 0, 0]), s: vec![2, 1, 1], bound: 20 },
        &EnumOptions::default(),
    )
    .unwrap()
    .counts;
    ensure(counts == common::restricted_partitions(&allowed, 20), || "brute-force counts differ".into())?;
    Ok(format!("{} cases, slowest {:.2?}", cases.len(), slowest))
}

fn invariants() -> Check {
    for l in 2..=4 {
        for ty in AffineType::ALL {
            let s: Vec<u64> = (0..=l as u64).map(|i| 1 + (i * 7 + l as u64) % 4).collect();
            for spec in [Spec::principal(ty, l).unwrap(), Spec::new(ty, l, s).unwrap()] {
                let w = cols_per_period(ty, l);
                let arr = spec_array(&spec, 3 * w).unwrap();
                for k in 0..3 {
                    let inside = arr.nodes.iter().filter(|n| n.node.col / w == k).count();
                    let slots: usize = (k * w..(k + 1) * w).map(|c| if c % 2 == 0 { l + 1 } else { l }).sum();
                    let gaps = if matches!(ty, AffineType::A2 | AffineType::A2T) { 1 } else { 0 };
                    ensure(inside == nodes_per_period(ty, l) && slots - inside == gaps, || {
                        format!("{ty} l={l} period {k}: {inside} nodes in {slots} slots")
                    })?;
                }
                for n in &arr.nodes {
                    ensure(n.label >= 1 && n.node.root.0.iter().any(|&c| c > 0), || {
                        format!("{ty} l={l}: bad root at ({},{})", n.node.row, n.node.col)
                    })?;
                }
                check_translation(&arr).map_err(|e| format!("{ty} l={l}: {e}"))?;
                let full = check_mirror(&arr).map_err(|e| format!("{ty} l={l}: {e}"))?;
                ensure(full >= 1, || format!("{ty} l={l}: no complete triangle"))?;
            }
        }
        let weight = match l {
            2 => "1,1,0",
            3 => "1,0,0,1",
            _ => "1,0,0,0,0",
        };
        let bound = if l == 4 { "7" } else { "9" };
        let args = |t: &'static str| ["partitions", "--weight", weight, "--bound", bound, "--threads", t];
        let one = lw(&args("1"));
        ensure(one.status == 0 && one == lw(&args("1")), || format!("l={l}: repeated run differs"))?;
        ensure(one.stdout == lw(&args("4")).stdout, || format!("l={l}: thread count changes counts"))?;
    }
    let argv = ["array", "--type", "a2t", "--rank", "3", "--spec", "2,1,3,1", "--format", "json"];
    ensure(lw(&argv) == lw(&argv), || "array output not deterministic".into())?;
    Ok("l = 2, 3, 4 for all four types".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("array fixtures", array_fixtures),
        ("array product equals root enumeration", oracle_equivalence),
        ("closed-form denominators", closed_forms),
        ("ratio and explicit products agree", double_entry),
        ("worked character examples", worked_examples),
        ("Borcea correspondence", borcea),
        ("Weyl-Kac oracle", weyl_kac),
        ("partition identities", partition_identities),
        ("invariant suites", invariants),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let dt = t.elapsed();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {dt:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}

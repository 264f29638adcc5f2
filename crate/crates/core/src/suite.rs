//! The reproduction suite behind `lat verify-paper`.
//!
//! Each `criterion_N` runs one group of checks and returns an [`Outcome`].
//! The brute-force oracles here deliberately avoid the reduction and
//! pruning used by the main algorithms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criterion::{
    check_criterion, check_family_criterion, check_minimality, check_prop2_hypothesis, check_prop3,
    enumerate_classes, mixed_example_facts, represents_all, FormSet, PartitionFamily, SearchSpace, WitnessSource,
};
use crate::decomposition::{indecomposable_summands, same_summands};
use crate::embedding::{represents, unimodular_summand_split};
use crate::enumeration::{min_dual_norm, min_norm, project_onto_sublattice, short_vectors_up_to};
use crate::expr::parse_expr;
use crate::gram::GramMatrix;
use crate::reduction::randomize_basis;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {:>2} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name)?;
        for d in &self.details {
            writeln!(f, "       {d}")?;
        }
        Ok(())
    }
}

struct Checks {
    passed: bool,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.passed &= ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("note {}", what.into()));
    }

    fn finish(self, id: usize, name: &'static str) -> Outcome {
        Outcome { id, name, passed: self.passed, details: self.details }
    }
}

/// `LAT_SLOW_TESTS=1` enables the full Leech enumeration.
pub fn slow_tests_enabled() -> bool {
    std::env::var("LAT_SLOW_TESTS").is_ok_and(|v| v == "1")
}

fn lat(expr: &str) -> GramMatrix {
    parse_expr(expr).expect("built-in expression parses")
}

fn set(members: &[&str], description: &str) -> FormSet {
    FormSet::new(members.iter().map(|m| lat(m)).collect(), description).expect("members are distinct")
}

fn space(rank: usize, max_diag: i64) -> SearchSpace {
    SearchSpace::new(rank, max_diag).expect("valid space")
}

pub fn criterion_1() -> Outcome {
    let mut c = Checks::new();
    let a = lat("diag(1,1,2)");
    let bc = set(&["diag(1,1)", "diag(2,2,2)"], "{B, C}");
    for s in [space(3, 6), space(4, 4)] {
        match check_criterion(&a, &bc, &s) {
            Ok(r) => c.check(
                r.verified(),
                format!("{{<1,1>, <2,2,2>}} forces <1,1,2> over {s}: {} classes", r.classes_checked),
            ),
            Err(e) => c.check(false, format!("{s}: {e}")),
        }
    }
    c.finish(1, "{<1,1>, <2,2,2>} is a criterion set for <1,1,2> (bounded spaces)")
}

pub fn criterion_2() -> Outcome {
    let mut c = Checks::new();
    let a = lat("diag(1,1,2)");
    let b = lat("diag(1,1)");
    let cc = lat("diag(2,2,2)");
    let bc = FormSet::new(vec![b.clone(), cc.clone()], "{B, C}").expect("distinct");
    let r = check_minimality(&a, &bc, &[b.clone(), cc.clone()], None);
    let source = |i: usize| r.drops[i].witness.as_ref().map(|w| w.source.clone());
    c.check(source(0) == Some(WitnessSource::Provided(1)), "dropping <1,1> is witnessed by <2,2,2>");
    c.check(source(1) == Some(WitnessSource::Provided(0)), "dropping <2,2,2> is witnessed by <1,1>");
    c.check(represents(&b, &a).is_none(), "<1,1> does not represent <1,1,2>");
    c.check(represents(&cc, &a).is_none(), "<2,2,2> does not represent <1,1,2>");
    c.check(represents_all(&a, &bc), "<1,1,2> represents both <1,1> and <2,2,2>");

    let single = FormSet::new(vec![a.clone()], "{A}").expect("one member");
    let r = check_minimality(&a, &single, &[], Some(&space(3, 2)));
    c.check(r.minimal(), "{<1,1,2>} is minimal: some form of rank 3 misses it");
    let e8z = lat("E8 + Zn(1)");
    let pair = set(&["E8", "Zn(1)"], "{E8, Z}");
    let r = check_minimality(&e8z, &pair, &[lat("E8"), lat("Zn(1)")], None);
    c.check(r.minimal(), "{E8, <1>} is minimal for E8 + <1>");
    c.finish(2, "minimality of {<1,1>, <2,2,2>}")
}

/// The ten forms `<2^i, 2^j, 2^k>` with `0 <= i <= j <= k <= 2`.
pub fn power_of_two_forms() -> FormSet {
    let mut members = Vec::new();
    for i in 0..3u32 {
        for j in i..3 {
            for k in j..3 {
                members.push(GramMatrix::diagonal(&[1 << i, 1 << j, 1 << k]).expect("positive diagonal"));
            }
        }
    }
    FormSet::new(members, "<2^i,2^j,2^k>, exponents <= 2").expect("pairwise non-isometric")
}

pub fn criterion_3() -> Outcome {
    let mut c = Checks::new();
    let targets = power_of_two_forms();
    c.note(format!("{} target forms", targets.len()));
    let sets = [
        set(&["diag(1,1,1)", "diag(1,1,2)"], "{<1,1,1>, <1,1,2>}"),
        set(&["diag(1,1,1)", "diag(2,2,2)"], "{<1,1,1>, <2,2,2>}"),
    ];
    for s_prime in &sets {
        for sp in [space(3, 8), space(4, 4)] {
            match check_family_criterion(&targets, s_prime, &sp) {
                Ok(r) => c.check(
                    r.verified(),
                    format!("{} covers all targets over {sp}: {} classes", s_prime.description(), r.classes_checked),
                ),
                Err(e) => c.check(false, format!("{}: {e}", s_prime.description())),
            }
        }
    }
    c.finish(3, "two criterion sets for the powers-of-two family")
}

pub fn criterion_4() -> Outcome {
    let mut c = Checks::new();
    let e8 = lat("E8");
    let z = lat("Zn(1)");
    c.check(e8.det().is_one(), "det(E8) = 1");
    c.check(e8.dual_gram().is_integral(), "the dual Gram matrix of E8 is integral");
    c.check(min_norm(&e8) == 2, "E8 has minimal norm 2");

    let e8z = e8.direct_sum(&z);
    let mut split_ok = 0;
    for seed in 0..50 {
        let g = randomize_basis(&e8z, seed);
        let ok = represents(&g, &e8)
            .and_then(|e| unimodular_summand_split(&e).ok())
            .is_some_and(|(rest, cert)| rest == z && cert.is_isometry());
        split_ok += ok as usize;
    }
    c.check(split_ok == 50, format!("splitting off E8 leaves <1> in {split_ok}/50 random bases"));

    let pool = ["", "Zn(1)", "diag(2)", "An(2)", "diag(1,3)", "An(3)", "diag(1,2,2)"];
    let mut shadow_ok = 0;
    for seed in 0..50u64 {
        let j = pool[seed as usize % pool.len()];
        let expr = if j.is_empty() { "E8 + Zn(1)".to_string() } else { format!("E8 + Zn(1) + {j}") };
        let q = randomize_basis(&lat(&expr), seed);
        let ok = represents(&q, &e8).is_some_and(|e| {
            short_vectors_up_to(&q, 1).of_norm(1).all(|v| {
                project_onto_sublattice(&q, &e.map, &v.coords).is_ok_and(|p| p.coords.is_zero() && p.in_dual)
            })
        }) && represents(&q, &e8z).is_some();
        shadow_ok += ok as usize;
    }
    c.check(shadow_ok == 50, format!("norm-1 vectors project to 0 on an embedded E8 in {shadow_ok}/50 lattices"));
    c.finish(4, "E8 facts: self-dual, minimal norm 2, splitting and projection")
}

pub fn criterion_5() -> Outcome {
    let mut c = Checks::new();
    let frac = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    c.check(min_dual_norm(&lat("E6")) == frac(4, 3), "minimal dual norm of E6 is 4/3");
    c.check(min_dual_norm(&lat("E7")) == frac(3, 2), "minimal dual norm of E7 is 3/2");
    let l23 = lat("Lambda23");
    c.check(l23.det() == BigInt::from(4), "det(Lambda23) = 4");
    c.check(min_dual_norm(&l23) == frac(3, 1), "minimal dual norm of Lambda23 is 3");
    c.check(min_dual_norm(&lat("Leech")) == frac(4, 1), "minimal dual norm of Leech is 4");

    let holds = [
        ("E6", "Zn(1)"),
        ("E6", "Zn(2)"),
        ("E6", "Zn(3)"),
        ("E7", "Zn(1)"),
        ("E8", "Zn(1)"),
        ("Lambda23", "An(2)"),
        ("Lambda23", "Dn(4)"),
        ("Leech", "An(2) + diag(1,2,3)"),
    ];
    for (l, lp) in holds {
        match check_prop2_hypothesis(&lat(l), &lat(lp)) {
            Ok(r) => c.check(
                r.holds,
                format!("({l}, {lp}): generated by norms <= {} < {}", r.generating_bound, r.min_dual_norm),
            ),
            Err(e) => c.check(false, format!("({l}, {lp}): {e}")),
        }
    }
    match check_prop2_hypothesis(&lat("diag(2)"), &lat("Zn(1)")) {
        Ok(r) => c.check(!r.holds, format!("(<2>, <1>) fails: {} >= {}", r.generating_bound, r.min_dual_norm)),
        Err(e) => c.check(false, format!("(<2>, <1>): {e}")),
    }
    c.finish(5, "generation below the minimal dual norm")
}

pub fn criterion_6() -> Outcome {
    let mut c = Checks::new();
    let family = |members: &[&str], parts: Vec<Vec<usize>>| {
        PartitionFamily::new(set(members, "ground"), parts).expect("valid family")
    };
    let r = check_prop3(&family(&["E8", "Zn(1)"], vec![vec![0], vec![1]]));
    c.check(r.passed(), "ground {E8, <1>} with singleton parts");
    let r = check_prop3(&family(&["E8", "Zn(8)"], vec![vec![0], vec![1]]));
    c.check(r.passed(), "ground {E8, Z^8} with singleton parts");

    let cases: [(&[&str], Vec<Vec<usize>>); 5] = [
        (&["E8", "Leech"], vec![vec![0], vec![1]]),
        (&["Zn(1)", "E8", "Dnplus(12)"], vec![vec![0], vec![1], vec![2]]),
        (&["Zn(1)", "E8", "Dnplus(12)"], vec![vec![0, 1], vec![2]]),
        (&["Zn(1)", "E8", "Dnplus(12)", "Leech"], vec![vec![0], vec![1], vec![2], vec![3]]),
        (&["Zn(1)", "E8", "Dnplus(12)", "Leech"], vec![vec![0, 3], vec![1, 2]]),
    ];
    for (members, parts) in cases {
        let r = check_prop3(&family(members, parts.clone()));
        c.check(r.passed(), format!("ground {{{}}} with parts {parts:?}", members.join(", ")));
    }

    let r = check_prop3(&family(&["E8", "Zn(1)"], vec![vec![0, 1], vec![1]]));
    c.check(
        r.covers && r.minimal == vec![true, false] && !r.passed(),
        "parts {{E8, <1>}}, {{<1>}}: the second part is rejected as redundant",
    );
    c.finish(6, "pairwise coprime unimodular ground sets")
}

pub fn criterion_7() -> Outcome {
    let mut c = Checks::new();
    let cases = [
        ("E8 + Zn(3) + An(2)", vec!["Zn(1)", "Zn(1)", "Zn(1)", "An(2)", "E8"]),
        ("diag(1,1,2)", vec!["Zn(1)", "Zn(1)", "diag(2)"]),
        ("Dn(4) + Dn(4)", vec!["Dn(4)", "Dn(4)"]),
    ];
    for (expr, expected) in cases {
        let g = lat(expr);
        let expected: Vec<GramMatrix> = expected.iter().map(|e| lat(e)).collect();
        let base = indecomposable_summands(&g);
        let mut ok = same_summands(&base.summands, &expected) && base.reassemble().is_some();
        let key = base.invariant_key();
        for seed in 0..20 {
            let d = indecomposable_summands(&randomize_basis(&g, seed));
            ok &= d.invariant_key() == key && same_summands(&d.summands, &base.summands) && d.reassemble().is_some();
        }
        c.check(ok, format!("{expr}: same {} summands in 20 random bases", base.len()));
    }
    c.finish(7, "uniqueness of the indecomposable decomposition")
}

fn random_gram(rng: &mut ChaCha8Rng) -> GramMatrix {
    loop {
        let n = rng.random_range(1..=4usize);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = rng.random_range(1..=5);
            for j in 0..i {
                let v = rng.random_range(-5..=5);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        if let Ok(g) = GramMatrix::from_rows(&rows) {
            return g;
        }
    }
}

/// All nonzero `x` with `x^T g x <= bound` by scanning the box
/// `|x_i| <= sqrt(bound * (g^-1)_ii)`, both signs included.
pub fn box_short_vectors(g: &GramMatrix, bound: i64) -> Vec<Vec<i64>> {
    let n = g.rank();
    let det = g.det();
    let adj = g.adjugate();
    let radius: Vec<i64> = (0..n)
        .map(|i| (BigInt::from(bound) * &adj[i][i] / &det).sqrt().to_i64().expect("small box"))
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        if x.iter().any(|&v| v != 0) && g.norm(&x) <= bound as i128 {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < radius[i] {
                x[i] += 1;
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
    }
}

pub fn criterion_8() -> Outcome {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    for _ in 0..200 {
        let g = random_gram(&mut rng);
        let bound = rng.random_range(1..=12);
        let mut expected: Vec<Vec<i64>> = box_short_vectors(&g, bound)
            .into_iter()
            .filter(|x| x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0))
            .collect();
        expected.sort();
        let mut got: Vec<Vec<i64>> = short_vectors_up_to(&g, bound).vectors.into_iter().map(|v| v.coords).collect();
        got.sort();
        agree += (got == expected) as usize;
    }
    c.check(agree == 200, format!("short vectors match the box scan on {agree}/200 random forms"));
    let e8 = lat("E8");
    let roots = short_vectors_up_to(&e8, 2).count_of_norm(2);
    c.check(roots == 240, format!("E8 has {roots} vectors of norm 2"));

    let leech = lat("Leech");
    c.check(leech.det().is_one(), "det(Leech) = 1");
    c.check(min_norm(&leech) == 4, "Leech has minimal norm 4");
    let l23 = lat("Lambda23");
    c.check(l23.rank() == 23 && l23.det() == BigInt::from(4), "the complement of a minimal Leech vector has det 4");
    if slow_tests_enabled() {
        let count = short_vectors_up_to(&leech, 4).count_of_norm(4);
        c.check(count == 196560, format!("Leech has {count} vectors of norm 4"));
    } else {
        c.note("Leech norm-4 count skipped (set LAT_SLOW_TESTS=1)");
    }
    c.finish(8, "short-vector enumeration against brute force")
}

/// Does `q` represent `l`? Tries every assignment of basis images among
/// the vectors of `q` with the right norms, in the given basis order.
pub fn brute_force_represents(q: &GramMatrix, l: &GramMatrix) -> bool {
    let m = l.rank();
    if m > q.rank() {
        return false;
    }
    if m == 0 {
        return true;
    }
    let top = l.diag().into_iter().max().expect("nonzero rank");
    let pool = box_short_vectors(q, top);
    let by_norm: Vec<Vec<&Vec<i64>>> =
        (0..m).map(|i| pool.iter().filter(|x| q.norm(x) == l.get(i, i) as i128).collect()).collect();
    fn place(q: &GramMatrix, l: &GramMatrix, by_norm: &[Vec<&Vec<i64>>], chosen: &mut Vec<Vec<i64>>) -> bool {
        let i = chosen.len();
        if i == l.rank() {
            return true;
        }
        for &x in &by_norm[i] {
            if chosen.iter().enumerate().all(|(j, y)| q.inner(x, y) == l.get(i, j) as i128) {
                chosen.push(x.clone());
                if place(q, l, by_norm, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    place(q, l, &by_norm, &mut Vec::new())
}

pub fn criterion_9() -> Outcome {
    let mut c = Checks::new();
    let classes: Vec<GramMatrix> = (1..=3).flat_map(|r| enumerate_classes(&space(r, 3))).collect();
    let mut pairs = 0;
    let mut agree = 0;
    for q in &classes {
        for l in &classes {
            pairs += 1;
            let fast = represents(q, l);
            let ok = fast.as_ref().is_none_or(|e| e.verify()) && fast.is_some() == brute_force_represents(q, l);
            agree += ok as usize;
        }
    }
    c.check(agree == pairs, format!("represents matches the brute-force oracle on {agree}/{pairs} pairs"));
    c.note(format!("{} classes of rank <= 3 with max_diag 3", classes.len()));
    c.finish(9, "embedding search against brute force")
}

pub fn criterion_10() -> Outcome {
    let mut c = Checks::new();
    for f in mixed_example_facts() {
        c.check(f.holds, f.statement);
    }
    c.note("no class enumeration at rank 34; other forms breaking minimality are not ruled out");
    c.finish(10, "rank-34 mixed example, component facts")
}

pub fn run_all() -> Vec<Outcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

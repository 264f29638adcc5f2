//! Fast algorithms against naive oracles written only with the public API.

use latcrit::criterion::{
    candidates, check_criterion, check_norm2_lemma, enumerate_classes, FormSet, SearchSpace, Verdict,
};
use latcrit::embedding::represents;
use latcrit::enumeration::{min_dual_norm, short_vectors_up_to};
use latcrit::{catalog, GramMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn diag(d: &[i64]) -> GramMatrix {
    GramMatrix::diagonal(d).unwrap()
}

/// Radius of the coordinate box containing every vector of norm <= bound:
/// |x_i|^2 <= bound * (G^-1)_ii.
fn radii(g: &GramMatrix, bound: i64) -> Vec<i64> {
    let inv = g.dual_gram();
    (0..g.rank())
        .map(|i| {
            let lim = BigRational::from_integer(BigInt::from(bound)) * inv.get(i, i);
            let mut r = 0i64;
            while BigRational::from_integer(BigInt::from((r + 1) * (r + 1))) <= lim {
                r += 1;
            }
            r
        })
        .collect()
}

fn each_in_box(radius: &[i64], mut f: impl FnMut(&[i64])) {
    let n = radius.len();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
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

fn naive_vectors(g: &GramMatrix, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    each_in_box(&radii(g, bound), |x| {
        let n = g.norm(x);
        if n > 0 && n <= bound as i128 {
            out.push(x.to_vec());
        }
    });
    out
}

fn naive_min_norm(g: &GramMatrix) -> i64 {
    let top = g.diag().into_iter().min().unwrap();
    naive_vectors(g, top).iter().map(|x| g.norm(x) as i64).min().unwrap()
}

#[test]
fn short_vectors_of_classic_lattices_match_the_box() {
    for (g, bound) in [(catalog("E8").unwrap(), 2), (catalog("Dn(4)").unwrap(), 4), (catalog("An(3)").unwrap(), 6)] {
        let naive = naive_vectors(&g, bound);
        let fast = short_vectors_up_to(&g, bound);
        assert_eq!(naive.len(), 2 * fast.len());
        for v in &fast.vectors {
            assert!(naive.contains(&v.coords));
        }
    }
}

#[test]
fn dual_minima_of_e6_and_e7() {
    // the dual lattice has Gram G^-1; its own dual is G, which bounds the box
    for (name, num, den) in [("E6", 4, 3), ("E7", 3, 2)] {
        let g = catalog(name).unwrap();
        let inv = g.dual_gram();
        let det = g.det();
        let scaled: Vec<Vec<i64>> = (0..g.rank())
            .map(|i| (0..g.rank()).map(|j| (inv.get(i, j) * BigRational::from_integer(det.clone())).to_integer().to_i64().unwrap()).collect())
            .collect();
        let h = GramMatrix::from_rows(&scaled).unwrap();
        let best = naive_min_norm(&h);
        let got = BigRational::new(BigInt::from(best), det);
        assert_eq!(got, BigRational::new(BigInt::from(num), BigInt::from(den)), "{name}");
        assert_eq!(min_dual_norm(&g), got);
    }
}

/// Every integer matrix whose columns lie in the box of `q` and which
/// carries the Gram of `q` to the Gram of `l`.
fn naive_represents(q: &GramMatrix, l: &GramMatrix) -> bool {
    let (n, m) = (q.rank(), l.rank());
    if m > n {
        return false;
    }
    let top = l.diag().into_iter().max().unwrap();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    each_in_box(&radii(q, top), |x| cols.push(x.to_vec()));
    fn go(q: &GramMatrix, l: &GramMatrix, cols: &[Vec<i64>], chosen: &mut Vec<usize>) -> bool {
        let j = chosen.len();
        if j == l.rank() {
            return true;
        }
        for (k, c) in cols.iter().enumerate() {
            chosen.push(k);
            let ok = (0..=j).all(|i| q.inner(&cols[chosen[i]], c) == l.get(i, j) as i128);
            if ok && go(q, l, cols, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(q, l, &cols, &mut Vec::new())
}

#[test]
fn represents_matches_naive_matrix_search() {
    let classes: Vec<GramMatrix> =
        (1..=2).flat_map(|r| enumerate_classes(&SearchSpace::new(r, 3).unwrap())).chain(enumerate_classes(&SearchSpace::new(3, 2).unwrap())).collect();
    for q in &classes {
        for l in &classes {
            let fast = represents(q, l);
            assert_eq!(fast.is_some(), naive_represents(q, l), "{q:?} {l:?}");
            if let Some(e) = fast {
                assert!(e.verify());
            }
        }
    }
}

#[test]
fn binary_classes_with_diagonal_two() {
    let classes = enumerate_classes(&SearchSpace::new(2, 2).unwrap());
    let a2 = catalog("An(2)").unwrap();
    assert_eq!(classes.len(), 4);
    assert!(classes.contains(&diag(&[1, 1])));
    assert!(classes.contains(&diag(&[1, 2])));
    assert!(classes.contains(&diag(&[2, 2])));
    assert!(classes.iter().any(|g| naive_represents(g, &a2) && naive_represents(&a2, g)));
}

#[test]
fn class_representatives_are_complete_and_distinct() {
    let space = SearchSpace::new(3, 3).unwrap();
    let classes = enumerate_classes(&space);
    let iso = |a: &GramMatrix, b: &GramMatrix| a.det() == b.det() && naive_represents(a, b);
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            assert!(!iso(a, b), "{a:?} and {b:?} are isometric");
        }
    }
    for c in candidates(&space) {
        assert!(classes.iter().any(|r| iso(r, &c)), "{c:?} has no representative");
    }
}

#[test]
fn determinant_filter() {
    let space = SearchSpace::new(2, 3).unwrap().with_max_det(3).unwrap();
    for g in enumerate_classes(&space) {
        assert!(g.det() <= BigInt::from(3));
    }
}

#[test]
fn single_member_sets_admit_counterexamples() {
    let a = diag(&[1, 1, 2]);
    let space = SearchSpace::new(3, 2).unwrap();
    let b = FormSet::new(vec![diag(&[1, 1])], "B").unwrap();
    let r = check_criterion(&a, &b, &space).unwrap();
    assert_eq!(r.verdict, Verdict::Counterexample);
    let cx = r.counterexample.unwrap();
    assert_eq!(cx.q, diag(&[1, 1, 1]));
    assert!(cx.verify(&b));
    assert!(!naive_represents(&cx.q, &a));

    let c = FormSet::new(vec![diag(&[2, 2, 2])], "C").unwrap();
    let cx = check_criterion(&a, &c, &space).unwrap().counterexample.unwrap();
    assert_eq!(cx.q, diag(&[2, 2, 2]));
    assert!(cx.verify(&c));
}

#[test]
fn counterexamples_persist_in_larger_spaces() {
    let a = diag(&[1, 1, 2]);
    let b = FormSet::new(vec![diag(&[1, 1])], "B").unwrap();
    let small = check_criterion(&a, &b, &SearchSpace::new(3, 2).unwrap()).unwrap();
    for d in 3..=5 {
        let big = check_criterion(&a, &b, &SearchSpace::new(3, d).unwrap()).unwrap();
        assert_eq!(big.verdict, Verdict::Counterexample);
        assert!(big.counterexample.unwrap().verify(&b));
    }
    assert!(small.counterexample.unwrap().verify(&b));
}

#[test]
fn rank_three_criterion_holds_at_every_small_bound() {
    let a = diag(&[1, 1, 2]);
    let bc = FormSet::new(vec![diag(&[1, 1]), diag(&[2, 2, 2])], "B, C").unwrap();
    for d in 1..=6 {
        let r = check_criterion(&a, &bc, &SearchSpace::new(3, d).unwrap()).unwrap();
        assert!(r.verified(), "max_diag {d}");
    }
}

#[test]
fn norm2_lemma_on_all_small_classes() {
    for (rank, d) in [(1, 4), (2, 4), (3, 4), (4, 3)] {
        for q in enumerate_classes(&SearchSpace::new(rank, d).unwrap()) {
            assert!(check_norm2_lemma(&q), "{q:?}");
        }
    }
}

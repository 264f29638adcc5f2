use latcrit::decomposition::{indecomposable_summands, same_summands};
use latcrit::embedding::is_isometric;
use latcrit::enumeration::{min_norm, norm_counts};
use latcrit::reduction::{is_lll_reduced, lll_reduce, randomize_basis_with_transform};
use latcrit::{GramMatrix, RationalMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Gram matrices `B^T B` of small nonsingular integer bases.
fn gram(max_rank: usize) -> impl Strategy<Value = GramMatrix> {
    (1..=max_rank)
        .prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), n))
        .prop_filter_map("singular basis", |b| {
            let n = b.len();
            let rows: Vec<Vec<i64>> =
                (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| b[k][i] * b[k][j]).sum()).collect()).collect();
            GramMatrix::from_rows(&rows).ok()
        })
}

fn congruent(g: &GramMatrix, t: &[Vec<i64>]) -> GramMatrix {
    GramMatrix::from_rows(&g.congruence(t).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn direct_sum_multiplies_determinants(a in gram(3), b in gram(3)) {
        let s = a.direct_sum(&b);
        prop_assert_eq!(s.rank(), a.rank() + b.rank());
        prop_assert_eq!(s.det(), a.det() * b.det());
    }

    #[test]
    fn scaling_multiplies_the_determinant(g in gram(4), m in 1i64..4) {
        let s = g.scale(m).unwrap();
        prop_assert_eq!(s.det(), g.det() * BigInt::from(m).pow(g.rank() as u32));
    }

    #[test]
    fn dual_of_dual_is_the_lattice(g in gram(4)) {
        let back = g.dual_gram().inverse().unwrap();
        prop_assert_eq!(back, RationalMatrix::from_integers(&g.rows()));
    }

    #[test]
    fn invariants_survive_a_change_of_basis(g in gram(4), seed in 0u64..1000) {
        let (h, t) = randomize_basis_with_transform(&g, seed);
        prop_assert_eq!(&congruent(&g, &t), &h);
        prop_assert_eq!(h.det(), g.det());
        prop_assert_eq!(min_norm(&h), min_norm(&g));
        prop_assert_eq!(norm_counts(&h, 6), norm_counts(&g, 6));
        let e = is_isometric(&g, &h);
        prop_assert!(e.is_some_and(|e| e.verify() && e.is_isometry()));
    }

    #[test]
    fn lll_output_is_reduced_and_congruent(g in gram(5)) {
        let r = lll_reduce(&g);
        prop_assert!(is_lll_reduced(&r.gram));
        prop_assert_eq!(congruent(&g, &r.transform), r.gram);
    }

    #[test]
    fn text_format_roundtrips(g in gram(5)) {
        prop_assert_eq!(GramMatrix::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn decomposition_is_sound_unique_and_idempotent(a in gram(3), b in gram(2), seed in 0u64..1000) {
        let g = a.direct_sum(&b);
        let d = indecomposable_summands(&g);
        prop_assert!(d.reassemble().is_some());
        for (i, s) in d.summands.iter().enumerate() {
            let again = indecomposable_summands(s);
            prop_assert_eq!(again.len(), 1);
            prop_assert!(is_isometric(&again.summands[0], s).is_some());
            for other in &d.embeddings[i + 1..] {
                for u in d.embeddings[i].columns() {
                    for v in other.columns() {
                        prop_assert_eq!(g.inner(&u, &v), 0);
                    }
                }
            }
        }
        let (h, _) = randomize_basis_with_transform(&g, seed);
        let e = indecomposable_summands(&h);
        prop_assert!(same_summands(&d.summands, &e.summands));
    }
}

//! Cross-checks against independent brute-force routes.

use std::collections::BTreeMap;

use circsort::displacement::{
    initial_displacement, is_feasible, net_count_matrix, normalize, satisfies_opt,
};
use circsort::oracle::{all_permutations, Oracle};
use circsort::perm::{cyclic_transpositions, Element};
use circsort::reduction::{delete_element_swaps, verify_induction_chain};
use circsort::sorter::{bubble_sort, optimal_displacement, optimal_sort};
use circsort::{DisplacementVector, Permutation, Swap};

/// Every sequence of exactly `len` cyclically adjacent swaps that sorts `perm`.
fn sorting_words(perm: &Permutation, len: usize) -> Vec<Vec<Swap>> {
    fn go(cur: &Permutation, left: usize, word: &mut Vec<Swap>, out: &mut Vec<Vec<Swap>>) {
        if left == 0 {
            if cur.is_identity() {
                out.push(word.clone());
            }
            return;
        }
        for t in cyclic_transpositions(cur.len()) {
            let s = cur.transposition_to_swap(t).unwrap();
            word.push(s);
            go(&cur.apply_transposition(t).unwrap(), left - 1, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    go(perm, len, &mut Vec::new(), &mut out);
    out
}

/// Net counts and displacement tallied straight from a swap list.
fn tally(n: usize, word: &[Swap]) -> (BTreeMap<(Element, Element), i64>, Vec<i64>) {
    let mut c = BTreeMap::new();
    let mut d = vec![0i64; n];
    for s in word {
        *c.entry((s.i, s.j)).or_insert(0) += 1;
        *c.entry((s.j, s.i)).or_insert(0) -= 1;
        d[s.i as usize - 1] += 1;
        d[s.j as usize - 1] -= 1;
    }
    (c, d)
}

#[test]
fn closed_form_matches_enumerated_minimal_sequences() {
    let oracle = Oracle::default();
    let cases = ["3 2 1 4", "4 2 3 1", "3 4 1 2", "4 3 2 1", "2 4 1 5 3", "5 1 4 3 2"];
    for case in cases {
        let perm: Permutation = case.parse().unwrap();
        let n = perm.len();
        let len = oracle.bfs_distance(&perm).unwrap() as usize;
        let words = sorting_words(&perm, len);
        assert!(!words.is_empty());
        let mut matched = 0;
        for word in &words {
            let (c, d) = tally(n, word);
            let d = DisplacementVector::from_values(d);
            assert!(is_feasible(&perm, &d).unwrap());
            let formula = net_count_matrix(&perm, &d).unwrap();
            for (i, j, v) in formula.entries() {
                assert_eq!(c.get(&(i, j)).copied().unwrap_or(0), v, "{case}: c({i},{j})");
            }
            if d == optimal_displacement(&perm).unwrap() {
                matched += 1;
            }
        }
        assert!(matched > 0, "{case}: no minimal word realises the normalized vector");
    }
}

#[test]
fn counterexample_has_three_minimal_counts() {
    // every minimal sort of (3,2,1,4) with d = (-2,0,2,0) exchanges 3/2, 3/1, 2/1 once
    let perm: Permutation = "3 2 1 4".parse().unwrap();
    let target = DisplacementVector::from_values(vec![-2, 0, 2, 0]);
    let words = sorting_words(&perm, 3);
    let with_target: Vec<_> = words
        .iter()
        .filter(|w| DisplacementVector::from_values(tally(4, w).1) == target)
        .collect();
    assert!(!with_target.is_empty());
    for w in with_target {
        let (c, _) = tally(4, w);
        assert_eq!(c[&(3, 2)], 1);
        assert_eq!(c[&(3, 1)], 1);
        assert_eq!(c[&(2, 1)], 1);
        for pair in [(3, 4), (2, 4), (1, 4)] {
            assert_eq!(c.get(&pair).copied().unwrap_or(0), 0);
        }
    }
    assert!(sorting_words(&perm, 2).is_empty());
}

#[test]
fn exhaustive_displacement_invariants() {
    for n in 1..=7 {
        for perm in all_permutations(n) {
            let d0 = initial_displacement(&perm).unwrap();
            assert!(is_feasible(&perm, &d0).unwrap());
            let d = normalize(&perm, &d0).unwrap();
            assert!(satisfies_opt(&d));
            if n <= 6 {
                assert_eq!(net_count_matrix(&perm, &d).unwrap().row_sums(), d, "{perm}");
            }
            assert_eq!(bubble_sort(&perm).unwrap().len() as u64, perm.inversions());
        }
    }
}

#[test]
fn induction_chain_exhaustive() {
    for n in 2..=6 {
        for perm in all_permutations(n) {
            let seq = optimal_sort(&perm).unwrap();
            let chain = verify_induction_chain(&perm, &seq).unwrap();
            assert!(chain.overall, "{perm}: {chain:?}");
        }
    }
}

#[test]
fn deletions_commute() {
    for perm in all_permutations(5) {
        let seq = optimal_sort(&perm).unwrap();
        for &k in perm.labels() {
            for &k2 in perm.labels().iter().filter(|&&x| x != k) {
                let a = delete_element_swaps(&delete_element_swaps(&seq, k).unwrap(), k2).unwrap();
                let b = delete_element_swaps(&delete_element_swaps(&seq, k2).unwrap(), k).unwrap();
                assert_eq!(a.swaps(), b.swaps());
                assert_eq!(a.initial(), b.initial());
                let once = delete_element_swaps(&seq, k).unwrap();
                assert!(a.final_perm().is_restriction_of(once.final_perm(), k2).unwrap());
            }
        }
    }
}

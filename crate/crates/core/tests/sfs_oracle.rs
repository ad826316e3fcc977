use cubing_core::sfs::{
    canonical_form, enumerate_extremal, enumerate_raw, find_nontrivial_solution, is_solution_free, max_free_subset,
    max_free_subset_ordered, reproduce_table, t_of, verify_tau_bound, LinearEquation, SfsInstance, DEFAULT_BUDGET,
};
use cubing_core::Rational;
use proptest::prelude::*;

/// Avoidance of `a+b=2c` and `a+2b=3c` by direct triple scan.
fn avoids_both(set: &[usize], n: usize) -> bool {
    for &a in set {
        for &b in set {
            for &c in set {
                let distinct = !(a == b && b == c);
                if distinct && (a + b + 2 * (n - c)).is_multiple_of(n) {
                    return false;
                }
                if distinct && (a + 2 * b + 3 * (n - c)).is_multiple_of(n) {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_t(n: usize) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if mask & 1 == 0 || size <= best {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if avoids_both(&set, n) {
            best = size;
        }
    }
    best
}

#[test]
fn solver_matches_subset_enumeration() {
    for n in 1..=22 {
        assert_eq!(t_of(n, DEFAULT_BUDGET).unwrap(), brute_t(n), "n = {n}");
    }
}

#[test]
fn reference_rows() {
    let expected = [(2, 1), (4, 2), (5, 2), (7, 2), (8, 2), (10, 2), (11, 2), (13, 3), (14, 3), (16, 4), (17, 4)];
    let rows = reproduce_table(DEFAULT_BUDGET).unwrap();
    assert_eq!(rows.len(), expected.len());
    for (row, (n, t)) in rows.iter().zip(expected) {
        assert_eq!((row.n, row.t), (n, t));
        assert_eq!(row.tau, Rational::from_counts(t, n));
        assert_eq!(brute_t(n), t);
    }
}

#[test]
fn z16_four_sets_meet_the_characteristic_pair() {
    let inst = SfsInstance::standard(16).unwrap();
    let raw = enumerate_raw(&inst, 4, DEFAULT_BUDGET).unwrap();
    let mut brute = Vec::new();
    for a in 1..16 {
        for b in a + 1..16 {
            for c in b + 1..16 {
                if avoids_both(&[0, a, b, c], 16) {
                    brute.push(vec![0, a, b, c]);
                }
            }
        }
    }
    assert_eq!(raw, brute);
    assert!(raw.iter().all(|s| s.contains(&4) || s.contains(&12)));
    for listed in [[0, 1, 4, 5], [0, 1, 4, 13], [0, 1, 5, 12], [0, 1, 12, 13]] {
        assert!(avoids_both(&listed, 16));
        assert!(raw.contains(&listed.to_vec()));
    }
}

#[test]
fn tau_below_four_seventeenths_to_forty() {
    let rows = verify_tau_bound(18, 40, Rational::new(4, 17), DEFAULT_BUDGET).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.tau < Rational::new(4, 17)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reported_sets_avoid_and_survive_affine_maps(n in 2usize..=40, u in 1usize..40, shift in 0usize..40) {
        let inst = SfsInstance::standard(n).unwrap();
        let r = max_free_subset(&inst, DEFAULT_BUDGET).unwrap();
        prop_assert!(avoids_both(&r.witness, n));
        prop_assert_eq!(r.witness.len(), r.t);
        let u = u % n;
        prop_assume!(num_integer::gcd(u, n) == 1);
        for s in &r.extremal_sets {
            prop_assert!(avoids_both(s, n));
            let image: Vec<usize> = s.iter().map(|&a| (u * a + shift) % n).collect();
            prop_assert!(is_solution_free(&image, n, &inst.equations));
        }
    }

    #[test]
    fn single_equation_allows_at_least_as_much(n in 2usize..=36) {
        let both = t_of(n, DEFAULT_BUDGET).unwrap();
        let ap = SfsInstance::new(n, vec![LinearEquation::ap3()]).unwrap();
        prop_assert!(max_free_subset(&ap, DEFAULT_BUDGET).unwrap().t >= both);
    }

    #[test]
    fn search_order_does_not_change_the_maximum(n in 2usize..=36, seed in any::<u64>()) {
        let inst = SfsInstance::standard(n).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        let k = (seed as usize) % order.len().max(1);
        order.rotate_left(k);
        order.reverse();
        let (t, witness, _) = max_free_subset_ordered(&inst, DEFAULT_BUDGET, &order).unwrap();
        prop_assert_eq!(t, t_of(n, DEFAULT_BUDGET).unwrap());
        prop_assert!(avoids_both(&witness, n));
    }

    #[test]
    fn antipodal_pairs_never_coexist(n in 1usize..=20) {
        // (a, a + n/2, a) solves a + b = 2c non-trivially
        let n = 2 * n;
        let inst = SfsInstance::standard(n).unwrap();
        let e = enumerate_extremal(&inst, t_of(n, DEFAULT_BUDGET).unwrap(), DEFAULT_BUDGET).unwrap();
        for s in &e.raw {
            prop_assert!(s.iter().all(|&a| !s.contains(&((a + n / 2) % n))));
        }
    }

    #[test]
    fn solution_finder_agrees_with_triple_scan(n in 2usize..=30, bits in any::<u32>()) {
        let set: Vec<usize> = (0..n).filter(|&i| i == 0 || bits >> (i % 32) & 1 == 1).collect();
        let found = [LinearEquation::ap3(), LinearEquation::weighted()]
            .iter()
            .any(|eq| find_nontrivial_solution(&set, n, eq).is_some());
        prop_assert_eq!(found, !avoids_both(&set, n));
    }

    #[test]
    fn canonical_form_is_a_dilation_invariant(n in 3usize..=30, u in 1usize..30, bits in any::<u32>()) {
        let set: Vec<usize> = (0..n).filter(|&i| i == 0 || bits >> (i % 32) & 1 == 1).collect();
        let u = u % n;
        prop_assume!(num_integer::gcd(u, n) == 1);
        let mut image: Vec<usize> = set.iter().map(|&a| a * u % n).collect();
        image.sort_unstable();
        prop_assert_eq!(canonical_form(&set, n), canonical_form(&image, n));
    }
}

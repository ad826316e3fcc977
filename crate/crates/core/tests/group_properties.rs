use cubing_core::builders;
use cubing_core::FiniteGroup;
use proptest::prelude::*;

fn build(kind: u8, a: usize, b: usize) -> Option<FiniteGroup> {
    match kind % 7 {
        0 => builders::cyclic(1 + a % 40).ok(),
        1 => builders::dihedral(3 + a % 18).ok(),
        2 => builders::dicyclic(2 + a % 8).ok(),
        3 => builders::symmetric(1 + a % 4).ok(),
        4 => builders::alternating(3 + a % 3).ok(),
        5 => {
            let x = builders::cyclic(2 + a % 5).ok()?;
            let y = builders::dihedral(3 + b % 4).ok()?;
            builders::direct_product(&x, &y).ok()
        }
        _ => builders::cyclic_semidirect(2 + a % 19, 1 + b % 8, 1 + (a * 7 + b) % 19).ok(),
    }
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    (any::<u8>(), 0usize..1000, 0usize..1000).prop_filter_map("builder rejected parameters", |(k, a, b)| build(k, a, b))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn axioms_hold_on_raw_table(g in small_group()) {
        let t = g.table_rows();
        let n = t.len();
        for row in &t {
            let mut seen = vec![false; n];
            for &v in row { prop_assert!(!seen[v]); seen[v] = true; }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &t { prop_assert!(!seen[row[c]]); seen[row[c]] = true; }
        }
        for a in 0..n {
            prop_assert_eq!(t[0][a], a);
            prop_assert_eq!(t[a][0], a);
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(t[t[a][b]][c], t[a][t[b][c]]);
                }
            }
        }
    }

    #[test]
    fn subgroup_containments(g in small_group(), x in 0usize..10_000) {
        let x = x % g.order();
        prop_assert_eq!(g.order() % g.center().order(), 0);
        let cyc = g.subgroup_generated(&[x]);
        prop_assert!(cyc.is_subset_of(&g.centralizer(x)));
        prop_assert!(cyc.is_subset_of(&g.normalizer(&cyc)));
        prop_assert_eq!(cyc.order(), g.element_order(x));
    }

    #[test]
    fn quotients_are_homomorphic_images(g in small_group()) {
        for n in g.normal_subgroups() {
            let q = g.quotient(&n).unwrap();
            prop_assert_eq!(q.group.order() * n.order(), g.order());
            let mut hit = vec![false; q.group.order()];
            for a in g.elements() {
                hit[q.projection[a]] = true;
                for b in g.elements() {
                    prop_assert_eq!(q.projection[g.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
                }
            }
            prop_assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn series_and_sylow(g in small_group()) {
        let series = g.derived_series();
        prop_assert_eq!(series.last().unwrap().is_trivial(), g.is_solvable());
        if g.order() > 1 {
            prop_assert_eq!(g.nilpotency_class() == Some(1), g.is_abelian());
        }
        for p in prime_factors(g.order()) {
            let mut part = 1;
            while g.order() % (part * p) == 0 { part *= p; }
            prop_assert_eq!(g.sylow(p).order(), part);
        }
    }
}

#[test]
fn projective_special_linear_groups_are_simple() {
    for (q, order) in [(5, 60), (7, 168), (8, 504), (9, 360), (11, 660), (13, 1092)] {
        let g = builders::psl2(q).unwrap();
        assert_eq!(g.order(), order);
        for class in g.conjugacy_classes() {
            if class[0] != 0 {
                assert_eq!(g.normal_closure(&class[..1]).order(), order, "q = {q}");
            }
        }
    }
}

#[test]
fn non_latin_row_is_rejected_with_position() {
    let err = FiniteGroup::from_cayley_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
    assert_eq!(err.to_string().split(':').next().unwrap(), "NotClosed at (1, 1)");
}

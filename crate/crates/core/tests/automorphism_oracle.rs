use std::collections::{BTreeSet, HashSet};

use cubing_core::automorphism::{enumerate_automorphisms, inner_automorphism, is_automorphism, is_n_abelian, GroupMap};
use cubing_core::builders;
use cubing_core::cubing::max_cube_ratio;
use cubing_core::verify::resolve;
use cubing_core::{FiniteGroup, Rational};
use proptest::prelude::*;

/// Straightforward generator-image search, sharing nothing with the library's enumerator.
fn naive_automorphisms(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let t = g.table_rows();
    let n = t.len();
    let span = |gens: &[usize]| -> Vec<bool> {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(e) = stack.pop() {
            for &s in gens {
                let f = t[e][s];
                if !seen[f] {
                    seen[f] = true;
                    stack.push(f);
                }
            }
        }
        seen
    };
    let mut gens = Vec::new();
    let mut covered = span(&gens);
    for x in 0..n {
        if !covered[x] {
            gens.push(x);
            covered = span(&gens);
        }
    }
    let order = |x: usize| {
        let (mut y, mut k) = (x, 1);
        while y != 0 {
            y = t[y][x];
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = (0..n).map(order).collect();
    let mut out = BTreeSet::new();
    let mut images = Vec::new();
    extend(&t, &gens, &orders, &mut images, &mut out);
    out
}

/// Builds the map on `⟨gens[..images.len()]⟩` by walking the Cayley graph; `None` on conflict.
fn partial_map(t: &[Vec<usize>], gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = t.len();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut stack = vec![0];
    while let Some(e) = stack.pop() {
        for (i, &img) in images.iter().enumerate() {
            let f = t[e][gens[i]];
            let v = t[map[e]][img];
            if map[f] == usize::MAX {
                map[f] = v;
                stack.push(f);
            } else if map[f] != v {
                return None;
            }
        }
    }
    let mut seen = HashSet::new();
    map.iter().filter(|&&v| v != usize::MAX).all(|&v| seen.insert(v)).then_some(map)
}

fn extend(t: &[Vec<usize>], gens: &[usize], orders: &[usize], images: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    if images.len() == gens.len() {
        let map = partial_map(t, gens, images).expect("checked on the way down");
        let n = t.len();
        if (0..n).all(|a| (0..n).all(|b| map[t[a][b]] == t[map[a]][map[b]])) {
            out.insert(map);
        }
        return;
    }
    let want = orders[gens[images.len()]];
    for c in 0..t.len() {
        if orders[c] != want {
            continue;
        }
        images.push(c);
        if partial_map(t, gens, images).is_some() {
            extend(t, gens, orders, images, out);
        }
        images.pop();
    }
}

fn library_set(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    enumerate_automorphisms(g, None).unwrap().members.into_iter().map(GroupMap::into_images).collect()
}

#[test]
fn enumeration_matches_naive_search() {
    for name in ["s4", "q8", "sl2_3", "c7:c3:2", "c2xc2xc2", "d6", "a5", "dic3xc2", "c8:c2:3"] {
        let g = resolve(name).unwrap();
        assert_eq!(library_set(&g), naive_automorphisms(&g), "{name}");
    }
}

#[test]
fn split_class_two_group_of_order_64() {
    let g = builders::type3_group_ii();
    let naive = naive_automorphisms(&g);
    assert_eq!(naive.len(), 2048);
    assert_eq!(library_set(&g), naive);
    let best = naive
        .iter()
        .map(|m| g.elements().filter(|&x| m[x] == g.mul(g.mul(x, x), x)).count())
        .max()
        .unwrap();
    assert_eq!(Rational::from_counts(best, 64), Rational::new(9, 16));
    assert_eq!(max_cube_ratio(&g, 3).unwrap().ratio, Rational::new(9, 16));
    let involutions_and_one = g.elements().filter(|&x| g.mul(x, x) == 0).count();
    assert_eq!(involutions_and_one, 36);
}

#[test]
fn cyclic_automorphism_counts_are_euler_phi() {
    for n in 1..=64usize {
        let phi = (1..=n).filter(|&k| num_gcd(k, n) == 1).count();
        let aut = enumerate_automorphisms(&builders::cyclic(n).unwrap(), None).unwrap();
        assert_eq!(aut.order(), phi, "n = {n}");
    }
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

fn catalog_group() -> impl Strategy<Value = FiniteGroup> {
    let names = ["c12", "d4", "d5", "q8", "s3", "s4", "a4", "dic3", "c2xc4", "c3xc3", "c5:c4:2", "heis3", "sl2_3", "d4xc2", "t3i_1"];
    proptest::sample::select(names.to_vec()).prop_map(|n| resolve(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn automorphisms_form_a_group(g in catalog_group()) {
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let set: HashSet<&GroupMap> = aut.members.iter().collect();
        prop_assert!(aut.members[0].is_identity());
        for a in aut.members.iter().step_by(3) {
            prop_assert!(set.contains(&a.inverse()));
            for b in aut.members.iter().step_by(5) {
                prop_assert!(set.contains(&a.then(b)));
            }
        }
    }

    #[test]
    fn inner_automorphisms(g in catalog_group()) {
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let set: HashSet<&GroupMap> = aut.members.iter().collect();
        let inner: HashSet<GroupMap> = g.elements().map(|x| inner_automorphism(&g, x)).collect();
        prop_assert_eq!(inner.len(), g.order() / g.center().order());
        prop_assert!(inner.iter().all(|m| set.contains(m)));
    }

    #[test]
    fn automorphisms_preserve_orders_and_class_sizes(g in catalog_group()) {
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let classes = g.conjugacy_classes();
        let class_size = |x: usize| classes.iter().find(|c| c.contains(&x)).unwrap().len();
        for a in &aut.members {
            prop_assert!(is_automorphism(&g, a));
            for x in g.elements() {
                prop_assert_eq!(g.element_order(x), g.element_order(a.apply(x)));
                prop_assert_eq!(class_size(x), class_size(a.apply(x)));
            }
        }
    }

    #[test]
    fn n_abelian_matches_pair_scan(g in catalog_group(), k in -4i64..6) {
        let exhaustive = g.elements().all(|x| g.elements().all(|y| g.pow(g.mul(x, y), k) == g.mul(g.pow(x, k), g.pow(y, k))));
        prop_assert_eq!(is_n_abelian(&g, k), exhaustive);
    }
}

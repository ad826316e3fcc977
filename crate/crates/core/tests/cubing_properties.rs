use cubing_core::automorphism::enumerate_automorphisms;
use cubing_core::classify::{classify_theorem31, VerdictKind};
use cubing_core::cubing::{cube_members, cube_set, max_cube_ratio};
use cubing_core::verify::lemmas::check_quotient_inequality;
use cubing_core::verify::resolve;
use cubing_core::{builders, Rational};
use proptest::prelude::*;

const NAMES: [&str; 14] =
    ["s3", "d4", "q8", "a4", "s4", "c10", "dic3", "d5", "c5:c4:2", "t3i_1", "c2xc4", "c7:c3:2", "sl2_3", "d4xc2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cube_sets_are_inverse_closed(name in proptest::sample::select(NAMES.to_vec()), i in any::<usize>()) {
        let g = resolve(name).unwrap();
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let alpha = &aut.members[i % aut.order()];
        let t = cube_members(&g, alpha, 3);
        prop_assert!(t.contains(&0));
        prop_assert!(t.iter().all(|&x| t.contains(&g.inverse(x))));
        let r = Rational::from_counts(t.len(), g.order());
        prop_assert!(r > Rational::new(0, 1) && r <= Rational::new(1, 1));
    }

    #[test]
    fn ratio_is_a_conjugacy_invariant(name in proptest::sample::select(NAMES.to_vec()), i in any::<usize>(), j in any::<usize>()) {
        let g = resolve(name).unwrap();
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let alpha = &aut.members[i % aut.order()];
        let beta = &aut.members[j % aut.order()];
        let conj = beta.inverse().then(alpha).then(beta);
        prop_assert_eq!(cube_members(&g, alpha, 3).len(), cube_members(&g, &conj, 3).len());
    }

    #[test]
    fn quotient_ratio_dominates(name in proptest::sample::select(NAMES.to_vec()), i in any::<usize>()) {
        let g = resolve(name).unwrap();
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let alpha = &aut.members[i % aut.order()];
        for n in g.normal_subgroups() {
            if alpha.preserves(&n) {
                let (lhs, rhs) = check_quotient_inequality(&g, alpha, &n).unwrap();
                prop_assert!(lhs <= rhs);
            }
        }
    }

    #[test]
    fn centralizers_of_cubed_elements(name in proptest::sample::select(NAMES.to_vec()), i in any::<usize>()) {
        let g = resolve(name).unwrap();
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let alpha = &aut.members[i % aut.order()];
        for x in cube_members(&g, alpha, 3) {
            prop_assert_eq!(g.centralizer(x), g.centralizer(g.pow(x, 3)));
        }
    }
}

fn constructed_ratio(name: &str) -> (VerdictKind, Rational) {
    let g = resolve(name).unwrap();
    let v = classify_theorem31(&g);
    let alpha = v.constructed_alpha.expect("a construction");
    let measured = cube_set(&g, &alpha, 3).unwrap().ratio;
    assert_eq!(v.predicted_ratio, Some(measured), "{name}");
    assert_eq!(max_cube_ratio(&g, 3).unwrap().ratio, measured, "{name}");
    (v.kind, measured)
}

#[test]
fn construction_ratios() {
    assert_eq!(constructed_ratio("s3"), (VerdictKind::TypeII, Rational::new(2, 3)));
    for name in ["t3i_1", "d4", "q8"] {
        assert_eq!(constructed_ratio(name), (VerdictKind::TypeIIIi, Rational::new(3, 4)));
    }
    assert_eq!(constructed_ratio("t3i_2"), (VerdictKind::TypeIIIi, Rational::new(5, 8)));
    assert_eq!(constructed_ratio("t3ii"), (VerdictKind::TypeIIIii, Rational::new(9, 16)));
    for n in (1..=64).filter(|n| n % 3 != 0) {
        assert_eq!(constructed_ratio(&format!("c{n}")), (VerdictKind::TypeI, Rational::new(1, 1)));
    }
}

#[test]
fn negatives_stay_at_or_below_one_half() {
    for name in ["a4", "s4", "c9", "c3xc3", "heis3", "c7:c3:2"] {
        let g = resolve(name).unwrap();
        assert_eq!(classify_theorem31(&g).kind, VerdictKind::None, "{name}");
        assert!(max_cube_ratio(&g, 3).unwrap().ratio <= Rational::new(1, 2), "{name}");
    }
}

#[test]
fn alternating_five_identity_attains_four_fifteenths() {
    let g = builders::alternating(5).unwrap();
    let m = max_cube_ratio(&g, 3).unwrap();
    assert_eq!(m.ratio, Rational::new(4, 15));
    assert_eq!(cube_members(&g, &cubing_core::automorphism::GroupMap::identity(60), 3).len(), 16);
}

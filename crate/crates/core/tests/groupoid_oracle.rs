use proptest::prelude::*;
use qlab_core::groupoid::{
    bisections, check_germ_opens_iso, find_isomorphism, germ_groupoid, opens_quantale,
    verify_isomorphism, FiniteGroupoid,
};
use qlab_core::pseudogroup::compatible_ideals;
use qlab_core::quantale::{check_axioms, classify, partial_units};
use qlab_core::Config;

/// Arrow sets on which `dom` and `cod` are injective, counted directly.
fn count_bisections(g: &FiniteGroupoid) -> usize {
    let m = g.arrows();
    (0usize..1 << m)
        .filter(|&u| {
            let arrows: Vec<usize> = (0..m).filter(|&a| u >> a & 1 == 1).collect();
            arrows.iter().all(|&a| {
                arrows.iter().all(|&b| a == b || (g.dom(a) != g.dom(b) && g.cod(a) != g.cod(b)))
            })
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `O(G)` is an inverse quantal frame whose partial units are the local
    /// bisections, and the germ groupoid of the bisections gives back `G`.
    #[test]
    fn opens_round_trip(seed: u64) {
        let cfg = Config::default();
        let g = FiniteGroupoid::random(seed, 8).unwrap();
        let o = opens_quantale(&g, &cfg).unwrap();
        prop_assert!(check_axioms(&o, &cfg).unwrap().passed());
        let r = classify(&o, &cfg).unwrap();
        for (name, flag) in r.flags() {
            prop_assert!(flag.holds(), "{}", name);
        }
        let (s, sets) = bisections(&o).unwrap();
        prop_assert_eq!(sets.len(), count_bisections(&g));
        prop_assert_eq!(&sets, &partial_units(&o, &cfg).unwrap());
        let germ = germ_groupoid(&s).unwrap();
        let iso = find_isomorphism(&germ.groupoid, &g);
        prop_assert!(iso.is_some());
        prop_assert!(verify_isomorphism(&germ.groupoid, &g, &iso.unwrap()));
        let c = compatible_ideals(&s, &cfg).unwrap();
        prop_assert_eq!(c.len(), 1 << g.arrows());
        let (_, rep) = check_germ_opens_iso(&germ, &c, &cfg).unwrap();
        prop_assert!(rep.passed());
    }
}

#[test]
fn pair_groupoid_bisections_are_partial_bijections() {
    let cfg = Config::default();
    let counts: Vec<usize> = (1..=3)
        .map(|n| bisections(&opens_quantale(&FiniteGroupoid::pair(n).unwrap(), &cfg).unwrap()).unwrap().1.len())
        .collect();
    assert_eq!(counts, [2, 7, 34]);
}

#[test]
fn non_isomorphic_groupoids() {
    let a = FiniteGroupoid::pair(2).unwrap();
    let b = FiniteGroupoid::group_times_pair(4, 1).unwrap();
    let c = FiniteGroupoid::discrete(4).unwrap();
    assert_eq!(a.arrows(), b.arrows());
    assert!(find_isomorphism(&a, &b).is_none());
    assert!(find_isomorphism(&a, &c).is_none());
    assert!(find_isomorphism(&b, &c).is_none());
}

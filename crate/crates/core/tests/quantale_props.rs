use proptest::prelude::*;
use qlab_core::enumerate::{involutive_quantales, random_lattice};
use qlab_core::lattice::is_frame;
use qlab_core::projection::{partial_units_rel_raw, pseudogroup_of, two_sided_below};
use qlab_core::quantale::{
    check_axioms, classify, is_projection, projections, two_sided, Quantale,
};
use qlab_core::{Config, Lattice, TableQuantale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small() -> &'static [TableQuantale] {
    use std::sync::OnceLock;
    static ALL: OnceLock<Vec<TableQuantale>> = OnceLock::new();
    ALL.get_or_init(|| involutive_quantales(4, &Config::default()).unwrap())
}

/// Every triple, in index order.
fn naive_first<Q: Quantale>(q: &Q, bad: impl Fn(usize, usize, usize) -> bool) -> Option<Vec<usize>> {
    let n = q.len();
    (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .find(|&(a, b, c)| bad(a, b, c))
        .map(|(a, b, c)| vec![a, b, c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Random tables, mostly not quantales: the axiom report must give the
    /// same least witnesses as a plain triple scan.
    #[test]
    fn axiom_witnesses_match_plain_scan(n in 1usize..=6, seed: u64, monotone: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_lattice(n, &mut rng);
        let mut mult: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()).collect();
        if monotone {
            // meet is always a join-preserving candidate on a distributive carrier
            mult = (0..n).map(|a| (0..n).map(|b| l.meet(a, b)).collect()).collect();
        }
        let inv: Vec<usize> = (0..n).collect();
        let q = TableQuantale::new(l, mult, inv, None).unwrap();
        let r = check_axioms(&q, &Config::default()).unwrap();
        let assoc = naive_first(&q, |a, b, c| q.mul(q.mul(a, b), c) != q.mul(a, q.mul(b, c)));
        let left = naive_first(&q, |a, b, c| q.mul(q.join(a, b), c) != q.join(q.mul(a, c), q.mul(b, c)));
        let right = naive_first(&q, |a, b, c| q.mul(c, q.join(a, b)) != q.join(q.mul(c, a), q.mul(c, b)));
        prop_assert_eq!(&r.get("mul_associative").unwrap().witness, &assoc);
        prop_assert_eq!(&r.get("mul_preserves_joins_left").unwrap().witness, &left);
        prop_assert_eq!(&r.get("mul_preserves_joins_right").unwrap().witness, &right);
        if monotone && is_frame(&q) {
            prop_assert!(r.passed());
        }
    }

    #[test]
    fn gelfand_hierarchy(i in 0usize..84) {
        let q = &small()[i];
        let r = classify(q, &Config::default()).unwrap();
        prop_assert!(!r.strongly_gelfand.holds() || r.stably_gelfand.holds());
        prop_assert!(!r.stably_gelfand.holds() || r.gelfand.holds());
        prop_assert!(!r.supported.holds() || r.unital.holds());
    }

    #[test]
    fn top_relative_units_are_two_sided(i in 0usize..84) {
        let q = &small()[i];
        let cfg = Config::default();
        prop_assert_eq!(partial_units_rel_raw(q, q.top(), &cfg).unwrap(), two_sided(q, &cfg).unwrap());
    }

    /// For stably Gelfand instances: each relative partial unit satisfies
    /// `s = sb = bs = ss*s`, idempotents are the two-sided elements below `b`,
    /// and localic iff `φ_b` is injective.
    #[test]
    fn projection_invariants(i in 0usize..84) {
        let q = &small()[i];
        let cfg = Config::default();
        let sg = classify(q, &cfg).unwrap().stably_gelfand.holds();
        for b in projections(q, &cfg).unwrap() {
            prop_assert!(is_projection(q, b));
            if !sg {
                prop_assert!(pseudogroup_of(q, b, &cfg).is_err());
                continue;
            }
            let d = pseudogroup_of(q, b, &cfg).unwrap();
            for &s in &d.partial_units_rel_b {
                prop_assert_eq!(q.mul(s, b), s);
                prop_assert_eq!(q.mul(b, s), s);
                prop_assert_eq!(q.mul(q.mul(s, q.star(s)), s), s);
            }
            let mut idem: Vec<usize> = d.semigroup.idempotents().into_iter().map(|i| d.element(i)).collect();
            idem.sort();
            prop_assert_eq!(idem, two_sided_below(q, b));
            prop_assert_eq!(d.localic, d.phi.is_injective());
        }
    }
}

#[test]
fn small_counts() {
    assert_eq!(small().len(), 84);
}

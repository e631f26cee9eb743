use proptest::prelude::*;
use qlab_core::enumerate::{lattices, random_lattice};
use qlab_core::lattice::{atoms, examples, frame_witness, is_atomic_boolean, is_frame};
use qlab_core::{FiniteLattice, Lattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice_from_seed(n: usize, seed: u64) -> FiniteLattice {
    random_lattice(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Least upper bound by scanning all upper bounds.
fn lub(l: &FiniteLattice, set: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = l.elements().filter(|&u| set.iter().all(|&s| l.leq(s, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| l.leq(u, v)))
}

proptest! {
    #[test]
    fn joins_are_least_upper_bounds(n in 1usize..=8, seed: u64) {
        let l = lattice_from_seed(n, seed);
        for mask in 0u32..1 << n {
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            prop_assert_eq!(Some(l.join_all(set.iter().copied())), lub(&l, &set));
        }
    }

    #[test]
    fn meets_are_dual(n in 1usize..=8, seed: u64) {
        let l = lattice_from_seed(n, seed);
        for a in 0..n {
            for b in 0..n {
                let m = l.meet(a, b);
                prop_assert!(l.leq(m, a) && l.leq(m, b));
                prop_assert!(l.elements().all(|x| !(l.leq(x, a) && l.leq(x, b)) || l.leq(x, m)));
            }
        }
    }

    #[test]
    fn frame_check_matches_brute_force(n in 1usize..=8, seed: u64) {
        let l = lattice_from_seed(n, seed);
        let brute = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| {
            l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c))
        })));
        prop_assert_eq!(is_frame(&l), brute);
        if let Some([a, b, c]) = frame_witness(&l) {
            prop_assert_ne!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
        }
    }
}

#[test]
fn atom_examples() {
    let p3 = examples::boolean(3);
    assert_eq!(atoms(&p3).len(), 3);
    assert!(is_atomic_boolean(&p3));
    let c3 = FiniteLattice::chain(3).unwrap();
    assert_eq!(atoms(&c3).len(), 1);
    assert!(!is_atomic_boolean(&c3));
    let m3 = examples::m3();
    assert_eq!(atoms(&m3).len(), 3);
    assert!(!is_atomic_boolean(&m3));
}

#[test]
fn small_lattices_up_to_isomorphism() {
    let counts: Vec<usize> = (1..=6).map(|n| lattices(n).len()).collect();
    assert_eq!(counts, [1, 1, 1, 2, 5, 15]);
    // the distributive ones among them
    let frames: Vec<usize> = (1..=6).map(|n| lattices(n).iter().filter(|l| is_frame(*l)).count()).collect();
    assert_eq!(frames, [1, 1, 1, 2, 3, 5]);
}

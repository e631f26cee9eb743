use crate::config::Config;
use crate::error::Result;
use crate::exhaust::{first_elem, first_pair, first_triple};
use crate::lattice::{is_frame, join_irreducibles};
use crate::report::LawReport;
use crate::Elem;

use super::Quantale;

/// Verifies the involutive quantale axioms exhaustively.
///
/// Join preservation is checked for binary joins and the empty join, which is
/// equivalent to preservation of arbitrary joins on a finite carrier. Every
/// failing law reports its least witness in index order.
///
/// On a distributive carrier the triple laws are decided through
/// join-irreducibles: there a map preserves joins iff it sends each element
/// to the join of its values on the join-irreducibles below, and a
/// join-preserving multiplication is associative iff it is on
/// join-irreducibles. A failure found this way is replaced by the least
/// witness from the full scan.
pub fn check_axioms<Q: Quantale>(q: &Q, cfg: &Config) -> Result<LawReport> {
    let n = q.len();
    cfg.ensure_triples("axiom check", n)?;
    let bot = q.bottom();
    let mut r = LawReport::new();
    let ji = if is_frame(q) { Some(join_irreducibles(q)) } else { None };
    let full_left = || {
        first_triple(n, |a, b, c| {
            q.mul(q.join(a, b), c) != q.join(q.mul(a, c), q.mul(b, c))
        })
    };
    let full_right = || {
        first_triple(n, |a, b, c| {
            q.mul(c, q.join(a, b)) != q.join(q.mul(c, a), q.mul(c, b))
        })
    };
    let full_assoc = || first_triple(n, |a, b, c| q.mul(q.mul(a, b), c) != q.mul(a, q.mul(b, c)));
    let (left, right, assoc) = match &ji {
        Some(ji) => {
            let below = |a: Elem| ji.iter().copied().filter(move |&j| q.leq(j, a));
            let left = first_pair(n, |a, c| q.mul(a, c) != q.join_all(below(a).map(|j| q.mul(j, c))))
                .and_then(|_| full_left());
            let right = first_pair(n, |a, c| q.mul(c, a) != q.join_all(below(a).map(|j| q.mul(c, j))))
                .and_then(|_| full_right());
            let k = ji.len();
            let assoc = if left.is_none() && right.is_none() {
                first_triple(k, |x, y, z| {
                    let (x, y, z) = (ji[x], ji[y], ji[z]);
                    q.mul(q.mul(x, y), z) != q.mul(x, q.mul(y, z))
                })
                .and_then(|_| full_assoc())
            } else {
                full_assoc()
            };
            (left, right, assoc)
        }
        None => (full_left(), full_right(), full_assoc()),
    };
    r.record("mul_associative", assoc);
    r.record("mul_preserves_joins_left", left);
    r.record("mul_preserves_joins_right", right);
    r.record(
        "mul_preserves_empty_join",
        first_elem(n, |a| q.mul(a, bot) != bot || q.mul(bot, a) != bot),
    );
    r.record("star_involutive", first_elem(n, |a| q.star(q.star(a)) != a));
    r.record(
        "star_reverses_products",
        first_pair(n, |a, b| q.star(q.mul(a, b)) != q.mul(q.star(b), q.star(a))),
    );
    r.record(
        "star_preserves_joins",
        first_pair(n, |a, b| q.star(q.join(a, b)) != q.join(q.star(a), q.star(b))),
    );
    r.record("star_preserves_empty_join", (q.star(bot) != bot).then_some(vec![bot]));
    if let Some(e) = q.unit() {
        r.record(
            "unit_left",
            first_elem(n, |a| q.mul(e, a) != a).map(|[a]| vec![e, a]),
        );
        r.record(
            "unit_right",
            first_elem(n, |a| q.mul(a, e) != a).map(|[a]| vec![a, e]),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use crate::quantale::examples::*;
    use crate::quantale::{RelQuantale, TableQuantale};
    use crate::Lattice;

    #[test]
    fn relation_quantales_pass() {
        for n in 0..=2 {
            let q = RelQuantale::new(n).unwrap();
            let r = check_axioms(&q, &Config::default()).unwrap();
            assert!(r.passed(), "{n}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn trivial_quantale_passes() {
        assert!(check_axioms(&TableQuantale::trivial(), &Config::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn non_associative_table_fails_with_replayable_witness() {
        // monotone and join-preserving on the 3-chain, but (1·1)·m = m ≠ 0 = 1·(1·m)
        let table = [[0, 0, 0], [0, 0, 0], [0, 1, 1]];
        let q = TableQuantale::from_fn(
            FiniteLattice::chain(3).unwrap(),
            |a, b| table[a][b],
            |a| a,
            None,
        )
        .unwrap();
        let r = check_axioms(&q, &Config::default()).unwrap();
        let w = r.get("mul_associative").unwrap().witness.clone().unwrap();
        let (a, b, c) = (w[0], w[1], w[2]);
        assert_ne!(q.mul(q.mul(a, b), c), q.mul(a, q.mul(b, c)));
        // least witness in index order: brute force over all triples
        let first = (0..3)
            .flat_map(|a| (0..3).flat_map(move |b| (0..3).map(move |c| [a, b, c])))
            .find(|&[a, b, c]| q.mul(q.mul(a, b), c) != q.mul(a, q.mul(b, c)))
            .unwrap();
        assert_eq!(w, first.to_vec());
    }

    #[test]
    fn m3_meet_is_not_join_preserving() {
        let q = m3_meet();
        let r = check_axioms(&q, &Config::default()).unwrap();
        assert!(r.get("mul_associative").unwrap().holds());
        assert!(!r.get("mul_preserves_joins_left").unwrap().holds());
    }

    #[test]
    fn fixtures_are_quantales() {
        for q in [two_chain_frame(), nilpotent_three_chain(), m3_saturating()] {
            let r = check_axioms(&q, &Config::default()).unwrap();
            assert!(r.passed(), "{:?}", r.first_failure());
        }
        let _ = m3_saturating().top();
    }

    #[test]
    fn refuses_beyond_the_triple_bound() {
        let q = RelQuantale::new(4).unwrap();
        assert!(matches!(
            check_axioms(&q, &Config::default()),
            Err(crate::Error::Resource { .. })
        ));
    }
}

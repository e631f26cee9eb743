//! Homomorphisms between quantales given as value tables.

use crate::error::{Error, Result};
use crate::exhaust::{first_elem, first_pair};
use crate::report::LawReport;
use crate::Elem;

use super::Quantale;

/// Checks that `f: src → dst` preserves binary and empty joins,
/// multiplication and the involution, and the unit when `unital` is set.
pub fn check_homomorphism<A: Quantale, B: Quantale>(
    src: &A,
    dst: &B,
    f: &[Elem],
    unital: bool,
) -> Result<LawReport> {
    if f.len() != src.len() {
        return Err(Error::input(format!(
            "map has {} values for a source of {} elements",
            f.len(),
            src.len()
        )));
    }
    if let Some(v) = f.iter().find(|&&v| v >= dst.len()) {
        return Err(Error::input(format!(
            "map value {v} outside a target of {} elements",
            dst.len()
        )));
    }
    let n = src.len();
    let mut r = LawReport::new();
    r.record(
        "preserves_joins",
        first_pair(n, |a, b| f[src.join(a, b)] != dst.join(f[a], f[b])),
    );
    r.record(
        "preserves_bottom",
        (f[src.bottom()] != dst.bottom()).then(|| vec![src.bottom()]),
    );
    r.record(
        "preserves_mul",
        first_pair(n, |a, b| f[src.mul(a, b)] != dst.mul(f[a], f[b])),
    );
    r.record("preserves_star", first_elem(n, |a| f[src.star(a)] != dst.star(f[a])));
    if unital {
        let w = match (src.unit(), dst.unit()) {
            (Some(e), Some(e2)) => (f[e] != e2).then(|| vec![e]),
            _ => Some(vec![]),
        };
        r.record("preserves_unit", w);
    }
    Ok(r)
}

/// Checks that `f` is a bijective homomorphism that also reflects the order,
/// preserving the unit when both sides have one.
pub fn check_isomorphism<A: Quantale, B: Quantale>(
    src: &A,
    dst: &B,
    f: &[Elem],
) -> Result<LawReport> {
    let unital = src.unit().is_some() || dst.unit().is_some();
    let mut r = check_homomorphism(src, dst, f, unital)?;
    r.record(
        "bijective",
        if src.len() != dst.len() {
            Some(vec![])
        } else {
            inverse_map(f, dst.len()).is_none().then(|| {
                // least element sharing its image with an earlier one
                let mut seen = vec![usize::MAX; dst.len()];
                let dup = f
                    .iter()
                    .enumerate()
                    .find_map(|(a, &v)| {
                        if seen[v] != usize::MAX {
                            Some(vec![seen[v], a])
                        } else {
                            seen[v] = a;
                            None
                        }
                    });
                dup.unwrap_or_default()
            })
        },
    );
    r.record(
        "reflects_order",
        first_pair(src.len(), |a, b| dst.leq(f[a], f[b]) && !src.leq(a, b)),
    );
    Ok(r)
}

/// Inverse of a bijection `0..f.len() → 0..m`.
pub fn inverse_map(f: &[Elem], m: usize) -> Option<Vec<Elem>> {
    if f.len() != m {
        return None;
    }
    let mut inv = vec![usize::MAX; m];
    for (a, &v) in f.iter().enumerate() {
        if v >= m || inv[v] != usize::MAX {
            return None;
        }
        inv[v] = a;
    }
    Some(inv)
}

pub fn is_injective(f: &[Elem]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(f.len());
    f.iter().all(|v| seen.insert(*v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::quantale::{RelQuantale, TableQuantale};
    use crate::Lattice;

    #[test]
    fn identity_is_an_isomorphism() {
        let q = RelQuantale::new(2).unwrap();
        let id: Vec<_> = q.elements().collect();
        assert!(check_isomorphism(&q, &q, &id).unwrap().passed());
        let t = TableQuantale::materialize(&q, &Config::default()).unwrap();
        assert!(check_isomorphism(&q, &t, &id).unwrap().passed());
    }

    #[test]
    fn converse_is_not_a_homomorphism() {
        // a ↦ a* preserves joins and the involution but reverses products
        let q = RelQuantale::new(2).unwrap();
        let conv: Vec<_> = q.elements().map(|a| q.star(a)).collect();
        let r = check_homomorphism(&q, &q, &conv, true).unwrap();
        assert!(r.get("preserves_joins").unwrap().holds());
        let [a, b] = <[Elem; 2]>::try_from(r.get("preserves_mul").unwrap().witness.clone().unwrap()).unwrap();
        assert_ne!(conv[q.mul(a, b)], q.mul(conv[a], conv[b]));
    }

    #[test]
    fn constant_zero_is_a_non_unital_homomorphism() {
        let q = RelQuantale::new(2).unwrap();
        let zero = vec![0; 16];
        assert!(check_homomorphism(&q, &q, &zero, false).unwrap().passed());
        assert!(!check_homomorphism(&q, &q, &zero, true).unwrap().passed());
        assert!(!check_isomorphism(&q, &q, &zero).unwrap().passed());
    }

    #[test]
    fn inverse_of_permutation() {
        assert_eq!(inverse_map(&[2, 0, 1], 3), Some(vec![1, 2, 0]));
        assert_eq!(inverse_map(&[0, 0, 1], 3), None);
        assert!(is_injective(&[3, 1, 2]));
        assert!(!is_injective(&[3, 1, 3]));
    }
}

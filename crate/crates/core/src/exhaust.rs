//! Parallel exhaustive search that always reports the least witness in index
//! order, so results do not depend on scheduling.

use rayon::prelude::*;

use crate::Elem;

pub(crate) fn first_elem(n: usize, bad: impl Fn(Elem) -> bool + Sync) -> Option<[Elem; 1]> {
    (0..n).into_par_iter().find_first(|&a| bad(a)).map(|a| [a])
}

pub(crate) fn first_pair(n: usize, bad: impl Fn(Elem, Elem) -> bool + Sync) -> Option<[Elem; 2]> {
    first_pair_in(n, n, bad)
}

pub(crate) fn first_pair_in(
    n: usize,
    m: usize,
    bad: impl Fn(Elem, Elem) -> bool + Sync,
) -> Option<[Elem; 2]> {
    (0..n)
        .into_par_iter()
        .find_map_first(|a| (0..m).find(|&b| bad(a, b)).map(|b| [a, b]))
}

pub(crate) fn first_triple(
    n: usize,
    bad: impl Fn(Elem, Elem, Elem) -> bool + Sync,
) -> Option<[Elem; 3]> {
    (0..n).into_par_iter().find_map_first(|a| {
        for b in 0..n {
            for c in 0..n {
                if bad(a, b, c) {
                    return Some([a, b, c]);
                }
            }
        }
        None
    })
}

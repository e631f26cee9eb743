//! Finite complete lattices.
//!
//! A [`Lattice`] is anything with a finite carrier `0..len()`, a partial order
//! and binary joins and meets. Joins and meets of arbitrary subsets are folds
//! from the bottom and the top respectively, which is exact for finite
//! carriers.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::Elem;

pub trait Lattice: Send + Sync {
    fn len(&self) -> usize;
    fn leq(&self, a: Elem, b: Elem) -> bool;
    fn join(&self, a: Elem, b: Elem) -> Elem;
    fn meet(&self, a: Elem, b: Elem) -> Elem;
    fn bottom(&self) -> Elem;
    fn top(&self) -> Elem;

    fn label(&self, a: Elem) -> String {
        a.to_string()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem
    where
        Self: Sized,
    {
        it.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem
    where
        Self: Sized,
    {
        it.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }
}

/// Join of a subset given by index, rejecting indices outside the carrier.
pub fn join_checked<L: Lattice>(l: &L, set: &[Elem]) -> Result<Elem> {
    check_indices(l, set)?;
    Ok(l.join_all(set.iter().copied()))
}

/// Meet of a subset given by index, rejecting indices outside the carrier.
pub fn meet_checked<L: Lattice>(l: &L, set: &[Elem]) -> Result<Elem> {
    check_indices(l, set)?;
    Ok(l.meet_all(set.iter().copied()))
}

fn check_indices<L: Lattice>(l: &L, set: &[Elem]) -> Result<()> {
    match set.iter().find(|&&a| a >= l.len()) {
        Some(a) => Err(Error::input(format!(
            "element index {a} out of range for a carrier of {} elements",
            l.len()
        ))),
        None => Ok(()),
    }
}

/// First triple `(a, b, c)` in index order with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
///
/// In a finite lattice binary distributivity is equivalent to the frame law
/// `a ∧ ∨Y = ∨{a ∧ y}`; the empty case `a ∧ 0 = 0` holds in every lattice.
pub fn frame_witness<L: Lattice>(l: &L) -> Option<[Elem; 3]> {
    let n = l.len();
    (0..n).into_par_iter().find_map_first(|a| {
        for b in 0..n {
            let ab = l.meet(a, b);
            for c in 0..n {
                let lhs = l.meet(a, l.join(b, c));
                let rhs = l.join(ab, l.meet(a, c));
                if lhs != rhs {
                    return Some([a, b, c]);
                }
            }
        }
        None
    })
}

pub fn is_frame<L: Lattice>(l: &L) -> bool {
    frame_witness(l).is_none()
}

/// Nonzero elements that are not the join of the elements strictly below.
pub fn join_irreducibles<L: Lattice>(l: &L) -> Vec<Elem> {
    let bot = l.bottom();
    l.elements()
        .filter(|&j| j != bot && l.join_all(l.elements().filter(|&x| x != j && l.leq(x, j))) != j)
        .collect()
}

/// Minimal elements strictly above the bottom.
pub fn atoms<L: Lattice>(l: &L) -> Vec<Elem> {
    let bot = l.bottom();
    l.elements()
        .filter(|&a| a != bot)
        .filter(|&a| l.elements().all(|x| x == bot || x == a || !l.leq(x, a)))
        .collect()
}

/// True iff `l` is order-isomorphic to the powerset of its atoms.
pub fn is_atomic_boolean<L: Lattice>(l: &L) -> bool {
    let atoms = atoms(l);
    if atoms.len() >= usize::BITS as usize - 1 || l.len() != 1usize << atoms.len() {
        return false;
    }
    let mask = |a: Elem| -> usize {
        atoms
            .iter()
            .enumerate()
            .filter(|&(_, &x)| l.leq(x, a))
            .fold(0, |m, (i, _)| m | (1 << i))
    };
    let masks: Vec<usize> = l.elements().map(mask).collect();
    let mut seen = vec![false; l.len()];
    for &m in &masks {
        if seen[m] {
            return false;
        }
        seen[m] = true;
    }
    l.elements().all(|a| {
        l.elements()
            .all(|b| l.leq(a, b) == (masks[a] & !masks[b] == 0))
    })
}

/// The lattice of all subsets of a `bits`-element set. The element index is the
/// subset's bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowersetLattice {
    bits: u32,
}

impl PowersetLattice {
    pub fn new(bits: u32) -> Result<Self> {
        if bits >= 32 {
            return Err(Error::input(format!(
                "powerset of a {bits}-element set is too large to index"
            )));
        }
        Ok(PowersetLattice { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

impl Lattice for PowersetLattice {
    fn len(&self) -> usize {
        1 << self.bits
    }
    fn leq(&self, a: Elem, b: Elem) -> bool {
        a & !b == 0
    }
    fn join(&self, a: Elem, b: Elem) -> Elem {
        a | b
    }
    fn meet(&self, a: Elem, b: Elem) -> Elem {
        a & b
    }
    fn bottom(&self) -> Elem {
        0
    }
    fn top(&self) -> Elem {
        (1 << self.bits) - 1
    }
}

/// A finite lattice given by its order relation on `0..n`.
///
/// The order is held as up-set and down-set bit rows. Joins and meets are
/// tabulated when `n` does not exceed the table threshold and computed from the
/// rows otherwise.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    bottom: Elem,
    top: Elem,
    tables: Option<Tables>,
}

#[derive(Debug, Clone)]
struct Tables {
    join: Vec<u32>,
    meet: Vec<u32>,
}

pub const DEFAULT_TABLE_THRESHOLD: usize = 1024;

impl FiniteLattice {
    /// Builds a lattice from an order predicate, validating that it is a
    /// partial order in which every pair has a join and a meet.
    pub fn from_leq(n: usize, leq: impl Fn(Elem, Elem) -> bool) -> Result<Self> {
        Self::from_leq_with_threshold(n, leq, DEFAULT_TABLE_THRESHOLD)
    }

    pub fn from_leq_with_threshold(
        n: usize,
        leq: impl Fn(Elem, Elem) -> bool,
        table_threshold: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("a lattice needs at least one element"));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::input(format!("order is not reflexive at {a}")));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::input(format!(
                        "order is not antisymmetric: {a} <= {b} <= {a}"
                    )));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::input(format!(
                        "order is not transitive above {a} <= {b}"
                    )));
                }
            }
        }
        let bottom = (0..n)
            .find(|&a| up[a].count_ones(..) == n)
            .ok_or_else(|| Error::input("order has no bottom element"))?;
        let top = (0..n)
            .find(|&a| down[a].count_ones(..) == n)
            .ok_or_else(|| Error::input("order has no top element"))?;
        let mut lattice = FiniteLattice {
            n,
            up,
            down,
            bottom,
            top,
            tables: None,
        };
        let mut join = Vec::with_capacity(if n <= table_threshold { n * n } else { 0 });
        let mut meet = Vec::with_capacity(join.capacity());
        for a in 0..n {
            for b in 0..n {
                let j = lattice
                    .compute_join(a, b)
                    .ok_or_else(|| Error::input(format!("elements {a} and {b} have no join")))?;
                let m = lattice
                    .compute_meet(a, b)
                    .ok_or_else(|| Error::input(format!("elements {a} and {b} have no meet")))?;
                if n <= table_threshold {
                    join.push(j as u32);
                    meet.push(m as u32);
                }
            }
        }
        if n <= table_threshold {
            lattice.tables = Some(Tables { join, meet });
        }
        Ok(lattice)
    }

    /// Builds a lattice from cover (or any generating) pairs `a <= b`, taking
    /// the reflexive-transitive closure.
    pub fn from_covers(n: usize, pairs: &[(Elem, Elem)]) -> Result<Self> {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::input(format!(
                "order pair ({a}, {b}) names an element outside 0..{n}"
            )));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            row.insert(a);
        }
        for &(a, b) in pairs {
            up[a].insert(b);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_leq(n, |a, b| up[a].contains(b))
    }

    /// Chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::from_leq(n, |a, b| a <= b)
    }

    /// The subposet of `l` on `elems`, which must itself be a lattice.
    pub fn induced<L: Lattice>(l: &L, elems: &[Elem]) -> Result<Self> {
        Self::from_leq(elems.len(), |i, j| l.leq(elems[i], elems[j]))
    }

    /// `{x : a <= x}`.
    pub fn up_set(&self, a: Elem) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{x : x <= a}`.
    pub fn down_set(&self, a: Elem) -> &FixedBitSet {
        &self.down[a]
    }

    /// Pairs `(a, b)` with `b` covering `a`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.up[a].ones() {
                if b == a {
                    continue;
                }
                // b covers a iff nothing lies strictly between.
                let mut between = self.up[a].clone();
                between.intersect_with(&self.down[b]);
                if between.count_ones(..) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Least common upper bound, if one exists.
    fn compute_join(&self, a: Elem, b: Elem) -> Option<Elem> {
        let mut ub = self.up[a].clone();
        ub.intersect_with(&self.up[b]);
        let cand = ub.ones().min_by_key(|&x| self.down[x].count_ones(..))?;
        ub.is_subset(&self.up[cand]).then_some(cand)
    }

    fn compute_meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        let mut lb = self.down[a].clone();
        lb.intersect_with(&self.down[b]);
        let cand = lb.ones().min_by_key(|&x| self.up[x].count_ones(..))?;
        lb.is_subset(&self.down[cand]).then_some(cand)
    }
}

impl Lattice for FiniteLattice {
    fn len(&self) -> usize {
        self.n
    }
    fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }
    fn join(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.join[a * self.n + b] as Elem,
            None => self.compute_join(a, b).expect("validated lattice"),
        }
    }
    fn meet(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.meet[a * self.n + b] as Elem,
            None => self.compute_meet(a, b).expect("validated lattice"),
        }
    }
    fn bottom(&self) -> Elem {
        self.bottom
    }
    fn top(&self) -> Elem {
        self.top
    }
}

/// Standard small lattices used as fixtures.
pub mod examples {
    use super::FiniteLattice;

    /// The diamond `M3`: bottom 0, atoms 1..=3, top 4.
    pub fn m3() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("M3 is a lattice")
    }

    /// The pentagon `N5`: 0 < 1 < 2 < 4 and 0 < 3 < 4.
    pub fn n5() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("N5 is a lattice")
    }

    /// Powerset of a `k`-set as a table lattice, index = bitmask.
    pub fn boolean(k: u32) -> FiniteLattice {
        FiniteLattice::from_leq(1 << k, |a, b| a & !b == 0).expect("powerset is a lattice")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn empty_join_is_bottom_and_empty_meet_is_top() {
        let l = m3();
        assert_eq!(join_checked(&l, &[]).unwrap(), l.bottom());
        assert_eq!(meet_checked(&l, &[]).unwrap(), l.top());
    }

    #[test]
    fn powerset_join_is_union() {
        let l = boolean(2);
        assert_eq!(join_checked(&l, &[0b01, 0b10]).unwrap(), 0b11);
        let p = PowersetLattice::new(2).unwrap();
        assert_eq!(p.join_all([0b01, 0b10]), 0b11);
    }

    #[test]
    fn m3_atoms_join_to_top() {
        let l = m3();
        // brute force: least element above both atoms
        let ub: Vec<_> = (0..5).filter(|&x| l.leq(1, x) && l.leq(2, x)).collect();
        let least = *ub.iter().find(|&&x| ub.iter().all(|&y| l.leq(x, y))).unwrap();
        assert_eq!(least, 4);
        assert_eq!(join_checked(&l, &[1, 2]).unwrap(), 4);
        assert_eq!(join_checked(&l, &[1, 3]).unwrap(), 4);
    }

    #[test]
    fn out_of_range_index_is_an_input_error() {
        let l = m3();
        assert!(matches!(join_checked(&l, &[7]), Err(Error::Input(_))));
    }

    #[test]
    fn frames() {
        assert!(is_frame(&boolean(3)));
        assert!(is_frame(&FiniteLattice::chain(2).unwrap()));
        assert!(is_frame(&PowersetLattice::new(3).unwrap()));
        assert!(!is_frame(&m3()));
        assert!(!is_frame(&n5()));
    }

    #[test]
    fn m3_frame_witness_is_a_real_failure() {
        let l = m3();
        let [a, b, c] = frame_witness(&l).unwrap();
        assert_ne!(
            l.meet(a, l.join(b, c)),
            l.join(l.meet(a, b), l.meet(a, c))
        );
    }

    #[test]
    fn atoms_and_booleanness() {
        let p = boolean(3);
        assert_eq!(atoms(&p), vec![1, 2, 4]);
        assert!(is_atomic_boolean(&p));
        let c = FiniteLattice::chain(3).unwrap();
        assert_eq!(atoms(&c).len(), 1);
        assert!(!is_atomic_boolean(&c));
        let m = m3();
        assert_eq!(atoms(&m), vec![1, 2, 3]);
        assert!(!is_atomic_boolean(&m));
        assert!(is_atomic_boolean(&FiniteLattice::chain(1).unwrap()));
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements
        assert!(FiniteLattice::from_covers(3, &[(0, 1), (0, 2)]).is_err());
        assert!(FiniteLattice::from_covers(2, &[(0, 1), (1, 0)]).is_err());
        assert!(FiniteLattice::from_leq(0, |_, _| true).is_err());
        assert!(FiniteLattice::from_leq(2, |a, b| a == 0 || b == 1 && a == 0).is_err());
    }

    #[test]
    fn untabulated_lattice_agrees_with_tables() {
        let a = FiniteLattice::from_leq_with_threshold(16, |a, b| a & !b == 0, 0).unwrap();
        let b = boolean(4);
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(a.join(x, y), b.join(x, y));
                assert_eq!(a.meet(x, y), b.meet(x, y));
            }
        }
    }

    #[test]
    fn covers_of_m3() {
        assert_eq!(
            m3().covers(),
            vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]
        );
    }
}

//! Involutive quantales over finite lattices.
//!
//! [`TableQuantale`] stores its operations explicitly. [`RelQuantale`] is the
//! quantale of all binary relations on `{0, .., n-1}`; its operations are
//! computed on bit-encoded relations and nothing is tabulated, so carriers
//! with tens of thousands of elements cost nothing to hold.

mod class;
pub mod hom;
mod laws;

pub use class::*;
pub use hom::{check_homomorphism, check_isomorphism};
pub use laws::check_axioms;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, Lattice, PowersetLattice};
use crate::Elem;

/// A finite involutive quantale: a lattice with an associative multiplication
/// preserving joins in each argument and an involution reversing products.
///
/// Implementations are not required to satisfy the axioms; see
/// [`check_axioms`].
pub trait Quantale: Lattice {
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn star(&self, a: Elem) -> Elem;
    fn unit(&self) -> Option<Elem>;
}

/// A quantale given by operation tables over a [`FiniteLattice`].
#[derive(Debug, Clone)]
pub struct TableQuantale {
    lattice: FiniteLattice,
    mult: Vec<u32>,
    inv: Vec<u32>,
    unit: Option<Elem>,
    labels: Option<Vec<String>>,
}

impl TableQuantale {
    /// Wraps explicit tables, checking only that they are total and in range.
    pub fn new(
        lattice: FiniteLattice,
        mult: Vec<Vec<Elem>>,
        inv: Vec<Elem>,
        unit: Option<Elem>,
    ) -> Result<Self> {
        let n = lattice.len();
        if mult.len() != n {
            return Err(Error::input(format!(
                "multiplication table has {} rows, expected {n}",
                mult.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "multiplication row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::input(format!(
                        "product of {a} and {b} is {v}, outside 0..{n}"
                    )));
                }
                flat.push(v as u32);
            }
        }
        if inv.len() != n {
            return Err(Error::input(format!(
                "involution has {} entries, expected {n}",
                inv.len()
            )));
        }
        if let Some(v) = inv.iter().find(|&&v| v >= n) {
            return Err(Error::input(format!("involution value {v} outside 0..{n}")));
        }
        if let Some(e) = unit.filter(|&e| e >= n) {
            return Err(Error::input(format!("unit {e} outside 0..{n}")));
        }
        Ok(TableQuantale {
            lattice,
            mult: flat,
            inv: inv.into_iter().map(|v| v as u32).collect(),
            unit,
            labels: None,
        })
    }

    pub fn from_fn(
        lattice: FiniteLattice,
        mul: impl Fn(Elem, Elem) -> Elem,
        star: impl Fn(Elem) -> Elem,
        unit: Option<Elem>,
    ) -> Result<Self> {
        let n = lattice.len();
        let mult = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        let inv = (0..n).map(star).collect();
        Self::new(lattice, mult, inv, unit)
    }

    /// Copies any quantale into explicit tables.
    pub fn materialize<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Self> {
        cfg.ensure_table("materialized quantale", q.len())?;
        let lattice = FiniteLattice::from_leq_with_threshold(
            q.len(),
            |a, b| q.leq(a, b),
            cfg.lattice_table_threshold,
        )?;
        let labels = q.elements().map(|a| q.label(a)).collect();
        Ok(Self::from_fn(lattice, |a, b| q.mul(a, b), |a| q.star(a), q.unit())?.with_labels(labels))
    }

    /// The one-element quantale.
    pub fn trivial() -> Self {
        Self::from_fn(FiniteLattice::chain(1).unwrap(), |_, _| 0, |_| 0, Some(0)).unwrap()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.len() {
            self.labels = Some(labels);
        }
        self
    }

    /// Replaces the declared unit by the element acting as a two-sided unit,
    /// if one exists.
    pub fn with_detected_unit(mut self) -> Self {
        self.unit = detect_unit(&self);
        self
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

impl Lattice for TableQuantale {
    fn len(&self) -> usize {
        self.lattice.len()
    }
    fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice.leq(a, b)
    }
    fn join(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.join(a, b)
    }
    fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.meet(a, b)
    }
    fn bottom(&self) -> Elem {
        self.lattice.bottom()
    }
    fn top(&self) -> Elem {
        self.lattice.top()
    }
    fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }
}

impl Quantale for TableQuantale {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.len() + b] as Elem
    }
    fn star(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }
    fn unit(&self) -> Option<Elem> {
        self.unit
    }
}

/// The element `e` with `ea = ae = a` for every `a`, if any.
pub fn detect_unit<Q: Quantale>(q: &Q) -> Option<Elem> {
    q.elements()
        .find(|&e| q.elements().all(|a| q.mul(e, a) == a && q.mul(a, e) == a))
}

/// The quantale `2^(X×X)` of binary relations on `X = {0, .., n-1}`.
///
/// A relation is encoded as a bitmask whose bit `z*n + x` is set iff the pair
/// `(z, x)` belongs to it; the bitmask is also the element index. Composition
/// follows `RS = {(z, x) : (z, y) ∈ R and (y, x) ∈ S for some y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelQuantale {
    n: usize,
    powerset: PowersetLattice,
}

/// Relations on sets larger than this are not indexable as `usize` bitmasks in
/// a useful range.
pub const MAX_REL_POINTS: usize = 5;

impl RelQuantale {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_REL_POINTS {
            return Err(Error::input(format!(
                "relation quantale on {n} points exceeds the supported {MAX_REL_POINTS}"
            )));
        }
        Ok(RelQuantale {
            n,
            powerset: PowersetLattice::new((n * n) as u32)?,
        })
    }

    /// Number of points of the underlying set.
    pub fn points(&self) -> usize {
        self.n
    }

    pub fn pair(&self, z: usize, x: usize) -> Elem {
        1 << (z * self.n + x)
    }

    pub fn from_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Elem {
        pairs.into_iter().fold(0, |acc, (z, x)| acc | self.pair(z, x))
    }

    pub fn contains(&self, r: Elem, z: usize, x: usize) -> bool {
        r & self.pair(z, x) != 0
    }

    pub fn pairs(&self, r: Elem) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n * n)
            .filter(|&i| r >> i & 1 == 1)
            .map(|i| (i / n, i % n))
            .collect()
    }

    /// `Δ_Y` for the points set in `ymask`.
    pub fn diagonal_on(&self, ymask: usize) -> Elem {
        self.from_pairs((0..self.n).filter(|&y| ymask >> y & 1 == 1).map(|y| (y, y)))
    }

    /// `Y × Y` for the points set in `ymask`.
    pub fn square_on(&self, ymask: usize) -> Elem {
        let ys: Vec<usize> = (0..self.n).filter(|&y| ymask >> y & 1 == 1).collect();
        self.from_pairs(ys.iter().flat_map(|&z| ys.iter().map(move |&x| (z, x))))
    }

    fn row(&self, r: Elem, z: usize) -> Elem {
        (r >> (z * self.n)) & ((1 << self.n) - 1)
    }
}

impl Lattice for RelQuantale {
    fn len(&self) -> usize {
        self.powerset.len()
    }
    fn leq(&self, a: Elem, b: Elem) -> bool {
        self.powerset.leq(a, b)
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
        self.powerset.top()
    }
    fn label(&self, a: Elem) -> String {
        let body: Vec<String> = self
            .pairs(a)
            .into_iter()
            .map(|(z, x)| format!("({z},{x})"))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

impl Quantale for RelQuantale {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let n = self.n;
        let mut out = 0;
        for z in 0..n {
            let mut ys = self.row(a, z);
            let mut row = 0;
            while ys != 0 {
                let y = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                row |= self.row(b, y);
            }
            out |= row << (z * n);
        }
        out
    }

    fn star(&self, a: Elem) -> Elem {
        let n = self.n;
        let mut out = 0;
        let mut bits = a;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1 << ((i % n) * n + i / n);
        }
        out
    }

    fn unit(&self) -> Option<Elem> {
        Some(self.diagonal_on((1 << self.n) - 1))
    }
}

/// Either realization behind one type, for callers that pick at run time.
#[derive(Debug, Clone)]
pub enum AnyQuantale {
    Table(TableQuantale),
    Rel(RelQuantale),
    Opens(crate::groupoid::OpensQuantale),
}

macro_rules! delegate {
    ($self:ident, $q:ident => $e:expr) => {
        match $self {
            AnyQuantale::Table($q) => $e,
            AnyQuantale::Rel($q) => $e,
            AnyQuantale::Opens($q) => $e,
        }
    };
}

impl Lattice for AnyQuantale {
    fn len(&self) -> usize {
        delegate!(self, q => q.len())
    }
    fn leq(&self, a: Elem, b: Elem) -> bool {
        delegate!(self, q => q.leq(a, b))
    }
    fn join(&self, a: Elem, b: Elem) -> Elem {
        delegate!(self, q => q.join(a, b))
    }
    fn meet(&self, a: Elem, b: Elem) -> Elem {
        delegate!(self, q => q.meet(a, b))
    }
    fn bottom(&self) -> Elem {
        delegate!(self, q => q.bottom())
    }
    fn top(&self) -> Elem {
        delegate!(self, q => q.top())
    }
    fn label(&self, a: Elem) -> String {
        delegate!(self, q => q.label(a))
    }
}

impl Quantale for AnyQuantale {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        delegate!(self, q => q.mul(a, b))
    }
    fn star(&self, a: Elem) -> Elem {
        delegate!(self, q => q.star(a))
    }
    fn unit(&self) -> Option<Elem> {
        delegate!(self, q => q.unit())
    }
}

/// Small hand-built quantales used across the test suites.
pub mod examples {
    use super::*;
    use crate::lattice::examples::m3;

    /// The 2-chain `{0, 1}` with `mul = ∧`, trivial involution and unit `1`.
    pub fn two_chain_frame() -> TableQuantale {
        TableQuantale::from_fn(
            FiniteLattice::chain(2).unwrap(),
            |a, b| a.min(b),
            |a| a,
            Some(1),
        )
        .unwrap()
        .with_labels(vec!["0".into(), "1".into()])
    }

    /// The 3-chain `{0 < m < 1}` with `m·m = 0`, unit `1` and identity
    /// involution.
    pub fn nilpotent_three_chain() -> TableQuantale {
        let table = [[0, 0, 0], [0, 0, 1], [0, 1, 2]];
        TableQuantale::from_fn(
            FiniteLattice::chain(3).unwrap(),
            |a, b| table[a][b],
            |a| a,
            Some(2),
        )
        .unwrap()
        .with_labels(vec!["0".into(), "m".into(), "1".into()])
    }

    /// `M3` with `mul = ∧` and trivial involution. Associative and unital but
    /// multiplication does not distribute over joins.
    pub fn m3_meet() -> TableQuantale {
        let l = m3();
        let l2 = l.clone();
        TableQuantale::from_fn(l, move |a, b| l2.meet(a, b), |a| a, Some(4)).unwrap()
    }

    /// `M3` with the multiplication that is `0` on `0` and `1` otherwise.
    /// A valid involutive quantale whose lattice is not a frame.
    pub fn m3_saturating() -> TableQuantale {
        TableQuantale::from_fn(
            m3(),
            |a, b| if a == 0 || b == 0 { 0 } else { 4 },
            |a| a,
            None,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_quantale_shape() {
        let q = RelQuantale::new(2).unwrap();
        assert_eq!(q.len(), 16);
        assert_eq!(q.unit(), Some(q.from_pairs([(0, 0), (1, 1)])));
        assert_eq!(q.label(q.unit().unwrap()), "{(0,0),(1,1)}");
    }

    #[test]
    fn composition_formula() {
        let q = RelQuantale::new(3).unwrap();
        for z in 0..3 {
            for y in 0..3 {
                for x in 0..3 {
                    assert_eq!(q.mul(q.pair(z, y), q.pair(y, x)), q.pair(z, x));
                    for y2 in (0..3).filter(|&y2| y2 != y) {
                        assert_eq!(q.mul(q.pair(z, y), q.pair(y2, x)), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn converse() {
        let q = RelQuantale::new(3).unwrap();
        assert_eq!(q.star(q.pair(0, 2)), q.pair(2, 0));
        let r = q.from_pairs([(0, 1), (1, 2), (2, 2)]);
        assert_eq!(q.star(r), q.from_pairs([(1, 0), (2, 1), (2, 2)]));
    }

    #[test]
    fn composition_matches_pairwise_definition() {
        // direct set-comprehension oracle over all pairs of relations on 2 points
        let q = RelQuantale::new(2).unwrap();
        for r in 0..16 {
            for s in 0..16 {
                let mut expect = 0;
                for z in 0..2 {
                    for x in 0..2 {
                        if (0..2).any(|y| q.contains(r, z, y) && q.contains(s, y, x)) {
                            expect |= q.pair(z, x);
                        }
                    }
                }
                assert_eq!(q.mul(r, s), expect, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn malformed_tables_are_input_errors() {
        let l = FiniteLattice::chain(2).unwrap();
        assert!(TableQuantale::new(l.clone(), vec![vec![0, 0]], vec![0, 1], None).is_err());
        assert!(TableQuantale::new(l.clone(), vec![vec![0, 0], vec![0, 5]], vec![0, 1], None).is_err());
        assert!(TableQuantale::new(l.clone(), vec![vec![0, 0], vec![0, 1]], vec![0], None).is_err());
        assert!(TableQuantale::new(l, vec![vec![0, 0], vec![0, 1]], vec![0, 1], Some(2)).is_err());
    }

    #[test]
    fn materialize_preserves_operations() {
        let q = RelQuantale::new(2).unwrap();
        let t = TableQuantale::materialize(&q, &Config::default()).unwrap();
        for a in 0..16 {
            assert_eq!(t.star(a), q.star(a));
            for b in 0..16 {
                assert_eq!(t.mul(a, b), q.mul(a, b));
                assert_eq!(t.join(a, b), q.join(a, b));
            }
        }
        assert_eq!(t.unit(), q.unit());
        assert_eq!(detect_unit(&t), q.unit());
    }
}

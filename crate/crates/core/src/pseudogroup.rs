//! Finite inverse semigroups, pseudogroups and their quantale completions.
//!
//! The natural order is `s <= t` iff `s = t·s⁻¹s`, and `s, t` are compatible
//! iff `s⁻¹t` and `st⁻¹` are idempotent. On a finite inverse semigroup every
//! compatible subset has a join and multiplication distributes over such
//! joins exactly when this holds for the empty subset and for compatible
//! pairs, and a join of a compatible pair stays compatible with everything
//! compatible with both members: joins of larger subsets are then iterated
//! binary joins. All checks below use that reduction.
//!
//! The completion `L∨(S)` is the lattice of compatible ideals (downward
//! closed sets closed under compatible joins) with multiplication given by
//! the least compatible ideal containing the pointwise product.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exhaust::{first_elem, first_pair, first_triple};
use crate::lattice::{FiniteLattice, Lattice};
use crate::quantale::{check_homomorphism, Quantale, TableQuantale};
use crate::report::LawReport;
use crate::Elem;

/// A finite semigroup with a chosen inverse map, intended to be an inverse
/// semigroup. Derived order data is computed at construction.
#[derive(Debug, Clone)]
pub struct InverseSemigroup {
    n: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    idempotent: FixedBitSet,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
}

impl InverseSemigroup {
    pub fn new(mult: Vec<Vec<Elem>>, inv: Vec<Elem>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::input("a semigroup needs at least one element"));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "semigroup row {a} has {} entries, expected {n}",
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
        if inv.len() != n || inv.iter().any(|&v| v >= n) {
            return Err(Error::input(format!(
                "inverse map must have {n} entries in 0..{n}"
            )));
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::input(format!(
                    "{} labels for {n} semigroup elements",
                    l.len()
                )))
            }
            None => (0..n).map(|s| s.to_string()).collect(),
        };
        let mut s = InverseSemigroup {
            n,
            mult: flat,
            inv: inv.into_iter().map(|v| v as u32).collect(),
            labels,
            idempotent: FixedBitSet::with_capacity(n),
            below: vec![FixedBitSet::with_capacity(n); n],
            above: vec![FixedBitSet::with_capacity(n); n],
        };
        for a in 0..n {
            if s.mul(a, a) == a {
                s.idempotent.insert(a);
            }
        }
        for t in 0..n {
            let d = s.mul(s.inverse(t), t);
            for u in 0..n {
                if s.mul(u, d) == t {
                    // t <= u
                    s.below[u].insert(t);
                    s.above[t].insert(u);
                }
            }
        }
        Ok(s)
    }

    pub fn from_fn(
        n: usize,
        mul: impl Fn(Elem, Elem) -> Elem,
        inv: impl Fn(Elem) -> Elem,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let mult = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::new(mult, (0..n).map(inv).collect(), labels)
    }

    /// The subset `elems` of a quantale with the inherited multiplication and
    /// involution. Fails if the subset is not closed under either.
    pub fn from_quantale_subset<Q: Quantale>(q: &Q, elems: &[Elem]) -> Result<Self> {
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let lookup = |v: Elem, w: Vec<Elem>, what: &str| {
            pos.get(&v)
                .copied()
                .ok_or_else(|| Error::violation(format!("subset not closed under {what}"), w))
        };
        let mut mult = Vec::with_capacity(elems.len());
        for &a in elems {
            let row = elems
                .iter()
                .map(|&b| lookup(q.mul(a, b), vec![a, b], "multiplication"))
                .collect::<Result<Vec<_>>>()?;
            mult.push(row);
        }
        let inv = elems
            .iter()
            .map(|&a| lookup(q.star(a), vec![a], "involution"))
            .collect::<Result<Vec<_>>>()?;
        let labels = elems.iter().map(|&a| q.label(a)).collect();
        Self::new(mult, inv, Some(labels))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.n + b] as Elem
    }

    pub fn inverse(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.idempotent.contains(a)
    }

    /// `E(S)` in index order.
    pub fn idempotents(&self) -> Vec<Elem> {
        self.idempotent.ones().collect()
    }

    /// Natural order: `a <= b` iff `a = b·a⁻¹a`.
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.below[b].contains(a)
    }

    /// `↓s` in the natural order.
    pub fn below(&self, s: Elem) -> &FixedBitSet {
        &self.below[s]
    }

    pub fn above(&self, s: Elem) -> &FixedBitSet {
        &self.above[s]
    }

    pub fn compatible(&self, a: Elem, b: Elem) -> bool {
        self.is_idempotent(self.mul(self.inverse(a), b))
            && self.is_idempotent(self.mul(a, self.inverse(b)))
    }

    /// Least upper bound of `set` in the natural order, if any. The empty set
    /// yields the least element.
    pub fn join_of(&self, set: impl IntoIterator<Item = Elem>) -> Option<Elem> {
        let mut ub = FixedBitSet::with_capacity(self.n);
        ub.insert_range(..);
        for s in set {
            ub.intersect_with(&self.above[s]);
        }
        self.least_of(&ub)
    }

    fn least_of(&self, set: &FixedBitSet) -> Option<Elem> {
        set.ones().find(|&c| set.is_subset(&self.above[c]))
    }

    /// Natural-order join of a pair, if it exists.
    pub fn join2(&self, a: Elem, b: Elem) -> Option<Elem> {
        let mut ub = self.above[a].clone();
        ub.intersect_with(&self.above[b]);
        self.least_of(&ub)
    }

    /// Least element of the natural order (the join of the empty set).
    pub fn bottom(&self) -> Option<Elem> {
        self.join_of(std::iter::empty())
    }

    /// `E(S)` with the natural order, as a lattice, with the element list.
    pub fn idempotent_lattice(&self) -> Result<(Vec<Elem>, FiniteLattice)> {
        let idem = self.idempotents();
        let l = FiniteLattice::from_leq(idem.len(), |i, j| self.leq(idem[i], idem[j]))?;
        Ok((idem, l))
    }

    /// Maximal elements of a set in the natural order.
    pub fn maximal(&self, set: &FixedBitSet) -> Vec<Elem> {
        set.ones()
            .filter(|&s| self.above[s].intersection(set).all(|t| t == s))
            .collect()
    }

    /// The cyclic group `Z_k`.
    pub fn cyclic_group(k: usize) -> Result<Self> {
        Self::from_fn(k, |a, b| (a + b) % k, |a| (k - a) % k, None)
    }

    /// `{0, 1, .., k-1}` with `a·b = min(a, b)`: a chain of idempotents.
    pub fn idempotent_chain(k: usize) -> Result<Self> {
        Self::from_fn(k, |a, b| a.min(b), |a| a, None)
    }

    /// `{0} ∪ G` for the cyclic group `Z_k`, with `0` absorbing. Element `0` is
    /// the zero and `1 + g` is the group element `g`.
    pub fn cyclic_group_with_zero(k: usize) -> Result<Self> {
        Self::from_fn(
            k + 1,
            |a, b| {
                if a == 0 || b == 0 {
                    0
                } else {
                    1 + (a - 1 + b - 1) % k
                }
            },
            |a| if a == 0 { 0 } else { 1 + (k - (a - 1)) % k },
            None,
        )
    }

    /// The Brandt semigroup `B_k`: zero plus matrix units `e_ij`. Element
    /// `1 + i*k + j` is `e_ij`.
    pub fn brandt(k: usize) -> Result<Self> {
        Self::from_fn(
            k * k + 1,
            |a, b| {
                if a == 0 || b == 0 {
                    return 0;
                }
                let (i, j) = ((a - 1) / k, (a - 1) % k);
                let (j2, l) = ((b - 1) / k, (b - 1) % k);
                if j == j2 {
                    1 + i * k + l
                } else {
                    0
                }
            },
            |a| if a == 0 { 0 } else { 1 + ((a - 1) % k) * k + (a - 1) / k },
            None,
        )
    }
}

/// Checks the inverse semigroup axioms: associativity, `ss⁻¹s = s`,
/// `s⁻¹ss⁻¹ = s⁻¹`, commuting idempotents, and that `s⁻¹` is the only
/// element `t` with `sts = s` and `tst = t`.
pub fn verify_inverse_semigroup(s: &InverseSemigroup) -> LawReport {
    let n = s.len();
    let mut r = LawReport::new();
    r.record(
        "associative",
        first_triple(n, |a, b, c| s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c))),
    );
    r.record(
        "regular",
        first_elem(n, |a| s.mul(s.mul(a, s.inverse(a)), a) != a),
    );
    r.record(
        "inverse_regular",
        first_elem(n, |a| {
            let i = s.inverse(a);
            s.mul(s.mul(i, a), i) != i
        }),
    );
    r.record(
        "idempotents_commute",
        first_pair(n, |e, f| {
            s.is_idempotent(e) && s.is_idempotent(f) && s.mul(e, f) != s.mul(f, e)
        }),
    );
    r.record(
        "unique_inverse",
        first_pair(n, |a, t| {
            t != s.inverse(a) && s.mul(s.mul(a, t), a) == a && s.mul(s.mul(t, a), t) == t
        }),
    );
    r
}

/// Checks that an inverse semigroup is a pseudogroup.
///
/// Fails with a precondition error when `s` is not an inverse semigroup.
pub fn check_pseudogroup(s: &InverseSemigroup) -> Result<LawReport> {
    let base = verify_inverse_semigroup(s);
    if let Some(c) = base.first_failure() {
        return Err(Error::precondition(format!(
            "not an inverse semigroup: {} fails at {:?}",
            c.name, c.witness
        )));
    }
    let n = s.len();
    let mut r = LawReport::new();
    let bottom = s.bottom();
    r.record("empty_join_exists", bottom.is_none().then(Vec::new));
    let Some(bottom) = bottom else {
        return Ok(r);
    };
    r.record(
        "compatible_pair_joins_exist",
        first_pair(n, |a, b| s.compatible(a, b) && s.join2(a, b).is_none()),
    );
    if !r.passed() {
        return Ok(r);
    }
    let join = |a, b| s.join2(a, b).expect("checked above");
    r.record(
        "joins_inherit_compatibility",
        first_triple(n, |a, b, c| {
            s.compatible(a, b)
                && s.compatible(a, c)
                && s.compatible(b, c)
                && !s.compatible(join(a, b), c)
        }),
    );
    r.record(
        "mul_distributes_over_empty_join",
        first_elem(n, |a| s.mul(a, bottom) != bottom || s.mul(bottom, a) != bottom),
    );
    r.record(
        "mul_distributes_left",
        first_triple(n, |c, a, b| {
            s.compatible(a, b) && s.join2(s.mul(c, a), s.mul(c, b)) != Some(s.mul(c, join(a, b)))
        }),
    );
    r.record(
        "mul_distributes_right",
        first_triple(n, |c, a, b| {
            s.compatible(a, b) && s.join2(s.mul(a, c), s.mul(b, c)) != Some(s.mul(join(a, b), c))
        }),
    );
    Ok(r)
}

pub fn is_pseudogroup(s: &InverseSemigroup) -> Result<bool> {
    Ok(check_pseudogroup(s)?.passed())
}

/// A compatible ideal of a pseudogroup, as a set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompatibleIdeal {
    members: FixedBitSet,
}

impl CompatibleIdeal {
    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, s: Elem) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones()
    }
}

/// `↓s`, the principal ideal of `s`. Its compatible-join closure holds in
/// any pseudogroup.
pub fn principal_ideal(s: &InverseSemigroup, a: Elem) -> CompatibleIdeal {
    CompatibleIdeal {
        members: s.below(a).clone(),
    }
}

/// The quantale completion `L∨(S)` of a pseudogroup.
#[derive(Debug, Clone)]
pub struct Completion {
    semigroup: InverseSemigroup,
    ideals: Vec<CompatibleIdeal>,
    index: HashMap<CompatibleIdeal, Elem>,
    quantale: TableQuantale,
}

/// Enumerates the compatible ideals of `s` and builds `L∨(S)`.
///
/// Ideals are ordered by size and then by member list, so the bottom `{0}`
/// comes first and `S` itself last. The unit is `E(S)`.
pub fn compatible_ideals(s: &InverseSemigroup, cfg: &Config) -> Result<Completion> {
    let check = check_pseudogroup(s)?;
    if let Some(c) = check.first_failure() {
        return Err(Error::precondition(format!(
            "not a pseudogroup: {} fails at {:?}",
            c.name, c.witness
        )));
    }
    let closer = Closer::new(s);
    let start = closer.close(FixedBitSet::with_capacity(s.len()));
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        for a in 0..s.len() {
            if c.contains(a) {
                continue;
            }
            let mut seed = c.clone();
            seed.insert(a);
            let d = closer.close(seed);
            if seen.insert(d.clone()) {
                cfg.ensure_table("compatible ideals", seen.len())?;
                queue.push_back(d);
            }
        }
    }
    let mut ideals: Vec<CompatibleIdeal> = seen
        .into_iter()
        .map(|members| CompatibleIdeal { members })
        .collect();
    ideals.sort_by_cached_key(|i| (i.len(), i.iter().collect::<Vec<_>>()));
    let index: HashMap<CompatibleIdeal, Elem> =
        ideals.iter().cloned().enumerate().map(|(i, j)| (j, i)).collect();

    let m = ideals.len();
    let lattice = FiniteLattice::from_leq_with_threshold(
        m,
        |a, b| ideals[a].members.is_subset(&ideals[b].members),
        cfg.lattice_table_threshold,
    )?;
    let gens: Vec<Vec<Elem>> = ideals.iter().map(|i| s.maximal(&i.members)).collect();
    let least_containing = |set: &FixedBitSet| -> Elem {
        // sorted by size, so the first superset is the least one
        ideals
            .iter()
            .position(|i| set.is_subset(&i.members))
            .expect("S itself is an ideal")
    };
    let mult: Vec<Vec<Elem>> = (0..m)
        .into_par_iter()
        .map(|a| {
            (0..m)
                .map(|b| {
                    let mut prod = FixedBitSet::with_capacity(s.len());
                    for &x in &gens[a] {
                        for &y in &gens[b] {
                            prod.union_with(s.below(s.mul(x, y)));
                        }
                    }
                    least_containing(&prod)
                })
                .collect()
        })
        .collect();
    let inv = ideals
        .iter()
        .map(|i| {
            let mut members = FixedBitSet::with_capacity(s.len());
            members.extend(i.iter().map(|a| s.inverse(a)));
            index
                .get(&CompatibleIdeal { members })
                .copied()
                .ok_or_else(|| Error::violation("ideal inverse is not an ideal", i.iter().collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut e = FixedBitSet::with_capacity(s.len());
    e.extend(s.idempotents());
    let unit = *index
        .get(&CompatibleIdeal { members: e })
        .ok_or_else(|| Error::violation("E(S) is not a compatible ideal", s.idempotents()))?;
    let labels = gens
        .iter()
        .map(|g| {
            let parts: Vec<&str> = g.iter().map(|&a| s.label(a)).collect();
            format!("<{}>", parts.join(";"))
        })
        .collect();
    let quantale = TableQuantale::new(lattice, mult, inv, Some(unit))?.with_labels(labels);
    Ok(Completion {
        semigroup: s.clone(),
        ideals,
        index,
        quantale,
    })
}

/// Least compatible ideal containing a set, by fixed-point iteration.
struct Closer<'a> {
    s: &'a InverseSemigroup,
    bottom: Elem,
}

impl<'a> Closer<'a> {
    fn new(s: &'a InverseSemigroup) -> Self {
        Closer {
            s,
            bottom: s.bottom().expect("pseudogroup has a bottom"),
        }
    }

    fn close(&self, mut cur: FixedBitSet) -> FixedBitSet {
        cur.insert(self.bottom);
        loop {
            let mut next = cur.clone();
            for x in cur.ones() {
                next.union_with(self.s.below(x));
            }
            let members: Vec<Elem> = next.ones().collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if self.s.compatible(a, b) {
                        let j = self.s.join2(a, b).expect("pseudogroup");
                        next.insert(j);
                    }
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

impl Completion {
    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn quantale(&self) -> &TableQuantale {
        &self.quantale
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideal(&self, i: Elem) -> &CompatibleIdeal {
        &self.ideals[i]
    }

    pub fn ideals(&self) -> &[CompatibleIdeal] {
        &self.ideals
    }

    pub fn index_of(&self, ideal: &CompatibleIdeal) -> Option<Elem> {
        self.index.get(ideal).copied()
    }

    /// Index of the ideal with exactly these members, if it is one.
    pub fn index_of_set(&self, members: &FixedBitSet) -> Option<Elem> {
        self.index
            .get(&CompatibleIdeal {
                members: members.clone(),
            })
            .copied()
    }

    /// `φ_S(s) = ↓s` as an element of the completion.
    pub fn principal(&self, s: Elem) -> Elem {
        self.index_of(&principal_ideal(&self.semigroup, s))
            .expect("principal ideals are compatible ideals")
    }

    /// Least compatible ideal containing the given elements.
    pub fn least_containing(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        let mut set = FixedBitSet::with_capacity(self.semigroup.len());
        set.extend(elems);
        self.ideals
            .iter()
            .position(|i| set.is_subset(&i.members))
            .expect("S itself is an ideal")
    }

    /// Checks that `s ↦ ↓s` preserves multiplication, inverses, the empty join
    /// and joins of compatible pairs.
    pub fn check_principal_embedding(&self) -> LawReport {
        let s = &self.semigroup;
        let q = &self.quantale;
        let n = s.len();
        let p = |a| self.principal(a);
        let mut r = LawReport::new();
        r.record(
            "preserves_mul",
            first_pair(n, |a, b| p(s.mul(a, b)) != q.mul(p(a), p(b))),
        );
        r.record(
            "preserves_inverse",
            first_elem(n, |a| p(s.inverse(a)) != q.star(p(a))),
        );
        let bottom = s.bottom().expect("pseudogroup");
        r.record(
            "preserves_empty_join",
            (p(bottom) != q.bottom()).then(|| vec![bottom]),
        );
        r.record(
            "preserves_compatible_joins",
            first_pair(n, |a, b| {
                s.compatible(a, b) && p(s.join2(a, b).expect("pseudogroup")) != q.join(p(a), p(b))
            }),
        );
        r
    }

    /// Checks `I(L∨(S)) ≅ S`: the partial units of the completion are exactly
    /// the principal ideals, and `s ↦ ↓s` is injective.
    pub fn check_partial_units_round_trip(&self, cfg: &Config) -> Result<LawReport> {
        let s = &self.semigroup;
        let pu = crate::quantale::partial_units(&self.quantale, cfg)?;
        let principal: Vec<Elem> = (0..s.len()).map(|a| self.principal(a)).collect();
        let mut r = self.check_principal_embedding();
        r.record(
            "principal_injective",
            first_pair(s.len(), |a, b| a < b && principal[a] == principal[b]),
        );
        let mut sorted = principal.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let extra: Vec<Elem> = pu.iter().filter(|u| sorted.binary_search(u).is_err()).copied().collect();
        r.record("partial_units_are_principal", (!extra.is_empty()).then_some(extra));
        let missing: Vec<Elem> = sorted.iter().filter(|u| pu.binary_search(u).is_err()).copied().collect();
        r.record("principal_are_partial_units", (!missing.is_empty()).then_some(missing));
        Ok(r)
    }
}

/// Checks `φ: S → Q` against `φ(st) = φ(s)φ(t)`, `φ(s⁻¹) = φ(s)*`, and
/// preservation of compatible joins (empty and binary).
pub fn check_hom_into_quantale<Q: Quantale>(
    s: &InverseSemigroup,
    q: &Q,
    phi: &[Elem],
) -> Result<LawReport> {
    if phi.len() != s.len() || phi.iter().any(|&v| v >= q.len()) {
        return Err(Error::input("homomorphism table does not match its domain and codomain"));
    }
    let n = s.len();
    let mut r = LawReport::new();
    r.record(
        "preserves_mul",
        first_pair(n, |a, b| phi[s.mul(a, b)] != q.mul(phi[a], phi[b])),
    );
    r.record(
        "preserves_inverse",
        first_elem(n, |a| phi[s.inverse(a)] != q.star(phi[a])),
    );
    let bottom = s
        .bottom()
        .ok_or_else(|| Error::precondition("semigroup has no empty join"))?;
    r.record(
        "preserves_empty_join",
        (phi[bottom] != q.bottom()).then(|| vec![bottom]),
    );
    r.record(
        "preserves_compatible_joins",
        first_pair(n, |a, b| {
            s.compatible(a, b)
                && match s.join2(a, b) {
                    Some(j) => phi[j] != q.join(phi[a], phi[b]),
                    None => true,
                }
        }),
    );
    Ok(r)
}

/// Checks `f: S → T` between pseudogroups, with joins taken in the natural
/// order of `T`.
pub fn check_pseudogroup_hom(
    s: &InverseSemigroup,
    t: &InverseSemigroup,
    f: &[Elem],
) -> Result<LawReport> {
    if f.len() != s.len() || f.iter().any(|&v| v >= t.len()) {
        return Err(Error::input("homomorphism table does not match its domain and codomain"));
    }
    let n = s.len();
    let mut r = LawReport::new();
    r.record(
        "preserves_mul",
        first_pair(n, |a, b| f[s.mul(a, b)] != t.mul(f[a], f[b])),
    );
    r.record(
        "preserves_inverse",
        first_elem(n, |a| f[s.inverse(a)] != t.inverse(f[a])),
    );
    let bottom = s
        .bottom()
        .ok_or_else(|| Error::precondition("source has no empty join"))?;
    r.record(
        "preserves_empty_join",
        (Some(f[bottom]) != t.bottom()).then(|| vec![bottom]),
    );
    r.record(
        "preserves_compatible_joins",
        first_pair(n, |a, b| {
            s.compatible(a, b)
                && match s.join2(a, b) {
                    Some(j) => Some(f[j]) != t.join2(f[a], f[b]),
                    None => true,
                }
        }),
    );
    Ok(r)
}

/// The unique involutive quantale homomorphism `φ♯: L∨(S) → Q` extending a
/// pseudogroup homomorphism `φ`, with `φ♯(J) = ∨φ(J)`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub values: Vec<Elem>,
    pub report: LawReport,
}

/// Builds `φ♯` and verifies it: homomorphism laws, `φ♯ ∘ φ_S = φ`, and
/// uniqueness through join-density of the principal ideals.
pub fn extend_hom<Q: Quantale>(
    completion: &Completion,
    q: &Q,
    phi: &[Elem],
) -> Result<Extension> {
    let s = completion.semigroup();
    let pre = check_hom_into_quantale(s, q, phi)?;
    if let Some(c) = pre.first_failure() {
        return Err(Error::precondition(format!(
            "not a pseudogroup homomorphism: {} fails at {:?}",
            c.name, c.witness
        )));
    }
    let values: Vec<Elem> = completion
        .ideals()
        .iter()
        .map(|j| q.join_all(j.iter().map(|a| phi[a])))
        .collect();
    let lq = completion.quantale();
    let mut report = check_homomorphism(lq, q, &values, false)?;
    report.record(
        "extends_phi",
        first_elem(s.len(), |a| values[completion.principal(a)] != phi[a]),
    );
    report.record(
        "principal_ideals_join_dense",
        first_elem(completion.len(), |j| {
            lq.join_all(completion.ideal(j).iter().map(|a| completion.principal(a))) != j
        }),
    );
    let report = report.into_violation("extension of a pseudogroup homomorphism")?;
    Ok(Extension { values, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{partial_units, RelQuantale};

    fn cfg() -> Config {
        Config::default()
    }

    pub(crate) fn sym_inverse_monoid(n: usize) -> InverseSemigroup {
        let q = RelQuantale::new(n).unwrap();
        InverseSemigroup::from_quantale_subset(&q, &partial_units(&q, &cfg()).unwrap()).unwrap()
    }

    #[test]
    fn symmetric_inverse_monoid_on_two_points() {
        let s = sym_inverse_monoid(2);
        assert_eq!(s.len(), 7);
        assert!(verify_inverse_semigroup(&s).passed());
        assert!(is_pseudogroup(&s).unwrap());
    }

    #[test]
    fn groups_are_inverse_semigroups() {
        for k in 1..=5 {
            let g = InverseSemigroup::cyclic_group(k).unwrap();
            assert!(verify_inverse_semigroup(&g).passed());
        }
        // a nontrivial group has no least element, so no empty join
        let r = check_pseudogroup(&InverseSemigroup::cyclic_group(2).unwrap()).unwrap();
        assert!(!r.get("empty_join_exists").unwrap().holds());
        assert!(is_pseudogroup(&InverseSemigroup::cyclic_group(1).unwrap()).unwrap());
    }

    #[test]
    fn two_inverses_fail_with_witness() {
        // left-zero band {a, b}: xy = x. Every element is an inverse of every
        // other, and the idempotents do not commute.
        let s = InverseSemigroup::from_fn(2, |a, _| a, |a| a, None).unwrap();
        let r = verify_inverse_semigroup(&s);
        let w = r.get("unique_inverse").unwrap().witness.clone().unwrap();
        let (a, t) = (w[0], w[1]);
        assert_ne!(t, s.inverse(a));
        assert_eq!(s.mul(s.mul(a, t), a), a);
        assert_eq!(s.mul(s.mul(t, a), t), t);
        assert!(!r.get("idempotents_commute").unwrap().holds());
        assert!(matches!(check_pseudogroup(&s), Err(Error::Precondition(_))));
    }

    #[test]
    fn idempotent_chains_are_pseudogroups() {
        for k in 1..=4 {
            assert!(is_pseudogroup(&InverseSemigroup::idempotent_chain(k).unwrap()).unwrap());
        }
    }

    #[test]
    fn brandt_semigroup_lacks_joins() {
        let b2 = InverseSemigroup::brandt(2).unwrap();
        assert!(verify_inverse_semigroup(&b2).passed());
        let r = check_pseudogroup(&b2).unwrap();
        let w = r.get("compatible_pair_joins_exist").unwrap().witness.clone().unwrap();
        assert!(b2.compatible(w[0], w[1]));
        assert_eq!(b2.join2(w[0], w[1]), None);
    }

    #[test]
    fn completion_of_two_chain() {
        let s = InverseSemigroup::idempotent_chain(2).unwrap();
        let c = compatible_ideals(&s, &cfg()).unwrap();
        let sets: Vec<Vec<Elem>> = c.ideals().iter().map(|i| i.iter().collect()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1]]);
        assert_eq!(c.quantale().unit(), Some(1));
    }

    #[test]
    fn completion_of_partial_bijections_has_sixteen_elements() {
        let c = compatible_ideals(&sym_inverse_monoid(2), &cfg()).unwrap();
        assert_eq!(c.len(), 16);
        assert!(crate::lattice::is_atomic_boolean(c.quantale()));
    }

    #[test]
    fn principal_ideals() {
        let s = InverseSemigroup::idempotent_chain(2).unwrap();
        assert_eq!(principal_ideal(&s, 0).iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(principal_ideal(&s, 1).iter().collect::<Vec<_>>(), vec![0, 1]);

        // transposition on two points: its restrictions are ∅, {(1,0)}, {(0,1)}
        let q = RelQuantale::new(2).unwrap();
        let pu = partial_units(&q, &cfg()).unwrap();
        let s = InverseSemigroup::from_quantale_subset(&q, &pu).unwrap();
        let swap = q.from_pairs([(0, 1), (1, 0)]);
        let idx = pu.iter().position(|&a| a == swap).unwrap();
        let mut got: Vec<Elem> = principal_ideal(&s, idx).iter().map(|i| pu[i]).collect();
        got.sort_unstable();
        // oracle: sub-relations of the swap that are partial bijections
        let mut expect: Vec<Elem> = pu.iter().copied().filter(|&r| r & !swap == 0).collect();
        expect.sort_unstable();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn principal_embedding_is_a_homomorphism() {
        let c = compatible_ideals(&sym_inverse_monoid(2), &cfg()).unwrap();
        assert!(c.check_principal_embedding().passed());
        assert!(c.check_partial_units_round_trip(&cfg()).unwrap().passed());
    }

    #[test]
    fn extension_of_phi_s_is_identity() {
        let c = compatible_ideals(&sym_inverse_monoid(2), &cfg()).unwrap();
        let phi: Vec<Elem> = (0..c.semigroup().len()).map(|a| c.principal(a)).collect();
        let ext = extend_hom(&c, c.quantale(), &phi).unwrap();
        assert_eq!(ext.values, (0..c.len()).collect::<Vec<_>>());
    }

    #[test]
    fn extension_of_inclusion_into_relations() {
        let q = RelQuantale::new(2).unwrap();
        let pu = partial_units(&q, &cfg()).unwrap();
        let s = InverseSemigroup::from_quantale_subset(&q, &pu).unwrap();
        let c = compatible_ideals(&s, &cfg()).unwrap();
        let ext = extend_hom(&c, &q, &pu).unwrap();
        let mut image = ext.values.clone();
        image.sort_unstable();
        assert_eq!(image, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn zero_semigroup_maps_everything_to_zero() {
        let z = InverseSemigroup::idempotent_chain(1).unwrap();
        let c = compatible_ideals(&z, &cfg()).unwrap();
        assert_eq!(c.len(), 1);
        let q = RelQuantale::new(2).unwrap();
        let ext = extend_hom(&c, &q, &[0]).unwrap();
        assert_eq!(ext.values, vec![0]);
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let s = InverseSemigroup::idempotent_chain(2).unwrap();
        let c = compatible_ideals(&s, &cfg()).unwrap();
        let q = RelQuantale::new(2).unwrap();
        // 1 ↦ a non-idempotent relation
        let err = extend_hom(&c, &q, &[0, q.pair(0, 1)]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}

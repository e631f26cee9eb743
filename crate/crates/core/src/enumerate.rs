//! Small instances for exhaustive testing and counterexample search.
//!
//! Lattices are enumerated up to isomorphism with `0` as bottom and `n-1` as
//! top. An involution of an involutive quantale is an order automorphism of
//! period at most two. A join-preserving multiplication is fixed by its values
//! on pairs of join-irreducibles, which are assigned monotonically and
//! compatibly with the involution, extended by joins, and then checked.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{join_irreducibles, FiniteLattice, Lattice};
use crate::quantale::{check_axioms, classify, Flag, Quantale, TableQuantale};
use crate::Elem;

/// Largest carrier enumerated exhaustively.
pub const MAX_EXHAUSTIVE: usize = 5;
/// Largest carrier for random candidates.
pub const MAX_RANDOM: usize = 8;

/// Lattices with `n` elements, one per isomorphism class.
pub fn lattices(n: usize) -> Vec<FiniteLattice> {
    match n {
        0 => return Vec::new(),
        1 => return vec![FiniteLattice::chain(1).expect("chain")],
        _ => {}
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1 << pairs.len()) {
        let lt = |i: usize, j: usize| {
            pairs
                .iter()
                .position(|&p| p == (i, j))
                .is_some_and(|k| bits >> k & 1 == 1)
        };
        let transitive = (0..m).all(|i| {
            (0..m).all(|j| (0..m).all(|k| !(lt(i, j) && lt(j, k)) || lt(i, k)))
        });
        let irreflexive_pairs = (0..m).all(|i| (0..m).all(|j| !(lt(i, j) && lt(j, i))));
        if !transitive || !irreflexive_pairs {
            continue;
        }
        let leq = |a: usize, b: usize| {
            a == b || a == 0 || b == n - 1 || (a > 0 && b > 0 && a < n - 1 && b < n - 1 && lt(a - 1, b - 1))
        };
        let Ok(l) = FiniteLattice::from_leq(n, leq) else { continue };
        if seen.insert(canonical_form(&l)) {
            out.push(l);
        }
    }
    out
}

/// Least order matrix, read as a bit string, over relabellings fixing `0` and
/// the top.
fn canonical_form(l: &FiniteLattice) -> Vec<bool> {
    let n = l.len();
    let mut best: Option<Vec<bool>> = None;
    for_each_permutation(n.saturating_sub(2), |p| {
        let map = |a: usize| if a == 0 || a == n - 1 { a } else { p[a - 1] + 1 };
        let mut code = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                code[map(a) * n + map(b)] = l.leq(a, b);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    best.unwrap_or_default()
}

fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    f(&p);
    // Heap's algorithm
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Order automorphisms `σ` with `σσ = id`, sorted.
pub fn involutions(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let n = l.len();
    let mut out = Vec::new();
    if n <= 2 {
        return vec![(0..n).collect()];
    }
    for_each_permutation(n - 2, |p| {
        let s: Vec<Elem> = (0..n)
            .map(|a| if a == 0 || a == n - 1 { a } else { p[a - 1] + 1 })
            .collect();
        let order = (0..n).all(|a| (0..n).all(|b| l.leq(a, b) == l.leq(s[a], s[b])));
        if order && (0..n).all(|a| s[s[a]] == a) {
            out.push(s);
        }
    });
    out.sort();
    out
}

/// Extends values on pairs of join-irreducibles to all pairs by joins.
fn extend(l: &FiniteLattice, ji: &[Elem], g: &[Elem]) -> Vec<Vec<Elem>> {
    let k = ji.len();
    let n = l.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = l.bottom();
                    for (i, &j) in ji.iter().enumerate() {
                        if !l.leq(j, a) {
                            continue;
                        }
                        for (i2, &j2) in ji.iter().enumerate() {
                            if l.leq(j2, b) {
                                v = l.join(v, g[i * k + i2]);
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Visits every involutive quantale on `l` with involution `inv`, in a fixed
/// order, until `visit` breaks. Units are detected.
pub fn for_each_quantale_on(
    l: &FiniteLattice,
    inv: &[Elem],
    cfg: &Config,
    visit: &mut dyn FnMut(TableQuantale) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let ji = join_irreducibles(l);
    let k = ji.len();
    let pos = |a: Elem| ji.iter().position(|&j| j == a).expect("involution permutes join-irreducibles");
    let partner: Vec<usize> = (0..k * k)
        .map(|p| pos(inv[ji[p % k]]) * k + pos(inv[ji[p / k]]))
        .collect();
    let mut g = vec![usize::MAX; k * k];
    let mut search = Assign {
        l,
        inv,
        ji: &ji,
        partner: &partner,
        cfg,
        visit,
    };
    search.go(&mut g, 0)
}

struct Assign<'a> {
    l: &'a FiniteLattice,
    inv: &'a [Elem],
    ji: &'a [Elem],
    partner: &'a [usize],
    cfg: &'a Config,
    visit: &'a mut dyn FnMut(TableQuantale) -> ControlFlow<()>,
}

impl Assign<'_> {
    fn monotone_at(&self, g: &[Elem], p: usize) -> bool {
        let k = self.ji.len();
        let (i, j) = (p / k, p % k);
        (0..k * k).all(|r| {
            if g[r] == usize::MAX {
                return true;
            }
            let (a, b) = (r / k, r % k);
            let below = self.l.leq(self.ji[a], self.ji[i]) && self.l.leq(self.ji[b], self.ji[j]);
            let above = self.l.leq(self.ji[i], self.ji[a]) && self.l.leq(self.ji[j], self.ji[b]);
            (!below || self.l.leq(g[r], g[p])) && (!above || self.l.leq(g[p], g[r]))
        })
    }

    fn go(&mut self, g: &mut Vec<Elem>, p: usize) -> ControlFlow<()> {
        let k = self.ji.len();
        if p == k * k {
            let mult = extend(self.l, self.ji, g);
            let Ok(q) = TableQuantale::new(self.l.clone(), mult, self.inv.to_vec(), None) else {
                return ControlFlow::Continue(());
            };
            if check_axioms(&q, self.cfg).is_ok_and(|r| r.passed()) {
                return (self.visit)(q.with_detected_unit());
            }
            return ControlFlow::Continue(());
        }
        if g[p] != usize::MAX {
            return self.go(g, p + 1);
        }
        let q = self.partner[p];
        for v in 0..self.l.len() {
            let w = self.inv[v];
            if q == p && w != v {
                continue;
            }
            g[p] = v;
            g[q] = w;
            if self.monotone_at(g, p) && self.monotone_at(g, q) {
                self.go(g, p + 1)?;
            }
            g[p] = usize::MAX;
            g[q] = usize::MAX;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every involutive quantale with exactly `n` elements: lattices in
/// enumeration order, then involutions, then multiplications.
pub fn for_each_quantale(
    n: usize,
    cfg: &Config,
    visit: &mut dyn FnMut(TableQuantale) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    if n > MAX_EXHAUSTIVE {
        return Err(Error::Resource {
            what: "exhaustive quantale enumeration".into(),
            size: n,
            limit: MAX_EXHAUSTIVE,
        });
    }
    for l in lattices(n) {
        for inv in involutions(&l) {
            if for_each_quantale_on(&l, &inv, cfg, visit).is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// All involutive quantales with `1..=max_n` elements.
pub fn involutive_quantales(max_n: usize, cfg: &Config) -> Result<Vec<TableQuantale>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let _ = for_each_quantale(n, cfg, &mut |q| {
            out.push(q);
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// A random lattice with `n` elements: a random order on the middle elements
/// closed transitively, retried until every pair has a join and a meet.
pub fn random_lattice(n: usize, rng: &mut ChaCha8Rng) -> FiniteLattice {
    if n <= 2 {
        return FiniteLattice::chain(n.max(1)).expect("chain");
    }
    let m = n - 2;
    loop {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let mut lt = vec![vec![false; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                if rng.gen_bool(0.4) {
                    lt[order[i]][order[j]] = true;
                }
            }
        }
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    if lt[i][k] && lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
        let leq = |a: usize, b: usize| {
            a == b || a == 0 || b == n - 1 || (a > 0 && b > 0 && a < n - 1 && b < n - 1 && lt[a - 1][b - 1])
        };
        if let Ok(l) = FiniteLattice::from_leq(n, leq) {
            return l;
        }
    }
}

/// Up to `attempts` random candidates of size `n`, keeping those that pass the
/// axioms. The same seed gives the same sequence.
pub fn random_quantales(n: usize, seed: u64, attempts: usize, cfg: &Config) -> Result<Vec<TableQuantale>> {
    if n == 0 || n > MAX_RANDOM {
        return Err(Error::Resource {
            what: "random quantale size".into(),
            size: n,
            limit: MAX_RANDOM,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..attempts {
        let l = random_lattice(n, &mut rng);
        let invs = involutions(&l);
        let inv = invs[rng.gen_range(0..invs.len())].clone();
        let ji = join_irreducibles(&l);
        let k = ji.len();
        let pos = |a: Elem| ji.iter().position(|&j| j == a).expect("join-irreducible");
        let mut g = vec![usize::MAX; k * k];
        for p in 0..k * k {
            if g[p] != usize::MAX {
                continue;
            }
            let partner = pos(inv[ji[p % k]]) * k + pos(inv[ji[p / k]]);
            let mut v = rng.gen_range(0..n);
            if partner == p {
                // a value fixed by the involution; the bottom always is
                let fixed: Vec<Elem> = (0..n).filter(|&a| inv[a] == a).collect();
                v = fixed[rng.gen_range(0..fixed.len())];
            }
            g[p] = v;
            g[partner] = inv[v];
        }
        let q = TableQuantale::new(l.clone(), extend(&l, &ji, &g), inv, None)?;
        if check_axioms(&q, cfg)?.passed() {
            out.push(q.with_detected_unit());
        }
    }
    Ok(out)
}

/// The class flags a search can constrain, with accepted aliases.
pub const FLAG_NAMES: [&str; 7] = [
    "gelfand",
    "stably_gelfand",
    "strongly_gelfand",
    "unital",
    "quantal_frame",
    "supported",
    "covering",
];

fn canonical_flag(name: &str) -> Option<&'static str> {
    match name {
        "frame" | "distributive" | "locale" => Some("quantal_frame"),
        other => FLAG_NAMES.iter().copied().find(|&f| f == other),
    }
}

/// Required and forbidden class flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Constraints {
    pub require: Vec<&'static str>,
    pub forbid: Vec<&'static str>,
}

impl Constraints {
    /// Parses `a,!b,c`; `!` or `non-` negates.
    pub fn parse(s: &str) -> Result<Self> {
        let mut c = Constraints::default();
        for raw in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (neg, name) = match raw.strip_prefix('!').or_else(|| raw.strip_prefix("non-")) {
                Some(rest) => (true, rest),
                None => (false, raw),
            };
            let flag = canonical_flag(name).ok_or_else(|| Error::input(format!("unknown class flag {name:?}")))?;
            let list = if neg { &mut c.forbid } else { &mut c.require };
            if !list.contains(&flag) {
                list.push(flag);
            }
        }
        Ok(c)
    }

    /// Required flags closed under the implications strongly ⇒ stably ⇒
    /// Gelfand and supported, covering ⇒ unital.
    fn implied(&self) -> Vec<&'static str> {
        let mut req = self.require.clone();
        loop {
            let before = req.len();
            for (a, b) in [
                ("strongly_gelfand", "stably_gelfand"),
                ("stably_gelfand", "gelfand"),
                ("supported", "unital"),
                ("covering", "unital"),
            ] {
                if req.contains(&a) && !req.contains(&b) {
                    req.push(b);
                }
            }
            if req.len() == before {
                return req;
            }
        }
    }

    /// A flag both required (directly or by implication) and forbidden.
    pub fn contradiction(&self) -> Option<&'static str> {
        let req = self.implied();
        self.forbid.iter().copied().find(|f| req.contains(f))
    }

    pub fn accepts<Q: Quantale>(&self, q: &Q, cfg: &Config) -> Result<bool> {
        let r = classify(q, cfg)?;
        let holds = |f: &str| matches!(r.get(f), Some(Flag::Holds));
        Ok(self.require.iter().all(|f| holds(f)) && self.forbid.iter().all(|f| !holds(f)))
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub hits: Vec<TableQuantale>,
    pub examined: usize,
    /// Every candidate in the space was examined.
    pub exhausted: bool,
    /// The constraints cannot hold together, so nothing was searched.
    pub vacuous: Option<&'static str>,
}

/// Searches candidates of size `1..=max_n` for the first `max_hits`
/// satisfying `constraints`: exhaustively up to [`MAX_EXHAUSTIVE`], and with
/// `random_attempts` seeded random candidates per larger size up to
/// `max_n`.
pub fn search(
    constraints: &Constraints,
    max_n: usize,
    seed: u64,
    max_hits: usize,
    random_attempts: usize,
    cfg: &Config,
) -> Result<SearchOutcome> {
    if max_n > MAX_RANDOM {
        return Err(Error::Resource {
            what: "search size bound".into(),
            size: max_n,
            limit: MAX_RANDOM,
        });
    }
    let mut out = SearchOutcome {
        hits: Vec::new(),
        examined: 0,
        exhausted: true,
        vacuous: constraints.contradiction(),
    };
    if out.vacuous.is_some() || max_hits == 0 {
        out.exhausted = out.vacuous.is_some() || max_n == 0;
        return Ok(out);
    }
    let mut err = None;
    for n in 1..=max_n.min(MAX_EXHAUSTIVE) {
        let flow = for_each_quantale(n, cfg, &mut |q| {
            out.examined += 1;
            match constraints.accepts(&q, cfg) {
                Ok(true) => out.hits.push(q),
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
            }
            if out.hits.len() >= max_hits {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if flow.is_break() {
            out.exhausted = false;
            return Ok(out);
        }
    }
    for n in MAX_EXHAUSTIVE + 1..=max_n {
        out.exhausted = false;
        for q in random_quantales(n, seed.wrapping_add(n as u64), random_attempts, cfg)? {
            out.examined += 1;
            if constraints.accepts(&q, cfg)? {
                out.hits.push(q);
                if out.hits.len() >= max_hits {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

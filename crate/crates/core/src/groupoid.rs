//! Finite groupoids with the discrete topology and their quantales.
//!
//! `O(G)` is the powerset of arrows with pointwise multiplication and
//! involution; an element index is the bitmask of its arrows. Local
//! bisections are the arrow sets on which `dom` and `cod` are injective.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exhaust::first_elem;
use crate::lattice::{atoms, is_atomic_boolean, Lattice, PowersetLattice};
use crate::pseudogroup::{
    check_pseudogroup_hom, compatible_ideals, Completion, InverseSemigroup,
};
use crate::quantale::{check_isomorphism, Quantale, RelQuantale};
use crate::report::LawReport;
use crate::Elem;

const NONE: u32 = u32::MAX;

/// Arrow sets are indexed as `usize` bitmasks, so `O(G)` needs fewer arrows
/// than the word size; the carrier bound in [`Config`] applies on top.
pub const MAX_ARROWS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// `comp[g * m + h] = g∘h`, defined when `dom g = cod h`.
    comp: Vec<u32>,
    inv: Vec<usize>,
    unit: Vec<usize>,
    arrow_labels: Vec<String>,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `comp` lists every composable pair as
    /// `(g, h, g∘h)`. Units are the idempotent loops.
    pub fn new(
        objects: usize,
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: &[(usize, usize, usize)],
        inv: Vec<usize>,
        arrow_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = dom.len();
        if cod.len() != m || inv.len() != m {
            return Err(Error::input("dom, cod and inverse must list every arrow"));
        }
        if let Some(g) = (0..m).find(|&g| dom[g] >= objects || cod[g] >= objects || inv[g] >= m) {
            return Err(Error::input(format!("arrow {g} refers to a missing object or arrow")));
        }
        let mut table = vec![NONE; m * m];
        for &(g, h, gh) in comp {
            if g >= m || h >= m || gh >= m {
                return Err(Error::input(format!("composition ({g}, {h}, {gh}) out of range")));
            }
            if dom[g] != cod[h] {
                return Err(Error::input(format!(
                    "composition of {g} after {h} given but dom {g} ≠ cod {h}"
                )));
            }
            if table[g * m + h] != NONE {
                return Err(Error::input(format!("composition of {g} after {h} given twice")));
            }
            table[g * m + h] = gh as u32;
        }
        let labels = match arrow_labels {
            Some(l) if l.len() == m => l,
            Some(_) => return Err(Error::input("arrow label count does not match arrows")),
            None => (0..m).map(|g| format!("g{g}")).collect(),
        };
        let mut seen = HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::input(format!("duplicate arrow label {l:?}")));
        }
        let mut out = FiniteGroupoid {
            objects,
            dom,
            cod,
            comp: table,
            inv,
            unit: Vec::new(),
            arrow_labels: labels,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn from_fn(
        objects: usize,
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: impl Fn(usize, usize) -> usize,
        inv: impl Fn(usize) -> usize,
        arrow_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = dom.len();
        let mut triples = Vec::new();
        for g in 0..m {
            for h in 0..m {
                if dom[g] == cod[h] {
                    triples.push((g, h, comp(g, h)));
                }
            }
        }
        let inv = (0..m).map(inv).collect();
        Self::new(objects, dom, cod, &triples, inv, arrow_labels)
    }

    fn validate(&mut self) -> Result<()> {
        let m = self.dom.len();
        let bad = |msg: String| Err(Error::input(msg));
        for g in 0..m {
            for h in 0..m {
                let c = self.comp[g * m + h];
                if self.dom[g] == self.cod[h] {
                    if c == NONE {
                        return bad(format!("composition of {g} after {h} is missing"));
                    }
                    let c = c as usize;
                    if self.dom[c] != self.dom[h] || self.cod[c] != self.cod[g] {
                        return bad(format!("{g}∘{h} has the wrong domain or codomain"));
                    }
                }
            }
        }
        for g in 0..m {
            for h in 0..m {
                let Some(gh) = self.compose(g, h) else { continue };
                for k in 0..m {
                    let Some(hk) = self.compose(h, k) else { continue };
                    if self.compose(gh, k) != self.compose(g, hk) {
                        return bad(format!("composition is not associative at ({g}, {h}, {k})"));
                    }
                }
            }
        }
        let mut unit = Vec::with_capacity(self.objects);
        for x in 0..self.objects {
            let loops: Vec<usize> = (0..m)
                .filter(|&u| self.dom[u] == x && self.cod[u] == x && self.compose(u, u) == Some(u))
                .collect();
            if loops.len() != 1 {
                return bad(format!("object {x} has {} identity candidates", loops.len()));
            }
            unit.push(loops[0]);
        }
        for g in 0..m {
            if self.compose(unit[self.cod[g]], g) != Some(g) || self.compose(g, unit[self.dom[g]]) != Some(g) {
                return bad(format!("identities do not act trivially on arrow {g}"));
            }
            let i = self.inv[g];
            if self.compose(g, i) != Some(unit[self.cod[g]]) || self.compose(i, g) != Some(unit[self.dom[g]]) {
                return bad(format!("arrow {i} is not an inverse of arrow {g}"));
            }
        }
        self.unit = unit;
        Ok(())
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn arrows(&self) -> usize {
        self.dom.len()
    }

    pub fn dom(&self, g: usize) -> usize {
        self.dom[g]
    }

    pub fn cod(&self, g: usize) -> usize {
        self.cod[g]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn arrow_label(&self, g: usize) -> &str {
        &self.arrow_labels[g]
    }

    /// `g∘h`, defined when `dom g = cod h`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let c = self.comp[g * self.arrows() + h];
        (c != NONE).then_some(c as usize)
    }

    /// Every composable pair as `(g, h, g∘h)`, in index order.
    pub fn composition_triples(&self) -> Vec<(usize, usize, usize)> {
        let m = self.arrows();
        (0..m)
            .flat_map(|g| (0..m).filter_map(move |h| self.compose(g, h).map(|c| (g, h, c))))
            .collect()
    }

    /// Pair groupoid on `n` objects. Arrow `z*n + x` goes from `x` to `z`,
    /// matching the bit of the pair `(z, x)` in [`RelQuantale`].
    pub fn pair(n: usize) -> Result<Self> {
        Self::group_times_pair(1, n)
    }

    /// `Z_k × pair(n)`: arrow `g*n*n + z*n + x` is the group element `g` from
    /// `x` to `z`.
    pub fn group_times_pair(k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("a group needs at least one element"));
        }
        let nn = n * n;
        let m = k * nn;
        let split = |a: usize| (a / nn, (a % nn) / n, a % n);
        let dom = (0..m).map(|a| split(a).2).collect();
        let cod = (0..m).map(|a| split(a).1).collect();
        let labels = (0..m)
            .map(|a| {
                let (g, z, x) = split(a);
                if k == 1 {
                    format!("({z},{x})")
                } else {
                    format!("{g}:({z},{x})")
                }
            })
            .collect();
        Self::from_fn(
            n,
            dom,
            cod,
            |a, b| {
                let (g, z, _) = split(a);
                let (h, _, x) = split(b);
                ((g + h) % k) * nn + z * n + x
            },
            |a| {
                let (g, z, x) = split(a);
                ((k - g) % k) * nn + x * n + z
            },
            Some(labels),
        )
    }

    /// `n` objects and their identities only.
    pub fn discrete(n: usize) -> Result<Self> {
        let labels = (0..n).map(|x| format!("1_{x}")).collect();
        Self::from_fn(n, (0..n).collect(), (0..n).collect(), |a, _| a, |a| a, Some(labels))
    }

    /// One object, one arrow.
    pub fn trivial() -> Self {
        Self::discrete(1).expect("valid")
    }

    pub fn empty() -> Self {
        Self::discrete(0).expect("valid")
    }

    /// `self ⊔ other`, with the arrows of `other` shifted after those of `self`
/// and their labels suffixed by the object offset.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Result<Self> {
        let (o, m) = (self.objects, self.arrows());
        let dom = self.dom.iter().copied().chain(other.dom.iter().map(|x| x + o)).collect();
        let cod = self.cod.iter().copied().chain(other.cod.iter().map(|x| x + o)).collect();
        let inv = self.inv.iter().copied().chain(other.inv.iter().map(|g| g + m)).collect();
        let triples: Vec<_> = self
            .composition_triples()
            .into_iter()
            .chain(other.composition_triples().into_iter().map(|(g, h, c)| (g + m, h + m, c + m)))
            .collect();
        let labels = self
            .arrow_labels
            .iter()
            .cloned()
            .chain(other.arrow_labels.iter().map(|l| format!("{l}@{o}")))
            .collect();
        Self::new(o + other.objects, dom, cod, &triples, inv, Some(labels))
    }

    /// A disjoint union of components `Z_k × pair(n)` with at most
    /// `max_arrows` arrows in total, chosen from `seed`.
    pub fn random(seed: u64, max_arrows: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty();
        let mut left = max_arrows;
        loop {
            let shapes: Vec<(usize, usize)> = (1..=left)
                .flat_map(|k| (1..=left).map(move |n| (k, n)))
                .filter(|&(k, n)| k * n * n <= left)
                .collect();
            if shapes.is_empty() || (g.arrows() > 0 && rng.gen_bool(0.3)) {
                return Ok(g);
            }
            let (k, n) = shapes[rng.gen_range(0..shapes.len())];
            g = g.disjoint_union(&Self::group_times_pair(k, n)?)?;
            left -= k * n * n;
        }
    }

    /// Full subgroupoid on the objects in `ymask`, with the original index of
    /// each kept arrow.
    pub fn full_subgroupoid(&self, ymask: usize) -> Result<(Self, Vec<usize>)> {
        let in_y = |x: usize| ymask >> x & 1 == 1;
        let objs: Vec<usize> = (0..self.objects).filter(|&x| in_y(x)).collect();
        let obj_pos = |x: usize| objs.binary_search(&x).expect("kept object");
        let kept: Vec<usize> = (0..self.arrows())
            .filter(|&g| in_y(self.dom[g]) && in_y(self.cod[g]))
            .collect();
        let pos = |g: usize| kept.binary_search(&g).expect("kept arrow");
        let triples: Vec<_> = self
            .composition_triples()
            .into_iter()
            .filter(|&(g, h, _)| kept.binary_search(&g).is_ok() && kept.binary_search(&h).is_ok())
            .map(|(g, h, c)| (pos(g), pos(h), pos(c)))
            .collect();
        let sub = Self::new(
            objs.len(),
            kept.iter().map(|&g| obj_pos(self.dom[g])).collect(),
            kept.iter().map(|&g| obj_pos(self.cod[g])).collect(),
            &triples,
            kept.iter().map(|&g| pos(self.inv[g])).collect(),
            Some(kept.iter().map(|&g| self.arrow_labels[g].clone()).collect()),
        )?;
        Ok((sub, kept))
    }

    /// Orbit of each object, numbered by least member.
    pub fn orbits(&self) -> Vec<usize> {
        let mut orbit = vec![usize::MAX; self.objects];
        let mut next = 0;
        for x in 0..self.objects {
            if orbit[x] != usize::MAX {
                continue;
            }
            for g in 0..self.arrows() {
                if self.dom[g] == x {
                    orbit[self.cod[g]] = next;
                }
            }
            next += 1;
        }
        orbit
    }

    /// Space of orbits as a groupoid with identities only, with the orbit of
    /// each object.
    pub fn orbit_groupoid(&self) -> Result<(Self, Vec<usize>)> {
        let orbit = self.orbits();
        let count = orbit.iter().copied().max().map_or(0, |k| k + 1);
        Ok((Self::discrete(count)?, orbit))
    }
}

/// `O(G)`: subsets of arrows with pointwise operations.
#[derive(Debug, Clone)]
pub struct OpensQuantale {
    g: FiniteGroupoid,
    powerset: PowersetLattice,
    /// Arrows with codomain `x`.
    into: Vec<usize>,
    unit: usize,
}

impl OpensQuantale {
    pub fn new(g: FiniteGroupoid, cfg: &Config) -> Result<Self> {
        let m = g.arrows();
        if m > MAX_ARROWS {
            return Err(Error::Resource {
                what: "quantale of a groupoid".into(),
                size: m,
                limit: MAX_ARROWS,
            });
        }
        cfg.ensure_carrier("quantale of a groupoid", 1 << m)?;
        let mut into = vec![0; g.objects()];
        for a in 0..m {
            into[g.cod(a)] |= 1 << a;
        }
        let unit = (0..g.objects()).fold(0, |acc, x| acc | 1 << g.unit(x));
        Ok(OpensQuantale {
            powerset: PowersetLattice::new(m as u32)?,
            g,
            into,
            unit,
        })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.g
    }

    /// The open set of the given arrows.
    pub fn from_arrows(&self, arrows: impl IntoIterator<Item = usize>) -> Elem {
        arrows.into_iter().fold(0, |acc, a| acc | 1 << a)
    }

    pub fn arrows_of(&self, u: Elem) -> Vec<usize> {
        bits(u).collect()
    }

    /// Identities on the objects in `ymask`.
    pub fn units_on(&self, ymask: usize) -> Elem {
        (0..self.g.objects())
            .filter(|&x| ymask >> x & 1 == 1)
            .fold(0, |acc, x| acc | 1 << self.g.unit(x))
    }

    pub fn is_bisection(&self, u: Elem) -> bool {
        let (mut doms, mut cods) = (0usize, 0usize);
        for a in bits(u) {
            let (d, c) = (1 << self.g.dom(a), 1 << self.g.cod(a));
            if doms & d != 0 || cods & c != 0 {
                return false;
            }
            doms |= d;
            cods |= c;
        }
        true
    }
}

fn bits(mut u: usize) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (u != 0).then(|| {
            let a = u.trailing_zeros() as usize;
            u &= u - 1;
            a
        })
    })
}

impl Lattice for OpensQuantale {
    fn len(&self) -> usize {
        self.powerset.len()
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
        self.powerset.top()
    }
    fn label(&self, a: Elem) -> String {
        let body: Vec<&str> = bits(a).map(|g| self.g.arrow_label(g)).collect();
        format!("{{{}}}", body.join(","))
    }
}

impl Quantale for OpensQuantale {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut out = 0;
        for u in bits(a) {
            for v in bits(b & self.into[self.g.dom(u)]) {
                out |= 1 << self.g.compose(u, v).expect("composable");
            }
        }
        out
    }

    fn star(&self, a: Elem) -> Elem {
        bits(a).fold(0, |acc, u| acc | 1 << self.g.inverse(u))
    }

    fn unit(&self) -> Option<Elem> {
        Some(self.unit)
    }
}

pub fn opens_quantale(g: &FiniteGroupoid, cfg: &Config) -> Result<OpensQuantale> {
    OpensQuantale::new(g.clone(), cfg)
}

/// `I(G)` as an inverse semigroup, with the arrow set of each element.
pub fn bisections(o: &OpensQuantale) -> Result<(InverseSemigroup, Vec<Elem>)> {
    let sets: Vec<Elem> = (0..o.len()).filter(|&u| o.is_bisection(u)).collect();
    let s = InverseSemigroup::from_quantale_subset(o, &sets)?;
    Ok((s, sets))
}

/// The germ groupoid of a pseudogroup whose idempotents form an atomic
/// boolean lattice.
#[derive(Debug, Clone)]
pub struct GermGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Objects as idempotents of `S`.
    pub atoms: Vec<Elem>,
    /// Arrow `i` is the germ `[s, x]` with least `(s, x)` representative; its
    /// value `s·x` in `S` is `germ_values[i]`.
    pub representatives: Vec<(Elem, Elem)>,
    pub germ_values: Vec<Elem>,
}

/// Builds the germ groupoid: objects are the atoms of `E(S)`, arrows are
/// classes `[s, x]` for atoms `x <= s⁻¹s` with `[s, x] = [t, x]` iff `sx = tx`.
pub fn germ_groupoid(s: &InverseSemigroup) -> Result<GermGroupoid> {
    let (idem, elat) = s.idempotent_lattice()?;
    if !is_atomic_boolean(&elat) {
        return Err(Error::Unsupported(
            "germ groupoid needs an atomic boolean lattice of idempotents".into(),
        ));
    }
    let atoms: Vec<Elem> = atoms(&elat).into_iter().map(|i| idem[i]).collect();
    let atom_pos: HashMap<Elem, usize> = atoms.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // germ value s·x determines the class; keep the least representative
    let mut germs: HashMap<Elem, (Elem, Elem)> = HashMap::new();
    for a in 0..s.len() {
        let d = s.mul(s.inverse(a), a);
        for &x in &atoms {
            if s.leq(x, d) {
                germs.entry(s.mul(a, x)).or_insert((a, x));
            }
        }
    }
    let mut values: Vec<Elem> = germs.keys().copied().collect();
    values.sort_unstable();
    let arrow_of: HashMap<Elem, usize> = values.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let representatives: Vec<(Elem, Elem)> = values.iter().map(|v| germs[v]).collect();
    let obj = |e: Elem| -> Result<usize> {
        atom_pos
            .get(&e)
            .copied()
            .ok_or_else(|| Error::violation("germ endpoint is not an atom", vec![e]))
    };
    let mut dom = Vec::with_capacity(values.len());
    let mut cod = Vec::with_capacity(values.len());
    for &(a, x) in &representatives {
        dom.push(obj(x)?);
        cod.push(obj(s.mul(s.mul(a, x), s.inverse(a)))?);
    }
    let mut triples = Vec::new();
    for (i, &(a, x)) in representatives.iter().enumerate() {
        for (j, &(c, y)) in representatives.iter().enumerate() {
            // [a, x]∘[c, y] = [a·c, y] when x = cod [c, y]
            if dom[i] == cod[j] {
                let v = s.mul(s.mul(a, c), y);
                let k = *arrow_of
                    .get(&v)
                    .ok_or_else(|| Error::violation("composite germ missing", vec![a, x, c, y]))?;
                triples.push((i, j, k));
            }
        }
    }
    let inv = representatives
        .iter()
        .map(|&(a, x)| {
            // [a, x]⁻¹ = [a⁻¹, a x a⁻¹]
            let v = s.mul(s.inverse(a), s.mul(s.mul(a, x), s.inverse(a)));
            arrow_of
                .get(&v)
                .copied()
                .ok_or_else(|| Error::violation("inverse germ missing", vec![a, x]))
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = representatives
        .iter()
        .map(|&(a, x)| format!("[{},{}]", s.label(a), s.label(x)))
        .collect();
    let groupoid = FiniteGroupoid::new(atoms.len(), dom, cod, &triples, inv, Some(labels))?;
    Ok(GermGroupoid {
        groupoid,
        atoms,
        representatives,
        germ_values: values,
    })
}

/// `J ↦ {[s, x] : s·x ∈ J}` from `L∨(S)` to `O(germ(S))`, checked to be an
/// isomorphism of involutive quantales.
pub fn check_germ_opens_iso(
    germ: &GermGroupoid,
    completion: &Completion,
    cfg: &Config,
) -> Result<(Vec<Elem>, LawReport)> {
    let o = opens_quantale(&germ.groupoid, cfg)?;
    let map: Vec<Elem> = completion
        .ideals()
        .iter()
        .map(|j| {
            o.from_arrows(
                germ.germ_values
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| j.contains(v))
                    .map(|(i, _)| i),
            )
        })
        .collect();
    let r = check_isomorphism(completion.quantale(), &o, &map)?;
    Ok((map, r))
}

/// Object and arrow bijections of a groupoid isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidIso {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// Searches for an isomorphism `g → h` by backtracking over arrows, after
/// matching object and arrow counts and per-object loop and degree counts.
pub fn find_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<GroupoidIso> {
    if g.objects() != h.objects() || g.arrows() != h.arrows() {
        return None;
    }
    let profile = |k: &FiniteGroupoid, x: usize| {
        let loops = (0..k.arrows()).filter(|&a| k.dom(a) == x && k.cod(a) == x).count();
        let out = (0..k.arrows()).filter(|&a| k.dom(a) == x).count();
        (loops, out)
    };
    let gp: Vec<_> = (0..g.objects()).map(|x| profile(g, x)).collect();
    let hp: Vec<_> = (0..h.objects()).map(|x| profile(h, x)).collect();
    let mut a = gp.clone();
    let mut b = hp.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let mut search = IsoSearch {
        g,
        h,
        gp: &gp,
        hp: &hp,
        obj: vec![usize::MAX; g.objects()],
        obj_used: vec![false; h.objects()],
        arr: vec![usize::MAX; g.arrows()],
        arr_used: vec![false; h.arrows()],
    };
    search.objects(0).then(|| GroupoidIso {
        objects: search.obj,
        arrows: search.arr,
    })
}

struct IsoSearch<'a> {
    g: &'a FiniteGroupoid,
    h: &'a FiniteGroupoid,
    gp: &'a [(usize, usize)],
    hp: &'a [(usize, usize)],
    obj: Vec<usize>,
    obj_used: Vec<bool>,
    arr: Vec<usize>,
    arr_used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn objects(&mut self, x: usize) -> bool {
        if x == self.g.objects() {
            return self.arrows(0);
        }
        for y in 0..self.h.objects() {
            if self.obj_used[y] || self.gp[x] != self.hp[y] {
                continue;
            }
            self.obj[x] = y;
            self.obj_used[y] = true;
            if self.objects(x + 1) {
                return true;
            }
            self.obj_used[y] = false;
        }
        false
    }

    fn arrows(&mut self, a: usize) -> bool {
        let (g, h) = (self.g, self.h);
        if a == g.arrows() {
            return true;
        }
        let (d, c) = (self.obj[g.dom(a)], self.obj[g.cod(a)]);
        for b in 0..h.arrows() {
            if self.arr_used[b] || h.dom(b) != d || h.cod(b) != c {
                continue;
            }
            self.arr[a] = b;
            if self.consistent(a) {
                self.arr_used[b] = true;
                if self.arrows(a + 1) {
                    return true;
                }
                self.arr_used[b] = false;
            }
        }
        self.arr[a] = usize::MAX;
        false
    }

    /// Composites among the arrows `0..=a` that involve `a` are preserved.
    fn consistent(&self, a: usize) -> bool {
        let (g, h) = (self.g, self.h);
        (0..=a).all(|p| {
            (0..=a).all(|q| match g.compose(p, q) {
                Some(pq) if pq <= a && (p == a || q == a || pq == a) => {
                    h.compose(self.arr[p], self.arr[q]) == Some(self.arr[pq])
                }
                _ => true,
            })
        })
    }
}

/// Checks that `iso` preserves dom, cod, composition and is bijective.
pub fn verify_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid, iso: &GroupoidIso) -> bool {
    let mut seen = vec![false; h.arrows()];
    iso.arrows.len() == g.arrows()
        && iso.arrows.iter().all(|&b| b < h.arrows() && !std::mem::replace(&mut seen[b], true))
        && (0..g.arrows()).all(|a| {
            h.dom(iso.arrows[a]) == iso.objects[g.dom(a)]
                && h.cod(iso.arrows[a]) == iso.objects[g.cod(a)]
        })
        && g
            .composition_triples()
            .into_iter()
            .all(|(p, q, c)| h.compose(iso.arrows[p], iso.arrows[q]) == Some(iso.arrows[c]))
}

/// The isomorphism between `I_R(2^{X×X})` and the partial bijections of `Y/R`.
#[derive(Debug, Clone)]
pub struct QuotientIso {
    pub n: usize,
    pub r: Elem,
    /// Points of `Y` by class: `class_of[y]` is `None` outside `Y`.
    pub class_of: Vec<Option<usize>>,
    pub classes: usize,
    /// `I_R(Q)` in index order, as relations on `X`.
    pub units: Vec<Elem>,
    pub semigroup: InverseSemigroup,
    /// `I(Q')` for `Q'` the relations on `Y/R`, in index order.
    pub quotient_units: Vec<Elem>,
    pub quotient_semigroup: InverseSemigroup,
    /// `α_U` for each `U`, as an index into `quotient_units`.
    pub alpha: Vec<usize>,
    /// `U_α` for each `α`, as an index into `units`.
    pub u_of: Vec<usize>,
    pub report: LawReport,
}

/// Builds `U ↦ α_U` and `α ↦ U_α` for a partial equivalence relation `R` on
/// `n` points and checks both round trips and that `α_(-)` is a homomorphism
/// of pseudogroups.
pub fn quotient_iso(n: usize, r: Elem, cfg: &Config) -> Result<QuotientIso> {
    let q = RelQuantale::new(n)?;
    if r >= q.len() {
        return Err(Error::input(format!("relation {r} outside the carrier")));
    }
    if q.star(r) != r || q.mul(r, r) != r {
        return Err(Error::precondition(format!(
            "{} is not a partial equivalence relation",
            q.label(r)
        )));
    }
    let mut class_of = vec![None; n];
    let mut classes = 0;
    for y in 0..n {
        if q.contains(r, y, y) && class_of[y].is_none() {
            for z in 0..n {
                if q.contains(r, z, y) {
                    class_of[z] = Some(classes);
                }
            }
            classes += 1;
        }
    }
    let units = crate::projection::partial_units_rel(&q, r, cfg)?;
    let semigroup = InverseSemigroup::from_quantale_subset(&q, &units)?;
    let qq = RelQuantale::new(classes)?;
    let quotient_units = crate::quantale::partial_units(&qq, cfg)?;
    let quotient_semigroup = InverseSemigroup::from_quantale_subset(&qq, &quotient_units)?;
    let class_mask = |c: usize| (0..n).filter(|&y| class_of[y] == Some(c)).fold(0, |m, y| m | 1 << y);

    let mut report = LawReport::new();
    let mut alpha = Vec::with_capacity(units.len());
    let mut bad_class = None;
    for (i, &u) in units.iter().enumerate() {
        // dom α_U = {[y] : (y', y) ∈ U}, α_U([y]) = {y' : (y', y) ∈ U}
        let mut rel = 0;
        for y in 0..n {
            let image: usize = (0..n).filter(|&z| q.contains(u, z, y)).fold(0, |m, z| m | 1 << z);
            if image == 0 {
                continue;
            }
            let (Some(cy), Some(cz)) = (class_of[y], class_of[image.trailing_zeros() as usize]) else {
                bad_class.get_or_insert(i);
                continue;
            };
            if image != class_mask(cz) {
                bad_class.get_or_insert(i);
            }
            rel |= qq.pair(cz, cy);
        }
        alpha.push(quotient_units.binary_search(&rel).unwrap_or_else(|_| {
            bad_class.get_or_insert(i);
            0
        }));
    }
    report.record("alpha_is_partial_bijection_of_classes", bad_class.map(|i| vec![units[i]]));

    let mut u_of = Vec::with_capacity(quotient_units.len());
    let mut bad_u = None;
    for (j, &a) in quotient_units.iter().enumerate() {
        // U_α = {(y', y) : [y] ∈ dom α, α([y]) = [y']}
        let mut u = 0;
        for (cz, cy) in qq.pairs(a) {
            for y in (0..n).filter(|&y| class_of[y] == Some(cy)) {
                for z in (0..n).filter(|&z| class_of[z] == Some(cz)) {
                    u |= q.pair(z, y);
                }
            }
        }
        u_of.push(units.binary_search(&u).unwrap_or_else(|_| {
            bad_u.get_or_insert(j);
            0
        }));
    }
    report.record("u_alpha_in_relative_units", bad_u.map(|j| vec![quotient_units[j]]));
    report.record(
        "alpha_of_u_alpha",
        first_elem(quotient_units.len(), |j| alpha[u_of[j]] != j).map(|[j]| [quotient_units[j]]),
    );
    report.record(
        "u_of_alpha_u",
        first_elem(units.len(), |i| u_of[alpha[i]] != i).map(|[i]| [units[i]]),
    );
    let hom = check_pseudogroup_hom(&semigroup, &quotient_semigroup, &alpha)?;
    for c in hom.checks {
        report.record(c.name, c.witness.map(|w| w.into_iter().map(|i| units[i]).collect::<Vec<_>>()));
    }
    Ok(QuotientIso {
        n,
        r,
        class_of,
        classes,
        units,
        semigroup,
        quotient_units,
        quotient_semigroup,
        alpha,
        u_of,
        report,
    })
}

/// Checks `germ(I_R(Q)) ≅ pair(Y/R)` and the completion against `O(germ)`.
pub fn quotient_groupoid_check(iso: &QuotientIso, cfg: &Config) -> Result<LawReport> {
    let germ = germ_groupoid(&iso.semigroup)?;
    let pair = FiniteGroupoid::pair(iso.classes)?;
    let mut r = LawReport::new();
    let found = find_isomorphism(&germ.groupoid, &pair);
    r.record(
        "germ_groupoid_is_pair_groupoid_on_classes",
        (!found.as_ref().is_some_and(|f| verify_isomorphism(&germ.groupoid, &pair, f))).then(Vec::new),
    );
    let completion = compatible_ideals(&iso.semigroup, cfg)?;
    let (_, opens) = check_germ_opens_iso(&germ, &completion, cfg)?;
    r.extend(opens);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{check_axioms, partial_units, projections};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn pair_groupoid_quantale_is_relations() {
        for n in 1..=2 {
            let o = opens_quantale(&FiniteGroupoid::pair(n).unwrap(), &cfg()).unwrap();
            let r = RelQuantale::new(n).unwrap();
            assert_eq!(o.len(), r.len());
            assert_eq!(o.unit(), r.unit());
            for a in 0..o.len() {
                assert_eq!(o.star(a), r.star(a));
                for b in 0..o.len() {
                    assert_eq!(o.mul(a, b), r.mul(a, b));
                }
            }
        }
    }

    #[test]
    fn trivial_and_empty() {
        let o = opens_quantale(&FiniteGroupoid::trivial(), &cfg()).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o.unit(), Some(1));
        assert_eq!(o.mul(1, 1), 1);
        let e = opens_quantale(&FiniteGroupoid::empty(), &cfg()).unwrap();
        assert_eq!(e.len(), 1);
        assert!(check_axioms(&e, &cfg()).unwrap().passed());
    }

    #[test]
    fn malformed_groupoids_are_rejected() {
        // a single loop with no identity
        let err = FiniteGroupoid::new(1, vec![0, 0], vec![0, 0], &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)], vec![0, 1], None);
        assert!(err.is_err());
        // missing composite
        assert!(FiniteGroupoid::new(1, vec![0], vec![0], &[], vec![0], None).is_err());
    }

    #[test]
    fn bisections_match_partial_units() {
        for g in [
            FiniteGroupoid::pair(2).unwrap(),
            FiniteGroupoid::trivial(),
            FiniteGroupoid::discrete(3).unwrap(),
            FiniteGroupoid::group_times_pair(2, 1).unwrap(),
            FiniteGroupoid::pair(1).unwrap().disjoint_union(&FiniteGroupoid::group_times_pair(3, 1).unwrap()).unwrap(),
        ] {
            let o = opens_quantale(&g, &cfg()).unwrap();
            let (_, sets) = bisections(&o).unwrap();
            assert_eq!(sets, partial_units(&o, &cfg()).unwrap());
        }
        let o = opens_quantale(&FiniteGroupoid::pair(2).unwrap(), &cfg()).unwrap();
        assert_eq!(bisections(&o).unwrap().1.len(), 7);
        let o = opens_quantale(&FiniteGroupoid::trivial(), &cfg()).unwrap();
        assert_eq!(bisections(&o).unwrap().1, vec![0, 1]);
        let o = opens_quantale(&FiniteGroupoid::discrete(3).unwrap(), &cfg()).unwrap();
        assert_eq!(bisections(&o).unwrap().1, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn germs_of_bisections_recover_the_groupoid() {
        for g in [
            FiniteGroupoid::pair(2).unwrap(),
            FiniteGroupoid::pair(3).unwrap(),
            FiniteGroupoid::group_times_pair(2, 2).unwrap(),
            FiniteGroupoid::discrete(2).unwrap().disjoint_union(&FiniteGroupoid::group_times_pair(3, 1).unwrap()).unwrap(),
        ] {
            let o = opens_quantale(&g, &cfg()).unwrap();
            let (s, _) = bisections(&o).unwrap();
            let germ = germ_groupoid(&s).unwrap();
            let iso = find_isomorphism(&germ.groupoid, &g).expect("isomorphic");
            assert!(verify_isomorphism(&germ.groupoid, &g, &iso));
        }
    }

    #[test]
    fn germ_of_two_chain_is_trivial() {
        let s = InverseSemigroup::idempotent_chain(2).unwrap();
        let germ = germ_groupoid(&s).unwrap();
        assert_eq!((germ.groupoid.objects(), germ.groupoid.arrows()), (1, 1));
    }

    #[test]
    fn non_atomic_idempotents_are_unsupported() {
        let s = InverseSemigroup::idempotent_chain(3).unwrap();
        assert!(matches!(germ_groupoid(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn isomorphism_search_distinguishes() {
        let a = FiniteGroupoid::group_times_pair(2, 1).unwrap();
        let b = FiniteGroupoid::discrete(2).unwrap();
        assert!(find_isomorphism(&a, &b).is_none());
        let c = FiniteGroupoid::group_times_pair(4, 1).unwrap();
        let d = FiniteGroupoid::group_times_pair(2, 1).unwrap().disjoint_union(&FiniteGroupoid::group_times_pair(2, 1).unwrap()).unwrap();
        assert!(find_isomorphism(&c, &d).is_none());
    }

    #[test]
    fn quotient_iso_on_three_points() {
        let q = RelQuantale::new(3).unwrap();
        for r in projections(&q, &cfg()).unwrap() {
            let iso = quotient_iso(3, r, &cfg()).unwrap();
            assert!(iso.report.passed(), "{:?}", iso.report.first_failure());
            assert!(quotient_groupoid_check(&iso, &cfg()).unwrap().passed());
        }
        // Y = {0, 1} as a single class: I_R(Q) is a 2-chain
        let r = q.square_on(0b011);
        let iso = quotient_iso(3, r, &cfg()).unwrap();
        assert_eq!(iso.units, vec![0, r]);
        assert_eq!(iso.classes, 1);
    }

    #[test]
    fn quotient_iso_rejects_non_equivalences() {
        let q = RelQuantale::new(2).unwrap();
        assert!(matches!(quotient_iso(2, q.pair(0, 1), &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn subgroupoids_and_orbits() {
        let g = FiniteGroupoid::pair(3).unwrap();
        let (sub, _) = g.full_subgroupoid(0b101).unwrap();
        assert!(find_isomorphism(&sub, &FiniteGroupoid::pair(2).unwrap()).is_some());
        let (orb, _) = g.orbit_groupoid().unwrap();
        assert_eq!((orb.objects(), orb.arrows()), (1, 1));
        let d = FiniteGroupoid::discrete(3).unwrap();
        let (orb, _) = d.orbit_groupoid().unwrap();
        assert_eq!(orb, FiniteGroupoid::discrete(3).unwrap());
    }

    #[test]
    fn random_groupoids_are_valid_and_seeded() {
        for seed in 0..20 {
            let g = FiniteGroupoid::random(seed, 6).unwrap();
            assert!(g.arrows() <= 6);
            assert_eq!(g, FiniteGroupoid::random(seed, 6).unwrap());
        }
    }
}

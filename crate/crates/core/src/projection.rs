//! Projections of stably Gelfand quantales and their pseudogroups.
//!
//! For a projection `b` the set `I_b(Q)` of partial units relative to `b` is
//! an inverse monoid with unit `b`. Its completion maps back into `Q` by
//! `φ_b(J) = ∨J`, and `b` is localic when the image `O_b(Q)` is a frame.

use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exhaust::{first_elem, first_pair};
use crate::lattice::{frame_witness, FiniteLattice};
use crate::pseudogroup::{
    check_hom_into_quantale, check_pseudogroup, compatible_ideals, extend_hom,
    verify_inverse_semigroup, Completion, InverseSemigroup,
};
use crate::quantale::{
    check_isomorphism, covering_holds, hom::inverse_map, is_projection, is_quantal_frame,
    is_stably_gelfand, is_two_sided, sandwich, Quantale,
};
use crate::report::{LawReport, Outcome};
use crate::Elem;

/// `s*s <= b`, `ss* <= b`, `sb <= s` and `bs <= s`.
pub fn is_partial_unit_rel<Q: Quantale>(q: &Q, b: Elem, s: Elem) -> bool {
    let t = q.star(s);
    q.leq(q.mul(t, s), b)
        && q.leq(q.mul(s, t), b)
        && q.leq(q.mul(s, b), s)
        && q.leq(q.mul(b, s), s)
}

/// `I_b(Q)` for an arbitrary element `b`, in index order.
pub fn partial_units_rel_raw<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<Vec<Elem>> {
    cfg.ensure_carrier("relative partial units", q.len())?;
    if b >= q.len() {
        return Err(Error::input(format!("element {b} outside 0..{}", q.len())));
    }
    Ok((0..q.len())
        .into_par_iter()
        .filter(|&s| is_partial_unit_rel(q, b, s))
        .collect())
}

/// `I_b(Q)` for a projection `b`.
pub fn partial_units_rel<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<Vec<Elem>> {
    let set = partial_units_rel_raw(q, b, cfg)?;
    require_projection(q, b)?;
    Ok(set)
}

fn require_projection<Q: Quantale>(q: &Q, b: Elem) -> Result<()> {
    if is_projection(q, b) {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "{} is not a projection",
            q.label(b)
        )))
    }
}

/// Least pair of members whose meet in `Q` is not a member. Nonempty finite
/// meets are iterated binary meets, so `None` means closure under all of them.
pub fn meet_closure_witness<Q: Quantale>(q: &Q, members: &[Elem]) -> Option<[Elem; 2]> {
    let sorted = sorted(members);
    first_pair(members.len(), |i, j| {
        sorted.binary_search(&q.meet(members[i], members[j])).is_err()
    })
    .map(|[i, j]| [members[i], members[j]])
}

fn sorted(v: &[Elem]) -> Vec<Elem> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// Two-sided elements of the subquantale `↓b`, whose top is `b`.
pub fn two_sided_below<Q: Quantale>(q: &Q, b: Elem) -> Vec<Elem> {
    (0..q.len())
        .into_par_iter()
        .filter(|&a| q.leq(a, b) && q.leq(q.mul(a, b), a) && q.leq(q.mul(b, a), a))
        .collect()
}

/// `φ_b: L∨(I_b(Q)) → Q`, tabulated over the ideals of the completion.
#[derive(Debug, Clone)]
pub struct PhiB {
    pub completion: Completion,
    pub values: Vec<Elem>,
    /// `O_b(Q)`, sorted.
    pub image: Vec<Elem>,
    pub report: LawReport,
}

impl PhiB {
    /// Least pair of distinct ideals with the same value.
    pub fn injectivity_witness(&self) -> Option<[Elem; 2]> {
        let v = &self.values;
        first_pair(v.len(), |i, j| i < j && v[i] == v[j])
    }

    pub fn is_injective(&self) -> bool {
        self.image.len() == self.values.len()
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionDossier {
    pub b: Elem,
    /// `I_b(Q)` in index order; semigroup element `i` is `partial_units_rel_b[i]`.
    pub partial_units_rel_b: Vec<Elem>,
    pub two_sided_down_b: Vec<Elem>,
    pub semigroup: InverseSemigroup,
    /// Every structural check made while building the dossier.
    pub checks: LawReport,
    pub phi: PhiB,
    pub localic: bool,
    /// Finite distributive lattices have enough points, so always true here.
    pub spatial: bool,
}

impl ProjectionDossier {
    /// The element of `Q` for semigroup index `i`.
    pub fn element(&self, i: Elem) -> Elem {
        self.partial_units_rel_b[i]
    }
}

/// Builds the pseudogroup of `b` and `φ_b`, checking each structural claim.
///
/// Requires `Q` stably Gelfand and `b` a projection. A failed check is
/// reported as [`Error::Violation`] with witnesses given as elements of `Q`.
pub fn pseudogroup_of<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<ProjectionDossier> {
    if !is_stably_gelfand(q, cfg)? {
        return Err(Error::precondition("the quantale is not stably Gelfand"));
    }
    let members = partial_units_rel(q, b, cfg)?;
    let n = members.len();
    let set = sorted(&members);
    let inside = |a: Elem| set.binary_search(&a).is_ok();
    // witnesses in `checks` are elements of `Q`
    let lift = |r: LawReport| LawReport {
        checks: r
            .checks
            .into_iter()
            .map(|mut c| {
                c.witness = c.witness.map(|w| w.into_iter().map(|i| members[i]).collect());
                c
            })
            .collect(),
    };
    let violation = |r: &LawReport, what: &str| -> Result<()> {
        match r.first_failure() {
            Some(c) => Err(Error::violation(
                format!("pseudogroup of {}: {what}: {}", q.label(b), c.name),
                c.witness.clone().unwrap_or_default(),
            )),
            None => Ok(()),
        }
    };

    let mut closure = LawReport::new();
    closure.record(
        "absorbs_b",
        first_elem(n, |i| {
            let s = members[i];
            q.mul(s, b) != s || q.mul(b, s) != s || sandwich(q, s) != s
        }),
    );
    closure.record(
        "closed_under_mul",
        first_pair(n, |i, j| !inside(q.mul(members[i], members[j]))),
    );
    closure.record(
        "closed_under_involution",
        first_elem(n, |i| !inside(q.star(members[i]))),
    );
    closure.record(
        "closed_under_nonempty_meets",
        first_pair(n, |i, j| !inside(q.meet(members[i], members[j]))),
    );
    let mut checks = lift(closure);
    checks.record("contains_b", (!inside(b)).then(|| vec![b]));
    checks.record("contains_bottom", (!inside(q.bottom())).then(|| vec![q.bottom()]));
    violation(&checks, "closure")?;

    let s = InverseSemigroup::from_quantale_subset(q, &members)?;
    checks.extend(lift(verify_inverse_semigroup(&s)));
    violation(&checks, "inverse semigroup")?;

    let pos = |a: Elem| members.binary_search(&a).expect("closed");
    let ts = two_sided_below(q, b);
    let idem: Vec<Elem> = s.idempotents().into_iter().map(|i| members[i]).collect();
    let differ: Vec<Elem> = ts
        .iter()
        .filter(|a| idem.binary_search(a).is_err())
        .chain(idem.iter().filter(|a| ts.binary_search(a).is_err()))
        .copied()
        .collect();
    checks.record(
        "idempotents_are_two_sided_below_b",
        (!differ.is_empty()).then_some(differ),
    );
    checks.record(
        "idempotent_mul_is_meet",
        first_pair(idem.len(), |i, j| q.mul(idem[i], idem[j]) != q.meet(idem[i], idem[j]))
            .map(|w| w.map(|k| idem[k])),
    );
    let (_, elat) = s.idempotent_lattice()?;
    checks.record(
        "idempotents_form_locale",
        frame_witness(&elat).map(|w| w.map(|k| idem[k])),
    );
    let unit = pos(b);
    let mut sg = LawReport::new();
    sg.record(
        "b_is_unit",
        first_elem(n, |i| s.mul(i, unit) != i || s.mul(unit, i) != i),
    );
    sg.extend(check_pseudogroup(&s)?);
    sg.record(
        "bottom_is_zero",
        (s.bottom() != Some(pos(q.bottom()))).then(Vec::new),
    );
    sg.record(
        "compatible_joins_computed_in_q",
        first_pair(n, |i, j| {
            s.compatible(i, j) && {
                let jq = q.join(members[i], members[j]);
                !inside(jq) || s.join2(i, j) != Some(pos(jq))
            }
        }),
    );
    checks.extend(lift(sg));
    violation(&checks, "pseudogroup")?;

    let inclusion = lift(check_hom_into_quantale(&s, q, &members)?);
    violation(&inclusion, "inclusion homomorphism")?;
    let phi = phi_b_of(&s, q, &members, cfg)?;
    let localic = image_is_frame(q, &phi.image, cfg)?;
    Ok(ProjectionDossier {
        b,
        partial_units_rel_b: members,
        two_sided_down_b: ts,
        semigroup: s,
        checks,
        phi,
        localic,
        spatial: true,
    })
}

fn phi_b_of<Q: Quantale>(
    s: &InverseSemigroup,
    q: &Q,
    members: &[Elem],
    cfg: &Config,
) -> Result<PhiB> {
    let completion = compatible_ideals(s, cfg)?;
    let ext = extend_hom(&completion, q, members)?;
    let image = {
        let mut v = ext.values.clone();
        v.sort_unstable();
        v.dedup();
        v
    };
    Ok(PhiB {
        completion,
        values: ext.values,
        image,
        report: ext.report,
    })
}

/// `φ_b` with its image. See [`pseudogroup_of`] for the checks made on the way.
pub fn phi_b<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<PhiB> {
    Ok(pseudogroup_of(q, b, cfg)?.phi)
}

fn image_is_frame<Q: Quantale>(q: &Q, image: &[Elem], cfg: &Config) -> Result<bool> {
    cfg.ensure_triples("frame check on O_b(Q)", image.len())?;
    let l = FiniteLattice::from_leq_with_threshold(
        image.len(),
        |i, j| q.leq(image[i], image[j]),
        cfg.lattice_table_threshold,
    )?;
    Ok(frame_witness(&l).is_none())
}

pub fn is_localic<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<bool> {
    Ok(pseudogroup_of(q, b, cfg)?.localic)
}

/// Checks that `b` is localic exactly when `φ_b` is injective. Surjectivity of
/// `p_b` is by definition injectivity of `p_b* = φ_b`, so it is the same flag.
pub fn equivalence_check_localic<Q: Quantale>(q: &Q, b: Elem, cfg: &Config) -> Result<LawReport> {
    let d = pseudogroup_of(q, b, cfg)?;
    Ok(equivalence_report(&d))
}

pub fn equivalence_report(d: &ProjectionDossier) -> LawReport {
    let injective = d.phi.is_injective();
    let mut r = LawReport::new();
    let w = d.phi.injectivity_witness().map(|w| w.to_vec()).unwrap_or_default();
    r.record("localic_iff_phi_injective", (d.localic != injective).then_some(w));
    r.record("phi_injective_iff_p_b_surjective", None::<Vec<Elem>>);
    r
}

/// Injectivity and meet preservation of `φ_b` on stably Gelfand quantal
/// frames, plus `φ_b(1) = 1` when `∨I_b(Q) = 1`.
///
/// Skips when a hypothesis fails. A failed assertion is [`Error::Violation`]
/// with ideal indices as the witness.
pub fn thm_invqfr_check<Q: Quantale>(
    q: &Q,
    b: Elem,
    cfg: &Config,
) -> Result<Outcome<(ProjectionDossier, LawReport)>> {
    require_projection(q, b)?;
    if !is_stably_gelfand(q, cfg)? {
        return Ok(Outcome::Skip("stably_gelfand"));
    }
    if !is_quantal_frame(q, cfg)? {
        return Ok(Outcome::Skip("quantal_frame"));
    }
    let d = pseudogroup_of(q, b, cfg)?;
    let r = invqfr_report(q, &d)?.into_violation("φ_b on a stably Gelfand quantal frame")?;
    Ok(Outcome::Pass((d, r)))
}

fn invqfr_report<Q: Quantale>(q: &Q, d: &ProjectionDossier) -> Result<LawReport> {
    let c = &d.phi.completion;
    let v = &d.phi.values;
    let m = c.len();
    let mut r = LawReport::new();
    r.record("phi_injective", d.phi.injectivity_witness());
    r.record(
        "phi_preserves_binary_meets",
        first_pair(m, |i, j| {
            let mut meet = c.ideal(i).members().clone();
            meet.intersect_with(c.ideal(j).members());
            match c.index_of_set(&meet) {
                Some(k) => v[k] != q.meet(v[i], v[j]),
                None => true,
            }
        }),
    );
    let covers = q.join_all(d.partial_units_rel_b.iter().copied()) == q.top();
    r.record(
        "phi_preserves_top_when_covering",
        (covers && v[m - 1] != q.top()).then(|| vec![m - 1]),
    );
    Ok(r)
}

/// The isomorphism `φ_e: L∨(I(Q)) → Q` with its inverse.
#[derive(Debug, Clone)]
pub struct IqfsIso {
    pub dossier: ProjectionDossier,
    pub inverse: Vec<Elem>,
    pub report: LawReport,
}

/// Checks that a stably Gelfand unital quantal frame whose partial units
/// cover it is isomorphic to the completion of its partial units.
///
/// When a hypothesis fails nothing is claimed and its name is returned.
pub fn cor_iqfs_check<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Outcome<IqfsIso>> {
    let Some(e) = q.unit() else {
        return Ok(Outcome::Skip("unital"));
    };
    if !is_stably_gelfand(q, cfg)? {
        return Ok(Outcome::Skip("stably_gelfand"));
    }
    if !is_quantal_frame(q, cfg)? {
        return Ok(Outcome::Skip("quantal_frame"));
    }
    if !covering_holds(q, cfg)? {
        return Ok(Outcome::Skip("covering"));
    }
    let dossier = pseudogroup_of(q, e, cfg)?;
    let values = &dossier.phi.values;
    let mut report = check_isomorphism(dossier.phi.completion.quantale(), q, values)?;
    report.extend(invqfr_report(q, &dossier)?);
    let report = report.into_violation("φ_e on a covered stably Gelfand unital quantal frame")?;
    let inverse = inverse_map(values, q.len())
        .ok_or_else(|| Error::violation("φ_e is not a bijection", vec![]))?;
    Ok(Outcome::Pass(IqfsIso {
        dossier,
        inverse,
        report,
    }))
}

/// `ts(Q)` equals `I_1(Q)`: the two filters agree element by element.
pub fn top_relative_units_are_two_sided<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    cfg.ensure_carrier("two-sided comparison", q.len())?;
    let top = q.top();
    Ok(first_elem(q.len(), |a| is_partial_unit_rel(q, top, a) != is_two_sided(q, a)).map(|[a]| a))
}

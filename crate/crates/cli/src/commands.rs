//! The subcommands, each producing a [`Report`].

use qlab_core::enumerate::{search, Constraints};
use qlab_core::groupoid::{FiniteGroupoid, OpensQuantale};
use qlab_core::maps::{comparison_map, make_map, split_check, QuantaleMap};
use qlab_core::projection::{
    cor_iqfs_check, equivalence_report, pseudogroup_of, thm_invqfr_check, ProjectionDossier,
};
use qlab_core::quantale::{check_axioms, classify, is_stably_gelfand, projections, AnyQuantale, Flag};
use qlab_core::report::Outcome;
use qlab_core::{Config, Error, Lattice, RelQuantale};

use crate::format::{quantale_blocks, InstanceFile, Resolved};
use crate::report::{Report, Row, Status};

/// Where an instance comes from.
#[derive(Debug, Clone)]
pub enum Source {
    Rel(usize),
    Text(String),
}

/// Failures that are not verdicts: bad input or exceeded bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn load(src: &Source) -> Result<Resolved> {
    match src {
        Source::Rel(n) => Ok(Resolved {
            id: format!("rel:{n}"),
            quantale: Some(AnyQuantale::Rel(RelQuantale::new(*n)?)),
            ..Resolved::default()
        }),
        Source::Text(t) => {
            let f = InstanceFile::parse(t).map_err(|e| InputError(e.to_string()))?;
            f.resolve().map_err(|e| InputError(e.to_string()))
        }
    }
}

fn subject(r: &Resolved, cfg: &Config) -> Result<AnyQuantale> {
    r.subject(cfg)?
        .ok_or_else(|| InputError("the instance has no quantale, groupoid or inverse-semigroup block".into()))
}

/// The subject, rejected unless it satisfies the axioms.
fn quantale_subject(r: &Resolved, cfg: &Config) -> Result<AnyQuantale> {
    let q = subject(r, cfg)?;
    require_axioms(&q, cfg)?;
    Ok(q)
}

fn require_axioms(q: &AnyQuantale, cfg: &Config) -> Result<()> {
    match check_axioms(q, cfg)?.first_failure() {
        None => Ok(()),
        Some(c) => {
            let w: Vec<String> = c.witness.iter().flatten().map(|&a| q.label(a)).collect();
            Err(InputError(format!(
                "not an involutive quantale: {} fails at [{}]",
                c.name,
                w.join(", ")
            )))
        }
    }
}

/// A theorem violation becomes a FAIL verdict; anything else is an input
/// error.
fn violation(rep: &mut Report, prefix: &str, e: Error) -> Result<()> {
    match e {
        Error::Violation { check, witness } => {
            let w = witness.iter().map(|i| format!("#{i}")).collect();
            rep.push(format!("{prefix}{check}"), Status::Fail, w, Some("theorem violation".into()));
            Ok(())
        }
        other => Err(other.into()),
    }
}

pub fn check(src: &Source, which: &str, cfg: &Config) -> Result<Report> {
    if !matches!(which, "axioms" | "class" | "all") {
        return Err(InputError(format!("unknown check {which:?}, expected axioms, class or all")));
    }
    let r = load(src)?;
    let q = subject(&r, cfg)?;
    let mut rep = Report::new(format!("check {which}"), &r.id, cfg);
    if which != "class" {
        let laws = check_axioms(&q, cfg)?;
        rep.laws("axiom:", &laws, |a| q.label(a));
    }
    if which != "axioms" {
        let c = classify(&q, cfg)?;
        for (name, flag) in c.flags() {
            let check = format!("class:{name}");
            match flag {
                Flag::Holds => rep.pass(check),
                Flag::Fails(w) => rep.push(check, Status::Fail, w.iter().map(|&a| q.label(a)).collect(), None),
                Flag::NotApplicable => rep.skip(check, "unital"),
            }
        }
    }
    Ok(rep)
}

fn select_projections(q: &AnyQuantale, only: Option<&str>, cfg: &Config) -> Result<Vec<usize>> {
    let all = projections(q, cfg)?;
    match only {
        None => Ok(all),
        Some(label) => all
            .into_iter()
            .find(|&b| q.label(b) == label)
            .map(|b| vec![b])
            .ok_or_else(|| InputError(format!("{label:?} is not a projection"))),
    }
}

fn dossier_row(q: &AnyQuantale, d: &ProjectionDossier) -> Row {
    Row {
        item: format!("b={}", q.label(d.b)),
        facts: vec![
            ("partial_units".into(), d.partial_units_rel_b.len().to_string()),
            ("two_sided_below".into(), d.two_sided_down_b.len().to_string()),
            ("ideals".into(), d.phi.completion.len().to_string()),
            ("image".into(), d.phi.image.len().to_string()),
            ("phi_injective".into(), d.phi.is_injective().to_string()),
            ("localic".into(), d.localic.to_string()),
            ("spatial".into(), d.spatial.to_string()),
        ],
    }
}

const SPATIAL_NOTE: &str = "spatial is always true: finite distributive lattices have enough points";

pub fn cmd_projections(src: &Source, cfg: &Config) -> Result<Report> {
    let r = load(src)?;
    let q = subject(&r, cfg)?;
    require_axioms(&q, cfg)?;
    let mut rep = Report::new("projections", &r.id, cfg);
    let ps = projections(&q, cfg)?;
    rep.push(
        "projections",
        Status::Pass,
        ps.iter().map(|&b| q.label(b)).collect(),
        Some(format!("{} found", ps.len())),
    );
    if !is_stably_gelfand(&q, cfg)? {
        for &b in &ps {
            rep.skip(format!("dossier b={}", q.label(b)), "stably_gelfand");
        }
        return Ok(rep);
    }
    for &b in &ps {
        let prefix = format!("b={}: ", q.label(b));
        match pseudogroup_of(&q, b, cfg) {
            Ok(d) => {
                rep.pass(format!("dossier b={}", q.label(b)));
                rep.rows.push(dossier_row(&q, &d));
            }
            Err(e) => violation(&mut rep, &prefix, e)?,
        }
    }
    rep.notes.push(SPATIAL_NOTE.into());
    Ok(rep)
}

pub const THEOREMS: [&str; 6] = ["ibq", "littlelemma", "invqfr", "iqfs", "comparison", "split"];

pub fn verify(src: &Source, theorem: &str, only_b: Option<&str>, cfg: &Config) -> Result<Report> {
    if !THEOREMS.contains(&theorem) {
        return Err(InputError(format!(
            "unknown theorem {theorem:?}, expected one of {}",
            THEOREMS.join(", ")
        )));
    }
    let r = load(src)?;
    let mut rep = Report::new(format!("verify {theorem}"), &r.id, cfg);
    match theorem {
        "comparison" | "split" => {
            let (q, o, p) = map_of(src, &r, cfg)?;
            verify_map(&mut rep, theorem, &q, &o, &p, cfg)?;
            return Ok(rep);
        }
        _ => {}
    }
    let q = quantale_subject(&r, cfg)?;
    if theorem == "iqfs" {
        match cor_iqfs_check(&q, cfg) {
            Ok(Outcome::Skip(h)) => rep.skip("iqfs", h),
            Ok(Outcome::Pass(iso)) => {
                let c = iso.dossier.phi.completion.quantale();
                rep.laws("iqfs:", &iso.report, |i| q.label(i));
                rep.rows.push(Row {
                    item: "phi_e".into(),
                    facts: iso
                        .dossier
                        .phi
                        .values
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| (c.label(i), q.label(v)))
                        .collect(),
                });
            }
            Err(e) => violation(&mut rep, "iqfs: ", e)?,
        }
        return Ok(rep);
    }
    let bs = select_projections(&q, only_b, cfg)?;
    let sg = is_stably_gelfand(&q, cfg)?;
    for b in bs {
        let prefix = format!("b={}: ", q.label(b));
        if theorem == "invqfr" {
            match thm_invqfr_check(&q, b, cfg) {
                Ok(Outcome::Skip(h)) => rep.skip(format!("{prefix}invqfr"), h),
                Ok(Outcome::Pass((d, laws))) => {
                    rep.laws(&prefix, &laws, |i| format!("#{i}"));
                    rep.rows.push(dossier_row(&q, &d));
                }
                Err(e) => violation(&mut rep, &prefix, e)?,
            }
            continue;
        }
        if !sg {
            rep.skip(format!("{prefix}{theorem}"), "stably_gelfand");
            continue;
        }
        match pseudogroup_of(&q, b, cfg) {
            Ok(d) => {
                if theorem == "ibq" {
                    rep.laws(&prefix, &d.checks, |a| q.label(a));
                } else {
                    rep.laws(&prefix, &equivalence_report(&d), |i| format!("#{i}"));
                }
                rep.rows.push(dossier_row(&q, &d));
            }
            Err(e) => violation(&mut rep, &prefix, e)?,
        }
    }
    if theorem == "ibq" && sg {
        rep.notes.push(SPATIAL_NOTE.into());
    }
    Ok(rep)
}

/// The map to analyze: the file's map block, else the identity on `O(G)` of
/// its groupoid; `--rel n` identifies relations with the pair groupoid.
fn map_of(src: &Source, r: &Resolved, cfg: &Config) -> Result<(AnyQuantale, OpensQuantale, QuantaleMap)> {
    let (q, g, star) = match (src, &r.groupoid) {
        (Source::Rel(n), _) => {
            let g = FiniteGroupoid::pair(*n)?;
            let q = AnyQuantale::Rel(RelQuantale::new(*n)?);
            (q, g, None)
        }
        (Source::Text(_), Some(g)) => match (&r.quantale, &r.map) {
            (Some(q), Some(star)) => (q.clone(), g.clone(), Some(star.clone())),
            (None, None) => {
                let o = OpensQuantale::new(g.clone(), cfg)?;
                (AnyQuantale::Opens(o), g.clone(), None)
            }
            (Some(_), None) => return Err(InputError("a quantale and a groupoid need a map block".into())),
            (None, Some(_)) => unreachable!("a map block requires a quantale block"),
        },
        (Source::Text(_), None) => {
            return Err(InputError("comparison and split need a groupoid block".into()));
        }
    };
    require_axioms(&q, cfg)?;
    let o = OpensQuantale::new(g, cfg)?;
    let star = star.unwrap_or_else(|| (0..o.len()).collect());
    let p = match make_map(&q, &o, star, false) {
        Ok(p) => p,
        Err(Error::Violation { check, witness }) => {
            return Err(InputError(format!("the map is not a homomorphism: {check} fails at {witness:?}")));
        }
        Err(e) => return Err(e.into()),
    };
    Ok((q, o, p))
}

fn verify_map(
    rep: &mut Report,
    theorem: &str,
    q: &AnyQuantale,
    o: &OpensQuantale,
    p: &QuantaleMap,
    cfg: &Config,
) -> Result<()> {
    rep.rows.push(Row {
        item: "map".into(),
        facts: vec![
            ("surjection".into(), p.is_surjection().to_string()),
            ("semiopen".into(), p.is_semiopen().to_string()),
        ],
    });
    if theorem == "comparison" {
        match comparison_map(q, o, p, cfg) {
            Ok(c) => rep.laws("comparison:", &c.report, |i| format!("#{i}")),
            Err(Error::Precondition(_)) if !is_stably_gelfand(q, cfg)? => rep.skip("comparison", "stably_gelfand"),
            Err(e) => violation(rep, "comparison: ", e)?,
        }
        return Ok(());
    }
    match split_check(q, o, p, cfg) {
        Ok(Outcome::Skip(h)) => rep.skip("split", h),
        Ok(Outcome::Pass(s)) => {
            rep.laws("comparison:", &s.comparison.report, |i| format!("#{i}"));
            rep.laws("split:", &s.report, |i| format!("#{i}"));
            rep.rows.push(Row {
                item: "sigma".into(),
                facts: vec![("k_sigma_is_identity".into(), s.k_sigma_is_identity.to_string())],
            });
        }
        Err(e) => violation(rep, "split: ", e)?,
    }
    Ok(())
}

/// Parameters of `search`.
#[derive(Debug, Clone)]
pub struct SearchArgs {
    pub constraints: String,
    pub max_size: usize,
    pub seed: u64,
    pub hits: usize,
    pub attempts: usize,
}

pub fn cmd_search(a: &SearchArgs, cfg: &Config) -> Result<Report> {
    let c = Constraints::parse(&a.constraints)?;
    let out = search(&c, a.max_size, a.seed, a.hits, a.attempts, cfg)?;
    let mut rep = Report::new("search", format!("[{}] size<={}", a.constraints, a.max_size), cfg);
    rep.seed = Some(a.seed);
    if let Some(flag) = out.vacuous {
        rep.notes.push(format!("vacuous: {flag} is both required and excluded"));
    }
    rep.notes.push(format!("examined {} candidates", out.examined));
    if out.vacuous.is_none() {
        rep.notes.push(
            if out.exhausted {
                "search space exhausted"
            } else if out.hits.len() >= a.hits {
                "stopped at the hit limit"
            } else {
                "random attempts used up; the space was not exhausted"
            }
            .into(),
        );
    }
    for (i, q) in out.hits.iter().enumerate() {
        let q = AnyQuantale::Table(q.clone());
        let c = classify(&q, cfg)?;
        rep.rows.push(Row {
            item: format!("hit {i}"),
            facts: c
                .flags()
                .iter()
                .map(|(n, f)| (n.to_string(), f.holds().to_string()))
                .collect(),
        });
        rep.instances.push(InstanceFile::new(format!("hit-{i}"), quantale_blocks(&q)).to_text());
    }
    Ok(rep)
}

//! The fixed test corpus: small quantales and pseudogroups that every
//! structural claim is checked against.

use std::ops::ControlFlow;

use crate::config::Config;
use crate::enumerate::for_each_quantale;
use crate::error::Result;
use crate::groupoid::{bisections, opens_quantale, FiniteGroupoid};
use crate::projection::pseudogroup_of;
use crate::pseudogroup::InverseSemigroup;
use crate::lattice::Lattice;
use crate::quantale::{is_stably_gelfand, AnyQuantale, Quantale, RelQuantale};

/// Largest pseudogroup in the corpus.
pub const MAX_PSEUDOGROUP: usize = 10;

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub quantale: AnyQuantale,
}

/// Groupoids with at most `max_arrows` arrows: a few fixed shapes and
/// `count` random ones from consecutive seeds.
pub fn groupoids(seed: u64, count: u64, max_arrows: usize) -> Result<Vec<(String, FiniteGroupoid)>> {
    let mut out = vec![
        ("trivial".to_string(), FiniteGroupoid::trivial()),
        ("discrete:3".to_string(), FiniteGroupoid::discrete(3)?),
        ("pair:2".to_string(), FiniteGroupoid::pair(2)?),
        ("Z3".to_string(), FiniteGroupoid::group_times_pair(3, 1)?),
    ];
    out.retain(|(_, g)| g.arrows() <= max_arrows);
    for s in seed..seed + count {
        let g = FiniteGroupoid::random(s, max_arrows)?;
        out.push((format!("random:{s}"), g));
    }
    Ok(out)
}

/// Relation quantales on up to three points, `O(G)` for the groupoids above
/// with at most six arrows, and every involutive quantale with at most four
/// elements.
pub fn quantales(seed: u64, cfg: &Config) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(Instance {
            name: format!("rel:{n}"),
            quantale: AnyQuantale::Rel(RelQuantale::new(n)?),
        });
    }
    for (name, g) in groupoids(seed, 8, 6)? {
        out.push(Instance {
            name: format!("O({name})"),
            quantale: AnyQuantale::Opens(opens_quantale(&g, cfg)?),
        });
    }
    for n in 1..=4 {
        let mut i = 0;
        let _ = for_each_quantale(n, cfg, &mut |q| {
            out.push(Instance {
                name: format!("table:{n}#{i}"),
                quantale: AnyQuantale::Table(q),
            });
            i += 1;
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// Pseudogroups with at most [`MAX_PSEUDOGROUP`] elements: idempotent
/// chains, cyclic groups with zero, partial bijections,
/// local bisections of small groupoids, and the partial units of the
/// stably Gelfand unital quantales in [`quantales`].
pub fn pseudogroups(seed: u64, cfg: &Config) -> Result<Vec<(String, InverseSemigroup)>> {
    let mut out = Vec::new();
    for k in 1..=6 {
        out.push((format!("chain:{k}"), InverseSemigroup::idempotent_chain(k)?));
    }
    for k in 1..=5 {
        out.push((format!("Z{k}+0"), InverseSemigroup::cyclic_group_with_zero(k)?));
    }
    for (name, g) in groupoids(seed, 8, 6)? {
        let (s, _) = bisections(&opens_quantale(&g, cfg)?)?;
        out.push((format!("I({name})"), s));
    }
    for inst in quantales(seed, cfg)? {
        let q = &inst.quantale;
        let Some(e) = q.unit() else { continue };
        if q.len() > 64 || !is_stably_gelfand(q, cfg)? {
            continue;
        }
        let d = pseudogroup_of(q, e, cfg)?;
        out.push((format!("I({})", inst.name), d.semigroup));
    }
    out.retain(|(_, s)| s.len() <= MAX_PSEUDOGROUP);
    Ok(out)
}

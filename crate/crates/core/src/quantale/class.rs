//! The Gelfand hierarchy, projections, partial units and support.

use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exhaust::first_elem;
use crate::lattice::frame_witness;
use crate::Elem;

use super::Quantale;

/// `a·1 <= a`.
pub fn is_right_sided<Q: Quantale>(q: &Q, a: Elem) -> bool {
    q.leq(q.mul(a, q.top()), a)
}

/// `1·a <= a`.
pub fn is_left_sided<Q: Quantale>(q: &Q, a: Elem) -> bool {
    q.leq(q.mul(q.top(), a), a)
}

pub fn is_two_sided<Q: Quantale>(q: &Q, a: Elem) -> bool {
    is_right_sided(q, a) && is_left_sided(q, a)
}

/// All two-sided elements, in index order.
pub fn two_sided<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Vec<Elem>> {
    filter(q, cfg, "two-sided elements", |a| is_two_sided(q, a))
}

/// `a·a*·a`.
pub fn sandwich<Q: Quantale>(q: &Q, a: Elem) -> Elem {
    q.mul(q.mul(a, q.star(a)), a)
}

/// Least right-sided `a` with `aa*a ≠ a`.
pub fn gelfand_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    cfg.ensure_carrier("Gelfand check", q.len())?;
    Ok(first_elem(q.len(), |a| is_right_sided(q, a) && sandwich(q, a) != a).map(|[a]| a))
}

/// Least `a` with `aa*a <= a` but `aa*a ≠ a`.
pub fn stably_gelfand_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    cfg.ensure_carrier("stably Gelfand check", q.len())?;
    Ok(first_elem(q.len(), |a| {
        let s = sandwich(q, a);
        q.leq(s, a) && s != a
    })
    .map(|[a]| a))
}

/// Least `a` with `a ≰ aa*a`.
pub fn strongly_gelfand_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    cfg.ensure_carrier("strongly Gelfand check", q.len())?;
    Ok(first_elem(q.len(), |a| !q.leq(a, sandwich(q, a))).map(|[a]| a))
}

pub fn is_gelfand<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(gelfand_witness(q, cfg)?.is_none())
}

pub fn is_stably_gelfand<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(stably_gelfand_witness(q, cfg)?.is_none())
}

pub fn is_strongly_gelfand<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(strongly_gelfand_witness(q, cfg)?.is_none())
}

/// `b·b = b = b*`.
pub fn is_projection<Q: Quantale>(q: &Q, b: Elem) -> bool {
    q.mul(b, b) == b && q.star(b) == b
}

pub fn projections<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Vec<Elem>> {
    filter(q, cfg, "projections", |b| is_projection(q, b))
}

fn require_unit<Q: Quantale>(q: &Q, what: &str) -> Result<Elem> {
    q.unit()
        .ok_or_else(|| Error::precondition(format!("{what} requires a unital quantale")))
}

/// `a*a <= e` and `aa* <= e`.
pub fn is_partial_unit<Q: Quantale>(q: &Q, e: Elem, a: Elem) -> bool {
    let s = q.star(a);
    q.leq(q.mul(s, a), e) && q.leq(q.mul(a, s), e)
}

/// The partial units `I(Q)`, in index order.
pub fn partial_units<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Vec<Elem>> {
    let e = require_unit(q, "partial units")?;
    filter(q, cfg, "partial units", |a| is_partial_unit(q, e, a))
}

/// Join of all partial units when it is not the top, `None` when they cover.
pub fn covering_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    let j = q.join_all(partial_units(q, cfg)?);
    Ok((j != q.top()).then_some(j))
}

pub fn covering_holds<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(covering_witness(q, cfg)?.is_none())
}

/// `a·1 ∧ e`.
pub fn support<Q: Quantale>(q: &Q, e: Elem, a: Elem) -> Elem {
    q.meet(q.mul(a, q.top()), e)
}

/// Least `a` violating `a1∧e <= aa*` or `a <= (a1∧e)a`.
pub fn supported_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<Elem>> {
    let e = require_unit(q, "support check")?;
    cfg.ensure_carrier("support check", q.len())?;
    Ok(first_elem(q.len(), |a| {
        let s = support(q, e, a);
        !q.leq(s, q.mul(a, q.star(a))) || !q.leq(a, q.mul(s, a))
    })
    .map(|[a]| a))
}

pub fn is_supported<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(supported_witness(q, cfg)?.is_none())
}

pub fn quantal_frame_witness<Q: Quantale>(q: &Q, cfg: &Config) -> Result<Option<[Elem; 3]>> {
    cfg.ensure_triples("frame distributivity", q.len())?;
    Ok(frame_witness(q))
}

pub fn is_quantal_frame<Q: Quantale>(q: &Q, cfg: &Config) -> Result<bool> {
    Ok(quantal_frame_witness(q, cfg)?.is_none())
}

fn filter<Q: Quantale>(
    q: &Q,
    cfg: &Config,
    what: &str,
    keep: impl Fn(Elem) -> bool + Sync,
) -> Result<Vec<Elem>> {
    cfg.ensure_carrier(what, q.len())?;
    Ok(q.elements().into_par_iter().filter(|&a| keep(a)).collect())
}

/// Verdict on one class-membership flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    Holds,
    /// Fails; the witness replays the failure. The unital flag has no element
    /// witness and carries an empty vector.
    Fails(Vec<Elem>),
    /// Undefined for this quantale (support and covering need a unit).
    NotApplicable,
}

impl Flag {
    pub fn holds(&self) -> bool {
        matches!(self, Flag::Holds)
    }

    fn from_witness<W: Into<Vec<Elem>>>(w: Option<W>) -> Self {
        match w {
            None => Flag::Holds,
            Some(w) => Flag::Fails(w.into()),
        }
    }
}

/// Membership of a quantale in each class of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleClassReport {
    pub gelfand: Flag,
    pub stably_gelfand: Flag,
    pub strongly_gelfand: Flag,
    pub unital: Flag,
    pub quantal_frame: Flag,
    pub supported: Flag,
    pub covering: Flag,
}

impl QuantaleClassReport {
    /// Flags with their conventional names, in report order.
    pub fn flags(&self) -> [(&'static str, &Flag); 7] {
        [
            ("gelfand", &self.gelfand),
            ("stably_gelfand", &self.stably_gelfand),
            ("strongly_gelfand", &self.strongly_gelfand),
            ("unital", &self.unital),
            ("quantal_frame", &self.quantal_frame),
            ("supported", &self.supported),
            ("covering", &self.covering),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&Flag> {
        self.flags().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
    }

    /// Unital, stably Gelfand quantal frame whose partial units cover it.
    pub fn is_inverse_quantal_frame_candidate(&self) -> bool {
        self.stably_gelfand.holds()
            && self.unital.holds()
            && self.quantal_frame.holds()
            && self.covering.holds()
    }
}

pub fn classify<Q: Quantale>(q: &Q, cfg: &Config) -> Result<QuantaleClassReport> {
    let unital = q.unit().is_some();
    let when_unital = |f: &dyn Fn() -> Result<Option<Elem>>| -> Result<Flag> {
        if unital {
            Ok(Flag::from_witness(f()?.map(|a| vec![a])))
        } else {
            Ok(Flag::NotApplicable)
        }
    };
    Ok(QuantaleClassReport {
        gelfand: Flag::from_witness(gelfand_witness(q, cfg)?.map(|a| vec![a])),
        stably_gelfand: Flag::from_witness(stably_gelfand_witness(q, cfg)?.map(|a| vec![a])),
        strongly_gelfand: Flag::from_witness(strongly_gelfand_witness(q, cfg)?.map(|a| vec![a])),
        unital: if unital { Flag::Holds } else { Flag::Fails(vec![]) },
        quantal_frame: Flag::from_witness(quantal_frame_witness(q, cfg)?),
        supported: when_unital(&|| supported_witness(q, cfg))?,
        covering: when_unital(&|| covering_witness(q, cfg))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::examples::*;
    use crate::quantale::{RelQuantale, TableQuantale};
    use crate::Lattice;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn top_and_bottom_are_two_sided() {
        let q = RelQuantale::new(2).unwrap();
        assert!(is_two_sided(&q, q.top()));
        assert!(is_two_sided(&q, q.bottom()));
    }

    #[test]
    fn two_sided_relations_on_two_points() {
        let q = RelQuantale::new(2).unwrap();
        // brute force: R·(X×X) ⊆ R and (X×X)·R ⊆ R
        let full = q.top();
        let expect: Vec<_> = (0..16)
            .filter(|&r| q.mul(r, full) & !r == 0 && q.mul(full, r) & !r == 0)
            .collect();
        assert_eq!(expect, vec![0, 15]);
        assert_eq!(two_sided(&q, &cfg()).unwrap(), expect);
    }

    #[test]
    fn relation_quantales_are_strongly_gelfand() {
        for n in 0..=3 {
            let q = RelQuantale::new(n).unwrap();
            assert!(is_strongly_gelfand(&q, &cfg()).unwrap(), "n={n}");
            assert!(is_stably_gelfand(&q, &cfg()).unwrap(), "n={n}");
            assert!(is_gelfand(&q, &cfg()).unwrap(), "n={n}");
        }
    }

    #[test]
    fn trivial_quantale_is_in_every_class() {
        let r = classify(&TableQuantale::trivial(), &cfg()).unwrap();
        for (name, f) in r.flags() {
            assert!(f.holds(), "{name}");
        }
    }

    #[test]
    fn nilpotent_chain_by_brute_force() {
        let q = nilpotent_three_chain();
        // enumerate the 3 elements directly with the table values
        let mul = |a: usize, b: usize| q.mul(a, b);
        let sand = |a| mul(mul(a, a), a);
        let strongly = (0..3).all(|a| a <= sand(a));
        let stably = (0..3).all(|a| !(sand(a) <= a) || sand(a) == a);
        let right_sided = |a: usize| mul(a, 2) <= a;
        let gelfand = (0..3).all(|a| !right_sided(a) || sand(a) == a);
        assert_eq!(is_strongly_gelfand(&q, &cfg()).unwrap(), strongly);
        assert_eq!(is_stably_gelfand(&q, &cfg()).unwrap(), stably);
        assert_eq!(is_gelfand(&q, &cfg()).unwrap(), gelfand);
        // m·m·m = 0 < m, so all three fail at m
        assert!(!strongly && !stably && !gelfand);
        assert_eq!(stably_gelfand_witness(&q, &cfg()).unwrap(), Some(1));
    }

    #[test]
    fn projection_basics() {
        let q = RelQuantale::new(2).unwrap();
        assert!(is_projection(&q, 0));
        assert!(is_projection(&q, q.top()));
        assert!(is_projection(&q, q.unit().unwrap()));
        assert!(!is_projection(&q, q.pair(0, 1)));
    }

    #[test]
    fn projection_counts() {
        for (n, count) in [(1, 2), (2, 5), (3, 15)] {
            let q = RelQuantale::new(n).unwrap();
            assert_eq!(projections(&q, &cfg()).unwrap().len(), count);
        }
    }

    #[test]
    fn partial_units_of_two_points() {
        let q = RelQuantale::new(2).unwrap();
        let pu = partial_units(&q, &cfg()).unwrap();
        assert_eq!(pu.len(), 7);
        assert!(pu.contains(&q.unit().unwrap()));
        assert!(covering_holds(&q, &cfg()).unwrap());
    }

    #[test]
    fn partial_units_need_a_unit() {
        let q = m3_saturating();
        assert!(matches!(partial_units(&q, &cfg()), Err(Error::Precondition(_))));
        let r = classify(&q, &cfg()).unwrap();
        assert_eq!(r.supported, Flag::NotApplicable);
        assert_eq!(r.unital, Flag::Fails(vec![]));
    }

    #[test]
    fn support_and_frame_for_relations() {
        for n in 0..=2 {
            let q = RelQuantale::new(n).unwrap();
            assert!(is_supported(&q, &cfg()).unwrap());
            assert!(is_quantal_frame(&q, &cfg()).unwrap());
        }
    }

    #[test]
    fn m3_carrier_is_not_a_quantal_frame() {
        let q = m3_saturating();
        let [a, b, c] = quantal_frame_witness(&q, &cfg()).unwrap().unwrap();
        assert_ne!(q.meet(a, q.join(b, c)), q.join(q.meet(a, b), q.meet(a, c)));
    }

    #[test]
    fn gelfand_chain_of_implications_on_fixtures() {
        for q in [two_chain_frame(), nilpotent_three_chain(), m3_saturating()] {
            let r = classify(&q, &cfg()).unwrap();
            if r.strongly_gelfand.holds() {
                assert!(r.stably_gelfand.holds());
            }
            if r.stably_gelfand.holds() {
                assert!(r.gelfand.holds());
            }
        }
    }
}

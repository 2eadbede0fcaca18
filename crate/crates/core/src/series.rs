//! Central series and the named subgroups built from them.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::pc::{GroupElement, Period, Presentation};
use crate::section::AbelianSection;
use crate::subgroup::{centralizer_mod, commutator_subgroup, join, quotient, Projection, Subgroup};
use crate::{Error, Result};

/// Descending chain `G = S_0 ≥ S_1 ≥ … ≥ S_k = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChain {
    pub terms: Vec<Subgroup>,
    pub central: bool,
}

impl SeriesChain {
    /// Builds a chain and records whether it is central.
    pub fn new(p: &Presentation, terms: Vec<Subgroup>) -> Self {
        let central = is_central_chain(p, &terms);
        SeriesChain { terms, central }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops consecutive repeats.
    pub fn dedup(mut self) -> Self {
        self.terms.dedup();
        self
    }

    /// Each term contains the next.
    pub fn is_descending(&self, p: &Presentation) -> bool {
        self.terms.windows(2).all(|w| w[1].is_subgroup_of(p, &w[0]))
    }
}

pub(crate) fn is_central_chain(p: &Presentation, terms: &[Subgroup]) -> bool {
    terms.windows(2).all(|w| w[1].is_subgroup_of(p, &w[0]) && w[0].is_central_over(p, &w[1]))
        && terms.first().is_some_and(|t| *t == Subgroup::whole(p))
        && terms.last().is_some_and(Subgroup::is_trivial)
}

pub(crate) fn generators(p: &Presentation) -> Vec<GroupElement> {
    (0..p.rank()).map(|i| p.generator(i)).collect()
}

/// `{x : [x, g] ∈ L for all g}` for `L` normal.
pub fn commutation_preimage(p: &Presentation, l: &Subgroup) -> Result<Subgroup> {
    if !l.is_normal(p) {
        return Err(Error::NotNormal);
    }
    Ok(centralizer_mod(p, &Subgroup::whole(p), &generators(p), l))
}

pub fn center(p: &Presentation) -> Subgroup {
    centralizer_mod(p, &Subgroup::whole(p), &generators(p), &Subgroup::trivial(p.rank()))
}

pub fn derived_subgroup(p: &Presentation) -> Subgroup {
    let w = Subgroup::whole(p);
    commutator_subgroup(p, &w, &w)
}

pub fn lower_central_series(p: &Presentation) -> SeriesChain {
    let w = Subgroup::whole(p);
    let mut terms = vec![w.clone()];
    loop {
        let next = commutator_subgroup(p, terms.last().unwrap(), &w);
        let done = next.is_trivial();
        terms.push(next);
        if done {
            break;
        }
    }
    if terms.len() > 1 && terms[0].is_trivial() {
        terms.truncate(1);
    }
    SeriesChain { terms, central: true }
}

/// Upper central series, listed from `G` down to `1`.
pub fn upper_central_series(p: &Presentation) -> SeriesChain {
    let w = Subgroup::whole(p);
    let mut up = vec![Subgroup::trivial(p.rank())];
    while *up.last().unwrap() != w {
        let next = centralizer_mod(p, &w, &generators(p), up.last().unwrap());
        up.push(next);
    }
    up.reverse();
    SeriesChain { terms: up, central: true }
}

pub fn nilpotency_class(p: &Presentation) -> usize {
    lower_central_series(p).len() - 1
}

/// Preimage of the torsion subgroup of `G/N` for `N` normal.
pub fn isolator(p: &Presentation, n: &Subgroup) -> Result<Subgroup> {
    if !n.is_normal(p) {
        return Err(Error::NotNormal);
    }
    let w = Subgroup::whole(p);
    let gens = generators(p);
    let mut iso = n.clone();
    // a nontrivial normal torsion subgroup of a nilpotent group meets the centre
    loop {
        let z = centralizer_mod(p, &w, &gens, &iso);
        let sec = AbelianSection::new(p, &z, &iso)?;
        if sec.periods().iter().all(|q| !q.is_finite()) {
            return Ok(iso);
        }
        iso = sec.torsion_preimage(p);
    }
}

/// The subgroups `G′ ≤ Is(G′)`, `Z(G)`, `I(G)`, `N(G)`, `M(G)` and an addition `G₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySubgroups {
    pub derived: Subgroup,
    pub iso_derived: Subgroup,
    pub center: Subgroup,
    /// `Is(G′) ∩ Z(G)`.
    pub ig: Subgroup,
    /// `Is(G′)·Z(G)`.
    pub ng: Subgroup,
    /// `Is(G′·Z(G))`.
    pub mg: Subgroup,
    /// Free complement of `I(G)` in `Z(G)`.
    pub addition: Subgroup,
    /// Invariant factors of `M(G)/N(G)`.
    pub mn_invariants: Vec<Period>,
}

impl KeySubgroups {
    pub fn is_regular(&self) -> bool {
        self.mg == self.ng
    }

    /// `Z(G) ≤ Is(G′)`.
    pub fn is_tame(&self) -> bool {
        self.center == self.ig
    }

    pub fn mn_order(&self) -> BigInt {
        self.mn_invariants.iter().filter_map(|q| q.value().cloned()).product()
    }
}

pub fn key_subgroups(p: &Presentation) -> Result<KeySubgroups> {
    let w = Subgroup::whole(p);
    let derived = derived_subgroup(p);
    let ab = AbelianSection::new(p, &w, &derived)?;
    let iso_derived = ab.torsion_preimage(p);
    let center = center(p);
    let free_ab = AbelianSection::new(p, &w, &iso_derived)?;
    let ig = free_ab.kernel_from(p, &center);
    let ng = join(p, &iso_derived, &center);
    let dz = join(p, &derived, &center);
    let mg = AbelianSection::new(p, &w, &dz)?.torsion_preimage(p);
    let z_over_i = AbelianSection::new(p, &center, &ig)?;
    debug_assert!(z_over_i.periods().iter().all(|q| !q.is_finite()));
    let addition = crate::subgroup::induce(p, z_over_i.basis());
    let mn_invariants = AbelianSection::new(p, &mg, &ng)?.invariant_factors();
    Ok(KeySubgroups { derived, iso_derived, center, ig, ng, mg, addition, mn_invariants })
}

/// Regularity: `M(G) = N(G)`. Returns the two witnesses alongside the flag.
pub fn is_regular(p: &Presentation) -> Result<(bool, Subgroup, Subgroup)> {
    let k = key_subgroups(p)?;
    Ok((k.is_regular(), k.mg, k.ng))
}

/// An addition `G₀` and the foundation `G/G₀`.
pub fn addition_foundation(p: &Presentation) -> Result<(Subgroup, Presentation, Projection)> {
    let k = key_subgroups(p)?;
    let (gf, proj) = quotient(p, &k.addition)?;
    Ok((k.addition, gf, proj))
}

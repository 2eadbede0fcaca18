//! Homomorphisms given by generator images, certified against the relations.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::pc::{GroupElement, Period, Presentation, PresentationBuilder};
use crate::section::AbelianSection;
use crate::series::{key_subgroups, nilpotency_class};
use crate::subgroup::{induce, Subgroup};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let mut acc = self.target.identity();
        for (img, c) in self.images.iter().zip(x.coords()) {
            if !c.is_zero() {
                acc = self.target.multiply(&acc, &self.target.power(img, c));
            }
        }
        acc
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::DomainMismatch);
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|x| other.apply(x)).collect(),
        })
    }

    pub fn identity(p: &Presentation) -> GroupHom {
        GroupHom { source: p.clone(), target: p.clone(), images: (0..p.rank()).map(|i| p.generator(i)).collect() }
    }
}

fn eval_word(images: &[GroupElement], target: &Presentation, word: &[(usize, BigInt)]) -> GroupElement {
    let mut acc = target.identity();
    for (k, a) in word {
        acc = target.multiply(&acc, &target.power(&images[*k], a));
    }
    acc
}

/// Certifies that `u_i ↦ images[i]` respects every defining relation of `src`.
pub fn hom_from_images(src: &Presentation, dst: &Presentation, images: Vec<GroupElement>) -> Result<GroupHom> {
    if images.len() != src.rank() {
        return Err(Error::LengthMismatch { expected: src.rank(), found: images.len() });
    }
    for img in &images {
        if !dst.is_canonical(img) {
            return Err(Error::InvalidParams(format!("image {:?} is not a canonical element of the target", img)));
        }
    }
    for i in 0..src.rank() {
        if let Period::Finite(e) = src.period(i) {
            let lhs = dst.power(&images[i], e);
            let rhs = eval_word(&images, dst, src.power_tail(i));
            if lhs != rhs {
                return Err(Error::RelationViolated {
                    relation: format!("u{}^{}: image gives {}, relation requires {}", i + 1, e, lhs, rhs),
                });
            }
        }
    }
    for i in 0..src.rank() {
        for j in i + 1..src.rank() {
            let lhs = dst.commutator(&images[j], &images[i]);
            let rhs = eval_word(&images, dst, src.comm_tail(j, i));
            if lhs != rhs {
                return Err(Error::RelationViolated {
                    relation: format!("[u{},u{}]: image gives {}, relation requires {}", j + 1, i + 1, lhs, rhs),
                });
            }
        }
    }
    Ok(GroupHom { source: src.clone(), target: dst.clone(), images })
}

/// Whether `ψ ∘ φ` and `φ ∘ ψ` fix every generator.
pub fn is_inverse_pair(phi: &GroupHom, psi: &GroupHom) -> Result<bool> {
    if phi.target != psi.source || psi.target != phi.source {
        return Err(Error::DomainMismatch);
    }
    let back = (0..phi.source.rank()).all(|i| psi.apply(&phi.images[i]) == phi.source.generator(i));
    let forth = (0..psi.source.rank()).all(|i| phi.apply(&psi.images[i]) == psi.source.generator(i));
    Ok(back && forth)
}

/// Image subgroup and its index in the target.
pub fn image_index(phi: &GroupHom) -> (Subgroup, Period) {
    let img = induce(&phi.target, &phi.images);
    let idx = img.index(&phi.target);
    (img, idx)
}

/// Elementary invariants preserved by the deformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub hirsch: usize,
    pub class: usize,
    pub ab_invariants: Vec<Period>,
    pub mn_order: BigInt,
    pub p: usize,
    pub n: usize,
    pub e: BigInt,
    pub regular: bool,
    pub tame: bool,
}

pub fn invariant_report(pres: &Presentation) -> Result<InvariantReport> {
    let k = key_subgroups(pres)?;
    let w = Subgroup::whole(pres);
    let ab = AbelianSection::new(pres, &w, &k.derived)?;
    let gap = AbelianSection::new(pres, &k.ng, &k.iso_derived)?;
    Ok(InvariantReport {
        hirsch: pres.periods().iter().filter(|q| !q.is_finite()).count(),
        class: nilpotency_class(pres),
        ab_invariants: ab.invariant_factors(),
        mn_order: k.mn_order(),
        p: gap.free_rank(),
        n: k.mn_invariants.len(),
        e: k.mn_order(),
        regular: k.is_regular(),
        tame: k.is_tame(),
    })
}

/// Replaces each `u_i` by `v_i = u_i · shifts[i]` (with `shifts[i]` supported
/// above `i`) and returns the new presentation with the maps both ways.
pub fn change_basis(p: &Presentation, shifts: &[GroupElement]) -> Result<(Presentation, GroupHom, GroupHom)> {
    let m = p.rank();
    if shifts.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: shifts.len() });
    }
    let mut basis = Vec::with_capacity(m);
    for (i, s) in shifts.iter().enumerate() {
        if s.lead().is_some_and(|l| l <= i) {
            return Err(Error::SupportViolation { relation: format!("basis shift {}", i + 1), index: s.lead().unwrap() });
        }
        basis.push(p.multiply(&p.generator(i), s));
    }
    let coords = |x: &GroupElement| -> GroupElement {
        let mut x = x.clone();
        let mut c = Vec::with_capacity(m);
        for (i, v) in basis.iter().enumerate() {
            let k = x[i].clone();
            if !k.is_zero() {
                x = p.multiply(&p.power(v, &-&k), &x);
            }
            c.push(k);
        }
        debug_assert!(x.is_identity());
        GroupElement::from_coords(c)
    };
    let mut b = PresentationBuilder::new(p.periods().to_vec());
    for i in 0..m {
        if let Period::Finite(e) = p.period(i) {
            b = b.power(i, coords(&p.power(&basis[i], e)).support());
        }
        for j in i + 1..m {
            b = b.comm(j, i, coords(&p.commutator(&basis[j], &basis[i])).support());
        }
    }
    let q = b.build()?;
    let forward = hom_from_images(p, &q, (0..m).map(|i| coords(&p.generator(i))).collect())?;
    let backward = hom_from_images(&q, p, basis)?;
    Ok((q, forward, backward))
}

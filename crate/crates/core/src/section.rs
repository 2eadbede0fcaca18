//! Abelian sections `A/B` of a polycyclic group, for `B ≤ A` with `[A, A] ≤ B`.
//!
//! The section is presented on the rows of `A`: the exponent vector of an
//! element along those rows is additive modulo `B`, and the relation lattice
//! is spanned by relative-order relations, row commutators and the rows of `B`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{hnf, snf, IntMatrix};
use crate::pc::{GroupElement, Period, Presentation};
use crate::subgroup::{induce, kernel_on, Subgroup};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct AbelianSection {
    top: Subgroup,
    bottom: Subgroup,
    /// `λ · to_basis`, reduced by `periods`, gives section coordinates.
    to_basis: IntMatrix,
    periods: Vec<Period>,
    basis: Vec<GroupElement>,
}

impl AbelianSection {
    pub fn new(p: &Presentation, top: &Subgroup, bottom: &Subgroup) -> Result<Self> {
        let rows = top.rows();
        let s = rows.len();
        let exps = |x: &GroupElement| top.exponents(p, x).ok_or(Error::NotNormal);
        let mut rel: Vec<Vec<BigInt>> = Vec::new();
        for (t, (r, ord)) in rows.iter().zip(top.relative_orders(p)).enumerate() {
            if let Period::Finite(k) = ord {
                let mut v: Vec<BigInt> = exps(&p.power(r, &k))?.into_iter().map(|c| -c).collect();
                v[t] += &k;
                rel.push(v);
            }
        }
        for (a, x) in rows.iter().enumerate() {
            for y in &rows[a + 1..] {
                let c = p.commutator(y, x);
                if !bottom.contains(p, &c) {
                    return Err(Error::NotNormal);
                }
                rel.push(exps(&c)?);
            }
        }
        for b in bottom.rows() {
            rel.push(exps(b)?);
        }
        let rel = IntMatrix::from_rows(s, rel);
        let h = hnf(&rel);
        let rank = h.rank();
        let single = (0..rank).all(|i| h.h.row(i).iter().filter(|x| !x.is_zero()).count() == 1);
        let (to_basis, periods, basis) = if single {
            let pivots = h.pivots();
            let mut cols = Vec::new();
            let mut periods = Vec::new();
            for c in 0..s {
                match pivots.iter().position(|&pc| pc == c) {
                    Some(i) if h.h[(i, c)].is_one() => {}
                    Some(i) => {
                        cols.push(c);
                        periods.push(Period::Finite(h.h[(i, c)].clone()));
                    }
                    None => {
                        cols.push(c);
                        periods.push(Period::Infinite);
                    }
                }
            }
            let mut m = IntMatrix::zeros(s, cols.len());
            for (k, &c) in cols.iter().enumerate() {
                m[(c, k)] = BigInt::one();
            }
            let basis = cols.iter().map(|&c| rows[c].clone()).collect();
            (m, periods, basis)
        } else {
            let d = snf(&rel);
            let diag = d.diagonal();
            let mut keep = Vec::new();
            let mut periods = Vec::new();
            for i in 0..s {
                let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
                if di.is_one() {
                    continue;
                }
                keep.push(i);
                periods.push(Period::from_code(&di));
            }
            let mut m = IntMatrix::zeros(s, keep.len());
            for (k, &i) in keep.iter().enumerate() {
                for r in 0..s {
                    m[(r, k)] = d.v[(r, i)].clone();
                }
            }
            let basis = keep.iter().map(|&i| top.evaluate(p, d.v_inv.row(i))).collect();
            (m, periods, basis)
        };
        Ok(AbelianSection { top: top.clone(), bottom: bottom.clone(), to_basis, periods, basis })
    }

    pub fn top(&self) -> &Subgroup {
        &self.top
    }

    pub fn bottom(&self) -> &Subgroup {
        &self.bottom
    }

    /// Periods of the chosen basis, in basis order.
    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    /// Lifts of the basis elements, all in the top subgroup.
    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.periods.is_empty()
    }

    /// Torsion-free rank.
    pub fn free_rank(&self) -> usize {
        self.periods.iter().filter(|p| !p.is_finite()).count()
    }

    pub fn order(&self) -> Period {
        self.periods.iter().fold(Period::Finite(BigInt::one()), |a, b| a.mul(b))
    }

    /// Invariant factors `d_1 | d_2 | …` followed by one infinity per free rank.
    pub fn invariant_factors(&self) -> Vec<Period> {
        let finite: Vec<BigInt> = self.periods.iter().filter_map(|p| p.value().cloned()).collect();
        let mut out: Vec<Period> = snf(&IntMatrix::diagonal(&finite))
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .map(Period::Finite)
            .collect();
        out.extend(core::iter::repeat_n(Period::Infinite, self.free_rank()));
        out
    }

    /// Coordinates of `x ∈ top` on the basis, reduced by the periods.
    pub fn coords(&self, p: &Presentation, x: &GroupElement) -> Option<Vec<BigInt>> {
        let lambda = self.top.exponents(p, x)?;
        let raw = self.to_basis.vec_mul(&lambda);
        Some(raw.iter().zip(&self.periods).map(|(c, per)| per.reduce(c)).collect())
    }

    /// `∏ basis_i^{c_i}`.
    pub fn element(&self, p: &Presentation, c: &[BigInt]) -> GroupElement {
        let mut acc = p.identity();
        for (b, k) in self.basis.iter().zip(c) {
            if !k.is_zero() {
                acc = p.multiply(&acc, &p.power(b, k));
            }
        }
        acc
    }

    /// Preimage in `top` of the torsion subgroup of the section.
    pub fn torsion_preimage(&self, p: &Presentation) -> Subgroup {
        let mut gens = self.bottom.rows().to_vec();
        for (b, per) in self.basis.iter().zip(&self.periods) {
            if per.is_finite() {
                gens.push(b.clone());
            }
        }
        induce(p, &gens)
    }

    /// Kernel of `H → section` for a subgroup `H ≤ top`.
    pub fn kernel_from(&self, p: &Presentation, h: &Subgroup) -> Subgroup {
        let mut table = IntMatrix::zeros(self.dim(), h.rows().len());
        for (t, r) in h.rows().iter().enumerate() {
            let c = self.coords(p, r).expect("subgroup lies in the top of the section");
            for (i, v) in c.into_iter().enumerate() {
                table[(i, t)] = v;
            }
        }
        let moduli: Vec<BigInt> = self.periods.iter().map(Period::code).collect();
        kernel_on(p, h, &table, &moduli)
    }

    /// Image of `H ≤ top` in section coordinates, one row per row of `H`.
    pub fn image_rows(&self, p: &Presentation, h: &Subgroup) -> Vec<Vec<BigInt>> {
        h.rows().iter().map(|r| self.coords(p, r).expect("subgroup lies in the top")).collect()
    }
}

/// Reduces a vector entrywise by periods.
pub fn reduce_by(periods: &[Period], v: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(periods).map(|(c, p)| p.reduce(c)).collect()
}

/// Integer vector of period codes.
pub fn period_codes(periods: &[Period]) -> Vec<BigInt> {
    periods.iter().map(Period::code).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::fixtures;
    use crate::subgroup::commutator_subgroup;

    #[test]
    fn abelianizations() {
        let p = fixtures::zg();
        let w = Subgroup::whole(&p);
        let d = commutator_subgroup(&p, &w, &w);
        let s = AbelianSection::new(&p, &w, &d).unwrap();
        assert_eq!(s.invariant_factors(), vec![Period::Infinite; 4]);
        let p = fixtures::nr();
        let w = Subgroup::whole(&p);
        let s = AbelianSection::new(&p, &w, &Subgroup::tail_term(&p, 3)).unwrap();
        assert_eq!(s.invariant_factors(), vec![Period::Infinite; 3]);
        let x = p.element_i64(&[2, -1, 5, 3, 1, 2]);
        assert_eq!(s.coords(&p, &x).unwrap(), vec![BigInt::from(2), BigInt::from(-1), BigInt::from(5)]);
    }

    #[test]
    fn mixed_section_uses_smith_basis() {
        let p = fixtures::free_abelian(2);
        let w = Subgroup::whole(&p);
        let b = induce(&p, &[p.element_i64(&[2, 2]), p.element_i64(&[0, 6])]);
        let s = AbelianSection::new(&p, &w, &b).unwrap();
        assert_eq!(s.invariant_factors(), vec![Period::finite(2), Period::finite(6)]);
        for (g, per) in s.basis().iter().zip(s.periods()) {
            let k = per.value().unwrap();
            assert!(b.contains(&p, &p.power(g, k)));
        }
    }

    #[test]
    fn rejects_nonabelian_section() {
        let p = fixtures::heis();
        let w = Subgroup::whole(&p);
        assert!(AbelianSection::new(&p, &w, &Subgroup::trivial(3)).is_err());
    }
}

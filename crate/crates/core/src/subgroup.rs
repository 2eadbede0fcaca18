//! Subgroups as induced polycyclic sequences.
//!
//! A [`Subgroup`] stores its canonical sequence: rows with strictly increasing
//! leading indices, positive minimal leading exponents, and every entry at a
//! later row's leading index reduced into `[0, b)` where `b` is that row's
//! leading exponent. Two subgroups are equal exactly when their rows agree.
//! A subgroup does not own its presentation; every operation takes it.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{solve_congruences, IntMatrix};
use crate::pc::{GroupElement, Period, Presentation, PresentationBuilder};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    rank: usize,
    rows: Vec<GroupElement>,
}

impl Subgroup {
    pub fn trivial(rank: usize) -> Self {
        Subgroup { rank, rows: Vec::new() }
    }

    pub fn whole(p: &Presentation) -> Self {
        Self::tail_term(p, 0)
    }

    /// `K_t = ⟨u_t, …, u_{m-1}⟩`.
    pub fn tail_term(p: &Presentation, t: usize) -> Self {
        let m = p.rank();
        Subgroup { rank: m, rows: (t..m).map(|i| p.generator(i)).collect() }
    }

    /// Rank of the ambient presentation.
    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[GroupElement] {
        &self.rows
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn leads(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.lead().unwrap()).collect()
    }

    /// Row with leading index `l`, if any.
    pub fn row_at(&self, l: usize) -> Option<&GroupElement> {
        self.rows.iter().find(|r| r.lead() == Some(l))
    }

    /// Relative order of each row: `e_l / b` or infinite.
    pub fn relative_orders(&self, p: &Presentation) -> Vec<Period> {
        self.rows
            .iter()
            .map(|r| {
                let l = r.lead().unwrap();
                match p.period(l) {
                    Period::Finite(e) => Period::Finite(e / &r[l]),
                    Period::Infinite => Period::Infinite,
                }
            })
            .collect()
    }

    /// Index in the ambient group: product over layers of `b` at leading
    /// indices and `e_l` elsewhere.
    pub fn index(&self, p: &Presentation) -> Period {
        let mut idx = Period::Finite(BigInt::one());
        for l in 0..p.rank() {
            let layer = match self.row_at(l) {
                Some(r) => Period::Finite(r[l].clone()),
                None => p.period(l).clone(),
            };
            idx = idx.mul(&layer);
        }
        idx
    }

    /// Order of the subgroup, infinite if any relative order is.
    pub fn order(&self, p: &Presentation) -> Period {
        self.relative_orders(p).iter().fold(Period::Finite(BigInt::one()), |a, b| a.mul(b))
    }

    /// Left-peels `x`: returns `(c, rest)` with `x = r_0^{c_0} ⋯ r_k^{c_k} · rest`
    /// where `rest` is the first obstruction (identity iff `x` is a member).
    pub fn sift(&self, p: &Presentation, x: &GroupElement) -> (Vec<BigInt>, GroupElement) {
        let mut x = x.clone();
        let mut coeffs = vec![BigInt::zero(); self.rows.len()];
        for (t, r) in self.rows.iter().enumerate() {
            let l = r.lead().unwrap();
            match x.lead() {
                None => break,
                Some(xl) if xl < l => break,
                Some(xl) if xl > l => continue,
                _ => {}
            }
            let (q, rem) = x[l].div_rem(&r[l]);
            if !rem.is_zero() {
                break;
            }
            x = p.multiply(&p.power(r, &-&q), &x);
            coeffs[t] = q;
        }
        (coeffs, x)
    }

    pub fn contains(&self, p: &Presentation, x: &GroupElement) -> bool {
        self.sift(p, x).1.is_identity()
    }

    /// Exponents of `x` along the rows, if `x` is a member.
    pub fn exponents(&self, p: &Presentation, x: &GroupElement) -> Option<Vec<BigInt>> {
        let (c, rest) = self.sift(p, x);
        if rest.is_identity() {
            Some(c)
        } else {
            None
        }
    }

    /// `∏ r_t^{λ_t}` in row order.
    pub fn evaluate(&self, p: &Presentation, lambda: &[BigInt]) -> GroupElement {
        let mut acc = p.identity();
        for (r, c) in self.rows.iter().zip(lambda) {
            if !c.is_zero() {
                acc = p.multiply(&acc, &p.power(r, c));
            }
        }
        acc
    }

    pub fn is_subgroup_of(&self, p: &Presentation, other: &Subgroup) -> bool {
        self.rows.iter().all(|r| other.contains(p, r))
    }

    /// Canonical representative of the coset `xN`, for this subgroup `N` normal.
    pub fn reduce_coset(&self, p: &Presentation, x: &GroupElement) -> GroupElement {
        let mut x = x.clone();
        for r in &self.rows {
            let l = r.lead().unwrap();
            let q = x[l].div_floor(&r[l]);
            if !q.is_zero() {
                x = p.multiply(&x, &p.power(r, &-q));
            }
        }
        x
    }

    /// Normality in the ambient group, tested on generator conjugates.
    pub fn is_normal(&self, p: &Presentation) -> bool {
        for i in 0..p.rank() {
            let g = p.generator(i);
            let gi = p.inverse(&g);
            for r in &self.rows {
                if !self.contains(p, &p.conjugate(r, &g)) || !self.contains(p, &p.conjugate(r, &gi)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `[self, G]` lies in `below`.
    pub fn is_central_over(&self, p: &Presentation, below: &Subgroup) -> bool {
        self.rows.iter().all(|r| (0..p.rank()).all(|i| below.contains(p, &p.commutator(r, &p.generator(i)))))
    }
}

/// Subgroup generated by `gens`.
pub fn induce(p: &Presentation, gens: &[GroupElement]) -> Subgroup {
    let m = p.rank();
    let mut slots: Vec<Option<GroupElement>> = vec![None; m];
    let mut queue: Vec<GroupElement> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    loop {
        while let Some(x) = queue.pop() {
            insert(p, &mut slots, x, &mut queue);
        }
        let rows: Vec<GroupElement> = slots.iter().flatten().cloned().collect();
        for (a, ra) in rows.iter().enumerate() {
            let la = ra.lead().unwrap();
            if let Period::Finite(e) = p.period(la) {
                let rel = e / &ra[la];
                push_remainder(p, &slots, p.power(ra, &rel), &mut queue);
            }
            let ra_inv = p.inverse(ra);
            for rb in &rows[a + 1..] {
                push_remainder(p, &slots, p.commutator(rb, ra), &mut queue);
                push_remainder(p, &slots, p.commutator(rb, &ra_inv), &mut queue);
            }
        }
        if queue.is_empty() {
            break;
        }
    }
    let mut rows: Vec<GroupElement> = slots.into_iter().flatten().collect();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            let l = rows[b].lead().unwrap();
            let q = rows[a][l].div_floor(&rows[b][l]);
            if !q.is_zero() {
                let adj = p.power(&rows[b], &-q);
                rows[a] = p.multiply(&rows[a], &adj);
            }
        }
    }
    Subgroup { rank: m, rows }
}

fn sift_slots(p: &Presentation, slots: &[Option<GroupElement>], mut x: GroupElement) -> GroupElement {
    while let Some(l) = x.lead() {
        let Some(r) = &slots[l] else { break };
        let (q, rem) = x[l].div_rem(&r[l]);
        if !rem.is_zero() {
            break;
        }
        x = p.multiply(&p.power(r, &-q), &x);
    }
    x
}

fn push_remainder(p: &Presentation, slots: &[Option<GroupElement>], x: GroupElement, queue: &mut Vec<GroupElement>) {
    let rest = sift_slots(p, slots, x);
    if !rest.is_identity() {
        queue.push(rest);
    }
}

fn insert(p: &Presentation, slots: &mut [Option<GroupElement>], x: GroupElement, queue: &mut Vec<GroupElement>) {
    let x = sift_slots(p, slots, x);
    let Some(l) = x.lead() else { return };
    let a = x[l].clone();
    match slots[l].take() {
        None => {
            let row = match p.period(l) {
                Period::Finite(e) => {
                    let g = a.gcd(e);
                    if g == a {
                        x
                    } else {
                        // ⟨x⟩ = ⟨x^k, x^{e/g}⟩ with x^k of leading exponent g
                        let modulus = e / &g;
                        let k = mod_inverse(&(&a / &g), &modulus);
                        queue.push(p.power(&x, &modulus));
                        p.power(&x, &k)
                    }
                }
                Period::Infinite => {
                    if a.is_negative() {
                        p.inverse(&x)
                    } else {
                        x
                    }
                }
            };
            slots[l] = Some(row);
        }
        Some(r) => {
            let b = r[l].clone();
            let e = a.extended_gcd(&b);
            let (g, s, t) = if e.gcd.is_negative() { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
            let new = p.multiply(&p.power(&x, &s), &p.power(&r, &t));
            let neg_a = -(&a / &g);
            let neg_b = -(&b / &g);
            queue.push(p.multiply(&x, &p.power(&new, &neg_a)));
            queue.push(p.multiply(&r, &p.power(&new, &neg_b)));
            slots[l] = Some(new);
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.abs().is_one());
    (e.x * e.gcd.signum()).mod_floor(m)
}

/// Subgroup generated by the rows of both arguments.
pub fn join(p: &Presentation, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens = a.rows.clone();
    gens.extend(b.rows.iter().cloned());
    induce(p, &gens)
}

/// Smallest subgroup containing `gens` and normalized by every element of `conjugators`.
pub fn normal_closure(p: &Presentation, gens: &[GroupElement], conjugators: &[GroupElement]) -> Subgroup {
    let inverses: Vec<GroupElement> = conjugators.iter().map(|c| p.inverse(c)).collect();
    let mut s = induce(p, gens);
    loop {
        let mut extra = Vec::new();
        for r in s.rows() {
            for c in conjugators.iter().chain(&inverses) {
                let y = p.conjugate(r, c);
                if !s.contains(p, &y) {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return s;
        }
        extra.extend(s.rows.iter().cloned());
        s = induce(p, &extra);
    }
}

/// Normal closure in the whole group.
pub fn normal_closure_in_group(p: &Presentation, gens: &[GroupElement]) -> Subgroup {
    let conj: Vec<GroupElement> = (0..p.rank()).map(|i| p.generator(i)).collect();
    normal_closure(p, gens, &conj)
}

/// `[A, B]` for subgroups normal in the ambient group.
pub fn commutator_subgroup(p: &Presentation, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for x in a.rows() {
        for y in b.rows() {
            let c = p.commutator(x, y);
            if !c.is_identity() {
                gens.push(c);
            }
        }
    }
    normal_closure_in_group(p, &gens)
}

/// `{x ∈ H : [x, g] ∈ L for every g in gens}` for `L` normal in the ambient group.
///
/// Works down the chain `K_j`: on the current candidate subgroup, `x ↦ [x, g]`
/// is a homomorphism into the cyclic layer `L K_j / L K_{j+1}`, and the next
/// candidate is its kernel.
pub fn centralizer_mod(p: &Presentation, h: &Subgroup, gens: &[GroupElement], l: &Subgroup) -> Subgroup {
    let mut c = h.clone();
    for j in 0..p.rank() {
        if c.is_trivial() {
            break;
        }
        let modulus = match l.row_at(j) {
            Some(r) => r[j].clone(),
            None => p.period(j).code(),
        };
        if modulus.is_one() {
            continue;
        }
        let rows = c.rows().to_vec();
        let mut table = IntMatrix::zeros(gens.len(), rows.len());
        let mut any = false;
        for (t, x) in rows.iter().enumerate() {
            for (gi, g) in gens.iter().enumerate() {
                let v = l.reduce_coset(p, &p.commutator(x, g));
                debug_assert!(v.lead().is_none_or(|lead| lead >= j));
                let val = if modulus.is_zero() { v[j].clone() } else { v[j].mod_floor(&modulus) };
                if !val.is_zero() {
                    any = true;
                }
                table[(gi, t)] = val;
            }
        }
        if !any {
            continue;
        }
        c = kernel_on(p, &c, &table, &vec![modulus; gens.len()]);
    }
    c
}

/// Kernel of the homomorphism `H → ⊕ ℤ/moduli` sending row `t` of `H` to
/// column `t` of `table`. The map must factor through `H/[H,H]`.
pub fn kernel_on(p: &Presentation, h: &Subgroup, table: &IntMatrix, moduli: &[BigInt]) -> Subgroup {
    let rows = h.rows().to_vec();
    let zeros = vec![BigInt::zero(); table.rows()];
    let sol = solve_congruences(table, &zeros, moduli);
    let mut gens: Vec<GroupElement> = (0..sol.lattice.rows()).map(|k| h.evaluate(p, sol.lattice.row(k))).collect();
    for (a, x) in rows.iter().enumerate() {
        for y in &rows[a + 1..] {
            gens.push(p.commutator(y, x));
        }
    }
    normal_closure(p, &gens, &rows)
}

/// Projection from `G` onto a quotient presentation `G/N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    normal: Subgroup,
    kept: Vec<usize>,
}

impl Projection {
    /// Ambient generator behind each quotient generator.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.normal
    }

    pub fn project(&self, p: &Presentation, x: &GroupElement) -> GroupElement {
        let z = self.normal.reduce_coset(p, x);
        GroupElement::from_coords(self.kept.iter().map(|&l| z[l].clone()).collect())
    }

    /// A preimage in `G` of a quotient element.
    pub fn lift(&self, p: &Presentation, y: &GroupElement) -> GroupElement {
        let mut c = vec![BigInt::zero(); p.rank()];
        for (k, &l) in self.kept.iter().enumerate() {
            c[l] = y[k].clone();
        }
        p.element(&c)
    }
}

/// Pseudo-basis presentation of `G/N` and the coordinate projection.
pub fn quotient(p: &Presentation, n: &Subgroup) -> Result<(Presentation, Projection)> {
    if !n.is_normal(p) {
        return Err(Error::NotNormal);
    }
    let mut kept = Vec::new();
    let mut periods = Vec::new();
    for l in 0..p.rank() {
        let period = match n.row_at(l) {
            Some(r) => Period::Finite(r[l].clone()),
            None => p.period(l).clone(),
        };
        if period == Period::Finite(BigInt::one()) {
            continue;
        }
        kept.push(l);
        periods.push(period);
    }
    let proj = Projection { normal: n.clone(), kept };
    let tail = |x: &GroupElement| -> Vec<(usize, BigInt)> { proj.project(p, x).support() };
    let mut b = PresentationBuilder::new(periods.clone());
    for (k, &l) in proj.kept.iter().enumerate() {
        if let Period::Finite(e) = &periods[k] {
            b = b.power(k, tail(&p.power(&p.generator(l), e)));
        }
        for (k2, &l2) in proj.kept.iter().enumerate().skip(k + 1) {
            b = b.comm(k2, k, tail(&p.commutator(&p.generator(l2), &p.generator(l))));
        }
    }
    Ok((b.build()?, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::from_i64(c)
    }

    #[test]
    fn heis_even_subgroup() {
        let p = fixtures::heis();
        let s = induce(&p, &[e(&[2, 0, 0]), e(&[0, 1, 0])]);
        assert_eq!(s.rows(), &[e(&[2, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 2])]);
        assert!(s.contains(&p, &e(&[0, 0, 2])));
        assert!(!s.contains(&p, &e(&[0, 0, 1])));
        assert_eq!(s.index(&p), Period::finite(4));
    }

    #[test]
    fn trivial_cases() {
        let p = fixtures::zg();
        let all: Vec<GroupElement> = (0..p.rank()).map(|i| p.generator(i)).collect();
        assert_eq!(induce(&p, &all), Subgroup::whole(&p));
        assert_eq!(induce(&p, &[]), Subgroup::trivial(p.rank()));
        assert!(Subgroup::trivial(p.rank()).contains(&p, &p.identity()));
        let x = p.element_i64(&[3, -1, 2, 4, 7, 1, 0, 2, -5, 6]);
        assert!(Subgroup::whole(&p).contains(&p, &x));
    }

    #[test]
    fn finite_lead_gets_gcd() {
        let p = fixtures::nr();
        let s = induce(&p, &[e(&[0, 0, 0, 0, 2, 0])]);
        assert_eq!(s.rows(), &[e(&[0, 0, 0, 0, 1, 0])]);
    }

    #[test]
    fn derived_subgroups() {
        let p = fixtures::heis();
        let w = Subgroup::whole(&p);
        assert_eq!(commutator_subgroup(&p, &w, &w), Subgroup::tail_term(&p, 2));
        let p = fixtures::zg();
        let w = Subgroup::whole(&p);
        assert_eq!(commutator_subgroup(&p, &w, &w), Subgroup::tail_term(&p, 5));
        assert!(commutator_subgroup(&p, &w, &Subgroup::trivial(10)).is_trivial());
    }

    #[test]
    fn centers() {
        let p = fixtures::heis();
        let gens: Vec<GroupElement> = (0..3).map(|i| p.generator(i)).collect();
        let z = centralizer_mod(&p, &Subgroup::whole(&p), &gens, &Subgroup::trivial(3));
        assert_eq!(z, Subgroup::tail_term(&p, 2));
        let p = fixtures::zg();
        let gens: Vec<GroupElement> = (0..10).map(|i| p.generator(i)).collect();
        let z = centralizer_mod(&p, &Subgroup::whole(&p), &gens, &Subgroup::trivial(10));
        assert_eq!(z, Subgroup::tail_term(&p, 4));
        let p = fixtures::nr();
        let gens: Vec<GroupElement> = (0..6).map(|i| p.generator(i)).collect();
        let z = centralizer_mod(&p, &Subgroup::whole(&p), &gens, &Subgroup::trivial(6));
        assert_eq!(z.rows()[0], e(&[0, 0, 3, 0, 0, 0]));
        assert_eq!(z.rows().len(), 4);
    }

    #[test]
    fn quotients() {
        let p = fixtures::heis();
        let (q, _) = quotient(&p, &Subgroup::tail_term(&p, 2)).unwrap();
        assert_eq!(q, fixtures::free_abelian(2));
        let (q, _) = quotient(&p, &Subgroup::whole(&p)).unwrap();
        assert_eq!(q.rank(), 0);
        let p = fixtures::zg();
        let (q, proj) = quotient(&p, &Subgroup::tail_term(&p, 4)).unwrap();
        assert_eq!(q.periods(), &[Period::Infinite, Period::Infinite, Period::Infinite, Period::finite(5)]);
        assert!(q.comm_tails().is_empty());
        let x = p.element_i64(&[1, 2, 3, 4, 5, 1, 2, 3, 4, 5]);
        let y = p.element_i64(&[-1, 0, 2, 3, 0, 0, 1, 0, 0, 9]);
        assert_eq!(proj.project(&p, &p.multiply(&x, &y)), q.multiply(&proj.project(&p, &x), &proj.project(&p, &y)));
        let not_normal = induce(&p, &[p.generator(0)]);
        assert_eq!(quotient(&p, &not_normal).unwrap_err(), Error::NotNormal);
    }
}

//! Adapted pseudo-bases, abelian deformations and their Ext classes.
//!
//! An adapted presentation splits the generators into four consecutive
//! blocks (0-based, markers `i0 ≤ i1 ≤ i2 ≤ m`):
//!
//! * `0..i0` projects to a basis of `G/M(G)`;
//! * `i0..i1` projects to a basis of `M(G)/N(G)` with `e_{i0} | … | e_{i1-1}`;
//! * `i1..i2` is central and projects to a basis of `N(G)/Is(G′)`;
//! * `i2..m` is a pseudo-basis of `Is(G′)`,
//!
//! and the power of the `r`-th generator of the second block has exponent 1
//! at `i1 + r` and 0 elsewhere in the second and third blocks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{snf, solve_congruences, IntMatrix};
use crate::morphism::{hom_from_images, is_inverse_pair, GroupHom};
use crate::pc::{GroupElement, Period, Presentation, PresentationBuilder};
use crate::section::AbelianSection;
use crate::series::{key_subgroups, KeySubgroups};
use crate::subgroup::Subgroup;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedPresentation {
    pub pres: Presentation,
    pub i0: usize,
    pub i1: usize,
    pub i2: usize,
    /// Maps between the input presentation and `pres`.
    pub to_adapted: GroupHom,
    pub from_adapted: GroupHom,
}

impl AdaptedPresentation {
    pub fn n(&self) -> usize {
        self.i1 - self.i0
    }

    pub fn p(&self) -> usize {
        self.i2 - self.i1
    }

    /// Product of the periods of the second block.
    pub fn e(&self) -> BigInt {
        (self.i0..self.i1).map(|i| self.pres.period(i).value().cloned().unwrap()).product()
    }
}

fn tail_start(p: &Presentation, s: &Subgroup) -> Option<usize> {
    let t = p.rank() - s.rows().len();
    if *s == Subgroup::tail_term(p, t) {
        Some(t)
    } else {
        None
    }
}

/// Markers of `p` if it already is adapted.
pub fn adapted_markers(p: &Presentation, k: &KeySubgroups) -> Option<(usize, usize, usize)> {
    let i0 = tail_start(p, &k.mg)?;
    let i1 = tail_start(p, &k.ng)?;
    let i2 = tail_start(p, &k.iso_derived)?;
    if !(i0 <= i1 && i1 <= i2) {
        return None;
    }
    let n = i1 - i0;
    if (0..i0).chain(i1..i2).any(|i| p.period(i).is_finite()) {
        return None;
    }
    for i in i0..i1 {
        let e = p.period(i).value()?;
        if i + 1 < i1 {
            let next = p.period(i + 1).value()?;
            if !next.is_multiple_of(e) {
                return None;
            }
        }
        let t = p.power_value(i)?;
        if (i + 1..i1).any(|k| !t[k].is_zero()) {
            return None;
        }
        for k in i1..i2 {
            let want = if k == i + n { BigInt::one() } else { BigInt::zero() };
            if t[k] != want {
                return None;
            }
        }
    }
    for i in i1..i2 {
        if !k.center.contains(p, &p.generator(i)) {
            return None;
        }
    }
    Some((i0, i1, i2))
}

/// Returns `p` unchanged when it is adapted, otherwise builds an adapted basis.
pub fn adapt_basis(p: &Presentation) -> Result<AdaptedPresentation> {
    let k = key_subgroups(p)?;
    if let Some((i0, i1, i2)) = adapted_markers(p, &k) {
        let id = GroupHom::identity(p);
        return Ok(AdaptedPresentation { pres: p.clone(), i0, i1, i2, to_adapted: id.clone(), from_adapted: id });
    }
    let w = Subgroup::whole(p);
    let g_over_m = AbelianSection::new(p, &w, &k.mg)?;
    let m_over_is = AbelianSection::new(p, &k.mg, &k.iso_derived)?;
    if g_over_m.periods().iter().chain(m_over_is.periods()).any(Period::is_finite) {
        return Err(Error::Inconsistent("expected torsion-free sections above the isolator".into()));
    }
    let r = m_over_is.dim();
    let n_rows = m_over_is.image_rows(p, &k.ng);
    let smith = snf(&IntMatrix::from_rows(r, n_rows));
    let d = smith.diagonal();
    if d.len() < r || d.iter().any(Zero::is_zero) {
        return Err(Error::Inconsistent("N(G) has smaller rank than M(G)".into()));
    }
    let to_w = |x: &GroupElement| -> Vec<BigInt> { smith.v.vec_mul(&m_over_is.coords(p, x).unwrap()) };
    let order: Vec<usize> = (0..r).filter(|&j| !d[j].is_one()).chain((0..r).filter(|&j| d[j].is_one())).collect();
    let n = order.iter().take_while(|&&j| !d[j].is_one()).count();

    let mut gens: Vec<GroupElement> = g_over_m.basis().to_vec();
    let mut periods: Vec<Period> = vec![Period::Infinite; gens.len()];
    let i0 = gens.len();
    for &j in &order[..n] {
        gens.push(m_over_is.element(p, smith.v_inv.row(j)));
        periods.push(Period::Finite(d[j].clone()));
    }
    let i1 = gens.len();
    // central lifts of the basis d_j·w_j of N/Is(G′)
    let z_rows = k.center.rows();
    let mut z_table = IntMatrix::zeros(r, z_rows.len());
    for (t, z) in z_rows.iter().enumerate() {
        let a = to_w(z);
        for i in 0..r {
            z_table[(i, t)] = &a[i] / &d[i];
        }
    }
    for &j in &order {
        let mut target = vec![BigInt::zero(); r];
        target[j] = BigInt::one();
        let sol = solve_congruences(&z_table, &target, &vec![BigInt::zero(); r]);
        if !sol.consistent {
            return Err(Error::Inconsistent("centre does not cover N(G)/Is(G')".into()));
        }
        gens.push(k.center.evaluate(p, &sol.particular));
        periods.push(Period::Infinite);
    }
    let i2 = gens.len();
    gens.extend(k.iso_derived.rows().iter().cloned());
    periods.extend(k.iso_derived.relative_orders(p));

    let new_coords = |x: &GroupElement| -> GroupElement {
        let mut x = x.clone();
        let mut c: Vec<BigInt> = Vec::with_capacity(gens.len());
        let peel = |x: &mut GroupElement, from: usize, cs: &[BigInt]| {
            let mut acc = p.identity();
            for (g, k) in gens[from..].iter().zip(cs) {
                acc = p.multiply(&acc, &p.power(g, k));
            }
            *x = p.multiply(&p.inverse(&acc), x);
        };
        let top = g_over_m.coords(p, &x).unwrap();
        peel(&mut x, 0, &top);
        c.extend(top);
        let a = to_w(&x);
        let mid: Vec<BigInt> = order[..n].iter().map(|&j| a[j].mod_floor(&d[j])).collect();
        peel(&mut x, i0, &mid);
        c.extend(mid);
        let a = to_w(&x);
        let low: Vec<BigInt> = order.iter().map(|&j| &a[j] / &d[j]).collect();
        peel(&mut x, i1, &low);
        c.extend(low);
        c.extend(k.iso_derived.exponents(p, &x).expect("remainder lies in the isolator"));
        GroupElement::from_coords(c)
    };

    let mut b = PresentationBuilder::new(periods.clone());
    for i in 0..gens.len() {
        if let Period::Finite(e) = &periods[i] {
            b = b.power(i, new_coords(&p.power(&gens[i], e)).support());
        }
        for j in i + 1..gens.len() {
            b = b.comm(j, i, new_coords(&p.commutator(&gens[j], &gens[i])).support());
        }
    }
    let q = b.build()?;
    q.consistency_check().into_result()?;
    let to_adapted = hom_from_images(p, &q, (0..p.rank()).map(|i| new_coords(&p.generator(i))).collect())?;
    let from_adapted = hom_from_images(&q, p, gens)?;
    if !is_inverse_pair(&to_adapted, &from_adapted)? {
        return Err(Error::Inconsistent("adapted basis maps are not mutually inverse".into()));
    }
    Ok(AdaptedPresentation { pres: q, i0, i1, i2, to_adapted, from_adapted })
}

/// The data `(d̄, c̄)` of a deformation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeformationParams {
    pub d: Vec<BigInt>,
    /// `n × n`, row `r` belongs to the `r`-th generator of the second block.
    pub c: Vec<Vec<BigInt>>,
}

impl DeformationParams {
    pub fn new(d: &[i64], c: &[&[i64]]) -> Self {
        DeformationParams {
            d: d.iter().map(|&x| BigInt::from(x)).collect(),
            c: c.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let c = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        DeformationParams { d: vec![BigInt::one(); n], c }
    }

    /// `det c`, once the shape is known to be square.
    pub fn det_c(&self) -> BigInt {
        let n = self.d.len();
        IntMatrix::from_rows(n, self.c.clone()).determinant()
    }

    pub fn validate(&self, a: &AdaptedPresentation) -> Result<()> {
        let n = a.n();
        if self.d.len() != n {
            return Err(Error::InvalidParams(format!("d has {} entries, expected {}", self.d.len(), n)));
        }
        if self.c.len() != n || self.c.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParams(format!("c must be {}x{}", n, n)));
        }
        let prod: BigInt = self.d.iter().product();
        if !prod.gcd(&a.e()).is_one() {
            return Err(Error::InvalidParams(format!("gcd({}, {}) is not 1", prod, a.e())));
        }
        if !self.det_c().abs().is_one() {
            return Err(Error::InvalidParams(format!("det c = {}", self.det_c())));
        }
        Ok(())
    }

    fn exponent(&self, r: usize, k: usize) -> BigInt {
        &self.d[k] * &self.c[r][k]
    }
}

/// Replaces the power tails of the second block by `∏_k u_{i1+k}^{d_k c_{rk}}`,
/// keeping the part inside `Is(G′)`.
pub fn abdef(a: &AdaptedPresentation, params: &DeformationParams) -> Result<Presentation> {
    params.validate(a)?;
    let n = a.n();
    let mut b = a.pres.to_builder();
    for r in 0..n {
        let i = a.i0 + r;
        let mut tail: Vec<(usize, BigInt)> = (0..n).map(|k| (a.i1 + k, params.exponent(r, k))).collect();
        tail.extend(a.pres.power_tail(i).iter().filter(|(k, _)| *k >= a.i2).cloned());
        b = b.power(i, tail);
    }
    let q = b.build()?;
    q.consistency_check().into_result()?;
    Ok(q)
}

/// Element of `⊕_r (ℤ/e_r)^p`, one row per generator of the second block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtClass {
    pub moduli: Vec<BigInt>,
    pub components: Vec<Vec<BigInt>>,
}

pub fn ext_class(a: &AdaptedPresentation, params: &DeformationParams) -> Result<ExtClass> {
    params.validate(a)?;
    let n = a.n();
    let mut moduli = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    for r in 0..n {
        let e = a.pres.period(a.i0 + r).value().cloned().unwrap();
        let row = (0..a.p()).map(|k| if k < n { params.exponent(r, k).mod_floor(&e) } else { BigInt::zero() }).collect();
        moduli.push(e);
        components.push(row);
    }
    Ok(ExtClass { moduli, components })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deformation {
    pub params: DeformationParams,
    pub class: ExtClass,
    pub pres: Presentation,
}

/// Result of [`enumerate_deformations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// One representative per realized class, in class order.
    pub classes: Vec<Deformation>,
    /// Number of parameter choices examined.
    pub candidates: usize,
    /// `e^p`.
    pub bound: BigInt,
}

fn signed_permutations(n: usize) -> Vec<Vec<Vec<BigInt>>> {
    fn perms(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            perms(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut ps = Vec::new();
    perms(&mut (0..n).collect(), 0, &mut ps);
    ps.sort();
    let mut out = Vec::new();
    for perm in ps {
        for signs in 0u32..(1 << n) {
            let mut c = vec![vec![BigInt::zero(); n]; n];
            for (r, &k) in perm.iter().enumerate() {
                c[r][k] = if signs >> r & 1 == 1 { BigInt::from(-1) } else { BigInt::one() };
            }
            out.push(c);
        }
    }
    out
}

/// Runs over `d` in units modulo `e` and `c` over signed permutations,
/// keeping the first parameters realizing each Ext class.
pub fn enumerate_deformations(a: &AdaptedPresentation) -> Result<Enumeration> {
    let n = a.n();
    let e = a.e();
    let units: Vec<BigInt> = if e.is_one() {
        vec![BigInt::one()]
    } else {
        let mut u = Vec::new();
        let mut x = BigInt::one();
        while x < e {
            if x.gcd(&e).is_one() {
                u.push(x.clone());
            }
            x += 1;
        }
        u
    };
    if n > 6 || units.len().checked_pow(n as u32).is_none_or(|c| c > 100_000) {
        return Err(Error::TooLarge(format!("{} parameter choices", units.len())));
    }
    let mut ds: Vec<Vec<BigInt>> = vec![Vec::new()];
    for _ in 0..n {
        ds = ds.into_iter().flat_map(|pre| units.iter().map(move |u| {
            let mut v = pre.clone();
            v.push(u.clone());
            v
        })).collect();
    }
    let cs = signed_permutations(n);
    let mut seen: BTreeMap<ExtClass, DeformationParams> = BTreeMap::new();
    let mut candidates = 0;
    for d in &ds {
        for c in &cs {
            let params = DeformationParams { d: d.clone(), c: c.clone() };
            candidates += 1;
            let class = ext_class(a, &params)?;
            seen.entry(class).or_insert(params);
        }
    }
    let mut classes = Vec::with_capacity(seen.len());
    for (class, params) in seen {
        let pres = abdef(a, &params)?;
        classes.push(Deformation { params, class, pres });
    }
    Ok(Enumeration { classes, candidates, bound: num_traits::pow(e, a.p()) })
}

/// The embedding `G → Abdef(G, d̄, c̄)` that is the identity off the third
/// block and sends `u_{i1+r}` to `∏_k v_{i1+k}^{d_k c_{rk}}`.
pub fn standard_embedding(a: &AdaptedPresentation, params: &DeformationParams) -> Result<GroupHom> {
    let target = abdef(a, params)?;
    let n = a.n();
    let mut images: Vec<GroupElement> = (0..target.rank()).map(|i| target.generator(i)).collect();
    for r in 0..n {
        let word: Vec<(usize, BigInt)> = (0..n).map(|k| (a.i1 + k, params.exponent(r, k))).collect();
        images[a.i1 + r] = target.normal_form(&word)?;
    }
    hom_from_images(&a.pres, &target, images)
}

/// Product of the first `j` primes not dividing `d`.
pub fn twist_factor(d: &BigInt, j: usize) -> BigInt {
    let mut q = BigInt::one();
    let mut found = 0;
    let mut cand = BigInt::from(2);
    while found < j {
        if is_prime(&cand) && !d.is_multiple_of(&cand) {
            q *= &cand;
            found += 1;
        }
        cand += 1;
    }
    q
}

fn is_prime(x: &BigInt) -> bool {
    if *x < BigInt::from(2) {
        return false;
    }
    let mut k = BigInt::from(2);
    while &k * &k <= *x {
        if x.is_multiple_of(&k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The twisted embedding `φ_j`: the second block picks up central factors
/// `v_{i1+k}^{q_k ê_r c_{rk}}` and the third block maps with `d_k + q_k e`.
pub fn twisted_embedding(a: &AdaptedPresentation, params: &DeformationParams, j: usize) -> Result<GroupHom> {
    let target = abdef(a, params)?;
    let n = a.n();
    let e = a.e();
    let q: Vec<BigInt> = params.d.iter().map(|dk| twist_factor(dk, j)).collect();
    let mut images: Vec<GroupElement> = (0..target.rank()).map(|i| target.generator(i)).collect();
    for r in 0..n {
        let er = a.pres.period(a.i0 + r).value().cloned().unwrap();
        let e_hat = &e / &er;
        let mut word = vec![(a.i0 + r, BigInt::one())];
        word.extend((0..n).map(|k| (a.i1 + k, &q[k] * &e_hat * &params.c[r][k])));
        images[a.i0 + r] = target.normal_form(&word)?;
        let word: Vec<(usize, BigInt)> =
            (0..n).map(|k| (a.i1 + k, (&params.d[k] + &q[k] * &e) * &params.c[r][k])).collect();
        images[a.i1 + r] = target.normal_form(&word)?;
    }
    hom_from_images(&a.pres, &target, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::morphism::image_index;

    #[test]
    fn zilber_is_adapted() {
        let p = fixtures::zg();
        let a = adapt_basis(&p).unwrap();
        assert_eq!(a.pres, p);
        assert_eq!((a.i0, a.i1, a.i2, a.n(), a.p()), (3, 4, 5, 1, 1));
        assert_eq!(a.e(), BigInt::from(5));
    }

    #[test]
    fn heis_has_empty_blocks() {
        let a = adapt_basis(&fixtures::heis()).unwrap();
        assert_eq!((a.i0, a.i1, a.i2), (2, 2, 2));
        assert_eq!(a.e(), BigInt::one());
    }

    #[test]
    fn nr_gains_a_generator() {
        let p = fixtures::nr();
        let a = adapt_basis(&p).unwrap();
        assert_eq!(a.pres.rank(), 7);
        assert_eq!((a.i0, a.i1, a.i2), (2, 3, 4));
        assert_eq!(a.e(), BigInt::from(3));
        assert_eq!(a.from_adapted.images()[3], GroupElement::from_i64(&[0, 0, 3, 0, 0, 0]));
        let again = adapt_basis(&a.pres).unwrap();
        assert_eq!(again.pres, a.pres);
    }

    #[test]
    fn zilber_deformation_is_k() {
        let a = adapt_basis(&fixtures::zg()).unwrap();
        let k = abdef(&a, &DeformationParams::new(&[2], &[&[1]])).unwrap();
        assert_eq!(k, fixtures::zk());
        let same = abdef(&a, &DeformationParams::identity(1)).unwrap();
        assert_eq!(same, fixtures::zg());
    }

    #[test]
    fn bad_params_rejected() {
        let a = adapt_basis(&fixtures::zg()).unwrap();
        assert!(abdef(&a, &DeformationParams::new(&[5], &[&[1]])).is_err());
        assert!(abdef(&a, &DeformationParams::new(&[2], &[&[2]])).is_err());
        assert!(abdef(&a, &DeformationParams::new(&[2, 1], &[&[1]])).is_err());
    }

    #[test]
    fn ext_classes() {
        let a = adapt_basis(&fixtures::zg()).unwrap();
        let cls = |d: i64, c: i64| ext_class(&a, &DeformationParams::new(&[d], &[&[c]])).unwrap().components[0][0].clone();
        assert_eq!(cls(2, 1), BigInt::from(2));
        assert_eq!(cls(1, 1), BigInt::from(1));
        assert_eq!(cls(3, -1), BigInt::from(2));
    }

    #[test]
    fn enumerations() {
        let a = adapt_basis(&fixtures::zg()).unwrap();
        let en = enumerate_deformations(&a).unwrap();
        assert_eq!(en.classes.len(), 4);
        assert_eq!(en.bound, BigInt::from(5));
        let a = adapt_basis(&fixtures::nr()).unwrap();
        let en = enumerate_deformations(&a).unwrap();
        assert_eq!(en.classes.len(), 2);
        assert_eq!(en.bound, BigInt::from(3));
        let a = adapt_basis(&fixtures::heis()).unwrap();
        assert_eq!(enumerate_deformations(&a).unwrap().classes.len(), 1);
    }

    #[test]
    fn embeddings() {
        let a = adapt_basis(&fixtures::zg()).unwrap();
        let params = DeformationParams::new(&[2], &[&[1]]);
        let phi = standard_embedding(&a, &params).unwrap();
        assert_eq!(image_index(&phi).1, Period::finite(2));
        let t = twisted_embedding(&a, &params, 1).unwrap();
        assert_eq!(t.images()[3], GroupElement::from_i64(&[0, 0, 0, 1, 3, 0, 0, 0, 0, 0]));
        assert_eq!(t.images()[4], GroupElement::from_i64(&[0, 0, 0, 0, 17, 0, 0, 0, 0, 0]));
        let id = standard_embedding(&a, &DeformationParams::identity(1)).unwrap();
        assert_eq!(id, GroupHom::identity(&a.pres));
        let b = adapt_basis(&fixtures::nr()).unwrap();
        let nr2 = abdef(&b, &DeformationParams::new(&[2], &[&[1]])).unwrap();
        assert_eq!(nr2.power_tail(2), &[(3, BigInt::from(2))]);
    }
}

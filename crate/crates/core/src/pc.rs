//! Pseudo-basis presentations and normal-form arithmetic.
//!
//! A presentation has generators `u_0, …, u_{m-1}` with periods `e_i` and
//! relations
//!
//! * `u_i^{e_i} = T_i` for finite `e_i`, with `T_i` supported above `i`;
//! * `[u_j, u_i] = C_{ji}` for `i < j`, with `C_{ji}` supported above `j`.
//!
//! Every element is `u_0^{t_0} ⋯ u_{m-1}^{t_{m-1}}` for a unique exponent
//! vector with `0 ≤ t_i < e_i` where `e_i` is finite.
//!
//! Products are computed by collecting one syllable at a time: for
//! `x = p · u_i^a · s` with `p` below `i` and `s` above it,
//! `x · u_i^e = p · u_i^{a+e} · φ_i^e(s)` where `φ_i(v) = u_i^{-1} v u_i`.
//! The images `φ_i^{±1}(u_j)` are cached for every `i < j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Relative order of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    Finite(BigInt),
    Infinite,
}

impl Period {
    /// Decodes the file convention where `0` means infinite.
    pub fn from_code(code: &BigInt) -> Period {
        if code.is_zero() {
            Period::Infinite
        } else {
            Period::Finite(code.abs())
        }
    }

    pub fn finite(n: i64) -> Period {
        Period::Finite(BigInt::from(n))
    }

    /// `0` for infinite, the period otherwise. Doubles as a congruence modulus.
    pub fn code(&self) -> BigInt {
        match self {
            Period::Finite(e) => e.clone(),
            Period::Infinite => BigInt::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Period::Finite(_))
    }

    pub fn value(&self) -> Option<&BigInt> {
        match self {
            Period::Finite(e) => Some(e),
            Period::Infinite => None,
        }
    }

    /// Reduces `x` into `[0, e)` for finite periods; identity otherwise.
    pub fn reduce(&self, x: &BigInt) -> BigInt {
        match self {
            Period::Finite(e) => x.mod_floor(e),
            Period::Infinite => x.clone(),
        }
    }

    /// Product of periods, infinite if either factor is.
    pub fn mul(&self, other: &Period) -> Period {
        match (self, other) {
            (Period::Finite(a), Period::Finite(b)) => Period::Finite(a * b),
            _ => Period::Infinite,
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Finite(e) => write!(f, "{}", e),
            Period::Infinite => write!(f, "inf"),
        }
    }
}

/// Canonical exponent vector of a group element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn identity(m: usize) -> Self {
        GroupElement { coords: vec![BigInt::zero(); m] }
    }

    pub fn generator(m: usize, i: usize) -> Self {
        let mut g = Self::identity(m);
        g.coords[i] = BigInt::one();
        g
    }

    /// Wraps an exponent vector. The caller asserts it is canonical; use
    /// [`Presentation::element`] to canonicalize arbitrary vectors.
    pub fn from_coords(coords: Vec<BigInt>) -> Self {
        GroupElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        GroupElement { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero exponent.
    pub fn lead(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }

    /// Nonzero exponents as `(index, exponent)` pairs.
    pub fn support(&self) -> Vec<(usize, BigInt)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

impl core::ops::Index<usize> for GroupElement {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.support();
        if s.is_empty() {
            return write!(f, "1");
        }
        for (k, (i, e)) in s.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e.is_one() {
                write!(f, "u{}", i + 1)?;
            } else {
                write!(f, "u{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Sparse word `u_{k_1}^{a_1} ⋯` with strictly increasing indices.
pub type Tail = Vec<(usize, BigInt)>;

fn normalize_tail(mut t: Tail) -> Tail {
    t.sort_by_key(|(k, _)| *k);
    let mut out: Tail = Vec::with_capacity(t.len());
    for (k, a) in t {
        match out.last_mut() {
            Some((lk, la)) if *lk == k => *la += a,
            _ => out.push((k, a)),
        }
    }
    out.retain(|(_, a)| !a.is_zero());
    out
}

/// Collects the relations of a presentation before it is validated.
#[derive(Clone, Debug)]
pub struct PresentationBuilder {
    periods: Vec<Period>,
    powers: BTreeMap<usize, Tail>,
    comms: BTreeMap<(usize, usize), Tail>,
}

impl PresentationBuilder {
    pub fn new(periods: Vec<Period>) -> Self {
        PresentationBuilder { periods, powers: BTreeMap::new(), comms: BTreeMap::new() }
    }

    /// Sets `u_i^{e_i}`. Repeated indices in `tail` are merged.
    pub fn power(mut self, i: usize, tail: Tail) -> Self {
        self.powers.insert(i, normalize_tail(tail));
        self
    }

    /// Sets `[u_j, u_i]` for `i < j`.
    pub fn comm(mut self, j: usize, i: usize, tail: Tail) -> Self {
        self.comms.insert((j, i), normalize_tail(tail));
        self
    }

    pub fn power_i64(self, i: usize, tail: &[(usize, i64)]) -> Self {
        self.power(i, tail.iter().map(|&(k, a)| (k, BigInt::from(a))).collect())
    }

    pub fn comm_i64(self, j: usize, i: usize, tail: &[(usize, i64)]) -> Self {
        self.comm(j, i, tail.iter().map(|&(k, a)| (k, BigInt::from(a))).collect())
    }

    pub fn build(self) -> Result<Presentation> {
        let m = self.periods.len();
        for (i, p) in self.periods.iter().enumerate() {
            if let Period::Finite(e) = p {
                if e.is_one() {
                    return Err(Error::PeriodOne { index: i });
                }
                if e.is_zero() || e.is_negative() {
                    return Err(Error::Inconsistent(format!("period of u{} must be positive", i + 1)));
                }
            }
        }
        let mut powers = vec![Vec::new(); m];
        for (i, t) in self.powers {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, rank: m });
            }
            if !self.periods[i].is_finite() {
                if t.is_empty() {
                    continue;
                }
                return Err(Error::TailOnInfinite { index: i });
            }
            for &(k, _) in &t {
                if k >= m {
                    return Err(Error::IndexOutOfRange { index: k, rank: m });
                }
                if k <= i {
                    return Err(Error::SupportViolation { relation: format!("u{}^e", i + 1), index: k });
                }
            }
            powers[i] = t;
        }
        let mut comms = BTreeMap::new();
        for ((j, i), t) in self.comms {
            if j >= m {
                return Err(Error::IndexOutOfRange { index: j, rank: m });
            }
            if i >= j {
                return Err(Error::InvalidCommutatorKey { j, i });
            }
            for &(k, _) in &t {
                if k >= m {
                    return Err(Error::IndexOutOfRange { index: k, rank: m });
                }
                if k <= j {
                    return Err(Error::SupportViolation {
                        relation: format!("[u{},u{}]", j + 1, i + 1),
                        index: k,
                    });
                }
            }
            if !t.is_empty() {
                comms.insert((j, i), t);
            }
        }
        let mut p = Presentation {
            periods: self.periods,
            powers,
            comms,
            power_values: vec![Vec::new(); m],
            conj: vec![Vec::new(); m],
            conj_inv: vec![Vec::new(); m],
        };
        p.build_caches();
        Ok(p)
    }
}

/// A validated pseudo-basis presentation with its collection caches.
#[derive(Clone)]
pub struct Presentation {
    periods: Vec<Period>,
    powers: Vec<Tail>,
    comms: BTreeMap<(usize, usize), Tail>,
    /// Normal form of `u_i^{e_i}` (empty for infinite periods).
    power_values: Vec<Vec<BigInt>>,
    /// `conj[i][j - i - 1] = u_i^{-1} u_j u_i`.
    conj: Vec<Vec<Vec<BigInt>>>,
    /// `conj_inv[i][j - i - 1] = u_i u_j u_i^{-1}`.
    conj_inv: Vec<Vec<Vec<BigInt>>>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.periods == other.periods && self.powers == other.powers && self.comms == other.comms
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("periods", &self.periods)
            .field("powers", &self.powers)
            .field("comms", &self.comms)
            .finish()
    }
}

const REPEAT_LIMIT: u64 = 12;

impl Presentation {
    pub fn rank(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn period(&self, i: usize) -> &Period {
        &self.periods[i]
    }

    /// Stored tail of `u_i^{e_i}` (empty when trivial or the period is infinite).
    pub fn power_tail(&self, i: usize) -> &[(usize, BigInt)] {
        &self.powers[i]
    }

    /// Stored tail of `[u_j, u_i]`, `i < j`.
    pub fn comm_tail(&self, j: usize, i: usize) -> &[(usize, BigInt)] {
        self.comms.get(&(j, i)).map(|t| t.as_slice()).unwrap_or(&[])
    }

    /// All nontrivial commutator tails keyed by `(j, i)`.
    pub fn comm_tails(&self) -> &BTreeMap<(usize, usize), Tail> {
        &self.comms
    }

    /// A builder preloaded with this presentation's relations.
    pub fn to_builder(&self) -> PresentationBuilder {
        let mut b = PresentationBuilder::new(self.periods.clone());
        for (i, t) in self.powers.iter().enumerate() {
            if !t.is_empty() {
                b = b.power(i, t.clone());
            }
        }
        for (&(j, i), t) in &self.comms {
            b = b.comm(j, i, t.clone());
        }
        b
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.rank())
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::generator(self.rank(), i)
    }

    /// Normal form of `u_i^{e_i}`, or `None` for infinite periods.
    pub fn power_value(&self, i: usize) -> Option<GroupElement> {
        if self.periods[i].is_finite() {
            Some(GroupElement::from_coords(self.power_values[i].clone()))
        } else {
            None
        }
    }

    /// Whether the exponents are in canonical range.
    pub fn is_canonical(&self, x: &GroupElement) -> bool {
        x.len() == self.rank()
            && x.coords.iter().zip(&self.periods).all(|(c, p)| match p {
                Period::Finite(e) => !c.is_negative() && c < e,
                Period::Infinite => true,
            })
    }

    /// Value of the word `u_{k_1}^{a_1} u_{k_2}^{a_2} ⋯` (any order, repeats allowed).
    pub fn normal_form(&self, word: &[(usize, BigInt)]) -> Result<GroupElement> {
        let m = self.rank();
        let mut x = vec![BigInt::zero(); m];
        for (k, a) in word {
            if *k >= m {
                return Err(Error::IndexOutOfRange { index: *k, rank: m });
            }
            self.mul_syllable(&mut x, *k, a);
        }
        Ok(GroupElement::from_coords(x))
    }

    pub fn normal_form_i64(&self, word: &[(usize, i64)]) -> Result<GroupElement> {
        let w: Vec<(usize, BigInt)> = word.iter().map(|&(k, a)| (k, BigInt::from(a))).collect();
        self.normal_form(&w)
    }

    /// Canonical element for an arbitrary exponent vector read as an ordered word.
    pub fn element(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(coords.len(), self.rank());
        let mut x = vec![BigInt::zero(); self.rank()];
        for (k, a) in coords.iter().enumerate() {
            if !a.is_zero() {
                self.mul_syllable(&mut x, k, a);
            }
        }
        GroupElement::from_coords(x)
    }

    pub fn element_i64(&self, coords: &[i64]) -> GroupElement {
        let c: Vec<BigInt> = coords.iter().map(|&a| BigInt::from(a)).collect();
        self.element(&c)
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement::from_coords(self.mul_raw(&x.coords, &y.coords))
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        GroupElement::from_coords(self.inv_raw(&x.coords))
    }

    pub fn power(&self, x: &GroupElement, n: &BigInt) -> GroupElement {
        GroupElement::from_coords(self.pow_raw(&x.coords, n))
    }

    pub fn power_i64(&self, x: &GroupElement, n: i64) -> GroupElement {
        self.power(x, &BigInt::from(n))
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xy = self.mul_raw(&x.coords, &y.coords);
        let yx = self.mul_raw(&y.coords, &x.coords);
        GroupElement::from_coords(self.mul_raw(&self.inv_raw(&yx), &xy))
    }

    /// `g^{-1} x g`.
    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> GroupElement {
        let xg = self.mul_raw(&x.coords, &g.coords);
        GroupElement::from_coords(self.mul_raw(&self.inv_raw(&g.coords), &xg))
    }

    /// Product of a list of elements, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a GroupElement>>(&self, items: I) -> GroupElement {
        let mut acc = self.identity();
        for x in items {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    fn mul_raw(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut r = x.to_vec();
        for (j, e) in y.iter().enumerate() {
            if !e.is_zero() {
                self.mul_syllable(&mut r, j, e);
            }
        }
        r
    }

    fn inv_raw(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); self.rank()];
        for (j, e) in x.iter().enumerate().rev() {
            if !e.is_zero() {
                self.mul_syllable(&mut r, j, &-e);
            }
        }
        r
    }

    fn pow_raw(&self, x: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        let m = self.rank();
        if n.is_zero() {
            return vec![BigInt::zero(); m];
        }
        let mut support = x.iter().enumerate().filter(|(_, c)| !c.is_zero());
        match (support.next(), support.next()) {
            (None, _) => return vec![BigInt::zero(); m],
            (Some((i, a)), None) => {
                let mut r = vec![BigInt::zero(); m];
                self.mul_syllable(&mut r, i, &(a * n));
                return r;
            }
            _ => {}
        }
        let (mut base, mut k) = if n.is_negative() { (self.inv_raw(x), -n) } else { (x.to_vec(), n.clone()) };
        let mut acc = vec![BigInt::zero(); m];
        let two = BigInt::from(2);
        loop {
            if k.is_odd() {
                acc = self.mul_raw(&acc, &base);
            }
            k /= &two;
            if k.is_zero() {
                break;
            }
            base = self.mul_raw(&base, &base);
        }
        acc
    }

    /// `x ← x · u_i^e`.
    fn mul_syllable(&self, x: &mut [BigInt], i: usize, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        let m = self.rank();
        let tail_nonzero = x[i + 1..].iter().any(|c| !c.is_zero());
        let total = &x[i] + e;
        let (r, q) = match &self.periods[i] {
            Period::Finite(p) => {
                let (q, r) = total.div_mod_floor(p);
                (r, q)
            }
            Period::Infinite => (total, BigInt::zero()),
        };
        x[i] = r;
        if !tail_nonzero && q.is_zero() {
            return;
        }
        let mut s = vec![BigInt::zero(); m];
        if tail_nonzero {
            s[i + 1..].clone_from_slice(&x[i + 1..]);
            s = self.conj_power(i, e, &s);
        }
        if !q.is_zero() {
            let t = self.pow_raw(&self.power_values[i], &q);
            s = self.mul_raw(&t, &s);
        }
        x[i + 1..].clone_from_slice(&s[i + 1..]);
    }

    /// `φ_i^e(s)` for `s` supported above `i`.
    fn conj_power(&self, i: usize, e: &BigInt, s: &[BigInt]) -> Vec<BigInt> {
        let images = if e.is_negative() { &self.conj_inv[i] } else { &self.conj[i] };
        let steps = e.abs();
        if let Some(n) = steps.to_u64().filter(|&n| n <= REPEAT_LIMIT) {
            let mut v = s.to_vec();
            for _ in 0..n {
                v = self.apply_images(i, images, &v);
            }
            return v;
        }
        // binary powering of the automorphism, kept as generator images
        let m = self.rank();
        let mut base: Vec<Vec<BigInt>> = images.clone();
        let mut acc: Vec<Vec<BigInt>> = (i + 1..m).map(|j| GroupElement::generator(m, j).coords).collect();
        let mut k = steps;
        let two = BigInt::from(2);
        loop {
            if k.is_odd() {
                acc = acc.iter().map(|a| self.apply_images(i, &base, a)).collect();
            }
            k /= &two;
            if k.is_zero() {
                break;
            }
            base = base.iter().map(|b| self.apply_images(i, &base, b)).collect();
        }
        self.apply_images(i, &acc, s)
    }

    /// Evaluates `∏_j images[j-i-1]^{v_j}` for `v` supported above `i`.
    fn apply_images(&self, i: usize, images: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        let m = self.rank();
        let mut r = vec![BigInt::zero(); m];
        for j in i + 1..m {
            if v[j].is_zero() {
                continue;
            }
            let img = &images[j - i - 1];
            if r.iter().all(Zero::is_zero) {
                r = self.pow_raw(img, &v[j]);
            } else {
                let p = self.pow_raw(img, &v[j]);
                r = self.mul_raw(&r, &p);
            }
        }
        r
    }

    fn word_raw(&self, tail: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.rank()];
        for (k, a) in tail {
            self.mul_syllable(&mut x, *k, a);
        }
        x
    }

    fn build_caches(&mut self) {
        let m = self.rank();
        for i in (0..m).rev() {
            if self.periods[i].is_finite() {
                self.power_values[i] = self.word_raw(&self.powers[i]);
            }
            let mut conj = Vec::with_capacity(m - i - 1);
            let mut comm_vals = Vec::with_capacity(m - i - 1);
            for j in i + 1..m {
                let c = self.word_raw(self.comm_tail(j, i));
                let mut x = vec![BigInt::zero(); m];
                x[j] = BigInt::one();
                conj.push(self.mul_raw(&x, &c));
                comm_vals.push(c);
            }
            // u_i u_j u_i^{-1} = u_j d_j with φ_i(d_j) = C_{ji}^{-1}
            let mut conj_inv = vec![Vec::new(); m - i - 1];
            for j in (i + 1..m).rev() {
                let cinv = self.inv_raw(&comm_vals[j - i - 1]);
                let d = self.apply_images(i, &conj_inv, &cinv);
                let mut x = vec![BigInt::zero(); m];
                x[j] = BigInt::one();
                conj_inv[j - i - 1] = self.mul_raw(&x, &d);
            }
            self.conj[i] = conj;
            self.conj_inv[i] = conj_inv;
        }
    }

    /// Runs the standard overlap tests and reports every failure.
    pub fn consistency_check(&self) -> ConsistencyReport {
        let m = self.rank();
        let g = |i: usize| GroupElement::generator(m, i);
        let mut failures = Vec::new();
        let mut compare = |overlap: Overlap, left: GroupElement, right: GroupElement| {
            if left != right {
                let discrepancy = self.multiply(&self.inverse(&left), &right);
                failures.push(OverlapFailure { overlap, left, right, discrepancy });
            }
        };
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let left = self.multiply(&self.multiply(&g(k), &g(j)), &g(i));
                    let right = self.multiply(&g(k), &self.multiply(&g(j), &g(i)));
                    compare(Overlap::Triple { k, j, i }, left, right);
                }
            }
        }
        for j in 0..m {
            let Period::Finite(ej) = &self.periods[j] else { continue };
            let tj = self.power_value(j).unwrap();
            for i in 0..j {
                let left = self.multiply(&tj, &g(i));
                let pre = self.power(&g(j), &(ej - 1u32));
                let right = self.multiply(&pre, &self.multiply(&g(j), &g(i)));
                compare(Overlap::PowerLeft { j, i }, left, right);
            }
        }
        for i in 0..m {
            let Period::Finite(ei) = &self.periods[i] else { continue };
            let ti = self.power_value(i).unwrap();
            for j in i + 1..m {
                let left = self.multiply(&g(j), &ti);
                let post = self.power(&g(i), &(ei - 1u32));
                let right = self.multiply(&self.multiply(&g(j), &g(i)), &post);
                compare(Overlap::PowerRight { j, i }, left, right);
            }
            let left = self.multiply(&ti, &g(i));
            let right = self.multiply(&g(i), &ti);
            compare(Overlap::PowerSelf { i }, left, right);
        }
        for i in 0..m {
            for j in i + 1..m {
                if !self.periods[i].is_finite() {
                    let gi_inv = self.inverse(&g(i));
                    let right = self.multiply(&self.multiply(&g(j), &gi_inv), &g(i));
                    compare(Overlap::InverseRight { j, i }, g(j), right);
                }
                if !self.periods[j].is_finite() {
                    let gj_inv = self.inverse(&g(j));
                    let right = self.multiply(&gj_inv, &self.multiply(&g(j), &g(i)));
                    compare(Overlap::InverseLeft { j, i }, g(i), right);
                }
            }
        }
        ConsistencyReport { failures }
    }
}

/// Overlap shapes examined by [`Presentation::consistency_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// `(u_k u_j) u_i` against `u_k (u_j u_i)`.
    Triple { k: usize, j: usize, i: usize },
    /// `(u_j^{e_j}) u_i` against `u_j^{e_j-1} (u_j u_i)`.
    PowerLeft { j: usize, i: usize },
    /// `u_j (u_i^{e_i})` against `(u_j u_i) u_i^{e_i-1}`.
    PowerRight { j: usize, i: usize },
    /// `(u_i^{e_i}) u_i` against `u_i (u_i^{e_i})`.
    PowerSelf { i: usize },
    /// `u_j` against `(u_j u_i^{-1}) u_i` for infinite `e_i`.
    InverseRight { j: usize, i: usize },
    /// `u_i` against `u_j^{-1} (u_j u_i)` for infinite `e_j`.
    InverseLeft { j: usize, i: usize },
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Overlap::Triple { k, j, i } => write!(f, "(u{} u{}) u{}", k + 1, j + 1, i + 1),
            Overlap::PowerLeft { j, i } => write!(f, "u{}^e u{}", j + 1, i + 1),
            Overlap::PowerRight { j, i } => write!(f, "u{} u{}^e", j + 1, i + 1),
            Overlap::PowerSelf { i } => write!(f, "u{}^e u{}", i + 1, i + 1),
            Overlap::InverseRight { j, i } => write!(f, "u{} u{}^-1 u{}", j + 1, i + 1, i + 1),
            Overlap::InverseLeft { j, i } => write!(f, "u{}^-1 u{} u{}", j + 1, j + 1, i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapFailure {
    pub overlap: Overlap,
    pub left: GroupElement,
    pub right: GroupElement,
    /// `left^{-1} · right`, the relation the overlap forces.
    pub discrepancy: GroupElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub failures: Vec<OverlapFailure>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.failures.is_empty()
    }

    /// Converts a failing report into an error naming the first overlap.
    pub fn into_result(self) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::Inconsistent(format!(
                "overlap {} gives {} on one side and {} on the other (forces {} = 1)",
                f.overlap, f.left, f.right, f.discrepancy
            ))),
        }
    }
}

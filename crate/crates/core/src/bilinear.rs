//! Bilinearization of a central series and the rings of scalars acting on it.
//!
//! Endomorphisms of `⊕ ℤ/e_i` are integer matrices acting on column vectors:
//! column `j` holds the image of the `j`-th basis element.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::{hnf, lattice_coordinates, snf, solve_congruences, IntMatrix};
use crate::pc::{Period, Presentation};
use crate::section::AbelianSection;
use crate::series::{generators, is_central_chain, SeriesChain};
use crate::subgroup::{centralizer_mod, commutator_subgroup, join, Subgroup};
use crate::{Error, Result};

/// `⊕ ℤ/e_i` with `e_i ≥ 2` or `∞`.
#[derive(Clone, Debug, Eq)]
pub struct FgAbelian {
    periods: Vec<Period>,
    label: Option<String>,
}

impl PartialEq for FgAbelian {
    fn eq(&self, other: &Self) -> bool {
        self.periods == other.periods
    }
}

impl FgAbelian {
    pub fn new(periods: Vec<Period>) -> Result<Self> {
        for (i, p) in periods.iter().enumerate() {
            if let Period::Finite(e) = p {
                if *e <= BigInt::one() {
                    return Err(Error::PeriodOne { index: i });
                }
            }
        }
        Ok(FgAbelian { periods, label: None })
    }

    pub fn free(n: usize) -> Self {
        FgAbelian { periods: vec![Period::Infinite; n], label: None }
    }

    pub fn cyclic(e: i64) -> Self {
        FgAbelian::new(vec![Period::finite(e)]).expect("modulus at least 2")
    }

    pub fn from_section(s: &AbelianSection) -> Self {
        FgAbelian { periods: s.periods().to_vec(), label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    /// Periods as moduli, `0` for `∞`.
    pub fn codes(&self) -> Vec<BigInt> {
        self.periods.iter().map(Period::code).collect()
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter().zip(&self.periods).map(|(x, p)| p.reduce(x)).collect()
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn direct_sum(parts: &[FgAbelian]) -> FgAbelian {
        FgAbelian { periods: parts.iter().flat_map(|p| p.periods.iter().cloned()).collect(), label: None }
    }
}

/// A bilinear map `A × B → C` given on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    a: FgAbelian,
    b: FgAbelian,
    c: FgAbelian,
    table: Vec<Vec<Vec<BigInt>>>,
}

fn gcd_period(x: &Period, y: &Period) -> Period {
    match (x, y) {
        (Period::Finite(a), Period::Finite(b)) => Period::Finite(a.gcd(b)),
        (Period::Finite(a), _) | (_, Period::Finite(a)) => Period::Finite(a.clone()),
        _ => Period::Infinite,
    }
}

impl BilinearMap {
    /// `table[i][j]` is `f(a_i, b_j)` in coordinates of `C`.
    pub fn new(a: FgAbelian, b: FgAbelian, c: FgAbelian, table: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        if table.len() != a.dim() {
            return Err(Error::LengthMismatch { expected: a.dim(), found: table.len() });
        }
        let mut reduced = Vec::with_capacity(a.dim());
        for (i, row) in table.iter().enumerate() {
            if row.len() != b.dim() {
                return Err(Error::LengthMismatch { expected: b.dim(), found: row.len() });
            }
            let mut r = Vec::with_capacity(b.dim());
            for (j, v) in row.iter().enumerate() {
                if v.len() != c.dim() {
                    return Err(Error::LengthMismatch { expected: c.dim(), found: v.len() });
                }
                if let Period::Finite(g) = gcd_period(&a.periods[i], &b.periods[j]) {
                    let scaled: Vec<BigInt> = v.iter().map(|x| x * &g).collect();
                    if !c.is_zero(&scaled) {
                        return Err(Error::InvalidParams(format!(
                            "f(a{}, b{}) has order not dividing {}",
                            i + 1,
                            j + 1,
                            g
                        )));
                    }
                }
                r.push(c.reduce(v));
            }
            reduced.push(r);
        }
        Ok(BilinearMap { a, b, c, table: reduced })
    }

    pub fn from_i64(a: FgAbelian, b: FgAbelian, c: FgAbelian, table: &[&[&[i64]]]) -> Result<Self> {
        let t = table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .collect();
        BilinearMap::new(a, b, c, t)
    }

    pub fn left(&self) -> &FgAbelian {
        &self.a
    }

    pub fn right(&self) -> &FgAbelian {
        &self.b
    }

    pub fn value_group(&self) -> &FgAbelian {
        &self.c
    }

    pub fn space(&self, slot: Slot) -> &FgAbelian {
        match slot {
            Slot::Left => &self.a,
            Slot::Right => &self.b,
            Slot::Value => &self.c,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> &[BigInt] {
        &self.table[i][j]
    }

    pub fn eval(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.c.dim()];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s.is_zero() {
                    continue;
                }
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o += &s * t;
                }
            }
        }
        self.c.reduce(&out)
    }

    /// Lattice of `x` with `f(x, B) = 0`; compare against the zero lattice of `A`.
    fn radical(&self, left: bool) -> IntMatrix {
        let (n, m) = if left { (self.a.dim(), self.b.dim()) } else { (self.b.dim(), self.a.dim()) };
        let codes = self.c.codes();
        let mut rows = Vec::new();
        let mut moduli = Vec::new();
        for other in 0..m {
            for k in 0..self.c.dim() {
                let row = (0..n)
                    .map(|v| if left { self.table[v][other][k].clone() } else { self.table[other][v][k].clone() })
                    .collect();
                rows.push(row);
                moduli.push(codes[k].clone());
            }
        }
        let zeros = vec![BigInt::zero(); rows.len()];
        solve_congruences(&IntMatrix::from_rows(n, rows), &zeros, &moduli).lattice
    }

    pub fn is_left_nondegenerate(&self) -> bool {
        let r = self.radical(true);
        (0..r.rows()).all(|k| self.a.is_zero(r.row(k)))
    }

    pub fn is_right_nondegenerate(&self) -> bool {
        let r = self.radical(false);
        (0..r.rows()).all(|k| self.b.is_zero(r.row(k)))
    }

    /// Whether the values generate `C`.
    pub fn is_full(&self) -> bool {
        let n = self.c.dim();
        let mut rows: Vec<Vec<BigInt>> = self.table.iter().flatten().cloned().collect();
        for (k, e) in self.c.codes().into_iter().enumerate() {
            if !e.is_zero() {
                let mut r = vec![BigInt::zero(); n];
                r[k] = e;
                rows.push(r);
            }
        }
        let h = hnf(&IntMatrix::from_rows(n, rows));
        h.rank() == n && (0..n).all(|i| h.h[(i, i)].is_one())
    }
}

impl fmt::Display for BilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.a.dim() {
            for j in 0..self.b.dim() {
                let v = &self.table[i][j];
                if v.iter().any(|x| !x.is_zero()) {
                    let parts: Vec<String> = v.iter().map(|x| format!("{}", x)).collect();
                    writeln!(f, "f(a{}, b{}) = ({})", i + 1, j + 1, parts.join(", "))?;
                }
            }
        }
        Ok(())
    }
}

/// Which of the three spaces an endomorphism acts on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Left,
    Right,
    Value,
}

/// `(Φ₁, Φ₂, Φ₀)` acting on `A`, `B`, `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub phi1: IntMatrix,
    pub phi2: IntMatrix,
    pub phi0: IntMatrix,
}

impl Triple {
    pub fn get(&self, slot: Slot) -> &IntMatrix {
        match slot {
            Slot::Left => &self.phi1,
            Slot::Right => &self.phi2,
            Slot::Value => &self.phi0,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Triple) -> Triple {
        Triple {
            phi1: self.phi1.mul(&other.phi1),
            phi2: self.phi2.mul(&other.phi2),
            phi0: self.phi0.mul(&other.phi0),
        }
    }

    /// Checks `f(Φ₁x, y) = f(x, Φ₂y) = Φ₀f(x, y)` on all basis pairs.
    pub fn satisfies(&self, f: &BilinearMap) -> bool {
        let (na, nb) = (f.a.dim(), f.b.dim());
        for i in 0..na {
            let x = self.phi1.column(i);
            let mut ei = vec![BigInt::zero(); na];
            ei[i] = BigInt::one();
            for j in 0..nb {
                let y = self.phi2.column(j);
                let mut ej = vec![BigInt::zero(); nb];
                ej[j] = BigInt::one();
                let lhs = f.eval(&x, &ej);
                let mid = f.eval(&ei, &y);
                let rhs = f.c.reduce(&self.phi0.mul_vec(f.value(i, j)));
                if lhs != mid || mid != rhs {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug)]
struct Layout {
    na: usize,
    nb: usize,
    nc: usize,
}

impl Layout {
    fn of(f: &BilinearMap) -> Self {
        Layout { na: f.a.dim(), nb: f.b.dim(), nc: f.c.dim() }
    }

    fn dim(&self, s: Slot) -> usize {
        match s {
            Slot::Left => self.na,
            Slot::Right => self.nb,
            Slot::Value => self.nc,
        }
    }

    fn offset(&self, s: Slot) -> usize {
        match s {
            Slot::Left => 0,
            Slot::Right => self.na * self.na,
            Slot::Value => self.na * self.na + self.nb * self.nb,
        }
    }

    fn var(&self, s: Slot, i: usize, j: usize) -> usize {
        self.offset(s) + i * self.dim(s) + j
    }

    fn total(&self) -> usize {
        self.na * self.na + self.nb * self.nb + self.nc * self.nc
    }

    fn to_triple(&self, v: &[BigInt]) -> Triple {
        let mat = |s: Slot| {
            let n = self.dim(s);
            let o = self.offset(s);
            IntMatrix::from_rows(n, (0..n).map(|i| v[o + i * n..o + (i + 1) * n].to_vec()).collect())
        };
        Triple { phi1: mat(Slot::Left), phi2: mat(Slot::Right), phi0: mat(Slot::Value) }
    }

    fn to_vec(&self, t: &Triple) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.total());
        for m in [&t.phi1, &t.phi2, &t.phi0] {
            v.extend(m.entries().iter().cloned());
        }
        v
    }
}

/// A linear condition on triples, used to cut out subrings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingConstraint {
    /// `Φ_target ∘ ε = ε ∘ Φ_source` on the listed basis elements of the
    /// source; `map` is `ε` as a `target.dim × source.dim` matrix.
    Equivariant { source: Slot, target: Slot, map: IntMatrix, columns: Vec<usize> },
    /// `Φ_slot` maps the submodule generated by `generators` into itself.
    Invariant { slot: Slot, generators: Vec<Vec<BigInt>> },
}

/// The ring of triples satisfying the defining congruences, modulo zero endomorphisms.
#[derive(Clone, Debug)]
pub struct ScalarRing {
    form: BilinearMap,
    rows: Vec<Vec<BigInt>>,
    moduli: Vec<BigInt>,
    lattice: IntMatrix,
    to_basis: IntMatrix,
    basis: Vec<Triple>,
    periods: Vec<Period>,
    mult: Vec<Vec<Vec<BigInt>>>,
    unit: Vec<BigInt>,
}

fn well_definedness(layout: &Layout, f: &BilinearMap, rows: &mut Vec<Vec<BigInt>>, moduli: &mut Vec<BigInt>) {
    for slot in [Slot::Left, Slot::Right, Slot::Value] {
        let codes = f.space(slot).codes();
        for i in 0..codes.len() {
            for j in 0..codes.len() {
                if codes[j].is_zero() {
                    continue;
                }
                if !codes[i].is_zero() && codes[j].is_multiple_of(&codes[i]) {
                    continue;
                }
                let mut r = vec![BigInt::zero(); layout.total()];
                r[layout.var(slot, i, j)] = codes[j].clone();
                rows.push(r);
                moduli.push(codes[i].clone());
            }
        }
    }
}

fn compatibility_rows(layout: &Layout, f: &BilinearMap, rows: &mut Vec<Vec<BigInt>>, moduli: &mut Vec<BigInt>) {
    let codes = f.c.codes();
    for i in 0..layout.na {
        for j in 0..layout.nb {
            for k in 0..layout.nc {
                let mut value = vec![BigInt::zero(); layout.total()];
                for l in 0..layout.nc {
                    value[layout.var(Slot::Value, k, l)] -= &f.table[i][j][l];
                }
                let mut left = value.clone();
                for l in 0..layout.na {
                    left[layout.var(Slot::Left, l, i)] += &f.table[l][j][k];
                }
                let mut right = value;
                for l in 0..layout.nb {
                    right[layout.var(Slot::Right, l, j)] += &f.table[i][l][k];
                }
                for r in [left, right] {
                    if r.iter().any(|x| !x.is_zero()) {
                        rows.push(r);
                        moduli.push(codes[k].clone());
                    }
                }
            }
        }
    }
}

fn constraint_rows(
    layout: &Layout,
    f: &BilinearMap,
    c: &RingConstraint,
    rows: &mut Vec<Vec<BigInt>>,
    moduli: &mut Vec<BigInt>,
) -> Result<()> {
    match c {
        RingConstraint::Equivariant { source, target, map, columns } => {
            let (ns, nt) = (layout.dim(*source), layout.dim(*target));
            if map.rows() != nt || map.cols() != ns {
                return Err(Error::UnknownBlock(map.rows()));
            }
            let codes = f.space(*target).codes();
            for &j in columns {
                if j >= ns {
                    return Err(Error::UnknownBlock(j));
                }
                for k in 0..nt {
                    let mut r = vec![BigInt::zero(); layout.total()];
                    for l in 0..nt {
                        r[layout.var(*target, k, l)] += &map[(l, j)];
                    }
                    for l in 0..ns {
                        r[layout.var(*source, l, j)] -= &map[(k, l)];
                    }
                    if r.iter().any(|x| !x.is_zero()) {
                        rows.push(r);
                        moduli.push(codes[k].clone());
                    }
                }
            }
        }
        RingConstraint::Invariant { slot, generators } => {
            let n = layout.dim(*slot);
            if let Some(bad) = generators.iter().position(|g| g.len() != n) {
                return Err(Error::UnknownBlock(bad));
            }
            let mut sub: Vec<Vec<BigInt>> = generators.clone();
            for (k, e) in f.space(*slot).codes().into_iter().enumerate() {
                if !e.is_zero() {
                    let mut r = vec![BigInt::zero(); n];
                    r[k] = e;
                    sub.push(r);
                }
            }
            let s = snf(&IntMatrix::from_rows(n, sub));
            let diag = s.diagonal();
            for g in generators {
                for i in 0..n {
                    let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
                    if d.is_one() {
                        continue;
                    }
                    // (Φ g)·V, column i
                    let mut r = vec![BigInt::zero(); layout.total()];
                    for k in 0..n {
                        if s.v[(k, i)].is_zero() {
                            continue;
                        }
                        for l in 0..n {
                            r[layout.var(*slot, k, l)] += &s.v[(k, i)] * &g[l];
                        }
                    }
                    if r.iter().any(|x| !x.is_zero()) {
                        rows.push(r);
                        moduli.push(d);
                    }
                }
            }
        }
    }
    Ok(())
}

impl ScalarRing {
    fn solve(form: BilinearMap, rows: Vec<Vec<BigInt>>, moduli: Vec<BigInt>) -> Result<ScalarRing> {
        let layout = Layout::of(&form);
        let n = layout.total();
        let zeros = vec![BigInt::zero(); rows.len()];
        let sol = solve_congruences(&IntMatrix::from_rows(n, rows.clone()), &zeros, &moduli);
        let lattice = sol.lattice;
        let r = lattice.rows();
        let mut zero_rows = Vec::new();
        for slot in [Slot::Left, Slot::Right, Slot::Value] {
            for (i, e) in form.space(slot).codes().into_iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for j in 0..layout.dim(slot) {
                    let mut z = vec![BigInt::zero(); n];
                    z[layout.var(slot, i, j)] = e.clone();
                    let c = lattice_coordinates(&lattice, &z)
                        .ok_or_else(|| Error::Inconsistent("zero endomorphism outside the solution lattice".into()))?;
                    zero_rows.push(c);
                }
            }
        }
        let (v, v_inv, diag) = if zero_rows.is_empty() {
            (IntMatrix::identity(r), IntMatrix::identity(r), Vec::new())
        } else {
            let s = snf(&IntMatrix::from_rows(r, zero_rows));
            let d = s.diagonal();
            (s.v, s.v_inv, d)
        };
        let mut kept = Vec::new();
        let mut periods = Vec::new();
        for t in 0..r {
            let d = diag.get(t).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept.push(t);
                periods.push(Period::from_code(&d));
            }
        }
        let mut to_basis = IntMatrix::zeros(r, kept.len());
        for (k, &t) in kept.iter().enumerate() {
            for i in 0..r {
                to_basis[(i, k)] = v[(i, t)].clone();
            }
        }
        let basis: Vec<Triple> = kept.iter().map(|&t| layout.to_triple(&lattice.vec_mul(v_inv.row(t)))).collect();
        let mut ring = ScalarRing {
            form,
            rows,
            moduli,
            lattice,
            to_basis,
            basis,
            periods,
            mult: Vec::new(),
            unit: Vec::new(),
        };
        let id = Triple {
            phi1: IntMatrix::identity(layout.na),
            phi2: IntMatrix::identity(layout.nb),
            phi0: IntMatrix::identity(layout.nc),
        };
        ring.unit = ring.coords(&id).ok_or_else(|| Error::Inconsistent("identity is not a solution".into()))?;
        let k = ring.basis.len();
        let mut mult = vec![vec![Vec::new(); k]; k];
        for s in 0..k {
            for t in 0..k {
                let prod = ring.basis[s].compose(&ring.basis[t]);
                mult[s][t] = ring
                    .coords(&prod)
                    .ok_or_else(|| Error::Inconsistent("solution set not closed under composition".into()))?;
            }
        }
        ring.mult = mult;
        Ok(ring)
    }

    pub fn form(&self) -> &BilinearMap {
        &self.form
    }

    /// Additive generators, one triple per period.
    pub fn basis(&self) -> &[Triple] {
        &self.basis
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn free_rank(&self) -> usize {
        self.periods.iter().filter(|p| !p.is_finite()).count()
    }

    pub fn is_finite(&self) -> bool {
        self.periods.iter().all(Period::is_finite)
    }

    pub fn order(&self) -> Period {
        self.periods.iter().fold(Period::Finite(BigInt::one()), |a, b| a.mul(b))
    }

    /// `mult[s][t]` holds the coordinates of `basis[s] ∘ basis[t]`.
    pub fn structure_constants(&self) -> &[Vec<Vec<BigInt>>] {
        &self.mult
    }

    pub fn unit(&self) -> &[BigInt] {
        &self.unit
    }

    pub fn reduce(&self, c: &[BigInt]) -> Vec<BigInt> {
        c.iter().zip(&self.periods).map(|(x, p)| p.reduce(x)).collect()
    }

    /// Coordinates of a triple, if it satisfies the defining congruences.
    pub fn coords(&self, t: &Triple) -> Option<Vec<BigInt>> {
        let layout = Layout::of(&self.form);
        if t.phi1.rows() != layout.na || t.phi2.rows() != layout.nb || t.phi0.rows() != layout.nc {
            return None;
        }
        let v = layout.to_vec(t);
        let x = lattice_coordinates(&self.lattice, &v)?;
        Some(self.reduce(&self.to_basis.vec_mul(&x)))
    }

    pub fn element(&self, c: &[BigInt]) -> Triple {
        let layout = Layout::of(&self.form);
        let mut v = vec![BigInt::zero(); layout.total()];
        for (b, k) in self.basis.iter().zip(c) {
            if k.is_zero() {
                continue;
            }
            for (o, x) in v.iter_mut().zip(layout.to_vec(b)) {
                *o += k * x;
            }
        }
        layout.to_triple(&v)
    }

    pub fn multiply(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let k = self.dim();
        let mut out = vec![BigInt::zero(); k];
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                let c = xs * yt;
                for (o, m) in out.iter_mut().zip(&self.mult[s][t]) {
                    *o += &c * m;
                }
            }
        }
        self.reduce(&out)
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    /// Every basis triple satisfies the defining identities, checked directly on `f`.
    pub fn verify(&self) -> bool {
        self.basis.iter().all(|t| t.satisfies(&self.form))
    }

    pub fn is_associative(&self) -> bool {
        let k = self.dim();
        let e = |i: usize| {
            let mut v = vec![BigInt::zero(); k];
            v[i] = BigInt::one();
            v
        };
        (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    let ab = self.multiply(&e(a), &e(b));
                    let bc = self.multiply(&e(b), &e(c));
                    self.multiply(&ab, &e(c)) == self.multiply(&e(a), &bc)
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.dim();
        (0..k).all(|s| (0..k).all(|t| self.mult[s][t] == self.mult[t][s]))
    }

    pub fn is_unital(&self) -> bool {
        let k = self.dim();
        (0..k).all(|s| {
            let mut e = vec![BigInt::zero(); k];
            e[s] = BigInt::one();
            let e = self.reduce(&e);
            self.multiply(&self.unit, &e) == e && self.multiply(&e, &self.unit) == e
        })
    }

    /// Block of `Φ_slot` on the coordinates `range`, for the element with coordinates `c`.
    pub fn action_block(&self, c: &[BigInt], slot: Slot, range: core::ops::Range<usize>) -> IntMatrix {
        let t = self.element(c);
        let m = t.get(slot);
        let space = self.form.space(slot);
        let n = range.len();
        let mut out = IntMatrix::zeros(n, n);
        for (a, i) in range.clone().enumerate() {
            for (b, j) in range.clone().enumerate() {
                out[(a, b)] = space.periods()[i].reduce(&m[(i, j)]);
            }
        }
        out
    }
}

/// The largest ring of scalars of `f`.
pub fn scalar_ring(f: &BilinearMap) -> Result<ScalarRing> {
    let layout = Layout::of(f);
    let mut rows = Vec::new();
    let mut moduli = Vec::new();
    well_definedness(&layout, f, &mut rows, &mut moduli);
    compatibility_rows(&layout, f, &mut rows, &mut moduli);
    ScalarRing::solve(f.clone(), rows, moduli)
}

/// The subring of `ring` cut out by additional linear conditions.
pub fn restrict_ring(ring: &ScalarRing, constraints: &[RingConstraint]) -> Result<ScalarRing> {
    let layout = Layout::of(&ring.form);
    let mut rows = ring.rows.clone();
    let mut moduli = ring.moduli.clone();
    for c in constraints {
        constraint_rows(&layout, &ring.form, c, &mut rows, &mut moduli)?;
    }
    ScalarRing::solve(ring.form.clone(), rows, moduli)
}

/// Upper and lower series associated with a central series, and the bundle between them.
#[derive(Clone, Debug)]
pub struct AssociatedData {
    pub pres: Presentation,
    pub series: SeriesChain,
    /// `[R_i, G]` for `i = 1..c`.
    pub commutators: Vec<Subgroup>,
    /// `R^u_1 … R^u_c`.
    pub upper: Vec<Subgroup>,
    /// `R^l_1 … R^l_{c+1}`.
    pub lower: Vec<Subgroup>,
    /// `V_1 … V_{c-1}`.
    pub kernels: Vec<Subgroup>,
    pub v_r: Subgroup,
    pub derived: Subgroup,
    pub center: Subgroup,
    /// `G/V_R`.
    pub left: AbelianSection,
    /// `R^u_i/R^u_{i+1}` for `i = 1..c-1`.
    pub upper_gaps: Vec<AbelianSection>,
    /// `R^l_{i+1}/R^l_{i+2}` for `i = 1..c-1`.
    pub lower_gaps: Vec<AbelianSection>,
    /// `f_i : G/G′ × R^u_i/R^u_{i+1} → R^l_{i+1}/R^l_{i+2}`.
    pub bundle: Vec<BilinearMap>,
    /// `Z(G)/(Z(G) ∩ G′)`.
    pub special_gap: AbelianSection,
}

impl AssociatedData {
    pub fn class_bound(&self) -> usize {
        self.upper.len()
    }

    pub fn upper_offset(&self, block: usize) -> usize {
        self.upper_gaps[..block].iter().map(AbelianSection::dim).sum()
    }

    pub fn lower_offset(&self, block: usize) -> usize {
        self.lower_gaps[..block].iter().map(AbelianSection::dim).sum()
    }
}

fn commutator_table(p: &Presentation, left: &AbelianSection, right: &AbelianSection, value: &AbelianSection) -> Vec<Vec<Vec<BigInt>>> {
    left.basis()
        .iter()
        .map(|x| {
            right
                .basis()
                .iter()
                .map(|y| value.coords(p, &p.commutator(x, y)).expect("commutator lies in the value section"))
                .collect()
        })
        .collect()
}

pub fn associated_series(p: &Presentation, r: &SeriesChain) -> Result<AssociatedData> {
    let w = Subgroup::whole(p);
    let mut terms = r.terms.clone();
    if terms.len() == 1 && terms[0].is_trivial() {
        terms.push(Subgroup::trivial(p.rank()));
    }
    if !is_central_chain(p, &terms) {
        return Err(Error::NotCentral);
    }
    let c = terms.len() - 1;
    let gens = generators(p);
    let commutators: Vec<Subgroup> = terms[..c].iter().map(|t| commutator_subgroup(p, t, &w)).collect();
    let upper: Vec<Subgroup> = commutators.iter().map(|l| centralizer_mod(p, &w, &gens, l)).collect();
    let mut lower = vec![w.clone()];
    lower.extend(commutators.iter().cloned());
    for i in 0..c.saturating_sub(1) {
        if commutator_subgroup(p, &upper[i], &w) != lower[i + 1] {
            return Err(Error::Inconsistent(format!("[R^u_{}, G] differs from [R_{}, G]", i + 1, i + 1)));
        }
    }
    let mut kernels = Vec::new();
    let mut v_r = w.clone();
    for i in 0..c.saturating_sub(1) {
        kernels.push(centralizer_mod(p, &w, upper[i].rows(), &lower[i + 2]));
        v_r = centralizer_mod(p, &v_r, upper[i].rows(), &lower[i + 2]);
    }
    let derived = lower.get(1).cloned().unwrap_or_else(|| Subgroup::trivial(p.rank()));
    let center = upper[c - 1].clone();
    if !join(p, &derived, &center).is_subgroup_of(p, &v_r) {
        return Err(Error::Inconsistent("V_R does not contain G'Z(G)".into()));
    }
    let left = AbelianSection::new(p, &w, &v_r)?;
    let ab = AbelianSection::new(p, &w, &derived)?;
    let mut upper_gaps = Vec::new();
    let mut lower_gaps = Vec::new();
    let mut bundle = Vec::new();
    for i in 0..c.saturating_sub(1) {
        let ug = AbelianSection::new(p, &upper[i], &upper[i + 1])?;
        let lg = AbelianSection::new(p, &lower[i + 1], &lower[i + 2])?;
        let table = commutator_table(p, &ab, &ug, &lg);
        bundle.push(BilinearMap::new(
            FgAbelian::from_section(&ab).with_label("G/G'"),
            FgAbelian::from_section(&ug).with_label(format!("R^u_{}/R^u_{}", i + 1, i + 2)),
            FgAbelian::from_section(&lg).with_label(format!("R^l_{}/R^l_{}", i + 2, i + 3)),
            table,
        )?);
        upper_gaps.push(ug);
        lower_gaps.push(lg);
    }
    let z_cap = centralizer_mod(p, &derived, &gens, &Subgroup::trivial(p.rank()));
    let special_gap = AbelianSection::new(p, &center, &z_cap)?;
    Ok(AssociatedData {
        pres: p.clone(),
        series: SeriesChain { terms, central: true },
        commutators,
        upper,
        lower,
        kernels,
        v_r,
        derived,
        center,
        left,
        upper_gaps,
        lower_gaps,
        bundle,
        special_gap,
    })
}

/// `F_R : G/V_R × ⊕ R^u_i/R^u_{i+1} → ⊕ R^l_{i+1}/R^l_{i+2}`.
pub fn assemble_fr(data: &AssociatedData) -> Result<BilinearMap> {
    let p = &data.pres;
    let a = FgAbelian::from_section(&data.left).with_label("G/V_R");
    let b_parts: Vec<FgAbelian> = data.upper_gaps.iter().map(FgAbelian::from_section).collect();
    let c_parts: Vec<FgAbelian> = data.lower_gaps.iter().map(FgAbelian::from_section).collect();
    let b = FgAbelian::direct_sum(&b_parts).with_label("R^u");
    let c = FgAbelian::direct_sum(&c_parts).with_label("R^l");
    let mut table = vec![vec![vec![BigInt::zero(); c.dim()]; b.dim()]; a.dim()];
    for (blk, (ug, lg)) in data.upper_gaps.iter().zip(&data.lower_gaps).enumerate() {
        let (bo, co) = (data.upper_offset(blk), data.lower_offset(blk));
        let t = commutator_table(p, &data.left, ug, lg);
        for (x, row) in t.into_iter().enumerate() {
            for (y, v) in row.into_iter().enumerate() {
                for (k, val) in v.into_iter().enumerate() {
                    table[x][bo + y][co + k] = val;
                }
            }
        }
    }
    let f = BilinearMap::new(a, b, c, table)?;
    if !f.is_left_nondegenerate() {
        return Err(Error::Degenerate("F_R has a left radical".into()));
    }
    if !f.is_right_nondegenerate() {
        return Err(Error::Degenerate("F_R has a right radical".into()));
    }
    if !f.is_full() {
        return Err(Error::Degenerate("F_R is not full".into()));
    }
    Ok(f)
}

fn placed(len: usize, offset: usize, v: Vec<BigInt>) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (k, x) in v.into_iter().enumerate() {
        out[offset + k] = x;
    }
    out
}

/// Conditions making the canonical maps `R^l_i/R^l_{i+1} → R^u_i/R^u_{i+1}` linear.
pub fn linearity_constraints(data: &AssociatedData) -> Vec<RingConstraint> {
    let p = &data.pres;
    let nb: usize = data.upper_gaps.iter().map(AbelianSection::dim).sum();
    let nc: usize = data.lower_gaps.iter().map(AbelianSection::dim).sum();
    let mut out = Vec::new();
    // ε_i for i = 2..c-1: lower gap i-2 → upper gap i-1 (0-based blocks)
    for i in 2..data.class_bound() {
        let (src, dst) = (&data.lower_gaps[i - 2], &data.upper_gaps[i - 1]);
        let (co, bo) = (data.lower_offset(i - 2), data.upper_offset(i - 1));
        let mut map = IntMatrix::zeros(nb, nc);
        for (s, x) in src.basis().iter().enumerate() {
            for (k, v) in dst.coords(p, x).expect("R^l_i lies in R^u_i").into_iter().enumerate() {
                map[(bo + k, co + s)] = v;
            }
        }
        out.push(RingConstraint::Equivariant {
            source: Slot::Value,
            target: Slot::Right,
            map,
            columns: (co..co + src.dim()).collect(),
        });
    }
    out
}

/// `R^l_i ∩ Z(G)` for `i = 1..c+1`.
fn lower_center(data: &AssociatedData) -> Vec<Subgroup> {
    let p = &data.pres;
    let gens = generators(p);
    data.lower.iter().map(|l| centralizer_mod(p, l, &gens, &Subgroup::trivial(p.rank()))).collect()
}

/// `V_R ∩ R^u_i` for `i = 1..c`, then `1`.
fn v_upper(data: &AssociatedData) -> Vec<Subgroup> {
    let p = &data.pres;
    let gens = generators(p);
    let mut out: Vec<Subgroup> = data.commutators.iter().map(|l| centralizer_mod(p, &data.v_r, &gens, l)).collect();
    out.push(Subgroup::trivial(p.rank()));
    out
}

/// Invariance of `ε_i(T_i)` with `T_i = (R^l_i ∩ Z)/(R^l_{i+1} ∩ Z)`, `i = 2..c`.
pub fn ae_constraints(data: &AssociatedData) -> Vec<RingConstraint> {
    let p = &data.pres;
    let nc: usize = data.lower_gaps.iter().map(AbelianSection::dim).sum();
    let lz = lower_center(data);
    let mut out = Vec::new();
    for i in 2..=data.class_bound() {
        let gap = &data.lower_gaps[i - 2];
        let co = data.lower_offset(i - 2);
        let generators = lz[i - 1]
            .rows()
            .iter()
            .map(|x| placed(nc, co, gap.coords(p, x).expect("R^l_i ∩ Z lies in R^l_i")))
            .collect();
        out.push(RingConstraint::Invariant { slot: Slot::Value, generators });
    }
    out
}

/// Invariance of `δ_i(X_i)` with `X_i` the image of `V_R ∩ R^u_i`, `i = 1..c-1`.
pub fn ad_constraints(data: &AssociatedData) -> Vec<RingConstraint> {
    let p = &data.pres;
    let nb: usize = data.upper_gaps.iter().map(AbelianSection::dim).sum();
    let vu = v_upper(data);
    let mut out = Vec::new();
    for i in 1..data.class_bound() {
        let gap = &data.upper_gaps[i - 1];
        let bo = data.upper_offset(i - 1);
        let generators = vu[i - 1]
            .rows()
            .iter()
            .map(|x| placed(nb, bo, gap.coords(p, x).expect("V_R ∩ R^u_i lies in R^u_i")))
            .collect();
        out.push(RingConstraint::Invariant { slot: Slot::Right, generators });
    }
    out
}

/// `P_R ≥ PL_R ≥ AE_R, AD_R ≥ A_R`.
#[derive(Clone, Debug)]
pub struct SeriesRings {
    pub p_r: ScalarRing,
    pub pl_r: ScalarRing,
    pub ae_r: ScalarRing,
    pub ad_r: ScalarRing,
    pub a_r: ScalarRing,
}

pub fn series_rings(data: &AssociatedData) -> Result<SeriesRings> {
    let f = assemble_fr(data)?;
    let p_r = scalar_ring(&f)?;
    let pl_r = restrict_ring(&p_r, &linearity_constraints(data))?;
    let ae = ae_constraints(data);
    let ad = ad_constraints(data);
    let ae_r = restrict_ring(&pl_r, &ae)?;
    let ad_r = restrict_ring(&pl_r, &ad)?;
    let both: Vec<RingConstraint> = ae.into_iter().chain(ad).collect();
    let a_r = restrict_ring(&pl_r, &both)?;
    Ok(SeriesRings { p_r, pl_r, ae_r, ad_r, a_r })
}

/// Matrices of the ring basis on one gap of a refined series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapAction {
    pub gap: String,
    pub periods: Vec<Period>,
    pub matrices: Vec<IntMatrix>,
}

#[derive(Clone, Debug)]
pub struct RefinedSeries {
    pub upper: SeriesChain,
    pub lower: SeriesChain,
    pub ring: ScalarRing,
    pub actions: Vec<GapAction>,
    /// `Z(G)/(Z(G) ∩ G′)`, where the ring does not act.
    pub special_gap: AbelianSection,
}

/// Action on a subsection `T` embedded in a block of a slot, `embed[s]` the
/// block coordinates of the `s`-th basis element of `T`.
fn induced_action(
    ring: &ScalarRing,
    slot: Slot,
    offset: usize,
    block_periods: &[Period],
    embed: &[Vec<BigInt>],
    sub_periods: &[Period],
) -> Result<Vec<IntMatrix>> {
    let n = block_periods.len();
    let t = embed.len();
    let codes: Vec<BigInt> = block_periods.iter().map(Period::code).collect();
    let mut emat = IntMatrix::zeros(n, t);
    for (s, e) in embed.iter().enumerate() {
        for k in 0..n {
            emat[(k, s)] = e[k].clone();
        }
    }
    let mut out = Vec::with_capacity(ring.dim());
    for g in 0..ring.dim() {
        let mut c = vec![BigInt::zero(); ring.dim()];
        c[g] = BigInt::one();
        let blk = ring.action_block(&c, slot, offset..offset + n);
        let mut m = IntMatrix::zeros(t, t);
        for (s, e) in embed.iter().enumerate() {
            let img = blk.mul_vec(e);
            let sol = solve_congruences(&emat, &img, &codes);
            if !sol.consistent {
                return Err(Error::Inconsistent("subsection is not invariant".into()));
            }
            for k in 0..t {
                m[(k, s)] = sub_periods[k].reduce(&sol.particular[k]);
            }
        }
        out.push(m);
    }
    Ok(out)
}

pub fn refined_series(p: &Presentation, r: &SeriesChain) -> Result<RefinedSeries> {
    let data = associated_series(p, r)?;
    let rings = series_rings(&data)?;
    let ring = rings.a_r;
    let c = data.class_bound();
    let lz = lower_center(&data);
    let vu = v_upper(&data);

    let mut up: Vec<Subgroup> = data.upper.clone();
    up.extend(lz[1..].iter().cloned());
    let upper = SeriesChain::new(p, up).dedup();
    let mut low = vec![Subgroup::whole(p)];
    low.extend(vu[..c].iter().map(|v| join(p, v, &data.derived)));
    low.extend(data.lower[1..].iter().cloned());
    let lower = SeriesChain::new(p, low).dedup();

    let mut actions = Vec::new();
    let unit_blocks = |slot: Slot, offset: usize, periods: &[Period], label: String| -> GapAction {
        let matrices = (0..ring.dim())
            .map(|g| {
                let mut e = vec![BigInt::zero(); ring.dim()];
                e[g] = BigInt::one();
                ring.action_block(&e, slot, offset..offset + periods.len())
            })
            .collect();
        GapAction { gap: label, periods: periods.to_vec(), matrices }
    };
    actions.push(unit_blocks(Slot::Left, 0, data.left.periods(), "G/V_R".into()));
    for i in 1..c {
        let ug = &data.upper_gaps[i - 1];
        actions.push(unit_blocks(Slot::Right, data.upper_offset(i - 1), ug.periods(), format!("R^u_{}/R^u_{}", i, i + 1)));
        let x = AbelianSection::new(p, &vu[i - 1], &vu[i])?;
        if !x.is_trivial() {
            let embed: Vec<Vec<BigInt>> = x.basis().iter().map(|b| ug.coords(p, b).unwrap()).collect();
            let matrices = induced_action(&ring, Slot::Right, data.upper_offset(i - 1), ug.periods(), &embed, x.periods())?;
            actions.push(GapAction { gap: format!("(V_R∩R^u_{})G'/(V_R∩R^u_{})G'", i, i + 1), periods: x.periods().to_vec(), matrices });
        }
    }
    for i in 2..=c {
        let lg = &data.lower_gaps[i - 2];
        actions.push(unit_blocks(Slot::Value, data.lower_offset(i - 2), lg.periods(), format!("R^l_{}/R^l_{}", i, i + 1)));
        let t = AbelianSection::new(p, &lz[i - 1], &lz[i])?;
        if !t.is_trivial() {
            let embed: Vec<Vec<BigInt>> = t.basis().iter().map(|b| lg.coords(p, b).unwrap()).collect();
            let matrices = induced_action(&ring, Slot::Value, data.lower_offset(i - 2), lg.periods(), &embed, t.periods())?;
            actions.push(GapAction { gap: format!("(R^l_{}∩Z)/(R^l_{}∩Z)", i, i + 1), periods: t.periods().to_vec(), matrices });
        }
    }
    Ok(RefinedSeries { upper, lower, ring, actions, special_gap: data.special_gap })
}

/// An ideal of a finite ring, listed by its elements' coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub generators: Vec<Vec<BigInt>>,
    pub order: usize,
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let parts: Vec<String> = g.iter().map(|x| format!("{}", x)).collect();
                if parts.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("[{}]", parts.join(","))
                }
            })
            .collect();
        if gens.is_empty() {
            write!(f, "(0)")
        } else {
            write!(f, "({})", gens.join(", "))
        }
    }
}

/// Elements of a finite ring indexed in mixed radix.
struct FiniteRing<'a> {
    ring: &'a ScalarRing,
    radix: Vec<usize>,
    order: usize,
}

impl<'a> FiniteRing<'a> {
    fn decode(&self, mut x: usize) -> Vec<BigInt> {
        self.radix
            .iter()
            .map(|&r| {
                let d = x % r;
                x /= r;
                BigInt::from(d)
            })
            .collect()
    }

    fn encode(&self, v: &[BigInt]) -> usize {
        let v = self.ring.reduce(v);
        let mut x = 0;
        for (c, &r) in v.iter().zip(&self.radix).rev() {
            x = x * r + c.to_usize().unwrap();
        }
        x
    }

    fn add(&self, x: usize, y: usize) -> usize {
        self.encode(&self.ring.add(&self.decode(x), &self.decode(y)))
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.encode(&self.ring.multiply(&self.decode(x), &self.decode(y)))
    }

    /// Additive span of `gens`.
    fn span(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        set.insert(0);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// Two-sided ideal generated by `gens`.
    fn ideal(&self, gens: &[usize]) -> BTreeSet<usize> {
        let k = self.radix.len();
        let basis: Vec<usize> = (0..k)
            .map(|i| {
                let mut v = vec![BigInt::zero(); k];
                v[i] = BigInt::one();
                self.encode(&v)
            })
            .collect();
        let mut words = Vec::new();
        for &g in gens {
            for &a in &basis {
                let ag = self.mul(a, g);
                for &b in &basis {
                    words.push(self.mul(ag, b));
                }
            }
        }
        self.span(&words)
    }

    fn product(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut words = BTreeSet::new();
        for &x in a {
            for &y in b {
                words.insert(self.mul(x, y));
            }
        }
        let words: Vec<usize> = words.into_iter().collect();
        self.span(&words)
    }

    fn describe(&self, set: &BTreeSet<usize>) -> Ideal {
        let mut gens = Vec::new();
        let mut current = self.ideal(&[]);
        for &x in set {
            if !current.contains(&x) {
                gens.push(x);
                current = self.ideal(&gens);
            }
        }
        Ideal { generators: gens.into_iter().map(|g| self.decode(g)).collect(), order: set.len() }
    }
}

/// Largest ring order handled by [`prime_decomposition_zero`].
pub const PRIME_ORACLE_LIMIT: usize = 512;

/// All two-sided ideals of a finite ring, smallest first.
pub fn ideals(ring: &ScalarRing) -> Result<Vec<Ideal>> {
    let fr = finite(ring)?;
    Ok(all_ideals(&fr).iter().map(|s| fr.describe(s)).collect())
}

fn finite(ring: &ScalarRing) -> Result<FiniteRing<'_>> {
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let radix: Vec<usize> = ring.periods().iter().map(|p| p.value().unwrap().to_usize().unwrap_or(usize::MAX)).collect();
    let mut order: usize = 1;
    for &r in &radix {
        order = order.saturating_mul(r);
    }
    if order > PRIME_ORACLE_LIMIT {
        return Err(Error::TooLarge(format!("ring of order {}", order)));
    }
    Ok(FiniteRing { ring, radix, order })
}

fn all_ideals(fr: &FiniteRing<'_>) -> Vec<BTreeSet<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in 0..fr.order {
        found.insert(fr.ideal(&[x]).into_iter().collect());
    }
    loop {
        let list: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for (a, x) in list.iter().enumerate() {
            for y in &list[a + 1..] {
                let gens: Vec<usize> = x.iter().chain(y).cloned().collect();
                let s: Vec<usize> = fr.span(&gens).into_iter().collect();
                if found.insert(s) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<BTreeSet<usize>> = found.into_iter().map(|v| v.into_iter().collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn is_prime_ideal(fr: &FiniteRing<'_>, set: &BTreeSet<usize>) -> bool {
    if set.len() == fr.order {
        return false;
    }
    let outside: Vec<usize> = (0..fr.order).filter(|x| !set.contains(x)).collect();
    outside.iter().all(|&x| outside.iter().all(|&y| !set.contains(&fr.mul(x, y))))
}

/// A shortest list of prime ideals whose product is zero.
pub fn prime_decomposition_zero(ring: &ScalarRing) -> Result<Vec<Ideal>> {
    let fr = finite(ring)?;
    if fr.order == 1 {
        return Ok(Vec::new());
    }
    let primes: Vec<BTreeSet<usize>> = all_ideals(&fr).into_iter().filter(|s| is_prime_ideal(&fr, s)).collect();
    // the length of a composition series bounds the number of factors
    let mut bound = 0;
    let mut n = fr.order;
    let mut d = 2;
    while n > 1 {
        while n % d == 0 {
            n /= d;
            bound += 1;
        }
        d += 1;
    }
    let whole: BTreeSet<usize> = (0..fr.order).collect();
    for len in 1..=bound {
        let mut idx = vec![0usize; len];
        loop {
            let mut prod = whole.clone();
            for &i in &idx {
                prod = fr.product(&prod, &primes[i]);
            }
            if prod.len() == 1 {
                let mut out: Vec<Ideal> = idx.iter().map(|&i| fr.describe(&primes[i])).collect();
                out.sort_by(|a, b| a.generators.cmp(&b.generators));
                return Ok(out);
            }
            // next nondecreasing index tuple
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if idx[k] + 1 < primes.len() {
                    idx[k] += 1;
                    for t in k + 1..len {
                        idx[t] = idx[k];
                    }
                    break;
                }
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || primes.is_empty() {
                break;
            }
        }
    }
    Err(Error::Degenerate("no product of primes vanishes".into()))
}

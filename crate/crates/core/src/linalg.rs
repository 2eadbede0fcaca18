//! Exact integer matrix algebra.
//!
//! Conventions used throughout the crate:
//!
//! * Hermite normal form is row-style: `U·A = H` with `H` in upper row echelon
//!   form, positive pivots, and every entry above a pivot reduced into
//!   `[0, pivot)`.
//! * Smith normal form is `U·A·V = D` with a nonnegative diagonal
//!   `d₁ | d₂ | … | d_r` followed by zeros.
//! * In congruence systems a modulus of `0` means equality over ℤ.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let e = &self[(i, j)];
                if !e.is_zero() {
                    *o += c * e;
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k · row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// `col[dst] += k · col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -core::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Row-style Hermite normal form together with its unimodular transform.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

impl Hnf {
    /// Rank of the source matrix (number of nonzero rows of `h`).
    pub fn rank(&self) -> usize {
        (0..self.h.rows()).take_while(|&i| self.h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Pivot column of every nonzero row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|i| self.h.row(i).iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }
}

pub fn hnf(a: &IntMatrix) -> Hnf {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()));
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    Hnf { h, u }
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn lattice_basis(rows: &IntMatrix) -> IntMatrix {
    let res = hnf(rows);
    let k = res.rank();
    IntMatrix::from_rows(rows.cols(), (0..k).map(|i| res.h.row_vec(i)).collect())
}

/// Reduces `v` modulo the row lattice of `basis` (which must be in Hermite form):
/// on return every pivot coordinate lies in `[0, pivot)`.
pub fn reduce_mod_lattice(basis: &IntMatrix, v: &mut [BigInt]) {
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = v[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &q * r;
            }
        }
    }
}

/// Coefficients expressing `v` in the Hermite-form basis `basis`, if `v` lies in its row lattice.
pub fn lattice_coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); basis.rows()];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let row = basis.row(i);
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        *c = q;
    }
    if rest.iter().all(Zero::is_zero) {
        Some(coeffs)
    } else {
        None
    }
}

/// `U·A·V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, maintained alongside the column operations.
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal `d₁, …, d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut vi = IntMatrix::identity(n);

    macro_rules! row_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            d.add_row_multiple($dst, $src, $k);
            u.add_row_multiple($dst, $src, $k);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            d.add_col_multiple($dst, $src, $k);
            v.add_col_multiple($dst, $src, $k);
            let nk = -($k).clone();
            vi.add_row_multiple($src, $dst, &nk);
        }};
    }
    macro_rules! swap_rows {
        ($a:expr, $b:expr) => {{
            d.swap_rows($a, $b);
            u.swap_rows($a, $b);
        }};
    }
    macro_rules! swap_cols {
        ($a:expr, $b:expr) => {{
            d.swap_cols($a, $b);
            v.swap_cols($a, $b);
            vi.swap_rows($a, $b);
        }};
    }

    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows!(t, pi);
        swap_cols!(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                row_add!(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                col_add!(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..m {
                    if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[(bi, bj)].abs() {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[(bi, bj)].abs() {
                        bi = t;
                        bj = j;
                    }
                }
                swap_rows!(t, bi);
                swap_cols!(t, bj);
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => row_add!(t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { d, u, v, v_inv: vi }
}

/// Affine solution set of a system of linear congruences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub consistent: bool,
    /// A particular solution, reduced modulo the lattice (empty when inconsistent).
    pub particular: Vec<BigInt>,
    /// Rows span the homogeneous solutions; Hermite normal form.
    pub lattice: IntMatrix,
}

impl SolutionSet {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        if !self.consistent {
            return false;
        }
        let diff: Vec<BigInt> = x.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        lattice_coordinates(&self.lattice, &diff).is_some()
    }
}

/// Solves `A·x ≡ b` componentwise, row `i` modulo `moduli[i]` (`0` = over ℤ).
pub fn solve_congruences(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> SolutionSet {
    let r = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), r, "right-hand side length");
    assert_eq!(moduli.len(), r, "moduli length");
    if r == 0 {
        return SolutionSet {
            consistent: true,
            particular: vec![BigInt::zero(); n],
            lattice: IntMatrix::identity(n),
        };
    }
    let nz: Vec<usize> = (0..r).filter(|&i| !moduli[i].is_zero()).collect();
    let width = n + nz.len();
    let mut c = IntMatrix::zeros(r, width);
    for i in 0..r {
        for j in 0..n {
            c[(i, j)] = a[(i, j)].clone();
        }
    }
    for (k, &i) in nz.iter().enumerate() {
        c[(i, n + k)] = moduli[i].abs();
    }
    let s = snf(&c);
    let rhs = s.u.mul_vec(b);
    let diag = s.diagonal();
    let rank = s.rank();
    let mut w = vec![BigInt::zero(); width];
    let mut consistent = true;
    for t in 0..rank {
        let (q, rem) = rhs[t].div_rem(&diag[t]);
        if !rem.is_zero() {
            consistent = false;
            break;
        }
        w[t] = q;
    }
    if consistent && rhs[rank..].iter().any(|x| !x.is_zero()) {
        consistent = false;
    }
    let kernel_rows: Vec<Vec<BigInt>> = (rank..width)
        .map(|t| (0..n).map(|i| s.v[(i, t)].clone()).collect())
        .collect();
    let lattice = lattice_basis(&IntMatrix::from_rows(n, kernel_rows));
    if !consistent {
        return SolutionSet { consistent, particular: Vec::new(), lattice };
    }
    let z = s.v.mul_vec(&w);
    let mut particular = z[..n].to_vec();
    reduce_mod_lattice(&lattice, &mut particular);
    SolutionSet { consistent, particular, lattice }
}

/// Rows spanning the integer kernel `{x : A·x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let zeros = vec![BigInt::zero(); a.rows()];
    solve_congruences(a, &zeros, &zeros).lattice
}

/// Hermite basis of the intersection of two row lattices in the same ambient ℤⁿ.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.cols());
    let n = a.cols();
    if a.rows() == 0 || b.rows() == 0 {
        return IntMatrix::zeros(0, n);
    }
    // x·A = y·B  <=>  (x, -y)·[A; B] = 0
    let stacked = a.stack(b);
    let ker = integer_kernel(&stacked.transpose());
    let rows: Vec<Vec<BigInt>> = (0..ker.rows())
        .map(|k| a.vec_mul(&ker.row(k)[..a.rows()]))
        .collect();
    lattice_basis(&IntMatrix::from_rows(n, rows))
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let h = hnf(m);
    if h.h != IntMatrix::identity(m.rows()) {
        return None;
    }
    Some(h.u)
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g ≥ 0`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e)
    }

    fn v(e: &[i64]) -> Vec<BigInt> {
        e.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_small_example() {
        let a = m(2, 2, &[2, 6, 4, 8]);
        let r = hnf(&a);
        assert_eq!(r.h, m(2, 2, &[2, 2, 0, 4]));
        assert_eq!(r.u.mul(&a), r.h);
        assert_eq!(r.u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn hnf_fixed_points() {
        let id = IntMatrix::identity(3);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
        let z = m(1, 1, &[0]);
        assert_eq!(hnf(&z).h, z);
    }

    #[test]
    fn snf_small_example() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let s = snf(&a);
        assert_eq!(s.d, m(2, 2, &[1, 0, 0, 6]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
    }

    #[test]
    fn snf_fixed_points() {
        let id = IntMatrix::identity(4);
        assert_eq!(snf(&id).d, id);
        let z = m(1, 1, &[0]);
        assert_eq!(snf(&z).d, z);
    }

    #[test]
    fn crt_example() {
        let a = m(2, 1, &[1, 1]);
        let s = solve_congruences(&a, &v(&[1, 2]), &v(&[2, 3]));
        assert!(s.consistent);
        assert_eq!(s.particular, v(&[5]));
        assert_eq!(s.lattice, m(1, 1, &[6]));
    }

    #[test]
    fn empty_system_is_everything() {
        let a = IntMatrix::zeros(0, 3);
        let s = solve_congruences(&a, &[], &[]);
        assert!(s.consistent);
        assert_eq!(s.lattice, IntMatrix::identity(3));
    }

    #[test]
    fn contradictory_parities() {
        let a = m(2, 1, &[1, 1]);
        let s = solve_congruences(&a, &v(&[0, 1]), &v(&[2, 2]));
        assert!(!s.consistent);
    }

    #[test]
    fn equality_over_integers() {
        // 2x + 4y = 6 over Z
        let a = m(1, 2, &[2, 4]);
        let s = solve_congruences(&a, &v(&[6]), &v(&[0]));
        assert!(s.consistent);
        assert!(s.contains(&v(&[3, 0])));
        assert!(s.contains(&v(&[1, 1])));
        assert!(!s.contains(&v(&[0, 1])));
    }

    #[test]
    fn intersection_of_lattices() {
        let a = m(1, 1, &[4]);
        let b = m(1, 1, &[6]);
        assert_eq!(lattice_intersection(&a, &b), m(1, 1, &[12]));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(3, 3, &[2, 1, 0, 1, 1, 0, 0, 0, -1]);
        assert_eq!(a.determinant(), BigInt::from(-1));
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(3));
        assert!(unimodular_inverse(&m(1, 1, &[2])).is_none());
    }
}

//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nilpc::format;
use nilpc_core::bilinear::{assemble_fr, associated_series, scalar_ring, BilinearMap, FgAbelian, ScalarRing, Triple};
use nilpc_core::deformation::{abdef, adapt_basis, enumerate_deformations, standard_embedding, twisted_embedding, DeformationParams};
use nilpc_core::fixtures;
use nilpc_core::linalg::{hnf, snf, solve_congruences, IntMatrix};
use nilpc_core::morphism::{hom_from_images, image_index, invariant_report, is_inverse_pair};
use nilpc_core::series::{is_regular, key_subgroups, lower_central_series, upper_central_series};
use nilpc_core::{BigInt, GroupElement, Period, PresentationBuilder};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn fixture_path(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect()
}

// 1 ------------------------------------------------------------------------

type M3 = [[i128; 3]; 3];

fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn mat_pow(a: &M3, n: i64) -> M3 {
    // unitriangular: the inverse is 2I - A + (A - I)^2
    let base = if n >= 0 {
        *a
    } else {
        let mut n1 = *a;
        for i in 0..3 {
            n1[i][i] -= 1;
        }
        let n2 = mat_mul(&n1, &n1);
        let mut inv = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                inv[i][j] = if i == j { 1 } else { 0 } - n1[i][j] + n2[i][j];
            }
        }
        inv
    };
    let mut r = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut b = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            r = mat_mul(&r, &b);
        }
        b = mat_mul(&b, &b);
        k >>= 1;
    }
    r
}

const X: M3 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
const Y: M3 = [[1, 0, 0], [0, 1, 1], [0, 0, 1]];
const Z: M3 = [[1, 0, 1], [0, 1, 0], [0, 0, 1]];

fn heis_matrix(x: &GroupElement) -> M3 {
    let c: Vec<i64> = x.coords().iter().map(|v| v.to_i64().unwrap()).collect();
    mat_mul(&mat_mul(&mat_pow(&X, c[0]), &mat_pow(&Y, c[1])), &mat_pow(&Z, c[2]))
}

fn collection_oracle() -> Check {
    let p = fixtures::heis();
    // the model respects the defining relation [u1,u2] = u3
    let comm = mat_mul(&mat_mul(&mat_pow(&X, -1), &mat_pow(&Y, -1)), &mat_mul(&X, &Y));
    ensure!(comm == Z, "matrix model does not satisfy [u1,u2] = u3");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random = |rng: &mut ChaCha8Rng| {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-50..=50)).collect();
        p.element_i64(&c)
    };
    for _ in 0..1000 {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let prod = p.multiply(&x, &y);
        ensure!(heis_matrix(&prod) == mat_mul(&heis_matrix(&x), &heis_matrix(&y)), "product {} · {} disagrees", x, y);
        let n = rng.gen_range(-50..=50);
        let pw = p.power_i64(&x, n);
        ensure!(heis_matrix(&pw) == mat_pow(&heis_matrix(&x), n), "power {}^{} disagrees", x, n);
    }
    Ok(())
}

// 2 ------------------------------------------------------------------------

fn consistency() -> Check {
    for (name, p) in fixtures::all() {
        ensure!(p.consistency_check().is_consistent(), "{} reported inconsistent", name);
    }
    let mutated = PresentationBuilder::new(vec![Period::finite(2), Period::Infinite, Period::Infinite])
        .comm_i64(1, 0, &[(2, -1)])
        .build()
        .map_err(|e| e.to_string())?;
    let r = mutated.consistency_check();
    ensure!(!r.is_consistent(), "mutated HEIS passed");
    let hit = r.failures.iter().any(|f| {
        let s = f.discrepancy.support();
        s.len() == 1 && s[0].0 == 2 && s[0].1.abs() == bi(2)
    });
    ensure!(hit, "no overlap exposes u3^2 = 1");
    Ok(())
}

// 3 ------------------------------------------------------------------------

fn subgroup_zoo() -> Check {
    let g = fixtures::zg();
    let k = key_subgroups(&g).map_err(|e| e.to_string())?;
    ensure!(k.addition.rows() == [g.generator(4)], "G0(ZG) = {:?}", k.addition.rows());
    ensure!(k.mn_invariants == [Period::finite(5)], "M/N(ZG) = {:?}", k.mn_invariants);
    let nr = fixtures::nr();
    let k = key_subgroups(&nr).map_err(|e| e.to_string())?;
    ensure!(k.addition.rows() == [nr.power_i64(&nr.generator(2), 3)], "G0(NR) is not <c^3>");
    ensure!(!k.is_regular(), "NR regular");
    Ok(())
}

// 4 ------------------------------------------------------------------------

fn deformation_identity() -> Check {
    let a = adapt_basis(&fixtures::zg()).map_err(|e| e.to_string())?;
    ensure!(a.pres == fixtures::zg(), "ZG is not already adapted");
    let q = abdef(&a, &DeformationParams::new(&[2], &[&[1]])).map_err(|e| e.to_string())?;
    ensure!(q == fixtures::zk(), "Abdef(ZG, 2, [[1]]) differs from ZK");
    Ok(())
}

// 5 ------------------------------------------------------------------------

fn isomorphism_witness() -> Check {
    let h = fixtures::zh();
    let k = fixtures::zk();
    let read = |n: &str| std::fs::read_to_string(fixture_path(n)).map_err(|e| e.to_string());
    let phi_imgs = format::parse_map(&read("zh_to_zk.json")?, h.rank(), &k).map_err(|e| e.to_string())?;
    let psi_imgs = format::parse_map(&read("zk_to_zh.json")?, k.rank(), &h).map_err(|e| e.to_string())?;
    ensure!(phi_imgs[3] == k.element_i64(&[0, 0, 0, 3, -1, 0, 0, 0, 0, 0]), "φ(u4) ≠ u4^3 u5^-1");
    ensure!(psi_imgs[3] == h.power_i64(&h.generator(3), 2), "ψ(u4) ≠ u4^2");
    let phi = hom_from_images(&h, &k, phi_imgs).map_err(|e| format!("φ: {}", e))?;
    let psi = hom_from_images(&k, &h, psi_imgs).map_err(|e| format!("ψ: {}", e))?;
    ensure!(is_inverse_pair(&phi, &psi).map_err(|e| e.to_string())?, "φ, ψ not mutually inverse");
    Ok(())
}

// 6 ------------------------------------------------------------------------

fn ext_bound() -> Check {
    for (name, p, bound, realized) in [("ZG", fixtures::zg(), 5, 4), ("NR", fixtures::nr(), 3, 2)] {
        let a = adapt_basis(&p).map_err(|e| e.to_string())?;
        let en = enumerate_deformations(&a).map_err(|e| e.to_string())?;
        let e = a.e();
        ensure!(en.bound == num_traits::pow(e.clone(), a.p()), "{}: bound {} ≠ e^p", name, en.bound);
        ensure!(en.bound == bi(bound), "{}: bound {}", name, en.bound);
        ensure!(en.classes.len() == realized, "{}: {} classes realized", name, en.classes.len());
        ensure!(bi(en.classes.len() as i64) <= en.bound, "{}: more classes than the bound", name);
    }
    Ok(())
}

// 7 ------------------------------------------------------------------------

fn invariant_stability() -> Check {
    let base = invariant_report(&fixtures::zg()).map_err(|e| e.to_string())?;
    for (name, p) in [("ZH", fixtures::zh()), ("ZK", fixtures::zk())] {
        ensure!(invariant_report(&p).map_err(|e| e.to_string())? == base, "{} differs from ZG", name);
    }
    for p in [fixtures::zg(), fixtures::nr()] {
        let a = adapt_basis(&p).map_err(|e| e.to_string())?;
        let base = invariant_report(&a.pres).map_err(|e| e.to_string())?;
        ensure!(invariant_report(&p).map_err(|e| e.to_string())? == base, "adapting changed the invariants");
        for d in enumerate_deformations(&a).map_err(|e| e.to_string())?.classes {
            let r = invariant_report(&d.pres).map_err(|e| e.to_string())?;
            ensure!(r == base, "deformation {:?} changes invariants", d.params.d);
        }
    }
    Ok(())
}

// 8 ------------------------------------------------------------------------

/// Brute-force solutions of `f(Φ1 x, y) = f(x, Φ2 y) = Φ0 f(x, y)` with
/// every matrix entry drawn from `range`. Values compared modulo `modulus`
/// (0 for ℤ).
fn brute_triples(n: usize, table: &[Vec<Vec<i64>>], modulus: i64, range: &[i64]) -> BTreeSet<Vec<i64>> {
    let nc = table[0][0].len();
    let len = 2 * n * n + nc * nc;
    let red = |v: i64| if modulus == 0 { v } else { v.rem_euclid(modulus) };
    let f = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let mut out = vec![0; nc];
        for a in 0..n {
            for b in 0..n {
                for (o, t) in out.iter_mut().zip(&table[a][b]) {
                    *o += x[a] * y[b] * t;
                }
            }
        }
        out
    };
    let mut found = BTreeSet::new();
    let mut idx = vec![0usize; len];
    'outer: loop {
        let v: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
        let (p1, rest) = v.split_at(n * n);
        let (p2, p0) = rest.split_at(n * n);
        let col = |m: &[i64], j: usize, k: usize| -> Vec<i64> { (0..k).map(|i| m[i * k + j]).collect() };
        let mut ok = true;
        'check: for i in 0..n {
            for j in 0..n {
                let mut ei = vec![0; n];
                ei[i] = 1;
                let mut ej = vec![0; n];
                ej[j] = 1;
                let l = f(&col(p1, i, n), &ej);
                let r = f(&ei, &col(p2, j, n));
                let base = &table[i][j];
                let m: Vec<i64> = (0..nc).map(|s| (0..nc).map(|t| p0[s * nc + t] * base[t]).sum()).collect();
                for s in 0..nc {
                    if red(l[s]) != red(r[s]) || red(l[s]) != red(m[s]) {
                        ok = false;
                        break 'check;
                    }
                }
            }
        }
        if ok {
            found.insert(v.clone());
        }
        for k in (0..len).rev() {
            idx[k] += 1;
            if idx[k] < range.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    found
}

fn triple_vec(t: &Triple, modulus: i64) -> Vec<i64> {
    let red = |v: i64| if modulus == 0 { v } else { v.rem_euclid(modulus) };
    [&t.phi1, &t.phi2, &t.phi0]
        .iter()
        .flat_map(|m| m.entries().iter().map(|x| red(x.to_i64().unwrap())))
        .collect()
}

fn triple_of(v: &[i64], n: usize, nc: usize) -> Triple {
    let (p1, rest) = v.split_at(n * n);
    let (p2, p0) = rest.split_at(n * n);
    Triple {
        phi1: IntMatrix::from_i64(n, n, p1),
        phi2: IntMatrix::from_i64(n, n, p2),
        phi0: IntMatrix::from_i64(nc, nc, p0),
    }
}

/// The ring's triples inside the box coincide with the brute-force set.
fn agrees_with_oracle(r: &ScalarRing, n: usize, table: &[Vec<Vec<i64>>], modulus: i64, range: &[i64]) -> Check {
    let nc = table[0][0].len();
    let brute = brute_triples(n, table, modulus, range);
    for v in &brute {
        ensure!(r.coords(&triple_of(v, n, nc)).is_some(), "oracle triple {:?} missing from ring", v);
    }
    let allowed: BTreeSet<i64> = range.iter().copied().collect();
    let mut from_ring = BTreeSet::new();
    let k = r.dim();
    let span: Vec<i64> = (-3..=3).collect();
    let mut idx = vec![0usize; k];
    loop {
        let c: Vec<BigInt> = idx.iter().map(|&i| bi(span[i])).collect();
        let v = triple_vec(&r.element(&c), modulus);
        if v.iter().all(|x| allowed.contains(x)) {
            from_ring.insert(v);
        }
        let mut carry = true;
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < span.len() {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            break;
        }
    }
    ensure!(from_ring == brute, "ring box has {} triples, oracle {}", from_ring.len(), brute.len());
    Ok(())
}

fn table_of(rows: &[&[&[i64]]]) -> Vec<Vec<Vec<i64>>> {
    rows.iter().map(|r| r.iter().map(|v| v.to_vec()).collect()).collect()
}

fn scalar_rings() -> Check {
    let sym = [&[&[0i64][..], &[1][..]][..], &[&[-1][..], &[0][..]][..]];
    let f = BilinearMap::from_i64(FgAbelian::free(2), FgAbelian::free(2), FgAbelian::free(1), &sym).map_err(|e| e.to_string())?;
    let r = scalar_ring(&f).map_err(|e| e.to_string())?;
    ensure!(r.periods() == [Period::Infinite], "symplectic ring periods {:?}", r.periods());
    ensure!(r.unit().len() == 1 && r.unit()[0].abs().is_one(), "symplectic unit {:?}", r.unit());
    agrees_with_oracle(&r, 2, &table_of(&sym), 0, &[-1, 0, 1]).map_err(|e| format!("symplectic: {}", e))?;

    let gauss = [&[&[1i64, 0][..], &[0, 1][..]][..], &[&[0, 1][..], &[-1, 0][..]][..]];
    let f = BilinearMap::from_i64(FgAbelian::free(2), FgAbelian::free(2), FgAbelian::free(2), &gauss).map_err(|e| e.to_string())?;
    let r = scalar_ring(&f).map_err(|e| e.to_string())?;
    ensure!(r.periods() == [Period::Infinite, Period::Infinite], "gaussian ring periods {:?}", r.periods());
    let minus_one: Vec<BigInt> = r.unit().iter().map(|x| -x).collect();
    let mut root = false;
    for a in -2..=2 {
        for b in -2..=2 {
            let x = vec![bi(a), bi(b)];
            root |= r.multiply(&x, &x) == minus_one;
        }
    }
    ensure!(root, "no square root of -1");
    agrees_with_oracle(&r, 2, &table_of(&gauss), 0, &[-1, 0, 1]).map_err(|e| format!("gaussian: {}", e))?;

    let one = [&[&[1i64][..]][..]];
    let f = BilinearMap::from_i64(FgAbelian::cyclic(2), FgAbelian::cyclic(2), FgAbelian::cyclic(2), &one).map_err(|e| e.to_string())?;
    let r = scalar_ring(&f).map_err(|e| e.to_string())?;
    ensure!(r.order() == Period::finite(2), "Z/2 ring order {:?}", r.order());
    agrees_with_oracle(&r, 1, &table_of(&one), 2, &[0, 1]).map_err(|e| format!("Z/2: {}", e))?;
    Ok(())
}

// 9 ------------------------------------------------------------------------

fn bilinearization() -> Check {
    let p = fixtures::heis();
    let det = BilinearMap::from_i64(FgAbelian::free(2), FgAbelian::free(2), FgAbelian::free(1), &[&[&[0], &[1]], &[&[-1], &[0]]])
        .map_err(|e| e.to_string())?;
    let mut maps = Vec::new();
    for chain in [lower_central_series(&p), upper_central_series(&p)] {
        let data = associated_series(&p, &chain).map_err(|e| e.to_string())?;
        maps.push(assemble_fr(&data).map_err(|e| e.to_string())?);
    }
    ensure!(maps[0] == maps[1], "F_Γ ≠ F_Z");
    ensure!(maps[0] == det, "F_Γ is not the determinant form:\n{}", maps[0]);
    Ok(())
}

// 10 -----------------------------------------------------------------------

fn embeddings() -> Check {
    let a = adapt_basis(&fixtures::zg()).map_err(|e| e.to_string())?;
    let params = DeformationParams::new(&[2], &[&[1]]);
    let five = bi(5);
    let coprime = |idx: &Period| matches!(idx, Period::Finite(n) if num_integer_gcd(n, &five).is_one());
    let phi = standard_embedding(&a, &params).map_err(|e| format!("standard: {}", e))?;
    ensure!(phi.target() == &fixtures::zk(), "target is not ZK");
    let (_, idx) = image_index(&phi);
    ensure!(coprime(&idx), "standard index {:?}", idx);
    for j in 1..=5 {
        let t = twisted_embedding(&a, &params, j).map_err(|e| format!("φ_{}: {}", j, e))?;
        ensure!(t.target() == &fixtures::zk(), "φ_{} target is not ZK", j);
        let (_, idx) = image_index(&t);
        ensure!(coprime(&idx), "φ_{} index {:?}", j, idx);
    }
    Ok(())
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

// 11 -----------------------------------------------------------------------

fn regularity() -> Check {
    for (name, p, want) in [("HEIS", fixtures::heis(), true), ("NR", fixtures::nr(), false), ("ZG", fixtures::zg(), false)] {
        let (got, _, _) = is_regular(&p).map_err(|e| e.to_string())?;
        ensure!(got == want, "is_regular({}) = {}", name, got);
    }
    Ok(())
}

// 12 -----------------------------------------------------------------------

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, bound: i64) -> IntMatrix {
    let e: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-bound..=bound)).collect();
    IntMatrix::from_i64(r, c, &e)
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

fn check_snf(a: &IntMatrix) -> Check {
    let s = snf(a);
    ensure!(s.u.mul(a).mul(&s.v) == s.d, "U·A·V ≠ D");
    ensure!(is_unimodular(&s.u) && is_unimodular(&s.v), "transform not unimodular");
    ensure!(s.v.mul(&s.v_inv) == IntMatrix::identity(s.v.rows()), "v_inv wrong");
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            ensure!(i == j || s.d[(i, j)].is_zero(), "D not diagonal");
        }
    }
    let d = s.diagonal();
    ensure!(d.iter().all(|x| !x.is_negative()), "negative invariant factor");
    for w in d.windows(2) {
        ensure!(
            (w[0].is_zero() && w[1].is_zero()) || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()),
            "divisibility chain broken: {:?}",
            d
        );
    }
    Ok(())
}

fn check_hnf(a: &IntMatrix) -> Check {
    let h = hnf(a);
    ensure!(h.u.mul(a) == h.h, "U·A ≠ H");
    ensure!(is_unimodular(&h.u), "HNF transform not unimodular");
    let piv = h.pivots();
    ensure!(piv.windows(2).all(|w| w[0] < w[1]), "pivots not increasing");
    for (r, &c) in piv.iter().enumerate() {
        let p = &h.h[(r, c)];
        ensure!(p.is_positive(), "pivot not positive");
        for above in 0..r {
            let x = &h.h[(above, c)];
            ensure!(!x.is_negative() && x < p, "entry above pivot not reduced");
        }
    }
    for r in h.rank()..h.h.rows() {
        ensure!(h.h.row(r).iter().all(|x| x.is_zero()), "zero rows not at the bottom");
    }
    Ok(())
}

fn check_solver(rng: &mut ChaCha8Rng) -> Check {
    let rows = rng.gen_range(1..=2);
    let cols = rng.gen_range(1..=3);
    let a = random_matrix(rng, rows, cols, 3);
    let b: Vec<BigInt> = (0..rows).map(|_| bi(rng.gen_range(-3..=3))).collect();
    let moduli: Vec<BigInt> = (0..rows).map(|_| bi([0, 2, 3, 4, 6][rng.gen_range(0..5)])).collect();
    let sol = solve_congruences(&a, &b, &moduli);
    let satisfies = |x: &[BigInt]| {
        let ax = a.mul_vec(x);
        ax.iter().zip(&b).zip(&moduli).all(|((l, r), m)| if m.is_zero() { l == r } else { ((l - r) % m).is_zero() })
    };
    if sol.consistent {
        ensure!(satisfies(&sol.particular), "particular solution fails");
    }
    let range: Vec<i64> = (-4..=4).collect();
    let mut idx = vec![0usize; cols];
    let mut any = false;
    loop {
        let x: Vec<BigInt> = idx.iter().map(|&i| bi(range[i])).collect();
        let brute = satisfies(&x);
        any |= brute;
        ensure!(brute == sol.contains(&x), "solver and search disagree at {:?}", x);
        let mut carry = true;
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < range.len() {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            break;
        }
    }
    ensure!(!any || sol.consistent, "search found a solution the solver missed");
    Ok(())
}

fn linalg_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..500 {
        let r = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, r, c, 6);
        check_snf(&a).map_err(|e| format!("instance {}: {}", k, e))?;
        check_hnf(&a).map_err(|e| format!("instance {}: {}", k, e))?;
        check_solver(&mut rng).map_err(|e| format!("instance {}: {}", k, e))?;
    }
    Ok(())
}

// --------------------------------------------------------------------------

struct Criterion {
    label: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { label: "collection oracle (HEIS vs unitriangular matrices)", limit: secs(1), run: collection_oracle },
        Criterion { label: "consistency of fixtures, mutated HEIS rejected", limit: secs(1), run: consistency },
        Criterion { label: "subgroup zoo of ZG and NR", limit: secs(1), run: subgroup_zoo },
        Criterion { label: "Abdef(ZG, 2, [[1]]) = ZK", limit: None, run: deformation_identity },
        Criterion { label: "isomorphism witness ZH <-> ZK", limit: secs(1), run: isomorphism_witness },
        Criterion { label: "Ext class bound and realized classes", limit: None, run: ext_bound },
        Criterion { label: "elementary invariants are stable", limit: None, run: invariant_stability },
        Criterion { label: "scalar rings against brute force", limit: secs(5), run: scalar_rings },
        Criterion { label: "HEIS bilinearization is the determinant form", limit: None, run: bilinearization },
        Criterion { label: "standard and twisted embeddings ZG -> ZK", limit: None, run: embeddings },
        Criterion { label: "regularity of HEIS, NR, ZG", limit: None, run: regularity },
        Criterion { label: "linear algebra property suite", limit: secs(10), run: linalg_suite },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = (c.run)();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&result, c.limit) {
            if took > limit {
                result = Err(format!("took {:.2?}, limit {:?}", took, limit));
            }
        }
        match result {
            Ok(()) => println!("criterion {:2}: PASS  {} ({:.2?})", i + 1, c.label, took),
            Err(e) => {
                failed += 1;
                println!("criterion {:2}: FAIL  {} ({:.2?}): {}", i + 1, c.label, took, e);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

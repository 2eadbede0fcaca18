//! Reference presentations used by tests, examples and the CLI.
//!
//! Relations are listed with 1-based indices to match the usual notation.

use alloc::vec;
use alloc::vec::Vec;

use crate::pc::{Period, Presentation, PresentationBuilder};

fn periods(codes: &[i64]) -> Vec<Period> {
    codes
        .iter()
        .map(|&c| if c == 0 { Period::Infinite } else { Period::finite(c) })
        .collect()
}

fn build(codes: &[i64], powers: &[(usize, &[(usize, i64)])], comms: &[(usize, usize, &[(usize, i64)])]) -> Presentation {
    let mut b = PresentationBuilder::new(periods(codes));
    for &(i, t) in powers {
        let t: Vec<(usize, i64)> = t.iter().map(|&(k, a)| (k - 1, a)).collect();
        b = b.power_i64(i - 1, &t);
    }
    for &(j, i, t) in comms {
        let t: Vec<(usize, i64)> = t.iter().map(|&(k, a)| (k - 1, a)).collect();
        b = b.comm_i64(j - 1, i - 1, &t);
    }
    b.build().expect("fixture presentation is well formed")
}

/// Heisenberg group: `[u2,u1] = u3^-1`.
pub fn heis() -> Presentation {
    build(&[0, 0, 0], &[], &[(2, 1, &[(3, -1)])])
}

fn zilber(comm32: i64, power4: i64) -> Presentation {
    build(
        &[0, 0, 0, 5, 0, 5, 5, 5, 0, 0],
        &[(4, &[(5, power4)])],
        &[
            (4, 1, &[(6, 1)]),
            (4, 2, &[(7, 1)]),
            (4, 3, &[(8, 1)]),
            (2, 1, &[(9, -1)]),
            (3, 1, &[(10, -1)]),
            (3, 2, &[(6, comm32)]),
        ],
    )
}

/// Zilber's group `G` on the basis `b, c, d, a, f, [a,b], [a,c], [a,d], [b,c], [b,d]`.
pub fn zg() -> Presentation {
    zilber(1, 1)
}

/// Zilber's `H`: as [`zg`] with `[u3,u2] = u6^2`.
pub fn zh() -> Presentation {
    zilber(2, 1)
}

/// Zilber's `K`: as [`zg`] with `u4^5 = u5^2`.
pub fn zk() -> Presentation {
    zilber(1, 2)
}

/// Class-2 group on `a, b, c` with `c^3` central, on the basis
/// `a, b, c, [a,b], [a,c], [b,c]`.
pub fn nr() -> Presentation {
    build(
        &[0, 0, 0, 0, 3, 3],
        &[],
        &[(2, 1, &[(4, -1)]), (3, 1, &[(5, -1)]), (3, 2, &[(6, -1)])],
    )
}

/// Free nilpotent group of class 3 on two generators.
pub fn f23() -> Presentation {
    build(
        &[0, 0, 0, 0, 0],
        &[],
        &[(2, 1, &[(3, 1)]), (3, 1, &[(4, 1)]), (3, 2, &[(5, 1)])],
    )
}

/// Free abelian group of the given rank.
pub fn free_abelian(rank: usize) -> Presentation {
    PresentationBuilder::new(vec![Period::Infinite; rank]).build().expect("no relations")
}

/// All named fixtures with their short names.
pub fn all() -> Vec<(&'static str, Presentation)> {
    vec![("HEIS", heis()), ("ZG", zg()), ("ZH", zh()), ("ZK", zk()), ("NR", nr()), ("F23", f23())]
}

/// Looks a fixture up by its short name, case-insensitively.
pub fn by_name(name: &str) -> Option<Presentation> {
    all().into_iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, p)| p)
}

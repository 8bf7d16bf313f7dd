//! Named loops: the two embedded 16-element tables, the parametrized families,
//! small groups, polynomial forms, and the combined audit corpus.

use crate::extension::{self, Params27};
use crate::table::LoopTable;

const TABLE1: &str = "
0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15
1 0 3 2 5 4 7 6 9 8 11 10 13 12 15 14
2 3 0 1 6 7 4 5 10 11 8 9 14 15 12 13
3 2 1 0 7 6 5 4 11 10 9 8 15 14 13 12
4 5 6 7 0 1 2 3 12 13 14 15 8 9 10 11
5 4 7 6 1 0 3 2 13 12 15 14 9 8 11 10
6 7 4 5 2 3 0 1 14 15 12 13 10 11 8 9
7 6 5 4 3 2 1 0 15 14 13 12 11 10 9 8
8 9 11 10 14 15 13 12 0 1 3 2 6 7 5 4
9 8 10 11 15 14 12 13 1 0 2 3 7 6 4 5
10 11 9 8 12 13 15 14 2 3 1 0 4 5 7 6
11 10 8 9 13 12 14 15 3 2 0 1 5 4 6 7
12 13 15 14 10 11 9 8 5 4 6 7 3 2 0 1
13 12 14 15 11 10 8 9 4 5 7 6 2 3 1 0
14 15 13 12 8 9 11 10 7 6 4 5 1 0 2 3
15 14 12 13 9 8 10 11 6 7 5 4 0 1 3 2
";

/// Element names of the second table, in index order.
pub const TABLE2_NAMES: [&str; 16] = [
    "1", "c", "u", "v", "a", "ca", "ua", "va", "b", "cb", "ub", "vb", "ab", "cab", "uab", "vab",
];

const TABLE2: &str = "
1 c u v a ca ua va b cb ub vb ab cab uab vab
c 1 v u ca a va ua cb b vb ub cab ab vab uab
u v 1 c ua va a ca ub vb b cb uab vab ab cab
v u c 1 va ua ca a vb ub cb b vab uab cab ab
a ca va ua 1 c v u ab cab vab uab cb b ub vb
ca a ua va c 1 u v cab ab uab vab b cb vb ub
ua va ca a u v c 1 uab vab cab ab vb ub b cb
va ua a ca v u 1 c vab uab ab cab ub vb cb b
b cb vb ub uab vab cab ab 1 c v u ua va ca a
cb b ub vb vab uab ab cab c 1 u v va ua a ca
ub vb cb b ab cab vab uab u v c 1 a ca va ua
vb ub b cb cab ab uab vab v u 1 c ca a ua va
ab cab uab vab vb ub cb b ca a va ua v u c 1
cab ab vab uab ub vb b cb a ca ua va u v 1 c
uab vab ab cab cb b vb ub va ua ca a c 1 v u
vab uab cab ab b cb ub vb ua va a ca 1 c u v
";

/// The 16-element CC-loop whose extra elements are not all WIP.
pub fn table1() -> LoopTable {
    let cells: Vec<usize> = TABLE1
        .split_whitespace()
        .map(|t| t.parse().expect("embedded table"))
        .collect();
    LoopTable::from_cells(16, cells)
        .expect("embedded table is a loop")
        .with_name("table1")
}

/// The non-extra PACC loop of order 16 with `|Z| = 2` and elementary abelian nucleus.
pub fn table2() -> LoopTable {
    let cells: Vec<usize> = TABLE2
        .split_whitespace()
        .map(|t| TABLE2_NAMES.iter().position(|&s| s == t).expect("known name"))
        .collect();
    LoopTable::from_cells(16, cells)
        .expect("embedded table is a loop")
        .with_name("table2")
}

pub fn cyclic(n: usize) -> LoopTable {
    LoopTable::from_fn(n, |x, y| (x + y) % n)
        .expect("cyclic group")
        .with_name(format!("cyclic:{n}"))
}

/// `Z_2^k`, elements as bit vectors.
pub fn elem2(k: u32) -> LoopTable {
    LoopTable::from_fn(1 << k, |x, y| x ^ y)
        .expect("elementary abelian group")
        .with_name(format!("elem2:{k}"))
}

/// Dihedral group of order 8; `r^i s^j` has index `i + 4j`.
pub fn dihedral8() -> LoopTable {
    LoopTable::from_fn(8, |x, y| {
        let (i, j, k, l) = (x % 4, x / 4, y % 4, y / 4);
        let rot = if j == 0 { i + k } else { i + 4 - k };
        rot % 4 + 4 * ((j + l) % 2)
    })
    .expect("dihedral group")
    .with_name("dihedral8")
}

/// Quaternion group `<x, y | x^4, y^2 = x^2, yx = x^-1 y>`; `x^a y^b` has index `a + 4b`.
pub fn quaternion8() -> LoopTable {
    LoopTable::from_fn(8, |p, q| {
        let (a, b, c, d) = (p % 4, p / 4, q % 4, q / 4);
        let (e, f) = if b == 0 { (a + c, d) } else { (a + 4 - c, 1 + d) };
        if f == 2 {
            (e + 2) % 4
        } else {
            e % 4 + 4 * f
        }
    })
    .expect("quaternion group")
    .with_name("quaternion8")
}

/// Symmetric group on three points; `r^i s^j` has index `i + 3j`.
pub fn symmetric3() -> LoopTable {
    LoopTable::from_fn(6, |x, y| {
        let (i, j, k, l) = (x % 3, x / 3, y % 3, y / 3);
        let rot = if j == 0 { i + k } else { i + 3 - k };
        rot % 3 + 3 * ((j + l) % 2)
    })
    .expect("symmetric group")
    .with_name("symmetric3")
}

/// Direct product; `(a, b)` has index `a·|B| + b`.
pub fn product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let nb = b.order();
    let name = format!(
        "product:{},{}",
        a.name().unwrap_or("?"),
        b.name().unwrap_or("?")
    );
    LoopTable::from_fn(a.order() * nb, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
    .expect("product of loops")
    .with_name(name)
}

pub fn family16(r: u8, s: u8) -> LoopTable {
    extension::family16(r, s).expect("parameters in range")
}

pub fn family27(theta: u8, alpha: u8, beta: u8, gamma: u8, delta: u8) -> LoopTable {
    extension::family27(Params27::new(theta, alpha, beta, gamma, delta).expect("parameters in range"))
}

/// Polynomial form on `Z_4 x Z_2 x Z_2`; `(x1, x2, x3)` has index `x1 + 4(2·x2 + x3)`.
pub fn poly16(r: u8, s: u8) -> LoopTable {
    let (r, s) = (r as usize, s as usize);
    let dec = |e: usize| (e % 4, (e / 4) / 2, (e / 4) % 2);
    LoopTable::from_fn(16, |x, y| {
        let (x1, x2, x3) = dec(x);
        let (y1, y2, y3) = dec(y);
        let z1 = x1 + y1 + r * x2 * y2 + s * x3 * y3 + 2 * x2 * x3 * y3 + 2 * x2 * y2 * y3 + x3 * y2 * y2;
        z1 % 4 + 4 * (2 * ((x2 + y2) % 2) + (x3 + y3) % 2)
    })
    .expect("polynomial loop")
    .with_name(format!("poly16:{r},{s}"))
}

/// Polynomial form on `Z_2^4`; `(x1, x2, x3, x4)` has index `x1 + 2x2 + 4x3 + 8x4`.
pub fn poly2_4() -> LoopTable {
    let dec = |e: usize| (e & 1, (e >> 1) & 1, (e >> 2) & 1, (e >> 3) & 1);
    LoopTable::from_fn(16, |x, y| {
        let (x1, x2, x3, x4) = dec(x);
        let (y1, y2, y3, y4) = dec(y);
        let z1 = x1 + y1 + x3 * y2 + x3 * y3 * y4 + x4 * y2 * y2 + x3 * x4 * (y3 + y4);
        let z2 = x2 + y2 + x4 * y3 * y3;
        (z1 % 2) | (z2 % 2) << 1 | ((x3 + y3) % 2) << 2 | ((x4 + y4) % 2) << 3
    })
    .expect("polynomial loop")
    .with_name("poly2_4")
}

/// Every fixture used by the audit sweep.
pub fn corpus() -> Vec<LoopTable> {
    let mut out = vec![table1(), table2()];
    for r in 0..4 {
        for s in 0..4 {
            out.push(family16(r, s));
        }
    }
    out.extend(Params27::all().map(extension::family27));
    out.extend((2..=27).map(cyclic));
    out.extend((2..=4).map(elem2));
    out.push(dihedral8());
    out.push(quaternion8());
    out.push(symmetric3());
    out.push(poly16(0, 0));
    out.push(poly2_4());
    out.push(product(&cyclic(2), &dihedral8()));
    out.push(product(&cyclic(3), &quaternion8()));
    out.push(product(&cyclic(2), &family16(0, 0)));
    out.push(product(&cyclic(2), &table1()));
    out.push(product(&symmetric3(), &cyclic(2)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups_are_groups() {
        for g in [dihedral8(), quaternion8(), symmetric3(), elem2(3), cyclic(9)] {
            assert!(g.is_associative(), "{:?}", g.name());
        }
        assert!(!dihedral8().is_commutative());
        assert!(!quaternion8().is_commutative());
        let q8 = quaternion8();
        assert_eq!((0..8).filter(|&x| q8.mul(x, x) == 0).count(), 2);
        let d8 = dihedral8();
        assert_eq!((0..8).filter(|&x| d8.mul(x, x) == 0).count(), 6);
    }

    #[test]
    fn corpus_is_large_and_named() {
        let c = corpus();
        assert!(c.len() >= 270, "{}", c.len());
        assert!(c.iter().all(|q| q.name().is_some()));
    }

    #[test]
    fn table2_naming_round_trip() {
        let q = table2();
        let at = |s: &str| TABLE2_NAMES.iter().position(|&t| t == s).unwrap();
        assert_eq!(q.mul(at("a"), at("b")), at("ab"));
        assert_eq!(q.mul(at("b"), at("a")), at("uab"));
        assert_eq!(q.mul(at("ab"), at("ab")), at("v"));
    }
}

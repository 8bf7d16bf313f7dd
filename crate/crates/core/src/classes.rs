//! Element-level predicates (power-associative, WIP, Moufang, pseudoMoufang,
//! extra, flexible) and the loop-level class flags built from them.

use std::collections::HashMap;

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{LoopError, Result};
use crate::perm::Perm;
use crate::structure::{self, close};
use crate::table::LoopTable;

/// `z·(y·x) = ((z·y)/z)·(z·x)` for all `x, y, z`.
pub fn is_lcc(q: &LoopTable) -> bool {
    lcc_counterexample(q).is_none()
}

pub fn lcc_counterexample(q: &LoopTable) -> Option<[usize; 3]> {
    let n = q.order();
    for z in 0..n {
        for y in 0..n {
            let zy_z = q.rdiv(q.mul(z, y), z);
            for x in 0..n {
                if q.mul(z, q.mul(y, x)) != q.mul(zy_z, q.mul(z, x)) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// `(x·y)·z = (x·z)·(z\(y·z))` for all `x, y, z`.
pub fn is_rcc(q: &LoopTable) -> bool {
    rcc_counterexample(q).is_none()
}

pub fn rcc_counterexample(q: &LoopTable) -> Option<[usize; 3]> {
    let n = q.order();
    for z in 0..n {
        for y in 0..n {
            let yt = q.ldiv(z, q.mul(y, z));
            for x in 0..n {
                if q.mul(q.mul(x, y), z) != q.mul(q.mul(x, z), yt) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

pub fn is_cc(q: &LoopTable) -> bool {
    is_lcc(q) && is_rcc(q)
}

/// `c·(x·c)^ρ = x^ρ` for all `x`.
pub fn is_wip_elem(q: &LoopTable, c: usize) -> bool {
    (0..q.order()).all(|x| q.mul(c, q.rho(q.mul(x, c))) == q.rho(x))
}

/// `c(xy·c) = cx·yc` and `(c·xy)c = cx·yc` for all `x, y`.
pub fn is_moufang_elem_raw(q: &LoopTable, c: usize) -> bool {
    let n = q.order();
    (0..n).all(|x| {
        let cx = q.mul(c, x);
        (0..n).all(|y| {
            let xy = q.mul(x, y);
            let rhs = q.mul(cx, q.mul(y, c));
            q.mul(c, q.mul(xy, c)) == rhs && q.mul(q.mul(c, xy), c) == rhs
        })
    })
}

/// `z(cx·z) = zc·xz` and `(z·xc)z = zx·cz` for all `z, x`.
pub fn is_pseudomoufang_elem_raw(q: &LoopTable, c: usize) -> bool {
    let n = q.order();
    (0..n).all(|z| {
        let (zc, cz) = (q.mul(z, c), q.mul(c, z));
        (0..n).all(|x| {
            let xz = q.mul(x, z);
            let zx = q.mul(z, x);
            q.mul(z, q.mul(q.mul(c, x), z)) == q.mul(zc, xz)
                && q.mul(q.mul(z, q.mul(x, c)), z) == q.mul(zx, cz)
        })
    })
}

/// `c(x·yc) = (cx·y)c` for all `x, y`.
pub fn is_extra_elem_raw(q: &LoopTable, c: usize) -> bool {
    let n = q.order();
    (0..n).all(|x| {
        let cx = q.mul(c, x);
        (0..n).all(|y| q.mul(c, q.mul(x, q.mul(y, c))) == q.mul(q.mul(cx, y), c))
    })
}

/// The automorphic inverse property `(xy)^-1 = x^-1 y^-1`; needs a
/// power-associative loop so the inverse is two-sided.
pub fn has_aip(q: &LoopTable) -> Result<bool> {
    if !q.is_power_associative() {
        return Err(LoopError::LoopNotPowerAssociative);
    }
    let n = q.order();
    Ok((0..n).all(|x| (0..n).all(|y| q.rho(q.mul(x, y)) == q.mul(q.rho(x), q.rho(y)))))
}

/// Cached facts about one loop, so that element predicates can use the
/// conjugacy-closed shortcuts when they apply.
pub struct ClassContext<'a> {
    q: &'a LoopTable,
    cc: bool,
    nucleus: ElemSet,
    e_maps: Vec<Perm>,
}

impl<'a> ClassContext<'a> {
    pub fn new(q: &'a LoopTable) -> Self {
        Self::with_facts(q, is_cc(q), *structure::nucleus(q).elements())
    }

    pub fn with_facts(q: &'a LoopTable, cc: bool, nucleus: ElemSet) -> Self {
        ClassContext {
            q,
            cc,
            nucleus,
            e_maps: (0..q.order()).map(|x| q.e(x)).collect(),
        }
    }

    pub fn table(&self) -> &LoopTable {
        self.q
    }

    pub fn is_cc(&self) -> bool {
        self.cc
    }

    pub fn nucleus(&self) -> &ElemSet {
        &self.nucleus
    }

    pub fn e(&self, x: usize) -> &Perm {
        &self.e_maps[x]
    }

    /// On CC loops `c·c² = c²·c`; otherwise `<c>` is closed and checked directly.
    pub fn is_pa(&self, c: usize) -> bool {
        if self.cc {
            let q = self.q;
            let c2 = q.mul(c, c);
            q.mul(c, c2) == q.mul(c2, c)
        } else {
            self.q.is_pa_elem(c)
        }
    }

    pub fn is_wip(&self, c: usize) -> bool {
        is_wip_elem(self.q, c)
    }

    /// On CC loops: `E_c` is the identity.
    pub fn is_moufang(&self, c: usize) -> bool {
        if self.cc {
            self.e_maps[c].is_identity()
        } else {
            is_moufang_elem_raw(self.q, c)
        }
    }

    /// On CC loops: `c` is fixed by every `E_x`.
    pub fn is_pseudomoufang(&self, c: usize) -> bool {
        if self.cc {
            self.e_maps.iter().all(|e| e.fixes(c))
        } else {
            is_pseudomoufang_elem_raw(self.q, c)
        }
    }

    pub fn is_extra(&self, c: usize) -> bool {
        is_extra_elem_raw(self.q, c)
    }

    /// Moufang with nuclear square; agrees with [`Self::is_extra`] on CC loops.
    pub fn is_extra_via_square(&self, c: usize) -> bool {
        self.is_moufang(c) && self.nucleus.contains(self.q.mul(c, c))
    }

    pub fn is_square_nuclear(&self, c: usize) -> bool {
        self.nucleus.contains(self.q.mul(c, c))
    }

    pub fn is_flexible(&self, c: usize) -> bool {
        let q = self.q;
        (0..q.order()).all(|b| q.mul(c, q.mul(b, c)) == q.mul(q.mul(c, b), c))
    }

    /// Evaluates the nine flexibility-type conditions for `a` against every
    /// `b` and reports the first `b` where they disagree.
    pub fn eqns_equiv_check(&self, a: usize) -> Result<bool> {
        let q = self.q;
        let n = q.order();
        let mut all = true;
        for b in 0..n {
            let vals = nine_conditions(q, a, b);
            if let Some(k) = vals.iter().position(|&v| v != vals[0]) {
                return Err(LoopError::Inconsistent {
                    elem: a,
                    left: NINE_NAMES[0],
                    right: NINE_NAMES[k],
                    witness: vec![a, b],
                });
            }
            all &= vals[0];
        }
        Ok(all)
    }

    pub fn set_of(&self, pred: impl Fn(usize) -> bool) -> ElemSet {
        (0..self.q.order()).filter(|&c| pred(c)).collect()
    }
}

pub const NINE_NAMES: [&str; 9] = ["flex", "lalt", "ralt", "lip", "rip", "mfg1", "mfg2", "f1", "f2"];

/// The nine conditions for a fixed pair `(a, b)`, in [`NINE_NAMES`] order.
pub fn nine_conditions(q: &LoopTable, a: usize, b: usize) -> [bool; 9] {
    let n = q.order();
    let (ab, ba, aa) = (q.mul(a, b), q.mul(b, a), q.mul(a, a));
    [
        q.mul(a, ba) == q.mul(ab, a),
        q.mul(a, ab) == q.mul(aa, b),
        q.mul(ba, a) == q.mul(b, aa),
        q.mul(q.lam(a), ab) == b,
        q.mul(ba, q.rho(a)) == b,
        (0..n).all(|x| q.mul(ab, q.mul(x, a)) == q.mul(a, q.mul(q.mul(b, x), a))),
        (0..n).all(|x| q.mul(q.mul(a, x), ba) == q.mul(q.mul(a, q.mul(x, b)), a)),
        (0..n).all(|x| q.mul(ab, q.mul(a, x)) == q.mul(a, q.mul(ba, x))),
        (0..n).all(|x| q.mul(q.mul(x, a), ba) == q.mul(q.mul(x, ab), a)),
    ]
}

/// Whether every `<a, b>` is a group. Subloops are cached by generated set.
pub fn is_diassociative(q: &LoopTable) -> bool {
    let n = q.order();
    let mut cache: HashMap<ElemSet, bool> = HashMap::new();
    for a in 0..n {
        for b in a..n {
            let s = close(q, &[a, b].into_iter().collect());
            let ok = *cache.entry(s).or_insert_with(|| is_associative_on(q, &s));
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn is_associative_on(q: &LoopTable, s: &ElemSet) -> bool {
    let v = s.to_vec();
    v.iter()
        .all(|&x| v.iter().all(|&y| v.iter().all(|&z| q.associator(x, y, z) == 0)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopFlags {
    pub is_lcc: bool,
    pub is_rcc: bool,
    pub is_cc: bool,
    pub is_pa: bool,
    pub is_wip_loop: bool,
    pub is_moufang_loop: bool,
    pub is_extra_loop: bool,
    pub is_flexible_loop: bool,
    pub is_diassociative: bool,
    /// `None` when the loop is not power-associative.
    pub has_aip: Option<bool>,
    pub is_group: bool,
    pub is_abelian_group: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementClassReport {
    pub pa_set: Vec<usize>,
    pub wip_set: Vec<usize>,
    pub moufang_set: Vec<usize>,
    pub pseudo_set: Vec<usize>,
    pub extra_set: Vec<usize>,
    pub square_nuclear_set: Vec<usize>,
    pub pa_set_is_subloop: bool,
    pub moufang_set_is_subloop: bool,
    pub flags: LoopFlags,
}

pub fn classify_elements(q: &LoopTable) -> ElementClassReport {
    let lcc = is_lcc(q);
    let rcc = is_rcc(q);
    let ctx = ClassContext::with_facts(q, lcc && rcc, *structure::nucleus(q).elements());
    classify_with(&ctx, lcc, rcc)
}

pub fn classify_with(ctx: &ClassContext<'_>, lcc: bool, rcc: bool) -> ElementClassReport {
    let q = ctx.table();
    let n = q.order();
    let pa = ctx.set_of(|c| ctx.is_pa(c));
    let wip = ctx.set_of(|c| ctx.is_wip(c));
    let mfg = ctx.set_of(|c| ctx.is_moufang(c));
    let psm = ctx.set_of(|c| ctx.is_pseudomoufang(c));
    let ex = ctx.set_of(|c| ctx.is_extra(c));
    let sq = ctx.set_of(|c| ctx.is_square_nuclear(c));
    let is_group = ctx.nucleus().len() == n;
    let is_pa = pa.len() == n;
    let flags = LoopFlags {
        is_lcc: lcc,
        is_rcc: rcc,
        is_cc: lcc && rcc,
        is_pa,
        is_wip_loop: wip.len() == n,
        is_moufang_loop: mfg.len() == n,
        is_extra_loop: ex.len() == n,
        is_flexible_loop: (0..n).all(|c| ctx.is_flexible(c)),
        is_diassociative: is_group || is_diassociative(q),
        has_aip: if q.is_power_associative() { has_aip(q).ok() } else { None },
        is_group,
        is_abelian_group: is_group && q.is_commutative(),
    };
    ElementClassReport {
        pa_set_is_subloop: structure::is_subloop(q, &pa),
        moufang_set_is_subloop: structure::is_subloop(q, &mfg),
        pa_set: pa.to_vec(),
        wip_set: wip.to_vec(),
        moufang_set: mfg.to_vec(),
        pseudo_set: psm.to_vec(),
        extra_set: ex.to_vec(),
        square_nuclear_set: sq.to_vec(),
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn table1_element_classes() {
        let q = fixtures::table1();
        let r = classify_elements(&q);
        assert!(r.flags.is_cc);
        assert_eq!(r.pa_set, (0..12).collect::<Vec<_>>());
        assert!(!r.pa_set_is_subloop);
        assert_eq!(r.wip_set, vec![0, 1, 2, 3]);
        assert_eq!(r.moufang_set, (0..8).collect::<Vec<_>>());
        assert_eq!(r.extra_set, (0..8).collect::<Vec<_>>());
        assert_eq!(r.pseudo_set, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert!(r.flags.has_aip.is_none());
    }

    #[test]
    fn element_four_in_table1() {
        let q = fixtures::table1();
        let ctx = ClassContext::new(&q);
        assert!(ctx.is_extra(4) && ctx.is_pa(4) && !ctx.is_wip(4));
        assert!(!ctx.is_pa(12));
        assert!(ctx.is_pa(0) && ctx.is_moufang(0) && ctx.is_pseudomoufang(0) && ctx.is_extra(0));
        assert_eq!(ctx.eqns_equiv_check(4), Ok(true));
        assert_eq!(ctx.eqns_equiv_check(0), Ok(true));
        for c in 0..16 {
            assert!(ctx.eqns_equiv_check(c).is_ok());
        }
    }

    #[test]
    fn groups_satisfy_everything() {
        for g in [fixtures::cyclic(6), fixtures::quaternion8(), fixtures::symmetric3()] {
            let r = classify_elements(&g);
            let all: Vec<usize> = (0..g.order()).collect();
            assert!(r.flags.is_cc && r.flags.is_group && r.flags.is_extra_loop);
            assert_eq!(r.wip_set, all);
            assert_eq!(r.extra_set, all);
            assert_eq!(r.square_nuclear_set, all);
        }
        let z6 = classify_elements(&fixtures::cyclic(6));
        assert_eq!(z6.flags.has_aip, Some(true));
        assert!(z6.flags.is_abelian_group);
    }

    #[test]
    fn order5_nonassociative_loop_is_not_cc() {
        let q = LoopTable::from_rows(&[
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ])
        .unwrap();
        assert!(!q.is_associative());
        assert!(!is_cc(&q));
    }

    #[test]
    fn aip_on_family27() {
        let yes = fixtures::family27(1, 0, 1, 0, 1);
        let no = fixtures::family27(0, 0, 0, 0, 1);
        assert_eq!(has_aip(&yes), Ok(true));
        assert_eq!(has_aip(&no), Ok(false));
        assert_eq!(has_aip(&fixtures::table1()), Err(LoopError::LoopNotPowerAssociative));
        let ctx = ClassContext::new(&yes);
        let a = 9;
        assert!(ctx.eqns_equiv_check(a).is_ok());
    }

    #[test]
    fn q11_is_not_diassociative() {
        let q = fixtures::family16(1, 1);
        let r = classify_elements(&q);
        assert!(r.flags.is_cc && r.flags.is_pa);
        assert!(!r.flags.is_diassociative);
        let (a, b) = (8, 4);
        assert_ne!(q.mul(q.mul(a, a), b), q.mul(a, q.mul(a, b)));
    }

    #[test]
    fn fast_paths_match_raw_on_cc_fixtures() {
        for q in [fixtures::table1(), fixtures::table2(), fixtures::family16(0, 0), fixtures::family27(2, 1, 0, 1, 2)] {
            let ctx = ClassContext::new(&q);
            assert!(ctx.is_cc());
            for c in 0..q.order() {
                assert_eq!(ctx.is_moufang(c), is_moufang_elem_raw(&q, c));
                assert_eq!(ctx.is_pseudomoufang(c), is_pseudomoufang_elem_raw(&q, c));
                assert_eq!(ctx.is_extra(c), ctx.is_extra_via_square(c));
                assert_eq!(ctx.is_pa(c), q.is_pa_elem(c));
            }
        }
    }
}

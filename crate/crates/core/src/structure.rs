//! Subloops, nuclei, normality, quotients, and multiplication groups.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{LoopError, Result};
use crate::perm::{lcm, Perm};
use crate::table::LoopTable;

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A subloop of a parent loop of the recorded order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subloop {
    elements: ElemSet,
    parent_order: usize,
}

impl Subloop {
    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements.to_vec()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.contains(x)
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.parent_order
    }
}

/// Closure of `set` under multiplication. In a finite loop a nonempty
/// product-closed subset containing 0 is already a subloop.
pub fn close(q: &LoopTable, set: &ElemSet) -> ElemSet {
    let mut out = *set;
    out.insert(0);
    let mut frontier: Vec<usize> = out.to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let current: Vec<usize> = out.to_vec();
        for &x in &frontier {
            for &y in &current {
                for z in [q.mul(x, y), q.mul(y, x)] {
                    if out.insert(z) {
                        next.push(z);
                    }
                }
            }
        }
        // pairs among new elements are covered on the next round
        frontier = next;
    }
    out
}

pub fn generate_subloop(q: &LoopTable, gens: &[usize]) -> Subloop {
    let set: ElemSet = gens.iter().copied().collect();
    Subloop {
        elements: close(q, &set),
        parent_order: q.order(),
    }
}

/// Wraps a set already known to be a subloop (checked in debug builds).
pub fn subloop_from_set(q: &LoopTable, set: ElemSet) -> Subloop {
    debug_assert!(is_subloop(q, &set));
    Subloop {
        elements: set,
        parent_order: q.order(),
    }
}

pub fn is_subloop(q: &LoopTable, set: &ElemSet) -> bool {
    set.contains(0) && set.iter().all(|x| set.iter().all(|y| set.contains(q.mul(x, y))))
}

pub fn left_nucleus(q: &LoopTable) -> ElemSet {
    let n = q.order();
    (0..n)
        .filter(|&a| (0..n).all(|x| (0..n).all(|y| q.associator(a, x, y) == 0)))
        .collect()
}

pub fn middle_nucleus(q: &LoopTable) -> ElemSet {
    let n = q.order();
    (0..n)
        .filter(|&a| (0..n).all(|x| (0..n).all(|y| q.associator(x, a, y) == 0)))
        .collect()
}

pub fn right_nucleus(q: &LoopTable) -> ElemSet {
    let n = q.order();
    (0..n)
        .filter(|&a| (0..n).all(|x| (0..n).all(|y| q.associator(x, y, a) == 0)))
        .collect()
}

pub fn nucleus(q: &LoopTable) -> Subloop {
    let set = left_nucleus(q)
        .intersection(&middle_nucleus(q))
        .intersection(&right_nucleus(q));
    subloop_from_set(q, set)
}

/// Nuclear elements commuting with everything.
pub fn center(q: &LoopTable) -> Subloop {
    center_within(q, nucleus(q).elements())
}

pub fn center_within(q: &LoopTable, nuc: &ElemSet) -> Subloop {
    let n = q.order();
    let set = nuc
        .iter()
        .filter(|&a| (0..n).all(|x| q.mul(a, x) == q.mul(x, a)))
        .collect();
    subloop_from_set(q, set)
}

pub fn associator_subloop(q: &LoopTable) -> Subloop {
    let n = q.order();
    let mut set = ElemSet::singleton(0);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                set.insert(q.associator(x, y, z));
            }
        }
    }
    Subloop {
        elements: close(q, &set),
        parent_order: n,
    }
}

/// Invariance under every `T_x`, `R(x,y)` and `L(x,y)`, which generate `Inn(Q)`.
pub fn is_normal(q: &LoopTable, h: &ElemSet) -> bool {
    let n = q.order();
    let t_ok = (0..n).all(|x| h.iter().all(|e| h.contains(q.ldiv(x, q.mul(e, x)))));
    t_ok && (0..n).into_par_iter().all(|x| {
        (0..n).all(|y| {
            let xy = q.mul(x, y);
            let yx = q.mul(y, x);
            h.iter().all(|z| {
                h.contains(q.rdiv(q.mul(q.mul(z, x), y), xy))
                    && h.contains(q.ldiv(yx, q.mul(y, q.mul(x, z))))
            })
        })
    })
}

/// `coset[x]` is the index of the coset `xH`; cosets are numbered by their
/// minimal element, so the identity coset is 0.
pub fn coset_labels(q: &LoopTable, h: &ElemSet) -> Vec<usize> {
    let n = q.order();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if label[x] == usize::MAX {
            for e in h.iter() {
                label[q.mul(x, e)] = next;
            }
            next += 1;
        }
    }
    label
}

/// `Q/H` for a normal subloop `H`.
pub fn quotient(q: &LoopTable, h: &ElemSet) -> Result<LoopTable> {
    if !is_subloop(q, h) || !is_normal(q, h) {
        return Err(LoopError::NotNormal);
    }
    let label = coset_labels(q, h);
    let m = q.order() / h.len();
    let mut reps = vec![usize::MAX; m];
    for (x, &c) in label.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = x;
        }
    }
    LoopTable::from_fn(m, |i, j| label[q.mul(reps[i], reps[j])])
}

/// Least common multiple of element orders, when every element is power-associative.
pub fn exponent(q: &LoopTable) -> Option<u64> {
    if !q.is_power_associative() {
        return None;
    }
    Some((0..q.order()).fold(1, |acc, x| lcm(acc, q.elem_order(x) as u64)))
}

/// All elements of the permutation group generated by `gens`.
pub fn group_closure(gens: &[Perm], degree: usize, cap: usize) -> Result<HashSet<Perm>> {
    let gens: Vec<Perm> = {
        let mut seen = HashSet::new();
        gens.iter()
            .filter(|g| !g.is_identity() && seen.insert((*g).clone()))
            .cloned()
            .collect()
    };
    let id = Perm::identity(degree);
    let mut all = HashSet::new();
    all.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in &gens {
            let h = g.then(s);
            if !all.contains(&h) {
                if all.len() >= cap {
                    return Err(LoopError::CapExceeded {
                        cap,
                        partial: all.len(),
                    });
                }
                all.insert(h.clone());
                frontier.push(h);
            }
        }
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub mlt_order: usize,
    pub inn_order: usize,
    pub rinn_order: usize,
    pub rinn_equals_linn: bool,
    pub rinn_abelian: bool,
}

pub fn mlt_group(q: &LoopTable, cap: usize) -> Result<HashSet<Perm>> {
    let gens: Vec<Perm> = (0..q.order()).flat_map(|x| [q.r(x), q.l(x)]).collect();
    group_closure(&gens, q.order(), cap)
}

pub fn inn_group(q: &LoopTable, cap: usize) -> Result<HashSet<Perm>> {
    Ok(mlt_group(q, cap)?.into_iter().filter(|p| p.fixes(0)).collect())
}

pub fn rinn_generators(q: &LoopTable) -> Vec<Perm> {
    let n = q.order();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| q.rinner(x, y)).collect()
}

pub fn linn_generators(q: &LoopTable) -> Vec<Perm> {
    let n = q.order();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| q.linner(x, y)).collect()
}

pub fn group_summary(q: &LoopTable, cap: usize) -> Result<GroupSummary> {
    let mlt = mlt_group(q, cap)?;
    let inn_order = mlt.iter().filter(|p| p.fixes(0)).count();
    let rgens = rinn_generators(q);
    let rinn = group_closure(&rgens, q.order(), cap)?;
    let linn = group_closure(&linn_generators(q), q.order(), cap)?;
    let mut distinct: Vec<&Perm> = rgens.iter().collect();
    distinct.sort();
    distinct.dedup();
    let rinn_abelian = distinct
        .iter()
        .all(|a| distinct.iter().all(|b| a.then(b) == b.then(a)));
    Ok(GroupSummary {
        mlt_order: mlt.len(),
        inn_order,
        rinn_order: rinn.len(),
        rinn_equals_linn: rinn == linn,
        rinn_abelian,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub nucleus: Vec<usize>,
    pub left_nucleus: Vec<usize>,
    pub middle_nucleus: Vec<usize>,
    pub right_nucleus: Vec<usize>,
    pub center: Vec<usize>,
    pub associator_subloop: Vec<usize>,
    pub nucleus_normal: bool,
    /// Rows of `Q/N` when the nucleus is normal.
    pub quotient_by_nucleus: Option<Vec<Vec<usize>>>,
    pub quotient_is_abelian_group: Option<bool>,
    pub exponent_of_quotient: Option<u64>,
    pub groups: Option<GroupSummary>,
}

pub fn structure_report(q: &LoopTable, cap: usize) -> StructureReport {
    let ln = left_nucleus(q);
    let mn = middle_nucleus(q);
    let rn = right_nucleus(q);
    let nuc = ln.intersection(&mn).intersection(&rn);
    let normal = is_normal(q, &nuc);
    let quot = if normal { quotient(q, &nuc).ok() } else { None };
    StructureReport {
        order: q.order(),
        nucleus: nuc.to_vec(),
        left_nucleus: ln.to_vec(),
        middle_nucleus: mn.to_vec(),
        right_nucleus: rn.to_vec(),
        center: center_within(q, &nuc).to_vec(),
        associator_subloop: associator_subloop(q).to_vec(),
        nucleus_normal: normal,
        quotient_is_abelian_group: quot.as_ref().map(|t| t.is_associative() && t.is_commutative()),
        exponent_of_quotient: quot.as_ref().and_then(exponent),
        quotient_by_nucleus: quot.map(|t| t.rows()),
        groups: group_summary(q, cap).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn table1_structure() {
        let q = fixtures::table1();
        assert_eq!(nucleus(&q).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(center(&q).to_vec(), vec![0, 1]);
        assert_eq!(generate_subloop(&q, &[4]).to_vec(), vec![0, 4]);
        assert_eq!(generate_subloop(&q, &[0]).to_vec(), vec![0]);
        let n = nucleus(&q);
        assert!(is_normal(&q, n.elements()));
        let qn = quotient(&q, n.elements()).unwrap();
        assert_eq!(qn.order(), 4);
        assert!(qn.is_associative() && qn.is_commutative());
        assert!((0..4).all(|x| qn.mul(x, x) == 0));
        // 12·12 = 3 lands in N
        assert_eq!(q.mul(12, 12), 3);
    }

    #[test]
    fn groups_have_full_nucleus() {
        for g in [fixtures::cyclic(6), fixtures::dihedral8(), fixtures::quaternion8()] {
            assert!(nucleus(&g).is_whole());
            assert_eq!(associator_subloop(&g).to_vec(), vec![0]);
        }
        let z = fixtures::cyclic(6);
        assert!(center(&z).is_whole());
        let s = group_summary(&z, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((s.mlt_order, s.inn_order), (6, 1));
    }

    #[test]
    fn family_structures() {
        let q = fixtures::family27(0, 0, 0, 0, 1);
        assert_eq!(generate_subloop(&q, &[9, 3]).len(), 27);
        let n = nucleus(&q);
        assert_eq!(n.len(), 3);
        assert_eq!(associator_subloop(&q).elements(), n.elements());
        let qn = quotient(&q, n.elements()).unwrap();
        assert!(qn.is_associative() && qn.is_commutative());
        assert!((0..9).all(|x| qn.elem_order(x) <= 3));

        let q00 = fixtures::family16(0, 0);
        let a = associator_subloop(&q00);
        assert_eq!(a.to_vec(), vec![0, 2]);
        assert_eq!(center(&fixtures::table2()).len(), 2);
    }

    #[test]
    fn quotient_by_whole_is_trivial_and_non_normal_is_rejected() {
        let q = fixtures::table1();
        let t = quotient(&q, &ElemSet::full(16)).unwrap();
        assert_eq!(t.order(), 1);
        let d8 = fixtures::dihedral8();
        // <s> = {0, 4} is not normal in D8
        assert_eq!(quotient(&d8, &[0, 4].into_iter().collect()), Err(LoopError::NotNormal));
    }

    #[test]
    fn group_cap_is_reported() {
        let q = fixtures::table1();
        match mlt_group(&q, 10) {
            Err(LoopError::CapExceeded { cap: 10, partial }) => assert!(partial >= 10),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn inner_groups_of_cc_fixtures() {
        for q in [fixtures::table1(), fixtures::table2(), fixtures::family27(1, 0, 1, 0, 1)] {
            let s = group_summary(&q, DEFAULT_GROUP_CAP).unwrap();
            assert!(s.rinn_equals_linn);
            assert!(s.rinn_abelian);
            assert_eq!(s.mlt_order, q.order() * s.inn_order);
        }
    }
}

//! Isomorphism testing between loops and isomorph-free deduplication.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::classes::ClassContext;
use crate::elemset::ElemSet;
use crate::perm::Perm;
use crate::structure::{self, close};
use crate::table::LoopTable;

/// Per-element data preserved by every isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ElemFingerprint {
    pub cyclic_size: u16,
    pub commuting: u16,
    pub square_cyclic_size: u16,
    pub square_roots: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IsoInvariantVector {
    pub n: usize,
    pub fingerprints: Vec<ElemFingerprint>,
    pub nucleus: usize,
    pub center: usize,
    pub involutions: usize,
    /// `(|W|, |M|, |P|, |Ex|)`
    pub class_sizes: [usize; 4],
}

fn element_fingerprints(q: &LoopTable) -> Vec<ElemFingerprint> {
    let n = q.order();
    let gen_size: Vec<u16> = (0..n)
        .map(|x| close(q, &ElemSet::singleton(x)).len() as u16)
        .collect();
    let mut roots = vec![0u16; n];
    for x in 0..n {
        roots[q.mul(x, x)] += 1;
    }
    (0..n)
        .map(|x| ElemFingerprint {
            cyclic_size: gen_size[x],
            commuting: (0..n).filter(|&y| q.mul(x, y) == q.mul(y, x)).count() as u16,
            square_cyclic_size: gen_size[q.mul(x, x)],
            square_roots: roots[x],
        })
        .collect()
}

pub fn invariants(q: &LoopTable) -> IsoInvariantVector {
    let n = q.order();
    let mut fingerprints = element_fingerprints(q);
    fingerprints.sort();
    let ctx = ClassContext::new(q);
    let count = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&c| f(c)).count();
    IsoInvariantVector {
        n,
        fingerprints,
        nucleus: ctx.nucleus().len(),
        center: structure::center(q).len(),
        involutions: (0..n).filter(|&x| q.mul(x, x) == 0).count(),
        class_sizes: [
            count(&|c| ctx.is_wip(c)),
            count(&|c| ctx.is_moufang(c)),
            count(&|c| ctx.is_pseudomoufang(c)),
            count(&|c| ctx.is_extra(c)),
        ],
    }
}

/// Greedy generating set: repeatedly adds the element whose closure with the
/// current set is largest, lowest index on ties.
pub fn greedy_generators(q: &LoopTable) -> Vec<usize> {
    let n = q.order();
    let mut gens = Vec::new();
    let mut span = ElemSet::singleton(0);
    while span.len() < n {
        let mut best = (0, usize::MAX, span);
        for x in 0..n {
            if span.contains(x) {
                continue;
            }
            let mut s = span;
            s.insert(x);
            let s = close(q, &s);
            if s.len() > best.0 {
                best = (s.len(), x, s);
            }
        }
        gens.push(best.1);
        span = best.2;
    }
    gens
}

struct PartialMap {
    fwd: Vec<Option<u8>>,
    used: Vec<bool>,
    known: Vec<usize>,
}

impl PartialMap {
    fn new(n: usize) -> Self {
        let mut m = PartialMap {
            fwd: vec![None; n],
            used: vec![false; n],
            known: Vec::with_capacity(n),
        };
        m.fwd[0] = Some(0);
        m.used[0] = true;
        m.known.push(0);
        m
    }

    fn set(&mut self, x: usize, y: usize) -> bool {
        match self.fwd[x] {
            Some(v) => v as usize == y,
            None if self.used[y] => false,
            None => {
                self.fwd[x] = Some(y as u8);
                self.used[y] = true;
                self.known.push(x);
                true
            }
        }
    }
}

/// Assigns `x -> y`, then closes the map under products of known elements.
fn assign_and_close(
    q1: &LoopTable,
    q2: &LoopTable,
    fp1: &[ElemFingerprint],
    fp2: &[ElemFingerprint],
    map: &mut PartialMap,
    x: usize,
    y: usize,
) -> bool {
    let start = map.known.len();
    if !map.set(x, y) {
        return false;
    }
    let mut i = start;
    while i < map.known.len() {
        let a = map.known[i];
        let fa = map.fwd[a].unwrap() as usize;
        let mut j = 0;
        while j <= i {
            let b = map.known[j];
            let fb = map.fwd[b].unwrap() as usize;
            for (p, img) in [(q1.mul(a, b), q2.mul(fa, fb)), (q1.mul(b, a), q2.mul(fb, fa))] {
                if fp1[p] != fp2[img] || !map.set(p, img) {
                    return false;
                }
            }
            j += 1;
        }
        i += 1;
    }
    true
}

/// Searches for an isomorphism `Q1 -> Q2` determined by the images of `gens1`,
/// which must generate `Q1`.
pub fn extend_generator_map(q1: &LoopTable, gens1: &[usize], q2: &LoopTable) -> Option<Perm> {
    if q1.order() != q2.order() {
        return None;
    }
    let fp1 = element_fingerprints(q1);
    let fp2 = element_fingerprints(q2);
    let map = PartialMap::new(q1.order());
    let found = backtrack(q1, q2, &fp1, &fp2, gens1, map)?;
    let images: Vec<usize> = found.fwd.iter().map(|v| v.map(usize::from)).collect::<Option<_>>()?;
    Perm::from_images(images).ok()
}

fn backtrack(
    q1: &LoopTable,
    q2: &LoopTable,
    fp1: &[ElemFingerprint],
    fp2: &[ElemFingerprint],
    gens: &[usize],
    map: PartialMap,
) -> Option<PartialMap> {
    let Some((&g, rest)) = gens.split_first() else {
        return (map.known.len() == q1.order()).then_some(map);
    };
    if let Some(img) = map.fwd[g] {
        let mut m = map;
        return assign_and_close(q1, q2, fp1, fp2, &mut m, g, img as usize)
            .then(|| backtrack(q1, q2, fp1, fp2, rest, m))
            .flatten();
    }
    for y in 0..q2.order() {
        if map.used[y] || fp2[y] != fp1[g] {
            continue;
        }
        let mut m = PartialMap {
            fwd: map.fwd.clone(),
            used: map.used.clone(),
            known: map.known.clone(),
        };
        if assign_and_close(q1, q2, fp1, fp2, &mut m, g, y) {
            if let Some(done) = backtrack(q1, q2, fp1, fp2, rest, m) {
                return Some(done);
            }
        }
    }
    None
}

/// A bijection `φ` with `φ(x·y) = φ(x)·φ(y)`, if one exists.
pub fn are_isomorphic(q1: &LoopTable, q2: &LoopTable) -> Option<Perm> {
    if q1.order() != q2.order() || invariants(q1) != invariants(q2) {
        return None;
    }
    if q1.cells() == q2.cells() {
        return Some(Perm::identity(q1.order()));
    }
    extend_generator_map(q1, &greedy_generators(q1), q2)
}

pub fn is_isomorphism(q1: &LoopTable, q2: &LoopTable, p: &Perm) -> bool {
    let n = q1.order();
    p.len() == n
        && q2.order() == n
        && (0..n).all(|x| (0..n).all(|y| p.apply(q1.mul(x, y)) == q2.mul(p.apply(x), p.apply(y))))
}

/// The copy of `Q` in which `x` is renamed `p(x)`.
pub fn relabel(q: &LoopTable, p: &Perm) -> LoopTable {
    let n = q.order();
    let inv = p.inverse();
    let mut out = LoopTable::from_fn(n, |x, y| p.apply(q.mul(inv.apply(x), inv.apply(y))))
        .expect("relabeling preserves the loop axioms");
    out.set_name(q.name().map(str::to_string));
    out
}

/// Partitions `loops` into isomorphism classes. Each class lists member
/// indices ascending; classes are ordered by their representative table.
pub fn iso_classes(loops: &[LoopTable]) -> Vec<Vec<usize>> {
    let invs: Vec<IsoInvariantVector> = loops.par_iter().map(invariants).collect();
    let mut buckets: BTreeMap<&IsoInvariantVector, Vec<usize>> = BTreeMap::new();
    for (i, v) in invs.iter().enumerate() {
        buckets.entry(v).or_default().push(i);
    }
    let bucket_list: Vec<Vec<usize>> = buckets.into_values().collect();
    let mut classes: Vec<Vec<usize>> = bucket_list
        .par_iter()
        .flat_map_iter(|members| split_bucket(loops, members))
        .collect();
    classes.sort_by(|a, b| loops[representative(loops, a)].cmp(&loops[representative(loops, b)]));
    classes
}

fn split_bucket(loops: &[LoopTable], members: &[usize]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in members {
        let q = &loops[i];
        let slot = classes.iter().position(|c| {
            let r = &loops[c[0]];
            r.cells() == q.cells() || extend_generator_map(r, &greedy_generators(r), q).is_some()
        });
        match slot {
            Some(k) => classes[k].push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Index of the lexicographically smallest table in a class.
pub fn representative(loops: &[LoopTable], class: &[usize]) -> usize {
    *class
        .iter()
        .min_by(|&&a, &&b| loops[a].cmp(&loops[b]).then(a.cmp(&b)))
        .expect("nonempty class")
}

/// One representative per isomorphism class, sorted by table.
pub fn dedupe(loops: &[LoopTable]) -> Vec<LoopTable> {
    iso_classes(loops)
        .iter()
        .map(|c| loops[representative(loops, c)].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{self, Params27};
    use crate::fixtures;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn random_perm_fixing_zero(n: usize, seed: u64) -> Perm {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut rest: Vec<usize> = (1..n).collect();
        rest.shuffle(&mut rng);
        let mut images = vec![0];
        images.extend(rest);
        Perm::from_images(images).unwrap()
    }

    #[test]
    fn identity_witness() {
        let q = fixtures::table1();
        let w = are_isomorphic(&q, &q).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn q16_distinctions() {
        assert!(are_isomorphic(&fixtures::family16(0, 0), &fixtures::family16(1, 1)).is_none());
        let w = are_isomorphic(&fixtures::family16(2, 3), &fixtures::family16(0, 0)).unwrap();
        assert!(is_isomorphism(&fixtures::family16(2, 3), &fixtures::family16(0, 0), &w));
    }

    #[test]
    fn q16_family_has_two_classes() {
        let all: Vec<LoopTable> = (0..4)
            .flat_map(|r| (0..4).map(move |s| fixtures::family16(r, s)))
            .collect();
        assert_eq!(dedupe(&all).len(), 2);
    }

    #[test]
    fn family27_has_eight_nonassociative_classes() {
        let all: Vec<LoopTable> = Params27::all()
            .map(extension::family27)
            .filter(|q| !q.is_associative())
            .collect();
        assert_eq!(dedupe(&all).len(), 8);
    }

    #[test]
    fn duplicates_collapse() {
        let q = fixtures::table2();
        assert_eq!(dedupe(&[q.clone(), q]).len(), 1);
    }

    #[test]
    fn relabel_identity_is_noop() {
        let q = fixtures::table1();
        assert_eq!(relabel(&q, &Perm::identity(16)), q);
    }

    #[test]
    fn relabel_cyclic_stays_cyclic() {
        let z4 = fixtures::cyclic(4);
        for seed in 0..6 {
            let r = relabel(&z4, &random_perm_fixing_zero(4, seed));
            assert!(are_isomorphic(&z4, &r).is_some());
        }
    }

    #[test]
    fn dedupe_order_independent() {
        let mut all: Vec<LoopTable> = (0..4)
            .flat_map(|r| (0..4).map(move |s| fixtures::family16(r, s)))
            .collect();
        all.push(fixtures::table2());
        all.push(relabel(&fixtures::table2(), &random_perm_fixing_zero(16, 3)));
        let a = dedupe(&all);
        all.reverse();
        let mut rng = StdRng::seed_from_u64(9);
        all.shuffle(&mut rng);
        assert_eq!(dedupe(&all), a);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn round_trip_over_corpus() {
        for (i, q) in fixtures::corpus().iter().enumerate().step_by(7) {
            let p = random_perm_fixing_zero(q.order(), i as u64);
            let r = relabel(q, &p);
            let w = are_isomorphic(q, &r).unwrap_or_else(|| panic!("{:?}", q.name()));
            assert!(is_isomorphism(q, &r, &w));
            let back = are_isomorphic(&r, q).unwrap();
            assert!(is_isomorphism(&r, q, &back));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn relabel_round_trip(seed in any::<u64>(), which in 0usize..5) {
            let q = [fixtures::table1(), fixtures::table2(), fixtures::family16(1, 1),
                     fixtures::family27(1, 2, 0, 1, 2), fixtures::dihedral8()][which].clone();
            let r = relabel(&q, &random_perm_fixing_zero(q.order(), seed));
            prop_assert_eq!(invariants(&q), invariants(&r));
            let w = are_isomorphic(&q, &r).unwrap();
            prop_assert!(is_isomorphism(&q, &r, &w));
        }
    }
}

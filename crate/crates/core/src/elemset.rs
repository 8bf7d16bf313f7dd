//! Fixed-width bitset over loop elements (orders up to 256).

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet([u64; 4]);

impl ElemSet {
    pub const fn empty() -> Self {
        ElemSet([0; 4])
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty();
        for x in 0..n {
            s.insert(x);
        }
        s
    }

    pub fn singleton(x: usize) -> Self {
        let mut s = Self::empty();
        s.insert(x);
        s
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x >> 6, 1u64 << (x & 63));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0[x >> 6] &= !(1u64 << (x & 63));
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < 256 && self.0[x >> 6] & (1u64 << (x & 63)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o |= b;
        }
        out
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o &= b;
        }
        out
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o &= !b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| {
            let mut bits = self.0[w];
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: ElemSet = [0, 3, 64, 200].into_iter().collect();
        let b: ElemSet = [3, 200].into_iter().collect();
        assert_eq!(a.len(), 4);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.difference(&b).to_vec(), vec![0, 64]);
        assert_eq!(a.intersection(&b), b);
        assert_eq!(ElemSet::full(5).to_vec(), vec![0, 1, 2, 3, 4]);
    }
}

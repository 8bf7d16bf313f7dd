//! Dense permutations of loop elements.
//!
//! Maps act on the right, matching the usual loop-theory convention
//! `x R_y = xy`: the product `p * q` (or `p.then(&q)`) first applies `p`,
//! then `q`. Every inner mapping in this crate is built with that order.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).map(|x| x as u8).collect(),
        }
    }

    /// Builds a permutation from its image list, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > 256 {
            return Err(LoopError::UnsupportedOrder(n));
        }
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n {
                return Err(LoopError::OutOfRange { elem: y, n });
            }
            if seen[y] {
                return Err(LoopError::NotLatin {
                    symbol: y,
                    line: "permutation images".into(),
                });
            }
            seen[y] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|y| y as u8).collect(),
        })
    }

    /// Caller guarantees `images` is a bijection on `0..len`.
    pub(crate) fn from_raw(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v as usize)
        });
        Perm { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "permutation degrees differ");
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    /// Order of the permutation as an element of the symmetric group.
    pub fn order(&self) -> u64 {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        self.then(rhs)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

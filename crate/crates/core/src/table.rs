//! Cayley tables of finite loops.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{LoopError, Result};
use crate::perm::Perm;

pub const MAX_ORDER: usize = 255;

/// A finite loop stored as its multiplication table, with the identity at 0.
///
/// Division tables and the left-normed power cycle of every element are
/// precomputed at construction, so all lookups are O(1).
#[derive(Clone)]
pub struct LoopTable {
    n: usize,
    cells: Vec<u8>,
    // ldiv[x*n+z] = x\z, rdiv[y*n+z] = z/y
    ldiv: Vec<u8>,
    rdiv: Vec<u8>,
    // cycle of 0 under R_x: 0, x, x·x, (x·x)·x, ...
    cycles: Vec<Vec<u8>>,
    pa: Vec<bool>,
    name: Option<String>,
    original_labels: Vec<usize>,
}

impl LoopTable {
    /// Validates a row-major table and normalizes the identity to 0.
    pub fn from_cells(n: usize, cells: Vec<usize>) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(LoopError::UnsupportedOrder(n));
        }
        if cells.len() != n * n {
            return Err(LoopError::BadShape {
                expected: n * n,
                got: cells.len(),
            });
        }
        for &v in &cells {
            if v >= n {
                return Err(LoopError::OutOfRange { elem: v, n });
            }
        }
        check_latin(n, &cells)?;
        let e = (0..n)
            .find(|&e| (0..n).all(|y| cells[e * n + y] == y && cells[y * n + e] == y))
            .ok_or(LoopError::NoIdentity)?;

        let mut labels: Vec<usize> = (0..n).collect();
        let cells = if e == 0 {
            cells
        } else {
            labels.swap(0, e);
            let sw = |x: usize| {
                if x == 0 {
                    e
                } else if x == e {
                    0
                } else {
                    x
                }
            };
            let mut out = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    out[sw(x) * n + sw(y)] = sw(cells[x * n + y]);
                }
            }
            out
        };
        let mut t = Self::build(n, cells.into_iter().map(|v| v as u8).collect());
        t.original_labels = labels;
        Ok(t)
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(LoopError::BadShape {
                    expected: n * n,
                    got: n * r.len(),
                });
            }
            cells.extend_from_slice(r);
        }
        Self::from_cells(n, cells)
    }

    /// Builds from a closure `mul(x, y)`; element 0 must already be the identity
    /// for the result to keep the caller's labels.
    pub fn from_fn(n: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(mul(x, y));
            }
        }
        Self::from_cells(n, cells)
    }

    /// Caller guarantees a Latin square with identity 0.
    pub(crate) fn from_raw(n: usize, cells: Vec<u8>) -> Self {
        debug_assert!(check_latin(n, &cells.iter().map(|&v| v as usize).collect::<Vec<_>>()).is_ok());
        Self::build(n, cells)
    }

    fn build(n: usize, cells: Vec<u8>) -> Self {
        let mut ldiv = vec![0u8; n * n];
        let mut rdiv = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = cells[x * n + y] as usize;
                ldiv[x * n + z] = y as u8;
                rdiv[y * n + z] = x as u8;
            }
        }
        let mut cycles = Vec::with_capacity(n);
        let mut pa = Vec::with_capacity(n);
        for x in 0..n {
            let mut cyc = vec![0u8];
            let mut p = x;
            while p != 0 {
                cyc.push(p as u8);
                p = cells[p * n + x] as usize;
            }
            let m = cyc.len();
            let ok = (0..m).all(|i| {
                (0..m).all(|j| cells[cyc[i] as usize * n + cyc[j] as usize] == cyc[(i + j) % m])
            });
            cycles.push(cyc);
            pa.push(ok);
        }
        LoopTable {
            n,
            cells,
            ldiv,
            rdiv,
            cycles,
            pa,
            name: None,
            original_labels: (0..n).collect(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    /// `original_labels()[i]` is the input label of element `i` before the
    /// identity was moved to 0.
    pub fn original_labels(&self) -> &[usize] {
        &self.original_labels
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.mul(x, y)).collect())
            .collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    pub fn checked_mul(&self, x: usize, y: usize) -> Result<usize> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn check(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(LoopError::OutOfRange { elem: x, n: self.n })
        }
    }

    /// `z/y`: the unique `w` with `w·y = z`.
    #[inline]
    pub fn rdiv(&self, z: usize, y: usize) -> usize {
        self.rdiv[y * self.n + z] as usize
    }

    /// `x\z`: the unique `w` with `x·w = z`.
    #[inline]
    pub fn ldiv(&self, x: usize, z: usize) -> usize {
        self.ldiv[x * self.n + z] as usize
    }

    /// Right inverse: `x · rho(x) = 0`.
    #[inline]
    pub fn rho(&self, x: usize) -> usize {
        self.ldiv(x, 0)
    }

    /// Left inverse: `lam(x) · x = 0`.
    #[inline]
    pub fn lam(&self, x: usize) -> usize {
        self.rdiv(0, x)
    }

    /// Whether `<x>` is a group, decided from the left-normed powers of `x`
    /// (valid in any loop).
    pub fn is_pa_elem(&self, x: usize) -> bool {
        self.pa[x]
    }

    pub fn is_power_associative(&self) -> bool {
        self.pa.iter().all(|&b| b)
    }

    /// Length of the cycle of 0 under `R_x`; for power-associative `x` this is
    /// the order of `x`.
    pub fn elem_order(&self, x: usize) -> usize {
        self.cycles[x].len()
    }

    /// Canonical power `x^k`. Negative exponents use the two-sided inverse.
    /// Fails when `x` is not power-associative and `k` is outside `0..=2`.
    pub fn pow(&self, x: usize, k: i64) -> Result<usize> {
        if self.pa[x] || (0..=2).contains(&k) {
            Ok(self.pow_left_normed(x, k))
        } else {
            Err(LoopError::NotPowerAssociative(x))
        }
    }

    /// `0·R_x^k`, i.e. `((x·x)·x)…` for positive `k`; total on every element.
    pub fn pow_left_normed(&self, x: usize, k: i64) -> usize {
        let cyc = &self.cycles[x];
        let m = cyc.len() as i64;
        cyc[k.rem_euclid(m) as usize] as usize
    }

    pub fn r(&self, x: usize) -> Perm {
        Perm::from_raw((0..self.n).map(|y| self.cells[y * self.n + x]).collect())
    }

    pub fn l(&self, x: usize) -> Perm {
        Perm::from_raw(self.cells[x * self.n..(x + 1) * self.n].to_vec())
    }

    /// `T_x = R_x L_x⁻¹`: `y ↦ x\(y·x)`.
    pub fn t(&self, x: usize) -> Perm {
        self.perm_from(|y| self.ldiv(x, self.mul(y, x)))
    }

    /// `E_x = R_x R_{x^ρ}`: `y ↦ (y·x)·x^ρ`.
    pub fn e(&self, x: usize) -> Perm {
        let xr = self.rho(x);
        self.perm_from(|y| self.mul(self.mul(y, x), xr))
    }

    /// `R(x,y) = R_x R_y R_{xy}⁻¹`: `z ↦ ((z·x)·y)/(x·y)`.
    pub fn rinner(&self, x: usize, y: usize) -> Perm {
        let xy = self.mul(x, y);
        self.perm_from(|z| self.rdiv(self.mul(self.mul(z, x), y), xy))
    }

    /// `L(x,y) = L_x L_y L_{yx}⁻¹`: `z ↦ (y·x)\(y·(x·z))`.
    pub fn linner(&self, x: usize, y: usize) -> Perm {
        let yx = self.mul(y, x);
        self.perm_from(|z| self.ldiv(yx, self.mul(y, self.mul(x, z))))
    }

    fn perm_from(&self, f: impl Fn(usize) -> usize) -> Perm {
        Perm::from_raw((0..self.n).map(|y| f(y) as u8).collect())
    }

    /// `[x,y]`: the unique `c` with `x·y = (y·x)·c`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.ldiv(self.mul(y, x), self.mul(x, y))
    }

    /// `(x,y,z)`: the unique `a` with `(x·y)·z = (x·(y·z))·a`.
    #[inline]
    pub fn associator(&self, x: usize, y: usize, z: usize) -> usize {
        let l = self.mul(self.mul(x, y), z);
        let r = self.mul(x, self.mul(y, z));
        self.ldiv(r, l)
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.associator(x, y, z) == 0)))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

fn check_latin(n: usize, cells: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for x in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for y in 0..n {
            let v = cells[x * n + y];
            if std::mem::replace(&mut seen[v], true) {
                return Err(LoopError::NotLatin {
                    symbol: v,
                    line: format!("row {x}"),
                });
            }
        }
    }
    for y in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for x in 0..n {
            let v = cells[x * n + y];
            if std::mem::replace(&mut seen[v], true) {
                return Err(LoopError::NotLatin {
                    symbol: v,
                    line: format!("column {y}"),
                });
            }
        }
    }
    Ok(())
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cells == other.cells
    }
}

impl Eq for LoopTable {}

impl Hash for LoopTable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.cells.hash(state);
    }
}

impl PartialOrd for LoopTable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LoopTable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.cells).cmp(&(other.n, &other.cells))
    }
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LoopTable {:?} (n = {})", self.name, self.n)?;
        let w = (self.n.saturating_sub(1)).to_string().len();
        for x in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|y| format!("{:>w$}", self.mul(x, y)))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn table1_lookups() {
        let q = fixtures::table1();
        assert_eq!(q.mul(4, 8), 12);
        assert_eq!(q.mul(8, 4), 14);
        assert_eq!(q.rdiv(14, 4), 8);
        assert_eq!(q.ldiv(4, 9), 13);
        assert_eq!(q.rho(14), 13);
        assert_eq!(q.rho(8), 8);
        assert_eq!(q.pow(4, 3).unwrap(), 4);
        assert_eq!(q.pow(4, 2).unwrap(), 0);
        assert_eq!(q.commutator(8, 4), 3);
        assert_eq!(q.associator(8, 8, 4), 1);
        assert_eq!(q.e(4).apply(8), 8);
        assert_eq!(q.rinner(4, q.rho(4)).apply(8), 8);
    }

    #[test]
    fn trivial_identities() {
        let q = fixtures::table1();
        for y in 0..16 {
            assert_eq!(q.mul(0, y), y);
            assert_eq!(q.rdiv(y, y), 0);
            assert_eq!(q.pow(y, 0).unwrap(), 0);
            assert!(q.rinner(0, y).is_identity());
            for z in 0..16 {
                assert_eq!(q.associator(y, 0, z), 0);
            }
        }
        assert_eq!(q.rho(0), 0);
        assert!(q.e(0).is_identity());
    }

    #[test]
    fn non_pa_power_is_refused() {
        let q = fixtures::table1();
        assert!(!q.is_pa_elem(12));
        assert_eq!(q.pow(12, 3), Err(LoopError::NotPowerAssociative(12)));
        assert_eq!(q.pow(12, 2).unwrap(), q.mul(12, 12));
        let ln = q.pow_left_normed(12, 3);
        assert_eq!(ln, q.mul(q.mul(12, 12), 12));
    }

    #[test]
    fn abelian_group_has_trivial_t() {
        let g = fixtures::cyclic(6);
        for x in 0..6 {
            assert!(g.t(x).is_identity());
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            LoopTable::from_cells(2, vec![0, 1, 1, 1]),
            Err(LoopError::NotLatin { .. })
        ));
        // x*y = -x-y mod 3 is Latin without an identity
        assert_eq!(
            LoopTable::from_cells(3, vec![0, 2, 1, 2, 1, 0, 1, 0, 2]).unwrap_err(),
            LoopError::NoIdentity
        );
        assert!(LoopTable::from_cells(2, vec![0, 1, 1]).is_err());
        assert!(LoopTable::from_cells(2, vec![0, 1, 1, 2]).is_err());
    }

    #[test]
    fn identity_is_moved_to_zero() {
        // Z3 written with identity labelled 2
        let cells = vec![1, 2, 0, 2, 0, 1, 0, 1, 2];
        let q = LoopTable::from_cells(3, cells).unwrap();
        assert_eq!(q.original_labels(), &[2, 1, 0]);
        for y in 0..3 {
            assert_eq!(q.mul(0, y), y);
            assert_eq!(q.mul(y, 0), y);
        }
        assert!(q.is_associative());
    }

    fn corpus_small() -> Vec<LoopTable> {
        vec![
            fixtures::table1(),
            fixtures::table2(),
            fixtures::family16(1, 1),
            fixtures::family27(1, 0, 1, 0, 1),
            fixtures::quaternion8(),
        ]
    }

    #[test]
    fn divisions_invert_multiplication() {
        for q in corpus_small() {
            let n = q.order();
            for x in 0..n {
                assert_eq!(q.lam(q.rho(x)), x);
                for z in 0..n {
                    assert_eq!(q.mul(q.rdiv(z, x), x), z);
                    assert_eq!(q.mul(x, q.ldiv(x, z)), z);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn powers_add(idx in 0usize..5, x in 0usize..27, i in -54i64..54, j in -54i64..54) {
            let q = &corpus_small()[idx];
            let x = x % q.order();
            prop_assume!(q.is_pa_elem(x));
            let a = q.pow(x, i).unwrap();
            let b = q.pow(x, j).unwrap();
            prop_assert_eq!(q.mul(a, b), q.pow(x, i + j).unwrap());
        }
    }
}

//! Central extensions `A ⋉_f G` of abelian groups and the explicit cocycles
//! that produce the order-16 and order-27 families.
//!
//! Group elements are integer vectors; every exponent computation is done in
//! exact integers and only reduced modulo the codomain at the end.

use crate::error::{LoopError, Result};
use crate::table::LoopTable;

/// A finite abelian group `Z_{m1} x ... x Z_{mk}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    moduli: Vec<i64>,
}

impl FinAbGroup {
    pub fn new(moduli: Vec<i64>) -> Result<Self> {
        if moduli.iter().any(|&m| m < 1) {
            return Err(LoopError::BadParameter(format!("moduli must be >= 1, got {moduli:?}")));
        }
        Ok(FinAbGroup { moduli })
    }

    pub fn cyclic(m: i64) -> Self {
        Self::new(vec![m]).expect("positive modulus")
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<i64>() as usize
    }

    pub fn exponent(&self) -> i64 {
        self.moduli
            .iter()
            .fold(1u64, |acc, &m| crate::perm::lcm(acc, m as u64)) as i64
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.moduli).map(|(&x, &m)| x.rem_euclid(m)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|x| -x).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|x| k * x).collect::<Vec<_>>())
    }

    /// Row-major index of the reduced element (first coordinate most significant).
    pub fn index(&self, a: &[i64]) -> usize {
        self.reduce(a)
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.rank()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
}

/// Base group of a cocycle: finite, or free abelian of the given rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Finite(FinAbGroup),
    Free(usize),
}

impl Domain {
    pub fn rank(&self) -> usize {
        match self {
            Domain::Finite(g) => g.rank(),
            Domain::Free(r) => *r,
        }
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        match self {
            Domain::Finite(g) => g.add(a, b),
            Domain::Free(_) => a.iter().zip(b).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        match self {
            Domain::Finite(g) => g.neg(a),
            Domain::Free(_) => a.iter().map(|x| -x).collect(),
        }
    }

    /// All elements of a finite domain, or the box `[-w, w]^rank` of a free one.
    pub fn representatives(&self, window: i64) -> Vec<Vec<i64>> {
        match self {
            Domain::Finite(g) => g.elements().collect(),
            Domain::Free(r) => {
                let side = (2 * window + 1) as usize;
                let total = side.pow(*r as u32);
                (0..total)
                    .map(|mut idx| {
                        let mut v = vec![0; *r];
                        for slot in v.iter_mut().rev() {
                            *slot = (idx % side) as i64 - window;
                            idx /= side;
                        }
                        v
                    })
                    .collect()
            }
        }
    }
}

/// A map `f : A x A -> G`.
pub trait Cocycle: Sync {
    fn domain(&self) -> &Domain;
    fn codomain(&self) -> &FinAbGroup;
    /// Value in `G`; need not be reduced.
    fn eval(&self, a: &[i64], b: &[i64]) -> Vec<i64>;
}

/// A cocycle given by a closure.
pub struct FnCocycle<F> {
    domain: Domain,
    codomain: FinAbGroup,
    f: F,
}

impl<F> FnCocycle<F>
where
    F: Fn(&[i64], &[i64]) -> Vec<i64> + Sync,
{
    pub fn new(domain: Domain, codomain: FinAbGroup, f: F) -> Self {
        FnCocycle { domain, codomain, f }
    }
}

impl<F> Cocycle for FnCocycle<F>
where
    F: Fn(&[i64], &[i64]) -> Vec<i64> + Sync,
{
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }
    fn eval(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        (self.f)(a, b)
    }
}

/// `𝒜_f(a,b,c) = f(a,b) + f(a+b,c) - f(b,c) - f(a,b+c)`, reduced in `G`.
pub fn assoc_form(f: &(impl Cocycle + ?Sized), a: &[i64], b: &[i64], c: &[i64]) -> Vec<i64> {
    let d = f.domain();
    let g = f.codomain();
    let ab = d.add(a, b);
    let bc = d.add(b, c);
    let p = f.eval(a, b);
    let q = f.eval(&ab, c);
    let r = f.eval(b, c);
    let s = f.eval(a, &bc);
    let raw: Vec<i64> = (0..g.rank()).map(|i| p[i] + q[i] - r[i] - s[i]).collect();
    g.reduce(&raw)
}

fn finite_domain(f: &(impl Cocycle + ?Sized)) -> Result<&FinAbGroup> {
    match f.domain() {
        Domain::Finite(a) => Ok(a),
        Domain::Free(_) => Err(LoopError::BadParameter(
            "operation needs a finite base group".into(),
        )),
    }
}

/// Checks `f(0,a) = f(a,0) = 0` over a finite domain, or on the window for a free one.
pub fn check_normalized(f: &(impl Cocycle + ?Sized), window: i64) -> Result<()> {
    let g = f.codomain();
    let zero = vec![0; f.domain().rank()];
    for a in f.domain().representatives(window) {
        if g.reduce(&f.eval(&zero, &a)) != g.zero() || g.reduce(&f.eval(&a, &zero)) != g.zero() {
            return Err(LoopError::NotNormalized(a));
        }
    }
    Ok(())
}

/// Cayley table of `A ⋉_f G`: `(a,x)(b,y) = (a+b, x+y+f(a,b))`.
/// Element `(a,x)` gets index `index_A(a) * |G| + index_G(x)`.
pub fn extend(f: &(impl Cocycle + ?Sized)) -> Result<LoopTable> {
    let a_grp = finite_domain(f)?;
    check_normalized(f, 0)?;
    let g = f.codomain();
    let (na, ng) = (a_grp.order(), g.order());
    let n = na * ng;
    if n > crate::table::MAX_ORDER {
        return Err(LoopError::UnsupportedOrder(n));
    }
    let a_elems: Vec<Vec<i64>> = a_grp.elements().collect();
    let g_elems: Vec<Vec<i64>> = g.elements().collect();
    let mut cells = vec![0usize; n * n];
    for (ia, a) in a_elems.iter().enumerate() {
        for (ib, b) in a_elems.iter().enumerate() {
            let ab = a_grp.index(&a_grp.add(a, b));
            let fab = f.eval(a, b);
            for (ix, x) in g_elems.iter().enumerate() {
                for (iy, y) in g_elems.iter().enumerate() {
                    let s: Vec<i64> = (0..g.rank()).map(|k| x[k] + y[k] + fab[k]).collect();
                    cells[(ia * ng + ix) * n + ib * ng + iy] = ab * ng + g.index(&s);
                }
            }
        }
    }
    LoopTable::from_cells(n, cells)
}

/// Product in `A ⋉_f G` on representatives, for domains too large (or
/// infinite) to tabulate.
pub fn ext_mul(
    f: &(impl Cocycle + ?Sized),
    (a, x): (&[i64], &[i64]),
    (b, y): (&[i64], &[i64]),
) -> (Vec<i64>, Vec<i64>) {
    let g = f.codomain();
    let fab = f.eval(a, b);
    let s: Vec<i64> = (0..g.rank()).map(|k| x[k] + y[k] + fab[k]).collect();
    (f.domain().add(a, b), g.reduce(&s))
}

/// `𝒜_f` invariant under all permutations of its arguments (and `f` normalized).
pub fn is_cc_good(f: &(impl Cocycle + ?Sized)) -> Result<bool> {
    let a_grp = finite_domain(f)?;
    if check_normalized(f, 0).is_err() {
        return Ok(false);
    }
    let elems: Vec<Vec<i64>> = a_grp.elements().collect();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                let base = assoc_form(f, a, b, c);
                let perms = [
                    assoc_form(f, a, c, b),
                    assoc_form(f, b, a, c),
                    assoc_form(f, b, c, a),
                    assoc_form(f, c, a, b),
                    assoc_form(f, c, b, a),
                ];
                if perms.iter().any(|p| *p != base) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// CC-good and `𝒜_f(a,a,a) = 0` for every `a`.
pub fn is_pacc_good(f: &(impl Cocycle + ?Sized)) -> Result<bool> {
    if !is_cc_good(f)? {
        return Ok(false);
    }
    let a_grp = finite_domain(f)?;
    let g = f.codomain();
    Ok(a_grp.elements().all(|a| assoc_form(f, &a, &a, &a) == g.zero()))
}

/// Integer coefficients `(c_u, c_v, c_z)` of the rank-2 cocycle
/// `f(ia+jb, ka+lb) = c_u u + c_v v + c_z z`.
pub fn star2_exponents(i: i64, j: i64, k: i64, l: i64) -> (i64, i64, i64) {
    (
        j * (k - 1) * k / 2 + i * l * k,
        -k * (j - 1) * j / 2 - i * j * l,
        j * k,
    )
}

/// The same cocycle simplified for a codomain of exponent 3.
pub fn star3_exponents(i: i64, j: i64, k: i64, l: i64) -> (i64, i64, i64) {
    (-j * k * k + i * l * k + j * k, k * j * j - i * j * l - j * k, j * k)
}

/// Rank-2 cocycle built from one of the coefficient rules above.
pub struct Rank2Cocycle {
    domain: Domain,
    codomain: FinAbGroup,
    u: Vec<i64>,
    v: Vec<i64>,
    z: Vec<i64>,
    rule: fn(i64, i64, i64, i64) -> (i64, i64, i64),
}

impl Rank2Cocycle {
    pub fn star2(domain: Domain, codomain: FinAbGroup, u: Vec<i64>, v: Vec<i64>, z: Vec<i64>) -> Self {
        assert_eq!(domain.rank(), 2, "rank-2 base required");
        Rank2Cocycle { domain, codomain, u, v, z, rule: star2_exponents }
    }

    /// Requires a codomain of exponent 3.
    pub fn star3(domain: Domain, codomain: FinAbGroup, u: Vec<i64>, v: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        if 3 % codomain.exponent() != 0 {
            return Err(LoopError::BadParameter("codomain must have exponent 3".into()));
        }
        assert_eq!(domain.rank(), 2, "rank-2 base required");
        Ok(Rank2Cocycle { domain, codomain, u, v, z, rule: star3_exponents })
    }
}

impl Cocycle for Rank2Cocycle {
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }
    fn eval(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let (cu, cv, cz) = (self.rule)(a[0], a[1], b[0], b[1]);
        let raw: Vec<i64> = (0..self.codomain.rank())
            .map(|k| cu * self.u[k] + cv * self.v[k] + cz * self.z[k])
            .collect();
        self.codomain.reduce(&raw)
    }
}

/// Parameters of the order-27 family, all in `Z_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params27 {
    pub theta: u8,
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
    pub delta: u8,
}

impl Params27 {
    pub fn new(theta: u8, alpha: u8, beta: u8, gamma: u8, delta: u8) -> Result<Self> {
        let p = Params27 { theta, alpha, beta, gamma, delta };
        if [theta, alpha, beta, gamma, delta].iter().any(|&x| x > 2) {
            return Err(LoopError::BadParameter(format!("order-27 parameters must lie in 0..3: {p:?}")));
        }
        Ok(p)
    }

    /// All 243 tuples in lexicographic order.
    pub fn all() -> impl Iterator<Item = Params27> {
        (0..243u32).map(|mut k| {
            let mut d = [0u8; 5];
            for slot in d.iter_mut().rev() {
                *slot = (k % 3) as u8;
                k /= 3;
            }
            Params27 { theta: d[0], alpha: d[1], beta: d[2], gamma: d[3], delta: d[4] }
        })
    }
}

/// Exponent of the central generator `n` in `a^i b^j · a^k b^l`, for
/// representatives `i,j,k,l ∈ {0,1,2}`.
pub fn family27_exponent(p: Params27, i: i64, j: i64, k: i64, l: i64) -> i64 {
    let (cu, cv, cz) = star3_exponents(i, j, k, l);
    let raw = cu * p.gamma as i64
        + cv * p.delta as i64
        + cz * p.theta as i64
        + (i + k) / 3 * p.alpha as i64
        + (j + l) / 3 * p.beta as i64;
    raw.rem_euclid(3)
}

/// The order-27 PACC loop with `ba = ab·n^θ`, `a³ = n^α`, `b³ = n^β`,
/// `(b)E_a = b·n^γ`, `(a)E_b = a·n^δ`.
///
/// Element `a^i b^j n^x` has index `(3i + j)·3 + x`, so `a = 9`, `b = 3`, `n = 1`.
pub fn family27(p: Params27) -> LoopTable {
    let dec = |e: usize| ((e / 9) as i64, ((e / 3) % 3) as i64, (e % 3) as i64);
    LoopTable::from_fn(27, |e1, e2| {
        let (i, j, x) = dec(e1);
        let (k, l, y) = dec(e2);
        let z = (x + y + family27_exponent(p, i, j, k, l)).rem_euclid(3);
        (((i + k) % 3 * 3 + (j + l) % 3) * 3 + z) as usize
    })
    .expect("order-27 family is a loop")
    .with_name(format!(
        "fam27:{},{},{},{},{}",
        p.theta, p.alpha, p.beta, p.gamma, p.delta
    ))
}

/// Automorphic-inverse criterion for the order-27 family.
pub fn check_aip_criterion(p: Params27) -> bool {
    p.delta % 3 == (p.gamma + p.theta) % 3
}

/// The order-`4|G|` PACC loop with `ba = ab·z`, `a² = t`, `b² = w` over a
/// cyclic or general finite abelian `G` with `4z = 0`.
///
/// Element `a^i b^j x` has index `(2i + j)·|G| + index_G(x)`.
pub fn family16g(g: &FinAbGroup, z: &[i64], t: &[i64], w: &[i64]) -> Result<LoopTable> {
    if g.scale(4, z) != g.zero() {
        return Err(LoopError::BadParameter("z must satisfy 4z = 0".into()));
    }
    let ng = g.order();
    let n = 4 * ng;
    if n > crate::table::MAX_ORDER {
        return Err(LoopError::UnsupportedOrder(n));
    }
    let elems: Vec<Vec<i64>> = g.elements().collect();
    LoopTable::from_fn(n, |e1, e2| {
        let (i, j, x) = ((e1 / ng / 2) as i64, ((e1 / ng) % 2) as i64, &elems[e1 % ng]);
        let (k, l, y) = ((e2 / ng / 2) as i64, ((e2 / ng) % 2) as i64, &elems[e2 % ng]);
        let cz = 2 * i * k * l + 2 * i * j * l - j * k * k - k * j * j - j * k;
        let (ct, cw) = ((i + k) / 2, (j + l) / 2);
        let s: Vec<i64> = (0..g.rank())
            .map(|r| x[r] + y[r] + cz * z[r] + ct * t[r] + cw * w[r])
            .collect();
        ((2 * ((i + k) % 2) + (j + l) % 2) as usize) * ng + g.index(&s)
    })
}

/// `Q_{r,s}`: the order-16 family over `Z_4` with `z = 1`, `a² = z^r`, `b² = z^s`.
pub fn family16(r: u8, s: u8) -> Result<LoopTable> {
    if r > 3 || s > 3 {
        return Err(LoopError::BadParameter(format!("r, s must lie in 0..4, got ({r},{s})")));
    }
    let g = FinAbGroup::cyclic(4);
    Ok(family16g(&g, &[1], &[r as i64], &[s as i64])?.with_name(format!("q16:{r},{s}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table3() -> ([[&'static str; 9]; 9], [&'static str; 9]) {
        // rows/cols: 1, a, a², b, ab, a²b, b², ab², a²b²; t=θ a=α b=β g=γ d=δ
        (
            [
                ["0", "0", "0", "0", "0", "0", "0", "0", "0"],
                ["0", "0", "a", "0", "g", "a+2g", "0", "2g", "a+g"],
                ["0", "a", "a", "0", "a+2g", "a+g", "0", "a+g", "a+2g"],
                ["0", "t", "2t+g", "0", "t", "2t+g", "b", "t+b", "2t+b+g"],
                ["0", "t", "2t+a+g", "2d", "t+g+2d", "2t+a+2d", "b+d", "t+b+2g+d", "2t+a+b+2g+d"],
                ["0", "t+a", "2t+a+g", "d", "t+a+2g+d", "2t+a+2g+d", "b+2d", "t+a+b+g+2d", "2t+a+b+2d"],
                ["0", "2t+2d", "t+2g+d", "b", "2t+b+2d", "t+b+2g+d", "b", "2t+b+2d", "t+b+2g+d"],
                ["0", "2t+2d", "t+a+2g+d", "b+d", "2t+b+g", "t+a+b+g+2d", "b+2d", "2t+b+2g+d", "t+a+b"],
                ["0", "2t+a+2d", "t+a+2g+d", "b+2d", "2t+a+b+2g+d", "t+a+b", "b+d", "2t+a+b+g", "t+a+b+g+2d"],
            ],
            ["0", "a", "2a", "b", "a+b", "2a+b", "2b", "a+2b", "2a+2b"],
        )
    }

    fn eval_entry(s: &str, p: Params27) -> i64 {
        s.split('+')
            .map(|term| {
                let (coef, var) = match term.len() {
                    1 if term == "0" => return 0,
                    1 => (1, term),
                    _ => (term[..1].parse::<i64>().unwrap(), &term[1..]),
                };
                coef * match var {
                    "t" => p.theta,
                    "a" => p.alpha,
                    "b" => p.beta,
                    "g" => p.gamma,
                    "d" => p.delta,
                    _ => panic!("bad term {term}"),
                } as i64
            })
            .sum::<i64>()
            .rem_euclid(3)
    }

    #[test]
    fn family27_matches_published_table_cellwise() {
        let (cells, cubes) = table3();
        for p in Params27::all() {
            let q = family27(p);
            for r in 0..9 {
                let (i, j) = ((r % 3) as i64, (r / 3) as i64);
                for c in 0..9 {
                    let (k, l) = ((c % 3) as i64, (c / 3) as i64);
                    let expect = eval_entry(cells[r][c], p);
                    assert_eq!(family27_exponent(p, i, j, k, l), expect, "{p:?} row {r} col {c}");
                    let x = ((i * 3 + j) * 3) as usize;
                    let y = ((k * 3 + l) * 3) as usize;
                    let prod = q.mul(x, y);
                    assert_eq!(prod / 3, (((i + k) % 3) * 3 + (j + l) % 3) as usize);
                    assert_eq!((prod % 3) as i64, expect);
                }
                let x = ((i * 3 + j) * 3) as usize;
                let cube = q.mul(q.mul(x, x), x);
                assert_eq!(cube / 3, 0);
                assert_eq!((cube % 3) as i64, eval_entry(cubes[r], p), "{p:?} cube row {r}");
            }
        }
    }

    #[test]
    fn family27_samples() {
        let z3 = family27(Params27::new(0, 0, 0, 0, 0).unwrap());
        assert!(z3.is_associative() && z3.is_commutative());
        let q = family27(Params27::new(0, 0, 0, 0, 1).unwrap());
        // ab · ab = a²b² n²
        assert_eq!(q.mul(12, 12), 24 + 2);
    }

    #[test]
    fn family16_matches_published_table() {
        // rows/cols a^i b^j z^x; check every entry of the Q_{r,s} table
        for r in 0..4u8 {
            for s in 0..4u8 {
                let q = family16(r, s).unwrap();
                let (r, s) = (r as usize, s as usize);
                let idx = |ij: usize, x: usize| ij * 4 + x % 4;
                // entries as (result coset, extra exponent); coset order 1, a, b, ab
                let tab = [
                    [(0, 0), (1, 0), (2, 0), (3, 0)],
                    [(1, 0), (0, r), (3, 0), (2, r + 2)],
                    [(2, 0), (3, 1), (0, s), (1, s + 1)],
                    [(3, 0), (2, r + 1), (1, s + 2), (0, r + s + 1)],
                ];
                // coset label -> (i,j): 1=(0,0), a=(1,0), b=(0,1), ab=(1,1); index 2i+j
                let pos = [0usize, 2, 1, 3];
                for (ra, row) in tab.iter().enumerate() {
                    for (cb, &(res, e)) in row.iter().enumerate() {
                        for x in 0..4 {
                            for y in 0..4 {
                                assert_eq!(
                                    q.mul(idx(pos[ra], x), idx(pos[cb], y)),
                                    idx(pos[res], x + y + e),
                                    "Q_{r},{s}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn family16_square_counts() {
        let count = |q: &LoopTable| (0..16).filter(|&x| q.mul(x, x) == 0).count();
        assert_eq!(count(&family16(0, 0).unwrap()), 6);
        assert_eq!(count(&family16(1, 1).unwrap()), 2);
        for r in 0..4 {
            for s in 0..4 {
                let q = family16(r, s).unwrap();
                let (a, b) = (8, 4);
                assert_eq!(q.mul(b, a), q.mul(q.mul(a, b), 1));
            }
        }
        assert!(family16(4, 0).is_err());
        let g = FinAbGroup::cyclic(8);
        assert!(family16g(&g, &[1], &[0], &[0]).is_err());
        assert!(family16g(&g, &[2], &[0], &[0]).is_ok());
    }

    #[test]
    fn star2_coefficients() {
        assert_eq!(star2_exponents(1, 1, 1, 1), (1, -1, 1));
        for j in -4..5 {
            for k in -4..5 {
                assert_eq!(star2_exponents(0, j, k, 0), (j * (k - 1) * k / 2, -k * (j - 1) * j / 2, j * k));
                for i in -3..4 {
                    for l in -3..4 {
                        assert_eq!(star2_exponents(i, 0, k, l), (i * l * k, 0, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn star2_and_star3_agree_mod_3() {
        for i in -6..7 {
            for j in -6..7 {
                for k in -6..7 {
                    for l in -6..7 {
                        let (a, b, c) = star2_exponents(i, j, k, l);
                        let (x, y, z) = star3_exponents(i, j, k, l);
                        assert_eq!((a - x).rem_euclid(3), 0, "u at {i},{j},{k},{l}");
                        assert_eq!((b - y).rem_euclid(3), 0, "v at {i},{j},{k},{l}");
                        assert_eq!(c, z);
                    }
                }
            }
        }
    }

    #[test]
    fn star2_u_part_has_closed_associator() {
        let g = FinAbGroup::cyclic(1_000_003);
        let f = Rank2Cocycle::star2(Domain::Free(2), g, vec![1], vec![0], vec![0]);
        let reps = Domain::Free(2).representatives(2);
        for x in &reps {
            for y in &reps {
                for w in &reps {
                    let (i, j, k, l, p, q) = (x[0], x[1], y[0], y[1], w[0], w[1]);
                    let expect = (-i * k * q - j * k * p - i * l * p).rem_euclid(1_000_003);
                    assert_eq!(assoc_form(&f, x, y, w), vec![expect]);
                }
            }
        }
    }

    #[test]
    fn bilinear_and_zero_cocycles() {
        let a = FinAbGroup::new(vec![2, 2, 2]).unwrap();
        let g = FinAbGroup::cyclic(2);
        let zero = FnCocycle::new(Domain::Finite(a.clone()), g.clone(), |_, _| vec![0]);
        assert!(is_pacc_good(&zero).unwrap());
        let direct = extend(&zero).unwrap();
        assert!(direct.is_associative() && direct.is_commutative());

        let bil = FnCocycle::new(Domain::Finite(a), g, |x: &[i64], y: &[i64]| {
            vec![x[0] * y[1] + x[1] * y[2]]
        });
        assert!(is_pacc_good(&bil).unwrap());
        let grp = extend(&bil).unwrap();
        assert!(grp.is_associative());
        assert!(!grp.is_commutative());
    }

    #[test]
    fn extend_rejects_unnormalized() {
        let a = FinAbGroup::cyclic(2);
        let f = FnCocycle::new(Domain::Finite(a.clone()), a, |_, _| vec![1]);
        assert!(matches!(extend(&f), Err(LoopError::NotNormalized(_))));
    }

    #[test]
    fn star3_is_pacc_good_for_every_parameter() {
        let a = FinAbGroup::new(vec![3, 3]).unwrap();
        let g = FinAbGroup::cyclic(3);
        for u in 0..3 {
            for v in 0..3 {
                for z in 0..3 {
                    let f = Rank2Cocycle::star3(Domain::Finite(a.clone()), g.clone(), vec![u], vec![v], vec![z]).unwrap();
                    assert!(is_pacc_good(&f).unwrap(), "u={u} v={v} z={z}");
                }
            }
        }
        let f = Rank2Cocycle::star3(Domain::Finite(a), g, vec![1], vec![0], vec![0]).unwrap();
        let q = extend(&f).unwrap();
        assert!(!q.is_associative());
        assert!(q.is_power_associative());
    }

    #[test]
    fn star2_on_finite_stand_in_fails_pacc_when_3u_ne_3v() {
        let a = FinAbGroup::new(vec![12, 12]).unwrap();
        let g = FinAbGroup::cyclic(12);
        let f = Rank2Cocycle::star2(Domain::Finite(a), g, vec![1], vec![0], vec![0]);
        assert!(!is_pacc_good(&f).unwrap());
    }

    #[test]
    fn aip_criterion_samples() {
        assert!(check_aip_criterion(Params27::new(1, 0, 1, 0, 1).unwrap()));
        assert!(!check_aip_criterion(Params27::new(0, 0, 0, 0, 1).unwrap()));
        assert!(check_aip_criterion(Params27::new(0, 0, 0, 0, 0).unwrap()));
        assert!(Params27::new(3, 0, 0, 0, 0).is_err());
        assert_eq!(Params27::all().count(), 243);
    }

    proptest! {
        #[test]
        fn assoc_form_is_additive(seed_f in proptest::collection::vec(0i64..5, 16),
                                  seed_g in proptest::collection::vec(0i64..5, 16)) {
            let a = FinAbGroup::cyclic(4);
            let g = FinAbGroup::cyclic(5);
            let table = |s: Vec<i64>| move |x: &[i64], y: &[i64]| {
                if x[0] == 0 || y[0] == 0 { vec![0] } else { vec![s[(x[0] * 4 + y[0]) as usize]] }
            };
            let f = FnCocycle::new(Domain::Finite(a.clone()), g.clone(), table(seed_f.clone()));
            let h = FnCocycle::new(Domain::Finite(a.clone()), g.clone(), table(seed_g.clone()));
            let sum = FnCocycle::new(Domain::Finite(a.clone()), g.clone(), {
                let (tf, tg) = (table(seed_f), table(seed_g));
                move |x: &[i64], y: &[i64]| vec![tf(x, y)[0] + tg(x, y)[0]]
            });
            for x in a.elements() {
                for y in a.elements() {
                    for z in a.elements() {
                        let lhs = assoc_form(&sum, &x, &y, &z);
                        let rhs = g.add(&assoc_form(&f, &x, &y, &z), &assoc_form(&h, &x, &y, &z));
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }

        #[test]
        fn family27_quotient_is_well_defined(p in 0usize..243, i in -6i64..6, j in -6i64..6, k in -6i64..6, l in -6i64..6) {
            // representatives differing by (3a, -t) or (3b, -w) give the same product
            let p = Params27::all().nth(p).unwrap();
            let g = FinAbGroup::cyclic(3);
            let f = Rank2Cocycle::star3(Domain::Free(2), g, vec![p.gamma as i64], vec![p.delta as i64], vec![p.theta as i64]).unwrap();
            let normal = |a: &[i64], x: i64| -> (i64, i64, i64) {
                let (qi, qj) = (a[0].div_euclid(3), a[1].div_euclid(3));
                (a[0].rem_euclid(3), a[1].rem_euclid(3), (x + qi * p.alpha as i64 + qj * p.beta as i64).rem_euclid(3))
            };
            let index = |a: &[i64], x: i64| {
                let (ri, rj, rx) = normal(a, x);
                ((ri * 3 + rj) * 3 + rx) as usize
            };
            let (prod, x) = ext_mul(&f, (&[i, j], &[0]), (&[k, l], &[0]));
            let q = family27(p);
            prop_assert_eq!(q.mul(index(&[i, j], 0), index(&[k, l], 0)), index(&prod, x[0]));
        }
    }
}

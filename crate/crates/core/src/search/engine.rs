//! Backtracking state for one search subtree: bitmask domains with Latin
//! forward checking, and law instances that wake up when a cell they are
//! waiting on is filled.

use super::laws::{Equation, Instance, Tok};

pub(crate) const UNSET: u8 = u8::MAX;

#[derive(Clone, Copy, Debug)]
enum Undo {
    Dom(u16, u64),
    Assign(u16),
    Watch(u32),
}

#[derive(Clone, Copy)]
struct Hole {
    key: u32,
    tok: Tok,
    a: u8,
    b: u8,
    // operations above the hole, innermost first: (op, known operand, hole is left)
    path: [(Tok, u8, bool); 8],
    len: usize,
}

enum Side {
    Val(u8),
    One(Hole),
    Two(u32, u32),
}

/// Cycle type of a row read as a permutation: length of the cycle through 0,
/// then the other lengths in descending order.
pub(crate) type CycleType = Vec<u8>;

pub(crate) fn cycle_type(row: &[u8]) -> CycleType {
    let n = row.len();
    let mut seen = vec![false; n];
    let mut first = 0u8;
    let mut rest = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u8;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = row[x] as usize;
            len += 1;
        }
        if s == 0 {
            first = len;
        } else {
            rest.push(len);
        }
    }
    rest.sort_unstable_by(|a, b| b.cmp(a));
    let mut t = vec![first];
    t.extend(rest);
    t
}

pub(crate) struct Engine<'a> {
    n: usize,
    eqs: &'a [Equation],
    insts: &'a [Instance],
    cells: Vec<u8>,
    dom: Vec<u64>,
    // colpos[b*n+a] = w with w·b = a; rowpos[a*n+c] = y with a·y = c
    colpos: Vec<u8>,
    rowpos: Vec<u8>,
    row_filled: Vec<u16>,
    watches: Vec<Vec<u32>>,
    trail: Vec<Undo>,
    queue: Vec<(u16, u8)>,
    // occurrences of each label in assigned cells off row and column 0
    seen: Vec<u16>,
    mentioned: u64,
    lnh: bool,
    type_bound: bool,
    unassigned: usize,
}

impl<'a> Engine<'a> {
    pub fn new(n: usize, eqs: &'a [Equation], insts: &'a [Instance]) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Engine {
            n,
            eqs,
            insts,
            cells: vec![UNSET; n * n],
            dom: vec![full; n * n],
            colpos: vec![UNSET; n * n],
            rowpos: vec![UNSET; n * n],
            row_filled: vec![0; n],
            watches: vec![Vec::new(); 3 * n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            seen: vec![0; n],
            mentioned: 1,
            lnh: false,
            type_bound: false,
            unassigned: n * n,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn is_complete(&self) -> bool {
        self.unassigned == 0
    }

    /// Enables isomorph reduction: labels not yet mentioned are
    /// interchangeable, so only the least of them is tried, and no left
    /// translation may have a larger cycle type than that of 1.
    pub fn reduce_symmetry(&mut self) {
        self.lnh = true;
        self.type_bound = true;
        if self.n > 1 {
            self.mentioned |= 2;
        }
    }

    /// Places the identity in row and column 0, assigns `fixed`, then wakes
    /// every law instance once. Returns false on contradiction.
    pub fn init(&mut self, fixed: &[(usize, usize, usize)]) -> bool {
        let n = self.n;
        for i in 0..n {
            self.queue.push(((i) as u16, i as u8));
            self.queue.push(((i * n) as u16, i as u8));
        }
        for &(r, c, v) in fixed {
            self.queue.push(((r * n + c) as u16, v as u8));
        }
        if !self.propagate() {
            return false;
        }
        for id in 0..self.insts.len() {
            if !self.check_instance(id as u32) {
                self.queue.clear();
                return false;
            }
        }
        self.propagate()
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Dom(c, m) => self.dom[c as usize] = m,
                Undo::Watch(k) => {
                    self.watches[k as usize].pop();
                }
                Undo::Assign(c) => {
                    let c = c as usize;
                    let (r, col, v) = (c / self.n, c % self.n, self.cells[c] as usize);
                    self.cells[c] = UNSET;
                    self.colpos[col * self.n + v] = UNSET;
                    self.rowpos[r * self.n + v] = UNSET;
                    self.row_filled[r] -= 1;
                    self.unassigned += 1;
                    if r != 0 && col != 0 && !self.blank_square(r, col, v) {
                        for l in [r, col, v] {
                            self.seen[l] -= 1;
                            if self.seen[l] == 0 && l != 0 && !(self.lnh && l == 1) {
                                self.mentioned &= !(1u64 << l);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Next branching cell and the values worth trying there: the unassigned
    /// cell with the fewest candidates, first in row-major order on ties.
    /// Under isomorph reduction only cells indexed by mentioned labels are
    /// eligible, and at most one unmentioned value is offered.
    pub fn choose_cell(&self) -> Option<(usize, u64)> {
        if !self.lnh {
            return self.mrv(|_, _| true).map(|c| (c, self.dom[c]));
        }
        let m = self.mentioned;
        let inside = |i: usize, j: usize| m >> i & 1 == 1 && m >> j & 1 == 1;
        if let Some(c) = self.mrv(inside) {
            return Some((c, self.dom[c] & self.offer(m)));
        }
        let u = (!m).trailing_zeros() as usize;
        if u >= self.n {
            return None;
        }
        let c = self.mrv(|i, j| (i == u && m >> j & 1 == 1) || (j == u && m >> i & 1 == 1))?;
        let m2 = m | 1u64 << u;
        Some((c, self.dom[c] & self.offer(m2)))
    }

    fn offer(&self, m: u64) -> u64 {
        let u = (!m).trailing_zeros() as usize;
        if u < self.n {
            m | 1u64 << u
        } else {
            m
        }
    }

    fn mrv(&self, ok: impl Fn(usize, usize) -> bool) -> Option<usize> {
        let n = self.n;
        let mut best = None;
        let mut best_size = u32::MAX;
        for (c, &v) in self.cells.iter().enumerate() {
            if v == UNSET && ok(c / n, c % n) {
                let s = self.dom[c].count_ones();
                if s < best_size {
                    best = Some(c);
                    best_size = s;
                    if s <= 1 {
                        break;
                    }
                }
            }
        }
        best
    }

    /// Tries `cell = v` with full propagation; on failure the state is restored.
    pub fn try_assign(&mut self, cell: usize, v: usize) -> bool {
        let mark = self.mark();
        self.queue.push((cell as u16, v as u8));
        if self.propagate() {
            true
        } else {
            self.undo_to(mark);
            false
        }
    }

    fn set_dom(&mut self, c: usize, m: u64) {
        self.trail.push(Undo::Dom(c as u16, self.dom[c]));
        self.dom[c] = m;
    }

    fn propagate(&mut self) -> bool {
        while let Some((c, v)) = self.queue.pop() {
            if !self.assign(c as usize, v) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn assign(&mut self, c: usize, v: u8) -> bool {
        let cur = self.cells[c];
        if cur != UNSET {
            return cur == v;
        }
        let n = self.n;
        let bit = 1u64 << v;
        if self.dom[c] & bit == 0 {
            return false;
        }
        let (r, col) = (c / n, c % n);
        let vu = v as usize;
        self.cells[c] = v;
        self.colpos[col * n + vu] = r as u8;
        self.rowpos[r * n + vu] = col as u8;
        self.row_filled[r] += 1;
        self.unassigned -= 1;
        self.trail.push(Undo::Assign(c as u16));
        if r != 0 && col != 0 && !self.blank_square(r, col, vu) {
            for l in [r, col, vu] {
                self.seen[l] += 1;
                self.mentioned |= 1u64 << l;
            }
        }
        if self.dom[c] != bit {
            self.set_dom(c, bit);
        }
        if !self.latin(r, col, v) {
            return false;
        }
        if self.type_bound && r >= 1 {
            if self.row_filled[r] as usize == n && !self.types_ok(r) {
                return false;
            }
            if let Some(k1) = self.zero_cycle(1) {
                let ok = if r == 1 {
                    (2..n).all(|x| self.bound_cycle(x, k1))
                } else {
                    self.bound_cycle(r, k1)
                };
                if !ok {
                    return false;
                }
            }
        }
        let keys = [c, n * n + col * n + vu, 2 * n * n + r * n + vu];
        for key in keys {
            let len = self.watches[key].len();
            for i in 0..len {
                let id = self.watches[key][i];
                if !self.check_instance(id) {
                    return false;
                }
            }
        }
        true
    }

    /// Once `1·1 = 0` under the type bound, every square is 0, so a
    /// diagonal zero tells labels apart no more than the identity row does.
    fn blank_square(&self, r: usize, col: usize, v: usize) -> bool {
        self.type_bound && r == col && v == 0 && r != 1 && self.cells[self.n + 1] == 0
    }

    fn row_type(&self, r: usize) -> CycleType {
        cycle_type(&self.cells[r * self.n..(r + 1) * self.n])
    }

    /// Length of the cycle of 0 under left multiplication by `x`, once known.
    fn zero_cycle(&self, x: usize) -> Option<usize> {
        let n = self.n;
        let mut c = 0usize;
        for len in 1..=n {
            let next = self.cells[x * n + c];
            if next == UNSET {
                return None;
            }
            if next == 0 {
                return Some(len);
            }
            c = next as usize;
        }
        None
    }

    /// The cycle of 0 under left multiplication by `x` may not be longer than
    /// `k1`; once its first `k1 - 1` steps are known, the next must return to 0.
    fn bound_cycle(&mut self, x: usize, k1: usize) -> bool {
        let n = self.n;
        let mut c = 0usize;
        for step in 1..=k1 {
            let next = self.cells[x * n + c];
            if next == 0 {
                return true;
            }
            if next == UNSET {
                if step == k1 {
                    self.queue.push(((x * n + c) as u16, 0));
                }
                return true;
            }
            c = next as usize;
        }
        false
    }

    /// Row `r` just became complete; compare it against row 1.
    fn types_ok(&self, r: usize) -> bool {
        let n = self.n;
        if self.row_filled[1] as usize != n {
            return true;
        }
        let t1 = self.row_type(1);
        if r != 1 {
            return self.row_type(r) <= t1;
        }
        (2..n).all(|x| self.row_filled[x] as usize != n || self.row_type(x) <= t1)
    }

    /// Removes `v` from the rest of row `r` and column `col`, queueing naked
    /// and hidden singles.
    fn latin(&mut self, r: usize, col: usize, v: u8) -> bool {
        let n = self.n;
        let bit = 1u64 << v;
        for j in 0..n {
            let c = r * n + j;
            if self.cells[c] == UNSET && self.dom[c] & bit != 0 {
                let m = self.dom[c] & !bit;
                if m == 0 {
                    return false;
                }
                self.set_dom(c, m);
                if m.is_power_of_two() {
                    self.queue.push((c as u16, m.trailing_zeros() as u8));
                }
                if !self.hidden_in_col(j, v) {
                    return false;
                }
            }
        }
        for i in 0..n {
            let c = i * n + col;
            if self.cells[c] == UNSET && self.dom[c] & bit != 0 {
                let m = self.dom[c] & !bit;
                if m == 0 {
                    return false;
                }
                self.set_dom(c, m);
                if m.is_power_of_two() {
                    self.queue.push((c as u16, m.trailing_zeros() as u8));
                }
                if !self.hidden_in_row(i, v) {
                    return false;
                }
            }
        }
        true
    }

    fn hidden_in_col(&mut self, j: usize, v: u8) -> bool {
        let n = self.n;
        if self.colpos[j * n + v as usize] != UNSET {
            return true;
        }
        let bit = 1u64 << v;
        let mut spot = None;
        for i in 0..n {
            let c = i * n + j;
            if self.cells[c] == UNSET && self.dom[c] & bit != 0 {
                if spot.is_some() {
                    return true;
                }
                spot = Some(c);
            }
        }
        match spot {
            Some(c) => {
                self.queue.push((c as u16, v));
                true
            }
            None => false,
        }
    }

    fn hidden_in_row(&mut self, i: usize, v: u8) -> bool {
        let n = self.n;
        if self.rowpos[i * n + v as usize] != UNSET {
            return true;
        }
        let bit = 1u64 << v;
        let mut spot = None;
        for j in 0..n {
            let c = i * n + j;
            if self.cells[c] == UNSET && self.dom[c] & bit != 0 {
                if spot.is_some() {
                    return true;
                }
                spot = Some(c);
            }
        }
        match spot {
            Some(c) => {
                self.queue.push((c as u16, v));
                true
            }
            None => false,
        }
    }

    fn lookup(&self, tok: Tok, a: usize, b: usize) -> (u8, u32) {
        let n = self.n;
        match tok {
            Tok::Mul => (self.cells[a * n + b], (a * n + b) as u32),
            Tok::RDiv => (self.colpos[b * n + a], (n * n + b * n + a) as u32),
            _ => (self.rowpos[a * n + b], (2 * n * n + a * n + b) as u32),
        }
    }

    /// Evaluates one side, tolerating a single unknown operation: the
    /// operations above it are recorded so the unknown can be solved for.
    fn eval(&self, prog: &[Tok], vars: &[u8; 3]) -> Side {
        const HOLE: u8 = UNSET;
        let mut st = [0u8; 8];
        let mut sp = 0;
        let mut hole: Option<Hole> = None;
        for &t in prog {
            match t {
                Tok::Var(k) => {
                    st[sp] = vars[k as usize];
                    sp += 1;
                }
                Tok::Unit => {
                    st[sp] = 0;
                    sp += 1;
                }
                Tok::Mul | Tok::LDiv | Tok::RDiv => {
                    let (a, b) = (st[sp - 2], st[sp - 1]);
                    sp -= 1;
                    if a == HOLE || b == HOLE {
                        let h = hole.as_mut().expect("hole recorded");
                        let left = a == HOLE;
                        h.path[h.len] = (t, if left { b } else { a }, left);
                        h.len += 1;
                        st[sp - 1] = HOLE;
                        continue;
                    }
                    let (v, key) = self.lookup(t, a as usize, b as usize);
                    if v != UNSET {
                        st[sp - 1] = v;
                        continue;
                    }
                    if let Some(h) = hole {
                        return Side::Two(h.key, key);
                    }
                    hole = Some(Hole {
                        key,
                        tok: t,
                        a,
                        b,
                        path: [(Tok::Unit, 0, false); 8],
                        len: 0,
                    });
                    st[sp - 1] = HOLE;
                }
            }
        }
        match hole {
            Some(h) => Side::One(h),
            None => Side::Val(st[0]),
        }
    }

    /// Walks the recorded path down from the known value `t` to the value the
    /// unknown operation must take, or returns the key that blocks the walk.
    fn solve(&self, h: &Hole, mut t: u8) -> std::result::Result<u8, u32> {
        for &(tok, k, left) in h.path[..h.len].iter().rev() {
            let (k, tu) = (k as usize, t as usize);
            let (v, key) = match (tok, left) {
                (Tok::Mul, true) => self.lookup(Tok::RDiv, tu, k),
                (Tok::Mul, false) => self.lookup(Tok::LDiv, k, tu),
                (Tok::LDiv, true) => self.lookup(Tok::RDiv, k, tu),
                (Tok::LDiv, false) => self.lookup(Tok::Mul, k, tu),
                (Tok::RDiv, true) => self.lookup(Tok::Mul, tu, k),
                _ => self.lookup(Tok::LDiv, tu, k),
            };
            if v == UNSET {
                return Err(key);
            }
            t = v;
        }
        Ok(t)
    }

    fn watch(&mut self, key: u32, id: u32) {
        if self.watches[key as usize].contains(&id) {
            return;
        }
        self.watches[key as usize].push(id);
        self.trail.push(Undo::Watch(key));
    }

    fn force(&mut self, tok: Tok, a: u8, b: u8, v: u8) {
        let n = self.n;
        let (a, b, vu) = (a as usize, b as usize, v as usize);
        let (cell, val) = match tok {
            Tok::Mul => (a * n + b, v),
            Tok::RDiv => (vu * n + b, a as u8),
            _ => (a * n + vu, b as u8),
        };
        self.queue.push((cell as u16, val));
    }

    fn check_instance(&mut self, id: u32) -> bool {
        let inst = self.insts[id as usize];
        let eq = &self.eqs[inst.eq as usize];
        let l = self.eval(&eq.lhs, &inst.vars);
        let r = self.eval(&eq.rhs, &inst.vars);
        match (l, r) {
            (Side::Val(x), Side::Val(y)) => x == y,
            (Side::Val(v), Side::One(h)) | (Side::One(h), Side::Val(v)) => {
                match self.solve(&h, v) {
                    Ok(w) => self.force(h.tok, h.a, h.b, w),
                    Err(k) => self.watch(k, id),
                }
                self.watch(h.key, id);
                true
            }
            (Side::Val(_), Side::Two(k1, k2)) | (Side::Two(k1, k2), Side::Val(_)) => {
                self.watch(k1, id);
                self.watch(k2, id);
                true
            }
            (Side::One(h), Side::One(g)) => {
                self.watch(h.key, id);
                if g.key != h.key {
                    self.watch(g.key, id);
                }
                true
            }
            (Side::One(h), Side::Two(k, _)) | (Side::Two(k, _), Side::One(h)) => {
                self.watch(h.key, id);
                if k != h.key {
                    self.watch(k, id);
                }
                true
            }
            (Side::Two(k, _), Side::Two(..)) => {
                self.watch(k, id);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_types() {
        assert_eq!(cycle_type(&[1, 2, 0, 4, 3]), vec![3, 2]);
        assert_eq!(cycle_type(&[1, 0, 3, 2]), vec![2, 2]);
        assert_eq!(cycle_type(&[1, 2, 3, 0]), vec![4]);
    }
}

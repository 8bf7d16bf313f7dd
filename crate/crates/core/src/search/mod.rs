//! Exhaustive search for loops of a given order satisfying a set of laws.
//!
//! Row 0 and column 0 hold the identity. Law instances are compiled once per
//! order and woken by the cells they wait on; an instance with one side known
//! and the other a single missing product forces that product. Under
//! `up_to_iso`, labels not yet mentioned off the identity row and column are
//! interchangeable and only the least is tried; in addition the left
//! translation of 1 must have the largest cycle type. Both keep at least one
//! member of every isomorphism class.

mod engine;
mod laws;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::iso;
use crate::table::LoopTable;

use engine::Engine;
pub use laws::Law;

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

/// Largest order accepted with an empty law set.
pub const MAX_LAWLESS_ORDER: usize = 6;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub n: usize,
    pub laws: Vec<Law>,
    pub nonassociative_only: bool,
    pub up_to_iso: bool,
    pub count_only: bool,
    pub limit: Option<usize>,
    pub budget: Duration,
    pub jobs: Option<usize>,
}

impl SearchSpec {
    pub fn new(n: usize, laws: &[Law]) -> Self {
        SearchSpec {
            n,
            laws: laws.to_vec(),
            nonassociative_only: false,
            up_to_iso: false,
            count_only: false,
            limit: None,
            budget: DEFAULT_BUDGET,
            jobs: None,
        }
    }

    pub fn nonassociative(mut self) -> Self {
        self.nonassociative_only = true;
        self
    }

    pub fn up_to_iso(mut self) -> Self {
        self.up_to_iso = true;
        self
    }

    pub fn count_only(mut self) -> Self {
        self.count_only = true;
        self
    }

    pub fn limit(mut self, k: usize) -> Self {
        self.limit = Some(k);
        self
    }

    pub fn budget(mut self, d: Duration) -> Self {
        self.budget = d;
        self
    }

    pub fn jobs(mut self, j: usize) -> Self {
        self.jobs = Some(j);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 64 {
            return Err(LoopError::BadParameter(format!("search order {} outside 1..=64", self.n)));
        }
        if self.laws.is_empty() && self.n > MAX_LAWLESS_ORDER {
            return Err(LoopError::BadParameter(format!(
                "an empty law set is only allowed up to order {MAX_LAWLESS_ORDER}"
            )));
        }
        if self.limit == Some(0) {
            return Err(LoopError::BadParameter("limit must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(LoopError::BadParameter("jobs must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    TimedOut,
    LimitReached,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Sorted; empty when `count_only` was requested.
    pub loops: Vec<LoopTable>,
    /// Number of loops found. A lower bound unless `status` is `Complete`.
    pub count: usize,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Complete
    }
}

struct Shared {
    deadline: Instant,
    stop: AtomicBool,
    timed_out: AtomicBool,
    found: AtomicUsize,
    nodes: AtomicU64,
}

struct Ctx<'a> {
    spec: &'a SearchSpec,
    eqs: &'a [laws::Equation],
    insts: &'a [laws::Instance],
    shared: &'a Shared,
}

/// A subtree: cells fixed beyond the identity.
#[derive(Clone, Debug, Default)]
struct Unit {
    fixed: Vec<(usize, usize, usize)>,
}

pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let start = Instant::now();
    let mut laws = spec.laws.clone();
    laws.sort();
    laws.dedup();
    let (eqs, insts) = laws::instantiate(&laws, spec.n);
    let shared = Shared {
        deadline: start + spec.budget,
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        found: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
    };
    let ctx = Ctx {
        spec,
        eqs: &eqs,
        insts: &insts,
        shared: &shared,
    };
    let run = || {
        let units = split_units(&ctx, vec![Unit::default()]);
        units.par_iter().map(|u| run_unit(&ctx, u)).collect::<Vec<_>>()
    };
    let per_unit = match spec.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| LoopError::BadParameter(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut loops: Vec<LoopTable> = per_unit.into_iter().flatten().collect();
    loops = if spec.up_to_iso {
        iso::dedupe(&loops)
    } else {
        loops.sort();
        loops.dedup();
        loops
    };
    let mut status = if shared.timed_out.load(Ordering::Relaxed) {
        SearchStatus::TimedOut
    } else {
        SearchStatus::Complete
    };
    if let Some(k) = spec.limit {
        if loops.len() >= k {
            loops.truncate(k);
            if status == SearchStatus::Complete && shared.stop.load(Ordering::Relaxed) {
                status = SearchStatus::LimitReached;
            }
        }
    }
    let count = loops.len();
    if spec.count_only {
        loops.clear();
    }
    Ok(SearchOutcome {
        status,
        loops,
        count,
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

fn prepare<'a>(ctx: &Ctx<'a>, u: &Unit) -> Option<Engine<'a>> {
    let mut e = Engine::new(ctx.spec.n, ctx.eqs, ctx.insts);
    if ctx.spec.up_to_iso {
        e.reduce_symmetry();
    }
    e.init(&u.fixed).then_some(e)
}

/// Splits every unit once more on its first branching cell so that work
/// spreads across threads.
fn split_units(ctx: &Ctx<'_>, units: Vec<Unit>) -> Vec<Unit> {
    let n = ctx.spec.n;
    let mut out = Vec::new();
    for u in units {
        let Some(e) = prepare(ctx, &u) else { continue };
        match e.choose_cell() {
            Some((cell, mut dom)) => {
                while dom != 0 {
                    let v = dom.trailing_zeros() as usize;
                    dom &= dom - 1;
                    let mut fixed = u.fixed.clone();
                    fixed.push((cell / n, cell % n, v));
                    out.push(Unit { fixed });
                }
            }
            None => out.push(u),
        }
    }
    out
}

fn run_unit(ctx: &Ctx<'_>, u: &Unit) -> Vec<LoopTable> {
    let mut found = Vec::new();
    if ctx.shared.stop.load(Ordering::Relaxed) {
        return found;
    }
    if Instant::now() >= ctx.shared.deadline {
        ctx.shared.timed_out.store(true, Ordering::Relaxed);
        ctx.shared.stop.store(true, Ordering::Relaxed);
        return found;
    }
    let Some(mut e) = prepare(ctx, u) else { return found };
    let mut nodes = 0u64;
    dfs(ctx, &mut e, &mut found, &mut nodes);
    ctx.shared.nodes.fetch_add(nodes, Ordering::Relaxed);
    found
}

fn dfs(ctx: &Ctx<'_>, e: &mut Engine<'_>, found: &mut Vec<LoopTable>, nodes: &mut u64) {
    *nodes += 1;
    if *nodes % 1024 == 0 {
        if ctx.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        if Instant::now() >= ctx.shared.deadline {
            ctx.shared.timed_out.store(true, Ordering::Relaxed);
            ctx.shared.stop.store(true, Ordering::Relaxed);
            return;
        }
    } else if ctx.shared.stop.load(Ordering::Relaxed) {
        return;
    }
    let Some((cell, mut dom)) = e.choose_cell() else {
        emit(ctx, e, found);
        return;
    };
    while dom != 0 {
        let v = dom.trailing_zeros() as usize;
        dom &= dom - 1;
        let mark = e.mark();
        if e.try_assign(cell, v) {
            dfs(ctx, e, found, nodes);
            e.undo_to(mark);
        }
        if ctx.shared.stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

fn emit(ctx: &Ctx<'_>, e: &Engine<'_>, found: &mut Vec<LoopTable>) {
    debug_assert!(e.is_complete());
    let q = LoopTable::from_raw(e.order(), e.cells().to_vec());
    let spec = ctx.spec;
    if !spec.laws.iter().all(|l| l.holds(&q)) {
        return;
    }
    if spec.nonassociative_only && q.is_associative() {
        return;
    }
    if spec.up_to_iso && found.iter().any(|r| iso::are_isomorphic(r, &q).is_some()) {
        return;
    }
    found.push(q);
    let total = ctx.shared.found.fetch_add(1, Ordering::Relaxed) + 1;
    if let Some(k) = spec.limit {
        if total >= k && !spec.up_to_iso {
            ctx.shared.stop.store(true, Ordering::Relaxed);
        }
    }
}

/// A Cayley table with some cells filled, identity at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable {
    n: usize,
    cells: Vec<Option<usize>>,
}

impl PartialTable {
    pub fn new(n: usize) -> Self {
        PartialTable {
            n,
            cells: vec![None; n * n],
        }
    }

    pub fn from_table(q: &LoopTable) -> Self {
        let n = q.order();
        PartialTable {
            n,
            cells: q.cells().iter().map(|&v| Some(v as usize)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: Option<usize>) {
        self.cells[x * self.n + y] = v;
    }

    fn rdiv(&self, z: usize, y: usize) -> Option<usize> {
        (0..self.n).find(|&w| self.get(w, y) == Some(z))
    }

    fn ldiv(&self, x: usize, z: usize) -> Option<usize> {
        (0..self.n).find(|&w| self.get(x, w) == Some(z))
    }
}

/// Evaluates a compiled side, recording whether cell `watch` (or a division
/// read through it) was used.
fn eval_partial(p: &PartialTable, prog: &[laws::Tok], vars: &[u8; 3], watch: usize, hit: &mut bool) -> Option<usize> {
    use laws::Tok;
    let n = p.n;
    let (wr, wc) = (watch / n, watch % n);
    let wv = p.cells[watch];
    let mut st: Vec<usize> = Vec::with_capacity(8);
    for &t in prog {
        match t {
            Tok::Var(k) => st.push(vars[k as usize] as usize),
            Tok::Unit => st.push(0),
            _ => {
                let b = st.pop()?;
                let a = st.pop()?;
                let v = match t {
                    Tok::Mul => {
                        *hit |= (a, b) == (wr, wc);
                        p.get(a, b)?
                    }
                    Tok::RDiv => {
                        let w = p.rdiv(a, b)?;
                        *hit |= b == wc && Some(a) == wv && w == wr;
                        w
                    }
                    _ => {
                        let w = p.ldiv(a, b)?;
                        *hit |= a == wr && Some(b) == wv && w == wc;
                        w
                    }
                };
                st.push(v);
            }
        }
    }
    st.pop()
}

/// True iff no fully determined instance of `law` that reads cell
/// `(row, col)` is violated.
pub fn incremental_law_check(p: &PartialTable, law: Law, row: usize, col: usize) -> bool {
    let n = p.n;
    let watch = row * n + col;
    if p.cells[watch].is_none() {
        return true;
    }
    let (eqs, insts) = laws::instantiate(&[law], n);
    insts.iter().all(|inst| {
        let eq = &eqs[inst.eq as usize];
        let mut hit = false;
        let l = eval_partial(p, &eq.lhs, &inst.vars, watch, &mut hit);
        let r = eval_partial(p, &eq.rhs, &inst.vars, watch, &mut hit);
        match (l, r) {
            (Some(a), Some(b)) if hit => a == b,
            _ => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn order3_cc_is_cyclic() {
        let out = search(&SearchSpec::new(3, &[Law::Lcc, Law::Rcc])).unwrap();
        assert!(out.is_complete());
        assert_eq!(out.count, 1);
        assert!(out.loops[0].is_associative());
    }

    #[test]
    fn tiny_orders_up_to_iso() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| search(&SearchSpec::new(n, &[]).up_to_iso()).unwrap().count)
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 6]);
    }

    #[test]
    fn quaternion_among_moufang_order8() {
        let out = search(&SearchSpec::new(8, &[Law::Moufang]).up_to_iso()).unwrap();
        assert_eq!(out.count, 5);
        assert!(out.loops.iter().any(|q| iso::are_isomorphic(q, &fixtures::quaternion8()).is_some()));
    }

    #[test]
    fn emitted_loops_satisfy_laws() {
        let out = search(&SearchSpec::new(6, &[Law::Lcc, Law::Pa])).unwrap();
        for q in &out.loops {
            assert!(Law::Lcc.holds(q) && Law::Pa.holds(q));
        }
    }

    #[test]
    fn empty_law_set_rejected_at_large_order() {
        assert!(search(&SearchSpec::new(7, &[])).is_err());
    }

    #[test]
    fn incremental_check_basics() {
        let q = fixtures::cyclic(4);
        let p = PartialTable::from_table(&q);
        for l in Law::ALL {
            assert!(incremental_law_check(&p, l, 2, 3));
        }
        assert!(incremental_law_check(&PartialTable::new(4), Law::Extra, 0, 0));
    }

    #[test]
    fn corrupted_table1_prefix_is_pruned() {
        let q = fixtures::table1();
        let mut p = PartialTable::from_table(&q);
        assert_eq!((q.mul(4, 8), q.mul(8, 4)), (12, 14));
        // keep the partial table Latin: clear the cells that already hold 3
        let c = (0..q.order()).find(|&y| q.mul(8, y) == 3).unwrap();
        let r = (0..q.order()).find(|&x| q.mul(x, 4) == 3).unwrap();
        p.set(8, c, None);
        p.set(r, 4, None);
        p.set(8, 4, Some(3));
        assert!(incremental_law_check(&PartialTable::from_table(&q), Law::Lcc, 8, 4));
        assert!(!incremental_law_check(&p, Law::Lcc, 8, 4) || !incremental_law_check(&p, Law::Rcc, 8, 4));
    }
}

use std::collections::BTreeSet;
use std::time::Duration;

use loopforge::classes;
use loopforge::iso;
use loopforge::search::{search, Law, SearchSpec, SearchStatus};
use loopforge::LoopTable;

/// Every identity-normalized Latin square of order `n`, by plain backtracking.
fn naive_loops(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cells: &mut Vec<usize>, pos: usize, out: &mut Vec<Vec<usize>>) {
        if pos == n * n {
            out.push(cells.clone());
            return;
        }
        let (x, y) = (pos / n, pos % n);
        if x == 0 || y == 0 {
            cells[pos] = x + y;
            go(n, cells, pos + 1, out);
            return;
        }
        for v in 0..n {
            let row_clash = (0..y).any(|c| cells[x * n + c] == v);
            let col_clash = (0..x).any(|r| cells[r * n + y] == v);
            if !row_clash && !col_clash {
                cells[pos] = v;
                go(n, cells, pos + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut vec![0; n * n], 0, &mut out);
    out
}

fn as_tables(n: usize, raw: Vec<Vec<usize>>) -> Vec<LoopTable> {
    raw.into_iter().map(|c| LoopTable::from_cells(n, c).unwrap()).collect()
}

fn cell_set(loops: &[LoopTable]) -> BTreeSet<Vec<Vec<usize>>> {
    loops.iter().map(|q| q.rows()).collect()
}

#[test]
fn naive_counts() {
    assert_eq!(naive_loops(4).len(), 4);
    assert_eq!(naive_loops(5).len(), 56);
}

#[test]
fn lawless_order5_matches_naive_enumeration() {
    let out = search(&SearchSpec::new(5, &[])).unwrap();
    assert_eq!(out.status, SearchStatus::Complete);
    assert_eq!(out.count, 56);
    assert_eq!(cell_set(&out.loops), cell_set(&as_tables(5, naive_loops(5))));
}

#[test]
fn cc_order6_matches_filtered_enumeration() {
    let naive: Vec<LoopTable> = as_tables(6, naive_loops(6)).into_iter().filter(classes::is_cc).collect();
    let out = search(&SearchSpec::new(6, &[Law::Lcc, Law::Rcc])).unwrap();
    assert_eq!(cell_set(&out.loops), cell_set(&naive));
    let iso_out = search(&SearchSpec::new(6, &[Law::Lcc, Law::Rcc]).up_to_iso()).unwrap();
    assert_eq!(iso_out.count, iso::dedupe(&naive).len());
}

#[test]
fn nonassociative_filter_matches_enumeration() {
    let naive: Vec<LoopTable> = as_tables(5, naive_loops(5))
        .into_iter()
        .filter(|q| !q.is_associative())
        .collect();
    let out = search(&SearchSpec::new(5, &[]).nonassociative()).unwrap();
    assert_eq!(cell_set(&out.loops), cell_set(&naive));
    let iso_out = search(&SearchSpec::new(5, &[]).nonassociative().up_to_iso()).unwrap();
    assert_eq!(iso_out.count, iso::dedupe(&naive).len());
    assert_eq!(iso_out.count, 5);
}

#[test]
fn moufang_and_flexible_agree_with_predicates() {
    let all = as_tables(6, naive_loops(6));
    let flex: Vec<LoopTable> = all
        .iter()
        .filter(|q| (0..6).all(|x| (0..6).all(|y| q.mul(x, q.mul(y, x)) == q.mul(q.mul(x, y), x))))
        .cloned()
        .collect();
    let out = search(&SearchSpec::new(6, &[Law::Flexible]).up_to_iso()).unwrap();
    assert_eq!(out.count, iso::dedupe(&flex).len());
    let mouf: Vec<LoopTable> = all
        .iter()
        .filter(|q| (0..6).all(|c| classes::is_moufang_elem_raw(q, c)))
        .cloned()
        .collect();
    let out = search(&SearchSpec::new(6, &[Law::Moufang])).unwrap();
    assert_eq!(cell_set(&out.loops), cell_set(&mouf));
}

#[test]
fn output_independent_of_jobs() {
    let base = SearchSpec::new(8, &[Law::Moufang]).up_to_iso();
    let one = search(&base.clone().jobs(1)).unwrap();
    let two = search(&base.clone().jobs(2)).unwrap();
    let four = search(&base.jobs(4)).unwrap();
    assert_eq!(one.loops, two.loops);
    assert_eq!(one.loops, four.loops);
    assert_eq!(one.count, 5);
}

#[test]
fn limit_and_count_only() {
    let out = search(&SearchSpec::new(5, &[]).limit(10)).unwrap();
    assert_eq!(out.status, SearchStatus::LimitReached);
    assert_eq!(out.loops.len(), 10);
    let c = search(&SearchSpec::new(5, &[]).count_only()).unwrap();
    assert!(c.loops.is_empty());
    assert_eq!(c.count, 56);
}

#[test]
fn zero_budget_times_out_honestly() {
    let out = search(&SearchSpec::new(16, &[Law::Moufang]).budget(Duration::ZERO)).unwrap();
    assert_eq!(out.status, SearchStatus::TimedOut);
    assert!(!out.is_complete());
}

#[test]
fn emitted_loops_satisfy_every_requested_law() {
    let laws = [Law::Lcc, Law::Rcc, Law::Pa];
    let out = search(&SearchSpec::new(9, &laws).up_to_iso()).unwrap();
    assert!(out.is_complete());
    for q in &out.loops {
        assert!(classes::is_cc(q));
        assert!(q.is_power_associative());
    }
    let reps = iso::dedupe(&out.loops);
    assert_eq!(reps.len(), out.loops.len());
}

#[test]
fn lawless_order6_up_to_iso_matches_dedupe() {
    let naive = as_tables(6, naive_loops(6));
    assert_eq!(naive.len(), 9408);
    let classes = iso::dedupe(&naive).len();
    assert_eq!(classes, 109);
    let out = search(&SearchSpec::new(6, &[]).up_to_iso().count_only()).unwrap();
    assert_eq!(out.count, classes);
}

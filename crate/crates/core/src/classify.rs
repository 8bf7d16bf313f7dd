//! Classification of the nonassociative PACC loops of orders 16 and 27, and
//! the corpus-wide audit.

use std::collections::BTreeMap;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::audit::{audit, Outcome};
use crate::classes::{has_aip, is_cc, ClassContext};
use crate::elemset::ElemSet;
use crate::error::{LoopError, Result};
use crate::extension::{self, Params27};
use crate::fixtures;
use crate::iso;
use crate::search::{self, Law, SearchSpec, SearchStatus};
use crate::structure;
use crate::table::LoopTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopSummary {
    pub name: Option<String>,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl From<&LoopTable> for LoopSummary {
    fn from(q: &LoopTable) -> Self {
        LoopSummary {
            name: q.name().map(str::to_string),
            order: q.order(),
            table: q.rows(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Case27 {
    /// `T = Q`
    I,
    /// `T = M`
    II,
    /// `|T| = 9` and `T != M`
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Subcase {
    /// some `x` outside `M` commutes with some `y` in `M \ N`
    A,
    /// no such pair
    B,
}

#[derive(Clone, Debug, Serialize)]
pub struct Class27 {
    pub members: Vec<String>,
    pub representative: LoopSummary,
    pub nucleus_size: usize,
    pub center_size: usize,
    /// `|{x : x³ = 1}|`
    pub t_size: usize,
    pub t_is_subloop: bool,
    /// `|{x : E_x = I}|`
    pub m_size: usize,
    pub m_is_subloop: bool,
    pub case: Case27,
    pub subcase: Subcase,
    pub aip: bool,
}

impl Class27 {
    pub fn label(&self) -> String {
        format!("{:?}{:?}", self.case, self.subcase)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Order27Report {
    pub members: usize,
    pub nonassociative_members: usize,
    pub class_count: usize,
    pub aip_count: usize,
    pub case_counts: BTreeMap<String, usize>,
    pub classes: Vec<Class27>,
}

fn params_name(p: Params27) -> String {
    format!("{},{},{},{},{}", p.theta, p.alpha, p.beta, p.gamma, p.delta)
}

/// Case and subcase computed from the table alone.
pub fn case27(q: &LoopTable) -> Result<(Case27, Subcase)> {
    let n = q.order();
    let ctx = ClassContext::new(q);
    let nuc = *ctx.nucleus();
    let t = ElemSet::from_iter((0..n).filter(|&x| q.mul(x, q.mul(x, x)) == 0));
    let m = ctx.set_of(|c| ctx.is_moufang(c));
    let case = if t.len() == n {
        Case27::I
    } else if t == m {
        Case27::II
    } else if t.len() == 9 {
        Case27::III
    } else {
        return Err(LoopError::BadParameter(format!(
            "no order-27 case applies (|T| = {}, |M| = {})",
            t.len(),
            m.len()
        )));
    };
    let m_minus_n = m.difference(&nuc);
    let commuting = (0..n)
        .filter(|&x| !m.contains(x))
        .any(|x| m_minus_n.iter().any(|y| q.mul(x, y) == q.mul(y, x)));
    Ok((case, if commuting { Subcase::A } else { Subcase::B }))
}

/// Builds all 243 members of the order-27 family, keeps the nonassociative
/// ones and sorts them into isomorphism classes.
pub fn classify_order27() -> Result<Order27Report> {
    let all: Vec<Params27> = Params27::all().collect();
    let built: Vec<(Params27, LoopTable)> = all.par_iter().map(|&p| (p, extension::family27(p))).collect();
    let (params, loops): (Vec<Params27>, Vec<LoopTable>) =
        built.into_iter().filter(|(_, q)| !q.is_associative()).unzip();
    let classes = iso::iso_classes(&loops);
    let mut out = Vec::with_capacity(classes.len());
    for class in &classes {
        let rep = &loops[iso::representative(&loops, class)];
        let ctx = ClassContext::new(rep);
        let n = rep.order();
        let t = ElemSet::from_iter((0..n).filter(|&x| rep.mul(x, rep.mul(x, x)) == 0));
        let m = ctx.set_of(|c| ctx.is_moufang(c));
        let (case, subcase) = case27(rep)?;
        out.push(Class27 {
            members: class.iter().map(|&i| params_name(params[i])).collect(),
            representative: rep.into(),
            nucleus_size: ctx.nucleus().len(),
            center_size: structure::center(rep).len(),
            t_size: t.len(),
            t_is_subloop: structure::is_subloop(rep, &t),
            m_size: m.len(),
            m_is_subloop: structure::is_subloop(rep, &m),
            case,
            subcase,
            aip: has_aip(rep)?,
        });
    }
    out.sort_by(|a, b| (a.case, a.subcase).cmp(&(b.case, b.subcase)));
    let mut case_counts = BTreeMap::new();
    for c in &out {
        *case_counts.entry(format!("{:?}", c.case)).or_insert(0) += 1;
    }
    Ok(Order27Report {
        members: all.len(),
        nonassociative_members: loops.len(),
        class_count: out.len(),
        aip_count: out.iter().filter(|c| c.aip).count(),
        case_counts,
        classes: out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Facts16 {
    pub label: String,
    pub pacc: bool,
    pub nonassociative: bool,
    pub extra_loop: bool,
    pub nucleus_size: usize,
    pub center_size: usize,
    pub center_cyclic: bool,
    pub quotient_order: usize,
    pub quotient_exponent: Option<u64>,
    pub representative: LoopSummary,
}

pub fn facts16(label: &str, q: &LoopTable) -> Result<Facts16> {
    let nuc = structure::nucleus(q);
    let z = structure::center(q);
    let quo = structure::quotient(q, nuc.elements())?;
    Ok(Facts16 {
        label: label.to_string(),
        pacc: is_cc(q) && q.is_power_associative(),
        nonassociative: !q.is_associative(),
        extra_loop: Law::Extra.holds(q),
        nucleus_size: nuc.len(),
        center_size: z.len(),
        center_cyclic: z.to_vec().iter().any(|&x| q.elem_order(x) == z.len()),
        quotient_order: quo.order(),
        quotient_exponent: structure::exponent(&quo),
        representative: q.into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtraCensus {
    pub status: SearchStatus,
    pub nodes: u64,
    pub elapsed_secs: f64,
    pub classes: Vec<Facts16>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Order16Report {
    pub trio: Vec<Facts16>,
    pub trio_pairwise_nonisomorphic: bool,
    /// Parameter pairs `(r, s)` grouped by isomorphism class of `Q_{r,s}`.
    pub q16_classes: Vec<Vec<(u8, u8)>>,
    /// Both odd gives `Q_{1,1}`, anything else `Q_{0,0}`.
    pub parity_rule_holds: bool,
    pub extra_census: Option<ExtraCensus>,
    /// Trio plus census after deduplication, when the census ran.
    pub total_classes: Option<usize>,
}

/// The non-extra trio and the `Q_{r,s}` parity rule; with `census` set, also
/// searches for the nonassociative extra loops of order 16 within that budget.
pub fn classify_order16(census: Option<Duration>) -> Result<Order16Report> {
    let trio_loops = vec![fixtures::family16(0, 0), fixtures::family16(1, 1), fixtures::table2()];
    let labels = ["q16:0,0", "q16:1,1", "table2"];
    let trio = labels
        .iter()
        .zip(&trio_loops)
        .map(|(l, q)| facts16(l, q))
        .collect::<Result<Vec<_>>>()?;
    let trio_pairwise_nonisomorphic = (0..3).all(|i| {
        (i + 1..3).all(|j| iso::are_isomorphic(&trio_loops[i], &trio_loops[j]).is_none())
    });

    let pairs: Vec<(u8, u8)> = (0..4u8).flat_map(|r| (0..4u8).map(move |s| (r, s))).collect();
    let fam: Vec<LoopTable> = pairs.iter().map(|&(r, s)| fixtures::family16(r, s)).collect();
    let q16_classes: Vec<Vec<(u8, u8)>> = iso::iso_classes(&fam)
        .into_iter()
        .map(|c| c.into_iter().map(|i| pairs[i]).collect())
        .collect();
    let q00 = &trio_loops[0];
    let q11 = &trio_loops[1];
    let parity_rule_holds = pairs.iter().zip(&fam).all(|(&(r, s), q)| {
        let target = if r % 2 == 1 && s % 2 == 1 { q11 } else { q00 };
        iso::are_isomorphic(target, q).is_some()
    });

    let (extra_census, total_classes) = match census {
        None => (None, None),
        Some(budget) => {
            let spec = SearchSpec::new(16, &[Law::Extra]).nonassociative().up_to_iso().budget(budget);
            let out = search::search(&spec)?;
            if out.status != SearchStatus::Complete {
                return Err(LoopError::SearchIncomplete(format!(
                    "order-16 extra census after {:.0}s, {} classes so far",
                    out.elapsed.as_secs_f64(),
                    out.count
                )));
            }
            let classes = out
                .loops
                .iter()
                .enumerate()
                .map(|(i, q)| facts16(&format!("extra16:{i}"), q))
                .collect::<Result<Vec<_>>>()?;
            let mut all = trio_loops.clone();
            all.extend(out.loops.iter().cloned());
            let total = iso::dedupe(&all).len();
            (
                Some(ExtraCensus {
                    status: out.status,
                    nodes: out.nodes,
                    elapsed_secs: out.elapsed.as_secs_f64(),
                    classes,
                }),
                Some(total),
            )
        }
    };
    Ok(Order16Report {
        trio,
        trio_pairwise_nonisomorphic,
        q16_classes,
        parity_rule_holds,
        extra_census,
        total_classes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialReport {
    /// `((r, s), poly16(r, s) ≅ Q_{r,s})`
    pub q16: Vec<((u8, u8), bool)>,
    pub table2: bool,
}

impl PolynomialReport {
    pub fn all_hold(&self) -> bool {
        self.table2 && self.q16.iter().all(|(_, ok)| *ok)
    }
}

pub fn verify_polynomial_forms() -> PolynomialReport {
    let q16 = (0..4u8)
        .flat_map(|r| (0..4u8).map(move |s| (r, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(r, s)| {
            let ok = iso::are_isomorphic(&fixtures::poly16(r, s), &fixtures::family16(r, s)).is_some();
            ((r, s), ok)
        })
        .collect();
    PolynomialReport {
        q16,
        table2: iso::are_isomorphic(&fixtures::poly2_4(), &fixtures::table2()).is_some(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditFailure {
    pub loop_name: String,
    pub check: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusAudit {
    pub loops: usize,
    pub checks_passed: usize,
    pub checks_not_applicable: usize,
    pub failures: Vec<AuditFailure>,
}

pub fn audit_corpus(loops: &[LoopTable]) -> CorpusAudit {
    let reports: Vec<_> = loops.par_iter().map(audit).collect();
    let mut failures = Vec::new();
    let mut passed = 0;
    let mut na = 0;
    for (q, r) in loops.iter().zip(&reports) {
        for c in &r.checks {
            match &c.outcome {
                Outcome::Pass => passed += 1,
                Outcome::NotApplicable { .. } => na += 1,
                o @ Outcome::Fail { .. } => failures.push(AuditFailure {
                    loop_name: q.name().unwrap_or("unnamed").to_string(),
                    check: c.name.to_string(),
                    outcome: o.clone(),
                }),
            }
        }
    }
    CorpusAudit {
        loops: loops.len(),
        checks_passed: passed,
        checks_not_applicable: na,
        failures,
    }
}

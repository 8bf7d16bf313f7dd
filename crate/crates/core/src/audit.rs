//! The invariant suite: every identity and implication known to hold for CC
//! and PACC loops, run against a concrete table with counterexamples on failure.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::classes::{self, is_associative_on, is_extra_elem_raw, is_moufang_elem_raw, is_pseudomoufang_elem_raw, ClassContext};
use crate::elemset::ElemSet;
use crate::perm::{gcd, Perm};
use crate::structure::{self, close};
use crate::table::LoopTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Requires {
    Any,
    Cc,
    Pacc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail { witness: Vec<usize>, detail: String },
    NotApplicable { reason: String },
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub requires: Requires,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub cc: bool,
    pub pa: bool,
    pub pacc: bool,
    pub wip: bool,
    pub associative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub name: Option<String>,
    pub order: usize,
    pub hypotheses: Hypotheses,
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.outcome.is_fail())
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.outcome.is_pass()).count()
    }

    pub fn is_clean(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }
}

fn fail(witness: &[usize], detail: impl Into<String>) -> Outcome {
    Outcome::Fail {
        witness: witness.to_vec(),
        detail: detail.into(),
    }
}

fn skip(reason: impl Into<String>) -> Outcome {
    Outcome::NotApplicable {
        reason: reason.into(),
    }
}

/// Precomputed facts shared by the checks.
pub struct Audit<'a> {
    q: &'a LoopTable,
    n: usize,
    cls: ClassContext<'a>,
    hyp: Hypotheses,
    nucleus: ElemSet,
    center: ElemSet,
    assoc: ElemSet,
    wip: ElemSet,
    mfg: ElemSet,
    psm: ElemSet,
    ex: ElemSet,
    sq: ElemSet,
    groups: RefCell<HashMap<ElemSet, bool>>,
}

impl<'a> Audit<'a> {
    pub fn new(q: &'a LoopTable) -> Self {
        let cc = classes::is_cc(q);
        let pa = q.is_power_associative();
        let nucleus = *structure::nucleus(q).elements();
        let cls = ClassContext::with_facts(q, cc, nucleus);
        let wip = cls.set_of(|c| cls.is_wip(c));
        let n = q.order();
        Audit {
            q,
            n,
            hyp: Hypotheses {
                cc,
                pa,
                pacc: cc && pa,
                wip: wip.len() == n,
                associative: nucleus.len() == n,
            },
            center: *structure::center_within(q, &nucleus).elements(),
            assoc: *structure::associator_subloop(q).elements(),
            mfg: cls.set_of(|c| cls.is_moufang(c)),
            psm: cls.set_of(|c| cls.is_pseudomoufang(c)),
            ex: cls.set_of(|c| cls.is_extra(c)),
            sq: cls.set_of(|c| cls.is_square_nuclear(c)),
            wip,
            nucleus,
            cls,
            groups: RefCell::new(HashMap::new()),
        }
    }

    pub fn hypotheses(&self) -> &Hypotheses {
        &self.hyp
    }

    fn els(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    fn m(&self, x: usize, y: usize) -> usize {
        self.q.mul(x, y)
    }

    fn inv(&self, x: usize) -> usize {
        self.q.rho(x)
    }

    fn pow(&self, x: usize, k: i64) -> usize {
        self.q.pow(x, k).expect("power-associative element")
    }

    fn generated(&self, gens: &[usize]) -> ElemSet {
        close(self.q, &gens.iter().copied().collect())
    }

    fn is_group(&self, s: &ElemSet) -> bool {
        if let Some(&v) = self.groups.borrow().get(s) {
            return v;
        }
        let v = is_associative_on(self.q, s);
        self.groups.borrow_mut().insert(*s, v);
        v
    }

    fn is_automorphism(&self, p: &Perm) -> Option<[usize; 2]> {
        for x in self.els() {
            for y in self.els() {
                if p.apply(self.m(x, y)) != self.m(p.apply(x), p.apply(y)) {
                    return Some([x, y]);
                }
            }
        }
        None
    }

    /// `Q/H` for a normal `H`, or a failure naming the subloop.
    fn quotient_by(&self, h: &ElemSet, what: &str) -> Result<LoopTable, Outcome> {
        if !structure::is_subloop(self.q, h) {
            return Err(fail(&h.to_vec(), format!("{what} is not a subloop")));
        }
        structure::quotient(self.q, h).map_err(|_| fail(&h.to_vec(), format!("{what} is not normal")))
    }

    pub fn run(&self) -> AuditReport {
        let checks = CHECKS
            .iter()
            .map(|&(name, requires, f)| {
                let applicable = match requires {
                    Requires::Any => true,
                    Requires::Cc => self.hyp.cc,
                    Requires::Pacc => self.hyp.pacc,
                };
                let outcome = if applicable {
                    f(self)
                } else {
                    skip(match requires {
                        Requires::Cc => "needs a CC loop",
                        _ => "needs a PACC loop",
                    })
                };
                CheckResult { name, requires, outcome }
            })
            .collect();
        AuditReport {
            name: self.q.name().map(str::to_string),
            order: self.n,
            hypotheses: self.hyp.clone(),
            checks,
        }
    }
}

pub fn audit(q: &LoopTable) -> AuditReport {
    Audit::new(q).run()
}

type CheckFn = fn(&Audit<'_>) -> Outcome;

pub const CHECKS: &[(&str, Requires, CheckFn)] = &[
    ("divisions-invert", Requires::Any, divisions_invert),
    ("inverse-maps", Requires::Any, inverse_maps),
    ("power-window", Requires::Any, power_window),
    ("associator-form-of-cc-laws", Requires::Any, associator_form_of_cc_laws),
    ("cc-via-associators-and-commutators", Requires::Any, cc_via_associators),
    ("pa-criterion", Requires::Cc, pa_criterion),
    ("nucleus-quotient-abelian", Requires::Cc, nucleus_quotient_abelian),
    ("inner-maps-automorphisms", Requires::Cc, inner_maps_automorphisms),
    ("inner-maps-via-conjugations", Requires::Cc, inner_maps_via_conjugations),
    ("associator-symmetry", Requires::Cc, associator_symmetry),
    ("commutators-nuclear", Requires::Cc, commutators_nuclear),
    ("conjugation-commutator", Requires::Cc, conjugation_commutator),
    ("associator-product-rules", Requires::Cc, associator_product_rules),
    ("inner-map-associator-formulas", Requires::Cc, inner_map_associator_formulas),
    ("rinn-equals-linn", Requires::Cc, rinn_equals_linn),
    ("e-map-identities", Requires::Cc, e_map_identities),
    ("e-map-powers", Requires::Cc, e_map_powers),
    ("e-sixth-power", Requires::Pacc, e_sixth_power),
    ("division-shortcuts", Requires::Cc, division_shortcuts),
    ("wip-equivalences", Requires::Cc, wip_equivalences),
    ("wip-dual-fixed-points", Requires::Cc, wip_dual_fixed_points),
    ("class-subloops-normal", Requires::Cc, class_subloops_normal),
    ("wip-cyclic-closure", Requires::Cc, wip_cyclic_closure),
    ("wip-square-associators", Requires::Cc, wip_square_associators),
    ("wip-two-generated", Requires::Cc, wip_two_generated),
    ("flexible-equivalences", Requires::Cc, flexible_equivalences),
    ("moufang-characterizations", Requires::Cc, moufang_characterizations),
    ("moufang-pseudo-groups", Requires::Cc, moufang_pseudo_groups),
    ("moufang-nucleus-cosets", Requires::Cc, moufang_nucleus_cosets),
    ("moufang-products", Requires::Cc, moufang_products),
    ("extra-characterizations", Requires::Cc, extra_characterizations),
    ("extra-moufang-products", Requires::Cc, extra_moufang_products),
    ("pseudomoufang-characterizations", Requires::Cc, pseudomoufang_characterizations),
    ("two-of-three", Requires::Cc, two_of_three),
    ("wip-squares-extra", Requires::Cc, wip_squares_extra),
    ("power-classes", Requires::Pacc, power_classes),
    ("quotient-exponents", Requires::Pacc, quotient_exponents),
    ("nuclear-power-wip", Requires::Pacc, nuclear_power_wip),
    ("associative-subloops", Requires::Pacc, associative_subloops),
    ("pseudo-equals-extra", Requires::Pacc, pseudo_equals_extra),
    ("extra-generates-groups", Requires::Pacc, extra_generates_groups),
    ("square-conditions", Requires::Pacc, square_conditions),
    ("cyclic-quotient-group", Requires::Pacc, cyclic_quotient_group),
    ("central-generator-pairs", Requires::Pacc, central_generator_pairs),
    ("boolean-center", Requires::Pacc, boolean_center),
    ("nucleus-index-four", Requires::Pacc, nucleus_index_four),
    ("associator-coprime", Requires::Pacc, associator_coprime),
    ("order-divisibility", Requires::Pacc, order_divisibility),
    ("two-power-order", Requires::Pacc, two_power_order),
    ("order16-nonextra", Requires::Pacc, order16_nonextra),
];

fn divisions_invert(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        for z in a.els() {
            if q.mul(q.rdiv(z, x), x) != z || q.mul(x, q.ldiv(x, z)) != z {
                return fail(&[x, z], "division does not invert multiplication");
            }
        }
    }
    Outcome::Pass
}

fn inverse_maps(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        if q.lam(q.rho(x)) != x || q.mul(x, q.rho(x)) != 0 || q.mul(q.lam(x), x) != 0 {
            return fail(&[x], "inverse maps inconsistent");
        }
    }
    Outcome::Pass
}

fn power_window(a: &Audit) -> Outcome {
    let w = 2 * a.n as i64;
    for x in a.els().filter(|&x| a.q.is_pa_elem(x)) {
        for i in -w..=w {
            for j in -w..=w {
                if a.pow(x, i + j) != a.m(a.pow(x, i), a.pow(x, j)) {
                    return fail(&[x], format!("x^{i} x^{j} != x^{}", i + j));
                }
            }
        }
    }
    Outcome::Pass
}

fn associator_form_of_cc_laws(a: &Audit) -> Outcome {
    let q = a.q;
    let ts: Vec<Perm> = a.els().map(|x| q.t(x)).collect();
    let tinv: Vec<Perm> = ts.iter().map(Perm::inverse).collect();
    let mut rform = true;
    let mut lform = true;
    for x in a.els() {
        for y in a.els() {
            for z in a.els() {
                let s = q.associator(x, y, z);
                rform &= s == q.associator(x, z, ts[z].apply(y));
                lform &= s == q.associator(tinv[x].apply(y), x, z);
            }
        }
    }
    if rform != classes::is_rcc(q) {
        return fail(&[], "right law and its associator form disagree");
    }
    if lform != classes::is_lcc(q) {
        return fail(&[], "left law and its associator form disagree");
    }
    Outcome::Pass
}

fn symmetric_associators(q: &LoopTable) -> Option<[usize; 3]> {
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let s = q.associator(x, y, z);
                let perms = [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)];
                if perms.iter().any(|&(p, r, t)| q.associator(p, r, t) != s) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

fn nuclear_commutators(q: &LoopTable, nucleus: &ElemSet) -> Option<[usize; 2]> {
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            if !nucleus.contains(q.commutator(x, y)) {
                return Some([x, y]);
            }
        }
    }
    None
}

fn cc_via_associators(a: &Audit) -> Outcome {
    let other = symmetric_associators(a.q).is_none() && nuclear_commutators(a.q, &a.nucleus).is_none();
    if other != a.hyp.cc {
        return fail(&[], format!("cc={} but associator/commutator criterion={other}", a.hyp.cc));
    }
    Outcome::Pass
}

fn pa_criterion(a: &Audit) -> Outcome {
    let q = a.q;
    for c in a.els() {
        let c2 = q.mul(c, c);
        let by_inverse = q.rho(c) == q.lam(c);
        let by_square = q.mul(c, c2) == q.mul(c2, c);
        if by_inverse != q.is_pa_elem(c) || by_square != q.is_pa_elem(c) {
            return fail(&[c], "power-associativity tests disagree");
        }
    }
    Outcome::Pass
}

fn nucleus_quotient_abelian(a: &Audit) -> Outcome {
    match a.quotient_by(&a.nucleus, "nucleus") {
        Err(o) => o,
        Ok(qn) if !qn.is_associative() || !qn.is_commutative() => fail(&[], "Q/N is not an abelian group"),
        Ok(_) => Outcome::Pass,
    }
}

fn inner_maps_automorphisms(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        if let Some(w) = a.is_automorphism(&q.e(x)) {
            return fail(&[x, w[0], w[1]], "E_x is not an automorphism");
        }
        for y in a.els() {
            if let Some(w) = a.is_automorphism(&q.rinner(x, y)) {
                return fail(&[x, y, w[0], w[1]], "R(x,y) is not an automorphism");
            }
            if let Some(w) = a.is_automorphism(&q.linner(x, y)) {
                return fail(&[x, y, w[0], w[1]], "L(x,y) is not an automorphism");
            }
        }
    }
    Outcome::Pass
}

fn inner_maps_via_conjugations(a: &Audit) -> Outcome {
    let q = a.q;
    let ts: Vec<Perm> = a.els().map(|x| q.t(x)).collect();
    for x in a.els() {
        for y in a.els() {
            let r = ts[x].then(&ts[y]).then(&ts[a.m(x, y)].inverse());
            if r != q.rinner(x, y) {
                return fail(&[x, y], "R(x,y) != T_x T_y T_xy^-1");
            }
            let l = ts[x].inverse().then(&ts[y].inverse()).then(&ts[a.m(y, x)]);
            if l != q.linner(x, y) {
                return fail(&[x, y], "L(x,y) != T_x^-1 T_y^-1 T_yx");
            }
        }
    }
    Outcome::Pass
}

fn associator_symmetry(a: &Audit) -> Outcome {
    match symmetric_associators(a.q) {
        Some(w) => fail(&w, "associator changes under an argument permutation"),
        None => Outcome::Pass,
    }
}

fn commutators_nuclear(a: &Audit) -> Outcome {
    match nuclear_commutators(a.q, &a.nucleus) {
        Some(w) => fail(&w, "commutator outside the nucleus"),
        None => Outcome::Pass,
    }
}

fn conjugation_commutator(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        for y in a.els() {
            if q.t(y).apply(x) != q.mul(x, q.commutator(x, y)) {
                return fail(&[x, y], "xT_y != x[x,y]");
            }
        }
    }
    Outcome::Pass
}

fn associator_product_rules(a: &Audit) -> Outcome {
    let q = a.q;
    let ts: Vec<Perm> = a.els().map(|x| q.t(x)).collect();
    for z in a.els() {
        for u in a.els() {
            let s: Vec<usize> = a.els().map(|x| q.associator(x, z, u)).collect();
            let kernel: ElemSet = a.els().filter(|&x| q.associator(x, z, u) == 0).collect();
            if !structure::is_subloop(q, &kernel) {
                return fail(&[z, u], "{x : (x,z,u) = 1} is not a subloop");
            }
            for x in a.els() {
                let xr = q.rho(x);
                if ts[x].apply(s[xr]) != a.inv(s[x]) {
                    return fail(&[x, z, u], "(x^ρ,z,u)T_x != (x,z,u)^-1");
                }
                for y in a.els() {
                    let lhs = s[q.mul(x, y)];
                    if lhs != q.mul(ts[y].apply(s[x]), s[y]) || lhs != q.mul(s[x], ts[x].apply(s[y])) {
                        return fail(&[x, y, z, u], "associator of a product");
                    }
                    if q.commutator(s[x], y) != q.commutator(s[y], x) {
                        return fail(&[x, y, z, u], "[(x,z,u),y] != [(y,z,u),x]");
                    }
                    if (lhs == 0) != (s[x] == s[q.rho(y)]) {
                        return fail(&[x, y, z, u], "(xy,z,u) = 1 criterion");
                    }
                }
            }
        }
    }
    Outcome::Pass
}

fn inner_map_associator_formulas(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        for y in a.els() {
            let r = q.rinner(x, y);
            let l = q.linner(x, y);
            let (xl, yl) = (q.lam(x), q.lam(y));
            for z in a.els() {
                if l.apply(z) != q.mul(z, a.inv(q.associator(z, x, y))) {
                    return fail(&[x, y, z], "zL(x,y) != z(z,x,y)^-1");
                }
                if r.apply(z) != q.mul(z, q.associator(z, xl, yl)) {
                    return fail(&[x, y, z], "zR(x,y) != z(z,x^λ,y^λ)");
                }
            }
            if r.inverse() != q.linner(xl, yl) {
                return fail(&[x, y], "R(x,y)^-1 != L(x^λ,y^λ)");
            }
            if r != q.rinner(y, x) {
                return fail(&[x, y], "R(x,y) != R(y,x)");
            }
        }
    }
    Outcome::Pass
}

fn rinn_equals_linn(a: &Audit) -> Outcome {
    let q = a.q;
    let rg = structure::rinn_generators(q);
    for (i, g) in rg.iter().enumerate() {
        for h in &rg[i + 1..] {
            if g.then(h) != h.then(g) {
                return fail(&[], "right inner mappings do not commute");
            }
        }
    }
    let cap = structure::DEFAULT_GROUP_CAP;
    match (
        structure::group_closure(&rg, a.n, cap),
        structure::group_closure(&structure::linn_generators(q), a.n, cap),
    ) {
        (Ok(r), Ok(l)) if r == l => Outcome::Pass,
        (Ok(_), Ok(_)) => fail(&[], "RInn != LInn"),
        _ => skip("group closure cap exceeded"),
    }
}

fn e_map_identities(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        let e = a.cls.e(x);
        let (xl, xr) = (q.lam(x), q.rho(x));
        for y in a.els() {
            if e.apply(y) != q.mul(y, q.associator(y, xl, x)) {
                return fail(&[x, y], "yE_x != y(y,x^λ,x)");
            }
        }
        let (r, l) = (q.r(x), q.l(x));
        let forms = [
            q.rinner(xl, x),
            q.linner(x, xl).inverse(),
            q.linner(xr, x).inverse(),
            r.then(&l).then(&r.inverse()).then(&l.inverse()),
        ];
        if let Some(k) = forms.iter().position(|f| f != e) {
            return fail(&[x, k], "E_x expressions disagree");
        }
    }
    Outcome::Pass
}

fn e_map_powers(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els().filter(|&x| q.is_pa_elem(x)) {
        let (e, r, l) = (a.cls.e(x).clone(), q.r(x), q.l(x));
        if e.then(&r) != r.then(&e) || e.then(&l) != l.then(&e) {
            return fail(&[x], "E_x does not commute with R_x, L_x");
        }
        for k in -3i64..=6 {
            let xk = a.pow(x, k);
            let t = (k - 1) * k / 2;
            if q.e(xk) != e.pow(k * k) {
                return fail(&[x], format!("E_(x^{k}) != E_x^{}", k * k));
            }
            if q.r(xk) != r.pow(k).then(&e.pow(t)) {
                return fail(&[x], format!("R_(x^{k}) formula"));
            }
            if q.l(xk) != l.pow(k).then(&e.pow(-t)) {
                return fail(&[x], format!("L_(x^{k}) formula"));
            }
            for m in -3i64..=6 {
                if r.pow(k).then(&l.pow(m)) != l.pow(m).then(&r.pow(k)).then(&e.pow(m * k)) {
                    return fail(&[x], format!("R_x^{k} L_x^{m} exchange"));
                }
            }
        }
    }
    Outcome::Pass
}

fn e_sixth_power(a: &Audit) -> Outcome {
    match a.els().find(|&x| !a.cls.e(x).pow(6).is_identity()) {
        Some(x) => fail(&[x], "E_x^6 != I"),
        None => Outcome::Pass,
    }
}

fn division_shortcuts(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.els() {
        let (xr, xl) = (q.rho(x), q.lam(x));
        for y in a.els() {
            let ld = q.ldiv(x, y);
            if ld != q.mul(xr, q.mul(q.mul(y, x), xr)) || ld != q.mul(q.mul(q.mul(xl, y), xl), x) {
                return fail(&[x, y], "left division shortcut");
            }
            let rd = q.rdiv(y, x);
            if rd != q.mul(x, q.mul(xr, q.mul(y, xr))) || rd != q.mul(q.mul(xl, q.mul(x, y)), xl) {
                return fail(&[x, y], "right division shortcut");
            }
        }
    }
    Outcome::Pass
}

/// The seven WIP conditions for `c`, each quantified over all `x`.
pub fn wip_conditions(q: &LoopTable, cls: &ClassContext<'_>, c: usize) -> [bool; 7] {
    let n = q.order();
    let (cr, cl) = (q.rho(c), q.lam(c));
    let ec = cls.e(c);
    let all = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    [
        is_wip_raw(q, c),
        all(&|x| q.mul(x, q.rho(q.mul(c, x))) == cr),
        all(&|x| q.mul(q.lam(q.mul(x, c)), x) == cl),
        all(&|x| q.mul(q.mul(c, ec.apply(x)), q.rho(x)) == c),
        all(&|x| q.mul(q.mul(x, cls.e(x).apply(c)), cr) == x),
        all(&|x| q.associator(c, x, q.rho(x)) == q.associator(q.rho(x), c, cr)),
        all(&|x| q.associator(x, c, cr) == q.associator(cr, x, q.rho(x))),
    ]
}

fn is_wip_raw(q: &LoopTable, c: usize) -> bool {
    classes::is_wip_elem(q, c)
}

fn wip_equivalences(a: &Audit) -> Outcome {
    for c in a.els() {
        let v = wip_conditions(a.q, &a.cls, c);
        if let Some(k) = v.iter().position(|&b| b != v[0]) {
            return fail(&[c, k], "WIP conditions disagree");
        }
    }
    Outcome::Pass
}

fn wip_dual_fixed_points(a: &Audit) -> Outcome {
    for c in a.wip.iter() {
        for x in a.els() {
            if a.cls.e(c).fixes(x) != a.cls.e(x).fixes(c) {
                return fail(&[c, x], "xE_c = x and cE_x = c disagree");
            }
        }
    }
    Outcome::Pass
}

fn class_subloops_normal(a: &Audit) -> Outcome {
    for (set, what) in [(&a.wip, "W(Q)"), (&a.psm, "P(Q)"), (&a.ex, "Ex(Q)"), (&a.sq, "S(Q)")] {
        if let Err(o) = a.quotient_by(set, what) {
            return o;
        }
    }
    Outcome::Pass
}

fn wip_cyclic_closure(a: &Audit) -> Outcome {
    for c in a.wip.iter() {
        let g = a.generated(&[c]);
        if !g.is_subset(&a.wip) {
            return fail(&[c], "<c> leaves W(Q)");
        }
    }
    Outcome::Pass
}

fn wip_square_associators(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.wip.iter() {
        let x2 = q.mul(x, x);
        let cyc = a.generated(&[x]).to_vec();
        for b in a.els() {
            let b2 = q.mul(b, b);
            let s = a.generated(&[x, b]).to_vec();
            for &u in &s {
                for &v in &s {
                    if q.associator(x2, u, v) != 0 {
                        return fail(&[x, b, u, v], "(a^2,u,v) != 1 on <a,b>");
                    }
                    if q.is_pa_elem(b) && q.associator(b2, u, v) != 0 {
                        return fail(&[x, b, u, v], "(b^2,u,v) != 1 on <a,b>");
                    }
                }
            }
            for &u in &cyc {
                for &v in &cyc {
                    if q.associator(b2, u, v) != 0 {
                        return fail(&[x, b, u, v], "(b^2,u,v) != 1 on <a>");
                    }
                }
            }
        }
    }
    Outcome::Pass
}

fn wip_two_generated(a: &Audit) -> Outcome {
    let q = a.q;
    let mut seen = false;
    for x in a.wip.iter() {
        for b in a.els() {
            let mut gens: Vec<usize> = a.nucleus.to_vec();
            gens.extend([x, b]);
            if a.generated(&gens).len() != a.n {
                continue;
            }
            seen = true;
            if !a.nucleus.contains(q.mul(x, x)) {
                return fail(&[x, b], "a^2 not nuclear");
            }
            if q.is_pa_elem(b) {
                let b2 = q.mul(b, b);
                if !a.nucleus.contains(b2) {
                    return fail(&[x, b], "b^2 not nuclear");
                }
                if !a.is_group(&a.generated(&[q.mul(x, x), b])) {
                    return fail(&[x, b], "<a^2,b> not a group");
                }
                if q.is_pa_elem(x) {
                    if !a.is_group(&a.generated(&[x, b2])) {
                        return fail(&[x, b], "<a,b^2> not a group");
                    }
                    let u = q.associator(x, x, b);
                    if u != q.associator(x, b, b) {
                        return fail(&[x, b], "(a,a,b) != (a,b,b)");
                    }
                    if a.generated(&[u]) != a.assoc {
                        return fail(&[x, b, u], "(a,a,b) does not generate A(Q)");
                    }
                    if a.assoc.len() > 2 || !a.assoc.is_subset(&a.center) || !a.hyp.pa {
                        return fail(&[x, b], "A(Q) not a central subloop of order <= 2 in a PACC loop");
                    }
                }
            }
        }
    }
    if seen {
        Outcome::Pass
    } else {
        skip("no WIP a with Q = <a,b>N")
    }
}

fn flexible_equivalences(a: &Audit) -> Outcome {
    for c in a.els() {
        if let Err(crate::LoopError::Inconsistent { witness, left, right, .. }) = a.cls.eqns_equiv_check(c) {
            return fail(&witness, format!("{left} and {right} disagree"));
        }
    }
    Outcome::Pass
}

fn moufang_characterizations(a: &Audit) -> Outcome {
    let q = a.q;
    for c in a.els() {
        let cr = q.rho(c);
        let raw = is_moufang_elem_raw(q, c);
        let by_e = a.cls.e(c).is_identity();
        let by_assoc = a.els().all(|x| q.associator(x, c, cr) == 0);
        if raw != by_e || raw != by_assoc {
            return fail(&[c], "Moufang characterizations disagree");
        }
        let raw = is_pseudomoufang_elem_raw(q, c);
        let by_e = a.els().all(|x| a.cls.e(x).fixes(c));
        let by_assoc = a.els().all(|x| q.associator(c, x, q.rho(x)) == 0);
        if raw != by_e || raw != by_assoc {
            return fail(&[c], "pseudoMoufang characterizations disagree");
        }
    }
    Outcome::Pass
}

fn moufang_pseudo_groups(a: &Audit) -> Outcome {
    for x in a.mfg.intersection(&a.psm).iter() {
        for b in a.els().filter(|&b| a.q.is_pa_elem(b)) {
            if !a.is_group(&a.generated(&[x, b])) {
                return fail(&[x, b], "<a,b> not a group");
            }
        }
    }
    Outcome::Pass
}

fn moufang_nucleus_cosets(a: &Audit) -> Outcome {
    for x in a.mfg.iter() {
        for c in a.generated(&[x]).iter() {
            for m in a.nucleus.iter() {
                if !a.mfg.contains(a.m(c, m)) {
                    return fail(&[x, c, m], "<a>N leaves M(Q)");
                }
            }
        }
    }
    Outcome::Pass
}

fn moufang_products(a: &Audit) -> Outcome {
    let q = a.q;
    for x in a.mfg.iter() {
        for b in a.mfg.iter() {
            let (xr, br) = (q.rho(x), q.rho(b));
            let v = [
                a.mfg.contains(q.mul(x, b)),
                a.mfg.contains(q.mul(b, x)),
                a.els().all(|y| q.associator(y, x, b) == q.associator(y, xr, b)),
                a.els().all(|y| q.associator(y, x, b) == q.associator(y, x, br)),
            ];
            if let Some(k) = v.iter().position(|&t| t != v[0]) {
                return fail(&[x, b, k], "Moufang product conditions disagree");
            }
        }
    }
    Outcome::Pass
}

/// The extra-element conditions for `c`, each quantified over all `x, y`.
pub fn extra_conditions(q: &LoopTable, cls: &ClassContext<'_>, c: usize) -> [bool; 6] {
    let n = q.order();
    let all2 = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| f(x, y)));
    let m = |x, y| q.mul(x, y);
    [
        is_extra_elem_raw(q, c),
        all2(&|x, y| m(c, m(x, m(c, y))) == m(m(m(c, x), c), y)),
        all2(&|x, y| m(m(m(y, c), x), c) == m(y, m(c, m(x, c)))),
        all2(&|x, y| m(c, m(x, m(c, y))) == m(m(c, m(x, c)), y)),
        all2(&|x, y| m(m(m(y, c), x), c) == m(y, m(m(c, x), c))),
        cls.is_extra_via_square(c),
    ]
}

fn extra_characterizations(a: &Audit) -> Outcome {
    for c in a.els() {
        let v = extra_conditions(a.q, &a.cls, c);
        if let Some(k) = v.iter().position(|&t| t != v[0]) {
            return fail(&[c, k], "extra conditions disagree");
        }
    }
    Outcome::Pass
}

fn extra_moufang_products(a: &Audit) -> Outcome {
    for x in a.ex.iter() {
        for b in a.mfg.iter() {
            if !a.mfg.contains(a.m(x, b)) || !a.mfg.contains(a.m(b, x)) {
                return fail(&[x, b], "product of extra and Moufang is not Moufang");
            }
        }
    }
    Outcome::Pass
}

fn pseudomoufang_characterizations(a: &Audit) -> Outcome {
    let q = a.q;
    for c in a.els() {
        let mut two = true;
        let mut three = true;
        for x in a.els() {
            let (cx, xc) = (q.mul(c, x), q.mul(x, c));
            let (xr, xl) = (q.rho(x), q.lam(x));
            for y in a.els() {
                two &= cx == q.mul(q.mul(cx, q.mul(y, xr)), q.mul(x, q.rho(y)));
                three &= xc == q.mul(q.mul(q.lam(y), x), q.mul(q.mul(xl, y), xc));
            }
        }
        let one = a.psm.contains(c);
        if one != two || one != three {
            return fail(&[c], format!("pseudoMoufang conditions disagree: {one} {two} {three}"));
        }
    }
    Outcome::Pass
}

fn two_of_three(a: &Audit) -> Outcome {
    for c in a.els() {
        let v = [a.wip.contains(c), a.mfg.contains(c), a.psm.contains(c)];
        let k = v.iter().filter(|&&t| t).count();
        if k == 2 {
            return fail(&[c], "exactly two of WIP, Moufang, pseudoMoufang");
        }
        if k == 3 && !a.ex.contains(c) {
            return fail(&[c], "WIP, Moufang and pseudoMoufang but not extra");
        }
    }
    Outcome::Pass
}

fn wip_squares_extra(a: &Audit) -> Outcome {
    for c in a.wip.iter() {
        let c2 = a.m(c, c);
        if !a.ex.contains(c2) || !a.nucleus.contains(a.m(c2, c2)) {
            return fail(&[c], "c^2 not extra or c^2c^2 not nuclear");
        }
    }
    Outcome::Pass
}

fn power_classes(a: &Audit) -> Outcome {
    for c in a.els() {
        if !a.wip.contains(a.pow(c, 3)) {
            return fail(&[c], "c^3 not WIP");
        }
        if !a.ex.contains(a.pow(c, 6)) {
            return fail(&[c], "c^6 not extra");
        }
        if !a.nucleus.contains(a.pow(c, 12)) {
            return fail(&[c], "c^12 not nuclear");
        }
    }
    Outcome::Pass
}

fn quotient_exponents(a: &Audit) -> Outcome {
    let cases = [(&a.wip, "W(Q)", 3u64), (&a.ex, "Ex(Q)", 6), (&a.nucleus, "N(Q)", 12)];
    for (h, what, e) in cases {
        let qh = match a.quotient_by(h, what) {
            Ok(t) => t,
            Err(o) => return o,
        };
        if !qh.is_associative() || !qh.is_commutative() {
            return fail(&[], format!("Q/{what} not an abelian group"));
        }
        let exp = structure::exponent(&qh).unwrap_or(0);
        if exp == 0 || e % exp != 0 {
            return fail(&[], format!("Q/{what} has exponent {exp}, not dividing {e}"));
        }
    }
    Outcome::Pass
}

fn nuclear_power_wip(a: &Audit) -> Outcome {
    for c in a.els() {
        for r in (1..=12).filter(|r| r % 3 != 0) {
            if a.nucleus.contains(a.pow(c, r)) && !a.wip.contains(c) {
                return fail(&[c, r as usize], "a^r nuclear with 3 not dividing r, but a not WIP");
            }
        }
    }
    Outcome::Pass
}

fn associative_subloops(a: &Audit) -> Outcome {
    for x in a.els() {
        let (x3, x6) = (a.pow(x, 3), a.pow(x, 6));
        for b in a.els() {
            if !a.is_group(&a.generated(&[x3, a.pow(b, 2)])) {
                return fail(&[x, b], "<a^3,b^2> not a group");
            }
            if !a.is_group(&a.generated(&[x6, b])) {
                return fail(&[x, b], "<a^6,b> not a group");
            }
        }
    }
    Outcome::Pass
}

fn pseudo_equals_extra(a: &Audit) -> Outcome {
    if a.psm != a.ex {
        return fail(&a.psm.difference(&a.ex).union(&a.ex.difference(&a.psm)).to_vec(), "P(Q) != Ex(Q)");
    }
    if !a.ex.is_subset(&a.wip) {
        return fail(&a.ex.difference(&a.wip).to_vec(), "Ex(Q) not inside W(Q)");
    }
    Outcome::Pass
}

fn extra_generates_groups(a: &Audit) -> Outcome {
    for x in a.ex.iter() {
        for b in a.els() {
            if !a.is_group(&a.generated(&[x, b])) {
                return fail(&[x, b], "<a,b> not a group for extra a");
            }
        }
    }
    Outcome::Pass
}

fn square_conditions(a: &Audit) -> Outcome {
    let squares: Vec<usize> = a.els().map(|x| a.m(x, x)).collect();
    let every = |s: &ElemSet| squares.iter().all(|&y| s.contains(y));
    let v = [
        a.hyp.wip,
        every(&a.nucleus),
        every(&a.ex),
        every(&a.mfg),
        every(&a.psm),
        every(&a.wip),
    ];
    match v.iter().position(|&t| t != v[0]) {
        Some(k) => fail(&[k], format!("square conditions disagree: {v:?}")),
        None => Outcome::Pass,
    }
}

fn cyclic_quotient_group(a: &Audit) -> Outcome {
    let qn = match a.quotient_by(&a.nucleus, "N(Q)") {
        Ok(t) => t,
        Err(o) => return o,
    };
    let cyclic = (0..qn.order()).any(|x| qn.elem_order(x) == qn.order());
    if cyclic && !a.hyp.associative {
        return fail(&[], "Q/N cyclic but Q not associative");
    }
    Outcome::Pass
}

/// Up to `limit` pairs `(a, b)` with `<a, b> = Q`, in lexicographic order.
fn generating_pairs(a: &Audit, limit: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 1..a.n {
        for b in x + 1..a.n {
            if a.generated(&[x, b]).len() == a.n {
                out.push((x, b));
                if out.len() == limit {
                    return out;
                }
            }
        }
    }
    out
}

fn central_generator_pairs(a: &Audit) -> Outcome {
    let q = a.q;
    let z_in = |x: usize| a.center.contains(x);
    let pairs = generating_pairs(a, 4);
    let mut used = false;
    for (x, b) in pairs {
        let u = q.ldiv(b, a.cls.e(x).apply(b));
        let v = q.ldiv(x, a.cls.e(b).apply(x));
        if !z_in(u) || !z_in(v) {
            continue;
        }
        used = true;
        let p = |g: usize, k: i64| a.pow(g, k);
        let w = [x, b, u, v];
        if p(u, 3) != p(v, 3) || p(u, 6) != 0 || p(v, 6) != 0 {
            return fail(&w, "u^3 = v^3, u^6 = v^6 = 1 fails");
        }
        if !a.nucleus.contains(p(x, 6)) || !a.nucleus.contains(p(b, 6)) {
            return fail(&w, "a^6 or b^6 not nuclear");
        }
        if a.generated(&[u, v]) != a.assoc || !a.assoc.is_subset(&a.center) {
            return fail(&w, "A(Q) != <u,v> inside Z(Q)");
        }
        let ab = |i: i64, j: i64| q.mul(p(x, i), p(b, j));
        let r = 0..=3i64;
        for i in r.clone() {
            for j in r.clone() {
                for k in r.clone() {
                    for l in r.clone() {
                        for m in r.clone() {
                            for nn in r.clone() {
                                let lhs = q.associator(ab(i, j), ab(k, l), ab(m, nn));
                                let rhs = q.mul(
                                    p(u, -i * k * nn - i * l * m - j * k * m),
                                    p(v, -i * l * nn - j * k * nn - j * l * m),
                                );
                                if lhs != rhs {
                                    return fail(&w, format!("associator formula at {:?}", (i, j, k, l, m, nn)));
                                }
                            }
                        }
                    }
                }
            }
        }
        let z = q.commutator(b, x);
        if !z_in(z) {
            continue;
        }
        let zuv = |ze: i64, ue: i64, ve: i64| q.mul(q.mul(p(z, ze), p(u, ue)), p(v, ve));
        for i in -3..=6i64 {
            for j in -3..=6i64 {
                let lhs = q.mul(p(b, i), p(x, j));
                let rhs = q.mul(ab(j, i), zuv(i * j, i * (j - 1) * j / 2, -j * (i - 1) * i / 2));
                if lhs != rhs {
                    return fail(&w, format!("b^i a^j formula at {:?}: {lhs} vs {rhs}", (i, j)));
                }
            }
        }
        for i in 0..6i64 {
            for j in 0..6i64 {
                for k in 0..6i64 {
                    for l in 0..6i64 {
                        let lhs = q.mul(ab(i, j), ab(k, l));
                        let c = zuv(j * k, i * l * k + j * (k - 1) * k / 2, -i * j * l - k * (j - 1) * j / 2);
                        let rhs = q.mul(ab(i + k, j + l), c);
                        if lhs != rhs {
                            return fail(&w, format!("product formula at {:?}: {lhs} vs {rhs}", (i, j, k, l)));
                        }
                    }
                }
            }
        }
        if z_in(p(x, 3)) && (p(u, 3) != 0 || p(v, 3) != 0 || p(z, 3) != 0 || !z_in(p(b, 3))) {
            return fail(&[x, b, u, v, z], "a^3 central but u^3, v^3, z^3, b^3 conclusions fail");
        }
        if z_in(p(x, 2)) && z_in(p(b, 2)) && (u != v || u != p(z, 2) || p(u, 2) != 0 || p(z, 4) != 0) {
            return fail(&[x, b, u, v, z], "a^2, b^2 central but u = v = z^2 fails");
        }
    }
    if used {
        Outcome::Pass
    } else {
        skip("no generating pair with central u, v")
    }
}

fn is_elementary_2group(q: &LoopTable, s: &ElemSet) -> bool {
    s.iter().all(|x| q.mul(x, x) == 0) && s.iter().all(|x| s.iter().all(|y| q.mul(x, y) == q.mul(y, x)))
}

fn boolean_center(a: &Audit) -> Outcome {
    let q = a.q;
    let z2 = is_elementary_2group(q, &a.center);
    if z2 && a.assoc.is_subset(&a.center) && !a.hyp.wip {
        return fail(&[], "Z elementary abelian 2-group with A <= Z, but not WIP");
    }
    if z2 && a.nucleus == a.center && a.ex.len() != a.n {
        return fail(&[], "N = Z elementary abelian 2-group, but not extra");
    }
    Outcome::Pass
}

fn nucleus_index_four(a: &Audit) -> Outcome {
    if a.n != 4 * a.nucleus.len() {
        return skip("|Q/N| != 4");
    }
    let q = a.q;
    if !a.els().all(|x| a.nucleus.contains(q.mul(x, x))) || !a.hyp.wip {
        return fail(&[], "Q/N not elementary abelian or Q not WIP");
    }
    if a.nucleus.len() % 4 != 0 {
        return fail(&[], "4 does not divide |N|");
    }
    let labels = structure::coset_labels(q, &a.nucleus);
    for x in a.els().filter(|&x| labels[x] != 0) {
        for b in a.els().filter(|&b| labels[b] != 0 && labels[b] != labels[x]) {
            let u = q.associator(x, x, b);
            if u == 0 || u != q.associator(x, b, b) {
                return fail(&[x, b], "(a,a,b) = (a,b,b) != 1 fails");
            }
            let expect: ElemSet = [0, u].into_iter().collect();
            if a.assoc != expect || !a.assoc.is_subset(&a.center) {
                return fail(&[x, b, u], "A(Q) != {1,u} inside Z(Q)");
            }
        }
    }
    Outcome::Pass
}

fn associator_coprime(a: &Audit) -> Outcome {
    let na = a.assoc.len() as u64;
    let index = (a.n / a.nucleus.len()) as u64;
    if gcd(na, index) == 1 && !a.hyp.associative {
        return fail(&[], "|A| prime to |Q/N| but Q not a group");
    }
    if na % 3 != 0 && !a.hyp.wip {
        return fail(&[], "3 does not divide |A| but Q not WIP");
    }
    for x in a.els() {
        let e = a.cls.e(x);
        for k in (1..=12i64).filter(|&k| gcd(k as u64, na) == 1) {
            let fixed = e.pow(k).is_identity() || a.q.e(a.pow(x, k)).is_identity();
            if fixed && !e.is_identity() {
                return fail(&[x, k as usize], "E_a^n = I or E_(a^n) = I with n prime to |A|, but E_a != I");
            }
        }
    }
    Outcome::Pass
}

fn order_divisibility(a: &Audit) -> Outcome {
    if a.hyp.associative {
        return skip("associative");
    }
    if a.hyp.wip && a.n % 16 != 0 {
        return fail(&[], "WIP nonassociative PACC loop of order not divisible by 16");
    }
    if !a.hyp.wip && a.n % 27 != 0 {
        return fail(&[], "non-WIP nonassociative PACC loop of order not divisible by 27");
    }
    Outcome::Pass
}

fn two_power_order(a: &Audit) -> Outcome {
    if !a.n.is_power_of_two() {
        return skip("order not a power of 2");
    }
    if a.center.len() < 2 && a.n > 1 {
        return fail(&[], "trivial center");
    }
    if !a.hyp.wip {
        return fail(&[], "not WIP");
    }
    if !a.els().all(|x| a.nucleus.contains(a.m(x, x))) {
        return fail(&[], "Q/N not elementary abelian");
    }
    Outcome::Pass
}

fn order16_nonextra(a: &Audit) -> Outcome {
    if a.n != 16 || a.ex.len() == a.n {
        return skip("not a nonextra loop of order 16");
    }
    if a.nucleus.len() != 4 || !a.els().all(|x| a.nucleus.contains(a.m(x, x))) {
        return fail(&[], "|N| != 4 or Q/N not Z2 x Z2");
    }
    let zc = a.center.len();
    let z_cyclic = a.center.iter().any(|x| a.q.elem_order(x) == zc);
    if !((zc == 4 && z_cyclic) || zc == 2) {
        return fail(&a.center.to_vec(), "center neither cyclic of order 4 nor of order 2");
    }
    Outcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn assert_clean(q: &LoopTable) -> AuditReport {
        let r = audit(q);
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{:?}: {bad:#?}", q.name());
        r
    }

    #[test]
    fn cyclic12_passes_everything_applicable() {
        let r = assert_clean(&fixtures::cyclic(12));
        assert!(r.hypotheses.pacc && r.hypotheses.associative);
    }

    #[test]
    fn table1_cc_checks_pass_pacc_checks_skip() {
        let r = assert_clean(&fixtures::table1());
        assert!(r.hypotheses.cc && !r.hypotheses.pa);
        for c in &r.checks {
            match c.requires {
                Requires::Pacc => assert!(matches!(c.outcome, Outcome::NotApplicable { .. }), "{}", c.name),
                Requires::Cc => assert!(!c.outcome.is_fail(), "{}", c.name),
                Requires::Any => {}
            }
        }
    }

    #[test]
    fn family27_sample_is_clean() {
        let r = assert_clean(&fixtures::family27(1, 0, 1, 0, 1));
        assert!(r.hypotheses.pacc);
        assert_eq!(r.get("power-classes"), Some(&Outcome::Pass));
    }

    #[test]
    fn order16_fixtures_are_clean() {
        for q in [fixtures::table2(), fixtures::family16(0, 0), fixtures::family16(1, 1), fixtures::poly2_4()] {
            let r = assert_clean(&q);
            assert_eq!(r.get("order16-nonextra"), Some(&Outcome::Pass));
            assert_eq!(r.get("nucleus-index-four"), Some(&Outcome::Pass));
        }
    }

    #[test]
    fn non_cc_loop_reports_cc_checks_not_applicable() {
        let q = LoopTable::from_rows(&[
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ])
        .unwrap();
        let r = assert_clean(&q);
        assert!(!r.hypotheses.cc);
        assert!(matches!(r.get("associator-symmetry"), Some(Outcome::NotApplicable { .. })));
    }

    #[test]
    fn broken_identity_is_caught() {
        // Q/N for the order-16 table is not cyclic; a non-CC loop must never report cc
        let q = fixtures::family16(1, 1);
        let a = Audit::new(&q);
        assert_eq!(cyclic_quotient_group(&a), Outcome::Pass);
        assert!(fail(&[1], "x").is_fail());
    }
}

//! Equational laws as small postfix programs over variables, instantiated
//! over every variable tuple for a fixed order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classes;
use crate::error::LoopError;
use crate::table::LoopTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Lcc,
    Rcc,
    Pa,
    Extra,
    Moufang,
    Wip,
    Flexible,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::Lcc,
        Law::Rcc,
        Law::Pa,
        Law::Extra,
        Law::Moufang,
        Law::Wip,
        Law::Flexible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Lcc => "lcc",
            Law::Rcc => "rcc",
            Law::Pa => "pa",
            Law::Extra => "extra",
            Law::Moufang => "moufang",
            Law::Wip => "wip",
            Law::Flexible => "flexible",
        }
    }

    /// Whole-table check used to validate finished search results.
    pub fn holds(self, q: &LoopTable) -> bool {
        let n = q.order();
        match self {
            Law::Lcc => classes::is_lcc(q),
            Law::Rcc => classes::is_rcc(q),
            Law::Pa => q.is_power_associative(),
            Law::Extra => (0..n).all(|c| classes::is_extra_elem_raw(q, c)),
            Law::Moufang => (0..n).all(|c| classes::is_moufang_elem_raw(q, c)),
            Law::Wip => (0..n).all(|c| classes::is_wip_elem(q, c)),
            Law::Flexible => (0..n).all(|x| (0..n).all(|y| q.mul(x, q.mul(y, x)) == q.mul(q.mul(x, y), x))),
        }
    }

    /// Equations enforced during search. `Pa` contributes only a necessary
    /// one-variable identity; finished tables are filtered by [`Law::holds`].
    /// `Moufang` and `Extra` also carry identities they imply (flexibility,
    /// the alternative laws, the inverse properties) because those propagate
    /// far better than the defining three-variable laws alone.
    pub(crate) fn equations(self) -> Vec<Equation> {
        use Term::*;
        let (x, y, z) = (|| V(0), || V(1), || V(2));
        let m = |a: Term, b: Term| Mul(Box::new(a), Box::new(b));
        let ld = |a: Term, b: Term| LDiv(Box::new(a), Box::new(b));
        let rd = |a: Term, b: Term| RDiv(Box::new(a), Box::new(b));
        let flexible = || Equation::new(m(x(), m(y(), x())), m(m(x(), y()), x()));
        let moufang = || {
            vec![
                Equation::new(m(x(), m(m(y(), z()), x())), m(m(x(), y()), m(z(), x()))),
                Equation::new(m(m(x(), m(y(), z())), x()), m(m(x(), y()), m(z(), x()))),
                flexible(),
                Equation::new(m(x(), m(x(), y())), m(m(x(), x()), y())),
                Equation::new(m(m(y(), x()), x()), m(y(), m(x(), x()))),
                Equation::new(m(rd(E, x()), m(x(), y())), y()),
                Equation::new(m(m(y(), x()), ld(x(), E)), y()),
                Equation::new(ld(m(x(), y()), E), m(ld(y(), E), ld(x(), E))),
            ]
        };
        match self {
            Law::Lcc => vec![Equation::new(
                m(z(), m(y(), x())),
                m(rd(m(z(), y()), z()), m(z(), x())),
            )],
            Law::Rcc => vec![Equation::new(
                m(m(x(), y()), z()),
                m(m(x(), z()), ld(z(), m(y(), z()))),
            )],
            Law::Pa => vec![Equation::new(m(x(), m(x(), x())), m(m(x(), x()), x()))],
            Law::Extra => {
                let mut v = vec![Equation::new(
                    m(x(), m(y(), m(z(), x()))),
                    m(m(m(x(), y()), z()), x()),
                )];
                v.extend(moufang());
                v
            }
            Law::Moufang => moufang(),
            Law::Wip => vec![Equation::new(m(x(), ld(m(y(), x()), E)), ld(y(), E))],
            Law::Flexible => vec![flexible()],
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lcc" => Ok(Law::Lcc),
            "rcc" => Ok(Law::Rcc),
            "pa" => Ok(Law::Pa),
            "extra" => Ok(Law::Extra),
            "moufang" => Ok(Law::Moufang),
            "wip" => Ok(Law::Wip),
            "flex" | "flexible" => Ok(Law::Flexible),
            other => Err(LoopError::BadParameter(format!("unknown law '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Term {
    V(u8),
    E,
    Mul(Box<Term>, Box<Term>),
    LDiv(Box<Term>, Box<Term>),
    RDiv(Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Var(u8),
    Unit,
    Mul,
    LDiv,
    RDiv,
}

#[derive(Clone, Debug)]
pub(crate) struct Equation {
    pub lhs: Vec<Tok>,
    pub rhs: Vec<Tok>,
    pub arity: usize,
}

impl Equation {
    fn new(l: Term, r: Term) -> Self {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        let mut arity = 0;
        compile(&l, &mut lhs, &mut arity);
        compile(&r, &mut rhs, &mut arity);
        Equation { lhs, rhs, arity }
    }
}

fn compile(t: &Term, out: &mut Vec<Tok>, arity: &mut usize) {
    match t {
        Term::V(i) => {
            *arity = (*arity).max(*i as usize + 1);
            out.push(Tok::Var(*i));
        }
        Term::E => out.push(Tok::Unit),
        Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => {
            compile(a, out, arity);
            compile(b, out, arity);
            out.push(match t {
                Term::Mul(..) => Tok::Mul,
                Term::LDiv(..) => Tok::LDiv,
                _ => Tok::RDiv,
            });
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Instance {
    pub eq: u16,
    pub vars: [u8; 3],
}

/// Every equation of `laws`, instantiated over all variable tuples.
pub(crate) fn instantiate(laws: &[Law], n: usize) -> (Vec<Equation>, Vec<Instance>) {
    let eqs: Vec<Equation> = laws.iter().flat_map(|l| l.equations()).collect();
    let mut insts = Vec::new();
    for (k, e) in eqs.iter().enumerate() {
        let total = n.pow(e.arity as u32);
        for t in 0..total {
            let mut vars = [0u8; 3];
            let mut r = t;
            for v in vars.iter_mut().take(e.arity) {
                *v = (r % n) as u8;
                r /= n;
            }
            insts.push(Instance { eq: k as u16, vars });
        }
    }
    (eqs, insts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_round_trip() {
        for l in Law::ALL {
            assert_eq!(l.name().parse::<Law>().unwrap(), l);
        }
        assert!("bogus".parse::<Law>().is_err());
    }

    #[test]
    fn table_checks_on_fixtures() {
        let t1 = fixtures::table1();
        assert!(Law::Lcc.holds(&t1) && Law::Rcc.holds(&t1));
        assert!(!Law::Pa.holds(&t1));
        let q8 = fixtures::quaternion8();
        assert!(Law::ALL.iter().all(|l| l.holds(&q8)));
    }

    #[test]
    fn instance_counts() {
        let (eqs, insts) = instantiate(&[Law::Lcc, Law::Pa], 4);
        assert_eq!(eqs.len(), 2);
        assert_eq!(insts.len(), 64 + 4);
    }
}

use std::str::FromStr;

use loopforge::classes::{self, is_associative_on};
use loopforge::structure::close;
use loopforge::LoopTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckLaw {
    Lcc,
    Rcc,
    Cc,
    Pa,
    Wip,
    Moufang,
    Extra,
    Flex,
    Aip,
    Diassoc,
}

impl CheckLaw {
    pub fn name(self) -> &'static str {
        match self {
            CheckLaw::Lcc => "lcc",
            CheckLaw::Rcc => "rcc",
            CheckLaw::Cc => "cc",
            CheckLaw::Pa => "pa",
            CheckLaw::Wip => "wip",
            CheckLaw::Moufang => "moufang",
            CheckLaw::Extra => "extra",
            CheckLaw::Flex => "flex",
            CheckLaw::Aip => "aip",
            CheckLaw::Diassoc => "diassoc",
        }
    }
}

impl FromStr for CheckLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "lcc" => CheckLaw::Lcc,
            "rcc" => CheckLaw::Rcc,
            "cc" => CheckLaw::Cc,
            "pa" => CheckLaw::Pa,
            "wip" => CheckLaw::Wip,
            "moufang" => CheckLaw::Moufang,
            "extra" => CheckLaw::Extra,
            "flex" | "flexible" => CheckLaw::Flex,
            "aip" => CheckLaw::Aip,
            "diassoc" => CheckLaw::Diassoc,
            other => return Err(format!("unknown law '{other}'")),
        })
    }
}

/// `None` when the law holds, otherwise the first witness found.
pub fn counterexample(q: &LoopTable, law: CheckLaw) -> Option<Vec<usize>> {
    let n = q.order();
    let first_elem = |pred: &dyn Fn(usize) -> bool| (0..n).find(|&c| !pred(c)).map(|c| vec![c]);
    match law {
        CheckLaw::Lcc => classes::lcc_counterexample(q).map(|w| w.to_vec()),
        CheckLaw::Rcc => classes::rcc_counterexample(q).map(|w| w.to_vec()),
        CheckLaw::Cc => counterexample(q, CheckLaw::Lcc).or_else(|| counterexample(q, CheckLaw::Rcc)),
        CheckLaw::Pa => first_elem(&|c| q.is_pa_elem(c)),
        CheckLaw::Wip => (0..n).find_map(|c| {
            (0..n)
                .find(|&x| q.mul(c, q.rho(q.mul(x, c))) != q.rho(x))
                .map(|x| vec![c, x])
        }),
        CheckLaw::Moufang => first_elem(&|c| classes::is_moufang_elem_raw(q, c)),
        CheckLaw::Extra => first_elem(&|c| classes::is_extra_elem_raw(q, c)),
        CheckLaw::Flex => (0..n).find_map(|x| {
            (0..n)
                .find(|&y| q.mul(x, q.mul(y, x)) != q.mul(q.mul(x, y), x))
                .map(|y| vec![x, y])
        }),
        CheckLaw::Aip => {
            if let Some(c) = (0..n).find(|&c| !q.is_pa_elem(c)) {
                return Some(vec![c]);
            }
            let inv = |x: usize| q.rho(x);
            (0..n).find_map(|x| {
                (0..n)
                    .find(|&y| inv(q.mul(x, y)) != q.mul(inv(x), inv(y)))
                    .map(|y| vec![x, y])
            })
        }
        CheckLaw::Diassoc => (0..n).find_map(|a| {
            (a..n)
                .find(|&b| !is_associative_on(q, &close(q, &[a, b].into_iter().collect())))
                .map(|b| vec![a, b])
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopforge::fixtures;

    #[test]
    fn table1_witnesses() {
        let q = fixtures::table1();
        assert_eq!(counterexample(&q, CheckLaw::Cc), None);
        assert_eq!(counterexample(&q, CheckLaw::Pa), Some(vec![12]));
        assert!(counterexample(&q, CheckLaw::Wip).is_some());
    }

    #[test]
    fn agrees_with_core_predicates() {
        for q in [fixtures::quaternion8(), fixtures::family16(1, 1), fixtures::family27(1, 0, 1, 0, 1)] {
            assert_eq!(counterexample(&q, CheckLaw::Diassoc).is_none(), classes::is_diassociative(&q));
            assert_eq!(
                counterexample(&q, CheckLaw::Aip).is_none(),
                classes::has_aip(&q).unwrap_or(false)
            );
        }
    }
}

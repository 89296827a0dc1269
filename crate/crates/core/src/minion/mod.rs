//! Monoidal minions `𝓜_{M,a}`: commutative tuples over a monoid with prescribed
//! product, their minors, relevant coordinates, and block-symmetric elements.

mod free;
mod poly;

pub use free::{free_structure_template, hom_from_tuple, power_structure, verify_xi_bijection, xi_map, FreeStructure, XiReport};
pub use poly::{
    build_alternating_poly, build_block_symmetric_poly, check_2block_symmetric, check_alternating,
    is_plin_polymorphism, no_alternating_certificate, Operation, PolymorphismTable, Shape, SymbolicPolymorphism,
    EVALUATION_BUDGET,
};

use serde::Serialize;

use crate::algebra::FiniteMonoid;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MinionElement {
    pub target: usize,
    pub entries: Vec<usize>,
}

fn pairwise_commuting(m: &FiniteMonoid, xs: &[usize]) -> bool {
    xs.iter().enumerate().all(|(i, &a)| xs[i + 1..].iter().all(|&b| m.commute(a, b)))
}

impl MinionElement {
    pub fn new(m: &FiniteMonoid, target: usize, entries: Vec<usize>) -> Result<Self> {
        let b = Self { target, entries };
        if !b.is_valid(m) {
            return Err(Error::PreconditionFailed(format!("{:?} is not in the minion for {}", b.entries, target)));
        }
        Ok(b)
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn is_valid(&self, m: &FiniteMonoid) -> bool {
        self.target < m.len()
            && self.entries.iter().all(|&x| x < m.len())
            && pairwise_commuting(m, &self.entries)
            && m.prod(self.entries.iter().copied()) == self.target
    }

    pub fn render(&self, m: &FiniteMonoid) -> String {
        let parts: Vec<&str> = self.entries.iter().map(|&x| m.label(x)).collect();
        format!("({})", parts.join(","))
    }
}

/// `c_j = ∏_{π(i) = j} b_i`, with `e` for an empty preimage.
pub fn minor(m: &FiniteMonoid, b: &MinionElement, pi: &[usize], arity: usize) -> Result<MinionElement> {
    if pi.len() != b.arity() || pi.iter().any(|&j| j >= arity) {
        return Err(Error::PreconditionFailed(format!("{pi:?} is not a map [{}] -> [{arity}]", b.arity())));
    }
    let mut entries = vec![m.identity(); arity];
    for (i, &j) in pi.iter().enumerate() {
        entries[j] = m.mul(entries[j], b.entries[i]);
    }
    let c = MinionElement { target: b.target, entries };
    debug_assert!(c.is_valid(m));
    Ok(c)
}

/// Every element of `𝓜_{M,a}(n)` in lexicographic order.
pub fn enumerate_minion(m: &FiniteMonoid, a: usize, n: usize, budget: u64) -> Result<Vec<MinionElement>> {
    let size = (m.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(m: &FiniteMonoid, a: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<MinionElement>) {
        if cur.len() == n {
            if m.prod(cur.iter().copied()) == a {
                out.push(MinionElement { target: a, entries: cur.clone() });
            }
            return;
        }
        for x in 0..m.len() {
            if cur.iter().all(|&y| m.commute(x, y)) {
                cur.push(x);
                go(m, a, n, cur, out);
                cur.pop();
            }
        }
    }
    go(m, a, n, &mut cur, &mut out);
    Ok(out)
}

/// Coordinates `j` with `∏_{i≠j} b_i ⊐^Ab ∏_i b_i`.
pub fn relevant_coordinates(m: &FiniteMonoid, b: &MinionElement) -> Vec<usize> {
    let full = m.prod(b.entries.iter().copied());
    (0..b.arity())
        .filter(|&j| {
            let rest = m.prod(b.entries.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x));
            m.ab_strict(full, rest)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionReport {
    pub elements: usize,
    pub minors: usize,
    /// Largest number of relevant coordinates seen.
    pub max_relevant: usize,
    pub violation: Option<String>,
}

impl SelectionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// All maps `[n] → [m]` in lexicographic order.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(vec![]);
        }
        return out;
    }
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < m {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// For non-regular `a`: every element up to arity `max_n` has between 1 and `|M|`
/// relevant coordinates, and every minor `q = p^(π)` keeps them: `π(I(p)) ⊆ I(q)`,
/// in particular `π(I(p)) ∩ I(q) ≠ ∅`.
pub fn verify_selection_condition(m: &FiniteMonoid, a: usize, max_n: usize) -> Result<SelectionReport> {
    if m.is_regular(a) {
        return Err(Error::RegularTarget(a));
    }
    let mut report = SelectionReport { elements: 0, minors: 0, max_relevant: 0, violation: None };
    let per_arity: Vec<Vec<MinionElement>> =
        (1..=max_n).map(|n| enumerate_minion(m, a, n, u64::MAX)).collect::<Result<_>>()?;
    for (ni, elements) in per_arity.iter().enumerate() {
        let n = ni + 1;
        for p in elements {
            report.elements += 1;
            let ip = relevant_coordinates(m, p);
            report.max_relevant = report.max_relevant.max(ip.len());
            if ip.is_empty() || ip.len() > m.len() {
                report.violation = Some(format!("{} has {} relevant coordinates", p.render(m), ip.len()));
                return Ok(report);
            }
            for target in 1..=max_n {
                for pi in all_maps(n, target) {
                    report.minors += 1;
                    let q = minor(m, p, &pi, target)?;
                    let iq = relevant_coordinates(m, &q);
                    let image: Vec<usize> = ip.iter().map(|&i| pi[i]).collect();
                    if !image.iter().any(|j| iq.contains(j)) || !image.iter().all(|j| iq.contains(j)) {
                        report.violation = Some(format!(
                            "minor {} of {} under {pi:?}: relevant {iq:?}, image of relevant {image:?}",
                            q.render(m),
                            p.render(m)
                        ));
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Least `t` with `a²t = a` and `at = ta`.
pub fn regularity_witness(m: &FiniteMonoid, a: usize) -> Option<usize> {
    let aa = m.mul(a, a);
    (0..m.len()).find(|&t| m.mul(aa, t) == a && m.commute(a, t))
}

/// `n+1` copies of `a` followed by `n` copies of its regularity witness.
pub fn block_symmetric_tuple(m: &FiniteMonoid, a: usize, n: usize) -> Result<MinionElement> {
    let b = regularity_witness(m, a).ok_or(Error::NotRegular(a))?;
    let mut entries = vec![a; n + 1];
    entries.extend(std::iter::repeat_n(b, n));
    MinionElement::new(m, a, entries)
}

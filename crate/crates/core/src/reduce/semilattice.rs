use crate::algebra::FiniteSemigroup;
use crate::eqsys::{arc_consistent_domains, Assignment, ConstMap, EquationSystem};
use crate::error::{Error, Result};

/// Pointwise least solution over a semilattice: arc consistency, then the meet
/// of each surviving domain. The operation is a polymorphism of every relation
/// of `Lin(L, L)`, so the meets form a solution whenever the domains are nonempty.
pub fn solve_semilattice_min(
    l: &FiniteSemigroup,
    sys: &EquationSystem,
    consts: ConstMap<'_>,
) -> Result<Option<Assignment>> {
    if !l.is_abelian() {
        return Err(Error::NotSemilattice("not commutative".into()));
    }
    if let Some(s) = (0..l.len()).find(|&s| !l.is_idempotent(s)) {
        return Err(Error::NotSemilattice(format!("{} is not idempotent", l.label(s))));
    }
    let Some(domains) = arc_consistent_domains(sys, l, consts)? else {
        return Ok(None);
    };
    Ok(Some(Assignment(
        domains.iter().map(|d| l.product(d.iter().copied()).expect("nonempty domain")).collect(),
    )))
}

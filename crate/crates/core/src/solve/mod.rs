//! Search versions: self-reduction against the BLP+AIP decision procedure, a direct
//! solver for Abelian groups, and cross-checks between the available engines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{FiniteGroup, FiniteMonoid, SubAlgebra};
use crate::classify::{classify_monoid_template, Verdict};
use crate::eqsys::{
    brute_force_solve, check_assignment, check_promise_solution, lin_structure, system_to_structure,
    template_structures, Assignment, ConstMap, Equation, EquationSystem, PLinTemplate, RelationalStructure,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::relax::{decide_aip, decide_blp_aip, lattice_basis, solve_integer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvePath {
    BlpAipSelfreduce,
    AipGroupDirect,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    /// Values in the target algebra.
    pub assignment: Assignment,
    pub decisions_used: usize,
    pub path: SolvePath,
}

/// The submonoid `im(ψ)` as a standalone monoid, with its members as target indices.
pub fn image_monoid(t: &PLinTemplate, psi: &[usize]) -> Result<(FiniteMonoid, Vec<usize>)> {
    let mut image = psi.to_vec();
    image.sort_unstable();
    image.dedup();
    Ok((t.target.restrict_monoid(&image)?, image))
}

/// `Fix(x, t)` becomes `Fix(x, ψ(t))`, with `ψ(t)` indexed inside `im(ψ)`.
fn translate(t: &PLinTemplate, instance: &EquationSystem, psi: &[usize], image: &[usize]) -> Result<EquationSystem> {
    for c in instance.constants() {
        if !t.phi.domain().contains(c) {
            return Err(Error::ConstantOutsideSet(t.source.label(c).to_string()));
        }
    }
    Ok(instance.map_constants(|c| image.binary_search(&psi[c]).expect("image member")))
}

fn const_symbol(m: &FiniteMonoid, v: usize) -> String {
    format!("c:{}", m.label(v))
}

/// Fixes variables in input order to the least value under which the decision
/// procedure still accepts `Lin(M, M)`.
pub fn self_reduce(m: &FiniteMonoid, sys: &EquationSystem) -> Result<(Assignment, usize)> {
    let consts: Vec<(String, usize)> = (0..m.len()).map(|v| (m.label(v).to_string(), v)).collect();
    let template = lin_structure(m, &consts);
    let mut inst: RelationalStructure = system_to_structure(sys, m, &SubAlgebra::full(m))?;
    let mut decisions = 1;
    if !decide_blp_aip(&inst, &template)?.accepted() {
        let first = sys.variables().first().cloned().unwrap_or_default();
        return Err(Error::PromiseViolated(first));
    }
    let mut values = Vec::with_capacity(sys.num_vars());
    for x in 0..sys.num_vars() {
        let mut chosen = None;
        for v in 0..m.len() {
            let mut probe = inst.clone();
            probe.add(&const_symbol(m, v), vec![x])?;
            decisions += 1;
            if decide_blp_aip(&probe, &template)?.accepted() {
                inst = probe;
                chosen = Some(v);
                break;
            }
        }
        match chosen {
            Some(v) => values.push(v),
            None => return Err(Error::PromiseViolated(sys.variables()[x].clone())),
        }
    }
    Ok((Assignment(values), decisions))
}

/// Solves an instance of a tractable template over `im(ψ)`; the result is an
/// assignment into the target that satisfies the B-side instance.
pub fn solve_promise(t: &PLinTemplate, instance: &EquationSystem, psi: &[usize]) -> Result<SolveReport> {
    let (m, image) = image_monoid(t, psi)?;
    let sys = translate(t, instance, psi, &image)?;
    let (asg, decisions_used) = self_reduce(&m, &sys)?;
    let assignment = Assignment(asg.0.iter().map(|&v| image[v]).collect());
    if !check_assignment(&sys, &m, &asg) || !check_promise_solution(t, instance, &assignment) {
        return Err(Error::PromiseViolated("final assignment fails verification".into()));
    }
    Ok(SolveReport { assignment, decisions_used, path: SolvePath::BlpAipSelfreduce })
}

/// Lexicographically least B-side solution by exhaustive search.
pub fn solve_brute(t: &PLinTemplate, instance: &EquationSystem, budget: u64) -> Result<Option<SolveReport>> {
    Ok(brute_force_solve(instance, &t.target, t.b_constants(), budget)?.map(|assignment| SolveReport {
        assignment,
        decisions_used: 0,
        path: SolvePath::BruteForce,
    }))
}

/// `G ≅ Z^m / L` with one generator per element; `L` is spanned by the rows
/// `e_g + e_h - e_{gh}`.
struct Presentation {
    m: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Presentation {
    fn new(g: &FiniteMonoid) -> Self {
        let m = g.len();
        let mut rows = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let mut r = vec![BigInt::zero(); m];
                r[a] += 1;
                r[b] += 1;
                r[g.mul(a, b)] -= 1;
                rows.push(r);
            }
        }
        Presentation { m, basis: lattice_basis(&rows, m) }
    }

    /// Some solution of the lifted system, read back into `G`.
    fn solve(&self, g: &FiniteMonoid, sys: &EquationSystem) -> Option<Vec<usize>> {
        let (m, k, n) = (self.m, self.basis.len(), sys.num_vars());
        let eqs = sys.equations();
        let cols = n * m + eqs.len() * k;
        let mut a = Vec::with_capacity(eqs.len() * m);
        let mut b = Vec::with_capacity(eqs.len() * m);
        for (e, eq) in eqs.iter().enumerate() {
            for c in 0..m {
                let mut row = vec![BigInt::zero(); cols];
                let mut rhs = BigInt::zero();
                match *eq {
                    Equation::Mul(x, y, z) => {
                        row[x * m + c] += 1;
                        row[y * m + c] += 1;
                        row[z * m + c] -= 1;
                    }
                    Equation::Fix(x, v) => {
                        row[x * m + c] += 1;
                        if v == c {
                            rhs = BigInt::from(1);
                        }
                    }
                }
                for (j, br) in self.basis.iter().enumerate() {
                    row[n * m + e * k + j] = -br[c].clone();
                }
                a.push(row);
                b.push(rhs);
            }
        }
        let v = solve_integer(&a, &b, cols)?;
        let order = BigInt::from(m);
        Some(
            (0..n)
                .map(|x| {
                    (0..m).fold(g.identity(), |acc, gen| {
                        let e = v[x * m + gen].mod_floor(&order).to_usize().expect("small exponent");
                        g.mul(acc, g.pow(gen, e))
                    })
                })
                .collect(),
        )
    }
}

/// Least solution over an Abelian group, through integer feasibility modulo the
/// relation lattice; values are fixed in input order by re-solving.
pub fn solve_abelian_group_system(g: &FiniteGroup, sys: &EquationSystem) -> Result<Option<Assignment>> {
    Ok(solve_abelian_counted(g, sys)?.map(|(a, _)| a))
}

fn solve_abelian_counted(g: &FiniteGroup, sys: &EquationSystem) -> Result<Option<(Assignment, usize)>> {
    let gm = g.monoid();
    if !gm.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let pres = Presentation::new(gm);
    let mut decisions = 1;
    if pres.solve(gm, sys).is_none() {
        return Ok(None);
    }
    let mut fixed = sys.clone();
    let mut values = Vec::with_capacity(sys.num_vars());
    for x in 0..sys.num_vars() {
        let mut chosen = None;
        for v in 0..gm.len() {
            let mut probe = fixed.clone();
            probe.fix(x, v);
            decisions += 1;
            if pres.solve(gm, &probe).is_some() {
                fixed = probe;
                chosen = Some(v);
                break;
            }
        }
        values.push(chosen.expect("a feasible system keeps some value"));
    }
    let asg = Assignment(values);
    debug_assert!(check_assignment(sys, gm, &asg));
    Ok(Some((asg, decisions)))
}

/// Solves a tractable group template directly over `im(ψ)`, which is an Abelian group.
pub fn solve_group_direct(t: &PLinTemplate, instance: &EquationSystem, psi: &[usize]) -> Result<Option<SolveReport>> {
    let (m, image) = image_monoid(t, psi)?;
    let g = m.as_group().ok_or_else(|| Error::PreconditionFailed("im(psi) is not a group".into()))?;
    let sys = translate(t, instance, psi, &image)?;
    Ok(solve_abelian_counted(&g, &sys)?.map(|(asg, decisions_used)| SolveReport {
        assignment: Assignment(asg.0.iter().map(|&v| image[v]).collect()),
        decisions_used,
        path: SolvePath::AipGroupDirect,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub a_satisfiable: bool,
    pub b_satisfiable: bool,
    pub blp_aip: Option<bool>,
    /// Only reported for group templates.
    pub aip: Option<bool>,
    pub selfreduce: Option<bool>,
    pub group_direct: Option<bool>,
    pub discrepancies: Vec<String>,
}

impl CrossCheckReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Runs every applicable engine. For a tractable template an engine must accept
/// every A-side satisfiable instance and may accept only B-side satisfiable ones.
pub fn cross_check(t: &PLinTemplate, instance: &EquationSystem) -> Result<CrossCheckReport> {
    let a_sat = brute_force_solve(instance, &t.source, t.a_constants(), DEFAULT_BUDGET)?.is_some();
    let b_sat = brute_force_solve(instance, &t.target, t.b_constants(), DEFAULT_BUDGET)?.is_some();
    let mut report = CrossCheckReport {
        a_satisfiable: a_sat,
        b_satisfiable: b_sat,
        blp_aip: None,
        aip: None,
        selfreduce: None,
        group_direct: None,
        discrepancies: vec![],
    };
    if a_sat && !b_sat {
        report.discrepancies.push("A-side solution without a B-side solution".into());
    }
    let class = classify_monoid_template(t);
    if class.verdict != Verdict::Tractable {
        return Ok(report);
    }
    let psi = class.witness.expect("tractable verdict carries a witness");
    let (a, _) = template_structures(t);
    let inst = system_to_structure(instance, &t.source, t.phi.domain())?;
    report.blp_aip = Some(decide_blp_aip(&inst, &a)?.accepted());
    if t.is_group_template() {
        report.aip = Some(decide_aip(&inst, &a)?.accepted());
    }
    report.selfreduce = Some(match solve_promise(t, instance, &psi) {
        Ok(r) => check_promise_solution(t, instance, &r.assignment),
        Err(Error::PromiseViolated(_)) => false,
        Err(e) => return Err(e),
    });
    if t.is_group_template() {
        report.group_direct = match solve_group_direct(t, instance, &psi)? {
            Some(r) => Some(check_promise_solution(t, instance, &r.assignment)),
            None => Some(false),
        };
    }
    for (name, v) in [
        ("blp_aip", report.blp_aip),
        ("aip", report.aip),
        ("selfreduce", report.selfreduce),
        ("group_direct", report.group_direct),
    ] {
        match v {
            Some(false) if a_sat => report.discrepancies.push(format!("{name} rejects an A-side satisfiable instance")),
            Some(true) if !b_sat => report.discrepancies.push(format!("{name} accepts a B-side unsatisfiable instance")),
            _ => {}
        }
    }
    Ok(report)
}

/// Checks an assignment against the A side (constants taken literally).
pub fn check_a_side(t: &PLinTemplate, sys: &EquationSystem, asg: &Assignment) -> bool {
    crate::eqsys::check_with(sys, &t.source, ConstMap::Within(t.phi.domain()), asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn z_template(n: usize) -> PLinTemplate {
        let g = corpus::cyclic(n);
        PLinTemplate::csp(g.monoid().clone(), SubAlgebra::full(g.monoid())).unwrap()
    }

    #[test]
    fn unique_solution_over_z2() {
        let t = z_template(2);
        let mut sys = EquationSystem::new();
        let (x, y, z) = (sys.var("x"), sys.var("y"), sys.var("z"));
        sys.mul(x, y, z);
        sys.fix(x, 1);
        sys.fix(z, 1);
        let r = solve_promise(&t, &sys, &[0, 1]).unwrap();
        assert_eq!(r.assignment.0, vec![1, 0, 1]);
        assert_eq!(r.path, SolvePath::BlpAipSelfreduce);
    }

    #[test]
    fn d4_s4_fix_rotation() {
        let (_, _, embed) = corpus::d4_in_s4();
        let (d4, s4, phi1, _) = corpus::d4_s4_example();
        let t = PLinTemplate::new(d4, s4, phi1);
        let psi = classify_monoid_template(&t).witness.unwrap();
        let mut sys = EquationSystem::new();
        let x = sys.var("x");
        sys.fix(x, 1);
        let r = solve_promise(&t, &sys, &psi).unwrap();
        assert_eq!(r.assignment.0, vec![embed[2]]);
    }

    #[test]
    fn abelian_examples() {
        let z4 = corpus::cyclic(4);
        let mut sys = EquationSystem::new();
        let (x, y) = (sys.var("x"), sys.var("y"));
        sys.mul(x, x, y);
        sys.fix(y, 2);
        assert_eq!(solve_abelian_group_system(&z4, &sys).unwrap().unwrap().0, vec![1, 2]);

        let k4 = corpus::cyclic(2).monoid().direct_product(corpus::cyclic(2).monoid()).as_group().unwrap();
        let mut sys = EquationSystem::new();
        let (x, y, z) = (sys.var("x"), sys.var("y"), sys.var("z"));
        sys.mul(x, y, z);
        assert_eq!(solve_abelian_group_system(&k4, &sys).unwrap().unwrap().0, vec![0, 0, 0]);

        let z2 = corpus::cyclic(2);
        let mut sys = EquationSystem::new();
        let (x, y) = (sys.var("x"), sys.var("y"));
        sys.mul(x, x, y);
        sys.fix(y, 1);
        assert_eq!(solve_abelian_group_system(&z2, &sys).unwrap(), None);

        assert!(matches!(solve_abelian_group_system(&corpus::symmetric(3), &sys), Err(Error::NotAbelian)));
    }

    #[test]
    fn promise_violation_is_reported() {
        let t = z_template(2);
        let mut sys = EquationSystem::new();
        let x = sys.var("x");
        sys.fix(x, 0);
        sys.fix(x, 1);
        assert!(matches!(solve_promise(&t, &sys, &[0, 1]), Err(Error::PromiseViolated(_))));
        let report = cross_check(&t, &sys).unwrap();
        assert!(report.agrees());
        assert_eq!(report.blp_aip, Some(false));
    }
}

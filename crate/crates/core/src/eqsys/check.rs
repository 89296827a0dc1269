use super::{Assignment, Equation, EquationSystem, PLinTemplate};
use crate::algebra::{FiniteSemigroup, PartialHom, SubAlgebra};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// How the constant stored in a `Fix` equation is read in the algebra at hand.
#[derive(Clone, Copy, Debug)]
pub enum ConstMap<'a> {
    /// The constant is an element index of the algebra itself.
    Identity,
    /// As `Identity`, but the constant must lie in the given set.
    Within(&'a SubAlgebra),
    /// The constant is a source element and is read as its image.
    Hom(&'a PartialHom),
}

impl ConstMap<'_> {
    pub fn resolve(&self, c: usize) -> Result<usize> {
        match self {
            ConstMap::Identity => Ok(c),
            ConstMap::Within(sub) if sub.contains(c) => Ok(c),
            ConstMap::Within(_) => Err(Error::ConstantOutsideSet(c.to_string())),
            ConstMap::Hom(h) => h.apply(c).ok_or_else(|| Error::ConstantOutsideSet(c.to_string())),
        }
    }
}

fn holds(sys: &EquationSystem, over: &FiniteSemigroup, consts: ConstMap<'_>, asg: &Assignment) -> bool {
    if asg.len() != sys.num_vars() || asg.0.iter().any(|&a| a >= over.len()) {
        return false;
    }
    sys.equations().iter().all(|eq| match *eq {
        Equation::Mul(x, y, z) => over.mul(asg.get(x), asg.get(y)) == asg.get(z),
        Equation::Fix(x, c) => consts.resolve(c).is_ok_and(|v| asg.get(x) == v),
    })
}

/// Every equation holds with constants read as elements of `over`.
pub fn check_assignment(sys: &EquationSystem, over: &FiniteSemigroup, asg: &Assignment) -> bool {
    holds(sys, over, ConstMap::Identity, asg)
}

/// B-side check: products in the target, `Fix(x, t)` means `x = φ(t)`.
pub fn check_promise_solution(t: &PLinTemplate, sys: &EquationSystem, asg: &Assignment) -> bool {
    holds(sys, &t.target, t.b_constants(), asg)
}

/// Check with an explicit constant interpretation.
pub fn check_with(sys: &EquationSystem, over: &FiniteSemigroup, consts: ConstMap<'_>, asg: &Assignment) -> bool {
    holds(sys, over, consts, asg)
}

/// Backtracking search with generalized arc consistency on the `Mul` constraints.
struct Search<'a> {
    over: &'a FiniteSemigroup,
    k: usize,
    muls: Vec<(usize, usize, usize)>,
    watch: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
}

type Domains = Vec<bool>;

impl Search<'_> {
    fn dom<'d>(&self, d: &'d Domains, x: usize) -> &'d [bool] {
        &d[x * self.k..(x + 1) * self.k]
    }

    /// Revises every constraint to a fixpoint; false on a wipe-out.
    fn propagate(&self, d: &mut Domains, mut queue: Vec<usize>) -> bool {
        let k = self.k;
        let mut queued = vec![false; self.muls.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            let (x, y, z) = self.muls[c];
            let mut sx = vec![false; k];
            let mut sy = vec![false; k];
            let mut sz = vec![false; k];
            for a in (0..k).filter(|&a| d[x * k + a]) {
                for b in (0..k).filter(|&b| d[y * k + b]) {
                    let p = self.over.mul(a, b);
                    if d[z * k + p] {
                        sx[a] = true;
                        sy[b] = true;
                        sz[p] = true;
                    }
                }
            }
            for (v, s) in [(x, &sx), (y, &sy), (z, &sz)] {
                let mut changed = false;
                let mut any = false;
                for a in 0..k {
                    if d[v * k + a] && !s[a] {
                        d[v * k + a] = false;
                        changed = true;
                    }
                    any |= d[v * k + a];
                }
                if !any {
                    return false;
                }
                if changed {
                    for &c2 in &self.watch[v] {
                        if !queued[c2] {
                            queued[c2] = true;
                            queue.push(c2);
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(
        &mut self,
        d: Domains,
        x: usize,
        visit: &mut dyn FnMut(Assignment) -> bool,
    ) -> Result<bool> {
        let n = d.len() / self.k.max(1);
        if x == n {
            let asg = (0..n).map(|v| self.dom(&d, v).iter().position(|&b| b).unwrap()).collect();
            return Ok(visit(Assignment(asg)));
        }
        for a in 0..self.k {
            if !d[x * self.k + a] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            let mut next = d.clone();
            for b in 0..self.k {
                next[x * self.k + b] = b == a;
            }
            if self.propagate(&mut next, self.watch[x].clone()) && self.dfs(next, x + 1, visit)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn prepare<'a>(
    sys: &EquationSystem,
    over: &'a FiniteSemigroup,
    consts: ConstMap<'_>,
    budget: u64,
) -> Result<(Search<'a>, Option<Domains>)> {
    let k = over.len();
    let n = sys.num_vars();
    let mut d = vec![true; n * k];
    let mut muls = Vec::new();
    let mut watch = vec![Vec::new(); n];
    for eq in sys.equations() {
        match *eq {
            Equation::Mul(x, y, z) => {
                for v in [x, y, z] {
                    if !watch[v].contains(&muls.len()) {
                        watch[v].push(muls.len());
                    }
                }
                muls.push((x, y, z));
            }
            Equation::Fix(x, c) => {
                let v = consts.resolve(c)?;
                for b in 0..k {
                    d[x * k + b] &= b == v;
                }
            }
        }
    }
    let s = Search { over, k, muls, watch, budget, nodes: 0 };
    if (0..n).any(|x| !s.dom(&d, x).iter().any(|&b| b)) {
        return Ok((s, None));
    }
    let all: Vec<usize> = (0..s.muls.len()).collect();
    if !s.propagate(&mut d, all) {
        return Ok((s, None));
    }
    Ok((s, Some(d)))
}

/// Generalized arc consistency closure of the unary domains; `None` on a wipe-out.
pub fn arc_consistent_domains(
    sys: &EquationSystem,
    over: &FiniteSemigroup,
    consts: ConstMap<'_>,
) -> Result<Option<Vec<Vec<usize>>>> {
    let (s, d) = prepare(sys, over, consts, 0)?;
    Ok(d.map(|d| {
        (0..sys.num_vars())
            .map(|x| (0..s.k).filter(|&a| d[x * s.k + a]).collect())
            .collect()
    }))
}

/// Calls `visit` on solutions in lexicographic order until it returns true.
fn search(
    sys: &EquationSystem,
    over: &FiniteSemigroup,
    consts: ConstMap<'_>,
    budget: u64,
    visit: &mut dyn FnMut(Assignment) -> bool,
) -> Result<()> {
    let (mut s, d) = prepare(sys, over, consts, budget)?;
    if let Some(d) = d {
        s.dfs(d, 0, visit)?;
    }
    Ok(())
}

/// Lexicographically least solution, or `None` if the system is unsatisfiable.
pub fn brute_force_solve(
    sys: &EquationSystem,
    over: &FiniteSemigroup,
    consts: ConstMap<'_>,
    budget: u64,
) -> Result<Option<Assignment>> {
    let mut found = None;
    search(sys, over, consts, budget, &mut |a| {
        found = Some(a);
        true
    })?;
    Ok(found)
}

/// Up to `limit` solutions in lexicographic order.
pub fn all_solutions(
    sys: &EquationSystem,
    over: &FiniteSemigroup,
    consts: ConstMap<'_>,
    limit: usize,
    budget: u64,
) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    search(sys, over, consts, budget, &mut |a| {
        out.push(a);
        out.len() >= limit
    })?;
    Ok(out)
}

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Assignment, Atom, Equation, EquationSystem, GeneralEquation};
use crate::algebra::FiniteSemigroup;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Semigroup,
    Monoid,
    Group,
}

/// Output of [`normalize`]: the canonical system plus the map from each input
/// variable to the system variable that carries its value.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub system: EquationSystem,
    pub originals: Vec<(String, usize)>,
}

impl NormalForm {
    /// Values of the input variables under a solution of the normalized system.
    pub fn restrict(&self, asg: &Assignment) -> BTreeMap<String, usize> {
        self.originals.iter().map(|(name, v)| (name.clone(), asg.get(*v))).collect()
    }
}

#[derive(Clone, Copy)]
enum Term {
    Var(usize),
    Const(usize),
}

struct Builder<'a> {
    algebra: &'a FiniteSemigroup,
    mode: Mode,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    taken: HashSet<String>,
    counter: usize,
    eqs: Vec<Equation>,
    const_var: HashMap<usize, usize>,
    inv_var: HashMap<usize, usize>,
    parent: Vec<usize>,
}

impl Builder<'_> {
    fn push_var(&mut self, name: String) -> usize {
        let i = self.names.len();
        self.by_name.insert(name.clone(), i);
        self.names.push(name);
        self.parent.push(i);
        i
    }

    fn named(&mut self, name: &str) -> usize {
        match self.by_name.get(name) {
            Some(&i) => i,
            None => self.push_var(name.to_string()),
        }
    }

    fn fresh(&mut self) -> usize {
        loop {
            let name = format!("__n{}", self.counter);
            self.counter += 1;
            if !self.taken.contains(&name) {
                return self.push_var(name);
            }
        }
    }

    fn const_var(&mut self, c: usize) -> usize {
        if let Some(&v) = self.const_var.get(&c) {
            return v;
        }
        let v = self.fresh();
        self.eqs.push(Equation::Fix(v, c));
        self.const_var.insert(c, v);
        v
    }

    /// Fresh `y` with `x·y = z`, `z = e`.
    fn inverse_var(&mut self, name: &str) -> Result<usize> {
        if self.mode != Mode::Group {
            return Err(Error::InvalidAtom(name.to_string()));
        }
        let x = self.named(name);
        if let Some(&y) = self.inv_var.get(&x) {
            return Ok(y);
        }
        let e = self
            .algebra
            .find_identity()
            .ok_or_else(|| Error::PreconditionFailed("group mode needs an identity".into()))?;
        let y = self.fresh();
        let z = self.fresh();
        self.eqs.push(Equation::Mul(x, y, z));
        self.eqs.push(Equation::Fix(z, e));
        self.inv_var.insert(x, y);
        Ok(y)
    }

    fn atom_term(&mut self, a: &Atom) -> Result<Term> {
        Ok(match a {
            Atom::Var(v) => Term::Var(self.named(v)),
            Atom::InvVar(v) => Term::Var(self.inverse_var(v)?),
            Atom::Const(c) => Term::Const(*c),
        })
    }

    fn atom_var(&mut self, a: &Atom) -> Result<usize> {
        Ok(match self.atom_term(a)? {
            Term::Var(v) => v,
            Term::Const(c) => self.const_var(c),
        })
    }

    /// Product of `word` as a variable; the last multiplication writes into `into` if given.
    fn chain(&mut self, word: &[Atom], into: Option<usize>) -> Result<usize> {
        debug_assert!(word.len() >= 2);
        let mut acc = self.atom_var(&word[0])?;
        for (i, a) in word[1..].iter().enumerate() {
            let b = self.atom_var(a)?;
            let out = match into {
                Some(t) if i + 2 == word.len() => t,
                _ => self.fresh(),
            };
            self.eqs.push(Equation::Mul(acc, b, out));
            acc = out;
        }
        Ok(acc)
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn equation(&mut self, eq: &GeneralEquation) -> Result<()> {
        for a in eq.lhs.iter().chain(&eq.rhs) {
            if let Atom::Var(v) | Atom::InvVar(v) = a {
                self.named(v);
            }
        }
        let (mut lhs, mut rhs) = (&eq.lhs[..], &eq.rhs[..]);
        if lhs.len() == 1 && rhs.len() >= 2 {
            std::mem::swap(&mut lhs, &mut rhs);
        }
        if rhs.len() >= 2 {
            let t = self.chain(lhs, None)?;
            self.chain(rhs, Some(t))?;
            return Ok(());
        }
        let right = self.atom_term(&rhs[0])?;
        if lhs.len() >= 2 {
            let target = match right {
                Term::Var(v) => v,
                Term::Const(c) => self.const_var(c),
            };
            self.chain(lhs, Some(target))?;
            return Ok(());
        }
        let left = self.atom_term(&lhs[0])?;
        match (left, right) {
            (Term::Var(a), Term::Var(b)) => self.union(a, b),
            (Term::Var(a), Term::Const(c)) | (Term::Const(c), Term::Var(a)) => {
                self.eqs.push(Equation::Fix(a, c))
            }
            (Term::Const(c), Term::Const(d)) if c == d => {}
            (Term::Const(c), Term::Const(d)) => {
                let u = self.fresh();
                self.eqs.push(Equation::Fix(u, c));
                self.eqs.push(Equation::Fix(u, d));
            }
        }
        Ok(())
    }
}

/// Rewrites general equations into `Mul`/`Fix` form. Constants must lie in
/// `constants`; fresh variables are named `__n{k}`, skipping names already in use.
/// Equations `x = y` between single variables merge the two variables.
pub fn normalize(
    eqs: &[GeneralEquation],
    algebra: &FiniteSemigroup,
    constants: &[usize],
    mode: Mode,
) -> Result<NormalForm> {
    let mut taken = HashSet::new();
    for eq in eqs {
        for a in eq.lhs.iter().chain(&eq.rhs) {
            match a {
                Atom::Var(v) | Atom::InvVar(v) => {
                    taken.insert(v.clone());
                }
                Atom::Const(c) if !constants.contains(c) => {
                    let label = algebra.labels().get(*c).cloned().unwrap_or_else(|| c.to_string());
                    return Err(Error::ConstantOutsideSet(label));
                }
                Atom::Const(_) => {}
            }
        }
    }
    let mut b = Builder {
        algebra,
        mode,
        names: Vec::new(),
        by_name: HashMap::new(),
        taken,
        counter: 0,
        eqs: Vec::new(),
        const_var: HashMap::new(),
        inv_var: HashMap::new(),
        parent: Vec::new(),
    };
    for eq in eqs {
        b.equation(eq)?;
    }
    let n = b.names.len();
    let roots: Vec<usize> = (0..n).map(|x| b.find(x)).collect();
    let mut system = EquationSystem::new();
    let mut new_index = vec![usize::MAX; n];
    for x in 0..n {
        if roots[x] == x {
            new_index[x] = system.var(b.names[x].clone());
        }
    }
    let map = |x: usize| new_index[roots[x]];
    let mut seen = HashSet::new();
    for eq in &b.eqs {
        let e = match *eq {
            Equation::Mul(x, y, z) => Equation::Mul(map(x), map(y), map(z)),
            Equation::Fix(x, c) => Equation::Fix(map(x), c),
        };
        if seen.insert(e) {
            system.push(e);
        }
    }
    let originals = (0..n)
        .filter(|&x| b.taken.contains(&b.names[x]))
        .map(|x| (b.names[x].clone(), map(x)))
        .collect();
    Ok(NormalForm { system, originals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::eqsys::{all_solutions, parse_general_system, ConstMap, DEFAULT_BUDGET};

    fn norm(text: &str, alg: &FiniteSemigroup, mode: Mode) -> NormalForm {
        let eqs = parse_general_system(text, alg).unwrap();
        let all: Vec<usize> = (0..alg.len()).collect();
        normalize(&eqs, alg, &all, mode).unwrap()
    }

    #[test]
    fn already_normal_is_unchanged() {
        let z3 = corpus::cyclic(3);
        let nf = norm("x y = z", &z3, Mode::Monoid);
        assert_eq!(nf.system.variables(), ["x", "y", "z"]);
        assert_eq!(nf.system.equations(), [Equation::Mul(0, 1, 2)]);
    }

    #[test]
    fn constants_become_fixed_variables() {
        let z3 = corpus::cyclic(3);
        let nf = norm("x1 c:1 x2 = c:2", &z3, Mode::Monoid);
        assert!(nf
            .system
            .equations()
            .iter()
            .all(|e| matches!(e, Equation::Mul(..) | Equation::Fix(..))));
        assert!(nf.system.variables().iter().any(|v| v.starts_with("__n")));
        let sols = all_solutions(&nf.system, &z3, ConstMap::Identity, 100, DEFAULT_BUDGET).unwrap();
        // x1 + 1 + x2 = 2 has three solutions in Z3.
        assert_eq!(sols.len(), 3);
        for s in sols {
            let r = nf.restrict(&s);
            assert_eq!((r["x1"] + 1 + r["x2"]) % 3, 2);
        }
    }

    #[test]
    fn inverted_variables_need_group_mode() {
        let z3 = corpus::cyclic(3);
        let eqs = parse_general_system("x^-1 = c:1", &z3).unwrap();
        let all = [0, 1, 2];
        assert!(matches!(normalize(&eqs, &z3, &all, Mode::Monoid), Err(Error::InvalidAtom(_))));
        let nf = normalize(&eqs, &z3, &all, Mode::Group).unwrap();
        assert_eq!(nf.system.num_vars(), 3);
        let sols = all_solutions(&nf.system, &z3, ConstMap::Identity, 100, DEFAULT_BUDGET).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(nf.restrict(&sols[0])["x"], 2);
    }

    #[test]
    fn variable_equalities_merge() {
        let z3 = corpus::cyclic(3);
        let nf = norm("x = y\ny = c:2", &z3, Mode::Monoid);
        assert_eq!(nf.system.num_vars(), 1);
        let sols = all_solutions(&nf.system, &z3, ConstMap::Identity, 100, DEFAULT_BUDGET).unwrap();
        assert_eq!(nf.restrict(&sols[0]), BTreeMap::from([("x".into(), 2), ("y".into(), 2)]));
    }

    #[test]
    fn false_constant_equation_is_unsat() {
        let z3 = corpus::cyclic(3);
        let nf = norm("c:1 = c:2", &z3, Mode::Monoid);
        let sols = all_solutions(&nf.system, &z3, ConstMap::Identity, 100, DEFAULT_BUDGET).unwrap();
        assert!(sols.is_empty());
        assert!(norm("c:1 = c:1", &z3, Mode::Monoid).system.equations().is_empty());
    }

    #[test]
    fn fresh_names_avoid_user_names() {
        let z3 = corpus::cyclic(3);
        let nf = norm("__n0 c:1 = x", &z3, Mode::Monoid);
        let names = nf.system.variables();
        let unique: HashSet<_> = names.iter().collect();
        assert_eq!(unique.len(), names.len());
        assert!(names.contains(&"__n1".to_string()));
    }

    #[test]
    fn constant_outside_set_is_rejected() {
        let z3 = corpus::cyclic(3);
        let eqs = parse_general_system("x = c:1", &z3).unwrap();
        assert!(matches!(
            normalize(&eqs, &z3, &[0], Mode::Monoid),
            Err(Error::ConstantOutsideSet(_))
        ));
    }
}

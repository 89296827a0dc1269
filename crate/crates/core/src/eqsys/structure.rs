use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::ControlFlow;

use super::{Equation, EquationSystem, PLinTemplate};
use crate::algebra::{FiniteSemigroup, SubAlgebra};
use crate::error::{Error, Result};

pub const MUL_SYMBOL: &str = "mul";

fn const_symbol(label: &str) -> String {
    format!("c:{label}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalStructure {
    pub signature: Vec<(String, usize)>,
    pub universe: Vec<String>,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl RelationalStructure {
    pub fn new(signature: Vec<(String, usize)>, universe: Vec<String>) -> Self {
        let relations = signature.iter().map(|(s, _)| (s.clone(), BTreeSet::new())).collect();
        Self { signature, universe, relations }
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.signature.iter().find(|(s, _)| s == symbol).map(|&(_, a)| a)
    }

    pub fn add(&mut self, symbol: &str, tuple: Vec<usize>) -> Result<()> {
        let arity = self
            .arity(symbol)
            .ok_or_else(|| Error::SignatureMismatch(format!("unknown symbol {symbol}")))?;
        if tuple.len() != arity || tuple.iter().any(|&x| x >= self.universe.len()) {
            return Err(Error::SignatureMismatch(format!("bad tuple {tuple:?} for {symbol}")));
        }
        self.relations.get_mut(symbol).expect("symbol in signature").insert(tuple);
        Ok(())
    }

    pub fn relation(&self, symbol: &str) -> &BTreeSet<Vec<usize>> {
        static EMPTY: BTreeSet<Vec<usize>> = BTreeSet::new();
        self.relations.get(symbol).unwrap_or(&EMPTY)
    }

    /// Checks that `h` maps every tuple of `self` into the matching relation of `to`.
    pub fn is_homomorphism(&self, to: &RelationalStructure, h: &[usize]) -> bool {
        h.len() == self.len()
            && h.iter().all(|&y| y < to.len())
            && self.relations.iter().all(|(s, tuples)| {
                let target = to.relation(s);
                tuples.iter().all(|t| target.contains(&t.iter().map(|&x| h[x]).collect::<Vec<_>>()))
            })
    }
}

/// `Lin`-style structure on `over`: the multiplication graph plus one singleton
/// unary relation per `(symbol label, value)` pair.
pub fn lin_structure(over: &FiniteSemigroup, constants: &[(String, usize)]) -> RelationalStructure {
    let mut signature = vec![(MUL_SYMBOL.to_string(), 3)];
    signature.extend(constants.iter().map(|(l, _)| (const_symbol(l), 1)));
    let mut st = RelationalStructure::new(signature, over.labels().to_vec());
    for a in 0..over.len() {
        for b in 0..over.len() {
            st.add(MUL_SYMBOL, vec![a, b, over.mul(a, b)]).unwrap();
        }
    }
    for (l, v) in constants {
        st.add(&const_symbol(l), vec![*v]).unwrap();
    }
    st
}

/// The pair `(A, B)` of a promise template; symbols are named by source labels.
pub fn template_structures(t: &PLinTemplate) -> (RelationalStructure, RelationalStructure) {
    let labels = |c: usize| t.source.label(c).to_string();
    let a_consts: Vec<_> = t.phi.pairs().iter().map(|&(c, _)| (labels(c), c)).collect();
    let b_consts: Vec<_> = t.phi.pairs().iter().map(|&(c, v)| (labels(c), v)).collect();
    (lin_structure(&t.source, &a_consts), lin_structure(&t.target, &b_consts))
}

/// The instance structure of `sys`; constants are named by their labels in `over`
/// and must belong to `constants`.
pub fn system_to_structure(
    sys: &EquationSystem,
    over: &FiniteSemigroup,
    constants: &SubAlgebra,
) -> Result<RelationalStructure> {
    let mut signature = vec![(MUL_SYMBOL.to_string(), 3)];
    signature.extend(constants.members().iter().map(|&c| (const_symbol(over.label(c)), 1)));
    let mut st = RelationalStructure::new(signature, sys.variables().to_vec());
    for eq in sys.equations() {
        match *eq {
            Equation::Mul(x, y, z) => st.add(MUL_SYMBOL, vec![x, y, z])?,
            Equation::Fix(x, c) => {
                if !constants.contains(c) {
                    return Err(Error::ConstantOutsideSet(over.label(c).to_string()));
                }
                st.add(&const_symbol(over.label(c)), vec![x])?
            }
        }
    }
    Ok(st)
}

pub fn structure_to_system(st: &RelationalStructure, over: &FiniteSemigroup) -> Result<EquationSystem> {
    let mut sys = EquationSystem::with_variables(st.universe.iter().cloned());
    for t in st.relation(MUL_SYMBOL) {
        sys.mul(t[0], t[1], t[2]);
    }
    for (symbol, tuples) in &st.relations {
        if symbol != MUL_SYMBOL {
            let label = symbol
                .strip_prefix("c:")
                .ok_or_else(|| Error::SignatureMismatch(format!("unexpected symbol {symbol}")))?;
            let c = over.index_of(label).ok_or_else(|| Error::UnknownConstant(label.to_string()))?;
            for t in tuples {
                sys.fix(t[0], c);
            }
        }
    }
    Ok(sys)
}

/// Calls `visit` for every homomorphism `from → to`, in lexicographic order.
/// Symbols of `from` missing from `to` are an error.
pub fn for_each_homomorphism<F>(from: &RelationalStructure, to: &RelationalStructure, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    for (s, a) in &from.signature {
        if to.arity(s) != Some(*a) {
            return Err(Error::SignatureMismatch(format!("symbol {s}/{a} missing from target")));
        }
    }
    let n = from.len();
    let k = to.len();
    // Each tuple is checked when its largest variable gets assigned.
    let mut checks: Vec<Vec<(&HashSet<Vec<usize>>, &Vec<usize>)>> = vec![Vec::new(); n];
    let target_sets: BTreeMap<&str, HashSet<Vec<usize>>> = to
        .relations
        .iter()
        .map(|(s, t)| (s.as_str(), t.iter().cloned().collect()))
        .collect();
    let mut allowed = vec![vec![true; k]; n];
    for (s, tuples) in &from.relations {
        let set = &target_sets[s.as_str()];
        for t in tuples {
            if t.len() == 1 {
                for (v, ok) in allowed[t[0]].iter_mut().enumerate() {
                    *ok &= set.contains(&vec![v]);
                }
            } else if let Some(&last) = t.iter().max() {
                checks[last].push((set, t));
            } else if set.is_empty() {
                return Ok(());
            }
        }
    }
    let mut h = vec![0usize; n];
    let mut buf = Vec::new();
    fn rec<F: FnMut(&[usize]) -> ControlFlow<()>>(
        x: usize,
        h: &mut Vec<usize>,
        allowed: &[Vec<bool>],
        checks: &[Vec<(&HashSet<Vec<usize>>, &Vec<usize>)>],
        buf: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if x == h.len() {
            return visit(h);
        }
        for v in 0..allowed[x].len() {
            if !allowed[x][v] {
                continue;
            }
            h[x] = v;
            let ok = checks[x].iter().all(|(set, t)| {
                buf.clear();
                buf.extend(t.iter().map(|&y| h[y]));
                set.contains(buf.as_slice())
            });
            if ok {
                rec(x + 1, h, allowed, checks, buf, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
    let _ = rec(0, &mut h, &allowed, &checks, &mut buf, &mut visit);
    Ok(())
}

pub fn find_homomorphism(from: &RelationalStructure, to: &RelationalStructure) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    for_each_homomorphism(from, to, |h| {
        found = Some(h.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteMonoid;
    use crate::corpus;
    use crate::eqsys::{all_solutions, Assignment, ConstMap, DEFAULT_BUDGET};
    use rand::Rng;

    #[test]
    fn empty_system_gives_empty_relations() {
        let z2 = corpus::cyclic(2);
        let st = system_to_structure(&EquationSystem::new(), &z2, &SubAlgebra::full(&z2)).unwrap();
        assert!(st.is_empty());
        assert!(st.relations.values().all(BTreeSet::is_empty));
    }

    #[test]
    fn definitional_tuples() {
        let z2 = corpus::cyclic(2);
        let mut sys = EquationSystem::with_variables(["x", "y", "z"]);
        sys.mul(0, 1, 2);
        sys.fix(0, 1);
        let st = system_to_structure(&sys, &z2, &SubAlgebra::full(&z2)).unwrap();
        assert_eq!(st.relation(MUL_SYMBOL).iter().collect::<Vec<_>>(), [&vec![0, 1, 2]]);
        assert_eq!(st.relation("c:1").iter().collect::<Vec<_>>(), [&vec![0]]);
        assert!(st.relation("c:0").is_empty());
        let back = structure_to_system(&st, &z2).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn homomorphisms_are_solutions() {
        let z4: FiniteMonoid = corpus::cyclic(4).into_monoid();
        let full = SubAlgebra::full(&z4);
        let consts: Vec<_> = (0..4).map(|c| (c.to_string(), c)).collect();
        let lin = lin_structure(&z4, &consts);
        let mut rng = corpus::rng(11);
        for _ in 0..5 {
            let n = rng.gen_range(1..=4);
            let mut sys = EquationSystem::with_variables((0..n).map(|i| format!("v{i}")));
            for _ in 0..rng.gen_range(1..=4) {
                if rng.gen_bool(0.7) {
                    sys.mul(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                } else {
                    sys.fix(rng.gen_range(0..n), rng.gen_range(0..4));
                }
            }
            let st = system_to_structure(&sys, &z4, &full).unwrap();
            let mut homs = Vec::new();
            for_each_homomorphism(&st, &lin, |h| {
                homs.push(Assignment(h.to_vec()));
                ControlFlow::Continue(())
            })
            .unwrap();
            let sols = all_solutions(&sys, &z4, ConstMap::Identity, usize::MAX, DEFAULT_BUDGET).unwrap();
            assert_eq!(homs, sols);
            assert_eq!(structure_to_system(&st, &z4).unwrap().equations().len(), st.relations.values().map(BTreeSet::len).sum::<usize>());
        }
    }

    #[test]
    fn signature_mismatch() {
        let z2 = corpus::cyclic(2);
        let a = lin_structure(&z2, &[("1".into(), 1)]);
        let b = lin_structure(&z2, &[]);
        assert!(matches!(find_homomorphism(&a, &b), Err(Error::SignatureMismatch(_))));
        assert!(find_homomorphism(&b, &a).unwrap().is_some());
    }
}

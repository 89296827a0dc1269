//! Equation systems in canonical `x·y = z` / `x = c` form, general equations and
//! their normalization, promise templates, and the relational-structure view.

mod check;
mod normalize;
mod structure;

pub use check::{
    all_solutions, arc_consistent_domains, brute_force_solve, check_assignment, check_promise_solution, check_with, ConstMap,
    DEFAULT_BUDGET,
};
pub use normalize::{normalize, Mode, NormalForm};
pub use structure::{
    find_homomorphism, for_each_homomorphism, lin_structure, structure_to_system,
    system_to_structure, template_structures, RelationalStructure, MUL_SYMBOL,
};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_extending_homs, FiniteMonoid, FiniteSemigroup, HomFilter, PartialHom, SubAlgebra};
use crate::error::{Error, Result};

/// One canonical equation over variable indices; `Fix` carries a constant as an
/// element index of the algebra the system was written over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    Mul(usize, usize, usize),
    Fix(usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquationSystem {
    variables: Vec<String>,
    index: HashMap<String, usize>,
    equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_variables<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut sys = Self::new();
        for n in names {
            sys.var(n);
        }
        sys
    }

    /// Index of `name`, adding it if new.
    pub fn var(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.variables.len();
        self.index.insert(name.clone(), i);
        self.variables.push(name);
        i
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn push(&mut self, eq: Equation) {
        let n = self.variables.len();
        match eq {
            Equation::Mul(x, y, z) => assert!(x < n && y < n && z < n, "variable out of range"),
            Equation::Fix(x, _) => assert!(x < n, "variable out of range"),
        }
        self.equations.push(eq);
    }

    pub fn mul(&mut self, x: usize, y: usize, z: usize) {
        self.push(Equation::Mul(x, y, z));
    }

    pub fn fix(&mut self, x: usize, c: usize) {
        self.push(Equation::Fix(x, c));
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Constants mentioned by `Fix` equations.
    pub fn constants(&self) -> Vec<usize> {
        let mut cs: Vec<usize> = self
            .equations
            .iter()
            .filter_map(|e| match e {
                Equation::Fix(_, c) => Some(*c),
                _ => None,
            })
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// Same system with every constant `c` replaced by `f(c)`.
    pub fn map_constants(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut out = self.clone();
        for eq in &mut out.equations {
            if let Equation::Fix(_, c) = eq {
                *c = f(*c);
            }
        }
        out
    }

    pub fn to_file(&self, algebra: &FiniteSemigroup) -> SystemFile {
        SystemFile {
            variables: self.variables.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| match *e {
                    Equation::Mul(x, y, z) => EquationFile::Mul([
                        self.variables[x].clone(),
                        self.variables[y].clone(),
                        self.variables[z].clone(),
                    ]),
                    Equation::Fix(x, c) => {
                        EquationFile::Fix([self.variables[x].clone(), algebra.label(c).to_string()])
                    }
                })
                .collect(),
        }
    }
}

/// An assignment, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn get(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_named(&self, sys: &EquationSystem, algebra: &FiniteSemigroup) -> BTreeMap<String, String> {
        sys.variables()
            .iter()
            .zip(&self.0)
            .map(|(v, &a)| (v.clone(), algebra.label(a).to_string()))
            .collect()
    }

    pub fn from_named(
        sys: &EquationSystem,
        algebra: &FiniteSemigroup,
        named: &BTreeMap<String, String>,
    ) -> Result<Self> {
        sys.variables()
            .iter()
            .map(|v| {
                let label = named.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                algebra.index_of(label).ok_or_else(|| Error::UnknownConstant(label.clone()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationFile {
    Mul([String; 3]),
    Fix([String; 2]),
}

/// `{"variables": [...], "equations": [{"mul": [x,y,z]} | {"fix": [x, label]}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub variables: Vec<String>,
    pub equations: Vec<EquationFile>,
}

impl SystemFile {
    /// Resolves constant labels against `algebra`; every variable must be declared.
    pub fn to_system(&self, algebra: &FiniteSemigroup) -> Result<EquationSystem> {
        let mut sys = EquationSystem::with_variables(self.variables.iter().cloned());
        let var = |sys: &EquationSystem, name: &str| {
            sys.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        for eq in &self.equations {
            match eq {
                EquationFile::Mul([x, y, z]) => {
                    let (x, y, z) = (var(&sys, x)?, var(&sys, y)?, var(&sys, z)?);
                    sys.mul(x, y, z);
                }
                EquationFile::Fix([x, c]) => {
                    let x = var(&sys, x)?;
                    let c = algebra.index_of(c).ok_or_else(|| Error::UnknownConstant(c.clone()))?;
                    sys.fix(x, c);
                }
            }
        }
        Ok(sys)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Var(String),
    InvVar(String),
    Const(usize),
}

/// `lhs = rhs` with both sides nonempty words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralEquation {
    pub lhs: Vec<Atom>,
    pub rhs: Vec<Atom>,
}

impl GeneralEquation {
    pub fn new(lhs: Vec<Atom>, rhs: Vec<Atom>) -> Result<Self> {
        if lhs.is_empty() || rhs.is_empty() {
            return Err(Error::Parse("both sides of an equation must be nonempty".into()));
        }
        Ok(Self { lhs, rhs })
    }

    /// Parses `x1 c:a x2 = c:b`; `x^-1` is an inverted variable.
    pub fn parse(line: &str, algebra: &FiniteSemigroup) -> Result<Self> {
        let (l, r) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("missing '=' in {line:?}")))?;
        let word = |side: &str| -> Result<Vec<Atom>> {
            side.split_whitespace()
                .map(|tok| {
                    if let Some(label) = tok.strip_prefix("c:") {
                        algebra
                            .index_of(label)
                            .map(Atom::Const)
                            .ok_or_else(|| Error::UnknownConstant(label.to_string()))
                    } else if let Some(v) = tok.strip_suffix("^-1") {
                        Ok(Atom::InvVar(v.to_string()))
                    } else {
                        Ok(Atom::Var(tok.to_string()))
                    }
                })
                .collect()
        };
        Self::new(word(l)?, word(r)?)
    }

    pub fn render(&self, algebra: &FiniteSemigroup) -> String {
        let word = |w: &[Atom]| {
            w.iter()
                .map(|a| match a {
                    Atom::Var(v) => v.clone(),
                    Atom::InvVar(v) => format!("{v}^-1"),
                    Atom::Const(c) => format!("c:{}", algebra.label(*c)),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} = {}", word(&self.lhs), word(&self.rhs))
    }
}

/// Parses one equation per non-empty line; `#` starts a comment.
pub fn parse_general_system(text: &str, algebra: &FiniteSemigroup) -> Result<Vec<GeneralEquation>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| GeneralEquation::parse(l, algebra))
        .collect()
}

/// `PLin(M1, M2, φ)`; `Fix` constants of instances are elements of `dom(φ)`.
#[derive(Clone, Debug)]
pub struct PLinTemplate {
    pub source: FiniteMonoid,
    pub target: FiniteMonoid,
    pub phi: PartialHom,
}

impl PLinTemplate {
    pub fn new(source: FiniteMonoid, target: FiniteMonoid, phi: PartialHom) -> Self {
        Self { source, target, phi }
    }

    /// `Lin(M, N) = PLin(M, M, id_N)`.
    pub fn csp(m: FiniteMonoid, constants: SubAlgebra) -> Result<Self> {
        let phi = PartialHom::identity_on(&m, constants)?;
        Ok(Self { source: m.clone(), target: m, phi })
    }

    /// A homomorphism `A → B` exists iff some total hom extends `φ`.
    pub fn is_well_formed(&self) -> bool {
        let mut found = false;
        crate::algebra::for_each_extending_hom(&self.source, &self.target, &self.phi, HomFilter::All, |_| {
            found = true;
            std::ops::ControlFlow::Break(())
        });
        found
    }

    pub fn extending_homs(&self, filter: HomFilter) -> Vec<PartialHom> {
        enumerate_extending_homs(&self.source, &self.target, &self.phi, filter)
    }

    pub fn is_group_template(&self) -> bool {
        self.source.is_group() && self.target.is_group()
    }

    /// Constants resolved on the A side (identity on `dom(φ)`).
    pub fn a_constants(&self) -> ConstMap<'_> {
        ConstMap::Within(self.phi.domain())
    }

    /// Constants resolved on the B side, through `φ`.
    pub fn b_constants(&self) -> ConstMap<'_> {
        ConstMap::Hom(&self.phi)
    }
}

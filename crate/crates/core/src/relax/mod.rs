//! Exact basic LP and affine integer relaxations of a CSP instance against a
//! finite relational structure, and the BLP, AIP and BLP+AIP decision procedures.

mod hnf;
mod simplex;

pub use hnf::{lattice_basis, solve_integer};
pub use simplex::{Lp, LpOutcome, Q};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::eqsys::RelationalStructure;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxMode {
    IntegerUnrestricted,
    RationalNonnegative,
}

/// A relaxation variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Column {
    /// `λ_(x,a)`: instance variable `x` takes value `a`.
    Lambda { var: usize, value: usize },
    /// `μ_(C,t)`: constraint `C` is satisfied by the tuple `t`.
    Mu { constraint: usize, tuple: Vec<usize> },
}

/// An instance constraint: a relation symbol applied to a scope of instance variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub symbol: String,
    pub scope: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelaxationSystem {
    pub columns: Vec<Column>,
    /// Dense integer coefficients, one row per equation.
    pub matrix: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub mode: RelaxMode,
    pub constraints: Vec<Constraint>,
    /// Number of leading normalization rows.
    pub normalization_rows: usize,
}

impl RelaxationSystem {
    pub fn num_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn with_mode(mut self, mode: RelaxMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn column_index(&self, c: &Column) -> Option<usize> {
        self.columns.iter().position(|x| x == c)
    }

    /// Keeps only the columns in `keep` (the others are fixed to zero).
    pub fn restrict_columns(&self, keep: &[usize]) -> RelaxationSystem {
        RelaxationSystem {
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            matrix: self.matrix.iter().map(|row| keep.iter().map(|&j| row[j]).collect()).collect(),
            rhs: self.rhs.clone(),
            mode: self.mode,
            constraints: self.constraints.clone(),
            normalization_rows: self.normalization_rows,
        }
    }

    pub fn satisfied_by_rational(&self, v: &[Q]) -> bool {
        v.len() == self.num_cols()
            && (self.mode != RelaxMode::RationalNonnegative || v.iter().all(|x| !x.is_negative()))
            && self.matrix.iter().zip(&self.rhs).all(|(row, &b)| {
                row.iter().zip(v).filter(|(a, _)| **a != 0).map(|(&a, x)| x * Q::from_integer(a.into())).sum::<Q>()
                    == Q::from_integer(b.into())
            })
    }

    pub fn satisfied_by_integer(&self, v: &[BigInt]) -> bool {
        v.len() == self.num_cols()
            && self
                .matrix
                .iter()
                .zip(&self.rhs)
                .all(|(row, &b)| row.iter().zip(v).map(|(&a, x)| x * a).sum::<BigInt>() == BigInt::from(b))
    }

    /// Coordinate-format text dump; the right-hand side follows as `% rhs` lines.
    pub fn to_matrix_market(&self) -> String {
        let nnz = self.matrix.iter().flatten().filter(|&&a| a != 0).count();
        let mut s = String::from("%%MatrixMarket matrix coordinate integer general\n");
        let _ = writeln!(s, "% mode {:?}", self.mode);
        for (j, c) in self.columns.iter().enumerate() {
            let _ = match c {
                Column::Lambda { var, value } => writeln!(s, "% column {} lambda {var} {value}", j + 1),
                Column::Mu { constraint, tuple } => {
                    writeln!(s, "% column {} mu {constraint} {tuple:?}", j + 1)
                }
            };
        }
        let _ = writeln!(s, "{} {} {}", self.num_rows(), self.num_cols(), nnz);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a != 0 {
                    let _ = writeln!(s, "{} {} {}", i + 1, j + 1, a);
                }
            }
        }
        for (i, b) in self.rhs.iter().enumerate() {
            let _ = writeln!(s, "% rhs {} {}", i + 1, b);
        }
        s
    }
}

/// The relaxation of `instance` against `a_side`. Each instance tuple of each
/// relation is a constraint; every instance symbol must occur in `a_side` with the same arity.
pub fn build_relaxation(instance: &RelationalStructure, a_side: &RelationalStructure) -> Result<RelaxationSystem> {
    for (s, k) in &instance.signature {
        match a_side.arity(s) {
            Some(a) if a == *k => {}
            _ => return Err(Error::SignatureMismatch(format!("symbol {s}/{k} missing from the template"))),
        }
    }
    let n = instance.len();
    let d = a_side.len();
    let mut columns: Vec<Column> = Vec::new();
    for x in 0..n {
        for a in 0..d {
            columns.push(Column::Lambda { var: x, value: a });
        }
    }
    let mut constraints = Vec::new();
    for (s, _) in &instance.signature {
        for scope in instance.relation(s) {
            constraints.push(Constraint { symbol: s.clone(), scope: scope.clone() });
        }
    }
    for (ci, c) in constraints.iter().enumerate() {
        for t in a_side.relation(&c.symbol) {
            columns.push(Column::Mu { constraint: ci, tuple: t.clone() });
        }
    }
    let ncols = columns.len();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..n {
        let mut row = vec![0i64; ncols];
        for a in 0..d {
            row[x * d + a] = 1;
        }
        matrix.push(row);
        rhs.push(1);
    }
    let mut mu_start = n * d;
    for c in &constraints {
        let tuples = a_side.relation(&c.symbol);
        for (i, &x) in c.scope.iter().enumerate() {
            for a in 0..d {
                let mut row = vec![0i64; ncols];
                for (k, t) in tuples.iter().enumerate() {
                    if t[i] == a {
                        row[mu_start + k] += 1;
                    }
                }
                row[x * d + a] -= 1;
                matrix.push(row);
                rhs.push(0);
            }
        }
        mu_start += tuples.len();
    }
    Ok(RelaxationSystem {
        columns,
        matrix,
        rhs,
        mode: RelaxMode::RationalNonnegative,
        constraints,
        normalization_rows: n,
    })
}

fn rational_rows(sys: &RelaxationSystem) -> (Vec<Vec<Q>>, Vec<Q>) {
    let a = sys.matrix.iter().map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect()).collect();
    let b = sys.rhs.iter().map(|&v| Q::from_integer(v.into())).collect();
    (a, b)
}

/// A nonnegative rational solution in the relative interior of the feasible
/// region, with its support (the columns not forced to zero).
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoint {
    pub point: Vec<Q>,
    pub support: Vec<usize>,
}

/// Repeatedly maximizes the sum of the columns not yet seen positive; each
/// optimum is a witness, and the witnesses are averaged with equal weights.
pub fn rational_feasible_support(sys: &RelaxationSystem) -> Option<SupportPoint> {
    let n = sys.num_cols();
    let (a, b) = rational_rows(sys);
    let mut lp = Lp::feasible(&a, &b, n)?;
    let mut witnesses = vec![lp.point()];
    let mut unknown: BTreeSet<usize> = (0..n).filter(|&j| witnesses[0][j].is_zero()).collect();
    while !unknown.is_empty() {
        let c: Vec<Q> = (0..n).map(|j| if unknown.contains(&j) { Q::one() } else { Q::zero() }).collect();
        let w = match lp.maximize(&c) {
            LpOutcome::Optimal { point, value } => {
                if value.is_zero() {
                    break;
                }
                point
            }
            LpOutcome::Unbounded { point, ray } => point.iter().zip(&ray).map(|(x, r)| x + r).collect(),
        };
        unknown.retain(|&j| w[j].is_zero());
        witnesses.push(w);
    }
    let k = Q::from_integer(BigInt::from(witnesses.len()));
    let point: Vec<Q> = (0..n).map(|j| witnesses.iter().map(|w| w[j].clone()).sum::<Q>() / &k).collect();
    let support = (0..n).filter(|&j| !point[j].is_zero()).collect();
    debug_assert!(sys.clone().with_mode(RelaxMode::RationalNonnegative).satisfied_by_rational(&point));
    Some(SupportPoint { point, support })
}

/// An integer solution of the system without sign constraints, verified by substitution.
pub fn integer_affine_feasible(sys: &RelaxationSystem) -> Option<Vec<BigInt>> {
    let a: Vec<Vec<BigInt>> = sys.matrix.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let b: Vec<BigInt> = sys.rhs.iter().map(|&v| BigInt::from(v)).collect();
    let v = solve_integer(&a, &b, sys.num_cols())?;
    sys.satisfied_by_integer(&v).then_some(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn accepted(self) -> bool {
        self == Decision::Accept
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

/// Columns that survive arc consistency: `μ_(C,t)` needs `λ_(x_i,t_i)` alive for
/// every coordinate, and `λ_(x,a)` needs a live `μ_(C,t)` with `t_i = a` wherever `x = x_i`.
/// Every column positive in some BLP solution survives.
fn arc_consistent_columns(sys: &RelaxationSystem, d: usize) -> Vec<bool> {
    let mut alive = vec![true; sys.num_cols()];
    let mu: Vec<(usize, &Column)> =
        sys.columns.iter().enumerate().filter(|(_, c)| matches!(c, Column::Mu { .. })).collect();
    loop {
        let mut changed = false;
        for &(j, col) in &mu {
            if let Column::Mu { constraint, tuple } = col {
                if alive[j] {
                    let scope = &sys.constraints[*constraint].scope;
                    if scope.iter().zip(tuple).any(|(&x, &a)| !alive[x * d + a]) {
                        alive[j] = false;
                        changed = true;
                    }
                }
            }
        }
        let lambda_count = sys.normalization_rows * d;
        let mut supported = vec![true; lambda_count];
        for (ci, c) in sys.constraints.iter().enumerate() {
            for (i, &x) in c.scope.iter().enumerate() {
                let mut seen = vec![false; d];
                for &(j, col) in &mu {
                    if let Column::Mu { constraint, tuple } = col {
                        if *constraint == ci && alive[j] {
                            seen[tuple[i]] = true;
                        }
                    }
                }
                for a in 0..d {
                    supported[x * d + a] &= seen[a];
                }
            }
        }
        for j in 0..lambda_count {
            if alive[j] && !supported[j] {
                alive[j] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// Integer feasibility of the full relaxation.
pub fn decide_aip(instance: &RelationalStructure, a_side: &RelationalStructure) -> Result<Decision> {
    let sys = build_relaxation(instance, a_side)?.with_mode(RelaxMode::IntegerUnrestricted);
    Ok(Decision::from_bool(integer_affine_feasible(&sys).is_some()))
}

/// Rational feasibility of the relaxation.
pub fn decide_blp(instance: &RelationalStructure, a_side: &RelationalStructure) -> Result<Decision> {
    Ok(Decision::from_bool(blp_support(instance, a_side)?.is_some()))
}

fn blp_support(
    instance: &RelationalStructure,
    a_side: &RelationalStructure,
) -> Result<Option<(RelaxationSystem, Vec<usize>)>> {
    let sys = build_relaxation(instance, a_side)?;
    let alive = arc_consistent_columns(&sys, a_side.len());
    let keep: Vec<usize> = (0..sys.num_cols()).filter(|&j| alive[j]).collect();
    let reduced = sys.restrict_columns(&keep);
    Ok(rational_feasible_support(&reduced).map(|sp| {
        let support = sp.support.iter().map(|&j| keep[j]).collect();
        (sys, support)
    }))
}

/// BLP feasibility, then integer feasibility with every column outside the BLP support deleted.
pub fn decide_blp_aip(instance: &RelationalStructure, a_side: &RelationalStructure) -> Result<Decision> {
    let Some((sys, support)) = blp_support(instance, a_side)? else {
        return Ok(Decision::Reject);
    };
    let refined = sys.restrict_columns(&support).with_mode(RelaxMode::IntegerUnrestricted);
    Ok(Decision::from_bool(integer_affine_feasible(&refined).is_some()))
}

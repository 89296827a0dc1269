//! Polymorphisms of `PLin` templates: symbolic block-symmetric and alternating maps,
//! materialized tables, and the symmetry and polymorphism predicates.

use std::ops::ControlFlow;

use num_integer::Integer;
use rand::Rng;

use crate::algebra::{for_each_extending_hom, generating_set, FiniteMonoid, HomFilter, PartialHom, SubAlgebra};
use crate::classify::validate_witness;
use crate::corpus;
use crate::eqsys::PLinTemplate;
use crate::error::{Error, Result};

/// Above this many evaluations, checks sample inputs with a fixed seed.
pub const EVALUATION_BUDGET: u64 = 1_000_000;
const SAMPLES: usize = 20_000;
const SAMPLE_SEED: u64 = 0x5eed;

/// A finitary operation on `0..domain()`.
pub trait Operation {
    fn arity(&self) -> usize;
    fn domain(&self) -> usize;
    fn eval(&self, args: &[usize]) -> usize;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `∏_{i≤n+1} ψ(s_i) · ∏_{i≤n} ψ(s_{i+n+1})^{k-2}` where `s^k = s` on `im(ψ)`.
    BlockSymmetric { k: usize, n: usize },
    /// `ψ(g_1) ψ(g_2)⁻¹ ψ(g_3) ⋯`.
    Alternating { n: usize },
}

#[derive(Clone, Debug)]
pub struct SymbolicPolymorphism {
    pub shape: Shape,
    pub psi: Vec<usize>,
    target: FiniteMonoid,
    inverse: Option<Vec<usize>>,
}

impl SymbolicPolymorphism {
    /// The two blocks of a block-symmetric shape.
    pub fn blocks(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match self.shape {
            Shape::BlockSymmetric { n, .. } => Some(((0..=n).collect(), (n + 1..2 * n + 1).collect())),
            Shape::Alternating { .. } => None,
        }
    }
}

impl Operation for SymbolicPolymorphism {
    fn arity(&self) -> usize {
        match self.shape {
            Shape::BlockSymmetric { n, .. } | Shape::Alternating { n } => 2 * n + 1,
        }
    }

    fn domain(&self) -> usize {
        self.psi.len()
    }

    fn eval(&self, args: &[usize]) -> usize {
        let m = &self.target;
        match self.shape {
            Shape::BlockSymmetric { k, n } => {
                let first = m.prod(args[..=n].iter().map(|&s| self.psi[s]));
                let second = m.prod(args[n + 1..].iter().map(|&s| m.pow(self.psi[s], k - 2)));
                m.mul(first, second)
            }
            Shape::Alternating { .. } => {
                let inv = self.inverse.as_ref().expect("group target");
                m.prod(args.iter().enumerate().map(|(i, &g)| if i % 2 == 0 { self.psi[g] } else { inv[self.psi[g]] }))
            }
        }
    }
}

/// A materialized operation; inputs are indexed with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymorphismTable {
    pub arity: usize,
    pub domain: usize,
    pub table: Vec<usize>,
}

impl PolymorphismTable {
    pub fn from_op(op: &dyn Operation, budget: u64) -> Result<Self> {
        let (d, k) = (op.domain(), op.arity());
        let size = (d as u64).checked_pow(k as u32).filter(|&s| s <= budget).ok_or(Error::BudgetExceeded(budget))?;
        let mut args = vec![0; k];
        let table = (0..size as usize)
            .map(|idx| {
                decode(idx, d, &mut args);
                op.eval(&args)
            })
            .collect();
        Ok(Self { arity: k, domain: d, table })
    }

    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.domain + a)
    }
}

impl Operation for PolymorphismTable {
    fn arity(&self) -> usize {
        self.arity
    }

    fn domain(&self) -> usize {
        self.domain
    }

    fn eval(&self, args: &[usize]) -> usize {
        self.table[self.index(args)]
    }
}

fn decode(mut idx: usize, d: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
}

/// Runs `check` over all of `0..d`^k, or over a seeded sample when that exceeds
/// `budget / cost` inputs. Stops at the first failure.
fn for_inputs(d: usize, k: usize, cost: u64, budget: u64, mut check: impl FnMut(&[usize]) -> bool) -> bool {
    let mut args = vec![0; k];
    let total = (d as u64).checked_pow(k as u32);
    match total {
        Some(total) if total.saturating_mul(cost.max(1)) <= budget => {
            (0..total as usize).all(|idx| {
                decode(idx, d, &mut args);
                check(&args)
            })
        }
        _ => {
            let mut rng = corpus::rng(SAMPLE_SEED);
            (0..SAMPLES).all(|_| {
                for a in args.iter_mut() {
                    *a = rng.gen_range(0..d);
                }
                check(&args)
            })
        }
    }
}

fn period_lcm(m: &FiniteMonoid, image: &[usize]) -> Option<usize> {
    image.iter().try_fold(1usize, |acc, &s| {
        let mut x = m.mul(s, s);
        let mut p = 1;
        while x != s {
            x = m.mul(x, s);
            p += 1;
            if p > m.len() {
                return None;
            }
        }
        Some(acc.lcm(&p))
    })
}

/// The `(2n+1)`-ary block-symmetric polymorphism built from a tractability witness.
pub fn build_block_symmetric_poly(t: &PLinTemplate, psi: &[usize], n: usize) -> Result<SymbolicPolymorphism> {
    let h = PartialHom::total(&t.source, &t.target, psi.to_vec())
        .map_err(|e| Error::PreconditionFailed(format!("psi is not a homomorphism: {e}")))?;
    if !h.extends(&t.phi) {
        return Err(Error::PreconditionFailed("psi does not extend phi".into()));
    }
    if !h.is_abelian(&t.target) {
        return Err(Error::PreconditionFailed("im(psi) is not Abelian".into()));
    }
    let k = period_lcm(&t.target, &h.image())
        .map(|l| l + 1)
        .ok_or_else(|| Error::PreconditionFailed("im(psi) is not a union of subgroups".into()))?;
    debug_assert!(validate_witness(t, psi));
    Ok(SymbolicPolymorphism { shape: Shape::BlockSymmetric { k, n }, psi: psi.to_vec(), target: t.target.clone(), inverse: None })
}

/// The `(2n+1)`-ary alternating polymorphism of a group template.
pub fn build_alternating_poly(t: &PLinTemplate, psi: &[usize], n: usize) -> Result<SymbolicPolymorphism> {
    let (Some(_), Some(tg)) = (t.source.as_group(), t.target.as_group()) else {
        return Err(Error::PreconditionFailed("both algebras must be groups".into()));
    };
    let h = PartialHom::total(&t.source, &t.target, psi.to_vec())
        .map_err(|e| Error::PreconditionFailed(format!("psi is not a homomorphism: {e}")))?;
    if !h.extends(&t.phi) {
        return Err(Error::PreconditionFailed("psi does not extend phi".into()));
    }
    if !h.is_abelian(&t.target) {
        return Err(Error::PreconditionFailed("im(psi) is not Abelian".into()));
    }
    Ok(SymbolicPolymorphism {
        shape: Shape::Alternating { n },
        psi: psi.to_vec(),
        target: t.target.clone(),
        inverse: Some(tg.inverses().to_vec()),
    })
}

/// A polymorphism is a monoid homomorphism `M1^k → M2` with `p(s,…,s) = φ(s)` on `dom(φ)`.
/// Multiplicativity is checked as `p(g·y) = p(g)·p(y)` for the coordinate generators `g`.
pub fn is_plin_polymorphism(p: &dyn Operation, t: &PLinTemplate, budget: u64) -> bool {
    let (k, d) = (p.arity(), p.domain());
    if d != t.source.len() {
        return false;
    }
    let (e1, e2) = (t.source.identity(), t.target.identity());
    if p.eval(&vec![e1; k]) != e2 {
        return false;
    }
    if !t.phi.pairs().iter().all(|&(s, v)| p.eval(&vec![s; k]) == v) {
        return false;
    }
    let gens = generating_set(&t.source, &[e1]);
    let gen_values: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            gens.iter()
                .map(|&g| {
                    let mut x = vec![e1; k];
                    x[i] = g;
                    p.eval(&x)
                })
                .collect()
        })
        .collect();
    let cost = (k * gens.len()) as u64;
    let mut shifted = vec![0; k];
    for_inputs(d, k, cost, budget, |y| {
        let py = p.eval(y);
        (0..k).all(|i| {
            gens.iter().enumerate().all(|(gi, &g)| {
                shifted.copy_from_slice(y);
                shifted[i] = t.source.mul(g, y[i]);
                p.eval(&shifted) == t.target.mul(gen_values[i][gi], py)
            })
        })
    })
}

fn odd_arity(p: &dyn Operation) -> Result<usize> {
    let k = p.arity();
    if k.is_multiple_of(2) {
        return Err(Error::EvenArity(k));
    }
    Ok(k)
}

/// Invariance under the swaps of consecutive members of each class.
fn invariant_under(p: &dyn Operation, classes: &[Vec<usize>], budget: u64) -> bool {
    let swaps: Vec<(usize, usize)> =
        classes.iter().flat_map(|c| c.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()).collect();
    let mut z = vec![0; p.arity()];
    for_inputs(p.domain(), p.arity(), swaps.len() as u64 + 1, budget, |x| {
        let px = p.eval(x);
        swaps.iter().all(|&(i, j)| {
            z.copy_from_slice(x);
            z.swap(i, j);
            p.eval(&z) == px
        })
    })
}

/// Invariant under parity-preserving permutations, and `p(x,x,z…)` does not depend on `x`.
pub fn check_alternating(p: &dyn Operation, budget: u64) -> Result<bool> {
    let k = odd_arity(p)?;
    let odd: Vec<usize> = (0..k).step_by(2).collect();
    let even: Vec<usize> = (1..k).step_by(2).collect();
    if !invariant_under(p, &[odd, even], budget) {
        return Ok(false);
    }
    if k < 3 {
        return Ok(true);
    }
    let d = p.domain();
    let mut z = vec![0; k];
    Ok(for_inputs(d, k - 2, d as u64, budget, |rest| {
        z[2..].copy_from_slice(rest);
        z[0] = 0;
        z[1] = 0;
        let base = p.eval(&z);
        (1..d).all(|x| {
            z[0] = x;
            z[1] = x;
            p.eval(&z) == base
        })
    }))
}

/// Blocks must have sizes `m+1` and `m` for arity `2m+1` and partition the coordinates.
pub fn check_2block_symmetric(p: &dyn Operation, blocks: (&[usize], &[usize]), budget: u64) -> Result<bool> {
    let k = odd_arity(p)?;
    let (b1, b2) = blocks;
    let mut all: Vec<usize> = b1.iter().chain(b2).copied().collect();
    all.sort_unstable();
    let sizes_ok = (b1.len() == k / 2 + 1 && b2.len() == k / 2) || (b2.len() == k / 2 + 1 && b1.len() == k / 2);
    if !sizes_ok || all != (0..k).collect::<Vec<_>>() {
        return Ok(false);
    }
    Ok(invariant_under(p, &[b1.to_vec(), b2.to_vec()], budget))
}

/// True iff no polymorphism of `Lin(M, M)` of the given odd arity is alternating,
/// by enumerating homomorphisms `M^k → M` that fix the diagonal.
pub fn no_alternating_certificate(m: &FiniteMonoid, arity: usize, budget: u64) -> Result<bool> {
    if arity.is_multiple_of(2) {
        return Err(Error::EvenArity(arity));
    }
    let size = (m.len() as u64).checked_pow(arity as u32).filter(|&s| s <= budget).ok_or(Error::BudgetExceeded(budget))?;
    let power = m.power_monoid(arity);
    let diag = |s: usize| (0..arity).fold(0, |acc, _| acc * m.len() + s);
    let members: Vec<usize> = (0..m.len()).map(diag).collect();
    let dom = SubAlgebra::submonoid(&power, &members)?;
    let phi = PartialHom::new_monoid(&power, m, dom, (0..m.len()).map(|s| (diag(s), s)))?;
    let mut found = false;
    let mut visited: u64 = 0;
    let mut err = None;
    for_each_extending_hom(&power, m, &phi, HomFilter::All, |h| {
        visited += 1;
        if visited.saturating_mul(size) > budget.saturating_mul(100) {
            err = Some(Error::BudgetExceeded(budget));
            return ControlFlow::Break(());
        }
        let table = PolymorphismTable { arity, domain: m.len(), table: h.total_images().expect("total") };
        match check_alternating(&table, u64::MAX) {
            Ok(true) => {
                found = true;
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(!found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_monoid_template;

    struct Proj(usize, usize, usize);
    impl Operation for Proj {
        fn arity(&self) -> usize {
            self.0
        }
        fn domain(&self) -> usize {
            self.1
        }
        fn eval(&self, args: &[usize]) -> usize {
            args[self.2]
        }
    }

    struct Const(usize, usize, usize);
    impl Operation for Const {
        fn arity(&self) -> usize {
            self.0
        }
        fn domain(&self) -> usize {
            self.1
        }
        fn eval(&self, _: &[usize]) -> usize {
            self.2
        }
    }

    fn csp(m: FiniteMonoid) -> PLinTemplate {
        let full = SubAlgebra::full(&m);
        PLinTemplate::csp(m, full).unwrap()
    }

    #[test]
    fn z2ext_block_symmetric() {
        let t = csp(corpus::z2ext());
        let id: Vec<usize> = (0..3).collect();
        let p = build_block_symmetric_poly(&t, &id, 1).unwrap();
        assert_eq!(p.shape, Shape::BlockSymmetric { k: 3, n: 1 });
        let z = &t.source;
        for x in 0..3 {
            for y in 0..3 {
                for w in 0..3 {
                    assert_eq!(p.eval(&[x, y, w]), z.prod([x, y, w]));
                }
            }
        }
        assert!(is_plin_polymorphism(&p, &t, EVALUATION_BUDGET));
        assert!(check_2block_symmetric(&p, (&[0, 1], &[2]), EVALUATION_BUDGET).unwrap());
        assert!(!check_alternating(&p, EVALUATION_BUDGET).unwrap());
    }

    #[test]
    fn d4_alternating() {
        let (d4, s4, phi1, _) = corpus::d4_s4_example();
        let t = PLinTemplate::new(d4, s4, phi1);
        let psi = classify_monoid_template(&t).witness.unwrap();
        for n in [1, 2] {
            let p = build_alternating_poly(&t, &psi, n).unwrap();
            assert!(is_plin_polymorphism(&p, &t, EVALUATION_BUDGET));
            assert!(check_alternating(&p, EVALUATION_BUDGET).unwrap());
        }
        assert!(build_alternating_poly(&csp(corpus::z2ext()), &[0, 1, 2], 1).is_err());
    }

    #[test]
    fn z4_alternating_identity() {
        let t = csp(corpus::cyclic(4).into_monoid());
        let p = build_alternating_poly(&t, &[0, 1, 2, 3], 1).unwrap();
        assert!(check_alternating(&p, EVALUATION_BUDGET).unwrap());
        assert!(!check_alternating(&Proj(3, 4, 0), EVALUATION_BUDGET).unwrap());
        assert!(matches!(check_alternating(&Proj(2, 4, 0), EVALUATION_BUDGET), Err(Error::EvenArity(_))));
    }

    #[test]
    fn polymorphism_predicate() {
        let t = csp(corpus::m3());
        assert!(is_plin_polymorphism(&Proj(3, 3, 1), &t, EVALUATION_BUDGET));
        assert!(!is_plin_polymorphism(&Const(3, 3, 0), &t, EVALUATION_BUDGET));
        let table = PolymorphismTable::from_op(&Proj(2, 3, 0), 100).unwrap();
        assert_eq!(table.eval(&[2, 1]), 2);
        assert!(PolymorphismTable::from_op(&Proj(20, 3, 0), 100).is_err());
    }

    #[test]
    fn no_alternating() {
        assert!(no_alternating_certificate(&corpus::z2ext(), 3, EVALUATION_BUDGET).unwrap());
        assert!(!no_alternating_certificate(&corpus::cyclic(2).into_monoid(), 3, EVALUATION_BUDGET).unwrap());
    }

    #[test]
    fn sampled_checks_agree_on_large_arity() {
        let t = csp(corpus::z2ext());
        let p = build_block_symmetric_poly(&t, &[0, 1, 2], 7).unwrap();
        assert!(is_plin_polymorphism(&p, &t, 1000));
        let (b1, b2) = p.blocks().unwrap();
        assert!(check_2block_symmetric(&p, (&b1, &b2), 1000).unwrap());
    }
}

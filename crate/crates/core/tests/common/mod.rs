//! Shared fixtures for the integration suites: templates, instance generators and
//! an independent restatement of the tractability criterion.

#![allow(dead_code)]

use promlin::algebra::{FiniteMonoid, PartialHom, SubAlgebra};
use promlin::corpus;
use promlin::eqsys::{brute_force_solve, Assignment, EquationSystem, PLinTemplate, DEFAULT_BUDGET};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn abelian(m: &FiniteMonoid) -> bool {
    let n = m.len();
    (0..n).all(|a| (0..n).all(|b| m.mul(a, b) == m.mul(b, a)))
}

/// `s` reappears among its powers `s², s³, …`.
pub fn regular(m: &FiniteMonoid, s: usize) -> bool {
    let mut cur = s;
    for _ in 0..m.len() {
        cur = m.mul(cur, s);
        if cur == s {
            return true;
        }
    }
    false
}

pub fn lin(m: &FiniteMonoid) -> PLinTemplate {
    PLinTemplate::csp(m.clone(), SubAlgebra::full(m)).unwrap()
}

/// An involution of `S₃` mapped onto the generator of `Z₂`; extended by the sign.
pub fn s3_sign_template() -> PLinTemplate {
    let s3 = corpus::symmetric(3).into_monoid();
    let z2 = corpus::cyclic(2).into_monoid();
    let e = s3.identity();
    let t = (0..s3.len()).find(|&x| x != e && s3.mul(x, x) == e).unwrap();
    let dom = SubAlgebra::submonoid(&s3, &[e, t]).unwrap();
    let phi = PartialHom::new_monoid(&s3, &z2, dom, [(e, z2.identity()), (t, 1 - z2.identity())]).unwrap();
    PLinTemplate::new(s3, z2, phi)
}

/// `Z₄ → Z₂` with `{0, 2}` sent to the identity.
pub fn z4_z2_template() -> PLinTemplate {
    let z4 = corpus::cyclic(4).into_monoid();
    let z2 = corpus::cyclic(2).into_monoid();
    let dom = SubAlgebra::submonoid(&z4, &[0, 2]).unwrap();
    let phi = PartialHom::new_monoid(&z4, &z2, dom, [(0, 0), (2, 0)]).unwrap();
    PLinTemplate::new(z4, z2, phi)
}

pub fn d4_s4_phi1() -> PLinTemplate {
    let (d4, s4, phi1, _) = corpus::d4_s4_example();
    PLinTemplate::new(d4, s4, phi1)
}

/// Tractable templates used by the solver sweeps: `Lin(M, M)` for every corpus
/// monoid up to `max_size` that is Abelian and a union of subgroups, plus three
/// genuinely promise templates.
pub fn tractable_templates(max_size: usize) -> Vec<(String, PLinTemplate)> {
    let mut out: Vec<(String, PLinTemplate)> = corpus::monoids(max_size)
        .into_iter()
        .filter(|m| abelian(&m.monoid) && (0..m.monoid.len()).all(|s| regular(&m.monoid, s)))
        .map(|m| (format!("Lin({})", m.name), lin(&m.monoid)))
        .collect();
    out.push(("PLin(D4,S4,phi1)".into(), d4_s4_phi1()));
    out.push(("PLin(S3,Z2,sign)".into(), s3_sign_template()));
    out.push(("PLin(Z4,Z2,0)".into(), z4_z2_template()));
    out
}

/// A random system on at most `max_vars` variables that the A side satisfies
/// through a planted assignment, which is returned alongside.
pub fn planted_instance(t: &PLinTemplate, rng: &mut ChaCha8Rng, max_vars: usize) -> (EquationSystem, Assignment) {
    let n = rng.gen_range(1..=max_vars);
    let mut sys = EquationSystem::new();
    let vars: Vec<usize> = (0..n).map(|i| sys.var(format!("x{i}"))).collect();
    let values: Vec<usize> = (0..n).map(|_| rng.gen_range(0..t.source.len())).collect();
    let equations = rng.gen_range(1..=2 * n);
    for _ in 0..equations {
        if rng.gen_bool(0.3) {
            let x = rng.gen_range(0..n);
            if t.phi.domain().contains(values[x]) {
                sys.fix(vars[x], values[x]);
            }
        } else {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let p = t.source.mul(values[x], values[y]);
            let candidates: Vec<usize> = (0..n).filter(|&z| values[z] == p).collect();
            if !candidates.is_empty() {
                let z = candidates[rng.gen_range(0..candidates.len())];
                sys.mul(vars[x], vars[y], vars[z]);
            }
        }
    }
    (sys, Assignment(values))
}

/// A planted instance with one or two extra random equations, kept only if the
/// B side has no solution. `None` after `attempts` tries (e.g. a trivial target).
pub fn unsat_instance(t: &PLinTemplate, rng: &mut ChaCha8Rng, max_vars: usize, attempts: usize) -> Option<EquationSystem> {
    let consts = t.phi.domain().members().to_vec();
    for _ in 0..attempts {
        let (mut sys, _) = planted_instance(t, rng, max_vars);
        let n = sys.num_vars();
        for _ in 0..rng.gen_range(1..=2) {
            if rng.gen_bool(0.5) {
                sys.fix(rng.gen_range(0..n), consts[rng.gen_range(0..consts.len())]);
            } else {
                sys.mul(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            }
        }
        if brute_force_solve(&sys, &t.target, t.b_constants(), DEFAULT_BUDGET).unwrap().is_none() {
            return Some(sys);
        }
    }
    None
}

/// All total maps `M₁ → M₂` that are monoid homomorphisms, by plain enumeration.
pub fn all_homs_naive(m1: &FiniteMonoid, m2: &FiniteMonoid) -> Vec<Vec<usize>> {
    let (n1, n2) = (m1.len(), m2.len());
    let mut out = Vec::new();
    let mut f = vec![0usize; n1];
    loop {
        let ok = f[m1.identity()] == m2.identity()
            && (0..n1).all(|a| (0..n1).all(|b| f[m1.mul(a, b)] == m2.mul(f[a], f[b])));
        if ok {
            out.push(f.clone());
        }
        let mut i = n1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < n2 {
                break;
            }
            f[i] = 0;
        }
    }
}

/// Restatement of the dichotomy criterion by exhaustive enumeration of maps:
/// `None` when no hom extends `φ`, otherwise whether some extension has an Abelian
/// image made of regular elements, with the least such extension.
pub fn naive_verdict(t: &PLinTemplate) -> Option<(bool, Option<Vec<usize>>)> {
    let homs: Vec<Vec<usize>> = all_homs_naive(&t.source, &t.target)
        .into_iter()
        .filter(|f| t.phi.domain().members().iter().all(|&x| t.phi.apply(x) == Some(f[x])))
        .collect();
    if homs.is_empty() {
        return None;
    }
    let good = homs.into_iter().find(|f| {
        let mut img = f.clone();
        img.sort_unstable();
        img.dedup();
        img.iter().all(|&a| img.iter().all(|&b| t.target.mul(a, b) == t.target.mul(b, a)))
            && img.iter().all(|&s| regular(&t.target, s))
    });
    Some((good.is_some(), good))
}

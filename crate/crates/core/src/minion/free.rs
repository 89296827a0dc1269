//! The template `(A, B)` whose polymorphism minion is `𝓜_{M,a}`, and the map `ξ`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::{all_maps, enumerate_minion, minor, MinionElement};
use crate::algebra::FiniteMonoid;
use crate::eqsys::{for_each_homomorphism, RelationalStructure};
use crate::error::{Error, Result};

pub const R: &str = "R";
pub const C0: &str = "C0";
pub const C1: &str = "C1";

fn signature() -> Vec<(String, usize)> {
    vec![(R.into(), 3), (C0.into(), 1), (C1.into(), 1)]
}

#[derive(Clone, Debug)]
pub struct FreeStructure {
    /// One-in-three on `{0, 1}` with `C0 = {0}`, `C1 = {1}`.
    pub a_side: RelationalStructure,
    /// Universe `𝓜_{M,a}(2)`.
    pub b_side: RelationalStructure,
    pub pairs: Vec<(usize, usize)>,
}

impl FreeStructure {
    pub fn pair_index(&self, p: (usize, usize)) -> Option<usize> {
        self.pairs.iter().position(|&q| q == p)
    }
}

pub fn free_structure_template(m: &FiniteMonoid, a: usize) -> Result<FreeStructure> {
    let mut a_side = RelationalStructure::new(signature(), vec!["0".into(), "1".into()]);
    for t in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        a_side.add(R, t.to_vec())?;
    }
    a_side.add(C0, vec![0])?;
    a_side.add(C1, vec![1])?;

    let pairs: Vec<(usize, usize)> =
        enumerate_minion(m, a, 2, u64::MAX)?.into_iter().map(|b| (b.entries[0], b.entries[1])).collect();
    let labels = pairs.iter().map(|&(r, s)| format!("({},{})", m.label(r), m.label(s))).collect();
    let mut b_side = RelationalStructure::new(signature(), labels);
    let pos = |p: (usize, usize)| pairs.iter().position(|&q| q == p).expect("pair in the minion");
    for c in enumerate_minion(m, a, 3, u64::MAX)? {
        let [c1, c2, c3] = [c.entries[0], c.entries[1], c.entries[2]];
        b_side.add(R, vec![pos((c1, m.mul(c2, c3))), pos((c2, m.mul(c1, c3))), pos((c3, m.mul(c1, c2)))])?;
    }
    b_side.add(C0, vec![pos((m.identity(), a))])?;
    b_side.add(C1, vec![pos((a, m.identity()))])?;
    Ok(FreeStructure { a_side, b_side, pairs })
}

/// `A^n` with elements the subsets of `[n]` as bitmasks; `R` holds the ordered
/// partitions into three blocks.
pub fn power_structure(n: usize) -> RelationalStructure {
    let universe = (0..1usize << n).map(|x| format!("{x:0n$b}")).collect();
    let mut st = RelationalStructure::new(signature(), universe);
    let mut seen = BTreeSet::new();
    for f in all_maps(n, 3) {
        let mut t = vec![0usize; 3];
        for (i, &b) in f.iter().enumerate() {
            t[b] |= 1 << i;
        }
        if seen.insert(t.clone()) {
            st.add(R, t).expect("valid tuple");
        }
    }
    st.add(C0, vec![0]).expect("valid tuple");
    st.add(C1, vec![(1 << n) - 1]).expect("valid tuple");
    st
}

/// `ξ(p)_i` is the first component of `p({i})`.
pub fn xi_map(fs: &FreeStructure, m: &FiniteMonoid, a: usize, p: &[usize], n: usize) -> MinionElement {
    let entries = (0..n).map(|i| fs.pairs[p[1 << i]].0).collect();
    let b = MinionElement { target: a, entries };
    debug_assert!(b.is_valid(m));
    b
}

/// `X ↦ (∏_{i∈X} b_i, ∏_{i∉X} b_i)`.
pub fn hom_from_tuple(fs: &FreeStructure, m: &FiniteMonoid, b: &MinionElement) -> Option<Vec<usize>> {
    let n = b.arity();
    (0..1usize << n)
        .map(|x| {
            let inside = m.prod((0..n).filter(|i| x >> i & 1 == 1).map(|i| b.entries[i]));
            let outside = m.prod((0..n).filter(|i| x >> i & 1 == 0).map(|i| b.entries[i]));
            fs.pair_index((inside, outside))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiArity {
    pub arity: usize,
    pub polymorphisms: usize,
    pub minion_elements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiReport {
    pub arities: Vec<XiArity>,
    pub lands_in_minion: bool,
    pub bijective: bool,
    pub preserves_minors: bool,
    /// `p([n]∖X)` is the swap of `p(X)` and first components multiply over disjoint unions.
    pub claims_hold: bool,
    pub surjectivity_witnesses: bool,
}

impl XiReport {
    pub fn passed(&self) -> bool {
        self.lands_in_minion && self.bijective && self.preserves_minors && self.claims_hold && self.surjectivity_witnesses
    }
}

/// Enumerates all polymorphisms `A^n → B` for `n ≤ max_arity` and checks that `ξ`
/// is a minor-preserving bijection onto `𝓜_{M,a}(n)`.
pub fn verify_xi_bijection(m: &FiniteMonoid, a: usize, max_arity: usize, budget: u64) -> Result<XiReport> {
    let fs = free_structure_template(m, a)?;
    let mut report = XiReport {
        arities: vec![],
        lands_in_minion: true,
        bijective: true,
        preserves_minors: true,
        claims_hold: true,
        surjectivity_witnesses: true,
    };
    let mut polys: Vec<Vec<Vec<usize>>> = vec![];
    for n in 1..=max_arity {
        let from = power_structure(n);
        let mut found = Vec::new();
        let mut over = false;
        for_each_homomorphism(&from, &fs.b_side, |h| {
            found.push(h.to_vec());
            if found.len() as u64 > budget {
                over = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        if over {
            return Err(Error::BudgetExceeded(budget));
        }
        let elements = enumerate_minion(m, a, n, budget)?;
        let images: Vec<MinionElement> = found.iter().map(|p| xi_map(&fs, m, a, p, n)).collect();
        report.lands_in_minion &= images.iter().all(|b| b.is_valid(m));
        let distinct: BTreeSet<&MinionElement> = images.iter().collect();
        let all: BTreeSet<&MinionElement> = elements.iter().collect();
        report.bijective &= distinct.len() == images.len() && distinct == all;
        let full = (1usize << n) - 1;
        for p in &found {
            for x in 0..=full {
                let (c1, c2) = fs.pairs[p[x]];
                report.claims_hold &= fs.pairs[p[full ^ x]] == (c2, c1);
                let mut y = full ^ x;
                while y > 0 {
                    let (d1, _) = fs.pairs[p[x | y]];
                    report.claims_hold &= d1 == m.mul(c1, fs.pairs[p[y]].0);
                    y = (y - 1) & (full ^ x);
                }
            }
        }
        for b in &elements {
            match hom_from_tuple(&fs, m, b) {
                Some(h) => {
                    report.surjectivity_witnesses &=
                        power_structure(n).is_homomorphism(&fs.b_side, &h) && xi_map(&fs, m, a, &h, n) == *b
                }
                None => report.surjectivity_witnesses = false,
            }
        }
        report.arities.push(XiArity { arity: n, polymorphisms: found.len(), minion_elements: elements.len() });
        polys.push(found);
    }
    // q = p^(π) acts on subsets by q(Y) = p(π⁻¹(Y))
    for (ni, found) in polys.iter().enumerate() {
        let n = ni + 1;
        for target in 1..=max_arity {
            let to = power_structure(target);
            for pi in all_maps(n, target) {
                for p in found {
                    let q: Vec<usize> = (0..1usize << target)
                        .map(|y| {
                            let x = (0..n).filter(|&i| y >> pi[i] & 1 == 1).fold(0, |acc, i| acc | 1 << i);
                            p[x]
                        })
                        .collect();
                    let ok = to.is_homomorphism(&fs.b_side, &q)
                        && xi_map(&fs, m, a, &q, target) == minor(m, &xi_map(&fs, m, a, p, n), &pi, target)?;
                    report.preserves_minors &= ok;
                }
            }
        }
    }
    Ok(report)
}

use super::{FiniteMonoid, FiniteSemigroup, SubAlgebra};
use crate::error::{Error, Result};

/// Cached divisibility preorder: `s ⊑ t` iff `s` is a product of elements that
/// includes `t` as a factor, i.e. `s ∈ S¹ t S¹`. Empty products are not admitted,
/// so the single-factor product `t` is what makes the relation reflexive.
#[derive(Clone, Debug)]
pub struct DivPreorder {
    n: usize,
    below: Vec<bool>,
}

impl DivPreorder {
    /// Least fixpoint of `{t}` under left and right multiplication by arbitrary elements.
    pub fn new(s: &FiniteSemigroup) -> Self {
        let n = s.len();
        let mut below = vec![false; n * n];
        for t in 0..n {
            let mut stack = vec![t];
            below[t * n + t] = true;
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    for z in [s.mul(x, y), s.mul(y, x)] {
                        if !below[t * n + z] {
                            below[t * n + z] = true;
                            stack.push(z);
                        }
                    }
                }
            }
        }
        Self { n, below }
    }

    /// `s ⊑ t`.
    #[inline]
    pub fn le(&self, s: usize, t: usize) -> bool {
        self.below[t * self.n + s]
    }

    pub fn equiv(&self, s: usize, t: usize) -> bool {
        self.le(s, t) && self.le(t, s)
    }
}

impl FiniteSemigroup {
    /// `s ⊑ t` computed directly (no cache).
    pub fn div_preorder(&self, s: usize, t: usize) -> bool {
        self.div_witness(s, t).is_some()
    }

    /// Factors `(p, q)` with `s = p·t·q`, where `None` means the factor is absent.
    pub fn div_witness(&self, s: usize, t: usize) -> Option<(Option<usize>, Option<usize>)> {
        if s == t {
            return Some((None, None));
        }
        let n = self.len();
        if let Some(p) = (0..n).find(|&p| self.mul(p, t) == s) {
            return Some((Some(p), None));
        }
        if let Some(q) = (0..n).find(|&q| self.mul(t, q) == s) {
            return Some((None, Some(q)));
        }
        for p in 0..n {
            let pt = self.mul(p, t);
            if let Some(q) = (0..n).find(|&q| self.mul(pt, q) == s) {
                return Some((Some(p), Some(q)));
            }
        }
        None
    }

    /// `a ⊑^Ab b`: some `c` commuting with `b` has `bc = a`.
    pub fn ab_preorder(&self, a: usize, b: usize) -> bool {
        self.ab_witness(a, b).is_some()
    }

    pub fn ab_witness(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.len()).find(|&c| self.commute(b, c) && self.mul(b, c) == a)
    }

    /// Strict version: `a ⊑^Ab b` and not `b ⊑^Ab a`.
    pub fn ab_strict(&self, a: usize, b: usize) -> bool {
        self.ab_preorder(a, b) && !self.ab_preorder(b, a)
    }
}

impl FiniteMonoid {
    /// All four equivalent regularity certificates, each found by its own search.
    pub fn regularity_witnesses(&self, s: usize) -> RegularityWitnesses {
        let n = self.len();
        let mut k_power = None;
        let mut cur = s;
        for k in 2..=n + 1 {
            cur = self.mul(cur, s);
            if cur == s {
                k_power = Some(k);
                break;
            }
        }
        let ss = self.mul(s, s);
        let commuting_t = (0..n).find(|&t| self.mul(ss, t) == s && self.commute(s, t));
        let subgroup = self.maximal_subgroup_containing(s);
        let square_divisor = self.div_witness(s, ss);
        RegularityWitnesses { k_power, commuting_t, subgroup, square_divisor }
    }

    /// The group of units of `fMf` for an idempotent `f` acting as identity on `s`,
    /// provided `s` is one of those units.
    fn maximal_subgroup_containing(&self, s: usize) -> Option<SubAlgebra> {
        let n = self.len();
        for f in (0..n).filter(|&f| self.is_idempotent(f)) {
            if self.mul(f, s) != s || self.mul(s, f) != s {
                continue;
            }
            let local = |x: usize| self.mul(f, x) == x && self.mul(x, f) == x;
            let units: Vec<usize> = (0..n)
                .filter(|&x| {
                    local(x)
                        && (0..n).any(|y| local(y) && self.mul(x, y) == f && self.mul(y, x) == f)
                })
                .collect();
            if units.contains(&s) {
                return SubAlgebra::subgroup(self, &units).ok();
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitnesses {
    /// Smallest `k > 1` with `s^k = s`.
    pub k_power: Option<usize>,
    /// Least `t` with `s²t = s` and `st = ts`.
    pub commuting_t: Option<usize>,
    pub subgroup: Option<SubAlgebra>,
    /// `(p, q)` with `s = p·s²·q`.
    pub square_divisor: Option<(Option<usize>, Option<usize>)>,
}

impl RegularityWitnesses {
    pub fn all_present(&self) -> bool {
        self.k_power.is_some()
            && self.commuting_t.is_some()
            && self.subgroup.is_some()
            && self.square_divisor.is_some()
    }

    pub fn all_absent(&self) -> bool {
        self.k_power.is_none()
            && self.commuting_t.is_none()
            && self.subgroup.is_none()
            && self.square_divisor.is_none()
    }
}

/// `∼`-classes, each sorted, ordered by least member.
pub fn sim_classes(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let div = DivPreorder::new(s);
    let mut class_of = vec![usize::MAX; s.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..s.len() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c: Vec<usize> = (x..s.len()).filter(|&y| div.equiv(x, y)).collect();
        for &y in &c {
            class_of[y] = classes.len();
        }
        classes.push(c);
    }
    classes
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub semigroup: FiniteSemigroup,
    pub classes: Vec<Vec<usize>>,
    /// element index -> class index
    pub projection: Vec<usize>,
}

impl Quotient {
    pub fn is_semilattice(&self) -> bool {
        let q = &self.semigroup;
        q.is_abelian() && (0..q.len()).all(|x| q.is_idempotent(x))
    }
}

/// `S/∼`, provided `∼` is a congruence of `S`.
pub fn quotient_semilattice(s: &FiniteSemigroup) -> Result<Quotient> {
    let classes = sim_classes(s);
    let mut projection = vec![0; s.len()];
    for (ci, c) in classes.iter().enumerate() {
        for &x in c {
            projection[x] = ci;
        }
    }
    let k = classes.len();
    let mut table = vec![vec![0; k]; k];
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            let value = projection[s.mul(ca[0], cb[0])];
            for &x in ca {
                for &y in cb {
                    if projection[s.mul(x, y)] != value {
                        return Err(Error::QuotientUndefined(format!(
                            "class of {}*{} differs from class of {}*{}",
                            s.label(x),
                            s.label(y),
                            s.label(ca[0]),
                            s.label(cb[0])
                        )));
                    }
                }
            }
            table[a][b] = value;
        }
    }
    let labels = classes.iter().map(|c| format!("[{}]", s.label(c[0]))).collect();
    let semigroup = FiniteSemigroup::new(labels, table)?;
    Ok(Quotient { semigroup, classes, projection })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// {0, 1, ε} with identity 0 and 1·1 = 1·ε = ε·ε = ε.
    fn m3() -> FiniteMonoid {
        FiniteMonoid::from_table(
            vec!["0".into(), "1".into(), "eps".into()],
            vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
            0,
        )
        .unwrap()
    }

    #[test]
    fn m3_preorders() {
        let m = m3();
        assert!(m.div_preorder(2, 1));
        assert!(!m.div_preorder(1, 2));
        assert!(m.div_preorder(1, 1));
        assert!(m.ab_preorder(2, 1));
        assert!(!m.ab_preorder(1, 2));
        assert!(m.ab_preorder(1, 1));
        let div = DivPreorder::new(&m);
        for s in 0..3 {
            for t in 0..3 {
                assert_eq!(div.le(s, t), m.div_preorder(s, t), "{s} {t}");
            }
        }
    }

    #[test]
    fn m3_regularity() {
        let m = m3();
        assert!(m.is_regular(0));
        assert!(!m.is_regular(1));
        assert!(m.is_regular(2));
        let w = m.regularity_witnesses(2);
        assert!(w.all_present());
        assert_eq!(w.k_power, Some(2));
        assert!(m.regularity_witnesses(1).all_absent());
        assert!(!m.is_union_of_subgroups());
    }

    #[test]
    fn group_is_one_class() {
        let z3 = FiniteSemigroup::from_fn((0..3).map(|i| i.to_string()).collect(), |a, b| (a + b) % 3)
            .unwrap();
        assert_eq!(sim_classes(&z3), vec![vec![0, 1, 2]]);
        let q = quotient_semilattice(&z3).unwrap();
        assert_eq!(q.semigroup.len(), 1);
    }

    #[test]
    fn semilattice_classes_are_singletons() {
        // chain 0 < 1 < 2 under min
        let s = FiniteSemigroup::from_fn((0..3).map(|i| i.to_string()).collect(), |a, b| a.min(b))
            .unwrap();
        assert_eq!(sim_classes(&s), vec![vec![0], vec![1], vec![2]]);
        assert!(quotient_semilattice(&s).unwrap().is_semilattice());
    }

    #[test]
    fn brandt_semigroup_has_no_quotient() {
        // B2 = {e11, e12, e21, e22, 0}: e_ij e_kl = e_il if j = k, else 0.
        // All nonzero elements are ~-equivalent, but e11 e11 != 0 = e12 e11.
        let pairs = [(1, 1), (1, 2), (2, 1), (2, 2)];
        let labels = vec!["e11", "e12", "e21", "e22", "0"].into_iter().map(String::from).collect();
        let s = FiniteSemigroup::from_fn(labels, |x, y| {
            if x == 4 || y == 4 {
                return 4;
            }
            let (i, j) = pairs[x];
            let (k, l) = pairs[y];
            if j == k {
                pairs.iter().position(|&p| p == (i, l)).unwrap()
            } else {
                4
            }
        })
        .unwrap();
        assert_eq!(sim_classes(&s), vec![vec![0, 1, 2, 3], vec![4]]);
        assert!(matches!(quotient_semilattice(&s), Err(Error::QuotientUndefined(_))));
    }
}

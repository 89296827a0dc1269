//! Finite semigroups, monoids and groups given by explicit multiplication tables.
//!
//! Elements are canonically indexed `0..n`; labels are for display and I/O only.

mod homs;
mod json;
mod preorder;
mod sub;

pub use homs::{enumerate_extending_homs, for_each_extending_hom, generating_set, HomFilter};
pub use json::{AlgebraFile, AlgebraKind, PartialHomFile};
pub use preorder::{quotient_semilattice, sim_classes, DivPreorder, Quotient, RegularityWitnesses};
pub use sub::{PartialHom, SubAlgebra, SubKind};

use std::ops::Deref;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    labels: Vec<String>,
    n: usize,
    table: Vec<usize>,
}

impl FiniteSemigroup {
    /// Builds a semigroup from a row-major table, checking closure and associativity.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty carrier".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable(format!("table must be {n}x{n}")));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        let s = Self { labels, n, table: flat };
        s.check_associative()?;
        Ok(s)
    }

    pub fn from_fn(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        let table = (0..n).map(|i| (0..n).map(|j| mul(i, j)).collect()).collect();
        Self::new(labels, table)
    }

    fn check_associative(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                let ij = self.mul(i, j);
                for k in 0..self.n {
                    if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// `s^k` for `k >= 1`.
    pub fn power(&self, s: usize, k: usize) -> usize {
        assert!(k >= 1, "power of a semigroup element needs k >= 1");
        (1..k).fold(s, |acc, _| self.mul(acc, s))
    }

    /// Product of a nonempty sequence, left to right.
    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> Option<usize> {
        items.into_iter().reduce(|a, b| self.mul(a, b))
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        is_abelian_on(self, 0..self.n)
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    /// Two-sided identity, if one exists.
    pub fn find_identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// The powers `s, s^2, ...` up to the first repetition, and the index at which the
    /// cycle re-enters. `s` is regular iff that index is 0.
    pub fn power_cycle(&self, s: usize) -> (Vec<usize>, usize) {
        let mut seen = vec![usize::MAX; self.n];
        let mut powers = Vec::new();
        let mut cur = s;
        while seen[cur] == usize::MAX {
            seen[cur] = powers.len();
            powers.push(cur);
            cur = self.mul(cur, s);
        }
        let start = seen[cur];
        (powers, start)
    }

    /// Smallest `k > 1` with `s^k = s`, if any.
    pub fn regular_power(&self, s: usize) -> Option<usize> {
        let (powers, start) = self.power_cycle(s);
        (start == 0).then_some(powers.len() + 1)
    }

    /// Subsemigroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        let mut members: Vec<usize> = Vec::new();
        for &g in gens {
            if !inside[g] {
                inside[g] = true;
                members.push(g);
            }
        }
        let mut frontier = 0;
        while frontier < members.len() {
            let x = members[frontier];
            frontier += 1;
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !inside[z] {
                        inside[z] = true;
                        members.push(z);
                    }
                }
                i += 1;
            }
        }
        members.sort_unstable();
        members
    }

    /// The sub-table on `members` (in the given order) as a semigroup of its own.
    pub fn restrict(&self, members: &[usize]) -> Result<FiniteSemigroup> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &m) in members.iter().enumerate() {
            pos[m] = i;
        }
        let labels = members.iter().map(|&m| self.labels[m].clone()).collect();
        let mut table = Vec::with_capacity(members.len());
        for &a in members {
            let mut row = Vec::with_capacity(members.len());
            for &b in members {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::InvalidSubAlgebra("member set not closed".into()));
                }
                row.push(p);
            }
            table.push(row);
        }
        FiniteSemigroup::new(labels, table)
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteSemigroup) -> FiniteSemigroup {
        let m = other.n;
        let labels = (0..self.n * m)
            .map(|i| format!("({},{})", self.labels[i / m], other.labels[i % m]))
            .collect();
        let table = (0..self.n * m)
            .map(|x| {
                (0..self.n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteSemigroup { labels, n: self.n * m, table: flatten(table) }
    }
}

fn flatten(rows: Vec<Vec<usize>>) -> Vec<usize> {
    rows.into_iter().flatten().collect()
}

pub(crate) fn is_abelian_on<I: IntoIterator<Item = usize>>(s: &FiniteSemigroup, members: I) -> bool {
    let members: Vec<usize> = members.into_iter().collect();
    members
        .iter()
        .enumerate()
        .all(|(i, &a)| members[i + 1..].iter().all(|&b| s.commute(a, b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    carrier: FiniteSemigroup,
    identity: usize,
}

impl Deref for FiniteMonoid {
    type Target = FiniteSemigroup;
    fn deref(&self) -> &FiniteSemigroup {
        &self.carrier
    }
}

impl FiniteMonoid {
    pub fn new(carrier: FiniteSemigroup, identity: usize) -> Result<Self> {
        let n = carrier.len();
        if identity >= n
            || (0..n).any(|x| carrier.mul(identity, x) != x || carrier.mul(x, identity) != x)
        {
            return Err(Error::NotIdentity(identity));
        }
        Ok(Self { carrier, identity })
    }

    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        Self::new(FiniteSemigroup::new(labels, table)?, identity)
    }

    /// Uses the (unique) two-sided identity of the semigroup.
    pub fn from_semigroup(carrier: FiniteSemigroup) -> Result<Self> {
        let e = carrier
            .find_identity()
            .ok_or_else(|| Error::InvalidTable("semigroup has no identity".into()))?;
        Self::new(carrier, e)
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn semigroup(&self) -> &FiniteSemigroup {
        &self.carrier
    }

    /// `s^k` with `s^0 = e`.
    pub fn pow(&self, s: usize, k: usize) -> usize {
        if k == 0 {
            self.identity
        } else {
            self.carrier.power(s, k)
        }
    }

    /// Product of any sequence; the empty product is the identity.
    pub fn prod<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.identity, |a, b| self.mul(a, b))
    }

    /// True iff `s^k = s` for some `k > 1` (power-cycle test).
    pub fn is_regular(&self, s: usize) -> bool {
        self.regular_power(s).is_some()
    }

    pub fn is_union_of_subgroups(&self) -> bool {
        (0..self.len()).all(|s| self.is_regular(s))
    }

    /// Submonoid generated by `gens` (always contains the identity).
    pub fn submonoid_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut g = gens.to_vec();
        g.push(self.identity);
        self.closure(&g)
    }

    /// Cyclic submonoid `{e, s, s^2, ...}`.
    pub fn cyclic_submonoid(&self, s: usize) -> Vec<usize> {
        self.submonoid_closure(&[s])
    }

    /// The sub-table on a submonoid, with the member list used as the index map.
    pub fn restrict_monoid(&self, members: &[usize]) -> Result<FiniteMonoid> {
        let sg = self.carrier.restrict(members)?;
        let e = members
            .iter()
            .position(|&m| m == self.identity)
            .ok_or_else(|| Error::InvalidSubAlgebra("identity missing".into()))?;
        FiniteMonoid::new(sg, e)
    }

    pub fn direct_product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let carrier = self.carrier.direct_product(&other.carrier);
        let identity = self.identity * other.len() + other.identity;
        FiniteMonoid { carrier, identity }
    }

    /// `M^k`; tuple `(x_1..x_k)` has index `sum x_i |M|^(k-i)` (first coordinate most significant).
    pub fn power_monoid(&self, k: usize) -> FiniteMonoid {
        assert!(k >= 1);
        (1..k).fold(self.clone(), |acc, _| acc.direct_product(self))
    }

    /// The group structure, if every element is invertible.
    pub fn as_group(&self) -> Option<FiniteGroup> {
        let n = self.len();
        let e = self.identity;
        let inverse: Option<Vec<usize>> = (0..n)
            .map(|x| (0..n).find(|&y| self.mul(x, y) == e && self.mul(y, x) == e))
            .collect();
        inverse.map(|inverse| FiniteGroup { monoid: self.clone(), inverse })
    }

    pub fn is_group(&self) -> bool {
        self.as_group().is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    monoid: FiniteMonoid,
    inverse: Vec<usize>,
}

impl Deref for FiniteGroup {
    type Target = FiniteMonoid;
    fn deref(&self) -> &FiniteMonoid {
        &self.monoid
    }
}

impl FiniteGroup {
    pub fn new(monoid: FiniteMonoid, inverse: Option<Vec<usize>>) -> Result<Self> {
        match inverse {
            None => monoid
                .as_group()
                .ok_or_else(|| Error::InvalidInverse("some element has no inverse".into())),
            Some(inverse) => {
                let n = monoid.len();
                let e = monoid.identity();
                if inverse.len() != n {
                    return Err(Error::InvalidInverse("wrong length".into()));
                }
                for (x, &y) in inverse.iter().enumerate() {
                    if y >= n || monoid.mul(x, y) != e || monoid.mul(y, x) != e {
                        return Err(Error::InvalidInverse(format!("{y} is not an inverse of {x}")));
                    }
                }
                Ok(Self { monoid, inverse })
            }
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn into_monoid(self) -> FiniteMonoid {
        self.monoid
    }

    /// Permutation group on `0..degree` generated by `gens`; elements are listed in
    /// lexicographic order of their one-line notation, composition is `(xy)(i) = x(y(i))`.
    pub fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let h = compose(&elems[i], g);
                if !elems.contains(&h) {
                    elems.push(h);
                }
            }
            i += 1;
        }
        elems.sort();
        let labels = elems.iter().map(|p| perm_label(p)).collect();
        let sg = FiniteSemigroup::from_fn(labels, |a, b| {
            let c = compose(&elems[a], &elems[b]);
            elems.binary_search(&c).expect("closed under composition")
        })?;
        FiniteGroup::new(FiniteMonoid::from_semigroup(sg)?, None)
    }
}

fn compose(x: &[usize], y: &[usize]) -> Vec<usize> {
    y.iter().map(|&j| x[j]).collect()
}

/// One-line notation label of a permutation, e.g. `1230`.
pub fn perm_label(p: &[usize]) -> String {
    if p.len() <= 10 {
        p.iter().map(|d| char::from_digit(*d as u32, 10).unwrap()).collect()
    } else {
        format!("{p:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteMonoid {
        let labels = (0..n).map(|i| i.to_string()).collect();
        FiniteMonoid::new(FiniteSemigroup::from_fn(labels, |a, b| (a + b) % n).unwrap(), 0).unwrap()
    }

    #[test]
    fn rejects_non_associative_table() {
        // a*b = b*a = a, a*a = b: fails (aa)a vs a(aa)
        let err = FiniteSemigroup::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 0], vec![0, 0]],
        );
        assert!(matches!(err, Err(Error::NotAssociative(..))));
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let err = FiniteSemigroup::new(vec!["a".into()], vec![vec![3]]);
        assert!(matches!(err, Err(Error::InvalidTable(_))));
    }

    #[test]
    fn rejects_false_identity() {
        let sg = FiniteSemigroup::from_fn(vec!["0".into(), "1".into()], |a, b| (a + b) % 2).unwrap();
        assert!(matches!(FiniteMonoid::new(sg, 1), Err(Error::NotIdentity(1))));
    }

    #[test]
    fn power_cycle_of_cyclic_group() {
        let z2 = z(2);
        assert_eq!(z2.regular_power(1), Some(3));
        assert_eq!(z2.regular_power(0), Some(2));
        let z4 = z(4);
        assert_eq!(z4.cyclic_submonoid(2), vec![0, 2]);
    }

    #[test]
    fn groups_and_inverses() {
        let g = z(5).as_group().unwrap();
        assert_eq!(g.inv(2), 3);
        let bad = FiniteGroup::new(z(3), Some(vec![0, 1, 2]));
        assert!(bad.is_err());
    }

    #[test]
    fn symmetric_group_is_non_abelian() {
        let s3 = FiniteGroup::permutation_group(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.len(), 6);
        assert_eq!(s3.identity(), 0);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn power_monoid_indexing() {
        let z2 = z(2);
        let p = z2.power_monoid(3);
        assert_eq!(p.len(), 8);
        // (1,0,1) * (1,1,0) = (0,1,1)
        assert_eq!(p.mul(0b101, 0b110), 0b011);
    }
}

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{is_abelian_on, FiniteMonoid, FiniteSemigroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubKind {
    Subsemigroup,
    Submonoid,
    Subgroup,
}

/// A closed subset of a parent algebra. The parent is not stored; every
/// constructor validates against the parent it is given.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubAlgebra {
    kind: SubKind,
    members: Vec<usize>,
    local_identity: Option<usize>,
}

impl SubAlgebra {
    pub fn subsemigroup(parent: &FiniteSemigroup, members: &[usize]) -> Result<Self> {
        let members = normalize_members(parent, members)?;
        check_closed(parent, &members)?;
        Ok(Self { kind: SubKind::Subsemigroup, members, local_identity: None })
    }

    pub fn submonoid(parent: &FiniteMonoid, members: &[usize]) -> Result<Self> {
        let members = normalize_members(parent, members)?;
        check_closed(parent, &members)?;
        if members.binary_search(&parent.identity()).is_err() {
            return Err(Error::InvalidSubAlgebra("submonoid must contain the identity".into()));
        }
        Ok(Self { kind: SubKind::Submonoid, members, local_identity: Some(parent.identity()) })
    }

    /// A subgroup in the sense of a subset that is a group under the parent
    /// operation, possibly with an identity other than the parent's.
    pub fn subgroup(parent: &FiniteSemigroup, members: &[usize]) -> Result<Self> {
        let members = normalize_members(parent, members)?;
        check_closed(parent, &members)?;
        let e = members
            .iter()
            .copied()
            .find(|&e| members.iter().all(|&g| parent.mul(e, g) == g && parent.mul(g, e) == g))
            .ok_or_else(|| Error::InvalidSubAlgebra("no local identity".into()))?;
        for &g in &members {
            if !members.iter().any(|&h| parent.mul(g, h) == e && parent.mul(h, g) == e) {
                return Err(Error::InvalidSubAlgebra(format!("{g} has no inverse in the subgroup")));
            }
        }
        Ok(Self { kind: SubKind::Subgroup, members, local_identity: Some(e) })
    }

    /// The whole monoid as a submonoid of itself.
    pub fn full(parent: &FiniteMonoid) -> Self {
        Self {
            kind: SubKind::Submonoid,
            members: (0..parent.len()).collect(),
            local_identity: Some(parent.identity()),
        }
    }

    pub fn generated_submonoid(parent: &FiniteMonoid, gens: &[usize]) -> Self {
        Self {
            kind: SubKind::Submonoid,
            members: parent.submonoid_closure(gens),
            local_identity: Some(parent.identity()),
        }
    }

    pub fn kind(&self) -> SubKind {
        self.kind
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn local_identity(&self) -> Option<usize> {
        self.local_identity
    }

    pub fn is_abelian(&self, parent: &FiniteSemigroup) -> bool {
        is_abelian_on(parent, self.members.iter().copied())
    }

    /// Every member regular; the power cycle never leaves a closed subset.
    pub fn is_union_of_subgroups(&self, parent: &FiniteSemigroup) -> bool {
        self.members.iter().all(|&s| parent.regular_power(s).is_some())
    }
}

fn normalize_members(parent: &FiniteSemigroup, members: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = members.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::InvalidSubAlgebra("empty member set".into()));
    }
    if let Some(&bad) = set.iter().find(|&&m| m >= parent.len()) {
        return Err(Error::InvalidSubAlgebra(format!("member {bad} out of range")));
    }
    Ok(set.into_iter().collect())
}

fn check_closed(parent: &FiniteSemigroup, members: &[usize]) -> Result<()> {
    for &a in members {
        for &b in members {
            let c = parent.mul(a, b);
            if members.binary_search(&c).is_err() {
                return Err(Error::InvalidSubAlgebra(format!(
                    "{}*{} = {} leaves the member set",
                    parent.label(a),
                    parent.label(b),
                    parent.label(c)
                )));
            }
        }
    }
    Ok(())
}

/// A homomorphism defined on a sub-algebra of the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialHom {
    domain: SubAlgebra,
    images: Vec<Option<usize>>,
}

impl PartialHom {
    /// Validates multiplicativity on the domain; for a submonoid/subgroup domain of a
    /// monoid source the parent identity must map to the target identity.
    pub fn new(
        source: &FiniteSemigroup,
        target: &FiniteSemigroup,
        domain: SubAlgebra,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut images = vec![None; source.len()];
        for (x, y) in pairs {
            if !domain.contains(x) {
                return Err(Error::InvalidHom(format!("{x} is outside the domain")));
            }
            if y >= target.len() {
                return Err(Error::InvalidHom(format!("image {y} out of range")));
            }
            images[x] = Some(y);
        }
        if let Some(&x) = domain.members().iter().find(|&&x| images[x].is_none()) {
            return Err(Error::InvalidHom(format!("no image for domain element {x}")));
        }
        let hom = Self { domain, images };
        hom.check_multiplicative(source, target)?;
        Ok(hom)
    }

    pub fn new_monoid(
        source: &FiniteMonoid,
        target: &FiniteMonoid,
        domain: SubAlgebra,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if domain.kind() == SubKind::Subsemigroup {
            return Err(Error::InvalidHom("monoid homomorphism needs a submonoid domain".into()));
        }
        let hom = Self::new(source, target, domain, pairs)?;
        if hom.domain.kind() == SubKind::Submonoid
            && hom.apply(source.identity()) != Some(target.identity())
        {
            return Err(Error::InvalidHom("identity must map to identity".into()));
        }
        Ok(hom)
    }

    /// Total map given as a full image vector.
    pub fn total(source: &FiniteMonoid, target: &FiniteMonoid, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::InvalidHom("image vector has wrong length".into()));
        }
        Self::new_monoid(source, target, SubAlgebra::full(source), images.into_iter().enumerate())
    }

    pub fn identity_on(m: &FiniteMonoid, domain: SubAlgebra) -> Result<Self> {
        let pairs: Vec<_> = domain.members().iter().map(|&x| (x, x)).collect();
        Self::new(m, m, domain, pairs)
    }

    pub(crate) fn from_parts_unchecked(domain: SubAlgebra, images: Vec<Option<usize>>) -> Self {
        Self { domain, images }
    }

    fn check_multiplicative(&self, source: &FiniteSemigroup, target: &FiniteSemigroup) -> Result<()> {
        for &a in self.domain.members() {
            for &b in self.domain.members() {
                let lhs = self.images[source.mul(a, b)].expect("domain closed");
                let rhs = target.mul(self.images[a].unwrap(), self.images[b].unwrap());
                if lhs != rhs {
                    return Err(Error::InvalidHom(format!(
                        "phi({}*{}) != phi({})*phi({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &SubAlgebra {
        &self.domain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.images.get(x).copied().flatten()
    }

    pub fn images(&self) -> &[Option<usize>] {
        &self.images
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    /// Image vector of a total hom.
    pub fn total_images(&self) -> Option<Vec<usize>> {
        self.images.iter().copied().collect()
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn extends(&self, other: &PartialHom) -> bool {
        other.domain.members().iter().all(|&x| self.apply(x) == other.apply(x))
    }

    /// Abelian in the sense that its image commutes.
    pub fn is_abelian(&self, target: &FiniteSemigroup) -> bool {
        is_abelian_on(target, self.image())
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.images.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y))).collect()
    }
}

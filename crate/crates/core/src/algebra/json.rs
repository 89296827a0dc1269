//! JSON file formats for algebras and partial homomorphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, FiniteMonoid, FiniteSemigroup, PartialHom, SubAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Semigroup,
    Monoid,
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub kind: AlgebraKind,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<usize>>,
}

impl AlgebraFile {
    pub fn from_semigroup(s: &FiniteSemigroup) -> Self {
        Self {
            kind: AlgebraKind::Semigroup,
            elements: s.labels().to_vec(),
            table: s.rows(),
            identity: None,
            inverse: None,
        }
    }

    pub fn from_monoid(m: &FiniteMonoid) -> Self {
        Self {
            kind: AlgebraKind::Monoid,
            identity: Some(m.identity()),
            ..Self::from_semigroup(m)
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        Self {
            kind: AlgebraKind::Group,
            inverse: Some(g.inverses().to_vec()),
            ..Self::from_monoid(g)
        }
    }

    pub fn semigroup(&self) -> Result<FiniteSemigroup> {
        FiniteSemigroup::new(self.elements.clone(), self.table.clone())
    }

    /// Monoid view; valid for both `monoid` and `group` kinds.
    pub fn monoid(&self) -> Result<FiniteMonoid> {
        let sg = self.semigroup()?;
        match (self.kind, self.identity) {
            (AlgebraKind::Semigroup, _) => {
                Err(Error::Parse("a semigroup file cannot be read as a monoid".into()))
            }
            (_, Some(e)) => FiniteMonoid::new(sg, e),
            (_, None) => Err(Error::Parse("monoid file needs an identity".into())),
        }
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        if self.kind != AlgebraKind::Group {
            return Err(Error::Parse(format!("expected a group, found {:?}", self.kind)));
        }
        FiniteGroup::new(self.monoid()?, self.inverse.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialHomFile {
    pub domain: Vec<usize>,
    pub map: BTreeMap<String, usize>,
}

impl PartialHomFile {
    pub fn from_hom(h: &PartialHom) -> Self {
        Self {
            domain: h.domain().members().to_vec(),
            map: h.pairs().into_iter().map(|(x, y)| (x.to_string(), y)).collect(),
        }
    }

    fn pairs(&self) -> Result<Vec<(usize, usize)>> {
        self.map
            .iter()
            .map(|(k, &v)| {
                k.parse::<usize>()
                    .map(|k| (k, v))
                    .map_err(|_| Error::Parse(format!("bad source index {k:?}")))
            })
            .collect()
    }

    /// Reads the map as a monoid homomorphism on a submonoid of `source`.
    pub fn monoid_hom(&self, source: &FiniteMonoid, target: &FiniteMonoid) -> Result<PartialHom> {
        let dom = SubAlgebra::submonoid(source, &self.domain)?;
        PartialHom::new_monoid(source, target, dom, self.pairs()?)
    }

    pub fn semigroup_hom(&self, source: &FiniteSemigroup, target: &FiniteSemigroup) -> Result<PartialHom> {
        let dom = SubAlgebra::subsemigroup(source, &self.domain)?;
        PartialHom::new(source, target, dom, self.pairs()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_group_without_inverse() {
        let text = r#"{"kind":"group","elements":["0","1"],"table":[[0,1],[1,0]],"identity":0}"#;
        let f: AlgebraFile = serde_json::from_str(text).unwrap();
        let g = f.group().unwrap();
        assert_eq!(g.inv(1), 1);
        let back = AlgebraFile::from_group(&g);
        assert_eq!(back.inverse, Some(vec![0, 1]));
    }

    #[test]
    fn parses_partial_hom() {
        let text = r#"{"kind":"monoid","elements":["0","1","2","3"],
            "table":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],"identity":0}"#;
        let m = serde_json::from_str::<AlgebraFile>(text).unwrap().monoid().unwrap();
        let h: PartialHomFile = serde_json::from_str(r#"{"domain":[0,2],"map":{"0":0,"2":2}}"#).unwrap();
        let phi = h.monoid_hom(&m, &m).unwrap();
        assert_eq!(phi.apply(2), Some(2));
        assert_eq!(PartialHomFile::from_hom(&phi), h);
        let bad: PartialHomFile = serde_json::from_str(r#"{"domain":[0,2],"map":{"0":0,"2":1}}"#).unwrap();
        assert!(bad.monoid_hom(&m, &m).is_err());
    }
}

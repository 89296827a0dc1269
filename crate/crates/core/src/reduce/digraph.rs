use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::eqsys::{for_each_homomorphism, RelationalStructure};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    /// Vertices are named `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_names((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn with_names(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::Parse("duplicate vertex name".into()));
        }
        if names.iter().any(|n| n == "p" || n == "q") {
            return Err(Error::Parse("vertex names p and q are reserved".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= names.len() || v >= names.len()) {
            return Err(Error::Parse(format!("edge ({u},{v}) has an endpoint outside the vertex set")));
        }
        Ok(Self { names, edges: edges.into_iter().collect() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// The σ⁺ view with empty `P` and `Q`.
    pub fn as_sigma_plus(&self) -> SigmaPlusStructure {
        SigmaPlusStructure {
            names: self.names.clone(),
            edges: self.edges.clone(),
            p: BTreeSet::new(),
            q: BTreeSet::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

fn resolve(names: &[String], v: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == v)
        .ok_or_else(|| Error::Parse(format!("unknown vertex {v:?}")))
}

impl DigraphFile {
    pub fn from_digraph(d: &Digraph) -> Self {
        Self {
            vertices: d.names.clone(),
            edges: d.edges.iter().map(|&(u, v)| [d.names[u].clone(), d.names[v].clone()]).collect(),
        }
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        let edges = self
            .edges
            .iter()
            .map(|[u, v]| Ok((resolve(&self.vertices, u)?, resolve(&self.vertices, v)?)))
            .collect::<Result<Vec<_>>>()?;
        Digraph::with_names(self.vertices.clone(), edges)
    }
}

/// A structure with one binary relation `E` and unary relations `P`, `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaPlusStructure {
    pub names: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
    pub p: BTreeSet<usize>,
    pub q: BTreeSet<usize>,
}

impl SigmaPlusStructure {
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        p: impl IntoIterator<Item = usize>,
        q: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let s = Self {
            edges: edges.into_iter().collect(),
            p: p.into_iter().collect(),
            q: q.into_iter().collect(),
            names,
        };
        let n = s.names.len();
        let bad = s.edges.iter().any(|&(u, v)| u >= n || v >= n) || s.p.iter().chain(&s.q).any(|&v| v >= n);
        if bad {
            return Err(Error::Parse("relation member outside the universe".into()));
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn to_relational(&self) -> RelationalStructure {
        let sig = vec![("E".to_string(), 2), ("P".to_string(), 1), ("Q".to_string(), 1)];
        let mut st = RelationalStructure::new(sig, self.names.clone());
        for &(u, v) in &self.edges {
            st.add("E", vec![u, v]).unwrap();
        }
        for &v in &self.p {
            st.add("P", vec![v]).unwrap();
        }
        for &v in &self.q {
            st.add("Q", vec![v]).unwrap();
        }
        st
    }

    /// Lexicographically least homomorphism into `to`.
    pub fn find_hom(&self, to: &SigmaPlusStructure) -> Option<Vec<usize>> {
        let mut found = None;
        for_each_homomorphism(&self.to_relational(), &to.to_relational(), |h| {
            found = Some(h.to_vec());
            ControlFlow::Break(())
        })
        .expect("same signature");
        found
    }

    pub fn maps_to(&self, to: &SigmaPlusStructure) -> bool {
        self.find_hom(to).is_some()
    }

    pub fn is_hom(&self, to: &SigmaPlusStructure, h: &[usize]) -> bool {
        self.to_relational().is_homomorphism(&to.to_relational(), h)
    }

    pub fn hom_equivalent(&self, other: &SigmaPlusStructure) -> bool {
        self.maps_to(other) && other.maps_to(self)
    }

    /// Weakly connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut members = vec![s];
            comp[s] = out.len();
            let mut i = 0;
            while i < members.len() {
                for &w in &adj[members[i]] {
                    if comp[w] == usize::MAX {
                        comp[w] = out.len();
                        members.push(w);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced substructure on `keep` (sorted), renumbered in that order.
    pub fn induced(&self, keep: &[usize]) -> SigmaPlusStructure {
        let mut idx = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            idx[v] = i;
        }
        let inside = |v: usize| idx[v] != usize::MAX;
        SigmaPlusStructure {
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            edges: self
                .edges
                .iter()
                .filter(|&&(u, v)| inside(u) && inside(v))
                .map(|&(u, v)| (idx[u], idx[v]))
                .collect(),
            p: self.p.iter().filter(|&&v| inside(v)).map(|&v| idx[v]).collect(),
            q: self.q.iter().filter(|&&v| inside(v)).map(|&v| idx[v]).collect(),
        }
    }

    /// Forgets `P` and `Q`.
    pub fn underlying_digraph(&self) -> SigmaPlusStructure {
        SigmaPlusStructure { p: BTreeSet::new(), q: BTreeSet::new(), ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPlusFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, rename = "P")]
    pub p: Vec<String>,
    #[serde(default, rename = "Q")]
    pub q: Vec<String>,
}

impl SigmaPlusFile {
    pub fn from_structure(s: &SigmaPlusStructure) -> Self {
        let name = |v: usize| s.names[v].clone();
        Self {
            vertices: s.names.clone(),
            edges: s.edges.iter().map(|&(u, v)| [name(u), name(v)]).collect(),
            p: s.p.iter().map(|&v| name(v)).collect(),
            q: s.q.iter().map(|&v| name(v)).collect(),
        }
    }

    pub fn to_structure(&self) -> Result<SigmaPlusStructure> {
        let r = |v: &String| resolve(&self.vertices, v);
        let edges = self.edges.iter().map(|[u, v]| Ok((r(u)?, r(v)?))).collect::<Result<Vec<_>>>()?;
        let p = self.p.iter().map(r).collect::<Result<Vec<_>>>()?;
        let q = self.q.iter().map(r).collect::<Result<Vec<_>>>()?;
        SigmaPlusStructure::new(self.vertices.clone(), edges, p, q)
    }
}

/// `D⁺`: two fresh vertices `p`, `q` (indices `n`, `n+1`), the edge `(p,q)`,
/// `P = {p}` and `Q = {q}`.
pub fn digraph_plus(d: &Digraph) -> SigmaPlusStructure {
    let n = d.len();
    let mut names = d.names.clone();
    names.push("p".into());
    names.push("q".into());
    let mut edges = d.edges.clone();
    edges.insert((n, n + 1));
    SigmaPlusStructure { names, edges, p: BTreeSet::from([n]), q: BTreeSet::from([n + 1]) }
}

/// The edge structure `W`.
pub fn w_structure() -> SigmaPlusStructure {
    digraph_plus(&Digraph::new(0, vec![]).unwrap())
}

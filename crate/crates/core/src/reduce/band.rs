use serde::{Deserialize, Serialize};

use super::digraph::{digraph_plus, Digraph, SigmaPlusStructure};
use crate::algebra::{FiniteSemigroup, SubAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    L,
    R,
    LC,
    LR,
    CR,
}

impl Tag {
    pub const ALL: [Tag; 5] = [Tag::L, Tag::R, Tag::LC, Tag::LR, Tag::CR];

    pub fn name(self) -> &'static str {
        match self {
            Tag::L => "L",
            Tag::R => "R",
            Tag::LC => "LC",
            Tag::LR => "LR",
            Tag::CR => "CR",
        }
    }
}

/// The seven `∼`-classes of `S_D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    V(Tag),
    E,
    Zero,
}

/// Vertices and edges are numbered in `D⁺` (`D` first, then `p`, `q`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandElement {
    Vertex(Tag, usize),
    Edge(usize, usize),
    Zero,
}

impl BandElement {
    pub fn class(self) -> Class {
        match self {
            BandElement::Vertex(t, _) => Class::V(t),
            BandElement::Edge(..) => Class::E,
            BandElement::Zero => Class::Zero,
        }
    }
}

fn product(a: BandElement, b: BandElement) -> BandElement {
    use BandElement::*;
    use Tag::*;
    let ca = a.class();
    if ca == b.class() {
        return b;
    }
    match (ca, b) {
        (Class::V(R), Vertex(L, v))
        | (Class::V(L), Vertex(R, v))
        | (Class::V(LR), Vertex(R | L, v))
        | (Class::V(L | R), Vertex(LR, v)) => Vertex(LR, v),
        (Class::V(L), Vertex(LC, v)) | (Class::V(LC), Vertex(L, v)) | (Class::E, Vertex(L | LC, v)) => {
            Vertex(LC, v)
        }
        (Class::V(R), Vertex(CR, v)) | (Class::V(CR), Vertex(R, v)) | (Class::E, Vertex(R | CR, v)) => {
            Vertex(CR, v)
        }
        (Class::V(L | LC), Edge(u, _)) => Vertex(LC, u),
        (Class::V(R | CR), Edge(_, v)) => Vertex(CR, v),
        _ => Zero,
    }
}

/// The right-normal band `S_D` together with its element coding.
#[derive(Clone, Debug)]
pub struct SdBand {
    pub semigroup: FiniteSemigroup,
    pub plus: SigmaPlusStructure,
    edges: Vec<(usize, usize)>,
    nv: usize,
}

impl SdBand {
    pub fn num_vertices(&self) -> usize {
        self.nv
    }

    /// `p` and `q` in `D⁺` numbering.
    pub fn p(&self) -> usize {
        self.nv - 2
    }

    pub fn q(&self) -> usize {
        self.nv - 1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index(&self, e: BandElement) -> Option<usize> {
        match e {
            BandElement::Vertex(t, v) if v < self.nv => Some(t as usize * self.nv + v),
            BandElement::Edge(u, v) => self.edges.iter().position(|&x| x == (u, v)).map(|i| 5 * self.nv + i),
            BandElement::Zero => Some(5 * self.nv + self.edges.len()),
            _ => None,
        }
    }

    pub fn idx(&self, e: BandElement) -> usize {
        self.index(e).expect("element of S_D")
    }

    pub fn element(&self, i: usize) -> BandElement {
        let vs = 5 * self.nv;
        if i < vs {
            BandElement::Vertex(Tag::ALL[i / self.nv], i % self.nv)
        } else if i < vs + self.edges.len() {
            let (u, v) = self.edges[i - vs];
            BandElement::Edge(u, v)
        } else {
            BandElement::Zero
        }
    }

    pub fn class(&self, i: usize) -> Class {
        self.element(i).class()
    }

    /// Representative `c_C` of a class inside `S_W`.
    pub fn class_rep(&self, c: Class) -> usize {
        self.idx(match c {
            Class::V(t) => BandElement::Vertex(t, self.p()),
            Class::E => BandElement::Edge(self.p(), self.q()),
            Class::Zero => BandElement::Zero,
        })
    }

    /// `S_W`: `0`, `(p,q)^C` and the ten `p^□`, `q^□`.
    pub fn w_members(&self) -> Vec<usize> {
        let mut m: Vec<usize> = Tag::ALL
            .iter()
            .flat_map(|&t| [self.idx(BandElement::Vertex(t, self.p())), self.idx(BandElement::Vertex(t, self.q()))])
            .collect();
        m.push(self.idx(BandElement::Edge(self.p(), self.q())));
        m.push(self.idx(BandElement::Zero));
        m.sort_unstable();
        m
    }

    /// Image of an element of the standalone `S_W` band under the planting map.
    pub fn embed_w(&self, w: &SdBand, i: usize) -> usize {
        let lift = |v: usize| if v == w.p() { self.p() } else { self.q() };
        self.idx(match w.element(i) {
            BandElement::Vertex(t, v) => BandElement::Vertex(t, lift(v)),
            BandElement::Edge(..) => BandElement::Edge(self.p(), self.q()),
            BandElement::Zero => BandElement::Zero,
        })
    }

    /// Inverse of [`embed_w`](Self::embed_w) on `S_W`.
    pub fn to_w(&self, w: &SdBand, i: usize) -> Option<usize> {
        let drop = |v: usize| {
            if v == self.p() {
                Some(w.p())
            } else if v == self.q() {
                Some(w.q())
            } else {
                None
            }
        };
        match self.element(i) {
            BandElement::Vertex(t, v) => drop(v).map(|v| w.idx(BandElement::Vertex(t, v))),
            BandElement::Edge(u, v) if (u, v) == (self.p(), self.q()) => {
                Some(w.idx(BandElement::Edge(w.p(), w.q())))
            }
            BandElement::Edge(..) => None,
            BandElement::Zero => Some(w.idx(BandElement::Zero)),
        }
    }
}

/// `S_D` and its planted subsemigroup `S_W`.
pub fn build_sd(d: &Digraph) -> (SdBand, SubAlgebra) {
    let plus = digraph_plus(d);
    let nv = plus.len();
    let edges: Vec<(usize, usize)> = {
        let mut e: Vec<_> = d.edges().iter().copied().collect();
        e.push((nv - 2, nv - 1));
        e
    };
    let mut band = SdBand { semigroup: FiniteSemigroup::from_fn(vec!["0".into()], |_, _| 0).unwrap(), plus, edges, nv };
    let size = 5 * nv + band.edges.len() + 1;
    let labels = (0..size)
        .map(|i| match band.element(i) {
            BandElement::Vertex(t, v) => format!("{}^{}", band.plus.names[v], t.name()),
            BandElement::Edge(u, v) => format!("({},{})^C", band.plus.names[u], band.plus.names[v]),
            BandElement::Zero => "0".to_string(),
        })
        .collect();
    let sg = FiniteSemigroup::from_fn(labels, |a, b| band.idx(product(band.element(a), band.element(b))))
        .expect("S_D is associative");
    band.semigroup = sg;
    let w = SubAlgebra::subsemigroup(&band.semigroup, &band.w_members()).expect("S_W is closed");
    (band, w)
}

/// `S_D` for the empty digraph, which is `S_W` itself.
pub fn w_band() -> SdBand {
    build_sd(&Digraph::new(0, vec![]).unwrap()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{quotient_semilattice, sim_classes};
    use crate::corpus;

    #[test]
    fn sizes() {
        let one = Digraph::new(2, vec![(0, 1)]).unwrap();
        let (sd, w) = build_sd(&one);
        assert_eq!(sd.semigroup.len(), 23);
        assert_eq!(w.len(), 12);
        assert_eq!(w_band().semigroup.len(), 12);
    }

    #[test]
    fn product_rules() {
        let d = Digraph::new(2, vec![(0, 1)]).unwrap();
        let (sd, _) = build_sd(&d);
        let s = &sd.semigroup;
        let e = |x| sd.idx(x);
        use BandElement::*;
        assert_eq!(s.mul(e(Vertex(Tag::R, 1)), e(Vertex(Tag::L, 0))), e(Vertex(Tag::LR, 0)));
        assert_eq!(s.mul(e(Vertex(Tag::L, 2)), e(Edge(0, 1))), e(Vertex(Tag::LC, 0)));
        assert_eq!(s.mul(e(Vertex(Tag::CR, 0)), e(Edge(0, 1))), e(Vertex(Tag::CR, 1)));
        assert_eq!(s.mul(e(Edge(0, 1)), e(Vertex(Tag::LR, 0))), e(Zero));
        assert_eq!(s.mul(e(Vertex(Tag::L, 0)), e(Vertex(Tag::L, 1))), e(Vertex(Tag::L, 1)));
    }

    #[test]
    fn band_laws_and_classes() {
        for d in corpus::all_digraphs(2) {
            let (sd, _) = build_sd(&d);
            let s = &sd.semigroup;
            let n = s.len();
            for r in 0..n {
                assert_eq!(s.mul(r, r), r);
                for t in 0..n {
                    for u in 0..n {
                        assert_eq!(s.mul(s.mul(r, t), u), s.mul(s.mul(t, r), u));
                    }
                }
            }
            let classes = sim_classes(s);
            assert_eq!(classes.len(), 7);
            for c in classes {
                assert!(c.iter().all(|&x| sd.class(x) == sd.class(c[0])));
            }
            assert!(quotient_semilattice(s).unwrap().is_semilattice());
        }
    }

    #[test]
    fn planting_round_trips() {
        let w = w_band();
        let (sd, sub) = build_sd(&Digraph::new(3, vec![(0, 1), (2, 2)]).unwrap());
        let image: Vec<usize> = {
            let mut v: Vec<usize> = (0..w.semigroup.len()).map(|i| sd.embed_w(&w, i)).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(image, sub.members());
        for i in 0..w.semigroup.len() {
            assert_eq!(sd.to_w(&w, sd.embed_w(&w, i)), Some(i));
            for j in 0..w.semigroup.len() {
                assert_eq!(sd.embed_w(&w, w.semigroup.mul(i, j)), sd.semigroup.mul(sd.embed_w(&w, i), sd.embed_w(&w, j)));
            }
        }
    }
}

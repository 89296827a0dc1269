use super::band::{w_band, BandElement, SdBand, Tag};
use super::digraph::SigmaPlusStructure;
use crate::eqsys::{normalize, Assignment, Atom, Equation, EquationSystem, GeneralEquation, Mode, NormalForm};

pub fn vertex_var(i: &SigmaPlusStructure, v: usize, t: Tag) -> String {
    format!("{}^{}", i.names[v], t.name())
}

pub fn edge_var(i: &SigmaPlusStructure, u: usize, v: usize) -> String {
    format!("({},{})^C", i.names[u], i.names[v])
}

const VERTEX_TAGS: [Tag; 3] = [Tag::L, Tag::R, Tag::LR];

/// The equations of `Φ(I)` before normalization, with constants in the standalone
/// `S_W` band ([`w_band`]).
pub fn phi_general(i: &SigmaPlusStructure) -> Vec<GeneralEquation> {
    let w = w_band();
    let c = |e: BandElement| Atom::Const(w.idx(e));
    let pv = |t| c(BandElement::Vertex(t, w.p()));
    let mark = |t, at_p: bool| c(BandElement::Vertex(t, if at_p { w.p() } else { w.q() }));
    let pq = c(BandElement::Edge(w.p(), w.q()));
    let var = |s: String| Atom::Var(s);
    let eq = |l: Vec<Atom>, r: Vec<Atom>| GeneralEquation { lhs: l, rhs: r };
    let mut out = Vec::new();
    for v in 0..i.len() {
        for t in VERTEX_TAGS {
            let x = var(vertex_var(i, v, t));
            out.push(eq(vec![pv(t), x.clone()], vec![x.clone()]));
            out.push(eq(vec![x, pv(t)], vec![pv(t)]));
        }
        let lr = var(vertex_var(i, v, Tag::LR));
        out.push(eq(vec![pv(Tag::LR), var(vertex_var(i, v, Tag::L))], vec![lr.clone()]));
        out.push(eq(vec![pv(Tag::LR), var(vertex_var(i, v, Tag::R))], vec![lr]));
        for (marks, at_p) in [(&i.p, true), (&i.q, false)] {
            if marks.contains(&v) {
                for t in VERTEX_TAGS {
                    out.push(eq(vec![var(vertex_var(i, v, t))], vec![mark(t, at_p)]));
                }
            }
        }
    }
    for &(u, v) in &i.edges {
        let x = var(edge_var(i, u, v));
        out.push(eq(vec![x.clone(), pq.clone()], vec![pq.clone()]));
        out.push(eq(vec![pq.clone(), x.clone()], vec![x.clone()]));
        out.push(eq(vec![pv(Tag::LC), x.clone()], vec![pv(Tag::LC), var(vertex_var(i, u, Tag::L))]));
        out.push(eq(vec![pv(Tag::CR), x], vec![pv(Tag::CR), var(vertex_var(i, v, Tag::R))]));
    }
    out
}

/// `Φ(I)` in `Mul`/`Fix` form over the standalone `S_W` band.
pub fn phi(i: &SigmaPlusStructure) -> NormalForm {
    let w = w_band();
    let all: Vec<usize> = (0..w.semigroup.len()).collect();
    normalize(&phi_general(i), &w.semigroup, &all, Mode::Semigroup).expect("constants lie in S_W")
}

/// Re-reads a system over the standalone `S_W` as a system over `S_D`.
pub fn embed_system(sys: &EquationSystem, band: &SdBand) -> EquationSystem {
    let w = w_band();
    sys.map_constants(|c| band.embed_w(&w, c))
}

/// Extends a partial assignment by evaluating `Fix` equations and `Mul` equations
/// whose inputs are known, then checks every equation.
pub fn complete_assignment(sys: &EquationSystem, band: &SdBand, partial: Vec<Option<usize>>) -> Option<Assignment> {
    let mut vals = partial;
    loop {
        let mut progress = false;
        for eq in sys.equations() {
            match *eq {
                Equation::Fix(x, c) if vals[x].is_none() => {
                    vals[x] = Some(c);
                    progress = true;
                }
                Equation::Mul(x, y, z) if vals[z].is_none() => {
                    if let (Some(a), Some(b)) = (vals[x], vals[y]) {
                        vals[z] = Some(band.semigroup.mul(a, b));
                        progress = true;
                    }
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    let asg = Assignment(vals.into_iter().collect::<Option<Vec<_>>>()?);
    crate::eqsys::check_assignment(sys, &band.semigroup, &asg).then_some(asg)
}

/// The solution of `Φ(I)` over `S_D` induced by a homomorphism `h: I → D⁺`.
/// `sys` must be `embed_system(&phi(i).system, band)`.
pub fn hom_to_solution(
    i: &SigmaPlusStructure,
    nf: &NormalForm,
    sys: &EquationSystem,
    band: &SdBand,
    h: &[usize],
) -> Option<Assignment> {
    let mut partial = vec![None; sys.num_vars()];
    for (name, x) in &nf.originals {
        let value = (0..i.len())
            .find_map(|v| {
                VERTEX_TAGS
                    .iter()
                    .find(|&&t| vertex_var(i, v, t) == *name)
                    .map(|&t| band.idx(BandElement::Vertex(t, h[v])))
            })
            .or_else(|| {
                i.edges
                    .iter()
                    .find(|&&(u, v)| edge_var(i, u, v) == *name)
                    .and_then(|&(u, v)| band.index(BandElement::Edge(h[u], h[v])))
            })?;
        partial[*x] = Some(value);
    }
    complete_assignment(sys, band, partial)
}

/// Reads `h(v)` off the value of `v^L` in a solution of `Φ(I)`.
pub fn solution_to_hom(i: &SigmaPlusStructure, nf: &NormalForm, band: &SdBand, asg: &Assignment) -> Option<Vec<usize>> {
    let values = nf.restrict(asg);
    (0..i.len())
        .map(|v| match band.element(values[&vertex_var(i, v, Tag::L)]) {
            BandElement::Vertex(Tag::L, w) => Some(w),
            _ => None,
        })
        .collect()
}

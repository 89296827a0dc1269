use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::band::{BandElement, Class, SdBand, Tag};
use super::digraph::SigmaPlusStructure;
use super::semilattice::solve_semilattice_min;
use crate::algebra::{quotient_semilattice, FiniteSemigroup};
use crate::eqsys::{Assignment, ConstMap, Equation, EquationSystem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassNote {
    pub pass: &'static str,
    pub touched: usize,
    pub detail: String,
}

/// Where a variable of the input system lives in the output structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarImage {
    Zero,
    Vertex { class: Tag, vertex: usize },
    Edge { src: usize, tgt: usize },
}

#[derive(Clone, Debug)]
pub struct PsiStructure {
    pub structure: SigmaPlusStructure,
    pub images: Vec<VarImage>,
}

impl PsiStructure {
    /// Solution of the input system over `S_D` induced by `h: I → D⁺`.
    pub fn lift(&self, band: &SdBand, h: &[usize]) -> Option<Assignment> {
        self.images
            .iter()
            .map(|img| match *img {
                VarImage::Zero => band.index(BandElement::Zero),
                VarImage::Vertex { class, vertex } => band.index(BandElement::Vertex(class, h[vertex])),
                VarImage::Edge { src, tgt } => band.index(BandElement::Edge(h[src], h[tgt])),
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }
}

#[derive(Clone, Debug)]
pub enum PsiOutcome {
    /// The quotient system has no solution; it is kept as the certificate.
    Reject { quotient: FiniteSemigroup, certificate: EquationSystem },
    Structure(PsiStructure),
}

#[derive(Clone, Debug)]
pub struct PsiResult {
    pub outcome: PsiOutcome,
    pub log: Vec<PassNote>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LinkKind {
    Same,
    Src,
    Tgt,
}

/// `c·from = c·to` with `c = c_{to}`, read on projections: the vertex (or edge)
/// carried by `to` equals the one selected from `from`.
#[derive(Clone, Copy, Debug)]
struct Link {
    c: Class,
    kind: LinkKind,
    from: usize,
    to: Target,
}

#[derive(Clone, Copy, Debug)]
enum Target {
    Var(usize),
    /// A slot with no variable of its own (endpoints of an expanded edge constant).
    Slot(usize),
}

fn note(log: &mut Vec<PassNote>, pass: &'static str, touched: usize, detail: String) {
    log.push(PassNote { pass, touched, detail });
}

fn class_name(c: Class) -> String {
    match c {
        Class::V(t) => format!("V^{}", t.name()),
        Class::E => "E^C".into(),
        Class::Zero => "0".into(),
    }
}

/// Turns a `Mul`/`Fix` system with constants in `S_W ⊆ S_D` into a σ⁺-structure
/// that maps into `D⁺` exactly when the system is solvable over `S_D`, for every
/// digraph `D`, or rejects it when it is unsolvable over every `S_D`.
pub fn psi(x: &EquationSystem, band: &SdBand) -> Result<PsiResult> {
    let w_members = band.w_members();
    for c in x.constants() {
        if !w_members.contains(&c) {
            return Err(Error::ConstantOutsideSW(band.semigroup.label(c).to_string()));
        }
    }
    let mut log = Vec::new();
    let n = x.num_vars();

    // quotient: minimal solution over the semilattice of classes
    let q = quotient_semilattice(&band.semigroup).expect("S_D/~ is defined");
    let hat = x.map_constants(|c| q.projection[c]);
    let Some(min) = solve_semilattice_min(&q.semigroup, &hat, ConstMap::Identity)? else {
        note(&mut log, "quotient", x.equations().len(), "quotient system has no solution".into());
        return Ok(PsiResult { outcome: PsiOutcome::Reject { quotient: q.semigroup, certificate: hat }, log });
    };
    note(&mut log, "quotient", x.equations().len(), "minimal quotient solution found".into());

    // pin: every variable is bound to the class C_x of its minimal value
    let class: Vec<Class> = (0..n).map(|v| band.class(q.classes[min.get(v)][0])).collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for &c in &class {
        *counts.entry(class_name(c)).or_default() += 1;
    }
    note(&mut log, "pin", n, format!("{counts:?}"));

    // rewrite: x1 x2 = x3 becomes c_{x3} x2 = c_{x3} x3
    let mut links = Vec::new();
    let mut fixes: Vec<(usize, usize)> = Vec::new();
    for eq in x.equations() {
        match *eq {
            Equation::Mul(_, x2, x3) => {
                let (k, j) = (class[x3], class[x2]);
                let kind = match (k, j) {
                    (Class::V(Tag::LC), Class::E) => LinkKind::Src,
                    (Class::V(Tag::CR), Class::E) => LinkKind::Tgt,
                    _ => LinkKind::Same,
                };
                links.push(Link { c: k, kind, from: x2, to: Target::Var(x3) });
            }
            Equation::Fix(v, c) => fixes.push((v, c)),
        }
    }
    note(&mut log, "rewrite-products", links.len(), "each product now reads c_z y = c_z z".into());

    // drop-zero: equations 0 y = 0 z and variables pinned to 0
    let before = links.len();
    links.retain(|l| l.c != Class::Zero);
    let zero_vars = class.iter().filter(|&&c| c == Class::Zero).count();
    fixes.retain(|&(v, _)| class[v] != Class::Zero);
    note(
        &mut log,
        "drop-zero",
        before - links.len() + zero_vars,
        format!("{} links and {zero_vars} variables removed", before - links.len()),
    );

    // retag: LC -> L, CR -> R, LR -> R; vertex variables only carry their projection from here on
    let retagged = class.iter().filter(|c| matches!(c, Class::V(Tag::LC | Tag::CR | Tag::LR))).count();
    note(&mut log, "retag", retagged, "V^LC -> V^L, V^CR and V^LR -> V^R".into());

    // slots: one per vertex-class variable, two per edge-class variable
    let mut slot_of: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut slot_names: Vec<String> = Vec::new();
    for v in 0..n {
        let name = &x.variables()[v];
        let slots = match class[v] {
            Class::Zero => vec![],
            Class::V(_) => vec![name.clone()],
            Class::E => vec![format!("{name}.src"), format!("{name}.tgt")],
        };
        slot_of.push((slot_names.len()..slot_names.len() + slots.len()).collect());
        slot_names.extend(slots);
    }
    let mut marks: Vec<(usize, bool)> = Vec::new(); // (slot, is_p)

    // expand-edge-constants: x = (p,q)^C becomes links to fresh p^L and q^R variables
    let mut expanded = 0;
    for &(v, c) in &fixes {
        match band.element(c) {
            BandElement::Edge(..) => {
                let y = slot_names.len();
                slot_names.push(format!("{}.p", x.variables()[v]));
                let z = slot_names.len();
                slot_names.push(format!("{}.q", x.variables()[v]));
                marks.push((y, true));
                marks.push((z, false));
                links.push(Link { c: Class::V(Tag::LC), kind: LinkKind::Src, from: v, to: Target::Slot(y) });
                links.push(Link { c: Class::V(Tag::CR), kind: LinkKind::Tgt, from: v, to: Target::Slot(z) });
                expanded += 1;
            }
            BandElement::Vertex(_, w) => marks.push((slot_of[v][0], w == band.p())),
            BandElement::Zero => {}
        }
    }
    note(&mut log, "expand-edge-constants", expanded, "x = (p,q)^C split into endpoint constraints".into());

    // identify: every remaining link equates two slots (or two slot pairs)
    let mut parent: Vec<usize> = (0..slot_names.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut merges = 0;
    let mut union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
            merges += 1;
        }
    };
    for l in &links {
        let to_slots: Vec<usize> = match l.to {
            Target::Var(v) => slot_of[v].clone(),
            Target::Slot(s) => vec![s],
        };
        let from_slots = &slot_of[l.from];
        match l.kind {
            LinkKind::Same => {
                for (&a, &b) in from_slots.iter().zip(&to_slots) {
                    union(&mut parent, a, b);
                }
            }
            LinkKind::Src => union(&mut parent, from_slots[0], to_slots[0]),
            LinkKind::Tgt => union(&mut parent, from_slots[1], to_slots[0]),
        }
    }
    note(&mut log, "identify", merges, format!("{} links, {merges} slot merges", links.len()));

    // parse: slot classes become vertices, edge variables become edges
    let mut vertex_of = vec![usize::MAX; slot_names.len()];
    let mut names = Vec::new();
    for s in 0..slot_names.len() {
        let r = find(&mut parent, s);
        if vertex_of[r] == usize::MAX {
            vertex_of[r] = names.len();
            names.push(slot_names[r].clone());
        }
        vertex_of[s] = vertex_of[r];
    }
    let mut edges = BTreeSet::new();
    let mut images = Vec::with_capacity(n);
    for v in 0..n {
        images.push(match class[v] {
            Class::Zero => VarImage::Zero,
            Class::V(t) => VarImage::Vertex { class: t, vertex: vertex_of[slot_of[v][0]] },
            Class::E => {
                let (s, t) = (vertex_of[slot_of[v][0]], vertex_of[slot_of[v][1]]);
                edges.insert((s, t));
                VarImage::Edge { src: s, tgt: t }
            }
        });
    }
    let p: BTreeSet<usize> = marks.iter().filter(|m| m.1).map(|m| vertex_of[m.0]).collect();
    let qs: BTreeSet<usize> = marks.iter().filter(|m| !m.1).map(|m| vertex_of[m.0]).collect();
    let structure = SigmaPlusStructure { names, edges, p, q: qs };
    note(
        &mut log,
        "parse",
        structure.len(),
        format!("{} vertices, {} edges", structure.len(), structure.edges.len()),
    );
    Ok(PsiResult { outcome: PsiOutcome::Structure(PsiStructure { structure, images }), log })
}

/// Drops every weakly connected component that maps into the edge structure `W`;
/// such components map into every `D⁺`.
pub fn prune_w_components(i: &SigmaPlusStructure) -> SigmaPlusStructure {
    let w = super::digraph::w_structure();
    let keep: Vec<usize> = i
        .components()
        .into_iter()
        .filter(|c| !i.induced(c).maps_to(&w))
        .flatten()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    i.induced(&keep)
}

//! Digraph templates as semigroup equations: `D⁺`, the band `S_D` with its planted
//! `S_W`, the translations `Φ` and `Ψ`, and the checks tying them together.

mod band;
mod digraph;
mod phi;
mod psi;
mod semilattice;

pub use band::{build_sd, w_band, BandElement, Class, SdBand, Tag};
pub use digraph::{digraph_plus, w_structure, Digraph, DigraphFile, SigmaPlusFile, SigmaPlusStructure};
pub use phi::{
    complete_assignment, edge_var, embed_system, hom_to_solution, phi, phi_general, solution_to_hom, vertex_var,
};
pub use psi::{prune_w_components, psi, PassNote, PsiOutcome, PsiResult, PsiStructure, VarImage};
pub use semilattice::solve_semilattice_min;

use serde::Serialize;

use crate::eqsys::{brute_force_solve, ConstMap, DEFAULT_BUDGET};
use crate::error::Result;

/// Outcome of reducing a `D⁺` instance to a plain digraph instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedPruning {
    /// A component touching `P` or `Q` does not map into `W`.
    Reject,
    /// Every component maps into `W`.
    Accept,
    /// The remaining components, with `P` and `Q` forgotten.
    Reduced(SigmaPlusStructure),
}

/// Strips an instance of `D⁺` down to an instance of `D`: components meeting `P`
/// or `Q` must map into `W` and are removed, as are other components that map into `W`.
pub fn prune_extended(i: &SigmaPlusStructure) -> ExtendedPruning {
    let w = w_structure();
    let mut keep = Vec::new();
    for c in i.components() {
        let sub = i.induced(&c);
        let marked = !sub.p.is_empty() || !sub.q.is_empty();
        let to_w = sub.maps_to(&w);
        if marked && !to_w {
            return ExtendedPruning::Reject;
        }
        if !to_w {
            keep.extend(c);
        }
    }
    if keep.is_empty() {
        return ExtendedPruning::Accept;
    }
    keep.sort_unstable();
    ExtendedPruning::Reduced(i.induced(&keep).underlying_digraph())
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRow {
    pub instance: usize,
    /// `I → D⁺` for `D₁` and `D₂`.
    pub hom: [bool; 2],
    /// `Φ(I)` solvable over `S_{D₁}` and `S_{D₂}`.
    pub phi_solvable: [bool; 2],
    /// Every found witness converted to a verified witness on the other side.
    pub witnesses_convert: bool,
    pub pruning_consistent: bool,
    pub psi_round_trip: bool,
}

impl EquivalenceRow {
    pub fn holds(&self) -> bool {
        self.hom == self.phi_solvable && self.witnesses_convert && self.pruning_consistent && self.psi_round_trip
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub rows: Vec<EquivalenceRow>,
}

impl EquivalenceReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(EquivalenceRow::holds)
    }
}

/// For each instance and each `D ∈ {D₁, D₂}`: `I → D⁺` iff `Φ(I)` is solvable
/// over `S_D`, with homomorphisms turned into solutions and back; the `D⁺ → D`
/// pruning agrees with `I → D⁺`; and `Ψ(Φ(I))` matches `I` up to components mapping into `W`.
pub fn reduction_equivalence_check(
    d1: &Digraph,
    d2: &Digraph,
    instances: &[SigmaPlusStructure],
) -> Result<EquivalenceReport> {
    let sides: Vec<(SdBand, SigmaPlusStructure, &Digraph)> =
        [d1, d2].into_iter().map(|d| (build_sd(d).0, digraph_plus(d), d)).collect();
    let w = w_band();
    let mut rows = Vec::new();
    for (idx, inst) in instances.iter().enumerate() {
        let nf = phi(inst);
        let mut hom = [false; 2];
        let mut solvable = [false; 2];
        let mut witnesses = true;
        let mut pruning = true;
        for (k, (band, plus, d)) in sides.iter().enumerate() {
            let sys = embed_system(&nf.system, band);
            if let Some(h) = inst.find_hom(plus) {
                hom[k] = true;
                witnesses &= hom_to_solution(inst, &nf, &sys, band, &h).is_some();
            }
            if let Some(asg) = brute_force_solve(&sys, &band.semigroup, ConstMap::Identity, DEFAULT_BUDGET)? {
                solvable[k] = true;
                witnesses &= solution_to_hom(inst, &nf, band, &asg).is_some_and(|h| inst.is_hom(plus, &h));
            }
            let pruned = match prune_extended(inst) {
                ExtendedPruning::Reject => false,
                ExtendedPruning::Accept => true,
                ExtendedPruning::Reduced(r) => r.maps_to(&d.as_sigma_plus()),
            };
            pruning &= pruned == hom[k];
        }
        let psi_round_trip = match psi(&nf.system, &w)?.outcome {
            PsiOutcome::Structure(s) => prune_w_components(&s.structure).hom_equivalent(&prune_w_components(inst)),
            PsiOutcome::Reject { .. } => false,
        };
        rows.push(EquivalenceRow {
            instance: idx,
            hom,
            phi_solvable: solvable,
            witnesses_convert: witnesses,
            pruning_consistent: pruning,
            psi_round_trip,
        });
    }
    Ok(EquivalenceReport { rows })
}

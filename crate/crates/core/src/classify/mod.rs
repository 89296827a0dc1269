//! Tractability of `PLin` templates over monoids and groups: witnesses,
//! obstruction ledgers, and the sandwich structure between the two sides.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::algebra::{for_each_extending_hom, is_abelian_on, FiniteMonoid, HomFilter, PartialHom, SubAlgebra};
use crate::eqsys::{PLinTemplate, RelationalStructure, MUL_SYMBOL};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Tractable,
    NpHard,
    IllFormedTemplate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmNote {
    BlpAip,
    Aip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "element", rename_all = "snake_case")]
pub enum ObstructionReason {
    NonAbelianImage,
    /// The least image element lying in no subgroup.
    NonRegularImageElement(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    /// Image vector of the extending hom.
    pub psi: Vec<usize>,
    pub reason: ObstructionReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    /// Image vector of the lexicographically least tractability witness.
    pub witness: Option<Vec<usize>>,
    pub obstructions: Vec<Obstruction>,
    /// Number of extending homs examined (every one, for an NP-hard verdict).
    pub extending_homs: usize,
    pub truncated: bool,
    pub algorithm_note: Option<AlgorithmNote>,
}

impl ClassificationResult {
    pub fn witness_hom(&self, t: &PLinTemplate) -> Option<PartialHom> {
        self.witness.as_ref().map(|w| PartialHom::total(&t.source, &t.target, w.clone()).expect("witness is a hom"))
    }
}

/// Default cap on the stored obstruction list.
pub const DEFAULT_OBSTRUCTION_CAP: usize = 10_000;

fn obstruction_reason(target: &FiniteMonoid, image: &[usize], abelian_required: bool) -> Option<ObstructionReason> {
    if abelian_required && !is_abelian_on(target, image.iter().copied()) {
        return Some(ObstructionReason::NonAbelianImage);
    }
    image.iter().find(|&&s| !target.is_regular(s)).map(|&s| ObstructionReason::NonRegularImageElement(s))
}

fn classify_with(t: &PLinTemplate, group_rule: bool, cap: usize) -> ClassificationResult {
    let mut count = 0;
    let mut witness: Option<Vec<usize>> = None;
    let mut obstructions = Vec::new();
    for_each_extending_hom(&t.source, &t.target, &t.phi, HomFilter::All, |h| {
        count += 1;
        let images = h.total_images().expect("total");
        let image = h.image();
        let reason = if group_rule {
            (!is_abelian_on(&t.target, image.iter().copied())).then_some(ObstructionReason::NonAbelianImage)
        } else {
            obstruction_reason(&t.target, &image, true)
        };
        match reason {
            None => {
                if witness.as_ref().is_none_or(|w| images < *w) {
                    witness = Some(images);
                }
            }
            Some(r) if witness.is_none() && obstructions.len() < cap => {
                obstructions.push(Obstruction { psi: images, reason: r })
            }
            Some(_) => {}
        }
        ControlFlow::Continue(())
    });
    let group = t.is_group_template();
    let note = if group { AlgorithmNote::Aip } else { AlgorithmNote::BlpAip };
    match (count, witness) {
        (0, _) => ClassificationResult {
            verdict: Verdict::IllFormedTemplate,
            witness: None,
            obstructions: vec![],
            extending_homs: 0,
            truncated: false,
            algorithm_note: None,
        },
        (_, Some(w)) => ClassificationResult {
            verdict: Verdict::Tractable,
            witness: Some(w),
            obstructions: vec![],
            extending_homs: count,
            truncated: false,
            algorithm_note: Some(note),
        },
        (_, None) => ClassificationResult {
            verdict: Verdict::NpHard,
            witness: None,
            truncated: obstructions.len() < count,
            obstructions,
            extending_homs: count,
            algorithm_note: None,
        },
    }
}

/// Tractable iff some hom extending `φ` has an Abelian image that is a union of subgroups.
pub fn classify_monoid_template(t: &PLinTemplate) -> ClassificationResult {
    classify_monoid_template_capped(t, DEFAULT_OBSTRUCTION_CAP)
}

pub fn classify_monoid_template_capped(t: &PLinTemplate, cap: usize) -> ClassificationResult {
    classify_with(t, false, cap)
}

/// For groups only commutativity of the image matters.
pub fn classify_group_template(t: &PLinTemplate) -> Result<ClassificationResult> {
    if !t.is_group_template() {
        return Err(crate::Error::PreconditionFailed("both algebras must be groups".into()));
    }
    Ok(classify_with(t, true, DEFAULT_OBSTRUCTION_CAP))
}

/// `CSP(Lin(M, N))` as the template `PLin(M, M, id_N)`.
pub fn classify_csp(m: &FiniteMonoid, n: &SubAlgebra) -> Result<ClassificationResult> {
    Ok(classify_monoid_template(&PLinTemplate::csp(m.clone(), n.clone())?))
}

/// Checks that `psi` extends `φ`, has Abelian image and the image is a union of subgroups.
pub fn validate_witness(t: &PLinTemplate, psi: &[usize]) -> bool {
    let Ok(h) = PartialHom::total(&t.source, &t.target, psi.to_vec()) else { return false };
    h.extends(&t.phi) && obstruction_reason(&t.target, &h.image(), true).is_none()
}

/// The structure `C` on `im(ψ)`: the multiplication graph and `R_s^C = {ψ(s)}`
/// for `s ∈ dom(φ)`, with the same symbols as the template pair. Also returns
/// the universe as element indices of the target.
pub fn sandwich_structure(t: &PLinTemplate, psi: &[usize]) -> (RelationalStructure, Vec<usize>) {
    let h = PartialHom::total(&t.source, &t.target, psi.to_vec()).expect("witness is a hom");
    let image = h.image();
    let pos = |v: usize| image.binary_search(&v).expect("closed under multiplication");
    let mut signature = vec![(MUL_SYMBOL.to_string(), 3)];
    let consts = t.phi.pairs();
    signature.extend(consts.iter().map(|&(c, _)| (format!("c:{}", t.source.label(c)), 1)));
    let labels = image.iter().map(|&v| t.target.label(v).to_string()).collect();
    let mut st = RelationalStructure::new(signature, labels);
    for (i, &a) in image.iter().enumerate() {
        for (j, &b) in image.iter().enumerate() {
            st.add(MUL_SYMBOL, vec![i, j, pos(t.target.mul(a, b))]).expect("valid tuple");
        }
    }
    for &(c, _) in &consts {
        st.add(&format!("c:{}", t.source.label(c)), vec![pos(psi[c])]).expect("valid tuple");
    }
    (st, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::eqsys::template_structures;

    #[test]
    fn d4_s4() {
        let (d4, s4, phi1, phi2) = corpus::d4_s4_example();
        let t1 = PLinTemplate::new(d4.clone(), s4.clone(), phi1);
        let r = classify_monoid_template(&t1);
        assert_eq!(r.verdict, Verdict::Tractable);
        assert_eq!(r.algorithm_note, Some(AlgorithmNote::Aip));
        assert!(validate_witness(&t1, r.witness.as_ref().unwrap()));
        assert_eq!(classify_group_template(&t1).unwrap().verdict, Verdict::Tractable);
        let t2 = PLinTemplate::new(d4, s4, phi2);
        let r = classify_monoid_template(&t2);
        assert_eq!(r.verdict, Verdict::NpHard);
        assert_eq!(r.obstructions.len(), r.extending_homs);
        assert!(!r.truncated);
    }

    #[test]
    fn z2ext_and_m3() {
        let z = corpus::z2ext();
        let r = classify_csp(&z, &SubAlgebra::full(&z)).unwrap();
        assert_eq!(r.verdict, Verdict::Tractable);
        assert_eq!(r.algorithm_note, Some(AlgorithmNote::BlpAip));
        let m = corpus::m3();
        let r = classify_csp(&m, &SubAlgebra::full(&m)).unwrap();
        assert_eq!(r.verdict, Verdict::NpHard);
        assert_eq!(r.extending_homs, 1);
        assert!(matches!(r.obstructions[0].reason, ObstructionReason::NonRegularImageElement(_)));
    }

    #[test]
    fn groups() {
        let s3 = corpus::symmetric(3);
        let full = SubAlgebra::full(s3.monoid());
        let t = PLinTemplate::csp(s3.monoid().clone(), full).unwrap();
        assert_eq!(classify_group_template(&t).unwrap().verdict, Verdict::NpHard);
        let z4 = corpus::cyclic(4);
        let t = PLinTemplate::csp(z4.monoid().clone(), SubAlgebra::full(z4.monoid())).unwrap();
        assert_eq!(classify_group_template(&t).unwrap().verdict, Verdict::Tractable);
        assert!(classify_group_template(&PLinTemplate::csp(corpus::m3(), SubAlgebra::full(&corpus::m3())).unwrap())
            .is_err());
    }

    #[test]
    fn obstruction_cap() {
        let (d4, s4, _, phi2) = corpus::d4_s4_example();
        let t = PLinTemplate::new(d4, s4, phi2);
        let r = classify_monoid_template_capped(&t, 1);
        assert_eq!(r.obstructions.len(), 1);
        assert_eq!(r.truncated, r.extending_homs > 1);
    }

    #[test]
    fn sandwich_chain() {
        let (_, _, embed) = corpus::d4_in_s4();
        let (d4, s4, phi1, _) = corpus::d4_s4_example();
        let t = PLinTemplate::new(d4, s4, phi1);
        // the least witness sends f to e; take the one fixing f instead
        let least = classify_monoid_template(&t).witness.unwrap();
        assert_eq!(sandwich_structure(&t, &least).1.len(), 2);
        let psi = t
            .extending_homs(HomFilter::AbelianUnionOfGroupsImage)
            .into_iter()
            .map(|h| h.total_images().unwrap())
            .find(|p| p[4] == embed[4])
            .unwrap();
        assert!(validate_witness(&t, &psi));
        let (c, image) = sandwich_structure(&t, &psi);
        let mut expect = vec![embed[0], embed[2], embed[4], embed[6]];
        expect.sort_unstable();
        assert_eq!(image, expect);
        let (a, b) = template_structures(&t);
        let to_c: Vec<usize> = psi.iter().map(|v| image.binary_search(v).unwrap()).collect();
        assert!(a.is_homomorphism(&c, &to_c));
        assert!(c.is_homomorphism(&b, &image));
    }
}

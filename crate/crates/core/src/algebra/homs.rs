use std::ops::ControlFlow;

use super::{is_abelian_on, FiniteMonoid, PartialHom, SubAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomFilter {
    All,
    AbelianImage,
    AbelianUnionOfGroupsImage,
}

impl HomFilter {
    fn accepts(self, target: &FiniteMonoid, image: &[usize]) -> bool {
        match self {
            HomFilter::All => true,
            HomFilter::AbelianImage => is_abelian_on(target, image.iter().copied()),
            HomFilter::AbelianUnionOfGroupsImage => {
                is_abelian_on(target, image.iter().copied())
                    && image.iter().all(|&s| target.is_regular(s))
            }
        }
    }
}

/// Greedy generating set of `m` over the submonoid `base`: repeatedly add the least
/// element outside the current closure.
pub fn generating_set(m: &FiniteMonoid, base: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; m.len()];
    let mut gens: Vec<usize> = Vec::new();
    let mut seeds: Vec<usize> = base.to_vec();
    for x in m.submonoid_closure(&seeds) {
        inside[x] = true;
    }
    while let Some(x) = (0..m.len()).find(|&x| !inside[x]) {
        gens.push(x);
        seeds.push(x);
        for y in m.submonoid_closure(&seeds) {
            inside[y] = true;
        }
    }
    gens
}

struct Search<'a> {
    source: &'a FiniteMonoid,
    target: &'a FiniteMonoid,
    images: Vec<Option<usize>>,
    known: Vec<usize>,
}

impl Search<'_> {
    /// Assign `x ↦ y` and propagate through all products with already-mapped
    /// elements. Returns false on a conflict; `self.known` is restored by the caller.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match self.images[x] {
                Some(old) if old == y => continue,
                Some(_) => return false,
                None => {
                    self.images[x] = Some(y);
                    self.known.push(x);
                }
            }
            let mut i = 0;
            while i < self.known.len() {
                let z = self.known[i];
                let iz = self.images[z].unwrap();
                let ix = self.images[x].unwrap();
                for (prod, img) in [
                    (self.source.mul(x, z), self.target.mul(ix, iz)),
                    (self.source.mul(z, x), self.target.mul(iz, ix)),
                ] {
                    match self.images[prod] {
                        Some(old) if old != img => return false,
                        Some(_) => {}
                        None => queue.push((prod, img)),
                    }
                }
                i += 1;
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        for x in self.known.drain(mark..) {
            self.images[x] = None;
        }
    }
}

/// Calls `visit` for every total monoid homomorphism `source → target` extending
/// `phi` whose image passes `filter`, in lexicographic order of generator images.
pub fn for_each_extending_hom<F>(
    source: &FiniteMonoid,
    target: &FiniteMonoid,
    phi: &PartialHom,
    filter: HomFilter,
    mut visit: F,
) where
    F: FnMut(PartialHom) -> ControlFlow<()>,
{
    let mut search = Search { source, target, images: vec![None; source.len()], known: Vec::new() };
    let mut base: Vec<usize> = phi.domain().members().to_vec();
    if !search.assign(source.identity(), target.identity()) {
        return;
    }
    for (x, y) in phi.pairs() {
        if !search.assign(x, y) {
            return;
        }
    }
    base.push(source.identity());
    let gens = generating_set(source, &base);
    let full = SubAlgebra::full(source);
    let _ = backtrack(&mut search, &gens, 0, &full, filter, &mut visit);
}

fn backtrack<F>(
    search: &mut Search<'_>,
    gens: &[usize],
    depth: usize,
    full: &SubAlgebra,
    filter: HomFilter,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(PartialHom) -> ControlFlow<()>,
{
    if depth == gens.len() {
        debug_assert!(search.images.iter().all(Option::is_some));
        let hom = PartialHom::from_parts_unchecked(full.clone(), search.images.clone());
        if filter.accepts(search.target, &hom.image()) {
            return visit(hom);
        }
        return ControlFlow::Continue(());
    }
    let g = gens[depth];
    if search.images[g].is_some() {
        return backtrack(search, gens, depth + 1, full, filter, visit);
    }
    for y in 0..search.target.len() {
        let mark = search.known.len();
        if search.assign(g, y) {
            backtrack(search, gens, depth + 1, full, filter, visit)?;
        }
        search.rollback(mark);
    }
    ControlFlow::Continue(())
}

/// Collects every extending hom passing `filter`.
pub fn enumerate_extending_homs(
    source: &FiniteMonoid,
    target: &FiniteMonoid,
    phi: &PartialHom,
    filter: HomFilter,
) -> Vec<PartialHom> {
    let mut out = Vec::new();
    for_each_extending_hom(source, target, phi, filter, |h| {
        out.push(h);
        ControlFlow::Continue(())
    });
    out
}

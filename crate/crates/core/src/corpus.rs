//! Standard algebra families and the seeded test corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraFile, FiniteGroup, FiniteMonoid, FiniteSemigroup, PartialHom, SubAlgebra};
use crate::reduce::Digraph;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// `Z_n` written additively: element `i` is the residue `i`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let sg = FiniteSemigroup::from_fn(labels(n), |a, b| (a + b) % n).expect("cyclic table");
    FiniteGroup::new(FiniteMonoid::new(sg, 0).expect("0 is the identity"), None).expect("group")
}

/// Dihedral group of order `2n`; element `r^i f^j` has index `i + n*j`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let lab = (0..2 * n)
        .map(|x| {
            let (i, j) = (x % n, x / n);
            match (i, j) {
                (0, 0) => "e".to_string(),
                (1, 0) => "r".to_string(),
                (i, 0) => format!("r{i}"),
                (0, 1) => "f".to_string(),
                (1, 1) => "rf".to_string(),
                (i, _) => format!("r{i}f"),
            }
        })
        .collect();
    let sg = FiniteSemigroup::from_fn(lab, |x, y| {
        let (a, b) = (x % n, x / n);
        let (c, d) = (y % n, y / n);
        // r^a f^b r^c f^d = r^(a ± c) f^(b+d)
        let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
        rot + n * ((b + d) % 2)
    })
    .expect("dihedral table");
    FiniteGroup::new(FiniteMonoid::new(sg, 0).unwrap(), None).unwrap()
}

/// Symmetric group on `0..n`, elements in lexicographic one-line order.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!((1..=5).contains(&n));
    let mut gens = vec![];
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    FiniteGroup::permutation_group(n, &gens).expect("symmetric group")
}

/// Quaternion group `{±1, ±i, ±j, ±k}`.
pub fn quaternion() -> FiniteGroup {
    // unit u in {1,i,j,k} = 0..4, sign s in {+,-}; index = u + 4*s
    let names = ["1", "i", "j", "k"];
    let lab = (0..8)
        .map(|x| format!("{}{}", if x >= 4 { "-" } else { "" }, names[x % 4]))
        .collect();
    // unit products: (unit, sign flip)
    let table = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let sg = FiniteSemigroup::from_fn(lab, |x, y| {
        let (u, s) = (x % 4, x / 4);
        let (v, t) = (y % 4, y / 4);
        let (w, flip) = table[u][v];
        w + 4 * ((s + t + flip) % 2)
    })
    .unwrap();
    FiniteGroup::new(FiniteMonoid::new(sg, 0).unwrap(), None).unwrap()
}

/// `{0, 1, ε}` with identity `0`, and `1·1 = 1·ε = ε·ε = ε`.
pub fn m3() -> FiniteMonoid {
    FiniteMonoid::from_table(
        vec!["0".into(), "1".into(), "eps".into()],
        vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        0,
    )
    .unwrap()
}

/// A semigroup with a fresh element `e` adjoined as identity (index 0).
pub fn adjoin_identity(s: &FiniteSemigroup) -> FiniteMonoid {
    let mut lab = vec!["e".to_string()];
    lab.extend(s.labels().iter().cloned());
    let sg = FiniteSemigroup::from_fn(lab, |x, y| match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        (x, y) => 1 + s.mul(x - 1, y - 1),
    })
    .unwrap();
    FiniteMonoid::new(sg, 0).unwrap()
}

/// `Z_2` with a fresh identity adjoined: elements `e, 0, 1`.
pub fn z2ext() -> FiniteMonoid {
    adjoin_identity(cyclic(2).semigroup())
}

/// Monogenic monoid `{e, a, ..., a^(index+period-1)}` with `a^(index+period) = a^index`.
pub fn monogenic(index: usize, period: usize) -> FiniteMonoid {
    assert!(index >= 1 && period >= 1);
    let n = index + period;
    let reduce = |k: usize| if k < n { k } else { index + (k - index) % period };
    let lab = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "a".to_string(),
            k => format!("a{k}"),
        })
        .collect();
    FiniteMonoid::from_table(
        lab,
        (0..n).map(|x| (0..n).map(|y| reduce(x + y)).collect()).collect(),
        0,
    )
    .unwrap()
}

/// Chain semilattice `0 < 1 < ... < n-1` under `min`, as a monoid with identity `n-1`.
pub fn chain(n: usize) -> FiniteMonoid {
    let sg = FiniteSemigroup::from_fn(labels(n), |a, b| a.min(b)).unwrap();
    FiniteMonoid::new(sg, n - 1).unwrap()
}

/// Left-zero band on `n` elements with an identity adjoined.
pub fn left_zero_monoid(n: usize) -> FiniteMonoid {
    let lab = (0..n).map(|i| format!("l{i}")).collect();
    adjoin_identity(&FiniteSemigroup::from_fn(lab, |a, _| a).unwrap())
}

/// Right-zero band on `n` elements with an identity adjoined.
pub fn right_zero_monoid(n: usize) -> FiniteMonoid {
    let lab = (0..n).map(|i| format!("r{i}")).collect();
    adjoin_identity(&FiniteSemigroup::from_fn(lab, |_, b| b).unwrap())
}

/// Full transformation monoid on `0..n`, composition `(fg)(i) = f(g(i))`.
pub fn transformations(n: usize) -> FiniteMonoid {
    let size = n.pow(n as u32);
    let maps: Vec<Vec<usize>> = (0..size)
        .map(|code| (0..n).map(|i| (code / n.pow(i as u32)) % n).collect())
        .collect();
    let lab = maps.iter().map(|m| crate::algebra::perm_label(m)).collect();
    let sg = FiniteSemigroup::from_fn(lab, |a, b| {
        let c: Vec<usize> = maps[b].iter().map(|&j| maps[a][j]).collect();
        maps.iter().position(|m| *m == c).unwrap()
    })
    .unwrap();
    FiniteMonoid::from_semigroup(sg).unwrap()
}

pub fn product_monoid(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    a.direct_product(b)
}

/// Index of the permutation with the given one-line notation.
pub fn perm_index(g: &FiniteSemigroup, perm: &[usize]) -> usize {
    g.index_of(&crate::algebra::perm_label(perm)).expect("permutation present")
}

/// The embedding `D4 → S4` acting on the corners `0..4` of a square:
/// `r: i ↦ i+1`, `f: i ↦ 1-i` (a reflection with no fixed corner).
pub fn d4_in_s4() -> (FiniteGroup, FiniteGroup, Vec<usize>) {
    let d4 = dihedral(4);
    let s4 = symmetric(4);
    let r: Vec<usize> = (0..4).map(|i| (i + 1) % 4).collect();
    let f: Vec<usize> = (0..4).map(|i| (5 - i) % 4).collect();
    let compose = |x: &[usize], y: &[usize]| -> Vec<usize> { y.iter().map(|&j| x[j]).collect() };
    let embed = (0..8)
        .map(|x| {
            let (i, j) = (x % 4, x / 4);
            let mut p: Vec<usize> = (0..4).collect();
            for _ in 0..i {
                p = compose(&p, &r);
            }
            if j == 1 {
                p = compose(&p, &f);
            }
            perm_index(&s4, &p)
        })
        .collect();
    (d4, s4, embed)
}

/// The two partial homs of the dihedral/symmetric example, both on `⟨r⟩ ≤ D4`:
/// `phi1: r ↦ r²` and `phi2: r ↦ r` (images taken in S4).
pub fn d4_s4_example() -> (FiniteMonoid, FiniteMonoid, PartialHom, PartialHom) {
    let (d4, s4, embed) = d4_in_s4();
    let rot = [0, 1, 2, 3];
    let dom = SubAlgebra::submonoid(&d4, &rot).unwrap();
    let phi1 = PartialHom::new_monoid(&d4, &s4, dom.clone(), rot.iter().map(|&i| (i, embed[(2 * i) % 4])))
        .unwrap();
    let phi2 = PartialHom::new_monoid(&d4, &s4, dom, rot.iter().map(|&i| (i, embed[i]))).unwrap();
    (d4.into_monoid(), s4.into_monoid(), phi1, phi2)
}

/// Resolves a built-in algebra name: `M3`, `Z2ext`, `Z<n>`, `D<n>`, `S<n>`, `Q8`,
/// `C<i>_<p>` (monogenic), `L<n>` (chain), `LZ<n>`, `RZ<n>`, `T<n>`.
pub fn named(name: &str) -> Option<FiniteMonoid> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    match name {
        "M3" => return Some(m3()),
        "Z2ext" => return Some(z2ext()),
        "Q8" => return Some(quaternion().into_monoid()),
        "trivial" => return Some(cyclic(1).into_monoid()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('C') {
        let (i, p) = rest.split_once('_')?;
        return Some(monogenic(i.parse().ok()?, p.parse().ok()?));
    }
    if let Some(n) = num("LZ").filter(|&n| n >= 1) {
        return Some(left_zero_monoid(n));
    }
    if let Some(n) = num("RZ").filter(|&n| n >= 1) {
        return Some(right_zero_monoid(n));
    }
    if let Some(n) = num("Z").filter(|&n| n >= 1) {
        return Some(cyclic(n).into_monoid());
    }
    if let Some(n) = num("D").filter(|&n| n >= 3) {
        return Some(dihedral(n).into_monoid());
    }
    if let Some(n) = num("S").filter(|&n| (1..=4).contains(&n)) {
        return Some(symmetric(n).into_monoid());
    }
    if let Some(n) = num("L").filter(|&n| n >= 1) {
        return Some(chain(n));
    }
    if let Some(n) = num("T").filter(|&n| (1..=3).contains(&n)) {
        return Some(transformations(n));
    }
    None
}

#[derive(Clone, Debug)]
pub struct NamedMonoid {
    pub name: String,
    pub monoid: FiniteMonoid,
}

fn nm(name: &str, monoid: FiniteMonoid) -> NamedMonoid {
    NamedMonoid { name: name.to_string(), monoid }
}

/// Every corpus monoid with at most `max_size` elements, in a fixed order.
pub fn monoids(max_size: usize) -> Vec<NamedMonoid> {
    let mut out = vec![nm("trivial", cyclic(1).into_monoid())];
    for n in 2..=8 {
        out.push(nm(&format!("Z{n}"), cyclic(n).into_monoid()));
    }
    out.push(nm("Z2xZ2", cyclic(2).direct_product(&cyclic(2))));
    out.push(nm("Z2xZ4", cyclic(2).direct_product(&cyclic(4))));
    out.push(nm("Z2xZ2xZ2", cyclic(2).direct_product(&cyclic(2)).direct_product(&cyclic(2))));
    out.push(nm("S3", symmetric(3).into_monoid()));
    out.push(nm("D4", dihedral(4).into_monoid()));
    out.push(nm("Q8", quaternion().into_monoid()));
    out.push(nm("M3", m3()));
    out.push(nm("Z2ext", z2ext()));
    out.push(nm("Z3ext", adjoin_identity(cyclic(3).semigroup())));
    out.push(nm("Z2xZ2ext", adjoin_identity(cyclic(2).direct_product(&cyclic(2)).semigroup())));
    for (i, p) in [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3), (4, 1), (3, 2), (2, 3), (5, 2), (4, 4)] {
        out.push(nm(&format!("C{i}_{p}"), monogenic(i, p)));
    }
    for n in 2..=4 {
        out.push(nm(&format!("L{n}"), chain(n)));
    }
    out.push(nm("LZ2", left_zero_monoid(2)));
    out.push(nm("LZ3", left_zero_monoid(3)));
    out.push(nm("RZ2", right_zero_monoid(2)));
    out.push(nm("T2", transformations(2)));
    out.push(nm("M3xZ2", m3().direct_product(&cyclic(2))));
    out.push(nm("L2xZ2", chain(2).direct_product(&cyclic(2))));
    out.push(nm("L2xL2", chain(2).direct_product(&chain(2))));
    out.push(nm("Z2extxL2", z2ext().direct_product(&chain(2))));
    out.retain(|m| m.monoid.len() <= max_size);
    // identical tables are kept once
    let mut seen: Vec<Vec<Vec<usize>>> = Vec::new();
    out.retain(|m| {
        let rows = m.monoid.rows();
        if seen.contains(&rows) {
            false
        } else {
            seen.push(rows);
            true
        }
    });
    out
}

/// Corpus groups of order at most `max_order`.
pub fn groups(max_order: usize) -> Vec<(String, FiniteGroup)> {
    monoids(max_order)
        .into_iter()
        .filter_map(|m| m.monoid.as_group().map(|g| (m.name, g)))
        .collect()
}

/// All digraphs on `n` labelled vertices (loops allowed), edge sets in bitmask order.
pub fn all_digraphs(n: usize) -> Vec<Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Digraph::new(n, edges).unwrap()
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from `PROMLIN_SEED` when set, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("PROMLIN_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub max_monoid_size: usize,
    pub max_digraph_vertices: usize,
    pub random_digraphs: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self { seed: 7, max_monoid_size: 8, max_digraph_vertices: 3, random_digraphs: 4 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: AlgebraFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Corpus {
    pub spec: CorpusSpec,
    pub algebras: Vec<CorpusEntry>,
    pub digraphs: Vec<crate::reduce::DigraphFile>,
}

/// Deterministic fixture set: the monoid families plus a few random digraphs and
/// their `S_D` bands.
pub fn generate(spec: &CorpusSpec) -> Corpus {
    let mut algebras: Vec<CorpusEntry> = monoids(spec.max_monoid_size)
        .into_iter()
        .map(|m| {
            let algebra = match m.monoid.as_group() {
                Some(g) => AlgebraFile::from_group(&g),
                None => AlgebraFile::from_monoid(&m.monoid),
            };
            CorpusEntry { name: m.name, algebra }
        })
        .collect();
    let mut rng = rng(spec.seed);
    let mut digraphs = Vec::new();
    for i in 0..spec.random_digraphs {
        let n = rng.gen_range(1..=spec.max_digraph_vertices.max(1));
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        let m = rng.gen_range(0..=pairs.len());
        pairs.truncate(m);
        pairs.sort_unstable();
        let d = Digraph::new(n, pairs).unwrap();
        let (sd, _) = crate::reduce::build_sd(&d);
        algebras.push(CorpusEntry {
            name: format!("S_D{i}"),
            algebra: AlgebraFile::from_semigroup(&sd.semigroup),
        });
        digraphs.push(crate::reduce::DigraphFile::from_digraph(&d));
    }
    Corpus { spec: spec.clone(), algebras, digraphs }
}

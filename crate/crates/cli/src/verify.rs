//! Property suites behind `verify all`.

use std::io::Write;
use std::time::Instant;

use promlin::algebra::{FiniteMonoid, SubAlgebra};
use promlin::classify::{classify_group_template, classify_monoid_template};
use promlin::corpus;
use promlin::eqsys::{PLinTemplate, DEFAULT_BUDGET};
use promlin::minion::{
    all_maps, block_symmetric_tuple, enumerate_minion, minor, no_alternating_certificate, verify_selection_condition,
    verify_xi_bijection,
};
use promlin::reduce::{reduction_equivalence_check, SigmaPlusStructure};

pub struct Row {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
    pub seconds: f64,
}

fn power_regular(m: &FiniteMonoid, s: usize) -> bool {
    let mut cur = s;
    (0..m.len()).any(|_| {
        cur = m.mul(cur, s);
        cur == s
    })
}

fn row(name: &'static str, f: impl FnOnce(&mut Vec<String>) -> anyhow::Result<u64>) -> Row {
    let start = Instant::now();
    let mut failures = Vec::new();
    let checked = f(&mut failures).unwrap_or_else(|e| {
        failures.push(format!("error: {e:#}"));
        0
    });
    Row { name, checked, failures, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(max_size: usize) -> anyhow::Result<Vec<Row>> {
    let monoids = corpus::monoids(max_size);
    let small: Vec<_> = monoids.iter().filter(|m| m.monoid.len() <= max_size.min(3)).collect();
    let mut rows = Vec::new();

    rows.push(row("regularity equivalence", |fails| {
        let mut n = 0;
        for nm in &monoids {
            let m = &nm.monoid;
            for s in 0..m.len() {
                n += 1;
                let w = m.regularity_witnesses(s);
                let ok = if power_regular(m, s) { w.all_present() } else { w.all_absent() };
                if !ok || m.is_regular(s) != power_regular(m, s) {
                    fails.push(format!("{} element {}", nm.name, m.label(s)));
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("commuting-divisor observation", |fails| {
        let mut n = 0;
        for nm in &monoids {
            let m = &nm.monoid;
            let k = m.len();
            for a in 0..k {
                for b in (0..k).filter(|&b| m.commute(a, b)) {
                    for c in (0..k).filter(|&c| m.commute(a, c) && m.commute(b, c)) {
                        n += 1;
                        let ab = m.mul(a, b);
                        if m.ab_strict(m.mul(ab, c), ab) && !m.ab_strict(m.mul(a, c), a) {
                            fails.push(format!("{} at ({a},{b},{c})", nm.name));
                        }
                    }
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("group and monoid criteria agree", |fails| {
        let mut n = 0;
        for (name, g) in corpus::groups(2 * max_size) {
            let m = g.monoid();
            for x in 0..m.len() {
                let dom = SubAlgebra::generated_submonoid(m, &[x]);
                let t = PLinTemplate::csp(m.clone(), dom)?;
                n += 1;
                let (a, b) = (classify_monoid_template(&t), classify_group_template(&t)?);
                if a.verdict != b.verdict || a.witness != b.witness {
                    fails.push(format!("{name} with constants generated by {}", m.label(x)));
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("minion functoriality", |fails| {
        let mut n = 0;
        for nm in &small {
            let m = &nm.monoid;
            for a in 0..m.len() {
                for arity in 1..=2 {
                    for b in enumerate_minion(m, a, arity, DEFAULT_BUDGET)? {
                        if minor(m, &b, &(0..arity).collect::<Vec<_>>(), arity)? != b {
                            fails.push(format!("{}: identity minor of {}", nm.name, b.render(m)));
                        }
                        for mid in 1..=2 {
                            for pi in all_maps(arity, mid) {
                                let once = minor(m, &b, &pi, mid)?;
                                for sigma in all_maps(mid, 2) {
                                    n += 1;
                                    let comp: Vec<usize> = pi.iter().map(|&i| sigma[i]).collect();
                                    if minor(m, &once, &sigma, 2)? != minor(m, &b, &comp, 2)? {
                                        fails.push(format!("{}: composition at {}", nm.name, b.render(m)));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("relevant-coordinate claims", |fails| {
        let mut n = 0;
        for nm in &small {
            let m = &nm.monoid;
            for a in 0..m.len() {
                n += 1;
                if m.is_regular(a) {
                    if let Err(e) = block_symmetric_tuple(m, a, 2) {
                        fails.push(format!("{} target {}: {e}", nm.name, m.label(a)));
                    }
                } else if !verify_selection_condition(m, a, 3)?.passed() {
                    fails.push(format!("{} target {}", nm.name, m.label(a)));
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("free-structure bijection", |fails| {
        let mut n = 0;
        for nm in &small {
            let m = &nm.monoid;
            for a in 0..m.len() {
                n += 1;
                if !verify_xi_bijection(m, a, 2, DEFAULT_BUDGET)?.passed() {
                    fails.push(format!("{} target {}", nm.name, m.label(a)));
                }
            }
        }
        Ok(n)
    }));

    rows.push(row("no alternating polymorphisms for Z2ext", |fails| {
        let m = corpus::z2ext();
        for arity in [3, 5] {
            if !no_alternating_certificate(&m, arity, DEFAULT_BUDGET)? {
                fails.push(format!("arity {arity}"));
            }
        }
        Ok(2)
    }));

    rows.push(row("digraph reduction equivalence", |fails| {
        let instances = small_sigma_plus();
        let mut n = 0;
        for v in 0..=2 {
            for d in corpus::all_digraphs(v) {
                let report = reduction_equivalence_check(&d, &d, &instances)?;
                n += report.rows.len() as u64;
                if !report.all_hold() {
                    fails.push(format!("D = {:?}", d.edges()));
                }
            }
        }
        Ok(n)
    }));

    Ok(rows)
}

/// Every σ⁺-structure on at most two vertices.
fn small_sigma_plus() -> Vec<SigmaPlusStructure> {
    let mut out = Vec::new();
    for n in 0..=2usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        for mask in 0..1usize << pairs.len() {
            for pm in 0..1usize << n {
                for qm in 0..1usize << n {
                    let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
                    let names = (0..n).map(|i| format!("v{i}")).collect();
                    let p = (0..n).filter(|i| pm >> i & 1 == 1);
                    let q = (0..n).filter(|i| qm >> i & 1 == 1);
                    out.push(SigmaPlusStructure::new(names, edges, p, q).expect("in range"));
                }
            }
        }
    }
    out
}

/// Prints the matrix; true when every row passed.
pub fn print_matrix(rows: &[Row]) -> bool {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in rows {
        let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
        let tail = match r.failures.first() {
            Some(f) => format!("  {} failure(s), first: {f}", r.failures.len()),
            None => String::new(),
        };
        let line = format!("{:width$}  {status}  {:>8} checks  {:>6.2}s{tail}", r.name, r.checked, r.seconds);
        let _ = writeln!(std::io::stdout().lock(), "{line}");
    }
    rows.iter().all(|r| r.failures.is_empty())
}

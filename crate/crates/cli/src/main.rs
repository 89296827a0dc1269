//! `promlin`: classify promise-equation templates, solve and check instances,
//! inspect monoidal minions, run the digraph reductions and generate fixtures.
//!
//! Exit codes: 0 success (tractable for `classify`), 1 negative answer, 2 malformed
//! input, 3 NP-hard, 4 ill-formed template, 5 refused, 6 budget exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use promlin::algebra::{AlgebraFile, FiniteMonoid, PartialHom, PartialHomFile, SubAlgebra};
use promlin::classify::{classify_group_template, classify_monoid_template, ClassificationResult, Verdict};
use promlin::corpus;
use promlin::eqsys::{
    check_promise_solution, normalize, parse_general_system, system_to_structure, template_structures, Assignment,
    EquationSystem, Mode, PLinTemplate, SystemFile, DEFAULT_BUDGET,
};
use promlin::minion::{
    block_symmetric_tuple, enumerate_minion, free_structure_template, minor, relevant_coordinates,
    verify_selection_condition, verify_xi_bijection, MinionElement,
};
use promlin::reduce::{
    phi, psi, reduction_equivalence_check, w_band, DigraphFile, PsiOutcome, SigmaPlusFile, SigmaPlusStructure,
};
use promlin::relax::{build_relaxation, decide_aip};
use promlin::solve::{solve_brute, solve_group_direct, solve_promise, SolveReport};
use promlin::Error;

mod verify;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NP_HARD: u8 = 3;
const EXIT_ILL_FORMED: u8 = 4;
const EXIT_REFUSED: u8 = 5;
const EXIT_BUDGET: u8 = 6;

#[derive(Parser)]
#[command(name = "promlin", version, about = "Promise equations over finite monoids and groups")]
struct Cli {
    /// Cap for exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide tractability of PLin(M1, M2, phi).
    Classify {
        #[command(flatten)]
        template: TemplateArgs,
        /// Use the group criterion (both algebras must be groups).
        #[arg(long)]
        group: bool,
    },
    /// Solve an instance of a template.
    Solve {
        #[command(flatten)]
        template: TemplateArgs,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::BlpAip)]
        engine: Engine,
        /// Write the relaxation of the instance in matrix-market form.
        #[arg(long)]
        dump_relaxation: Option<PathBuf>,
    },
    /// Verify an assignment (variable -> target label) against the B side.
    Check {
        #[command(flatten)]
        template: TemplateArgs,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    #[command(subcommand)]
    Minion(MinionCommand),
    #[command(subcommand)]
    Reduce(ReduceCommand),
    #[command(subcommand)]
    Corpus(CorpusCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    BlpAip,
    Aip,
    Brute,
}

/// Algebras are JSON files or built-in names (`M3`, `Z2ext`, `Z4`, `D4`, `S4`, ...).
#[derive(Args)]
struct TemplateArgs {
    #[arg(long)]
    m1: String,
    /// Defaults to M1.
    #[arg(long)]
    m2: Option<String>,
    /// Partial homomorphism file; defaults to the identity on all of M1 (needs M2 = M1).
    #[arg(long)]
    phi: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MinionCommand {
    /// All elements of the minion at one arity.
    Enumerate {
        #[command(flatten)]
        at: MinionArgs,
        #[arg(long)]
        arity: usize,
    },
    /// The minor of a tuple along a map [n] -> [m].
    Minor {
        #[command(flatten)]
        at: MinionArgs,
        /// Comma-separated element labels.
        #[arg(long)]
        entries: String,
        /// Comma-separated images of 0..n.
        #[arg(long)]
        map: String,
        #[arg(long)]
        arity: usize,
    },
    /// Relevant coordinates of a tuple.
    Relevant {
        #[command(flatten)]
        at: MinionArgs,
        #[arg(long)]
        entries: String,
    },
    /// The template whose polymorphisms form the minion.
    FreeStructure {
        #[command(flatten)]
        at: MinionArgs,
    },
    /// Selection condition (non-regular target) or block-symmetric tuples (regular
    /// target), plus the polymorphism bijection for small monoids.
    Verify {
        #[command(flatten)]
        at: MinionArgs,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

#[derive(Args)]
struct MinionArgs {
    #[arg(long)]
    monoid: String,
    /// Label of the target element.
    #[arg(long)]
    target: String,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Equations over S_W from a σ⁺-structure.
    DigraphToEq {
        #[arg(long)]
        instance: PathBuf,
    },
    /// σ⁺-structure (or rejection) from equations with constants in S_W.
    EqToDigraph {
        #[arg(long)]
        system: PathBuf,
    },
    /// Checks I → D⁺ ⇔ Φ(I) solvable over S_D for each instance, for two digraphs.
    Roundtrip {
        #[arg(long)]
        d1: PathBuf,
        /// Defaults to D1.
        #[arg(long)]
        d2: Option<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        instances: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Deterministic fixture set; `PROMLIN_SEED` overrides the seed.
    Generate {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Write one file per fixture here instead of printing the bundle.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Run every property suite and print a pass/fail matrix.
    All {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::BudgetExceeded(_)) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let budget = cli.budget;
    match cli.command {
        Command::Classify { template, group } => classify(&template, group),
        Command::Solve { template, instance, engine, dump_relaxation } => {
            solve(&template, &instance, engine, dump_relaxation.as_deref(), budget)
        }
        Command::Check { template, instance, assignment } => check(&template, &instance, &assignment),
        Command::Minion(cmd) => minion(cmd, budget),
        Command::Reduce(cmd) => reduce(cmd),
        Command::Corpus(CorpusCommand::Generate { seed, max_size, out }) => generate(seed, max_size, out.as_deref()),
        Command::Verify(VerifyCommand::All { max_size }) => {
            let rows = verify::run_all(max_size)?;
            Ok(if verify::print_matrix(&rows) { 0 } else { EXIT_NEGATIVE })
        }
    }
}

fn print_json(v: &serde_json::Value) {
    // a closed pipe downstream is not an error
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_monoid(source: &str) -> anyhow::Result<FiniteMonoid> {
    let path = Path::new(source);
    if path.exists() {
        let file: AlgebraFile = read_json(path)?;
        return file.monoid().with_context(|| format!("loading {source}"));
    }
    corpus::named(source).ok_or_else(|| anyhow!("{source:?} is neither a file nor a built-in algebra"))
}

fn load_template(args: &TemplateArgs) -> anyhow::Result<PLinTemplate> {
    let m1 = load_monoid(&args.m1)?;
    let m2 = match &args.m2 {
        Some(s) => load_monoid(s)?,
        None => m1.clone(),
    };
    let phi = match &args.phi {
        Some(p) => read_json::<PartialHomFile>(p)?.monoid_hom(&m1, &m2).context("loading phi")?,
        None => {
            if m1.rows() != m2.rows() {
                bail!("--phi is required when M2 differs from M1");
            }
            PartialHom::identity_on(&m1, SubAlgebra::full(&m1))?
        }
    };
    Ok(PLinTemplate::new(m1, m2, phi))
}

/// JSON systems, or one general equation per line (normalized on reading).
fn load_instance(path: &Path, t: &PLinTemplate) -> anyhow::Result<EquationSystem> {
    let text = read(path)?;
    if let Ok(file) = serde_json::from_str::<SystemFile>(&text) {
        return Ok(file.to_system(&t.source)?);
    }
    let eqs = parse_general_system(&text, &t.source).with_context(|| format!("parsing {}", path.display()))?;
    let mode = if t.source.is_group() { Mode::Group } else { Mode::Monoid };
    Ok(normalize(&eqs, &t.source, t.phi.domain().members(), mode)?.system)
}

fn classification_json(t: &PLinTemplate, r: &ClassificationResult) -> serde_json::Value {
    let map = |psi: &[usize]| -> BTreeMap<String, String> {
        psi.iter()
            .enumerate()
            .map(|(x, &y)| (t.source.label(x).to_string(), t.target.label(y).to_string()))
            .collect()
    };
    json!({
        "verdict": r.verdict,
        "algorithm_note": r.algorithm_note,
        "witness": r.witness.as_deref().map(map),
        "extending_homs": r.extending_homs,
        "obstructions": r.obstructions.iter().map(|o| json!({"psi": map(&o.psi), "reason": o.reason})).collect::<Vec<_>>(),
        "truncated": r.truncated,
    })
}

fn classify(args: &TemplateArgs, group: bool) -> Outcome {
    let t = load_template(args)?;
    let r = if group { classify_group_template(&t)? } else { classify_monoid_template(&t) };
    print_json(&classification_json(&t, &r));
    Ok(match r.verdict {
        Verdict::Tractable => 0,
        Verdict::NpHard => EXIT_NP_HARD,
        Verdict::IllFormedTemplate => EXIT_ILL_FORMED,
    })
}

fn report_json(t: &PLinTemplate, sys: &EquationSystem, r: &SolveReport) -> serde_json::Value {
    json!({
        "path": r.path,
        "decisions_used": r.decisions_used,
        "assignment": r.assignment.to_named(sys, &t.target),
    })
}

fn solve(args: &TemplateArgs, instance: &Path, engine: Engine, dump: Option<&Path>, budget: u64) -> Outcome {
    let t = load_template(args)?;
    let sys = load_instance(instance, &t)?;
    if let Some(path) = dump {
        let (a, _) = template_structures(&t);
        let inst = system_to_structure(&sys, &t.source, t.phi.domain())?;
        let relax = build_relaxation(&inst, &a)?;
        fs::write(path, relax.to_matrix_market()).with_context(|| format!("writing {}", path.display()))?;
    }
    if engine == Engine::Brute {
        return Ok(match solve_brute(&t, &sys, budget)? {
            Some(r) => {
                print_json(&report_json(&t, &sys, &r));
                0
            }
            None => {
                print_json(&json!({"path": "brute_force", "assignment": null}));
                EXIT_NEGATIVE
            }
        });
    }
    let class = classify_monoid_template(&t);
    let Some(psi) = class.witness else {
        eprintln!("refused: template not tractable ({:?}); use --engine brute", class.verdict);
        return Ok(EXIT_REFUSED);
    };
    match engine {
        Engine::Aip if t.is_group_template() => Ok(match solve_group_direct(&t, &sys, &psi)? {
            Some(r) => {
                print_json(&report_json(&t, &sys, &r));
                0
            }
            None => {
                print_json(&json!({"path": "aip_group_direct", "assignment": null}));
                EXIT_NEGATIVE
            }
        }),
        Engine::Aip => {
            eprintln!(
                "warning: AIP not exact for this template; it is exact for group templates only, and a monoid \
                 with an identity adjoined to a group has no alternating polymorphisms"
            );
            let (a, _) = template_structures(&t);
            let inst = system_to_structure(&sys, &t.source, t.phi.domain())?;
            let accepted = decide_aip(&inst, &a)?.accepted();
            print_json(&json!({"engine": "aip", "accepted": accepted}));
            Ok(if accepted { 0 } else { EXIT_NEGATIVE })
        }
        _ => match solve_promise(&t, &sys, &psi) {
            Ok(r) => {
                print_json(&report_json(&t, &sys, &r));
                Ok(0)
            }
            Err(Error::PromiseViolated(v)) => {
                eprintln!("no solution: rejected at variable {v}");
                print_json(&json!({"path": "blp_aip_selfreduce", "assignment": null}));
                Ok(EXIT_NEGATIVE)
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn check(args: &TemplateArgs, instance: &Path, assignment: &Path) -> Outcome {
    let t = load_template(args)?;
    let sys = load_instance(instance, &t)?;
    let raw: serde_json::Value = read_json(assignment)?;
    // accept either a bare map or a solve report
    let named: BTreeMap<String, String> =
        serde_json::from_value(raw.get("assignment").cloned().unwrap_or(raw)).context("assignment map")?;
    let asg = Assignment::from_named(&sys, &t.target, &named)?;
    let ok = check_promise_solution(&t, &sys, &asg);
    print_json(&json!({"valid": ok}));
    Ok(if ok { 0 } else { EXIT_NEGATIVE })
}

fn element(m: &FiniteMonoid, label: &str) -> anyhow::Result<usize> {
    m.index_of(label.trim()).ok_or_else(|| anyhow!("unknown element {label:?}"))
}

fn tuple(m: &FiniteMonoid, target: usize, entries: &str) -> anyhow::Result<MinionElement> {
    let entries = entries.split(',').map(|l| element(m, l)).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(MinionElement::new(m, target, entries)?)
}

fn labels(m: &FiniteMonoid, b: &MinionElement) -> Vec<String> {
    b.entries.iter().map(|&x| m.label(x).to_string()).collect()
}

fn minion(cmd: MinionCommand, budget: u64) -> Outcome {
    let at = match &cmd {
        MinionCommand::Enumerate { at, .. }
        | MinionCommand::Minor { at, .. }
        | MinionCommand::Relevant { at, .. }
        | MinionCommand::FreeStructure { at }
        | MinionCommand::Verify { at, .. } => at,
    };
    let m = load_monoid(&at.monoid)?;
    let a = element(&m, &at.target)?;
    match cmd {
        MinionCommand::Enumerate { arity, .. } => {
            let all = enumerate_minion(&m, a, arity, budget)?;
            print_json(&json!(all.iter().map(|b| labels(&m, b)).collect::<Vec<_>>()));
        }
        MinionCommand::Minor { entries, map, arity, .. } => {
            let b = tuple(&m, a, &entries)?;
            let pi = map
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| anyhow!("bad map entry {s:?}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            print_json(&json!(labels(&m, &minor(&m, &b, &pi, arity)?)));
        }
        MinionCommand::Relevant { entries, .. } => {
            let b = tuple(&m, a, &entries)?;
            print_json(&json!(relevant_coordinates(&m, &b)));
        }
        MinionCommand::FreeStructure { .. } => {
            let fs = free_structure_template(&m, a)?;
            let rel = |st: &promlin::eqsys::RelationalStructure| {
                let names = |t: &Vec<usize>| t.iter().map(|&x| st.universe[x].clone()).collect::<Vec<_>>();
                json!({
                    "universe": st.universe,
                    "R": st.relation("R").iter().map(names).collect::<Vec<_>>(),
                    "C0": st.relation("C0").iter().map(names).collect::<Vec<_>>(),
                    "C1": st.relation("C1").iter().map(names).collect::<Vec<_>>(),
                })
            };
            print_json(&json!({"A": rel(&fs.a_side), "B": rel(&fs.b_side)}));
        }
        MinionCommand::Verify { max_arity, .. } => {
            let mut report = serde_json::Map::new();
            let mut passed = true;
            if m.is_regular(a) {
                let ok = (1..=max_arity).all(|n| block_symmetric_tuple(&m, a, n).is_ok());
                passed &= ok;
                report.insert("block_symmetric_tuples".into(), json!(ok));
            } else {
                let r = verify_selection_condition(&m, a, max_arity)?;
                passed &= r.passed();
                report.insert("selection_condition".into(), json!(r));
            }
            if m.len() <= 4 {
                let r = verify_xi_bijection(&m, a, max_arity.min(3), budget)?;
                passed &= r.passed();
                report.insert("xi_bijection".into(), json!(r));
            }
            report.insert("passed".into(), json!(passed));
            print_json(&serde_json::Value::Object(report));
            return Ok(if passed { 0 } else { EXIT_NEGATIVE });
        }
    }
    Ok(0)
}

fn reduce(cmd: ReduceCommand) -> Outcome {
    let w = w_band();
    match cmd {
        ReduceCommand::DigraphToEq { instance } => {
            let i = read_json::<SigmaPlusFile>(&instance)?.to_structure()?;
            let nf = phi(&i);
            print_json(&json!(nf.system.to_file(&w.semigroup)));
            Ok(0)
        }
        ReduceCommand::EqToDigraph { system } => {
            let sys = read_json::<SystemFile>(&system)?.to_system(&w.semigroup)?;
            let r = psi(&sys, &w)?;
            let log = json!(r.log);
            match r.outcome {
                PsiOutcome::Structure(s) => {
                    print_json(&json!({"structure": SigmaPlusFile::from_structure(&s.structure), "log": log}));
                    Ok(0)
                }
                PsiOutcome::Reject { quotient, certificate } => {
                    print_json(&json!({"rejected": true, "certificate": certificate.to_file(&quotient), "log": log}));
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        ReduceCommand::Roundtrip { d1, d2, instances } => {
            let d1 = read_json::<DigraphFile>(&d1)?.to_digraph()?;
            let d2 = match d2 {
                Some(p) => read_json::<DigraphFile>(&p)?.to_digraph()?,
                None => d1.clone(),
            };
            let insts = instances
                .iter()
                .map(|p| Ok(read_json::<SigmaPlusFile>(p)?.to_structure()?))
                .collect::<anyhow::Result<Vec<SigmaPlusStructure>>>()?;
            let report = reduction_equivalence_check(&d1, &d2, &insts)?;
            print_json(&json!({"rows": report.rows, "all_hold": report.all_hold()}));
            Ok(if report.all_hold() { 0 } else { EXIT_NEGATIVE })
        }
    }
}

fn generate(seed: u64, max_size: usize, out: Option<&Path>) -> Outcome {
    let spec = corpus::CorpusSpec {
        seed: corpus::seed_from_env(seed),
        max_monoid_size: max_size,
        ..corpus::CorpusSpec::default()
    };
    let c = corpus::generate(&spec);
    match out {
        None => print_json(&json!(c)),
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let write = |name: String, v: serde_json::Value| -> anyhow::Result<()> {
                let path = dir.join(name);
                let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
            };
            for e in &c.algebras {
                write(format!("{}.json", e.name), json!(e.algebra))?;
            }
            for (i, d) in c.digraphs.iter().enumerate() {
                write(format!("digraph_{i}.json"), json!(d))?;
            }
            write("spec.json".into(), json!(c.spec))?;
        }
    }
    Ok(0)
}

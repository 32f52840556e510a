//! `qlw`: parse quantum-logic formulas, check and classify laws, inspect
//! finite lattices, simulate projective test sequences and decide qubit
//! coexistence.
//!
//! Exit status: 0 affirmative, 1 negative verdict (with witness), 2 input
//! error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qlw_core::effects::{self, JointCertificate};
use qlw_core::formula::{self, Formula};
use qlw_core::hilbert::{self, Subspace, SubspaceJson};
use qlw_core::linalg::{self, ComplexJson, VectorJson};
use qlw_core::measurement::{self, MeasurementRecord, Policy, PureState};
use qlw_core::omlattice::{Law, LatticeSpec, LawVerdict, OrthoLattice};
use qlw_core::semantics::{self, FamilyKind, ModelFamily, Outcome, SemanticsError};

#[derive(Parser, Debug)]
#[command(name = "qlw", version, about = "Quantum-logic workbench")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Numeric tolerance.
    #[arg(long, global = true, env = "QLW_TOL", default_value_t = linalg::TOL)]
    tol: f64,
    /// Seed for sampling subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Valuations scanned before a search gives up.
    #[arg(long, global = true, default_value_t = semantics::DEFAULT_BUDGET)]
    budget: u64,
    /// Model family for check and classify.
    #[arg(long, global = true, value_enum, default_value_t = Family::Default)]
    family: Family,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Default,
    Boolean,
    Oml,
    Atomic,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Default => FamilyKind::Default,
            Family::Boolean => FamilyKind::Boolean,
            Family::Oml => FamilyKind::Oml,
            Family::Atomic => FamilyKind::Atomic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    #[value(name = "all_pass")]
    AllPass,
    Sample,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its tree and elementary propositions.
    Parse { formula: String },
    /// Check formal truth over a model family.
    Check { formula: String },
    /// Classify a law as quantum_valid, classical_only or invalid_everywhere.
    Classify { formula: String },
    /// Load a lattice file and check lattice laws.
    Lattice {
        path: PathBuf,
        /// Law to check; repeatable. Without it every law is reported and
        /// the exit status is 0.
        #[arg(long = "law", value_enum)]
        laws: Vec<LawArg>,
    },
    /// Run a sequence of projective tests with Lüders updates.
    Simulate {
        /// Named ray (z+, z-, x+, x-, y+, y-) or a vector file.
        #[arg(long)]
        state: String,
        /// Comma-separated named rays or subspace files, in temporal order.
        #[arg(long, value_delimiter = ',', required = true)]
        tests: Vec<String>,
        #[arg(long, value_enum, default_value_t = PolicyArg::AllPass)]
        policy: PolicyArg,
        /// Write the measurement record as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide joint measurability of two unbiased qubit effects.
    Coexist {
        /// Bloch vector of the first effect, `x,y,z`.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Bloch vector of the second effect, `x,y,z`.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        b: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LawArg {
    Orthomodular,
    Distributive,
    Modular,
    Atomic,
    Covering,
}

impl From<LawArg> for Law {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::Orthomodular => Law::Orthomodular,
            LawArg::Distributive => Law::Distributive,
            LawArg::Modular => Law::Modular,
            LawArg::Atomic => Law::Atomic,
            LawArg::Covering => Law::Covering,
        }
    }
}

/// Input error; always exit 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Yes,
    No,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

struct Output {
    text: String,
    verdict: Verdict,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            match out.verdict {
                Verdict::Yes => ExitCode::SUCCESS,
                Verdict::No => ExitCode::from(1),
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(InputError(format!("tolerance must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Parse { formula } => cmd_parse(cli, formula),
        Command::Check { formula } => cmd_check(cli, formula),
        Command::Classify { formula } => cmd_classify(cli, formula),
        Command::Lattice { path, laws } => cmd_lattice(cli, path, laws),
        Command::Simulate { state, tests, policy, out } => cmd_simulate(cli, state, tests, *policy, out.as_deref()),
        Command::Coexist { a, b } => cmd_coexist(cli, a, b),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn parse_formula(text: &str) -> Result<Formula, InputError> {
    formula::parse(text).map_err(|e| {
        let caret = format!("{}^", " ".repeat(text[..e.position.min(text.len())].chars().count()));
        InputError(format!("{e}\n  {text}\n  {caret}"))
    })
}

#[derive(Serialize)]
struct ParseReport {
    formula: String,
    elementaries: Vec<String>,
    depth: usize,
    contains_seq: bool,
    ast: Formula,
}

fn cmd_parse(cli: &Cli, text: &str) -> Result<Output, InputError> {
    let f = parse_formula(text)?;
    let report = ParseReport {
        formula: f.to_string(),
        elementaries: f.elementaries().into_iter().collect(),
        depth: f.depth(),
        contains_seq: f.contains_seq(),
        ast: f.clone(),
    };
    let text = if cli.json {
        to_json(&report)
    } else {
        format!("{}\n{}elementaries: {}\n", report.formula, f.tree(), report.elementaries.join(", "))
    };
    Ok(Output { text, verdict: Verdict::Yes })
}

fn semantic_error(e: SemanticsError) -> InputError {
    InputError(e.to_string())
}

fn cmd_check(cli: &Cli, text: &str) -> Result<Output, InputError> {
    let f = parse_formula(text)?;
    let family = ModelFamily::of_kind(cli.family.into());
    let report = semantics::find_countermodel(&f, &family, cli.budget).map_err(semantic_error)?;
    let verdict = Verdict::from_bool(report.valid);
    let text = if cli.json {
        to_json(&report)
    } else {
        let mut s = String::new();
        match (&report.outcome, &report.countermodel) {
            (Outcome::Valid, _) => {
                let _ = writeln!(s, "VALID {}", report.formula);
            }
            (Outcome::Countermodel, Some(cm)) => {
                let _ = writeln!(s, "COUNTERMODEL {}", report.formula);
                let _ = writeln!(s, "  model: {}", cm.model);
                for (k, v) in &cm.assignment {
                    let _ = writeln!(s, "  {k} = {v}");
                }
                let _ = writeln!(s, "  value: {}", cm.value);
            }
            _ => {
                let _ = writeln!(s, "INCONCLUSIVE {} (budget {} exhausted)", report.formula, cli.budget);
            }
        }
        let _ = writeln!(s, "family: {}", report.family);
        let _ = writeln!(s, "models: {}, valuations: {}", report.models_scanned, report.valuations_scanned);
        s
    };
    Ok(Output { text, verdict })
}

fn cmd_classify(cli: &Cli, text: &str) -> Result<Output, InputError> {
    let f = parse_formula(text)?;
    let quantum = ModelFamily::of_kind(cli.family.into());
    let classical = ModelFamily::of_kind(FamilyKind::Boolean);
    let report = match semantics::classify_with(&f, &quantum, &classical, cli.budget) {
        Ok(r) => r,
        Err(SemanticsError::Inconclusive(n)) => {
            let text = if cli.json {
                to_json(&serde_json::json!({ "formula": f.to_string(), "classification": null, "inconclusive_after": n }))
            } else {
                format!("INCONCLUSIVE {} (budget {} exhausted)\n", f, cli.budget)
            };
            return Ok(Output { text, verdict: Verdict::No });
        }
        Err(e) => return Err(semantic_error(e)),
    };
    let text = if cli.json { to_json(&report) } else { format!("{}\n", report.classification) };
    Ok(Output { text, verdict: Verdict::Yes })
}

#[derive(Serialize)]
struct LatticeReport {
    lattice: String,
    size: usize,
    verdicts: Vec<LawVerdict>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn cmd_lattice(cli: &Cli, path: &Path, laws: &[LawArg]) -> Result<Output, InputError> {
    let spec: LatticeSpec = read_json(path)?;
    let lattice = OrthoLattice::from_spec(&spec).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let requested: Vec<Law> = if laws.is_empty() { Law::ALL.to_vec() } else { laws.iter().map(|&l| l.into()).collect() };
    let verdicts: Vec<LawVerdict> = requested.iter().map(|&l| lattice.check_law(l)).collect();
    let verdict = Verdict::from_bool(laws.is_empty() || verdicts.iter().all(|v| v.holds));
    let report = LatticeReport { lattice: lattice.name().to_string(), size: lattice.len(), verdicts };
    let text = if cli.json {
        to_json(&report)
    } else {
        let mut s = format!("{} ({} elements)\n", report.lattice, report.size);
        for v in &report.verdicts {
            let status = if v.holds { "HOLDS" } else { "FAILS" };
            match &v.witness {
                Some(w) => {
                    let _ = writeln!(s, "{:<14}{status} witness ({})", v.law.name(), w.join(", "));
                }
                None => {
                    let _ = writeln!(s, "{:<14}{status}", v.law.name());
                }
            }
        }
        s
    };
    Ok(Output { text, verdict })
}

fn load_state(spec: &str, tol: f64) -> Result<PureState, InputError> {
    if let Some(s) = PureState::named(spec) {
        return Ok(s);
    }
    let file: VectorJson = read_json(Path::new(spec))?;
    Ok(PureState::from_json(&file, tol)?)
}

fn load_subspace(spec: &str) -> Result<Subspace, InputError> {
    if let Some(s) = hilbert::qubit_ray(spec) {
        return Ok(s);
    }
    let file: SubspaceJson = read_json(Path::new(spec))?;
    Ok(Subspace::from_json(&file)?)
}

fn cmd_simulate(
    cli: &Cli,
    state: &str,
    tests: &[String],
    policy: PolicyArg,
    out: Option<&Path>,
) -> Result<Output, InputError> {
    let policy = match (policy, cli.seed) {
        (PolicyArg::AllPass, _) => Policy::AllPass,
        (PolicyArg::Sample, Some(seed)) => Policy::Sample { seed },
        (PolicyArg::Sample, None) => return Err(InputError("--policy sample requires --seed".into())),
    };
    let s = load_state(state, cli.tol)?;
    let tests = tests
        .iter()
        .map(|t| Ok((t.clone(), load_subspace(t)?)))
        .collect::<Result<Vec<_>, InputError>>()?;
    let record = match measurement::run_sequence(&s, &tests, policy, cli.tol) {
        Ok(r) => r,
        Err(measurement::MeasurementError::ImpossibleBranch { step, probability }) => {
            let text = if cli.json {
                to_json(&serde_json::json!({
                    "impossible_branch": { "step": step, "label": tests[step].0, "probability": probability }
                }))
            } else {
                format!("IMPOSSIBLE branch at step {step} ({}): pass probability {probability:.6}\n", tests[step].0)
            };
            return Ok(Output { text, verdict: Verdict::No });
        }
        Err(e) => return Err(e.into()),
    };
    let json = record.to_json();
    if let Some(path) = out {
        std::fs::write(path, to_json(&json)).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    let text = if cli.json { to_json(&json) } else { render_record(&record) };
    Ok(Output { text, verdict: Verdict::Yes })
}

fn fmt_complex(z: &ComplexJson) -> String {
    format!("{:.6}{:+.6}i", z[0], z[1])
}

fn render_record(r: &MeasurementRecord) -> String {
    let mut s = format!("{:<6}{:<10}{:<9}{}\n", "step", "test", "outcome", "probability");
    for (i, step) in r.steps.iter().enumerate() {
        let _ = writeln!(s, "{:<6}{:<10}{:<9}{:.6}", i, step.label, step.outcome, step.probability);
    }
    let v: Vec<String> = r.final_state.to_json().vector.iter().map(fmt_complex).collect();
    let _ = writeln!(s, "final state: [{}]", v.join(", "));
    s
}

#[derive(Serialize)]
struct CertificateJson {
    c: f64,
    /// Keys `++`, `+-`, `-+`, `--` for the outcome pairs.
    elements: BTreeMap<&'static str, Vec<Vec<ComplexJson>>>,
}

#[derive(Serialize)]
struct CoexistReport {
    a: [f64; 3],
    b: [f64; 3],
    value: f64,
    bound: f64,
    coexistent: bool,
    certificate: Option<CertificateJson>,
}

fn certificate_json(cert: &JointCertificate) -> CertificateJson {
    let keys = ["++", "+-", "-+", "--"];
    CertificateJson {
        c: cert.c,
        elements: keys.into_iter().zip(cert.elements().iter().map(linalg::encode_matrix)).collect(),
    }
}

fn bloch(name: &str, v: &[f64]) -> Result<[f64; 3], InputError> {
    <[f64; 3]>::try_from(v)
        .ok()
        .filter(|a| a.iter().all(|x| x.is_finite()))
        .ok_or_else(|| InputError(format!("--{name} needs three finite components x,y,z")))
}

fn cmd_coexist(cli: &Cli, a: &[f64], b: &[f64]) -> Result<Output, InputError> {
    let (a, b) = (bloch("a", a)?, bloch("b", b)?);
    let e1 = effects::unsharp_qubit(a, 1.0, cli.tol).map_err(|e| InputError(format!("--a: {e}")))?;
    let e2 = effects::unsharp_qubit(b, 1.0, cli.tol).map_err(|e| InputError(format!("--b: {e}")))?;
    let v = effects::coexistent(&e1, &e2, cli.tol)?;
    let report = CoexistReport {
        a,
        b,
        value: v.value,
        bound: v.bound,
        coexistent: v.coexistent,
        certificate: v.certificate.as_ref().map(certificate_json),
    };
    let text = if cli.json {
        to_json(&report)
    } else if let Some(cert) = &v.certificate {
        let mut s = format!("COEXISTENT ({:.4} <= {})\njoint POVM with c = {:.6}\n", v.value, v.bound, cert.c);
        for (key, m) in ["++", "+-", "-+", "--"].iter().zip(cert.elements()) {
            let rows: Vec<String> = linalg::encode_matrix(&m)
                .iter()
                .map(|r| r.iter().map(fmt_complex).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(s, "  G{key}: [{}]", rows.join("; "));
        }
        s
    } else {
        format!("NOT COEXISTENT ({:.4} > {})\n", v.value, v.bound)
    };
    Ok(Output { text, verdict: Verdict::from_bool(v.coexistent) })
}

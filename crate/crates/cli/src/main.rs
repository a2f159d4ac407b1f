//! Command-line surface: checking theories against structures, evaluating
//! terms, building free structures, factorizing functors, running the
//! closure suite, and generating category corpora.
//!
//! Exit codes: 0 when everything holds/passes, 1 on a failing or
//! non-interpretable verdict, 2 on usage or parse errors, 3 when a budget
//! is exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use termlab::budget::Budget;
use termlab::concrete::{check_ord_judgement, interpret_ord, OrdJudgement, OrdOutcome};
use termlab::corpus::{self, CorpusBounds};
use termlab::dsl::{self, AnyLanguage, AnyStructure, AnyTheory, Workspace};
use termlab::fincat::{factorize, is_epi, is_strong_mono, FinFunctor, HomCat};
use termlab::free::{build_free, universal_property_check, FreeError, ProbeSet};
use termlab::interp::{check_judgement, EvalError, Evaluator, Interp, Outcome};
use termlab::variety::{closure_suite, default_power_shapes, ClosureStatus, StructureCorpus};
use termlab::verdict::Status;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "termlab",
    about = "Workbench for two-dimensional equational theories over finite categories, posets, and metric spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a machine-readable JSON document instead of prose.
    #[arg(long, global = true)]
    json: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

/// Budget limits; each flag overrides the corresponding TERMLAB_* variable.
#[derive(Args)]
struct BudgetArgs {
    /// Maximum functors per materialized functor category
    /// (env TERMLAB_MAX_HOM_OBJECTS).
    #[arg(long, global = true)]
    max_hom_objects: Option<usize>,
    /// Maximum natural transformations per materialized functor category
    /// (env TERMLAB_MAX_HOM_ARROWS).
    #[arg(long, global = true)]
    max_hom_arrows: Option<usize>,
    /// Maximum arrows a presentation may close into
    /// (env TERMLAB_MAX_PRESENTATION_ARROWS).
    #[arg(long, global = true)]
    max_presentation_arrows: Option<usize>,
    /// Maximum enumerated terms (env TERMLAB_MAX_TERMS).
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Maximum corpus size (env TERMLAB_MAX_CORPUS).
    #[arg(long, global = true)]
    max_corpus: Option<usize>,
}

impl BudgetArgs {
    fn resolve(&self) -> Budget {
        let mut b = Budget::default();
        let env = |name: &str| std::env::var(name).ok().and_then(|v| v.parse().ok());
        if let Some(v) = env("TERMLAB_MAX_HOM_OBJECTS") {
            b.max_hom_objects = v;
        }
        if let Some(v) = env("TERMLAB_MAX_HOM_ARROWS") {
            b.max_hom_arrows = v;
        }
        if let Some(v) = env("TERMLAB_MAX_PRESENTATION_ARROWS") {
            b.max_presentation_arrows = v;
        }
        if let Some(v) = env("TERMLAB_MAX_TERMS") {
            b.max_terms = v;
        }
        if let Some(v) = env("TERMLAB_MAX_CORPUS") {
            b.max_corpus = v;
        }
        if let Some(v) = self.max_hom_objects {
            b.max_hom_objects = v;
        }
        if let Some(v) = self.max_hom_arrows {
            b.max_hom_arrows = v;
        }
        if let Some(v) = self.max_presentation_arrows {
            b.max_presentation_arrows = v;
        }
        if let Some(v) = self.max_terms {
            b.max_terms = v;
        }
        if let Some(v) = self.max_corpus {
            b.max_corpus = v;
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a theory against a structure declared in a file.
    Check {
        file: PathBuf,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        theory: String,
    },
    /// Evaluate a term (surface syntax) over a structure.
    Eval {
        file: PathBuf,
        /// The term, in the file's scope, e.g. 'inv(arr(Two.u))'.
        #[arg(long)]
        term: String,
        #[arg(long)]
        structure: String,
    },
    /// Build the bounded free structure on a shape and check its universal
    /// property against the probe structures.
    Free {
        file: PathBuf,
        #[arg(long)]
        lang: String,
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Name of a probes declaration; defaults to a generated probe set.
        #[arg(long)]
        probes: Option<String>,
    },
    /// Factorize a declared functor as an epimorphism followed by a strong
    /// monomorphism.
    Factor {
        file: PathBuf,
        #[arg(long)]
        functor: String,
    },
    /// Run the closure suite for a theory over a corpus of structures.
    Closure {
        file: PathBuf,
        #[arg(long)]
        theory: String,
        /// Comma-separated structure names forming the corpus.
        #[arg(long, value_delimiter = ',')]
        corpus: Vec<String>,
    },
    /// Enumerate all categories within bounds, up to isomorphism.
    GenCorpus {
        #[arg(long, default_value_t = 2)]
        max_objects: usize,
        #[arg(long, default_value_t = 5)]
        max_arrows: usize,
        /// Print at most this many entries (counting continues).
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Print the canonical enumeration of the functor category
    /// carrier^arity (the key order for structure tables).
    Describe {
        file: PathBuf,
        #[arg(long)]
        arity: String,
        #[arg(long)]
        carrier: String,
    },
}

#[derive(Debug)]
enum AppError {
    Io(String),
    Parse(Vec<dsl::Diagnostic>),
    Usage(String),
    Budget(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Io(m) | AppError::Usage(m) | AppError::Budget(m) => write!(f, "{m}"),
            AppError::Parse(ds) => {
                for d in ds {
                    writeln!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<EvalError> for AppError {
    fn from(e: EvalError) -> AppError {
        match &e {
            EvalError::Cat(termlab::fincat::CatError::SizeBound(_)) => {
                AppError::Budget(e.to_string())
            }
            _ => AppError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.resolve();
    match run(&cli, &budget) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                AppError::Budget(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load(path: &PathBuf, budget: &Budget) -> Result<Workspace, AppError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    let file = dsl::parse(&src).map_err(AppError::Parse)?;
    let (ws, diags) = dsl::elaborate(&file, budget);
    if !diags.is_empty() {
        return Err(AppError::Parse(diags));
    }
    Ok(ws)
}

fn exit_bool(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::NotInterpretable => "not_interpretable",
    }
}

#[derive(Serialize)]
struct VerdictOut {
    judgement: usize,
    status: String,
    witness: Option<String>,
}

fn run(cli: &Cli, budget: &Budget) -> Result<ExitCode, AppError> {
    match &cli.command {
        Command::Check { file, structure, theory } => {
            cmd_check(cli, budget, file, structure, theory)
        }
        Command::Eval { file, term, structure } => cmd_eval(cli, budget, file, term, structure),
        Command::Free { file, lang, shape, depth, probes } => {
            cmd_free(cli, budget, file, lang, shape, *depth, probes.as_deref())
        }
        Command::Factor { file, functor } => cmd_factor(cli, budget, file, functor),
        Command::Closure { file, theory, corpus } => {
            cmd_closure(cli, budget, file, theory, corpus)
        }
        Command::GenCorpus { max_objects, max_arrows, limit } => {
            cmd_gen_corpus(cli, budget, *max_objects, *max_arrows, *limit)
        }
        Command::Describe { file, arity, carrier } => {
            cmd_describe(budget, file, arity, carrier)
        }
    }
}

fn cmd_check(
    cli: &Cli,
    budget: &Budget,
    file: &PathBuf,
    structure: &str,
    theory: &str,
) -> Result<ExitCode, AppError> {
    let ws = load(file, budget)?;
    let theory_v = ws
        .theory(theory)
        .ok_or_else(|| AppError::Usage(format!("unknown theory {theory}")))?
        .clone();
    let structure_v = ws
        .structure(structure)
        .ok_or_else(|| AppError::Usage(format!("unknown structure {structure}")))?
        .clone();
    let mut verdicts: Vec<VerdictOut> = Vec::new();
    match (&theory_v, &structure_v) {
        (AnyTheory::Cat(t), AnyStructure::Cat(s)) => {
            for (i, j) in t.judgements.iter().enumerate() {
                let v = check_judgement(j, s, budget)?;
                verdicts.push(VerdictOut {
                    judgement: i,
                    status: status_str(v.status).into(),
                    witness: v.witness.map(|w| format!("{w:?}")),
                });
            }
        }
        (AnyTheory::Pos(t), AnyStructure::Pos(s)) => {
            for (i, j) in t.judgements.iter().enumerate() {
                let v =
                    check_ord_judgement(j, s).map_err(|e| AppError::Usage(e.to_string()))?;
                verdicts.push(VerdictOut {
                    judgement: i,
                    status: status_str(v.status).into(),
                    witness: v.witness.map(|w| w.valuation),
                });
            }
        }
        (AnyTheory::Met(t), AnyStructure::Met(s)) => {
            for (i, j) in t.judgements.iter().enumerate() {
                let v =
                    check_ord_judgement(j, s).map_err(|e| AppError::Usage(e.to_string()))?;
                verdicts.push(VerdictOut {
                    judgement: i,
                    status: status_str(v.status).into(),
                    witness: v.witness.map(|w| w.valuation),
                });
            }
        }
        _ => {
            return Err(AppError::Usage(
                "structure and theory are over different bases".into(),
            ))
        }
    }
    let holds = verdicts.iter().all(|v| v.status == "holds");
    if cli.json {
        #[derive(Serialize)]
        struct CheckOutput {
            schema: u32,
            command: &'static str,
            structure: String,
            theory: String,
            holds: bool,
            verdicts: Vec<VerdictOut>,
        }
        let out = CheckOutput {
            schema: SCHEMA_VERSION,
            command: "check",
            structure: structure.into(),
            theory: theory.into(),
            holds,
            verdicts,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for v in &verdicts {
            match &v.witness {
                Some(w) => println!("judgement {}: {} (witness: {})", v.judgement, v.status, w),
                None => println!("judgement {}: {}", v.judgement, v.status),
            }
        }
        println!("overall: {}", if holds { "holds" } else { "does not hold" });
    }
    Ok(exit_bool(holds))
}

fn cmd_eval(
    cli: &Cli,
    budget: &Budget,
    file: &PathBuf,
    term: &str,
    structure: &str,
) -> Result<ExitCode, AppError> {
    let mut ws = load(file, budget)?;
    let structure_v = ws
        .structure(structure)
        .ok_or_else(|| AppError::Usage(format!("unknown structure {structure}")))?
        .clone();
    // Elaborate the term in file scope via a synthetic defined-judgement.
    let lang_name = match &structure_v {
        AnyStructure::Cat(s) => s.language().name.clone(),
        AnyStructure::Pos(s) => s.language().name.clone(),
        AnyStructure::Met(s) => s.language().name.clone(),
    };
    let src = format!("theory __eval over {lang_name} {{ defined {term}; }}");
    let synth = dsl::parse(&src).map_err(AppError::Parse)?;
    let diags = dsl::elaborate_in(&mut ws, &synth, budget);
    if !diags.is_empty() {
        return Err(AppError::Parse(diags));
    }
    match (ws.theory("__eval").cloned(), structure_v) {
        (Some(AnyTheory::Cat(t)), AnyStructure::Cat(s)) => {
            let termlab::terms::Judgement::Defined(t) = &t.judgements[0] else {
                unreachable!()
            };
            let ev = Evaluator::new(&s, budget);
            let out = ev.interpret(t)?;
            print_eval_outcome(cli.json, &t.to_string(), &out);
            Ok(exit_bool(out.is_interpretable()))
        }
        (Some(AnyTheory::Pos(t)), AnyStructure::Pos(s)) => {
            let OrdJudgement::Defined(t) = &t.judgements[0] else { unreachable!() };
            let out = interpret_ord(t, &s).map_err(|e| AppError::Usage(e.to_string()))?;
            print_ord_outcome(cli.json, term, &out);
            Ok(exit_bool(out.is_interpretable()))
        }
        (Some(AnyTheory::Met(t)), AnyStructure::Met(s)) => {
            let OrdJudgement::Defined(t) = &t.judgements[0] else { unreachable!() };
            let out = interpret_ord(t, &s).map_err(|e| AppError::Usage(e.to_string()))?;
            print_ord_outcome(cli.json, term, &out);
            Ok(exit_bool(out.is_interpretable()))
        }
        _ => Err(AppError::Usage("term does not elaborate over this structure".into())),
    }
}

fn print_eval_outcome(json: bool, term: &str, out: &Outcome) {
    #[derive(Serialize)]
    struct EvalOutput {
        schema: u32,
        command: &'static str,
        term: String,
        interpretable: bool,
        dimension: Option<&'static str>,
        obligation: Option<String>,
    }
    let o = match out {
        Outcome::Interpreted(i) => EvalOutput {
            schema: SCHEMA_VERSION,
            command: "eval",
            term: term.to_string(),
            interpretable: true,
            dimension: Some(match i {
                Interp::One(_) => "functor",
                Interp::Two(_) => "transformation",
            }),
            obligation: None,
        },
        Outcome::NotInterpretable(ob) => EvalOutput {
            schema: SCHEMA_VERSION,
            command: "eval",
            term: term.to_string(),
            interpretable: false,
            dimension: None,
            obligation: Some(format!("{:?} at {}", ob.kind, ob.at_term)),
        },
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&o).unwrap());
    } else if o.interpretable {
        println!("term interprets as a {}", o.dimension.unwrap());
    } else {
        println!("not interpretable: {}", o.obligation.as_ref().unwrap());
    }
}

fn print_ord_outcome(json: bool, term: &str, out: &OrdOutcome) {
    #[derive(Serialize)]
    struct EvalOutput {
        schema: u32,
        command: &'static str,
        term: String,
        interpretable: bool,
        witness: Option<String>,
    }
    let o = EvalOutput {
        schema: SCHEMA_VERSION,
        command: "eval",
        term: term.to_string(),
        interpretable: out.is_interpretable(),
        witness: match out {
            OrdOutcome::Interpreted(_) => None,
            OrdOutcome::NotInterpretable(w) => Some(w.valuation.clone()),
        },
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&o).unwrap());
    } else if o.interpretable {
        println!("term interprets");
    } else {
        println!(
            "not interpretable at valuation {}",
            o.witness.as_ref().unwrap()
        );
    }
}

fn cmd_free(
    cli: &Cli,
    budget: &Budget,
    file: &PathBuf,
    lang: &str,
    shape: &str,
    depth: usize,
    probes: Option<&str>,
) -> Result<ExitCode, AppError> {
    let ws = load(file, budget)?;
    let AnyLanguage::Cat(language) = ws
        .language(lang)
        .ok_or_else(|| AppError::Usage(format!("unknown language {lang}")))?
        .clone()
    else {
        return Err(AppError::Usage("free structures live over categories".into()));
    };
    let shape_cat = ws
        .category(shape)
        .ok_or_else(|| AppError::Usage(format!("unknown category {shape}")))?
        .clone();
    let probe_set = match probes {
        Some(name) => {
            let names = ws
                .probes
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| AppError::Usage(format!("unknown probes {name}")))?;
            let mut st = Vec::new();
            for n in names {
                match ws.structure(&n) {
                    Some(AnyStructure::Cat(s)) => st.push((**s).clone()),
                    _ => {
                        return Err(AppError::Usage(format!("probe {n} is not a Cat structure")))
                    }
                }
            }
            ProbeSet::new(st)
        }
        None => ProbeSet::default_for(&language, budget)?,
    };
    let free =
        build_free(&language, &shape_cat, depth, &probe_set, budget).map_err(|e| match e {
            FreeError::Budget(b) => AppError::Budget(b.to_string()),
            other => AppError::Usage(other.to_string()),
        })?;
    let unit_iso = is_epi(&free.unit) && is_strong_mono(&free.unit);
    let mut checks = 0usize;
    let mut universal_ok = true;
    for p in probe_set.structures() {
        let ev = Evaluator::new(p, budget);
        let hom = ev.hom(&shape_cat)?;
        for i in 0..hom.n_functors() {
            let k = hom.functor(i);
            let rep = universal_property_check(&free, p, &k, budget)?;
            checks += 1;
            universal_ok &= rep.all_ok();
        }
    }
    #[derive(Serialize)]
    struct FreeOutput {
        schema: u32,
        command: &'static str,
        shape: String,
        depth: usize,
        probes: usize,
        objects: usize,
        arrows: usize,
        unit_is_iso: bool,
        universal_checks: usize,
        universal_ok: bool,
    }
    let out = FreeOutput {
        schema: SCHEMA_VERSION,
        command: "free",
        shape: shape.into(),
        depth,
        probes: free.probe_count,
        objects: free.structure.carrier().n_objects(),
        arrows: free.structure.carrier().n_arrows(),
        unit_is_iso: unit_iso,
        universal_checks: checks,
        universal_ok,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "free structure on {shape}: {} objects, {} arrows (depth {}, {} probes)",
            out.objects, out.arrows, out.depth, out.probes
        );
        println!(
            "unit: {}",
            if unit_iso {
                "isomorphism onto its image and epi (carrier is the shape)"
            } else {
                "a proper inclusion"
            }
        );
        println!(
            "universal property: {} over {} (target, unit-restriction) pairs",
            if universal_ok { "passes" } else { "FAILS" },
            out.universal_checks
        );
    }
    Ok(exit_bool(universal_ok))
}

fn cmd_factor(
    cli: &Cli,
    budget: &Budget,
    file: &PathBuf,
    functor: &str,
) -> Result<ExitCode, AppError> {
    let ws = load(file, budget)?;
    let f = ws
        .functor(functor)
        .ok_or_else(|| AppError::Usage(format!("unknown functor {functor}")))?;
    let fact = factorize(f).map_err(|e| AppError::Usage(e.to_string()))?;
    let composes = FinFunctor::compose(&fact.mono, &fact.epi) == *f;
    #[derive(Serialize)]
    struct FactorOutput {
        schema: u32,
        command: &'static str,
        functor: String,
        middle_objects: usize,
        middle_arrows: usize,
        epi_is_epi: bool,
        mono_is_strong_mono: bool,
        composes_back: bool,
    }
    let out = FactorOutput {
        schema: SCHEMA_VERSION,
        command: "factor",
        functor: functor.into(),
        middle_objects: fact.middle.n_objects(),
        middle_arrows: fact.middle.n_arrows(),
        epi_is_epi: is_epi(&fact.epi),
        mono_is_strong_mono: is_strong_mono(&fact.mono),
        composes_back: composes,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "factorization of {functor}: image closure has {} objects, {} arrows",
            out.middle_objects, out.middle_arrows
        );
        println!(
            "epi part is epi: {}; mono part is strong mono: {}; m∘e = f: {}",
            out.epi_is_epi, out.mono_is_strong_mono, out.composes_back
        );
    }
    let _ = budget;
    Ok(exit_bool(out.epi_is_epi && out.mono_is_strong_mono && composes))
}

fn cmd_closure(
    cli: &Cli,
    budget: &Budget,
    file: &PathBuf,
    theory: &str,
    corpus_names: &[String],
) -> Result<ExitCode, AppError> {
    let ws = load(file, budget)?;
    let AnyTheory::Cat(theory_v) = ws
        .theory(theory)
        .ok_or_else(|| AppError::Usage(format!("unknown theory {theory}")))?
        .clone()
    else {
        return Err(AppError::Usage("the closure suite runs over Cat theories".into()));
    };
    let mut structures = Vec::new();
    for name in corpus_names {
        match ws.structure(name) {
            Some(AnyStructure::Cat(s)) => structures.push((**s).clone()),
            Some(_) => return Err(AppError::Usage(format!("{name} is not a Cat structure"))),
            None => return Err(AppError::Usage(format!("unknown structure {name}"))),
        }
    }
    if structures.is_empty() {
        return Err(AppError::Usage("closure needs a nonempty corpus".into()));
    }
    let corpus_v = StructureCorpus::new(theory_v.language.clone(), structures);
    let report = closure_suite(&theory_v, &corpus_v, &default_power_shapes(), budget)?;
    #[derive(Serialize)]
    struct ClosureOutput {
        schema: u32,
        command: &'static str,
        theory: String,
        models: usize,
        all_pass: bool,
        entries: Vec<termlab::variety::ClosureEntry>,
    }
    let out = ClosureOutput {
        schema: SCHEMA_VERSION,
        command: "closure",
        theory: theory.into(),
        models: report.models,
        all_pass: report.all_pass(),
        entries: report.entries.clone(),
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("models in corpus: {}", report.models);
        for e in &report.entries {
            let status = match &e.status {
                ClosureStatus::Pass => "pass".to_string(),
                ClosureStatus::Fail { witness } => format!("FAIL ({witness})"),
                ClosureStatus::Skipped { reason } => format!("skipped ({reason})"),
            };
            println!("{}: {} [{} checked]", e.property, status, e.checked);
        }
    }
    Ok(exit_bool(report.all_pass()))
}

fn cmd_gen_corpus(
    cli: &Cli,
    budget: &Budget,
    max_objects: usize,
    max_arrows: usize,
    limit: usize,
) -> Result<ExitCode, AppError> {
    let bounds = CorpusBounds::new(max_objects, max_arrows);
    let mut shown = Vec::new();
    let total = corpus::for_each_category(&bounds, budget, |c| {
        if shown.len() < limit {
            shown.push(format!(
                "{} objects, {} arrows{}{}",
                c.n_objects(),
                c.n_arrows(),
                if c.is_groupoid() { ", groupoid" } else { "" },
                if c.is_discrete() { ", discrete" } else { "" },
            ));
        }
    })
    .map_err(|e| AppError::Budget(e.to_string()))?;
    #[derive(Serialize)]
    struct CorpusOutput {
        schema: u32,
        command: &'static str,
        max_objects: usize,
        max_arrows: usize,
        total: usize,
        shown: Vec<String>,
    }
    let out = CorpusOutput {
        schema: SCHEMA_VERSION,
        command: "gen-corpus",
        max_objects,
        max_arrows,
        total,
        shown,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "{} categories with at most {} objects and {} arrows (up to isomorphism)",
            out.total, out.max_objects, out.max_arrows
        );
        for s in &out.shown {
            println!("  {s}");
        }
        if out.total > out.shown.len() {
            println!("  ... and {} more", out.total - out.shown.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_describe(
    budget: &Budget,
    file: &PathBuf,
    arity: &str,
    carrier: &str,
) -> Result<ExitCode, AppError> {
    let ws = load(file, budget)?;
    let x = ws
        .category(arity)
        .ok_or_else(|| AppError::Usage(format!("unknown category {arity}")))?;
    let a = ws
        .category(carrier)
        .ok_or_else(|| AppError::Usage(format!("unknown category {carrier}")))?;
    let hom = HomCat::build(x.clone(), a.clone(), budget)
        .map_err(|e| AppError::from(EvalError::from(e)))?;
    println!(
        "functor category {carrier}^{arity}: {} functors, {} transformations",
        hom.n_functors(),
        hom.n_transfs()
    );
    for i in 0..hom.n_functors() {
        println!("  obj {i}: {}", hom.describe_functor(i));
    }
    for t in 0..hom.n_transfs() {
        println!("  arr {t}: {}", hom.describe_transf(t));
    }
    Ok(ExitCode::SUCCESS)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use contextuality::document::{ModelDocument, Strictness};
use contextuality::hierarchy::{self, Level};
use contextuality::kspec::{self, Graph, VectorFamily};
use contextuality::rational::{format as fmt_rat, format_fraction};
use contextuality::solve::{self, SignedOutcome};
use contextuality::tableau::DEFAULT_COLUMN_LIMIT;
use contextuality::{catalog, quantum, EmpiricalModel, Error, IncidenceTableau, Scenario, Semiring};

/// Exact contextuality analysis of empirical models.
#[derive(Parser)]
#[command(name = "contextuality", version)]
struct Cli {
    /// Ignore unknown fields in model documents.
    #[arg(long, global = true)]
    lenient: bool,
    /// Largest number of global assignments a solver may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_COLUMN_LIMIT)]
    column_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model document for normalization and no-signalling.
    Validate { model: PathBuf },
    /// Place a model in the contextuality hierarchy; the exit code encodes the level.
    Classify {
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exact non-contextual fraction, with decomposition files when it is strictly between 0 and 1.
    Ncf {
        model: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Look for a global section over one semiring.
    Solve {
        model: PathBuf,
        #[arg(long, value_enum)]
        semiring: SemiringArg,
    },
    /// Rank of the incidence matrix against the dimension formula.
    Rank { input: PathBuf },
    /// Print the incidence matrix as rows of 0/1.
    DumpMatrix { input: PathBuf },
    /// Kochen-Specker style checks on a cover, graph or vector family.
    Ks {
        #[arg(value_enum)]
        check: KsCheck,
        input: PathBuf,
    },
    /// Constraint and formula views of a model's support.
    Export {
        #[arg(value_enum)]
        format: ExportFormat,
        model: PathBuf,
    },
    /// Born-rule models.
    Quantum {
        #[command(subcommand)]
        command: QuantumCommand,
    },
    /// Emit a built-in scenario or model.
    Catalog {
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum QuantumCommand {
    /// GHZ state measured with local X and Y.
    Ghz {
        #[arg(long)]
        n: usize,
        /// Compare against the exact catalog model.
        #[arg(long)]
        compare: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringArg {
    Boolean,
    Nonneg,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum KsCheck {
    Parity,
    OneSection,
    Transversal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csp,
    Formula,
    Dimacs,
}

/// Failures with their exit codes.
enum Failure {
    Input(anyhow::Error),
    SizeBound(anyhow::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::SizeBound { .. }) => Failure::SizeBound(e),
            _ => Failure::Other(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::SizeBound(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { model } => validate(cli, model),
        Command::Classify { model, json } => classify(cli, model, *json),
        Command::Ncf { model, out_dir } => ncf(cli, model, out_dir),
        Command::Solve { model, semiring } => solve_cmd(cli, model, *semiring),
        Command::Rank { input } => rank(cli, input),
        Command::DumpMatrix { input } => {
            let doc = read_document(cli, input)?;
            let scenario = doc.scenario().map_err(input_error(input))?;
            print!("{}", tableau(cli, &scenario)?.dump());
            Ok(0)
        }
        Command::Ks { check, input } => ks(input, *check),
        Command::Export { format, model } => export(cli, model, *format),
        Command::Quantum { command: QuantumCommand::Ghz { n, compare } } => ghz(*n, *compare),
        Command::Catalog { name, output, list } => catalog_cmd(name.as_deref(), output.as_deref(), *list),
    }
}

fn input_error(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(anyhow!(e).context(format!("reading {}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)
}

fn read_document(cli: &Cli, path: &Path) -> Result<ModelDocument, Failure> {
    let strictness = if cli.lenient { Strictness::Lenient } else { Strictness::Strict };
    ModelDocument::parse(&read_text(path)?, strictness).map_err(input_error(path))
}

/// A normalized, compatible model; signalling is an error but not an input error.
fn read_model(cli: &Cli, path: &Path) -> Result<EmpiricalModel, Failure> {
    let raw = read_document(cli, path)?.raw_model().map_err(input_error(path))?;
    let report = raw.check_no_signalling();
    if !report.is_compatible() {
        return Err(Failure::Other(anyhow!("model signals:\n{}", report.describe(raw.scenario()))));
    }
    let tables = raw.tables().to_vec();
    EmpiricalModel::new(raw.scenario().clone(), tables).map_err(input_error(path))
}

fn tableau(cli: &Cli, scenario: &Scenario) -> Result<IncidenceTableau, Failure> {
    Ok(IncidenceTableau::build_with_limit(scenario, cli.column_limit)?)
}

fn validate(cli: &Cli, path: &Path) -> Outcome {
    let raw = read_document(cli, path)?.raw_model().map_err(input_error(path))?;
    let mut ok = true;
    for (c, t) in raw.tables().iter().enumerate() {
        if !t.is_normalized() {
            ok = false;
            println!("context {:?} sums to {}", raw.scenario().context_labels(c), fmt_rat(&t.total()));
        }
    }
    let report = raw.check_no_signalling();
    println!("{}", report.describe(raw.scenario()));
    Ok(if ok && report.is_compatible() { 0 } else { 1 })
}

fn section_json(scenario: &Scenario, s: &contextuality::Section) -> Value {
    let map: serde_json::Map<String, Value> = s
        .context()
        .iter()
        .zip(s.values())
        .map(|(&m, &o)| (scenario.measurements()[m].clone(), Value::from(scenario.outcomes()[o].clone())))
        .collect();
    Value::Object(map)
}

fn classify(cli: &Cli, path: &Path, as_json: bool) -> Outcome {
    let model = read_model(cli, path)?;
    let scenario = model.scenario();
    let t = tableau(cli, scenario)?;
    let report = hierarchy::classify_with(&t, &model)?;
    let global: Vec<Value> = report
        .global_section
        .iter()
        .flat_map(|x| x.iter().enumerate())
        .filter(|(_, w)| !w.is_zero())
        .map(|(j, w)| json!({ "assignment": section_json(scenario, &scenario.global_assignment(j)), "weight": fmt_rat(w) }))
        .collect();
    if as_json {
        let value = json!({
            "level": report.level.name(),
            "exit_code": report.level.exit_code(),
            "global_section": if report.global_section.is_some() { Value::from(global) } else { Value::Null },
            "boolean_solvable": report.boolean.solvable,
            "uncovered_rows": report.boolean.uncovered.iter().map(|&r| {
                let (c, s) = t.row_label(r);
                json!({ "context": scenario.context_labels(c), "section": section_json(scenario, &s) })
            }).collect::<Vec<_>>(),
            "se": report.se.iter().map(|s| section_json(scenario, s)).collect::<Vec<_>>(),
            "ncf": format_fraction(&report.ncf.value),
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        println!("level: {}", report.level);
        println!("non-contextual fraction: {}", format_fraction(&report.ncf.value));
        println!("boolean global section: {}", if report.boolean.solvable { "yes" } else { "no" });
        println!("S_e: {} assignment(s)", report.se.len());
        for s in &report.se {
            println!("  {}", scenario.format_section(s));
        }
        if let Some(x) = &report.global_section {
            println!("global section:");
            for (j, w) in x.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                println!("  {}  {}", fmt_rat(w), scenario.format_section(&scenario.global_assignment(j)));
            }
        }
    }
    Ok(level_code(report.level))
}

fn level_code(level: Level) -> u8 {
    level.exit_code() as u8
}

fn ncf(cli: &Cli, path: &Path, out_dir: &Path) -> Outcome {
    let model = read_model(cli, path)?;
    let t = tableau(cli, model.scenario())?;
    let result = hierarchy::noncontextual_fraction_with(&t, &model)?;
    println!("{}", format_fraction(&result.value));
    if let Some(d) = &result.decomposition {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
        fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        for (suffix, part) in [("local", &d.local), ("residual", &d.residual)] {
            let file = out_dir.join(format!("{stem}.{suffix}.json"));
            let doc = ModelDocument::from_model(part).with_metadata("ncf", format_fraction(&result.value)).with_metadata("part", suffix);
            fs::write(&file, doc.to_json()).with_context(|| format!("writing {}", file.display()))?;
            println!("{suffix}: {}", file.display());
        }
    }
    Ok(0)
}

fn solve_cmd(cli: &Cli, path: &Path, semiring: SemiringArg) -> Outcome {
    let doc = read_document(cli, path)?;
    let model = doc.raw_model().map_err(input_error(path))?;
    let scenario = model.scenario();
    let t = tableau(cli, scenario)?;
    let print_weights = |x: &[contextuality::Rational]| {
        for (j, w) in x.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            println!("  {}  {}", fmt_rat(w), scenario.format_section(&scenario.global_assignment(j)));
        }
    };
    match semiring {
        SemiringArg::Boolean => {
            let v = t.model_vector(&model.support_model()?)?;
            let result = solve::solve_boolean(&t, &v.support());
            if result.solvable {
                println!("solvable; admissible assignments:");
                for &j in &result.witness {
                    println!("  {}", scenario.format_section(&scenario.global_assignment(j)));
                }
                Ok(0)
            } else {
                println!("unsolvable; supported sections no admissible assignment reaches:");
                for &r in &result.uncovered {
                    let (c, s) = t.row_label(r);
                    println!("  {:?} {}", scenario.context_labels(c), scenario.format_section(&s));
                }
                Ok(1)
            }
        }
        SemiringArg::Nonneg => {
            if model.semiring() != Semiring::NonNegative {
                return Err(Error::SemiringMismatch { expected: "nonneg".into(), found: model.semiring().to_string() }.into());
            }
            let v = t.model_vector(&model)?;
            match solve::solve_nonneg(&t.augment(&v)).witness() {
                Some(x) => {
                    println!("solvable; global section:");
                    print_weights(x);
                    Ok(0)
                }
                None => {
                    println!("unsolvable: the linear program is infeasible");
                    Ok(1)
                }
            }
        }
        SemiringArg::Signed => {
            let v = t.model_vector(&model.to_signed())?;
            let system = t.augment(&v);
            match solve::solve_signed(&system) {
                SignedOutcome::Solvable(s) => {
                    println!("solvable (rank {}, nullity {}); particular solution:", s.rank, s.nullity);
                    print_weights(&s.particular);
                    Ok(0)
                }
                SignedOutcome::Unsolvable(cert) => {
                    println!("unsolvable; row combination with zero left side and right side {}:", fmt_rat(&cert.value));
                    for (r, y) in &cert.certificate {
                        if *r < t.rows() {
                            let (c, s) = t.row_label(*r);
                            println!("  {}  {:?} {}", fmt_rat(y), scenario.context_labels(c), scenario.format_section(&s));
                        } else {
                            println!("  {}  normalization", fmt_rat(y));
                        }
                    }
                    Ok(1)
                }
            }
        }
    }
}

fn rank(cli: &Cli, path: &Path) -> Outcome {
    let scenario = read_document(cli, path)?.scenario().map_err(input_error(path))?;
    let t = tableau(cli, &scenario)?;
    let r = t.rank();
    let d = scenario.dimension_d();
    println!("rank {r}");
    println!("dimension {d}");
    if r as u128 == d {
        Ok(0)
    } else {
        println!("rank and dimension differ");
        Ok(1)
    }
}

enum KsInput {
    Cover(Scenario),
    Graph(Graph),
    Vectors(VectorFamily),
}

fn read_ks_input(path: &Path) -> Result<KsInput, Failure> {
    let text = read_text(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc = ModelDocument::parse(&text, Strictness::Lenient).map_err(input_error(path))?;
        return Ok(KsInput::Cover(doc.scenario().map_err(input_error(path))?));
    }
    if text.lines().any(|l| l.trim_start().starts_with("vertices:")) {
        return Ok(KsInput::Graph(Graph::parse(&text).map_err(input_error(path))?));
    }
    Ok(KsInput::Vectors(VectorFamily::parse(&text).map_err(input_error(path))?))
}

fn ks(path: &Path, check: KsCheck) -> Outcome {
    let input = read_ks_input(path)?;
    let scenario = || -> Result<Scenario, Failure> {
        match &input {
            KsInput::Cover(s) => Ok(s.clone()),
            KsInput::Graph(g) => Ok(g.clique_cover()?),
            KsInput::Vectors(v) => Ok(v.basis_cover()?),
        }
    };
    match check {
        KsCheck::Parity => {
            let s = scenario()?;
            let verdict = kspec::parity_obstruction(&s);
            println!("contexts {}, gcd of occurrence counts {}", verdict.contexts, verdict.gcd);
            if verdict.obstructed {
                println!("obstructed: no assignment picks exactly one measurement per context");
                Ok(1)
            } else {
                println!("no parity obstruction");
                Ok(0)
            }
        }
        KsCheck::OneSection => {
            let s = scenario()?;
            match kspec::one_section(&s) {
                Some(ones) => {
                    let labels: Vec<&str> = ones.iter().map(|&m| s.measurements()[m].as_str()).collect();
                    println!("exactly-one assignment: {}", labels.join(" "));
                    Ok(0)
                }
                None => {
                    println!("no exactly-one assignment exists");
                    Ok(1)
                }
            }
        }
        KsCheck::Transversal => {
            let graph = match &input {
                KsInput::Cover(s) => Graph::co_context(s),
                KsInput::Graph(g) => g.clone(),
                KsInput::Vectors(v) => v.orthogonality_graph(),
            };
            match kspec::stable_transversal(&graph) {
                Some(set) => {
                    let labels: Vec<&str> = set.iter().map(|&v| graph.labels()[v].as_str()).collect();
                    println!("stable transversal: {}", labels.join(" "));
                    Ok(0)
                }
                None => {
                    println!("no stable transversal exists");
                    Ok(1)
                }
            }
        }
    }
}

fn export(cli: &Cli, path: &Path, format: ExportFormat) -> Outcome {
    let model = read_model(cli, path)?;
    match format {
        ExportFormat::Csp => println!("{}", hierarchy::to_csp(&model)?.to_json()),
        ExportFormat::Formula => println!("{}", hierarchy::to_formula(&model)?),
        ExportFormat::Dimacs => print!("{}", hierarchy::to_formula(&model)?.to_dimacs()),
    }
    Ok(0)
}

fn ghz(n: usize, compare: bool) -> Outcome {
    let born = quantum::ghz_born_model(n)?;
    print!("{born}");
    if !compare {
        return Ok(0);
    }
    let exact = catalog::ghz(n)?;
    let deviation = born.max_deviation(exact.expect_model());
    let ns = quantum::check_generalized_no_signalling(&born, quantum::TAU);
    println!("max deviation from the exact model: {deviation:e}");
    println!("generalized no-signalling: {}", if ns.is_compatible() { "holds" } else { "fails" });
    let support_agrees = born.support(quantum::EPSILON)? == exact.expect_model().support_model()?;
    println!("supports agree: {}", if support_agrees { "yes" } else { "no" });
    Ok(if deviation <= quantum::TAU && ns.is_compatible() && support_agrees { 0 } else { 1 })
}

fn catalog_cmd(name: Option<&str>, output: Option<&Path>, list: bool) -> Outcome {
    if list {
        for n in catalog::names() {
            println!("{n}");
        }
        return Ok(0);
    }
    let name = name.ok_or_else(|| Failure::Input(anyhow!("give a catalog name or --list")))?;
    let entry = catalog::by_name(name).map_err(|e| Failure::Input(e.into()))?;
    let doc = match &entry.model {
        Some(m) => ModelDocument::from_model(m),
        None => ModelDocument::from_scenario(&entry.scenario),
    }
    .with_metadata("name", entry.name.clone())
    .with_metadata("provenance", entry.provenance.clone());
    match output {
        Some(path) => fs::write(path, doc.to_json()).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{}", doc.to_json()),
    }
    Ok(0)
}

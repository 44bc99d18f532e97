use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ctlcount::control::{ControlInstance, Problem};
use ctlcount::counters::{Dispatcher, Strategy};
use ctlcount::error::Error;
use ctlcount::hardness::{certify, generate, Source, Target};
use ctlcount::io::{parse_election, parse_graph, parse_turnout_table, parse_x3c, serialize_election};
use ctlcount::oracle::{Oracle, DEFAULT_CAP};
use ctlcount::prediction::{binomial_table, full_report, parse_rational, render_decimal, render_fraction, TurnoutModel, Uncertain};
use ctlcount::rules::Rule;
use ctlcount::verify::{run_all, VerifyConfig};

#[derive(Parser)]
#[command(name = "ctlcount", version, about = "Exact counting for election control and winner prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the successful control actions of size at most the budget.
    Count(CountArgs),
    /// Probability of each candidate being the unique winner under random turnout.
    Predict(PredictArgs),
    /// Run the seeded self-checks against brute-force enumeration.
    Verify(VerifyArgs),
    /// Build reduction instances from an X3C or bipartite-graph file.
    Gen(GenArgs),
}

#[derive(clap::Args)]
struct CountArgs {
    #[arg(long)]
    problem: Problem,
    #[arg(long)]
    rule: Rule,
    /// Name of the designated candidate.
    #[arg(long)]
    designated: String,
    #[arg(long)]
    budget: usize,
    /// Count only actions of exactly this size; the budget is ignored.
    #[arg(long)]
    exact_size: Option<usize>,
    #[arg(long, default_value = "auto")]
    algorithm: Strategy,
    /// Largest number of subsets the enumerator may visit.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(clap::Args)]
struct PredictArgs {
    #[arg(long)]
    rule: Rule,
    #[arg(long)]
    uncertain: Uncertain,
    /// `binomial:Q` or `table:FILE`.
    #[arg(long)]
    turnout: String,
    #[arg(long, default_value = "auto")]
    algorithm: Strategy,
    /// Decimal places in the rendered probabilities.
    #[arg(long, default_value_t = 6)]
    digits: usize,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    max_candidates: usize,
    #[arg(long, default_value_t = 8)]
    max_voters: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    X3c,
    Bipartite,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    from: SourceKind,
    #[arg(long)]
    target: Target,
    src: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Count both sides and compare them.
    #[arg(long)]
    certify: bool,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

enum Failure {
    Module(Error),
    Io(String),
    Certification(String),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn count(args: CountArgs) -> Result<(), Failure> {
    let election = parse_election(&read(&args.file)?)?;
    let p = election
        .id(&args.designated)
        .ok_or_else(|| Error::InvalidInstance(format!("unknown candidate `{}`", args.designated)))?;
    let inst = ControlInstance::new(election, args.rule, args.problem, p, args.budget)?;
    let dispatcher = Dispatcher::with_oracle(args.algorithm, Oracle::new(args.cap));
    let start = Instant::now();
    let result = match args.exact_size {
        Some(i) => dispatcher.count_exact_size(&inst, i)?,
        None => dispatcher.count(&inst)?,
    };
    let micros = start.elapsed().as_micros();
    if args.json {
        print_json(&json!({
            "cell": inst.cell(),
            "designated": args.designated,
            "budget": args.budget,
            "exact_size": args.exact_size,
            "count": result.count.to_string(),
            "algorithm": result.algorithm.as_str(),
            "route": result.route.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
            "literal_immune": result.literal_immune,
            "elapsed_us": micros,
        }));
    } else {
        println!("{}", result.count);
        println!("algorithm: {}", result.algorithm);
        if result.route.len() > 1 {
            let route: Vec<&str> = result.route.iter().map(|t| t.as_str()).collect();
            println!("route: {}", route.join(" > "));
        }
        if result.literal_immune {
            println!("note: {} is immune to control; the count includes actions that leave the outcome unchanged", inst.cell());
        }
    }
    Ok(())
}

fn turnout(spec: &str, pool: usize) -> Result<TurnoutModel, Failure> {
    if let Some(q) = spec.strip_prefix("binomial:") {
        return Ok(binomial_table(pool, parse_rational(q)?)?);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return Ok(parse_turnout_table(&read(Path::new(path))?)?);
    }
    Err(Error::InvalidTurnout(format!("turnout must be `binomial:Q` or `table:FILE`, got `{spec}`")).into())
}

fn predict(args: PredictArgs) -> Result<(), Failure> {
    let election = parse_election(&read(&args.file)?)?;
    let pool = match args.uncertain {
        Uncertain::Voters => election.unregistered_voters().map(<[_]>::len),
        Uncertain::Candidates => election.unregistered_candidates().map(|a| a.len()),
    };
    let pool = pool.ok_or(Error::MissingPool(match args.uncertain {
        Uncertain::Voters => "unregistered voter",
        Uncertain::Candidates => "unregistered candidate",
    }))?;
    let model = turnout(&args.turnout, pool)?;
    let start = Instant::now();
    let report = full_report(&election, args.rule, &model, args.uncertain, &Dispatcher::new(args.algorithm))?;
    let micros = start.elapsed().as_micros();
    let tags: Vec<&str> = report.algorithms.iter().map(|t| t.as_str()).collect();
    if args.json {
        let candidates: Vec<Value> = report
            .probabilities
            .iter()
            .map(|(c, p)| {
                json!({
                    "name": election.name(*c),
                    "probability": render_fraction(p),
                    "decimal": render_decimal(p, args.digits),
                })
            })
            .collect();
        print_json(&json!({
            "rule": args.rule.to_string(),
            "uncertain": args.uncertain.as_str(),
            "turnout": model.probabilities().iter().map(render_fraction).collect::<Vec<_>>(),
            "candidates": candidates,
            "total": render_fraction(&report.total()),
            "algorithms": tags,
            "elapsed_us": micros,
        }));
    } else {
        let width = report.probabilities.iter().map(|(c, _)| election.name(*c).len()).max().unwrap_or(0);
        for (c, p) in &report.probabilities {
            println!("{:width$}  {}  {}", election.name(*c), render_decimal(p, args.digits), render_fraction(p));
        }
        println!("algorithms: {}", tags.join(", "));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        seed: args.seed,
        trials: args.trials,
        max_candidates: args.max_candidates,
        max_voters: args.max_voters,
    };
    let outcomes = run_all(&cfg);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if args.json {
        let checks: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "passed": o.passed(),
                    "instances": o.instances,
                    "comparisons": o.comparisons,
                    "nontrivial": o.nontrivial,
                    "failures": o.failures.iter().map(|f| json!({
                        "seed": f.seed, "trial": f.trial, "detail": f.detail,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        print_json(&json!({ "seed": args.seed, "trials": args.trials, "checks": checks, "failed": failed }));
    } else {
        for o in &outcomes {
            println!(
                "{} {} ({} instances, {} comparisons, {} nontrivial)",
                if o.passed() { "PASS" } else { "FAIL" },
                o.name,
                o.instances,
                o.comparisons,
                o.nontrivial
            );
            for f in o.failures.iter().take(3) {
                println!("  seed {} trial {}: {}", f.seed, f.trial, f.detail);
            }
        }
        println!("{} checks, {failed} failed (seed {})", outcomes.len(), args.seed);
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn instance_files(n: usize, target: Target) -> Vec<String> {
    match (n, target) {
        (2, Target::TwoApprovalCcav) => vec!["I.election".into(), "I_prime.election".into()],
        (1, _) => vec!["instance.election".into()],
        _ => (0..n).map(|k| format!("I{k}.election")).collect(),
    }
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let text = read(&args.src)?;
    let source = match args.from {
        SourceKind::X3c => Source::X3C(parse_x3c(&text)?),
        SourceKind::Bipartite => Source::Graph(parse_graph(&text)?),
    };
    let artifact = generate(args.target, &source)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;
    let files = instance_files(artifact.instances.len(), args.target);
    let mut entries = Vec::new();
    for (inst, file) in artifact.instances.iter().zip(&files) {
        write(&args.out.join(file), &serialize_election(inst.election())?)?;
        entries.push(json!({
            "file": file,
            "rule": inst.rule().to_string(),
            "problem": inst.problem().to_string(),
            "designated": inst.election().name(inst.designated()),
            "budget": inst.budget(),
        }));
        println!("wrote {}", args.out.join(file).display());
    }
    let mut manifest = json!({
        "target": args.target.as_str(),
        "source": args.src.display().to_string(),
        "relationship": artifact.relationship.as_str(),
        "blocker_count": artifact.blocker_count,
        "instances": entries,
    });
    let mut verdict = Ok(());
    if args.certify {
        let cert = certify(&artifact, &Oracle::new(args.cap))?;
        let show = |v: &[ctlcount::count::Count]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        manifest["certification"] = json!({
            "passed": cert.passed,
            "expected": show(&cert.expected),
            "observed": show(&cert.observed),
            "detail": cert.detail,
        });
        println!(
            "certification {}: expected ({}), observed ({})",
            if cert.passed { "PASS" } else { "FAIL" },
            show(&cert.expected).join(","),
            show(&cert.observed).join(",")
        );
        if !cert.passed {
            verdict = Err(Failure::Certification(cert.detail));
        }
    }
    let manifest_path = args.out.join("manifest.json");
    write(&manifest_path, &serde_json::to_string_pretty(&manifest).expect("JSON values serialize"))?;
    println!("wrote {}", manifest_path.display());
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(a) => count(a),
        Command::Predict(a) => predict(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Module(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_oracle_cap() { 3 } else { 1 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("certification failed: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Checks(n)) => {
            eprintln!("{n} checks failed");
            ExitCode::from(1)
        }
    }
}

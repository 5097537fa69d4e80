//! Command-line surface: cluster search, partitioning, exact
//! conductance queries, brute-force oracles, graph generation, and
//! report re-verification.
//!
//! Exit codes: 0 on success (including an empty cut), 2 on input
//! errors, 3 when an internal output guarantee fails (which indicates a
//! bug, not bad input).

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nibble::edgelist::{parse_edge_list, write_edge_list, IdMap};
use nibble::error::NibbleError;
use nibble::gen::GenSpec;
use nibble::graph::{conductance, Graph, Vertex, VertexSet};
use nibble::nibble::nibble as run_nibble;
use nibble::oracle;
use nibble::params::{profile_by_name, validate_constants, ConstantsProfile};
use nibble::partition::{partition, RngState};
use nibble::report::{frac_string, input_digest, verify_report, RunReport};

#[derive(Parser)]
#[command(name = "nibble", version, about = "Local graph clustering and nearly linear-time partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Edge-list file ("u v" lines, "loop u k" for self-loops).
    #[arg(long, conflicts_with = "gen")]
    input: Option<String>,
    /// Generator spec: barbell:K, ring:R,K or planted:N,P_IN,P_OUT.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a low-conductance cluster from a seed vertex.
    Nibble {
        #[command(flatten)]
        input: InputArgs,
        /// Target conductance in (0, 1).
        #[arg(long)]
        phi: f64,
        /// Size scale; the cluster must reach volume 2^b.
        #[arg(long)]
        b: u32,
        /// Seed vertex (original id). When absent, one is drawn degree
        /// proportionally using --seed.
        #[arg(long)]
        start: Option<u64>,
        /// RNG seed; required unless --start pins the vertex and the
        /// input is not generated randomly.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "practical")]
        profile: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<String>,
    },
    /// Repeatedly remove random clusters to approximate a sparsest cut.
    Partition {
        #[command(flatten)]
        input: InputArgs,
        /// Target conductance of the returned cut, in (0, 1).
        #[arg(long)]
        theta: f64,
        /// Failure probability for the balance guarantee, in (0, 1).
        #[arg(long = "p-fail")]
        p_fail: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "practical")]
        profile: String,
        /// Run this many independent trials (seeds seed..seed+N-1)
        /// concurrently; reports print in trial order.
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long)]
        output: Option<String>,
    },
    /// Exact conductance of a vertex set, printed as a fraction.
    Conductance {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated vertex ids (original ids).
        #[arg(long)]
        set: String,
        /// Seed for randomized generator inputs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force ground truth on small graphs.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Dense walk: print the mass vector after this many steps from
        /// --start instead of the conductance minimum.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        start: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a generated graph as an edge list.
    Gen {
        /// Generator spec: barbell:K, ring:R,K or planted:N,P_IN,P_OUT.
        #[arg(long)]
        gen: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Re-check every claim in a previously written report.
    Verify {
        /// The report file to check.
        #[arg(long)]
        report: String,
        /// Input edge list; required when the report was produced from
        /// a file rather than a generator.
        #[arg(long)]
        input: Option<String>,
    },
}

enum CliError {
    Input(String),
    Guarantee(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guarantee(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guarantee(m) => m,
        }
    }
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn from_nibble_error(e: NibbleError) -> CliError {
    match e {
        NibbleError::Guarantee(g) => CliError::Guarantee(g.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

/// Loaded graph plus the provenance string recorded in reports.
struct LoadedGraph {
    graph: Graph,
    map: IdMap,
    input_tag: String,
}

fn load_graph(args: &InputArgs, seed: u64) -> Result<LoadedGraph, CliError> {
    match (&args.input, &args.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {path}: {e}")))?;
            let (graph, map) = parse_edge_list(&text).map_err(|e| input_err(e.to_string()))?;
            Ok(LoadedGraph { graph, map, input_tag: input_digest(text.as_bytes()) })
        }
        (None, Some(spec_text)) => {
            let spec = GenSpec::parse(spec_text).map_err(input_err)?;
            let (graph, _planted) = spec.build(seed);
            let map = IdMap::identity(graph.vertex_count());
            let tag = format!("gen:{}@seed={seed}", spec.canonical());
            Ok(LoadedGraph { graph, map, input_tag: tag })
        }
        _ => Err(input_err("exactly one of --input or --gen is required")),
    }
}

fn load_profile(name: &str) -> Result<ConstantsProfile, CliError> {
    let profile =
        profile_by_name(name).ok_or_else(|| input_err(format!("unknown profile '{name}'")))?;
    let violations = validate_constants(&profile);
    if !violations.is_empty() && !profile.waived {
        return Err(input_err(format!("profile '{name}' violates its constraints: {violations:?}")));
    }
    Ok(profile)
}

fn emit(output: &Option<String>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| input_err(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_nibble(
    input: InputArgs,
    phi: f64,
    b: u32,
    start: Option<u64>,
    seed: Option<u64>,
    profile_name: String,
    output: Option<String>,
) -> Result<(), CliError> {
    let loaded = load_graph(&input, seed.unwrap_or(0))?;
    let profile = load_profile(&profile_name)?;
    let start_compact = match start {
        Some(orig) => loaded
            .map
            .compact(orig)
            .ok_or_else(|| input_err(format!("start vertex {orig} not in graph")))?,
        None => {
            let s = seed.ok_or_else(|| input_err("--seed is required when --start is absent"))?;
            RngState::from_seed(s).draw_vertex(&loaded.graph)
        }
    };
    let out = run_nibble(&loaded.graph, start_compact, phi, b, &profile).map_err(from_nibble_error)?;
    let mut report = match &out.cut {
        Some(cut) => RunReport::from_cut(cut, &loaded.map, loaded.input_tag.clone(), profile.name),
        None => RunReport {
            input: loaded.input_tag.clone(),
            algorithm: "nibble".to_string(),
            profile: profile.name.to_string(),
            conductance: "1/1".to_string(),
            balance: "0/1".to_string(),
            ..RunReport::default()
        },
    };
    report.phi = Some(phi);
    report.b = Some(b);
    report.seed = seed;
    report.start = Some(loaded.map.original(start_compact));
    report.work_units = Some(out.stats.work_units);
    emit(&output, &report.serialize())
}

fn cmd_partition(
    input: InputArgs,
    theta: f64,
    p_fail: f64,
    seed: u64,
    profile_name: String,
    trials: u32,
    output: Option<String>,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(input_err("--trials must be at least 1"));
    }
    let profile = load_profile(&profile_name)?;
    let run_one = |trial_seed: u64| -> Result<String, CliError> {
        let loaded = load_graph(&input, trial_seed)?;
        let mut rng = RngState::from_seed(trial_seed);
        let (cut, trace) =
            partition(&loaded.graph, theta, p_fail, &profile, &mut rng).map_err(from_nibble_error)?;
        let mut report = RunReport::from_cut(&cut, &loaded.map, loaded.input_tag.clone(), profile.name);
        report.theta = Some(theta);
        report.p_fail = Some(p_fail);
        report.seed = Some(trial_seed);
        report.stop_reason = Some(trace.stop_reason.as_str().to_string());
        Ok(report.serialize())
    };
    let texts: Vec<Result<String, CliError>> = if trials == 1 {
        vec![run_one(seed)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..trials)
                .map(|i| scope.spawn(move || run_one(seed + i as u64)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
        })
    };
    let mut combined = String::new();
    for (i, text) in texts.into_iter().enumerate() {
        if i > 0 {
            combined.push('\n');
        }
        combined.push_str(&text?);
    }
    emit(&output, &combined)
}

fn parse_set(loaded: &LoadedGraph, set: &str) -> Result<VertexSet, CliError> {
    let mut members: Vec<Vertex> = Vec::new();
    for token in set.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let orig: u64 =
            token.parse().map_err(|e| input_err(format!("bad vertex id '{token}': {e}")))?;
        let v = loaded
            .map
            .compact(orig)
            .ok_or_else(|| input_err(format!("vertex {orig} not in graph")))?;
        members.push(v);
    }
    VertexSet::from_unsorted(&loaded.graph, members).map_err(|e| input_err(e.to_string()))
}

fn cmd_conductance(input: InputArgs, set: String, seed: u64) -> Result<(), CliError> {
    let loaded = load_graph(&input, seed)?;
    let s = parse_set(&loaded, &set)?;
    let phi = conductance(&loaded.graph, &s).map_err(|e| input_err(e.to_string()))?;
    println!("{}", frac_string(&phi));
    Ok(())
}

fn cmd_oracle(
    input: InputArgs,
    steps: Option<u64>,
    start: Option<u64>,
    seed: u64,
) -> Result<(), CliError> {
    let loaded = load_graph(&input, seed)?;
    match steps {
        Some(t) => {
            let orig = start.ok_or_else(|| input_err("--start is required with --steps"))?;
            let v = loaded
                .map
                .compact(orig)
                .ok_or_else(|| input_err(format!("start vertex {orig} not in graph")))?;
            let mass = oracle::exact_walk(&loaded.graph, v, t).map_err(|e| input_err(e.to_string()))?;
            let mut out = String::new();
            for (u, m) in mass.iter().enumerate() {
                if *m > 0.0 {
                    let _ = writeln!(out, "{} {}", loaded.map.original(u as Vertex), m);
                }
            }
            print!("{out}");
        }
        None => {
            let (s, phi) =
                oracle::min_conductance_exhaustive(&loaded.graph).map_err(|e| input_err(e.to_string()))?;
            let members: Vec<String> =
                s.members().iter().map(|&v| loaded.map.original(v).to_string()).collect();
            println!("min-conductance = {}", frac_string(&phi));
            println!("set = {}", members.join(" "));
        }
    }
    Ok(())
}

fn cmd_gen(spec_text: String, seed: u64, output: Option<String>) -> Result<(), CliError> {
    let spec = GenSpec::parse(&spec_text).map_err(input_err)?;
    let (graph, planted) = spec.build(seed);
    let map = IdMap::identity(graph.vertex_count());
    let mut text = format!("# {}@seed={seed}\n", spec.canonical());
    if let Some(s) = &planted {
        let ids: Vec<String> = s.members().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "# planted {}", ids.join(" "));
    }
    text.push_str(&write_edge_list(&graph, &map));
    emit(&output, &text)
}

fn cmd_verify(report_path: String, input: Option<String>) -> Result<(), CliError> {
    let text = fs::read_to_string(&report_path)
        .map_err(|e| input_err(format!("cannot read {report_path}: {e}")))?;
    let mut ok = true;
    for chunk in text.split("\n\n").filter(|c| !c.trim().is_empty()) {
        let report = RunReport::parse(chunk).map_err(|e| input_err(e.to_string()))?;
        let (graph, map) = if let Some(rest) = report.input.strip_prefix("gen:") {
            let (spec_text, seed_text) = rest
                .rsplit_once("@seed=")
                .ok_or_else(|| input_err(format!("malformed generated-input tag '{}'", report.input)))?;
            let seed: u64 =
                seed_text.parse().map_err(|e| input_err(format!("bad seed '{seed_text}': {e}")))?;
            let spec = GenSpec::parse(spec_text).map_err(input_err)?;
            let (graph, _) = spec.build(seed);
            let map = IdMap::identity(graph.vertex_count());
            (graph, map)
        } else {
            let path = input
                .as_ref()
                .ok_or_else(|| input_err("--input is required for file-based reports"))?;
            let bytes = fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {path}: {e}")))?;
            if input_digest(bytes.as_bytes()) != report.input {
                return Err(input_err(format!(
                    "input digest mismatch: {path} does not match the report"
                )));
            }
            parse_edge_list(&bytes).map_err(|e| input_err(e.to_string()))?
        };
        match verify_report(&report, &graph, &map) {
            Ok(()) => println!("{}: ok", report.algorithm),
            Err(e) => {
                ok = false;
                println!("{}: FAILED ({e})", report.algorithm);
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Guarantee("report verification failed".to_string()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Nibble { input, phi, b, start, seed, profile, output } => {
            cmd_nibble(input, phi, b, start, seed, profile, output)
        }
        Command::Partition { input, theta, p_fail, seed, profile, trials, output } => {
            cmd_partition(input, theta, p_fail, seed, profile, trials, output)
        }
        Command::Conductance { input, set, seed } => cmd_conductance(input, set, seed),
        Command::Oracle { input, steps, start, seed } => cmd_oracle(input, steps, start, seed),
        Command::Gen { gen, seed, output } => cmd_gen(gen, seed, output),
        Command::Verify { report, input } => cmd_verify(report, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

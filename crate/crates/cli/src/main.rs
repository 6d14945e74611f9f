mod config;
mod error;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use affinet_core::affinity::{self, affinity_to_graph, DegreeMode, Provenance, Symmetrization};
use affinet_core::community::{self, Algorithm, DetectConfig, LouvainConfig, Partition, PathMetric};
use affinet_core::experiments::{
    self, builtin_dataset, run_baseline, run_sweep_on, ReportFormat, SweepConfig, DATASET_NAMES,
};
use affinet_core::graph::{NodeLabels, WeightedGraph};
use affinet_core::io::{edgelist_string, load_graph_file, parse_partition_csv};
use affinet_core::metrics::{modularity, nmi};
use affinet_core::AffinityFn;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::parse_config;
use crate::error::CliError;

/// Affinity networks and modularity-based community detection.
///
/// Exit codes: 0 success, 1 invalid input or flags, 2 I/O failure,
/// 3 domain error (for example a graph without edges).
#[derive(Debug, Parser)]
#[command(name = "affinet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an affinity matrix (or its thresholded edge list) for a graph.
    Affinity(AffinityArgs),
    /// Partition a graph (optionally its affinity network) into communities.
    Detect(DetectArgs),
    /// Sweep (alpha, beta) combinations over benchmark datasets and write CSV.
    Sweep(SweepArgs),
    /// Compare a partition against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Graph file (`.gml` or whitespace edge list) or a builtin dataset name
    /// (zachary, dolphin, polbooks).
    #[arg(long = "in", value_name = "PATH|DATASET")]
    input: String,
    /// Replace every edge weight with 1 before anything else.
    #[arg(long)]
    binarize: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AffinityFormat {
    /// Dense CSV matrix with node labels as header and first column.
    Matrix,
    /// Symmetrized, thresholded edge list (`u v w`).
    Edgelist,
}

#[derive(Debug, Args)]
struct AffinityArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Affinity spec: bf, bcf, mach, `bf(sym=mean)` or
    /// `combine(bf,bcf,alpha=0.25,beta=0.50,sym=mean)`.
    #[arg(long = "fn", value_name = "SPEC")]
    function: String,
    /// Symmetrization (mean, max, min). Defaults to the spec's `sym`, or to
    /// mean for edge-list output; a matrix without either stays asymmetric.
    #[arg(long)]
    sym: Option<String>,
    /// Centrality used by the Machiavelli affinity (degree or strength).
    #[arg(long, default_value = "degree")]
    degree: String,
    /// Output layout.
    #[arg(long, value_enum, default_value = "matrix")]
    format: AffinityFormat,
    /// Edge-list output keeps only affinities above this value.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    /// louvain, girvan_newman or greedy.
    #[arg(long)]
    algo: String,
    /// Seed for the Louvain node order.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Girvan-Newman path length: inverse-weight or hops.
    #[arg(long, default_value = "inverse-weight")]
    path_metric: String,
    /// Run on the affinity network built from this spec instead of the graph.
    #[arg(long = "fn", value_name = "SPEC")]
    function: Option<String>,
    /// Symmetrization for --fn when the spec has none (mean, max, min).
    #[arg(long, default_value = "mean")]
    sym: String,
    /// Centrality used by the Machiavelli affinity (degree or strength).
    #[arg(long, default_value = "degree")]
    degree: String,
    /// Affinities at or below this value are not edges.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Partition CSV (`node_label,community_id`); `-` for standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dendrogram CSV for girvan_newman and greedy.
    #[arg(long)]
    dendrogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat `key = value` file; keys mirror the flag names below. Flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated dataset names [default: zachary].
    #[arg(long)]
    datasets: Option<String>,
    /// Comma-separated algorithms or `all` [default: all].
    #[arg(long)]
    algos: Option<String>,
    /// The two combined affinity functions, `f1,f2` [default: bf,bcf].
    #[arg(long)]
    pair: Option<String>,
    /// Grid step for alpha and beta, in (0, 1] [default: 0.05].
    #[arg(long)]
    step: Option<f64>,
    /// Symmetrization: mean, max or min [default: mean].
    #[arg(long)]
    sym: Option<String>,
    /// Graph ranked in the markdown summary: affinity or adjacency [default: affinity].
    #[arg(long)]
    target: Option<String>,
    /// Seed for the Louvain node order [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads [default: available cores]. Output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Centrality used by the Machiavelli affinity [default: degree].
    #[arg(long)]
    degree: Option<String>,
    /// Girvan-Newman path length: inverse-weight or hops [default: inverse-weight].
    #[arg(long)]
    path_metric: Option<String>,
    /// Affinities at or below this value are not edges [default: 0].
    #[arg(long)]
    threshold: Option<f64>,
    /// Also run every algorithm on the raw graphs; these rows come first.
    #[arg(long)]
    baseline: bool,
    /// Fill the runtime_ms column (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Directory holding dolphins.gml and polbooks.gml [default: $AFFINET_DATA_DIR or ./data].
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// CSV output file; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a markdown summary of the best results here.
    #[arg(long)]
    markdown: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Partition CSV (`node_label,community_id`).
    #[arg(long)]
    partition: PathBuf,
    /// Ground truth: a partition CSV or a builtin dataset name.
    #[arg(long, value_name = "PATH|DATASET")]
    truth: String,
    /// Graph for modularity (file or dataset name). Defaults to the dataset
    /// graph when --truth names one.
    #[arg(long, value_name = "PATH|DATASET")]
    graph: Option<String>,
}

fn parse<T: FromStr>(what: &str, value: &str) -> Result<T, CliError>
where
    T::Err: Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Invalid(format!("--{what}: {e}")))
}

fn parse_list<T: FromStr>(what: &str, value: &str) -> Result<Vec<T>, CliError>
where
    T::Err: Display,
{
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(what, s))
        .collect()
}

fn parse_algorithms(value: &str) -> Result<Vec<Algorithm>, CliError> {
    if value.trim() == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut algos: Vec<Algorithm> = parse_list("algos", value)?;
    algos.sort();
    algos.dedup();
    Ok(algos)
}

/// Writes to `path`, or to `stdout` when the path is absent or `-`.
fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => stdout.write_all(bytes).map_err(CliError::from),
    }
}

fn load_input(spec: &str, binarize: bool) -> Result<(WeightedGraph, Option<NodeLabels>), CliError> {
    let path = Path::new(spec);
    let (g, labels) = if path.exists() {
        load_graph_file(path).map_err(|e| match e {
            affinet_core::GraphError::Io(io) => CliError::Io(format!("{spec}: {io}")),
            other => CliError::from(other),
        })?
    } else if DATASET_NAMES.contains(&spec) {
        let d = builtin_dataset(spec)?;
        (d.graph, Some(d.labels))
    } else {
        return Err(CliError::Io(format!(
            "{spec}: no such file (builtin datasets: {})",
            DATASET_NAMES.join(", ")
        )));
    };
    Ok((if binarize { g.binarized() } else { g }, labels))
}

fn cmd_affinity(args: AffinityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut provenance: Provenance = parse("fn", &args.function)?;
    let degree: DegreeMode = parse("degree", &args.degree)?;
    if let Some(sym) = &args.sym {
        let sym: Symmetrization = parse("sym", sym)?;
        match provenance.sym {
            Some(existing) if existing != sym => {
                return Err(CliError::Invalid(format!(
                    "--sym {sym} conflicts with sym={existing} in --fn"
                )))
            }
            _ => provenance.sym = Some(sym),
        }
    }
    if matches!(args.format, AffinityFormat::Edgelist) && provenance.sym.is_none() {
        provenance.sym = Some(Symmetrization::Mean);
    }
    let (g, _) = load_input(&args.input.input, args.input.binarize)?;
    let f = affinity::build(&g, &provenance, degree)?;
    let text = match args.format {
        AffinityFormat::Matrix => f.to_csv(Some(g.labels())),
        AffinityFormat::Edgelist => {
            let net = affinity_to_graph(&f, &g, args.threshold)?;
            format!("# {}\n{}", f.provenance(), edgelist_string(&net)?)
        }
    };
    write_output(args.out.as_deref(), text.as_bytes(), stdout)
}

fn cmd_detect(args: DetectArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let algorithm: Algorithm = parse("algo", &args.algo)?;
    let cfg = DetectConfig {
        louvain: LouvainConfig::with_seed(args.seed),
        path_metric: parse::<PathMetric>("path-metric", &args.path_metric)?,
    };
    let provenance = match &args.function {
        Some(spec) => {
            let mut p: Provenance = parse("fn", spec)?;
            p.sym.get_or_insert(parse("sym", &args.sym)?);
            Some(p)
        }
        None => None,
    };
    let degree: DegreeMode = parse("degree", &args.degree)?;
    let (g, labels) = load_input(&args.input.input, args.input.binarize)?;
    let target = match &provenance {
        Some(p) => affinity_to_graph(&affinity::build(&g, p, degree)?, &g, args.threshold)?,
        None => g.clone(),
    };

    let partition = match algorithm {
        Algorithm::Louvain => community::louvain(&target, &cfg.louvain)?,
        Algorithm::GirvanNewman => {
            let d = community::girvan_newman(&target, cfg.path_metric)?;
            if let Some(path) = &args.dendrogram {
                write_output(Some(path), d.to_csv().as_bytes(), stdout)?;
            }
            community::best_partition(&d)?
        }
        Algorithm::Greedy => {
            let run = community::greedy_modularity_run(&target)?;
            if let Some(path) = &args.dendrogram {
                write_output(Some(path), run.dendrogram.to_csv().as_bytes(), stdout)?;
            }
            community::best_partition(&run.dendrogram)?
        }
    };

    let mut summary = format!(
        "algorithm: {algorithm}\nk: {}\nmodularity: {:.6}\n",
        partition.k(),
        modularity(&target, &partition)?
    );
    if let Some(p) = &provenance {
        summary += &format!("affinity: {p}\nmodularity_adjacency: {:.6}\n", modularity(&g, &partition)?);
    }
    if let Some(labels) = &labels {
        summary += &format!("nmi: {:.6}\n", nmi(&partition, &Partition::from(labels))?);
    }
    let to_stdout = args.out.as_deref() == Some(Path::new("-"));
    if to_stdout {
        eprint!("{summary}");
    } else {
        stdout.write_all(summary.as_bytes())?;
    }
    if let Some(out) = &args.out {
        write_output(Some(out), partition.to_csv(&g).as_bytes(), stdout)?;
    }
    Ok(())
}

/// Flag value, else config-file value, else the default.
fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, CliError>
where
    T::Err: Display,
{
    match (flag, file.get(key)) {
        (Some(v), _) => Ok(v),
        (None, Some(text)) => parse(key, text),
        (None, None) => Ok(default),
    }
}

fn pick_flag(flag: bool, file: &BTreeMap<String, String>, key: &str) -> Result<bool, CliError> {
    Ok(flag || pick(None, file, key, false)?)
}

fn sweep_config(args: &SweepArgs) -> Result<(SweepConfig, bool), CliError> {
    let file = match &args.config {
        Some(path) => parse_config(
            &fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )?,
        None => BTreeMap::new(),
    };
    let defaults = SweepConfig::default();
    let datasets = pick(args.datasets.clone(), &file, "datasets", "zachary".to_owned())?;
    let algos = pick(args.algos.clone(), &file, "algos", "all".to_owned())?;
    let pair = pick(args.pair.clone(), &file, "pair", "bf,bcf".to_owned())?;
    let pair: Vec<AffinityFn> = parse_list("pair", &pair)?;
    let [first, second] = pair[..] else {
        return Err(CliError::Invalid("--pair needs exactly two affinity functions".into()));
    };
    let jobs = match (args.jobs, file.get("jobs")) {
        (Some(j), _) => Some(j),
        (None, Some(text)) => Some(parse("jobs", text)?),
        (None, None) => None,
    };
    let data_dir = match (&args.data_dir, file.get("data-dir")) {
        (Some(d), _) => Some(d.clone()),
        (None, Some(d)) => Some(PathBuf::from(d)),
        (None, None) => None,
    };
    let cfg = SweepConfig {
        datasets: parse_list::<String>("datasets", &datasets)?
            .into_iter()
            .map(|d| d.trim().to_owned())
            .collect(),
        algorithms: parse_algorithms(&algos)?,
        pair: (first, second),
        step: pick(args.step, &file, "step", defaults.step)?,
        sym: parse("sym", &pick(args.sym.clone(), &file, "sym", "mean".to_owned())?)?,
        target: parse("target", &pick(args.target.clone(), &file, "target", "affinity".to_owned())?)?,
        seed: pick(args.seed, &file, "seed", defaults.seed)?,
        jobs,
        degree: parse("degree", &pick(args.degree.clone(), &file, "degree", "degree".to_owned())?)?,
        path_metric: parse(
            "path-metric",
            &pick(args.path_metric.clone(), &file, "path-metric", "inverse-weight".to_owned())?,
        )?,
        threshold: pick(args.threshold, &file, "threshold", defaults.threshold)?,
        timing: pick_flag(args.timing, &file, "timing")?,
        data_dir,
    };
    cfg.validate()?;
    Ok((cfg, pick_flag(args.baseline, &file, "baseline")?))
}

fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (cfg, with_baseline) = sweep_config(&args)?;
    let bundles = experiments::load_datasets(&cfg)?;
    let mut baseline = Vec::new();
    if with_baseline {
        let detect_cfg = cfg.detect_config();
        for d in &bundles {
            baseline.extend(run_baseline(d, &cfg.algorithms, &detect_cfg, cfg.timing)?);
        }
        experiments::sort_records(&mut baseline);
    }
    let records = run_sweep_on(&bundles, &cfg)?;
    log::info!("{} sweep records", records.len());

    let mut csv = Vec::new();
    experiments::write_report(&records, &baseline, ReportFormat::Csv, &mut csv)?;
    write_output(args.out.as_deref(), &csv, stdout)?;
    if let Some(path) = &args.markdown {
        let mut md = Vec::new();
        experiments::write_report(&records, &baseline, ReportFormat::Markdown { target: cfg.target }, &mut md)?;
        write_output(Some(path), &md, stdout)?;
    }
    Ok(())
}

fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_partition_csv(&text)?)
}

fn cmd_eval(args: EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let pairs = read_pairs(&args.partition)?;
    let truth_path = Path::new(&args.truth);
    let (nodes, truth, mut graph) = if !truth_path.exists() && DATASET_NAMES.contains(&args.truth.as_str()) {
        let d = builtin_dataset(&args.truth)?;
        (d.graph.labels().to_vec(), Partition::from(&d.labels), Some(d.graph))
    } else {
        let truth_pairs = read_pairs(truth_path)?;
        let nodes: Vec<String> = truth_pairs.iter().map(|(n, _)| n.clone()).collect();
        (nodes.clone(), Partition::from_labelled(&truth_pairs, &nodes)?, None)
    };
    if let Some(spec) = &args.graph {
        graph = Some(load_input(spec, false)?.0);
    }
    let found = Partition::from_labelled(&pairs, &nodes)?;
    writeln!(stdout, "nmi: {:.6}", nmi(&found, &truth)?)?;
    if let Some(g) = graph {
        let on_graph = Partition::from_labelled(&pairs, g.labels())?;
        writeln!(stdout, "modularity: {:.6}", modularity(&g, &on_graph)?)?;
    }
    Ok(())
}

fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Affinity(args) => cmd_affinity(args, stdout),
        Command::Detect(args) => cmd_detect(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
        Command::Eval(args) => cmd_eval(args, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Errors are reported on standard error.
fn execute<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and --version are successes; every usage error is exit 1
            return if e.exit_code() == 0 { 0 } else { 1 };
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = execute(std::env::args_os(), &mut io::stdout().lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests;

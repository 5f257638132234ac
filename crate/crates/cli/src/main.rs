//! `tanner-lo`: command-line front end for graph I/O, LLR sampling,
//! local-optimality certificates, hierarchy harnesses, growth experiments
//! and the enumeration oracle.
//!
//! Exit codes: 0 success, 1 a violation or mismatch was found, 2 usage or
//! input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tanner_lo::certify::{
    certify_lo, certify_strong_lo, run_oracle_suite, Certificate, CertifyOptions,
    OracleSuiteConfig,
};
use tanner_lo::channel::{read_llr_csv, sample_llr, write_llr_csv, ChannelKind, ChannelSpec};
use tanner_lo::devtree::WeightVector;
use tanner_lo::experiments::{
    estimate_seconds, run_growth_experiment, write_csv, GrowthConfig, DEFAULT_H_GRID,
    DEFAULT_WORK_CAP,
};
use tanner_lo::graph::{generate_regular, load_alist, load_local_codes, TannerGraph};
use tanner_lo::hierarchy::{
    exhaustive_signs, monte_carlo, verify_ml_sufficiency, HarnessCheck, InclusionReport,
};
use tanner_lo::NumericMode;

#[derive(Parser, Debug)]
#[command(name = "tanner-lo", version, about = "Local-optimality certificates for Tanner codes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exact rational arithmetic instead of double precision.
    #[arg(long, global = true)]
    exact: bool,
    /// Output directory; results and a manifest.json are written there.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Scale BSC LLRs to ±1 (decisions are unchanged).
    #[arg(long, global = true)]
    normalize_llr: bool,
}

#[derive(Args, Debug, Clone)]
struct GraphArg {
    /// Tanner graph in alist format.
    #[arg(long)]
    graph: PathBuf,
    /// Optional local-code sidecar (one line per check).
    #[arg(long)]
    local_codes: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate or inspect Tanner graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Sample LLR vectors for a codeword.
    Sample {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "bsc:0.04")]
        channel: String,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// `zero`, a bit string, or a file holding one.
        #[arg(long, default_value = "zero")]
        codeword: String,
    },
    /// Certify a codeword as (strongly) locally optimal.
    Certify(CertifyArgs),
    /// Falsification harness for one inclusion result.
    Hierarchy(HierarchyArgs),
    /// Growth of |LO| and |NLO| with the height.
    Experiment(ExperimentArgs),
    /// Compare the dynamic program with brute-force enumeration.
    Oracle {
        #[arg(long, default_value_t = 50)]
        graphs: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_h: usize,
        #[arg(long, default_value_t = 100)]
        llrs: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 20_000)]
        tree_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Random (dl, dr)-regular graph with a girth floor.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dl: usize,
        #[arg(long, default_value_t = 6)]
        dr: usize,
        #[arg(long, default_value_t = 4)]
        min_girth: usize,
    },
    /// Print size, degrees, girth, d* and dimension.
    Info {
        #[command(flatten)]
        graph: GraphArg,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// `zero`, a bit string, or a file holding one.
    #[arg(long, default_value = "zero")]
    codeword: String,
    /// Channel to sample from (ignored with --llr).
    #[arg(long, default_value = "bsc:0.04")]
    channel: String,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    /// LLR CSV as written by `sample`; the row is chosen by --trial.
    #[arg(long)]
    llr: Option<PathBuf>,
    #[arg(long)]
    h: usize,
    /// `unit`, `geometric:<ρ>` or a comma list.
    #[arg(long, default_value = "unit")]
    w: String,
    /// Extension factors α; certifies at height k·h with α_1 w ∘ ... ∘ α_k w.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Strong local optimality (reduced trees).
    #[arg(long)]
    strong: bool,
    /// Rebuild a minimizing tree when refuted.
    #[arg(long)]
    witness: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    /// LO at d implies LO at d + 1 along a chain of degrees.
    Degree,
    /// Strong LO at h implies strong LO at k·h under extensions.
    Height,
    /// Strong LO implies LO.
    Strong,
    /// Certified (d <= d*) implies unique ML codeword.
    Ml,
}

#[derive(Args, Debug)]
struct HierarchyArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum)]
    check: CheckKind,
    #[arg(long, default_value = "bsc:0.05")]
    channel: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 4)]
    h: usize,
    #[arg(long, default_value = "unit")]
    w: String,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Top of the degree chain (default: minimum check degree).
    #[arg(long)]
    d_max: Option<usize>,
    /// Extension factors for the height check; repeat for several k.
    #[arg(long)]
    alpha: Vec<String>,
    /// Sweep all ±1 sign patterns instead of sampling (N <= 20).
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_delimiter = ',', default_value = "0.04")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, value_delimiter = ',')]
    h: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value = "unit")]
    w: String,
    /// Record wall time per ensemble (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Raise the work guard (elementary steps).
    #[arg(long, default_value_t = DEFAULT_WORK_CAP)]
    work_cap: u128,
    /// Print the runtime estimate and stop.
    #[arg(long)]
    estimate_only: bool,
}

/// Outcome of a subcommand: its resolved configuration, produced files and
/// whether a violation was found.
struct Run {
    config: Value,
    outputs: Vec<String>,
    violation: bool,
}

fn load_graph(arg: &GraphArg) -> Result<TannerGraph> {
    let text = fs::read_to_string(&arg.graph)
        .with_context(|| format!("reading {}", arg.graph.display()))?;
    let g = load_alist(&text).with_context(|| format!("parsing {}", arg.graph.display()))?;
    match &arg.local_codes {
        Some(path) => {
            let side = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(load_local_codes(&g, &side)?)
        }
        None => Ok(g),
    }
}

fn parse_codeword(spec: &str, n: usize) -> Result<Vec<u8>> {
    if spec == "zero" {
        return Ok(vec![0; n]);
    }
    let text = if Path::new(spec).is_file() {
        fs::read_to_string(spec)?
    } else {
        spec.to_string()
    };
    let bits: Vec<u8> = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(anyhow!("codeword symbol {other:?} is not a bit")),
        })
        .collect::<Result<_>>()?;
    if bits.len() != n {
        bail!("codeword has {} bits, graph has {n} variables", bits.len());
    }
    Ok(bits)
}

fn channel_spec(text: &str, common: &Common) -> Result<ChannelSpec> {
    let kind: ChannelKind = text.parse()?;
    Ok(ChannelSpec::new(kind, common.seed)?.normalized(common.normalize_llr))
}

fn weights(w: &str, h: usize, alpha: Option<&str>) -> Result<WeightVector> {
    let base = WeightVector::parse(w, Some(h))?;
    match alpha {
        Some(a) => Ok(base.extend(WeightVector::parse(a, None)?.levels())?),
        None => Ok(base),
    }
}

fn mode(common: &Common) -> NumericMode {
    if common.exact {
        NumericMode::Exact
    } else {
        NumericMode::Float
    }
}

fn announce(config: &Value) {
    eprintln!("config: {config}");
}

/// Writes `contents` to `<out>/<name>` if an output directory was given,
/// otherwise to stdout.
fn emit(common: &Common, name: &str, contents: &[u8], outputs: &mut Vec<String>) -> Result<()> {
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
            outputs.push(name.to_string());
        }
        None => io::stdout().write_all(contents)?,
    }
    Ok(())
}

fn common_json(common: &Common) -> Value {
    json!({
        "seed": common.seed,
        "exact": common.exact,
        "normalize_llr": common.normalize_llr,
        "jobs": common.jobs.unwrap_or_else(rayon::current_num_threads),
    })
}

fn graph_gen(common: &Common, n: usize, dl: usize, dr: usize, min_girth: usize) -> Result<Run> {
    let config = json!({"command": "graph gen", "n": n, "dl": dl, "dr": dr, "min_girth": min_girth, "common": common_json(common)});
    announce(&config);
    let g = generate_regular(n, dl, dr, min_girth, common.seed)?;
    let mut outputs = Vec::new();
    emit(common, "graph.alist", g.to_alist().as_bytes(), &mut outputs)?;
    Ok(Run { config, outputs, violation: false })
}

fn graph_info(common: &Common, arg: &GraphArg) -> Result<Run> {
    let config = json!({"command": "graph info", "graph": arg.graph, "local_codes": arg.local_codes, "common": common_json(common)});
    announce(&config);
    let g = load_graph(arg)?;
    let info = json!({
        "variables": g.num_variables(),
        "checks": g.num_checks(),
        "edges": g.num_edges(),
        "regular_degrees": g.regular_degrees(),
        "min_check_degree": g.min_check_degree(),
        "max_check_degree": g.max_check_degree(),
        "girth": g.girth(),
        "d_star": g.min_local_distance(),
        "spc_only": g.has_only_spc(),
        "dimension": g.dimension(),
    });
    let mut outputs = Vec::new();
    emit(common, "info.json", format!("{info:#}\n").as_bytes(), &mut outputs)?;
    Ok(Run { config, outputs, violation: false })
}

fn sample(common: &Common, graph: &GraphArg, channel: &str, trials: u64, codeword: &str) -> Result<Run> {
    let spec = channel_spec(channel, common)?;
    let config = json!({"command": "sample", "graph": graph.graph, "channel": spec, "trials": trials, "codeword": codeword, "common": common_json(common)});
    announce(&config);
    let g = load_graph(graph)?;
    let x = parse_codeword(codeword, g.num_variables())?;
    let rows = (0..trials)
        .map(|t| sample_llr(&x, &spec, t))
        .collect::<tanner_lo::Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    write_llr_csv(&mut buf, &rows)?;
    let mut outputs = Vec::new();
    emit(common, "llr.csv", &buf, &mut outputs)?;
    Ok(Run { config, outputs, violation: false })
}

fn certify(common: &Common, args: &CertifyArgs) -> Result<Run> {
    let w = weights(&args.w, args.h, args.alpha.as_deref())?;
    let spec = channel_spec(&args.channel, common)?;
    let config = json!({
        "command": "certify",
        "graph": args.graph.graph,
        "codeword": args.codeword,
        "llr_source": match &args.llr {
            Some(path) => json!({"file": path, "row_trial": args.trial}),
            None => json!({"channel": spec, "trial": args.trial}),
        },
        "h": w.h(),
        "w": w.to_string(),
        "d": args.d,
        "strong": args.strong,
        "common": common_json(common),
    });
    announce(&config);
    let g = load_graph(&args.graph)?;
    let x = parse_codeword(&args.codeword, g.num_variables())?;
    let llr = match &args.llr {
        Some(path) => {
            let rows = read_llr_csv(fs::File::open(path)?)?;
            rows.into_iter()
                .find(|(t, _)| *t == args.trial)
                .map(|(_, v)| v)
                .ok_or_else(|| anyhow!("no row with trial {} in {}", args.trial, path.display()))?
        }
        None => sample_llr(&x, &spec, args.trial)?.values,
    };
    let mut opts = CertifyOptions { mode: mode(common), ..CertifyOptions::default() };
    if args.witness {
        opts = opts.with_witness();
    }
    let cert: Certificate = if args.strong {
        certify_strong_lo(&g, &x, &llr, &w, args.d, &opts)?
    } else {
        certify_lo(&g, &x, &llr, &w, args.d, &opts)?
    };
    let mut text = format!("{}\n{}\n", Certificate::RECORD_HEADER, cert.record());
    if cert.marginal {
        eprintln!("note: |min cost| < 1e-9; rerun with --exact for a rigorous decision");
    }
    let mut outputs = Vec::new();
    if let Some(tree) = &cert.witness_tree {
        match &common.out {
            Some(_) => emit(common, "witness.dot", tree.to_dot().as_bytes(), &mut outputs)?,
            None => text.push_str(&tree.to_dot()),
        }
    }
    emit(common, "certificate.csv", text.as_bytes(), &mut outputs)?;
    Ok(Run { config, outputs, violation: false })
}

fn hierarchy(common: &Common, args: &HierarchyArgs) -> Result<Run> {
    let spec = channel_spec(&args.channel, common)?;
    let w = WeightVector::parse(&args.w, Some(args.h))?;
    let g = load_graph(&args.graph)?;
    let d_max = args.d_max.unwrap_or_else(|| g.min_check_degree());
    let alphas = args
        .alpha
        .iter()
        .map(|a| Ok(WeightVector::parse(a, None)?.levels().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let config = json!({
        "command": "hierarchy",
        "graph": args.graph.graph,
        "check": format!("{:?}", args.check).to_lowercase(),
        "channel": spec,
        "trials": args.trials,
        "exhaustive": args.exhaustive,
        "h": args.h,
        "w": w.to_string(),
        "d": args.d,
        "d_max": d_max,
        "alpha": args.alpha,
        "common": common_json(common),
    });
    announce(&config);
    let m = mode(common);
    let report: InclusionReport = if args.check == CheckKind::Ml {
        if args.exhaustive {
            bail!("--exhaustive is not available for the ML check");
        }
        verify_ml_sufficiency(&g, args.trials, &spec, &w, args.d, m)?
    } else {
        let check = match args.check {
            CheckKind::Degree => HarnessCheck::DegreeChain { d_range: (args.d..=d_max).collect() },
            CheckKind::Height => {
                if alphas.is_empty() {
                    bail!("the height check needs at least one --alpha");
                }
                HarnessCheck::HeightChain { alphas, d: args.d }
            }
            CheckKind::Strong => HarnessCheck::StrongImpliesLo { d: args.d },
            CheckKind::Ml => unreachable!(),
        };
        if args.exhaustive {
            exhaustive_signs(&g, &w, &check, m)?
        } else {
            monte_carlo(&g, &spec, args.trials, &w, &check, m)?
        }
    };
    println!("{}", report.summary());
    let mut outputs = Vec::new();
    if common.out.is_some() {
        let summary = format!("{}\n{}\n", InclusionReport::CSV_HEADER, report.csv_row());
        emit(common, "summary.csv", summary.as_bytes(), &mut outputs)?;
        emit(common, "violations.csv", report.violations_csv().as_bytes(), &mut outputs)?;
    } else if !report.is_clean() {
        print!("{}", report.violations_csv());
    }
    Ok(Run { config, outputs, violation: !report.is_clean() })
}

fn experiment(common: &Common, args: &ExperimentArgs) -> Result<Run> {
    let h_grid = if args.h.is_empty() { DEFAULT_H_GRID.to_vec() } else { args.h.clone() };
    let cfg = GrowthConfig {
        p_list: args.p.clone(),
        trials: args.trials,
        h_grid,
        d: args.d,
        seed: common.seed,
        weights: args.w.clone(),
        normalize: common.normalize_llr,
        record_timing: args.timing,
        work_cap: args.work_cap,
    };
    let config = json!({
        "command": "experiment",
        "graph": args.graph.graph,
        "p": cfg.p_list,
        "trials": cfg.trials,
        "h_grid": cfg.h_grid,
        "d": cfg.d,
        "w": cfg.weights,
        "normalize_llr": cfg.normalize,
        "record_timing": cfg.record_timing,
        "common": common_json(common),
    });
    announce(&config);
    let g = load_graph(&args.graph)?;
    let estimate = estimate_seconds(&g, &cfg)?;
    eprintln!("estimated runtime: {estimate:.1}s");
    if args.estimate_only {
        return Ok(Run { config, outputs: Vec::new(), violation: false });
    }
    let report = run_growth_experiment(&g, &cfg)?;
    for s in &report.summaries {
        eprintln!(
            "p={}: {} trials certify LO at some height and fail later, {} for strong LO",
            s.p, s.lo_nonmonotone, s.nlo_nonmonotone
        );
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, &report.records)?;
    let mut outputs = Vec::new();
    emit(common, "growth.csv", &buf, &mut outputs)?;
    let violation = report.records.iter().any(|r| r.nlo_count > r.lo_count);
    Ok(Run { config, outputs, violation })
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    common: &Common,
    graphs: usize,
    max_n: usize,
    max_h: usize,
    llrs: usize,
    degrees: &[usize],
    tree_cap: usize,
) -> Result<Run> {
    let cfg = OracleSuiteConfig {
        graphs,
        max_n,
        max_h,
        llrs_per_case: llrs,
        degrees: degrees.to_vec(),
        tree_cap,
        seed: common.seed,
    };
    let config = json!({
        "command": "oracle", "graphs": graphs, "max_n": max_n, "max_h": max_h,
        "llrs": llrs, "degrees": degrees, "tree_cap": tree_cap, "common": common_json(common),
    });
    announce(&config);
    let report = run_oracle_suite(&cfg)?;
    let text = format!(
        "graphs={} cases={} cases_by_h={:?} instances={} skipped={} mismatches={}\n",
        report.graphs,
        report.cases,
        report.cases_by_h,
        report.instances,
        report.skipped,
        report.mismatches.len()
    );
    let mut outputs = Vec::new();
    emit(common, "oracle.txt", text.as_bytes(), &mut outputs)?;
    for m in &report.mismatches {
        eprintln!(
            "mismatch: graph {} h={} d={} reduced={} llr={:?} dp={} oracle={}",
            m.graph, m.h, m.d, m.reduced, m.llr, m.dp.min_cost, m.oracle.min_cost
        );
    }
    Ok(Run { config, outputs, violation: !report.mismatches.is_empty() })
}

fn dispatch(cli: &Cli) -> Result<Run> {
    let c = &cli.common;
    match &cli.command {
        Command::Graph(GraphCommand::Gen { n, dl, dr, min_girth }) => graph_gen(c, *n, *dl, *dr, *min_girth),
        Command::Graph(GraphCommand::Info { graph }) => graph_info(c, graph),
        Command::Sample { graph, channel, trials, codeword } => sample(c, graph, channel, *trials, codeword),
        Command::Certify(args) => certify(c, args),
        Command::Hierarchy(args) => hierarchy(c, args),
        Command::Experiment(args) => experiment(c, args),
        Command::Oracle { graphs, max_n, max_h, llrs, degrees, tree_cap } => {
            oracle(c, *graphs, *max_n, *max_h, *llrs, degrees, *tree_cap)
        }
    }
}

fn write_manifest(common: &Common, run: &Run) -> Result<()> {
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir)?;
        let manifest = json!({
            "tool": "tanner-lo",
            "version": env!("CARGO_PKG_VERSION"),
            "config": run.config,
            "outputs": run.outputs,
            "violation": run.violation,
        });
        fs::write(dir.join("manifest.json"), format!("{manifest:#}\n"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    if let Some(jobs) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli).and_then(|run| write_manifest(&cli.common, &run).map(|_| run)) {
        Ok(run) if run.violation => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codeword_parsing() {
        assert_eq!(parse_codeword("zero", 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(parse_codeword("1 0,1", 3).unwrap(), vec![1, 0, 1]);
        assert!(parse_codeword("102", 3).is_err());
        assert!(parse_codeword("10", 3).is_err());
    }

    #[test]
    fn weights_with_extension() {
        let w = weights("2,4", 2, Some("1,3")).unwrap();
        assert_eq!(w, WeightVector::from_integers(&[2, 4, 6, 12]).unwrap());
        assert!(weights("unit", 2, Some("1,0")).is_err());
    }
}

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use vizing_core::io::{read_coloring, read_edge_list, write_coloring, write_edge_list};
use vizing_core::{
    derive_params, edge_color_with, generate, verify_coloring, Epsilon, Graph, GraphFamily,
    MetricsRecord, Mode, Overrides, Params, RngStream, RunOptions,
};

#[derive(Parser)]
#[command(name = "vizing", version, about = "Randomized (1+eps)Delta edge coloring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph as an edge list.
    Gen {
        /// Family spec, e.g. near_regular:1000:16, erdos_renyi_m:100:300,
        /// complete_bipartite:2:3, cycle:10, star:5.
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color a graph read from an edge list ("-" for stdin).
    Color {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Coloring output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the run's metrics as one JSON object.
        #[arg(long)]
        metrics_json: Option<PathBuf>,
        /// Write the largest augmenting chain as a DOT graph.
        #[arg(long)]
        trace_dot: Option<PathBuf>,
    },
    /// Check a coloring against a graph; exits 1 on any defect.
    Verify { graph: PathBuf, coloring: PathBuf },
    /// Color generated graphs over several sizes and seeds.
    Bench {
        /// Family with the vertex count left out: near_regular:<d>,
        /// erdos_renyi_m:<average degree>, or cycle.
        #[arg(long, default_value = "near_regular:16")]
        family: String,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<usize>,
        /// Number of seeds per size (seeds 0..count).
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[command(flatten)]
        run: RunArgs,
        /// JSON lines output, one record per run (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-size summary table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "0.5")]
    epsilon: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fan length cap.
    #[arg(long)]
    kmax: Option<usize>,
    /// Path parameter; paths are walked to at most 2 * ell edges.
    #[arg(long)]
    ell: Option<u64>,
    /// practical or theory.
    #[arg(long, default_value = "practical")]
    mode: String,
    /// Report wall_ms as 0 so repeated runs give identical metrics.
    #[arg(long)]
    no_timing: bool,
    /// Enable full internal consistency checks (slower).
    #[arg(long)]
    validate: bool,
}

/// Exit 1: bad input or parameters. Exit 2: the engine broke an invariant.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { family, seed, out } => cmd_gen(&family, seed, out.as_deref()),
        Command::Color {
            input,
            run,
            out,
            metrics_json,
            trace_dot,
        } => cmd_color(&input, &run, out.as_deref(), metrics_json.as_deref(), trace_dot.as_deref()),
        Command::Verify { graph, coloring } => cmd_verify(&graph, &coloring),
        Command::Bench {
            family,
            sizes,
            seeds,
            run,
            out,
            csv,
        } => cmd_bench(&family, &sizes, seeds, &run, out.as_deref(), csv.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn open_input(path: &Path) -> anyhow::Result<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    read_edge_list(open_input(path)?).with_context(|| format!("reading {}", path.display()))
}

fn params_for(g: &Graph, run: &RunArgs) -> anyhow::Result<Params> {
    let epsilon: Epsilon = run.epsilon.parse()?;
    let mode: Mode = run.mode.parse()?;
    let overrides = Overrides {
        k_max: run.kmax,
        ell: run.ell,
    };
    Ok(derive_params(g.max_degree(), epsilon, overrides, mode)?)
}

/// Colors `g` and verifies the result independently.
fn color_verified<'g>(
    g: &'g Graph,
    params: &Params,
    run: &RunArgs,
    keep_largest_chain: bool,
) -> Result<(vizing_core::RunOutput<'g>, MetricsRecord), Failure> {
    let options = RunOptions {
        validate: run.validate,
        keep_largest_chain,
        trace: None,
    };
    let mut out = edge_color_with(g, params, run.seed, options)
        .map_err(|e| Failure::Internal(e.into()))?;
    if run.no_timing {
        out.stats = out.stats.without_timing();
    }
    let report = verify_coloring(g, out.state.colors(), params.q);
    let record = MetricsRecord::new(g, params, run.seed, &out.stats, &report);
    if !record.proper {
        return Err(Failure::Internal(anyhow!(
            "output failed verification: {} conflicts, {} out of range, {} of {} colored",
            report.violations.len(),
            report.out_of_range.len(),
            report.colored,
            g.m()
        )));
    }
    Ok((out, record))
}

fn cmd_gen(family: &str, seed: u64, out: Option<&Path>) -> Outcome {
    let family: GraphFamily = family.parse().map_err(|e: String| anyhow!(e))?;
    let g = generate(family, &mut RngStream::new(seed))?;
    write_edge_list(&g, open_output(out)?)?;
    Ok(())
}

fn cmd_color(
    input: &Path,
    run: &RunArgs,
    out: Option<&Path>,
    metrics_json: Option<&Path>,
    trace_dot: Option<&Path>,
) -> Outcome {
    let g = read_graph(input)?;
    let params = params_for(&g, run)?;
    let (result, record) = color_verified(&g, &params, run, trace_dot.is_some())?;
    write_coloring(&g, params.q, result.state.colors(), open_output(out)?)?;
    if let Some(path) = metrics_json {
        let mut w = open_output(Some(path))?;
        writeln!(w, "{}", record.to_json())?;
        w.flush()?;
    }
    if let Some(path) = trace_dot {
        let mut w = open_output(Some(path))?;
        match &result.largest_chain {
            Some(chain) => chain.write_dot(&mut w, &g)?,
            None => writeln!(w, "graph chain {{\n}}")?,
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_verify(graph: &Path, coloring: &Path) -> Outcome {
    let g = read_graph(graph)?;
    let file = read_coloring(&g, open_input(coloring)?)
        .with_context(|| format!("reading {}", coloring.display()))?;
    let report = verify_coloring(&g, &file.colors, file.q);
    let mut defects = Vec::new();
    for &(e, f) in &report.violations {
        let ((a, b), (c, d)) = (g.endpoints(e), g.endpoints(f));
        defects.push(format!(
            "edges ({a}, {b}) and ({c}, {d}) share color {}",
            file.colors[e as usize]
        ));
    }
    for &e in &report.out_of_range {
        let (a, b) = g.endpoints(e);
        defects.push(format!("edge ({a}, {b}) has color {} > q = {}", file.colors[e as usize], file.q));
    }
    for &e in &file.repeated {
        let (a, b) = g.endpoints(e);
        defects.push(format!("edge ({a}, {b}) is listed more than once"));
    }
    if report.colored < g.m() {
        defects.push(format!("{} of {} edges are uncolored", g.m() - report.colored, g.m()));
    }
    if defects.is_empty() {
        println!("ok: {} edges, {} colors available", g.m(), file.q);
        return Ok(());
    }
    for d in &defects {
        eprintln!("{d}");
    }
    Err(Failure::Input(anyhow!("coloring rejected with {} defect(s)", defects.len())))
}

fn bench_family(template: &str, n: usize) -> anyhow::Result<GraphFamily> {
    let (kind, arg) = template.split_once(':').unwrap_or((template, ""));
    let num = || -> anyhow::Result<usize> {
        arg.parse()
            .with_context(|| format!("family {template:?} needs a numeric parameter"))
    };
    Ok(match kind {
        "near_regular" => GraphFamily::NearRegular { n, d: num()? },
        "erdos_renyi_m" => GraphFamily::ErdosRenyiM {
            n,
            m: n * num()? / 2,
        },
        "cycle" => GraphFamily::Cycle { n },
        other => return Err(anyhow!("unsupported bench family {other:?}")),
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

fn cmd_bench(
    family: &str,
    sizes: &[usize],
    seeds: u64,
    run: &RunArgs,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> Outcome {
    let mut jsonl = open_output(out)?;
    let mut summary = Vec::new();
    for &n in sizes {
        let mut records = Vec::new();
        for seed in 0..seeds {
            let g = generate(bench_family(family, n)?, &mut RngStream::new(seed))?;
            let params = params_for(&g, run)?;
            let run = RunArgs {
                seed,
                epsilon: run.epsilon.clone(),
                mode: run.mode.clone(),
                ..*run
            };
            let (_, record) = color_verified(&g, &params, &run, false)?;
            writeln!(jsonl, "{}", record.to_json())?;
            records.push(record);
        }
        summary.push((n, records));
    }
    jsonl.flush()?;
    if let Some(path) = csv {
        let mut w = open_output(Some(path))?;
        writeln!(
            w,
            "n,runs,mean_m,median_wall_ms_per_m,median_iterations_per_m,median_max_chain_edges,mean_avg_chain_edges,all_proper"
        )?;
        for (n, records) in &summary {
            let runs = records.len();
            let mean = |f: &dyn Fn(&MetricsRecord) -> f64| {
                records.iter().map(f).sum::<f64>() / runs.max(1) as f64
            };
            let med = |f: &dyn Fn(&MetricsRecord) -> f64| {
                median(&mut records.iter().map(f).collect::<Vec<_>>())
            };
            writeln!(
                w,
                "{n},{runs},{:.1},{:.6},{:.4},{},{:.3},{}",
                mean(&|r| r.m as f64),
                med(&|r| r.wall_ms / r.m.max(1) as f64),
                med(&|r| r.iterations_total as f64 / r.m.max(1) as f64),
                med(&|r| r.max_chain_edges as f64),
                mean(&|r| r.avg_chain_edges),
                records.iter().all(|r| r.proper),
            )?;
        }
        w.flush()?;
    }
    Ok(())
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use detgraph::graph::DEFAULT_ENUM_CAP;
use detgraph::io::{self, FormsJson, GraphJson, MatroidJson};
use detgraph::measures::{self, MeasureSpec};
use detgraph::oracle::{self, MatroidPoly, OracleReport, DEFAULT_TOLERANCE};
use detgraph::polynomials::{self, Method, Polynomial};
use detgraph::{Execution, SampleBatch, WeightedGraph};
use serde_json::json;

mod render;

use render::{Layout, RenderStyle, Thicken};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser)]
#[command(name = "detgraph", version, about = "Determinantal random subgraphs and graph polynomials")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Measure {
    Ust,
    Connected,
    Forest,
    Crsf,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Poly {
    Kirchhoff,
    Psi1,
    Psi2,
    Connected,
    Forest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyMethod {
    Det,
    Enum,
    Both,
}

#[derive(clap::Args)]
struct MeasureArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "ust")]
    measure: Measure,
    /// Number of forms (connected), chains (forest) or chains (mixed).
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Number of forms for the mixed measure.
    #[arg(long, default_value_t = 0)]
    l: usize,
    /// Forms JSON; drawn from `--seed` when omitted.
    #[arg(long)]
    forms: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Write the rows×cols grid graph.
    GenGrid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 1.0)]
        weight: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Draw exact samples of a determinantal measure.
    Sample {
        #[command(flatten)]
        m: MeasureArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Export the projection kernel in the ω basis.
    Kernel {
        #[command(flatten)]
        m: MeasureArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate a graph polynomial.
    Poly {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        poly: Poly,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        forms: Option<PathBuf>,
        /// Comma-separated balanced vertex charge for psi2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "det")]
        method: PolyMethod,
    },
    /// Compare kernel densities or polynomials against brute-force enumeration.
    Verify {
        #[arg(long, conflicts_with = "matroid")]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ust")]
        measure: Measure,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long)]
        forms: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Matroid JSON; checks basis densities, B, K and (with --k) the theorem measure.
        #[arg(long)]
        matroid: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a graph and one sample as SVG.
    Render {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        sample: PathBuf,
        /// Which sample of the file to draw.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_enum, default_value = "2-core")]
        thicken: Thicken,
        #[arg(long, value_enum, default_value = "circle")]
        layout: Layout,
        /// Columns of the grid layout; defaults to √|V|.
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 600.0)]
        size: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn enum_cap() -> anyhow::Result<usize> {
    match std::env::var("DETGRAPH_ENUM_CAP") {
        Ok(v) => v
            .parse()
            .with_context(|| format!("DETGRAPH_ENUM_CAP={v} is not a number")),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn read_forms(path: &Option<PathBuf>) -> anyhow::Result<Option<FormsJson>> {
    path.as_ref()
        .map(|p| io::read_json(p).with_context(|| format!("reading forms {}", p.display())))
        .transpose()
}

fn build_spec(
    g: &WeightedGraph,
    measure: Measure,
    k: usize,
    l: usize,
    forms: Option<FormsJson>,
    seed: u64,
) -> anyhow::Result<MeasureSpec> {
    let m = g.num_edges();
    let theta = |n: usize| match &forms {
        Some(f) => f.theta(),
        None => measures::random_forms(m, n, seed),
    };
    let phi = |n: usize| match &forms {
        Some(f) => f.phi(),
        None => measures::random_chains(m, n, seed),
    };
    Ok(match measure {
        Measure::Ust => MeasureSpec::Ust,
        Measure::Connected => MeasureSpec::ConnectedK { theta: theta(k) },
        Measure::Forest => MeasureSpec::ForestK { phi: phi(k) },
        Measure::Crsf => {
            let connection = match forms.as_ref().and_then(|f| f.connection()) {
                Some(c) => c,
                None if forms.is_some() => bail!("forms file has no connection"),
                None => measures::random_connection(m, seed),
            };
            MeasureSpec::Crsf { connection }
        }
        Measure::Mixed => MeasureSpec::Mixed {
            phi: phi(k),
            theta: theta(l),
        },
    })
}

fn measure_spec(args: &MeasureArgs) -> anyhow::Result<(WeightedGraph, MeasureSpec)> {
    let g = read_graph(&args.graph)?;
    let spec = build_spec(&g, args.measure, args.k, args.l, read_forms(&args.forms)?, args.seed)?;
    Ok((g, spec))
}

fn read_graph(path: &Path) -> anyhow::Result<WeightedGraph> {
    io::read_graph(path).with_context(|| format!("reading graph {}", path.display()))
}

fn write_report(report: &OracleReport, output: &Option<PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(p) => io::write_json(p, report)?,
        None => println!("{}", serde_json::to_string_pretty(report)?),
    }
    Ok(())
}

/// Returns whether every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::GenGrid {
            rows,
            cols,
            weight,
            output,
        } => {
            let g = WeightedGraph::grid(rows, cols)?;
            let g = g.with_weights(vec![weight; g.num_edges()])?;
            io::write_json(&output, &GraphJson::from_graph(&g))?;
            log::info!("wrote {} vertices, {} edges", g.num_vertices(), g.num_edges());
        }
        Command::Sample { m, count, output } => {
            let (g, spec) = measure_spec(&m)?;
            let kernel = measures::build_kernel(&g, &spec)?;
            let batch: SampleBatch = kernel.sample_batch(m.seed, count, exec);
            io::write_json(&output, &batch)?;
        }
        Command::Kernel { m, output } => {
            let (g, spec) = measure_spec(&m)?;
            io::write_json(&output, &measures::build_kernel(&g, &spec)?.to_json())?;
        }
        Command::Poly {
            graph,
            poly,
            k,
            forms,
            q,
            seed,
            method,
        } => {
            let g = read_graph(&graph)?;
            let forms = read_forms(&forms)?;
            let m = g.num_edges();
            let p = match poly {
                Poly::Kirchhoff => Polynomial::Kirchhoff,
                Poly::Psi1 => Polynomial::Psi1,
                Poly::Psi2 => Polynomial::Psi2 { q },
                Poly::Connected => Polynomial::Connected {
                    theta: forms.map_or_else(|| measures::random_forms(m, k, seed), |f| f.theta()),
                },
                Poly::Forest => Polynomial::Forest {
                    phi: forms.map_or_else(|| measures::random_chains(m, k, seed), |f| f.phi()),
                },
            };
            let mut out = serde_json::Map::new();
            out.insert("polynomial".into(), json!(p.name()));
            let mut values = Vec::new();
            if method != PolyMethod::Enum {
                values.push(polynomials::evaluate(&g, &p)?);
            }
            if method != PolyMethod::Det {
                values.push(oracle::enumerate_polynomial(&g, &p, enum_cap()?, exec)?);
            }
            for v in &values {
                let key = match v.method {
                    Method::Determinant => "determinant",
                    Method::Enumeration => "enumeration",
                };
                out.insert(key.into(), json!([v.value.re, v.value.im]));
            }
            if let [a, b] = values.as_slice() {
                let err = detgraph::linalg::rel_err_c(a.value, b.value);
                out.insert("rel_err".into(), json!(err));
                println!("{}", serde_json::to_string_pretty(&out)?);
                return Ok(err <= DEFAULT_TOLERANCE);
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Verify {
            graph,
            measure,
            k,
            l,
            forms,
            seed,
            matroid,
            tolerance,
            output,
        } => {
            let cap = enum_cap()?;
            let reports = if let Some(path) = matroid {
                let mj: MatroidJson = io::read_json(&path)
                    .with_context(|| format!("reading matroid {}", path.display()))?;
                let mat = mj.to_matroid()?;
                let mut reports = vec![
                    oracle::compare_matroid_measure(&mat, tolerance, cap, exec)?,
                    oracle::compare_matroid_polynomial(&mat, &MatroidPoly::Bases, tolerance, cap, exec)?,
                    oracle::compare_matroid_polynomial(&mat, &MatroidPoly::Kernel, tolerance, cap, exec)?,
                ];
                if k > 0 {
                    let theta = match read_forms(&forms)? {
                        Some(f) => f.theta(),
                        None => measures::random_forms(mat.ground_size(), k, seed),
                    };
                    reports.push(oracle::compare_matroid_theorem(&mat, &theta, tolerance, cap, exec)?);
                }
                reports
            } else {
                let Some(path) = graph else {
                    bail!(UsageError("verify needs --graph or --matroid".into()));
                };
                let g = read_graph(&path)?;
                let spec = build_spec(&g, measure, k, l, read_forms(&forms)?, seed)?;
                vec![oracle::compare_measure(&g, &spec, tolerance, cap, exec)?]
            };
            let pass = reports.iter().all(|r| r.pass);
            if reports.len() == 1 {
                write_report(&reports[0], &output)?;
            } else {
                let text = serde_json::to_string_pretty(&reports)?;
                match &output {
                    Some(p) => std::fs::write(p, text + "\n")?,
                    None => println!("{text}"),
                }
            }
            for r in &reports {
                log::info!("{}: {}", r.instance, if r.pass { "pass" } else { "FAIL" });
            }
            return Ok(pass);
        }
        Command::Render {
            graph,
            sample,
            index,
            thicken,
            layout,
            cols,
            size,
            output,
        } => {
            let g = read_graph(&graph)?;
            let batch: SampleBatch = io::read_json(&sample)
                .with_context(|| format!("reading samples {}", sample.display()))?;
            let Some(edges) = batch.samples.get(index) else {
                bail!(UsageError(format!(
                    "sample index {index} out of range ({} samples)",
                    batch.samples.len()
                )));
            };
            if let Some(&e) = edges.iter().find(|&&e| e >= g.num_edges()) {
                bail!(detgraph::Error::EdgeOutOfRange(e));
            }
            let n = g.num_vertices();
            let cols = cols.unwrap_or_else(|| (n as f64).sqrt().round() as usize);
            let style = RenderStyle {
                width: size,
                height: size,
                thicken,
                ..RenderStyle::default()
            };
            let coords = render::layout(n, layout, cols);
            std::fs::write(&output, render::render_svg(&g, edges, &coords, &style))?;
        }
    }
    Ok(true)
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<detgraph::Error>() {
        Some(e) if e.is_degenerate() => EXIT_DEGENERATE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! The `ramsey-copies` command line.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 usage or input
//! errors, 3 an exhausted search budget.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arrowing::{arrows, verify_colouring, ArrowConfig, ArrowMode};
use crate::claims::{random_set_mapping, run_suite, Suite, SuiteOptions};
use crate::colouring::{cycle_free_colouring, free_partition, multipartite_free_colouring, partite_split, SetMapping};
use crate::connectivity::{max_disjoint_paths, vertex_connectivity};
use crate::constructions::{
    amalgam, balanced_multipartite, derived_graph, is_strongly_edge_transitive, parse_template, sum_hypergraph,
};
use crate::copies::{CopyEmbedding, CopyMode};
use crate::density::density_report;
use crate::error::{Error, Result};
use crate::forest::{build_cycle_of_copies, random_forest, recognise_forest, CopySystem, JunctionWeights};
use crate::graph::{Graph, OrderedGraph};
use crate::hypergraph::LinearHypergraph;
use crate::inseparable::inseparability_witness;
use crate::io::{read_colouring, read_object, write_colouring, write_object, Format, Object};

#[derive(Parser, Debug)]
#[command(name = "ramsey-copies", version, about = "Forests of copies, 2-densities, colourings and arrowing")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct JobConfig {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Object format: json or edge-list.
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    pub format: Format,
    /// Cap on the copies an arrowing search may consider.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub max_copies: usize,
    /// Cap on arrowing search nodes.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    pub max_colourings: u64,
    /// Step budget for amalgam and path packing searches.
    #[arg(long, global = true, default_value_t = crate::constructions::DEFAULT_PACKING_BUDGET)]
    pub packing_budget: u64,
    /// State budget for forest recognition.
    #[arg(long, global = true, default_value_t = crate::forest::DEFAULT_FOREST_BUDGET)]
    pub forest_budget: u64,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<ArrowMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build objects.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute invariants of an object.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Copy systems.
    #[command(subcommand)]
    Forest(ForestCommand),
    /// Colourings and partitions.
    #[command(subcommand)]
    Colour(ColourCommand),
    /// Arrowing.
    #[command(subcommand)]
    Arrow(ArrowCommand),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// m copies of a template glued along an edge.
    Amalgam {
        #[arg(long)]
        template: String,
        #[arg(long)]
        m: usize,
    },
    /// Triples of 1..n summing to n or 2n.
    SumHypergraph {
        #[arg(long)]
        n: usize,
    },
    /// The derived graph of a 3-uniform hypergraph, or of the sum hypergraph on n.
    DerivedGraph {
        #[arg(long, conflicts_with = "n")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Balanced complete multipartite graph.
    Multipartite {
        #[arg(long)]
        parts: usize,
        #[arg(long)]
        size: usize,
    },
    /// Union of a cyclic chain of copies.
    CycleOfCopies {
        #[arg(long)]
        template: String,
        #[arg(long)]
        length: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// d2, m2 and strict 2-balance.
    Density {
        #[arg(long)]
        input: PathBuf,
    },
    /// Vertex connectivity, and optionally disjoint u-v paths of a given length.
    Connectivity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        pair: Option<Vec<usize>>,
        #[arg(long, requires = "pair")]
        length: Option<usize>,
    },
    /// (e,v)-inseparability of a linear hypergraph.
    Inseparable {
        #[arg(long)]
        input: PathBuf,
    },
    /// Strong edge transitivity of a small graph.
    EdgeTransitive {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// Template name (K3, C5, K2,2,2, petersen, ...).
    #[arg(long, conflicts_with = "template_file")]
    pub template: Option<String>,
    /// Template as an object file (graphs or hypergraphs).
    #[arg(long)]
    pub template_file: Option<PathBuf>,
    /// Host object file; with --copies.
    #[arg(long, requires = "copies")]
    pub input: Option<PathBuf>,
    /// One copy per line: host images of template vertices 0, 1, ...
    #[arg(long, requires = "input")]
    pub copies: Option<PathBuf>,
    /// Instead of files, generate a random forest with this many copies.
    #[arg(long, conflicts_with = "input")]
    pub random: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ForestCommand {
    /// Decide whether a copy system is a forest, with a certificate.
    Recognize(SystemArgs),
    /// Write the union of a copy system.
    Union(SystemArgs),
}

#[derive(Subcommand, Debug)]
pub enum ColourCommand {
    /// Free partition of a set mapping ({"ground_size": n, "images": [[...], ...]}).
    FreePartition {
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Generate a random mapping with images of size at most k instead.
        #[arg(long)]
        random: bool,
        #[arg(long)]
        k: usize,
    },
    /// Colouring of a host without (m, F), F balanced complete multipartite.
    Multipartite {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        template: String,
        #[arg(long)]
        m: usize,
    },
    /// Colouring of a host without (m, C_l).
    Cycle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        m: usize,
    },
    /// Split an ordered graph into classes and orient the cross edges.
    Split {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        parts: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ArrowCommand {
    /// Decide host -> (template)_r.
    Decide {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        template: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "nni", value_parser = parse_mode)]
        mode: ArrowMode,
    },
    /// List monochromatic copies under a colouring file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        template: String,
        #[arg(long)]
        colouring: PathBuf,
        /// Defaults to the mode in the colouring trailer.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<ArrowMode>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Run a verification suite; exits 1 if a required check fails.
    PaperClaims {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 48)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
}

/// Result of running a command: text to emit and whether checks passed.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }

    fn json<T: Serialize>(value: &T) -> Self {
        Outcome::ok(to_json(value))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LemmaViolation(_) => 1,
        e if e.is_budget() => 3,
        _ => 2,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.job.threads {
        // A second call in one process keeps the first pool, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.job, &out.text) {
                eprintln!("error: {e}");
                return 2;
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(job: &JobConfig, text: &str) -> std::io::Result<()> {
    match &job.output {
        Some(p) => fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Object> {
    read_object(&read_file(path)?)
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    load(path)?
        .as_graph()
        .cloned()
        .ok_or_else(|| Error::invalid(format!("{} is not a graph", path.display())))
}

fn arrow_config(job: &JobConfig) -> ArrowConfig {
    ArrowConfig {
        max_copies: job.max_copies,
        max_nodes: job.max_colourings,
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let job = &cli.job;
    match &cli.command {
        Command::Gen(g) => gen(job, g),
        Command::Analyze(a) => analyze(job, a),
        Command::Forest(f) => forest(job, f),
        Command::Colour(c) => colour(job, c),
        Command::Arrow(a) => arrow(job, a),
        Command::Verify(VerifyCommand::PaperClaims { suite, n, instances }) => {
            let suite: Suite = suite.parse()?;
            let opts = SuiteOptions {
                seed: job.seed,
                instances: *instances,
                n: *n,
                packing_budget: job.packing_budget,
                arrow: arrow_config(job),
            };
            let report = run_suite(suite, &opts)?;
            Ok(Outcome {
                ok: report.passed(),
                text: to_json(&report),
            })
        }
    }
}

fn gen(job: &JobConfig, cmd: &GenCommand) -> Result<Outcome> {
    let obj = match cmd {
        GenCommand::Amalgam { template, m } => Object::Graph(amalgam(&parse_template(template)?, *m)?.graph),
        GenCommand::SumHypergraph { n } => {
            let s = sum_hypergraph(*n)?;
            Object::linear(s.hypergraph, Some(s.offset))
        }
        GenCommand::DerivedGraph { input, n } => {
            let h = match (input, n) {
                (Some(p), _) => load(p)?
                    .as_hypergraph()
                    .cloned()
                    .ok_or_else(|| Error::invalid("derived graphs need a hypergraph input"))?,
                (None, Some(n)) => sum_hypergraph(*n)?.hypergraph.into_inner(),
                (None, None) => return Err(Error::invalid("give --input or --n")),
            };
            let d = derived_graph(&h)?;
            Object::OrderedGraph(OrderedGraph::new(d.graph))
        }
        GenCommand::Multipartite { parts, size } => Object::Graph(balanced_multipartite(*parts, *size)?),
        GenCommand::CycleOfCopies { template, length } => {
            Object::Graph(build_cycle_of_copies(&parse_template(template)?, *length)?.union().structure)
        }
    };
    Ok(Outcome::ok(write_object(&obj, job.format)))
}

fn analyze(_job: &JobConfig, cmd: &AnalyzeCommand) -> Result<Outcome> {
    match cmd {
        AnalyzeCommand::Density { input } => Ok(Outcome::json(&density_report(&load_graph(input)?)?)),
        AnalyzeCommand::Connectivity { input, pair, length } => {
            let g = load_graph(input)?;
            let mut report = json!({
                "vertex_connectivity": vertex_connectivity(&g)?,
                "connected": g.is_connected(),
                "min_degree": g.min_degree(),
            });
            if let (Some(p), Some(len)) = (pair, length) {
                let packing = max_disjoint_paths(&g, p[0], p[1], *len)?;
                report["paths"] = json!(packing.paths);
                report["paths_exact"] = json!(packing.exact);
            }
            Ok(Outcome::json(&report))
        }
        AnalyzeCommand::Inseparable { input } => {
            let h = load(input)?
                .as_hypergraph()
                .cloned()
                .ok_or_else(|| Error::invalid("inseparability needs a hypergraph input"))?;
            let linear = LinearHypergraph::try_from(h)?;
            let witness = inseparability_witness(&linear);
            Ok(Outcome::json(&json!({
                "linear": true,
                "inseparable": witness.is_none(),
                "witness": witness,
            })))
        }
        AnalyzeCommand::EdgeTransitive { input } => {
            let g = load_graph(input)?;
            Ok(Outcome::json(&json!({ "strongly_edge_transitive": is_strongly_edge_transitive(&g)? })))
        }
    }
}

fn template_object(args: &SystemArgs) -> Result<Object> {
    match (&args.template, &args.template_file) {
        (Some(name), _) => Ok(Object::Graph(parse_template(name)?)),
        (None, Some(p)) => load(p),
        (None, None) => Err(Error::invalid("give --template or --template-file")),
    }
}

fn read_copies(path: &PathBuf, v: usize, mode: CopyMode) -> Result<Vec<CopyEmbedding>> {
    let text = read_file(path)?;
    let mut out = Vec::new();
    let mut at = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.split('#').next().unwrap_or("");
        if !line.trim().is_empty() {
            let images = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        message: "expected a vertex".into(),
                        token: t.into(),
                        offset: at + line.find(t).unwrap_or(0),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if images.len() != v {
                return Err(Error::Parse {
                    message: format!("expected {v} vertices"),
                    token: line.trim().into(),
                    offset: at,
                });
            }
            out.push(CopyEmbedding::new(images, mode, false));
        }
        at += raw.len();
    }
    Ok(out)
}

fn system<S: crate::structure::Structure + Clone>(args: &SystemArgs, template: S, host: Option<S>, seed: u64) -> Result<CopySystem<S>> {
    match (args.random, host, &args.copies) {
        (Some(count), _, _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_forest(&template, count, JunctionWeights::default(), &mut rng)
        }
        (None, Some(host), Some(copies)) => {
            let copies = read_copies(copies, template.vertex_count(), CopyMode::Subgraph)?;
            CopySystem::new(host, template, copies)
        }
        _ => Err(Error::invalid("give --input with --copies, or --random")),
    }
}

fn forest(job: &JobConfig, cmd: &ForestCommand) -> Result<Outcome> {
    let args = match cmd {
        ForestCommand::Recognize(a) | ForestCommand::Union(a) => a,
    };
    let template = template_object(args)?;
    let host = args.input.as_ref().map(load).transpose()?;
    let recognize = matches!(cmd, ForestCommand::Recognize(_));
    match template {
        Object::Hypergraph { hypergraph: t, .. } => {
            let host = host
                .map(|h| h.as_hypergraph().cloned().ok_or_else(|| Error::invalid("host must be a hypergraph")))
                .transpose()?;
            let sys = system(args, t, host, job.seed)?;
            if recognize {
                Ok(Outcome::json(&recognise_forest(&sys, job.forest_budget)))
            } else {
                let u = sys.union();
                let linear = u.structure.is_linear();
                Ok(Outcome::ok(write_object(
                    &Object::Hypergraph {
                        hypergraph: u.structure,
                        linear,
                        offset: None,
                    },
                    job.format,
                )))
            }
        }
        other => {
            let t = other.as_graph().cloned().expect("graph kinds");
            let host = host
                .map(|h| h.as_graph().cloned().ok_or_else(|| Error::invalid("host must be a graph")))
                .transpose()?;
            let sys = system(args, t, host, job.seed)?;
            if recognize {
                Ok(Outcome::json(&recognise_forest(&sys, job.forest_budget)))
            } else {
                Ok(Outcome::ok(write_object(&Object::Graph(sys.union().structure), job.format)))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    ground_size: usize,
    images: Vec<Vec<usize>>,
}

fn colour(job: &JobConfig, cmd: &ColourCommand) -> Result<Outcome> {
    match cmd {
        ColourCommand::FreePartition { input, random, k } => {
            let f = match (input, random) {
                (Some(p), _) => {
                    let text = read_file(p)?;
                    let m: MappingFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
                        message: e.to_string(),
                        token: String::new(),
                        offset: text
                            .split_inclusive('\n')
                            .take(e.line().saturating_sub(1))
                            .map(str::len)
                            .sum::<usize>()
                            + e.column().saturating_sub(1),
                    })?;
                    SetMapping::new(m.ground_size, m.images)?
                }
                (None, true) => random_set_mapping(&mut ChaCha8Rng::seed_from_u64(job.seed), *k),
                (None, false) => return Err(Error::invalid("give --input or --random")),
            };
            let classes = free_partition(&f, *k)?;
            Ok(Outcome::json(&json!({ "k": k, "class_count": classes.len(), "classes": classes })))
        }
        ColourCommand::Multipartite { input, template, m } => {
            let host = load_graph(input)?;
            let c = multipartite_free_colouring(&host, &parse_template(template)?, *m, job.packing_budget)?;
            Ok(Outcome::ok(write_colouring(&c, ArrowMode::Nni)))
        }
        ColourCommand::Cycle { input, length, m } => {
            let host = load_graph(input)?;
            let c = cycle_free_colouring(&host, *length, *m, job.packing_budget)?;
            Ok(Outcome::ok(write_colouring(&c.colouring, ArrowMode::Nni)))
        }
        ColourCommand::Split { input, parts } => {
            let host = OrderedGraph::new(load_graph(input)?);
            Ok(Outcome::json(&partite_split(&host, *parts, job.seed)?))
        }
    }
}

fn arrow(job: &JobConfig, cmd: &ArrowCommand) -> Result<Outcome> {
    match cmd {
        ArrowCommand::Decide { input, template, r, mode } => {
            let host = load_graph(input)?;
            let res = arrows(&host, &parse_template(template)?, *r, *mode, arrow_config(job))?;
            Ok(Outcome::json(&json!({
                "arrows": res.arrows,
                "mode": res.mode,
                "r": r,
                "copies_considered": res.copies_considered,
                "nodes": res.nodes,
                "witness": res.witness.as_ref().map(|w| write_colouring(w, *mode)),
            })))
        }
        ArrowCommand::Verify { input, template, colouring, mode } => {
            let host = load_graph(input)?;
            let (c, file_mode) = read_colouring(&read_file(colouring)?, &host)?;
            let mode = mode.unwrap_or(file_mode);
            let mono = verify_colouring(&host, &parse_template(template)?, &c, mode)?;
            let images: Vec<&Vec<usize>> = mono.iter().map(|c| &c.images).collect();
            Ok(Outcome {
                ok: mono.is_empty(),
                text: to_json(&json!({ "mode": mode, "monochromatic": mono.len(), "copies": images })),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(run(["ramsey-copies", "nonsense"]), 2);
        assert_eq!(run(["ramsey-copies", "gen", "sum-hypergraph", "--n", "40"]), 2);
        assert_eq!(exit_code(&Error::budget("x", 3)), 3);
        assert_eq!(exit_code(&Error::LemmaViolation("x".into())), 1);
    }

    #[test]
    fn writes_objects() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("k4.json");
        let code = run([
            "ramsey-copies",
            "gen",
            "multipartite",
            "--parts",
            "4",
            "--size",
            "1",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let g = load_graph(&out).unwrap();
        assert_eq!(g, Graph::complete(4));
    }
}

mod input;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use padic_lbg::centers::{branch_decomposition, epsilon_energy};
use padic_lbg::clustering::{split_lbg, ClusteringOptions, SplitLbgResult};
use padic_lbg::dendrogram::{synthesize, tree_to_dot};
use padic_lbg::fixtures::{published_thirteen_point_reference, THIRTEEN_POINTS};
use padic_lbg::learning::{adaptive_learn, learn, Classification};
use padic_lbg::pranking::{ranking_table, stabilization_bound, RankingTable};
use padic_lbg::primes::{first_primes, primes};
use padic_lbg::{
    center_candidates, AbstractDendrogram, Classifier, Clustering, EnergyValue, FieldParams, Node, PAdicValue, Threshold, Tree,
};

use input::Input;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] padic_lbg::Error),
}

#[derive(Parser)]
#[command(name = "padic-lbg", version, about = "Exact clustering of p-adic data")]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, default_value_t = 2, global = true)]
    prime: u64,
    #[arg(long, default_value_t = 1, global = true)]
    ramification: u32,
    #[arg(long = "residue-degree", default_value_t = 1, global = true)]
    residue_degree: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dendrogram of a dataset or tree file.
    Tree {
        input: PathBuf,
        /// Include the point at infinity above the root.
        #[arg(long)]
        extended: bool,
    },
    /// Split the dendrogram into at most `--max-clusters` clusters.
    Cluster {
        input: PathBuf,
        #[arg(long = "max-clusters")]
        max_clusters: usize,
        /// Quasi-singleton threshold, a rational or `p^-j`.
        #[arg(long)]
        epsilon: Option<Threshold>,
        #[arg(long = "family-cap", default_value_t = 16)]
        family_cap: usize,
    },
    /// Center candidates of a cluster (all data by default).
    Centers {
        input: PathBuf,
        /// Comma-separated member indices.
        #[arg(long, value_delimiter = ',')]
        members: Option<Vec<usize>>,
    },
    /// Rank vertices by energy drop for several primes.
    Rank {
        input: PathBuf,
        /// Comma-separated primes, or `auto` for every prime up to the
        /// stabilization bound. Defaults to the first 25 primes.
        #[arg(long)]
        primes: Option<String>,
    },
    /// Classify new data against a training classification.
    Learn {
        /// JSON file with `data`, `clusters` and `centers`.
        training: PathBuf,
        /// Dataset file with the new data, in arrival order.
        updates: PathBuf,
        /// Split a cluster whose energy exceeds this value.
        #[arg(long)]
        threshold: Option<Threshold>,
    },
}

/// Validated settings shared by every subcommand.
struct RunConfig {
    field: FieldParams,
    format: Format,
}

enum Outcome {
    Done(String),
    /// Output was produced but the request could not be met.
    Infeasible(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Infeasible(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let field = FieldParams::new(cli.field.prime, cli.field.ramification, cli.field.residue_degree)?;
    let config = RunConfig { field, format: cli.format };
    if config.format == Format::Dot && !matches!(cli.command, Command::Tree { .. }) {
        return Err(CliError::Input("DOT output is only available for `tree`".into()));
    }
    match cli.command {
        Command::Tree { input, extended } => cmd_tree(&config, &input, extended),
        Command::Cluster { input, max_clusters, epsilon, family_cap } => {
            cmd_cluster(&config, &input, max_clusters, epsilon.as_ref(), family_cap)
        }
        Command::Centers { input, members } => cmd_centers(&config, &input, members),
        Command::Rank { input, primes } => cmd_rank(&config, &input, primes.as_deref()),
        Command::Learn { training, updates, threshold } => cmd_learn(&config, &training, &updates, threshold.as_ref()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn node_json(tree: &Tree, field: &FieldParams, node: Node) -> Value {
    json!({
        "node": node,
        "level": tree.level(node),
        "members": tree.members(&node),
        "diameter": EnergyValue::from_norm(*field, tree.mu(node), 1u32),
    })
}

fn cmd_tree(config: &RunConfig, path: &Path, extended: bool) -> Result<Outcome, CliError> {
    let input = input::load(path, config.field)?;
    let tree = input.tree();
    let out = match config.format {
        Format::Dot => tree_to_dot(tree, extended),
        Format::Text => {
            let mut s = AbstractDendrogram::from_tree(tree.clone()).to_string();
            s.push('\n');
            s
        }
        Format::Json => {
            let data: Option<Vec<String>> = match &input {
                Input::Data(d) => Some(d.data().iter().map(ToString::to_string).collect()),
                Input::Tree(t) => synthesize(t.tree(), &config.field)
                    .ok()
                    .map(|v| v.iter().map(ToString::to_string).collect()),
            };
            let vertices: Vec<Value> = tree
                .vertices()
                .iter()
                .map(|v| {
                    let mut n = node_json(tree, &config.field, Node::Vertex(v.id));
                    n["parent"] = json!(v.parent.map(Node::Vertex));
                    n["children"] = json!(v.children);
                    n
                })
                .collect();
            to_json(&json!({
                "field": config.field,
                "grammar": AbstractDendrogram::from_tree(tree.clone()).to_string(),
                "extended": extended,
                "leaves": tree.leaf_count(),
                "data": data,
                "vertices": vertices,
            }))
        }
    };
    Ok(Outcome::Done(out))
}

fn clustering_json(tree: &Tree, field: &FieldParams, result: &SplitLbgResult) -> Value {
    let family: Vec<Value> = result
        .clusterings
        .iter()
        .map(|c| {
            let clusters: Vec<Value> = c
                .entry
                .clustering
                .iter()
                .zip(&c.centers)
                .map(|(members, centers)| {
                    let mu = tree.diameter(members).expect("members of the tree");
                    let energy = EnergyValue::from_norm(*field, mu, (members.len() - 1) as u64);
                    json!({
                        "members": members,
                        "center_candidates": centers.candidates,
                        "representative": centers.representative,
                        "energy": energy,
                    })
                })
                .collect();
            json!({
                "clusters": clusters,
                "total_energy": c.entry.total_energy,
                "quasi_singletons": c.entry.remnants,
                "diagnostics": result.family.diagnostics,
            })
        })
        .collect();
    json!({ "budget": result.family.budget, "clusterings": family, "steps": result.family.steps })
}

fn cmd_cluster(
    config: &RunConfig,
    path: &Path,
    k: usize,
    epsilon: Option<&Threshold>,
    family_cap: usize,
) -> Result<Outcome, CliError> {
    if family_cap == 0 {
        return Err(CliError::Input("--family-cap must be at least 1".into()));
    }
    let input = input::load(path, config.field)?;
    let result = split_lbg(input.tree(), &config.field, k, epsilon, ClusteringOptions { family_cap })?;
    let out = match config.format {
        Format::Text => {
            let mut s = String::new();
            for c in &result.clusterings {
                write!(s, "{}  E = {}", c.entry.clustering, c.entry.total_energy).unwrap();
                if !c.entry.remnants.is_empty() {
                    let r: Vec<String> = c.entry.remnants.iter().map(ToString::to_string).collect();
                    write!(s, "  quasi-singletons {}", r.join(" ")).unwrap();
                }
                s.push('\n');
            }
            for d in &result.family.diagnostics {
                writeln!(s, "note: {}", serde_json::to_string(d).unwrap()).unwrap();
            }
            s
        }
        _ => to_json(&clustering_json(input.tree(), &config.field, &result)),
    };
    if result.family.is_trivial_fallback() {
        Ok(Outcome::Infeasible(out))
    } else {
        Ok(Outcome::Done(out))
    }
}

fn cmd_centers(config: &RunConfig, path: &Path, members: Option<Vec<usize>>) -> Result<Outcome, CliError> {
    let input = input::load(path, config.field)?;
    let tree = input.tree();
    let cluster = members.unwrap_or_else(|| tree.leaves().collect());
    let result = center_candidates(tree, &cluster)?;
    let branches = branch_decomposition(tree, &cluster)?;
    let mut epsilon = serde_json::Map::new();
    for &a in &branches.cluster {
        epsilon.insert(a.to_string(), json!(epsilon_energy(tree, &config.field, &cluster, a)?));
    }
    let out = match config.format {
        Format::Text => format!(
            "candidates {:?}\nrepresentative {}\n",
            result.candidates, result.representative
        ),
        _ => to_json(&json!({
            "cluster": branches.cluster,
            "center_candidates": result.candidates,
            "terminal_clusters": result.terminal_clusters,
            "representative": result.representative,
            "branches": branches.branches,
            "epsilon": epsilon,
        })),
    };
    Ok(Outcome::Done(out))
}

fn parse_primes(spec: Option<&str>, tree: &Tree, e: u32) -> Result<Vec<u64>, CliError> {
    match spec.map(str::trim) {
        None => Ok(first_primes(25)),
        Some("auto") => {
            let bound = stabilization_bound(tree, e)?.bound;
            Ok(primes().take_while(|&p| p <= bound.max(2)).collect())
        }
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Input(format!("`{s}` is not a prime")))
            })
            .collect(),
    }
}

fn rank_text(table: &RankingTable) -> String {
    let mut s = String::new();
    for r in &table.rankings {
        let groups: Vec<String> = r
            .order()
            .iter()
            .map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>().join("="))
            .collect();
        writeln!(s, "p={}: {}", r.prime.unwrap_or(0), groups.join(" > ")).unwrap();
    }
    writeln!(s, "stabilizes from p > {}", table.stabilization.bound).unwrap();
    for d in &table.discrepancies {
        writeln!(s, "discrepancy {} at p={}: published {}, computed {}", d.name, d.prime, d.published, d.computed)
            .unwrap();
    }
    s
}

fn cmd_rank(config: &RunConfig, path: &Path, primes: Option<&str>) -> Result<Outcome, CliError> {
    let input = input::load(path, config.field)?;
    let tree = input.tree();
    let e = config.field.e();
    let list = parse_primes(primes, tree, e)?;
    let grammar = AbstractDendrogram::from_tree(tree.clone()).to_string();
    let known = AbstractDendrogram::parse(THIRTEEN_POINTS).expect("fixture").to_string();
    let reference = if grammar == known { published_thirteen_point_reference() } else { Vec::new() };
    let table = ranking_table(tree, &list, e, &reference)?;
    let out = match config.format {
        Format::Text => rank_text(&table),
        _ => to_json(&table),
    };
    Ok(Outcome::Done(out))
}

#[derive(Deserialize)]
struct Training {
    data: Vec<String>,
    clusters: Vec<Vec<usize>>,
    centers: Vec<usize>,
}

fn cmd_learn(
    config: &RunConfig,
    training: &Path,
    updates: &Path,
    threshold: Option<&Threshold>,
) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(training)
        .map_err(|e| CliError::Input(format!("{}: {e}", training.display())))?;
    let t: Training =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", training.display())))?;
    let data = t
        .data
        .iter()
        .enumerate()
        .map(|(i, s)| {
            PAdicValue::parse(s, config.field)
                .map_err(|e| CliError::Input(format!("{}: datum {i}: {e}", training.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let classification = Classification::new(data, Clustering::new(t.clusters)?)?;
    let new = input::load_data(updates, config.field)?;
    let classifier: Classifier = match threshold {
        Some(r) => adaptive_learn(&classification, &t.centers, new, r)?,
        None => learn(&classification, &t.centers, new)?,
    };
    let out = match config.format {
        Format::Text => {
            let mut s = String::new();
            for (c, a) in classifier.clustering.iter().zip(&classifier.centers) {
                writeln!(s, "{c:?} center {a}").unwrap();
            }
            writeln!(s, "saturated: {}", classifier.is_saturated()).unwrap();
            s
        }
        _ => to_json(&classifier),
    };
    Ok(Outcome::Done(out))
}

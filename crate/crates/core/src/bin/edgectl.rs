//! Command-line front end. Exit codes: 0 success or pass, 1 negative
//! analysis result, 2 usage, input or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use edgectl::controllability::{dedicated_input_configuration, is_structurally_controllable};
use edgectl::dot::export_dot;
use edgectl::io::{load_subgraphs, load_topology, parse_root_list};
use edgectl::report::AnalysisReport;
use edgectl::resilience::{
    critical_edge_scan, edge_controllability_index, verify_single_edge_resilience, EdgeScope,
};
use edgectl::synthesis::{synthesize, SynthesisOptions};
use edgectl::{Digraph, Error, RootSet};

#[derive(Parser)]
#[command(
    name = "edgectl",
    version,
    about = "Structural controllability under single edge failures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Topology file or bundled name (ieee14, fig2).
    topology: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Recorded in the report; the analyses themselves are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Also compute the edge-controllability index up to this k.
    #[arg(long)]
    max_k: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct Rooted {
    #[command(flatten)]
    common: Common,
    /// Comma-separated root ids, e.g. 8,10.
    #[arg(long)]
    roots: String,
}

#[derive(Subcommand)]
enum Command {
    /// Structural controllability test.
    Check(Rooted),
    /// List critical edges with their failure witnesses.
    Critical(Rooted),
    /// Two-step synthesis of a 2-edge-controllable root set.
    Synthesize {
        #[command(flatten)]
        common: Common,
        /// Initial roots; a minimum dedicated input configuration if omitted.
        #[arg(long)]
        roots: Option<String>,
        /// Subgraph file or bundled name (ieee14_paper.subgraphs).
        #[arg(long)]
        subgraphs: Option<String>,
        /// Re-check every augmentation exhaustively.
        #[arg(long)]
        paranoid: bool,
        /// Include per-phase timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Remove every edge in turn and re-test controllability.
    Verify {
        #[command(flatten)]
        rooted: Rooted,
        /// Also remove edges that end at a root.
        #[arg(long)]
        include_root_edges: bool,
    },
    /// Minimum dedicated input configuration.
    Inputs(Common),
    /// Graphviz export.
    Export {
        topology: String,
        #[arg(long)]
        dot: PathBuf,
        /// Report whose roots, critical edges and additions are drawn.
        #[arg(long = "from-report", alias = "report")]
        from_report: Option<PathBuf>,
        #[arg(long)]
        roots: Option<String>,
    },
}

fn roots_of(text: &str) -> Result<RootSet, Error> {
    Ok(RootSet::from_ids(parse_root_list(text)?))
}

fn emit(report: &mut AnalysisReport, common: &Common, g: &Digraph) -> Result<(), Error> {
    report.seed = common.seed;
    if let Some(k) = common.max_k {
        report.edge_index = Some(edge_controllability_index(g, &report.final_root_set(), k)?);
    }
    let body = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &common.report {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Check(Rooted { common, roots }) => {
            let g = load_topology(&common.topology)?;
            let roots = roots_of(&roots)?;
            let verdict = is_structurally_controllable(&g, &roots)?;
            let ok = verdict.controllable;
            let mut report = AnalysisReport::new("check", &common.topology, &g, &roots);
            report.controllability = Some(verdict);
            let common = Common {
                max_k: common.max_k.filter(|_| ok),
                ..common
            };
            emit(&mut report, &common, &g)?;
            Ok(ok)
        }
        Command::Critical(Rooted { common, roots }) => {
            let g = load_topology(&common.topology)?;
            let roots = roots_of(&roots)?;
            let verdict = is_structurally_controllable(&g, &roots)?;
            let mut report = AnalysisReport::new("critical", &common.topology, &g, &roots);
            let ok = verdict.controllable;
            report.controllability = Some(verdict);
            if ok {
                report = report.with_critical_edges(&critical_edge_scan(&g, &roots)?);
            }
            let common = Common {
                max_k: common.max_k.filter(|_| ok),
                ..common
            };
            emit(&mut report, &common, &g)?;
            Ok(ok)
        }
        Command::Synthesize {
            common,
            roots,
            subgraphs,
            paranoid,
            timings,
        } => {
            let g = load_topology(&common.topology)?;
            let opts = SynthesisOptions {
                roots: roots.as_deref().map(roots_of).transpose()?,
                subgraphs: subgraphs.as_deref().map(load_subgraphs).transpose()?,
                paranoid,
                ..SynthesisOptions::default()
            };
            let result = match synthesize(&g, &opts) {
                Err(Error::NotControllable) => {
                    eprintln!("error: {}", Error::NotControllable);
                    return Ok(false);
                }
                other => other?,
            };
            let mut report = AnalysisReport::from_synthesis(&common.topology, &g, &result, timings);
            emit(&mut report, &common, &g)?;
            Ok(result.verification.passed)
        }
        Command::Verify {
            rooted: Rooted { common, roots },
            include_root_edges,
        } => {
            let g = load_topology(&common.topology)?;
            let roots = roots_of(&roots)?;
            let scope = if include_root_edges {
                EdgeScope::All
            } else {
                EdgeScope::NonRoot
            };
            let verdict = verify_single_edge_resilience(&g, &roots, scope)?;
            let ok = verdict.passed;
            let mut report = AnalysisReport::new("verify", &common.topology, &g, &roots);
            report.verification = Some(verdict);
            let common = Common {
                max_k: common.max_k.filter(|_| ok),
                ..common
            };
            emit(&mut report, &common, &g)?;
            Ok(ok)
        }
        Command::Inputs(common) => {
            let g = load_topology(&common.topology)?;
            let config = dedicated_input_configuration(&g);
            let mut report =
                AnalysisReport::new("inputs", &common.topology, &g, &RootSet::default())
                    .with_inputs(&config);
            emit(&mut report, &common, &g)?;
            Ok(true)
        }
        Command::Export {
            topology,
            dot,
            from_report,
            roots,
        } => {
            let g = load_topology(&topology)?;
            let report = match &from_report {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?;
                    Some(AnalysisReport::from_json(&text)?)
                }
                None => None,
            };
            let roots = match (&roots, &report) {
                (Some(r), _) => roots_of(r)?,
                (None, Some(rep)) => rep.final_root_set(),
                (None, None) => RootSet::default(),
            };
            roots.validate(&g)?;
            std::fs::write(&dot, export_dot(&g, &roots, report.as_ref())).map_err(|e| {
                Error::Io {
                    path: dot.display().to_string(),
                    message: e.to_string(),
                }
            })?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

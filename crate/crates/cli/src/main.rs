use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use nest_core::census::{self, CensusOptions};
use nest_core::{aut, symmetry, NestParams};

#[derive(Parser)]
#[command(
    name = "nest",
    version,
    about = "Nest graphs, their automorphism groups and the edge-transitive census"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the graph as JSON.
    Construct {
        #[arg(long, value_name = "n,a,b,c,k")]
        params: NestParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit generators and order of the automorphism group.
    Aut {
        #[arg(long, value_name = "n,a,b,c,k")]
        params: NestParams,
    },
    /// Emit the census record for one tuple.
    Check {
        #[arg(long, value_name = "n,a,b,c,k")]
        params: NestParams,
    },
    /// Emit all minimal block systems of the automorphism group.
    Blocks {
        #[arg(long, value_name = "n,a,b,c,k")]
        params: NestParams,
    },
    /// Emit an isomorphism between two Nest graphs, or "non-isomorphic".
    Iso {
        #[arg(long = "params-a", value_name = "n,a,b,c,k")]
        params_a: NestParams,
        #[arg(long = "params-b", value_name = "n,a,b,c,k")]
        params_b: NestParams,
    },
    /// Run the census up to a bound.
    Census {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "census.jsonl")]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
    },
    /// Check a census against the classification; exit 0 pass, 1 fail, 2 partial.
    VerifyTheorem {
        #[arg(long)]
        census: PathBuf,
    },
    /// Run the invariant suite over a census; exit 0 pass, 1 fail.
    Invariants {
        #[arg(long)]
        census: PathBuf,
    },
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct { params, out } => {
            let text = params.build().to_json();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
        }
        Command::Aut { params } => {
            let grp = aut::automorphism_group(&params.build());
            let gens: Vec<Vec<usize>> = grp.generators().iter().map(|g| g.to_vec()).collect();
            print_json(&json!({ "order": grp.order(), "generators": gens }))?;
        }
        Command::Check { params } => print_json(&census::profile(&params))?,
        Command::Blocks { params } => {
            let grp = aut::automorphism_group(&params.build());
            let systems = symmetry::minimal_block_systems(&grp, 0, Some(params.n))?;
            print_json(&systems)?;
        }
        Command::Iso { params_a, params_b } => {
            match aut::are_isomorphic(&params_a.build(), &params_b.build()) {
                Some(p) => print_json(&p)?,
                None => println!("non-isomorphic"),
            }
        }
        Command::Census {
            max_n,
            jobs,
            out,
            resume,
        } => {
            if max_n < 4 {
                bail!("--max-n must be at least 4");
            }
            let opts = CensusOptions {
                max_n,
                jobs: jobs.max(1),
                out,
                resume,
            };
            let summary = census::census_run_with_progress(&opts, |done, total| {
                eprint!("\r{done}/{total}");
            })?;
            eprintln!();
            print_json(&json!({
                "out": opts.out,
                "records": summary.records,
                "resumed": summary.resumed,
                "prefilter_rejected": summary.prefilter_rejected,
                "edge_transitive": summary.edge_transitive,
                "edge_transitive_core_free": summary.edge_transitive_core_free,
            }))?;
        }
        Command::VerifyTheorem { census } => {
            let records = census::read_records(&census)?;
            let report = census::verify_theorem(&records);
            print_json(&report)?;
            return Ok(ExitCode::from(report.verdict.exit_code() as u8));
        }
        Command::Invariants { census } => {
            let records = census::read_records(&census)?;
            let report = census::invariant_suite(&records);
            print_json(&report)?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

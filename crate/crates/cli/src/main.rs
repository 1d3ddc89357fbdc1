use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirac_utm_cli::{convergence, run, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "dirac-utm", version, about = "Transform-method and characteristic solvers for the 1-D Dirac interface problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write solution.csv, errors.csv and report.txt.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Refine the mesh and the quadrature and write convergence.csv.
    Convergence {
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Evaluate the corrected term lists.
    #[arg(long)]
    erratum_fixes: bool,
    /// Write the mesh boundary rows to traces.csv.
    #[arg(long)]
    dump_traces: bool,
    /// Write per-integral partial sums to terms.csv.
    #[arg(long)]
    dump_terms: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions {
            erratum_fixes: self.erratum_fixes,
            dump_traces: self.dump_traces,
            dump_terms: self.dump_terms,
            out: self.out.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Run { common, .. } | Command::Convergence { common, .. } => common,
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot set up {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result: Result<(), CliError> = match &cli.command {
        Command::Run { config, common } => run(config, &common.options()).map(|s| {
            println!("wrote {} (linf {:.3e})", s.out_dir.display(), s.linf);
        }),
        Command::Convergence { config, levels, common } => convergence(config, *levels, &common.options()).map(|rows| {
            for r in rows {
                println!(
                    "level {} dx {:.3e} ref_order {} utm_error {:.3e}",
                    r.level,
                    r.dx,
                    r.ref_order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "-".into()),
                    r.utm_error
                );
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sextic_cli::cache::Cache;
use sextic_cli::{commands, exit, CliError, Format, Report, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "sextic", version, about = "Lattice types and Z-splitting curves of simple sextics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for per-ADE result files; no caching when unset.
    #[arg(long, global = true, env = "SEXTIC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Node budget for embedding searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice types of one ADE type, e.g. `A3+2A7`.
    Classify { ade: String },
    /// Type counts and k-ples for every total Milnor number up to N.
    Enumerate {
        /// Largest total Milnor number, at most 19.
        #[arg(long)]
        max_mu: usize,
    },
    /// Geometric embeddings of one lattice-data file into another.
    Specialize {
        /// Lattice-data JSON of the general sextic.
        src: PathBuf,
        /// Lattice-data JSON of the special one.
        dst: PathBuf,
    },
    /// The numerical pre-Z-splitting test for a splitting curve.
    Criterion {
        /// Degree of the splitting curve.
        #[arg(long)]
        deg: u32,
        /// `t_Γ`: intersection of the branch curve with one lift of the curve on the cover.
        #[arg(long)]
        t: u32,
        /// `TYPE:TAU` per singular point, e.g. `A2:1`.
        #[arg(long, num_args = 0..)]
        sing: Vec<String>,
    },
    /// Walk through the A3+2A7 example.
    Demo,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = RunConfig { format: cli.format, cache: cli.cache_dir.as_ref().map(Cache::new), budget: cli.budget };
    match &cli.command {
        Command::Classify { ade } => commands::run_classify(ade, &cfg),
        Command::Enumerate { max_mu } => commands::run_enumerate(*max_mu, &cfg),
        Command::Specialize { src, dst } => commands::run_specialize(src, dst, &cfg),
        Command::Criterion { deg, t, sing } => commands::run_criterion(*deg, *t, sing, &cfg),
        Command::Demo => commands::run_demo(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE } else { exit::OK });
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::PARSE);
        }
    }
    match run(&cli) {
        Ok(r) => {
            let _ = std::io::stdout().write_all(r.body.as_bytes());
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

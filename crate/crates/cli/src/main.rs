use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fir_cli::scenario::{Scenario, Task};
use fir_cli::run_scenario;

/// Exact reduction toolkit for group rings of free groups: free bases of
/// ideals and submodules, elementary factorization of invertible matrices,
/// integral descent, and a randomized audit of the geometry underneath.
#[derive(Parser)]
#[command(name = "fir", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Free-group rank (generators a, b, ...)
    #[arg(long, default_value_t = 2)]
    rank: u8,
    /// Metric oracle: `tree` or `cayley-ball`
    #[arg(long, default_value = "tree")]
    oracle: String,
    /// Extra generators for the Cayley-ball oracle, comma separated
    #[arg(long, default_value = "")]
    extra: String,
    /// Enumeration radius of the Cayley-ball oracle
    #[arg(long, default_value_t = 6)]
    radius: usize,
    /// Coefficient domain: `q`, `z`, or `fp:<p>`
    #[arg(long, default_value = "q")]
    domain: String,
    /// Support-radius bound for dependence and membership searches
    #[arg(long, default_value_t = 6)]
    rmax: usize,
    /// Seed for randomized tasks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Skip the displacement-hypothesis gate; postconditions still verified
    #[arg(long, default_value_t = false)]
    r#unsafe: bool,
    /// Word-length bound when searching group elements for displacement
    #[arg(long, default_value_t = 3)]
    gball: usize,
}

#[derive(Subcommand)]
enum Command {
    /// One reduction step on a dependent family
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Elements ξ_i, comma separated
        #[arg(long)]
        xi: String,
        /// Coefficients α_i with |Σ α_i ξ_i| < max |α_i ξ_i| − δ_n
        #[arg(long)]
        alpha: String,
    },
    /// Free basis of the left ideal generated by the inputs
    IdealBasis {
        #[command(flatten)]
        common: Common,
        /// Generators, comma separated
        #[arg(long)]
        gens: String,
    },
    /// Free basis of the submodule generated by the input vectors
    SubmoduleBasis {
        #[command(flatten)]
        common: Common,
        /// Generator vectors `(e; e; ...)`, comma separated
        #[arg(long)]
        gens: String,
    },
    /// Factor an invertible matrix into elementary and diagonal operations
    GeFactor {
        #[command(flatten)]
        common: Common,
        /// Matrix rows as vectors `(e; ...)`, comma separated
        #[arg(long)]
        x: String,
        /// The claimed inverse, same shape; AX = 1 is verified
        #[arg(long)]
        a: String,
    },
    /// Integral free basis by descent, or a torsion certificate
    BassDescent {
        #[command(flatten)]
        common: Common,
        /// Integer generator vectors, comma separated
        #[arg(long)]
        gens: String,
        /// Primes for the torsion report, comma separated
        #[arg(long, default_value = "2,3,5")]
        primes: String,
    },
    /// Displacement vs (2n+11)²·δ for the given color count
    CheckHypothesis {
        #[command(flatten)]
        common: Common,
        /// Number of colors the reduction would run with
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Hyperbolicity constant of the oracle
    Delta {
        #[command(flatten)]
        common: Common,
        /// Include the edge-list serialization in the JSON section
        #[arg(long, default_value_t = false)]
        emit_edges: bool,
    },
    /// Minimal displacement over short group elements
    Displacement {
        #[command(flatten)]
        common: Common,
    },
    /// Randomized audit of the geometric lemma suite
    AuditLemmas {
        #[command(flatten)]
        common: Common,
        /// Number of seeded trials
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Apply a transformation log to a tuple (or the identity matrix)
    Replay {
        #[command(flatten)]
        common: Common,
        /// Path of the log file (operations one per line)
        #[arg(long)]
        log: std::path::PathBuf,
        /// Input tuple, comma separated; omit with --identity
        #[arg(long, default_value = "")]
        input: String,
        /// Replay on the n×n identity matrix instead of --input
        #[arg(long, default_value_t = 0)]
        identity: usize,
    },
    /// Run a scenario from a key=value file
    Run {
        /// Scenario file path
        file: std::path::PathBuf,
    },
}

fn apply_common(sc: &mut Scenario, c: &Common) {
    sc.rank = c.rank;
    sc.oracle_kind = c.oracle.clone();
    sc.extra = c
        .extra
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    sc.radius = c.radius;
    sc.domain_spec = c.domain.clone();
    sc.rmax = c.rmax;
    sc.seed = c.seed;
    sc.unsafe_mode = c.r#unsafe;
    sc.gball = c.gball;
}

fn build_scenario(cmd: &Command) -> Result<Scenario> {
    let sc = match cmd {
        Command::Reduce { common, xi, alpha } => {
            let mut sc = Scenario::new(Task::Reduce);
            apply_common(&mut sc, common);
            sc.xi = xi.clone();
            sc.alpha = alpha.clone();
            sc
        }
        Command::IdealBasis { common, gens } => {
            let mut sc = Scenario::new(Task::IdealBasis);
            apply_common(&mut sc, common);
            sc.gens = gens.clone();
            sc
        }
        Command::SubmoduleBasis { common, gens } => {
            let mut sc = Scenario::new(Task::SubmoduleBasis);
            apply_common(&mut sc, common);
            sc.gens = gens.clone();
            sc
        }
        Command::GeFactor { common, x, a } => {
            let mut sc = Scenario::new(Task::GeFactor);
            apply_common(&mut sc, common);
            sc.matrix_x = x.clone();
            sc.matrix_a = a.clone();
            sc
        }
        Command::BassDescent { common, gens, primes } => {
            let mut sc = Scenario::new(Task::BassDescent);
            apply_common(&mut sc, common);
            sc.domain_spec = "z".into();
            sc.gens = gens.clone();
            sc.primes = primes
                .split(',')
                .map(|s| s.trim().parse().context("bad prime list"))
                .collect::<Result<_>>()?;
            sc
        }
        Command::CheckHypothesis { common, n } => {
            let mut sc = Scenario::new(Task::CheckHypothesis);
            apply_common(&mut sc, common);
            sc.n = *n;
            sc
        }
        Command::Delta { common, emit_edges } => {
            let mut sc = Scenario::new(Task::Delta);
            apply_common(&mut sc, common);
            sc.emit_edges = *emit_edges;
            sc
        }
        Command::Displacement { common } => {
            let mut sc = Scenario::new(Task::Displacement);
            apply_common(&mut sc, common);
            sc
        }
        Command::AuditLemmas { common, trials } => {
            let mut sc = Scenario::new(Task::AuditLemmas);
            apply_common(&mut sc, common);
            sc.trials = *trials;
            sc
        }
        Command::Replay { common, log, input, identity } => {
            let mut sc = Scenario::new(Task::Replay);
            apply_common(&mut sc, common);
            sc.log_text = std::fs::read_to_string(log)
                .with_context(|| format!("reading log file {}", log.display()))?;
            sc.input = input.clone();
            sc.identity = *identity;
            sc
        }
        Command::Run { file } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading scenario file {}", file.display()))?;
            Scenario::from_file_text(&text)?
        }
    };
    Ok(sc)
}

fn main() {
    let cli = Cli::parse();
    let scenario = match build_scenario(&cli.command) {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    };
    let report = run_scenario(&scenario);
    println!("{}", report.render());
    std::process::exit(report.exit_code);
}

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ringlab::Budgets;

#[derive(Parser, Debug)]
#[command(name = "ringlab", version, about = "Exhaustive structure checks for finite rings and modules")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of right ideals / submodules enumerated.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_ideals: Option<u64>,
    /// Largest ring order a constructor may produce.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_order: Option<u64>,
    /// Largest number of partial assignments in one homomorphism search.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget_assign: Option<u64>,
    /// Spec text given on the command line instead of a file.
    #[arg(long, global = true, value_name = "SPEC")]
    inline: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Spec file, or a bare spec such as `zmod(4)`.
    pub source: Option<String>,
    /// Ring statement to use when the input defines several (default: the last).
    #[arg(long, value_name = "NAME")]
    pub ring: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Element counts, clean-family flags and ring classes.
    Classify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Decompositions of one element.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "INDEX")]
        element: usize,
        /// clean, almost_clean, special_clean, special_almost_clean, or a star_ variant.
        #[arg(long, default_value = "clean", conflicts_with = "witness")]
        kind: String,
        /// Extract a constructive witness instead (`rickart`).
        #[arg(long, value_parser = ["rickart"])]
        witness: Option<String>,
    },
    /// The right ideal lattice and the (C1)-(C3) conditions of R_R.
    Lattice {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Lattice conditions and endomorphism-ring cleanness of a module.
    Module {
        #[command(flatten)]
        input: InputArgs,
        /// Module statement to use (default: the last one, else R_R).
        #[arg(long, value_name = "NAME", conflicts_with = "expr")]
        module: Option<String>,
        /// Module expression over the selected ring, e.g. `sum(free(1), cyclic(2))`.
        #[arg(long, value_name = "EXPR")]
        expr: Option<String>,
        /// List the idempotent + monomorphism decomposition of every endomorphism.
        #[arg(long)]
        endos: bool,
    },
    /// Run claims over a catalog.
    Verify {
        #[arg(long, conflicts_with = "claim")]
        all: bool,
        /// Claim id, or an id prefix such as `T-3.1`. Repeatable.
        #[arg(long, value_name = "ID")]
        claim: Vec<String>,
        /// `builtin`, a catalog directory, or a single spec file.
        #[arg(long, default_value = "builtin", value_name = "PATH|builtin")]
        catalog: String,
        /// List the available claims and exit.
        #[arg(long)]
        list: bool,
        /// Only per-claim totals and non-holding instances.
        #[arg(long)]
        summary: bool,
        /// Zero the timing fields in JSON output.
        #[arg(long)]
        no_timing: bool,
    },
    /// Search generated rings for ones satisfying a predicate.
    Search {
        /// Predicate over ring flags, e.g. `CS & nonsingular & !quasi_continuous`.
        #[arg(long = "where", value_name = "PREDICATE")]
        predicate: String,
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        /// Examine a seeded random sample of this many specs.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop after this many specs.
        #[arg(long)]
        max_instances: Option<usize>,
        /// Also try the structural involutions of each ring.
        #[arg(long)]
        include_star: bool,
        /// Write `.ring` and `.report` files for each finding here.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Write the builtin catalog as a directory of spec files.
    ExportCatalog {
        #[arg(value_name = "DIR")]
        dir: PathBuf,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input or arguments: exit 1.
    Input(String),
    /// A violation or an absent witness: exit 2.
    Violation(String),
    /// A computation ran out of budget: exit 3.
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Violation(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Violation(m) | Failure::Budget(m) => m,
        }
    }
}

pub struct Context {
    pub json: bool,
    pub budgets: Budgets,
    pub inline: Option<String>,
}

fn budgets(cli: &Cli) -> Budgets {
    let mut b = Budgets::default();
    if let Some(n) = cli.budget_order {
        b.max_order = n as usize;
    }
    if let Some(n) = cli.budget_ideals {
        b.max_ideals = n as usize;
    }
    if let Some(n) = cli.budget_assign {
        b.max_assignments = n;
    }
    b
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Context { json: cli.json, budgets: budgets(&cli), inline: cli.inline.clone() };
    let result = match cli.command {
        Command::Classify { input } => commands::classify(&ctx, &input),
        Command::Decompose { input, element, kind, witness } => {
            commands::decompose(&ctx, &input, element, &kind, witness.is_some())
        }
        Command::Lattice { input } => commands::lattice(&ctx, &input),
        Command::Module { input, module, expr, endos } => {
            commands::module(&ctx, &input, module.as_deref(), expr.as_deref(), endos)
        }
        Command::Verify { all, claim, catalog, list, summary, no_timing } => {
            commands::verify(&ctx, all, &claim, &catalog, list, summary, no_timing)
        }
        Command::Search { predicate, max_order, sample, seed, max_instances, include_star, out } => {
            let cfg = ringlab::verify::SearchConfig { max_order, include_star, sample, seed, max_instances, out_dir: out };
            commands::search(&ctx, &predicate, &cfg)
        }
        Command::ExportCatalog { dir } => commands::export_catalog(&ctx, &dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

//! `stochorder` command-line front end.
//!
//! Every command writes one JSON document to stdout (or CSV for `eval`) and
//! short human-readable summaries to stderr. Exit codes: 0 success or the
//! order holds, 1 checked and fails, 2 usage or evaluation error.

mod commands;
mod options;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use options::{CheckOpts, GridOpts};

#[derive(Parser, Debug)]
#[command(name = "stochorder", version, about = "Stochastic orders between exponentiated location-scale mixtures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a quantity for a scenario's pair as CSV.
    Eval {
        /// Catalog id or scenario file.
        scenario: String,
        /// cdf, pdf, sf, rhr, cdf_ratio, pdf_ratio or rhr_ratio.
        quantity: String,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        check: CheckOpts,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Check one order between the two mixtures of a scenario, or two mixture files.
    CheckOrder {
        /// Catalog id or scenario file.
        #[arg(required_unless_present_all = ["u", "v"], conflicts_with_all = ["u", "v"])]
        scenario: Option<String>,
        /// Mixture file for U.
        #[arg(long, requires = "v")]
        u: Option<std::path::PathBuf>,
        /// Mixture file for V.
        #[arg(long, requires = "u")]
        v: Option<std::path::PathBuf>,
        /// st, rh, lr or r_rh.
        #[arg(long)]
        order: String,
        /// Direction that must hold for exit code 0: u_leq_v or v_leq_u.
        #[arg(long, default_value = "u_leq_v")]
        direction: String,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        check: CheckOpts,
    },
    /// Evaluate a theorem's conditions for a scenario and check its conclusion.
    CheckTheorem {
        scenario: String,
        /// T3.1 ... T4.3; defaults to the scenario's own theorem.
        #[arg(long)]
        theorem: Option<String>,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        check: CheckOpts,
    },
    /// Run catalog scenarios and compare with their expected verdicts.
    Reproduce {
        /// Catalog ids or scenario files.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        ids: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Worker threads; results are reported in catalog order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Recorded in the report; the catalog runs are deterministic.
        #[arg(long, default_value_t = options::DEFAULT_SEED)]
        seed: u64,
        /// Do not write record files to the results directory.
        #[arg(long)]
        no_save: bool,
        #[command(flatten)]
        grid: GridOpts,
        #[command(flatten)]
        check: CheckOpts,
    },
    /// Run the numerical invariant suite.
    Validate {
        #[arg(long, default_value_t = options::DEFAULT_SEED)]
        seed: u64,
        /// Also validate the baseline in this file.
        #[arg(long)]
        baseline: Option<std::path::PathBuf>,
        /// Randomized mixture pairs for the implication audit.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// Redraw the weights of V for a weighted scenario and observe the st order.
    Experiment {
        #[arg(default_value = "EX4.1")]
        scenario: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = options::DEFAULT_SEED)]
        seed: u64,
    },
    /// List the catalog, print one scenario, or write all scenario files.
    Catalog {
        id: Option<String>,
        /// Directory to write `<id>.json` files into.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::iter::once("stochorder".to_string())
        .chain(std::env::args().skip(1))
        .collect();
    let result = match cli.command {
        Command::Eval {
            scenario,
            quantity,
            grid,
            check,
            out,
        } => commands::eval(&scenario, &quantity, &grid, &check, out.as_deref()),
        Command::CheckOrder {
            scenario,
            u,
            v,
            order,
            direction,
            grid,
            check,
        } => commands::check_order(
            &argv,
            commands::PairSource::from_args(scenario, u, v),
            &order,
            &direction,
            &grid,
            &check,
        ),
        Command::CheckTheorem {
            scenario,
            theorem,
            grid,
            check,
        } => commands::check_theorem(&argv, &scenario, theorem.as_deref(), &grid, &check),
        Command::Reproduce {
            ids,
            all,
            jobs,
            seed,
            no_save,
            grid,
            check,
        } => commands::reproduce(&argv, &ids, all, jobs, seed, !no_save, &grid, &check),
        Command::Validate { seed, baseline, pairs } => validate::run(&argv, seed, baseline.as_deref(), pairs),
        Command::Experiment { scenario, trials, seed } => commands::experiment(&argv, &scenario, trials, seed),
        Command::Catalog { id, out } => commands::catalog(id.as_deref(), out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

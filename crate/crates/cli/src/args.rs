use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rig_core::refinement::Formula;
use rig_core::Objective;

#[derive(Debug, Parser)]
#[command(name = "rig", version, about = "Almost-sure synthesis for regular games with imperfect information")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Worker threads (default: one per core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest solver universe |P|·(|A|+1) accepted
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub max_universe: usize,

    /// Largest number of environment strategies or support patterns enumerated
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub max_spoilers: u128,

    /// Largest counterexample grid resolution accepted
    #[arg(long, global = true, default_value_t = 256)]
    pub max_grid: u32,

    /// Add wall-clock timing to the report (makes output nondeterministic)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Reach,
    Buchi,
}

impl ObjectiveArg {
    pub fn objective(self) -> Objective {
        match self {
            ObjectiveArg::Reach => Objective::Reach,
            ObjectiveArg::Buchi => Objective::Buchi,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveArg::Reach => "reach",
            ObjectiveArg::Buchi => "buchi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    Psi,
    PsiPrime,
}

impl FormulaArg {
    pub fn formula(self) -> Formula {
        match self {
            FormulaArg::Psi => Formula::Psi,
            FormulaArg::PsiPrime => Formula::PsiPrime,
        }
    }
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub game: PathBuf,

    #[arg(long)]
    pub morphism: PathBuf,

    #[arg(long, value_enum, default_value_t = ObjectiveArg::Reach)]
    pub objective: ObjectiveArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the game axioms and, if given, the morphism axioms
    Validate {
        #[arg(long)]
        game: PathBuf,

        #[arg(long)]
        morphism: Option<PathBuf>,

        /// Depth of the brute-force cross-check (0 disables it)
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },

    /// Compute Y* and decide almost-sure winning
    Solve {
        #[command(flatten)]
        input: GameArgs,
    },

    /// Extract the uniform winning strategy
    Strategy {
        #[command(flatten)]
        input: GameArgs,

        /// Write the strategy file here instead of embedding it in the report
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Check a player strategy against every positional adversary
    Verify {
        #[command(flatten)]
        input: GameArgs,

        /// Player strategy (default: the extracted one)
        #[arg(long)]
        strategy: Option<PathBuf>,
    },

    /// Search for an environment strategy that spoils a player strategy
    Refute {
        #[arg(long)]
        game: PathBuf,

        #[arg(long)]
        morphism: PathBuf,

        /// Player strategy (default: every support pattern over the morphism)
        #[arg(long)]
        strategy: Option<PathBuf>,

        /// Write the first spoiler found here
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Estimate the probability of reaching colour 1 by sampling plays
    Simulate {
        #[arg(long)]
        game: PathBuf,

        #[arg(long)]
        morphism: PathBuf,

        /// Player strategy (default: the extracted one)
        #[arg(long)]
        strategy: Option<PathBuf>,

        /// Environment strategy (default: uniform over moves)
        #[arg(long)]
        env_strategy: Option<PathBuf>,

        /// Length of each play in moves
        #[arg(long)]
        rounds: usize,

        #[arg(long, default_value_t = 10_000)]
        samples: usize,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Number of sampled plays to include in the report
        #[arg(long, default_value_t = 0)]
        transcripts: usize,
    },

    /// Probability of reaching colour 1 within a horizon, computed exactly
    Prob {
        #[arg(long)]
        game: PathBuf,

        #[arg(long)]
        morphism: PathBuf,

        #[arg(long)]
        strategy: Option<PathBuf>,

        #[arg(long)]
        env_strategy: Option<PathBuf>,

        /// Horizon in moves
        #[arg(long)]
        horizon: usize,

        /// Report exact rationals next to the decimals
        #[arg(long)]
        exact: bool,
    },

    /// Games given by a location graph with observations
    Reif {
        #[command(subcommand)]
        command: ReifCommand,
    },

    /// Check the refinement counterexample on a grid of player choices
    Counterexample {
        #[arg(long, value_enum)]
        check: FormulaArg,

        #[arg(long, default_value_t = 16)]
        grid: u32,

        /// Write the certificate here
        #[arg(long)]
        certificate: Option<PathBuf>,
    },

    /// Regenerate a bundled instance and run its whole pipeline
    Demo {
        /// matching-pennies, fig3 or another bundled instance
        name: String,

        /// Write the regenerated input files here
        #[arg(long)]
        out_dir: Option<PathBuf>,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReifCommand {
    /// Compile to a game and its subset-construction morphism
    Compile {
        #[arg(long = "in")]
        input: PathBuf,

        #[arg(long)]
        out_game: PathBuf,

        #[arg(long)]
        out_morphism: PathBuf,
    },
}

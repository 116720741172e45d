mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cobweb::{ChoiceStrategy, Composition, FSequence};

/// Cobweb layers, F-nomial coefficients and their tilings.
#[derive(Debug, Parser)]
#[command(name = "cobweb", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalFlags {
    /// Largest layer volume enumerated path by path.
    #[arg(long, global = true, value_name = "N")]
    pub cap_volume: Option<u64>,
    /// Largest block graph built.
    #[arg(long, global = true, value_name = "N")]
    pub cap_vertices: Option<u64>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the randomized tiling strategy.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Search nodes allowed to exhaustive searches.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// TOML file with defaults for the flags above; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first terms of a sequence.
    Seq {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// F-nomial coefficient (n over k).
    Coeff {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        n: usize,
        k: usize,
        /// Also print both sides of the splitting recurrence.
        #[arg(long)]
        check_recurrence: bool,
    },
    /// Multi F-nomial coefficient (n over b1,...,bk).
    Multicoeff {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        n: usize,
        #[arg(value_parser = parse_composition)]
        parts: Composition,
        #[arg(long)]
        check_recurrence: bool,
    },
    /// Bounded admissibility check; exits 1 on a non-integral F-nomial.
    Admissible {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        #[arg(long, default_value_t = 12)]
        bound: usize,
    },
    /// Volume and maximal paths of the layer <k -> n>.
    Paths {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        k: usize,
        n: usize,
        /// List every maximal path (refused above --cap-volume).
        #[arg(long)]
        list: bool,
        /// Write the layer as a block-free tiling document.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Tile <k -> n> with blocks P_m.
    Tile {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        k: usize,
        n: usize,
        /// lowest, seed:N or all.
        #[arg(long)]
        strategy: Option<ChoiceStrategy>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Tile <1 -> n> with multi-blocks P_{b1,...,bk}.
    Multitile {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        n: usize,
        #[arg(value_parser = parse_composition)]
        parts: Composition,
        /// lowest or seed:N.
        #[arg(long)]
        strategy: Option<ChoiceStrategy>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Count tilings of <k -> n>.
    CountTilings {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        k: usize,
        n: usize,
        #[arg(long, value_enum, default_value_t = CountMode::Formula)]
        mode: CountMode,
    },
    /// Build the block disjointness graph of <k -> n>.
    Graph {
        #[arg(value_parser = parse_family)]
        family: FSequence,
        k: usize,
        n: usize,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        /// Write the graph document.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Search for a clique of tiling size; exits 1 when there is none.
        #[arg(long)]
        find_clique: bool,
        /// Count cliques of tiling size.
        #[arg(long)]
        count_cliques: bool,
        #[arg(long)]
        count_max_cliques: bool,
    },
    /// Check a tiling document; exits 1 when it is not a tiling.
    Verify { file: PathBuf },
    /// Draw a tiling or layer document as SVG.
    Render {
        file: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        level_spacing: Option<f64>,
        #[arg(long)]
        vertex_spacing: Option<f64>,
        #[arg(long)]
        vertex_radius: Option<f64>,
        /// Comma-separated block colors.
        #[arg(long, value_delimiter = ',')]
        colors: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CountMode {
    /// The construction count recurrence.
    Formula,
    /// Run every choice of the construction.
    Construction,
    /// Exact cover search over all blocks.
    Exhaustive,
}

fn parse_family(s: &str) -> Result<FSequence, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Errors in how the tool was invoked, as opposed to failures of the
/// computation itself.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

//! `fibrilgeom` — discrete-curve geometry and persistent homology for
//! protein backbones.
//!
//! Subcommands: `hop`, `geometry`, `regress`, `ph`, `compare`, `rmsd`, and
//! `rerun` (replay a run from its manifest). Every run writes its artifacts
//! plus a `manifest.json` into the output directory. `FIBRILGEOM_THREADS`
//! caps internal parallelism.

mod app;

use app::{AnchorArg, AppError, AtomsArg, ResidueRange, RunConfig};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "fibrilgeom",
    version,
    about = "Geometric and topological analysis of protein backbone curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairInputs {
    /// First structure (PDB format).
    #[arg(long)]
    a: PathBuf,
    /// Second structure (PDB format).
    #[arg(long)]
    b: PathBuf,
    /// Chain to analyze in both structures.
    #[arg(long)]
    chain: char,
    /// Chain in the second structure, when it differs.
    #[arg(long)]
    chain_b: Option<char>,
    /// Backbone atoms used as curve vertices.
    #[arg(long, value_enum, default_value_t = AtomsArg::Ca)]
    atoms: AtomsArg,
    /// Inclusive residue range start:end.
    #[arg(long)]
    range: Option<ResidueRange>,
}

#[derive(Args)]
struct OutputDir {
    /// Output directory for artifacts and the manifest.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated hop-distance matrix of two chains, optionally thresholded.
    Hop {
        #[command(flatten)]
        inputs: PairInputs,
        /// Binary-map cutoff in Å (entries strictly above are set).
        #[arg(long)]
        cutoff: Option<f64>,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Per-atom curvature/torsion profile of one backbone chain.
    Geometry {
        /// Structure to analyze (PDB format).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        chain: char,
        /// Inclusive residue range start:end.
        #[arg(long)]
        range: Option<ResidueRange>,
        /// Inserting point anchoring the circle normal.
        #[arg(long, value_enum, default_value_t = AnchorArg::B)]
        normal_anchor: AnchorArg,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Torsion-vs-hydrogen-bond-distance regression over fibril layers.
    Regress {
        /// Structure to analyze (PDB format).
        #[arg(long)]
        input: PathBuf,
        /// Layer stacking order as a comma-separated chain list, e.g. A,B,C.
        #[arg(long, value_delimiter = ',')]
        layers: Vec<char>,
        /// Inserting point anchoring the circle normal.
        #[arg(long, value_enum, default_value_t = AnchorArg::B)]
        normal_anchor: AnchorArg,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Persistence diagram of one chain's point cloud.
    Ph {
        /// Structure to analyze (PDB format).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        chain: char,
        /// Backbone atoms used as the point cloud.
        #[arg(long, value_enum, default_value_t = AtomsArg::Ca)]
        atoms: AtomsArg,
        /// Inclusive residue range start:end.
        #[arg(long)]
        range: Option<ResidueRange>,
        /// Maximal filtration value in Å.
        #[arg(long)]
        max_eps: f64,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Diagrams of two structures plus bottleneck and Wasserstein-q distances.
    Compare {
        #[command(flatten)]
        inputs: PairInputs,
        /// Maximal filtration value in Å; also replaces infinite deaths.
        #[arg(long)]
        max_eps: f64,
        /// Wasserstein exponent (q ≥ 1).
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Kabsch-aligned RMSD between corresponding vertices of two chains.
    Rmsd {
        #[command(flatten)]
        inputs: PairInputs,
        #[command(flatten)]
        output: OutputDir,
    },
    /// Re-run a previous invocation from its manifest.
    Rerun {
        /// Manifest written by a previous run.
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        output: OutputDir,
    },
}

impl Command {
    fn into_parts(self) -> Result<(RunConfig, PathBuf), AppError> {
        Ok(match self {
            Command::Hop {
                inputs,
                cutoff,
                output,
            } => (
                RunConfig::Hop {
                    a: inputs.a,
                    b: inputs.b,
                    chain: inputs.chain,
                    chain_b: inputs.chain_b,
                    atoms: inputs.atoms,
                    range: inputs.range,
                    cutoff,
                },
                output.out,
            ),
            Command::Geometry {
                input,
                chain,
                range,
                normal_anchor,
                output,
            } => (
                RunConfig::Geometry {
                    input,
                    chain,
                    range,
                    normal_anchor,
                },
                output.out,
            ),
            Command::Regress {
                input,
                layers,
                normal_anchor,
                output,
            } => (
                RunConfig::Regress {
                    input,
                    layers,
                    normal_anchor,
                },
                output.out,
            ),
            Command::Ph {
                input,
                chain,
                atoms,
                range,
                max_eps,
                output,
            } => (
                RunConfig::Ph {
                    input,
                    chain,
                    atoms,
                    range,
                    max_eps,
                },
                output.out,
            ),
            Command::Compare {
                inputs,
                max_eps,
                q,
                output,
            } => (
                RunConfig::Compare {
                    a: inputs.a,
                    b: inputs.b,
                    chain: inputs.chain,
                    chain_b: inputs.chain_b,
                    atoms: inputs.atoms,
                    range: inputs.range,
                    max_eps,
                    q,
                },
                output.out,
            ),
            Command::Rmsd { inputs, output } => (
                RunConfig::Rmsd {
                    a: inputs.a,
                    b: inputs.b,
                    chain: inputs.chain,
                    chain_b: inputs.chain_b,
                    atoms: inputs.atoms,
                    range: inputs.range,
                },
                output.out,
            ),
            Command::Rerun { manifest, output } => {
                (app::config_from_manifest(&manifest)?, output.out)
            }
        })
    }
}

fn init_thread_cap() {
    if let Ok(text) = std::env::var("FIBRILGEOM_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn main() {
    init_thread_cap();
    let cli = Cli::parse();
    let result = cli
        .command
        .into_parts()
        .and_then(|(config, out)| app::run(&config, &out));
    if let Err(e) = result {
        eprintln!("error: {}: {}", e.category.label(), e.message);
        std::process::exit(e.category.exit_code());
    }
}

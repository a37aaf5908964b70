use std::path::PathBuf;
use std::process;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use sphere_lattice::bench::BenchFamily;
use sphere_lattice::lattice::{Chirality, LatticeFamily};
use sphere_lattice_cli::commands::{
    cmd_benchmark, cmd_estimate, cmd_fit, cmd_gen_lattice, cmd_spiral, parse_fractions,
    LatticeSpec,
};
use sphere_lattice_cli::CliResult;

#[derive(Parser)]
#[command(
    name = "sphere-lattice",
    version,
    about = "Spherical sampling lattices and point-counting area measurement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice as CSV (index,lat_deg,lon_deg,weight)
    GenLattice {
        /// Lattice family: latlon | fibonacci
        #[arg(long, value_parser = LatticeFamily::from_str)]
        family: LatticeFamily,
        /// Size parameter: grid number k (latlon) or spiral N (fibonacci)
        #[arg(long)]
        param: u64,
        /// Spiral handedness for fibonacci: eastward | westward
        #[arg(long, default_value = "eastward", value_parser = Chirality::from_str)]
        chirality: Chirality,
        #[arg(long)]
        out: PathBuf,
    },
    /// Trace the continuous generative spiral as CSV (t,lat_deg,lon_deg)
    Spiral {
        /// Spiral parameter N; the trace covers t in [-N-1/2, N+1/2]
        #[arg(long)]
        param: u64,
        #[arg(long, default_value = "eastward", value_parser = Chirality::from_str)]
        chirality: Chirality,
        /// Samples per unit index step (even values hit the lattice points)
        #[arg(long, default_value_t = 64)]
        samples_per_turn: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the area fraction covered by a union of caps
    Estimate {
        #[arg(long, value_parser = LatticeFamily::from_str)]
        family: LatticeFamily,
        #[arg(long)]
        param: u64,
        #[arg(long, default_value = "eastward", value_parser = Chirality::from_str)]
        chirality: Chirality,
        /// Cap list CSV: lat_deg,lon_deg,radius_rad per row (radius in radians)
        #[arg(long)]
        caps: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo error sweep over cap sizes and lattice sizes
    Benchmark {
        /// Families to measure: latlon | fibonacci | random (comma-separated)
        #[arg(long, value_delimiter = ',', value_parser = BenchFamily::from_str)]
        family: Vec<BenchFamily>,
        /// Target point counts; each family uses its nearest achievable size
        #[arg(long, value_delimiter = ',')]
        points: Vec<u64>,
        /// Cap fractions: a grid size (e.g. 40) or an explicit list in (0, 0.5]
        #[arg(long, default_value = "40")]
        fractions: String,
        /// Random caps per (lattice, fraction) cell
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit rmse_max ~ k P^a per family from a benchmark sweep
    Fit {
        /// Sweep CSV produced by `benchmark`
        #[arg(long)]
        sweep: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::GenLattice { family, param, chirality, out } => {
            cmd_gen_lattice(&LatticeSpec { family, param, chirality }, &out)
        }
        Command::Spiral { param, chirality, samples_per_turn, out } => {
            cmd_spiral(param, chirality, samples_per_turn, &out)
        }
        Command::Estimate { family, param, chirality, caps, out } => {
            cmd_estimate(&LatticeSpec { family, param, chirality }, &caps, &out)
        }
        Command::Benchmark { family, points, fractions, trials, seed, out } => {
            let fractions = parse_fractions(&fractions)?;
            cmd_benchmark(&family, &points, &fractions, trials, seed, &out)
        }
        Command::Fit { sweep, out } => cmd_fit(&sweep, &out),
    }
}

fn main() {
    // clap itself exits with code 2 on usage errors.
    let cli = Cli::parse();
    if let Err(error) = run(cli) {
        eprintln!("error: {error}");
        process::exit(error.exit_code());
    }
}

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "xxchain",
    version,
    about = "Inhomogeneous XX chains as free fermions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Perfect state transfer
    #[command(subcommand)]
    Pst(PstCommand),
    /// Boundary-driven heat transport
    #[command(subcommand)]
    Transport(TransportCommand),
    /// Ground-state entanglement entropy and the Heun operator
    #[command(subcommand)]
    Ent(EntCommand),
    /// Fermionic logarithmic negativity
    #[command(subcommand)]
    Neg(NegCommand),
}

#[derive(Debug, Subcommand)]
pub enum PstCommand {
    /// Mirror symmetry, spectral gap condition and fidelity at time tau
    Check {
        #[command(flatten)]
        chain: ChainSource,
        /// Transfer time (defaults to π)
        #[arg(long)]
        tau: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Build the mirror-symmetric chain with a prescribed spectrum
    Synthesize {
        /// JSON file holding an array of eigenvalues
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Auto,
    Euclid,
    Lanczos,
}

#[derive(Debug, Subcommand)]
pub enum TransportCommand {
    /// Steady-state heat current between two baths
    Current {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long = "T0")]
        t0: f64,
        #[arg(long = "TN")]
        tn: f64,
        #[command(flatten)]
        bath: BathArgs,
        /// `auto` moves the lowest mode to 0.5, a number shifts every field by it
        #[arg(long, default_value = "none")]
        shift: Shift,
        #[command(flatten)]
        out: Output,
    },
    /// Conductivity against chain length; CSV columns N, kappa, hL
    Scan {
        #[command(flatten)]
        family: Family,
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "dT")]
        dt: f64,
        /// Chain lengths as start:stop:step
        #[arg(long = "N")]
        n: Range,
        #[command(flatten)]
        bath: BathArgs,
        #[arg(long, default_value = "auto")]
        shift: Shift,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum EntCommand {
    /// Entropy of the first ell + 1 sites
    Entropy {
        #[command(flatten)]
        chain: ChainSource,
        /// Highest occupied mode: auto, half or an index
        #[arg(long = "K", default_value = "auto")]
        k: Filling,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = Route::Direct)]
        route: Route,
        #[command(flatten)]
        out: Output,
    },
    /// Entropy at fixed filling and cut ratios; CSV columns N, ell, S, route, commutator_residual
    Scan {
        #[command(flatten)]
        family: Family,
        #[arg(long = "ratio-l")]
        ratio_l: f64,
        #[arg(long = "ratio-k")]
        ratio_k: f64,
        #[arg(long = "N")]
        n: Range,
        #[arg(long, value_enum, default_value_t = Route::Heun)]
        route: Route,
        #[command(flatten)]
        out: Output,
    },
    /// Affine fit of the entanglement Hamiltonian in terms of the Heun operator
    FitAffine {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long = "K", default_value = "half")]
        k: Filling,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Direct,
    Heun,
}

#[derive(Debug, Subcommand)]
pub enum NegCommand {
    /// Negativity between two single sites
    Pair {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long = "K", default_value = "half")]
        k: Filling,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Negativity between two adjacent intervals
    Adjacent {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long = "K", default_value = "half")]
        k: Filling,
        #[arg(long)]
        ell1: usize,
        #[arg(long)]
        ell2: usize,
        /// First site of the right interval, or `bulk` for the chain middle
        #[arg(long, default_value = "bulk")]
        center: Placement,
        #[command(flatten)]
        out: Output,
    },
    /// Skeletal negativity against separation; CSV columns d, Ef, Ef_skeletal, C_mn, C_asymptotic
    Sweep {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long = "K", default_value = "half")]
        k: Filling,
        #[arg(long, value_enum, default_value_t = SweepMode::Skeletal)]
        mode: SweepMode,
        #[arg(long)]
        d: Range,
        /// Left site of each pair: an index, or `bulk` to center pairs in the chain
        #[arg(long, default_value = "bulk")]
        leftmost: Placement,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepMode {
    Skeletal,
}

/// Exactly one way of naming the chain.
#[derive(Debug, Clone, Args)]
#[group(skip)]
pub struct ChainSource {
    /// Chain description file (JSON)
    #[arg(long, conflicts_with_all = ["chain_json", "family"])]
    pub chain: Option<PathBuf>,
    /// Chain description given inline
    #[arg(long = "chain-json", conflicts_with = "family")]
    pub chain_json: Option<String>,
    /// Built-in family; combine with --N and --p or --J/--B
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Chain has N + 1 sites
    #[arg(long = "N", id = "chain_n", requires = "family")]
    pub n: Option<usize>,
    #[arg(long, requires = "family")]
    pub p: Option<f64>,
    #[arg(long = "J", requires = "family")]
    pub coupling: Option<f64>,
    #[arg(long = "B", requires = "family")]
    pub field: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Family {
    #[arg(long, value_enum, default_value_t = FamilyKind::Krawtchouk)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long = "J", default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long = "B", default_value_t = 0.0)]
    pub field: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Krawtchouk,
    Homogeneous,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BathArgs {
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `start:stop:step`, inclusive of `stop` when it lies on the grid. A single
/// number is a one-point range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl Range {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || format!("bad range `{s}`: expected start:stop:step with start <= stop and step > 0");
        let parts: Vec<&str> = s.split(':').collect();
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let (start, stop, step) = match nums[..] {
            [v] => (v, v, 1),
            [a, b] => (a, b, 1),
            [a, b, c] => (a, b, c),
            _ => return Err(bad()),
        };
        if start > stop || step == 0 {
            return Err(bad());
        }
        Ok(Range { start, stop, step })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shift {
    None,
    Auto,
    By(f64),
}

impl FromStr for Shift {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Shift::None),
            "auto" => Ok(Shift::Auto),
            _ => s
                .parse()
                .map(Shift::By)
                .map_err(|_| format!("expected none, auto or a number, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filling {
    /// All negative modes.
    Auto,
    /// `K = ⌈(N + 1)/2⌉ − 1`.
    Half,
    Index(usize),
}

impl FromStr for Filling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Filling::Auto),
            "half" => Ok(Filling::Half),
            _ => s
                .parse()
                .map(Filling::Index)
                .map_err(|_| format!("expected auto, half or a mode index, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Bulk,
    Site(usize),
}

impl FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bulk" => Ok(Placement::Bulk),
            _ => s
                .parse()
                .map(Placement::Site)
                .map_err(|_| format!("expected bulk or a site index, got `{s}`")),
        }
    }
}

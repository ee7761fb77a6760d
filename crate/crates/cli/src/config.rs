use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zkamp::protocol::{Instance, VerifierDims};
use zkamp::symm::{parse_edges, Graph};

use crate::CliError;

/// Largest vertex count for full-space density comparisons.
pub const MAX_N: usize = 4;

pub const SEED_ENV: &str = "ZKAMP_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "zkamp",
    version,
    about = "Verify amplified zero-knowledge simulators by exact simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slice block of A⁻¹ΠA against I/2.
    VerifyEq1(CommonArgs),
    /// One-step amplification with phases (i, i), plus the derivation chains.
    VerifyEq2(CommonArgs),
    /// Trace distance between the simulated and the real verifier view.
    ZkCheck(CommonArgs),
    /// Measure-and-reflect variant of the simulator.
    Watrous(CommonArgs),
    /// Block identities and invariant-plane checks.
    Blocks(CommonArgs),
    /// Exact-amplification phases over a grid of success probabilities.
    Phases(CommonArgs),
    /// Measure-and-reflect schedule for λ = 1/m.
    Schedule(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Vertex count.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Edge list of G0, e.g. `01,12`, or a full literal `n=3;edges=01,12`.
    #[arg(long)]
    pub g0: Option<String>,
    /// Edge list of G1; defaults to G0.
    #[arg(long)]
    pub g1: Option<String>,
    /// Register dimension of the toy circuit (λ = 1/m).
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Overridden by the ZKAMP_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim_w: usize,
    #[arg(long, default_value_t = 2)]
    pub dim_v: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    VerifyEq1,
    VerifyEq2,
    ZkCheck,
    Watrous,
    Blocks,
    Phases,
    Schedule,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::VerifyEq1 => "verify-eq1",
            Self::VerifyEq2 => "verify-eq2",
            Self::ZkCheck => "zk-check",
            Self::Watrous => "watrous",
            Self::Blocks => "blocks",
            Self::Phases => "phases",
            Self::Schedule => "schedule",
        }
    }

    fn needs_instance(self) -> bool {
        !matches!(self, Self::Phases | Self::Schedule)
    }
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub dims: VerifierDims,
    pub instance: Option<Instance>,
    pub output: Option<PathBuf>,
}

impl Command {
    pub fn split(self) -> (CommandKind, CommonArgs) {
        match self {
            Self::VerifyEq1(a) => (CommandKind::VerifyEq1, a),
            Self::VerifyEq2(a) => (CommandKind::VerifyEq2, a),
            Self::ZkCheck(a) => (CommandKind::ZkCheck, a),
            Self::Watrous(a) => (CommandKind::Watrous, a),
            Self::Blocks(a) => (CommandKind::Blocks, a),
            Self::Phases(a) => (CommandKind::Phases, a),
            Self::Schedule(a) => (CommandKind::Schedule, a),
        }
    }
}

fn path_graph(n: usize) -> Result<Graph, CliError> {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::new(n, &edges).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_graph(n: usize, text: &str) -> Result<Graph, CliError> {
    let g = if text.trim_start().starts_with("n=") {
        text.parse::<Graph>()
    } else {
        parse_edges(n, text)
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    if g.n() != n {
        return Err(CliError::Config(format!(
            "graph `{text}` has {} vertices, expected {n}",
            g.n()
        )));
    }
    Ok(g)
}

impl RunConfig {
    /// Validates arguments; `env_seed` is the raw value of `ZKAMP_SEED`.
    pub fn new(command: CommandKind, args: CommonArgs, env_seed: Option<&str>) -> Result<Self, CliError> {
        if args.trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        if args.dim_w == 0 || args.dim_v == 0 {
            return Err(CliError::Config("register dimensions must be positive".into()));
        }
        if args.m < 2 {
            return Err(CliError::Config("--m must be at least 2".into()));
        }
        if command.needs_instance() && !(1..=MAX_N).contains(&args.n) {
            return Err(CliError::Config(format!(
                "--n must be between 1 and {MAX_N}, got {}",
                args.n
            )));
        }
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{SEED_ENV}={s} is not an unsigned integer")))?,
            None => args.seed,
        };
        let instance = if command.needs_instance() {
            let g0 = match &args.g0 {
                Some(s) => parse_graph(args.n, s)?,
                None => path_graph(args.n)?,
            };
            let g1 = match &args.g1 {
                Some(s) => parse_graph(args.n, s)?,
                None => g0.clone(),
            };
            Some(Instance::new(g0, g1).map_err(|e| CliError::Config(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            command,
            n: args.n,
            m: args.m,
            trials: args.trials,
            seed,
            dims: VerifierDims {
                w: args.dim_w,
                v: args.dim_v,
            },
            instance,
            output: args.output,
        })
    }

    /// Seed for trial `t`, also used to derive the auxiliary state.
    pub fn trial_seed(&self, t: usize) -> u64 {
        self.seed.wrapping_add(t as u64)
    }
}

//! `g2re`: command-line front end for the G2 reflection equation engine.
//!
//! Exit status is 0 when every check of the command passes, 1 when a check
//! fails and 2 on invalid configuration.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use g2re_core::lj::UParams;
use g2re_core::reduction::Kind;
use g2re_core::scalar::Scalar;
use g2re_core::verify::VerifyMode;

#[derive(Parser, Debug)]
#[command(name = "g2re", version, about = "Exact symbolic engine for the G2 reflection equation")]
pub struct Cli {
    /// Write the JSON artifact of the command here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the six positive roots from the reduced word (1,2,1,2,1,2).
    Roots,
    /// Build the scattering configuration for angles u > v > 0 and check it.
    Pappus {
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
    },
    /// Solve the intertwiner on all blocks up to (pmax, qmax).
    Intertwiner(Cutoffs),
    /// Involutivity, integrality, symmetry and all intertwining relations.
    CheckF(TableArgs),
    /// Verify the 64 components of the quantized reflection equation against the intertwiner.
    VerifyQre {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        u: UArgs,
    },
    /// Match every component with its partner intertwining relation.
    MatchAppendixA {
        #[command(flatten)]
        u: UArgs,
    },
    /// Check the boundary vector identities on every block.
    CheckConjecture(TableArgs),
    /// Build the two-factor matrix R.
    BuildR {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
    },
    /// Build the three-factor matrix G.
    BuildG {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        u: UArgs,
    },
    /// Verify the Yang-Baxter equation for R.
    VerifyYbe {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Verify the G2 reflection equation for (R, G).
    VerifyG2re {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        u: UArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Rescale R blockwise by 1 + c (l - m) z before checking (trace kind only).
        #[arg(long, allow_hyphen_values = true)]
        rescale: Option<String>,
    },
    /// Compare the built n = 1, 2 matrices with the transcribed golden values.
    ReproduceAppendixB,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Cutoffs {
    #[arg(long, default_value_t = 3)]
    pub pmax: i32,
    #[arg(long, default_value_t = 6)]
    pub qmax: i32,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[command(flatten)]
    pub cutoffs: Cutoffs,
    /// Load a previously written intertwiner table instead of solving.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Tr,
    Bv,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Tr => Kind::Trace,
            KindArg::Bv => Kind::Boundary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum UModeArg {
    Generic,
    Spec,
}

#[derive(Args, Debug, Clone)]
pub struct UArgs {
    #[arg(long, value_enum, default_value_t = UModeArg::Generic)]
    pub umode: UModeArg,
    /// Specialised values as scalar text in q; must satisfy u1 u2 + u3 u4 = q + 1/q.
    /// Defaults to (1, 1, 1, r - 1).
    #[arg(long)]
    pub u1: Option<String>,
    #[arg(long)]
    pub u2: Option<String>,
    #[arg(long)]
    pub u3: Option<String>,
    #[arg(long)]
    pub u4: Option<String>,
}

impl UArgs {
    pub fn resolve(&self) -> Result<UParams, String> {
        let given = [&self.u1, &self.u2, &self.u3, &self.u4];
        match self.umode {
            UModeArg::Generic => {
                if given.iter().any(|g| g.is_some()) {
                    return Err("--u1..--u4 need --umode spec".into());
                }
                Ok(UParams::generic())
            }
            UModeArg::Spec => {
                if given.iter().all(|g| g.is_none()) {
                    return Ok(UParams::default_specialized());
                }
                let mut vals = Vec::new();
                for (i, g) in given.iter().enumerate() {
                    let text = g.as_ref().ok_or_else(|| format!("--u{} missing", i + 1))?;
                    let s: Scalar = text.parse().map_err(|e| format!("--u{}: {e}", i + 1))?;
                    if s.uses(g2re_core::scalar::Var::U1)
                        || s.uses(g2re_core::scalar::Var::U3)
                        || s.uses(g2re_core::scalar::Var::U4)
                        || s.uses(g2re_core::scalar::Var::Z)
                    {
                        return Err(format!("--u{}: specialised values may only depend on q", i + 1));
                    }
                    vals.push(s);
                }
                let [a, b, c, d]: [Scalar; 4] = vals.try_into().expect("four values");
                UParams::specialized(a, b, c, d).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum ModeArg {
    Symbolic,
    Points,
}

#[derive(Args, Debug, Clone)]
pub struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Symbolic)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Bound on numerators and denominators of sampled rationals.
    #[arg(long, default_value_t = 97)]
    pub height: i64,
}

impl ModeArgs {
    pub fn resolve(&self) -> Result<VerifyMode, String> {
        match self.mode {
            ModeArg::Symbolic => Ok(VerifyMode::Symbolic),
            ModeArg::Points => {
                if self.points == 0 || self.height < 2 {
                    return Err("--points must be positive and --height at least 2".into());
                }
                Ok(VerifyMode::Points { count: self.points, seed: self.seed, height: self.height })
            }
        }
    }
}

fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("G2RE_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("G2RE_THREADS={v:?} is not a number"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            if let Some(path) = &cli.out {
                let text = serde_json::to_string_pretty(&outcome.artifact).expect("json") + "\n";
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                if let Some(f) = &outcome.first_failure {
                    eprintln!("FAILED: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

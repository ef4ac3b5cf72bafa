//! `krl`: batch driver for the verification workbench.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krl_core::KrlError;

#[derive(Parser, Debug)]
#[command(name = "krl", version, about = "Exact checks for sparse sets, R(n), graph foldings, flags and Y(G)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Size cap for enumerations and complexes (overrides KRL_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sparse sets: enumeration, counts, generating function.
    Sparse {
        #[arg(long)]
        n: usize,
        /// Also compare the generating-function coefficients up to `n`.
        #[arg(long)]
        gf: bool,
    },
    /// Non-crossing matchings and the λ/μ bijection.
    Ncm {
        #[arg(long)]
        n: usize,
    },
    /// The ring R(n): ranks, reduction, ρ and leading terms.
    Ring {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ranks: bool,
        /// Reduce the monomial x_J, e.g. `--reduce 1,3`.
        #[arg(long, value_delimiter = ',')]
        reduce: Option<Vec<usize>>,
        /// Print ρ of the reduced monomial given by `--reduce`.
        #[arg(long)]
        rho: bool,
        /// Leading-term and split-monomorphism check.
        #[arg(long)]
        leading: bool,
        /// Random multiplicativity checks of the reduction (uses `--seed`).
        #[arg(long, default_value_t = 0)]
        random_checks: usize,
    },
    /// Tree foldings of C(n) or of a graph file, and hedgehogs.
    Fold {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Pinch set `A` for the hedgehog of C(n), e.g. `--pinch 1,3`.
        #[arg(long, value_delimiter = ',')]
        pinch: Option<Vec<usize>>,
    },
    /// Graded structure of S(G).
    Sgring {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Exactness of the total complex.
    Mvss {
        #[arg(long)]
        n: usize,
    },
    /// Flags over F_q: cover, chain lemmas, trees.
    Flags {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        lemmas: bool,
        #[arg(long)]
        tree: bool,
    },
    /// Cohomology of Y(G) against S(G).
    Cohomology {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Allow C(n) with n ≥ 3 and other large complexes.
        #[arg(long)]
        large: bool,
        /// Also write the simplicial complex, one simplex per line, to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Standard dotted matchings against the (μ(J*), J*∖J) description, for all sizes up to `n`.
    Conjecture {
        #[arg(long)]
        n: usize,
    },
}

/// What a subcommand produced.
pub struct Outcome {
    pub ok: bool,
    pub json: serde_json::Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

fn budget(g: &Global, default: u64) -> Result<u64, KrlError> {
    if let Some(b) = g.budget {
        return if b == 0 { Err(KrlError::Input("--budget must be positive".into())) } else { Ok(b) };
    }
    match std::env::var("KRL_BUDGET") {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(KrlError::Input(format!("KRL_BUDGET={s} is not a positive integer"))),
        },
        Err(_) => Ok(default),
    }
}

fn emit(g: &Global, out: &Outcome) -> Result<(), KrlError> {
    let text = match g.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).map_err(|e| KrlError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let Some((head, rows)) = &out.table else {
                return Err(KrlError::Input("this subcommand has no CSV form; use --format json".into()));
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| KrlError::Internal(e.to_string());
            w.write_record(head).map_err(io)?;
            for r in rows {
                w.write_record(r).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| KrlError::Internal(e.to_string()))?)
                .map_err(|e| KrlError::Internal(e.to_string()))?
        }
    };
    match &g.out {
        Some(p) => std::fs::write(p, text).map_err(|e| KrlError::Input(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| KrlError::Internal(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if j == 0 {
            eprintln!("krl: --jobs must be positive");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let result = commands::run(&cli.command, &cli.global).and_then(|o| emit(&cli.global, &o).map(|_| o.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("krl: falsifier found; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("krl: {e}");
            ExitCode::from(2)
        }
    }
}

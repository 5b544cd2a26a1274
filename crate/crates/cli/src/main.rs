//! `sumsets`: exact growth analysis of iterated sumsets from the command
//! line. Exit codes: 0 success, 1 a theorem-backed check reported a
//! violation (bug signal), 2 usage or input errors.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use sumsets_cli as cli;

#[derive(Parser)]
#[command(name = "sumsets", version, about = "Exact iterated-sumset analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named extremal construction and write it to a .pts file
    /// (plus a <out>.json sidecar with the realized parameters).
    Gen {
        /// geometric | ruzsa | random | gap | higher
        family: String,
        /// Progression length (geometric).
        #[arg(long)]
        n: Option<u32>,
        /// Progression base (geometric; default 3).
        #[arg(long)]
        base: Option<i64>,
        /// Side/box parameter (ruzsa, random, higher).
        #[arg(long)]
        m: Option<u64>,
        /// Growth target K (ruzsa, random, gap); rational like 8 or 2.5.
        #[arg(long = "K")]
        kparam: Option<String>,
        /// Density in (0,1] (random).
        #[arg(long)]
        p: Option<String>,
        /// RNG seed (random; default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Gap scale (gap).
        #[arg(long)]
        k: Option<u64>,
        /// Dimension (gap).
        #[arg(long)]
        d: Option<u32>,
        /// Fold count (higher).
        #[arg(long)]
        h: Option<u32>,
        /// Growth exponent target (higher); rational.
        #[arg(long)]
        alpha: Option<String>,
        /// Output .pts path.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Growth profile |A|,|2A|, ..., doubling and sharpness ratios.
    Stats {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_h: u32,
        #[arg(long)]
        json: bool,
    },
    /// Verify every growth inequality on a set; exit 1 on any violation.
    Check {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_h: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical multiset embedding of hA, of (h-1)A, and the
    /// shadow of the former; exit 1 if the shadow identity fails.
    Embed {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        h: u32,
        /// Print only the JSON summary, not the three families.
        #[arg(long)]
        json: bool,
    },
    /// Test whether a set is h-dissociated (|hA| hits the simplex ceiling).
    Dissoc {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long)]
        json: bool,
    },
    /// Inverse extraction: given near-maximal growth, find the structured
    /// subsets X (Plünnecke split) and Y (dissociated-type witness).
    Extract {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        h: u32,
        /// Growth constant M; rational like 2.0 or 87/100.
        #[arg(long = "M")]
        m: String,
        /// h2 | alpha | K
        #[arg(long, default_value = "h2")]
        variant: String,
        /// exact | greedy
        #[arg(long, default_value = "exact")]
        strategy: String,
        /// Largest |A| the exact strategy will scan exhaustively.
        #[arg(long)]
        max_exact: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Distance from the simplex ceiling and the best nearly dissociated
    /// witness inside the predicted size window.
    Stability {
        #[arg(short, long)]
        input: PathBuf,
        /// exact | greedy
        #[arg(long, default_value = "exact")]
        strategy: String,
        /// Largest |A| the exact strategy will scan exhaustively.
        #[arg(long)]
        max_exact: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run a parameter sweep from a config file; writes CSV + JSON lines.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Property-fuzz random sets; exit 1 with a minimized witness if any
    /// theorem-backed check fails.
    Fuzz {
        /// Group moduli, whitespace separated; 0 = infinite ("0" = Z,
        /// "16 16" = a 16x16 torus).
        #[arg(long, default_value = "0")]
        group: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Largest sampled set size.
        #[arg(long, default_value_t = 8)]
        size_max: usize,
        /// Coordinate window [0, w] for infinite coordinates.
        #[arg(long, default_value_t = 30)]
        window: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_h: u32,
        /// Worker count (defaults to SUMSETS_THREADS or all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn run(cmd: Cmd) -> anyhow::Result<i32> {
    match cmd {
        Cmd::Gen { family, n, base, m, kparam, p, seed, k, d, h, alpha, out } => {
            let params = cli::GenParams {
                n,
                base,
                m,
                kparam: kparam.as_deref().map(sumsets::exact::parse_rat).transpose()?,
                p: p.as_deref().map(sumsets::exact::parse_rat).transpose()?,
                seed,
                k,
                d,
                h,
                alpha: alpha.as_deref().map(sumsets::exact::parse_rat).transpose()?,
            };
            cli::cmd_gen(&family, &params, &out)
        }
        Cmd::Stats { input, max_h, json } => cli::cmd_stats(&input, max_h, json),
        Cmd::Check { input, max_h, json } => cli::cmd_check(&input, max_h, json),
        Cmd::Embed { input, h, json } => cli::cmd_embed(&input, h, json),
        Cmd::Dissoc { input, h, json } => cli::cmd_dissoc(&input, h, json),
        Cmd::Extract { input, h, m, variant, strategy, max_exact, json } => {
            cli::cmd_extract(&input, h, &m, &variant, &strategy, max_exact, json)
        }
        Cmd::Stability { input, strategy, max_exact, json } => {
            cli::cmd_stability(&input, &strategy, max_exact, json)
        }
        Cmd::Sweep { config } => cli::sweep::cmd_sweep(&config),
        Cmd::Fuzz { group, trials, size_max, window, seed, max_h, threads } => {
            cli::fuzz::cmd_fuzz(&group, trials, size_max, window, seed, max_h, threads)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when downstream closes the pipe (`sumsets ... | head`)
    // instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse(); // clap exits 2 on usage errors
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

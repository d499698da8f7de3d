//! Certified calculator for the Green's-function metric masses of
//! S²×S², G(2,4) and ℝP²×ℝP².

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spheremass_cli::{cache, run_convergence, run_mass, run_t0, run_verify, Format, Mode};
use spheremass_core::mass::Manifold;

#[derive(Parser)]
#[command(
    name = "spheremass",
    about = "Certified mass enclosures for the Green's-function metrics of S2xS2, G(2,4) and RP2xRP2",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldArg {
    S2xs2,
    G24,
    Rp2xrp2,
    All,
}

impl ManifoldArg {
    fn resolve(self) -> Vec<Manifold> {
        match self {
            ManifoldArg::S2xs2 => vec![Manifold::S2xS2],
            ManifoldArg::G24 => vec![Manifold::G24],
            ManifoldArg::Rp2xrp2 => vec![Manifold::Rp2xRp2],
            ManifoldArg::All => Manifold::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Certified,
    Fast,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Certified => Mode::Certified,
            ModeArg::Fast => Mode::Fast,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Manifold(s) to compute.
    #[arg(long, value_enum, default_value = "all")]
    manifold: ManifoldArg,
    /// Decimal digits for printed enclosures.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=200))]
    digits: u32,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// certified = exact arithmetic end to end; fast = floating-point
    /// diagnostics (unreliable for large N, never certified).
    #[arg(long, value_enum, default_value = "certified")]
    mode: ModeArg,
    /// Worker threads (0 = all cores). Output is identical either way.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Coefficient cache directory (also via SPHEREMASS_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certified mass enclosure at truncation order N.
    Mass {
        #[command(flatten)]
        common: CommonArgs,
        /// Square-truncation order of the partial sum.
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Partial sums, bounds and widths over a list of orders.
    Convergence {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated list of truncation orders, e.g. 1,2,5,10.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
    },
    /// Certified critical-value intervals t0 = -1/(9m) and -2/(9m),
    /// with distinctness verdicts.
    T0 {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Run the exact verification suites.
    Verify {
        /// One of: symbolic, appendix, l2norm, quadrature, hand.
        #[arg(long)]
        suite: Option<String>,
        /// Tolerance for the quadrature suite.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Inspect or manage the coefficient cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Show cache location and contents.
    Info {
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Remove the cache file.
    Clear {
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Precompute coefficients up to order N and store them.
    Warm {
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn init_threads(threads: usize) {
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<spheremass_cli::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Mass { common, n } => {
            init_threads(common.threads);
            let dir = cache::resolve_dir(common.cache_dir.as_deref());
            if let Some(d) = &dir {
                cache::load(d);
            }
            let out = run_mass(
                &common.manifold.resolve(),
                n,
                common.digits,
                common.format.into(),
                common.mode.into(),
            )?;
            print!("{out}");
            if let (Some(d), ModeArg::Certified) = (&dir, common.mode) {
                cache::store_warn(d);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Convergence { common, n_list } => {
            init_threads(common.threads);
            let dir = cache::resolve_dir(common.cache_dir.as_deref());
            if let Some(d) = &dir {
                cache::load(d);
            }
            let out = run_convergence(
                &common.manifold.resolve(),
                &n_list,
                common.digits,
                common.format.into(),
                common.mode.into(),
            )?;
            print!("{out}");
            if let (Some(d), ModeArg::Certified) = (&dir, common.mode) {
                cache::store_warn(d);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::T0 { common, n } => {
            init_threads(common.threads);
            let dir = cache::resolve_dir(common.cache_dir.as_deref());
            if let Some(d) = &dir {
                cache::load(d);
            }
            let out = run_t0(
                &common.manifold.resolve(),
                n,
                common.digits,
                common.format.into(),
                common.mode.into(),
            )?;
            print!("{out}");
            if let Some(d) = &dir {
                cache::store_warn(d);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, tol, threads } => {
            init_threads(threads);
            let (out, all_pass) = run_verify(suite.as_deref(), tol)?;
            print!("{out}");
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Cache { action } => match action {
            CacheAction::Info { cache_dir } => {
                match cache::resolve_dir(cache_dir.as_deref()) {
                    Some(d) => cache::info(&d),
                    None => println!(
                        "no cache directory configured (use --cache-dir or {})",
                        cache::CACHE_ENV_VAR
                    ),
                }
                Ok(ExitCode::SUCCESS)
            }
            CacheAction::Clear { cache_dir } => {
                match cache::resolve_dir(cache_dir.as_deref()) {
                    Some(d) => cache::clear(&d)?,
                    None => println!(
                        "no cache directory configured (use --cache-dir or {})",
                        cache::CACHE_ENV_VAR
                    ),
                }
                Ok(ExitCode::SUCCESS)
            }
            CacheAction::Warm { n, cache_dir, threads } => {
                init_threads(threads);
                let dir = cache::resolve_dir(cache_dir.as_deref()).ok_or_else(|| {
                    anyhow::anyhow!("cache warm needs --cache-dir or {}", cache::CACHE_ENV_VAR)
                })?;
                cache::load(&dir);
                // Filling the S2xS2 partial sum populates both tables
                // for every mode with j, k <= N.
                let _ = spheremass_core::mass::partial_sum(Manifold::S2xS2, n);
                cache::store(&dir)?;
                println!(
                    "cache warmed to N = {n} at {}",
                    cache::cache_path(&dir).display()
                );
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

mod commands;
mod golden;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fglab::adams::NkiMode;
use fglab::fgl::CpnMode;

use commands::{CliError, CmdResult, Config};
use output::{render, Format};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    PaperBox,
    ResidueExact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NkiArg {
    Paper,
    ExtendedGcd,
}

#[derive(Parser, Debug)]
#[command(name = "fglab", version, about = "Exact computations with formal group laws, K-theory Adams operations and 2-adic Mahler expansions")]
struct Cli {
    /// Truncation bound for power series.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(2..))]
    bound: u32,
    /// 2-adic precision in bits.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(16..))]
    precision: u32,
    /// How [CP^n] is written in the a_ij.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::PaperBox)]
    mode: ModeArg,
    /// Choice of the n_k^i defining d_k.
    #[arg(long, global = true, value_enum, default_value_t = NkiArg::Paper)]
    nki: NkiArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compositional inverses of strict power series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Formal group laws.
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Chern numbers and SU constraints.
    #[command(subcommand)]
    Chern(ChernCmd),
    /// Adams operations on K-homology.
    #[command(subcommand)]
    Adams(AdamsCmd),
    /// Cannibalistic classes.
    #[command(subcommand)]
    Cannibal(CannibalCmd),
    /// Mahler expansions and dilation.
    #[command(subcommand)]
    Mahler(MahlerCmd),
    /// Check b = -log(u)/log(81) against the shift u -> u/81.
    ArtinSchreier {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Regenerate every reference table and diff against the embedded values.
    ReproducePaper {
        /// Rewrite the golden files in DIR from computed values.
        #[arg(long, hide = true, value_name = "DIR")]
        write_golden: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// Coefficients of the inverse of x + b1 x^2 + b2 x^3 + ...
    Inverse {
        #[arg(long, default_value_t = 4)]
        terms: u32,
    },
    /// The residue formula for the inverse coefficients.
    Residue {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
enum FglCmd {
    /// Coefficients of the twisted multiplicative law.
    Twisted {
        #[arg(long, default_value_t = 4)]
        top: u32,
    },
    /// [CP^n] in terms of the a_ij.
    Cpn {
        #[arg(long)]
        n: u32,
    },
    /// Image of a bordism class, e.g. "1/4*K3SQ + 12*N".
    Miscenko {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Check the formal group law axioms for the twisted law.
    Axioms {
        #[arg(long, default_value_t = 4)]
        top: u32,
    },
}

#[derive(Subcommand, Debug)]
enum ChernCmd {
    /// Constraint matrix of the SU conditions on products of projective spaces.
    System {
        #[arg(long)]
        dim: u32,
    },
    /// Integer row reduction of the constraint matrix.
    Reduce {
        #[arg(long)]
        dim: u32,
    },
    /// Rational nullspace of the constraint matrix.
    Nullspace {
        #[arg(long)]
        dim: u32,
    },
    /// All Chern numbers of a product such as CP1xCP3.
    Numbers {
        #[arg(long)]
        manifold: String,
    },
}

#[derive(Subcommand, Debug)]
enum AdamsCmd {
    /// psi^{1/k} applied to b_i.
    Beta {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Odd coefficients of psi^{1/3} b_i.
    Mod2 {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Relations among the a_ij from the 2-structure.
    Relations,
    /// psi^3 on the generators d_k.
    Psi {
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        /// Use the Thom-level table.
        #[arg(long)]
        thom: bool,
        /// Reduce the table mod 2.
        #[arg(long)]
        mod2: bool,
    },
    /// Classes fixed by psi^3 mod 2.
    Spherical {
        #[arg(long, default_value_t = 20)]
        weight: u32,
        #[arg(long)]
        thom: bool,
    },
    /// Lift a mod-2 fixed class 2-adically.
    Lift {
        #[arg(long)]
        class: String,
        #[arg(long)]
        thom: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CannibalCmd {
    /// The coefficients c_mn of theta_3, rows m and columns n.
    Table {
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// The sequence t_k.
    T {
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MahlerCmd {
    /// Mahler expansion of a polynomial given by comma-separated coefficients.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// C(kT, i) in the binomial basis.
    Dilate {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        i: usize,
        /// Treat k as a 2-adic integer.
        #[arg(long)]
        padic: bool,
    },
    /// The dilation matrix up to C(T, n).
    Matrix {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        n: usize,
    },
    /// Compare dilation against the Adams matrix.
    Check {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

fn run(cli: &Cli) -> CmdResult {
    let cfg = Config {
        bound: cli.bound,
        precision: cli.precision,
        mode: match cli.mode {
            ModeArg::PaperBox => CpnMode::PaperBox,
            ModeArg::ResidueExact => CpnMode::ResidueExact,
        },
        nki: match cli.nki {
            NkiArg::Paper => NkiMode::Paper,
            NkiArg::ExtendedGcd => NkiMode::ExtendedGcd,
        },
    };
    use commands as c;
    match &cli.command {
        Command::Series(SeriesCmd::Inverse { terms }) => c::series_inverse(*terms),
        Command::Series(SeriesCmd::Residue { n }) => c::series_residue(*n),
        Command::Fgl(FglCmd::Twisted { top }) => c::fgl_twisted(&cfg, *top),
        Command::Fgl(FglCmd::Cpn { n }) => c::fgl_cpn(&cfg, *n),
        Command::Fgl(FglCmd::Miscenko { expr }) => c::fgl_miscenko(&cfg, expr),
        Command::Fgl(FglCmd::Axioms { top }) => c::fgl_axioms(&cfg, *top),
        Command::Chern(ChernCmd::System { dim }) => c::chern_system(*dim),
        Command::Chern(ChernCmd::Reduce { dim }) => c::chern_reduce(*dim),
        Command::Chern(ChernCmd::Nullspace { dim }) => c::chern_nullspace(*dim),
        Command::Chern(ChernCmd::Numbers { manifold }) => c::chern_numbers(manifold),
        Command::Adams(AdamsCmd::Beta { k, i, n }) => c::adams_beta(*k, *i, *n),
        Command::Adams(AdamsCmd::Mod2 { n }) => c::adams_mod2(*n),
        Command::Adams(AdamsCmd::Relations) => c::adams_relations(&cfg),
        Command::Adams(AdamsCmd::Psi { k_max, thom, mod2 }) => c::adams_psi(&cfg, *k_max, *thom, *mod2),
        Command::Adams(AdamsCmd::Spherical { weight, thom }) => c::adams_spherical(&cfg, *weight, *thom),
        Command::Adams(AdamsCmd::Lift { class, thom }) => c::adams_lift(&cfg, class, *thom),
        Command::Cannibal(CannibalCmd::Table { n }) => c::cannibal_table(*n),
        Command::Cannibal(CannibalCmd::T { n }) => c::cannibal_t(*n),
        Command::Mahler(MahlerCmd::Expand { coeffs, n }) => c::mahler_expand_cmd(coeffs, *n),
        Command::Mahler(MahlerCmd::Dilate { k, i, padic }) => c::mahler_dilate(*k, *i, *padic, cfg.precision),
        Command::Mahler(MahlerCmd::Matrix { k, n }) => c::mahler_matrix(*k, *n),
        Command::Mahler(MahlerCmd::Check { k, n }) => c::mahler_check(*k, *n),
        Command::ArtinSchreier { u } => c::artin_schreier(u, cfg.precision),
        Command::ReproducePaper { .. } => unreachable!("handled in main"),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), std::io::Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("FGLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();

    if let Command::ReproducePaper { write_golden } = &cli.command {
        if let Some(dir) = write_golden {
            return match golden::regenerate(dir) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            };
        }
        let report = golden::reproduce(cli.format);
        if let Err(e) = emit(&cli, &report.text) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        return match report.status {
            golden::Status::Match => ExitCode::SUCCESS,
            golden::Status::Diff => ExitCode::from(3),
            golden::Status::Error => ExitCode::from(1),
        };
    }

    match run(&cli) {
        Ok(out) => match emit(&cli, &render(&out, cli.format)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

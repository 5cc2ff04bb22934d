//! Exact command-line verification of the duality identities.
//!
//! Each subcommand assembles a Weyl group, Hecke algebra, ramification
//! datum or Coxeter complex from the flags (or from a root-datum file),
//! runs the corresponding identity suite over the rationals, and emits one
//! report per suite — an aligned table, or a JSON object with the fields
//! `suite`, `instance`, `records` and `pass`.  Reports carry no timestamps,
//! so two runs of the same invocation produce byte-identical output.
//!
//!     verify solomon --type B --rank 2
//!     verify kato-affine --type A --rank 1 --lattice weight --q 4 --bound 6
//!     verify complex --type A --rank 3 --I0 1,3
//!
//! Exit codes: 0 — every comparison passed; 1 — some comparison (or a
//! hypothesis behind one) failed, with a witness named in the report;
//! 2 — the invocation itself was unusable.

mod suites;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use affine_hecke::report::VerificationReport;
use affine_hecke::root_datum::LatticeKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use suites::{Kind, Setup};

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Exact checks of induction-restriction dualities for Weyl groups, \
             Hecke algebras and Coxeter complexes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alternating induction–restriction equals the sign twist, for every
    /// irreducible character of the finite Weyl group
    Solomon(CommonArgs),
    /// Relative duality over the base --I0: linear characters of the setwise
    /// stabilizer against the determinant on the perpendicular
    #[command(name = "hl-char")]
    HlChar(CommonArgs),
    /// Involution theorem for modules of the finite algebra, on the complete
    /// trace basis
    #[command(name = "kato-finite")]
    KatoFinite(CommonArgs),
    /// Involution theorem for affine principal series: trace tables up to
    /// --bound, plus the intertwiner identities
    #[command(name = "kato-affine")]
    KatoAffine(CommonArgs),
    /// Duality in the endomorphism algebra of a ramification datum
    /// (degenerate when --I0 is absent)
    #[command(name = "hl-analogue")]
    HlAnalogue(CommonArgs),
    /// Coxeter-complex sphere homology, Lefschetz numbers three ways, and
    /// fixed-coset counts through induced characters
    Complex(CommonArgs),
    /// Every suite above with the same flags
    All(CommonArgs),
}

/// Report format for stdout or for the files under --out.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Text,
    Json,
}

#[derive(Args)]
pub(crate) struct CommonArgs {
    /// Cartan family (A, B, C, D, G) or a full type such as B2
    #[arg(long = "type", value_name = "TYPE")]
    pub(crate) cartan_type: Option<String>,

    /// Rank, when --type carries none
    #[arg(long, value_name = "N")]
    pub(crate) rank: Option<usize>,

    /// Character lattice of the root datum
    #[arg(long, default_value = "root", value_parser = parse_lattice)]
    pub(crate) lattice: LatticeKind,

    /// Root-datum file (JSON with cartan_type, lattice_kind and optional
    /// lambda / lambda_star), replacing --type, --rank and --lattice
    #[arg(long, value_name = "FILE", conflicts_with_all = ["cartan_type", "rank", "lattice"])]
    pub(crate) datum: Option<PathBuf>,

    /// Parameter values, one per parameter class (each a perfect square);
    /// a single value is broadcast to every class
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_value = "4")]
    pub(crate) q: Vec<i64>,

    /// Length bound for affine trace tables
    #[arg(long, value_name = "N", default_value_t = 6)]
    pub(crate) bound: usize,

    /// Base subset: 1-based simple-root indices, e.g. --I0 1,3
    #[arg(long = "I0", value_name = "LIST", value_delimiter = ',')]
    pub(crate) i0: Vec<usize>,

    /// Write one report file per suite into this directory
    #[arg(long, value_name = "DIR")]
    pub(crate) out: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub(crate) format: Format,

    /// Flip the sign on the dual side of every identity — a negative control
    /// that must turn each suite into a reported failure
    #[arg(long)]
    pub(crate) corrupt_sign: bool,
}

fn parse_lattice(s: &str) -> Result<LatticeKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.cmd {
        Cmd::Solomon(a) => (Kind::Solomon, a),
        Cmd::HlChar(a) => (Kind::HlChar, a),
        Cmd::KatoFinite(a) => (Kind::KatoFinite, a),
        Cmd::KatoAffine(a) => (Kind::KatoAffine, a),
        Cmd::HlAnalogue(a) => (Kind::HlAnalogue, a),
        Cmd::Complex(a) => (Kind::Complex, a),
        Cmd::All(a) => (Kind::All, a),
    };
    let setup = match Setup::from_args(args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let reports = suites::run(kind, &setup);
    emit(&reports, args)
}

/// Print or write the reports, then fold their verdicts into the exit code.
fn emit(reports: &[VerificationReport], args: &CommonArgs) -> ExitCode {
    if let Some(dir) = &args.out {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return ExitCode::from(2);
        }
        for rep in reports {
            let (ext, payload) = match args.format {
                Format::Text => ("txt", rep.render_text()),
                Format::Json => ("json", rep.to_json()),
            };
            let path = dir.join(format!("{}.{ext}", rep.suite));
            if let Err(e) = fs::write(&path, payload) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!(
                "{}: {} -> {}",
                rep.suite,
                if rep.pass { "PASS" } else { "FAIL" },
                path.display()
            );
        }
    } else {
        match args.format {
            Format::Text => {
                for rep in reports {
                    println!("{}", rep.render_text());
                }
            }
            Format::Json => {
                let payload = if reports.len() == 1 {
                    reports[0].to_json()
                } else {
                    serde_json::to_string_pretty(reports)
                        .expect("report serialization cannot fail")
                };
                println!("{payload}");
            }
        }
    }
    let mut pass = true;
    for rep in reports.iter().filter(|r| !r.pass) {
        pass = false;
        if let Some(f) = rep.first_failure() {
            eprintln!(
                "{}: FAIL at {} — lhs {} vs rhs {}",
                rep.suite, f.witness, f.lhs, f.rhs
            );
        }
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

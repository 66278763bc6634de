use std::path::PathBuf;
use std::process::exit;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use projsvd::cli::{
    run_analyze, run_generate, run_verify_file, run_verify_sweep, AnalyzeMode, GenerateKind,
    SweepParams, EXIT_DOMAIN,
};
use projsvd::idempotent::Tolerances;
use projsvd::involutory::Sign;

/// Structured SVDs of idempotent (projector) and involutory matrices.
#[derive(Parser)]
#[command(name = "projsvd", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TolArgs {
    /// Relative idempotency gate (default 1e-10)
    #[arg(long = "tol-idem")]
    tol_idem: Option<f64>,
    /// Relative involution gate (default 1e-10)
    #[arg(long = "tol-invol")]
    tol_invol: Option<f64>,
    /// Threshold separating sigma > 1 from sigma = 1 (default max(1e-8, 50 n eps))
    #[arg(long = "tol-count")]
    tol_count: Option<f64>,
    /// Zero-class / null-space threshold (default n eps sigma_1)
    #[arg(long = "tol-zero")]
    tol_zero: Option<f64>,
    /// Rank tolerance for pivoted QR (default n eps |r_11|)
    #[arg(long = "rank-tol")]
    rank_tol: Option<f64>,
    /// Angle separation for coupling pattern checks (default 1e-6 rad)
    #[arg(long = "angle-sep")]
    angle_sep: Option<f64>,
    /// Residual gate scale: tol = value * max(1, norm) (default 1e-9)
    #[arg(long = "tol-rec")]
    tol_rec: Option<f64>,
}

impl TolArgs {
    fn to_tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(v) = self.tol_idem {
            tol.idem = v;
        }
        if let Some(v) = self.tol_invol {
            tol.invol = v;
        }
        tol.count = self.tol_count;
        tol.zero = self.tol_zero;
        tol.null = self.tol_zero;
        tol.rank = self.rank_tol;
        if let Some(v) = self.angle_sep {
            tol.angle_sep = v;
        }
        if let Some(v) = self.tol_rec {
            tol.rec = v;
        }
        tol
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic matrix plus a `.truth` sidecar
    Generate {
        /// idempotent | involutory
        kind: String,
        /// Prescription n:r:t:psi1,psi2,...:seed (angles in radians)
        spec: String,
        /// Output path for the matrix text file
        out: PathBuf,
        /// Orientation of B = sign (2M - I), involutory only
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        sign: String,
    },
    /// Analyze a matrix file: census, singular values, angles, residuals
    Analyze {
        input: PathBuf,
        /// auto | idempotent | involutory
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Machine-readable flat JSON on stdout
        #[arg(long)]
        json: bool,
        /// Orientation for the involutory branch
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        sign: String,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run the invariant suite on one input or on a seeded sweep
    Verify {
        input: Option<PathBuf>,
        /// Sweep prescription, e.g. n=16,count=50,seed=1
        #[arg(long)]
        sweep: Option<String>,
        /// auto | idempotent | involutory
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Orientation for the involutory branch
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        sign: String,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn parse_or_exit<T: FromStr>(text: &str, what: &str) -> T
where
    T::Err: std::fmt::Display,
{
    match T::from_str(text) {
        Ok(v) => v,
        Err(err) => {
            eprintln!("error: invalid {}: {}", what, err);
            exit(EXIT_DOMAIN);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Generate { kind, spec, out, sign } => {
            let kind: GenerateKind = parse_or_exit(&kind, "kind");
            let sign: Sign = parse_or_exit(&sign, "sign");
            run_generate(kind, &spec, sign, &out)
        }
        Cmd::Analyze {
            input,
            mode,
            json,
            sign,
            tol,
        } => {
            let mode: AnalyzeMode = parse_or_exit(&mode, "mode");
            let sign: Sign = parse_or_exit(&sign, "sign");
            run_analyze(&input, mode, sign, json, &tol.to_tolerances())
        }
        Cmd::Verify {
            input,
            sweep,
            mode,
            sign,
            tol,
        } => {
            let mode: AnalyzeMode = parse_or_exit(&mode, "mode");
            let sign: Sign = parse_or_exit(&sign, "sign");
            let tolerances = tol.to_tolerances();
            match (input, sweep) {
                (Some(path), None) => run_verify_file(&path, mode, sign, &tolerances),
                (None, Some(sweep)) => {
                    let params: SweepParams = parse_or_exit(&sweep, "sweep");
                    run_verify_sweep(params, &tolerances)
                }
                (Some(_), Some(_)) => {
                    eprintln!("error: give either an input path or --sweep, not both");
                    EXIT_DOMAIN
                }
                (None, None) => {
                    eprintln!("error: verify needs an input path or --sweep n=..,count=..,seed=..");
                    EXIT_DOMAIN
                }
            }
        }
    };
    exit(code);
}

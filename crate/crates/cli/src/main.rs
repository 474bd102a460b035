//! Command-line front end: coefficient tables, exponential sums, block
//! decompositions, arc classification and the verification sweeps, emitted
//! as CSV or JSON. Output is deterministic: identical configuration and
//! cache state produce byte-identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bszlab_core::arcs::{self, ArcSchedule};
use bszlab_core::coefficients::{
    self, lambda_from_tau, IntegerSequence, RealSequence,
};
use bszlab_core::error::Error;
use bszlab_core::fixed::{parse_coefficient, Frac192};
use bszlab_core::phase::{exp_sum, Phase, PhasePolynomial};
use bszlab_core::report::BoundReport;
use bszlab_core::sieve::{build_decomposition, split_sum, DecompositionParams};
use bszlab_core::verifier::{
    assumption_a_report, assumption_b_report, theorem1_report, theorem2_sweep, DecayEnvelope,
};
use bszlab_core::weyl;

#[derive(Parser)]
#[command(name = "bszlab", version, about = "Exponential sums with modular coefficients: tables, decompositions, arcs and verification sweeps")]
struct Cli {
    /// Output format for row-oriented reports (decompose/arcs are JSON).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Directory for coefficient caches.
    #[arg(long, global = true, env = "BSZLAB_CACHE_DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffKind {
    /// a(n) = 1
    One,
    /// classical Möbius μ(n)
    Mobius,
    /// normalized eigenform coefficients λ(n) = τ(n)/n^{11/2}
    Lambda,
    /// Dirichlet inverse μ_f(n) of λ(n)
    Mu,
    /// exact integer τ(n) (coeffs subcommand only)
    Tau,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a coefficient table.
    Coeffs {
        #[arg(long, value_enum)]
        kind: CoeffKind,
        #[arg(long)]
        n: u64,
    },
    /// One exponential sum S_a(x, P).
    Sums {
        #[arg(long, value_enum)]
        coeff: CoeffKind,
        /// Comma-separated coefficients a1,a2,...,ak (decimal, p/q, sqrt2, golden).
        #[arg(long)]
        poly: String,
        #[arg(long)]
        x: u64,
    },
    /// Block decomposition summary (JSON).
    Decompose {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Major/minor arc classification (JSON).
    Arcs(ArcsArgs),
    /// Verification sweeps.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// |S_a(x, P)| over an x grid.
    Sweep {
        #[arg(long, value_enum)]
        coeff: CoeffKind,
        #[arg(long)]
        poly: String,
        /// Comma-separated increasing x values.
        #[arg(long, value_delimiter = ',')]
        xs: Vec<u64>,
    },
}

#[derive(Args)]
struct ArcsArgs {
    #[arg(long)]
    poly: String,
    #[arg(long)]
    x: u64,
    #[arg(long, value_enum, default_value_t = ScheduleKind::Power)]
    schedule: ScheduleKind,
    /// Power-schedule exponents c_j (defaults 2^{-10j-2}).
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<f64>>,
    /// Power-schedule exponents c'_j (defaults 2^{-10j-3}).
    #[arg(long, value_delimiter = ',')]
    cp: Option<Vec<f64>>,
    /// Exponential-schedule constants β_j.
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Exponential-schedule constants β'_j.
    #[arg(long, value_delimiter = ',')]
    betap: Option<Vec<f64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleKind {
    Power,
    Exp,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Weyl differencing / sharpened-bound sweeps over y.
    Weyl {
        #[arg(long)]
        d: u32,
        /// Comma-separated y values.
        #[arg(long, value_delimiter = ',')]
        y: Vec<u64>,
        #[arg(long, default_value_t = 10.0)]
        z: f64,
        /// Leading coefficient α of U(n) = α n^d.
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = WeylKind::Differencing)]
        kind: WeylKind,
        /// Denominator of the rational approximation (sharpened/classical).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Full-pipeline envelope report.
    Theorem1 {
        #[arg(long, value_enum)]
        coeff: CoeffKind,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
    },
    /// Decay sweep against the coefficient-appropriate envelope.
    Theorem2 {
        #[arg(long, value_enum)]
        coeff: CoeffKind,
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        xs: Vec<u64>,
    },
    /// Mean-square reports over rough numbers.
    AssumptionA {
        #[arg(long, value_enum)]
        coeff: CoeffKind,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        w: u64,
    },
    /// Prime-pair correlation reports per block ν ∈ [H, K].
    AssumptionB {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeylKind {
    Differencing,
    Sharpened,
    Classical,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_invariants_pass) => {
            if all_invariants_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_phase(s: &str) -> Result<Phase, Error> {
    let coeffs = s
        .split(',')
        .map(parse_coefficient)
        .collect::<Result<Vec<Frac192>, _>>()?;
    Phase::from_coeffs(coeffs)
}

fn require_poly(phase: &Phase) -> Result<&PhasePolynomial, Error> {
    match phase {
        Phase::Poly(p) => Ok(p),
        Phase::One => Err(Error::InvalidInput(
            "this command needs a nonzero polynomial".into(),
        )),
    }
}

/// τ table, through the cache when a directory is configured.
fn tau_cached(n: u64, cache: &Option<PathBuf>) -> Result<IntegerSequence, Error> {
    if let Some(dir) = cache {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("tau-table.txt");
        if path.exists() {
            let cached = coefficients::read_tau_cache(&path)?;
            if cached.len() >= n {
                let prefix: Vec<i128> = cached.values()[..n as usize].to_vec();
                return IntegerSequence::new(prefix);
            }
        }
        let tau = coefficients::tau_table(n)?;
        coefficients::write_tau_cache(&path, &tau)?;
        return Ok(tau);
    }
    coefficients::tau_table(n)
}

fn coefficient_table(
    kind: CoeffKind,
    n: u64,
    cache: &Option<PathBuf>,
) -> Result<RealSequence, Error> {
    match kind {
        CoeffKind::One => RealSequence::ones(n),
        CoeffKind::Mobius => coefficients::mobius_table(n),
        CoeffKind::Lambda => lambda_from_tau(&tau_cached(n, cache)?),
        CoeffKind::Mu => coefficients::dirichlet_inverse(&lambda_from_tau(&tau_cached(
            n, cache,
        )?)?),
        CoeffKind::Tau => Err(Error::InvalidInput(
            "tau is integer-valued; use the coeffs subcommand".into(),
        )),
    }
}

fn decay_envelope(kind: CoeffKind) -> DecayEnvelope {
    match kind {
        CoeffKind::Mu | CoeffKind::Mobius => DecayEnvelope::SqrtLogSaving,
        _ => DecayEnvelope::LogSaving,
    }
}

fn print_reports(reports: &[BoundReport], format: Format) {
    match format {
        Format::Csv => {
            println!("{}", BoundReport::csv_header());
            for r in reports {
                println!("{}", r.csv_row());
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(reports).expect("serializable"));
        }
    }
}

#[derive(Serialize)]
struct SumRow {
    x: u64,
    re: f64,
    im: f64,
    abs: f64,
    normalized: f64,
}

#[derive(Serialize)]
struct SweepRow {
    x: u64,
    re: f64,
    im: f64,
    abs: f64,
    abs_over_sqrt_x: f64,
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Coeffs { kind, n } => {
            if n < 1 {
                return Err(Error::Precondition("N must be ≥ 1".into()));
            }
            match kind {
                CoeffKind::Tau => {
                    let tau = tau_cached(n, &cli.cache)?;
                    match cli.format {
                        Format::Csv => {
                            println!("n,tau");
                            for m in 1..=n {
                                println!("{m},{}", tau.get(m));
                            }
                        }
                        Format::Json => {
                            let rows: Vec<String> =
                                (1..=n).map(|m| tau.get(m).to_string()).collect();
                            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                        }
                    }
                }
                _ => {
                    let table = coefficient_table(kind, n, &cli.cache)?;
                    match cli.format {
                        Format::Csv => {
                            println!("n,value");
                            for m in 1..=n {
                                println!("{m},{}", table.get(m));
                            }
                        }
                        Format::Json => {
                            let rows: Vec<f64> = (1..=n).map(|m| table.get(m)).collect();
                            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                        }
                    }
                }
            }
            Ok(true)
        }

        Cmd::Sums { coeff, poly, x } => {
            let phase = parse_phase(&poly)?;
            let a = coefficient_table(coeff, x, &cli.cache)?;
            let s = exp_sum(&a, &phase, x)?;
            let env = decay_envelope(coeff).value(x.max(3));
            let row = SumRow {
                x,
                re: s.re,
                im: s.im,
                abs: s.norm(),
                normalized: s.norm() / env,
            };
            match cli.format {
                Format::Csv => {
                    println!("x,re,im,abs,normalized");
                    println!(
                        "{},{},{},{},{}",
                        row.x, row.re, row.im, row.abs, row.normalized
                    );
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&row).unwrap())
                }
            }
            Ok(true)
        }

        Cmd::Decompose { x, h, k, delta } => {
            let params = DecompositionParams::new(x, h, k, delta)?;
            let dec = build_decomposition(params)?;
            let summary = dec.summary();
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            // hard invariant: the classes partition [1, x]
            let sizes = dec.class_sizes();
            Ok(sizes.iter().sum::<u64>() == x)
        }

        Cmd::Arcs(args) => run_arcs(args),

        Cmd::Sweep { coeff, poly, xs } => {
            let phase = parse_phase(&poly)?;
            if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Precondition(
                    "xs must be a non-empty increasing list".into(),
                ));
            }
            let a = coefficient_table(coeff, *xs.last().unwrap(), &cli.cache)?;
            let mut rows = Vec::new();
            for &x in &xs {
                let s = exp_sum(&a, &phase, x)?;
                rows.push(SweepRow {
                    x,
                    re: s.re,
                    im: s.im,
                    abs: s.norm(),
                    abs_over_sqrt_x: s.norm() / (x as f64).sqrt(),
                });
            }
            match cli.format {
                Format::Csv => {
                    println!("x,re,im,abs,abs_over_sqrt_x");
                    for r in &rows {
                        println!(
                            "{},{},{},{},{}",
                            r.x, r.re, r.im, r.abs, r.abs_over_sqrt_x
                        );
                    }
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap())
                }
            }
            Ok(true)
        }

        Cmd::Verify(v) => run_verify(v, cli.format, &cli.cache),
    }
}

#[derive(Serialize)]
struct ArcRow {
    j: usize,
    a: String,
    q: String,
    err: f64,
    q_cutoff: f64,
    r_cutoff: f64,
    verdict: &'static str,
}

#[derive(Serialize)]
struct ArcsOutput {
    x: u64,
    schedule: &'static str,
    gamma1: f64,
    gamma2: f64,
    per_coefficient: Vec<ArcRow>,
    d: usize,
    overall: &'static str,
}

fn run_arcs(args: ArcsArgs) -> Result<bool, Error> {
    let phase = parse_phase(&args.poly)?;
    let p = require_poly(&phase)?;
    let k = p.degree();
    let schedule = match args.schedule {
        ScheduleKind::Power => {
            let mut s = ArcSchedule::default_power(k);
            if let ArcSchedule::Power { c, cp } = &mut s {
                if let Some(user_c) = args.c {
                    *c = expect_len(user_c, k, "--c")?;
                }
                if let Some(user_cp) = args.cp {
                    *cp = expect_len(user_cp, k, "--cp")?;
                }
            }
            s
        }
        ScheduleKind::Exp => {
            let mut s = ArcSchedule::default_exponential(k);
            if let ArcSchedule::Exponential { beta, betap } = &mut s {
                if let Some(user_b) = args.beta {
                    *beta = expect_len(user_b, k, "--beta")?;
                }
                if let Some(user_bp) = args.betap {
                    *betap = expect_len(user_bp, k, "--betap")?;
                }
            }
            s
        }
    };
    let cls = arcs::classify(p, &schedule, args.x)?;
    let (gamma1, gamma2) = schedule.exponent_bookkeeping();
    let out = ArcsOutput {
        x: args.x,
        schedule: match args.schedule {
            ScheduleKind::Power => "power",
            ScheduleKind::Exp => "exponential",
        },
        gamma1,
        gamma2,
        per_coefficient: cls
            .per_coefficient
            .iter()
            .map(|arc| ArcRow {
                j: arc.j,
                a: arc.approx.a.to_string(),
                q: arc.approx.q.to_string(),
                err: arc.approx.err,
                q_cutoff: arc.q_cutoff,
                r_cutoff: arc.r_cutoff,
                verdict: if arc.major { "major" } else { "minor" },
            })
            .collect(),
        d: cls.d,
        overall: if cls.overall_major() { "major" } else { "minor" },
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    // hard invariant: each approximation satisfies the Dirichlet bound
    let ok = cls
        .per_coefficient
        .iter()
        .enumerate()
        .all(|(i, arc)| arc.approx.satisfies_dirichlet(p.coeff(i + 1)));
    Ok(ok)
}

fn expect_len(v: Vec<f64>, k: usize, flag: &str) -> Result<Vec<f64>, Error> {
    if v.len() == k {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!(
            "{flag} needs exactly {k} values, got {}",
            v.len()
        )))
    }
}

fn run_verify(
    v: VerifyCmd,
    format: Format,
    cache: &Option<PathBuf>,
) -> Result<bool, Error> {
    match v {
        VerifyCmd::Weyl {
            d,
            y,
            z,
            alpha,
            kind,
            q,
            c,
        } => {
            let alpha = parse_coefficient(&alpha)?;
            let mut coeffs = vec![Frac192::ZERO; d as usize];
            coeffs[d as usize - 1] = alpha;
            let u = PhasePolynomial::new(coeffs)?;
            let mut reports = Vec::new();
            let mut ok = true;
            for &yv in &y {
                let r = match kind {
                    WeylKind::Differencing => weyl::differencing_constant(&u, yv)?,
                    WeylKind::Sharpened | WeylKind::Classical => {
                        let q = q.ok_or_else(|| {
                            Error::InvalidInput("--q is required for this kind".into())
                        })?;
                        let (sharp, classic) = weyl::lemma35_report(&u, yv, z, c, q, None)?;
                        if kind == WeylKind::Sharpened {
                            sharp
                        } else {
                            classic
                        }
                    }
                };
                // hard invariant: the two reciprocal-sum routes agree exactly
                let s1 = weyl::min_reciprocal_sum(alpha, yv.min(2000), yv as f64);
                let s2 = weyl::min_reciprocal_sum_direct(alpha, yv.min(2000), yv as f64);
                ok &= s1.to_bits() == s2.to_bits();
                reports.push(r);
            }
            print_reports(&reports, format);
            Ok(ok)
        }

        VerifyCmd::Theorem1 {
            coeff,
            poly,
            x,
            h,
            k,
        } => {
            let phase = parse_phase(&poly)?;
            let a = coefficient_table(coeff, x, cache)?;
            let report = theorem1_report(&a, &phase, x, h, k)?;
            // hard invariants: partition and split additivity
            let dec = build_decomposition(DecompositionParams::new(x, h, k, 0.1)?)?;
            let sizes = dec.class_sizes();
            let split = split_sum(&a, &phase, &dec)?;
            let direct = exp_sum(&a, &phase, x)?;
            let ok = sizes.iter().sum::<u64>() == x
                && (split.s - direct).norm() <= 1e-9 * x as f64;
            print_reports(&[report], format);
            Ok(ok)
        }

        VerifyCmd::Theorem2 { coeff, poly, xs } => {
            let phase = parse_phase(&poly)?;
            let a = coefficient_table(coeff, *xs.iter().max().unwrap_or(&0), cache)?;
            let rows = theorem2_sweep(&a, &phase, decay_envelope(coeff), &xs)?;
            match format {
                Format::Csv => {
                    println!("{}", bszlab_core::verifier::DecaySweepRow::csv_header());
                    for r in &rows {
                        println!("{}", r.csv_row());
                    }
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap())
                }
            }
            Ok(true)
        }

        VerifyCmd::AssumptionA { coeff, x, z, w } => {
            let a = coefficient_table(coeff, x, cache)?;
            let reports = assumption_a_report(&a, x, z, w)?;
            let ok = reports.iter().all(|r| r.ratio.is_finite());
            print_reports(&reports, format);
            Ok(ok)
        }

        VerifyCmd::AssumptionB { poly, x, h, k } => {
            let phase = parse_phase(&poly)?;
            if h < 2 || h > k {
                return Err(Error::Precondition(format!(
                    "need 2 ≤ H ≤ K, got H={h}, K={k}"
                )));
            }
            let mut reports = Vec::new();
            for nu in h..=k {
                let b = assumption_b_report(&phase, x, nu)?;
                reports.push(
                    BoundReport::new(
                        "assumption-b",
                        b.lhs,
                        (b.z as f64) * (b.y as f64)
                            / ((b.z as f64).ln() * (b.z as f64).ln()).max(f64::MIN_POSITIVE),
                    )
                    .with_param("nu", b.nu as f64)
                    .with_param("y", b.y as f64)
                    .with_param("primes", b.prime_count as f64)
                    .with_param("tau_est", b.tau_est),
                );
            }
            let ok = reports.iter().all(|r| r.lhs >= 0.0);
            print_reports(&reports, format);
            Ok(ok)
        }
    }
}

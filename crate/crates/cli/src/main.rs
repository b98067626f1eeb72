//! `waring`: command-line front end for the monomial Waring toolkit.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use waring::apolar_ideals::{
    basis_bprime, canonicalize_phi, dim_j, dim_perp_cap_alpha0, dim_vsp, dimension_difference_rhs,
    hilbert_s_mod_j, make_ci_ideal, PhiTuple,
};
use waring::exact_arith::{format_rational, CycloScalar};
use waring::linalg::DEFAULT_RANK_CUTOFF;
use waring::monomial_waring::{
    explicit_decomposition, multinomial_c, rank_lower_bound, verify_decomposition, waring_rank, Decomposition,
    DecompositionRecord, MonomialSpec, VerificationReport, Verified,
};
use waring::polynomial::{parse_poly, Ring};
use waring::quotient_solver::{
    build_quotient, extract_points, ideal_membership, is_radical, trace_form_rank, PointSet, PointSetRecord,
    DEFAULT_CLUSTER_TOL,
};
use waring::scalar::{Domain, Scalar};
use waring::vsp_explorer::{
    check_alpha0_nonzero, decompose_from_phi, dim_ideal_t, fit_phi_from_points, point_ideal_hilbert_with,
    q_t_diagnostic, sample_batch, sample_phi, torus_normalize, VSPParameterSpace, DEFAULT_FIT_TOL,
    EXTRACTION_SEED,
};
use waring::Error;

const SEED_ENV: &str = "WARING_SEED";

#[derive(Parser)]
#[command(name = "waring", version, about = "Waring decompositions of monomials")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Relative singular-value cutoff for numeric ranks.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_CUTOFF)]
    rank_cutoff: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct PhiArg {
    /// Tuple `phi_1; ...; phi_n` in the dual variables a0..an (aliases
    /// a, b, c, d) of the sorted exponents, or `explicit`.
    #[arg(long, default_value = "explicit", allow_hyphen_values = true)]
    phi: String,
}

#[derive(Subcommand)]
enum Command {
    /// Waring rank.
    Rank { monomial: String },
    /// Rank, lower bound, conductor and the constant C.
    Bounds { monomial: String },
    /// A decomposition: exact by default, numeric from a tuple or a seed.
    Decompose {
        monomial: String,
        /// The explicit root-of-unity decomposition (the default).
        #[arg(long, conflicts_with_all = ["phi", "seed"])]
        exact: bool,
        /// Decompose numerically from this tuple.
        #[arg(long, conflicts_with = "seed", allow_hyphen_values = true)]
        phi: Option<String>,
        /// Decompose numerically from the tuple sampled with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Coefficient tolerance for numeric verification.
        #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
        tol: f64,
    },
    /// Verifies a decomposition stored as JSON.
    Verify {
        file: PathBuf,
        #[arg(long)]
        monomial: String,
        /// Coefficient tolerance for float decompositions.
        #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
        tol: f64,
    },
    /// Hilbert function of S/J, and of a point set when one is given.
    Hilbert {
        monomial: String,
        #[arg(long, default_value_t = 0)]
        t_min: i64,
        /// Defaults to deg F + 2.
        #[arg(long)]
        t_max: Option<i64>,
        /// Point set JSON as written by `points`.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Dimension of the variety of sums of powers.
    VspDim {
        monomial: String,
        /// Also list the bases B'_i.
        #[arg(long)]
        bases: bool,
    },
    /// The ideal I(k, phi).
    Ideal {
        monomial: String,
        #[command(flatten)]
        phi: PhiArg,
        /// Number of generators; defaults to n.
        #[arg(long)]
        k: Option<usize>,
        /// Rewrite phi into canonical form first.
        #[arg(long)]
        canonicalize: bool,
        /// Test membership of this polynomial in the dual variables.
        #[arg(long, allow_hyphen_values = true)]
        contains: Option<String>,
    },
    /// Exact radicality test via the trace form.
    Radical {
        monomial: String,
        #[command(flatten)]
        phi: PhiArg,
    },
    /// Points of V(I(n, phi)), normalized to a0 = 1.
    Points {
        monomial: String,
        #[command(flatten)]
        phi: PhiArg,
        /// Seed of the random eigenvalue combination.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        tol: f64,
    },
    /// Recovers the canonical tuple from a point set.
    FitPhi {
        monomial: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
        tol: f64,
    },
    /// Torus element moving a scalar tuple to all ones (equal exponents).
    Normalize {
        monomial: String,
        #[command(flatten)]
        phi: PhiArg,
    },
    /// Samples tuples for seeds seed..seed+count and reports radicality.
    Sample {
        monomial: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
        tol: f64,
    },
    /// Hilbert functions, q_t and dimension identities for one configuration.
    Diagnose {
        monomial: String,
        #[command(flatten)]
        phi: PhiArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidMonomial(_)
            | Error::Parse(_)
            | Error::VariableMismatch { .. }
            | Error::DegreeMismatch { .. }
            | Error::NotHomogeneous
            | Error::IncompleteIdeal { .. }
            | Error::UnequalExponents => Failure::Usage(e.to_string()),
            other => Failure::Math(other.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

fn parse_spec(text: &str) -> Result<MonomialSpec, Failure> {
    Ok(text.parse::<MonomialSpec>()?)
}

fn parse_phi(spec: &MonomialSpec, text: &str) -> Result<PhiTuple<BigRational>, Failure> {
    Ok(PhiTuple::parse(spec, text)?)
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} must be a positive number, got {v}")))
    }
}

/// `--seed`, else the environment fallback.
fn seed_or_env(seed: Option<u64>) -> Result<Option<u64>, Failure> {
    if seed.is_some() {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not a seed"))),
        Err(_) => Ok(None),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn require_radical(spec: &MonomialSpec, phi: &PhiTuple<BigRational>) -> Result<(), Failure> {
    if is_radical(spec, phi)? {
        Ok(())
    } else {
        Err(Failure::Math(Error::NotRadical.to_string()))
    }
}

fn points_text(points: &PointSet<Complex64>) -> String {
    points
        .points
        .iter()
        .map(|p| p.iter().map(Scalar::to_text).collect::<Vec<_>>().join(", "))
        .map(|line| format!("({line})"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_text(report: &VerificationReport) -> String {
    let status = if report.passed { "passed" } else { "FAILED" };
    format!("verification {status} ({:?}), max error {:e}", report.domain, report.max_abs_error)
}

fn run(cli: &Cli) -> Outcome {
    let cutoff = positive("rank-cutoff", cli.rank_cutoff)?;
    match &cli.command {
        Command::Rank { monomial } => {
            let spec = parse_spec(monomial)?;
            let r = waring_rank(&spec);
            Ok((json!({ "rank": r }), format!("rank({spec}) = {r}")))
        }
        Command::Bounds { monomial } => {
            let spec = parse_spec(monomial)?;
            let (lo, r) = (rank_lower_bound(&spec), waring_rank(&spec));
            let c = format_rational(&multinomial_c(&spec));
            let value = json!({
                "monomial": spec,
                "lower_bound": lo,
                "rank": r,
                "conductor": spec.conductor(),
                "multinomial_c": c,
            });
            Ok((value, format!("{lo} <= rank({spec}) = {r}\nconductor {}\nC = {c}", spec.conductor())))
        }
        Command::Decompose { monomial, exact: _, phi, seed, tol } => {
            let spec = parse_spec(monomial)?;
            let tol = positive("tol", *tol)?;
            let phi = match (phi, seed) {
                (Some(text), _) => Some(parse_phi(&spec, text)?),
                (None, Some(s)) => Some(sample_phi(&VSPParameterSpace::new(&spec), *s)),
                (None, None) => None,
            };
            match phi {
                None => {
                    let mut dec = explicit_decomposition(&spec);
                    let report = verify_decomposition(&spec, &dec, 0.0)?;
                    if !report.passed {
                        return Err(Failure::Math(report_text(&report)));
                    }
                    dec.verified = Verified::Exact;
                    Ok((to_value(&dec.to_record()), dec.to_text()))
                }
                Some(phi) => {
                    require_radical(&spec, &phi)?;
                    let dec = decompose_from_phi(&spec, &phi, tol)?;
                    Ok((to_value(&dec.to_record()), dec.to_text()))
                }
            }
        }
        Command::Verify { file, monomial, tol } => {
            let spec = parse_spec(monomial)?;
            let tol = positive("tol", *tol)?;
            let record: DecompositionRecord = read_json(file)?;
            let report = match record.domain {
                Domain::Rational => verify_decomposition(&spec, &Decomposition::<BigRational>::from_record(&record)?, tol)?,
                Domain::Cyclotomic => verify_decomposition(&spec, &Decomposition::<CycloScalar>::from_record(&record)?, tol)?,
                Domain::ComplexFloat => verify_decomposition(&spec, &Decomposition::<Complex64>::from_record(&record)?, tol)?,
            };
            if !report.passed {
                return Err(Failure::Math(serde_json::to_string(&report).expect("report serializes")));
            }
            Ok((to_value(&report), report_text(&report)))
        }
        Command::Hilbert { monomial, t_min, t_max, points } => {
            let spec = parse_spec(monomial)?;
            let t_max = t_max.unwrap_or(i64::from(spec.degree()) + 2);
            if *t_min < 0 || t_max < *t_min {
                return Err(Failure::Usage(format!("bad degree range {t_min}..={t_max}")));
            }
            let points: Option<PointSet<Complex64>> = match points {
                Some(path) => Some(PointSet::from_record(&read_json::<PointSetRecord>(path)?)?),
                None => None,
            };
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for t in *t_min..=t_max {
                let h = hilbert_s_mod_j(&spec, t);
                match &points {
                    Some(p) => {
                        let hp = point_ideal_hilbert_with(p, t, cutoff);
                        rows.push(json!({ "t": t, "s_mod_j": h, "points": hp }));
                        text.push(format!("t = {t}: h_J = {h}, h_points = {hp}"));
                    }
                    None => {
                        rows.push(json!({ "t": t, "s_mod_j": h }));
                        text.push(format!("t = {t}: h_J = {h}"));
                    }
                }
            }
            Ok((json!({ "monomial": spec, "values": rows }), text.join("\n")))
        }
        Command::VspDim { monomial, bases } => {
            let spec = parse_spec(monomial)?;
            let v = dim_vsp(&spec);
            if !bases {
                return Ok((json!({ "dim_vsp": v }), format!("dim VSP({spec}) = {v}")));
            }
            let lists = (1..=spec.n())
                .map(|i| basis_bprime(&spec, i))
                .collect::<Result<Vec<_>, _>>()?;
            let value = json!({
                "dim_vsp": v,
                "bases": lists.iter().map(|b| b.iter().map(|e| e.0.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            let text = lists
                .iter()
                .enumerate()
                .map(|(i, b)| format!("|B'_{}| = {}", i + 1, b.len()))
                .chain(std::iter::once(format!("dim VSP({spec}) = {v}")))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((value, text))
        }
        Command::Ideal { monomial, phi, k, canonicalize, contains } => {
            let spec = parse_spec(monomial)?;
            let mut phi = parse_phi(&spec, &phi.phi)?;
            if *canonicalize {
                phi = canonicalize_phi(&spec, &phi)?;
            }
            let canonical = phi.is_canonical();
            let ideal = make_ci_ideal(&spec, phi, k.unwrap_or(spec.n()))?;
            let mut value = to_value(&ideal.to_record());
            value["canonical"] = json!(canonical);
            let mut text = ideal.to_record().generators.join("\n");
            if let Some(p) = contains {
                let poly = parse_poly(p, spec.num_vars(), Ring::Dual)?;
                let member = ideal_membership(&poly, &ideal)?;
                value["contains"] = json!({ "polynomial": poly.to_string(), "member": member });
                text.push_str(&format!("\n{poly} {} the ideal", if member { "is in" } else { "is not in" }));
            }
            Ok((value, text))
        }
        Command::Radical { monomial, phi } => {
            let spec = parse_spec(monomial)?;
            let phi = parse_phi(&spec, &phi.phi)?;
            let q = build_quotient(&spec, &phi)?;
            let rank = trace_form_rank(&q)?;
            let radical = is_radical(&spec, &phi)?;
            let value = json!({ "radical": radical, "trace_rank": rank, "dim": q.dim() });
            Ok((value, format!("radical: {radical} (trace rank {rank} of {})", q.dim())))
        }
        Command::Points { monomial, phi, seed, tol } => {
            let spec = parse_spec(monomial)?;
            let tol = positive("tol", *tol)?;
            let phi = parse_phi(&spec, &phi.phi)?;
            require_radical(&spec, &phi)?;
            let seed = seed_or_env(*seed)?.unwrap_or(EXTRACTION_SEED);
            let points = extract_points(&build_quotient(&spec, &phi)?, tol, seed)?;
            Ok((to_value(&points.to_record()), points_text(&points)))
        }
        Command::FitPhi { monomial, points, tol } => {
            let spec = parse_spec(monomial)?;
            let tol = positive("tol", *tol)?;
            let points: PointSet<Complex64> = PointSet::from_record(&read_json::<PointSetRecord>(points)?)?;
            let phi = fit_phi_from_points(&spec, &points, tol)?;
            Ok((json!({ "phi": phi.to_records(), "text": phi.to_text() }), phi.to_text()))
        }
        Command::Normalize { monomial, phi } => {
            let spec = parse_spec(monomial)?;
            let phi = parse_phi(&spec, &phi.phi)?;
            let (torus, ones) = torus_normalize(&spec, &phi)?;
            let defect = torus.product_defect(&spec);
            let value = json!({ "lambda": torus.to_records(), "phi": ones.to_records(), "product_defect": defect });
            let lambda = torus.lambda.iter().map(Scalar::to_text).collect::<Vec<_>>().join(", ");
            Ok((value, format!("lambda = ({lambda})\nphi = {}\n|prod lambda_i^d_i - 1| = {defect:e}", ones.to_text())))
        }
        Command::Sample { monomial, seed, count, tol } => {
            let spec = parse_spec(monomial)?;
            let tol = positive("tol", *tol)?;
            let seed = seed_or_env(*seed)?
                .ok_or_else(|| Failure::Usage(format!("sample needs --seed or {SEED_ENV}")))?;
            if *count == 0 {
                return Err(Failure::Usage("--count must be positive".into()));
            }
            let report = sample_batch(&spec, seed, *count, tol)?;
            let text = report
                .samples
                .iter()
                .map(|s| format!("seed {}: radical {}, verified {}", s.seed, s.radical, s.verified))
                .chain(std::iter::once(format!("radical fraction {}", report.radical_fraction)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((to_value(&report), text))
        }
        Command::Diagnose { monomial, phi, seed } => {
            let spec = parse_spec(monomial)?;
            let phi = parse_phi(&spec, &phi.phi)?;
            require_radical(&spec, &phi)?;
            let seed = seed_or_env(*seed)?.unwrap_or(EXTRACTION_SEED);
            let points = extract_points(&build_quotient(&spec, &phi)?, DEFAULT_CLUSTER_TOL, seed)?;
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for t in 0..=i64::from(spec.degree()) + 2 {
                let h_points = point_ideal_hilbert_with(&points, t, cutoff);
                let h_j = hilbert_s_mod_j(&spec, t);
                let q_t = q_t_diagnostic(&spec, &points, t, cutoff)?;
                let q_next = q_t_diagnostic(&spec, &points, t + 1, cutoff)?;
                let dim_i = dim_ideal_t(&points, t, cutoff);
                let j_prev = dim_j(&spec, t - 1);
                let perp = dim_perp_cap_alpha0(&spec, t);
                let identity = i128::from(perp) == dimension_difference_rhs(&spec, t);
                rows.push(json!({
                    "t": t,
                    "hilbert_points": h_points,
                    "hilbert_s_mod_j": h_j,
                    "q_t": q_t,
                    "q_t_plus_1": q_next,
                    "dim_ideal_t": dim_i,
                    "dim_j_t_minus_1": j_prev,
                    "dim_perp_cap_alpha0": perp,
                    "dimension_identity": identity,
                }));
                text.push(format!(
                    "t = {t}: h_points {h_points}, h_J {h_j}, q_t {q_t} <= dim J_(t-1) {j_prev}, q_(t+1) {q_next} = dim I_t {dim_i}, identity {identity}"
                ));
            }
            let alpha0 = check_alpha0_nonzero(&points, DEFAULT_CLUSTER_TOL);
            let value = json!({ "monomial": spec, "points": points.len(), "alpha0_nonzero": alpha0, "rows": rows });
            text.push(format!("{} points, a0 nonzero: {alpha0}", points.len()));
            Ok((value, text.join("\n")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, text)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("value serializes")),
                Format::Text => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end: every pipeline behind one binary with
//! machine-readable output. JSON for single results, streaming TSV for
//! scans. Exit codes: 1 usage, 2 validation, 3 cross-route disagreement,
//! 4 budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use jacrank::cartier;
use jacrank::charsum::{self, Base, CurveSpec};
use jacrank::criteria::{self, Route};
use jacrank::cyclo;
use jacrank::ff::{make_field, FieldSpec, FqElem};
use jacrank::zeta;
use jacrank::Error;

const DEFAULT_MAX_TERMS: u128 = 1_000_000_000;

#[derive(Parser)]
#[command(name = "jacrank", version, about = "Exact p-rank and supersingularity data for cyclic covers y^m = f(x) over finite fields", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for enumerations (env JACRANK_THREADS as fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Budget on summation terms for exponential enumerations
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi sum J_(a) over F_{p^h} with its prime valuations above p
    #[command(disable_help_flag = true)]
    Jacobi {
        #[arg(short, long)]
        m: u64,
        #[arg(short, long)]
        p: u64,
        /// Field degree h (default: multiplicative order of p mod m)
        #[arg(short = 'h', long = "degree")]
        h: Option<usize>,
        /// Exponent tuple a_1,...,a_d
        #[arg(short, long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, action = ArgAction::HelpLong)]
        help: Option<bool>,
    },
    /// Stickelberger data: d_u table, theta exponents, C_h, E_h, orbit sums
    Stickelberger {
        #[arg(short, long)]
        m: u64,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
    },
    /// Exponent-combinatorics verdicts: not supersingular / not p-rank 0
    Criteria {
        #[arg(short, long)]
        m: u64,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
    },
    /// L-polynomial of one character power, with constant-term verification
    Lpoly {
        #[arg(long)]
        curve: PathBuf,
        /// Character power (1..m-1)
        #[arg(short)]
        j: Option<u64>,
    },
    /// p-rank verdicts by route, with cross-route agreement
    Prank {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "all", value_parser = ["criterion", "oracle", "cartier", "all"])]
        route: String,
    },
    /// Point counts, zeta numerator, genus, p-rank, supersingularity
    Zeta {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Cartier-Manin matrix of y^2 = f(x) over F_p
    Cartier {
        #[arg(short, long)]
        p: u64,
        /// Coefficients of f, ascending, comma-separated
        #[arg(short, long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        f: Vec<i64>,
    },
    /// Deuring polynomial H(lambda) mod p and its roots in F_{p^2}
    Deuring {
        #[arg(short, long)]
        p: u64,
    },
    /// Stream all scanned branch tuples with p-rank 0 as TSV
    Search {
        #[arg(long)]
        curve_template: PathBuf,
        /// What to scan; only "branch" is supported (null entries vary)
        #[arg(long, default_value = "branch", value_parser = ["branch"])]
        scan: String,
    },
}

// ---- curve spec files ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    p: u64,
    h: usize,
    m: u64,
    exponents: Vec<u64>,
    branch: Vec<serde_json::Value>,
    base: BaseFile,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseFile {
    Name(String),
    Superelliptic { m0: u64, f0: Vec<serde_json::Value> },
}

fn elem_from_value(
    field: &FieldSpec,
    v: &serde_json::Value,
    what: &str,
) -> Result<Option<FqElem>, String> {
    let norm = |n: i64| -> u64 { n.rem_euclid(field.p as i64) as u64 };
    match v {
        serde_json::Value::Null => Ok(None),
        serde_json::Value::Number(n) => {
            let n = n
                .as_i64()
                .ok_or_else(|| format!("field {what}: integer out of range"))?;
            Ok(Some(field.from_int(n)))
        }
        serde_json::Value::Array(xs) => {
            if xs.len() > field.h {
                return Err(format!(
                    "field {what}: {} coefficients but field degree is {}",
                    xs.len(),
                    field.h
                ));
            }
            let mut coeffs = vec![0u64; field.h];
            for (i, x) in xs.iter().enumerate() {
                let n = x
                    .as_i64()
                    .ok_or_else(|| format!("field {what}[{i}]: not an integer"))?;
                coeffs[i] = norm(n);
            }
            Ok(Some(FqElem { coeffs }))
        }
        _ => Err(format!("field {what}: expected integer, array, or null")),
    }
}

struct LoadedCurve {
    field: FieldSpec,
    m: u64,
    exponents: Vec<u64>,
    /// None marks a scan slot (only legal for `search`)
    branch: Vec<Option<FqElem>>,
    base: Base,
}

fn load_curve_file(path: &PathBuf) -> Result<LoadedCurve, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let cf: CurveFile = serde_json::from_str(&text)
        .map_err(|e| format!("{}: line {}: {e}", path.display(), e.line()))?;
    let field = make_field(cf.p, cf.h).map_err(|e| format!("field p/h: {e}"))?;
    let mut branch = Vec::with_capacity(cf.branch.len());
    for (i, v) in cf.branch.iter().enumerate() {
        branch.push(elem_from_value(&field, v, &format!("branch[{i}]"))?);
    }
    let base = match cf.base {
        BaseFile::Name(s) if s == "P1" => Base::P1,
        BaseFile::Name(s) => return Err(format!("field base: unknown base {s:?}")),
        BaseFile::Superelliptic { m0, f0 } => {
            let mut coeffs = Vec::with_capacity(f0.len());
            for (i, v) in f0.iter().enumerate() {
                match elem_from_value(&field, v, &format!("base.f0[{i}]"))? {
                    Some(x) => coeffs.push(x),
                    None => return Err(format!("field base.f0[{i}]: null not allowed")),
                }
            }
            Base::Superelliptic { m0, f0: coeffs }
        }
    };
    Ok(LoadedCurve { field, m: cf.m, exponents: cf.exponents, branch, base })
}

fn fixed_curve(lc: &LoadedCurve) -> Result<CurveSpec, String> {
    let mut branch = Vec::with_capacity(lc.branch.len());
    for (i, b) in lc.branch.iter().enumerate() {
        match b {
            Some(x) => branch.push(x.clone()),
            None => return Err(format!("field branch[{i}]: null only allowed in search")),
        }
    }
    CurveSpec::new(lc.field.clone(), lc.m, lc.exponents.clone(), branch, lc.base.clone())
        .map_err(|e| e.to_string())
}

// ---- exit-code plumbing ----

enum Failure {
    Validation(String),
    Disagreement,
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded(_) | Error::DegreeTooLarge(_) => {
                Failure::Budget(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Validation(s)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("JACRANK_THREADS").ok().and_then(|s| s.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    match run(cli.command, threads, cli.max_terms) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement) => {
            eprintln!("error: routes disagree");
            ExitCode::from(3)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn emit(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

fn run(cmd: Command, threads: usize, max_terms: u128) -> Result<(), Failure> {
    match cmd {
        Command::Jacobi { m, p, h, a, help: _ } => {
            let e = criteria::exponent_data(m, &a, p)?;
            let h = h.unwrap_or(e.h);
            let field = make_field(p, h)?;
            let j = charsum::jacobi_sum(&field, m, &a)?;
            let valuations = cyclo::valuations_auto(&j, m, p)?;
            emit(json!({
                "field": field,
                "m": m,
                "a": a,
                "J": j.coeffs,
                "abs_square": j.abs_square(),
                "valuations": valuations,
            }));
            Ok(())
        }
        Command::Stickelberger { m, p, a } => {
            let e = criteria::exponent_data(m, &a, p)?;
            emit(json!({
                "m": m, "p": p, "a": a,
                "h": e.h, "b": e.b,
                "c_h": e.c_h, "e_h": e.e_h,
                "d_u": &e.d_u[1..],
                "o_t": e.o_t,
                "theta": e.theta_multiset(),
            }));
            Ok(())
        }
        Command::Criteria { m, p, a } => {
            let e = criteria::exponent_data(m, &a, p)?;
            emit(json!({
                "m": m, "p": p, "a": a,
                "o_t": e.o_t,
                "not_supersingular": criteria::not_supersingular_test(&e),
                "not_prank0": criteria::not_prank0_test(&e),
            }));
            Ok(())
        }
        Command::Lpoly { curve, j } => {
            let lc = load_curve_file(&curve)?;
            let c = fixed_curve(&lc)?;
            let j = j.unwrap_or(1);
            let lp = charsum::l_polynomial(&c, j, threads, max_terms)?;
            let constant_term = if j == 1 {
                Some(charsum::verify_constant_term(&c, threads, max_terms)?)
            } else {
                None
            };
            let coeffs: Vec<&Vec<i128>> = lp.coeffs.iter().map(|c| &c.coeffs).collect();
            emit(json!({
                "field": c.field,
                "m": c.m,
                "j": j,
                "coeffs": coeffs,
                "constant_term": constant_term,
            }));
            Ok(())
        }
        Command::Prank { curve, route } => {
            let lc = load_curve_file(&curve)?;
            let c = fixed_curve(&lc)?;
            let routes: Vec<Route> = match route.as_str() {
                "criterion" => vec![Route::Criterion],
                "oracle" => vec![Route::Oracle],
                "cartier" => vec![Route::Cartier],
                _ => vec![Route::Criterion, Route::Oracle, Route::Cartier],
            };
            let all = route == "all";
            let mut verdicts = Vec::new();
            for r in routes {
                match criteria::run_route(&c, r, threads, max_terms) {
                    Ok(v) => verdicts.push(v),
                    // under --route all, shape-inapplicable routes are skipped
                    Err(Error::WrongShape(_)) if all => {}
                    Err(e) => return Err(e.into()),
                }
            }
            let agree = criteria::routes_agree(&verdicts);
            emit(json!({
                "field": c.field,
                "verdicts": verdicts,
                "agree": agree,
            }));
            if agree { Ok(()) } else { Err(Failure::Disagreement) }
        }
        Command::Zeta { curve } => {
            let lc = load_curve_file(&curve)?;
            let c = fixed_curve(&lc)?;
            let z = zeta::zeta_numerator(&c, threads, max_terms)?;
            emit(json!({
                "field": c.field,
                "counts": z.counts,
                "l_coeffs": z.l_coeffs,
                "genus": z.genus,
                "prank": z.prank,
                "supersingular": z.supersingular,
            }));
            Ok(())
        }
        Command::Cartier { p, f } => {
            let field = make_field(p, 1)?;
            let coeffs: Vec<FqElem> = f.iter().map(|&c| field.from_int(c)).collect();
            let a = cartier::cartier_matrix(&field, &coeffs)?;
            let genus2 = if a.genus == 2 {
                Some(cartier::genus2_prank0_test(&a)?)
            } else {
                None
            };
            let rank = cartier::semilinear_prank(&a);
            emit(json!({
                "field": field,
                "genus": a.genus,
                "matrix": a.entries,
                "genus2_prank0": genus2,
                "semilinear_prank": rank,
            }));
            Ok(())
        }
        Command::Deuring { p } => {
            let d = criteria::deuring(p)?;
            emit(json!({
                "p": p,
                "field": d.field,
                "coeffs": d.coeffs,
                "roots": d.roots,
            }));
            Ok(())
        }
        Command::Search { curve_template, scan: _ } => {
            let lc = load_curve_file(&curve_template)?;
            search_branch(&lc, threads, max_terms)
        }
    }
}

/// Scan every null branch slot over the field, lexicographically by element
/// index, and print one TSV row per tuple with certified p-rank 0.
fn search_branch(lc: &LoadedCurve, threads: usize, max_terms: u128) -> Result<(), Failure> {
    let slots: Vec<usize> = lc
        .branch
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.is_none().then_some(i))
        .collect();
    let q = lc.field.q();
    let mut header = String::new();
    for s in &slots {
        header.push_str(&format!("alpha{s}\t"));
    }
    println!("{header}verdict\twitness");
    let n_tuples = (q as u128).pow(slots.len() as u32);
    let mut idx: u128 = 0;
    while idx < n_tuples {
        let mut t = idx;
        idx += 1;
        let mut branch: Vec<Option<FqElem>> = lc.branch.clone();
        let mut fill = Vec::with_capacity(slots.len());
        for &s in &slots {
            let e = lc.field.elem_from_index((t % q as u128) as u64);
            t /= q as u128;
            fill.push(e.clone());
            branch[s] = Some(e);
        }
        let branch: Vec<FqElem> = branch.into_iter().map(|b| b.unwrap()).collect();
        let curve = match CurveSpec::new(
            lc.field.clone(),
            lc.m,
            lc.exponents.clone(),
            branch,
            lc.base.clone(),
        ) {
            Ok(c) => c,
            Err(_) => continue, // degenerate tuple (repeated point etc.)
        };
        let (prank0, witness) = cheap_prank0(&curve, threads, max_terms)?;
        if !prank0 {
            continue;
        }
        let mut row = String::new();
        for e in &fill {
            row.push_str(&format!("{}\t", lc.field.index_of(e)));
        }
        println!("{row}prank0\t{witness}");
    }
    Ok(())
}

/// Cheapest conclusive route: Cartier rank for squarefree hyperelliptic
/// models, else the equation system, else the oracle.
fn cheap_prank0(
    curve: &CurveSpec,
    threads: usize,
    max_terms: u128,
) -> Result<(bool, String), Failure> {
    if curve.m == 2
        && matches!(curve.base, Base::P1)
        && curve.exponents.iter().all(|&a| a == 1)
    {
        if let Ok(v) = criteria::run_route(curve, Route::Cartier, threads, max_terms) {
            let r = v.prank.expect("cartier route reports a rank");
            return Ok((r == 0, format!("cartier:rank={r}")));
        }
    }
    match criteria::prank0_equations(curve, threads, max_terms) {
        Ok(sys) => {
            let sat = sys.satisfied.iter().filter(|&&b| b).count();
            Ok((
                sys.verdict,
                format!("equations:{}/{}", sat, sys.satisfied.len()),
            ))
        }
        Err(Error::HypothesisViolated) | Err(Error::BaseNotP1) => {
            let pr = zeta::prank(curve, threads, max_terms)?;
            Ok((pr == 0, format!("oracle:prank={pr}")))
        }
        Err(e) => Err(e.into()),
    }
}

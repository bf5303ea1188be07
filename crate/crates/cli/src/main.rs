//! `maxprod`: build, verify and evaluate jointly maximal products.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use maxprod::analysis::verdict;
use maxprod::{
    a_point_report, certify_doubling, counting_bound_check, covering_check, default_probe_grid, density_table,
    intervals, jensen_check, jensen_radii, max_cover_index, max_usable_decade, select_gamma, validate_sequence,
    verify_theorem, Complex, Construction64, DiscPoint64, Error, GridSpec, LogPos64, Product64, RationalAngle,
    Weight64,
};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RANGE: u8 = 3;

/// First decade of the verification grid; earlier decades are pre-asymptotic.
const FIRST_DECADE: u32 = 3;

#[derive(Parser)]
#[command(name = "maxprod", version, about = "Jointly maximal infinite products for doubling weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the sequences (n_k, a_k), validate them and write the construction file.
    Construct(ConstructArgs),
    /// Run the covering, comparability, counting and Jensen checks.
    Verify(VerifyArgs),
    /// Evaluate f₀, f₁ and log ω at one point.
    Eval(EvalArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Weight spec, e.g. `pow:beta=1`, `log`, `exploglog`, `prod:pow:0.5,log`.
    #[arg(long, required_unless_present = "construction")]
    weight: Option<String>,
    /// Growth exponent; by default the smallest admissible quarter step.
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of terms to construct.
    #[arg(long = "K", default_value_t = 24)]
    k: usize,
    /// Load a construction file instead of building one.
    #[arg(long, conflicts_with_all = ["weight", "gamma"])]
    construction: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long, default_value = "maxprod-out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    build: BuildArgs,
    /// Covering parameter; at most the construction's bound, which is the default.
    #[arg(long)]
    delta: Option<f64>,
    /// Truncation tolerance.
    #[arg(long, default_value_t = maxprod::analysis::DEFAULT_TOL)]
    tol: f64,
    /// Deepest decade of 1 - r on the grid (at least 3).
    #[arg(long, default_value_t = 8)]
    decades: u32,
    /// Angles per radius (rounded down to a prime).
    #[arg(long, default_value_t = 4096)]
    angles: u64,
    #[arg(long, default_value = "maxprod-out")]
    out: PathBuf,
    /// Comma-separated values a ≠ 0 for N(r, f_j, a), e.g. `-1,2i`.
    #[arg(long = "a-probes", default_value = "-1,2i", allow_hyphen_values = true)]
    a_probes: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    build: BuildArgs,
    /// 1 - |z|, in decimal or scientific notation (any exponent).
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    #[arg(long, default_value_t = 0)]
    theta_num: u64,
    /// The angle is 2π·theta_num/theta_den.
    #[arg(long, default_value_t = 1)]
    theta_den: u64,
    #[arg(long, default_value_t = maxprod::analysis::DEFAULT_TOL)]
    tol: f64,
}

/// A failed run: message and exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientDepth { required_ln_eps, .. } => Failure(
                EXIT_RANGE,
                format!("{e}; the construction supports decades up to {}", max_usable_decade(required_ln_eps)),
            ),
            Error::Argument(_) | Error::WeightSpec(_) => Failure(EXIT_USAGE, e.to_string()),
            _ => Failure(EXIT_FAIL, e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn io(path: &Path, e: std::io::Error) -> Failure {
    Failure(EXIT_FAIL, format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(Failure(code, msg)) = configure_threads() {
        eprintln!("maxprod: {msg}");
        return ExitCode::from(code);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Eval(a) => eval(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure(code, msg)) => {
            eprintln!("maxprod: {msg}");
            ExitCode::from(code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MAXPROD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("MAXPROD_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure(EXIT_FAIL, e.to_string()))
}

fn build(args: &BuildArgs) -> Result<Construction64, Failure> {
    if let Some(path) = &args.construction {
        let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
        return Ok(Construction64::from_text(&text)?);
    }
    let spec = args.weight.as_deref().expect("clap requires --weight without --construction");
    let w: Weight64 = spec.parse()?;
    let cert = certify_doubling(&w, &default_probe_grid(&w))?;
    let gamma = match args.gamma {
        Some(g) if !(g > 0.0 && g.is_finite()) => return Err(usage(format!("--gamma must be positive, got {g}"))),
        Some(g) => g,
        None => select_gamma(&cert)?,
    };
    if args.k < 3 {
        return Err(usage("--K must be at least 3"));
    }
    info!("weight {} certified: B = {}, alpha = {}, C = {}", w.spec(), cert.b, cert.alpha, cert.c);
    Ok(maxprod::build_sequence(&w, &cert, gamma, args.k)?)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io(&path, e))
}

fn describe(c: &Construction64) -> String {
    let cert = c.certificate();
    format!(
        "weight {}: B = {:.6}, alpha = {:.6}, C = {:.6}, gamma = {:.6}, K = {}{}",
        c.weight().spec(),
        cert.b,
        cert.alpha,
        cert.c,
        c.gamma(),
        c.len(),
        if c.is_truncated() { format!(" (of {} requested)", c.requested_terms()) } else { String::new() }
    )
}

fn construct(args: ConstructArgs) -> Result<bool, Failure> {
    let c = build(&args.build)?;
    fs::create_dir_all(&args.out).map_err(|e| io(&args.out, e))?;
    let report = validate_sequence(&c);
    write(&args.out, "construction.txt", &c.to_text())?;
    write(&args.out, "validation.csv", &report.to_csv())?;
    println!("{}", describe(&c));
    let ns: Vec<String> = c.ns().iter().take(6).map(maxprod::bigint::format_big).collect();
    println!("n = [{}{}]", ns.join(", "), if c.len() > 6 { ", ..." } else { "" });
    if !report.gamma_ok {
        let cert = c.certificate();
        println!(
            "gamma = {} is not admissible: it must exceed alpha + log2 C = {:.6}",
            c.gamma(),
            cert.alpha + cert.c.log2()
        );
    }
    if let Some(k) = report.first_chain_failure() {
        println!("chain inequality fails at k = {k}");
    }
    println!("validation: {}", verdict(report.passed));
    Ok(report.passed)
}

fn parse_probes(s: &str) -> Result<Vec<Complex<f64>>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let a: Complex<f64> = p.parse().map_err(|_| usage(format!("bad a-probe `{p}`")))?;
            if a == Complex::new(0.0, 0.0) {
                return Err(usage("a-probes must be non-zero; a = 0 is always reported"));
            }
            Ok(a)
        })
        .collect()
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    if args.decades < FIRST_DECADE {
        return Err(usage(format!("--decades must be at least {FIRST_DECADE}")));
    }
    if !(args.tol > 0.0 && args.tol < 0.5) {
        return Err(usage(format!("--tol must lie in (0, 1/2), got {}", args.tol)));
    }
    let probes = parse_probes(&args.a_probes)?;
    let c = build(&args.build)?;
    let bound = c.delta_bound();
    let delta = match args.delta {
        Some(d) if !(d > 0.0 && d <= bound) => {
            return Err(usage(format!("--delta must lie in (0, {bound}], got {d}")))
        }
        Some(d) => d,
        None => bound,
    };
    let mut spec = GridSpec::new(FIRST_DECADE, args.decades, args.angles)?;
    spec.tol = args.tol;
    let w = c.weight().clone();
    let f0 = Product64::from_construction(&c, 0)?;
    let f1 = Product64::from_construction(&c, 1)?;
    fs::create_dir_all(&args.out).map_err(|e| io(&args.out, e))?;
    println!("{}", describe(&c));

    let validation = validate_sequence(&c);
    write(&args.out, "construction.txt", &c.to_text())?;
    write(&args.out, "validation.csv", &validation.to_csv())?;

    let cover = covering_check(&c, delta, max_cover_index(&c))?;
    write(&args.out, "cover.csv", &cover.to_csv())?;
    let mut density = String::from("j,m,eps,density\n");
    for j in 0..2u8 {
        for row in density_table(&intervals(&c, j, delta)?)? {
            density.push_str(&format!("{},{},{},{:.17e}\n", j, row.m, row.eps.to_sci(17), row.ratio));
        }
    }
    write(&args.out, "density.csv", &density)?;

    let theorem = verify_theorem(&c, &f0, &f1, &w, delta, &spec)?;
    write(&args.out, "r1.csv", &theorem.r1_csv())?;
    write(&args.out, "radii.csv", &theorem.radii_csv())?;

    let counting = [counting_bound_check(&c, &f0)?, counting_bound_check(&c, &f1)?];
    let counting_csv = counting[0].to_csv() + counting[1].to_csv().split_once('\n').map_or("", |(_, rest)| rest);
    write(&args.out, "counting.csv", &counting_csv)?;
    let jensen = [jensen_check(&f0, &jensen_radii(&f0, 20)?)?, jensen_check(&f1, &jensen_radii(&f1, 20)?)?];
    let jensen_csv = jensen[0].to_csv() + jensen[1].to_csv().split_once('\n').map_or("", |(_, rest)| rest);
    write(&args.out, "jensen.csv", &jensen_csv)?;

    let mut a_reports = Vec::new();
    for a in &probes {
        for p in [&f0, &f1] {
            a_reports.push(a_point_report(p, &w, *a, &spec)?);
        }
    }

    let means_ok = theorem.means.iter().all(|m| m.2.passed);
    let characteristic_ok = theorem.characteristic.iter().all(|r| r.passed);
    let counting_ratio_ok = theorem.counting.iter().all(|r| r.passed);
    let counting_ok = counting.iter().all(|r| r.passed);
    let jensen_ok = jensen.iter().all(|r| r.passed);
    let verdicts = [
        ("validation", validation.passed),
        ("covering", cover.passed),
        ("joint", theorem.joint.passed),
        ("means", means_ok),
        ("characteristic", characteristic_ok),
        ("counting_ratio", counting_ratio_ok),
        ("chain", theorem.chain.passed),
        ("counting_bound", counting_ok),
        ("jensen", jensen_ok),
    ];
    let passed = verdicts.iter().all(|v| v.1);

    let verdict_map: serde_json::Map<String, Value> =
        verdicts.iter().map(|(k, v)| (k.to_string(), json!(verdict(*v)))).collect();
    let summary = json!({
        "weight": w.spec(),
        "gamma": c.gamma(),
        "K": c.len(),
        "requested_K": c.requested_terms(),
        "delta": delta,
        "delta_bound": bound,
        "certificate": c.certificate(),
        "grid": spec,
        "verdict": verdict(passed),
        "verdicts": verdict_map,
        "covering": {
            "rows": cover.rows.len(),
            "first_failure": cover.first_failure(),
            "verdict": verdict(cover.passed),
        },
        "joint": theorem.joint,
        "joint_at_zeros": theorem.joint_at_zeros,
        "means": theorem.means.iter().map(|(j, p, r)| json!({"j": j, "p": p, "report": r})).collect::<Vec<_>>(),
        "characteristic": theorem.characteristic,
        "counting": theorem.counting,
        "chain": theorem.chain,
        "min_modulus_on_e": theorem.min_modulus_on_e,
        "max_modulus_excess": theorem.max_modulus_excess,
        "counting_bound": counting.iter().map(|r| json!({
            "j": r.parity, "min": r.min, "max": r.max, "spread": r.spread, "verdict": verdict(r.passed),
        })).collect::<Vec<_>>(),
        "jensen": jensen.iter().map(|r| json!({
            "j": r.parity, "max_error": r.max_error, "radii": r.rows.len(), "verdict": verdict(r.passed),
        })).collect::<Vec<_>>(),
        "a_probes": a_reports,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Failure(EXIT_FAIL, e.to_string()))? + "\n";
    write(&args.out, "summary.json", &text)?;

    for (name, ok) in verdicts {
        println!("{name:16} {}", verdict(ok));
    }
    for (j, label, r) in &theorem.means {
        if !r.passed {
            println!("  M_{label}(f{j}): {}", brief(&r.failures));
        }
    }
    for r in theorem.characteristic.iter().chain(&theorem.counting).chain([&theorem.joint]) {
        if !r.passed {
            println!("  {}: {}", r.name, brief(&r.failures));
        }
    }
    println!("reports written to {}", args.out.display());
    Ok(passed)
}

fn brief(failures: &[String]) -> String {
    let mut s = failures.iter().take(2).cloned().collect::<Vec<_>>().join("; ");
    if failures.len() > 2 {
        s.push_str(&format!("; {} more", failures.len() - 2));
    }
    s
}

/// `ln x` for a decimal `x` in `(0, 1]` of any exponent (`1e-400` is fine).
fn parse_ln_eps(s: &str) -> Option<f64> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let m: f64 = mant.parse().ok()?;
    if !(m > 0.0 && m.is_finite()) {
        return None;
    }
    Some(m.ln() + exp as f64 * std::f64::consts::LN_10)
}

fn eval(args: EvalArgs) -> Result<bool, Failure> {
    if args.theta_den == 0 {
        return Err(usage("--theta-den must be positive"));
    }
    if !(args.tol > 0.0 && args.tol < 0.5) {
        return Err(usage(format!("--tol must lie in (0, 1/2), got {}", args.tol)));
    }
    let ln_eps = parse_ln_eps(&args.eps)
        .filter(|&l| l <= 0.0)
        .ok_or_else(|| usage(format!("--eps must be a number in (0, 1], got `{}`", args.eps)))?;
    let c = build(&args.build)?;
    let angle = RationalAngle::new(args.theta_num, args.theta_den)?;
    let z = if ln_eps == 0.0 {
        DiscPoint64::origin()
    } else {
        DiscPoint64::from_eps(LogPos64::from_ln(ln_eps), angle.clone())?
    };
    let w = c.weight();
    println!("z: eps = {}, theta = 2pi*{}/{}", z.eps().to_sci(17), angle.num(), angle.den());
    for j in 0..2u8 {
        let p = Product64::from_construction(&c, j)?;
        let log_mod = p.log_modulus(&z, args.tol)?;
        let value = p.eval(&z, args.tol)?;
        println!("f{j} = {:.16e}{:+.16e}i", value.re, value.im);
        println!("log|f{j}| = {}", fmt_log(log_mod));
    }
    println!("log omega = {}", fmt_log(w.log_eval(z.eps())? + 0.0));
    Ok(true)
}

fn fmt_log(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

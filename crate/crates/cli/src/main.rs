//! Command-line front end: compute pi through independent routes, derive
//! and persist the closed-form constants, verify them against elliptic
//! numerics, and profile series convergence.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 internal failure.

mod cache;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cache::ConstantCacheFile;
use pi_forge_core::analysis::{measure_convergence, verify_constants, VerificationReport};
use pi_forge_core::constants::{derive_constant_set, t_3315, DerivedConstantSet};
use pi_forge_core::elliptic::{agm_pi, EllipticPoint};
use pi_forge_core::series::{
    berndt_chan_3315_params, chudnovsky_params, eval_to_precision, series_params_for_r,
    SeriesParams,
};
use pi_forge_core::{BigReal, DigitRounding, PrecisionContext};

#[derive(Parser)]
#[command(
    name = "pi-forge",
    version,
    about = "Compute pi from closed-form series constants"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute pi to a requested number of decimal digits
    Compute(ComputeArgs),
    /// Derive the constant set and series parameters, optionally caching them
    Derive(DeriveArgs),
    /// Cross-verify derived constants, or audit a cache file
    Verify(VerifyArgs),
    /// Measure per-term convergence of a series
    Converge(ConvergeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesChoice {
    /// One-hundred-fifty-three digits per term
    #[value(name = "new-13260")]
    New13260,
    /// Fourteen digits per term
    #[value(name = "chudnovsky")]
    Chudnovsky,
    /// Seventy-five digits per term
    #[value(name = "berndt-chan-3315")]
    BerndtChan3315,
    /// Quadratic arithmetic-geometric iteration, no series terms
    #[value(name = "agm")]
    Agm,
}

impl SeriesChoice {
    fn label(self) -> &'static str {
        match self {
            SeriesChoice::New13260 => "new-13260",
            SeriesChoice::Chudnovsky => "chudnovsky",
            SeriesChoice::BerndtChan3315 => "berndt-chan-3315",
            SeriesChoice::Agm => "agm",
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Decimal digits after the point
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    digits: u64,
    #[arg(long, value_enum, default_value_t = SeriesChoice::New13260)]
    series: SeriesChoice,
    /// Emit a JSON object instead of plain digits
    #[arg(long)]
    json: bool,
    /// Wrap digit output at this many digits per line (0 = one line)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=10_000))]
    wrap: u64,
    /// Constant cache to reuse or populate
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Skip the independent-route cross-check
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct DeriveArgs {
    /// Significant digits to print for every constant
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    digits: u64,
    #[arg(long)]
    json: bool,
    /// Constant cache to reuse or populate
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Target precision of the verification run
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    digits: u64,
    #[arg(long)]
    json: bool,
    /// Audit this cache file instead of a freshly derived set
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Target precision of the measurement
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    digits: u64,
    #[arg(long, value_enum, default_value_t = SeriesChoice::New13260)]
    series: SeriesChoice,
    /// Number of leading partial sums to measure
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=64))]
    points: u64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(err.exit_code().clamp(0, 255) as u8);
        }
    };
    let outcome = match cli.cmd {
        Cmd::Compute(a) => cmd_compute(a),
        Cmd::Derive(a) => cmd_derive(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Converge(a) => cmd_converge(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}

/// Load a usable cache, or derive fresh and rewrite the cache in place.
fn constant_set(
    ctx: &PrecisionContext,
    cache_path: Option<&Path>,
) -> anyhow::Result<DerivedConstantSet> {
    if let Some(path) = cache_path {
        if path.exists() {
            if let Ok(file) = ConstantCacheFile::load(path) {
                if file.usable(ctx.working_digits()) {
                    return file.restore(ctx).context("restoring cached constants");
                }
            }
        }
        let set = derive_constant_set(ctx).context("deriving constants")?;
        ConstantCacheFile::build(&set, ctx)?.store(path)?;
        Ok(set)
    } else {
        derive_constant_set(ctx).context("deriving constants")
    }
}

fn series_params(
    choice: SeriesChoice,
    ctx: &PrecisionContext,
    cache_path: Option<&Path>,
) -> anyhow::Result<SeriesParams> {
    match choice {
        SeriesChoice::Chudnovsky => chudnovsky_params(ctx).context("building series parameters"),
        SeriesChoice::BerndtChan3315 => {
            let set = constant_set(ctx, cache_path)?;
            let t = t_3315()
                .evaluate(ctx)
                .context("evaluating the radical combination")?;
            berndt_chan_3315_params(&set.j_3315, &t, ctx).context("building series parameters")
        }
        SeriesChoice::New13260 => {
            let set = constant_set(ctx, cache_path)?;
            let point = EllipticPoint::new(13260, set.lambda_star_13260, set.alpha_13260)
                .context("validating the derived point")?;
            let mut p = series_params_for_r(&point, ctx).context("building series parameters")?;
            p.label = "new-13260".to_string();
            Ok(p)
        }
        SeriesChoice::Agm => anyhow::bail!("the quadratic iteration has no series parameters"),
    }
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    series: &'a str,
    digits: usize,
    value: String,
    terms_used: usize,
    runtime_ms: u128,
    verified: bool,
}

fn cmd_compute(a: ComputeArgs) -> anyhow::Result<u8> {
    let digits = a.digits as usize;
    let ctx = PrecisionContext::new(digits).context("setting precision")?;
    let started = Instant::now();
    let (pi, terms_used) = match a.series {
        SeriesChoice::Agm => (
            agm_pi(&ctx).context("running the quadratic iteration")?,
            0usize,
        ),
        choice => {
            let p = series_params(choice, &ctx, a.cache.as_deref())?;
            let ev = eval_to_precision(&p, &ctx).context("summing the series")?;
            let pi = BigReal::one(&ctx)
                .div(&ev.value, &ctx)
                .context("inverting the series sum")?;
            (pi, ev.terms_used)
        }
    };

    let verified = if a.no_verify {
        false
    } else {
        let (partner, partner_label) = match a.series {
            SeriesChoice::Agm => {
                let p = series_params(SeriesChoice::New13260, &ctx, a.cache.as_deref())?;
                let ev = eval_to_precision(&p, &ctx).context("summing the series")?;
                let partner = BigReal::one(&ctx)
                    .div(&ev.value, &ctx)
                    .context("inverting the series sum")?;
                (partner, "new-13260")
            }
            _ => (
                agm_pi(&ctx).context("running the quadratic iteration")?,
                "agm",
            ),
        };
        if !pi.sub(&partner, &ctx).abs_below_pow10(-(digits as i64)) {
            eprintln!(
                "verification failed: {} and {partner_label} disagree beyond 1e-{digits}",
                a.series.label()
            );
            return Ok(1);
        }
        true
    };

    let value = pi
        .to_decimal(digits, DigitRounding::Truncate)
        .context("rendering digits")?;
    if a.json {
        let out = ComputeJson {
            series: a.series.label(),
            digits,
            value,
            terms_used,
            runtime_ms: started.elapsed().as_millis(),
            verified,
        };
        println!("{}", serde_json::to_string(&out)?);
    } else {
        println!("{}", wrap_value(&value, a.wrap as usize));
    }
    Ok(0)
}

/// Wrap "3.<digits>" at `width` digits per line; 0 leaves one line.
fn wrap_value(v: &str, width: usize) -> String {
    if width == 0 {
        return v.to_string();
    }
    let (head, digits) = v.split_at(v.find('.').map_or(v.len(), |i| i + 1));
    let mut lines = Vec::new();
    for (i, chunk) in digits.as_bytes().chunks(width).enumerate() {
        let chunk = std::str::from_utf8(chunk).expect("ascii digits");
        if i == 0 {
            lines.push(format!("{head}{chunk}"));
        } else {
            lines.push(chunk.to_string());
        }
    }
    if lines.is_empty() {
        lines.push(head.to_string());
    }
    lines.join("\n")
}

#[derive(Serialize)]
struct DeriveJson {
    digits: usize,
    constants: BTreeMap<String, String>,
    series: BTreeMap<String, String>,
}

fn cmd_derive(a: DeriveArgs) -> anyhow::Result<u8> {
    let digits = a.digits as usize;
    let ctx = PrecisionContext::new(digits).context("setting precision")?;
    let set = constant_set(&ctx, a.cache.as_deref())?;
    let point = EllipticPoint::new(
        13260,
        set.lambda_star_13260.clone(),
        set.alpha_13260.clone(),
    )
    .context("validating the derived point")?;
    let p = series_params_for_r(&point, &ctx).context("building series parameters")?;

    let sig = |v: &BigReal, name: &str| -> anyhow::Result<String> {
        v.to_decimal_sig(digits)
            .with_context(|| format!("rendering {name}"))
    };
    let constants: Vec<(&str, String)> = vec![
        ("j_3315", sig(&set.j_3315, "j_3315")?),
        ("x_3315", sig(&set.x_3315, "x_3315")?),
        (
            "lambda_star_3315",
            sig(&set.lambda_star_3315, "lambda_star_3315")?,
        ),
        ("alpha_3315", sig(&set.alpha_3315, "alpha_3315")?),
        (
            "lambda_star_13260",
            sig(&set.lambda_star_13260, "lambda_star_13260")?,
        ),
        ("alpha_13260", sig(&set.alpha_13260, "alpha_13260")?),
    ];
    let series: Vec<(&str, String)> = vec![
        ("z_13260", sig(&p.z, "z_13260")?),
        ("a_13260", sig(&p.a, "a_13260")?),
        ("b_13260", sig(&p.b, "b_13260")?),
    ];

    if a.json {
        let out = DeriveJson {
            digits,
            constants: constants
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            series: series
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for (name, value) in constants.iter().chain(series.iter()) {
            println!("{name} = {value}");
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckJson<'a> {
    check_name: &'a str,
    residual_log10: f64,
    tolerance_log10: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    digits: usize,
    all_pass: bool,
    checks: Vec<CheckJson<'a>>,
}

fn emit_report(report: &VerificationReport, digits: usize, json: bool) -> anyhow::Result<u8> {
    if json {
        let out = VerifyJson {
            digits,
            all_pass: report.all_pass(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckJson {
                    check_name: &c.check_name,
                    residual_log10: c.residual_log10,
                    tolerance_log10: c.tolerance_log10,
                    pass: c.pass,
                })
                .collect(),
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for c in &report.checks {
            println!(
                "{} {:<38} residual 10^{:<8.1} tolerance 10^{:.1}",
                if c.pass { "PASS" } else { "FAIL" },
                c.check_name,
                c.residual_log10,
                c.tolerance_log10
            );
        }
        let passed = report.checks.iter().filter(|c| c.pass).count();
        println!("{passed}/{} checks passed", report.checks.len());
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<u8> {
    if let Some(path) = a.cache.as_deref() {
        return audit_cache(path, a.json);
    }
    let digits = a.digits as usize;
    let ctx = PrecisionContext::new(digits).context("setting precision")?;
    let set = derive_constant_set(&ctx).context("deriving constants")?;
    let report = verify_constants(&set, &ctx).context("running verification")?;
    emit_report(&report, digits, a.json)
}

/// Re-verify the constants stored in a cache file at the precision it
/// claims; any structural mismatch or failing check is a failed audit.
fn audit_cache(path: &Path, json: bool) -> anyhow::Result<u8> {
    let file = match ConstantCacheFile::load(path) {
        Ok(file) => file,
        Err(err) => {
            eprintln!("cache audit failed: {err:#}");
            return Ok(1);
        }
    };
    let mut problems = Vec::new();
    if file.tool_version != cache::TOOL_VERSION {
        problems.push(format!(
            "tool version {} does not match {}",
            file.tool_version,
            cache::TOOL_VERSION
        ));
    }
    if file.paper_constants_checksum != cache::checksum() {
        problems.push("constant checksum does not match this binary".to_string());
    }
    if file.precision_digits < 60 {
        problems.push("declared precision is too low to audit".to_string());
    }
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("cache audit failed: {p}");
        }
        return Ok(1);
    }

    let target = file.precision_digits - 50;
    let ctx = PrecisionContext::with_guard(target, 50).context("setting precision")?;
    let set = match file.restore(&ctx) {
        Ok(set) => set,
        Err(err) => {
            eprintln!("cache audit failed: {err:#}");
            return Ok(1);
        }
    };

    // recomputation is deterministic, so every honest cache entry must
    // match byte for byte; this catches corruption too deep for the
    // absolute tolerances below
    let fresh = derive_constant_set(&ctx).context("deriving constants")?;
    let fresh_file = ConstantCacheFile::build(&fresh, &ctx)?;
    let mut mismatched = false;
    for (name, value) in &fresh_file.constants {
        if file.constants.get(name) != Some(value) {
            eprintln!("cache audit failed: {name} does not match recomputation");
            mismatched = true;
        }
    }

    let report = verify_constants(&set, &ctx).context("running verification")?;
    let code = emit_report(&report, target, json)?;
    Ok(if mismatched { 1 } else { code })
}

#[derive(Serialize)]
struct ConvergeJson<'a> {
    series: &'a str,
    predicted_digits_per_term: f64,
    measured_error_after: Vec<(usize, f64)>,
    terms_for_target: usize,
    precision: usize,
    runtime_ms: u128,
}

fn cmd_converge(a: ConvergeArgs) -> anyhow::Result<u8> {
    if a.series == SeriesChoice::Agm {
        eprintln!("converge profiles a series; the quadratic iteration has no terms");
        return Ok(2);
    }
    let digits = a.digits as usize;
    let ctx = PrecisionContext::new(digits).context("setting precision")?;
    let p = series_params(a.series, &ctx, None)?;
    let ns: Vec<usize> = (1..=a.points as usize).collect();
    let report = measure_convergence(&p, &ns, &ctx).context("measuring convergence")?;

    if a.json {
        let out = ConvergeJson {
            series: &report.series_label,
            predicted_digits_per_term: report.predicted_digits_per_term.to_f64(),
            measured_error_after: report.measured_error_after.clone(),
            terms_for_target: report.terms_for_target,
            precision: report.precision,
            runtime_ms: report.runtime_ms,
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("series {}", report.series_label);
        println!(
            "predicted digits per term {:.6}",
            report.predicted_digits_per_term.to_f64()
        );
        println!("terms for {digits} digits: {}", report.terms_for_target);
        println!("{:>4}  log10 |S_N - 1/pi|", "N");
        for (n, e) in &report.measured_error_after {
            println!("{n:>4}  {e:.2}");
        }
        println!(
            "measured in {}ms at {} working digits",
            report.runtime_ms, report.precision
        );
    }
    Ok(0)
}

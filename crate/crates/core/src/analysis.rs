//! Cross-verification and convergence measurement.
//!
//! `verify_constants` confronts every closed-form constant with a value
//! recomputed through the independent AGM route, plus the defining
//! equations the constants must satisfy; a failed check becomes a failing
//! report entry, never an error. `measure_convergence` measures actual
//! partial-sum error against an elevated-precision reference pi.

use std::time::Instant;

use crate::constants::DerivedConstantSet;
use crate::elliptic::{alpha_numeric_with_lambda, lambda_star_numeric, modulus_equation_residual};
use crate::error::{Error, Result};
use crate::mp::{BigReal, PrecisionContext};
use crate::series::{digits_per_term, partial_sum, SeriesParams};

/// One verification entry: residual and tolerance as log10 magnitudes.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub check_name: String,
    pub residual_log10: f64,
    pub tolerance_log10: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Convergence profile of one series at one precision.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub series_label: String,
    pub predicted_digits_per_term: BigReal,
    /// (N, log10 |S_N - 1/pi|), the error floored at -working digits.
    pub measured_error_after: Vec<(usize, f64)>,
    pub terms_for_target: usize,
    pub precision: usize,
    pub runtime_ms: u128,
}

/// log10 |v|, floored at `floor` (and pinned there for an exact zero).
fn log10_floored(v: &BigReal, floor: f64) -> f64 {
    if v.is_zero() {
        return floor;
    }
    v.log10_abs()
        .map(|l| l.to_f64().max(floor))
        .unwrap_or(floor)
}

/// Check the six derived constants against the AGM-based numerics and
/// their defining equations. Tolerance for every entry is
/// 10^-(target - 10); residuals are absolute.
pub fn verify_constants(
    set: &DerivedConstantSet,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    let floor = -(ctx.working_digits() as f64);
    let tolerance = -((ctx.target_digits() as f64) - 10.0);
    let mut checks = Vec::new();
    let mut push = |name: &str, residual: &BigReal| {
        let r = log10_floored(residual, floor);
        checks.push(CheckResult {
            check_name: name.into(),
            residual_log10: r,
            tolerance_log10: tolerance,
            pass: r < tolerance,
        });
    };

    let lam3315_num = lambda_star_numeric(3315, ctx)?;
    let lam13260_num = lambda_star_numeric(13260, ctx)?;
    push(
        "lambda-star-3315-closed-vs-numeric",
        &set.lambda_star_3315.sub(&lam3315_num, ctx),
    );
    push(
        "lambda-star-13260-closed-vs-numeric",
        &set.lambda_star_13260.sub(&lam13260_num, ctx),
    );
    let al3315_num = alpha_numeric_with_lambda(3315, &lam3315_num, ctx)?;
    let al13260_num = alpha_numeric_with_lambda(13260, &lam13260_num, ctx)?;
    push(
        "alpha-3315-closed-vs-numeric",
        &set.alpha_3315.sub(&al3315_num, ctx),
    );
    push(
        "alpha-13260-closed-vs-numeric",
        &set.alpha_13260.sub(&al13260_num, ctx),
    );

    // the invariant must be recovered exactly by its defining relation
    let one = BigReal::one(ctx);
    let den = one
        .sub(&BigReal::from_u64(4, ctx).mul(&set.x_3315, ctx), ctx)
        .powi(3, ctx);
    let back = BigReal::from_u64(27, ctx)
        .mul(&set.x_3315, ctx)
        .div(&den, ctx)?
        .neg();
    push("invariant-roundtrip-3315", &back.sub(&set.j_3315, ctx));

    // the closed moduli must satisfy the defining ratio equation
    push(
        "modulus-equation-3315",
        &modulus_equation_residual(3315, &set.lambda_star_3315, ctx)?,
    );
    push(
        "modulus-equation-13260",
        &modulus_equation_residual(13260, &set.lambda_star_13260, ctx)?,
    );

    Ok(VerificationReport { checks })
}

/// Measure |S_N - 1/pi| for each requested N against a reference pi
/// computed with 20 extra guard digits through the AGM iteration.
pub fn measure_convergence(
    p: &SeriesParams,
    ns: &[usize],
    ctx: &PrecisionContext,
) -> Result<ConvergenceReport> {
    if ns.is_empty() {
        return Err(Error::domain(
            "measure_convergence",
            "need at least one partial-sum length",
        ));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "measure_convergence",
            "partial-sum lengths must be strictly ascending",
        ));
    }
    let started = Instant::now();
    let ref_ctx = PrecisionContext::with_guard(ctx.target_digits(), ctx.guard_digits() + 20)?;
    let inv_pi = BigReal::one(&ref_ctx).div(&crate::elliptic::agm_pi(&ref_ctx)?, &ref_ctx)?;

    let floor = -(ctx.working_digits() as f64);
    let mut measured = Vec::with_capacity(ns.len());
    for &n in ns {
        let sn = partial_sum(p, n, ctx)?;
        let err = sn.value.sub(&inv_pi, &ref_ctx);
        measured.push((n, log10_floored(&err, floor)));
    }

    let dpt = digits_per_term(&p.z)?;
    let terms_for_target = (ctx.target_digits() as f64 / dpt.to_f64()).ceil() as usize;
    Ok(ConvergenceReport {
        series_label: p.label.clone(),
        predicted_digits_per_term: dpt,
        measured_error_after: measured,
        terms_for_target,
        precision: ctx.working_digits(),
        runtime_ms: started.elapsed().as_millis(),
    })
}

//! Hypergeometric-type series for 1/pi and their parameter sets.
//!
//! Every series here has the shape
//!   1/pi = sum_n  (1/2)_n (1/s)_n (1-1/s)_n / (1)_n^3  z^n (a + b n)
//! for s in {2, 3, 4, 6}. Terms are accumulated through the exact rational
//! ratio of consecutive Pochhammer prefactors, so no factorials are ever
//! formed. Parameter constructors produce the classical 14-digit-per-term
//! series, the 75-digit-per-term series at level 3315, and the generic
//! (r, lambda*, alpha) construction that yields the 153-digit-per-term
//! series at level 13260.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::elliptic::EllipticPoint;
use crate::error::{Error, Result};
use crate::mp::{BigReal, PrecisionContext};

/// Extra working digits inside the generic parameter construction; its
/// a-coefficient subtracts quantities agreeing to ~156 digits at r = 13260.
const PARAM_ELEVATION: usize = 170;

/// Parameter set (s, z, a, b) of one series, plus a reporting label.
/// `new` enforces s in {2, 3, 4, 6} and 0 < |z| < 1; the evaluator also
/// guards against runaway terms at run time, so a hand-built value with a
/// bad z fails fast rather than looping.
#[derive(Clone, Debug)]
pub struct SeriesParams {
    pub s: u32,
    pub z: BigReal,
    pub a: BigReal,
    pub b: BigReal,
    pub label: String,
}

impl SeriesParams {
    pub fn new(
        s: u32,
        z: BigReal,
        a: BigReal,
        b: BigReal,
        label: impl Into<String>,
    ) -> Result<Self> {
        if ![2, 3, 4, 6].contains(&s) {
            return Err(Error::domain(
                "series_params",
                format!("unsupported s = {s}"),
            ));
        }
        if z.is_zero() {
            return Err(Error::domain("series_params", "z must be nonzero"));
        }
        if !z.abs().lt_one() {
            return Err(Error::domain(
                "series_params",
                "|z| must be below 1 for convergence",
            ));
        }
        Ok(Self {
            s,
            z,
            a,
            b,
            label: label.into(),
        })
    }
}

/// Outcome of a series evaluation. `last_term_magnitude` is |term| of the
/// last term examined: for `eval_to_precision` that is the sub-threshold
/// term that stopped the loop (never added), for `partial_sum` it is term
/// N-1, the final term added.
#[derive(Clone, Debug)]
pub struct SeriesEvaluation {
    pub value: BigReal,
    pub terms_used: usize,
    pub last_term_magnitude: BigReal,
}

/// Exact ratio of consecutive Pochhammer prefactors,
/// T_{n+1} / T_n = (2n+1)(sn+1)(sn+s-1) / (2 s^2 (n+1)^3).
pub fn term_ratio(n: u64, s: u32) -> BigRational {
    assert!([2, 3, 4, 6].contains(&s), "unsupported s = {s}");
    let n = BigInt::from(n);
    let s = BigInt::from(s);
    let one = BigInt::from(1);
    let num = (2 * &n + &one) * (&s * &n + &one) * (&s * &n + &s - &one);
    let den = BigInt::from(2) * &s * &s * (&n + &one).pow(3);
    BigRational::new(num, den)
}

/// Base-10 digits gained per term: log10(1/|z|). Needs 0 < |z| < 1.
/// Evaluated at the operand's own precision.
pub fn digits_per_term(z: &BigReal) -> Result<BigReal> {
    if z.is_zero() {
        return Err(Error::domain("digits_per_term", "z must be nonzero"));
    }
    if !z.abs().lt_one() {
        return Err(Error::domain(
            "digits_per_term",
            "|z| must be below 1 for a convergent series",
        ));
    }
    Ok(z.log10_abs()?.neg())
}

/// Sum of the first `n_terms` terms.
pub fn partial_sum(
    p: &SeriesParams,
    n_terms: usize,
    ctx: &PrecisionContext,
) -> Result<SeriesEvaluation> {
    let mut sum = BigReal::zero(ctx);
    let mut tz = BigReal::one(ctx);
    let mut last = BigReal::zero(ctx);
    for n in 0..n_terms as u64 {
        let term = tz.mul(
            &p.a.add(&p.b.mul(&BigReal::from_u64(n, ctx), ctx), ctx),
            ctx,
        );
        last = term.abs();
        sum = sum.add(&term, ctx);
        let ratio = BigReal::from_rational(&term_ratio(n, p.s), ctx)?;
        tz = tz.mul(&ratio, ctx).mul(&p.z, ctx);
    }
    Ok(SeriesEvaluation {
        value: sum,
        terms_used: n_terms,
        last_term_magnitude: last,
    })
}

/// Add terms until one falls below 10^(-working); that term is examined
/// but not added. Aborts with a divergence error after three consecutive
/// non-decreasing term magnitudes, and with a domain error if the term
/// count overruns the bound implied by the convergence rate.
pub fn eval_to_precision(p: &SeriesParams, ctx: &PrecisionContext) -> Result<SeriesEvaluation> {
    let thr = BigReal::pow10(-(ctx.working_digits() as i64), ctx);
    let zlog = p.z.log10_abs()?.to_f64();
    let cap = if zlog < 0.0 {
        (ctx.working_digits() as f64 / -zlog).ceil() as usize + 32
    } else {
        usize::MAX
    };

    let mut sum = BigReal::zero(ctx);
    let mut tz = BigReal::one(ctx);
    let mut n: u64 = 0;
    let mut added = 0usize;
    let mut prev_mag: Option<BigReal> = None;
    let mut streak = 0usize;
    loop {
        let term = tz.mul(
            &p.a.add(&p.b.mul(&BigReal::from_u64(n, ctx), ctx), ctx),
            ctx,
        );
        let mag = term.abs();
        if mag.compare(&thr) == std::cmp::Ordering::Less {
            return Ok(SeriesEvaluation {
                value: sum,
                terms_used: added,
                last_term_magnitude: mag,
            });
        }
        if let Some(pm) = &prev_mag {
            if mag.compare(pm) != std::cmp::Ordering::Less {
                streak += 1;
                if streak >= 3 {
                    return Err(Error::Divergence {
                        terms: added,
                        streak,
                    });
                }
            } else {
                streak = 0;
            }
        }
        sum = sum.add(&term, ctx);
        added += 1;
        if added > cap {
            return Err(Error::domain(
                "series_eval",
                "term count exceeded the bound implied by the convergence rate",
            ));
        }
        prev_mag = Some(mag);
        let ratio = BigReal::from_rational(&term_ratio(n, p.s), ctx)?;
        tz = tz.mul(&ratio, ctx).mul(&p.z, ctx);
        n += 1;
    }
}

/// The classical 14-digit-per-term series:
/// 711822400 / (sqrt(10005) pi) = sum T_n (-1/53360)^(3n) (13591409/6 + 90856689 n).
pub fn chudnovsky_params(ctx: &PrecisionContext) -> Result<SeriesParams> {
    let z = BigReal::one(ctx)
        .div(&BigReal::from_u64(53360, ctx).powi(3, ctx), ctx)?
        .neg();
    let scale = BigReal::from_u64(10005, ctx)
        .sqrt(ctx)?
        .div(&BigReal::from_u64(711822400, ctx), ctx)?;
    let a = BigReal::from_u64(13591409, ctx)
        .div(&BigReal::from_u64(6, ctx), ctx)?
        .mul(&scale, ctx);
    let b = BigReal::from_u64(90856689, ctx).mul(&scale, ctx);
    SeriesParams::new(6, z, a, b, "chudnovsky")
}

/// The 75-digit-per-term series at level 3315, normalized so the sum is
/// 1/pi: z = J, b = sqrt(3315) sqrt(1 - J), a = (1 - t)/6 * b, with J the
/// (negative) invariant and t its companion algebraic constant.
pub fn berndt_chan_3315_params(
    j: &BigReal,
    t: &BigReal,
    ctx: &PrecisionContext,
) -> Result<SeriesParams> {
    if !j.is_negative() {
        return Err(Error::domain(
            "berndt_chan_params",
            "invariant J must be negative",
        ));
    }
    let one = BigReal::one(ctx);
    let b = BigReal::from_u64(3315, ctx)
        .sqrt(ctx)?
        .mul(&one.sub(j, ctx).sqrt(ctx)?, ctx);
    let a = one
        .sub(t, ctx)
        .div(&BigReal::from_u64(6, ctx), ctx)?
        .mul(&b, ctx);
    SeriesParams::new(6, j.clone(), a, b, "berndt-chan-3315")
}

/// The generic s = 6 construction from a singular point (r, lambda*, alpha),
/// r > 1:
///   x = 4 (lambda*^2 - lambda*^4),              requires x < 1/4,
///   z = -27 x / (1 - 4x)^3,
///   b = (8x + 1) sqrt(1-x) sqrt(r) / (1 - 4x)^(3/2),
///   a = (2 (1-4x) alpha + (4x - 1 + sqrt(1-x)) sqrt(r)) / (2 (1-4x)^(3/2)).
/// The a-numerator cancels deeply for large r, so everything is evaluated
/// under an elevated context and rounded back.
pub fn series_params_for_r(point: &EllipticPoint, ctx: &PrecisionContext) -> Result<SeriesParams> {
    if point.r <= 1 {
        return Err(Error::domain(
            "series_params_for_r",
            "level r must exceed 1",
        ));
    }
    if !point.lambda_star.is_positive() || !point.lambda_star.lt_one() {
        return Err(Error::domain(
            "series_params_for_r",
            "lambda_star must lie in (0, 1)",
        ));
    }
    let w = &ctx.widened(PARAM_ELEVATION);
    let one = BigReal::one(w);
    let lam2 = point.lambda_star.mul(&point.lambda_star, w);
    let x = BigReal::from_u64(4, w).mul(&lam2.sub(&lam2.mul(&lam2, w), w), w);
    let four_x = BigReal::from_u64(4, w).mul(&x, w);
    if !four_x.lt_one() {
        return Err(Error::domain(
            "series_params_for_r",
            "x = 4(lambda*^2 - lambda*^4) must stay below 1/4",
        ));
    }
    let c = one.sub(&four_x, w);
    let z = BigReal::from_u64(27, w)
        .mul(&x, w)
        .div(&c.powi(3, w), w)?
        .neg();
    let sqrt_r = BigReal::from_u64(point.r, w).sqrt(w)?;
    let c32 = c.sqrt(w)?.powi(3, w);
    let sqrt_1mx = one.sub(&x, w).sqrt(w)?;
    let b = BigReal::from_u64(8, w)
        .mul(&x, w)
        .add(&one, w)
        .mul(&sqrt_1mx, w)
        .mul(&sqrt_r, w)
        .div(&c32, w)?;
    let two = BigReal::from_u64(2, w);
    let a_num = two
        .mul(&c, w)
        .mul(&point.alpha, w)
        .add(&four_x.sub(&one, w).add(&sqrt_1mx, w).mul(&sqrt_r, w), w);
    let a = a_num.div(&two.mul(&c32, w), w)?;
    SeriesParams::new(
        6,
        z.rounded_to_ctx(ctx),
        a.rounded_to_ctx(ctx),
        b.rounded_to_ctx(ctx),
        format!("r{}", point.r),
    )
}

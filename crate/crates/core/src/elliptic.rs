//! Elliptic-integral numerics built on the arithmetic-geometric mean.
//!
//! Everything here is derivative-free and independent of the closed-form
//! constant pipeline, so these routines serve as the oracle side of every
//! cross-check: complete integrals K and E, a self-contained pi, singular
//! moduli solved from the K'/K ratio, and the quadratic scale maps that
//! relate level N to level 4N.

use crate::error::{Error, Result};
use crate::mp::{BigReal, PrecisionContext};

/// A singular point of the scale hierarchy: the modulus `lambda_star` and
/// multiplier `alpha` attached to level `r`.
#[derive(Clone, Debug)]
pub struct EllipticPoint {
    pub r: u64,
    pub lambda_star: BigReal,
    pub alpha: BigReal,
}

impl EllipticPoint {
    pub fn new(r: u64, lambda_star: BigReal, alpha: BigReal) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("elliptic_point", "level r must be positive"));
        }
        if !lambda_star.is_positive() || !lambda_star.lt_one() {
            return Err(Error::domain(
                "elliptic_point",
                "lambda_star must lie in (0, 1)",
            ));
        }
        if !alpha.is_positive() {
            return Err(Error::domain("elliptic_point", "alpha must be positive"));
        }
        Ok(Self {
            r,
            lambda_star,
            alpha,
        })
    }
}

/// AGM limit plus the weighted defect sum `sum_{j>=1} 2^(j-1) c_j^2`,
/// `c_j = (a_{j-1} - b_{j-1}) / 2`. Iterates until |a - b| < 10^(-working).
fn agm_core(a0: &BigReal, b0: &BigReal, ctx: &PrecisionContext) -> Result<(BigReal, BigReal)> {
    let thr = BigReal::pow10(-(ctx.working_digits() as i64), ctx);
    let mut a = a0.clone();
    let mut b = b0.clone();
    let mut wsum = BigReal::zero(ctx);
    let mut j: i32 = 1;
    // quadratic convergence: the digit count doubles per pass, so even a
    // starting gap of hundreds of decades closes in well under 100 passes
    while a.sub(&b, ctx).abs().compare(&thr) != std::cmp::Ordering::Less {
        if j > 200 {
            return Err(Error::domain("agm", "iteration failed to converge"));
        }
        let c = a.sub(&b, ctx).half();
        wsum = wsum.add(&c.mul(&c, ctx).mul_pow2(j - 1), ctx);
        let am = a.add(&b, ctx).half();
        let gm = a.mul(&b, ctx).sqrt(ctx)?;
        a = am;
        b = gm;
        j += 1;
    }
    Ok((a, wsum))
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &BigReal, b: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::domain("agm", "both operands must be positive"));
    }
    Ok(agm_core(a, b, ctx)?.0)
}

/// Pi by the quadratically convergent AGM iteration:
/// pi = 4 m^2 / (1 - sum_{j>=1} 2^(j+1) c_j^2) with m = agm(1, 1/sqrt(2)).
pub fn agm_pi(ctx: &PrecisionContext) -> Result<BigReal> {
    let one = BigReal::one(ctx);
    let inv_sqrt2 = one.div(&BigReal::from_u64(2, ctx).sqrt(ctx)?, ctx)?;
    let (m, wsum) = agm_core(&one, &inv_sqrt2, ctx)?;
    let denom = one.sub(&wsum.mul_pow2(2), ctx);
    m.mul(&m, ctx).mul_pow2(2).div(&denom, ctx)
}

/// Complete elliptic integral of the first kind, modulus convention:
/// K(k) = pi / (2 agm(1, k')), k' = sqrt(1 - k^2). Domain 0 <= k < 1.
pub fn ellint_k(k: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if k.is_negative() {
        return Err(Error::domain("ellint_k", "modulus must be nonnegative"));
    }
    if !k.lt_one() {
        return Err(Error::domain(
            "ellint_k",
            "modulus must be below 1 (K diverges at 1)",
        ));
    }
    let kp = complement(k, ctx)?;
    let m = agm(&BigReal::one(ctx), &kp, ctx)?;
    agm_pi(ctx)?.half().div(&m, ctx)
}

/// Complete elliptic integral of the second kind via the AGM defect sum:
/// E = K (1 - sum_{n>=0} 2^(n-1) c_n^2), c_0 = k. Domain 0 <= k <= 1,
/// with the closed endpoint E(1) = 1.
pub fn ellint_e(k: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if k.is_negative() {
        return Err(Error::domain("ellint_e", "modulus must be nonnegative"));
    }
    let one = BigReal::one(ctx);
    match k.compare(&one) {
        std::cmp::Ordering::Greater => {
            return Err(Error::domain("ellint_e", "modulus must be at most 1"))
        }
        std::cmp::Ordering::Equal => return Ok(one),
        std::cmp::Ordering::Less => {}
    }
    let kp = complement(k, ctx)?;
    let (m, wsum) = agm_core(&one, &kp, ctx)?;
    let sum = k.mul(k, ctx).half().add(&wsum, ctx);
    let kk = agm_pi(ctx)?.half().div(&m, ctx)?;
    Ok(kk.mul(&one.sub(&sum, ctx), ctx))
}

/// k' = sqrt(1 - k^2).
fn complement(k: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let one = BigReal::one(ctx);
    one.sub(&k.mul(k, ctx), ctx).sqrt(ctx)
}

/// Singular modulus lambda*(r): the unique k in (0,1) with
/// agm(1, k') / agm(1, k) = sqrt(r). Solved by bisection on log k; the
/// ratio form keeps the equation free of pi and of K itself.
pub fn lambda_star_numeric(r: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    if r == 0 {
        return Err(Error::domain("lambda_star", "level r must be positive"));
    }
    let sqrt_r = BigReal::from_u64(r, ctx).sqrt(ctx)?;
    let one = BigReal::one(ctx);
    let eps = BigReal::pow10(-(ctx.working_digits() as i64), ctx);
    let mut lo = eps.clone();
    let mut hi = one.sub(&eps, ctx);
    // the ratio decreases strictly in k; geometric midpoints bisect log k,
    // and (bits - 16) + 20 halvings pin k to one unit in the last place
    let steps = ctx.bits() + 4;
    for _ in 0..steps {
        let mid = lo.mul(&hi, ctx).sqrt(ctx)?;
        if ratio_exceeds(&mid, &sqrt_r, ctx)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.mul(&hi, ctx).sqrt(ctx)
}

/// True iff agm(1, k') / agm(1, k) > sqrt_r.
fn ratio_exceeds(k: &BigReal, sqrt_r: &BigReal, ctx: &PrecisionContext) -> Result<bool> {
    let one = BigReal::one(ctx);
    let kp = complement(k, ctx)?;
    let num = agm(&one, &kp, ctx)?;
    let den = agm(&one, k, ctx)?;
    let f = num.div(&den, ctx)?.sub(sqrt_r, ctx);
    Ok(f.is_positive())
}

/// Residual of the defining ratio equation at a candidate modulus, for
/// verification reporting: agm(1, k') / agm(1, k) - sqrt(r).
pub fn modulus_equation_residual(r: u64, k: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let one = BigReal::one(ctx);
    let kp = complement(k, ctx)?;
    let num = agm(&one, &kp, ctx)?;
    let den = agm(&one, k, ctx)?;
    let sqrt_r = BigReal::from_u64(r, ctx).sqrt(ctx)?;
    Ok(num.div(&den, ctx)?.sub(&sqrt_r, ctx))
}

/// Elliptic alpha function at level r, from the defect-sum identity
/// alpha(r) = m^2 / pi + sqrt(r) sum_{n>=0} 2^(n-1) c_n^2
/// with m = agm(1, k'), c_0 = k, k = lambda*(r). The sum form sidesteps
/// the E/K quotient and stays finite as k' approaches 1.
pub fn alpha_numeric(r: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    let lam = lambda_star_numeric(r, ctx)?;
    alpha_numeric_with_lambda(r, &lam, ctx)
}

/// Alpha evaluation reusing an already-solved modulus, so a verification
/// pass that solved lambda*(r) once does not pay for a second bisection.
pub(crate) fn alpha_numeric_with_lambda(
    r: u64,
    lam: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let one = BigReal::one(ctx);
    let kp = complement(lam, ctx)?;
    let (m, wsum) = agm_core(&one, &kp, ctx)?;
    let sum = lam.mul(lam, ctx).half().add(&wsum, ctx);
    let pi = agm_pi(ctx)?;
    let first = m.mul(&m, ctx).div(&pi, ctx)?;
    let sqrt_r = BigReal::from_u64(r, ctx).sqrt(ctx)?;
    Ok(first.add(&sqrt_r.mul(&sum, ctx), ctx))
}

/// Ascent lambda*(N) -> lambda*(4N). Evaluated as
/// lam^2 / (1 + sqrt(1 - lam^2))^2, the cancellation-free rearrangement of
/// (1 - sqrt(1 - lam^2)) / (1 + sqrt(1 - lam^2)). Runs at the operand's
/// own precision.
pub fn lambda_quadruple(lam: &BigReal) -> Result<BigReal> {
    if !lam.is_positive() || !lam.lt_one() {
        return Err(Error::domain(
            "lambda_quadruple",
            "modulus must lie in (0, 1)",
        ));
    }
    let bits = lam.bits();
    let one = BigReal::one_at(bits);
    let kp = one.sub_at(&lam.mul_at(lam, bits), bits).sqrt_at(bits)?;
    let den = one.add_at(&kp, bits);
    lam.mul_at(lam, bits).div_at(&den.mul_at(&den, bits), bits)
}

/// Ascent alpha(N) -> alpha(4N):
/// (4 alpha(N) - 2 sqrt(N) lam^2) / (1 + sqrt(1 - lam^2))^2,
/// lam = lambda*(N). Runs at the operands' precision.
pub fn alpha_quadruple(alpha_n: &BigReal, lam_n: &BigReal, n: u64) -> Result<BigReal> {
    if !lam_n.is_positive() || !lam_n.lt_one() {
        return Err(Error::domain(
            "alpha_quadruple",
            "modulus must lie in (0, 1)",
        ));
    }
    let bits = alpha_n.bits().max(lam_n.bits());
    let one = BigReal::one_at(bits);
    let lam2 = lam_n.mul_at(lam_n, bits);
    let kp = one.sub_at(&lam2, bits).sqrt_at(bits)?;
    let den = one.add_at(&kp, bits);
    let sqrt_n = BigReal::from_u64_at(n, bits).sqrt_at(bits)?;
    let num = alpha_n
        .mul_pow2(2)
        .sub_at(&sqrt_n.mul_at(&lam2, bits).mul_pow2(1), bits);
    num.div_at(&den.mul_at(&den, bits), bits)
}

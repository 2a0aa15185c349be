//! Precision management and arbitrary-precision real arithmetic.
//!
//! Every computation runs at `working_digits = target_digits + guard_digits`
//! decimal digits. Interior operations round to nearest; only the leading
//! `target_digits` of any result are promised to callers, so the guard band
//! absorbs accumulated rounding. Values are carried as binary floats sized
//! at `ceil(working_digits * log2(10)) + 16` bits.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache allocation"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Decimal precision request: `target_digits` trusted digits for the caller,
/// `guard_digits` extra working digits absorbing interior rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    target_digits: usize,
    guard_digits: usize,
}

impl PrecisionContext {
    pub const MIN_GUARD: usize = 50;

    /// Context with the default guard band `max(50, ceil(0.05 * target))`.
    pub fn new(target_digits: usize) -> Result<Self> {
        let guard = Self::MIN_GUARD.max((target_digits as f64 * 0.05).ceil() as usize);
        Self::with_guard(target_digits, guard)
    }

    pub fn with_guard(target_digits: usize, guard_digits: usize) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::Precision("target_digits must be at least 1".into()));
        }
        if guard_digits < Self::MIN_GUARD {
            return Err(Error::Precision(format!(
                "guard_digits must be at least {}, got {guard_digits}",
                Self::MIN_GUARD
            )));
        }
        Ok(Self {
            target_digits,
            guard_digits,
        })
    }

    pub fn target_digits(&self) -> usize {
        self.target_digits
    }

    pub fn guard_digits(&self) -> usize {
        self.guard_digits
    }

    pub fn working_digits(&self) -> usize {
        self.target_digits + self.guard_digits
    }

    /// Binary mantissa width backing this context.
    pub fn bits(&self) -> usize {
        (self.working_digits() as f64 * LOG2_10).ceil() as usize + 16
    }

    /// Same target, `extra` more guard digits. Pipeline stages whose formulas
    /// cancel a known number of leading digits evaluate under a widened
    /// context and round back down.
    pub fn widened(&self, extra: usize) -> Self {
        Self {
            target_digits: self.target_digits,
            guard_digits: self.guard_digits + extra,
        }
    }
}

/// How to cut a decimal expansion at a requested position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitRounding {
    /// Drop everything past the cut. The convention for pi digit output.
    Truncate,
    /// Round half away from zero at the cut. The convention of typical
    /// display-precision printing, used for fixed reference digit strings.
    Nearest,
}

/// Arbitrary-precision real value tagged with the binary precision it was
/// computed at. All operations are pure; results carry the precision of the
/// context (or, for context-free operations, of the widest operand).
#[derive(Clone, Debug)]
pub struct BigReal {
    v: BigFloat,
    bits: usize,
}

impl BigReal {
    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self {
            v: BigFloat::from_u64(0, ctx.bits()),
            bits: ctx.bits(),
        }
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::from_u64(1, ctx)
    }

    pub fn from_u64(n: u64, ctx: &PrecisionContext) -> Self {
        Self::from_u64_at(n, ctx.bits())
    }

    pub(crate) fn from_u64_at(n: u64, bits: usize) -> Self {
        Self {
            v: BigFloat::from_u64(n, bits),
            bits,
        }
    }

    pub(crate) fn one_at(bits: usize) -> Self {
        Self::from_u64_at(1, bits)
    }

    pub fn from_i64(n: i64, ctx: &PrecisionContext) -> Self {
        Self {
            v: BigFloat::from_i64(n, ctx.bits()),
            bits: ctx.bits(),
        }
    }

    /// Exact conversion: every finite f64 is a dyadic rational.
    pub fn from_f64(x: f64, ctx: &PrecisionContext) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain("from_f64", format!("non-finite input {x}")));
        }
        Ok(Self {
            v: BigFloat::from_f64(x, ctx.bits()),
            bits: ctx.bits(),
        })
    }

    pub fn from_rational(q: &BigRational, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        let n = Self::from_bigint(q.numer(), bits)?;
        let d = Self::from_bigint(q.denom(), bits)?;
        n.div_at(&d, bits)
    }

    fn from_bigint(n: &BigInt, bits: usize) -> Result<Self> {
        Self::parse_decimal_at(&n.to_string(), bits)
    }

    pub fn parse_decimal(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::parse_decimal_at(s, ctx.bits())
    }

    fn parse_decimal_at(s: &str, bits: usize) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {s:?}")));
        }
        Ok(Self { v, bits })
    }

    /// `10^e` at context precision.
    pub fn pow10(e: i64, ctx: &PrecisionContext) -> Self {
        Self::pow10_at(e, ctx.bits())
    }

    pub(crate) fn pow10_at(e: i64, bits: usize) -> Self {
        let ten = BigFloat::from_u64(10, bits);
        let p = ten.powi(e.unsigned_abs() as usize, bits, RM);
        let v = if e < 0 {
            BigFloat::from_u64(1, bits).div(&p, bits, RM)
        } else {
            p
        };
        Self { v, bits }
    }

    pub(crate) fn bits(&self) -> usize {
        self.bits
    }

    fn pair_bits(&self, rhs: &Self) -> usize {
        self.bits.max(rhs.bits)
    }

    pub fn add(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        self.add_at(rhs, ctx.bits())
    }

    pub(crate) fn add_at(&self, rhs: &Self, bits: usize) -> Self {
        Self {
            v: self.v.add(&rhs.v, bits, RM),
            bits,
        }
    }

    pub fn sub(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        self.sub_at(rhs, ctx.bits())
    }

    pub(crate) fn sub_at(&self, rhs: &Self, bits: usize) -> Self {
        Self {
            v: self.v.sub(&rhs.v, bits, RM),
            bits,
        }
    }

    pub fn mul(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        self.mul_at(rhs, ctx.bits())
    }

    pub(crate) fn mul_at(&self, rhs: &Self, bits: usize) -> Self {
        Self {
            v: self.v.mul(&rhs.v, bits, RM),
            bits,
        }
    }

    pub fn div(&self, rhs: &Self, ctx: &PrecisionContext) -> Result<Self> {
        self.div_at(rhs, ctx.bits())
    }

    pub(crate) fn div_at(&self, rhs: &Self, bits: usize) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::domain("div", "division by zero"));
        }
        Ok(Self {
            v: self.v.div(&rhs.v, bits, RM),
            bits,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            v: self.v.neg(),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact scaling by 2^k (exponent manipulation, no rounding).
    pub(crate) fn mul_pow2(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().expect("finite value has an exponent");
        v.set_exponent(e + k);
        Self { v, bits: self.bits }
    }

    pub(crate) fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    pub fn sqrt(&self, ctx: &PrecisionContext) -> Result<Self> {
        self.sqrt_at(ctx.bits())
    }

    pub(crate) fn sqrt_at(&self, bits: usize) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::domain(
                "sqrt",
                format!("negative radicand {}", self.approx()),
            ));
        }
        Ok(Self {
            v: self.v.sqrt(bits, RM),
            bits,
        })
    }

    /// Principal real n-th root of a nonnegative value.
    pub fn nth_root(&self, n: u32, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        if n == 0 {
            return Err(Error::domain("nth_root", "root order must be at least 1"));
        }
        if self.is_negative() {
            return Err(Error::domain(
                "nth_root",
                format!("negative radicand {}", self.approx()),
            ));
        }
        if self.is_zero() {
            return Ok(Self {
                v: BigFloat::from_u64(0, bits),
                bits,
            });
        }
        let v = match n {
            1 => self.rounded_to(bits).v,
            2 => self.v.sqrt(bits, RM),
            3 => self.v.cbrt(bits, RM),
            _ => {
                // exp(ln(x)/n), with headroom so the exp/ln pair does not
                // erode the guard band
                let wide = bits + 64;
                with_consts(|cc| {
                    let ln = self.v.ln(wide, RM, cc);
                    let q = ln.div(&BigFloat::from_u64(u64::from(n), wide), wide, RM);
                    q.exp(bits, RM, cc)
                })
            }
        };
        Ok(Self { v, bits })
    }

    pub fn powi(&self, n: u32, ctx: &PrecisionContext) -> Self {
        let bits = ctx.bits();
        if n == 0 {
            return Self {
                v: BigFloat::from_u64(1, bits),
                bits,
            };
        }
        Self {
            v: self.v.powi(n as usize, bits, RM),
            bits,
        }
    }

    /// Base-10 logarithm of |x|, at the operand's own precision.
    pub fn log10_abs(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("log10_abs", "zero has no logarithm"));
        }
        let bits = self.bits;
        let v = with_consts(|cc| self.abs().v.log10(bits, RM, cc));
        Ok(Self { v, bits })
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub(crate) fn lt_one(&self) -> bool {
        self.compare(&Self::one_at(128)) == Ordering::Less
    }

    pub fn compare(&self, rhs: &Self) -> Ordering {
        self.v
            .partial_cmp(&rhs.v)
            .expect("finite values always compare")
    }

    /// Equal at precision `digits`: |self − rhs| < 10^(−digits).
    pub fn eq_at(&self, rhs: &Self, digits: usize) -> bool {
        let bits = self.pair_bits(rhs);
        let d = self.sub_at(rhs, bits).abs();
        let thr = Self::pow10_at(-(digits as i64), bits.max(128));
        d.compare(&thr) == Ordering::Less
    }

    /// |self| < 10^e. The threshold is evaluated at the operand's own
    /// precision so a value that IS the power of ten compares equal, not
    /// below.
    pub fn abs_below_pow10(&self, e: i64) -> bool {
        let thr = Self::pow10_at(e, self.bits.max(128));
        self.abs().compare(&thr) == Ordering::Less
    }

    /// Round to a (typically narrower) context. Used when a stage computed
    /// under a widened context hands results back to its caller.
    pub(crate) fn rounded_to_ctx(&self, ctx: &PrecisionContext) -> Self {
        self.rounded_to(ctx.bits())
    }

    pub(crate) fn rounded_to(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(bits, RM)
            .expect("set_precision on finite value");
        Self { v, bits }
    }

    /// Decimal expansion `(negative, digits, exp10)` with
    /// value = ±0.d₁d₂… × 10^exp10 and d₁ ≠ 0 (zero yields an empty vec).
    fn decimal_parts(&self) -> Result<(bool, Vec<u8>, i64)> {
        if self.is_zero() {
            return Ok((false, Vec::new(), 0));
        }
        let (sign, digits, e) = with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc))
            .map_err(|e| Error::Parse(format!("radix conversion failed: {e:?}")))?;
        // strip the leading zeros the converter may emit
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        let digits = digits[lead..].to_vec();
        Ok((sign == Sign::Neg, digits, i64::from(e) - lead as i64))
    }

    /// Fixed-point rendering with `places` digits after the radix point.
    /// No exponent form, no digit grouping.
    pub fn to_decimal(&self, places: usize, mode: DigitRounding) -> Result<String> {
        let (neg, digits, e) = self.decimal_parts()?;
        let keep = e + places as i64;
        let (digits, e) = cut_digits(digits, e, keep, mode);
        Ok(format_fixed(neg, &digits, e, places))
    }

    /// Rendering with exactly `sig` significant digits (round to nearest),
    /// fixed-point, no exponent form.
    pub fn to_decimal_sig(&self, sig: usize) -> Result<String> {
        if sig == 0 {
            return Err(Error::Parse("need at least 1 significant digit".into()));
        }
        let (neg, digits, e) = self.decimal_parts()?;
        if digits.is_empty() {
            return Ok("0".into());
        }
        let (digits, e) = cut_digits(digits, e, sig as i64, DigitRounding::Nearest);
        let places = (sig as i64 - e).max(0) as usize;
        Ok(format_fixed(neg, &digits, e, places))
    }

    /// Nearest f64, for compact reporting only.
    pub fn to_f64(&self) -> f64 {
        let Ok((neg, digits, e)) = self.decimal_parts() else {
            return f64::NAN;
        };
        if digits.is_empty() {
            return 0.0;
        }
        let take = digits.len().min(17);
        let mut m = 0u64;
        for &d in &digits[..take] {
            m = m * 10 + u64::from(d);
        }
        let exp = e - take as i64;
        let mag = if exp > 350 {
            f64::INFINITY
        } else if exp < -400 {
            0.0
        } else {
            m as f64 * 10f64.powi(exp as i32)
        };
        if neg {
            -mag
        } else {
            mag
        }
    }

    /// Short description for error messages.
    fn approx(&self) -> String {
        format!("{:e}", self.to_f64())
    }
}

/// Keep the first `keep` digits of `(digits, e)`, rounding per `mode`.
/// A carry past the leading digit re-normalizes and bumps the exponent.
fn cut_digits(mut digits: Vec<u8>, mut e: i64, keep: i64, mode: DigitRounding) -> (Vec<u8>, i64) {
    if keep <= 0 {
        // everything cut away; the value contributes nothing at this scale
        // (a round-up can only occur when keep == 0 and d1 >= 5)
        let round_up =
            mode == DigitRounding::Nearest && keep == 0 && digits.first().is_some_and(|&d| d >= 5);
        return if round_up {
            (vec![1], e + 1)
        } else {
            (Vec::new(), e)
        };
    }
    let keep = keep as usize;
    if digits.len() <= keep {
        digits.resize(keep, 0);
        return (digits, e);
    }
    let next = digits[keep];
    digits.truncate(keep);
    if mode == DigitRounding::Nearest && next >= 5 {
        let mut carried = true;
        for d in digits.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                carried = false;
                break;
            }
        }
        if carried {
            digits.insert(0, 1);
            digits.pop();
            e += 1;
        }
    }
    (digits, e)
}

/// Fixed-point assembly of ±0.digits × 10^e with `places` fraction digits.
fn format_fixed(neg: bool, digits: &[u8], e: i64, places: usize) -> String {
    let digit_at = |idx: i64| -> u8 {
        if idx >= 1 && idx <= digits.len() as i64 {
            digits[(idx - 1) as usize]
        } else {
            0
        }
    };
    let mut s = String::new();
    if neg && digits.iter().any(|&d| d != 0) {
        s.push('-');
    }
    if e <= 0 {
        s.push('0');
    } else {
        for i in 1..=e {
            s.push((b'0' + digit_at(i)) as char);
        }
    }
    if places > 0 {
        s.push('.');
        for j in 1..=places as i64 {
            s.push((b'0' + digit_at(e + j)) as char);
        }
    }
    s
}

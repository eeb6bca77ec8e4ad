//! Arbitrary-precision reals and the dilogarithm on the unit interval.
//!
//! [`BigReal`] is a thin newtype over an MPFR float that carries its own
//! precision. Binary arithmetic rounds to the smaller of the two operand
//! precisions, so a computation never silently claims more bits than its
//! least precise input.
//!
//! [`li2`] and [`rogers`] evaluate with 32 guard bits and round once on the
//! way out. The power series is only ever summed for `|x| <= 1/2`; larger
//! arguments are folded back with the reflection and Landen formulas.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};
use thiserror::Error;

/// Smallest mantissa width a [`BigReal`] is allowed to carry.
pub const MIN_PRECISION: u32 = 64;

const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("argument {value} lies outside {domain}")]
    Domain { value: String, domain: &'static str },
    #[error("precision of {0} bits is below the {MIN_PRECISION}-bit minimum")]
    Precision(u32),
    #[error("`{0}` is not a decimal number")]
    Parse(String),
}

/// Rejects precisions below [`MIN_PRECISION`].
pub fn check_precision(bits: u32) -> Result<u32, NumericsError> {
    if bits < MIN_PRECISION {
        Err(NumericsError::Precision(bits))
    } else {
        Ok(bits)
    }
}

/// An arbitrary-precision real number with an explicit mantissa width.
#[derive(Clone, Debug)]
pub struct BigReal(Float);

impl BigReal {
    /// Wraps an MPFR float; widths below [`MIN_PRECISION`] are raised to it.
    pub fn from_float(value: Float) -> Self {
        if value.prec() < MIN_PRECISION {
            BigReal(Float::with_val(MIN_PRECISION, value))
        } else {
            BigReal(value)
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec.max(MIN_PRECISION)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(value: i64, prec: u32) -> Self {
        BigReal(Float::with_val(prec.max(MIN_PRECISION), value))
    }

    pub fn from_f64(value: f64, prec: u32) -> Self {
        BigReal(Float::with_val(prec.max(MIN_PRECISION), value))
    }

    pub fn from_integer(value: &Integer, prec: u32) -> Self {
        BigReal(Float::with_val(prec.max(MIN_PRECISION), value))
    }

    pub fn from_rational(value: &Rational, prec: u32) -> Self {
        BigReal(Float::with_val(prec.max(MIN_PRECISION), value))
    }

    /// `2^exp` at the given precision.
    pub fn pow2(exp: i32, prec: u32) -> Self {
        let mut f = Float::with_val(prec.max(MIN_PRECISION), 1);
        f <<= exp;
        BigReal(f)
    }

    /// π rounded to `prec` bits, served from a process-wide cache.
    pub fn pi(prec: u32) -> Self {
        BigReal(pi_float(prec.max(MIN_PRECISION)).as_ref().clone())
    }

    /// π²/6, the value of the Rogers dilogarithm at 1.
    pub fn pi_squared_over_6(prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let pi = pi_float(prec + GUARD_BITS);
        let v = Float::with_val(prec + GUARD_BITS, pi.square_ref()) / 6u32;
        BigReal(Float::with_val(prec, v))
    }

    /// Parses a decimal string such as `1e-30` or `-3.25`.
    pub fn parse_decimal(text: &str, prec: u32) -> Result<Self, NumericsError> {
        let parsed = Float::parse(text.trim()).map_err(|_| NumericsError::Parse(text.to_string()))?;
        Ok(BigReal(Float::with_val(prec.max(MIN_PRECISION), parsed)))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        BigReal(Float::with_val(prec.max(MIN_PRECISION), &self.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn signum(&self) -> Ordering {
        self.0.cmp0().unwrap_or(Ordering::Equal)
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn square(&self) -> Self {
        BigReal(self.0.clone().square())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    /// `ln(1 + self)`, accurate for tiny arguments.
    pub fn ln_1p(&self) -> Self {
        BigReal(self.0.clone().ln_1p())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn sinh(&self) -> Self {
        BigReal(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Self {
        BigReal(self.0.clone().cosh())
    }

    pub fn acosh(&self) -> Self {
        BigReal(self.0.clone().acosh())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigReal(Float::with_val(self.precision(), &self.0 * k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        BigReal(Float::with_val(self.precision(), &self.0 / k))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Binary exponent `e` with `2^(e-1) <= |self| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    /// Number of significant decimal digits needed to round-trip this
    /// precision through text.
    pub fn decimal_digits(prec: u32) -> usize {
        (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Scientific-notation rendering with enough digits to round-trip.
    pub fn to_decimal_string(&self) -> String {
        self.to_decimal_digits(Self::decimal_digits(self.precision()))
    }

    pub fn to_decimal_digits(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn pi_float(prec: u32) -> Arc<Float> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Float>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(hit) = cache.read().expect("pi cache poisoned").get(&prec) {
        return Arc::clone(hit);
    }
    let value = Arc::new(Float::with_val(prec, Constant::Pi));
    let mut guard = cache.write().expect("pi cache poisoned");
    Arc::clone(guard.entry(prec).or_insert(value))
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(digits) => f.write_str(&self.to_decimal_digits(digits)),
            None => f.write_str(&self.to_decimal_string()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.precision().min(rhs.precision());
                BigReal(Float::with_val(prec, $trait::$method(&self.0, &rhs.0)))
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                $trait::$method(&self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(mut iter: I) -> BigReal {
        let first = iter.next().unwrap_or_else(|| BigReal::zero(MIN_PRECISION));
        iter.fold(first, |acc, x| acc + x)
    }
}

fn domain_error(x: &Float, domain: &'static str) -> NumericsError {
    NumericsError::Domain {
        value: x.to_string_radix(10, Some(12)),
        domain,
    }
}

fn pi_sq_over_6(wp: u32) -> Float {
    let pi = pi_float(wp);
    Float::with_val(wp, pi.square_ref()) / 6u32
}

/// `Σ x^n / n²` for `|x| <= 1/2`, truncated once the remainder is below
/// `2^-(wp+1)`.
fn li2_series(x: &Float, wp: u32) -> Float {
    let mut sum = Float::new(wp);
    if x.is_zero() {
        return sum;
    }
    let stop = -(wp as i32) - 2;
    let mut power = Float::with_val(wp, x);
    let mut n: u64 = 1;
    loop {
        let n_sq = Integer::from(n) * n;
        sum += Float::with_val(wp, &power / &n_sq);
        match power.get_exp() {
            Some(e) if e >= stop => {}
            _ => break,
        }
        power *= x;
        n += 1;
    }
    sum
}

fn li2_raw(x: &Float, wp: u32) -> Float {
    if x.is_zero() {
        return Float::new(wp);
    }
    if *x == 1 {
        return pi_sq_over_6(wp);
    }
    if *x > 0.5 {
        // Li2(x) = π²/6 − ln(x)·ln(1−x) − Li2(1−x)
        let y = Float::with_val(wp, 1 - x);
        let logs = Float::with_val(wp, x.ln_ref()) * Float::with_val(wp, y.ln_ref());
        return pi_sq_over_6(wp) - logs - li2_series(&y, wp);
    }
    if *x >= -0.5 {
        return li2_series(x, wp);
    }
    // Landen: Li2(x) = −Li2(x/(x−1)) − ½·ln²(1−x), with x/(x−1) in [1/3, 1/2).
    let one_minus = Float::with_val(wp, 1 - x);
    let y = Float::with_val(wp, x / Float::with_val(wp, x - 1u32));
    let log = one_minus.ln();
    let half_sq = Float::with_val(wp, log.square_ref()) / 2u32;
    -li2_series(&y, wp) - half_sq
}

/// The dilogarithm `Li₂(x)` for `-1 <= x <= 1`.
pub fn li2(x: &BigReal) -> Result<BigReal, NumericsError> {
    if !(x.0 >= -1 && x.0 <= 1) {
        return Err(domain_error(&x.0, "[-1, 1]"));
    }
    let prec = x.precision();
    let wp = prec + GUARD_BITS;
    let xv = Float::with_val(wp, &x.0);
    Ok(BigReal(Float::with_val(prec, li2_raw(&xv, wp))))
}

/// Rogers dilogarithm for `0 < x <= 1/2`: `Li₂(x) + ½·ln(x)·ln(1−x)`.
fn rogers_lower(x: &Float, wp: u32) -> Float {
    let ln_x = Float::with_val(wp, x.ln_ref());
    let ln_1mx = Float::with_val(wp, -x).ln_1p();
    li2_series(x, wp) + (ln_x * ln_1mx) / 2u32
}

/// The Rogers dilogarithm `L(x) = Li₂(x) + ½·ln(x)·ln(1−x)` on `[0, 1]`.
///
/// The endpoints return their limits `L(0) = 0` and `L(1) = π²/6` without
/// touching the logarithms.
pub fn rogers(x: &BigReal) -> Result<BigReal, NumericsError> {
    if !(x.0 >= 0 && x.0 <= 1) {
        return Err(domain_error(&x.0, "[0, 1]"));
    }
    let prec = x.precision();
    if x.0.is_zero() {
        return Ok(BigReal::zero(prec));
    }
    if x.0 == 1 {
        return Ok(BigReal::pi_squared_over_6(prec));
    }
    let wp = prec + GUARD_BITS;
    let xv = Float::with_val(wp, &x.0);
    let value = if xv <= 0.5 {
        rogers_lower(&xv, wp)
    } else {
        // L(x) = π²/6 − L(1−x); 1−x is exact here.
        let y = Float::with_val(wp, 1 - &xv);
        pi_sq_over_6(wp) - rogers_lower(&y, wp)
    };
    Ok(BigReal(Float::with_val(prec, value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn half(prec: u32) -> BigReal {
        BigReal::from_rational(&Rational::from((1, 2)), prec)
    }

    fn tol(prec: u32, slack: u32) -> BigReal {
        BigReal::pow2(-((prec - slack) as i32), prec)
    }

    /// Independent oracle: MPFR's own dilogarithm.
    fn mpfr_li2(x: &BigReal) -> BigReal {
        let wp = x.precision() + 64;
        BigReal(Float::with_val(x.precision(), Float::with_val(wp, &x.0).li2()))
    }

    #[test]
    fn li2_special_values() {
        let prec = 256;
        assert!(li2(&BigReal::zero(prec)).unwrap().is_zero());
        let at_one = li2(&BigReal::one(prec)).unwrap();
        assert!((at_one - BigReal::pi_squared_over_6(prec)).abs() <= tol(prec, 8));

        // Li2(1/2) = π²/12 − ln²2 / 2
        let ln2 = BigReal::from_i64(2, prec + 64).ln();
        let pi = BigReal::pi(prec + 64);
        let expected = (&pi * &pi).div_i64(12) - (&ln2 * &ln2).div_i64(2);
        let got = li2(&half(prec)).unwrap();
        assert!((got - expected.with_precision(prec)).abs() <= tol(prec, 8));

        // Li2(−1) = −π²/12
        let got = li2(&BigReal::from_i64(-1, prec)).unwrap();
        let expected = -(&pi * &pi).div_i64(12);
        assert!((got - expected.with_precision(prec)).abs() <= tol(prec, 8));
    }

    #[test]
    fn li2_matches_mpfr_across_the_domain() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for prec in [64u32, 128, 256, 512] {
            for _ in 0..200 {
                let x = BigReal::from_f64(rng.gen_range(-1.0..=1.0), prec);
                let diff = (li2(&x).unwrap() - mpfr_li2(&x)).abs();
                assert!(diff <= tol(prec, 8), "prec {prec}, x = {x}");
            }
        }
    }

    #[test]
    fn direct_series_agrees_with_folded_evaluation() {
        // For x <= 1/2 the plain series must match the public entry point,
        // including right at the switch-over.
        let prec = 256;
        let wp = prec + GUARD_BITS;
        for k in 1..=64 {
            let x = BigReal::from_rational(&Rational::from((k, 128)), prec);
            let direct = BigReal(Float::with_val(prec, li2_series(&Float::with_val(wp, &x.0), wp)));
            assert!((direct - li2(&x).unwrap()).abs() <= tol(prec, 8));
        }
    }

    #[test]
    fn rogers_special_values() {
        let prec = 256;
        assert!(rogers(&BigReal::zero(prec)).unwrap().is_zero());
        assert_eq!(rogers(&BigReal::one(prec)).unwrap(), BigReal::pi_squared_over_6(prec));

        let pi = BigReal::pi(prec);
        let pi_sq = &pi * &pi;
        let at_half = rogers(&half(prec)).unwrap();
        assert!((at_half - pi_sq.div_i64(12)).abs() <= tol(prec, 8));

        // L((√5 − 1)/2) = π²/10
        let sqrt5 = BigReal::from_i64(5, prec + 32).sqrt();
        let inv_phi = (sqrt5 - BigReal::one(prec + 32)).div_i64(2).with_precision(prec);
        let got = rogers(&inv_phi).unwrap();
        assert!((got - pi_sq.div_i64(10)).abs() <= tol(prec, 8));
    }

    #[test]
    fn rogers_reflection_holds_to_240_bits() {
        let prec = 256;
        let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
        let target = BigReal::pi_squared_over_6(prec);
        let bound = BigReal::pow2(-240, prec);
        for _ in 0..1000 {
            let x = BigReal::from_f64(rng.gen_range(1e-12..1.0), prec);
            let y = &BigReal::one(prec) - &x;
            let sum = rogers(&x).unwrap() + rogers(&y).unwrap();
            assert!((sum - &target).abs() <= bound, "x = {x}");
        }
    }

    #[test]
    fn rogers_matches_mpfr_oracle() {
        let prec = 256;
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..300 {
            let x = BigReal::from_f64(rng.gen_range(1e-30..1.0), prec);
            let ln_x = x.ln();
            let ln_1mx = (BigReal::one(prec) - &x).ln();
            let oracle = mpfr_li2(&x) + (ln_x * ln_1mx).div_i64(2);
            assert!((rogers(&x).unwrap() - oracle).abs() <= tol(prec, 8));
        }
    }

    #[test]
    fn rogers_is_strictly_increasing() {
        let prec = 128;
        let mut prev = rogers(&BigReal::zero(prec)).unwrap();
        for k in 1..=512 {
            let x = BigReal::from_rational(&Rational::from((k, 512)), prec);
            let v = rogers(&x).unwrap();
            assert!(v > prev, "not increasing at {k}/512");
            prev = v;
        }
    }

    #[test]
    fn rogers_small_argument_bound() {
        let prec = 128;
        for e in 20..200 {
            let x = BigReal::pow2(-e, prec);
            let bound = (BigReal::one(prec) + x.ln().abs()).mul_i64(2) * &x;
            assert!(rogers(&x).unwrap() <= bound);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            li2(&BigReal::from_f64(1.5, 64)),
            Err(NumericsError::Domain { .. })
        ));
        assert!(matches!(
            rogers(&BigReal::from_f64(-1e-3, 64)),
            Err(NumericsError::Domain { .. })
        ));
        assert!(rogers(&BigReal::from_f64(1.0000001, 64)).is_err());
        assert_eq!(check_precision(32), Err(NumericsError::Precision(32)));
    }

    #[test]
    fn arithmetic_uses_smaller_precision() {
        let a = BigReal::from_i64(3, 256);
        let b = BigReal::from_i64(7, 96);
        assert_eq!((&a + &b).precision(), 96);
        assert_eq!((&a / &b).precision(), 96);
        assert_eq!(BigReal::zero(10).precision(), MIN_PRECISION);
    }

    #[test]
    fn pi_cache_is_consistent_across_threads() {
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| BigReal::pi(333))).collect();
        let values: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(values[0].precision(), 333);
    }

    #[test]
    fn decimal_text_round_trips() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for prec in [64u32, 128, 256] {
            for _ in 0..100 {
                let x = BigReal::from_f64(rng.gen::<f64>(), prec) / BigReal::from_f64(rng.gen::<f64>() + 1e-9, prec);
                let text = x.to_decimal_string();
                let back = BigReal::parse_decimal(&text, prec).unwrap();
                assert_eq!(back, x);
                assert_eq!(back.to_decimal_string(), text);
            }
        }
    }
}

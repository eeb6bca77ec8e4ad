//! Exact arithmetic in real quadratic fields.
//!
//! A [`QuadNum`] is `(a + b√d)/c` with unbounded integers and a squarefree
//! radicand. Rationals are the special case `b = 0, d = 1`, so one scalar
//! type covers every exact quantity the engine touches. Two irrational
//! operands must share a radicand; a rational operand adapts to the other.
//!
//! [`BoundaryPoint`] adds the point at infinity. The field itself never
//! does arithmetic with ∞; that is left to the Möbius action.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::numerics::{BigReal, MIN_PRECISION};

const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields Q(sqrt {0}) and Q(sqrt {1})")]
    MixedRadicands(u64, u64),
    #[error("square root of {0} is not representable as a quadratic surd")]
    NotRepresentable(String),
    #[error("radicand {0} is too large to factor")]
    RadicandTooLarge(String),
    #[error("cannot parse `{input}` as a surd: {reason}")]
    Parse { input: String, reason: String },
}

/// Splits `n > 0` as `square² · core` with `core` squarefree.
///
/// Trial division runs up to the cube root; whatever cofactor survives has
/// at most two prime factors, so it is either a perfect square or already
/// squarefree.
pub fn squarefree_decompose(n: &Integer) -> Result<(Integer, Integer), ExactError> {
    assert!(*n > 0, "squarefree_decompose needs a positive integer");
    if n.significant_bits() > 96 {
        return Err(ExactError::RadicandTooLarge(n.to_string()));
    }
    let mut rest = n.clone();
    let mut square = Integer::from(1);
    let mut core = Integer::from(1);
    let mut p = Integer::from(2);
    loop {
        let p_cubed = p.clone().pow(3u32);
        if p_cubed > rest {
            break;
        }
        let mut count = 0u32;
        while rest.is_divisible(&p) {
            rest /= &p;
            count += 1;
        }
        if count > 0 {
            square *= p.clone().pow(count / 2);
            if count % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_perfect_square() {
        square *= rest.sqrt();
    } else {
        core *= rest;
    }
    Ok((square, core))
}

/// An element `(a + b√d)/c` of a real quadratic field, kept normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Integer,
    b: Integer,
    c: Integer,
    d: u64,
}

impl QuadNum {
    /// Builds and normalizes `(a + b√d)/c`. `d` need not be squarefree.
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
    ) -> Result<Self, ExactError> {
        let (a, mut b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c == 0 {
            return Err(ExactError::DivisionByZero);
        }
        if d <= 0 {
            return Err(ExactError::NotRepresentable(format!("sqrt({d})")));
        }
        let (square, core) = squarefree_decompose(&d)?;
        b *= square;
        let core = core
            .to_u64()
            .ok_or_else(|| ExactError::RadicandTooLarge(core.to_string()))?;
        Ok(Self::from_parts(a, b, c, core))
    }

    /// `√n` for a positive integer `n`.
    pub fn sqrt_int(n: u64) -> Result<Self, ExactError> {
        Self::new(0, 1, 1, n)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_integer(Integer::from(n))
    }

    pub fn from_integer(n: Integer) -> Self {
        QuadNum {
            a: n,
            b: Integer::new(),
            c: Integer::from(1),
            d: 1,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        let (num, den) = r.into_numer_denom();
        QuadNum {
            a: num,
            b: Integer::new(),
            c: den,
            d: 1,
        }
    }

    /// `p/q`; panics if `q = 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::from((p, q)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `(1 + √5)/2`.
    pub fn golden_ratio() -> Self {
        Self::from_parts(Integer::from(1), Integer::from(1), Integer::from(2), 5)
    }

    // `d` must already be squarefree.
    fn from_parts(mut a: Integer, mut b: Integer, mut c: Integer, d: u64) -> Self {
        let mut d = d;
        if d == 1 {
            a += &b;
            b = Integer::new();
        }
        if b == 0 {
            d = 1;
        }
        let g = Integer::from(a.gcd_ref(&b)).gcd(&c);
        if g != 1 {
            a.div_exact_mut(&g);
            b.div_exact_mut(&g);
            c.div_exact_mut(&g);
        }
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        QuadNum { a, b, c, d }
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn c(&self) -> &Integer {
        &self.c
    }

    /// Squarefree radicand; `1` for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.c == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::from((self.a.clone(), self.c.clone())))
    }

    fn common_radicand(&self, other: &Self) -> Result<u64, ExactError> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(ExactError::MixedRadicands(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        let a = Integer::from(&self.a * &other.c) + &other.a * &self.c;
        let b = Integer::from(&self.b * &other.c) + &other.b * &self.c;
        let c = Integer::from(&self.c * &other.c);
        Ok(Self::from_parts(a, b, c, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        let bb = Integer::from(&self.b * &other.b) * d;
        let a = Integer::from(&self.a * &other.a) + bb;
        let b = Integer::from(&self.a * &other.b) + &self.b * &other.a;
        let c = Integer::from(&self.c * &other.c);
        Ok(Self::from_parts(a, b, c, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_mul(&other.inv()?)
    }

    /// Galois conjugate: `√d ↦ −√d`.
    pub fn conj(&self) -> Self {
        QuadNum {
            a: self.a.clone(),
            b: Integer::from(-&self.b),
            c: self.c.clone(),
            d: self.d,
        }
    }

    /// Field norm `x · conj(x)`, always rational.
    pub fn norm(&self) -> Rational {
        let num = Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * self.d;
        Rational::from((num, Integer::from(self.c.square_ref())))
    }

    /// Field trace `x + conj(x)`.
    pub fn trace(&self) -> Rational {
        Rational::from((Integer::from(&self.a * 2u32), self.c.clone()))
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // c(a − b√d) / (a² − b²d)
        let n = Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * self.d;
        let a = Integer::from(&self.c * &self.a);
        let b = -Integer::from(&self.c * &self.b);
        Ok(Self::from_parts(a, b, n, self.d))
    }

    pub fn pow(&self, exp: i64) -> Result<Self, ExactError> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn square(&self) -> Self {
        self.checked_mul(self).expect("a number shares its own radicand")
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp0();
        let sb = self.b.cmp0();
        match (sa, sb) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = Integer::from(self.a.square_ref());
                let b2d = Integer::from(self.b.square_ref()) * self.d;
                if a2 > b2d {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ExactError> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// Square root inside the field, or of a rational into `Q(√m)`.
    ///
    /// Fails when the root would need a degree-four extension.
    pub fn sqrt(&self) -> Result<Self, ExactError> {
        let not_here = || ExactError::NotRepresentable(self.to_string());
        match self.signum() {
            Ordering::Less => return Err(not_here()),
            Ordering::Equal => return Ok(Self::zero()),
            Ordering::Greater => {}
        }
        if self.is_rational() {
            // √(a/c) = √(ac)/c
            let ac = Integer::from(&self.a * &self.c);
            return Self::new(0, 1, self.c.clone(), ac);
        }
        // (u + v√d)² = x with u, v rational: u² = (x_r ± √N)/2, v = x_s/(2u).
        let norm = self.norm();
        if norm < 0 {
            return Err(not_here());
        }
        let root_norm = rational_sqrt(&norm).ok_or_else(not_here)?;
        let rational_part = Rational::from((self.a.clone(), self.c.clone()));
        let surd_part = Rational::from((self.b.clone(), self.c.clone()));
        for candidate in [
            Rational::from(&rational_part + &root_norm),
            Rational::from(&rational_part - &root_norm),
        ] {
            let u_sq = candidate / 2u32;
            if u_sq <= 0 {
                continue;
            }
            let Some(u) = rational_sqrt(&u_sq) else {
                continue;
            };
            let v = Rational::from(&surd_part / &u) / 2u32;
            let (un, ud) = u.into_numer_denom();
            let (vn, vd) = v.into_numer_denom();
            let c = Integer::from(&ud * &vd);
            let root = Self::from_parts(un * &vd, vn * &ud, c, self.d);
            let root = if root.is_negative() { -root } else { root };
            debug_assert_eq!(root.square(), *self);
            return Ok(root);
        }
        Err(not_here())
    }

    /// Numeric value with absolute error at most `2^-(prec-2)` for values in
    /// `[-1, 1]` and relative error of the same size elsewhere.
    pub fn to_real(&self, prec: u32) -> BigReal {
        let prec = prec.max(MIN_PRECISION);
        let wp = prec + GUARD_BITS;
        if self.is_rational() {
            let r = Rational::from((self.a.clone(), self.c.clone()));
            return BigReal::from_float(Float::with_val(prec, &r));
        }
        let root = Float::with_val(wp, self.d).sqrt();
        let b_root = Float::with_val(wp, &self.b * &root);
        let value = if self.a.cmp0() == self.b.cmp0() || self.a == 0 {
            (b_root + &self.a) / &self.c
        } else {
            // Opposite signs: go through the conjugate to avoid cancellation.
            let n = Integer::from(self.a.square_ref()) - Integer::from(self.b.square_ref()) * self.d;
            let conj = Float::with_val(wp, &self.a - b_root) * &self.c;
            Float::with_val(wp, &n) / conj
        };
        BigReal::from_float(Float::with_val(prec, value))
    }

    /// Numeric value as an `f64`, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.to_real(64).to_f64()
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if *r < 0 {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if n.is_perfect_square() && d.is_perfect_square() {
        Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
    } else {
        None
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<i64> for QuadNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Integer> for QuadNum {
    fn from(n: Integer) -> Self {
        Self::from_integer(n)
    }
}

impl From<Rational> for QuadNum {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: Integer::from(-&self.a),
            b: Integer::from(-&self.b),
            c: self.c.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

macro_rules! quad_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{} of {} and {}: {}", stringify!($method), self, rhs, e),
                }
            }
        }
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                $trait::$method(self, &rhs)
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);
quad_binop!(Div, div, checked_div);

impl fmt::Display for QuadNum {
    /// Renders in the same grammar [`FromStr`] accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.c == 1 {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let surd = if self.b == 1 {
            format!("sqrt({})", self.d)
        } else if self.b == -1 {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        let numerator = if self.a == 0 {
            surd
        } else if self.b > 0 {
            format!("{}+{}", self.a, surd)
        } else {
            format!("{}{}", self.a, surd)
        };
        if self.c == 1 {
            f.write_str(&numerator)
        } else {
            write!(f, "({})/{}", numerator, self.c)
        }
    }
}

struct SurdParser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> SurdParser<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, ExactError> {
        Err(ExactError::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}` at position {}", self.pos))
        }
    }

    fn integer(&mut self) -> Result<Integer, ExactError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(format!("expected digits at position {start}"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse::<Integer>().expect("ascii digits"))
    }

    fn sqrt_call(&mut self) -> Result<Integer, ExactError> {
        for c in "sqrt(".chars() {
            self.expect(c)?;
        }
        let n = self.integer()?;
        self.expect(')')?;
        if n == 0 {
            return self.fail("sqrt(0) is not a radicand");
        }
        Ok(n)
    }

    // term := INT ['*' sqrt(INT)] | sqrt(INT)
    fn term(&mut self) -> Result<QuadNum, ExactError> {
        if self.peek() == Some('s') {
            let n = self.sqrt_call()?;
            return QuadNum::new(0, 1, 1, n);
        }
        let k = self.integer()?;
        if self.eat('*') {
            let n = self.sqrt_call()?;
            return QuadNum::new(0, k, 1, n);
        }
        Ok(QuadNum::from_integer(k))
    }

    // sum := ['-'|'+'] term (('+'|'-') term)*
    fn sum(&mut self) -> Result<QuadNum, ExactError> {
        let mut total = QuadNum::zero();
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            let t = if negative { -t } else { t };
            total = total.checked_add(&t)?;
        }
        Ok(total)
    }

    fn parse(mut self) -> Result<QuadNum, ExactError> {
        if self.chars.is_empty() {
            return self.fail("empty input");
        }
        let numerator = if self.eat('(') {
            let v = self.sum()?;
            self.expect(')')?;
            v
        } else {
            self.sum()?
        };
        let value = if self.eat('/') {
            let negative = self.eat('-');
            let den = self.integer()?;
            if den == 0 {
                return Err(ExactError::DivisionByZero);
            }
            let den = QuadNum::from_integer(if negative { -den } else { den });
            numerator.checked_div(&den)?
        } else {
            numerator
        };
        if self.pos != self.chars.len() {
            return self.fail(format!("unexpected trailing input at position {}", self.pos));
        }
        Ok(value)
    }
}

impl FromStr for QuadNum {
    type Err = ExactError;

    /// Accepts `INT`, `INT/INT`, `(INT+INT*sqrt(INT))/INT` and the obvious
    /// relatives (`-`, bare `sqrt(INT)`, omitted denominator). Whitespace is
    /// ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        SurdParser {
            input: s,
            chars,
            pos: 0,
        }
        .parse()
    }
}

/// A point of the extended real line `R ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Finite(QuadNum),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(value: impl Into<QuadNum>) -> Self {
        BoundaryPoint::Finite(value.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&QuadNum> {
        match self {
            BoundaryPoint::Finite(q) => Some(q),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Order on the line with ∞ placed after every finite point.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ExactError> {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Ok(Ordering::Equal),
            (BoundaryPoint::Infinity, _) => Ok(Ordering::Greater),
            (_, BoundaryPoint::Infinity) => Ok(Ordering::Less),
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => x.try_cmp(y),
        }
    }
}

impl From<QuadNum> for BoundaryPoint {
    fn from(q: QuadNum) -> Self {
        BoundaryPoint::Finite(q)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(q) => q.fmt(f),
            BoundaryPoint::Infinity => f.write_str("inf"),
        }
    }
}

//! Identity templates and their instantiation.
//!
//! Each template fixes the summation start of every series so that its
//! first generated argument is the first displayed term of the formula.

use std::collections::HashMap;
use std::sync::Arc;

use rug::{Integer, Rational};

use super::{Decay, FiniteTerm, Identity, IdentityError, Model, Rhs, Series, TermArg};
use crate::contfrac::{MatrixConvergents, PeriodicCF};
use crate::exact::{BoundaryPoint, QuadNum};
use crate::geometry::{cross_ratio4, FeasiblePair, ModelKind};
use crate::sequences::{even_split, fibonacci, lucas, odd_split, phi_power_trace, Recurrence2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Integer,
    Rational,
    /// `(a + b*sqrt(d))/c` in the surd grammar.
    Surd,
    /// Comma-separated partial quotients of a periodic continued fraction.
    Quotients,
    /// Comma-separated surds.
    Points,
}

impl ParamKind {
    pub fn name(self) -> &'static str {
        match self {
            ParamKind::Integer => "int",
            ParamKind::Rational => "rational",
            ParamKind::Surd => "surd",
            ParamKind::Quotients => "quotients",
            ParamKind::Points => "points",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub constraint: &'static str,
}

const fn param(name: &'static str, kind: ParamKind, default: &'static str, constraint: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        default,
        constraint,
    }
}

type Builder = fn(&Args) -> Result<Parts, IdentityError>;

/// A parameterized identity; [`Template::instantiate`] validates and builds.
#[derive(Clone, Copy)]
pub struct Template {
    pub id: &'static str,
    pub formula: &'static str,
    pub params: &'static [ParamSpec],
    build: Builder,
}

impl std::fmt::Debug for Template {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Template").field("id", &self.id).finish_non_exhaustive()
    }
}

impl Template {
    /// `name:kind=default` for every parameter.
    pub fn signature(&self) -> String {
        self.params
            .iter()
            .map(|p| format!("{}:{}={}", p.name, p.kind.name(), p.default))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn instantiate(&self, given: &[(String, String)]) -> Result<Identity, IdentityError> {
        for (name, _) in given {
            if !self.params.iter().any(|p| p.name == name) {
                return Err(IdentityError::UnknownParam {
                    id: self.id.into(),
                    name: name.clone(),
                });
            }
        }
        let mut args = Args::default();
        let mut shown = Vec::new();
        for spec in self.params {
            let raw = given
                .iter()
                .rev()
                .find(|(n, _)| n == spec.name)
                .map_or(spec.default, |(_, v)| v.as_str());
            let value = ParamValue::parse(spec, raw)?;
            shown.push((spec.name.to_string(), value.to_string()));
            args.values.insert(spec.name, value);
        }
        let parts = (self.build)(&args)?;
        Ok(Identity {
            id: self.id.to_string(),
            formula: self.formula.to_string(),
            params: shown,
            series: parts.series,
            finite: parts.finite,
            rhs: parts.rhs,
            model: parts.model,
        })
    }
}

#[derive(Clone, Debug)]
enum ParamValue {
    Int(i64),
    Num(QuadNum),
    Cf(PeriodicCF),
    Points(Vec<QuadNum>),
}

fn invalid(name: &str, reason: impl Into<String>) -> IdentityError {
    IdentityError::InvalidParam {
        name: name.into(),
        reason: reason.into(),
    }
}

impl ParamValue {
    fn parse(spec: &ParamSpec, raw: &str) -> Result<Self, IdentityError> {
        let raw = raw.trim();
        let bad = |e: String| invalid(spec.name, format!("`{raw}`: {e}"));
        Ok(match spec.kind {
            ParamKind::Integer => {
                ParamValue::Int(raw.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?)
            }
            ParamKind::Rational => {
                let q: QuadNum = raw.parse().map_err(|e: crate::exact::ExactError| bad(e.to_string()))?;
                if !q.is_rational() {
                    return Err(bad("expected a rational number".into()));
                }
                ParamValue::Num(q)
            }
            ParamKind::Surd => ParamValue::Num(raw.parse().map_err(|e: crate::exact::ExactError| bad(e.to_string()))?),
            ParamKind::Quotients => ParamValue::Cf(
                raw.parse()
                    .map_err(|e: crate::contfrac::ContFracError| bad(e.to_string()))?,
            ),
            ParamKind::Points => {
                let pts = raw
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<QuadNum>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad(e.to_string()))?;
                ParamValue::Points(pts)
            }
        })
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Int(n) => write!(f, "{n}"),
            ParamValue::Num(q) => write!(f, "{q}"),
            ParamValue::Cf(cf) => write!(f, "{cf}"),
            ParamValue::Points(pts) => {
                let s: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                f.write_str(&s.join(","))
            }
        }
    }
}

#[derive(Default)]
struct Args {
    values: HashMap<&'static str, ParamValue>,
}

impl Args {
    fn int(&self, name: &str) -> i64 {
        match self.values.get(name) {
            Some(ParamValue::Int(n)) => *n,
            other => unreachable!("parameter {name} is declared as an integer, got {other:?}"),
        }
    }

    fn num(&self, name: &str) -> QuadNum {
        match self.values.get(name) {
            Some(ParamValue::Num(q)) => q.clone(),
            other => unreachable!("parameter {name} is declared as a number, got {other:?}"),
        }
    }

    fn cf(&self, name: &str) -> PeriodicCF {
        match self.values.get(name) {
            Some(ParamValue::Cf(cf)) => cf.clone(),
            other => unreachable!("parameter {name} is declared as quotients, got {other:?}"),
        }
    }

    fn points(&self, name: &str) -> Vec<QuadNum> {
        match self.values.get(name) {
            Some(ParamValue::Points(p)) => p.clone(),
            other => unreachable!("parameter {name} is declared as points, got {other:?}"),
        }
    }

    fn int_at_least(&self, name: &str, min: i64) -> Result<i64, IdentityError> {
        let n = self.int(name);
        if n < min {
            return Err(invalid(name, format!("must be at least {min}, got {n}")));
        }
        Ok(n)
    }

    /// A trace parameter, which must exceed 2.
    fn trace(&self, name: &str) -> Result<QuadNum, IdentityError> {
        let t = self.num(name);
        if !(t > QuadNum::from_int(2)) {
            return Err(invalid(name, format!("must exceed 2, got {t}")));
        }
        Ok(t)
    }
}

struct Parts {
    series: Vec<Series>,
    finite: Vec<FiniteTerm>,
    rhs: Rhs,
    model: Option<Model>,
}

impl Parts {
    fn new(series: Vec<Series>, rhs: Rhs) -> Self {
        Parts {
            series,
            finite: Vec::new(),
            rhs,
            model: None,
        }
    }

    fn with_finite(mut self, weight: Rational, arg: QuadNum) -> Self {
        self.finite.push(FiniteTerm { weight, arg });
        self
    }

    fn with_model(mut self, kind: ModelKind, pair: FeasiblePair) -> Self {
        self.model = Some(Model { kind, pair });
        self
    }
}

fn int(n: i64) -> QuadNum {
    QuadNum::from_int(n)
}

fn z(n: Integer) -> QuadNum {
    QuadNum::from(n)
}

fn fib(n: i64) -> QuadNum {
    z(fibonacci(n))
}

fn luc(n: i64) -> QuadNum {
    z(lucas(n))
}

fn sqrt5() -> QuadNum {
    QuadNum::sqrt_int(5).expect("5 is small")
}

fn inv_sq(x: QuadNum) -> Result<QuadNum, IdentityError> {
    Ok(x.square().inv()?)
}

fn pi_sq(num: i64, den: i64) -> Rhs {
    Rhs::pi_squared(Rational::from((num, den)))
}

fn one_minus(x: &QuadNum) -> QuadNum {
    QuadNum::one() - x
}

fn geometric() -> Decay {
    Decay::Geometric
}

/// The larger root `u` of `x² − t x + 1`.
fn attracting_root(t: &QuadNum) -> Result<QuadNum, IdentityError> {
    let disc = t.square() - int(4);
    let root = disc
        .sqrt()
        .map_err(|_| invalid("t", format!("sqrt({disc}) leaves the quadratic field of t")))?;
    Ok((t + &root) / int(2))
}

/// `1/u²` for the trace `t`.
fn inverse_square_root(t: &QuadNum) -> Result<QuadNum, IdentityError> {
    inv_sq(attracting_root(t)?)
}

fn phi_power(e: i64) -> QuadNum {
    QuadNum::golden_ratio().pow(e).expect("φ is a unit")
}

fn crown_i(t: &QuadNum) -> Result<FeasiblePair, IdentityError> {
    Ok(FeasiblePair::double_crown_i(t.clone())?)
}

fn trace_seq(t: &QuadNum) -> Arc<Recurrence2> {
    Arc::new(Recurrence2::trace(t.clone()))
}

/// `Σ_{n≥2} L(1/q_{n-1}²)`.
fn reciprocal_square_series(t: &QuadNum) -> Series {
    let q = trace_seq(t);
    Series::exact("1/q_{n-1}^2", 2, geometric(), move |n| inv_sq(q.term(n - 1)?))
}

/// `Σ_{n≥start} L((t−2)/((q_{n+s}−q_{n+s-1})(q_{n+s-2}−q_{n+s-3})))`; the
/// double-crown form uses `s = 1`, the crown form `s = 0`.
fn difference_series(t: &QuadNum, start: i64, shift: i64, label: &str) -> Series {
    let q = trace_seq(t);
    let tm2 = t - &int(2);
    Series::exact(label, start, geometric(), move |n| {
        let m = n + shift;
        let den = (q.term(m)? - q.term(m - 1)?) * (q.term(m - 2)? - q.term(m - 3)?);
        Ok(tm2.checked_div(&den)?)
    })
}

fn b46(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let series = vec![
        reciprocal_square_series(&t),
        difference_series(&t, 0, 1, "(t-2)/((q_{n+1}-q_n)(q_{n-1}-q_{n-2}))"),
    ];
    Ok(Parts::new(series, pi_sq(1, 6)).with_model(ModelKind::DoubleCrownI, crown_i(&t)?))
}

fn fib_square_series(label: &str, start: i64, num: i64, index: fn(i64) -> i64) -> Series {
    Series::exact(
        label,
        start,
        geometric(),
        move |k| Ok(int(num) / fib(index(k)).square()),
    )
}

fn fib_product_series() -> Series {
    Series::exact("1/(f_{2k-3} f_{2k+1})", 1, geometric(), |k| {
        Ok((fib(2 * k - 3) * fib(2 * k + 1)).inv()?)
    })
}

fn lucas_product_series() -> Series {
    Series::exact("45/(l_{4k-2} l_{4k+6})", 0, geometric(), |k| {
        Ok(int(45) / (luc(4 * k - 2) * luc(4 * k + 6)))
    })
}

fn b47(_: &Args) -> Result<Parts, IdentityError> {
    let series = vec![
        fib_square_series("1/f_{2k+2}^2", 1, 1, |k| 2 * k + 2),
        fib_product_series(),
    ];
    Ok(Parts::new(series, pi_sq(1, 6)).with_model(ModelKind::DoubleCrownI, crown_i(&int(3))?))
}

fn b48(_: &Args) -> Result<Parts, IdentityError> {
    let series = vec![fib_square_series("9/f_{4k}^2", 2, 9, |k| 4 * k), lucas_product_series()];
    Ok(Parts::new(series, pi_sq(1, 6)).with_model(ModelKind::DoubleCrownI, crown_i(&int(7))?))
}

fn b52(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let rhs = Rhs::rogers_of(inverse_square_root(&t)?);
    Ok(Parts::new(vec![reciprocal_square_series(&t)], rhs).with_model(ModelKind::CrownI, crown_i(&t)?))
}

fn b53a(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let q = trace_seq(&t);
    let s = Series::exact("1/q_n^2", 1, geometric(), move |n| inv_sq(q.term(n)?));
    let rhs = Rhs::rogers_of(inverse_square_root(&t)?);
    Ok(Parts::new(vec![s], rhs).with_model(ModelKind::CrownI, crown_i(&t)?))
}

fn b53b(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let s = difference_series(&t, 1, 0, "(t-2)/((q_n-q_{n-1})(q_{n-2}-q_{n-3}))");
    let rhs = Rhs::rogers_of(one_minus(&inverse_square_root(&t)?));
    Ok(Parts::new(vec![s], rhs))
}

fn b54(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let u = attracting_root(&t)?;
    let rhs = Rhs::rogers_of(inv_sq(u.clone())?);
    let s = Series::new("sinh^2(L/2)/sinh^2(kL/2)", 2, geometric(), move |k| {
        Ok(TermArg::SinhRatio { u: u.clone(), k })
    });
    Ok(Parts::new(vec![s], rhs))
}

fn b57(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    // v_{-1} = 2, v_0 = t, stored one slot up.
    let v = Arc::new(Recurrence2::trace_with_seeds(t.clone(), int(2), t.clone())?);
    let disc = t.square() - int(4);
    let s = Series::exact("((t^2-4)/(v_n-v_{n-2}))^2", 2, geometric(), move |n| {
        Ok(disc.checked_div(&(v.term(n + 1)? - v.term(n - 1)?))?.square())
    });
    let rhs = Rhs::rogers_of(inverse_square_root(&t)?);
    Ok(Parts::new(vec![s], rhs).with_model(ModelKind::CrownI, crown_i(&t)?))
}

fn b58a(_: &Args) -> Result<Parts, IdentityError> {
    let s = fib_square_series("1/f_{2k}^2", 2, 1, |k| 2 * k);
    Ok(Parts::new(vec![s], Rhs::rogers_of(phi_power(-4))).with_model(ModelKind::CrownI, crown_i(&int(3))?))
}

fn b58b(_: &Args) -> Result<Parts, IdentityError> {
    Ok(Parts::new(
        vec![fib_product_series()],
        Rhs::rogers_of(one_minus(&phi_power(-4))),
    ))
}

fn b59a(_: &Args) -> Result<Parts, IdentityError> {
    let s = fib_square_series("9/f_{4k}^2", 2, 9, |k| 4 * k);
    Ok(Parts::new(vec![s], Rhs::rogers_of(phi_power(-8))).with_model(ModelKind::CrownI, crown_i(&int(7))?))
}

fn b59b(_: &Args) -> Result<Parts, IdentityError> {
    Ok(Parts::new(
        vec![lucas_product_series()],
        Rhs::rogers_of(one_minus(&phi_power(-8))),
    ))
}

fn b510(_: &Args) -> Result<Parts, IdentityError> {
    let series = vec![
        Series::exact("1/(5 f_{2n}^2)", 1, geometric(), |n| {
            Ok((int(5) * fib(2 * n).square()).inv()?)
        }),
        Series::exact("1/l_{2n-1}^2", 2, geometric(), |n| inv_sq(luc(2 * n - 1))),
    ];
    Ok(Parts::new(series, Rhs::rogers_of(phi_power(-2))).with_model(ModelKind::CrownI, crown_i(&sqrt5())?))
}

fn b62(a: &Args) -> Result<Parts, IdentityError> {
    let (pa, pb) = (a.int_at_least("a", 1)?, a.int_at_least("b", 1)?);
    let t = QuadNum::ratio(pa * pa, pb) + int(2);
    // term(i) = p_{i-2}, with p_{-2} = 0 and p_{-1} = 1.
    let p = Arc::new(Recurrence2::new(int(pa), int(pb), int(0), int(1))?);
    let s = Series::exact("(b^n / sum_k b^k p_{2n-2k-1})^2", 1, geometric(), move |n| {
        let mut den = QuadNum::zero();
        let mut bk = QuadNum::one();
        for k in 0..=n {
            den = den + &bk * p.term(2 * n - 2 * k - 1 + 2)?;
            bk = bk * int(pb);
        }
        let bn = int(pb).pow(n)?;
        Ok(bn.checked_div(&den)?.square())
    });
    let rhs = Rhs::rogers_of(inverse_square_root(&t)?);
    Ok(Parts::new(vec![s], rhs).with_model(ModelKind::CrownI, crown_i(&t)?))
}

/// `(b^{k/2} / (b^k + … + b + 1))²` written without the square root.
fn geometric_sum_series(label: &str, base: i64) -> Series {
    Series::exact(label, 1, geometric(), move |k| {
        let b = int(base);
        let sum = (0..=k).try_fold(QuadNum::zero(), |acc, j| b.pow(j).map(|x| acc + x))?;
        Ok(b.pow(k)?.checked_div(&sum.square())?)
    })
}

fn b64(_: &Args) -> Result<Parts, IdentityError> {
    let s = geometric_sum_series("(3^k/(9^k+...+9+1))^2", 9);
    let t = QuadNum::ratio(10, 3);
    Ok(Parts::new(vec![s], Rhs::rogers_of(QuadNum::ratio(1, 9))).with_model(ModelKind::CrownI, crown_i(&t)?))
}

fn b71(a: &Args) -> Result<Parts, IdentityError> {
    let n = a.int_at_least("n", 2)?;
    let s = geometric_sum_series("n^k/(n^k+...+n+1)^2", n);
    let t = QuadNum::new(0, n + 1, n, n)?;
    Ok(Parts::new(vec![s], Rhs::rogers_of(QuadNum::ratio(1, n))).with_model(ModelKind::CrownI, crown_i(&t)?))
}

/// `U_n(x) = Σ_j (−1)^j C(n−j, j) (2x)^{n−2j}`, extended by
/// `U_{-n} = −U_{n-2}`.
fn chebyshev_exact(n: i64, x: &QuadNum) -> Result<QuadNum, IdentityError> {
    if n == -1 {
        return Ok(QuadNum::zero());
    }
    if n < 0 {
        return Ok(-chebyshev_exact(-n - 2, x)?);
    }
    let two_x = x * &int(2);
    let mut total = QuadNum::zero();
    for j in 0..=n / 2 {
        let c = Integer::from(n - j).binomial(j as u32);
        let term = z(c) * two_x.pow(n - 2 * j)?;
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    Ok(total)
}

fn chebyshev_x(a: &Args) -> Result<(QuadNum, QuadNum), IdentityError> {
    let x = a.num("x");
    if !(x > QuadNum::one()) {
        return Err(invalid("x", format!("must exceed 1, got {x}")));
    }
    let root = (x.square() - int(1))
        .sqrt()
        .map_err(|_| invalid("x", "sqrt(x^2-1) leaves the field of x"))?;
    Ok((x.clone(), inv_sq(&x + &root)?))
}

fn b73a(a: &Args) -> Result<Parts, IdentityError> {
    let (x, target) = chebyshev_x(a)?;
    let t = &x * &int(2);
    let s = Series::exact("1/U_n(x)^2", 1, geometric(), move |n| inv_sq(chebyshev_exact(n, &x)?));
    Ok(Parts::new(vec![s], Rhs::rogers_of(target)).with_model(ModelKind::CrownI, crown_i(&t)?))
}

fn b73b(a: &Args) -> Result<Parts, IdentityError> {
    let (x, target) = chebyshev_x(a)?;
    let num = &x * &int(2) - int(2);
    let s = Series::exact("(2x-2)/((U_n-U_{n-1})(U_{n-2}-U_{n-3}))", 1, geometric(), move |n| {
        let u = |m: i64| chebyshev_exact(m, &x);
        let den = (u(n)? - u(n - 1)?) * (u(n - 2)? - u(n - 3)?);
        Ok(num.checked_div(&den)?)
    });
    Ok(Parts::new(vec![s], Rhs::rogers_of(one_minus(&target))))
}

struct SlTwo {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    m: Arc<MatrixConvergents>,
}

fn sl_two(args: &Args) -> Result<SlTwo, IdentityError> {
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|n| args.int(n));
    for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
        if v <= 0 {
            return Err(invalid(name, "matrix entries must be positive"));
        }
    }
    if a * d - b * c != 1 {
        return Err(invalid("a", format!("determinant ad-bc = {} must be 1", a * d - b * c)));
    }
    if a + d <= 2 {
        return Err(invalid("a", "trace a+d must exceed 2"));
    }
    let m = MatrixConvergents::new(a.into(), b.into(), c.into(), d.into())?;
    Ok(SlTwo {
        a,
        b,
        c,
        d,
        m: Arc::new(m),
    })
}

impl SlTwo {
    fn pair(&self) -> Result<FeasiblePair, IdentityError> {
        Ok(FeasiblePair::double_crown_ii(
            self.a.into(),
            self.b.into(),
            self.c.into(),
            self.d.into(),
        )?)
    }

    fn u(&self) -> Result<QuadNum, IdentityError> {
        attracting_root(&int(self.a + self.d))
    }

    fn b_over_q(&self) -> Series {
        let (m, b) = (self.m.clone(), self.b);
        Series::exact("(b/q_{2n-1})^2", 2, geometric(), move |n| {
            Ok((int(b) / z(m.q(2 * n - 1))).square())
        })
    }

    fn c_over_p(&self) -> Series {
        let (m, c) = (self.m.clone(), self.c);
        Series::exact("(c/p_{2n-2})^2", 2, geometric(), move |n| {
            Ok((int(c) / z(m.p(2 * n - 2))).square())
        })
    }

    fn q_product(&self) -> Series {
        let (m, bc) = (self.m.clone(), self.b * self.c);
        Series::exact("bc/(q_{2n} q_{2n-4})", 1, geometric(), move |n| {
            Ok(int(bc).checked_div(&z(m.q(2 * n) * m.q(2 * n - 4)))?)
        })
    }

    fn p_product(&self) -> Series {
        let (m, bc) = (self.m.clone(), self.b * self.c);
        Series::exact("bc/(p_{2n+1} p_{2n-3})", 1, geometric(), move |n| {
            Ok(int(bc).checked_div(&z(m.p(2 * n + 1) * m.p(2 * n - 3)))?)
        })
    }

    fn corner(&self) -> QuadNum {
        QuadNum::ratio(self.b * self.c, self.a * self.d)
    }
}

fn b84(a: &Args) -> Result<Parts, IdentityError> {
    let m = sl_two(a)?;
    let series = vec![m.b_over_q(), m.c_over_p(), m.q_product(), m.p_product()];
    Ok(Parts::new(series, pi_sq(1, 3))
        .with_finite(Rational::from(1), m.corner())
        .with_model(ModelKind::DoubleCrownII, m.pair()?))
}

fn b85(a: &Args) -> Result<Parts, IdentityError> {
    let m = sl_two(a)?;
    let rhs = Rhs::rogers_of(inv_sq(m.u()?)?);
    Ok(Parts::new(vec![m.b_over_q()], rhs).with_model(ModelKind::CrownII, m.pair()?))
}

fn b86(a: &Args) -> Result<Parts, IdentityError> {
    let m = sl_two(a)?;
    let series = vec![m.b_over_q().weighted(Rational::from(2)), m.q_product(), m.p_product()];
    Ok(Parts::new(series, pi_sq(1, 3))
        .with_finite(Rational::from(1), m.corner())
        .with_model(ModelKind::DoubleCrownII, m.pair()?))
}

fn b87(a: &Args) -> Result<Parts, IdentityError> {
    let n = a.int_at_least("n", 1)?;
    let s = Series::exact("(f_{2n}/f_{2nk})^2", 2, geometric(), move |k| {
        Ok((fib(2 * n) / fib(2 * n * k)).square())
    });
    let pair = FeasiblePair::double_crown_ii(
        fibonacci(2 * n + 1),
        fibonacci(2 * n),
        fibonacci(2 * n),
        fibonacci(2 * n - 1),
    )?;
    Ok(Parts::new(vec![s], Rhs::rogers_of(phi_power(-4 * n))).with_model(ModelKind::CrownII, pair))
}

fn b92(args: &Args) -> Result<Parts, IdentityError> {
    let (a, b) = (args.int_at_least("a", 1)?, args.int_at_least("b", 1)?);
    let ab = a * b;
    let m = Arc::new(MatrixConvergents::new((ab + 1).into(), b.into(), a.into(), 1.into())?);
    let s = Series::exact("(b/q_{2n-1})^2", 2, geometric(), move |n| {
        Ok((int(b) / z(m.q(2 * n - 1))).square())
    });
    // α = [a, b, a, b, …] = (ab + sqrt((ab)² + 4ab)) / 2b
    let alpha = QuadNum::new(ab, 1, 2 * b, ab * ab + 4 * ab)?;
    let target = inv_sq(int(b) * alpha + int(1))?;
    let pair = FeasiblePair::double_crown_ii((ab + 1).into(), b.into(), a.into(), 1.into())?;
    Ok(Parts::new(vec![s], Rhs::rogers_of(target)).with_model(ModelKind::CrownII, pair))
}

fn b101(a: &Args) -> Result<Parts, IdentityError> {
    let k = a.int_at_least("k", 0)?;
    let k0 = 2 * k + 1;
    let step = 4 * k + 2;
    let lk2 = luc(k0).square();
    let lk2b = lk2.clone();
    let series = vec![
        Series::exact("l_{2k+1}^2/l_{n(4k+2)-(2k+1)}^2", 2, geometric(), move |n| {
            Ok(lk2.checked_div(&luc(n * step - k0).square())?)
        }),
        Series::exact("l_{2k+1}^2/(5 f_{n(4k+2)}^2)", 1, geometric(), move |n| {
            Ok(lk2b.checked_div(&(int(5) * fib(n * step).square()))?)
        }),
    ];
    let t = phi_power_trace(k as u32);
    Ok(Parts::new(series, Rhs::rogers_of(phi_power(-step))).with_model(ModelKind::CrownI, crown_i(&t)?))
}

struct PhiSplit {
    k0: i64,
    t_sq: QuadNum,
    lk: QuadNum,
}

fn phi_split(a: &Args) -> Result<(u32, PhiSplit), IdentityError> {
    let k = a.int_at_least("k", 0)?;
    let k = u32::try_from(k).map_err(|_| invalid("k", "too large"))?;
    let k0 = 2 * i64::from(k) + 1;
    let t_sq = phi_power_trace(k) + int(2);
    Ok((k, PhiSplit { k0, t_sq, lk: luc(k0) }))
}

fn h_series(k: u32, t_sq: QuadNum) -> Series {
    let h = Arc::new(odd_split(k));
    Series::exact("1/(t^2 H_n^2)", 1, geometric(), move |n| {
        Ok((&t_sq * &h.term(n)?.square()).inv()?)
    })
}

fn k_series(k: u32) -> Series {
    let kk = Arc::new(even_split(k));
    Series::exact("1/K_n^2", 1, geometric(), move |n| inv_sq(kk.term(n)?))
}

fn b111(a: &Args) -> Result<Parts, IdentityError> {
    let (k, sp) = phi_split(a)?;
    let series = vec![h_series(k, sp.t_sq.clone()), k_series(k)];
    Ok(Parts::new(series, Rhs::rogers_of(phi_power(-sp.k0))))
}

fn b114(a: &Args) -> Result<Parts, IdentityError> {
    let (k, sp) = phi_split(a)?;
    let PhiSplit { k0, t_sq, lk } = sp;
    let (t2, l2) = (t_sq.clone(), lk.clone());
    let series = vec![
        Series::exact("(l_{k0}/(t l_{(2n-1)k0}))^2", 1, geometric(), move |n| {
            Ok(lk.square().checked_div(&(&t_sq * &luc((2 * n - 1) * k0).square()))?)
        }),
        Series::exact("(l_{k0}/(sqrt5 t f_{2nk0}))^2", 1, geometric(), move |n| {
            Ok(l2.square().checked_div(&(int(5) * &t2 * fib(2 * n * k0).square()))?)
        }),
        h_series(k, phi_power_trace(k) + int(2)).weighted(Rational::from(-1)),
    ];
    Ok(Parts::new(series, Rhs::zero()))
}

fn b115(a: &Args) -> Result<Parts, IdentityError> {
    let (k, sp) = phi_split(a)?;
    let PhiSplit { k0, lk, .. } = sp;
    let l2 = lk.clone();
    let series = vec![
        Series::exact("(l_{k0}/(l_{(2n-1)k0}+sqrt5 f_{2nk0}))^2", 1, geometric(), move |n| {
            Ok(lk
                .checked_div(&(luc((2 * n - 1) * k0) + sqrt5() * fib(2 * n * k0)))?
                .square())
        }),
        Series::exact(
            "(l_{k0}/(l_{(2n-1)k0}+sqrt5 f_{2(n-1)k0}))^2",
            2,
            geometric(),
            move |n| {
                Ok(l2
                    .checked_div(&(luc((2 * n - 1) * k0) + sqrt5() * fib(2 * (n - 1) * k0)))?
                    .square())
            },
        ),
        k_series(k).weighted(Rational::from(-1)),
    ];
    Ok(Parts::new(series, Rhs::zero()))
}

fn b121(a: &Args) -> Result<Parts, IdentityError> {
    let t = a.trace("t")?;
    let q = trace_seq(&t);
    let p = Arc::new(Recurrence2::trace_with_seeds(t.clone(), int(2), t.clone())?);
    let p2 = p.clone();
    let disc = t.square() - int(4);
    let disc2 = disc.clone();
    let series = vec![
        Series::exact("1/q_n^2", 1, geometric(), move |n| inv_sq(q.term(n)?)).weighted(Rational::from(2)),
        Series::exact("(t^2-4)/(p_n p_{n-2})", 1, geometric(), move |n| {
            Ok(disc.checked_div(&(p.term(n)? * p.term(n - 2)?))?)
        }),
        Series::exact("(t^2-4)/(p_{n+1} p_{n-1})", 1, geometric(), move |n| {
            Ok(disc2.checked_div(&(p2.term(n + 1)? * p2.term(n - 1)?))?)
        }),
    ];
    let pair = FeasiblePair::third_pair(t)?;
    Ok(Parts::new(series, pi_sq(1, 3)).with_model(ModelKind::ThirdPair, pair))
}

fn lucas_pair_series() -> Series {
    Series::exact("1/(l_{2k-2} l_{2k})", 1, geometric(), |k| {
        Ok((luc(2 * k - 2) * luc(2 * k)).inv()?)
    })
}

/// `k ≥ 2` part; the `k = 1` term carries weight ½ and lives among the
/// finite terms.
fn fifth_fib_pair_series() -> Series {
    Series::exact("1/(5 f_{2k-3} f_{2k-1})", 2, geometric(), |k| {
        Ok((int(5) * fib(2 * k - 3) * fib(2 * k - 1)).inv()?)
    })
}

fn fifth_fib_pair_first() -> QuadNum {
    (int(5) * fib(-1) * fib(1)).inv().expect("nonzero")
}

fn b122(_: &Args) -> Result<Parts, IdentityError> {
    let series = vec![
        Series::exact("1/(5 f_{2k}^2)", 1, geometric(), |k| {
            Ok((int(5) * fib(2 * k).square()).inv()?)
        }),
        Series::exact("1/l_{2k+1}^2", 1, geometric(), |k| inv_sq(luc(2 * k + 1))),
        lucas_pair_series(),
        fifth_fib_pair_series(),
    ];
    Ok(Parts::new(series, pi_sq(1, 6))
        .with_finite(Rational::from((1, 2)), fifth_fib_pair_first())
        .with_model(ModelKind::ThirdPair, FeasiblePair::third_pair(sqrt5())?))
}

fn b123(_: &Args) -> Result<Parts, IdentityError> {
    let series = vec![lucas_pair_series(), fifth_fib_pair_series()];
    Ok(Parts::new(series, pi_sq(1, 10)).with_finite(Rational::from((1, 2)), fifth_fib_pair_first()))
}

/// Finite and triple-sum terms of the translation polygon on `vertices`.
fn translation_parts(vertices: Vec<QuadNum>) -> Result<(Vec<Series>, Vec<FiniteTerm>), IdentityError> {
    let m = vertices.len() - 1;
    let bp = |x: &QuadNum| BoundaryPoint::Finite(x.clone());
    let mut finite = Vec::new();
    for i in 0..m {
        for j in 0..i {
            let v = cross_ratio4(
                &bp(&vertices[i]),
                &bp(&vertices[i + 1]),
                &bp(&vertices[j]),
                &bp(&vertices[j + 1]),
            )?;
            finite.push(FiniteTerm {
                weight: Rational::from(1),
                arg: v,
            });
        }
    }
    let vertices = Arc::new(vertices);
    let mut series = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let v = vertices.clone();
            let coeff = (&v[i + 1] - &v[i]) * (&v[j + 1] - &v[j]);
            let label = format!("[v_{},v_{},k+v_{},k+v_{}]", i + 1, i + 2, j + 1, j + 2);
            series.push(Series::exact(label, 1, Decay::InverseSquare { coeff }, move |k| {
                let shift = |x: &QuadNum| BoundaryPoint::Finite(x + &int(k));
                Ok(cross_ratio4(
                    &bp(&v[i]),
                    &bp(&v[i + 1]),
                    &shift(&v[j]),
                    &shift(&v[j + 1]),
                )?)
            }));
        }
    }
    Ok((series, finite))
}

fn b132(a: &Args) -> Result<Parts, IdentityError> {
    let interior = a.points("vertices");
    let mut vertices = vec![QuadNum::zero()];
    vertices.extend(interior.iter().cloned());
    vertices.push(QuadNum::one());
    for w in vertices.windows(2) {
        match w[0].try_cmp(&w[1]) {
            Ok(std::cmp::Ordering::Less) => {}
            Ok(_) => return Err(invalid("vertices", "must increase strictly inside (0, 1)")),
            Err(e) => return Err(invalid("vertices", e.to_string())),
        }
    }
    let sides = vertices.len() as i64 - 1;
    let (series, finite) = translation_parts(vertices)?;
    let mut parts =
        Parts::new(series, pi_sq(sides, 3)).with_model(ModelKind::Parabolic, FeasiblePair::parabolic(&interior)?);
    parts.finite = finite;
    Ok(parts)
}

fn b133(_: &Args) -> Result<Parts, IdentityError> {
    let s = Series::exact("1/k^2", 2, Decay::InverseSquare { coeff: int(1) }, |k| {
        Ok(QuadNum::ratio(1, k * k))
    });
    Ok(Parts::new(vec![s], pi_sq(1, 6)).with_model(ModelKind::Parabolic, FeasiblePair::parabolic(&[])?))
}

fn b134(_: &Args) -> Result<Parts, IdentityError> {
    let phi = QuadNum::golden_ratio();
    let (phi2, phi4) = (phi.square(), phi.square().square());
    let inv_phi2 = phi2.inv()?;
    let (p1, p2, p4) = (phi.clone(), phi2.clone(), phi4.clone());
    let series = vec![
        Series::exact(
            "1/(phi^2 k^2)",
            1,
            Decay::InverseSquare {
                coeff: inv_phi2.clone(),
            },
            move |k| Ok((&p2 * &int(k * k)).inv()?),
        ),
        Series::exact(
            "1/(phi^4 k^2)",
            1,
            Decay::InverseSquare { coeff: phi4.inv()? },
            move |k| Ok((&p4 * &int(k * k)).inv()?),
        ),
        Series::exact(
            "1/((phi k-1)(phi^2 k-1))",
            1,
            Decay::InverseSquare { coeff: phi.pow(-3)? },
            move |k| Ok(((&p1 * &int(k) - int(1)) * (&phi2 * &int(k) - int(1))).inv()?),
        )
        .weighted(Rational::from(2)),
    ];
    let pair = FeasiblePair::parabolic(&[phi.inv()?])?;
    Ok(Parts::new(series, pi_sq(2, 3)).with_model(ModelKind::Parabolic, pair))
}

fn b135(a: &Args) -> Result<Parts, IdentityError> {
    let (p, q) = (a.int_at_least("p", 1)?, a.int_at_least("q", 2)?);
    if p >= q {
        return Err(invalid("p", format!("need 0 < p < q, got p = {p}, q = {q}")));
    }
    let r = q - p;
    let sq = |x: i64| QuadNum::ratio(x * x, q * q);
    let series = vec![
        Series::exact("p^2/(q^2 k^2)", 1, Decay::InverseSquare { coeff: sq(p) }, move |k| {
            Ok(QuadNum::ratio(p * p, q * q * k * k))
        }),
        Series::exact("r^2/(q^2 k^2)", 1, Decay::InverseSquare { coeff: sq(r) }, move |k| {
            Ok(QuadNum::ratio(r * r, q * q * k * k))
        }),
        Series::exact(
            "pr/((qk-p)(qk-r))",
            1,
            Decay::InverseSquare {
                coeff: QuadNum::ratio(p * r, q * q),
            },
            move |k| Ok(QuadNum::ratio(p * r, (q * k - p) * (q * k - r))),
        )
        .weighted(Rational::from(2)),
    ];
    let pair = FeasiblePair::parabolic(&[QuadNum::ratio(p, q)])?;
    Ok(Parts::new(series, pi_sq(2, 3)).with_model(ModelKind::Parabolic, pair))
}

/// `[ᾱ, α, r_{2m+1}, r_{2m-1}]` for `m < l/2`.
fn axis_terms(cf: &PeriodicCF) -> Result<Vec<FiniteTerm>, IdentityError> {
    let alpha = cf.value();
    let (a, abar) = (
        BoundaryPoint::Finite(alpha.clone()),
        BoundaryPoint::Finite(alpha.conj()),
    );
    let half = cf.period() as i64 / 2;
    (0..half)
        .map(|m| {
            let v = cross_ratio4(
                &abar,
                &a,
                &cf.convergent_point(2 * m + 1)?,
                &cf.convergent_point(2 * m - 1)?,
            )?;
            Ok(FiniteTerm {
                weight: Rational::from(1),
                arg: v,
            })
        })
        .collect()
}

fn even_cf(a: &Args) -> PeriodicCF {
    a.cf("cf").even_period()
}

fn b151(a: &Args) -> Result<Parts, IdentityError> {
    let cf = Arc::new(even_cf(a));
    let l = cf.period() as i64;
    let half = l / 2;
    let side = |cf: &PeriodicCF, i: i64| -> Result<[BoundaryPoint; 2], IdentityError> {
        Ok([cf.convergent_point(i + 2)?, cf.convergent_point(i)?])
    };
    let mut finite = axis_terms(&cf)?;
    for i in 0..half {
        for j in 0..i {
            let [x1, x2] = side(&cf, 2 * i - 1)?;
            let [x3, x4] = side(&cf, 2 * j - 1)?;
            finite.push(FiniteTerm {
                weight: Rational::from(1),
                arg: cross_ratio4(&x1, &x2, &x3, &x4)?,
            });
        }
    }
    let mut series = Vec::new();
    for i in 0..half {
        for j in 0..half {
            let cf = cf.clone();
            let label = format!("[A^k e_{}, e_{}]", 2 * i + 1, 2 * j + 1);
            series.push(Series::exact(label, 1, geometric(), move |k| {
                let [x1, x2] = side(&cf, k * l + 2 * i - 1)?;
                let [x3, x4] = side(&cf, 2 * j - 1)?;
                Ok(cross_ratio4(&x1, &x2, &x3, &x4)?)
            }));
        }
    }
    let pair = FeasiblePair::even_period_cf(&cf)?;
    let mut parts = Parts::new(series, pi_sq(l, 6)).with_model(ModelKind::EvenPeriodCf, pair);
    parts.finite = finite;
    Ok(parts)
}

/// `a_{2i+1} a_{2j+1} / (p^{(2j+1)}(s) p^{(2j+3)}(s))`.
fn permuted_term(cf: &PeriodicCF, i: i64, j: i64, s: i64) -> Result<QuadNum, IdentityError> {
    let num = Integer::from(cf.quotient(2 * i + 1)) * cf.quotient(2 * j + 1);
    let den = cf.permuted_numerator(2 * j + 1, s)? * cf.permuted_numerator(2 * j + 3, s)?;
    Ok(QuadNum::from(Rational::from((num, den))))
}

fn b153(a: &Args) -> Result<Parts, IdentityError> {
    let cf = Arc::new(even_cf(a));
    let l = cf.period() as i64;
    let half = l / 2;
    let mut finite = axis_terms(&cf)?;
    for i in 0..half {
        for j in 0..i {
            finite.push(FiniteTerm {
                weight: Rational::from(1),
                arg: permuted_term(&cf, i, j, 2 * i - 2 * j - 2)?,
            });
        }
    }
    let mut series = Vec::new();
    for i in 0..half {
        for j in 0..half {
            let cf = cf.clone();
            let label = format!(
                "a_{}a_{}/(p^({})(s)p^({})(s))",
                2 * i + 1,
                2 * j + 1,
                2 * j + 1,
                2 * j + 3
            );
            series.push(Series::exact(label, 1, geometric(), move |k| {
                permuted_term(&cf, i, j, k * l + 2 * i - 2 * j - 2)
            }));
        }
    }
    let pair = FeasiblePair::even_period_cf(&cf)?;
    let mut parts = Parts::new(series, pi_sq(l, 6)).with_model(ModelKind::EvenPeriodCf, pair);
    parts.finite = finite;
    Ok(parts)
}

use ParamKind::{Integer as PInt, Points as PPoints, Quotients as PCf, Rational as PRat, Surd as PSurd};

const T_TRACE: &[ParamSpec] = &[param("t", PSurd, "3", "t > 2")];
const SL2: &[ParamSpec] = &[
    param("a", PInt, "2", "positive, ad - bc = 1, a + d > 2"),
    param("b", PInt, "1", "positive"),
    param("c", PInt, "1", "positive"),
    param("d", PInt, "1", "positive"),
];
const SL2_CROWN: &[ParamSpec] = &[
    param("a", PInt, "3", "positive, ad - bc = 1, a + d > 2"),
    param("b", PInt, "2", "positive"),
    param("c", PInt, "1", "positive"),
    param("d", PInt, "1", "positive"),
];
const PHI_K: &[ParamSpec] = &[param("k", PInt, "1", "k >= 0")];
const CF: &[ParamSpec] = &[param("cf", PCf, "1,2,3", "positive quotients; odd periods are doubled")];
const CHEB: &[ParamSpec] = &[param("x", PRat, "3/2", "x > 1")];

static CATALOG: &[Template] = &[
    Template {
        id: "eq-4.6",
        formula: "sum_{n>=2} L(1/q_{n-1}^2) + sum_{n>=0} L((t-2)/((q_{n+1}-q_n)(q_{n-1}-q_{n-2}))) = pi^2/6",
        params: T_TRACE,
        build: b46,
    },
    Template {
        id: "eq-4.7",
        formula: "sum_{k>=1} L(1/f_{2k+2}^2) + L(1/(f_{2k-3} f_{2k+1})) = pi^2/6",
        params: &[],
        build: b47,
    },
    Template {
        id: "eq-4.8",
        formula: "sum_{k>=2} L(9/f_{4k}^2) + sum_{k>=0} L(45/(l_{4k-2} l_{4k+6})) = pi^2/6",
        params: &[],
        build: b48,
    },
    Template {
        id: "eq-5.2",
        formula: "sum_{n>=2} L(1/q_{n-1}^2) = L(1/u^2)",
        params: T_TRACE,
        build: b52,
    },
    Template {
        id: "eq-5.3a",
        formula: "sum_{n>=1} L(1/q_n^2) = L(1/u^2)",
        params: T_TRACE,
        build: b53a,
    },
    Template {
        id: "eq-5.3b",
        formula: "sum_{n>=1} L((t-2)/((q_n-q_{n-1})(q_{n-2}-q_{n-3}))) = L(1-1/u^2)",
        params: T_TRACE,
        build: b53b,
    },
    Template {
        id: "eq-5.4",
        formula: "sum_{k>=2} L(sinh^2(L/2)/sinh^2(kL/2)) = L(e^{-L}), e^{L/2} = u",
        params: T_TRACE,
        build: b54,
    },
    Template {
        id: "eq-5.7",
        formula: "sum_{n>=2} L(((t^2-4)/(v_n-v_{n-2}))^2) = L(1/u^2), v_{-1} = 2, v_0 = t",
        params: T_TRACE,
        build: b57,
    },
    Template {
        id: "eq-5.8a",
        formula: "sum_{k>=2} L(1/f_{2k}^2) = L(1/phi^4)",
        params: &[],
        build: b58a,
    },
    Template {
        id: "eq-5.8b",
        formula: "sum_{k>=1} L(1/(f_{2k-3} f_{2k+1})) = L(1-1/phi^4)",
        params: &[],
        build: b58b,
    },
    Template {
        id: "eq-5.9a",
        formula: "sum_{k>=2} L(9/f_{4k}^2) = L(1/phi^8)",
        params: &[],
        build: b59a,
    },
    Template {
        id: "eq-5.9b",
        formula: "sum_{k>=0} L(45/(l_{4k-2} l_{4k+6})) = L(1-1/phi^8)",
        params: &[],
        build: b59b,
    },
    Template {
        id: "eq-5.10",
        formula: "sum_{n>=1} L(1/(5 f_{2n}^2)) + sum_{n>=2} L(1/l_{2n-1}^2) = L(1/phi^2)",
        params: &[],
        build: b510,
    },
    Template {
        id: "eq-6.2",
        formula: "sum_{n>=1} L(1/q_n^2) = L(1/u^2), t = a^2/b + 2, 1/q_n = b^n / sum_k b^k p_{2n-2k-1}",
        params: &[param("a", PInt, "2", "a >= 1"), param("b", PInt, "3", "b >= 1")],
        build: b62,
    },
    Template {
        id: "eq-6.4",
        formula: "sum_{k>=1} L((3^k/(9^k+...+9+1))^2) = L(1/9)",
        params: &[],
        build: b64,
    },
    Template {
        id: "eq-7.1",
        formula: "sum_{k>=1} L(n^k/(n^k+...+n+1)^2) = L(1/n)",
        params: &[param("n", PInt, "2", "n >= 2")],
        build: b71,
    },
    Template {
        id: "eq-7.3a",
        formula: "sum_{n>=1} L(1/U_n(x)^2) = L(1/(x+sqrt(x^2-1))^2)",
        params: CHEB,
        build: b73a,
    },
    Template {
        id: "eq-7.3b",
        formula: "sum_{n>=1} L((2x-2)/((U_n-U_{n-1})(U_{n-2}-U_{n-3}))) = L(1-1/(x+sqrt(x^2-1))^2)",
        params: CHEB,
        build: b73b,
    },
    Template {
        id: "eq-8.4",
        formula: "sum_{n>=2} L((b/q_{2n-1})^2) + sum_{n>=2} L((c/p_{2n-2})^2) + sum_{n>=1} L(bc/(q_{2n} q_{2n-4})) + sum_{n>=1} L(bc/(p_{2n+1} p_{2n-3})) + L(bc/ad) = pi^2/3",
        params: SL2,
        build: b84,
    },
    Template {
        id: "eq-8.5",
        formula: "sum_{n>=2} L((b/q_{2n-1})^2) = L(1/u^2)",
        params: SL2_CROWN,
        build: b85,
    },
    Template {
        id: "eq-8.6",
        formula: "2 sum_{n>=2} L((b/q_{2n-1})^2) + sum_{n>=1} L(bc/(q_{2n} q_{2n-4})) + sum_{n>=1} L(bc/(p_{2n+1} p_{2n-3})) + L(bc/ad) = pi^2/3",
        params: SL2,
        build: b86,
    },
    Template {
        id: "eq-8.7",
        formula: "sum_{k>=2} L((f_{2n}/f_{2nk})^2) = L(1/phi^{4n})",
        params: &[param("n", PInt, "1", "n >= 1")],
        build: b87,
    },
    Template {
        id: "eq-9.2",
        formula: "sum_{n>=2} L((b/q_{2n-1})^2) = L(1/(b alpha+1)^2), alpha = [a, b, a, b, ...]",
        params: &[param("a", PInt, "1", "a >= 1"), param("b", PInt, "2", "b >= 1")],
        build: b92,
    },
    Template {
        id: "eq-10.1",
        formula: "sum_{n>=2} L(l_{2k+1}^2/l_{n(4k+2)-(2k+1)}^2) + sum_{n>=1} L(l_{2k+1}^2/(5 f_{n(4k+2)}^2)) = L(1/phi^{4k+2})",
        params: PHI_K,
        build: b101,
    },
    Template {
        id: "eq-11.1",
        formula: "sum_{n>=1} L(1/(t^2 H_n^2)) + sum_{n>=1} L(1/K_n^2) = L(1/phi^{2k+1}), t^2 = f_{2k+1} sqrt5 + 2",
        params: PHI_K,
        build: b111,
    },
    Template {
        id: "eq-11.4",
        formula: "sum_{n>=1} L((l_{k0}/(t l_{(2n-1)k0}))^2) + sum_{n>=1} L((l_{k0}/(sqrt5 t f_{2nk0}))^2) - sum_{n>=1} L(1/(t^2 H_n^2)) = 0, k0 = 2k+1",
        params: PHI_K,
        build: b114,
    },
    Template {
        id: "eq-11.5",
        formula: "sum_{n>=1} L((l_{k0}/(l_{(2n-1)k0}+sqrt5 f_{2nk0}))^2) + sum_{n>=2} L((l_{k0}/(l_{(2n-1)k0}+sqrt5 f_{2(n-1)k0}))^2) - sum_{n>=1} L(1/K_n^2) = 0",
        params: PHI_K,
        build: b115,
    },
    Template {
        id: "eq-12.1",
        formula: "sum_{n>=1} 2L(1/q_n^2) + L((t^2-4)/(p_n p_{n-2})) + L((t^2-4)/(p_{n+1} p_{n-1})) = pi^2/3, p_0 = 2, p_1 = t",
        params: T_TRACE,
        build: b121,
    },
    Template {
        id: "eq-12.2",
        formula: "sum_{k>=1} L(1/(5 f_{2k}^2)) + L(1/l_{2k+1}^2) + L(1/(l_{2k-2} l_{2k})) + e_k L(1/(5 f_{2k-3} f_{2k-1})) = pi^2/6, e_1 = 1/2",
        params: &[],
        build: b122,
    },
    Template {
        id: "eq-12.3",
        formula: "sum_{k>=1} L(1/(l_{2k-2} l_{2k})) + e_k L(1/(5 f_{2k-3} f_{2k-1})) = pi^2/10, e_1 = 1/2",
        params: &[],
        build: b123,
    },
    Template {
        id: "eq-13.2",
        formula: "sum_{j<i} L([v_i,v_{i+1},v_j,v_{j+1}]) + sum_{i,j} sum_{k>=1} L([v_i,v_{i+1},k+v_j,k+v_{j+1}]) = (n-2) pi^2/3",
        params: &[param("vertices", PPoints, "1/2", "increasing interior vertices in (0, 1)")],
        build: b132,
    },
    Template {
        id: "eq-13.3",
        formula: "sum_{k>=2} L(1/k^2) = pi^2/6",
        params: &[],
        build: b133,
    },
    Template {
        id: "eq-13.4",
        formula: "sum_{k>=1} L(1/(phi^2 k^2)) + L(1/(phi^4 k^2)) + 2L(1/((phi k-1)(phi^2 k-1))) = 2pi^2/3",
        params: &[],
        build: b134,
    },
    Template {
        id: "eq-13.5",
        formula: "sum_{k>=1} L(p^2/(q^2k^2)) + L(r^2/(q^2k^2)) + 2L(pr/((qk-p)(qk-r))) = 2pi^2/3, r = q-p",
        params: &[param("p", PInt, "2", "0 < p < q"), param("q", PInt, "5", "q > p")],
        build: b135,
    },
    Template {
        id: "prop-15.1",
        formula: "sum_{j<i} L([e_{2i+1}, e_{2j+1}]) + sum_{i,j} sum_{k>=1} L([A^k e_{2i+1}, e_{2j+1}]) + sum_m L([abar, alpha, r_{2m+1}, r_{2m-1}]) = l pi^2/6",
        params: CF,
        build: b151,
    },
    Template {
        id: "thm-15.3",
        formula: "sum L(a_{2i+1}a_{2j+1}/(p^{(2j+1)}(s) p^{(2j+3)}(s))) over s = 2i-2j-2 (j<i) and s = kl+2i-2j-2 (k>=1), plus the alpha terms = l pi^2/6",
        params: CF,
        build: b153,
    },
];

/// Every template, in a fixed order.
pub fn catalog() -> &'static [Template] {
    CATALOG
}

/// `id` itself if it names a template, otherwise every template `id` + one
/// letter (`eq-5.3` gives `eq-5.3a`, `eq-5.3b`).
pub fn resolve_ids(id: &str) -> Result<Vec<&'static str>, IdentityError> {
    if let Some(t) = CATALOG.iter().find(|t| t.id == id) {
        return Ok(vec![t.id]);
    }
    let group: Vec<&'static str> = CATALOG
        .iter()
        .filter(|t| {
            t.id.strip_prefix(id)
                .is_some_and(|rest| rest.len() == 1 && rest.chars().all(|c| c.is_ascii_lowercase()))
        })
        .map(|t| t.id)
        .collect();
    if group.is_empty() {
        Err(IdentityError::UnknownId(id.into()))
    } else {
        Ok(group)
    }
}

pub fn instantiate(id: &str, params: &[(String, String)]) -> Result<Identity, IdentityError> {
    CATALOG
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| IdentityError::UnknownId(id.into()))?
        .instantiate(params)
}

/// Instantiates every template `id` resolves to.
pub fn instantiate_group(id: &str, params: &[(String, String)]) -> Result<Vec<Identity>, IdentityError> {
    resolve_ids(id)?.into_iter().map(|i| instantiate(i, params)).collect()
}

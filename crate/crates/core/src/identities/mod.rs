//! The identity catalog and the machinery that checks it.
//!
//! An [`Identity`] is a weighted sum of Rogers dilogarithms over one or
//! more infinite [`Series`] plus finitely many extra terms, equated to an
//! exact right-hand side. Arguments are produced exactly; only evaluation
//! of `L` is numeric.

mod catalog;
mod crossval;
mod report;
mod verify;

use std::fmt;
use std::sync::Arc;

use rug::Rational;
use thiserror::Error;

use crate::contfrac::ContFracError;
use crate::exact::{ExactError, QuadNum};
use crate::geometry::{FeasiblePair, GeometryError, ModelKind};
use crate::numerics::{rogers, BigReal, NumericsError};
use crate::sequences::SequenceError;

pub use catalog::{catalog, instantiate, instantiate_group, resolve_ids, ParamKind, ParamSpec, Template};
pub use crossval::{cross_validate, CrossCheck};
pub use report::{ReportFormatError, VerificationReport, CSV_HEADER};
pub use verify::{verify, VerifyOptions, MIN_TERMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownId(String),
    #[error("identity `{id}` takes no parameter `{name}`")]
    UnknownParam { id: String, name: String },
    #[error("parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("series `{series}` term {index}: argument {value} lies outside (0, 1]")]
    ArgumentOutOfRange { series: String, index: i64, value: String },
    #[error("series `{series}` stopped decreasing at term {index}")]
    NotDecreasing { series: String, index: i64 },
    #[error("series `{series}` has no exact arguments")]
    NotExact { series: String },
    #[error("identity `{0}` has no geometric model")]
    NoModel(String),
    #[error("tolerance must be positive")]
    Tolerance,
    #[error("max_terms must be at least {min}, got {got}")]
    MaxTerms { min: usize, got: usize },
    #[error("cross validation mismatch at sorted position {index}: argument {argument} has weight {geometric} geometrically and {arithmetic} arithmetically")]
    CrossMismatch {
        index: usize,
        argument: String,
        geometric: String,
        arithmetic: String,
    },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One argument of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermArg {
    Exact(QuadNum),
    /// `sinh²(ln u) / sinh²(k ln u)`, evaluated numerically.
    SinhRatio {
        u: QuadNum,
        k: i64,
    },
}

impl TermArg {
    pub fn as_exact(&self) -> Option<&QuadNum> {
        match self {
            TermArg::Exact(q) => Some(q),
            TermArg::SinhRatio { .. } => None,
        }
    }

    pub fn to_real(&self, prec: u32) -> BigReal {
        match self {
            TermArg::Exact(q) => q.to_real(prec),
            TermArg::SinhRatio { u, k } => {
                let wp = prec + 32;
                let ln_u = u.to_real(wp).ln();
                let top = ln_u.sinh();
                let bottom = ln_u.mul_i64(*k).sinh();
                (top / bottom).square().with_precision(prec)
            }
        }
    }
}

impl fmt::Display for TermArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermArg::Exact(q) => write!(f, "{q}"),
            TermArg::SinhRatio { u, k } => write!(f, "sinh^2(ln({u}))/sinh^2({k}*ln({u}))"),
        }
    }
}

/// How fast the `L`-values of a series fall off; picks the tail bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decay {
    Geometric,
    /// Arguments behave like `coeff / k²`.
    InverseSquare {
        coeff: QuadNum,
    },
}

pub type Generator = Arc<dyn Fn(i64) -> Result<TermArg, IdentityError> + Send + Sync>;

/// `weight · Σ_{n ≥ start} L(arg(n))`.
#[derive(Clone)]
pub struct Series {
    pub label: String,
    pub start: i64,
    pub weight: Rational,
    pub decay: Decay,
    generator: Generator,
}

impl Series {
    pub fn new(
        label: impl Into<String>,
        start: i64,
        decay: Decay,
        generator: impl Fn(i64) -> Result<TermArg, IdentityError> + Send + Sync + 'static,
    ) -> Self {
        Series {
            label: label.into(),
            start,
            weight: Rational::from(1),
            decay,
            generator: Arc::new(generator),
        }
    }

    /// Shorthand for a series with exact arguments.
    pub fn exact(
        label: impl Into<String>,
        start: i64,
        decay: Decay,
        f: impl Fn(i64) -> Result<QuadNum, IdentityError> + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, start, decay, move |n| f(n).map(TermArg::Exact))
    }

    pub fn weighted(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    /// The argument at summation index `n` (not offset by `start`).
    pub fn arg(&self, n: i64) -> Result<TermArg, IdentityError> {
        (self.generator)(n)
    }

    /// The first `count` arguments.
    pub fn args(&self, count: usize) -> Result<Vec<TermArg>, IdentityError> {
        (0..count as i64).map(|i| self.arg(self.start + i)).collect()
    }

    /// Like [`Series::arg`], rejecting arguments outside `(0, 1]`.
    pub fn checked_arg(&self, n: i64, prec: u32) -> Result<TermArg, IdentityError> {
        let arg = self.arg(n)?;
        let inside = match &arg {
            TermArg::Exact(q) => q.is_positive() && *q <= QuadNum::one(),
            TermArg::SinhRatio { .. } => {
                let x = arg.to_real(prec);
                x > 0 && x <= 1
            }
        };
        if inside {
            Ok(arg)
        } else {
            Err(IdentityError::ArgumentOutOfRange {
                series: self.label.clone(),
                index: n,
                value: arg.to_string(),
            })
        }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("label", &self.label)
            .field("start", &self.start)
            .field("weight", &self.weight)
            .field("decay", &self.decay)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTerm {
    pub weight: Rational,
    pub arg: QuadNum,
}

/// `pi_sq · π² + Σ weight · L(arg)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhs {
    pub pi_sq: Rational,
    pub rogers: Vec<(Rational, QuadNum)>,
}

impl Rhs {
    pub fn pi_squared(multiple: Rational) -> Self {
        Rhs {
            pi_sq: multiple,
            rogers: Vec::new(),
        }
    }

    pub fn rogers_of(arg: QuadNum) -> Self {
        Rhs {
            pi_sq: Rational::new(),
            rogers: vec![(Rational::from(1), arg)],
        }
    }

    pub fn zero() -> Self {
        Self::pi_squared(Rational::new())
    }

    pub fn evaluate(&self, prec: u32) -> Result<BigReal, IdentityError> {
        let wp = prec + 16;
        let pi = BigReal::pi(wp);
        let mut total = pi.square() * BigReal::from_rational(&self.pi_sq, wp);
        for (w, arg) in &self.rogers {
            total = total + BigReal::from_rational(w, wp) * rogers(&arg.to_real(wp))?;
        }
        Ok(total.with_precision(prec))
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.pi_sq != 0 || self.rogers.is_empty() {
            parts.push(format!("{}*pi^2", self.pi_sq));
        }
        for (w, arg) in &self.rogers {
            if *w == 1 {
                parts.push(format!("L({arg})"));
            } else {
                parts.push(format!("{w}*L({arg})"));
            }
        }
        f.write_str(&parts.join(" + "))
    }
}

/// The feasible pair an identity is read off from, and how.
#[derive(Clone, Debug)]
pub struct Model {
    pub kind: ModelKind,
    pub pair: FeasiblePair,
}

/// One instantiated identity: `Σ series + Σ finite = rhs`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub formula: String,
    pub params: Vec<(String, String)>,
    pub series: Vec<Series>,
    pub finite: Vec<FiniteTerm>,
    pub rhs: Rhs,
    pub model: Option<Model>,
}

impl Identity {
    /// The sum of finite terms and the first `terms` terms of every series.
    pub fn partial_sum(&self, prec: u32, terms: usize) -> Result<BigReal, IdentityError> {
        let counts = vec![terms; self.series.len()];
        self.partial_sum_with(prec, &counts)
    }

    /// Like [`Identity::partial_sum`] with a separate count per series.
    pub fn partial_sum_with(&self, prec: u32, counts: &[usize]) -> Result<BigReal, IdentityError> {
        let wp = prec + 16;
        let mut total = self.finite_sum(wp)?;
        for (s, &count) in self.series.iter().zip(counts) {
            total = total + series_prefix(s, wp, count)?;
        }
        Ok(total.with_precision(prec))
    }

    pub(crate) fn finite_sum(&self, prec: u32) -> Result<BigReal, IdentityError> {
        let mut total = BigReal::zero(prec);
        for term in &self.finite {
            total = total + BigReal::from_rational(&term.weight, prec) * rogers(&term.arg.to_real(prec))?;
        }
        Ok(total)
    }

    pub fn params_display(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Cross-validates against this identity's own feasible pair.
    pub fn cross_validate(&self, prefix: usize) -> Result<CrossCheck, IdentityError> {
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| IdentityError::NoModel(self.id.clone()))?;
        cross_validate(self, &model.pair, prefix)
    }
}

/// `weight · Σ_{i < count} L(arg(start + i))`.
pub fn series_prefix(series: &Series, prec: u32, count: usize) -> Result<BigReal, IdentityError> {
    let mut sum = BigReal::zero(prec);
    for i in 0..count as i64 {
        let arg = series.checked_arg(series.start + i, prec)?;
        sum = sum + rogers(&arg.to_real(prec))?;
    }
    Ok(sum * BigReal::from_rational(&series.weight, prec))
}

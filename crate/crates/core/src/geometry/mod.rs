//! Boundary geometry of the hyperbolic plane over exact scalars.
//!
//! Everything here works on the extended real line. Cross ratios use the
//! normalization `[z1, z2, z3, z4] = (z1−z2)(z4−z3) / ((z1−z3)(z4−z2))`, under
//! which two disjoint geodesics `[x1, x2]`, `[x3, x4]` with endpoints in
//! cyclic order have cross ratio `1/cosh²(l/2)`, `l` being their distance.

mod mobius;
mod orbits;

use std::cmp::Ordering;
use std::fmt;

use rug::Rational;
use thiserror::Error;

use crate::contfrac::ContFracError;
use crate::exact::{BoundaryPoint, ExactError, QuadNum};
use crate::numerics::BigReal;

pub use mobius::Mobius;
pub use orbits::{enumerate_terms, Enumeration, FeasiblePair, ModelKind, OrbitFamily, PairShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("matrix has zero determinant")]
    Singular,
    #[error("need at least three distinct points for a cross ratio")]
    TooFewDistinct,
    #[error("cross ratio is infinite: a denominator pair of points coincides")]
    InfiniteCrossRatio,
    #[error("a geodesic needs two distinct endpoints")]
    DegenerateGeodesic,
    #[error("geodesics {0} and {1} cross")]
    Crossing(String, String),
    #[error("geodesics coincide")]
    Coincident,
    #[error("map with trace {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("one fixed point is at infinity")]
    FixedPointAtInfinity,
    #[error("{0} is not representable as a quadratic surd")]
    NotRepresentable(String),
    #[error("infeasible pair: {0}")]
    Infeasible(String),
    #[error("model {model} does not fit this pair: {reason}")]
    ModelMismatch { model: String, reason: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
}

/// An unordered pair of distinct boundary points.
#[derive(Clone, Debug)]
pub struct Geodesic {
    ends: [BoundaryPoint; 2],
}

impl Geodesic {
    pub fn new(x: BoundaryPoint, y: BoundaryPoint) -> Result<Self, GeometryError> {
        if x == y {
            return Err(GeometryError::DegenerateGeodesic);
        }
        Ok(Geodesic { ends: [x, y] })
    }

    /// Convenience for finite-to-finite or finite-to-∞ geodesics.
    pub fn between(x: impl Into<BoundaryPoint>, y: impl Into<BoundaryPoint>) -> Result<Self, GeometryError> {
        Self::new(x.into(), y.into())
    }

    pub fn endpoints(&self) -> (&BoundaryPoint, &BoundaryPoint) {
        (&self.ends[0], &self.ends[1])
    }

    pub fn image(&self, m: &Mobius) -> Result<Self, GeometryError> {
        Self::new(m.apply(&self.ends[0])?, m.apply(&self.ends[1])?)
    }

    pub fn shares_endpoint(&self, other: &Self) -> bool {
        self.ends.iter().any(|p| other.ends.contains(p))
    }
}

impl PartialEq for Geodesic {
    fn eq(&self, other: &Self) -> bool {
        (self.ends[0] == other.ends[0] && self.ends[1] == other.ends[1])
            || (self.ends[0] == other.ends[1] && self.ends[1] == other.ends[0])
    }
}

impl Eq for Geodesic {}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.ends[0], self.ends[1])
    }
}

fn diff(x: &QuadNum, y: &QuadNum) -> Result<QuadNum, GeometryError> {
    Ok(x.checked_sub(y)?)
}

/// The four-point cross ratio with the limit conventions at ∞ and at
/// coincident points.
pub fn cross_ratio4(
    z1: &BoundaryPoint,
    z2: &BoundaryPoint,
    z3: &BoundaryPoint,
    z4: &BoundaryPoint,
) -> Result<QuadNum, GeometryError> {
    let pts = [z1, z2, z3, z4];
    let distinct = (0..4).filter(|&i| (0..i).all(|j| pts[i] != pts[j])).count();
    if distinct < 3 {
        return Err(GeometryError::TooFewDistinct);
    }
    if z1 == z3 || z2 == z4 {
        return Err(GeometryError::InfiniteCrossRatio);
    }
    if z1 == z2 || z3 == z4 {
        return Ok(QuadNum::zero());
    }
    if z1 == z4 || z2 == z3 {
        return Ok(QuadNum::one());
    }
    use BoundaryPoint::{Finite as F, Infinity as Inf};
    let value = match (z1, z2, z3, z4) {
        (Inf, F(b), F(c), F(d)) => diff(d, c)?.checked_div(&diff(d, b)?)?,
        (F(a), Inf, F(c), F(d)) => diff(d, c)?.checked_div(&diff(a, c)?)?,
        (F(a), F(b), Inf, F(d)) => diff(a, b)?.checked_div(&diff(d, b)?)?,
        (F(a), F(b), F(c), Inf) => diff(a, b)?.checked_div(&diff(a, c)?)?,
        (F(a), F(b), F(c), F(d)) => {
            let num = diff(a, b)?.checked_mul(&diff(d, c)?)?;
            let den = diff(a, c)?.checked_mul(&diff(d, b)?)?;
            num.checked_div(&den)?
        }
        _ => unreachable!("two infinite points always coincide"),
    };
    Ok(value)
}

/// Cross ratio of two geodesics: their endpoints are put into cyclic order
/// `x1, x2, x3, x4` with `{x1, x2}` and `{x3, x4}` the two geodesics.
/// Geodesics sharing exactly one endpoint give `1`.
pub fn geodesic_cross_ratio(g1: &Geodesic, g2: &Geodesic) -> Result<QuadNum, GeometryError> {
    if g1 == g2 {
        return Err(GeometryError::Coincident);
    }
    if g1.shares_endpoint(g2) {
        return Ok(QuadNum::one());
    }
    let mut labelled: Vec<(&BoundaryPoint, u8)> =
        vec![(&g1.ends[0], 0), (&g1.ends[1], 0), (&g2.ends[0], 1), (&g2.ends[1], 1)];
    let mut err = None;
    labelled.sort_by(|x, y| {
        x.0.try_cmp(y.0).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let start = (0..4)
        .find(|&r| {
            let l = |i: usize| labelled[(r + i) % 4].1;
            l(0) == l(1) && l(2) == l(3)
        })
        .ok_or_else(|| GeometryError::Crossing(g1.to_string(), g2.to_string()))?;
    let p = |i: usize| labelled[(start + i) % 4].0;
    cross_ratio4(p(0), p(1), p(2), p(3))
}

/// Distance `l = 2·arccosh(1/√cr)` between disjoint geodesics.
pub fn geodesic_distance(g1: &Geodesic, g2: &Geodesic, prec: u32) -> Result<BigReal, GeometryError> {
    let cr = geodesic_cross_ratio(g1, g2)?;
    if cr == QuadNum::one() {
        return Ok(BigReal::zero(prec));
    }
    let wp = prec + 32;
    let inv_root = cr.to_real(wp).sqrt().recip();
    Ok(inv_root.acosh().mul_i64(2).with_precision(prec))
}

/// Topological data fixing the total of a cylinder identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceDescriptor {
    pub euler_characteristic: Rational,
    pub boundary_cusps: u32,
    /// Cusped surfaces enlarged to a bordered one flip the sign on the cusp
    /// count.
    pub enlarged: bool,
}

/// `−(6χ ± N)/12`, the total as a rational multiple of `π²`.
pub fn rhs_constant(sd: &SurfaceDescriptor) -> Rational {
    let six_chi = Rational::from(&sd.euler_characteristic * 6u32);
    let n = Rational::from(sd.boundary_cusps);
    let inner = if sd.enlarged { six_chi - n } else { six_chi + n };
    -inner / 12u32
}

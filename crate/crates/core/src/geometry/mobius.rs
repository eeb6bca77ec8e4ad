use std::fmt;

use super::GeometryError;
use crate::exact::{BoundaryPoint, QuadNum};

/// `z ↦ (a z + b)/(c z + d)` with exact entries and nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: QuadNum,
    b: QuadNum,
    c: QuadNum,
    d: QuadNum,
}

impl Mobius {
    pub fn new(a: QuadNum, b: QuadNum, c: QuadNum, d: QuadNum) -> Result<Self, GeometryError> {
        let det = a.checked_mul(&d)?.checked_sub(&b.checked_mul(&c)?)?;
        if det.is_zero() {
            return Err(GeometryError::Singular);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, GeometryError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1).expect("identity is invertible")
    }

    /// `z ↦ z + 1`.
    pub fn translation() -> Self {
        Self::from_ints(1, 1, 0, 1).expect("translation is invertible")
    }

    /// `[[t, -1], [1, 0]]`, the map `z ↦ t − 1/z`.
    pub fn trace_map(t: QuadNum) -> Self {
        Self::new(t, QuadNum::from_int(-1), QuadNum::one(), QuadNum::zero()).expect("determinant is one")
    }

    pub fn entries(&self) -> [&QuadNum; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> QuadNum {
        &self.a + &self.d
    }

    pub fn det(&self) -> QuadNum {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, p: &BoundaryPoint) -> Result<BoundaryPoint, GeometryError> {
        match p {
            BoundaryPoint::Infinity => {
                if self.c.is_zero() {
                    Ok(BoundaryPoint::Infinity)
                } else {
                    Ok(BoundaryPoint::Finite(self.a.checked_div(&self.c)?))
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c.checked_mul(z)?.checked_add(&self.d)?;
                if den.is_zero() {
                    return Ok(BoundaryPoint::Infinity);
                }
                let num = self.a.checked_mul(z)?.checked_add(&self.b)?;
                Ok(BoundaryPoint::Finite(num.checked_div(&den)?))
            }
        }
    }

    /// `self ∘ other`, i.e. the matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self, GeometryError> {
        let e = |x: &QuadNum, y: &QuadNum, z: &QuadNum, w: &QuadNum| -> Result<QuadNum, GeometryError> {
            Ok(x.checked_mul(y)?.checked_add(&z.checked_mul(w)?)?)
        };
        Self::new(
            e(&self.a, &other.a, &self.b, &other.c)?,
            e(&self.a, &other.b, &self.b, &other.d)?,
            e(&self.c, &other.a, &self.d, &other.c)?,
            e(&self.c, &other.b, &self.d, &other.d)?,
        )
    }

    /// The adjugate, which acts as the inverse map.
    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn power(&self, n: i64) -> Result<Self, GeometryError> {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Whether two matrices act identically (equal up to a scalar).
    pub fn same_action(&self, other: &Self) -> bool {
        let s = [&self.a, &self.b, &self.c, &self.d];
        let o = [&other.a, &other.b, &other.c, &other.d];
        (0..4).all(|i| (0..4).all(|j| s[i].checked_mul(o[j]).ok() == o[i].checked_mul(s[j]).ok()))
    }

    /// Real fixed points `(larger, smaller)` of a hyperbolic map.
    pub fn fixed_points(&self) -> Result<(QuadNum, QuadNum), GeometryError> {
        let tr = self.trace();
        let disc = tr
            .checked_mul(&tr)?
            .checked_sub(&self.det().checked_mul(&QuadNum::from_int(4))?)?;
        if !disc.is_positive() {
            return Err(GeometryError::NotHyperbolic(tr.to_string()));
        }
        if self.c.is_zero() {
            return Err(GeometryError::FixedPointAtInfinity);
        }
        let root = disc
            .sqrt()
            .map_err(|_| GeometryError::NotRepresentable(format!("sqrt({disc})")))?;
        // c x² + (d − a) x − b = 0
        let shift = self.a.checked_sub(&self.d)?;
        let two_c = self.c.checked_mul(&QuadNum::from_int(2))?;
        let clash = |_| GeometryError::NotRepresentable(format!("({shift} ± sqrt({disc}))/({two_c})"));
        let x1 = shift
            .checked_add(&root)
            .and_then(|v| v.checked_div(&two_c))
            .map_err(clash)?;
        let x2 = shift
            .checked_sub(&root)
            .and_then(|v| v.checked_div(&two_c))
            .map_err(clash)?;
        if x1 > x2 {
            Ok((x1, x2))
        } else {
            Ok((x2, x1))
        }
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

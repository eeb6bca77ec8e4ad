//! Purely periodic continued fractions and their convergent determinants.
//!
//! Convergents follow the usual seeding `(p_{-2}, p_{-1}) = (0, 1)`,
//! `(q_{-2}, q_{-1}) = (1, 0)`, so `r_{-1} = 1/0` is the point at infinity.
//! `d_k(n)` denotes `p_k q_n − p_n q_k`, the determinant of the convergent
//! columns `r_k`, `r_n`.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use rug::Integer;
use thiserror::Error;

use crate::exact::{BoundaryPoint, ExactError, QuadNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("a periodic continued fraction needs at least one quotient")]
    Empty,
    #[error("partial quotients must be positive integers")]
    NonPositive,
    #[error("convergent index {0} is below -2")]
    IndexOutOfRange(i64),
    #[error("cannot parse `{0}` as a comma-separated quotient list")]
    Parse(String),
    #[error("convergents {0:?} coincide; the cross ratio degenerates")]
    Degenerate((i64, i64)),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `[a_0, a_1, …, a_{l-1}]` repeated forever.
#[derive(Debug)]
pub struct PeriodicCF {
    quotients: Vec<u64>,
    // convergents[i] holds (p_{i-2}, q_{i-2})
    convergents: RwLock<Vec<(Integer, Integer)>>,
}

impl Clone for PeriodicCF {
    fn clone(&self) -> Self {
        PeriodicCF {
            quotients: self.quotients.clone(),
            convergents: RwLock::new(self.convergents.read().expect("cache poisoned").clone()),
        }
    }
}

impl PartialEq for PeriodicCF {
    fn eq(&self, other: &Self) -> bool {
        self.quotients == other.quotients
    }
}

impl Eq for PeriodicCF {}

impl PeriodicCF {
    pub fn new(quotients: Vec<u64>) -> Result<Self, ContFracError> {
        if quotients.is_empty() {
            return Err(ContFracError::Empty);
        }
        if quotients.contains(&0) {
            return Err(ContFracError::NonPositive);
        }
        let seeds = vec![
            (Integer::from(0), Integer::from(1)),
            (Integer::from(1), Integer::from(0)),
        ];
        Ok(PeriodicCF {
            quotients,
            convergents: RwLock::new(seeds),
        })
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn period(&self) -> usize {
        self.quotients.len()
    }

    /// `a_i`, read periodically; negative `i` wraps the same way.
    pub fn quotient(&self, i: i64) -> u64 {
        self.quotients[i.rem_euclid(self.period() as i64) as usize]
    }

    /// The same number written with two copies of the period.
    pub fn doubled(&self) -> Self {
        let mut q = self.quotients.clone();
        q.extend_from_slice(&self.quotients);
        Self::new(q).expect("doubling keeps quotients valid")
    }

    /// The representation with even period, doubling odd periods.
    pub fn even_period(&self) -> Self {
        if self.period() % 2 == 0 {
            self.clone()
        } else {
            self.doubled()
        }
    }

    /// `(p_n, q_n)` for `n ≥ -2`.
    pub fn convergent(&self, n: i64) -> Result<(Integer, Integer), ContFracError> {
        if n < -2 {
            return Err(ContFracError::IndexOutOfRange(n));
        }
        let slot = (n + 2) as usize;
        if let Some(v) = self.convergents.read().expect("cache poisoned").get(slot) {
            return Ok(v.clone());
        }
        let mut table = self.convergents.write().expect("cache poisoned");
        while table.len() <= slot {
            let len = table.len();
            let a = self.quotient(len as i64 - 2);
            let (p1, q1) = &table[len - 1];
            let (p2, q2) = &table[len - 2];
            let p = Integer::from(p1 * a) + p2;
            let q = Integer::from(q1 * a) + q2;
            table.push((p, q));
        }
        Ok(table[slot].clone())
    }

    /// `r_n = p_n / q_n` as a boundary point (`r_{-1} = ∞`).
    pub fn convergent_point(&self, n: i64) -> Result<BoundaryPoint, ContFracError> {
        let (p, q) = self.convergent(n)?;
        if q == 0 {
            Ok(BoundaryPoint::Infinity)
        } else {
            Ok(BoundaryPoint::Finite(QuadNum::from(rug::Rational::from((p, q)))))
        }
    }

    /// Entries `[[p_{l-1}, p_{l-2}], [q_{l-1}, q_{l-2}]]` of the period matrix.
    pub fn period_matrix(&self) -> [[Integer; 2]; 2] {
        let l = self.period() as i64;
        let (p1, q1) = self.convergent(l - 1).expect("valid index");
        let (p2, q2) = self.convergent(l - 2).expect("valid index");
        [[p1, p2], [q1, q2]]
    }

    /// The exact value `α > 1`, the attracting fixed point of the period matrix.
    pub fn value(&self) -> QuadNum {
        let [[p1, p2], [q1, q2]] = self.period_matrix();
        // q1·α² + (q2 − p1)·α − p2 = 0
        let diff = Integer::from(&p1 - &q2);
        let disc = Integer::from(diff.square_ref()) + Integer::from(&q1 * &p2) * 4u32;
        let denom = Integer::from(&q1 * 2u32);
        QuadNum::new(diff, 1, denom, disc).expect("discriminant of a periodic fraction is positive")
    }

    /// The Galois conjugate `ᾱ`, which lies in `(-1, 0)`.
    pub fn conjugate_value(&self) -> QuadNum {
        self.value().conj()
    }

    /// Quotients rotated left by `k` (taken mod the period).
    pub fn cyclic_permutation(&self, k: i64) -> Self {
        let l = self.period();
        let shift = k.rem_euclid(l as i64) as usize;
        let mut q = self.quotients.clone();
        q.rotate_left(shift);
        Self::new(q).expect("rotation keeps quotients valid")
    }

    /// `p_k q_n − p_n q_k` straight from the convergents.
    pub fn det_direct(&self, k: i64, n: i64) -> Result<Integer, ContFracError> {
        let (pk, qk) = self.convergent(k)?;
        let (pn, qn) = self.convergent(n)?;
        Ok(pk * qn - pn * qk)
    }

    /// `d_k(n)` from `d_k(k) = 0`, `d_k(k+1) = (-1)^{k-1}` and
    /// `d_k(n) = a_n d_k(n-1) + d_k(n-2)`; antisymmetric in `k`, `n`.
    pub fn det_rec(&self, k: i64, n: i64) -> Result<Integer, ContFracError> {
        for idx in [k, n] {
            if idx < -1 {
                return Err(ContFracError::IndexOutOfRange(idx));
            }
        }
        if n < k {
            return Ok(-self.det_rec(n, k)?);
        }
        let mut prev = Integer::new();
        if n == k {
            return Ok(prev);
        }
        let mut cur = Integer::from(if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 });
        for m in (k + 2)..=n {
            let next = Integer::from(&cur * self.quotient(m)) + &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    /// `[r_{n+2}, r_n, r_{m+2}, r_m]` in closed form:
    /// `(-1)^{m+n} a_{n+2} a_{m+2} / (d_m(n) d_{m+2}(n+2))`.
    ///
    /// The sign is kept; the value lies in `(0, 1)` when the two geodesics
    /// are disjoint, which holds for indices of equal parity.
    pub fn convergent_cross_ratio(&self, n: i64, m: i64) -> Result<QuadNum, ContFracError> {
        let d1 = self.det_rec(m, n)?;
        let d2 = self.det_rec(m + 2, n + 2)?;
        if d1 == 0 || d2 == 0 {
            return Err(ContFracError::Degenerate((n, m)));
        }
        let num = Integer::from(self.quotient(n + 2)) * self.quotient(m + 2);
        let num = if (m + n).rem_euclid(2) == 0 { num } else { -num };
        Ok(QuadNum::from(rug::Rational::from((num, d1 * d2))))
    }

    /// Numerator of the `s`-th convergent of the rotation by `k`.
    pub fn permuted_numerator(&self, k: i64, s: i64) -> Result<Integer, ContFracError> {
        Ok(self.cyclic_permutation(k).convergent(s)?.0)
    }
}

impl fmt::Display for PeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.quotients.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for PeriodicCF {
    type Err = ContFracError;

    /// Comma-separated positive integers, e.g. `1,2,3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed: Result<Vec<u64>, _> = s.split(',').map(|part| part.trim().parse::<u64>()).collect();
        let q = parsed.map_err(|_| ContFracError::Parse(s.to_string()))?;
        Self::new(q)
    }
}

/// Convergent-style columns of the powers of an integer matrix
/// `A = [[a, c], [b, d]]` with determinant one:
/// `Aⁿ = [[p_{2n-1}, p_{2n-2}], [q_{2n-1}, q_{2n-2}]]` for every integer `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixConvergents {
    a: Integer,
    b: Integer,
    c: Integer,
    d: Integer,
}

impl MatrixConvergents {
    pub fn new(a: Integer, b: Integer, c: Integer, d: Integer) -> Result<Self, ContFracError> {
        let det = Integer::from(&a * &d) - Integer::from(&b * &c);
        if det != 1 {
            return Err(ContFracError::Exact(ExactError::NotRepresentable(format!(
                "matrix with determinant {det}"
            ))));
        }
        Ok(MatrixConvergents { a, b, c, d })
    }

    pub fn trace(&self) -> Integer {
        Integer::from(&self.a + &self.d)
    }

    fn power(&self, n: i64) -> [[Integer; 2]; 2] {
        let base = if n >= 0 {
            [[self.a.clone(), self.c.clone()], [self.b.clone(), self.d.clone()]]
        } else {
            [
                [self.d.clone(), Integer::from(-&self.c)],
                [Integer::from(-&self.b), self.a.clone()],
            ]
        };
        let mul = |x: &[[Integer; 2]; 2], y: &[[Integer; 2]; 2]| {
            let e = |i: usize, j: usize| Integer::from(&x[i][0] * &y[0][j]) + &x[i][1] * &y[1][j];
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
        };
        let mut acc = [[Integer::from(1), Integer::new()], [Integer::new(), Integer::from(1)]];
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = mul(&sq, &sq);
            }
        }
        acc
    }

    /// `(p_k, q_k)` for any integer `k`.
    pub fn pq(&self, k: i64) -> (Integer, Integer) {
        let (n, col) = if k.rem_euclid(2) == 1 {
            ((k + 1) / 2, 0)
        } else {
            ((k + 2).div_euclid(2), 1)
        };
        let m = self.power(n);
        let [[a, b], [c, d]] = m;
        if col == 0 {
            (a, c)
        } else {
            (b, d)
        }
    }

    pub fn p(&self, k: i64) -> Integer {
        self.pq(k).0
    }

    pub fn q(&self, k: i64) -> Integer {
        self.pq(k).1
    }
}

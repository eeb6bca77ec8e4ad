//! Integer sequences and exact second-order linear recurrences.

use std::sync::RwLock;

use rug::Integer;
use thiserror::Error;

use crate::exact::{ExactError, QuadNum};
use crate::numerics::BigReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("index {0} lies before the seeds and the recurrence cannot run backwards")]
    NotInvertible(i64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn index_u32(n: u64) -> u32 {
    u32::try_from(n).expect("sequence index exceeds u32 range")
}

/// Fibonacci numbers with `f_0 = 0`, `f_1 = f_2 = 1`, extended to negative
/// indices by `f_{-n} = (-1)^{n+1} f_n`.
pub fn fibonacci(n: i64) -> Integer {
    let f = Integer::from(Integer::fibonacci(index_u32(n.unsigned_abs())));
    if n < 0 && n % 2 == 0 {
        -f
    } else {
        f
    }
}

/// Lucas numbers with `l_0 = 2`, `l_1 = 1`, extended by `l_{-n} = (-1)^n l_n`.
pub fn lucas(n: i64) -> Integer {
    let l = Integer::from(Integer::lucas(index_u32(n.unsigned_abs())));
    if n < 0 && n % 2 != 0 {
        -l
    } else {
        l
    }
}

/// Chebyshev polynomial of the second kind, `U_n(x)`.
pub fn chebyshev_u(n: u64, x: &BigReal) -> BigReal {
    let prec = x.precision();
    let two_x = x.mul_i64(2);
    let mut prev = BigReal::one(prec);
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for _ in 1..n {
        let next = &two_x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `x_n = coeff1·x_{n-1} + coeff0·x_{n-2}` with `x_0`, `x_1` given.
///
/// Terms are memoized in two append-only tables, one per direction, so
/// repeated prefix reads are cheap and concurrent readers never block each
/// other once a prefix is filled.
#[derive(Debug)]
pub struct Recurrence2 {
    coeff1: QuadNum,
    coeff0: QuadNum,
    forward: RwLock<Vec<QuadNum>>,
    // backward[i] holds x_{-1-i}
    backward: RwLock<Vec<QuadNum>>,
}

impl Clone for Recurrence2 {
    fn clone(&self) -> Self {
        Recurrence2 {
            coeff1: self.coeff1.clone(),
            coeff0: self.coeff0.clone(),
            forward: RwLock::new(self.forward.read().expect("cache poisoned").clone()),
            backward: RwLock::new(self.backward.read().expect("cache poisoned").clone()),
        }
    }
}

impl Recurrence2 {
    pub fn new(coeff1: QuadNum, coeff0: QuadNum, seed0: QuadNum, seed1: QuadNum) -> Result<Self, SequenceError> {
        // Surface radicand clashes now rather than deep inside term().
        let probe = coeff1.checked_mul(&seed1)?;
        probe.checked_add(&coeff0.checked_mul(&seed0)?)?;
        Ok(Recurrence2 {
            coeff1,
            coeff0,
            forward: RwLock::new(vec![seed0, seed1]),
            backward: RwLock::new(Vec::new()),
        })
    }

    /// `q_n = t·q_{n-1} − q_{n-2}` with `q_0 = 1`, `q_1 = t`.
    pub fn trace(t: QuadNum) -> Self {
        Self::new(t.clone(), QuadNum::from_int(-1), QuadNum::one(), t).expect("trace recurrence has a single radicand")
    }

    /// Same coefficients as [`Recurrence2::trace`] with arbitrary seeds.
    pub fn trace_with_seeds(t: QuadNum, seed0: QuadNum, seed1: QuadNum) -> Result<Self, SequenceError> {
        Self::new(t, QuadNum::from_int(-1), seed0, seed1)
    }

    pub fn coeff1(&self) -> &QuadNum {
        &self.coeff1
    }

    pub fn coeff0(&self) -> &QuadNum {
        &self.coeff0
    }

    /// The exact `n`-th term; negative `n` runs the recurrence backwards.
    pub fn term(&self, n: i64) -> Result<QuadNum, SequenceError> {
        if n >= 0 {
            self.forward_term(n as usize)
        } else {
            self.backward_term(n)
        }
    }

    fn forward_term(&self, n: usize) -> Result<QuadNum, SequenceError> {
        if let Some(v) = self.forward.read().expect("cache poisoned").get(n) {
            return Ok(v.clone());
        }
        let mut table = self.forward.write().expect("cache poisoned");
        while table.len() <= n {
            let len = table.len();
            let next = self
                .coeff1
                .checked_mul(&table[len - 1])?
                .checked_add(&self.coeff0.checked_mul(&table[len - 2])?)?;
            table.push(next);
        }
        Ok(table[n].clone())
    }

    fn backward_term(&self, n: i64) -> Result<QuadNum, SequenceError> {
        let slot = (-1 - n) as usize;
        if let Some(v) = self.backward.read().expect("cache poisoned").get(slot) {
            return Ok(v.clone());
        }
        if self.coeff0.is_zero() {
            return Err(SequenceError::NotInvertible(n));
        }
        let (x0, x1) = {
            let fwd = self.forward.read().expect("cache poisoned");
            (fwd[0].clone(), fwd[1].clone())
        };
        let mut table = self.backward.write().expect("cache poisoned");
        while table.len() <= slot {
            // x_{m-2} = (x_m − coeff1·x_{m-1}) / coeff0, walking m downwards.
            let (hi, lo) = match table.len() {
                0 => (&x1, &x0),
                1 => (&x0, &table[0]),
                k => (&table[k - 2], &table[k - 1]),
            };
            let prev = hi
                .checked_sub(&self.coeff1.checked_mul(lo)?)?
                .checked_div(&self.coeff0)?;
            table.push(prev);
        }
        Ok(table[slot].clone())
    }
}

/// `t₀ = f_{2k+1}·√5`, the trace whose crown has translation length
/// `(2k+1)·ln φ`.
pub fn phi_power_trace(k: u32) -> QuadNum {
    let f = fibonacci(2 * i64::from(k) + 1);
    QuadNum::new(0, f, 1, 5).expect("√5 has a small radicand")
}

/// The odd-indexed half of the `t₀` trace recurrence: `H_0 = 0`, `H_1 = 1`.
pub fn odd_split(k: u32) -> Recurrence2 {
    let t0 = phi_power_trace(k);
    Recurrence2::trace_with_seeds(t0, QuadNum::zero(), QuadNum::one()).expect("single radicand")
}

/// The even-indexed half of the `t₀` trace recurrence: `K_0 = 1`, `K_1 = t₀ + 1`.
pub fn even_split(k: u32) -> Recurrence2 {
    let t0 = phi_power_trace(k);
    let k1 = &t0 + &QuadNum::one();
    Recurrence2::trace_with_seeds(t0, QuadNum::one(), k1).expect("single radicand")
}

//! Truncated summation with a heuristic tail bound.
//!
//! Each series is summed on its own. Stop decisions are taken only at
//! checkpoints `N = 8, 16, 32, …` and at `max_terms`: a series stops once
//! its current weighted term and its tail estimate both fall below
//! `tol / (10 · #series)`. Afterwards the mass between the last checkpoint
//! `M ≤ N/2` and `N` must not exceed the tail estimated at `M`; a series
//! failing that doubling check is reported as not converged.

use std::collections::BTreeMap;
use std::time::Instant;

use super::{Decay, Identity, IdentityError, Series, VerificationReport};
use crate::numerics::{check_precision, rogers, BigReal};

/// Smallest accepted `max_terms`; below this there is no checkpoint.
pub const MIN_TERMS: usize = 8;

const EXTRA_BITS: u32 = 16;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub precision: u32,
    pub tolerance: BigReal,
    pub max_terms: usize,
}

impl VerifyOptions {
    pub fn new(precision: u32, tolerance: BigReal, max_terms: usize) -> Self {
        VerifyOptions {
            precision,
            tolerance,
            max_terms,
        }
    }
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let precision = 256;
        VerifyOptions {
            precision,
            tolerance: BigReal::parse_decimal("1e-30", precision).expect("literal"),
            max_terms: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
struct Checkpoint {
    n: usize,
    prefix: BigReal,
    last: BigReal,
    prev: BigReal,
}

struct SeriesRun {
    terms: usize,
    sum: BigReal,
    tail: BigReal,
    doubling_ok: bool,
}

fn is_checkpoint(n: usize) -> bool {
    n >= 4 && n.is_power_of_two()
}

/// Unweighted tail estimate after `n` terms whose last two values are
/// `last` and `prev`.
fn tail_estimate(decay: &Decay, n: usize, last: &BigReal, prev: &BigReal, prec: u32) -> BigReal {
    match decay {
        Decay::Geometric => {
            if prev.is_zero() {
                return BigReal::zero(prec);
            }
            let r = last / prev;
            if r < BigReal::parse_decimal("0.9", prec).expect("literal") {
                let one = BigReal::one(prec);
                (last * &r).mul_i64(2) / (one - r)
            } else {
                last.mul_i64(2 * n as i64)
            }
        }
        Decay::InverseSquare { coeff } => {
            let c = coeff.to_real(prec);
            let n_real = BigReal::from_i64(n as i64, prec);
            let half_log_c = c.ln().abs() / BigReal::from_i64(2, prec);
            let bracket = BigReal::from_i64(2, prec) + n_real.ln() + half_log_c;
            (c.mul_i64(2) * bracket) / n_real
        }
    }
}

fn run_series(series: &Series, prec: u32, thr: &BigReal, max_terms: usize) -> Result<SeriesRun, IdentityError> {
    let weight = BigReal::from_rational(&series.weight, prec).abs();
    let mut sum = BigReal::zero(prec);
    let mut prev = BigReal::zero(prec);
    let mut checkpoints: Vec<Checkpoint> = Vec::new();
    let mut terms = 0;
    for i in 0..max_terms {
        let index = series.start + i as i64;
        let arg = series.checked_arg(index, prec)?;
        let value = rogers(&arg.to_real(prec))?;
        if i >= 3 && value >= prev {
            return Err(IdentityError::NotDecreasing {
                series: series.label.clone(),
                index,
            });
        }
        sum = sum + &value;
        terms = i + 1;
        let at_end = terms == max_terms;
        if is_checkpoint(terms) || at_end {
            checkpoints.push(Checkpoint {
                n: terms,
                prefix: sum.clone(),
                last: value.clone(),
                prev: prev.clone(),
            });
            if terms >= MIN_TERMS {
                let tail = &weight * &tail_estimate(&series.decay, terms, &value, &prev, prec);
                if at_end || (&weight * &value < *thr && tail <= *thr) {
                    break;
                }
            }
        }
        prev = value;
    }
    let end = checkpoints.last().expect("max_terms >= 8 leaves a checkpoint");
    let tail = &weight * &tail_estimate(&series.decay, end.n, &end.last, &end.prev, prec);
    let doubling_ok = match checkpoints.iter().rev().find(|c| c.n * 2 <= end.n) {
        Some(mid) => {
            let mass = &weight * &(&end.prefix - &mid.prefix);
            let allowed = &weight * &tail_estimate(&series.decay, mid.n, &mid.last, &mid.prev, prec) + thr;
            mass <= allowed
        }
        None => true,
    };
    Ok(SeriesRun {
        terms,
        sum: sum * BigReal::from_rational(&series.weight, prec),
        tail,
        doubling_ok,
    })
}

/// Sums every series of `identity` and compares with its right-hand side.
pub fn verify(identity: &Identity, opts: &VerifyOptions) -> Result<VerificationReport, IdentityError> {
    check_precision(opts.precision)?;
    if !(opts.tolerance > 0) {
        return Err(IdentityError::Tolerance);
    }
    if opts.max_terms < MIN_TERMS {
        return Err(IdentityError::MaxTerms {
            min: MIN_TERMS,
            got: opts.max_terms,
        });
    }
    let started = Instant::now();
    let wp = opts.precision + EXTRA_BITS;
    let tol = opts.tolerance.with_precision(wp);
    let thr = tol.clone() / BigReal::from_i64(10 * identity.series.len().max(1) as i64, wp);

    let mut total = identity.finite_sum(wp)?;
    let mut tail = BigReal::zero(wp);
    let mut terms_used = Vec::with_capacity(identity.series.len());
    let mut doubling_ok = true;
    for series in &identity.series {
        let run = run_series(series, wp, &thr, opts.max_terms)?;
        total = total + run.sum;
        tail = tail + run.tail;
        terms_used.push(run.terms);
        doubling_ok &= run.doubling_ok;
    }
    let rhs = identity.rhs.evaluate(wp)?;
    let abs_error = (&total - &rhs).abs();
    let converged = doubling_ok && abs_error <= &tol + &tail;
    let prec = opts.precision;
    Ok(VerificationReport {
        id: identity.id.clone(),
        params: identity.params.iter().cloned().collect::<BTreeMap<_, _>>(),
        precision_bits: prec,
        terms_used,
        partial_sum: total.with_precision(prec),
        rhs: rhs.with_precision(prec),
        abs_error: abs_error.with_precision(prec),
        tail_estimate: tail.with_precision(prec),
        converged,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

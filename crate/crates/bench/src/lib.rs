//! Shared inputs for the engine benchmarks.

use orthospec_core::BigReal;

/// `count` evenly spread points `k/(count+1)` in `(0, 1)`.
pub fn unit_points(count: usize, prec: u32) -> Vec<BigReal> {
    let den = BigReal::from_i64(count as i64 + 1, prec);
    (1..=count as i64).map(|k| BigReal::from_i64(k, prec) / &den).collect()
}

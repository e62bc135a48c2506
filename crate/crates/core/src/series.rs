//! Summation of slowly decaying lattice series.
//!
//! The lattice sums in this crate have summands that are smooth functions of
//! the summation index with an asymptotic expansion in integer inverse
//! powers. Partial sums at `P0, 2 P0, 4 P0, ...` then differ from the limit
//! by a power series in `1/P`, which Richardson extrapolation removes level
//! by level. A purely direct sum of a `1/p^2` series would need ~10^12 terms
//! to reach the tolerances used downstream.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Terms summed before the first extrapolation level.
    pub initial_terms: u64,
    pub absolute_tolerance: f64,
    pub relative_tolerance: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: u64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            initial_terms: 64,
            absolute_tolerance: 1e-15,
            relative_tolerance: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums `term(k)` for `k = 1, 2, ...` to the limit.
pub fn sum_series<F>(what: &'static str, policy: &SeriesPolicy, mut term: F) -> Result<f64>
where
    F: FnMut(u64) -> f64,
{
    let mut acc = CompensatedSum::default();
    let mut next = 1u64;
    let mut upto = policy.initial_terms.max(4);
    // rows of the Neville tableau, h_i = 1 / P_i with P_i doubling
    let mut prev_row: Vec<f64> = Vec::new();
    let mut last_estimate = f64::NAN;
    let mut last_change = f64::INFINITY;

    while upto <= policy.max_terms {
        while next <= upto {
            acc.add(term(next));
            next += 1;
        }
        let mut row = Vec::with_capacity(prev_row.len() + 1);
        row.push(acc.value());
        for k in 1..=prev_row.len() {
            let factor = (1u64 << k) as f64 - 1.0;
            let refined = row[k - 1] + (row[k - 1] - prev_row[k - 1]) / factor;
            row.push(refined);
        }
        let estimate = *row.last().unwrap();
        if !estimate.is_finite() {
            return Err(Error::Convergence {
                what,
                terms: upto,
                change: f64::NAN,
            });
        }
        if row.len() >= 3 {
            last_change = (estimate - last_estimate).abs();
            let tol = policy
                .absolute_tolerance
                .max(policy.relative_tolerance * estimate.abs());
            if last_change <= tol {
                return Ok(estimate);
            }
        }
        last_estimate = estimate;
        prev_row = row;
        upto *= 2;
    }
    Err(Error::Convergence {
        what,
        terms: next - 1,
        change: last_change,
    })
}

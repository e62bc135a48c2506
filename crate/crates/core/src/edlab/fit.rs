//! Least-squares fits used to post-process finite-size data.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

fn distinct(xs: &[f64]) -> usize {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| a == b);
    v.len()
}

/// Coefficients `c_0..=c_degree` of the least-squares polynomial through
/// `(x, y)`.
pub fn polynomial_fit(points: &[(f64, f64)], degree: usize) -> Result<Vec<f64>> {
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    if distinct(&xs) < degree + 1 {
        return Err(Error::DegenerateFit(format!(
            "degree {degree} needs {} distinct abscissae, got {}",
            degree + 1,
            distinct(&xs)
        )));
    }
    // scale the abscissa to O(1) before building the Vandermonde matrix
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let a = DMatrix::from_fn(points.len(), degree + 1, |i, k| (xs[i] / scale).powi(k as i32));
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let solve = |rhs: &DVector<f64>| svd.solve(rhs, 1e-14).map_err(|e| Error::DegenerateFit(e.to_string()));
    let mut c = solve(&b)?;
    // two steps of iterative refinement
    for _ in 0..2 {
        let r = &b - &a * &c;
        c += solve(&r)?;
    }
    Ok(c.iter()
        .enumerate()
        .map(|(k, ck)| ck / scale.powi(k as i32))
        .collect())
}

/// Least-squares `value(L) = a + b / L`; returns `(a, b)`.
pub fn extrapolate_inverse_l(samples: &[(usize, f64)]) -> Result<(f64, f64)> {
    let c = extrapolate_polynomial_inverse_l(samples, 1)?;
    Ok((c[0], c[1]))
}

/// Least-squares polynomial in `1/L`; `c[0]` is the infinite-size value.
pub fn extrapolate_polynomial_inverse_l(samples: &[(usize, f64)], degree: usize) -> Result<Vec<f64>> {
    if samples.iter().any(|s| s.0 == 0) {
        return Err(Error::DegenerateFit("chain length zero".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(l, v)| (1.0 / l as f64, v)).collect();
    polynomial_fit(&pts, degree)
}

/// Least-squares polynomial in the hopping, `c_0 + c_1 J + ...`.
pub fn fit_polynomial_in_j(samples: &[(f64, f64)], degree: usize) -> Result<Vec<f64>> {
    polynomial_fit(samples, degree)
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(Error::DegenerateFit(format!("log-log fit needs positive data, got {p:?}")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    Ok(polynomial_fit(&logs, 1)?[1])
}

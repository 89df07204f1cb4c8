//! Ordinary least squares for one-parameter scaling fits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit<F> {
    pub slope: F,
    pub intercept: F,
    /// Standard error of the slope from the residuals; NaN with fewer than three points.
    pub slope_stderr: F,
}

/// Fits `y = intercept + slope * x`.
pub fn fit_line<F: Real>(xs: &[F], ys: &[F]) -> Result<LinearFit<F>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::Domain("a line fit needs at least two points".into()));
    }
    let n = F::from_usize(xs.len()).expect("length fits");
    let mean_x = xs.iter().fold(F::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(F::zero(), |a, &y| a + y) / n;
    let (sxx, sxy) = xs.iter().zip(ys).fold((F::zero(), F::zero()), |(sxx, sxy), (&x, &y)| {
        let dx = x - mean_x;
        (sxx + dx * dx, sxy + dx * (y - mean_y))
    });
    if sxx == F::zero() {
        return Err(Error::Domain("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let slope_stderr = if xs.len() > 2 {
        let sse = xs.iter().zip(ys).fold(F::zero(), |acc, (&x, &y)| {
            let r = y - (intercept + slope * x);
            acc + r * r
        });
        let dof = F::from_usize(xs.len() - 2).expect("length fits");
        (sse / dof / sxx).sqrt()
    } else {
        F::nan()
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Slope of `log2(values)` against `ns`.
pub fn log2_slope<F: Real>(ns: &[u32], values: &[F]) -> Result<LinearFit<F>> {
    if let Some(v) = values.iter().find(|v| v.is_nan() || **v <= F::zero()) {
        return Err(Error::Domain(format!("log2 of non-positive value {v:?}")));
    }
    let xs: Vec<F> = ns.iter().map(|&n| F::from_u32(n).expect("u32 fits")).collect();
    let ys: Vec<F> = values.iter().map(|v| v.log2()).collect();
    fit_line(&xs, &ys)
}

//! Ladder fits and the saturation test.

use crate::error::{Error, Result};

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("a linear fit needs at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("degenerate abscissae in linear fit"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `ln y` against `ln x`, discarding the first `drop` points
/// (the coarsest ladder levels).
pub fn loglog_slope(xs: &[f64], ys: &[f64], drop: usize) -> Result<f64> {
    if xs.len() < drop + 2 {
        return Err(Error::invalid(format!(
            "log-log fit needs at least {} points, got {}",
            drop + 2,
            xs.len()
        )));
    }
    if ys.iter().chain(xs).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive data"));
    }
    let lx: Vec<f64> = xs[drop..].iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys[drop..].iter().map(|y| y.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.0)
}

/// Relative growth of the last value over the value two levels earlier.
pub fn tail_growth(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let base = values[n - 3];
    Some((values[n - 1] - base) / base.abs())
}

/// A ladder is bounded when its last three levels show no relative growth
/// beyond `tolerance`; a decreasing tail counts as bounded.
pub fn saturates(values: &[f64], tolerance: f64) -> bool {
    let n = values.len();
    n >= 3
        && values[n - 3..].iter().all(|v| v.is_finite())
        && values[n - 2..].iter().all(|v| *v <= values[n - 3] * (1.0 + tolerance))
}

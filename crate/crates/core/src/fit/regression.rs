//! Weighted simple linear regression.

pub(crate) struct LinearFit {
    pub slope: f64,
    #[allow(dead_code)]
    pub intercept: f64,
    /// Standard error of the slope, scaled by the residual variance
    /// (weights act as relative precisions).
    pub slope_se: f64,
    /// `sqrt(Σ w·r²)`.
    pub residual_norm: f64,
}

/// Fit `y = a + b·x` minimizing `Σ w·(y - a - b·x)²`. Requires at least two
/// points with distinct `x`; with exactly two points the fit is exact and
/// the standard error is 0.
pub(crate) fn weighted_linear_fit(points: &[(f64, f64, f64)]) -> LinearFit {
    let n = points.len();
    debug_assert!(n >= 2);
    let w_sum: f64 = points.iter().map(|p| p.2).sum();
    let x_bar: f64 = points.iter().map(|p| p.2 * p.0).sum::<f64>() / w_sum;
    let y_bar: f64 = points.iter().map(|p| p.2 * p.1).sum::<f64>() / w_sum;
    let sxx: f64 = points.iter().map(|p| p.2 * (p.0 - x_bar).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| p.2 * (p.0 - x_bar) * (p.1 - y_bar))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let rss: f64 = points
        .iter()
        .map(|p| p.2 * (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let slope_se = if n > 2 {
        (rss / (n as f64 - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        slope_se,
        residual_norm: rss.max(0.0).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let points: Vec<(f64, f64, f64)> =
            (0..10).map(|i| (i as f64, 2.0 + 3.0 * i as f64, 1.0)).collect();
        let fit = weighted_linear_fit(&points);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!(fit.slope_se < 1e-12);
    }

    #[test]
    fn weights_pull_the_line() {
        // Two clusters; weighting one heavily pins the line through it.
        let points = vec![
            (0.0, 0.0, 100.0),
            (1.0, 1.0, 100.0),
            (2.0, 5.0, 0.001),
        ];
        let fit = weighted_linear_fit(&points);
        assert!((fit.slope - 1.0).abs() < 0.01, "{}", fit.slope);
    }
}

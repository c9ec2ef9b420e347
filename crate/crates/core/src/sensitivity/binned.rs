use super::{check_aligned, check_names, degenerate, SaMethod, SaReport};
use crate::runner::OutputVector;
use crate::stats::Welford;
use crate::{Error, Result};

/// `⌊√n⌋`.
pub fn default_bins(n: usize) -> usize {
    (n as f64).sqrt().floor() as usize
}

/// First-order index from equal-frequency bins of `x`: the variance of the
/// bin means of `y` over the variance of `y`. `None` when `y` is constant.
/// Needs at least `10 * bins` rows.
pub fn importance_binned(x: &[f64], y: &[f64], bins: usize) -> Result<Option<f64>> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::RowCount { expected: n, found: y.len() });
    }
    if bins == 0 || n < 10 * bins {
        return Err(Error::Size(format!("binned importance needs n >= 10 x bins, got n={n}, bins={bins}")));
    }
    let total: Welford = y.iter().copied().collect();
    let v = total.population_variance();
    if degenerate(total.mean(), v) {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mean = total.mean();
    let mut between = 0.0;
    for b in 0..bins {
        let (lo, hi) = (b * n / bins, (b + 1) * n / bins);
        let w: Welford = order[lo..hi].iter().map(|&i| y[i]).collect();
        between += (hi - lo) as f64 * (w.mean() - mean).powi(2);
    }
    Ok(Some(between / n as f64 / v))
}

/// Binned first-order estimates for every column of `x`. Works on any
/// sample, including rank-correlated ones; `bins` defaults to `⌊√n⌋`.
pub fn binned_measures(x: &[Vec<f64>], names: &[String], y: &OutputVector, bins: Option<usize>) -> Result<SaReport> {
    check_aligned(x.len(), y)?;
    let k = x.first().map_or(0, Vec::len);
    check_names(k, names)?;
    let keep: Vec<usize> = (0..x.len()).filter(|i| !y.fault_rows.contains(i)).collect();
    let yv: Vec<f64> = keep.iter().map(|&i| y.y[i]).collect();
    let bins = bins.unwrap_or_else(|| default_bins(keep.len()));
    let mut report = SaReport::new(SaMethod::Binned, &y.name, &["S_i"]);
    report.n = keep.len();
    report.excluded = y.len() - keep.len();
    for j in 0..k {
        let col: Vec<f64> = keep.iter().map(|&i| x[i][j]).collect();
        report.push_row(&names[j], vec![importance_binned(&col, &yv, bins)?]);
    }
    report.notes.push(format!("{bins} equal-frequency bins"));
    report.add_additivity();
    Ok(report)
}

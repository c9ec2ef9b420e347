use super::{check_aligned, check_names, degenerate, SaMethod, SaReport};
use crate::design::{saltelli_design, DesignMeta, SampleMatrix};
use crate::distributions::FactorSpace;
use crate::models::ModelDef;
use crate::runner::{evaluate_all, OutputVector};
use crate::stats::Welford;
use crate::{Error, Result};

/// First-order and total Sobol indices of the model's first output from a
/// two-matrix design with `base_n (k + 2)` evaluations. The LP-tau sequence
/// is skipped by `seed` points, so different seeds give disjoint designs.
pub fn sobol_indices(model: &ModelDef, space: &FactorSpace, base_n: usize, seed: u64) -> Result<SaReport> {
    if let Some(c) = &space.correlation_target {
        let identity = c.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &v)| v == f64::from(i == j)));
        if !identity {
            return Err(Error::Unsupported(
                "Sobol indices assume independent factors; use the binned estimator for correlated inputs".into(),
            ));
        }
    }
    let sample = saltelli_design(space.len(), base_n, seed)?.mapped(space)?;
    let eval = evaluate_all(model, &sample, 1)?;
    let y = eval.outputs.into_iter().next().ok_or_else(|| Error::Config("model has no outputs".into()))?;
    sobol_from_outputs(&sample, &space.names(), &y)
}

/// Sobol indices from outputs already evaluated on a Sobol design:
/// `S_i = mean(f_B (f_ABi - f_A)) / V` and `S_Ti = mean((f_A - f_ABi)²) / 2V`.
/// Each index uses the base rows whose `A`, `B` and `AB_i` evaluations all
/// succeeded.
pub fn sobol_from_outputs(sample: &SampleMatrix, names: &[String], y: &OutputVector) -> Result<SaReport> {
    let DesignMeta::Sobol { base_n, .. } = sample.meta else {
        return Err(Error::DesignMismatch(format!(
            "Sobol indices need a sobol design, got `{}`",
            sample.meta.method()
        )));
    };
    check_aligned(sample.rows(), y)?;
    let k = sample.cols();
    check_names(k, names)?;
    if sample.rows() != base_n * (k + 2) {
        return Err(Error::DesignMismatch("Sobol design size is not N(k + 2)".into()));
    }
    let ok = |r: usize| !y.fault_rows.contains(&r);
    let fa = |r: usize| y.y[r];
    let fb = |r: usize| y.y[base_n + r];
    let fab = |i: usize, r: usize| y.y[(2 + i) * base_n + r];

    let total: Welford = (0..base_n)
        .flat_map(|r| [r, base_n + r])
        .filter(|&r| ok(r))
        .map(|r| y.y[r])
        .collect();
    let v = total.population_variance();

    let mut report = SaReport::new(SaMethod::Sobol, &y.name, &["S_i", "S_Ti"]);
    report.n = y.n_effective();
    report.excluded = y.fault_rows.len();
    report.tolerance = Some(0.05);
    report.notes.push("first order: Saltelli form; total: Jansen form".into());
    let flat = total.count() < 2 || degenerate(total.mean(), v);
    if flat {
        report.notes.push("output variance is zero or undefined; indices undefined".into());
    }
    for i in 0..k {
        let rows: Vec<usize> = (0..base_n)
            .filter(|&r| ok(r) && ok(base_n + r) && ok((2 + i) * base_n + r))
            .collect();
        if flat || rows.is_empty() {
            report.push_row(&names[i], vec![None, None]);
            continue;
        }
        let m = rows.len() as f64;
        let first: f64 = rows.iter().map(|&r| fb(r) * (fab(i, r) - fa(r))).sum::<f64>() / m;
        let tot: f64 = rows.iter().map(|&r| (fa(r) - fab(i, r)).powi(2)).sum::<f64>() / m / 2.0;
        report.push_row(&names[i], vec![Some(first / v), Some(tot / v)]);
    }
    report.add_additivity();
    Ok(report)
}

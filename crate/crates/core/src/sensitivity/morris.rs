use super::{check_aligned, check_names, SaMethod, SaReport};
use crate::design::{DesignMeta, SampleMatrix};
use crate::runner::OutputVector;
use crate::stats::Welford;
use crate::{Error, Result};

/// Morris screening measures μ, μ* and σ of the elementary effects
/// `EE = (y(x ± Δe_i) - y(x)) / ±Δ` in unit coordinates.
///
/// A faulted row voids only the elementary effects that use it; `r_valid`
/// counts the effects kept per factor.
pub fn morris_measures(sample: &SampleMatrix, names: &[String], y: &OutputVector) -> Result<SaReport> {
    let DesignMeta::Morris { delta, trajectories, perturbed, .. } = &sample.meta else {
        return Err(Error::DesignMismatch(format!(
            "Morris measures need a morris design, got `{}`",
            sample.meta.method()
        )));
    };
    check_aligned(sample.rows(), y)?;
    let k = sample.cols();
    check_names(k, names)?;
    if sample.rows() != trajectories * (k + 1) || perturbed.len() != trajectories * k {
        return Err(Error::DesignMismatch("Morris bookkeeping does not match the sample size".into()));
    }

    let mut effects = vec![Welford::new(); k];
    let mut absolute = vec![Welford::new(); k];
    let mut voided = 0usize;
    for t in 0..*trajectories {
        let base = t * (k + 1);
        for s in 0..k {
            let (prev, next) = (base + s, base + s + 1);
            let j = perturbed[t * k + s];
            if y.fault_rows.contains(&prev) || y.fault_rows.contains(&next) {
                voided += 1;
                continue;
            }
            let step = if sample.unit[next][j] > sample.unit[prev][j] { *delta } else { -delta };
            let ee = (y.y[next] - y.y[prev]) / step;
            effects[j].push(ee);
            absolute[j].push(ee.abs());
        }
    }

    let mut report = SaReport::new(SaMethod::Morris, &y.name, &["mu", "mu_star", "sigma", "r_valid"]);
    report.n = y.n_effective();
    report.excluded = y.fault_rows.len();
    for j in 0..k {
        let r = effects[j].count();
        let defined = |v: f64| if r > 0 { Some(v) } else { None };
        let sigma = if r > 1 { Some(effects[j].variance().sqrt()) } else { None };
        report.push_row(
            &names[j],
            vec![defined(effects[j].mean()), defined(absolute[j].mean()), sigma, Some(r as f64)],
        );
    }
    if voided > 0 {
        report.notes.push(format!("{voided} elementary effects voided by faulted rows"));
    }
    report.notes.push("mu_star is the mean absolute elementary effect".into());
    Ok(report)
}

use super::{check_aligned, check_names, SaMethod, SaReport};
use crate::runner::OutputVector;
use crate::stats::{average_ranks, mean, pearson};
use crate::{Error, Result};

/// Smallest admissible diagonal of `R` after unit-norm column scaling.
const COLLINEARITY_TOL: f64 = 1e-10;

/// SRC, PCC and PEAR on the raw values and SRRC, PRCC and SPEA on average
/// ranks, with `r2` and `rank_r2`. Rows where `y` faulted are dropped.
pub fn regression_measures(x: &[Vec<f64>], names: &[String], y: &OutputVector) -> Result<SaReport> {
    check_aligned(x.len(), y)?;
    let k = x.first().map_or(0, Vec::len);
    check_names(k, names)?;
    let keep: Vec<usize> = (0..x.len()).filter(|i| !y.fault_rows.contains(i)).collect();
    let n = keep.len();
    if k == 0 || n <= k + 1 {
        return Err(Error::Size(format!("regression needs n > k + 1 valid rows, got n={n}, k={k}")));
    }
    let cols: Vec<Vec<f64>> = (0..k).map(|j| keep.iter().map(|&i| x[i][j]).collect()).collect();
    let yv: Vec<f64> = keep.iter().map(|&i| y.y[i]).collect();

    let mut report = SaReport::new(SaMethod::Regression, &y.name, &["SRC", "PCC", "PEAR", "SRRC", "PRCC", "SPEA"]);
    report.n = n;
    report.excluded = y.len() - n;

    let raw = fit(&cols, &yv, names)?;
    let rcols: Vec<Vec<f64>> = cols.iter().map(|c| average_ranks(c)).collect();
    let ry = average_ranks(&yv);
    let ranked = fit(&rcols, &ry, names)?;
    for j in 0..k {
        report.push_row(
            &names[j],
            vec![raw.src[j], raw.pcc[j], raw.corr[j], ranked.src[j], ranked.pcc[j], ranked.corr[j]],
        );
    }
    report.goodness.push(("r2".into(), raw.r2));
    report.goodness.push(("rank_r2".into(), ranked.r2));
    if raw.r2.is_none() {
        report.notes.push("output has zero variance; all measures undefined".into());
    }
    Ok(report)
}

struct Fit {
    src: Vec<Option<f64>>,
    pcc: Vec<Option<f64>>,
    corr: Vec<Option<f64>>,
    r2: Option<f64>,
}

/// Least squares with intercept by modified Gram–Schmidt QR on centered,
/// unit-norm columns.
fn fit(cols: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<Fit> {
    let n = y.len();
    let k = cols.len();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = vec![vec![0.0; k]; k];
    for (j, c) in cols.iter().enumerate() {
        let m = mean(c);
        let mut v: Vec<f64> = c.iter().map(|x| x - m).collect();
        let norm = dot(&v, &v).sqrt();
        if !(norm > 0.0) || norm <= 1e-14 * c.iter().fold(0.0f64, |a, x| a.max(x.abs())) * (n as f64).sqrt() {
            return Err(Error::Collinear { column: names[j].clone(), depends_on: vec!["(intercept)".into()] });
        }
        v.iter_mut().for_each(|x| *x /= norm);
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let p = dot(qi, &v);
                r[i][j] += p;
                v.iter_mut().zip(qi).for_each(|(a, b)| *a -= p * b);
            }
        }
        let d = dot(&v, &v).sqrt();
        if d < COLLINEARITY_TOL {
            // express column j through the earlier ones: R[..j,..j] c = R[..j, j]
            let rhs: Vec<f64> = (0..j).map(|i| r[i][j]).collect();
            let coef = back_substitute(&r, &rhs);
            let depends_on = coef
                .iter()
                .enumerate()
                .filter(|(_, c)| c.abs() > 1e-8)
                .map(|(i, _)| names[i].clone())
                .collect();
            return Err(Error::Collinear { column: names[j].clone(), depends_on });
        }
        r[j][j] = d;
        v.iter_mut().for_each(|x| *x /= d);
        q.push(v);
    }

    let my = mean(y);
    let yc: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sst = dot(&yc, &yc);
    let corr: Vec<Option<f64>> = cols
        .iter()
        .map(|c| Some(pearson(c, y)).filter(|v| v.is_finite()))
        .collect();
    if super::degenerate(my, sst / n as f64) {
        return Ok(Fit { src: vec![None; k], pcc: vec![None; k], corr: vec![None; k], r2: None });
    }
    let qty: Vec<f64> = q.iter().map(|qi| dot(qi, &yc)).collect();
    // coefficients on the unit-norm columns
    let beta = back_substitute(&r, &qty);
    let ssr: f64 = qty.iter().map(|v| v * v).sum();
    let sse = (sst - ssr).max(0.0);
    let r2 = (ssr / sst).min(1.0);

    let ynorm = sst.sqrt();
    // SRC_j = b_j sd(x_j)/sd(y); with b_j = beta_j / ||x_j - mean||
    let src = beta.iter().map(|b| Some(b / ynorm)).collect();

    let df = (n - k - 1) as f64;
    let rinv = invert_upper(&r);
    let pcc = (0..k)
        .map(|j| {
            let b = beta[j];
            if sse == 0.0 {
                return Some(if b == 0.0 { 0.0 } else { b.signum() });
            }
            let djj: f64 = rinv[j].iter().map(|v| v * v).sum();
            let t = b / (sse / df * djj).sqrt();
            Some(t / (t * t + df).sqrt())
        })
        .collect();
    Ok(Fit { src, pcc, corr, r2: Some(r2) })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `R[..m, ..m] x = rhs` for `m = rhs.len()`.
fn back_substitute(r: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|l| r[i][l] * x[l]).sum();
        x[i] = (rhs[i] - s) / r[i][i];
    }
    x
}

fn invert_upper(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = r.len();
    let mut inv = vec![vec![0.0; k]; k];
    for c in 0..k {
        let mut e = vec![0.0; k];
        e[c] = 1.0;
        let x = back_substitute(r, &e);
        for i in 0..k {
            inv[i][c] = x[i];
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::random_design;

    fn names(k: usize) -> Vec<String> {
        (1..=k).map(|j| format!("x{j}")).collect()
    }

    fn linear(x: &[Vec<f64>], c: &[f64]) -> OutputVector {
        OutputVector::new("Y", x.iter().map(|r| r.iter().zip(c).map(|(a, b)| a * b).sum()).collect())
    }

    #[test]
    fn linear_src_matches_standardization() {
        let x = random_design(2, 10_000, 3).unwrap().unit;
        let rep = regression_measures(&x, &names(2), &linear(&x, &[2.0, 1.0])).unwrap();
        assert!((rep.get("x1", "SRC").unwrap() - 2.0 / 5f64.sqrt()).abs() < 0.02);
        assert!((rep.get("x2", "SRC").unwrap() - 1.0 / 5f64.sqrt()).abs() < 0.02);
        assert!(rep.goodness("r2").unwrap() > 0.999_999);
        assert!(rep.get("x1", "PCC").unwrap() > 0.999);
    }

    #[test]
    fn pcc_equals_residual_correlation() {
        // independent oracle: correlate residuals of x1 and y after regressing both on x2
        let x = random_design(2, 500, 11).unwrap().unit;
        let y: Vec<f64> = x.iter().enumerate().map(|(i, r)| r[0] + 0.5 * r[1] + ((i * 7919) % 13) as f64 / 13.0).collect();
        let rep = regression_measures(&x, &names(2), &OutputVector::new("Y", y.clone())).unwrap();
        let x1: Vec<f64> = x.iter().map(|r| r[0]).collect();
        let x2: Vec<f64> = x.iter().map(|r| r[1]).collect();
        let resid = |v: &[f64]| -> Vec<f64> {
            let (mx, mv) = (mean(&x2), mean(v));
            let sxy: f64 = x2.iter().zip(v).map(|(a, b)| (a - mx) * (b - mv)).sum();
            let sxx: f64 = x2.iter().map(|a| (a - mx) * (a - mx)).sum();
            let b = sxy / sxx;
            v.iter().zip(&x2).map(|(vi, xi)| vi - mv - b * (xi - mx)).collect()
        };
        let oracle = pearson(&resid(&x1), &resid(&y));
        assert!((rep.get("x1", "PCC").unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn monotone_output_has_unit_spearman() {
        let x = random_design(2, 1000, 5).unwrap().unit;
        let y = OutputVector::new("Y", x.iter().map(|r| r[0].powi(3)).collect());
        let rep = regression_measures(&x, &names(2), &y).unwrap();
        assert_eq!(rep.get("x1", "SPEA"), Some(1.0));
        assert!(rep.get("x1", "PEAR").unwrap() < 1.0);
    }

    #[test]
    fn collinear_columns_are_named() {
        let x: Vec<Vec<f64>> = (0..50).map(|i| {
            let a = (i as f64 * 0.37).sin();
            let b = (i as f64 * 1.3).cos();
            vec![a, b, 2.0 * a - b]
        }).collect();
        match regression_measures(&x, &names(3), &linear(&x, &[1.0, 1.0, 1.0])) {
            Err(Error::Collinear { column, depends_on }) => {
                assert_eq!(column, "x3");
                assert_eq!(depends_on, vec!["x1".to_string(), "x2".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 4.0]).collect();
        assert!(matches!(
            regression_measures(&x, &names(2), &linear(&x, &[1.0, 0.0])),
            Err(Error::Collinear { .. })
        ));
    }

    #[test]
    fn faults_and_degenerate_output() {
        let x = random_design(2, 100, 1).unwrap().unit;
        let mut y = linear(&x, &[1.0, 1.0]);
        y.y[3] = f64::NAN;
        let y = OutputVector::new("Y", y.y);
        let rep = regression_measures(&x, &names(2), &y).unwrap();
        assert_eq!((rep.n, rep.excluded), (99, 1));
        let c = OutputVector::new("Y", vec![1.0; 100]);
        let rep = regression_measures(&x, &names(2), &c).unwrap();
        assert_eq!(rep.get("x1", "SRC"), None);
        assert_eq!(rep.goodness("r2"), None);
        assert!(matches!(regression_measures(&x[..3], &names(2), &OutputVector::new("Y", vec![1.0, 2.0, 3.0])), Err(Error::Size(_))));
    }
}

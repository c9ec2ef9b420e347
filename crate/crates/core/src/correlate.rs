//! Rank-correlation induction (Iman–Conover) and measured Spearman matrices.

use std::f64::consts::PI;

use rand::seq::SliceRandom;

use crate::design::{rng_from_seed, Rows};
use crate::distributions::std_normal_quantile;
use crate::stats::{average_ranks, pearson};
use crate::{Error, Result};

/// Reorders each column of `unit` so that the rank correlation of the result
/// approaches `target` (a Spearman matrix). Each output column is a
/// permutation of the matching input column.
///
/// The Spearman target is converted to the Pearson correlation of the normal
/// scores (`2 sin(πρ/6)`) before shaping, so the achieved rank correlation
/// tracks the target rather than the score correlation.
pub fn iman_conover(unit: &[Vec<f64>], target: &[Vec<f64>], seed: u64) -> Result<Rows> {
    let n = unit.len();
    let k = target.len();
    if target.iter().any(|r| r.len() != k) {
        return Err(Error::Size("correlation target must be square".into()));
    }
    if unit.iter().any(|r| r.len() != k) {
        return Err(Error::Size(format!("sample has a row that is not {k} columns wide")));
    }
    if n <= k {
        return Err(Error::Size(format!("Iman-Conover needs more rows than columns (n={n}, k={k})")));
    }
    for i in 0..k {
        if target[i][i] != 1.0 {
            return Err(Error::Parameter(format!("target diagonal ({},{}) must be 1", i + 1, i + 1)));
        }
        for j in 0..k {
            if (target[i][j] - target[j][i]).abs() > 1e-12 || !(-1.0..=1.0).contains(&target[i][j]) {
                return Err(Error::Parameter(format!(
                    "target must be symmetric with entries in [-1, 1] (entry {},{})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let pearson_target: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 1.0 } else { 2.0 * (PI * target[i][j] / 6.0).sin() })
                .collect()
        })
        .collect();
    let p = cholesky(&pearson_target).map_err(|order| Error::NotPositiveDefinite { order })?;

    // van der Waerden scores, independently shuffled per column
    let scores: Vec<f64> = (1..=n).map(|i| std_normal_quantile(i as f64 / (n + 1) as f64)).collect();
    let mut rng = rng_from_seed(seed);
    let score_cols: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let mut c = scores.clone();
            c.shuffle(&mut rng);
            c
        })
        .collect();
    let score_corr: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { pearson(&score_cols[i], &score_cols[j]) }).collect())
        .collect();
    let q = cholesky(&score_corr).map_err(|_| {
        Error::Size(format!("score matrix is degenerate for n={n}, k={k}; use more rows"))
    })?;

    // shaping matrix M = Q^{-T} P^T, so that cov(S M) = P P^T
    let q_inv = invert_lower(&q);
    let mut m = vec![vec![0.0; k]; k];
    for (r, m_row) in m.iter_mut().enumerate() {
        for (c, cell) in m_row.iter_mut().enumerate() {
            // (Q^{-T})[r][l] = q_inv[l][r], (P^T)[l][c] = p[c][l]
            *cell = (0..k).map(|l| q_inv[l][r] * p[c][l]).sum();
        }
    }

    let mut out = vec![vec![0.0; k]; n];
    for c in 0..k {
        let shaped: Vec<f64> = (0..n).map(|i| (0..k).map(|l| score_cols[l][i] * m[l][c]).sum()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| shaped[a].total_cmp(&shaped[b]).then(a.cmp(&b)));
        let mut sorted: Vec<f64> = unit.iter().map(|r| r[c]).collect();
        sorted.sort_by(f64::total_cmp);
        for (rank, &row) in order.iter().enumerate() {
            out[row][c] = sorted[rank];
        }
    }
    Ok(out)
}

/// Spearman correlation matrix (average ranks for ties). Pairs involving a
/// constant column report 0.
pub fn measured_spearman(matrix: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::Size(format!("Spearman correlation needs n >= 2, got {n}")));
    }
    let k = matrix[0].len();
    let ranks: Vec<Vec<f64>> =
        (0..k).map(|j| average_ranks(&matrix.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        out[i][i] = 1.0;
        for j in i + 1..k {
            let r = pearson(&ranks[i], &ranks[j]);
            let r = if r.is_nan() { 0.0 } else { r };
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}

/// Lower Cholesky factor; on failure returns the order of the first leading
/// minor that is not positive.
fn cholesky(a: &[Vec<f64>]) -> std::result::Result<Vec<Vec<f64>>, usize> {
    let k = a.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (0..j).map(|p| l[i][p] * l[j][p]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 1e-12 {
                    return Err(i + 1);
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

fn invert_lower(l: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = l.len();
    let mut inv = vec![vec![0.0; k]; k];
    for col in 0..k {
        for i in col..k {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (col..i).map(|p| l[i][p] * inv[p][col]).sum();
            inv[i][col] = (rhs - s) / l[i][i];
        }
    }
    inv
}

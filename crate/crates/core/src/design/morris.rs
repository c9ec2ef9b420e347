use rand::seq::SliceRandom;
use rand::Rng;

use super::{check_size, rng_from_seed, DesignMeta, SampleMatrix};
use crate::{Error, Result};

/// One-at-a-time Morris trajectories on a `levels`-level grid.
///
/// Each trajectory has `k + 1` rows. The base point is drawn from the sub-grid
/// where a step of `Δ = p / (2(p-1))` stays inside `[0, 1]`; each factor then
/// moves exactly once, up or down by `Δ`, in random order.
pub fn morris_design(k: usize, trajectories: usize, levels: usize, seed: u64) -> Result<SampleMatrix> {
    check_size(k, trajectories)?;
    if levels < 2 || levels % 2 != 0 {
        return Err(Error::Parameter(format!("Morris levels must be even and >= 2, got {levels}")));
    }
    let step = levels / 2; // Δ in grid units
    let denom = (levels - 1) as f64;
    let delta = step as f64 / denom;
    let mut rng = rng_from_seed(seed);

    let n = trajectories * (k + 1);
    let mut unit = Vec::with_capacity(n);
    let mut trajectory = Vec::with_capacity(n);
    let mut perturbed = Vec::with_capacity(trajectories * k);
    let mut order: Vec<usize> = (0..k).collect();
    for t in 0..trajectories {
        let mut idx: Vec<usize> = Vec::with_capacity(k);
        let mut up: Vec<bool> = Vec::with_capacity(k);
        for _ in 0..k {
            let base = rng.random_range(0..levels - step);
            let goes_up = rng.random_bool(0.5);
            idx.push(if goes_up { base } else { base + step });
            up.push(goes_up);
        }
        order.shuffle(&mut rng);
        unit.push(grid_row(&idx, denom));
        trajectory.push(t);
        for &j in &order {
            if up[j] {
                idx[j] += step;
            } else {
                idx[j] -= step;
            }
            unit.push(grid_row(&idx, denom));
            trajectory.push(t);
            perturbed.push(j);
        }
    }
    let meta = DesignMeta::Morris { levels, delta, trajectories, trajectory, perturbed };
    Ok(SampleMatrix::new(unit, meta, seed))
}

fn grid_row(idx: &[usize], denom: f64) -> Vec<f64> {
    idx.iter().map(|&i| i as f64 / denom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_counts_and_delta() {
        let s = morris_design(3, 4, 4, 1).unwrap();
        assert_eq!(s.rows(), 16);
        match s.meta {
            DesignMeta::Morris { delta, .. } => assert!((delta - 2.0 / 3.0).abs() < 1e-15),
            _ => unreachable!(),
        }
        assert_eq!(morris_design(7, 7, 4, 1).unwrap().rows(), 56);
    }

    #[test]
    fn odd_levels_rejected() {
        assert!(matches!(morris_design(3, 4, 5, 1), Err(Error::Parameter(_))));
        assert!(matches!(morris_design(3, 4, 0, 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn one_at_a_time_steps() {
        for seed in 0..20 {
            let (k, r, p) = (5, 6, 6);
            let s = morris_design(k, r, p, seed).unwrap();
            let DesignMeta::Morris { delta, perturbed, .. } = &s.meta else { unreachable!() };
            for t in 0..r {
                let rows = &s.unit[t * (k + 1)..(t + 1) * (k + 1)];
                let mut moved = vec![0; k];
                for step in 0..k {
                    let changed: Vec<usize> =
                        (0..k).filter(|&j| rows[step][j] != rows[step + 1][j]).collect();
                    assert_eq!(changed.len(), 1);
                    let j = changed[0];
                    assert_eq!(j, perturbed[t * k + step]);
                    assert!(((rows[step + 1][j] - rows[step][j]).abs() - delta).abs() < 1e-12);
                    moved[j] += 1;
                }
                assert!(moved.iter().all(|&m| m == 1));
                assert!(rows.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }
}

use rand::seq::SliceRandom;

use super::{check_size, rng_from_seed, unit_draw, DesignMeta, SampleMatrix};
use crate::{Error, Result};

/// Latin hypercube design, optionally as `replicates` independent blocks.
///
/// Within each block of `m = n / replicates` rows every column has exactly one
/// point in each stratum `[s/m, (s+1)/m)`, placed uniformly inside the stratum.
pub fn lhs_design(k: usize, n: usize, seed: u64, replicates: usize) -> Result<SampleMatrix> {
    check_size(k, n)?;
    if replicates == 0 {
        return Err(Error::Parameter("replicates must be >= 1".into()));
    }
    if n % replicates != 0 {
        return Err(Error::Parameter(format!(
            "replicate count {replicates} does not divide sample size {n}"
        )));
    }
    let m = n / replicates;
    let mut rng = rng_from_seed(seed);
    let mut unit = vec![vec![0.0; k]; n];
    let mut labels = Vec::with_capacity(n);
    let mut perm: Vec<usize> = (0..m).collect();
    for block in 0..replicates {
        let base = block * m;
        for j in 0..k {
            perm.shuffle(&mut rng);
            for (i, &stratum) in perm.iter().enumerate() {
                unit[base + i][j] = in_stratum(stratum, m, unit_draw(&mut rng));
            }
        }
        labels.extend(std::iter::repeat(block).take(m));
    }
    let meta = DesignMeta::Lhs { strata: m, replicates, replicate_labels: labels };
    Ok(SampleMatrix::new(unit, meta, seed))
}

/// `(stratum + u) / m`, nudged so that `floor(v * m) == stratum` holds exactly.
fn in_stratum(stratum: usize, m: usize, u: f64) -> f64 {
    let mf = m as f64;
    let mut v = (stratum as f64 + u) / mf;
    while v > 0.0 && (v * mf).floor() as usize > stratum {
        v = v.next_down();
    }
    while ((v * mf).floor() as usize) < stratum {
        v = v.next_up();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occupancy_is_flat(s: &SampleMatrix, from: usize, m: usize) -> bool {
        (0..s.cols()).all(|j| {
            let mut hits = vec![0usize; m];
            for row in &s.unit[from..from + m] {
                let v = row[j];
                assert!((0.0..1.0).contains(&v));
                hits[(v * m as f64).floor() as usize] += 1;
            }
            hits.iter().all(|&h| h == 1)
        })
    }

    #[test]
    fn one_point_per_stratum() {
        let s = lhs_design(1, 4, 3, 1).unwrap();
        assert!(occupancy_is_flat(&s, 0, 4));
        let s = lhs_design(5, 100, 9, 1).unwrap();
        assert!(occupancy_is_flat(&s, 0, 100));
    }

    #[test]
    fn replicated_blocks() {
        let s = lhs_design(2, 10, 1, 2).unwrap();
        assert!(occupancy_is_flat(&s, 0, 5));
        assert!(occupancy_is_flat(&s, 5, 5));
        match &s.meta {
            DesignMeta::Lhs { strata, replicates, replicate_labels } => {
                assert_eq!((*strata, *replicates), (5, 2));
                assert_eq!(replicate_labels, &vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn divisibility_error() {
        assert!(matches!(lhs_design(2, 10, 1, 3), Err(Error::Parameter(_))));
    }

    #[test]
    fn stratum_nudge_at_top_edge() {
        let u = 1.0f64.next_down();
        for &(s, m) in &[(9999usize, 10000usize), (2, 3), (0, 1)] {
            let v = in_stratum(s, m, u);
            assert_eq!((v * m as f64).floor() as usize, s);
            assert!(v < 1.0);
        }
    }
}

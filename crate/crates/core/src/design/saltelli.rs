use super::lptau::LpTau;
use super::{check_size, DesignMeta, SampleMatrix};
use crate::Result;

/// Two-matrix design for Sobol indices: rows `A` (N), `B` (N), then `AB_i`
/// (N each, `A` with column `i` taken from `B`). `A|B` are the first `N`
/// points of a `2k`-dimensional LP-tau sequence after `skip` points.
/// Total rows: `N (k + 2)`.
pub fn saltelli_design(k: usize, base_n: usize, skip: u64) -> Result<SampleMatrix> {
    check_size(k, base_n)?;
    let gen = LpTau::new(2 * k)?;
    let base = gen.points(base_n, skip);
    let a: Vec<Vec<f64>> = base.iter().map(|r| r[..k].to_vec()).collect();
    let b: Vec<Vec<f64>> = base.iter().map(|r| r[k..].to_vec()).collect();
    let mut unit = Vec::with_capacity(base_n * (k + 2));
    unit.extend(a.iter().cloned());
    unit.extend(b.iter().cloned());
    for i in 0..k {
        for (ra, rb) in a.iter().zip(&b) {
            let mut row = ra.clone();
            row[i] = rb[i];
            unit.push(row);
        }
    }
    Ok(SampleMatrix::new(unit, DesignMeta::Sobol { base_n, skip }, skip))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let s = saltelli_design(3, 8, 0).unwrap();
        assert_eq!(s.rows(), 8 * 5);
        for i in 0..3 {
            for r in 0..8 {
                let ab = &s.unit[(2 + i) * 8 + r];
                for j in 0..3 {
                    let src = if i == j { &s.unit[8 + r] } else { &s.unit[r] };
                    assert_eq!(ab[j], src[j]);
                }
            }
        }
    }
}

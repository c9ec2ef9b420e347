use super::sobol_table::DIRECTION_NUMBERS;
use super::{check_size, DesignMeta, SampleMatrix};
use crate::{Error, Result};

const BITS: usize = 32;

/// Highest dimension covered by the embedded direction-number table.
pub const MAX_LPTAU_DIMENSION: usize = 64;

/// Sobol (LP-tau) sequence generator with 32-bit direction numbers.
#[derive(Debug, Clone)]
pub struct LpTau {
    directions: Vec<[u32; BITS]>,
}

impl LpTau {
    pub fn new(dims: usize) -> Result<Self> {
        if dims > MAX_LPTAU_DIMENSION {
            return Err(Error::Dimension { requested: dims, supported: MAX_LPTAU_DIMENSION });
        }
        let mut directions = Vec::with_capacity(dims);
        for d in 0..dims {
            let mut v = [0u32; BITS];
            if d == 0 {
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi = 1 << (BITS - 1 - i);
                }
            } else {
                let (s, a, m) = DIRECTION_NUMBERS[d - 1];
                let s = s as usize;
                for i in 0..s.min(BITS) {
                    v[i] = m[i] << (BITS - 1 - i);
                }
                for i in s..BITS {
                    let mut x = v[i - s] ^ (v[i - s] >> s);
                    for k in 1..s {
                        if (a >> (s - 1 - k)) & 1 == 1 {
                            x ^= v[i - k];
                        }
                    }
                    v[i] = x;
                }
            }
            directions.push(v);
        }
        Ok(Self { directions })
    }

    pub fn dims(&self) -> usize {
        self.directions.len()
    }

    /// Point with sequence index `index` (index 0 is the origin), Gray-code order.
    pub fn point(&self, index: u64) -> Vec<f64> {
        let gray = index ^ (index >> 1);
        self.directions
            .iter()
            .map(|v| {
                let mut x = 0u32;
                let mut g = gray;
                let mut bit = 0;
                while g != 0 && bit < BITS {
                    if g & 1 == 1 {
                        x ^= v[bit];
                    }
                    g >>= 1;
                    bit += 1;
                }
                x as f64 / (1u64 << BITS) as f64
            })
            .collect()
    }

    /// `n` consecutive points starting at sequence index `1 + skip`.
    pub fn points(&self, n: usize, skip: u64) -> Vec<Vec<f64>> {
        (0..n as u64).map(|i| self.point(1 + skip + i)).collect()
    }
}

/// First `n` LP-tau points (after the origin and `skip` further points).
pub fn lptau_design(k: usize, n: usize, skip: u64) -> Result<SampleMatrix> {
    check_size(k, n)?;
    let gen = LpTau::new(k)?;
    Ok(SampleMatrix::new(gen.points(n, skip), DesignMeta::Plain { method: "lptau".into() }, skip))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference points from an independent Joe–Kuo implementation
    // (unscrambled, Gray-code order), columns 0, 1, 2, 9, 31, 50, 63.
    const REFERENCE: &[(u64, [f64; 7])] = &[
        (1, [0.5; 7]),
        (2, [0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.75]),
        (3, [0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.25]),
        (7, [0.125, 0.625, 0.375, 0.875, 0.875, 0.875, 0.375]),
        (100, [0.4140625, 0.2578125, 0.7734375, 0.6953125, 0.4140625, 0.8828125, 0.6484375]),
        (
            1000,
            [0.2197265625, 0.0966796875, 0.5185546875, 0.0693359375, 0.1455078125, 0.3525390625, 0.4462890625],
        ),
        (
            1024,
            [
                0.00146484375,
                0.37646484375,
                0.44775390625,
                0.67138671875,
                0.96630859375,
                0.50537109375,
                0.96630859375,
            ],
        ),
    ];

    #[test]
    fn matches_reference_points() {
        let gen = LpTau::new(64).unwrap();
        for (index, expected) in REFERENCE {
            let p = gen.point(*index);
            let got = [p[0], p[1], p[2], p[9], p[31], p[50], p[63]];
            assert_eq!(&got, expected, "index {index}");
        }
    }

    #[test]
    fn first_point_and_balance() {
        let s = lptau_design(1, 1, 0).unwrap();
        assert_eq!(s.unit[0][0], 0.5);
        // sequence indices 2 and 3 form an aligned pair
        let s = lptau_design(1, 2, 1).unwrap();
        assert!((s.unit[0][0] < 0.5) != (s.unit[1][0] < 0.5));
    }

    #[test]
    fn integrates_product() {
        let s = lptau_design(2, 1024, 0).unwrap();
        let est: f64 = s.unit.iter().map(|r| r[0] * r[1]).sum::<f64>() / 1024.0;
        assert!((est - 0.25).abs() < 1e-3, "{est}");
    }

    #[test]
    fn dimension_limit() {
        assert!(matches!(
            lptau_design(MAX_LPTAU_DIMENSION + 1, 4, 0),
            Err(Error::Dimension { requested: 65, supported: 64 })
        ));
    }
}

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_size, rng_from_seed, unit_draw, DesignMeta, SampleMatrix};
use crate::{Error, Result};

pub const DEFAULT_INTERFERENCE_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FastMode {
    /// One block; first-order indices only.
    Classic,
    /// One block per factor (or group); first-order and total indices.
    Extended,
}

/// A set of factors analyzed as one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub name: String,
    pub members: Vec<usize>,
}

impl Group {
    pub fn singletons(names: &[String]) -> Vec<Group> {
        names
            .iter()
            .enumerate()
            .map(|(j, n)| Group { name: n.clone(), members: vec![j] })
            .collect()
    }
}

/// Extended-FAST frequencies for a block of `block_size` points: the focal
/// frequency `ω_max = ⌊(N-1)/(2M)⌋` and `count` complement frequencies in
/// `1..=m`, `m = max(1, ⌊ω_max/(2M)⌋)`: spread evenly when `count <= m`,
/// otherwise cycled.
pub fn extended_frequencies(count: usize, block_size: usize, order: usize) -> Result<(usize, Vec<usize>)> {
    if order == 0 {
        return Err(Error::Parameter("interference order must be >= 1".into()));
    }
    if block_size % 2 == 0 {
        return Err(Error::Size(format!("FAST block size must be odd, got {block_size}")));
    }
    let omega_max = (block_size - 1) / (2 * order);
    if omega_max < 2 * order {
        return Err(Error::Size(format!(
            "FAST block size {block_size} too small for interference order {order}: need at least {}",
            2 * order * 2 * order + 1
        )));
    }
    let top = (omega_max / (2 * order)).max(1);
    let complement = if count > 1 && count <= top {
        // spread evenly over 1..=top so the complement path fills its subspace
        (0..count).map(|i| 1 + i * (top - 1) / (count - 1)).collect()
    } else {
        (0..count).map(|i| i % top + 1).collect()
    };
    Ok((omega_max, complement))
}

/// Smallest integers, chosen greedily, that are free of interference up to
/// order `order` (see [`is_interference_free`]).
pub fn classic_frequencies(count: usize, order: usize) -> Vec<usize> {
    let budget = order + 1;
    let mut freqs: Vec<usize> = Vec::with_capacity(count);
    let mut reach = Reachable::new(budget);
    let mut candidate = 1usize;
    while freqs.len() < count {
        if !reach.collides(candidate as i64) {
            freqs.push(candidate);
            reach.add(candidate as i64);
        }
        candidate += 1;
    }
    freqs
}

/// True when no nonzero integer combination `Σ a_i ω_i` with
/// `Σ |a_i| <= order + 1` vanishes.
pub fn is_interference_free(freqs: &[usize], order: usize) -> bool {
    let mut reach = Reachable::new(order + 1);
    for &w in freqs {
        if w == 0 || reach.collides(w as i64) {
            return false;
        }
        reach.add(w as i64);
    }
    true
}

/// Minimal L1 cost of reaching each integer sum with the frequencies added so far.
struct Reachable {
    budget: usize,
    cost: HashMap<i64, usize>,
}

impl Reachable {
    fn new(budget: usize) -> Self {
        Self { budget, cost: HashMap::from([(0, 0)]) }
    }

    fn collides(&self, w: i64) -> bool {
        (1..=self.budget as i64).any(|a| {
            let rest = self.budget - a as usize;
            self.cost.get(&(a * w)).is_some_and(|&c| c <= rest)
        })
    }

    fn add(&mut self, w: i64) {
        let mut next = self.cost.clone();
        for (&v, &c) in &self.cost {
            for a in 1..=(self.budget - c) as i64 {
                for s in [a * w, -a * w] {
                    let cost = c + a as usize;
                    let e = next.entry(v + s).or_insert(usize::MAX);
                    if cost < *e {
                        *e = cost;
                    }
                }
            }
        }
        self.cost = next;
    }
}

fn check_groups(k: usize, groups: &[Group]) -> Result<()> {
    let mut owner = vec![None; k];
    for (g, group) in groups.iter().enumerate() {
        if group.members.is_empty() {
            return Err(Error::Parameter(format!("group `{}` is empty", group.name)));
        }
        for &m in &group.members {
            if m >= k {
                return Err(Error::Parameter(format!("group `{}` references factor #{}", group.name, m + 1)));
            }
            if owner[m].replace(g).is_some() {
                return Err(Error::Parameter(format!("factor #{} belongs to more than one group", m + 1)));
            }
        }
    }
    if let Some(j) = owner.iter().position(Option::is_none) {
        return Err(Error::Parameter(format!("factor #{} is not assigned to a group", j + 1)));
    }
    Ok(())
}

/// FAST search-curve design.
///
/// Each factor follows `x(s) = 1/2 + arcsin(sin(ω s + φ)) / π` for
/// `s = 2π j / N`, `j = 0..N`. Classic mode uses a single block with
/// interference-free frequencies shared within each group; extended mode uses
/// one block per group with the focal group sharing `ω_max` and every other
/// factor on its own low complement frequency.
/// Without explicit `groups`, every factor is its own group.
pub fn fast_design(
    k: usize,
    block_size: usize,
    mode: FastMode,
    order: usize,
    groups: Option<Vec<Group>>,
    seed: u64,
) -> Result<SampleMatrix> {
    check_size(k, block_size)?;
    let groups = groups.unwrap_or_else(|| {
        (0..k).map(|j| Group { name: format!("x{}", j + 1), members: vec![j] }).collect()
    });
    check_groups(k, &groups)?;
    let g = groups.len();
    let mut owner = vec![0usize; k];
    for (gi, group) in groups.iter().enumerate() {
        for &m in &group.members {
            owner[m] = gi;
        }
    }

    // per-block, per-factor frequencies
    let block_freqs: Vec<Vec<usize>> = match mode {
        FastMode::Classic => {
            if block_size % 2 == 0 {
                return Err(Error::Size(format!("FAST block size must be odd, got {block_size}")));
            }
            let freqs = classic_frequencies(g, order);
            let omega_max = *freqs.iter().max().unwrap_or(&1);
            if block_size < 2 * order * omega_max + 1 {
                return Err(Error::Size(format!(
                    "classic FAST with {g} groups at order {order} needs N >= {} (max frequency {omega_max}), got {block_size}",
                    2 * order * omega_max + 1
                )));
            }
            vec![(0..k).map(|j| freqs[owner[j]]).collect()]
        }
        FastMode::Extended => {
            // the focal group shares omega_max; every other factor gets its own complement frequency
            let mut out = Vec::with_capacity(g);
            for group in &groups {
                let (omega_max, complement) = extended_frequencies(k - group.members.len(), block_size, order)?;
                let mut others = complement.into_iter();
                out.push(
                    (0..k)
                        .map(|j| if group.members.contains(&j) { omega_max } else { others.next().unwrap() })
                        .collect(),
                );
            }
            out
        }
    };

    let mut rng = rng_from_seed(seed);
    let mut unit = Vec::with_capacity(g * block_size);
    let mut frequencies = Vec::with_capacity(g);
    let mut phases = Vec::with_capacity(g);
    let mut blocks = Vec::with_capacity(g);
    for omega in block_freqs {
        let phi: Vec<f64> = (0..k).map(|_| 2.0 * PI * unit_draw(&mut rng)).collect();
        let start = unit.len();
        for step in 0..block_size {
            let s = 2.0 * PI * step as f64 / block_size as f64;
            unit.push(
                omega
                    .iter()
                    .zip(&phi)
                    .map(|(&w, &p)| (0.5 + (w as f64 * s + p).sin().asin() / PI).clamp(0.0, 1.0))
                    .collect(),
            );
        }
        blocks.push((start, unit.len()));
        frequencies.push(omega);
        phases.push(phi);
    }
    let meta = DesignMeta::Fast { mode, order, block_size, frequencies, phases, blocks, groups };
    Ok(SampleMatrix::new(unit, meta, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_scale_row_counts() {
        let s = fast_design(8, 137, FastMode::Extended, 4, None, 1).unwrap();
        assert_eq!(s.rows(), 1096);
        let s = fast_design(5, 97, FastMode::Extended, 4, None, 1).unwrap();
        assert_eq!(s.rows(), 485);
    }

    #[test]
    fn block_size_errors() {
        assert!(matches!(fast_design(3, 100, FastMode::Extended, 4, None, 1), Err(Error::Size(_))));
        assert!(matches!(fast_design(3, 63, FastMode::Extended, 4, None, 1), Err(Error::Size(_))));
        assert!(fast_design(3, 65, FastMode::Extended, 4, None, 1).is_ok());
        assert!(matches!(fast_design(6, 101, FastMode::Classic, 4, None, 1), Err(Error::Size(_))));
    }

    #[test]
    fn extended_frequency_hygiene() {
        for &n in &[65usize, 97, 137, 257, 1027, 4001] {
            let (wmax, comp) = extended_frequencies(9, n, 4).unwrap();
            assert!(n >= 2 * 4 * wmax + 1);
            for &c in &comp {
                for a in 1..=4 {
                    for p in 1..=4 {
                        assert_ne!(a * c, p * wmax, "n={n}");
                    }
                }
                assert!(4 * c <= wmax / 2, "complement harmonics must stay below the S_T cutoff");
            }
        }
    }

    #[test]
    fn classic_frequencies_are_interference_free() {
        for k in 1..=10 {
            let f = classic_frequencies(k, 4);
            assert!(is_interference_free(&f, 4), "{f:?}");
        }
        assert_eq!(&classic_frequencies(2, 4), &[1, 5]);
        assert!(!is_interference_free(&[1, 2], 4));
        assert!(!is_interference_free(&[3, 7, 10], 4)); // 3 + 7 - 10
    }

    #[test]
    fn curve_marginals_are_uniform() {
        let s = fast_design(3, 1001, FastMode::Extended, 4, None, 7).unwrap();
        for (start, end) in match &s.meta {
            DesignMeta::Fast { blocks, .. } => blocks.clone(),
            _ => unreachable!(),
        } {
            for j in 0..3 {
                let mut col: Vec<f64> = s.unit[start..end].iter().map(|r| r[j]).collect();
                assert!(col.iter().all(|v| (0.0..=1.0).contains(v)));
                col.sort_by(f64::total_cmp);
                let n = col.len() as f64;
                let ks = col
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (x - i as f64 / n).abs().max((x - (i + 1) as f64 / n).abs()))
                    .fold(0.0, f64::max);
                assert!(ks <= 0.05, "block {start}, factor {j}: KS {ks}");
            }
        }
    }

    #[test]
    fn groups_share_frequency() {
        let groups = vec![
            Group { name: "a".into(), members: vec![0, 2] },
            Group { name: "b".into(), members: vec![1] },
        ];
        let s = fast_design(3, 129, FastMode::Extended, 4, Some(groups), 3).unwrap();
        assert_eq!(s.rows(), 2 * 129);
        let DesignMeta::Fast { frequencies, .. } = &s.meta else { unreachable!() };
        assert_eq!(frequencies[0][0], frequencies[0][2]);
        assert_eq!(frequencies[0][0], 16);
        assert_eq!(frequencies[1][1], 16);

        let bad = vec![Group { name: "a".into(), members: vec![0, 1] }];
        assert!(matches!(fast_design(3, 129, FastMode::Extended, 4, Some(bad), 3), Err(Error::Parameter(_))));
    }
}

use std::f64::consts::PI;

use super::{check_aligned, check_names, degenerate, SaMethod, SaReport};
use crate::design::{DesignMeta, FastMode, SampleMatrix};
use crate::runner::OutputVector;
use crate::stats::Welford;
use crate::{Error, Result};

/// FAST first-order indices (classic) or first-order and total indices
/// (extended), one row per factor group.
///
/// For a block of `N` points and focal frequency `ω`,
/// `V_i = 2 Σ_{p=1..M} |F(pω)|² / N²` over the first `M` harmonics and
/// `V` is the block's variance. Extended mode also returns
/// `S_Ti = 1 - 2 Σ_{j=1..ω_max/2} |F(j)|² / N² / V`. A block containing a
/// faulted row, or with zero variance, leaves its indices undefined.
pub fn fast_indices(sample: &SampleMatrix, names: &[String], y: &OutputVector) -> Result<SaReport> {
    let DesignMeta::Fast { mode, order, block_size, frequencies, blocks, groups, .. } = &sample.meta else {
        return Err(Error::DesignMismatch(format!(
            "FAST indices need a fast-classic or fast-extended design, got `{}`",
            sample.meta.method()
        )));
    };
    check_aligned(sample.rows(), y)?;
    check_names(sample.cols(), names)?;
    let expected_blocks = match mode {
        FastMode::Classic => 1,
        FastMode::Extended => groups.len(),
    };
    if blocks.len() != expected_blocks || frequencies.len() != blocks.len() {
        return Err(Error::DesignMismatch("FAST bookkeeping does not match its groups".into()));
    }
    let label = |g: usize| match groups[g].members.as_slice() {
        [only] => names[*only].clone(),
        _ => groups[g].name.clone(),
    };

    let (method, measures): (_, &[&str]) = match mode {
        FastMode::Classic => (SaMethod::FastClassic, &["S_i"]),
        FastMode::Extended => (SaMethod::FastExtended, &["S_i", "S_Ti"]),
    };
    let mut report = SaReport::new(method, &y.name, measures);
    report.tolerance = Some(0.05);
    let mut used = 0;
    let mut undefined_blocks = Vec::new();

    let omega_max = (block_size - 1) / (2 * order);
    for (b, &(start, end)) in blocks.iter().enumerate() {
        let ys = &y.y[start..end];
        let clean = (start..end).all(|r| !y.fault_rows.contains(&r));
        let spectrum = clean.then(|| Spectrum::new(ys)).filter(|s| !degenerate(s.mean, s.var));
        if spectrum.is_some() {
            used += end - start;
        } else {
            undefined_blocks.push(b);
        }
        match mode {
            FastMode::Classic => {
                for g in 0..groups.len() {
                    let w = frequencies[b][groups[g].members[0]];
                    let s = spectrum.as_ref().map(|s| s.harmonics(w, *order) / s.var);
                    report.push_row(&label(g), vec![s]);
                }
            }
            FastMode::Extended => {
                let focal = groups[b].members[0];
                debug_assert_eq!(frequencies[b][focal], omega_max);
                let si = spectrum.as_ref().map(|s| s.harmonics(omega_max, *order) / s.var);
                let st = spectrum.as_ref().map(|s| 1.0 - s.band(omega_max / 2) / s.var);
                report.push_row(&label(b), vec![si, st]);
            }
        }
    }
    report.n = used;
    report.excluded = sample.rows() - used;
    report.add_additivity();
    if !undefined_blocks.is_empty() {
        report
            .notes
            .push(format!("{} block(s) had faulted rows or zero output variance", undefined_blocks.len()));
    }
    if *mode == FastMode::Extended {
        report.notes.push(format!("complement frequencies up to {}", omega_max / 2));
    }
    Ok(report)
}

/// Fourier power of one block.
struct Spectrum<'a> {
    y: &'a [f64],
    mean: f64,
    var: f64,
}

impl<'a> Spectrum<'a> {
    fn new(y: &'a [f64]) -> Self {
        let w: Welford = y.iter().copied().collect();
        Self { y, mean: w.mean(), var: w.population_variance() }
    }

    /// `2 |F(j)|² / N²`, i.e. `2 (A_j² + B_j²)`.
    fn power(&self, j: usize) -> f64 {
        let n = self.y.len() as f64;
        let (mut a, mut b) = (0.0, 0.0);
        for (t, &v) in self.y.iter().enumerate() {
            let arg = 2.0 * PI * ((j * t) % self.y.len()) as f64 / n;
            a += (v - self.mean) * arg.cos();
            b += (v - self.mean) * arg.sin();
        }
        2.0 * (a * a + b * b) / (n * n)
    }

    fn harmonics(&self, w: usize, order: usize) -> f64 {
        (1..=order).map(|p| self.power(p * w)).sum()
    }

    fn band(&self, top: usize) -> f64 {
        (1..=top).map(|j| self.power(j)).sum()
    }
}

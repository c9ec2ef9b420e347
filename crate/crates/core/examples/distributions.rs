// Factor marginals: quantiles, CDFs and moments.

use uasa::distributions::{validate, Distribution, Factor, FactorSpace};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dists = [
        Distribution::uniform(0.0, 10.0),
        Distribution::normal(5.0, 2.0),
        Distribution::LogNormal { mu: 0.0, sigma: 0.5 },
        Distribution::Triangular { lower: 0.0, mode: 2.0, upper: 10.0 },
        Distribution::Beta { alpha: 2.0, beta: 5.0, lower: 0.0, upper: 1.0 },
        Distribution::discrete_weighted(vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 2.0]),
    ];
    for d in &dists {
        let median = d.quantile(0.5)?;
        println!(
            "{:<18} median {median:>8.4}  F(median) {:.4}  mean {:.4}  var {:.4}",
            d.name(),
            d.cdf(median)?,
            d.mean(),
            d.variance()
        );
    }

    // duplicate names and bad parameters are reported together
    let space = FactorSpace::new(vec![
        Factor::new("k", Distribution::uniform(1.0, 0.0)),
        Factor::new("k", Distribution::normal(0.0, 1.0)),
    ]);
    let report = validate(&space);
    println!("valid: {}", report.is_ok());
    for v in &report.violations {
        println!("  {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

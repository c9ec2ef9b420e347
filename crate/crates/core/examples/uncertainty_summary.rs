// Output statistics, percentiles, Tchebycheff interval and the DKW band.

use uasa::design::lhs_design;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::ModelDef;
use uasa::runner::evaluate_all;
use uasa::uncertainty::{summarize, UaOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = FactorSpace::new(vec![
        Factor::new("q", Distribution::LogNormal { mu: 0.0, sigma: 0.4 }),
        Factor::new("t", Distribution::normal(10.0, 1.0)),
    ]);
    let model = ModelDef::formula(&[("Y", "q * t - 9")], &space)?;
    let sample = lhs_design(2, 5000, 9, 1)?.mapped(&space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    let ua = summarize(&y, &UaOptions::default())?;
    print!("{}", ua.to_csv());
    println!(
        "Tchebycheff {:.0}%: [{:.3}, {:.3}]  DKW half-width {:.4}",
        ua.tchebycheff.coverage * 100.0,
        ua.tchebycheff.lower,
        ua.tchebycheff.upper,
        ua.kolmogorov_halfwidth
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

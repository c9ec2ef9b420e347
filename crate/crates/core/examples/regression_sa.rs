// Sampling-based sensitivity: SRC, PCC, Pearson and their rank versions.

use uasa::design::lhs_design;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::ModelDef;
use uasa::runner::evaluate_all;
use uasa::sensitivity::regression_measures;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = FactorSpace::new(vec![
        Factor::new("a", Distribution::uniform(0.0, 1.0)),
        Factor::new("b", Distribution::uniform(0.0, 1.0)),
        Factor::new("c", Distribution::uniform(0.0, 1.0)),
    ]);
    // monotone but nonlinear in b: rank measures recover it better
    let model = ModelDef::formula(&[("Y", "3 * a + exp(6 * b) / 50 + 0.1 * c")], &space)?;
    let sample = lhs_design(3, 2000, 5, 1)?.mapped(&space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    let report = regression_measures(&sample.values, &space.names(), &y)?;
    println!("{report}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

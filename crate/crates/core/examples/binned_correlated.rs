// Binned first-order importance on a rank-correlated sample.

use uasa::correlate::iman_conover;
use uasa::design::{lhs_design, map_to_values};
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::ModelDef;
use uasa::runner::evaluate_all;
use uasa::sensitivity::{binned_measures, sobol_indices};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let target = vec![vec![1.0, 0.8, 0.0], vec![0.8, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    let space = FactorSpace::new(vec![
        Factor::new("a", Distribution::normal(0.0, 1.0)),
        Factor::new("b", Distribution::normal(0.0, 1.0)),
        Factor::new("c", Distribution::normal(0.0, 1.0)),
    ])
    .with_correlation(target.clone());
    let model = ModelDef::formula(&[("Y", "a + c")], &space)?;

    let mut sample = lhs_design(3, 10_000, 3, 1)?;
    sample.unit = iman_conover(&sample.unit, &target, 3)?;
    sample.values = map_to_values(&sample.unit, &space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    // b does not enter the model but shares variance with a through the correlation
    println!("{}", binned_measures(&sample.values, &space.names(), &y, None)?);

    match sobol_indices(&model, &space, 1024, 0) {
        Err(e) => println!("sobol refused: {e}"),
        Ok(_) => println!("sobol accepted a correlated space"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

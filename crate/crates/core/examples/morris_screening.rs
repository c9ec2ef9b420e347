// Elementary-effects screening of the Ishigami function plus an inert factor.

use std::f64::consts::PI;

use uasa::design::morris_design;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::{Builtin, ModelDef};
use uasa::runner::evaluate_all;
use uasa::sensitivity::morris_measures;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = FactorSpace::new(
        ["x1", "x2", "x3", "noise"].iter().map(|n| Factor::new(*n, Distribution::uniform(-PI, PI))).collect(),
    );
    let model = ModelDef::builtin(Builtin::ishigami(), &space)?;
    let sample = morris_design(4, 20, 4, 1)?.mapped(&space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    let report = morris_measures(&sample, &space.names(), &y)?;
    println!("{report}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

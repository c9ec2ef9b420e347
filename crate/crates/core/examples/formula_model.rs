// Formula models with several outputs; rows that fault are recorded, not fatal.

use uasa::design::lhs_design;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::{parse, ModelDef};
use uasa::runner::evaluate_all;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let expr = parse("-2^2 + max(a, b) * ln(c)")?;
    println!("parsed: {expr}");

    let space = FactorSpace::new(vec![
        Factor::new("a", Distribution::uniform(0.0, 1.0)),
        Factor::new("b", Distribution::uniform(0.0, 1.0)),
        Factor::new("c", Distribution::uniform(-0.1, 2.0)),
    ]);
    let model = ModelDef::formula(&[("S", "a + b"), ("L", "ln(c) * a")], &space)?;
    let sample = lhs_design(3, 500, 2, 1)?.mapped(&space)?;
    let eval = evaluate_all(&model, &sample, 4)?;
    for out in &eval.outputs {
        let v = out.valid();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        println!("{}: {} valid rows, mean {mean:.4}, faulted rows {}", out.name, out.n_effective(), out.fault_rows.len());
    }
    if let Some(f) = eval.faults.first() {
        println!("first fault: {f:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

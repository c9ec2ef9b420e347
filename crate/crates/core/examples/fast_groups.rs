// Extended FAST on Ishigami, per factor and with factors grouped.

use std::f64::consts::PI;

use uasa::design::{fast_design, FastMode, Group, DEFAULT_INTERFERENCE_ORDER};
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::{builtin_reference_indices, Builtin, ModelDef};
use uasa::runner::evaluate_all;
use uasa::sensitivity::fast_indices;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = FactorSpace::new((1..=3).map(|j| Factor::new(format!("x{j}"), Distribution::uniform(-PI, PI))).collect());
    let model = ModelDef::builtin(Builtin::ishigami(), &space)?;

    let sample = fast_design(3, 1027, FastMode::Extended, DEFAULT_INTERFERENCE_ORDER, None, 0)?.mapped(&space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    println!("{}", fast_indices(&sample, &space.names(), &y)?);
    for r in builtin_reference_indices(&Builtin::ishigami(), &space)? {
        println!("analytic {}: S_i {:.4}  S_Ti {:.4}", r.name, r.first, r.total);
    }

    let groups = vec![Group { name: "x1".into(), members: vec![0] }, Group { name: "x2+x3".into(), members: vec![1, 2] }];
    let sample = fast_design(3, 1027, FastMode::Extended, DEFAULT_INTERFERENCE_ORDER, Some(groups), 0)?.mapped(&space)?;
    let y = evaluate_all(&model, &sample, 1)?.outputs.remove(0);
    println!("{}", fast_indices(&sample, &space.names(), &y)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Driving an external program through the sample/output file protocol.

use uasa::design::random_design;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::{ExternalModel, ModelDef};
use uasa::runner::evaluate_all;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let script = dir.path().join("model.sh");
    // invoked as: sh model.sh <sample_file> <output_file>
    std::fs::write(
        &script,
        "awk 'NR == 1 { print \"# H Q\"; next } { print $1 * $2, $1 + $2 }' \"$1\" > \"$2\"\n",
    )?;
    let space = FactorSpace::new(vec![
        Factor::new("head", Distribution::uniform(1.0, 2.0)),
        Factor::new("width", Distribution::uniform(3.0, 4.0)),
    ]);
    let mut ext = ExternalModel::new(vec!["sh".into(), script.to_string_lossy().into_owned()]);
    ext.timeout_secs = Some(30.0);
    let model = ModelDef::external(ext, vec!["H".into(), "Q".into()])?;
    let sample = random_design(2, 50, 4)?.mapped(&space)?;
    let eval = evaluate_all(&model, &sample, 1)?;
    for out in &eval.outputs {
        println!("{}: first value {:.6}, {} faults", out.name, out.y[0], out.fault_rows.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Inducing a target Spearman correlation with Iman-Conover.

use uasa::correlate::{iman_conover, measured_spearman};
use uasa::design::lhs_design;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let target = vec![vec![1.0, 0.7, -0.3], vec![0.7, 1.0, 0.0], vec![-0.3, 0.0, 1.0]];
    let unit = lhs_design(3, 2000, 11, 1)?.unit;
    let before = measured_spearman(&unit)?;
    let after = measured_spearman(&iman_conover(&unit, &target, 11)?)?;
    println!("pair     target   before    after");
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        println!("({i},{j})  {:>8.3} {:>8.3} {:>8.3}", target[i][j], before[i][j], after[i][j]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

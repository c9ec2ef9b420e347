// Random, Latin hypercube, LP-tau, Morris and FAST designs.

use uasa::design::{
    fast_design, lhs_design, lptau_design, morris_design, random_design, FastMode, DEFAULT_INTERFERENCE_ORDER,
};
use uasa::distributions::{Distribution, Factor, FactorSpace};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = FactorSpace::new(vec![
        Factor::new("rate", Distribution::uniform(0.1, 0.9)),
        Factor::new("load", Distribution::normal(100.0, 15.0)),
        Factor::new("depth", Distribution::Triangular { lower: 1.0, mode: 2.0, upper: 5.0 }),
    ]);
    let k = space.len();

    let designs = [
        random_design(k, 100, 7)?,
        lhs_design(k, 100, 7, 1)?,
        lptau_design(k, 128, 0)?,
        morris_design(k, 10, 4, 7)?,
        fast_design(k, 65, FastMode::Extended, DEFAULT_INTERFERENCE_ORDER, None, 7)?,
    ];
    for d in designs {
        let d = d.mapped(&space)?;
        let rate = d.value_column(0);
        let mean = rate.iter().sum::<f64>() / rate.len() as f64;
        println!("{:<14} {:>4} rows  mean(rate) {mean:.3}", d.meta.method(), d.rows());
    }

    // one point per stratum in every column
    let lhs = lhs_design(k, 10, 3, 1)?;
    let mut strata: Vec<usize> = lhs.unit_column(0).iter().map(|u| (u * 10.0) as usize).collect();
    strata.sort();
    println!("lhs strata of column 0: {strata:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

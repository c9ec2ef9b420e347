// Two-matrix Sobol indices of the Sobol G function against the closed form.

use uasa::distributions::FactorSpace;
use uasa::models::{builtin_reference_indices, Builtin, ModelDef};
use uasa::sensitivity::sobol_indices;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = Builtin::SobolG { a: vec![0.0, 0.5, 3.0, 9.0, 99.0, 99.0] };
    let space = FactorSpace::unit(6);
    let model = ModelDef::builtin(g.clone(), &space)?;
    let report = sobol_indices(&model, &space, 8192, 0)?;
    println!("{report}");
    for r in builtin_reference_indices(&g, &space)? {
        println!(
            "{}: S_i {:.4} (analytic {:.4})  S_Ti {:.4} (analytic {:.4})",
            r.name,
            report.get(&r.name, "S_i").unwrap_or(f64::NAN),
            r.first,
            report.get(&r.name, "S_Ti").unwrap_or(f64::NAN),
            r.total
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(distributions);
example!(sampling_designs);
example!(rank_correlation);
example!(formula_model);
example!(external_model);
example!(uncertainty_summary);
example!(regression_sa);
example!(morris_screening);
example!(fast_groups);
example!(sobol_indices);
example!(binned_correlated);
example!(cli_pipeline);

#[test]
fn distributions_example_runs() {
    distributions::run_example().expect("distributions example should run");
}

#[test]
fn sampling_designs_example_runs() {
    sampling_designs::run_example().expect("sampling designs example should run");
}

#[test]
fn rank_correlation_example_runs() {
    rank_correlation::run_example().expect("rank correlation example should run");
}

#[test]
fn formula_model_example_runs() {
    formula_model::run_example().expect("formula model example should run");
}

#[test]
fn external_model_example_runs() {
    external_model::run_example().expect("external model example should run");
}

#[test]
fn uncertainty_summary_example_runs() {
    uncertainty_summary::run_example().expect("uncertainty summary example should run");
}

#[test]
fn regression_sa_example_runs() {
    regression_sa::run_example().expect("regression example should run");
}

#[test]
fn morris_screening_example_runs() {
    morris_screening::run_example().expect("morris example should run");
}

#[test]
fn fast_groups_example_runs() {
    fast_groups::run_example().expect("fast example should run");
}

#[test]
fn sobol_indices_example_runs() {
    sobol_indices::run_example().expect("sobol example should run");
}

#[test]
fn binned_correlated_example_runs() {
    binned_correlated::run_example().expect("binned example should run");
}

#[test]
fn cli_pipeline_example_runs() {
    cli_pipeline::run_example().expect("cli pipeline example should run");
}

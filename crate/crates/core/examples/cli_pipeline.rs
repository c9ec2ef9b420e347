// The validate, sample, run and analyze commands driven in-process.

use uasa::cli::main_with_args;

const CONFIG: &str = r#"{
  "factors": [
    {"name": "x1", "dist": "uniform", "params": {"lower": -3.141592653589793, "upper": 3.141592653589793}},
    {"name": "x2", "dist": "uniform", "params": {"lower": -3.141592653589793, "upper": 3.141592653589793}},
    {"name": "x3", "dist": "uniform", "params": {"lower": -3.141592653589793, "upper": 3.141592653589793}}
  ],
  "model": {"builtin": {"kind": "ishigami"}}
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let p = |f: &str| dir.path().join(f).to_string_lossy().into_owned();
    std::fs::write(p("config.json"), CONFIG)?;
    let config = p("config.json");
    let steps: Vec<Vec<String>> = vec![
        vec!["validate".into()],
        vec!["sample".into(), "--method".into(), "fast-extended".into(), "--n-per-factor".into(), "257".into(), "--out".into(), p("sample.txt")],
        vec!["run".into(), "--sample".into(), p("sample.txt"), "--out".into(), p("output.txt")],
        vec!["analyze".into(), "--sample".into(), p("sample.txt"), "--output".into(), p("output.txt"), "--out".into(), p("report")],
    ];
    for step in steps {
        let mut args = vec!["uasa".to_string(), "--config".into(), config.clone(), "--seed".into(), "1".into()];
        args.extend(step.iter().cloned());
        let code = main_with_args(args);
        println!("uasa {} -> exit {code}", step[0]);
        if code != 0 {
            return Err(format!("`{}` exited with {code}", step[0]).into());
        }
    }
    let mut files: Vec<String> =
        std::fs::read_dir(p("report"))?.map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned())).collect::<Result<_, _>>()?;
    files.sort();
    println!("report: {}", files.join(", "));
    print!("{}", std::fs::read_to_string(dir.path().join("report/sa_fast-extended_Y.csv"))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

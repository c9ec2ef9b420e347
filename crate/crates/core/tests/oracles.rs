use std::f64::consts::PI;

use uasa::design::LpTau;
use uasa::distributions::{Distribution, Factor, FactorSpace};
use uasa::models::{builtin_reference_indices, Builtin};

fn ishigami(x: &[f64]) -> f64 {
    x[0].sin() + 7.0 * x[1].sin().powi(2) + 0.1 * x[2].powi(4) * x[0].sin()
}

/// Pick-freeze QMC estimate of Ishigami first-order and total indices.
#[test]
fn ishigami_closed_form_matches_qmc() {
    let gen = LpTau::new(6).unwrap();
    let n = 1u64 << 17;
    let (mut sum, mut sum2) = (0.0, 0.0);
    let (mut first, mut total) = ([0.0; 3], [0.0; 3]);
    for i in 1..=n {
        let p: Vec<f64> = gen.point(i).into_iter().map(|u| -PI + 2.0 * PI * u).collect();
        let (a, b) = (&p[..3], &p[3..]);
        let (fa, fb) = (ishigami(a), ishigami(b));
        sum += fa + fb;
        sum2 += fa * fa + fb * fb;
        for j in 0..3 {
            let mut ab = a.to_vec();
            ab[j] = b[j];
            let fab = ishigami(&ab);
            first[j] += fb * (fab - fa);
            total[j] += (fa - fab).powi(2) / 2.0;
        }
    }
    let m = 2.0 * n as f64;
    let v = sum2 / m - (sum / m).powi(2);
    let space = FactorSpace::new((1..=3).map(|j| Factor::new(format!("x{j}"), Distribution::uniform(-PI, PI))).collect());
    let reference = builtin_reference_indices(&Builtin::ishigami(), &space).unwrap();
    for (j, r) in reference.iter().enumerate() {
        let (s, st) = (first[j] / n as f64 / v, total[j] / n as f64 / v);
        assert!((s - r.first).abs() < 0.01, "{}: S {s} vs {}", r.name, r.first);
        assert!((st - r.total).abs() < 0.01, "{}: ST {st} vs {}", r.name, r.total);
    }
}

#[test]
fn linear_reference_is_variance_share() {
    let space = FactorSpace::new(vec![
        Factor::new("a", Distribution::uniform(0.0, 1.0)),
        Factor::new("b", Distribution::normal(0.0, 2.0)),
    ]);
    let r = builtin_reference_indices(&Builtin::Linear { coefficients: vec![3.0, 1.0] }, &space).unwrap();
    let (va, vb) = (9.0 / 12.0, 4.0);
    assert!((r[0].first - va / (va + vb)).abs() < 1e-12);
    assert!((r[1].total - vb / (va + vb)).abs() < 1e-12);
}

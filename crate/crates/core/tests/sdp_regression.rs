//! The forty frozen SDP instances: statuses, independent verification,
//! determinism and invariance under positive scaling.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spectra_core::reproduce::regression_instances;
use spectra_core::sdp::{solve, verify_solution, SDPProblem, SolverConfig, Status};

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct Instance {
    name: String,
    expected: Status,
    problem: SDPProblem,
}

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sdp_regression.json")
}

fn generated() -> Vec<Instance> {
    regression_instances()
        .into_iter()
        .map(|i| Instance {
            name: i.name,
            expected: i.expected,
            problem: i.problem,
        })
        .collect()
}

/// Set `SPECTRA_REGEN_FIXTURES=1` to rewrite the fixture.
fn fixture() -> Vec<Instance> {
    let path = fixture_path();
    if std::env::var_os("SPECTRA_REGEN_FIXTURES").is_some() {
        std::fs::write(&path, serde_json::to_string(&generated()).unwrap() + "\n").unwrap();
    }
    serde_json::from_str(&std::fs::read_to_string(&path).expect("fixture present")).expect("fixture parses")
}

#[test]
fn fixture_matches_generator() {
    let frozen = fixture();
    let fresh = generated();
    assert_eq!(frozen.len(), 40);
    for (a, b) in frozen.iter().zip(&fresh) {
        assert_eq!(a, b, "instance {} drifted from the fixture", a.name);
    }
}

#[test]
fn statuses_and_verification() {
    let cfg = SolverConfig::default();
    let mut wrong = Vec::new();
    for inst in fixture() {
        let sol = solve(&inst.problem, &cfg).unwrap();
        let report = verify_solution(&inst.problem, &sol, &cfg);
        if sol.status != inst.expected || !report.ok {
            wrong.push(format!("{}: {:?} (verified: {})", inst.name, sol.status, report.ok));
        }
    }
    assert!(wrong.is_empty(), "{wrong:#?}");
}

#[test]
fn deterministic() {
    let cfg = SolverConfig::default();
    for inst in fixture().iter().step_by(5) {
        let a = serde_json::to_string(&solve(&inst.problem, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&solve(&inst.problem, &cfg).unwrap()).unwrap();
        assert_eq!(a, b, "{}", inst.name);
    }
}

#[test]
fn positive_scaling_keeps_status() {
    let cfg = SolverConfig::default();
    for c in [0.125, 3.0, 64.0] {
        for inst in fixture() {
            let mut p = inst.problem.clone();
            for b in &mut p.blocks {
                b.f0 *= c;
                for f in b.f.iter_mut().flatten() {
                    *f *= c;
                }
            }
            let sol = solve(&p, &cfg).unwrap();
            assert_eq!(sol.status, inst.expected, "{} scaled by {c}", inst.name);
        }
    }
}

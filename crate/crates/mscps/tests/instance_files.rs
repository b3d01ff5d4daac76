use std::path::Path;

use mscps::generate::{generate, GenParams};
use mscps::io::{load_instance, parse_instance, save_instance, IoError};
use mscps::verify::tiny_instance;
use mscps_core::{Instance, NodeId};

fn fixture() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/two_agents.json"))
}

fn same(a: &Instance, b: &Instance) {
    assert_eq!(a.graph.stations(), b.graph.stations());
    assert_eq!(a.graph.origins(), b.graph.origins());
    assert_eq!(a.agents, b.agents);
    assert_eq!(a.beta_global, b.beta_global);
    assert_eq!(a.recovery, b.recovery);
    assert_eq!(a.graph.is_metric(), b.graph.is_metric());
    let n = a.graph.num_nodes();
    for u in 0..n {
        for v in 0..n {
            assert_eq!(
                a.graph.travel(NodeId(u), NodeId(v)),
                b.graph.travel(NodeId(u), NodeId(v))
            );
        }
    }
}

#[test]
fn golden_fixture() {
    let inst = load_instance(fixture()).unwrap();
    assert_eq!(inst.graph.num_stations(), 3);
    assert_eq!(inst.num_agents(), 2);
    assert!(inst.recovery.enabled);
    assert_eq!(inst.recovery.t_thres, 10.0);
    let b = inst.agent(1);
    assert_eq!((b.id, b.t0, b.penalty), (1, 1.5, 30.0));
    assert_eq!(b.usage_cost, vec![0.5, 0.5, 2.0]);
    // 300 m/min: start of agent 0 to station 0, station 0 to station 1
    assert!((inst.graph.travel(NodeId(3), NodeId(0)) - 1.0).abs() < 1e-12);
    assert!((inst.graph.travel(NodeId(0), NodeId(1)) - 4.0 / 3.0).abs() < 1e-12);
    assert!((inst.graph.travel(NodeId(4), NodeId(1)) - 1.0).abs() < 1e-12);
}

#[test]
fn generated_instances_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let params = GenParams {
            agents: 1 + seed as usize % 4,
            recovery_threshold: (seed % 2 == 0).then_some(5.0),
            ..GenParams::default()
        };
        let inst = generate(&params, seed).unwrap();
        let path = dir.path().join(format!("g{seed}.json"));
        save_instance(&path, &inst, Some(params.speed_kmh)).unwrap();
        same(&inst, &load_instance(&path).unwrap());
        save_instance(&path, &inst, None).unwrap();
        let back = load_instance(&path).unwrap();
        assert!(!back.graph.is_metric());
        assert_eq!(back.agents, inst.agents);
    }
}

#[test]
fn matrix_instances_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let inst = tiny_instance(seed, 4, 3, 700.0, true);
        let path = dir.path().join("t.json");
        save_instance(&path, &inst, Some(18.0)).unwrap();
        same(&inst, &load_instance(&path).unwrap());
    }
}

#[test]
fn errors_name_the_problem() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let cut = text.replace(
        r#""budget": 5.0, "radius": 1000.0, "penalty": 30.0"#,
        r#""radius": 1000.0, "penalty": 30.0"#,
    );
    let err = parse_instance(&cut, Path::new("cut.json")).unwrap_err();
    assert!(matches!(err, IoError::Schema { .. }));
    assert!(err.to_string().contains("missing field `budget`"), "{err}");

    let extra = text.replace(r#""beta_global": 700.0"#, r#""beta_global": 700.0, "beta": 1"#);
    assert!(parse_instance(&extra, Path::new("x.json"))
        .unwrap_err()
        .to_string()
        .contains("beta"));

    let missing = load_instance(Path::new("/nonexistent/instance.json")).unwrap_err();
    assert!(matches!(missing, IoError::Read { .. }));
}

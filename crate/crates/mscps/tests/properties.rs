use mscps::generate::{full_factorial, generate, GenParams, Grid};
use mscps::io::InstanceDoc;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GenParams> {
    (1usize..6, 50.0..800.0f64, 500.0..2500.0f64, 0.0..20.0f64, 0.05..0.95f64).prop_map(|(n, rs, sr, ts, da)| {
        GenParams {
            agents: n,
            start_radius: rs,
            search_radius: sr,
            start_horizon: ts,
            mean_availability: da,
            ..GenParams::default()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_are_well_formed(p in params(), seed in any::<u64>()) {
        let inst = generate(&p, seed).unwrap();
        prop_assert_eq!(inst.num_agents(), p.agents);
        prop_assert!(inst.agents.windows(2).all(|w| w[0].t0 <= w[1].t0));
        for i in 0..inst.num_agents() {
            let a = inst.agent(i);
            prop_assert!(inst.graph.station_ids().any(|s| inst.within_radius(i, s)
                && inst.graph.travel(a.start, s.node()) <= a.budget));
        }
        prop_assert!(inst.graph.stations().iter().all(|s| s.p > 0.0 && s.p < 1.0));
        let again = generate(&p, seed).unwrap();
        prop_assert_eq!(again.graph.stations(), inst.graph.stations());
    }

    #[test]
    fn json_round_trip(p in params(), seed in any::<u64>()) {
        let inst = generate(&p, seed).unwrap();
        let doc = InstanceDoc::from_instance(&inst, Some(p.speed_kmh));
        let text = serde_json::to_string(&doc).unwrap();
        let back: InstanceDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        let inst2 = back.to_instance().unwrap();
        prop_assert_eq!(inst2.graph.stations(), inst.graph.stations());
        prop_assert_eq!(&inst2.agents, &inst.agents);
    }

    #[test]
    fn factorial_is_a_product(a in 0usize..4, b in 0usize..4, c in 0usize..3, d in 0usize..5) {
        let grid = Grid {
            agents: (2..2 + a).collect(),
            start_radius: (0..b).map(|k| 100.0 * (k + 1) as f64).collect(),
            search_radius: (0..c).map(|k| 1000.0 * (k + 1) as f64).collect(),
            start_horizon: (0..d).map(|k| k as f64).collect(),
            mean_availability: Vec::new(),
        };
        let all = full_factorial(&GenParams::default(), &grid);
        prop_assert_eq!(all.len(), a.max(1) * b.max(1) * c.max(1) * d.max(1));
    }
}

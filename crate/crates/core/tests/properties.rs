use proptest::prelude::*;

use dynsep::clique::Mccc;
use dynsep::mis::{CounterMis, MisBackend};
use dynsep::oracle;
use dynsep::trace::{Op, Trace};
use dynsep::triangle_values::triangle_stats;
use dynsep::{Edge, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.insert_edge(Edge { u, v }).unwrap();
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_values_sum_to_covered_edges(g in graph_strategy(14)) {
        let s = triangle_stats(&g);
        prop_assert!((s.edge_value_total() - s.triangle_edge_count() as f64).abs() < 1e-9);
        prop_assert!((s.triangle_value_total() - s.edge_value_total()).abs() < 1e-9);
    }

    #[test]
    fn mis_stays_maximal_under_toggles(g in graph_strategy(12), seed in any::<u64>()) {
        let trace = Trace::random_toggles(&g, 60, seed);
        let mut mis = CounterMis::init(g.clone());
        let mut cur = g;
        for up in &trace.updates {
            up.apply(&mut cur).unwrap();
            let e = up.edge().unwrap();
            match up.op {
                Op::Ins => mis.insert_edge(e).unwrap(),
                Op::Del => mis.delete_edge(e).unwrap(),
            };
            prop_assert!(oracle::oracle_mis_check(&cur, &mis.members()));
        }
    }

    #[test]
    fn mccc_is_maximal_per_component(g in graph_strategy(12), seed in any::<u64>()) {
        let trace = Trace::full_deletion(&g, seed);
        let mut c = Mccc::new(&g, seed).unwrap();
        let mut cur = g;
        prop_assert!(oracle::oracle_max_clique_check(&cur, &c.output(), true));
        for up in &trace.updates {
            up.apply(&mut cur).unwrap();
            match c.delete(up.edge().unwrap()) {
                Ok(out) => prop_assert!(oracle::oracle_max_clique_check(&cur, &out, true)),
                // Declared failure is allowed; a wrong answer is not.
                Err(dynsep::clique::CliqueError::NoValidPivot { .. }) => break,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

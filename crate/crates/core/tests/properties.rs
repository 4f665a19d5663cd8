mod common;

use proptest::prelude::*;

use layerwidth::decomposition::{insertions, validate, Block, LayerDecomposition, Pld};
use layerwidth::generators::random_dag;
use layerwidth::graph::Dag;
use layerwidth::metrics::{
    bandwidth_small, elimination_order_from_ld, elimination_width, topo_order_from_ld, topo_order_width, treewidth_small,
};
use layerwidth::nodeset::NodeSet;
use layerwidth::solver::{solve, SolveConfig};

use common::naive_is_decomposition;

fn dag(max_nodes: usize) -> impl Strategy<Value = Dag> {
    (1..=max_nodes, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p, seed)| random_dag(n, p, seed))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn validate_agrees_with_direct_reading(
        g in dag(6),
        homes in prop::collection::vec((0usize..4, any::<bool>()), 6),
    ) {
        let n = g.node_count();
        let k = homes[..n].iter().map(|h| h.0).max().unwrap() + 1;
        let mut raw = vec![(Vec::new(), Vec::new()); k];
        for (v, &(b, s)) in homes[..n].iter().enumerate() {
            raw[b].0.push(v);
            if s {
                raw[b].1.push(v);
            }
        }
        let blocks = raw
            .iter()
            .map(|(t, s)| Block::new(NodeSet::from_nodes(n, t.iter().copied()), NodeSet::from_nodes(n, s.iter().copied())))
            .collect();
        let d = LayerDecomposition::new(blocks);
        prop_assert_eq!(validate(&g, &d, &g.nodes()).is_ok(), naive_is_decomposition(&g, &raw));
    }

    #[test]
    fn topological_sort_orders_every_arc(g in dag(12)) {
        let order = g.topological_sort();
        prop_assert!(topo_order_width(&g, &order).is_ok());
    }

    #[test]
    fn node_classes_partition_the_nodes(g in dag(10)) {
        let c = g.classify_nodes();
        prop_assert!(c.roots.is_disjoint(&c.chorded) && c.roots.is_disjoint(&c.branch) && c.chorded.is_disjoint(&c.branch));
        prop_assert_eq!(c.roots.len() + c.chorded.len() + c.branch.len(), g.node_count());
    }

    #[test]
    fn edge_list_round_trips(g in dag(10)) {
        let text = g.to_edge_list();
        let back = Dag::parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn random_dag_is_seed_deterministic(n in 0usize..15, p in 0.0..=1.0f64, seed in any::<u64>()) {
        prop_assert_eq!(random_dag(n, p, seed).to_edge_list(), random_dag(n, p, seed).to_edge_list());
    }

    #[test]
    fn insertions_are_valid_extensions(g in dag(6), picks in prop::collection::vec(any::<prop::sample::Index>(), 6)) {
        // Walk one random insertion path, checking every step.
        let n = g.node_count();
        let mut pld = Pld::empty(n);
        for (step, pick) in picks.iter().enumerate().take(n) {
            let boundary: Vec<usize> = if step == 0 { vec![0] } else { g.boundary_vars(pld.vars()).iter().collect() };
            let Some(&x) = boundary.get(pick.index(boundary.len().max(1))) else { break };
            let opts = if step == 0 { layerwidth::decomposition::initial_plds(&g, x) } else { insertions(&g, &pld, x).unwrap() };
            prop_assert!(opts.len() <= 2);
            for o in &opts {
                prop_assert!(o.validate(&g).is_ok());
                prop_assert!(pld.extends_to(o.decomposition()));
                prop_assert!(o.vars().contains(x));
            }
            match opts.get(pick.index(2)).or(opts.first()) {
                Some(o) => pld = o.clone(),
                None => break,
            }
        }
    }

    #[test]
    fn solved_decompositions_verify_and_round_trip(g in dag(7)) {
        let r = solve(&g, SolveConfig::default()).unwrap();
        let d = r.best.unwrap();
        prop_assert!(validate(&g, &d, &g.nodes()).is_ok());
        prop_assert_eq!(Some(d.width()), r.width);
        let json = serde_json::to_string(&d.to_json(&g)).unwrap();
        let back = LayerDecomposition::from_json(&g, &serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn decomposition_orders_stay_within_twice_the_width(g in dag(8)) {
        let d = solve(&g, SolveConfig::default()).unwrap().best.unwrap();
        let w = d.width();
        prop_assert!(elimination_width(&g, &elimination_order_from_ld(&d)).unwrap() < 2 * w);
        prop_assert!(topo_order_width(&g, &topo_order_from_ld(&g, &d)).unwrap() < 2 * w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn treewidth_matches_best_permutation(g in dag(6)) {
        let brute = permutations(g.node_count()).iter().map(|o| elimination_width(&g, o).unwrap()).min().unwrap();
        prop_assert_eq!(treewidth_small(&g, 9).unwrap(), brute);
    }

    #[test]
    fn bandwidth_matches_best_topological_order(g in dag(7)) {
        let brute = permutations(g.node_count()).iter().filter_map(|o| topo_order_width(&g, o).ok()).min().unwrap();
        prop_assert_eq!(bandwidth_small(&g, 10).unwrap(), brute);
    }
}

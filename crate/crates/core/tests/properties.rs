use proptest::prelude::*;

use chessgon::chipfiring::{are_equivalent, fire_set, has_positive_rank, reduce_toward, reduce_with_debt};
use chessgon::formats::{
    graph_from_json, graph_to_json, parse_edge_list, scramble_from_json, scramble_to_json, write_edge_list,
};
use chessgon::scramble::{edge_disjoint_path_bound, egg_cut_number, Scramble};
use chessgon::search::{gonality, GonalityCertificate, SearchOptions, SearchOutcome};
use chessgon::treecut::{width, TreeCutDecomposition};
use chessgon::{Divisor, Graph, VertexSet};

/// A connected multigraph: a random spanning tree plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        let extra = prop::collection::vec((0..n, 0..n, 1u32..=2), 0..=n + 2);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize, u32)> = parents.iter().enumerate().map(|(i, &p)| (i + 1, p, 1)).collect();
            edges.extend(extra.into_iter().filter(|(v, w, _)| v != w));
            Graph::from_multiplicities(n, edges).expect("valid edges")
        })
    })
}

fn graph_and_divisor(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = (Graph, Divisor)> {
    connected_graph(max_n).prop_flat_map(move |g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(lo..=hi, n).prop_map(Divisor::new))
    })
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    prop::collection::vec(any::<bool>(), n)
        .prop_map(move |bits| VertexSet::from_indices(n, (0..n).filter(|&v| bits[v])).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn set_firing_conserves_degree((g, d) in graph_and_divisor(9, -3, 4), seed in any::<u64>()) {
        let n = g.vertex_count();
        let a = VertexSet::from_indices(n, (0..n).filter(|v| (seed >> v) & 1 == 1)).unwrap();
        prop_assert_eq!(fire_set(&g, &d, &a).unwrap().degree(), d.degree());
    }

    #[test]
    fn reduction_is_idempotent_and_equivalent((g, d) in graph_and_divisor(8, 0, 3), q in 0usize..8) {
        let q = q % g.vertex_count();
        let r = reduce_toward(&g, &d, q).unwrap();
        prop_assert_eq!(reduce_toward(&g, &r, q).unwrap(), r.clone());
        prop_assert!(are_equivalent(&g, &d, &r).unwrap());
        prop_assert_eq!(r.degree(), d.degree());
    }

    #[test]
    fn reduced_form_is_a_class_invariant(
        (g, d) in graph_and_divisor(8, -2, 3),
        q in 0usize..8,
        sets in prop::collection::vec(any::<u64>(), 1..4),
    ) {
        let n = g.vertex_count();
        let q = q % n;
        let mut moved = d.clone();
        for s in sets {
            let a = VertexSet::from_indices(n, (0..n).filter(|v| (s >> v) & 1 == 1)).unwrap();
            moved = fire_set(&g, &moved, &a).unwrap();
        }
        prop_assert_eq!(reduce_with_debt(&g, &moved, q).unwrap(), reduce_with_debt(&g, &d, q).unwrap());
    }

    #[test]
    fn menger_equality(g in connected_graph(9), seed in any::<u64>()) {
        let n = g.vertex_count();
        let eggs: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).filter(|e| (seed >> e[0]) & 1 == 1 || e[0] < 2).collect();
        let s = Scramble::from_lists(&g, &eggs).unwrap();
        let cut = egg_cut_number(&g, &s).unwrap();
        prop_assert_eq!(Some(edge_disjoint_path_bound(&g, &s).unwrap().value), cut.value);
    }

    #[test]
    fn gonality_ignores_the_base_vertex(g in connected_graph(7), q in 0usize..7) {
        let q = q % g.vertex_count();
        let base = gonality(&g, &SearchOptions::default()).unwrap();
        let other = gonality(&g, &SearchOptions { q0: Some(q), ..SearchOptions::default() }).unwrap();
        prop_assert_eq!(base.exact(), other.exact());
        let cert = base.certificate().unwrap();
        prop_assert!(has_positive_rank(&g, &cert.witness).unwrap());
    }

    #[test]
    fn graph_formats_round_trip(g in connected_graph(10)) {
        prop_assert_eq!(graph_from_json(&graph_to_json(&g).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn divisor_and_certificate_json_round_trip((g, d) in graph_and_divisor(6, -5, 5)) {
        let back: Divisor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(back, d);
        let out = gonality(&g, &SearchOptions::default()).unwrap();
        let back: SearchOutcome = serde_json::from_str(&serde_json::to_string(&out).unwrap()).unwrap();
        prop_assert_eq!(&back, &out);
        let cert = out.certificate().unwrap();
        let back: GonalityCertificate = serde_json::from_str(&serde_json::to_string(cert).unwrap()).unwrap();
        prop_assert_eq!(&back, cert);
    }

    #[test]
    fn scramble_json_round_trips(g in connected_graph(8), seeds in prop::collection::vec(any::<u64>(), 1..5)) {
        let n = g.vertex_count();
        let eggs: Vec<Vec<usize>> = seeds
            .iter()
            .map(|s| {
                let set = VertexSet::from_indices(n, (0..n).filter(|v| (s >> v) & 1 == 1)).unwrap();
                // Grow to a connected egg: the component of the first chosen vertex.
                let start = set.first().unwrap_or(0);
                let comp = g.induced_subgraph(&set.union(&VertexSet::from_indices(n, [start]).unwrap())).unwrap();
                let (sub, map) = comp;
                let c = sub.connected_components().into_iter().find(|c| c.iter().any(|v| map[v] == start)).unwrap();
                c.iter().map(|v| map[v]).collect()
            })
            .collect();
        let s = Scramble::from_lists(&g, &eggs).unwrap();
        let (g2, s2) = scramble_from_json(&scramble_to_json(&g, &s).unwrap()).unwrap();
        prop_assert_eq!(g2, g);
        prop_assert_eq!(s2, s);
    }

    #[test]
    fn decomposition_json_round_trips(g in connected_graph(9), nodes in prop::collection::vec(0usize..4, 9), a in subset(9)) {
        let n = g.vertex_count();
        let links = vec![(0, 1), (1, 2), (1, 3)];
        let assignment: Vec<usize> = (0..n).map(|v| if a.contains(v) { nodes[v] } else { 0 }).collect();
        let t = TreeCutDecomposition::new(links, assignment).unwrap();
        let back: TreeCutDecomposition = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(width(&g, &back).unwrap(), width(&g, &t).unwrap());
    }
}

use qgs_core::graphs::{ball, FiniteGraph, GraphProvider, GroupSpec};
use qgs_core::morspace::{finite_pair_classes, mu_assignment, quantum_orbits, Category, ClosureConfig, MorContext};
use qgs_core::quantization::relation_vectors;
use qgs_core::Error;
use serde_json::json;

#[test]
fn graph_text_with_comments() {
    let g = FiniteGraph::parse("# square\nfinite 4\nedge 0 1\nedge 1 2 # inline\n\nedge 2 3\nedge 3 0\n").unwrap();
    assert_eq!(g, FiniteGraph::cycle(4));
}

#[test]
fn graph_text_errors_carry_lines() {
    for (text, line) in [("finite 3\nedge 0 7\n", 2), ("edge 0 1\n", 1), ("finite 2\nedge 0\n", 2), ("finite 2\nnode 1\n", 2)] {
        match FiniteGraph::parse(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn provider_json_forms() {
    let fin = GraphProvider::from_json(&json!({"type": "finite", "n": 3, "edges": [[0, 1], [1, 2]]})).unwrap();
    assert_eq!(fin.finite_graph().unwrap(), &FiniteGraph::path(3));
    let tree = GraphProvider::from_json(&json!({"type": "tree", "d": 3})).unwrap();
    assert_eq!(tree.neighbors(&tree.base()).unwrap().len(), 3);
    let gp = GraphProvider::from_json(&json!({"type": "grandparent", "d": 3})).unwrap();
    // parent, grandparent, 2 children, 4 grandchildren
    assert_eq!(gp.neighbors(&gp.base()).unwrap().len(), 8);
    let cay = GraphProvider::from_json(&json!({"type": "cayley", "group": {"type": "cyclic", "n": 5}})).unwrap();
    let b = ball(&cay, &cay.base(), 10, 100).unwrap();
    assert_eq!(b.graph, FiniteGraph::complete(5));
    let c5 = json!({"type": "cayley", "group": {"type": "cyclic", "n": 5, "generators": ["1", "4"]}});
    let b = ball(&GraphProvider::from_json(&c5).unwrap(), "0", 10, 100).unwrap();
    assert_eq!(b.graph.vertex_count(), 5);
    assert!(b.graph.is_connected() && (0..5).all(|v| b.graph.degree(v) == 2));
    assert!(GraphProvider::from_json(&json!({"type": "tree"})).is_err());
    assert!(GraphProvider::from_json(&json!({"type": "moebius"})).is_err());
}

#[test]
fn group_json_forms() {
    let z = GroupSpec::from_json(&json!({"type": "free_product_cyclic", "orders": [2, 2, 2]})).unwrap();
    assert_eq!(z.generator_count(), 3);
    assert!(z.is_symmetric());
    let f = GroupSpec::from_json(&json!({"type": "free", "rank": 2})).unwrap();
    assert_eq!(f.order(), None);
    let t = GroupSpec::from_json(&json!({"type": "finite_table", "mul": [[0, 1], [1, 0]]})).unwrap();
    assert_eq!(t.order(), Some(2));
    assert!(GroupSpec::from_json(&json!({"type": "finite_table", "n": 3, "mul": [[0, 1], [1, 0]]})).is_err());
    assert!(GroupSpec::from_json(&json!({"type": "cyclic", "n": 1})).is_err());
}

#[test]
fn orbit_examples() {
    let cfg = ClosureConfig::default();
    let p3 = MorContext::new(&FiniteGraph::path(3), Category::Planar, &cfg).unwrap();
    assert_eq!(quantum_orbits(&p3).count(), 2);
    let c4 = MorContext::new(&FiniteGraph::cycle(4), Category::Planar, &cfg).unwrap();
    assert_eq!(quantum_orbits(&c4).count(), 1);
    assert!(MorContext::new(&FiniteGraph::new(2), Category::Planar, &cfg).is_err());
}

#[test]
fn finite_graphs_are_unimodular() {
    let cfg = ClosureConfig { max_size: 3, ..Default::default() };
    for g in [FiniteGraph::path(4), FiniteGraph::star(3), FiniteGraph::complete(4)] {
        let ctx = MorContext::new(&g, Category::Planar, &cfg).unwrap();
        let classes = finite_pair_classes(&ctx).unwrap();
        let mu = mu_assignment(g.vertex_count(), 0, &classes).unwrap();
        assert!(mu.constant_on_orbits(&quantum_orbits(&ctx).orbit_of, None));
    }
}

#[test]
fn involution_relations_start_at_length_two() {
    let z = GroupSpec::free_product_cyclic(&[2, 2]).unwrap();
    let rel = relation_vectors(&z, 3).unwrap();
    assert!(rel.iter().find(|r| r.n == 1).is_none_or(|r| r.support.is_empty()));
    assert!(rel.iter().any(|r| r.n == 2 && !r.support.is_empty()));
}

#[test]
fn relation_supports_close_under_inverse_reversal() {
    let groups = [
        GroupSpec::free_product_cyclic(&[2, 3]).unwrap(),
        GroupSpec::free(2).unwrap(),
        GroupSpec::from_json(&json!({"type": "cyclic", "n": 6, "generators": ["1", "5", "2", "4"]})).unwrap(),
    ];
    for g in groups {
        assert!(g.is_symmetric());
        for rel in relation_vectors(&g, 4).unwrap() {
            for t in &rel.support {
                let back: Vec<usize> = t.iter().rev().map(|&s| g.inverse_index(s).unwrap()).collect();
                assert!(rel.support.contains(&back), "{t:?}");
            }
        }
    }
}

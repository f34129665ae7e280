//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use common::*;
use num_traits::One;
use qgs_core::algebra::{delta_factor, haar_suite, Haar, HaarConfig, HaarSuiteConfig};
use qgs_core::bilabeled::{random_blg, square_diagonal_gadget, BiLabeledGraph};
use qgs_core::graphs::{grandparent_graph, tree_graph, FiniteGraph, GroupSpec};
use qgs_core::hommat::hom_matrix;
use qgs_core::morspace::{
    analyze_window, check_conjugate, irreducibles, pair_signatures, quantum_orbits, Category, ClosureConfig, MorContext,
    SpectralConfig, Window,
};
use qgs_core::quantiso::planar_iso_test;
use qgs_core::quantization::{
    check_path_labeled, fiber_matrix, fiber_span_rank, noncrossing_even_count, path_labeled_family, required_radius, CayleyBall,
};
use qgs_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn lib_dense(k: &BiLabeledGraph, g: &FiniteGraph) -> Result<Dense, String> {
    hom_matrix(k, g).to_dense().map_err(err)
}

fn functoriality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases = 500;
    for case in 0..cases {
        let nv = rng.gen_range(1..=7);
        let g = random_graph(&mut rng, nv, 0.5);
        let (n, k, m) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let (va, vb, vc) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=3));
        let (nc, mc) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let a = random_blg(&mut rng, va, n, k, 0.5);
        let b = random_blg(&mut rng, vb, k, m, 0.5);
        let c = random_blg(&mut rng, vc, nc, mc, 0.5);
        let ta = lib_dense(&a, &g)?;
        let tb = lib_dense(&b, &g)?;
        let tc = lib_dense(&c, &g)?;
        ensure(ta == brute_hom_matrix(&a, &g), || format!("case {case}: T^K differs from enumeration"))?;
        let comp = a.compose(&b).map_err(err)?;
        ensure(lib_dense(&comp, &g)? == matmul(&ta, &tb), || format!("case {case}: composition"))?;
        ensure(lib_dense(&a.tensor(&c), &g)? == kron(&ta, &tc), || format!("case {case}: tensor"))?;
        ensure(lib_dense(&a.transpose(), &g)? == transpose(&ta), || format!("case {case}: transpose"))?;
        ensure(lib_dense(&a.tilde(), &g)? == reversal(&ta, nv, n, k), || format!("case {case}: tilde"))?;
    }
    Ok(format!("{cases} cases exact"))
}

/// Values of the square-with-diagonal gadget on oriented edge classes:
/// (child, parent), (parent, child), long edges in both directions.
fn grandparent_values(d: usize) -> Result<(Vec<i128>, Vec<i128>, Vec<i128>), String> {
    let p = grandparent_graph(d).map_err(err)?;
    let tree = p.orientation().ok_or("no orientation")?;
    let w = Window::new(&p, &p.base(), 4, 2, 500_000).map_err(err)?;
    let sigs = pair_signatures(&w, &[square_diagonal_gadget()]).map_err(err)?;
    let (mut pos, mut neg, mut long) = (Vec::new(), Vec::new(), Vec::new());
    for ((v, u), s) in sigs {
        let (kv, ku) = (&w.ball.keys[v], &w.ball.keys[u]);
        if tree.parent(kv).map_err(err)? == *ku {
            pos.push(s[0]);
        } else if tree.parent(ku).map_err(err)? == *kv {
            neg.push(s[0]);
        } else if tree.grandparent(kv).map_err(err)? == *ku || tree.grandparent(ku).map_err(err)? == *kv {
            long.push(s[0]);
        }
    }
    for v in [&mut pos, &mut neg, &mut long] {
        v.sort();
        v.dedup();
    }
    Ok((pos, neg, long))
}

fn numerology() -> Outcome {
    let mut out = Vec::new();
    for (d, want) in [(3, (5, 7, 3)), (4, (7, 13, 4))] {
        let (pos, neg, long) = grandparent_values(d)?;
        let got = (pos.clone(), neg.clone(), long.clone());
        ensure(got == (vec![want.0], vec![want.1], vec![want.2]), || format!("d={d}: got {pos:?}/{neg:?}/{long:?}"))?;
        out.push(format!("d={d} ({},{},{})", want.0, want.1, want.2));
    }
    Ok(out.join(", "))
}

fn modular() -> Outcome {
    let gadgets = [BiLabeledGraph::adjacency(), square_diagonal_gadget()];
    let p = grandparent_graph(3).map_err(err)?;
    let tree = p.orientation().ok_or("no orientation")?;
    let w = Window::new(&p, &p.base(), 6, 2, 500_000).map_err(err)?;
    let rep = analyze_window(&w, &gadgets, 2).map_err(err)?;
    let center = w.ball.center;
    let parent = w.ball.vertex(&tree.parent(&w.ball.keys[center]).map_err(err)?).ok_or("parent outside window")?;
    let cls = rep.classes.iter().find(|c| c.pairs.contains(&(center, parent))).ok_or("no class for the short edge")?;
    let two = Rational::from_integer(2.into());
    ensure((cls.d_left, cls.d_right) == (1, 2), || format!("dims {:?}", (cls.d_left, cls.d_right)))?;
    ensure(cls.rho() == two, || format!("rho {}", cls.rho()))?;
    ensure(rep.mu.ratio(center, parent) == Some(two.clone()), || "mu_parent/mu_child".into())?;
    for c in &rep.classes {
        for &(i, j) in &c.pairs {
            ensure(rep.mu.ratio(i, j) == Some(c.rho()), || format!("cocycle at ({i},{j})"))?;
            let df = delta_factor(&rep.mu, &[i], &[j]).ok_or("delta undefined")?;
            ensure(df == rep.mu.ratio(j, i).unwrap(), || format!("delta at ({i},{j})"))?;
        }
    }
    let t = tree_graph(3).map_err(err)?;
    let wt = Window::new(&t, &t.base(), 6, 2, 500_000).map_err(err)?;
    let rt = analyze_window(&wt, &gadgets, 2).map_err(err)?;
    ensure(rt.mu.is_constant(), || "tree mu not constant".into())?;
    for c in &rt.classes {
        for &(i, j) in &c.pairs {
            ensure(delta_factor(&rt.mu, &[i], &[j]).is_some_and(|r| r.is_one()), || "tree delta not identity".into())?;
        }
    }
    Ok(format!("grandparent(3) short class (1,2), rho=2, {} classes cocycle exact; tree(3) unimodular", rep.classes.len()))
}

fn classical() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..20 {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.1..0.6);
        let g = random_connected_graph(&mut rng, n, p);
        let ctx = MorContext::new(&g, Category::All, &ClosureConfig { max_size: 2, seed_vertices: 6, ..Default::default() })
            .map_err(err)?;
        let auts = brute_automorphisms(&g);
        let on_i = tuple_orbit_labels(n, 1, &auts);
        let on_ii = tuple_orbit_labels(n, 2, &auts);
        let (r00, r11) = (ctx.closure.mor_rank(0, 0), ctx.closure.mor_rank(1, 1));
        ensure(r00 == count_distinct(&on_i), || format!("case {case}: Mor(0,0) rank {r00} vs {}", count_distinct(&on_i)))?;
        ensure(r11 == count_distinct(&on_ii), || format!("case {case}: Mor(1,1) rank {r11} vs {}", count_distinct(&on_ii)))?;
        let q = quantum_orbits(&ctx);
        ensure(same_partition(&q.orbit_of, &on_i), || format!("case {case}: quantum orbits differ"))?;
    }
    Ok("20 graphs match brute-force orbit counts".into())
}

fn haar() -> Outcome {
    let mut worst = [0f64; 5];
    let mut min_pos = f64::INFINITY;
    for (name, g) in [
        ("C4", FiniteGraph::cycle(4)),
        ("K3", FiniteGraph::complete(3)),
        ("P3", FiniteGraph::path(3)),
        ("K4", FiniteGraph::complete(4)),
    ] {
        let h = Haar::<f64>::new(&g, &HaarConfig::default()).map_err(err)?;
        for e in 0..g.vertex_count() {
            let cfg = HaarSuiteConfig { samples: 200, max_n: 2, seed: e as u64, tol: 1e-9 };
            let r = haar_suite(&h, e, &cfg).map_err(err)?;
            ensure(r.passed, || format!("{name} base {e}: {r:?}"))?;
            min_pos = min_pos.min(r.min_positivity);
            for (w, x) in worst.iter_mut().zip([r.trace_property, r.left_invariance, r.right_modular, r.base_point, r.kappa_trace]) {
                *w = w.max(x);
            }
        }
    }
    Ok(format!(
        "min phi(x*x) {min_pos:.3e}, trace {:.1e}, invariance {:.1e}, psi/delta {:.1e}, base point {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn conjugates() -> Outcome {
    let mut count = 0;
    let mut worst = 0f64;
    for (name, g) in [("C4", FiniteGraph::cycle(4)), ("P3", FiniteGraph::path(3))] {
        let ctx = MorContext::new(&g, Category::Planar, &ClosureConfig { max_size: 4, ..Default::default() }).map_err(err)?;
        let orb = quantum_orbits(&ctx);
        let irr = irreducibles(&ctx, 2, &orb, &SpectralConfig::default()).map_err(err)?;
        for (p, _) in &irr.all {
            let c = check_conjugate(p).map_err(err)?;
            worst = worst.max(c.first).max(c.second);
            ensure(c.first < 1e-9 && c.second < 1e-9, || format!("{name} k={}: residuals {} {}", p.k, c.first, c.second))?;
            for (t, d) in [(c.trace_left, p.d_left), (c.trace_right, p.d_right)] {
                ensure((t - d as f64).abs() < 1e-9, || format!("{name} k={}: trace {t} vs dimension {d}", p.k))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} projections, worst residual {worst:.1e}, integer traces"))
}

fn planar_iso() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let (n, p) = (rng.gen_range(1..=8), rng.gen_range(0.0..0.6));
        let g = random_connected_graph(&mut rng, n, p);
        let h = g.permuted(&random_permutation(&mut rng, g.vertex_count()));
        let v = planar_iso_test(&g, &h, 6).map_err(err)?;
        ensure(!v.distinguished(), || format!("isomorphic pair {case} distinguished"))?;
    }
    let prism = FiniteGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap();
    let k33 = FiniteGraph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
    let mut pairs = vec![
        (FiniteGraph::path(4), FiniteGraph::star(3)),
        (FiniteGraph::cycle(4), FiniteGraph::path(4)),
        (prism, k33),
    ];
    for _ in 0..20 {
        let n = rng.gen_range(4..=8);
        let g = random_connected_graph(&mut rng, n, 0.3);
        let mut h = g.clone();
        let n = h.vertex_count();
        if let Some((a, b)) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| !h.has_edge(a, b)) {
            h.add_edge(a, b).unwrap();
            pairs.push((g, h));
        }
    }
    let mut swapped_pairs = 0;
    while swapped_pairs < 20 {
        let n = rng.gen_range(5..=8);
        let g = random_connected_graph(&mut rng, n, 0.4);
        if let Some(h) = degree_preserving_swap(&mut rng, &g) {
            if h.is_connected() && triangles(&h) != triangles(&g) {
                pairs.push((g, h));
                swapped_pairs += 1;
            }
        }
    }
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let v = planar_iso_test(a, b, 6).map_err(err)?;
        let again = planar_iso_test(a, b, 6).map_err(err)?;
        let swapped = planar_iso_test(b, a, 6).map_err(err)?;
        let w = v.witness.as_ref().ok_or_else(|| format!("pair {idx} not distinguished"))?;
        let w2 = again.witness.as_ref().ok_or("rerun lost the witness")?;
        ensure(
            (w.generator_index, w.vertex1, w.vertex2, w.count1, w.count2)
                == (w2.generator_index, w2.vertex1, w2.vertex2, w2.count1, w2.count2),
            || format!("pair {idx}: witness not reproducible"),
        )?;
        let pg = &w.generator;
        ensure(w.count1 != w.count2, || format!("pair {idx}: witness counts agree"))?;
        ensure(brute_rooted_count(&pg.graph, pg.root, a, w.vertex1) == w.count1, || format!("pair {idx}: count1 wrong"))?;
        ensure(brute_rooted_count(&pg.graph, pg.root, b, w.vertex2) == w.count2, || format!("pair {idx}: count2 wrong"))?;
        let ws = swapped.witness.as_ref().ok_or_else(|| format!("pair {idx}: swap not distinguished"))?;
        ensure(ws.generator_index == w.generator_index, || format!("pair {idx}: asymmetric witness"))?;
    }
    Ok(format!("500 isomorphic pairs indistinguishable, {} distinguished pairs with verified witnesses", pairs.len()))
}

fn quantization() -> Outcome {
    let g = GroupSpec::free_product_cyclic(&[2, 2, 2, 2]).map_err(err)?;
    let mut ranks = Vec::new();
    for k in 1..=3 {
        ranks.push(fiber_span_rank(&g, k, k, 1, 1_000_000).map_err(err)?.rank);
    }
    let oracle = brute_noncrossing_even(6);
    ensure(oracle == noncrossing_even_count(6).map_err(err)?, || "noncrossing counts disagree".into())?;
    ensure(ranks == vec![1, 3, oracle], || format!("ranks {ranks:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fams: Vec<Vec<Vec<BiLabeledGraph>>> =
        (1..=2).map(|n| (1..=2).map(|m| path_labeled_family(n, m, 1)).collect()).collect();
    let mut checked = 0;
    while checked < 100 {
        let (n, k, m) = (rng.gen_range(0..2), rng.gen_range(0..2), rng.gen_range(0..2));
        let a = &fams[n][k][rng.gen_range(0..fams[n][k].len())];
        let b = &fams[k][m][rng.gen_range(0..fams[k][m].len())];
        let c = a.compose(b).map_err(err)?;
        if check_path_labeled(&c).is_err() {
            continue;
        }
        let ball = CayleyBall::new(&g, required_radius(&[a.clone(), b.clone(), c.clone()]), 1_000_000).map_err(err)?;
        let lhs = fiber_matrix(&c, &ball).map_err(err)?;
        let rhs = fiber_matrix(a, &ball).map_err(err)?.mul(&fiber_matrix(b, &ball).map_err(err)?).map_err(err)?;
        ensure(lhs == rhs, || format!("pair {checked}: composition is not the product"))?;
        checked += 1;
    }
    Ok(format!("ranks {ranks:?} (noncrossing even oracle {oracle}), 100 compositions exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("functoriality", functoriality, 60),
        ("grandparent numerology", numerology, 120),
        ("dimensions and modular function", modular, 120),
        ("classical oracle", classical, 180),
        ("Haar functionals", haar, 300),
        ("conjugate equations", conjugates, 300),
        ("planar isomorphism", planar_iso, 300),
        ("fiber functor ranks", quantization, 300),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(_) if took > Duration::from_secs(*limit) => Err(format!("took {took:.1?}, limit {limit} s")),
            r => r,
        };
        match res {
            Ok(msg) => println!("criterion {}: PASS {name} ({took:.1?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.1?}): {msg}", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

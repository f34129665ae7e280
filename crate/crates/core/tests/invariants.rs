use qgs_core::graphs::FiniteGraph;
use qgs_core::hommat::decode;
use qgs_core::morspace::{
    finite_pair_classes, irreducibles, mu_assignment, quantum_orbits, Category, ClosureConfig, MorContext, SpectralConfig,
};

fn setups() -> Vec<FiniteGraph> {
    vec![FiniteGraph::path(3), FiniteGraph::star(3), FiniteGraph::path(4)]
}

#[test]
fn support_lies_where_mu_ratio_is_rho() {
    for g in setups() {
        let ctx = MorContext::new(&g, Category::Planar, &ClosureConfig { max_size: 4, ..Default::default() }).unwrap();
        let nv = g.vertex_count();
        let mu = mu_assignment(nv, 0, &finite_pair_classes(&ctx).unwrap()).unwrap();
        let orb = quantum_orbits(&ctx);
        let irr = irreducibles(&ctx, 2, &orb, &SpectralConfig::default()).unwrap();
        for (p, _) in &irr.all {
            let m = &p.matrix;
            for r in 0..m.rows() {
                if m.get(r, r).abs() > 1e-9 {
                    let i = decode(r, nv, p.k + 1);
                    assert_eq!(mu.ratio(i[0], i[p.k]).unwrap(), p.rho(), "tuple {i:?}");
                }
            }
        }
    }
}

#[test]
fn rho_is_multiplicative() {
    for g in setups() {
        let ctx = MorContext::new(&g, Category::Planar, &ClosureConfig { max_size: 4, ..Default::default() }).unwrap();
        let orb = quantum_orbits(&ctx);
        let irr = irreducibles(&ctx, 2, &orb, &SpectralConfig::default()).unwrap();
        let ones: Vec<_> = irr.all.iter().map(|(p, _)| p).filter(|p| p.k == 1).collect();
        let twos: Vec<_> = irr.all.iter().map(|(p, _)| p).filter(|p| p.k == 2).collect();
        let mut hits = 0;
        for p in &ones {
            for q in &ones {
                let pq = p.matrix.rel_tensor(&q.matrix);
                for r in &twos {
                    if r.matrix.mul(&pq).unwrap().max_abs() > 1e-7 {
                        assert_eq!(r.rho(), p.rho() * q.rho());
                        hits += 1;
                    }
                }
            }
        }
        assert!(hits > 0);
    }
}

#[test]
fn traces_are_integral() {
    for g in setups() {
        let ctx = MorContext::new(&g, Category::Planar, &ClosureConfig { max_size: 4, ..Default::default() }).unwrap();
        let orb = quantum_orbits(&ctx);
        for (p, _) in irreducibles(&ctx, 2, &orb, &SpectralConfig::default()).unwrap().all {
            for side in [true, false] {
                for t in p.matrix.partial_trace(side) {
                    assert!((t - t.round()).abs() < 1e-9);
                }
            }
        }
    }
}

use charrig_core::cochains::{homology, integral_cohomology};
use charrig_core::corpus;
use charrig_core::geometry::{
    bound_in_good_neighborhood, collapse, is_pseudomanifold, normalize, sample_cycles, BoundOutcome, SubdivisionTower,
};
use num_traits::Zero;

#[test]
fn every_sample_cycle_normalizes_and_bounds_when_trivial() {
    for name in corpus::NAMES {
        let x = corpus::get(name);
        let tower = SubdivisionTower::new(x.clone());
        for j in 0..x.dim() {
            let h = homology(&x, j);
            for (cname, z) in sample_cycles(&x, j) {
                let n = normalize(&tower, j, &z).unwrap_or_else(|e| panic!("{name} {cname}: {e}"));
                assert!(is_pseudomanifold(&n.pseudomanifold), "{name} {cname}");
                assert!(n.identity_holds(), "{name} {cname}");
                assert!(n.supported_near_cycle(), "{name} {cname}");
                let trivial = h.coordinates(&z).iter().all(Zero::is_zero);
                match bound_in_good_neighborhood(&tower, &n, 2).unwrap_or_else(|e| panic!("{name} {cname}: {e}")) {
                    BoundOutcome::Bounds(b) => {
                        assert!(trivial, "{name} {cname} bounds but is nontrivial");
                        let target = tower.transport(j, &n.pseudomanifold.image_cycle(), n.depth(), b.depth).unwrap();
                        assert_eq!(b.boundary(), target, "{name} {cname}");
                        assert!(b.vanishes);
                        if x.dim() > j + 1 {
                            assert!(b.unit_coefficients, "{name} {cname}");
                        }
                        // direct check where the neighborhood is small enough for a full reduction
                        let (_, rest) = collapse(&b.region);
                        let (reduced, _) = rest.to_complex("rest");
                        let target = if b.complex.counts().iter().sum::<usize>() <= 1500 { &b.complex } else { &reduced };
                        for d in j + 1..=target.dim() {
                            assert!(integral_cohomology(target, d).is_trivial(), "{name} {cname} H^{d}");
                        }
                    }
                    BoundOutcome::NotNullHomologous { coords, .. } => {
                        assert!(!trivial, "{name} {cname}");
                        assert_eq!(coords, h.coordinates(&z));
                    }
                }
            }
        }
    }
}

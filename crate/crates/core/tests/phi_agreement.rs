use charrig_core::characters::{phi_direct, phi_good_in, phi_via_pseudomanifold};
use charrig_core::complex::Subcomplex;
use charrig_core::corpus;
use charrig_core::diffcocycle::{generator_classes, random_class};
use charrig_core::geometry::{good_neighborhood, neighborhood_at, normalize, sample_cycles, SubdivisionTower};
use charrig_core::arith::frac;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn good_neighborhood_evaluation_matches_direct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in corpus::NAMES {
        let x = corpus::get(name);
        let tower = SubdivisionTower::new(x.clone());
        for k in 1..=x.dim() + 1 {
            let j = k - 1;
            let mut classes = generator_classes(&x, k);
            classes.extend((0..3).map(|_| random_class(&x, k, &mut rng)));
            for (cname, z) in sample_cycles(&x, j) {
                let support = Subcomplex::support(x.clone(), j, &z);
                let nb = good_neighborhood(&tower, &support, j, 2).unwrap();
                // every deeper good neighborhood gives the same value
                let others: Vec<_> = (nb.depth..=2)
                    .map(|d| neighborhood_at(&tower, &support, j, d).unwrap())
                    .filter(|n| n.vanishes)
                    .collect();
                for v in &classes {
                    let direct = phi_direct(v).evaluate(&z).unwrap();
                    assert_eq!(phi_good_in(v, &z, &nb).unwrap(), direct, "{name} k={k} {cname}");
                    for o in &others {
                        assert_eq!(phi_good_in(v, &z, o).unwrap(), direct, "{name} k={k} {cname} depth {}", o.depth);
                    }
                }
            }
        }
    }
}

#[test]
fn boundaries_evaluate_to_curvature() {
    for name in ["s2", "t2", "rp2"] {
        let x = corpus::get(name);
        let tower = SubdivisionTower::new(x.clone());
        for k in 1..=x.dim() {
            let d = x.boundary_matrix(k).unwrap();
            for v in generator_classes(&x, k) {
                for e in 0..x.count(k).min(3) {
                    let z = d.column(e);
                    let got = charrig_core::characters::phi_good(&v, &z, &tower, 2).unwrap();
                    assert_eq!(got, frac(v.rep.omega.value(e)), "{name} k={k} e={e}");
                }
            }
        }
    }
}

#[test]
fn pseudomanifold_decomposition_is_consistent() {
    for name in corpus::NAMES {
        let x = corpus::get(name);
        let tower = SubdivisionTower::new(x.clone());
        for j in 0..x.dim() {
            for (cname, z) in sample_cycles(&x, j) {
                let n = normalize(&tower, j, &z).unwrap_or_else(|e| panic!("{name} {cname}: {e}"));
                assert!(n.identity_holds(), "{name} {cname}");
                for v in generator_classes(&x, j + 1) {
                    let (curv, on_p) = phi_via_pseudomanifold(&v, &n).unwrap();
                    let direct = phi_direct(&v).evaluate(&z).unwrap();
                    assert_eq!(frac(&(curv + on_p)), direct, "{name} {cname}");
                }
            }
        }
    }
}

use std::hint::black_box;

use charrig_core::cochains::{cohomology, Ring};
use charrig_core::complex::barycentric_subdivide;
use charrig_core::corpus;
use charrig_core::diagram::verify_diagram;
use charrig_core::equivalence::verify_equivalence;
use charrig_core::product::verify_ring_axioms;
use charrig_core::zlin::smith_normal_form;
use criterion::{criterion_group, criterion_main, Criterion};

fn smith_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith_normal_form");
    for name in ["t2", "moore3"] {
        let sd = barycentric_subdivide(&corpus::get(name));
        let d2 = sd.fine.boundary_matrix(2).unwrap().clone();
        g.bench_function(format!("sd_{name}_boundary2"), |b| b.iter(|| smith_normal_form(black_box(&d2))));
    }
    g.finish();
}

fn cohomology_groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    for name in ["rp2", "klein"] {
        g.bench_function(name, |b| {
            b.iter(|| {
                // fresh complex each time so cached reductions are not reused
                let x = corpus::get(name);
                [Ring::Z, Ring::Q, Ring::QmodZ].map(|r| cohomology(&x, 2, r).rank)
            })
        });
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    let x = corpus::get("t2");
    g.bench_function("diagram_t2_k2", |b| b.iter(|| verify_diagram(&x, 2, 0)));
    g.bench_function("phi_t2_k2", |b| b.iter(|| verify_equivalence(&x, 2, 0, 2)));
    g.bench_function("ring_t2_1_1", |b| b.iter(|| verify_ring_axioms(&x, 1, 1, 0)));
    g.finish();
}

criterion_group!(benches, smith_forms, cohomology_groups, suites);
criterion_main!(benches);

//! The product `∗` on differential cocycle classes and an executable check
//! of the ring axioms over a seeded grid of sample classes.
//!
//! On representatives,
//! `(c₁, h₁, ω₁) ∗ (c₂, h₂, ω₂) = (c₁∪c₂, (−1)^k c₁∪h₂ + h₁∪ω₂, ω₁∪ω₂)`
//! with `∪` the Alexander–Whitney cup product. The curvature of a product is
//! a cup product of cochains, and equivalence never changes curvature, so
//! graded commutativity at class level needs `ω₁∪ω₂ = (−1)^{kl} ω₂∪ω₁` as
//! cochains. The checks below report that identity separately.

use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{format_rational, rat};
use crate::cochains::{
    class_of, cohomology, cup, representative, Cochain, CohomologyClass, QuotientForm, Ring,
};
use crate::complex::{barycentric_subdivide, closed_star_neighborhood, Complex, SimplicialMap, Subcomplex};
use crate::diffcocycle::{
    delta1, delta2, generator_classes, i1, i2, pullback, random_class, DiffClass, DifferentialCocycle,
};
use crate::error::{Error, Result};
use crate::report::Check;

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `x ∗ y`, validated as a differential cocycle.
pub fn star(x: &DiffClass, y: &DiffClass) -> Result<DiffClass> {
    if !Arc::ptr_eq(&x.complex, &y.complex) {
        return Err(Error::Mismatch("product of classes on different complexes".into()));
    }
    let cx = &*x.complex;
    let (a, b) = (&x.rep, &y.rep);
    let c = cup(cx, &a.c, &b.c)?;
    let h = &cup(cx, &a.c, &b.h)?.scale_int(sign(a.k)) + &cup(cx, &a.h, &b.omega)?;
    let omega = cup(cx, &a.omega, &b.omega)?;
    DiffClass::new(x.complex.clone(), DifferentialCocycle { k: a.k + b.k, c, h, omega })
}

/// `(−1)^{kl} y ∗ x`, the product with its factors exchanged.
pub fn star_transposed(x: &DiffClass, y: &DiffClass) -> Result<DiffClass> {
    Ok(star(y, x)?.scale(sign(x.degree() * y.degree())))
}

/// A named sample class.
#[derive(Clone, Debug)]
pub struct Sample {
    pub name: String,
    pub class: DiffClass,
}

/// Generators, zero and `randoms` seeded random classes in degree `k`.
pub fn sample_classes(x: &Arc<Complex>, k: usize, randoms: usize, rng: &mut ChaCha8Rng) -> Vec<Sample> {
    let mut out: Vec<Sample> = generator_classes(x, k)
        .into_iter()
        .enumerate()
        .map(|(i, class)| Sample { name: format!("gen{i}"), class })
        .collect();
    out.push(Sample { name: "zero".into(), class: DiffClass::zero(x.clone(), k) });
    for i in 0..randoms {
        out.push(Sample { name: format!("random{i}"), class: random_class(x, k, rng) });
    }
    out
}

/// `Q/Z` classes of degree `j`: generators and seeded random combinations.
fn sample_flat(x: &Complex, j: usize, rng: &mut ChaCha8Rng) -> Vec<(String, CohomologyClass)> {
    use rand::Rng;
    let g = cohomology(x, j, Ring::QmodZ);
    let mut out: Vec<_> =
        (0..g.ngens()).map(|i| (format!("gen{i}"), CohomologyClass::generator(x, Ring::QmodZ, j, i))).collect();
    if g.ngens() > 0 {
        for r in 0..2 {
            let coords = (0..g.ngens())
                .map(|i| {
                    let t = g.modulus(i);
                    let d = if t.is_zero() { crate::arith::int(rng.random_range(1..=6i64)) } else { t };
                    crate::Rational::new(crate::arith::int(rng.random_range(0..12i64)), d)
                })
                .collect();
            let u = CohomologyClass::from_coords(x, Ring::QmodZ, j, coords).expect("valid Q/Z coordinates");
            out.push((format!("random{r}"), u));
        }
    }
    out
}

/// Rational `j`-cochains standing for elements of `Λ^j / Λ^j_Z`.
fn sample_forms(x: &Complex, j: usize, rng: &mut ChaCha8Rng) -> Vec<(String, QuotientForm)> {
    use rand::Rng;
    let mut out: Vec<_> = x
        .simplices(j)
        .iter()
        .take(3)
        .enumerate()
        .map(|(i, s)| {
            let e = Cochain::indicator(x, Ring::Q, s).expect("simplex").scale(&rat(1, 3)).expect("scale");
            (format!("third{i}"), QuotientForm::new(e))
        })
        .collect();
    for r in 0..2 {
        let values = (0..x.count(j)).map(|_| rat(rng.random_range(-5..=5i64), rng.random_range(1..=4i64))).collect();
        out.push((format!("random{r}"), QuotientForm::new(Cochain::rational(j, values))));
    }
    out
}

/// Outcome of one grid point: `None` when it holds, otherwise a witness.
type Outcome = Option<Value>;

fn grid_check(name: &str, outcomes: Vec<(String, Outcome)>) -> Check {
    let checked = outcomes.len();
    let failures: Vec<Value> =
        outcomes.into_iter().filter_map(|(at, o)| o.map(|w| json!({ "at": at, "witness": w }))).collect();
    if failures.is_empty() {
        Check::pass(name, json!({ "checked": checked }))
    } else {
        Check::fail(
            name,
            json!({ "checked": checked, "failed": failures.len(), "first_failures": failures.into_iter().take(3).collect::<Vec<_>>() }),
        )
    }
}

fn outcome(r: Result<bool>, witness: impl FnOnce() -> Value) -> Outcome {
    match r {
        Ok(true) => None,
        Ok(false) => Some(witness()),
        Err(e) => Some(json!({ "error": e.to_string() })),
    }
}

/// First simplex where two cochains differ, with both values.
fn first_difference(x: &Complex, a: &Cochain, b: &Cochain) -> Value {
    let n = a.degree();
    match (0..a.len()).find(|&i| a.value(i) != b.value(i)) {
        Some(i) => json!({
            "simplex": x.simplex(n, i),
            "left": format_rational(a.value(i)),
            "right": format_rational(b.value(i)),
        }),
        None => Value::Null,
    }
}

/// Order-preserving maps into `x` used for naturality: the last-vertex
/// retraction of the barycentric subdivision, the inclusion of the closed
/// star of vertex 0 and the constant map from a point.
pub fn naturality_maps(x: &Arc<Complex>) -> Vec<(String, SimplicialMap)> {
    let mut maps = Vec::new();
    let sd = barycentric_subdivide(x);
    maps.push(("subdivision_retraction".to_string(), sd.retraction.clone()));
    if x.count(0) > 0 {
        let v = Subcomplex::generated_by(x.clone(), [vec![0]]);
        let star = closed_star_neighborhood(x, &v);
        let (_, inclusion) = star.to_complex(format!("star0({})", x.name()));
        maps.push(("vertex_star_inclusion".to_string(), inclusion));
        let point = Arc::new(Complex::from_simplices("point", [vec![0]]).expect("point"));
        maps.push(("constant".to_string(), SimplicialMap::constant(point, x.clone(), x.count(0) - 1).expect("vertex")));
    }
    maps.into_iter().filter(|(_, m)| m.is_order_preserving()).collect()
}

/// The ring-axiom checks in degrees `(k, l)` on `x`, sampled with `seed`.
pub fn verify_ring_axioms(x: &Arc<Complex>, k: usize, l: usize, seed: u64) -> Vec<Check> {
    if k == 0 || l == 0 {
        return vec![Check::skipped("ring_axioms", "degrees start at 1")];
    }
    let top = x.dim() + 1;
    if k > top || l > top {
        return vec![Check::skipped("ring_axioms", format!("a factor lies above degree {top}, where every class vanishes"))];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = sample_classes(x, k, 2, &mut rng);
    let ys = sample_classes(x, l, 2, &mut rng);
    let pairs: Vec<(&Sample, &Sample)> = xs.iter().flat_map(|a| ys.iter().map(move |b| (a, b))).collect();
    let label = |a: &Sample, b: &Sample| format!("{}*{}", a.name, b.name);
    let cx = &**x;

    let mut checks = Vec::new();

    // products are closed, of degree k + l and integral curvature
    let products: Vec<Result<DiffClass>> = pairs.par_iter().map(|(a, b)| star(&a.class, &b.class)).collect();
    checks.push(grid_check(
        "product_degree_and_closure",
        pairs
            .iter()
            .zip(&products)
            .map(|((a, b), p)| {
                let o = match p {
                    Ok(p) => (!(p.degree() == k + l && p.rep.is_valid(cx)))
                        .then(|| json!({ "degree": p.degree(), "valid": p.rep.is_valid(cx) })),
                    Err(e) => Some(json!({ "error": e.to_string() })),
                };
                (label(a, b), o)
            })
            .collect(),
    ));
    let products: Vec<DiffClass> = match products.into_iter().collect::<Result<Vec<_>>>() {
        Ok(p) => p,
        Err(e) => {
            checks.push(Check::fail("ring_axioms", json!({ "error": e.to_string() })));
            return checks;
        }
    };

    // the product does not depend on representatives
    checks.push(grid_check(
        "product_descends_to_classes",
        pairs
            .par_iter()
            .zip(&products)
            .map(|((a, b), p)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
                let a2 = shift_randomly(&a.class, &mut rng);
                let b2 = shift_randomly(&b.class, &mut rng);
                let r = star(&a2, &b2).and_then(|q| q.class_equal(p));
                (label(a, b), outcome(r, || json!("shifted representatives give another class")))
            })
            .collect(),
    ));

    checks.push(grid_check(
        "graded_commutativity",
        pairs
            .par_iter()
            .zip(&products)
            .map(|((a, b), p)| {
                let r = star_transposed(&a.class, &b.class).and_then(|q| q.class_equal(p));
                let o = outcome(r, || {
                    let flipped = cup(cx, &b.class.rep.omega, &a.class.rep.omega).expect("cup").scale_int(sign(k * l));
                    json!({
                        "curvature_products_agree": flipped == p.rep.omega,
                        "curvature_difference": first_difference(cx, &p.rep.omega, &flipped),
                    })
                });
                (label(a, b), o)
            })
            .collect(),
    ));

    // restricted to flat factors the curvature identity is automatic
    checks.push(grid_check(
        "graded_commutativity_of_flat_classes",
        pairs
            .par_iter()
            .zip(&products)
            .filter(|((a, b), _)| a.class.rep.omega.is_zero() && b.class.rep.omega.is_zero())
            .map(|((a, b), p)| {
                let r = star_transposed(&a.class, &b.class).and_then(|q| q.class_equal(p));
                (label(a, b), outcome(r, || json!("exchanged product is another flat class")))
            })
            .collect(),
    ));

    checks.push(grid_check(
        "curvature_of_product_is_cup",
        pairs
            .par_iter()
            .zip(&products)
            .map(|((a, b), p)| {
                let want = cup(cx, &delta1(&a.class), &delta1(&b.class)).expect("cup");
                let got = delta1(p);
                let o = (got != want).then(|| first_difference(cx, &got, &want));
                (label(a, b), o)
            })
            .collect(),
    ));

    checks.push(grid_check(
        "characteristic_class_of_product_is_cup",
        pairs
            .par_iter()
            .zip(&products)
            .map(|((a, b), p)| {
                let ca = representative(cx, &delta2(&a.class));
                let cb = representative(cx, &delta2(&b.class));
                let r = cup(cx, &ca, &cb).and_then(|c| class_of(cx, &c)).map(|want| want == delta2(p));
                (label(a, b), outcome(r, || json!({ "product": delta2(p).to_json() })))
            })
            .collect(),
    ));

    // x ∗ i₁(u) = (−1)^k i₁(δ₂(x) ∪ u)
    let flats = sample_flat(cx, l - 1, &mut rng);
    let flat_pairs: Vec<(&Sample, &(String, CohomologyClass))> =
        xs.iter().flat_map(|a| flats.iter().map(move |u| (a, u))).collect();
    checks.push(grid_check(
        "product_with_flat_class",
        flat_pairs
            .par_iter()
            .map(|(a, (un, u))| {
                let r = (|| {
                    let lhs = star(&a.class, &i1(x, u))?;
                    let cu = cup(cx, &representative(cx, &delta2(&a.class)), &representative(cx, u))?;
                    let rhs = i1(x, &class_of(cx, &cu)?).scale(sign(k));
                    lhs.class_equal(&rhs)
                })();
                (format!("{}*i1({un})", a.name), outcome(r, || json!("classes differ")))
            })
            .collect(),
    ));

    // x ∗ i₂(θ) = (−1)^k i₂(δ₁(x) ∪ θ)
    let forms = sample_forms(cx, l - 1, &mut rng);
    let form_pairs: Vec<(&Sample, &(String, QuotientForm))> =
        xs.iter().flat_map(|a| forms.iter().map(move |t| (a, t))).collect();
    checks.push(grid_check(
        "product_with_topologically_trivial_class",
        form_pairs
            .par_iter()
            .map(|(a, (tn, t))| {
                let r = (|| {
                    let lhs = star(&a.class, &i2(x, t))?;
                    let wt = cup(cx, &delta1(&a.class), &t.representative)?;
                    let rhs = i2(x, &QuotientForm::new(wt)).scale(sign(k));
                    lhs.class_equal(&rhs)
                })();
                (format!("{}*i2({tn})", a.name), outcome(r, || json!("classes differ")))
            })
            .collect(),
    ));

    checks.push(grid_check(
        "biadditivity",
        pairs
            .par_iter()
            .map(|(a, b)| {
                let r = (|| {
                    let a2 = &xs[(xs.len() - 1).min(1)].class;
                    let b2 = &ys[(ys.len() - 1).min(1)].class;
                    let left = star(&a.class.add(a2)?, &b.class)?.class_equal(&star(&a.class, &b.class)?.add(&star(a2, &b.class)?)?)?;
                    let right = star(&a.class, &b.class.add(b2)?)?.class_equal(&star(&a.class, &b.class)?.add(&star(&a.class, b2)?)?)?;
                    Ok(left && right)
                })();
                (label(a, b), outcome(r, || json!("sum of products differs from product of sums")))
            })
            .collect(),
    ));

    if k + l < top {
        let zs = sample_classes(x, 1, 1, &mut rng);
        let zs = &zs;
        let triples: Vec<(&Sample, &Sample, &Sample)> = xs
            .iter()
            .take(4)
            .flat_map(|a| ys.iter().take(4).flat_map(move |b| zs.iter().take(3).map(move |c| (a, b, c))))
            .collect();
        checks.push(grid_check(
            "associativity",
            triples
                .par_iter()
                .map(|(a, b, c)| {
                    let r = (|| {
                        let left = star(&star(&a.class, &b.class)?, &c.class)?;
                        let right = star(&a.class, &star(&b.class, &c.class)?)?;
                        left.class_equal(&right)
                    })();
                    (format!("{}*{}*{}", a.name, b.name, c.name), outcome(r, || json!("bracketings differ")))
                })
                .collect(),
        ));
    } else {
        checks.push(Check::skipped("associativity", format!("a third factor of degree 1 lands above degree {top}")));
    }

    let maps = naturality_maps(x);
    let nat_points: Vec<(&(String, SimplicialMap), &(&Sample, &Sample))> =
        maps.iter().flat_map(|m| pairs.iter().take(16).map(move |p| (m, p))).collect();
    checks.push(grid_check(
        "naturality",
        nat_points
            .par_iter()
            .map(|((mn, m), (a, b))| {
                let r = (|| {
                    let left = pullback(m, &star(&a.class, &b.class)?)?;
                    let right = star(&pullback(m, &a.class)?, &pullback(m, &b.class)?)?;
                    left.class_equal(&right)
                })();
                (format!("{mn}:{}", label(a, b)), outcome(r, || json!("pullback of product differs")))
            })
            .collect(),
    ));

    checks.push(uniqueness_mechanism(x, &xs, &forms, &pairs, &products, k + l));
    checks
}

fn shift_randomly(v: &DiffClass, rng: &mut ChaCha8Rng) -> DiffClass {
    use rand::Rng;
    let x = &*v.complex;
    let k = v.degree();
    let b: Vec<_> = (0..x.count(k - 1)).map(|_| crate::arith::int(rng.random_range(-2..=2i64))).collect();
    let s = (k >= 2).then(|| {
        Cochain::rational(k - 2, (0..x.count(k - 2)).map(|_| rat(rng.random_range(-3..=3i64), 2)).collect())
    });
    DiffClass { complex: v.complex.clone(), rep: v.rep.shifted(x, &Cochain::integral(k - 1, &b), s.as_ref()) }
}

/// Compare `∗` with the exchanged product `(−1)^{kl} y ∗ x`. Two products
/// satisfying the axioms differ by a class with zero curvature, which is
/// then an `i₁`-image, and they agree when a factor is an `i₂`-image.
fn uniqueness_mechanism(
    x: &Arc<Complex>,
    xs: &[Sample],
    forms: &[(String, QuotientForm)],
    pairs: &[(&Sample, &Sample)],
    products: &[DiffClass],
    degree: usize,
) -> Check {
    let cx = &**x;
    let outcomes: Vec<(String, Outcome)> = pairs
        .par_iter()
        .zip(products)
        .map(|((a, b), p)| {
            let at = format!("{}*{}", a.name, b.name);
            let d = match star_transposed(&a.class, &b.class).and_then(|q| p.sub(&q)) {
                Ok(d) => d,
                Err(e) => return (at, Some(json!({ "error": e.to_string() }))),
            };
            if !delta1(&d).is_zero() {
                return (at, Some(json!({ "difference_has_curvature": first_difference(cx, &delta1(&d), &Cochain::zero(cx, Ring::Q, degree)) })));
            }
            // zero curvature: h is closed mod 1 and the difference is i₁ of its class
            let u = d.rep.h.with_ring(Ring::QmodZ).and_then(|h| class_of(cx, &h));
            let o = match u {
                Ok(u) => outcome(i1(x, &u).class_equal(&d), || json!("flat difference is not an i1-image")),
                Err(e) => Some(json!({ "error": e.to_string() })),
            };
            (at, o)
        })
        .collect();
    // with an i₂-image factor the two products agree
    let trivial_factor: Vec<(String, Outcome)> = xs
        .par_iter()
        .flat_map_iter(|a| forms.iter().map(move |t| (a, t)))
        .map(|(a, (tn, t))| {
            let b = i2(x, t);
            let r = star(&a.class, &b).and_then(|p| star_transposed(&a.class, &b).and_then(|q| p.class_equal(&q)));
            (format!("{}*i2({tn})", a.name), outcome(r, || json!("products differ on an i2-image")))
        })
        .collect();
    let mut all = outcomes;
    all.extend(trivial_factor);
    grid_check("uniqueness_against_exchanged_product", all)
}

//! Checks that `Φ` identifies differential cocycle classes with characters
//! in one degree: round trips through the inverse, agreement of the direct
//! and good-neighborhood evaluations, compatibility with `i₁`, `i₂`, `δ₁`,
//! `δ₂` and pullbacks, and the exact rows on both sides of `Φ`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::frac;
use crate::characters::{
    char_i1, char_i2, char_pullback, delta2_via_lift, flat_class, phi_direct, phi_good_in, phi_inverse, Character,
};
use crate::cochains::{bockstein, integral_form_generators, LiftStrategy, QuotientForm};
use crate::complex::{Complex, Subcomplex};
use crate::diagram::{flat_samples, form_samples};
use crate::diffcocycle::{delta1_preimage, delta2, generator_classes, i1, i2, pullback, random_class, DiffClass};
use crate::geometry::{good_neighborhood, neighborhood_at, sample_cycles, SubdivisionTower};
use crate::product::naturality_maps;
use crate::report::Check;

/// Seeded random classes per complex used for round trips.
pub const ROUND_TRIPS: usize = 20;

fn all_hold(name: &str, failures: Vec<Value>, checked: usize) -> Check {
    if failures.is_empty() {
        Check::pass(name, json!({ "checked": checked }))
    } else {
        Check::fail(name, json!({ "checked": checked, "failed": failures.len(), "first_failures": failures.into_iter().take(3).collect::<Vec<_>>() }))
    }
}

const STRATEGIES: [LiftStrategy; 2] = [LiftStrategy::Unit, LiftStrategy::Centered];

/// The `Φ` checks in degree `k ≥ 1`; good neighborhoods are searched at most
/// `max_subdiv` subdivisions deep.
pub fn verify_equivalence(x: &Arc<Complex>, k: usize, seed: u64, max_subdiv: usize) -> Vec<Check> {
    assert!(k >= 1, "differential classes start in degree 1");
    let j = k - 1;
    let cx = &**x;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let randoms: Vec<DiffClass> = (0..ROUND_TRIPS).map(|_| random_class(x, k, &mut rng)).collect();
    let mut classes = generator_classes(x, k);
    classes.extend(randoms.iter().cloned());
    let flats = flat_samples(cx, j, &mut rng);
    let forms = form_samples(cx, j, &mut rng);
    let mut checks = Vec::new();

    let fails: Vec<Value> = classes
        .par_iter()
        .filter_map(|v| {
            let ch = phi_direct(v);
            let valid = Character::new(x.clone(), k, ch.f_values.clone(), ch.omega.clone()).is_ok();
            let back = STRATEGIES.iter().all(|&s| {
                let w = phi_inverse(&ch, s);
                w.rep.is_valid(cx) && w.class_equal(v).unwrap_or(false) && phi_direct(&w) == ch
            });
            (!(valid && back)).then(|| json!({ "class": v.to_json(), "character_valid": valid }))
        })
        .collect();
    checks.push(all_hold("round_trip", fails, classes.len()));

    // Φ is constant on classes
    let fails: Vec<Value> = classes
        .par_iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let shifted = v.add(&random_class(x, k, &mut r)).and_then(|a| {
                let mut r2 = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                a.sub(&random_class(x, k, &mut r2))
            });
            match shifted {
                Ok(w) if phi_direct(&w) == phi_direct(v) => None,
                Ok(_) => Some(json!({ "class": v.to_json() })),
                Err(e) => Some(json!({ "error": e.to_string() })),
            }
        })
        .collect();
    checks.push(all_hold("phi_constant_on_classes", fails, classes.len()));

    checks.push(phi_good_check(x, k, &classes, max_subdiv));

    // compatibility with the inclusions and δ₁
    let mut fails: Vec<Value> = flats
        .iter()
        .filter(|u| phi_direct(&i1(x, u)) != char_i1(x, u))
        .map(|u| json!({ "i1": u.to_json() }))
        .collect();
    fails.extend(forms.iter().filter_map(|t| {
        let q = QuotientForm::new(t.clone());
        (phi_direct(&i2(x, &q)) != char_i2(x, &q)).then(|| json!({ "i2": t.to_json(cx) }))
    }));
    fails.extend(classes.iter().filter(|v| phi_direct(v).omega != v.rep.omega).map(|v| json!({ "delta1": v.to_json() })));
    checks.push(all_hold("phi_commutes_with_i1_i2_delta1", fails, flats.len() + forms.len() + classes.len()));

    let fails: Vec<Value> = classes
        .par_iter()
        .filter_map(|v| {
            let ch = phi_direct(v);
            let want = delta2(v);
            let ok = STRATEGIES.iter().all(|&s| delta2_via_lift(&ch, s) == want);
            (!ok).then(|| json!({ "class": v.to_json(), "delta2": want.to_json() }))
        })
        .collect();
    checks.push(all_hold("phi_preserves_delta2", fails, classes.len()));

    // on flat characters δ₂ is minus the Bockstein of the holonomy
    let fails: Vec<Value> = flats
        .iter()
        .filter_map(|u| {
            let ch = char_i1(x, u);
            let want = bockstein(cx, u, LiftStrategy::Unit).neg();
            let ok = STRATEGIES.iter().all(|&s| delta2_via_lift(&ch, s) == want);
            (!ok).then(|| json!({ "u": u.to_json(), "minus_bockstein": want.to_json() }))
        })
        .collect();
    checks.push(all_hold("delta2_of_flat_character_is_minus_bockstein", fails, flats.len()));

    let maps = naturality_maps(x);
    let fails: Vec<Value> = maps
        .iter()
        .flat_map(|(name, phi)| {
            classes.iter().filter_map(move |v| {
                let ok = match (pullback(phi, v), char_pullback(phi, &phi_direct(v))) {
                    (Ok(p), Ok(c)) => phi_direct(&p) == c,
                    _ => false,
                };
                (!ok).then(|| json!({ "map": name, "class": v.to_json() }))
            })
        })
        .collect();
    checks.push(all_hold("phi_is_natural", fails, maps.len() * classes.len()));

    checks.push(five_lemma_rows(x, k, &flats));
    checks
}

/// `Φ(v)(z)` through every good neighborhood of every sample cycle, against
/// the direct evaluation; boundaries evaluate to the curvature.
fn phi_good_check(x: &Arc<Complex>, k: usize, classes: &[DiffClass], max_subdiv: usize) -> Check {
    let j = k - 1;
    if j > x.dim() || x.count(j) == 0 {
        return Check::skipped("phi_good_agrees_with_direct", format!("no {j}-cycles"));
    }
    let tower = SubdivisionTower::new(x.clone());
    let cycles = sample_cycles(x, j);
    let per_cycle: Vec<(usize, Vec<Value>)> = cycles
        .par_iter()
        .map(|(cname, z)| {
            let support = Subcomplex::support(x.clone(), j, z);
            let first = match good_neighborhood(&tower, &support, j, max_subdiv) {
                Ok(nb) => nb,
                Err(e) => return (0, vec![json!({ "cycle": cname, "error": e.to_string() })]),
            };
            let mut nbs = vec![first];
            for d in nbs[0].depth + 1..=max_subdiv {
                if let Ok(nb) = neighborhood_at(&tower, &support, j, d) {
                    if nb.vanishes {
                        nbs.push(nb);
                    }
                }
            }
            let mut fails = Vec::new();
            let mut checked = 0;
            for v in classes {
                let direct = phi_direct(v).evaluate(z);
                for nb in &nbs {
                    checked += 1;
                    let good = phi_good_in(v, z, nb);
                    match (&direct, good) {
                        (Ok(a), Ok(b)) if *a == b => {}
                        (a, b) => fails.push(json!({
                            "cycle": cname,
                            "depth": nb.depth,
                            "direct": a.as_ref().map(crate::arith::format_rational).map_err(|e| e.to_string()).ok(),
                            "good": b.map(|v| crate::arith::format_rational(&v)).map_err(|e| e.to_string()).ok(),
                        })),
                    }
                }
            }
            (checked, fails)
        })
        .collect();
    let checked = per_cycle.iter().map(|p| p.0).sum();
    let mut fails: Vec<Value> = per_cycle.into_iter().flat_map(|p| p.1).collect();

    // z = ∂e evaluates to ω(e)
    if let Ok(d) = x.boundary_matrix(k) {
        for e in 0..x.count(k).min(4) {
            let z = d.column(e);
            let support = Subcomplex::support(x.clone(), j, &z);
            if support.is_empty() {
                continue;
            }
            match good_neighborhood(&tower, &support, j, max_subdiv) {
                Ok(nb) => {
                    for v in classes.iter().take(6) {
                        let want = frac(v.rep.omega.value(e));
                        if !matches!(phi_good_in(v, &z, &nb), Ok(got) if got == want) {
                            fails.push(json!({ "boundary_of": x.simplex(k, e), "class": v.to_json() }));
                        }
                    }
                }
                Err(e) => fails.push(json!({ "boundary_of": e.to_string() })),
            }
        }
    }
    all_hold("phi_good_agrees_with_direct", fails, checked)
}

/// The rows `0 → H^{k−1}(Q/Z) → · → Λ^k_Z → 0` for classes and for
/// characters, with `Φ` between them: both rows exact and the outer
/// squares commuting, so `Φ` is bijective with the inverse checked above.
fn five_lemma_rows(x: &Arc<Complex>, k: usize, flats: &[crate::cochains::CohomologyClass]) -> Check {
    let cx = &**x;
    let mut fails = Vec::new();
    let mut checked = 0;
    // left: i₁ is injective on both sides and Φ ∘ i₁ = i₁
    for u in flats {
        checked += 1;
        let ch = char_i1(x, u);
        let ok = ch.is_zero() == u.is_zero() && i1(x, u).is_zero() == u.is_zero() && matches!(flat_class(&ch), Ok(back) if back == *u);
        if !ok {
            fails.push(json!({ "row": "flat", "u": u.to_json() }));
        }
    }
    // right: δ₁ is onto Λ^k_Z on both sides and Φ preserves it
    for w in integral_form_generators(cx, k) {
        checked += 1;
        let ok = match delta1_preimage(x, &w) {
            Ok(v) => {
                let ch = phi_direct(&v);
                ch.omega == w && Character::new(x.clone(), k, ch.f_values.clone(), w.clone()).is_ok()
            }
            Err(_) => false,
        };
        if !ok {
            fails.push(json!({ "row": "curvature", "omega": w.to_json(cx) }));
        }
    }
    // middle: a flat character is i₁ of its class
    let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
    for _ in 0..6 {
        checked += 1;
        let v = random_class(x, k, &mut rng);
        let flat = delta1_preimage(x, &v.rep.omega).and_then(|p| v.sub(&p)).map(|f| phi_direct(&f));
        let ok = matches!(flat, Ok(ch) if matches!(flat_class(&ch), Ok(u) if char_i1(x, &u) == ch));
        if !ok {
            fails.push(json!({ "row": "middle", "class": v.to_json() }));
        }
    }
    all_hold("five_lemma_rows", fails, checked)
}

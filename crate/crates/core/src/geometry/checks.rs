//! Checks for the cycle pipeline: normalization, good neighborhoods,
//! bounding, and character evaluation through the pseudomanifold.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{bound_in_good_neighborhood, good_neighborhood, normalize, sample_cycles, BoundOutcome, SubdivisionTower};
use crate::arith::{format_rational, frac};
use crate::characters::{phi_direct, phi_via_pseudomanifold};
use crate::cochains::homology;
use crate::complex::Subcomplex;
use crate::diffcocycle::generator_classes;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::Integer;

/// The pipeline on one integer `j`-cycle of the base of `tower`, with
/// `j < dim`. Returns the checks and a summary of what was built.
pub fn verify_cycle(tower: &SubdivisionTower, j: usize, z: &[Integer], max_subdiv: usize) -> Result<(Vec<Check>, Value)> {
    let x = tower.base();
    if j >= x.dim() {
        return Err(Error::Dimension(format!("normalizing {j}-cycles needs dimension above {j}")));
    }
    if z.len() != x.count(j) {
        return Err(Error::Mismatch(format!("chain has {} coefficients, expected {}", z.len(), x.count(j))));
    }
    if !x.is_cycle(j, z) {
        return Err(Error::NotACycle);
    }
    if z.iter().all(Zero::is_zero) {
        return Ok((vec![Check::skipped("normalization", "zero cycle")], json!({ "degree": j })));
    }
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    data.insert("degree".into(), json!(j));

    let support = Subcomplex::support(x.clone(), j, z);
    match good_neighborhood(tower, &support, j, max_subdiv) {
        Ok(nb) => {
            data.insert("good_neighborhood".into(), nb.to_json());
            checks.push(Check::pass("good_neighborhood.cohomology_vanishes", nb.to_json()));
        }
        Err(e) => checks.push(Check::fail("good_neighborhood.cohomology_vanishes", json!({ "error": e.to_string() }))),
    }

    let n = match normalize(tower, j, z) {
        Ok(n) => n,
        Err(e) => {
            checks.push(Check::fail("normalization", json!({ "error": e.to_string() })));
            return Ok((checks, Value::Object(data)));
        }
    };
    data.insert("normalization".into(), n.to_json());
    checks.push(Check::new("normalization.is_pseudomanifold", super::is_pseudomanifold(&n.pseudomanifold), json!({})));
    let defect: Vec<String> = n.defect().iter().filter(|c| !c.is_zero()).map(|c| c.to_string()).collect();
    checks.push(Check::new("normalization.homology_identity", defect.is_empty(), json!({ "nonzero_defect": defect })));
    checks.push(Check::new("normalization.supported_in_closed_star", n.supported_near_cycle(), json!({})));

    // Φ(v)(z) = ∫_b ω + Φ(v)(P)
    let fails: Vec<Value> = generator_classes(x, j + 1)
        .iter()
        .filter_map(|v| {
            let direct = phi_direct(v).evaluate(z);
            let split = phi_via_pseudomanifold(v, &n);
            match (direct, split) {
                (Ok(a), Ok((c, p))) if frac(&(&c + &p)) == a => None,
                (a, s) => Some(json!({
                    "class": v.to_json(),
                    "direct": a.map(|a| format_rational(&a)).map_err(|e| e.to_string()).ok(),
                    "split": s.map(|(c, p)| [format_rational(&c), format_rational(&p)]).map_err(|e| e.to_string()).ok(),
                })),
            }
        })
        .collect();
    checks.push(Check::new("character_through_pseudomanifold", fails.is_empty(), json!({ "failures": fails })));

    let h = homology(x, j);
    let coords = h.coordinates(z);
    let trivial = coords.iter().all(Zero::is_zero);
    if x.dim() < j + 1 {
        checks.push(Check::skipped("bounding", "no room to bound"));
        return Ok((checks, Value::Object(data)));
    }
    match bound_in_good_neighborhood(tower, &n, max_subdiv) {
        Ok(BoundOutcome::Bounds(b)) => {
            data.insert("bounding".into(), b.to_json());
            data.insert("bounding_neighborhood_of".into(), json!("support of the bounding chain"));
            let target = tower.transport(j, &n.pseudomanifold.image_cycle(), n.depth(), b.depth)?;
            checks.push(Check::new("bounding.class_is_trivial", trivial, json!({ "coordinates": strs(&coords) })));
            checks.push(Check::new("bounding.boundary_is_pseudomanifold", b.boundary() == target, json!({})));
            checks.push(Check::new("bounding.neighborhood_vanishes", b.vanishes, b.to_json()));
            if x.dim() > j + 1 {
                checks.push(Check::new("bounding.unit_coefficients", b.unit_coefficients, json!({})));
            }
        }
        Ok(BoundOutcome::NotNullHomologous { coords: got, group }) => {
            data.insert("bounding".into(), json!({ "not_null_homologous": strs(&got), "group": group }));
            checks.push(Check::new(
                "bounding.not_null_homologous",
                !trivial && got == coords,
                json!({ "coordinates": strs(&got), "group": group }),
            ));
        }
        Err(e) => checks.push(Check::fail("bounding", json!({ "error": e.to_string() }))),
    }
    Ok((checks, Value::Object(data)))
}

fn strs(v: &[Integer]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

/// [`verify_cycle`] on every sample cycle in degrees below the dimension;
/// check names are prefixed by degree and cycle.
pub fn verify_geometry(tower: &SubdivisionTower, max_subdiv: usize) -> Result<(Vec<Check>, Value)> {
    let x = tower.base();
    let jobs: Vec<(usize, String, Vec<Integer>)> =
        (0..x.dim()).flat_map(|j| sample_cycles(x, j).into_iter().map(move |(n, z)| (j, n, z))).collect();
    let results: Vec<Result<(Vec<Check>, Value)>> =
        jobs.par_iter().map(|(j, _, z)| verify_cycle(tower, *j, z, max_subdiv)).collect();
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    for ((j, name, _), r) in jobs.iter().zip(results) {
        let (cs, d) = r?;
        let prefix = format!("j{j}.{name}.");
        checks.extend(cs.into_iter().map(|c| c.prefixed(&prefix)));
        data.insert(format!("j{j}.{name}"), d);
    }
    Ok((checks, Value::Object(data)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn equator_bounds_and_generators_do_not() {
        let x = corpus::get("s2");
        let tower = SubdivisionTower::new(x.clone());
        let z = x.boundary_matrix(2).unwrap().column(0);
        let (checks, _) = verify_cycle(&tower, 1, &z, 2).unwrap();
        assert!(checks.iter().any(|c| c.name == "bounding.boundary_is_pseudomanifold"));
        assert!(checks.iter().all(Check::passed));

        for name in ["t2", "rp2"] {
            let x = corpus::get(name);
            let tower = SubdivisionTower::new(x.clone());
            let z = homology(&x, 1).generator(0);
            let (checks, _) = verify_cycle(&tower, 1, &z, 2).unwrap();
            assert!(checks.iter().any(|c| c.name == "bounding.not_null_homologous" && c.passed()), "{name}");
        }
    }

    #[test]
    fn non_cycles_are_input_errors() {
        let x = corpus::get("s2");
        let tower = SubdivisionTower::new(x.clone());
        let mut z = vec![Integer::zero(); x.count(1)];
        z[0] = Integer::from(1);
        assert!(verify_cycle(&tower, 1, &z, 2).is_err());
        assert!(verify_cycle(&tower, 2, &vec![Integer::zero(); x.count(2)], 2).is_err());
    }
}

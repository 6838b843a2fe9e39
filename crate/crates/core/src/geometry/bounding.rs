//! Bounding null-homologous pseudomanifold cycles inside good neighborhoods.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::surgery::{split_chain, Normalization};
use super::collapse::{collapse_certificate, Collapse};
use super::{cohomology_vanishes_above, SubdivisionTower};
use crate::arith::Integer;
use crate::cochains::homology;
use crate::complex::{closed_star_neighborhood, Complex, Subcomplex, Subdivision};
use crate::error::{Error, Result};

/// A chain `y` with `∂y` the transported pseudomanifold cycle, and a
/// neighborhood of `|y|` whose integral cohomology vanishes from degree
/// `k = deg y` on.
#[derive(Debug, Clone)]
pub struct Bounding {
    pub degree: usize,
    pub depth: usize,
    pub subdivision: Arc<Subdivision>,
    pub chain: Vec<Integer>,
    pub region: Subcomplex,
    pub complex: Arc<Complex>,
    pub collapse: Collapse,
    pub vanishes: bool,
    /// Whether every coefficient of `chain` is in `{−1, 0, 1}`. Always true
    /// when the ambient dimension exceeds `degree`; in the top dimension it
    /// fails exactly when the bounded sheets must overlap.
    pub unit_coefficients: bool,
}

impl Bounding {
    pub fn boundary(&self) -> Vec<Integer> {
        self.subdivision.fine.boundary_of(self.degree, &self.chain)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "depth": self.depth,
            "chain_support": self.chain.iter().filter(|c| !c.is_zero()).count(),
            "max_coefficient": self.chain.iter().map(|c| c.abs()).max().map(|c| c.to_string()),
            "neighborhood_counts": self.complex.counts(),
            "neighborhood_vanishes": self.vanishes,
            "collapse_steps": self.collapse.steps,
            "collapse_remaining": self.collapse.remaining,
            "unit_coefficients": self.unit_coefficients,
        })
    }
}

#[derive(Debug, Clone)]
pub enum BoundOutcome {
    Bounds(Box<Bounding>),
    /// Coordinates of the nonzero class in `H_{k−1}(X; Z)` and the group.
    NotNullHomologous { coords: Vec<Integer>, group: String },
}

/// Support size, then `ℓ¹` norm.
fn size(v: &[Integer]) -> (usize, Integer) {
    (v.iter().filter(|c| !c.is_zero()).count(), v.iter().map(|c| c.abs()).sum())
}

/// Local search: add `±e` for cycles `e` while the chain gets smaller, by
/// support first and `ℓ¹` norm second.
fn shorten(w: &mut Vec<Integer>, cycles: &[Vec<Integer>]) {
    let mut best = size(w);
    loop {
        let mut improved = false;
        for e in cycles {
            for s in [1i64, -1] {
                let cand: Vec<Integer> = w.iter().zip(e).map(|(a, b)| a + b * s).collect();
                let n = size(&cand);
                if n < best {
                    *w = cand;
                    best = n;
                    improved = true;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

/// Bound the pseudomanifold of a normalization. The class is tested in the
/// base; a bounding chain is `sd^D w₀ − b` with `∂w₀ = z`, shortened by top
/// cycles, split when the ambient dimension leaves room, and its closed-star
/// neighborhood is deepened, at most `max_subdiv` times past the level of
/// the chain, until cohomology vanishes from degree `k` on.
pub fn bound_in_good_neighborhood(
    tower: &SubdivisionTower,
    n: &Normalization,
    max_subdiv: usize,
) -> Result<BoundOutcome> {
    let x = tower.base();
    let j = n.degree;
    let k = j + 1;
    if x.dim() < k {
        return Err(Error::Dimension(format!("bounding {j}-cycles needs dimension at least {k}")));
    }
    let sd = n.subdivision();
    let xi = n.pseudomanifold.image_cycle();
    let pushed = sd.retraction.push_chain(j, &xi);
    let h = homology(x, j);
    let coords = h.coordinates(&pushed);
    if coords.iter().any(|c| !c.is_zero()) {
        return Ok(BoundOutcome::NotNullHomologous { coords, group: h.describe() });
    }
    let w0 = x
        .boundary_snf(k)
        .solve_integer(&n.cycle)?
        .ok_or_else(|| Error::Mismatch("null-homologous cycle has no integral bounding chain".into()))?;
    let mut w = sd.subdivide_chain(k, &w0);
    for (a, b) in w.iter_mut().zip(&n.bounding) {
        *a -= b;
    }
    let top: Vec<Vec<Integer>> = {
        let basis = x.boundary_snf(k).kernel_basis();
        (0..basis.cols()).map(|i| sd.subdivide_chain(k, &basis.column(i))).collect()
    };
    shorten(&mut w, &top);

    let (mut depth, mut y) = if x.dim() == k {
        (n.depth(), w)
    } else {
        let s = split_chain(tower, n.depth(), k, &w, super::MAX_DEPTH)?;
        (s.depth, s.chain)
    };

    let last = (depth + max_subdiv).min(super::MAX_DEPTH);
    loop {
        let sd = tower.level(depth)?;
        let core = Subcomplex::support(sd.fine.clone(), k, &y);
        let region = closed_star_neighborhood(&sd.fine, &core);
        let (complex, _) = region.to_complex(format!("U'({})", sd.fine.name()));
        let vanishes = cohomology_vanishes_above(&complex, j);
        if vanishes {
            let collapse = collapse_certificate(&core);
            let unit_coefficients = y.iter().all(|c| c.abs() <= Integer::from(1));
            return Ok(BoundOutcome::Bounds(Box::new(Bounding {
                degree: k,
                depth,
                subdivision: sd,
                chain: y,
                region,
                complex,
                collapse,
                vanishes,
                unit_coefficients,
            })));
        }
        if depth >= last {
            return Err(Error::GeometryBudgetExceeded { max_subdiv });
        }
        y = tower.transport(k, &y, depth, depth + 1)?;
        depth += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::corpus;
    use crate::geometry::normalize;

    #[test]
    fn sphere_equator_bounds() {
        let x = corpus::get("s2");
        let tower = SubdivisionTower::new(x.clone());
        let z = x.boundary_matrix(2).unwrap().column(0);
        let n = normalize(&tower, 1, &z).unwrap();
        let BoundOutcome::Bounds(b) = bound_in_good_neighborhood(&tower, &n, 2).unwrap() else {
            panic!("equator bounds")
        };
        assert!(b.vanishes);
        assert!(b.collapse.below(2));
        let target = tower.transport(1, &n.pseudomanifold.image_cycle(), n.depth(), b.depth).unwrap();
        assert_eq!(b.boundary(), target);
        assert!(b.chain.iter().all(|c| c.abs() <= int(1)));
    }

    #[test]
    fn generators_do_not_bound() {
        for name in ["t2", "rp2"] {
            let x = corpus::get(name);
            let tower = SubdivisionTower::new(x.clone());
            let z = homology(&x, 1).generator(0);
            let n = normalize(&tower, 1, &z).unwrap();
            match bound_in_good_neighborhood(&tower, &n, 2).unwrap() {
                BoundOutcome::NotNullHomologous { coords, .. } => assert!(coords.iter().any(|c| !c.is_zero())),
                BoundOutcome::Bounds(_) => panic!("{name} generator bounds"),
            }
        }
    }

    #[test]
    fn point_pair_bounds_in_an_arc() {
        let x = corpus::get("t2");
        let tower = SubdivisionTower::new(x.clone());
        let mut z = vec![int(0); x.count(0)];
        z[0] = int(-1);
        z[3] = int(1);
        let n = normalize(&tower, 0, &z).unwrap();
        let BoundOutcome::Bounds(b) = bound_in_good_neighborhood(&tower, &n, 2).unwrap() else { panic!() };
        assert!(b.vanishes);
        assert!(b.collapse.below(1));
    }
}

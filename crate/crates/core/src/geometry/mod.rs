//! Combinatorial cycle geometry: good neighborhoods in iterated barycentric
//! subdivisions, normalization of integer cycles to pseudomanifolds by
//! splitting and resolving, and bounding chains inside good neighborhoods.

mod bounding;
mod checks;
mod collapse;
mod surgery;

use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::cochains::integral_cohomology;
use crate::complex::{barycentric_subdivide, closed_star_neighborhood, Complex, SimplicialMap, Subcomplex, Subdivision};
use crate::error::{Error, Result};

pub use checks::{verify_cycle, verify_geometry};
pub use bounding::{bound_in_good_neighborhood, BoundOutcome, Bounding};
pub use collapse::{collapse, collapse_certificate, Collapse};
pub use surgery::{
    is_pseudomanifold, is_pseudomanifold_cycle, normalize, resolve_cycle, sample_cycles, split_chain, split_cycle,
    Normalization, Pseudomanifold, Split,
};

/// Default number of barycentric subdivisions tried before giving up.
pub const DEFAULT_MAX_SUBDIV: usize = 2;

/// Deepest subdivision a tower will build.
pub const MAX_DEPTH: usize = 4;

/// Iterated barycentric subdivisions of one complex, built on demand and
/// shared between threads.
#[derive(Debug)]
pub struct SubdivisionTower {
    base: Arc<Complex>,
    levels: [OnceLock<Arc<Subdivision>>; MAX_DEPTH + 1],
    steps: [OnceLock<Arc<Subdivision>>; MAX_DEPTH],
}

impl SubdivisionTower {
    pub fn new(base: Arc<Complex>) -> Self {
        Self { base, levels: Default::default(), steps: Default::default() }
    }

    pub fn base(&self) -> &Arc<Complex> {
        &self.base
    }

    /// `sd^depth` of the base, with chain maps and retraction back to the base.
    pub fn level(&self, depth: usize) -> Result<Arc<Subdivision>> {
        if depth > MAX_DEPTH {
            return Err(Error::GeometryBudgetExceeded { max_subdiv: MAX_DEPTH });
        }
        if let Some(l) = self.levels[depth].get() {
            return Ok(l.clone());
        }
        let built = if depth == 0 {
            Arc::new(Subdivision::identity(self.base.clone()))
        } else {
            let prev = self.level(depth - 1)?;
            Arc::new(prev.then(&*self.step(depth - 1)?)?)
        };
        Ok(self.levels[depth].get_or_init(|| built).clone())
    }

    /// The single subdivision from level `depth` to level `depth + 1`.
    pub fn step(&self, depth: usize) -> Result<Arc<Subdivision>> {
        if depth >= MAX_DEPTH {
            return Err(Error::GeometryBudgetExceeded { max_subdiv: MAX_DEPTH });
        }
        if let Some(s) = self.steps[depth].get() {
            return Ok(s.clone());
        }
        let below = self.level(depth)?;
        let built = Arc::new(barycentric_subdivide(&below.fine));
        Ok(self.steps[depth].get_or_init(|| built).clone())
    }

    /// Carry a `j`-chain on level `from` to level `to ≥ from`.
    pub fn transport(&self, j: usize, chain: &[crate::Integer], from: usize, to: usize) -> Result<Vec<crate::Integer>> {
        let mut cur = chain.to_vec();
        for d in from..to {
            cur = self.step(d)?.subdivide_chain(j, &cur);
        }
        Ok(cur)
    }
}

/// The fine simplices of `sd` whose carrier lies in `k`.
pub fn transport_subcomplex(sd: &Subdivision, k: &Subcomplex) -> Subcomplex {
    let mut simplices = Vec::new();
    for (j, level) in sd.carrier.iter().enumerate() {
        for (fi, &(d, i)) in level.iter().enumerate() {
            if k.indices(d).contains(&i) {
                simplices.push(sd.fine.simplex(j, fi).clone());
            }
        }
    }
    Subcomplex::generated_by(sd.fine.clone(), simplices)
}

/// Whether `H^j(u; Z) = 0` for every `j > level`, computed by Smith normal
/// form on what remains of `u` after greedy free-face collapses.
pub fn cohomology_vanishes_above(u: &Arc<Complex>, level: usize) -> bool {
    if u.is_empty() || level >= u.dim() {
        return true;
    }
    let all = Subcomplex::generated_by(u.clone(), (0..=u.dim()).flat_map(|j| u.simplices(j).to_vec()));
    let (_, rest) = collapse(&all);
    let (core, _) = rest.to_complex(format!("core({})", u.name()));
    (level + 1..=core.dim()).all(|j| integral_cohomology(&core, j).is_trivial())
}

/// A closed-star neighborhood `U` of a support in some subdivision of the
/// base, together with the maps needed to move classes and chains onto it.
#[derive(Debug, Clone)]
pub struct GoodNeighborhood {
    pub level: usize,
    pub depth: usize,
    pub subdivision: Arc<Subdivision>,
    pub region: Subcomplex,
    pub complex: Arc<Complex>,
    pub inclusion: SimplicialMap,
    /// Whether `H^j(U; Z) = 0` for all `j > level`, as computed.
    pub vanishes: bool,
}

impl GoodNeighborhood {
    /// Closed star of `core` (a subcomplex of `subdivision.fine`).
    pub fn around(subdivision: Arc<Subdivision>, depth: usize, core: &Subcomplex, level: usize) -> Self {
        let region = closed_star_neighborhood(&subdivision.fine, core);
        let (complex, inclusion) = region.to_complex(format!("U({})", subdivision.fine.name()));
        let vanishes = cohomology_vanishes_above(&complex, level);
        Self { level, depth, subdivision, region, complex, inclusion, vanishes }
    }

    /// `U → base`: inclusion followed by the subdivision retraction.
    pub fn to_base(&self) -> SimplicialMap {
        self.subdivision.retraction.compose(&self.inclusion).expect("inclusion lands in the subdivision")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "depth": self.depth,
            "counts": self.complex.counts(),
            "vanishes_above_level": self.vanishes,
        })
    }
}

/// A `level`-good neighborhood of `support`: the closed star of its
/// transported image in the first subdivision (up to `max_subdiv`) where
/// integral cohomology above `level` vanishes.
pub fn good_neighborhood(
    tower: &SubdivisionTower,
    support: &Subcomplex,
    level: usize,
    max_subdiv: usize,
) -> Result<GoodNeighborhood> {
    if support.is_empty() {
        return Err(Error::Mismatch("empty support has no neighborhood".into()));
    }
    for depth in 0..=max_subdiv {
        let nb = neighborhood_at(tower, support, level, depth)?;
        if nb.vanishes {
            return Ok(nb);
        }
    }
    Err(Error::GeometryBudgetExceeded { max_subdiv })
}

/// The candidate neighborhood at a fixed depth, good or not.
pub fn neighborhood_at(
    tower: &SubdivisionTower,
    support: &Subcomplex,
    level: usize,
    depth: usize,
) -> Result<GoodNeighborhood> {
    let sd = tower.level(depth)?;
    let core = transport_subcomplex(&sd, support);
    Ok(GoodNeighborhood::around(sd, depth, &core, level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::cochains::homology;
    use crate::corpus;

    #[test]
    fn vertex_star_is_acyclic() {
        for name in corpus::NAMES {
            let x = corpus::get(name);
            let tower = SubdivisionTower::new(x.clone());
            let k = Subcomplex::generated_by(x.clone(), vec![vec![0]]);
            let nb = good_neighborhood(&tower, &k, 0, 2).unwrap();
            assert_eq!(nb.depth, 0, "{name}");
        }
    }

    #[test]
    fn torus_cycle_neighborhood() {
        let x = corpus::get("t2");
        let tower = SubdivisionTower::new(x.clone());
        let h = homology(&x, 1);
        let z = h.generator(0);
        let k = Subcomplex::support(x.clone(), 1, &z);
        let nb = good_neighborhood(&tower, &k, 1, 2).unwrap();
        assert!(nb.vanishes);
        assert!(integral_cohomology(&nb.complex, 2).is_trivial());
        assert_ne!(nb.region.counts(), nb.subdivision.fine.counts());
    }

    #[test]
    fn torsion_cycle_neighborhood() {
        let x = corpus::get("rp2");
        let tower = SubdivisionTower::new(x.clone());
        let z = homology(&x, 1).generator(0);
        let k = Subcomplex::support(x.clone(), 1, &z);
        let nb = good_neighborhood(&tower, &k, 1, 2).unwrap();
        assert!(integral_cohomology(&nb.complex, 2).is_trivial());
        assert!(nb.to_base().is_order_preserving());
    }

    #[test]
    fn tower_transport_matches_level_maps() {
        let x = corpus::get("s1");
        let tower = SubdivisionTower::new(x.clone());
        let z = vec![int(1), int(-1), int(1)];
        let two = tower.level(2).unwrap();
        assert_eq!(tower.transport(1, &z, 0, 2).unwrap(), two.subdivide_chain(1, &z));
        assert_eq!(two.fine.count(1), 12);
    }
}

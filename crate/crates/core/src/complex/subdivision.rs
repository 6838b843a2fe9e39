use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{faces, is_face, Complex, Simplex, SimplicialMap};
use crate::arith::Integer;
use crate::error::Result;
use crate::zlin::IntMatrix;

/// An iterated barycentric subdivision together with the data needed to move
/// chains and cochains between the two complexes.
///
/// `chain_map[j]` is the subdivision chain map `C_j(coarse) → C_j(fine)`;
/// `retraction` sends each barycenter to the largest vertex of its simplex and
/// satisfies `retraction_* ∘ sd = id` on chains.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub coarse: Arc<Complex>,
    pub fine: Arc<Complex>,
    pub depth: usize,
    /// `carrier[j][i]`: `(dim, index)` of the smallest coarse simplex containing fine simplex `(j, i)`.
    pub carrier: Vec<Vec<(usize, usize)>>,
    pub chain_map: Vec<IntMatrix>,
    pub retraction: SimplicialMap,
}

impl Subdivision {
    pub fn identity(x: Arc<Complex>) -> Self {
        let carrier = (0..=x.dim()).map(|j| (0..x.count(j)).map(|i| (j, i)).collect()).collect();
        let chain_map = (0..=x.dim()).map(|j| IntMatrix::identity(x.count(j))).collect();
        Self { coarse: x.clone(), fine: x.clone(), depth: 0, carrier, chain_map, retraction: SimplicialMap::identity(x) }
    }

    pub fn subdivide_chain(&self, j: usize, chain: &[Integer]) -> Vec<Integer> {
        match self.chain_map.get(j) {
            Some(m) => m.mul_vec(chain),
            None => Vec::new(),
        }
    }

    /// The fine simplices whose carrier is coarse simplex `(j, i)`: the open cell of `(j, i)`.
    pub fn open_cell(&self, j: usize, i: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (fj, level) in self.carrier.iter().enumerate() {
            for (fi, &c) in level.iter().enumerate() {
                if c == (j, i) {
                    out.push((fj, fi));
                }
            }
        }
        out
    }

    /// `other ∘ self`: subdivide further by `other`, whose coarse complex is `self.fine`.
    pub fn then(&self, other: &Subdivision) -> Result<Subdivision> {
        let retraction = self.retraction.compose(&other.retraction)?;
        let chain_map = (0..=self.coarse.dim()).map(|j| other.chain_map[j].mul(&self.chain_map[j])).collect();
        let carrier = other
            .carrier
            .iter()
            .map(|level| level.iter().map(|&(d, i)| self.carrier[d][i]).collect())
            .collect();
        Ok(Subdivision {
            coarse: self.coarse.clone(),
            fine: other.fine.clone(),
            depth: self.depth + other.depth,
            carrier,
            chain_map,
            retraction,
        })
    }
}

/// Standard barycentric subdivision. Fine vertices are the coarse simplices,
/// numbered by dimension and then lexicographically, so that every fine simplex
/// (a flag `σ₀ ⊂ … ⊂ σ_j`) lists its vertices in flag order.
pub fn barycentric_subdivide(x: &Arc<Complex>) -> Subdivision {
    let dim = x.dim();
    let mut offset = vec![0usize; dim + 2];
    for j in 0..=dim {
        offset[j + 1] = offset[j] + x.count(j);
    }
    let id = |s: &[usize]| offset[s.len() - 1] + x.index_of(s).expect("simplex");

    // flags[j][i]: all flags ending at coarse simplex (j, i)
    let mut flags: Vec<Vec<Vec<Simplex>>> = Vec::with_capacity(dim + 1);
    for j in 0..=dim {
        let mut level = Vec::with_capacity(x.count(j));
        for s in x.simplices(j) {
            let top = id(s);
            let mut fl = vec![vec![top]];
            for fj in 0..j {
                for (fi, f) in x.simplices(fj).iter().enumerate() {
                    if is_face(f, s) {
                        for tail in &flags[fj][fi] {
                            let mut t: Simplex = tail.clone();
                            t.push(top);
                            fl.push(t);
                        }
                    }
                }
            }
            level.push(fl);
        }
        flags.push(level);
    }

    let all: Vec<Simplex> = flags.iter().flatten().flatten().cloned().collect();
    let fine = Arc::new(
        Complex::from_explicit(format!("sd({})", x.name()), all).expect("subdivision is a simplicial complex"),
    );

    let mut carrier: Vec<Vec<(usize, usize)>> = (0..=dim).map(|j| vec![(0, 0); fine.count(j)]).collect();
    let mut owner = BTreeMap::new();
    for j in 0..=dim {
        for i in 0..x.count(j) {
            owner.insert(offset[j] + i, (j, i));
        }
    }
    for j in 0..=dim {
        for (fi, f) in fine.simplices(j).iter().enumerate() {
            carrier[j][fi] = owner[f.last().expect("nonempty")];
        }
    }

    // sd(v) = v;  sd(σ) = (−1)^j · (sd ∂σ) * b_σ
    let mut sd: Vec<Vec<BTreeMap<usize, i64>>> = Vec::with_capacity(dim + 1);
    sd.push(x.simplices(0).iter().map(|s| BTreeMap::from([(fine.index_of(&[id(s)]).unwrap(), 1)])).collect());
    for j in 1..=dim {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let mut level = Vec::with_capacity(x.count(j));
        for s in x.simplices(j) {
            let apex = id(s);
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (f, fs) in faces(s) {
                let fi = x.index_of(&f).unwrap();
                for (&t, &c) in &sd[j - 1][fi] {
                    let mut cone = fine.simplex(j - 1, t).clone();
                    cone.push(apex);
                    let ti = fine.index_of(&cone).expect("cone simplex");
                    *acc.entry(ti).or_default() += sign * fs * c;
                }
            }
            acc.retain(|_, c| *c != 0);
            level.push(acc);
        }
        sd.push(level);
    }
    let chain_map = (0..=dim)
        .map(|j| {
            let mut m = IntMatrix::zeros(fine.count(j), x.count(j));
            for (c, col) in sd[j].iter().enumerate() {
                for (&r, &v) in col {
                    m.set(r, c, BigInt::from(v));
                }
            }
            m
        })
        .collect();

    let mut vm = vec![0; fine.vertex_count()];
    for j in 0..=dim {
        for (i, s) in x.simplices(j).iter().enumerate() {
            vm[offset[j] + i] = *s.last().unwrap();
        }
    }
    let retraction = SimplicialMap::new(fine.clone(), x.clone(), vm).expect("retraction is simplicial");

    Subdivision { coarse: x.clone(), fine, depth: 1, carrier, chain_map, retraction }
}

/// `depth`-fold barycentric subdivision (depth 0 is the identity).
pub fn iterated_subdivision(x: &Arc<Complex>, depth: usize) -> Subdivision {
    let mut acc = Subdivision::identity(x.clone());
    for _ in 0..depth {
        let next = barycentric_subdivide(&acc.fine);
        acc = acc.then(&next).expect("composable subdivisions");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Arc<Complex> {
        Arc::new(Complex::from_simplices("s1", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap())
    }

    #[test]
    fn single_edge() {
        let x = Arc::new(Complex::from_simplices("I", vec![vec![0, 1]]).unwrap());
        let sd = barycentric_subdivide(&x);
        assert_eq!(sd.fine.counts(), vec![3, 2]);
    }

    #[test]
    fn circle_fundamental_cycle() {
        let x = circle();
        let sd = barycentric_subdivide(&x);
        assert_eq!(sd.fine.count(1), 6);
        // [0,1] + [1,2] − [0,2]
        let z: Vec<Integer> = [1, -1, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert!(x.is_cycle(1, &z));
        let zs = sd.subdivide_chain(1, &z);
        assert!(sd.fine.is_cycle(1, &zs));
        assert_eq!(zs.iter().filter(|c| c.magnitude() == &num_bigint::BigUint::from(1u8)).count(), 6);
    }

    #[test]
    fn chain_map_and_retraction() {
        let x = Arc::new(
            Complex::from_simplices("tet", vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap(),
        );
        let sd = iterated_subdivision(&x, 2);
        for j in 1..=2 {
            let lhs = sd.fine.boundary_matrix(j).unwrap().mul(&sd.chain_map[j]);
            let rhs = sd.chain_map[j - 1].mul(x.boundary_matrix(j).unwrap());
            assert_eq!(lhs, rhs, "sd is a chain map in degree {j}");
        }
        for j in 0..=2 {
            let back = sd.retraction.induced_chain_map(j).mul(&sd.chain_map[j]);
            assert_eq!(back, IntMatrix::identity(x.count(j)));
        }
        assert!(sd.retraction.is_order_preserving());
        assert_eq!(sd.fine.euler_characteristic(), 2);
    }
}

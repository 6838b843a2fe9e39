use std::sync::Arc;

use num_bigint::BigInt;

use super::{orient, Complex};
use crate::error::{Error, Result};
use crate::zlin::IntMatrix;

/// A vertex map carrying every source simplex onto a (possibly degenerate)
/// target simplex.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: Arc<Complex>, target: Arc<Complex>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "vertex map has {} entries, source has {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        for j in 0..=source.dim() {
            for s in source.simplices(j) {
                let mut img: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
                img.sort_unstable();
                img.dedup();
                if !target.contains(&img) {
                    return Err(Error::InvalidMap(format!("{s:?} maps to {img:?}, which is not a target simplex")));
                }
            }
        }
        Ok(Self { source, target, vertex_map })
    }

    pub fn identity(x: Arc<Complex>) -> Self {
        let n = x.vertex_count();
        Self { source: x.clone(), target: x, vertex_map: (0..n).collect() }
    }

    pub fn constant(source: Arc<Complex>, target: Arc<Complex>, vertex: usize) -> Result<Self> {
        let n = source.vertex_count();
        Self::new(source, target, vec![vertex; n])
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &SimplicialMap) -> Result<Self> {
        if !Arc::ptr_eq(inner.target(), &self.source) {
            return Err(Error::Mismatch("composition: inner target is not outer source".into()));
        }
        let vm = inner.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        Ok(Self { source: inner.source.clone(), target: self.target.clone(), vertex_map: vm })
    }

    /// Whether the vertex map is non-decreasing on every simplex. Alexander–Whitney
    /// cup products are natural on the cochain level exactly for such maps.
    pub fn is_order_preserving(&self) -> bool {
        (0..=self.source.dim()).all(|j| {
            self.source
                .simplices(j)
                .iter()
                .all(|s| s.windows(2).all(|w| self.vertex_map[w[0]] <= self.vertex_map[w[1]]))
        })
    }

    /// Image of the oriented simplex `s` as `(target index, sign)`, or `None`
    /// if degenerate.
    pub fn image(&self, s: &[usize]) -> Option<(usize, i64)> {
        let img: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
        let (sorted, sign) = orient(&img)?;
        Some((self.target.index_of(&sorted).expect("validated map"), sign))
    }

    /// Matrix of `φ_*` on `j`-chains; degenerate images give zero columns.
    pub fn induced_chain_map(&self, j: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.count(j), self.source.count(j));
        for (c, s) in self.source.simplices(j).iter().enumerate() {
            if let Some((r, sign)) = self.image(s) {
                m.set(r, c, BigInt::from(sign));
            }
        }
        m
    }

    pub fn push_chain(&self, j: usize, chain: &[crate::Integer]) -> Vec<crate::Integer> {
        self.induced_chain_map(j).mul_vec(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Arc<Complex> {
        Arc::new(Complex::from_simplices(format!("c{n}"), (0..n).map(|i| vec![i, (i + 1) % n])).unwrap())
    }

    #[test]
    fn identity_map_is_identity_matrix() {
        let x = circle(3);
        let id = SimplicialMap::identity(x.clone());
        for j in 0..=1 {
            assert_eq!(id.induced_chain_map(j), IntMatrix::identity(x.count(j)));
        }
    }

    #[test]
    fn constant_map_kills_edges() {
        let x = circle(3);
        let pt = Arc::new(Complex::from_simplices("pt", vec![vec![0]]).unwrap());
        let c = SimplicialMap::constant(x, pt, 0).unwrap();
        assert!(c.induced_chain_map(1).is_zero());
        assert_eq!(c.induced_chain_map(0).shape(), (1, 3));
    }

    #[test]
    fn chain_map_commutes_with_boundary() {
        let src = circle(6);
        let dst = circle(3);
        let f = SimplicialMap::new(src.clone(), dst.clone(), (0..6).map(|i| i % 3).collect()).unwrap();
        let lhs = f.induced_chain_map(0).mul(src.boundary_matrix(1).unwrap());
        let rhs = dst.boundary_matrix(1).unwrap().mul(&f.induced_chain_map(1));
        assert_eq!(lhs, rhs);
        assert!(!f.is_order_preserving());
    }

    #[test]
    fn rejects_non_simplicial() {
        let src = circle(4);
        let dst = circle(4);
        assert!(SimplicialMap::new(src, dst, vec![0, 2, 1, 3]).is_err());
    }
}

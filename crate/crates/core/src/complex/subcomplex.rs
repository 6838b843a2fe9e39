use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;

use super::{faces, Complex, Simplex, SimplicialMap};
use crate::arith::Integer;

/// A face-closed set of simplices of a parent complex, by index per dimension.
#[derive(Debug, Clone)]
pub struct Subcomplex {
    parent: Arc<Complex>,
    members: Vec<BTreeSet<usize>>,
}

impl Subcomplex {
    pub fn empty(parent: Arc<Complex>) -> Self {
        let members = vec![BTreeSet::new(); parent.dim() + 1];
        Self { parent, members }
    }

    /// Smallest subcomplex containing the given simplices.
    pub fn generated_by(parent: Arc<Complex>, simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut sub = Self::empty(parent);
        for s in simplices {
            sub.insert_closed(&s);
        }
        sub
    }

    /// Support of a `j`-chain: the closure of simplices with nonzero coefficient.
    pub fn support(parent: Arc<Complex>, j: usize, chain: &[Integer]) -> Self {
        let simplices: Vec<Simplex> = chain
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| parent.simplex(j, i).clone())
            .collect();
        Self::generated_by(parent, simplices)
    }

    fn insert_closed(&mut self, s: &[usize]) {
        let d = s.len() - 1;
        let idx = self.parent.index_of(s).expect("simplex of the parent");
        if !self.members[d].insert(idx) {
            return;
        }
        if d > 0 {
            for (f, _) in faces(s) {
                self.insert_closed(&f);
            }
        }
    }

    pub fn parent(&self) -> &Arc<Complex> {
        &self.parent
    }

    pub fn is_empty(&self) -> bool {
        self.members[0].is_empty()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.parent.index_of(s).is_some_and(|i| self.members[s.len() - 1].contains(&i))
    }

    pub fn indices(&self, j: usize) -> &BTreeSet<usize> {
        &self.members[j]
    }

    pub fn simplices(&self, j: usize) -> impl Iterator<Item = &Simplex> {
        self.members.get(j).into_iter().flatten().map(move |&i| self.parent.simplex(j, i))
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices(0).map(|s| s[0]).collect()
    }

    pub fn dim(&self) -> Option<usize> {
        self.members.iter().rposition(|m| !m.is_empty())
    }

    pub fn counts(&self) -> Vec<usize> {
        let top = self.dim().map_or(0, |d| d + 1);
        self.members[..top].iter().map(BTreeSet::len).collect()
    }

    /// Whether a chain of the parent is supported in this subcomplex.
    pub fn supports(&self, j: usize, chain: &[Integer]) -> bool {
        chain.iter().enumerate().all(|(i, c)| c.is_zero() || self.members.get(j).is_some_and(|m| m.contains(&i)))
    }

    /// Whether every simplex of the parent spanned by vertices of `self` lies in `self`.
    pub fn is_full(&self) -> bool {
        let vs = self.vertices();
        (0..=self.parent.dim())
            .all(|j| self.parent.simplices(j).iter().all(|s| !s.iter().all(|v| vs.contains(v)) || self.contains(s)))
    }

    /// The subcomplex as a standalone complex, with vertices relabelled
    /// monotonically, and its inclusion into the parent.
    pub fn to_complex(&self, name: impl Into<String>) -> (Arc<Complex>, SimplicialMap) {
        let verts: Vec<usize> = self.vertices().into_iter().collect();
        let relabel: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let simplices: Vec<Simplex> = (0..self.members.len())
            .flat_map(|j| self.simplices(j).map(|s| s.iter().map(|v| relabel[v]).collect()).collect::<Vec<_>>())
            .collect();
        let complex = Arc::new(Complex::from_explicit(name, simplices).expect("subcomplex is face-closed"));
        let inclusion = SimplicialMap::new(complex.clone(), self.parent.clone(), verts).expect("inclusion");
        (complex, inclusion)
    }

    /// Restrict a parent `j`-chain supported here to the coordinates of
    /// [`Self::to_complex`].
    pub fn restrict_chain(&self, j: usize, chain: &[Integer]) -> Vec<Integer> {
        self.members[j].iter().map(|&i| chain[i].clone()).collect()
    }
}

/// Closed star of the vertex set of `k`: every simplex meeting a vertex of `k`,
/// together with all faces.
pub fn closed_star_neighborhood(x: &Arc<Complex>, k: &Subcomplex) -> Subcomplex {
    let vs = k.vertices();
    Subcomplex::generated_by(x.clone(), x.simplices_meeting(&vs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_of_vertex_in_circle() {
        let x = Arc::new(Complex::from_simplices("s1", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let k = Subcomplex::generated_by(x.clone(), vec![vec![0]]);
        let st = closed_star_neighborhood(&x, &k);
        assert_eq!(st.counts(), vec![3, 2]);
        assert!(st.contains(&[0, 1]) && st.contains(&[0, 2]) && !st.contains(&[1, 2]));
    }

    #[test]
    fn star_of_empty_is_empty() {
        let x = Arc::new(Complex::from_simplices("s1", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let st = closed_star_neighborhood(&x, &Subcomplex::empty(x.clone()));
        assert!(st.is_empty());
        assert_eq!(st.dim(), None);
    }

    #[test]
    fn to_complex_relabels_monotonically() {
        let x = Arc::new(Complex::from_simplices("t", vec![vec![0, 1, 2], vec![2, 3]]).unwrap());
        let sub = Subcomplex::generated_by(x.clone(), vec![vec![2, 3], vec![1, 2]]);
        let (c, inc) = sub.to_complex("sub");
        assert_eq!(c.counts(), vec![3, 2]);
        assert_eq!(inc.vertex_map(), &[1, 2, 3]);
        assert!(inc.is_order_preserving());
    }
}

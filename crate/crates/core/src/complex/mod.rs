//! Finite oriented simplicial complexes and the combinatorics built on them.
//!
//! A simplex is its strictly increasing vertex tuple, and `∂` uses the
//! alternating face formula. Simplices of each dimension are indexed in
//! lexicographic order.

mod io;
mod maps;
mod subcomplex;
mod subdivision;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::zlin::{smith_normal_form, IntMatrix, SnfResult};

pub use io::{load_chain, load_complex, ChainDocument, ComplexDocument};
pub use maps::SimplicialMap;
pub use subcomplex::{closed_star_neighborhood, Subcomplex};
pub use subdivision::{barycentric_subdivide, iterated_subdivision, Subdivision};

pub type Simplex = Vec<usize>;

/// Sign of the permutation sorting `t`, and the sorted tuple; `None` when
/// `t` has a repeated entry.
pub fn orient(t: &[usize]) -> Option<(Simplex, i64)> {
    let mut v = t.to_vec();
    let mut sign = 1i64;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

pub fn faces(s: &[usize]) -> impl Iterator<Item = (Simplex, i64)> + '_ {
    (0..s.len()).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        (f, if i % 2 == 0 { 1 } else { -1 })
    })
}

#[derive(Debug, Default)]
struct Caches {
    snf: Vec<OnceLock<Arc<SnfResult>>>,
    coboundary_snf: Vec<OnceLock<Arc<SnfResult>>>,
    groups: Vec<[OnceLock<Arc<crate::zlin::FgAbelianGroup>>; 4]>,
}

/// A finite simplicial complex with its boundary matrices.
///
/// Immutable after construction; derived data (Smith forms, cohomology) is
/// computed lazily and cached behind `OnceLock`s.
#[derive(Debug)]
pub struct Complex {
    name: String,
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    boundary: Vec<IntMatrix>,
    caches: Caches,
}

impl Complex {
    /// Complex generated by `simplices` (all faces added).
    pub fn from_simplices(name: impl Into<String>, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut all: Vec<Vec<Simplex>> = Vec::new();
        let mut seen: Vec<std::collections::HashSet<Simplex>> = Vec::new();
        for s in simplices {
            let (s, _) = orient(&s).ok_or_else(|| Error::Parse(format!("repeated vertex in {s:?}")))?;
            if s.is_empty() {
                return Err(Error::Parse("empty simplex".into()));
            }
            close_into(&s, &mut all, &mut seen);
        }
        Self::build(name.into(), all)
    }

    /// Complex from an explicit, face-closed list. Duplicates and missing faces
    /// are errors.
    pub fn from_explicit(name: impl Into<String>, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut set = std::collections::HashSet::new();
        let mut listed = Vec::new();
        for s in simplices {
            let (s, _) = orient(&s).ok_or_else(|| Error::Parse(format!("repeated vertex in {s:?}")))?;
            if s.is_empty() {
                return Err(Error::Parse("empty simplex".into()));
            }
            if !set.insert(s.clone()) {
                return Err(Error::Duplicate(s));
            }
            listed.push(s);
        }
        for s in &listed {
            if s.len() > 1 {
                for (f, _) in faces(s) {
                    if !set.contains(&f) {
                        return Err(Error::FaceClosure { simplex: s.clone(), face: f });
                    }
                }
            }
        }
        let mut all: Vec<Vec<Simplex>> = Vec::new();
        for s in listed {
            let d = s.len() - 1;
            if all.len() <= d {
                all.resize(d + 1, Vec::new());
            }
            all[d].push(s);
        }
        Self::build(name.into(), all)
    }

    fn build(name: String, mut simplices: Vec<Vec<Simplex>>) -> Result<Self> {
        if simplices.is_empty() {
            simplices.push(Vec::new());
        }
        for level in simplices.iter_mut() {
            level.sort();
        }
        let vertex_count = simplices[0].len();
        for (i, v) in simplices[0].iter().enumerate() {
            if v[0] != i {
                return Err(Error::Parse(format!(
                    "vertex labels must be 0..{vertex_count} without gaps (missing {i})"
                )));
            }
        }
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let dim = simplices.len() - 1;
        let mut boundary = Vec::with_capacity(dim + 2);
        for j in 0..=dim + 1 {
            let rows = if j == 0 { 0 } else { simplices[j - 1].len() };
            let cols = simplices.get(j).map_or(0, Vec::len);
            let mut m = IntMatrix::zeros(rows, cols);
            if j > 0 && j <= dim {
                for (c, s) in simplices[j].iter().enumerate() {
                    for (f, sign) in faces(s) {
                        m.set(index[j - 1][&f], c, BigInt::from(sign));
                    }
                }
            }
            boundary.push(m);
        }
        let caches = Caches {
            snf: (0..=dim + 1).map(|_| OnceLock::new()).collect(),
            coboundary_snf: (0..=dim + 1).map(|_| OnceLock::new()).collect(),
            groups: (0..=dim + 1).map(|_| Default::default()).collect(),
        };
        Ok(Self { name, vertex_count, simplices, index, boundary, caches })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self::build(name.into(), self.simplices.clone()).expect("valid complex")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    /// Number of `j`-simplices (zero beyond the top dimension).
    pub fn count(&self, j: usize) -> usize {
        self.simplices.get(j).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, j: usize) -> &[Simplex] {
        self.simplices.get(j).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, j: usize, i: usize) -> &Simplex {
        &self.simplices[j][i]
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// `∂_j`, mapping `j`-chains to `(j−1)`-chains. Defined for `0 ≤ j ≤ dim+1`.
    pub fn boundary_matrix(&self, j: usize) -> Result<&IntMatrix> {
        self.boundary.get(j).ok_or(Error::Degree { degree: j, max: self.dim() + 1 })
    }

    /// `∂_j` with out-of-range degrees treated as zero maps.
    pub(crate) fn boundary_or_zero(&self, j: usize) -> IntMatrix {
        match self.boundary.get(j) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(if j == 0 { 0 } else { self.count(j - 1) }, self.count(j)),
        }
    }

    /// Cached Smith normal form of `∂_j`.
    pub fn boundary_snf(&self, j: usize) -> Arc<SnfResult> {
        match self.caches.snf.get(j) {
            Some(cell) => cell.get_or_init(|| Arc::new(smith_normal_form(&self.boundary[j]))).clone(),
            None => Arc::new(smith_normal_form(&self.boundary_or_zero(j))),
        }
    }

    /// Cached Smith normal form of the coboundary `δ: C^{j−1} → C^j`, i.e. `∂_jᵀ`.
    pub fn coboundary_snf(&self, j: usize) -> Arc<SnfResult> {
        match self.caches.coboundary_snf.get(j) {
            Some(cell) => cell.get_or_init(|| Arc::new(self.boundary_snf(j).transpose())).clone(),
            None => Arc::new(self.boundary_snf(j).transpose()),
        }
    }

    /// Cached group `kind` in degree `j` (the cochains module assigns kinds).
    pub(crate) fn cached_group(
        &self,
        j: usize,
        kind: usize,
        init: impl FnOnce() -> crate::zlin::FgAbelianGroup,
    ) -> Arc<crate::zlin::FgAbelianGroup> {
        match self.caches.groups.get(j) {
            Some(cells) => cells[kind].get_or_init(|| Arc::new(init())).clone(),
            None => Arc::new(init()),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(j, l)| if j % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Boundary of an integer `j`-chain.
    pub fn boundary_of(&self, j: usize, chain: &[crate::Integer]) -> Vec<crate::Integer> {
        if j == 0 {
            return Vec::new();
        }
        self.boundary_or_zero(j).mul_vec(chain)
    }

    pub fn is_cycle(&self, j: usize, chain: &[crate::Integer]) -> bool {
        use num_traits::Zero;
        self.boundary_of(j, chain).iter().all(Zero::is_zero)
    }

    /// All simplices as `(dim, index)` pairs whose vertex sets meet `vertices`.
    pub(crate) fn simplices_meeting(&self, vertices: &std::collections::BTreeSet<usize>) -> Vec<Simplex> {
        self.simplices
            .iter()
            .flatten()
            .filter(|s| s.iter().any(|v| vertices.contains(v)))
            .cloned()
            .collect()
    }

    /// Top-dimensional proper cofaces of `s` of dimension exactly `dim(s)+1`.
    pub fn cofaces(&self, s: &[usize]) -> Vec<Simplex> {
        let j = s.len();
        self.simplices(j).iter().filter(|t| is_face(s, t)).cloned().collect()
    }

    /// All simplices containing `s` (including `s`), ordered by dimension then
    /// lexicographically.
    pub fn star_of_simplex(&self, s: &[usize]) -> Vec<Simplex> {
        (s.len() - 1..=self.dim()).flat_map(|j| self.simplices(j).iter().filter(|t| is_face(s, t)).cloned()).collect()
    }
}

/// Whether sorted `f` is a (not necessarily proper) face of sorted `s`.
pub fn is_face(f: &[usize], s: &[usize]) -> bool {
    let mut it = s.iter();
    f.iter().all(|v| it.any(|w| w == v))
}

fn close_into(s: &Simplex, all: &mut Vec<Vec<Simplex>>, seen: &mut Vec<std::collections::HashSet<Simplex>>) {
    let d = s.len() - 1;
    if all.len() <= d {
        all.resize(d + 1, Vec::new());
        seen.resize(d + 1, Default::default());
    }
    if !seen[d].insert(s.clone()) {
        return;
    }
    all[d].push(s.clone());
    if d > 0 {
        for (f, _) in faces(s) {
            close_into(&f, all, seen);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Complex {
        Complex::from_simplices("s1", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn orient_sign() {
        assert_eq!(orient(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(orient(&[1, 0, 2]), Some((vec![0, 1, 2], -1)));
        assert_eq!(orient(&[1, 1]), None);
    }

    #[test]
    fn circle_boundary_columns_sum_to_zero() {
        let x = circle();
        let d1 = x.boundary_matrix(1).unwrap();
        assert_eq!(d1.shape(), (3, 3));
        for j in 0..3 {
            let s: BigInt = d1.column(j).iter().sum();
            assert_eq!(s, BigInt::from(0));
        }
    }

    #[test]
    fn point_boundary_shapes() {
        let p = Complex::from_simplices("point", vec![vec![0]]).unwrap();
        assert_eq!(p.boundary_matrix(1).unwrap().shape(), (1, 0));
        assert_eq!(p.boundary_matrix(0).unwrap().shape(), (0, 1));
        assert!(matches!(p.boundary_matrix(2), Err(Error::Degree { .. })));
    }

    #[test]
    fn explicit_closure_errors() {
        let err = Complex::from_explicit(
            "bad",
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::FaceClosure { .. }));
        let err = Complex::from_explicit("dup", vec![vec![0], vec![0]]).unwrap_err();
        assert_eq!(err, Error::Duplicate(vec![0]));
    }

    #[test]
    fn vertex_gap_rejected() {
        assert!(Complex::from_simplices("gap", vec![vec![0, 2]]).is_err());
    }
}

//! Splitting multiplicities off integer chains and resolving `±1` cycles
//! into pseudomanifolds.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{transport_subcomplex, SubdivisionTower, MAX_DEPTH};
use crate::arith::{int, Integer};
use crate::cochains::homology;
use crate::complex::{closed_star_neighborhood, faces, Complex, Simplex, SimplicialMap, Subcomplex, Subdivision};
use crate::error::{Error, Result};

/// A chain with all coefficients in `{−1, 0, 1}` on level `depth` of a tower,
/// and a `(j+1)`-chain `bounding` with `sd(original) = chain + ∂ bounding`.
#[derive(Debug, Clone)]
pub struct Split {
    pub degree: usize,
    pub depth: usize,
    pub subdivision: Arc<Subdivision>,
    pub chain: Vec<Integer>,
    pub bounding: Vec<Integer>,
}

fn max_abs(chain: &[Integer]) -> Integer {
    chain.iter().map(|c| c.abs()).max().unwrap_or_else(Integer::zero)
}

fn add_into(acc: &mut [Integer], v: &[Integer]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

/// Split the `j`-cycle `z` on the base of `tower` until every coefficient is
/// `±1`, subdividing as often as the tower allows.
pub fn split_cycle(tower: &SubdivisionTower, j: usize, z: &[Integer]) -> Result<Split> {
    let x = tower.base();
    if j > x.dim() || z.len() != x.count(j) {
        return Err(Error::Shape(format!("expected a {j}-chain on {}", x.name())));
    }
    if !x.is_cycle(j, z) {
        return Err(Error::NotACycle);
    }
    split_chain(tower, 0, j, z, MAX_DEPTH)
}

/// [`split_cycle`] for an arbitrary `j`-chain living on level `depth`; the
/// boundary is preserved (transported).
pub fn split_chain(
    tower: &SubdivisionTower,
    depth: usize,
    j: usize,
    chain: &[Integer],
    max_subdiv: usize,
) -> Result<Split> {
    let x = tower.base();
    if j >= x.dim() {
        return Err(Error::Dimension(format!(
            "cannot split {j}-cells of the {}-dimensional {}: they have no room for parallel copies",
            x.dim(),
            x.name()
        )));
    }
    let mut depth = depth;
    let mut cur = chain.to_vec();
    let mut bounding = vec![Integer::zero(); tower.level(depth)?.fine.count(j + 1)];
    while max_abs(&cur) > Integer::one() {
        if depth >= max_subdiv {
            return Err(Error::GeometryBudgetExceeded { max_subdiv });
        }
        let step = tower.step(depth)?;
        let (next, b) = split_step(&step, j, &cur)?;
        bounding = step.subdivide_chain(j + 1, &bounding);
        add_into(&mut bounding, &b);
        cur = next;
        depth += 1;
    }
    Ok(Split { degree: j, depth, subdivision: tower.level(depth)?, chain: cur, bounding })
}

/// Ids of the fine vertices (barycenters) in a one-step subdivision.
fn barycenter_ids(coarse: &Complex) -> impl Fn(usize, usize) -> usize {
    let mut offset = vec![0usize; coarse.dim() + 2];
    for d in 0..=coarse.dim() {
        offset[d + 1] = offset[d] + coarse.count(d);
    }
    move |d, i| offset[d] + i
}

/// One subdivision step. A cell `σ` with `|n| ≥ 2` is replaced by copies
/// `(−1)^j (sd ∂σ) * b_ρ`, one per simplex `ρ` of its star (the copy for
/// `ρ = σ` is `sd σ`, used last); each apex `ρ ≠ σ` serves a single cell, so
/// copies of different cells never overlap. The copies share the boundary of `sd σ`
/// and `(−1)^{j+1} (sd σ) * b_ρ` bounds the difference.
fn split_step(step: &Subdivision, j: usize, chain: &[Integer]) -> Result<(Vec<Integer>, Vec<Integer>)> {
    let y = &step.coarse;
    let fine = &step.fine;
    let bary = barycenter_ids(y);
    let mut out = vec![Integer::zero(); fine.count(j)];
    let mut bnd = vec![Integer::zero(); fine.count(j + 1)];
    let mut claimed: BTreeSet<Simplex> = BTreeSet::new();
    let sd_j = &step.chain_map[j];

    let cone = |base: &[Integer], bj: usize, apex: usize, sign: i64, acc: &mut Vec<Integer>| {
        for (t, a) in base.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut s = fine.simplex(bj, t).clone();
            s.push(apex);
            let idx = fine.index_of(&s).expect("cone over the subdivided cell");
            acc[idx] += a * sign;
        }
    };

    for (i, n) in chain.iter().enumerate() {
        if n.is_zero() {
            continue;
        }
        let sd_sigma = sd_j.column(i);
        if n.abs() <= Integer::one() {
            for (o, v) in out.iter_mut().zip(&sd_sigma) {
                *o += v * n;
            }
            continue;
        }
        let sigma = y.simplex(j, i).clone();
        let star = y.star_of_simplex(&sigma);
        if star.len() == 1 {
            return Err(Error::Dimension(format!("cell {sigma:?} is maximal and cannot be split")));
        }
        // proper cofaces first, so copies leave |σ| before any stays on it
        let mut apexes: Vec<Simplex> = star.into_iter().skip(1).filter(|rho| !claimed.contains(rho)).collect();
        claimed.extend(apexes.iter().cloned());
        apexes.push(sigma.clone());
        let on_sigma = apexes.len() - 1;

        let total = n.abs();
        let count = BigInt::from(apexes.len());
        let (q, r) = (&total / &count, (&total % &count).to_usize().expect("small"));
        let sign: i64 = if n.is_positive() { 1 } else { -1 };
        let sd_boundary = if j > 0 {
            let d = y.boundary_matrix(j).expect("degree in range").column(i);
            step.chain_map[j - 1].mul_vec(&d)
        } else {
            Vec::new()
        };
        for (slot, rho) in apexes.iter().enumerate() {
            let m = if slot < r { &q + 1 } else { q.clone() };
            if m.is_zero() {
                continue;
            }
            let apex = bary(rho.len() - 1, y.index_of(rho).expect("star simplex"));
            let mut copy = vec![Integer::zero(); fine.count(j)];
            if slot == on_sigma {
                copy.clone_from(&sd_sigma);
            } else if j == 0 {
                copy[fine.index_of(&[apex]).expect("barycenter")] = Integer::one();
            } else {
                cone(&sd_boundary, j - 1, apex, if j % 2 == 0 { 1 } else { -1 }, &mut copy);
            }
            for (o, v) in out.iter_mut().zip(&copy) {
                *o += v * &m * sign;
            }
            if slot != on_sigma {
                let mut w = vec![Integer::zero(); fine.count(j + 1)];
                cone(&sd_sigma, j, apex, if j % 2 == 0 { -1 } else { 1 }, &mut w);
                for (o, v) in bnd.iter_mut().zip(&w) {
                    *o += v * &m * sign;
                }
            }
        }
    }
    Ok((out, bnd))
}

/// An oriented `j`-pseudomanifold mapped into a complex, with its
/// fundamental cycle (one `±1` coefficient per top simplex).
#[derive(Debug, Clone)]
pub struct Pseudomanifold {
    pub degree: usize,
    pub complex: Arc<Complex>,
    pub map_to_ambient: SimplicialMap,
    pub fundamental_cycle: Vec<Integer>,
}

impl Pseudomanifold {
    /// Image of the fundamental cycle in the ambient complex.
    pub fn image_cycle(&self) -> Vec<Integer> {
        self.map_to_ambient.push_chain(self.degree, &self.fundamental_cycle)
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .complex
            .simplices(self.degree)
            .iter()
            .zip(&self.fundamental_cycle)
            .map(|(s, c)| json!({"simplex": s, "sign": c.to_i64()}))
            .collect();
        json!({
            "degree": self.degree,
            "vertices": self.complex.vertex_count(),
            "vertex_map": self.map_to_ambient.vertex_map(),
            "cells": cells,
        })
    }
}

/// Whether every coefficient of the `j`-chain is `±1` on every `j`-simplex
/// and each `(j−1)`-simplex is a face of exactly two `j`-simplices with
/// cancelling induced orientations.
pub fn is_pseudomanifold_cycle(x: &Complex, j: usize, cycle: &[Integer]) -> bool {
    if j > x.dim() || cycle.len() != x.count(j) || x.dim() != j {
        return false;
    }
    if !cycle.iter().all(|c| c.abs().is_one()) {
        return false;
    }
    if j == 0 {
        return true;
    }
    let d = x.boundary_matrix(j).expect("degree in range");
    (0..x.count(j - 1)).all(|f| {
        let row = d.row(f);
        let incident = row.iter().filter(|v| !v.is_zero()).count();
        let sum: Integer = row.iter().zip(cycle).map(|(a, c)| a * c).sum();
        incident == 2 && sum.is_zero()
    })
}

/// The local pseudomanifold condition plus the embedding surrogate: the map
/// is injective on each simplex and on the set of top simplices.
pub fn is_pseudomanifold(p: &Pseudomanifold) -> bool {
    if !is_pseudomanifold_cycle(&p.complex, p.degree, &p.fundamental_cycle) {
        return false;
    }
    let mut images = BTreeSet::new();
    for s in p.complex.simplices(p.degree) {
        match p.map_to_ambient.image(s) {
            Some((idx, _)) => {
                if !images.insert(idx) {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Resolve a `±1` `j`-cycle on `y` into a pseudomanifold. At every
/// `(j−1)`-face the incident sheets are paired, positive with negative,
/// preferring partners connected through unambiguous faces and then the
/// lowest index; the cells are glued abstractly along paired faces only.
/// The image of the fundamental cycle is `z` itself, so the homology
/// correction `b₂` is zero.
pub fn resolve_cycle(y: &Arc<Complex>, j: usize, z: &[Integer]) -> Result<(Pseudomanifold, Vec<Integer>)> {
    if j > y.dim() || z.len() != y.count(j) {
        return Err(Error::Shape(format!("expected a {j}-chain on {}", y.name())));
    }
    if !y.is_cycle(j, z) {
        return Err(Error::NotACycle);
    }
    if !z.iter().all(|c| c.abs() <= Integer::one()) {
        return Err(Error::Mismatch("resolving needs coefficients in {-1, 0, 1}".into()));
    }
    let cells: Vec<usize> = (0..z.len()).filter(|&i| !z[i].is_zero()).collect();
    if cells.is_empty() {
        return Err(Error::Mismatch("the zero cycle has no pseudomanifold".into()));
    }
    let b2 = vec![Integer::zero(); if j < y.dim() { y.count(j + 1) } else { 0 }];
    let width = j + 1;
    let mut nodes = UnionFind::new(cells.len() * width);

    if j > 0 {
        // (face) -> [(cell position, induced sign)]
        let mut incidence: BTreeMap<Simplex, Vec<(usize, i64)>> = BTreeMap::new();
        for (p, &c) in cells.iter().enumerate() {
            let coef = z[c].to_i64().expect("unit");
            for (f, s) in faces(y.simplex(j, c)) {
                incidence.entry(f).or_default().push((p, coef * s));
            }
        }
        let mut sheets = UnionFind::new(cells.len());
        for inc in incidence.values() {
            if inc.len() == 2 {
                sheets.union(inc[0].0, inc[1].0);
            }
        }
        for (face, inc) in &incidence {
            let mut plus: Vec<usize> = inc.iter().filter(|e| e.1 > 0).map(|e| e.0).collect();
            let mut minus: Vec<usize> = inc.iter().filter(|e| e.1 < 0).map(|e| e.0).collect();
            if plus.len() != minus.len() {
                return Err(Error::Mismatch(format!("unpairable sheets at face {face:?}")));
            }
            plus.sort_unstable();
            minus.sort_unstable();
            for p in plus {
                let cp = sheets.find(p);
                let pick = minus.iter().position(|&q| sheets.find(q) == cp).unwrap_or(0);
                let q = minus.remove(pick);
                for v in face {
                    let a = y.simplex(j, cells[p]).iter().position(|w| w == v).expect("corner");
                    let b = y.simplex(j, cells[q]).iter().position(|w| w == v).expect("corner");
                    nodes.union(p * width + a, q * width + b);
                }
            }
        }
    }

    // label classes by (ambient vertex, first occurrence) so the map is monotone
    let mut classes: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for n in 0..cells.len() * width {
        let root = nodes.find(n);
        let ambient = y.simplex(j, cells[n / width])[n % width];
        classes.entry(root).or_insert((ambient, n));
    }
    let mut order: Vec<(usize, usize, usize)> = classes.iter().map(|(&r, &(a, n))| (a, n, r)).collect();
    order.sort_unstable();
    let label: BTreeMap<usize, usize> = order.iter().enumerate().map(|(l, &(_, _, r))| (r, l)).collect();
    let vertex_map: Vec<usize> = order.iter().map(|&(a, _, _)| a).collect();

    let mut tops: Vec<(Simplex, Integer)> = Vec::with_capacity(cells.len());
    for (p, &c) in cells.iter().enumerate() {
        let mut s: Simplex = (0..width).map(|a| label[&nodes.find(p * width + a)]).collect();
        s.sort_unstable();
        tops.push((s, z[c].clone()));
    }
    let complex = Arc::new(Complex::from_simplices(
        format!("P({})", y.name()),
        tops.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>(),
    )?);
    let mut fundamental = vec![Integer::zero(); complex.count(j)];
    for (s, c) in &tops {
        fundamental[complex.index_of(s).expect("top cell")] = c.clone();
    }
    let map_to_ambient = SimplicialMap::new(complex.clone(), y.clone(), vertex_map)?;
    let p = Pseudomanifold { degree: j, complex, map_to_ambient, fundamental_cycle: fundamental };
    if !is_pseudomanifold(&p) || p.image_cycle() != z {
        return Err(Error::Mismatch("resolving produced an invalid pseudomanifold".into()));
    }
    Ok((p, b2))
}

/// A `j`-cycle `z` on the base written as `sd^D z = ∂b + ξ`, with `ξ` the
/// image of a pseudomanifold's fundamental cycle on level `D`.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub degree: usize,
    pub cycle: Vec<Integer>,
    pub split: Split,
    pub pseudomanifold: Pseudomanifold,
    pub bounding: Vec<Integer>,
}

impl Normalization {
    pub fn depth(&self) -> usize {
        self.split.depth
    }

    pub fn subdivision(&self) -> &Arc<Subdivision> {
        &self.split.subdivision
    }

    /// `sd^D z − ∂b − ξ`, which is zero for a correct normalization.
    pub fn defect(&self) -> Vec<Integer> {
        let sd = self.subdivision();
        let mut d = sd.subdivide_chain(self.degree, &self.cycle);
        let db = sd.fine.boundary_of(self.degree + 1, &self.bounding);
        for (a, b) in d.iter_mut().zip(db.iter().chain(std::iter::repeat(&Integer::zero()))) {
            *a -= b;
        }
        for (a, b) in d.iter_mut().zip(self.pseudomanifold.image_cycle()) {
            *a -= b;
        }
        d
    }

    pub fn identity_holds(&self) -> bool {
        self.defect().iter().all(Zero::is_zero)
    }

    /// Whether `b` and `ξ` are carried by the closed star of `|z|` in the base.
    pub fn supported_near_cycle(&self) -> bool {
        let sd = self.subdivision();
        let base = sd.coarse.clone();
        let support = Subcomplex::support(base.clone(), self.degree, &self.cycle);
        let region = transport_subcomplex(sd, &closed_star_neighborhood(&base, &support));
        let xi = self.pseudomanifold.image_cycle();
        region.supports(self.degree, &xi)
            && (self.bounding.iter().all(Zero::is_zero) || region.supports(self.degree + 1, &self.bounding))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "depth": self.depth(),
            "pseudomanifold": self.pseudomanifold.to_json(),
            "bounding_nonzero": self.bounding.iter().filter(|c| !c.is_zero()).count(),
            "identity_holds": self.identity_holds(),
        })
    }
}

/// Split and then resolve a nonzero `j`-cycle with `j < dim`.
pub fn normalize(tower: &SubdivisionTower, j: usize, z: &[Integer]) -> Result<Normalization> {
    let split = split_cycle(tower, j, z)?;
    let (p, b2) = resolve_cycle(&split.subdivision.fine, j, &split.chain)?;
    let mut bounding = split.bounding.clone();
    add_into(&mut bounding, &b2);
    Ok(Normalization { degree: j, cycle: z.to_vec(), split, pseudomanifold: p, bounding })
}

/// Named test cycles in degree `j`: homology generators, multiples of the
/// first one, boundaries of the first few `(j+1)`-simplices and, in degree
/// zero, vertex differences.
pub fn sample_cycles(x: &Complex, j: usize) -> Vec<(String, Vec<Integer>)> {
    let mut out = Vec::new();
    if j > x.dim() {
        return out;
    }
    let h = homology(x, j);
    for l in 0..h.ngens() {
        out.push((format!("generator{l}"), h.generator(l)));
    }
    if h.ngens() > 0 {
        for m in [2, 3] {
            out.push((format!("{m}*generator0"), h.generator(0).iter().map(|c| c * m).collect()));
        }
    }
    if j < x.dim() {
        let d = x.boundary_matrix(j + 1).expect("degree in range");
        for i in 0..x.count(j + 1).min(2) {
            out.push((format!("boundary{:?}", x.simplex(j + 1, i)), d.column(i)));
        }
    }
    if j == 0 && x.vertex_count() > 1 {
        let mut e = vec![Integer::zero(); x.count(0)];
        e[0] = int(-1);
        e[x.count(0) - 1] = int(1);
        out.push(("vertex_difference".into(), e.clone()));
        out.push(("3*vertex_difference".into(), e.iter().map(|c| c * 3).collect()));
    }
    out.retain(|(_, z)| z.iter().any(|c| !c.is_zero()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn unit_cycle_is_untouched() {
        let x = corpus::get("t2");
        let tower = SubdivisionTower::new(x.clone());
        let z = homology(&x, 1).generator(0);
        let s = split_cycle(&tower, 1, &z).unwrap();
        assert_eq!(s.depth, 0);
        assert_eq!(s.chain, z);
        assert!(s.bounding.iter().all(Zero::is_zero));
    }

    #[test]
    fn doubled_torus_cycle_splits() {
        let x = corpus::get("t2");
        let tower = SubdivisionTower::new(x.clone());
        let z: Vec<Integer> = homology(&x, 1).generator(0).iter().map(|c| c * 2).collect();
        let n = normalize(&tower, 1, &z).unwrap();
        assert!(n.identity_holds());
        assert!(n.supported_near_cycle());
        assert!(is_pseudomanifold(&n.pseudomanifold));
        // two parallel circles
        assert_eq!(homology(&n.pseudomanifold.complex, 0).ngens(), 2);
    }

    #[test]
    fn zero_dimensional_split_in_sphere() {
        let x = corpus::get("s2");
        let tower = SubdivisionTower::new(x.clone());
        let z = ints(&[-3, 3, 0, 0]);
        let n = normalize(&tower, 0, &z).unwrap();
        assert!(n.identity_holds());
        assert_eq!(n.pseudomanifold.complex.count(0), 6);
        assert!(n.pseudomanifold.image_cycle().iter().all(|c| c.abs() <= Integer::one()));
    }

    #[test]
    fn top_dimension_cannot_split() {
        let x = corpus::get("s1");
        let tower = SubdivisionTower::new(x.clone());
        let z = ints(&[2, -2, 2]);
        assert!(matches!(split_cycle(&tower, 1, &z), Err(Error::Dimension(_))));
    }

    #[test]
    fn figure_eight_resolves_to_two_circles() {
        let y = Arc::new(
            Complex::from_simplices("eight", vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 3], vec![3, 4], vec![0, 4]])
                .unwrap(),
        );
        // edges in order [0,1],[0,2],[0,3],[0,4],[1,2],[3,4]
        let z = ints(&[1, -1, 1, -1, 1, 1]);
        assert!(y.is_cycle(1, &z));
        let (p, b2) = resolve_cycle(&y, 1, &z).unwrap();
        assert!(is_pseudomanifold(&p));
        assert!(b2.is_empty() || b2.iter().all(Zero::is_zero));
        assert_eq!(p.complex.vertex_count(), 6);
        assert_eq!(homology(&p.complex, 0).ngens(), 2);
    }

    #[test]
    fn wedge_of_spheres_separates() {
        // two solid tetrahedra sharing vertex 0; the cycle is the sum of their boundaries
        let y = Arc::new(Complex::from_simplices("wedge", vec![vec![0, 1, 2, 3], vec![0, 4, 5, 6]]).unwrap());
        let d = y.boundary_matrix(3).unwrap();
        let mut z = d.column(0);
        add_into(&mut z, &d.column(1));
        let (p, _) = resolve_cycle(&y, 2, &z).unwrap();
        assert!(is_pseudomanifold(&p));
        assert_eq!(p.complex.vertex_count(), 8);
        assert_eq!(homology(&p.complex, 0).ngens(), 2);
    }

    #[test]
    fn pseudomanifold_cycle_checks() {
        let c = Complex::from_simplices("s1", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(is_pseudomanifold_cycle(&c, 1, &ints(&[1, -1, 1])));
        assert!(!is_pseudomanifold_cycle(&c, 1, &ints(&[1, 1, 1])));
        let two = Complex::from_simplices("two", vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert!(!is_pseudomanifold_cycle(&two, 2, &ints(&[1, -1])));
        let circles = Complex::from_simplices(
            "two circles",
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap();
        assert!(is_pseudomanifold_cycle(&circles, 1, &ints(&[1, -1, 1, 1, -1, 1])));
    }
}

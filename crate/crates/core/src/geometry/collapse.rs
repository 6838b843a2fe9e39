//! Greedy elementary collapses.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::complex::{faces, Simplex, Subcomplex};

/// Result of a greedy free-face collapse of a subcomplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collapse {
    pub steps: usize,
    /// Simplices left per dimension.
    pub remaining: Vec<usize>,
}

impl Collapse {
    /// Whether no simplex of dimension `≥ k` survived.
    pub fn below(&self, k: usize) -> bool {
        self.remaining.iter().skip(k).all(|&c| c == 0)
    }
}

/// Repeatedly remove a free face together with its unique coface. Returns
/// the certificate and the surviving subcomplex, which has the homotopy
/// type of `sub`.
pub fn collapse(sub: &Subcomplex) -> (Collapse, Subcomplex) {
    let dim = sub.dim().unwrap_or(0);
    let all: Vec<Simplex> = (0..=dim).flat_map(|j| sub.simplices(j).cloned().collect::<Vec<_>>()).collect();
    let mut cofaces: HashMap<Simplex, BTreeSet<Simplex>> = all.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
    for s in &all {
        if s.len() > 1 {
            for (f, _) in faces(s) {
                cofaces.get_mut(&f).expect("face-closed").insert(s.clone());
            }
        }
    }
    let mut queue: VecDeque<Simplex> = all.iter().rev().cloned().collect();
    let mut steps = 0;
    while let Some(tau) = queue.pop_front() {
        let sigma = match cofaces.get(&tau) {
            Some(c) if c.len() == 1 => c.iter().next().expect("one coface").clone(),
            _ => continue,
        };
        for s in [&sigma, &tau] {
            cofaces.remove(s);
            if s.len() > 1 {
                for (f, _) in faces(s) {
                    if let Some(c) = cofaces.get_mut(&f) {
                        c.remove(s);
                        queue.push_back(f);
                    }
                }
            }
        }
        steps += 1;
    }
    let mut remaining = vec![0; dim + 1];
    let mut left = Vec::with_capacity(cofaces.len());
    for s in all {
        if cofaces.contains_key(&s) {
            remaining[s.len() - 1] += 1;
            left.push(s);
        }
    }
    (Collapse { steps, remaining }, Subcomplex::generated_by(sub.parent().clone(), left))
}

/// The certificate alone.
pub fn collapse_certificate(sub: &Subcomplex) -> Collapse {
    collapse(sub).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochains::integral_cohomology;
    use crate::complex::{closed_star_neighborhood, Complex};
    use crate::corpus;
    use crate::geometry::{cohomology_vanishes_above, SubdivisionTower};
    use std::sync::Arc;

    #[test]
    fn simplex_collapses_to_a_point() {
        let x = Arc::new(Complex::from_simplices("tet", vec![vec![0, 1, 2, 3]]).unwrap());
        let all = Subcomplex::generated_by(x.clone(), vec![vec![0, 1, 2, 3]]);
        let (c, rest) = collapse(&all);
        assert_eq!(c.remaining, vec![1, 0, 0, 0]);
        assert_eq!(rest.counts(), vec![1]);
    }

    #[test]
    fn closed_surface_does_not_collapse() {
        let x = corpus::get("t2");
        let all = Subcomplex::generated_by(x.clone(), x.simplices(2).to_vec());
        assert_eq!(collapse_certificate(&all).steps, 0);
    }

    #[test]
    fn collapsed_vanishing_agrees_with_direct() {
        for name in ["s2", "rp2", "klein", "moore3"] {
            let x = corpus::get(name);
            let tower = SubdivisionTower::new(x.clone());
            let fine = tower.level(1).unwrap().fine.clone();
            for v in 0..fine.vertex_count().min(12) {
                let core = Subcomplex::generated_by(fine.clone(), vec![vec![v], vec![(v + 5) % fine.vertex_count()]]);
                let (u, _) = closed_star_neighborhood(&fine, &core).to_complex("u");
                let direct = (1..=u.dim()).all(|j| integral_cohomology(&u, j).is_trivial());
                assert_eq!(cohomology_vanishes_above(&u, 0), direct, "{name} {v}");
            }
            let (whole, _) = Subcomplex::generated_by(x.clone(), x.simplices(2).to_vec()).to_complex("x");
            let direct = integral_cohomology(&whole, 2).is_trivial() && integral_cohomology(&whole, 1).is_trivial();
            assert_eq!(cohomology_vanishes_above(&whole, 0), direct, "{name}");
        }
    }
}

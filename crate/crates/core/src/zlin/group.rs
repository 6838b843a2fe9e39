use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{smith_normal_form, IntMatrix, SnfResult};
use crate::arith::{reduce_mod, Integer, Rational};

/// A finitely generated abelian group `Z^rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_s`, realized
/// as a subquotient of an ambient lattice `Z^n`.
///
/// Coordinates list torsion factors first, then free ones. `gen_lift` maps
/// coordinates to ambient vectors and `project` maps ambient vectors (of the
/// subgroup being presented) back to coordinates, before torsion reduction.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<Integer>,
    pub gen_lift: IntMatrix,
    pub project: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl FgAbelianGroup {
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.gen_lift.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    /// Modulus of coordinate `i`; zero for free coordinates.
    pub fn modulus(&self, i: usize) -> Integer {
        self.torsion.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn moduli(&self) -> Vec<Integer> {
        (0..self.ngens()).map(|i| self.modulus(i)).collect()
    }

    pub fn free_range(&self) -> std::ops::Range<usize> {
        self.torsion.len()..self.ngens()
    }

    pub fn reduce(&self, coords: &[Integer]) -> Vec<Integer> {
        coords.iter().enumerate().map(|(i, c)| reduce_mod(c, &self.modulus(i))).collect()
    }

    /// Canonical coordinates of an ambient vector lying in the presented subgroup.
    pub fn coordinates(&self, v: &[Integer]) -> Vec<Integer> {
        self.reduce(&self.project.mul_vec(v))
    }

    /// Free coordinates of a rational vector in the rational span of the subgroup.
    pub fn rational_coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        let all = self.project.mul_rat_vec(v);
        all[self.torsion.len()..].to_vec()
    }

    pub fn lift(&self, coords: &[Integer]) -> Vec<Integer> {
        self.gen_lift.mul_vec(coords)
    }

    pub fn generator(&self, i: usize) -> Vec<Integer> {
        self.gen_lift.column(i)
    }

    pub fn order(&self) -> Option<Integer> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary { rank: self.rank, torsion: self.torsion.iter().map(ToString::to_string).collect() }
    }

    /// Human-readable form, e.g. `Z^2 + Z/2`.
    pub fn describe(&self) -> String {
        self.describe_over("Z")
    }

    /// As [`describe`](Self::describe) with the free summand written as
    /// copies of `free`, e.g. `Q/Z + Z/2` for coefficients in `Q/Z`.
    pub fn describe_over(&self, free: &str) -> String {
        let mut parts = Vec::new();
        let free = if free.contains('/') { format!("({free})") } else { free.to_string() };
        match self.rank {
            0 => {}
            1 => parts.push(free.trim_matches(|c| c == '(' || c == ')').to_string()),
            r => parts.push(format!("{free}^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Columns form a Z-basis of `ker A`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    smith_normal_form(a).kernel_basis()
}

/// `x` with `A·x = b` over Z, or `None` when the system has no integer solution.
pub fn solve_integer(a: &IntMatrix, b: &[Integer]) -> crate::Result<Option<Vec<Integer>>> {
    smith_normal_form(a).solve_integer(b)
}

/// Presentation of `Z^rows / im A`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(a);
    let ambient = IntMatrix::identity(a.rows());
    presentation(&ambient, &ambient, &snf)
}

/// Presentation of `ker A / im R`, given the SNF of `A` and relations `R` whose
/// columns lie in `ker A`.
pub fn subquotient(kernel_of: &SnfResult, relations: &IntMatrix) -> FgAbelianGroup {
    let basis = kernel_of.kernel_basis();
    let left = kernel_of.kernel_left_inverse();
    let rel_coords = left.mul(relations);
    debug_assert_eq!(basis.mul(&rel_coords), *relations, "relations must lie in the kernel");
    let snf = smith_normal_form(&rel_coords);
    presentation(&basis, &left, &snf)
}

/// Quotient of the lattice spanned by `basis` (with left inverse `left`) by
/// the relations whose basis coordinates have Smith form `snf`.
fn presentation(basis: &IntMatrix, left: &IntMatrix, snf: &SnfResult) -> FgAbelianGroup {
    let m = snf.rows;
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in snf.diagonal.iter().enumerate() {
        if !d.is_one() {
            torsion_idx.push(i);
            torsion.push(d.clone());
        }
    }
    let kept: Vec<usize> = torsion_idx.iter().copied().chain(snf.rank()..m).collect();
    let gen_lift = basis.mul(&snf.u_inv.select_columns(kept.iter().copied()));
    let project = snf.u.select_rows(kept.iter().copied()).mul(left);
    FgAbelianGroup { rank: m - snf.rank(), torsion, gen_lift, project }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn cokernel_z2() {
        let g = cokernel(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!((g.rank, g.torsion.clone()), (0, vec![int(2)]));
        assert_eq!(g.project.mul(&g.gen_lift), IntMatrix::identity(1));
    }

    #[test]
    fn cokernel_of_empty_is_free() {
        let g = cokernel(&IntMatrix::zeros(3, 0));
        assert_eq!(g.rank, 3);
        assert!(g.torsion.is_empty());
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert_eq!(kernel_basis(&IntMatrix::identity(4)).cols(), 0);
        let k = kernel_basis(&IntMatrix::zeros(2, 3));
        assert_eq!(k.cols(), 3);
        assert_eq!(k.determinant().magnitude(), &num_bigint::BigUint::from(1u8));
    }

    #[test]
    fn describe_group() {
        let g = cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
        assert_eq!(g.describe(), "Z + Z/2");
    }
}

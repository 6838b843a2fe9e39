use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::IntMatrix;
use crate::arith::{Integer, Rational};
use crate::error::{Error, Result};

/// Smith normal form `U·A·V = S` with the inverses of both transforms.
///
/// `diagonal` holds the nonzero invariant factors `d₁ | d₂ | … | d_rank`, all
/// positive; every other entry of `S` is zero.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub rows: usize,
    pub cols: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub diagonal: Vec<Integer>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn s(&self) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.rows, self.cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            s.set(i, i, d.clone());
        }
        s
    }

    /// SNF of `Aᵀ` from the SNF of `A`: `Vᵀ·Aᵀ·Uᵀ = Sᵀ`.
    pub fn transpose(&self) -> SnfResult {
        SnfResult {
            rows: self.cols,
            cols: self.rows,
            u: self.v.transpose(),
            u_inv: self.v_inv.transpose(),
            v: self.u.transpose(),
            v_inv: self.u_inv.transpose(),
            diagonal: self.diagonal.clone(),
        }
    }

    /// Columns form a Z-basis of `ker A`.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.select_columns(self.rank()..self.cols)
    }

    /// Left inverse `L` of [`Self::kernel_basis`]: `L·K = I`, and `L·x` gives the
    /// kernel coordinates of any `x ∈ ker A`.
    pub fn kernel_left_inverse(&self) -> IntMatrix {
        self.v_inv.select_rows(self.rank()..self.cols)
    }

    /// A particular integer solution of `A·x = b`, or `None` when none exists.
    pub fn solve_integer(&self, b: &[Integer]) -> Result<Option<Vec<Integer>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("rhs has length {}, expected {}", b.len(), self.rows)));
        }
        let y = self.u.mul_vec(b);
        let r = self.rank();
        if y[r..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let mut z = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let d = &self.diagonal[i];
            if !(&y[i] % d).is_zero() {
                return Ok(None);
            }
            z[i] = &y[i] / d;
        }
        Ok(Some(self.v.mul_vec(&z)))
    }

    /// A particular rational solution of `A·x = b`, or `None` when none exists.
    pub fn solve_rational(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("rhs has length {}, expected {}", b.len(), self.rows)));
        }
        let y = self.u.mul_rat_vec(b);
        let r = self.rank();
        if y[r..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let mut z = vec![BigRational::zero(); self.cols];
        for i in 0..r {
            z[i] = &y[i] / BigRational::from_integer(self.diagonal[i].clone());
        }
        Ok(Some(self.v.mul_rat_vec(&z)))
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += q·row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &Integer) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    /// `col[dst] += q·col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &Integer) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Smallest nonzero |entry| in the trailing block; ties go to the lowest
    /// row, then the lowest column.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => v.abs() < self.a.get(bi, bj).abs(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form with smallest-|pivot| selection.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = a.shape();
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut diagonal = Vec::new();

    'outer: for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = w.find_pivot(t) else { break 'outer };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a.get(t, t).clone();

            let mut clean = true;
            for i in t + 1..m {
                let e = w.a.get(i, t);
                if e.is_zero() {
                    continue;
                }
                let q = e / &p;
                w.add_row(i, t, &-q);
                if !w.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let e = w.a.get(t, j);
                if e.is_zero() {
                    continue;
                }
                let q = e / &p;
                w.add_col(j, t, &-q);
                if !w.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Pivot row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| {
                    let e = w.a.get(i, j);
                    !e.is_zero() && !(e % &p).is_zero()
                })
            });
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        diagonal.push(w.a.get(t, t).clone());
    }

    SnfResult { rows: m, cols: n, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use num_traits::One;

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(r.u.mul(a).mul(&r.v), r.s());
        assert_eq!(r.u.mul(&r.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(r.v.mul(&r.v_inv), IntMatrix::identity(a.cols()));
        for w in r.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(r.diagonal.iter().all(|d| d.is_positive()));
        r
    }

    #[test]
    fn one_by_one() {
        let r = check(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(r.diagonal, vec![int(2)]);
        assert_eq!(r.u, IntMatrix::identity(1));
        assert_eq!(r.v, IntMatrix::identity(1));
    }

    #[test]
    fn zero_matrix() {
        let r = check(&IntMatrix::zeros(3, 2));
        assert!(r.diagonal.is_empty());
        assert_eq!(r.u, IntMatrix::identity(3));
        assert_eq!(r.v, IntMatrix::identity(2));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) has Smith form diag(1, 6).
        let r = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(r.diagonal, vec![int(1), int(6)]);
    }

    #[test]
    fn empty_shapes() {
        let r = check(&IntMatrix::zeros(0, 3));
        assert_eq!(r.kernel_basis().cols(), 3);
        let r = check(&IntMatrix::zeros(2, 0));
        assert_eq!(r.kernel_basis().cols(), 0);
        assert!(r.solve_integer(&[int(0), int(0)]).unwrap().is_some());
        assert!(r.solve_integer(&[int(1), int(0)]).unwrap().is_none());
    }

    #[test]
    fn solve_scalar() {
        let r = smith_normal_form(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(r.solve_integer(&[int(4)]).unwrap(), Some(vec![int(2)]));
        assert_eq!(r.solve_integer(&[int(3)]).unwrap(), None);
        assert!(r.solve_integer(&[int(3), int(1)]).is_err());
        let q = r.solve_rational(&[BigRational::one()]).unwrap().unwrap();
        assert_eq!(q, vec![crate::arith::rat(1, 2)]);
    }
}

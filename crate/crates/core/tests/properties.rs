use charrig_core::arith::int;
use charrig_core::cochains::{coboundary, cup};
use charrig_core::zlin::{cokernel, smith_normal_form, solve_integer};
use charrig_core::{corpus, Cochain, IntMatrix, Integer};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5i64..=5, c), r))
}

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn is_identity(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| *m.get(i, j) == if i == j { Integer::one() } else { Integer::zero() }))
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<i64>]) -> i128 {
    if m.len() == 1 {
        return m[0][0] as i128;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] as i128 * det(&minor)
        })
        .sum()
}

proptest! {
    #[test]
    fn smith_form_factors_the_matrix(rows in matrix(8)) {
        let a = to_matrix(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.s());
        prop_assert!(is_identity(&s.u.mul(&s.u_inv)));
        prop_assert!(is_identity(&s.v.mul(&s.v_inv)));
        for d in &s.diagonal {
            prop_assert!(d.is_positive());
        }
        for w in s.diagonal.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
    }

    #[test]
    fn kernel_basis_spans_the_kernel(rows in matrix(7)) {
        let a = to_matrix(&rows);
        let s = smith_normal_form(&a);
        let k = s.kernel_basis();
        prop_assert_eq!(k.cols() + s.rank(), a.cols());
        prop_assert!(a.mul(&k).is_zero());
        prop_assert!(is_identity(&s.kernel_left_inverse().mul(&k)));
    }

    #[test]
    fn integral_solutions_are_found_exactly_when_they_exist(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..=3),
        b in prop::collection::vec(-6i64..=6, 3),
    ) {
        let a = to_matrix(&rows);
        let b: Vec<Integer> = b[..rows.len()].iter().map(|&v| int(v)).collect();
        match solve_integer(&a, &b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul_vec(&x), b),
            None => {
                // no solution in a box large enough for these entries
                for x0 in -30i64..=30 {
                    for x1 in -30i64..=30 {
                        prop_assert!(a.mul_vec(&[int(x0), int(x1)]) != b, "missed ({x0}, {x1})");
                    }
                }
            }
        }
    }

    #[test]
    fn cokernel_order_is_the_determinant(n in 1usize..=5, seed in prop::collection::vec(-5i64..=5, 25)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * 5..i * 5 + n].to_vec()).collect();
        let d = det(&rows);
        let order = cokernel(&to_matrix(&rows)).order();
        if d == 0 {
            prop_assert_eq!(order, None);
        } else {
            prop_assert_eq!(order, Some(Integer::from(d.abs())));
        }
    }

    #[test]
    fn coboundary_is_a_derivation_of_cup(
        name in prop::sample::select(vec!["s2", "t2", "rp2", "klein"]),
        p in 0usize..=1,
        values in prop::collection::vec(-3i64..=3, 200),
    ) {
        let x = corpus::get(name);
        let q = 1 - p.min(1);
        let a = Cochain::integral(p, &values[..x.count(p)].iter().map(|&v| int(v)).collect::<Vec<_>>());
        let b = Cochain::integral(q, &values[100..100 + x.count(q)].iter().map(|&v| int(v)).collect::<Vec<_>>());
        let lhs = coboundary(&x, &cup(&x, &a, &b).unwrap());
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs1 = cup(&x, &coboundary(&x, &a), &b).unwrap();
        let rhs2 = cup(&x, &a, &coboundary(&x, &b)).unwrap().scale_int(sign);
        let sum: Vec<_> = rhs1.values().iter().zip(rhs2.values()).map(|(u, v)| u + v).collect();
        prop_assert_eq!(lhs.values(), &sum[..]);
        prop_assert!(coboundary(&x, &coboundary(&x, &a)).is_zero());
    }
}

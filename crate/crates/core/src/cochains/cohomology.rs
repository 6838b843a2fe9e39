//! Cohomology groups over the three coefficient rings, classes, the Bockstein
//! map and the maps of the coefficient and de Rham-type sequences.

use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{coboundary, is_integral_form, pullback_cochain, Cochain, LiftStrategy, QuotientForm, Ring};
use crate::arith::{format_rational, frac, from_int, is_integral, reduce_mod, to_integer, Integer, Rational};
use crate::complex::{Complex, SimplicialMap};
use crate::error::{Error, Result};
use crate::zlin::{subquotient, FgAbelianGroup, IntMatrix};

const H_Z: usize = 0;
const H_Q: usize = 1;
const H_QZ: usize = 2;
const HOM_Z: usize = 3;

/// `H^j(X; Z)` presented on integral cocycles in `C^j`.
pub fn integral_cohomology(x: &Complex, j: usize) -> Arc<FgAbelianGroup> {
    x.cached_group(j, H_Z, || {
        let relations = x.boundary_or_zero(j).transpose();
        subquotient(&x.coboundary_snf(j + 1), &relations)
    })
}

/// `H_j(X; Z)` presented on integral cycles in `C_j`.
pub fn homology(x: &Complex, j: usize) -> Arc<FgAbelianGroup> {
    x.cached_group(j, HOM_Z, || subquotient(&x.boundary_snf(j), &x.boundary_or_zero(j + 1)))
}

/// Presentation of `H^j(X; ring)`.
///
/// * `Z`: generators are integral cocycles, torsion coordinates first.
/// * `Q`: the free part of the integral presentation, read over `Q`.
/// * `Q/Z`: `Hom(H_j(X; Z), Q/Z)`. Coordinates are the values on the homology
///   generators (`project` is the transpose of the homology `gen_lift`), and
///   `gen_lift` is the transpose of the homology `project`, whose columns are
///   integral cochains dual to the homology generators. A coordinate vector
///   `t` lifted to `Q` gives the rational cochain `gen_lift · t`, a
///   representative whose coboundary is integral.
pub fn cohomology(x: &Complex, j: usize, ring: Ring) -> Arc<FgAbelianGroup> {
    match ring {
        Ring::Z => integral_cohomology(x, j),
        Ring::Q => x.cached_group(j, H_Q, || {
            let g = integral_cohomology(x, j);
            let free = g.free_range();
            FgAbelianGroup {
                rank: g.rank,
                torsion: Vec::new(),
                gen_lift: g.gen_lift.select_columns(free.clone()),
                project: g.project.select_rows(free),
            }
        }),
        Ring::QmodZ => x.cached_group(j, H_QZ, || {
            let h = homology(x, j);
            FgAbelianGroup {
                rank: h.rank,
                torsion: h.torsion.clone(),
                gen_lift: h.project.transpose(),
                project: h.gen_lift.transpose(),
            }
        }),
    }
}

/// A cohomology class, stored by coordinates in the presentation of
/// [`cohomology`].
///
/// Over `Z` the coordinates are integers with torsion entries reduced; over
/// `Q` they are the free coordinates; over `Q/Z` every entry lies in `[0, 1)`
/// (torsion entries in `(1/t)Z`).
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub ring: Ring,
    pub degree: usize,
    pub group: Arc<FgAbelianGroup>,
    pub coords: Vec<Rational>,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.degree == other.degree && self.coords == other.coords
    }
}

impl Eq for CohomologyClass {}

impl CohomologyClass {
    pub fn zero(x: &Complex, ring: Ring, degree: usize) -> Self {
        let group = cohomology(x, degree, ring);
        let coords = vec![Rational::zero(); group.ngens()];
        Self { ring, degree, group, coords }
    }

    /// Class with the given coordinates, reduced canonically.
    pub fn from_coords(x: &Complex, ring: Ring, degree: usize, coords: Vec<Rational>) -> Result<Self> {
        let group = cohomology(x, degree, ring);
        if coords.len() != group.ngens() {
            return Err(Error::Shape(format!("{} coordinates for a group with {} generators", coords.len(), group.ngens())));
        }
        let mut out = Self { ring, degree, group, coords };
        out.normalize()?;
        Ok(out)
    }

    /// The `i`-th generator.
    pub fn generator(x: &Complex, ring: Ring, degree: usize, i: usize) -> Self {
        let mut out = Self::zero(x, ring, degree);
        out.coords[i] = match ring {
            Ring::QmodZ => {
                let t = out.group.modulus(i);
                // free Q/Z factors have no distinguished generator; use 1/2
                if t.is_zero() {
                    crate::arith::rat(1, 2)
                } else {
                    Rational::new(1.into(), t)
                }
            }
            _ => Rational::from_integer(1.into()),
        };
        out
    }

    fn normalize(&mut self) -> Result<()> {
        match self.ring {
            Ring::Z => {
                for (i, c) in self.coords.iter_mut().enumerate() {
                    if !is_integral(c) {
                        return Err(Error::Ring(format!("non-integral coordinate {c}")));
                    }
                    *c = from_int(&reduce_mod(&to_integer(c), &self.group.modulus(i)));
                }
            }
            Ring::Q => {}
            Ring::QmodZ => {
                for (i, c) in self.coords.iter_mut().enumerate() {
                    let t = self.group.modulus(i);
                    if !t.is_zero() && !is_integral(&(&*c * from_int(&t))) {
                        return Err(Error::Ring(format!("coordinate {c} is not of order dividing {t}")));
                    }
                    *c = frac(c);
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &Self) {
        assert!(
            self.ring == other.ring && self.degree == other.degree && self.coords.len() == other.coords.len(),
            "combining classes from different groups"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_group(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        let mut out = Self { coords, ..self.clone() };
        out.normalize().expect("sum of valid classes");
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self { coords: self.coords.iter().map(|a| -a).collect(), ..self.clone() };
        out.normalize().expect("negative of a valid class");
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Rational::from_integer(k.into());
        let mut out = Self { coords: self.coords.iter().map(|a| a * &k).collect(), ..self.clone() };
        out.normalize().expect("multiple of a valid class");
        out
    }

    /// Integer coordinates (integral classes only).
    pub fn int_coords(&self) -> Vec<Integer> {
        self.coords.iter().map(to_integer).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring,
            "degree": self.degree,
            "group": self.group.describe(),
            "coords": self.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// Class of a cocycle. Over `Q/Z` the cochain must be closed mod 1.
pub fn class_of(x: &Complex, c: &Cochain) -> Result<CohomologyClass> {
    let j = c.degree();
    if !c.fits(x) {
        return Err(Error::Mismatch(format!("cochain does not live on {} in degree {j}", x.name())));
    }
    let ring = c.ring();
    let group = cohomology(x, j, ring);
    let d = coboundary(x, &c.lift(LiftStrategy::Unit));
    let closed = match ring {
        Ring::QmodZ => d.values().iter().all(is_integral),
        _ => d.is_zero(),
    };
    if !closed {
        return Err(Error::Mismatch(format!("cochain of degree {j} is not a cocycle over {ring}")));
    }
    let coords = match ring {
        Ring::Z => group.coordinates(&c.to_integers().expect("integral")).iter().map(from_int).collect(),
        Ring::Q => group.project.mul_rat_vec(c.values()),
        Ring::QmodZ => group.project.mul_rat_vec(c.values()).iter().map(frac).collect(),
    };
    CohomologyClass::from_coords(x, ring, j, coords)
}

/// A representative cocycle of `class`, over the class's ring.
pub fn representative(x: &Complex, class: &CohomologyClass) -> Cochain {
    let values = class.group.gen_lift.mul_rat_vec(&class.coords);
    let _ = x;
    Cochain::new(class.ring, class.degree, values).expect("representative stays in ring")
}

/// `B: H^j(Q/Z) → H^{j+1}(Z)`: lift a representing cocycle to `Q` and take
/// the class of its (integral) coboundary.
pub fn bockstein(x: &Complex, u: &CohomologyClass, strategy: LiftStrategy) -> CohomologyClass {
    assert_eq!(u.ring, Ring::QmodZ, "Bockstein is defined on Q/Z classes");
    let h = representative(x, u).lift(strategy);
    let c = coboundary(x, &h).with_ring(Ring::Z).expect("coboundary of a lifted Q/Z cocycle is integral");
    class_of(x, &c).expect("coboundaries are cocycles")
}

/// `α: H^j(Q) → H^j(Q/Z)`, reduction mod 1.
pub fn alpha(x: &Complex, v: &CohomologyClass) -> CohomologyClass {
    let rep = representative(x, v).with_ring(Ring::QmodZ).expect("reduction");
    class_of(x, &rep).expect("reduction of a cocycle")
}

/// `r: H^j(Z) → H^j(Q)`, change of coefficients.
pub fn r_map(x: &Complex, c: &CohomologyClass) -> CohomologyClass {
    let rep = representative(x, c).with_ring(Ring::Q).expect("inclusion");
    class_of(x, &rep).expect("inclusion of a cocycle")
}

/// `β: H^j(Q) → Λ^j/Λ^j_Z`: a rational cocycle representative in the quotient.
pub fn beta(x: &Complex, v: &CohomologyClass) -> QuotientForm {
    QuotientForm::new(representative(x, v))
}

/// `s: Λ^j_Z → H^j(Q)`, the rational class of an integral form.
pub fn s_map(x: &Complex, w: &Cochain) -> Result<CohomologyClass> {
    if !is_integral_form(x, w) {
        return Err(Error::Mismatch("s is defined on closed cochains with integral periods".into()));
    }
    class_of(x, &w.with_ring(Ring::Q)?)
}

/// `d: Λ^j/Λ^j_Z → Λ^{j+1}_Z`, the coboundary of any representative.
pub fn d_map(x: &Complex, theta: &QuotientForm) -> Cochain {
    coboundary(x, &theta.representative)
}

/// `φ^*` on cohomology classes.
pub fn pullback_class(phi: &SimplicialMap, class: &CohomologyClass) -> Result<CohomologyClass> {
    let rep = pullback_cochain(phi, &representative(phi.target(), class))?;
    class_of(phi.source(), &rep)
}

/// Kronecker pairing between the free integral cohomology generators and the
/// free homology generators in degree `j`.
pub(crate) fn kronecker_matrix(x: &Complex, j: usize) -> IntMatrix {
    let c = integral_cohomology(x, j);
    let h = homology(x, j);
    let cg = c.gen_lift.select_columns(c.free_range());
    let hg = h.gen_lift.select_columns(h.free_range());
    cg.transpose().mul(&hg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::corpus;

    #[test]
    fn known_groups() {
        let cases = [
            ("point", 0, "Z"),
            ("point", 1, "0"),
            ("s1", 1, "Z"),
            ("s2", 1, "0"),
            ("s2", 2, "Z"),
            ("t2", 1, "Z^2"),
            ("t2", 2, "Z"),
            ("rp2", 1, "0"),
            ("rp2", 2, "Z/2"),
            ("klein", 1, "Z"),
            ("klein", 2, "Z/2"),
            ("moore3", 1, "0"),
            ("moore3", 2, "Z/3"),
        ];
        for (name, j, expected) in cases {
            let x = corpus::get(name);
            assert_eq!(integral_cohomology(&x, j).describe(), expected, "H^{j}({name}; Z)");
        }
        assert_eq!(homology(&corpus::get("klein"), 1).describe(), "Z + Z/2");
        assert_eq!(homology(&corpus::get("rp2"), 1).describe(), "Z/2");
    }

    #[test]
    fn qmodz_point() {
        let x = corpus::get("point");
        let g = cohomology(&x, 0, Ring::QmodZ);
        assert_eq!((g.rank, g.torsion.len()), (1, 0));
    }

    #[test]
    fn qmodz_is_hom_on_homology() {
        for x in corpus::all() {
            for j in 0..=x.dim() {
                let h = homology(&x, j);
                let g = cohomology(&x, j, Ring::QmodZ);
                for i in 0..g.ngens() {
                    let u = CohomologyClass::generator(&x, Ring::QmodZ, j, i);
                    let rep = representative(&x, &u);
                    assert_eq!(class_of(&x, &rep).unwrap(), u);
                    for l in 0..h.ngens() {
                        assert_eq!(rep.evaluate(&h.generator(l)), u.coords[l].clone());
                    }
                }
            }
        }
    }

    #[test]
    fn bockstein_on_rp2() {
        let x = corpus::get("rp2");
        let u = CohomologyClass::generator(&x, Ring::QmodZ, 1, 0);
        assert_eq!(u.coords, vec![rat(1, 2)]);
        let b1 = bockstein(&x, &u, LiftStrategy::Unit);
        let b2 = bockstein(&x, &u, LiftStrategy::Centered);
        assert_eq!(b1, b2);
        assert_eq!(b1.int_coords(), vec![int(1)]);
    }

    #[test]
    fn torsion_dies_rationally() {
        let x = corpus::get("rp2");
        let c = CohomologyClass::generator(&x, Ring::Z, 2, 0);
        assert!(r_map(&x, &c).is_zero());
        assert!(r_map(&x, &c).coords.is_empty());
    }

    #[test]
    fn bockstein_kills_integral_lifts() {
        let x = corpus::get("s1");
        let v = CohomologyClass::from_coords(&x, Ring::Q, 1, vec![rat(1, 3)]).unwrap();
        let u = alpha(&x, &v);
        assert!(bockstein(&x, &u, LiftStrategy::Unit).is_zero());
        assert_eq!(u.coords, vec![rat(1, 3)]);
    }
}

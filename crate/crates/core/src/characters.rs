//! The hom-on-cycles model: characters `f: Z_{k−1} → Q/Z` paired with a
//! curvature `ω ∈ Λ^k_Z` such that `f(∂a) = ω(a) mod 1`, and the comparison
//! map `Φ` from differential cocycles, computed directly and through good
//! neighborhoods.

use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{format_rational, frac, is_integral, Integer, Rational};
use crate::cochains::{
    class_of, coboundary, is_integral_form, pullback_cochain, representative, Cochain, CohomologyClass, LiftStrategy,
    QuotientForm, Ring,
};
use crate::complex::{Complex, SimplicialMap};
use crate::diffcocycle::{lift_through_i2, pullback, DiffClass, DifferentialCocycle};
use crate::error::{Error, Result};
use crate::geometry::{good_neighborhood, GoodNeighborhood, Normalization, SubdivisionTower};
use crate::zlin::IntMatrix;

/// Basis of `Z_j` (columns) and its left inverse, from the cached Smith form of `∂_j`.
pub fn cycle_basis(x: &Complex, j: usize) -> (IntMatrix, IntMatrix) {
    let snf = x.boundary_snf(j);
    (snf.kernel_basis(), snf.kernel_left_inverse())
}

/// A character of degree `k`: values of `f` on the cycle basis of
/// `Z_{k−1}` (see [`cycle_basis`]) and the curvature `ω`.
#[derive(Clone, Debug)]
pub struct Character {
    pub complex: Arc<Complex>,
    pub k: usize,
    pub f_values: Vec<Rational>,
    pub omega: Cochain,
}

impl PartialEq for Character {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &o.complex) && self.k == o.k && self.f_values == o.f_values && self.omega == o.omega
    }
}

impl Character {
    /// Validated character; `f_values` are reduced mod 1.
    pub fn new(complex: Arc<Complex>, k: usize, f_values: Vec<Rational>, omega: Cochain) -> Result<Self> {
        let f_values: Vec<Rational> = f_values.iter().map(frac).collect();
        if !is_character(&complex, k, &f_values, &omega) {
            return Err(Error::Mismatch("not a character: f ∘ ∂ ≠ ω mod 1, or ω lacks integral periods".into()));
        }
        Ok(Self { complex, k, f_values, omega })
    }

    pub fn zero(complex: Arc<Complex>, k: usize) -> Self {
        let n = cycle_basis(&complex, k - 1).0.cols();
        let omega = Cochain::zero(&complex, Ring::Q, k);
        Self { complex, k, f_values: vec![Rational::zero(); n], omega }
    }

    /// `f(z)` for an integer `(k−1)`-cycle `z`.
    pub fn evaluate(&self, z: &[Integer]) -> Result<Rational> {
        let j = self.k - 1;
        if z.len() != self.complex.count(j) {
            return Err(Error::Shape(format!("chain has {} entries, expected {}", z.len(), self.complex.count(j))));
        }
        if !self.complex.is_cycle(j, z) {
            return Err(Error::NotACycle);
        }
        let (_, left) = cycle_basis(&self.complex, j);
        let coords = left.mul_vec(z);
        let mut acc = Rational::zero();
        for (c, f) in coords.iter().zip(&self.f_values) {
            acc += f * Rational::from_integer(c.clone());
        }
        Ok(frac(&acc))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.complex, &o.complex) && self.k == o.k, "characters from different groups");
        Self {
            complex: self.complex.clone(),
            k: self.k,
            f_values: self.f_values.iter().zip(&o.f_values).map(|(a, b)| frac(&(a + b))).collect(),
            omega: &self.omega + &o.omega,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            complex: self.complex.clone(),
            k: self.k,
            f_values: self.f_values.iter().map(|a| frac(&-a)).collect(),
            omega: -&self.omega,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f_values.iter().all(Zero::is_zero) && self.omega.is_zero()
    }

    /// The cochain `T ∈ C^{k−1}(Q)` with `T(z_i) = lift(f_i)` on the cycle basis
    /// and zero on the complementary Smith basis vectors.
    pub fn lift_cochain(&self, strategy: LiftStrategy) -> Cochain {
        let (_, left) = cycle_basis(&self.complex, self.k - 1);
        let lifted: Vec<Rational> = self.f_values.iter().map(|f| strategy.lift(f)).collect();
        Cochain::rational(self.k - 1, left.tr_mul_rat_vec(&lifted))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "f": self.f_values.iter().enumerate().map(|(i, v)| json!([i, format_rational(v)])).collect::<Vec<_>>(),
            "omega": self.omega.to_json(&self.complex),
        })
    }
}

/// Both character conditions: `ω ∈ Λ^k_Z` and `f(∂a) = ω(a) mod 1` on every
/// `k`-simplex `a`.
pub fn is_character(x: &Complex, k: usize, f_values: &[Rational], omega: &Cochain) -> bool {
    if k == 0 || omega.degree() != k || !omega.fits(x) || !is_integral_form(x, omega) {
        return false;
    }
    let (basis, left) = cycle_basis(x, k - 1);
    if f_values.len() != basis.cols() {
        return false;
    }
    let boundary = match x.boundary_matrix(k) {
        Ok(m) => m,
        Err(_) => return true,
    };
    for a in 0..x.count(k) {
        let coords = left.mul_vec(&boundary.column(a));
        let mut fa = Rational::zero();
        for (c, f) in coords.iter().zip(f_values) {
            fa += f * Rational::from_integer(c.clone());
        }
        if !is_integral(&(fa - omega.value(a))) {
            return false;
        }
    }
    true
}

/// `δ₂` in the hom model: extend `f` to a cochain `T` and take the class of
/// the integral cocycle `ω − δT`.
pub fn delta2_via_lift(ch: &Character, strategy: LiftStrategy) -> CohomologyClass {
    let x = &*ch.complex;
    let t = ch.lift_cochain(strategy);
    let c = (&ch.omega - &coboundary(x, &t)).with_ring(Ring::Z).expect("ω − δT is integral for a character");
    class_of(x, &c).expect("ω − δT is closed")
}

/// `Φ` computed from a representative: `f = h mod 1` on cycles, same `ω`.
pub fn phi_direct(v: &DiffClass) -> Character {
    let x = &*v.complex;
    let (basis, _) = cycle_basis(x, v.rep.k - 1);
    let f_values = (0..basis.cols()).map(|i| frac(&v.rep.h.evaluate(&basis.column(i)))).collect();
    Character { complex: v.complex.clone(), k: v.rep.k, f_values, omega: v.rep.omega.clone() }
}

/// Inverse of `Φ`: the class of `(ω − δT, T, ω)`.
pub fn phi_inverse(ch: &Character, strategy: LiftStrategy) -> DiffClass {
    let x = &*ch.complex;
    let t = ch.lift_cochain(strategy);
    let c = (&ch.omega - &coboundary(x, &t)).with_ring(Ring::Z).expect("ω − δT is integral for a character");
    DiffClass { complex: ch.complex.clone(), rep: DifferentialCocycle { k: ch.k, c, h: t, omega: ch.omega.clone() } }
}

/// `Φ(v)(z)` computed through a good neighborhood `U` of `|z|`: restrict
/// `v` to `U`, where `δ₂` vanishes, write it as `i₂(θ)`, and evaluate `θ`
/// on the subdivided cycle.
pub fn phi_good(v: &DiffClass, z: &[Integer], tower: &SubdivisionTower, max_subdiv: usize) -> Result<Rational> {
    let j = v.rep.k - 1;
    if !v.complex.is_cycle(j, z) {
        return Err(Error::NotACycle);
    }
    if z.iter().all(Zero::is_zero) {
        return Ok(Rational::zero());
    }
    let support = crate::complex::Subcomplex::support(v.complex.clone(), j, z);
    let nb = good_neighborhood(tower, &support, j, max_subdiv)?;
    phi_good_in(v, z, &nb)
}

/// [`phi_good`] in a given neighborhood.
pub fn phi_good_in(v: &DiffClass, z: &[Integer], nb: &GoodNeighborhood) -> Result<Rational> {
    let j = v.rep.k - 1;
    let restricted = pullback(&nb.to_base(), v)?;
    let theta = lift_through_i2(&restricted)?;
    let fine = nb.subdivision.subdivide_chain(j, z);
    if !nb.region.supports(j, &fine) {
        return Err(Error::Mismatch("cycle is not supported in the neighborhood".into()));
    }
    let local = nb.region.restrict_chain(j, &fine);
    Ok(frac(&theta.representative.evaluate(&local)))
}

/// `Φ(v)(z)` split along a normalization `sd^D z = ∂b + ξ`: the curvature
/// integrated over `b` and the character of `v` pulled back to the
/// pseudomanifold, evaluated on its fundamental cycle. Returns both terms.
pub fn phi_via_pseudomanifold(v: &DiffClass, n: &Normalization) -> Result<(Rational, Rational)> {
    let sd = n.subdivision();
    let on_fine = pullback(&sd.retraction, v)?;
    let curvature = if n.bounding.is_empty() {
        Rational::zero()
    } else {
        on_fine.rep.omega.evaluate(&n.bounding)
    };
    let p = &n.pseudomanifold;
    let to_base = sd.retraction.compose(&p.map_to_ambient)?;
    let on_p = phi_direct(&pullback(&to_base, v)?);
    Ok((frac(&curvature), on_p.evaluate(&p.fundamental_cycle)?))
}

/// Hom-model `i₁`: `u` evaluated on cycles, zero curvature.
pub fn char_i1(x: &Arc<Complex>, u: &CohomologyClass) -> Character {
    let rep = representative(x, u);
    let (basis, _) = cycle_basis(x, u.degree);
    let f_values = (0..basis.cols()).map(|i| rep.evaluate(&basis.column(i))).collect();
    Character { complex: x.clone(), k: u.degree + 1, f_values, omega: Cochain::zero(x, Ring::Q, u.degree + 1) }
}

/// Hom-model `i₂`: `θ` evaluated on cycles mod 1, curvature `δθ`.
pub fn char_i2(x: &Arc<Complex>, theta: &QuotientForm) -> Character {
    let j = theta.degree();
    let (basis, _) = cycle_basis(x, j);
    let f_values = (0..basis.cols()).map(|i| frac(&theta.representative.evaluate(&basis.column(i)))).collect();
    Character { complex: x.clone(), k: j + 1, f_values, omega: coboundary(x, &theta.representative) }
}

/// Hom-model pullback: `φ^*(f)(a) = f(φ_* a)`.
pub fn char_pullback(phi: &SimplicialMap, ch: &Character) -> Result<Character> {
    if !Arc::ptr_eq(phi.target(), &ch.complex) {
        return Err(Error::Mismatch("character does not live on the target of the map".into()));
    }
    let src = phi.source();
    let j = ch.k - 1;
    let (basis, _) = cycle_basis(src, j);
    let push = phi.induced_chain_map(j);
    let f_values =
        (0..basis.cols()).map(|i| ch.evaluate(&push.mul_vec(&basis.column(i)))).collect::<Result<Vec<_>>>()?;
    Ok(Character { complex: src.clone(), k: ch.k, f_values, omega: pullback_cochain(phi, &ch.omega)? })
}

/// The flat part of a character with `ω = 0`: the `Q/Z` class with the same
/// values on homology, so that `char_i1` of it gives back `ch`.
pub fn flat_class(ch: &Character) -> Result<CohomologyClass> {
    if !ch.omega.is_zero() {
        return Err(Error::Mismatch("character is not flat".into()));
    }
    let x = &*ch.complex;
    let j = ch.k - 1;
    let h = crate::cochains::homology(x, j);
    let coords = (0..h.ngens()).map(|l| ch.evaluate(&h.generator(l))).collect::<Result<Vec<_>>>()?;
    CohomologyClass::from_coords(x, Ring::QmodZ, j, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::corpus;
    use crate::diffcocycle::{delta2, i1, i2, random_class};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evaluate_on_circle() {
        let x = corpus::get("s1");
        let (basis, _) = cycle_basis(&x, 1);
        assert_eq!(basis.cols(), 1);
        let z = basis.column(0);
        let ch = Character::new(x.clone(), 2, vec![rat(1, 3)], Cochain::zero(&x, Ring::Q, 2)).unwrap();
        assert_eq!(ch.evaluate(&z).unwrap(), rat(1, 3));
        let z2: Vec<Integer> = z.iter().map(|v| v * 2).collect();
        assert_eq!(ch.evaluate(&z2).unwrap(), rat(2, 3));
        assert_eq!(ch.evaluate(&vec![int(0); 3]).unwrap(), rat(0, 1));
        assert_eq!(ch.evaluate(&[int(1), int(0), int(0)]), Err(Error::NotACycle));
    }

    #[test]
    fn perturbed_pair_is_rejected() {
        let x = corpus::get("s1");
        let v = i2(&x, &QuotientForm::new(Cochain::rational(0, vec![rat(1, 3), rat(1, 5), rat(0, 1)])));
        let ch = phi_direct(&v);
        assert!(is_character(&x, 1, &ch.f_values, &ch.omega));
        let mut w = ch.omega.values().to_vec();
        w[0] += rat(1, 2);
        let bad = Cochain::rational(1, w);
        assert!(!is_character(&x, 1, &ch.f_values, &bad));
    }

    #[test]
    fn flat_rp2_character() {
        let x = corpus::get("rp2");
        let u = CohomologyClass::generator(&x, Ring::QmodZ, 1, 0);
        let ch = char_i1(&x, &u);
        let a = delta2_via_lift(&ch, LiftStrategy::Unit);
        let b = delta2_via_lift(&ch, LiftStrategy::Centered);
        assert_eq!(a, b);
        assert_eq!(a.int_coords(), vec![int(1)]);
        assert_eq!(delta2(&i1(&x, &u)), a.neg());
    }

    #[test]
    fn round_trips_on_torus() {
        let x = corpus::get("t2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=2 {
            for _ in 0..4 {
                let v = random_class(&x, k, &mut rng);
                let ch = phi_direct(&v);
                assert!(is_character(&x, k, &ch.f_values, &ch.omega));
                let back = phi_inverse(&ch, LiftStrategy::Centered);
                assert!(back.class_equal(&v).unwrap());
                assert_eq!(phi_direct(&back), ch);
                assert_eq!(delta2_via_lift(&ch, LiftStrategy::Unit), delta2(&v));
            }
        }
    }
}

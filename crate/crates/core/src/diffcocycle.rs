//! Differential cocycles `(c, h, ω)` and their classes: the cocycle model of
//! the character functor, with `i₁`, `i₂`, `δ₁`, `δ₂` and pullback.
//!
//! A cocycle of degree `k` has `c ∈ C^k(Z)` closed, `h ∈ C^{k−1}(Q)` and
//! `ω ∈ C^k(Q)` with `δh = ω − c`. Two cocycles are equivalent when they
//! differ by `(δb, −b + δs, 0)` with `b` integral and `s` rational.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::{from_int, is_integral, rat, to_integer, Integer, Rational};
use crate::cochains::{
    class_of, coboundary, cohomology, integral_cohomology, is_cocycle, is_integral_form, pullback_cochain, representative,
    Cochain, CohomologyClass, LiftStrategy, QuotientForm, Ring,
};
use crate::complex::{Complex, SimplicialMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialCocycle {
    pub k: usize,
    pub c: Cochain,
    pub h: Cochain,
    pub omega: Cochain,
}

impl DifferentialCocycle {
    /// Validated cocycle: `δc = 0` and `δh = ω − c`.
    pub fn new(x: &Complex, c: Cochain, h: Cochain, omega: Cochain) -> Result<Self> {
        let k = c.degree();
        if k == 0 {
            return Err(Error::Degree { degree: 0, max: x.dim() + 1 });
        }
        if c.ring() != Ring::Z || h.ring() != Ring::Q || omega.ring() != Ring::Q {
            return Err(Error::Ring("differential cocycles are (Z, Q, Q) triples".into()));
        }
        if h.degree() + 1 != k || omega.degree() != k || !c.fits(x) || !h.fits(x) || !omega.fits(x) {
            return Err(Error::Shape(format!("components do not form a degree-{k} cocycle on {}", x.name())));
        }
        if !is_cocycle(x, &c) {
            return Err(Error::Mismatch("c is not closed".into()));
        }
        if coboundary(x, &h) != &omega - &c.with_ring(Ring::Q)? {
            return Err(Error::Mismatch("δh ≠ ω − c".into()));
        }
        Ok(Self { k, c, h, omega })
    }

    pub fn zero(x: &Complex, k: usize) -> Self {
        Self {
            k,
            c: Cochain::zero(x, Ring::Z, k),
            h: Cochain::zero(x, Ring::Q, k - 1),
            omega: Cochain::zero(x, Ring::Q, k),
        }
    }

    /// Whether all defining identities hold, including `ω ∈ Λ^k_Z`.
    pub fn is_valid(&self, x: &Complex) -> bool {
        Self::new(x, self.c.clone(), self.h.clone(), self.omega.clone()).is_ok() && is_integral_form(x, &self.omega)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { k: self.k, c: &self.c + &o.c, h: &self.h + &o.h, omega: &self.omega + &o.omega }
    }

    pub fn neg(&self) -> Self {
        Self { k: self.k, c: -&self.c, h: -&self.h, omega: -&self.omega }
    }

    /// `self + (δb, −b + δs, 0)`. `s` is ignored when `k = 1`.
    pub fn shifted(&self, x: &Complex, b: &Cochain, s: Option<&Cochain>) -> Self {
        let db = coboundary(x, b);
        let mut dh = -&b.with_ring(Ring::Q).expect("integral b");
        if let Some(s) = s {
            dh = &dh + &coboundary(x, s);
        }
        Self { k: self.k, c: &self.c + &db, h: &self.h + &dh, omega: self.omega.clone() }
    }

    pub fn to_json(&self, x: &Complex) -> Value {
        json!({ "k": self.k, "c": self.c.to_json(x), "h": self.h.to_json(x), "omega": self.omega.to_json(x) })
    }
}

/// A class in `Ĥ^k`, held by a representative on a fixed complex.
#[derive(Clone, Debug)]
pub struct DiffClass {
    pub complex: Arc<Complex>,
    pub rep: DifferentialCocycle,
}

/// Witness `(b, s)` of an equivalence `x − y = (δb, −b + δs, 0)`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub b: Cochain,
    pub s: Option<Cochain>,
}

impl DiffClass {
    pub fn new(complex: Arc<Complex>, rep: DifferentialCocycle) -> Result<Self> {
        let checked = DifferentialCocycle::new(&complex, rep.c, rep.h, rep.omega)?;
        Ok(Self { complex, rep: checked })
    }

    pub fn zero(complex: Arc<Complex>, k: usize) -> Self {
        let rep = DifferentialCocycle::zero(&complex, k);
        Self { complex, rep }
    }

    pub fn degree(&self) -> usize {
        self.rep.k
    }

    pub fn x(&self) -> &Complex {
        &self.complex
    }

    fn same_place(&self, o: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.complex, &o.complex) {
            return Err(Error::Mismatch("classes live on different complexes".into()));
        }
        if self.rep.k != o.rep.k {
            return Err(Error::Mismatch(format!("degrees {} and {} differ", self.rep.k, o.rep.k)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_place(o)?;
        Ok(Self { complex: self.complex.clone(), rep: self.rep.add(&o.rep) })
    }

    pub fn neg(&self) -> Self {
        Self { complex: self.complex.clone(), rep: self.rep.neg() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        let r = &self.rep;
        let rep = DifferentialCocycle { k: r.k, c: r.c.scale_int(n), h: r.h.scale_int(n), omega: r.omega.scale_int(n) };
        Self { complex: self.complex.clone(), rep }
    }

    /// Witness that `self` and `o` are the same class, or `None` if they differ.
    pub fn equivalence_witness(&self, o: &Self) -> Result<Option<EquivalenceWitness>> {
        self.same_place(o)?;
        let x = &*self.complex;
        let k = self.rep.k;
        if self.rep.omega != o.rep.omega {
            return Ok(None);
        }
        let dc = (&self.rep.c - &o.rep.c).to_integers().expect("integral");
        let dh = &self.rep.h - &o.rep.h;
        // b₀ with δb₀ = Δc
        let Some(b0) = x.coboundary_snf(k).solve_integer(&dc)? else { return Ok(None) };
        let b0 = Cochain::integral(k - 1, &b0);
        // Δh + b₀ is closed; correct b₀ by an integral cocycle so that its
        // rational class vanishes, which is possible iff the class is integral
        let e = &dh + &b0.with_ring(Ring::Q)?;
        let rational = cohomology(x, k - 1, Ring::Q);
        let coords = rational.project.mul_rat_vec(e.values());
        if !coords.iter().all(is_integral) {
            return Ok(None);
        }
        let shift: Vec<Integer> = coords.iter().map(to_integer).collect();
        let z = rational.gen_lift.mul_vec(&shift);
        let b = &b0 - &Cochain::integral(k - 1, &z);
        let exact = &dh + &b.with_ring(Ring::Q)?;
        if k == 1 {
            return Ok(if exact.is_zero() { Some(EquivalenceWitness { b, s: None }) } else { None });
        }
        let s = x.coboundary_snf(k - 1).solve_rational(exact.values())?.expect("rationally exact by construction");
        Ok(Some(EquivalenceWitness { b, s: Some(Cochain::rational(k - 2, s)) }))
    }

    pub fn class_equal(&self, o: &Self) -> Result<bool> {
        Ok(self.equivalence_witness(o)?.is_some())
    }

    pub fn is_zero(&self) -> bool {
        let z = Self::zero(self.complex.clone(), self.rep.k);
        self.class_equal(&z).expect("same complex")
    }

    pub fn to_json(&self) -> Value {
        self.rep.to_json(&self.complex)
    }
}

/// `i₁: H^{k−1}(Q/Z) → Ĥ^k`, `u ↦ (−δh, h, 0)` for a rational lift `h` of a
/// representative of `u`.
pub fn i1(x: &Arc<Complex>, u: &CohomologyClass) -> DiffClass {
    i1_with(x, u, LiftStrategy::Unit)
}

pub fn i1_with(x: &Arc<Complex>, u: &CohomologyClass, strategy: LiftStrategy) -> DiffClass {
    assert_eq!(u.ring, Ring::QmodZ, "i1 takes Q/Z classes");
    let k = u.degree + 1;
    let h = representative(x, u).lift(strategy);
    let c = (-&coboundary(x, &h)).with_ring(Ring::Z).expect("lift of a Q/Z cocycle has integral coboundary");
    let rep = DifferentialCocycle { k, c, h, omega: Cochain::zero(x, Ring::Q, k) };
    DiffClass { complex: x.clone(), rep }
}

/// `i₂: Λ^{k−1}/Λ^{k−1}_Z → Ĥ^k`, `θ ↦ (0, θ, δθ)`.
pub fn i2(x: &Arc<Complex>, theta: &QuotientForm) -> DiffClass {
    let h = theta.representative.clone();
    let k = h.degree() + 1;
    let omega = coboundary(x, &h);
    DiffClass { complex: x.clone(), rep: DifferentialCocycle { k, c: Cochain::zero(x, Ring::Z, k), h, omega } }
}

/// `δ₁`, the curvature `ω`.
pub fn delta1(v: &DiffClass) -> Cochain {
    v.rep.omega.clone()
}

/// `δ₂`, the characteristic class `[c] ∈ H^k(Z)`.
pub fn delta2(v: &DiffClass) -> CohomologyClass {
    class_of(&v.complex, &v.rep.c).expect("c is closed")
}

/// `φ^*` on classes, componentwise on cochains.
pub fn pullback(phi: &SimplicialMap, v: &DiffClass) -> Result<DiffClass> {
    if !Arc::ptr_eq(phi.target(), &v.complex) {
        return Err(Error::Mismatch("class does not live on the target of the map".into()));
    }
    let r = &v.rep;
    let rep = DifferentialCocycle {
        k: r.k,
        c: pullback_cochain(phi, &r.c)?,
        h: pullback_cochain(phi, &r.h)?,
        omega: pullback_cochain(phi, &r.omega)?,
    };
    Ok(DiffClass { complex: phi.source().clone(), rep })
}

/// `θ` with `i₂(θ) = v`, defined exactly when `δ₂(v) = 0`: solve `δb = c`
/// over `Z` and take `θ = h + b`.
pub fn lift_through_i2(v: &DiffClass) -> Result<QuotientForm> {
    let x = &*v.complex;
    let k = v.rep.k;
    let c = v.rep.c.to_integers().expect("integral");
    match x.coboundary_snf(k).solve_integer(&c)? {
        Some(b) => {
            let theta = &v.rep.h + &Cochain::integral(k - 1, &b).with_ring(Ring::Q)?;
            Ok(QuotientForm::new(theta))
        }
        None => Err(Error::NotInImage(delta2(v).to_json().to_string())),
    }
}

/// A class with curvature `ω ∈ Λ^k_Z`: `c` is the integral cocycle with the
/// same rational class and `h` solves `δh = ω − c`.
pub fn delta1_preimage(x: &Arc<Complex>, omega: &Cochain) -> Result<DiffClass> {
    if !is_integral_form(x, omega) {
        return Err(Error::Mismatch("curvature must be closed with integral periods".into()));
    }
    let k = omega.degree();
    let rational = cohomology(x, k, Ring::Q);
    let coords = rational.project.mul_rat_vec(omega.values());
    let ints: Vec<Integer> = coords.iter().map(to_integer).collect();
    let c = Cochain::integral(k, &rational.gen_lift.mul_vec(&ints));
    solve_h(x, c, omega.clone())
}

/// A class with `δ₂ = class`: `c` a representative, `ω` the rational
/// representative of its image in `H^k(Q)`.
pub fn delta2_preimage(x: &Arc<Complex>, class: &CohomologyClass) -> Result<DiffClass> {
    if class.ring != Ring::Z {
        return Err(Error::Ring("δ₂ lands in integral cohomology".into()));
    }
    let c = representative(x, class);
    let free = class.group.free_range();
    let rational = cohomology(x, class.degree, Ring::Q);
    let omega = Cochain::rational(class.degree, rational.gen_lift.mul_rat_vec(&class.coords[free]));
    solve_h(x, c, omega)
}

fn solve_h(x: &Arc<Complex>, c: Cochain, omega: Cochain) -> Result<DiffClass> {
    let k = c.degree();
    let rhs = &omega - &c.with_ring(Ring::Q)?;
    let h = x
        .coboundary_snf(k)
        .solve_rational(rhs.values())?
        .ok_or_else(|| Error::Mismatch("ω − c is not rationally exact".into()))?;
    DiffClass::new(x.clone(), DifferentialCocycle { k, c, h: Cochain::rational(k - 1, h), omega })
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    let d = rng.random_range(1..=6i64);
    rat(rng.random_range(-6..=6i64), d)
}

/// A random class: a sum of `i₁`, `i₂` and `δ₂`-preimage pieces, shifted by a
/// random equivalence so the representative is not canonical.
pub fn random_class(x: &Arc<Complex>, k: usize, rng: &mut impl Rng) -> DiffClass {
    let j = k - 1;
    let qz = cohomology(x, j, Ring::QmodZ);
    let coords = (0..qz.ngens())
        .map(|i| {
            let t = qz.modulus(i);
            let d = if t.is_zero() { Integer::from(rng.random_range(1..=6i64)) } else { t };
            Rational::new(Integer::from(rng.random_range(0..=12i64)), d)
        })
        .collect();
    let u = CohomologyClass::from_coords(x, Ring::QmodZ, j, coords).expect("valid Q/Z coords");
    let theta = QuotientForm::new(Cochain::rational(j, (0..x.count(j)).map(|_| random_rational(rng)).collect()));
    let hz = integral_cohomology(x, k);
    let zc = (0..hz.ngens()).map(|_| from_int(&Integer::from(rng.random_range(-2..=2i64)))).collect();
    let zclass = CohomologyClass::from_coords(x, Ring::Z, k, zc).expect("integral coords");
    let base = i1(x, &u).add(&i2(x, &theta)).expect("same complex");
    let base = base.add(&delta2_preimage(x, &zclass).expect("surjective δ₂")).expect("same complex");
    let b = Cochain::integral(j, &(0..x.count(j)).map(|_| Integer::from(rng.random_range(-2..=2i64))).collect::<Vec<_>>());
    let s = (k >= 2).then(|| Cochain::rational(k - 2, (0..x.count(k - 2)).map(|_| random_rational(rng)).collect()));
    DiffClass { complex: x.clone(), rep: base.rep.shifted(x, &b, s.as_ref()) }
}

/// Generators for sampling: `i₁` of the `Q/Z` generators, `i₂` of simplex
/// indicators scaled by `1/2`, and `δ₂`-preimages of integral generators.
pub fn generator_classes(x: &Arc<Complex>, k: usize) -> Vec<DiffClass> {
    let j = k - 1;
    let mut out = Vec::new();
    for i in 0..cohomology(x, j, Ring::QmodZ).ngens() {
        out.push(i1(x, &CohomologyClass::generator(x, Ring::QmodZ, j, i)));
    }
    for i in 0..integral_cohomology(x, k).ngens() {
        out.push(delta2_preimage(x, &CohomologyClass::generator(x, Ring::Z, k, i)).expect("surjective δ₂"));
    }
    for s in x.simplices(j).iter().take(4) {
        let e = Cochain::indicator(x, Ring::Q, s).expect("simplex").scale(&rat(1, 2)).expect("scale");
        out.push(i2(x, &QuotientForm::new(e)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::cochains::bockstein;
    use crate::corpus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shifted_is_equal() {
        let x = corpus::get("t2");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let v = random_class(&x, 2, &mut rng);
            assert!(v.rep.is_valid(&x));
            let b = Cochain::integral(1, &(0..x.count(1)).map(|i| int(i as i64 % 3 - 1)).collect::<Vec<_>>());
            let s = Cochain::rational(0, (0..x.count(0)).map(|i| rat(i as i64, 4)).collect());
            let w = DiffClass { complex: x.clone(), rep: v.rep.shifted(&x, &b, Some(&s)) };
            let wit = v.equivalence_witness(&w).unwrap().expect("equal");
            let back = DiffClass { complex: x.clone(), rep: w.rep.shifted(&x, &wit.b, wit.s.as_ref()) };
            assert_eq!(back.rep, v.rep);
        }
    }

    #[test]
    fn holonomy_distinguishes() {
        let x = corpus::get("s1");
        // edges [0,1], [0,2], [1,2]; fundamental cycle [0,1] + [1,2] − [0,2]
        let a = i2(&x, &QuotientForm::new(Cochain::rational(1, vec![rat(1, 3), rat(0, 1), rat(0, 1)])));
        let b = i2(&x, &QuotientForm::new(Cochain::rational(1, vec![rat(1, 2), rat(0, 1), rat(0, 1)])));
        assert!(!a.class_equal(&b).unwrap());
        let c = i2(&x, &QuotientForm::new(Cochain::rational(1, vec![rat(4, 3), rat(0, 1), rat(0, 1)])));
        assert!(a.class_equal(&c).unwrap());
    }

    #[test]
    fn integral_forms_are_killed_by_i2() {
        for name in ["s1", "t2", "rp2", "klein"] {
            let x = corpus::get(name);
            for k in 1..=x.dim() {
                for w in crate::cochains::integral_form_generators(&x, k - 1) {
                    if is_integral_form(&x, &w) {
                        assert!(i2(&x, &QuotientForm::new(w)).is_zero(), "{name} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn delta2_of_i1_is_minus_bockstein() {
        let x = corpus::get("rp2");
        let u = CohomologyClass::generator(&x, Ring::QmodZ, 1, 0);
        let v = i1(&x, &u);
        assert_eq!(delta2(&v), bockstein(&x, &u, LiftStrategy::Unit).neg());
        assert!(!delta2(&v).is_zero());
        assert!(matches!(lift_through_i2(&v), Err(Error::NotInImage(_))));
        assert!(delta1(&v).is_zero());
    }

    #[test]
    fn lift_round_trip() {
        let x = corpus::get("t2");
        let theta = QuotientForm::new(Cochain::rational(1, (0..x.count(1)).map(|i| rat(i as i64, 5)).collect()));
        let v = i2(&x, &theta);
        let back = lift_through_i2(&v).unwrap();
        assert!(back.equals(&x, &theta));
    }

    #[test]
    fn preimages() {
        let x = corpus::get("t2");
        for w in crate::cochains::integral_form_generators(&x, 2) {
            let v = delta1_preimage(&x, &w).unwrap();
            assert_eq!(delta1(&v), w);
        }
        for i in 0..2 {
            let g = CohomologyClass::generator(&x, Ring::Z, 1, i);
            assert_eq!(delta2(&delta2_preimage(&x, &g).unwrap()), g);
        }
    }
}

//! Cochains over `Z`, `Q` and `Q/Z`, the Alexander–Whitney cup product, and
//! the integral-period predicate.

mod cohomology;
mod exactness;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{centered, format_rational, frac, from_int, is_integral, parse_rational, to_integer, Integer, Rational};
use crate::complex::{Complex, SimplicialMap};
use crate::error::{Error, Result};

pub use cohomology::{
    alpha, beta, bockstein, class_of, cohomology, d_map, homology, integral_cohomology, pullback_class, r_map,
    representative, s_map,
    CohomologyClass,
};
pub use exactness::{check_exactness, integral_form_generators};

/// Coefficient ring of a cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
    QmodZ,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
            Ring::QmodZ => "Q/Z",
        }
    }

    /// Ring of a sum of cochains over `self` and `other` (Z is promoted).
    fn join(self, other: Ring) -> Option<Ring> {
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Ring::Z, b) | (b, Ring::Z) => Some(b),
            _ => None,
        }
    }

    /// Ring of a cup product: `Z·R → R` for every `R`, and `Q·Q → Q`.
    pub fn product(self, other: Ring) -> Result<Ring> {
        match (self, other) {
            (Ring::Z, b) => Ok(b),
            (a, Ring::Z) => Ok(a),
            (Ring::Q, Ring::Q) => Ok(Ring::Q),
            (a, b) => Err(Error::Ring(format!("no cup product {} x {}", a.name(), b.name()))),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How to lift `Q/Z` values to `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LiftStrategy {
    /// Representatives in `[0, 1)`.
    #[default]
    Unit,
    /// Representatives in `(−1/2, 1/2]`.
    Centered,
}

impl LiftStrategy {
    pub fn lift(self, x: &Rational) -> Rational {
        match self {
            LiftStrategy::Unit => frac(x),
            LiftStrategy::Centered => centered(x),
        }
    }
}

/// A `j`-cochain: one coefficient per `j`-simplex.
///
/// All values are stored as rationals. Over `Z` they are integral; over `Q/Z`
/// they are reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    ring: Ring,
    degree: usize,
    values: Vec<Rational>,
}

impl Cochain {
    pub fn new(ring: Ring, degree: usize, values: Vec<Rational>) -> Result<Self> {
        match ring {
            Ring::Z => {
                if let Some(v) = values.iter().find(|v| !is_integral(v)) {
                    return Err(Error::Ring(format!("non-integral value {v} in an integral cochain")));
                }
                Ok(Self { ring, degree, values })
            }
            Ring::Q => Ok(Self { ring, degree, values }),
            Ring::QmodZ => Ok(Self { ring, degree, values: values.iter().map(frac).collect() }),
        }
    }

    pub fn zero(x: &Complex, ring: Ring, degree: usize) -> Self {
        Self { ring, degree, values: vec![Rational::zero(); x.count(degree)] }
    }

    pub fn integral(degree: usize, values: &[Integer]) -> Self {
        Self { ring: Ring::Z, degree, values: values.iter().map(from_int).collect() }
    }

    pub fn rational(degree: usize, values: Vec<Rational>) -> Self {
        Self { ring: Ring::Q, degree, values }
    }

    /// Constant cochain with value `v` on every `degree`-simplex.
    pub fn constant(x: &Complex, ring: Ring, degree: usize, v: Rational) -> Result<Self> {
        Self::new(ring, degree, vec![v; x.count(degree)])
    }

    /// The cochain that is `1` on `simplex` and `0` elsewhere.
    pub fn indicator(x: &Complex, ring: Ring, simplex: &[usize]) -> Result<Self> {
        let i = x
            .index_of(simplex)
            .ok_or_else(|| Error::Mismatch(format!("{simplex:?} is not a simplex of {}", x.name())))?;
        let mut c = Self::zero(x, ring, simplex.len() - 1);
        c.values[i] = Rational::one();
        Ok(c)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Whether the cochain lives on `x` in its degree.
    pub fn fits(&self, x: &Complex) -> bool {
        self.values.len() == x.count(self.degree)
    }

    /// Integer values; `None` if some value is not integral.
    pub fn to_integers(&self) -> Option<Vec<Integer>> {
        if self.ring == Ring::QmodZ || !self.values.iter().all(is_integral) {
            return None;
        }
        Some(self.values.iter().map(to_integer).collect())
    }

    /// Change of coefficients: `Z → Q → Q/Z`. Going back to `Z` requires
    /// integral values; going from `Q/Z` to `Q` uses the `[0, 1)` lift.
    pub fn with_ring(&self, ring: Ring) -> Result<Self> {
        Self::new(ring, self.degree, self.values.clone())
    }

    /// Rational lift of a `Q/Z` cochain (identity on `Z` and `Q` cochains, up to ring).
    pub fn lift(&self, strategy: LiftStrategy) -> Self {
        let values = match self.ring {
            Ring::QmodZ => self.values.iter().map(|v| strategy.lift(v)).collect(),
            _ => self.values.clone(),
        };
        Self { ring: Ring::Q, degree: self.degree, values }
    }

    /// Multiply by a scalar. Over `Z` and `Q/Z` the scalar must be an integer.
    pub fn scale(&self, s: &Rational) -> Result<Self> {
        if self.ring != Ring::Q && !is_integral(s) {
            return Err(Error::Ring(format!("cannot scale a {} cochain by {s}", self.ring)));
        }
        Self::new(self.ring, self.degree, self.values.iter().map(|v| v * s).collect())
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&Rational::from_integer(s.into())).expect("integer scalar")
    }

    /// Value on an integer chain (reduced mod 1 over `Q/Z`).
    pub fn evaluate(&self, chain: &[Integer]) -> Rational {
        assert_eq!(chain.len(), self.values.len(), "chain and cochain sizes differ");
        let mut acc = Rational::zero();
        for (c, v) in chain.iter().zip(&self.values) {
            if !c.is_zero() && !v.is_zero() {
                acc += v * from_int(c);
            }
        }
        if self.ring == Ring::QmodZ {
            frac(&acc)
        } else {
            acc
        }
    }

    /// JSON form: ring, degree, and the nonzero values keyed by vertex tuple.
    pub fn to_json(&self, x: &Complex) -> Value {
        let mut values = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                values.insert(simplex_key(x.simplex(self.degree, i)), format_rational(v));
            }
        }
        json!({ "ring": self.ring, "degree": self.degree, "values": values })
    }

    pub fn from_json(x: &Complex, value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            ring: Ring,
            degree: usize,
            values: BTreeMap<String, String>,
        }
        let doc: Doc = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::zero(x, doc.ring, doc.degree);
        for (k, v) in doc.values {
            let s: Vec<usize> = k
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad simplex key {k:?}"))))
                .collect::<Result<_>>()?;
            if s.len() != doc.degree + 1 {
                return Err(Error::Parse(format!("simplex {k:?} has the wrong dimension")));
            }
            let i = x.index_of(&s).ok_or_else(|| Error::Parse(format!("{k:?} is not a simplex")))?;
            out.values[i] = parse_rational(&v)?;
        }
        Self::new(out.ring, out.degree, out.values)
    }
}

pub(crate) fn simplex_key(s: &[usize]) -> String {
    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn combine(a: &Cochain, b: &Cochain, sub: bool) -> Cochain {
    assert_eq!(a.degree, b.degree, "adding cochains of different degrees");
    assert_eq!(a.values.len(), b.values.len(), "adding cochains on different complexes");
    let ring = a.ring.join(b.ring).unwrap_or_else(|| panic!("cannot add {} and {} cochains", a.ring, b.ring));
    let values = a.values.iter().zip(&b.values).map(|(x, y)| if sub { x - y } else { x + y }).collect();
    Cochain::new(ring, a.degree, values).expect("sum stays in ring")
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        combine(self, rhs, false)
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        combine(self, rhs, true)
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        Cochain::new(self.ring, self.degree, self.values.iter().map(|v| -v).collect()).expect("negation stays in ring")
    }
}

/// `δx = x ∘ ∂`.
pub fn coboundary(x: &Complex, c: &Cochain) -> Cochain {
    let j = c.degree + 1;
    let values = if j <= x.dim() {
        x.boundary_matrix(j).expect("degree in range").tr_mul_rat_vec(&c.values)
    } else {
        Vec::new()
    };
    Cochain::new(c.ring, j, values).expect("coboundary stays in ring")
}

pub fn is_cocycle(x: &Complex, c: &Cochain) -> bool {
    coboundary(x, c).is_zero()
}

/// Alexander–Whitney cup product: `(a ∪ b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q})`.
pub fn cup(x: &Complex, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let ring = a.ring.product(b.ring)?;
    if !a.fits(x) || !b.fits(x) {
        return Err(Error::Mismatch("cup product of cochains from another complex".into()));
    }
    let (p, q) = (a.degree, b.degree);
    let n = p + q;
    let mut values = Vec::with_capacity(x.count(n));
    for s in x.simplices(n) {
        let av = &a.values[x.index_of(&s[..=p]).expect("front face")];
        if av.is_zero() {
            values.push(Rational::zero());
            continue;
        }
        let bv = &b.values[x.index_of(&s[p..]).expect("back face")];
        values.push(av * bv);
    }
    Cochain::new(ring, n, values)
}

/// `φ^* c = c ∘ φ_*` for `c` on the target of `φ`.
pub fn pullback_cochain(phi: &SimplicialMap, c: &Cochain) -> Result<Cochain> {
    if !c.fits(phi.target()) {
        return Err(Error::Mismatch("pullback of a cochain that does not live on the map's target".into()));
    }
    let values = phi.induced_chain_map(c.degree).tr_mul_rat_vec(&c.values);
    Cochain::new(c.ring, c.degree, values)
}

/// Whether `ω` is closed with integral values on every integer cycle.
pub fn is_integral_form(x: &Complex, w: &Cochain) -> bool {
    if w.ring == Ring::QmodZ || !w.fits(x) || !is_cocycle(x, w) {
        return false;
    }
    let basis = x.boundary_snf(w.degree).kernel_basis();
    (0..basis.cols()).all(|c| is_integral(&w.evaluate(&basis.column(c))))
}

/// An element of `Λ^j / Λ^j_Z`, held by a rational representative.
#[derive(Clone, Debug)]
pub struct QuotientForm {
    pub representative: Cochain,
}

impl QuotientForm {
    pub fn new(representative: Cochain) -> Self {
        Self { representative: representative.lift(LiftStrategy::Unit) }
    }

    pub fn zero(x: &Complex, degree: usize) -> Self {
        Self::new(Cochain::zero(x, Ring::Q, degree))
    }

    pub fn degree(&self) -> usize {
        self.representative.degree
    }

    /// Equality in the quotient: the difference has integral periods and is closed.
    pub fn equals(&self, x: &Complex, other: &QuotientForm) -> bool {
        is_integral_form(x, &(&self.representative - &other.representative))
    }

    pub fn is_zero(&self, x: &Complex) -> bool {
        is_integral_form(x, &self.representative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::corpus;

    #[test]
    fn vertex_indicator_coboundary() {
        let x = corpus::get("s1");
        let d = coboundary(&x, &Cochain::indicator(&x, Ring::Z, &[0]).unwrap());
        let nonzero: Vec<_> = d.values().iter().filter(|v| !v.is_zero()).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.iter().all(|v| v.numer().magnitude() == &num_bigint::BigUint::from(1u8)));
        let top = coboundary(&x, &Cochain::indicator(&x, Ring::Q, &[0, 1]).unwrap());
        assert!(top.is_empty());
    }

    #[test]
    fn integral_forms_on_circle() {
        let x = corpus::get("s1");
        // edges are [0,1], [0,2], [1,2]; the cycle [0,1] + [1,2] − [0,2]
        let third = Cochain::rational(1, vec![rat(1, 3), rat(-1, 3), rat(1, 3)]);
        assert!(is_integral_form(&x, &third));
        let half = Cochain::rational(1, vec![rat(1, 2), rat(0, 1), rat(0, 1)]);
        assert!(!is_integral_form(&x, &half));
        let exact = coboundary(&x, &Cochain::rational(0, vec![rat(1, 5), rat(2, 7), rat(0, 1)]));
        assert!(is_integral_form(&x, &exact));
    }

    #[test]
    fn unit_is_cup_identity() {
        let x = corpus::get("rp2");
        let one = Cochain::constant(&x, Ring::Z, 0, Rational::one()).unwrap();
        let y = Cochain::rational(2, (0..x.count(2)).map(|i| rat(i as i64, 3)).collect());
        assert_eq!(cup(&x, &one, &y).unwrap(), y);
        assert_eq!(cup(&x, &y, &one).unwrap(), y);
    }

    #[test]
    fn leibniz_on_rp2() {
        let x = corpus::get("rp2");
        let a = Cochain::rational(1, (0..x.count(1)).map(|i| rat((i * 7 % 5) as i64 - 2, 2)).collect());
        let b = Cochain::rational(1, (0..x.count(1)).map(|i| rat((i * 3 % 4) as i64 - 1, 3)).collect());
        let lhs = coboundary(&x, &cup(&x, &a, &b).unwrap());
        let rhs = &cup(&x, &coboundary(&x, &a), &b).unwrap() - &cup(&x, &a, &coboundary(&x, &b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_rules() {
        let x = corpus::get("s1");
        let q = Cochain::zero(&x, Ring::QmodZ, 0);
        assert!(cup(&x, &q, &q).is_err());
        assert_eq!(cup(&x, &Cochain::zero(&x, Ring::Z, 0), &q).unwrap().ring(), Ring::QmodZ);
        assert!(Cochain::new(Ring::Z, 0, vec![rat(1, 2)]).is_err());
        assert_eq!(Cochain::new(Ring::QmodZ, 0, vec![rat(-1, 3)]).unwrap().value(0), &rat(2, 3));
    }

    #[test]
    fn json_round_trip() {
        let x = corpus::get("s1");
        let c = Cochain::rational(1, vec![rat(1, 3), rat(0, 1), rat(-2, 1)]);
        let v = c.to_json(&x);
        assert_eq!(v["values"]["0,1"], "1/3");
        assert_eq!(Cochain::from_json(&x, &v).unwrap(), c);
    }
}

//! The totally definite quaternion algebra B = (a, b)_L obtained by base
//! change of the rational algebra ramified at {p, infinity}.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{is_prime, legendre, AlgInt, Field, FieldElement, PrimeIdeal};
use crate::hilbert::local_symbol;
use crate::linalg::{rat, Rat};

/// An element t + x i + y j + z k with coordinates in L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion(pub [FieldElement; 4]);

impl Quaternion {
    pub fn zero() -> Self {
        Quaternion([FieldElement::zero(); 4])
    }

    pub fn one() -> Self {
        Self::from_scalar(FieldElement::one())
    }

    pub fn from_scalar(s: FieldElement) -> Self {
        let mut q = Self::zero();
        q.0[0] = s;
        q
    }

    /// Element with rational coordinates.
    pub fn rational(c: [Rat; 4]) -> Self {
        Quaternion(c.map(FieldElement::from_rat))
    }

    /// Element with coordinates `c / den`.
    pub fn from_ints(c: [i128; 4], den: i128) -> Self {
        Quaternion(c.map(|v| FieldElement::from_rat(Rat::new(v, den))))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    pub fn sub(&self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion(self.0.map(|c| -c))
    }

    pub fn scale_rat(&self, r: Rat) -> Quaternion {
        Quaternion(self.0.map(|c| c.scale(r)))
    }
}

/// B = (a, b)_L with i^2 = a, j^2 = b, k = ij = -ji.
#[derive(Clone, Debug)]
pub struct QuaternionAlgebra {
    field: Field,
    p: i64,
    a: i64,
    b: i64,
    ramified: Vec<PrimeIdeal>,
}

/// The rational presentation of B_{p, infinity}.
pub fn rational_presentation(p: i64) -> Result<(i64, i64)> {
    if !is_prime(p) {
        return Err(Error::CompositeP(p));
    }
    Ok(if p == 2 {
        (-1, -1)
    } else if p % 4 == 3 {
        (-1, -p)
    } else if p % 8 == 5 {
        (-2, -p)
    } else {
        let q = (3..)
            .step_by(4)
            .find(|&q| is_prime(q) && legendre(q, p) == -1)
            .expect("a suitable auxiliary prime exists");
        (-p, -q)
    })
}

impl QuaternionAlgebra {
    /// Base change of B_{p, infinity} to `field`, certified by
    /// [`QuaternionAlgebra::verify_ramification`].
    pub fn construct(field: &Field, p: i64) -> Result<QuaternionAlgebra> {
        let (a, b) = rational_presentation(p)?;
        field.prime_splitting(p)?;
        Self::with_presentation(field, p, a, b)
    }

    /// An algebra with an explicit rational presentation, certified to be
    /// ramified exactly at the primes above `p` of odd residue degree.
    pub fn with_presentation(field: &Field, p: i64, a: i64, b: i64) -> Result<QuaternionAlgebra> {
        let mut alg = QuaternionAlgebra {
            field: field.clone(),
            p,
            a,
            b,
            ramified: Vec::new(),
        };
        alg.ramified = alg.verify_ramification()?;
        Ok(alg)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn structure_constants(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    /// Finite primes of L at which B ramifies.
    pub fn ramified_primes(&self) -> &[PrimeIdeal] {
        &self.ramified
    }

    /// Computes the finite ramification by brute-force local Hilbert symbols
    /// and checks it equals the primes above p with odd residue degree. Real
    /// places ramify because a and b are negative.
    pub fn verify_ramification(&self) -> Result<Vec<PrimeIdeal>> {
        if self.a >= 0 || self.b >= 0 {
            return Err(Error::RamificationMismatch {
                found: vec![format!("a={}, b={} not totally negative", self.a, self.b)],
                expected: vec!["all real places".into()],
            });
        }
        let mut bad: Vec<i64> = vec![2];
        for v in [self.a.abs(), self.b.abs()] {
            let mut m = v;
            let mut q = 2;
            while m > 1 {
                while m % q == 0 {
                    if !bad.contains(&q) {
                        bad.push(q);
                    }
                    m /= q;
                }
                q += 1;
            }
        }
        bad.sort();
        let mut found = Vec::new();
        for q in bad {
            for prime in self.field.primes_above(q) {
                if local_symbol(&self.field, &prime, self.a, self.b) == -1 {
                    found.push(prime);
                }
            }
        }
        let expected: Vec<PrimeIdeal> = self
            .field
            .primes_above(self.p)
            .into_iter()
            .filter(|pr| pr.residue_degree % 2 == 1)
            .collect();
        if found != expected {
            return Err(Error::RamificationMismatch {
                found: found.iter().map(|p| p.generator.to_string()).collect(),
                expected: expected.iter().map(|p| p.generator.to_string()).collect(),
            });
        }
        Ok(found)
    }

    pub fn i(&self) -> Quaternion {
        Quaternion::from_ints([0, 1, 0, 0], 1)
    }

    pub fn j(&self) -> Quaternion {
        Quaternion::from_ints([0, 0, 1, 0], 1)
    }

    pub fn k(&self) -> Quaternion {
        Quaternion::from_ints([0, 0, 0, 1], 1)
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let f = &self.field;
        let m = |u: &FieldElement, v: &FieldElement| f.el_mul(u, v);
        let a = rat(self.a as i128);
        let b = rat(self.b as i128);
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let t = m(x0, y0) + m(x1, y1).scale(a) + m(x2, y2).scale(b) - m(x3, y3).scale(a * b);
        let u = m(x0, y1) + m(x1, y0) - m(x2, y3).scale(b) + m(x3, y2).scale(b);
        let v = m(x0, y2) + m(x2, y0) + m(x1, y3).scale(a) - m(x3, y1).scale(a);
        let w = m(x0, y3) + m(x3, y0) + m(x1, y2) - m(x2, y1);
        Quaternion([t, u, v, w])
    }

    pub fn scale(&self, x: &Quaternion, s: &FieldElement) -> Quaternion {
        Quaternion(x.0.map(|c| self.field.el_mul(&c, s)))
    }

    pub fn conjugate(&self, x: &Quaternion) -> Quaternion {
        Quaternion([x.0[0], -x.0[1], -x.0[2], -x.0[3]])
    }

    /// Nrd(x) = t^2 - a x^2 - b y^2 + ab z^2.
    pub fn reduced_norm(&self, x: &Quaternion) -> FieldElement {
        let f = &self.field;
        let sq = |u: &FieldElement| f.el_mul(u, u);
        let a = rat(self.a as i128);
        let b = rat(self.b as i128);
        sq(&x.0[0]) - sq(&x.0[1]).scale(a) - sq(&x.0[2]).scale(b) + sq(&x.0[3]).scale(a * b)
    }

    pub fn reduced_trace(&self, x: &Quaternion) -> FieldElement {
        x.0[0].scale(rat(2))
    }

    pub fn inverse(&self, x: &Quaternion) -> Quaternion {
        let n = self.reduced_norm(x);
        assert!(!n.is_zero(), "zero is not invertible");
        self.scale(&self.conjugate(x), &self.field.el_inv(&n))
    }

    /// Coordinates in the Q-basis (e, w e) for e in (1, i, j, k), interleaved
    /// as [t_a, t_b, x_a, x_b, ...] for degree two.
    pub fn coordinates(&self, x: &Quaternion) -> Vec<Rat> {
        let mut out = Vec::with_capacity(4 * self.field.degree());
        for c in &x.0 {
            out.push(c.a);
            if self.field.degree() == 2 {
                out.push(c.b);
            } else {
                debug_assert!(c.b.is_zero());
            }
        }
        out
    }

    pub fn from_coordinates(&self, v: &[Rat]) -> Quaternion {
        let g = self.field.degree();
        Quaternion(std::array::from_fn(|k| {
            if g == 2 {
                FieldElement::new(v[2 * k], v[2 * k + 1])
            } else {
                FieldElement::from_rat(v[k])
            }
        }))
    }

    /// Rank of B as a Q-vector space.
    pub fn rational_dim(&self) -> usize {
        4 * self.field.degree()
    }

    /// Reduced norm of an element known to be integral.
    pub fn nrd_int(&self, x: &Quaternion) -> Option<AlgInt> {
        self.reduced_norm(x).to_alg_int()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn alg(d: i64, p: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::construct(&Field::new(d).unwrap(), p).unwrap()
    }

    #[test]
    fn presentation_table() {
        assert_eq!(alg(1, 2).structure_constants(), (-1, -1));
        assert_eq!(alg(1, 11).structure_constants(), (-1, -11));
        assert_eq!(alg(5, 11).structure_constants(), (-1, -11));
        assert_eq!(alg(1, 13).structure_constants(), (-2, -13));
        assert_eq!(alg(1, 17).structure_constants(), (-17, -3));
        assert!(matches!(
            QuaternionAlgebra::construct(&Field::rationals(), 15),
            Err(Error::CompositeP(15))
        ));
    }

    #[test]
    fn ramification_examples() {
        let r = alg(1, 11).verify_ramification().unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].generator, AlgInt::rational(11));
        let r = alg(5, 11).verify_ramification().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|p| p.residue_degree == 1 && p.p == 11));
        assert!(alg(5, 2).verify_ramification().unwrap().is_empty());
        assert!(alg(5, 3).verify_ramification().unwrap().is_empty());
    }

    #[test]
    fn ramification_over_many_primes_and_fields() {
        for p in [2, 3, 5, 7, 11, 13, 17, 23, 29, 37, 41, 67, 73, 89, 97, 113] {
            alg(1, p);
        }
        for d in [2, 5, 13, 17] {
            let f = Field::new(d).unwrap();
            for p in [2, 3, 7, 11, 17, 19, 23, 29, 41] {
                if f.discriminant() % p == 0 {
                    continue;
                }
                QuaternionAlgebra::construct(&f, p).unwrap();
            }
        }
    }

    #[test]
    fn wrong_presentation_is_rejected() {
        // (-1,-1) is ramified at 2, not at 11
        let err = QuaternionAlgebra::with_presentation(&Field::rationals(), 11, -1, -1).unwrap_err();
        assert!(matches!(err, Error::RamificationMismatch { .. }));
    }

    #[test]
    fn norm_examples() {
        let b = alg(1, 2);
        let x = Quaternion::from_ints([1, 1, 1, 1], 1);
        assert_eq!(b.reduced_norm(&x), FieldElement::from_int(4));
        assert_eq!(b.reduced_norm(&Quaternion::one()), FieldElement::one());
        assert_eq!(b.reduced_trace(&Quaternion::one()), FieldElement::from_int(2));
        let b11 = alg(1, 11);
        assert_eq!(b11.reduced_norm(&b11.j()), FieldElement::from_int(11));
        assert_eq!(b11.mul(&b11.i(), &b11.j()), b11.k());
        assert_eq!(b11.mul(&b11.j(), &b11.i()), b11.k().neg());
    }

    fn element(g: usize) -> impl Strategy<Value = Quaternion> {
        prop::collection::vec((-20i128..20, -20i128..20, 1i128..4), 4).prop_map(move |v| {
            Quaternion(std::array::from_fn(|k| {
                let (a, b, d) = v[k];
                FieldElement::new(Rat::new(a, d), if g == 2 { Rat::new(b, d) } else { Rat::zero() })
            }))
        })
    }

    proptest! {
        #[test]
        fn norm_multiplicative_and_conjugation_reverses(x in element(2), y in element(2), p in prop::sample::select(vec![2i64, 3, 7, 11])) {
            let b = alg(5, p);
            let f = b.field().clone();
            prop_assert_eq!(b.reduced_norm(&b.mul(&x, &y)), f.el_mul(&b.reduced_norm(&x), &b.reduced_norm(&y)));
            prop_assert_eq!(b.conjugate(&b.mul(&x, &y)), b.mul(&b.conjugate(&y), &b.conjugate(&x)));
            let one = Quaternion::one();
            let lhs = b.reduced_trace(&x);
            let rhs = b.reduced_norm(&x.add(&one)) - b.reduced_norm(&x) - FieldElement::one();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(b.mul(&x, &b.conjugate(&x)), Quaternion::from_scalar(b.reduced_norm(&x)));
        }

        #[test]
        fn definite(x in element(2)) {
            let b = alg(5, 11);
            if !x.is_zero() {
                prop_assert!(b.field().is_totally_positive(&b.reduced_norm(&x)));
            }
        }
    }
}

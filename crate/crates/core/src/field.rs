//! Exact arithmetic in L = Q or a real quadratic field Q(sqrt d) of narrow
//! class number one: integers, elements, totally positive elements, units,
//! prime splitting and principal ideals.
//!
//! Elements are written in the integral basis {1, w} where w = (1 + sqrt d)/2
//! for d = 1 mod 4 and w = sqrt d otherwise; w is a root of x^2 - t x + n.
//! For L = Q (d = 1) the second coordinate is always zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, Rat, ZLattice};

/// Square-free d for which h+(Q(sqrt d)) = 1 is taken as known.
pub const SUPPORTED_FIELDS: [i64; 5] = [1, 2, 5, 13, 17];

/// An element a + b w of O_L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AlgInt {
    pub a: i64,
    pub b: i64,
}

impl AlgInt {
    pub const ZERO: AlgInt = AlgInt { a: 0, b: 0 };
    pub const ONE: AlgInt = AlgInt { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        AlgInt { a, b }
    }

    pub fn rational(a: i64) -> Self {
        AlgInt { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn to_element(self) -> FieldElement {
        FieldElement::new(rat(self.a as i128), rat(self.b as i128))
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}{:+}w", self.a, self.b)
        }
    }
}

impl Serialize for AlgInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(d)?;
        Ok(AlgInt { a, b })
    }
}

impl Add for AlgInt {
    type Output = AlgInt;
    fn add(self, o: AlgInt) -> AlgInt {
        AlgInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for AlgInt {
    type Output = AlgInt;
    fn sub(self, o: AlgInt) -> AlgInt {
        AlgInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        AlgInt::new(-self.a, -self.b)
    }
}

/// An element a + b w of L with rational coordinates; the coordinate pair
/// is its unique canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: Rat,
    pub b: Rat,
}

impl FieldElement {
    pub fn new(a: Rat, b: Rat) -> Self {
        FieldElement { a, b }
    }

    pub fn zero() -> Self {
        FieldElement::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        FieldElement::new(Rat::one(), Rat::zero())
    }

    pub fn from_int(n: i128) -> Self {
        FieldElement::new(rat(n), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        FieldElement::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Least positive integer `m` with `m * self` in O_L.
    pub fn denominator(&self) -> i128 {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn scale(&self, r: Rat) -> Self {
        FieldElement::new(self.a * r, self.b * r)
    }

    pub fn to_alg_int(&self) -> Option<AlgInt> {
        if self.a.is_integer() && self.b.is_integer() {
            Some(AlgInt::new(
                i64::try_from(self.a.to_integer()).ok()?,
                i64::try_from(self.b.to_integer()).ok()?,
            ))
        } else {
            None
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: FieldElement) -> FieldElement {
        FieldElement::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: FieldElement) -> FieldElement {
        FieldElement::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-self.a, -self.b)
    }
}

/// A prime ideal of O_L lying over the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: i64,
    pub residue_degree: u32,
    pub ramification: u32,
    /// Absolute norm p^f.
    pub norm: i64,
    /// Canonical totally positive generator.
    pub generator: AlgInt,
    /// Residue of w modulo this prime when the residue degree is one.
    pub root: Option<i64>,
}

/// The field L = Q(sqrt d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    d: i64,
    /// w^2 = t w - n
    t: i64,
    n: i64,
    fundamental_unit: Option<AlgInt>,
}

impl Field {
    pub fn new(d: i64) -> Result<Field> {
        let fundamental_unit = match d {
            1 => None,
            2 => Some(AlgInt::new(1, 1)),
            5 => Some(AlgInt::new(0, 1)),
            13 => Some(AlgInt::new(1, 1)),
            17 => Some(AlgInt::new(3, 2)),
            _ => return Err(Error::UnsupportedField(d)),
        };
        let (t, n) = match d {
            1 => (0, 0),
            _ if d % 4 == 1 => (1, (1 - d) / 4),
            _ => (0, -d),
        };
        Ok(Field {
            d,
            t,
            n,
            fundamental_unit,
        })
    }

    pub fn rationals() -> Field {
        Field::new(1).expect("Q is supported")
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn degree(&self) -> usize {
        if self.d == 1 {
            1
        } else {
            2
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self.d {
            1 => 1,
            d if d % 4 == 1 => d,
            d => 4 * d,
        }
    }

    pub fn fundamental_unit(&self) -> Option<AlgInt> {
        self.fundamental_unit
    }

    /// The generator w of the integral basis.
    pub fn omega(&self) -> AlgInt {
        AlgInt::new(0, 1)
    }

    /// Coefficients (t, n) of the minimal polynomial x^2 - t x + n of w.
    pub fn min_poly(&self) -> (i64, i64) {
        (self.t, self.n)
    }

    // ---- integers -------------------------------------------------------

    pub fn mul(&self, x: AlgInt, y: AlgInt) -> AlgInt {
        let bb = x.b * y.b;
        AlgInt::new(x.a * y.a - self.n * bb, x.a * y.b + x.b * y.a + self.t * bb)
    }

    pub fn pow(&self, x: AlgInt, k: u32) -> AlgInt {
        (0..k).fold(AlgInt::ONE, |acc, _| self.mul(acc, x))
    }

    pub fn norm(&self, x: AlgInt) -> i64 {
        if self.degree() == 1 {
            x.a
        } else {
            x.a * x.a + self.t * x.a * x.b + self.n * x.b * x.b
        }
    }

    pub fn trace(&self, x: AlgInt) -> i64 {
        if self.degree() == 1 {
            x.a
        } else {
            2 * x.a + self.t * x.b
        }
    }

    pub fn conj(&self, x: AlgInt) -> AlgInt {
        if self.degree() == 1 {
            x
        } else {
            AlgInt::new(x.a + self.t * x.b, -x.b)
        }
    }

    /// `x / y` when the quotient is integral.
    pub fn div_exact(&self, x: AlgInt, y: AlgInt) -> Option<AlgInt> {
        self.el_div(&x.to_element(), &y.to_element()).to_alg_int()
    }

    pub fn divides(&self, y: AlgInt, x: AlgInt) -> bool {
        self.div_exact(x, y).is_some()
    }

    // ---- elements -------------------------------------------------------

    pub fn el_mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let bb = x.b * y.b;
        FieldElement::new(
            x.a * y.a - bb * rat(self.n as i128),
            x.a * y.b + x.b * y.a + bb * rat(self.t as i128),
        )
    }

    pub fn el_norm(&self, x: &FieldElement) -> Rat {
        if self.degree() == 1 {
            x.a
        } else {
            x.a * x.a + x.a * x.b * rat(self.t as i128) + x.b * x.b * rat(self.n as i128)
        }
    }

    pub fn el_trace(&self, x: &FieldElement) -> Rat {
        if self.degree() == 1 {
            x.a
        } else {
            x.a * rat(2) + x.b * rat(self.t as i128)
        }
    }

    pub fn el_conj(&self, x: &FieldElement) -> FieldElement {
        if self.degree() == 1 {
            *x
        } else {
            FieldElement::new(x.a + x.b * rat(self.t as i128), -x.b)
        }
    }

    pub fn el_inv(&self, x: &FieldElement) -> FieldElement {
        let nrm = self.el_norm(x);
        assert!(!nrm.is_zero(), "inverse of zero");
        if self.degree() == 1 {
            return FieldElement::from_rat(nrm.recip());
        }
        self.el_conj(x).scale(nrm.recip())
    }

    pub fn el_div(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.el_mul(x, &self.el_inv(y))
    }

    /// True iff every real embedding of `x` is positive. For degree two this
    /// is the exact test trace > 0 and norm > 0.
    pub fn is_totally_positive(&self, x: &FieldElement) -> bool {
        if self.degree() == 1 {
            x.a > Rat::zero()
        } else {
            self.el_trace(x) > Rat::zero() && self.el_norm(x) > Rat::zero()
        }
    }

    /// Floating-point images under the real embeddings (w -> larger root first).
    pub fn embeddings(&self, x: &FieldElement) -> Vec<f64> {
        let a = *x.a.numer() as f64 / *x.a.denom() as f64;
        let b = *x.b.numer() as f64 / *x.b.denom() as f64;
        if self.degree() == 1 {
            return vec![a];
        }
        let s = ((self.t * self.t - 4 * self.n) as f64).sqrt();
        let w1 = (self.t as f64 + s) / 2.0;
        let w2 = (self.t as f64 - s) / 2.0;
        vec![a + b * w1, a + b * w2]
    }

    /// Sort key realizing the canonical order of O_L elements: by trace,
    /// then by the first real embedding (equivalently by the w-coordinate).
    pub fn order_key(&self, x: AlgInt) -> (i64, i64) {
        (self.trace(x), x.b)
    }

    pub fn cmp_canonical(&self, x: AlgInt, y: AlgInt) -> Ordering {
        self.order_key(x).cmp(&self.order_key(y))
    }

    // ---- units ----------------------------------------------------------

    /// Representatives of O_L^{x,+} / (O_L^x)^2. Always `{1}` for supported
    /// fields; the check that a unit of norm -1 exists certifies it.
    pub fn totally_positive_units_mod_squares(&self) -> Result<Vec<AlgInt>> {
        if let Some(eps) = self.fundamental_unit {
            if self.norm(eps) != -1 {
                return Err(Error::Verification(format!(
                    "fundamental unit {eps} of Q(sqrt {}) has norm {}",
                    self.d,
                    self.norm(eps)
                )));
            }
        }
        Ok(vec![AlgInt::ONE])
    }

    /// Multiply `x` by the unit making it totally positive with minimal
    /// trace, ties broken by the smaller first embedding.
    pub fn canonical_associate(&self, x: AlgInt) -> AlgInt {
        assert!(!x.is_zero(), "zero has no canonical associate");
        if self.degree() == 1 {
            return AlgInt::rational(x.a.abs());
        }
        let eps = self.fundamental_unit.expect("real quadratic field");
        let eps_inv = -self.conj(eps);
        let mut y = x;
        if self.norm(y) < 0 {
            y = self.mul(y, eps);
        }
        if self.trace(y) < 0 {
            y = -y;
        }
        let e2 = self.mul(eps, eps);
        let e2i = self.mul(eps_inv, eps_inv);
        loop {
            let up = self.mul(y, e2);
            let down = self.mul(y, e2i);
            if self.trace(up) < self.trace(y) {
                y = up;
            } else if self.trace(down) < self.trace(y) {
                y = down;
            } else {
                if self.trace(up) == self.trace(y) && up.b < y.b {
                    y = up;
                }
                if self.trace(down) == self.trace(y) && down.b < y.b {
                    y = down;
                }
                return y;
            }
        }
    }

    // ---- enumeration ----------------------------------------------------

    /// All totally positive nu in O_L with trace at most `bound`, preceded
    /// by 0, in canonical order.
    pub fn enumerate_totally_positive(&self, bound: i64) -> Vec<AlgInt> {
        let mut out = vec![AlgInt::ZERO];
        if self.degree() == 1 {
            out.extend((1..=bound).map(AlgInt::rational));
            return out;
        }
        let disc = self.t * self.t - 4 * self.n;
        for trace in 1..=bound {
            let bmax = (((trace * trace) as f64 / disc as f64).sqrt()) as i64 + 1;
            for b in -bmax..=bmax {
                if b * b * disc >= trace * trace {
                    continue;
                }
                let twice_a = trace - self.t * b;
                if twice_a % 2 != 0 {
                    continue;
                }
                out.push(AlgInt::new(twice_a / 2, b));
            }
        }
        out
    }

    // ---- primes ---------------------------------------------------------

    /// Decomposition of an unramified rational prime.
    pub fn prime_splitting(&self, p: i64) -> Result<Vec<PrimeIdeal>> {
        if self.discriminant() % p == 0 && self.degree() == 2 {
            return Err(Error::RamifiedPrime { p, d: self.d });
        }
        Ok(self.primes_above(p))
    }

    /// All primes of O_L above `p`, ramified ones included.
    pub fn primes_above(&self, p: i64) -> Vec<PrimeIdeal> {
        if self.degree() == 1 {
            return vec![PrimeIdeal {
                p,
                residue_degree: 1,
                ramification: 1,
                norm: p,
                generator: AlgInt::rational(p),
                root: Some(0),
            }];
        }
        let roots: Vec<i64> = (0..p)
            .filter(|&r| (r * r - self.t * r + self.n).rem_euclid(p) == 0)
            .collect();
        match roots.len() {
            0 => vec![PrimeIdeal {
                p,
                residue_degree: 2,
                ramification: 1,
                norm: p * p,
                generator: AlgInt::rational(p),
                root: None,
            }],
            1 => vec![self.degree_one_prime(p, roots[0], 2)],
            _ => roots.iter().map(|&r| self.degree_one_prime(p, r, 1)).collect(),
        }
    }

    fn degree_one_prime(&self, p: i64, r: i64, e: u32) -> PrimeIdeal {
        let ideal = OlIdeal::from_generators(
            self,
            &[AlgInt::rational(p).to_element(), AlgInt::new(-r, 1).to_element()],
        );
        let generator = ideal
            .generator(self)
            .to_alg_int()
            .expect("integral ideal has integral generator");
        PrimeIdeal {
            p,
            residue_degree: 1,
            ramification: e,
            norm: p,
            generator,
            root: Some(r),
        }
    }

    /// Canonical generator of the ideal product of two primes (or any two
    /// principal ideals given by generators).
    pub fn canonical_product(&self, x: AlgInt, y: AlgInt) -> AlgInt {
        self.canonical_associate(self.mul(x, y))
    }

    // ---- matrices over L ------------------------------------------------

    pub fn det(&self, m: &[Vec<FieldElement>]) -> FieldElement {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = FieldElement::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return FieldElement::zero();
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det = self.el_mul(&det, &a[c][c]);
            let inv = self.el_inv(&a[c][c]);
            for r in c + 1..n {
                if !a[r][c].is_zero() {
                    let f = self.el_mul(&a[r][c], &inv);
                    for k in c..n {
                        let t = self.el_mul(&a[c][k], &f);
                        a[r][k] = a[r][k] - t;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
        let n = m.len();
        let mut a: Vec<Vec<FieldElement>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| {
                    if i == j {
                        FieldElement::one()
                    } else {
                        FieldElement::zero()
                    }
                }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = self.el_inv(&a[c][c]);
            for v in a[c].iter_mut() {
                *v = self.el_mul(v, &inv);
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c];
                    for k in 0..2 * n {
                        let t = self.el_mul(&a[c][k], &f);
                        a[r][k] = a[r][k] - t;
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Division with remainder in the norm-Euclidean ring O_L:
    /// returns (q, r) with x = q y + r and |N(r)| < |N(y)|.
    pub fn div_rem(&self, x: AlgInt, y: AlgInt) -> (AlgInt, AlgInt) {
        assert!(!y.is_zero(), "division by zero");
        if self.degree() == 1 {
            let q = x.a.div_euclid(y.a);
            return (AlgInt::rational(q), AlgInt::rational(x.a - q * y.a));
        }
        let xi = self.el_div(&x.to_element(), &y.to_element());
        let fa = xi.a.floor().to_integer() as i64;
        let fb = xi.b.floor().to_integer() as i64;
        let target = self.norm(y).abs();
        for radius in [2i64, 6, 12] {
            let mut best: Option<(i64, AlgInt, AlgInt)> = None;
            for da in -radius..=radius + 1 {
                for db in -radius..=radius + 1 {
                    let q = AlgInt::new(fa + da, fb + db);
                    let r = x - self.mul(q, y);
                    let nr = self.norm(r).abs();
                    if best.as_ref().is_none_or(|(bn, _, _)| nr < *bn) {
                        best = Some((nr, q, r));
                    }
                }
            }
            let (nr, q, r) = best.expect("nonempty window");
            if nr < target {
                return (q, r);
            }
        }
        panic!("no Euclidean quotient found for {x} / {y} in Q(sqrt {})", self.d);
    }

    /// Exact square root in O_L of a totally positive square.
    pub fn sqrt_exact(&self, x: AlgInt) -> Option<AlgInt> {
        if self.degree() == 1 {
            if x.a < 0 {
                return None;
            }
            let r = (x.a as f64).sqrt().round() as i64;
            return (r - 1..=r + 1).find(|&s| s >= 0 && s * s == x.a).map(AlgInt::rational);
        }
        let emb = self.embeddings(&x.to_element());
        if emb[0] < 0.0 || emb[1] < 0.0 {
            return None;
        }
        let s = ((self.t * self.t - 4 * self.n) as f64).sqrt();
        let w1 = (self.t as f64 + s) / 2.0;
        for sign in [1.0, -1.0] {
            let r1 = emb[0].sqrt();
            let r2 = sign * emb[1].sqrt();
            let b = ((r1 - r2) / s).round() as i64;
            let a = (r1 - b as f64 * w1).round() as i64;
            for da in -1..=1 {
                for db in -1..=1 {
                    let c = AlgInt::new(a + da, b + db);
                    if self.mul(c, c) == x {
                        return Some(c);
                    }
                }
            }
        }
        None
    }
}

/// A fractional ideal of O_L stored as a Z-lattice in the {1, w} coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OlIdeal {
    pub lattice: ZLattice,
}

impl OlIdeal {
    pub fn from_generators(field: &Field, gens: &[FieldElement]) -> OlIdeal {
        let g = field.degree();
        let w = field.omega().to_element();
        let mut rows = Vec::new();
        for x in gens {
            if x.is_zero() {
                continue;
            }
            rows.push(coords(field, x));
            if g == 2 {
                rows.push(coords(field, &field.el_mul(x, &w)));
            }
        }
        assert!(!rows.is_empty(), "zero ideal");
        OlIdeal {
            lattice: ZLattice::from_rows(&rows, g),
        }
    }

    pub fn principal(field: &Field, x: &FieldElement) -> OlIdeal {
        OlIdeal::from_generators(field, &[*x])
    }

    pub fn contains(&self, field: &Field, x: &FieldElement) -> bool {
        self.lattice.contains(&coords(field, x))
    }

    /// Absolute norm (index of the ideal in O_L, extended multiplicatively).
    pub fn norm(&self) -> Rat {
        self.lattice.covolume()
    }

    pub fn intersect(&self, other: &OlIdeal) -> OlIdeal {
        OlIdeal {
            lattice: self.lattice.intersect(&other.lattice),
        }
    }

    pub fn sum(&self, other: &OlIdeal) -> OlIdeal {
        OlIdeal {
            lattice: self.lattice.sum(&other.lattice),
        }
    }

    /// Canonical totally positive generator (minimal trace, ties by the
    /// smaller first embedding), found by scanning totally positive
    /// elements of the ideal by increasing trace.
    pub fn generator(&self, field: &Field) -> FieldElement {
        let den = self.lattice.denominator;
        let scaled = self.lattice.scale(rat(den));
        let nrm = scaled.covolume();
        assert!(nrm.is_integer());
        let nrm = nrm.to_integer() as i64;
        let found = if field.degree() == 1 {
            AlgInt::rational(nrm)
        } else {
            let (t, n) = field.min_poly();
            let disc = t * t - 4 * n;
            let start = (2.0 * (nrm as f64).sqrt()).floor() as i64;
            let mut hit = None;
            'outer: for trace in start.max(1)..start.max(1) + 1_000_000 {
                let bmax = (((trace * trace) as f64 / disc as f64).sqrt()) as i64 + 1;
                for b in -bmax..=bmax {
                    if b * b * disc >= trace * trace {
                        continue;
                    }
                    let twice_a = trace - t * b;
                    if twice_a % 2 != 0 {
                        continue;
                    }
                    let x = AlgInt::new(twice_a / 2, b);
                    if field.norm(x) == nrm && scaled.contains(&[rat(x.a as i128), rat(x.b as i128)]) {
                        hit = Some(x);
                        break 'outer;
                    }
                }
            }
            hit.expect("ideal is principal with a totally positive generator")
        };
        found.to_element().scale(Rat::new(1, den))
    }
}

pub(crate) fn coords(field: &Field, x: &FieldElement) -> Vec<Rat> {
    if field.degree() == 1 {
        vec![x.a]
    } else {
        vec![x.a, x.b]
    }
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result = 1i64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

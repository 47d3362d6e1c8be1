//! Local Hilbert symbols (a, b)_q for rational a, b at a prime q of L,
//! decided by brute-force search for a primitive zero of a x^2 + b y^2 - z^2
//! in a finite residue ring O_L / q^K.
//!
//! K is chosen so every primitive solution modulo q^K lifts by Hensel's
//! lemma: for odd residue characteristic and valuations of a, b at most one,
//! K = 2 suffices; otherwise K = 2 (v(2) + max(v(a), v(b))) + 1.

use crate::field::{Field, PrimeIdeal};

struct ResidueRing {
    q: i128,
    modulus: i128,
    /// w^2 = t w - n, used only for quadratic residue rings
    t: i128,
    n: i128,
    quadratic: bool,
    ramified: bool,
    cap: u32,
}

type Elt = (i128, i128);

impl ResidueRing {
    fn size(&self) -> usize {
        if self.quadratic {
            (self.modulus * self.modulus) as usize
        } else {
            self.modulus as usize
        }
    }

    fn element(&self, idx: usize) -> Elt {
        let idx = idx as i128;
        if self.quadratic {
            (idx % self.modulus, idx / self.modulus)
        } else {
            (idx, 0)
        }
    }

    fn index(&self, x: Elt) -> usize {
        (x.0 + x.1 * self.modulus) as usize
    }

    fn rational(&self, a: i64) -> Elt {
        ((a as i128).rem_euclid(self.modulus), 0)
    }

    fn add(&self, x: Elt, y: Elt) -> Elt {
        ((x.0 + y.0) % self.modulus, (x.1 + y.1) % self.modulus)
    }

    fn mul(&self, x: Elt, y: Elt) -> Elt {
        let m = self.modulus;
        let bb = x.1 * y.1 % m;
        (
            (x.0 * y.0 - self.n * bb).rem_euclid(m),
            (x.0 * y.1 + x.1 * y.0 + self.t * bb).rem_euclid(m),
        )
    }

    fn valuation(&self, x: Elt) -> u32 {
        let v = if !self.quadratic {
            vq(x.0, self.q)
        } else if self.ramified {
            let nrm = x.0 * x.0 + self.t * x.0 * x.1 + self.n * x.1 * x.1;
            vq(nrm, self.q)
        } else {
            vq(x.0, self.q).min(vq(x.1, self.q))
        };
        v.min(self.cap)
    }

    fn is_unit(&self, x: Elt) -> bool {
        self.valuation(x) == 0
    }
}

fn vq(x: i128, q: i128) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    let mut x = x;
    while x % q == 0 {
        x /= q;
        v += 1;
    }
    v
}

/// (a, b) at the prime `prime` of `field`: +1 or -1.
pub fn local_symbol(field: &Field, prime: &PrimeIdeal, a: i64, b: i64) -> i32 {
    let q = prime.p as i128;
    let e_q = prime.ramification;
    let va = vq(a as i128, q) * e_q;
    let vb = vq(b as i128, q) * e_q;
    let vmax = va.max(vb);
    let e2 = if q == 2 { e_q } else { 0 };
    let k = if q != 2 && vmax <= 1 { 2 } else { 2 * (e2 + vmax) + 1 };
    let (t, n) = field.min_poly();
    let ring = if field.degree() == 1 || (prime.residue_degree == 1 && prime.ramification == 1) {
        ResidueRing {
            q,
            modulus: q.pow(k),
            t: 0,
            n: 0,
            quadratic: false,
            ramified: false,
            cap: k,
        }
    } else if prime.ramification == 2 {
        let m = k.div_ceil(2);
        ResidueRing {
            q,
            modulus: q.pow(m),
            t: t as i128,
            n: n as i128,
            quadratic: true,
            ramified: true,
            cap: 2 * m,
        }
    } else {
        ResidueRing {
            q,
            modulus: q.pow(k),
            t: t as i128,
            n: n as i128,
            quadratic: true,
            ramified: false,
            cap: k,
        }
    };
    if has_primitive_zero(&ring, a, b) {
        1
    } else {
        -1
    }
}

/// A primitive zero has some unit coordinate, which can be scaled to one.
fn has_primitive_zero(ring: &ResidueRing, a: i64, b: i64) -> bool {
    let size = ring.size();
    let ea = ring.rational(a);
    let eb = ring.rational(b);
    let minus_one = ring.rational(-1);
    let mut squares = vec![false; size];
    let mut b_squares = vec![false; size];
    for idx in 0..size {
        let z = ring.element(idx);
        let z2 = ring.mul(z, z);
        squares[ring.index(z2)] = true;
        b_squares[ring.index(ring.mul(eb, z2))] = true;
    }
    let one = ring.rational(1);
    for idx in 0..size {
        let x = ring.element(idx);
        let x2 = ring.mul(x, x);
        // z = 1: a x^2 + b y^2 = 1
        let rest = ring.add(one, ring.mul(minus_one, ring.mul(ea, x2)));
        if b_squares[ring.index(rest)] {
            return true;
        }
        // x = 1: a + b y^2 = z^2 (here the loop variable plays y)
        if squares[ring.index(ring.add(ea, ring.mul(eb, x2)))] {
            return true;
        }
        // y = 1: a x^2 + b = z^2
        if squares[ring.index(ring.add(ring.mul(ea, x2), eb))] {
            return true;
        }
    }
    debug_assert!(ring.is_unit(one));
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_symbol(a: i64, b: i64, p: i64) -> i32 {
        let q = Field::rationals();
        local_symbol(&q, &q.primes_above(p)[0], a, b)
    }

    #[test]
    fn classical_rational_symbols() {
        // Hamilton quaternions ramify at 2 only
        assert_eq!(rational_symbol(-1, -1, 2), -1);
        assert_eq!(rational_symbol(-1, -1, 3), 1);
        // (-1, -11): ramified at 11, split at 2
        assert_eq!(rational_symbol(-1, -11, 11), -1);
        assert_eq!(rational_symbol(-1, -11, 2), 1);
        // (2, 3)_3 = (2|3) = -1 and then also -1 at 2 by reciprocity
        assert_eq!(rational_symbol(2, 3, 3), -1);
        assert_eq!(rational_symbol(2, 3, 2), -1);
        assert_eq!(rational_symbol(5, 7, 3), 1);
    }

    #[test]
    fn quadratic_extension_kills_even_degree_symbols() {
        let f = Field::new(5).unwrap();
        let two = &f.primes_above(2)[0];
        assert_eq!(two.residue_degree, 2);
        assert_eq!(local_symbol(&f, two, -1, -1), 1);
        let f2 = Field::new(2).unwrap();
        let ram = &f2.primes_above(2)[0];
        assert_eq!(ram.ramification, 2);
        // local degree 2 over Q_2
        assert_eq!(local_symbol(&f2, ram, -1, -1), 1);
        let f17 = Field::new(17).unwrap();
        for pr in f17.primes_above(2) {
            assert_eq!(local_symbol(&f17, &pr, -1, -1), -1);
        }
    }
}

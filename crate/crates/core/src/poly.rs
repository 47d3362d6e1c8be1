//! Exact univariate polynomials over Q: characteristic polynomials, rational
//! roots and Sturm isolation of the remaining real roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| q(v)).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut quo = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            quo[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(quo), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Integer coefficients, if all coefficients are integral.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    fn sign_changes_at(seq: &[Poly], x: &BigRational) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Characteristic polynomial det(x I - A) by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let am: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 1..=n {
        let am_m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, t| s + &am[i][t] * &m[t][j]))
                    .collect()
            })
            .collect();
        let tr = (0..n).fold(BigRational::zero(), |s, i| s + &am_m[i][i]);
        let c = -tr / q(k as i64);
        coeffs[n - k] = c.clone();
        m = am_m;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    Poly::new(coeffs)
}

/// A real root known to lie in [lo, hi], with its multiplicity.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RootInterval {
    pub lo: f64,
    pub hi: f64,
    pub multiplicity: usize,
}

/// Rational roots (with multiplicity, ascending) and isolating intervals
/// for the irrational real roots of a monic integer polynomial.
#[derive(Clone, Debug, Serialize, PartialEq, Default)]
pub struct RealRoots {
    pub rational: Vec<i64>,
    pub irrational: Vec<RootInterval>,
    /// Degree not accounted for by real roots.
    pub non_real: usize,
}

pub fn real_roots(p: &Poly, width: f64) -> RealRoots {
    let mut out = RealRoots::default();
    let mut rest = p.monic();
    let bound = cauchy_bound(&rest);
    // integer roots lie in isolating intervals of the square-free part
    let sqf = rest.div_rem(&rest.gcd(&rest.derivative())).0;
    let mut candidates: Vec<i64> = Vec::new();
    if sqf.degree().unwrap_or(0) > 0 {
        for (lo, hi) in isolate(&sqf, bound, 0.5) {
            candidates.extend((lo - 1e-6).ceil() as i64..=(hi + 1e-6).floor() as i64);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    for r in candidates {
        let x = q(r);
        loop {
            if rest.degree().unwrap_or(0) == 0 || !rest.eval(&x).is_zero() {
                break;
            }
            let lin = Poly::new(vec![-x.clone(), BigRational::one()]);
            rest = rest.div_rem(&lin).0;
            out.rational.push(r);
        }
    }
    // Yun's square-free decomposition of what remains
    let mut mult = 1;
    let mut a = rest.clone();
    while a.degree().unwrap_or(0) > 0 {
        let g = a.gcd(&a.derivative());
        let sqf = a.div_rem(&g).0;
        let next_common = sqf.gcd(&g);
        let factor = sqf.div_rem(&next_common).0;
        if factor.degree().unwrap_or(0) > 0 {
            let ivs = isolate(&factor, bound, width);
            out.non_real += (factor.degree().unwrap() - ivs.len()) * mult;
            out.irrational.extend(ivs.into_iter().map(|(lo, hi)| RootInterval {
                lo,
                hi,
                multiplicity: mult,
            }));
        }
        a = g;
        mult += 1;
    }
    out.irrational.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());
    out
}

fn cauchy_bound(p: &Poly) -> i64 {
    let l = p.lead().abs();
    let m =
        p.0.iter()
            .map(|c| (c / &l).abs())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    (m + BigRational::one())
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX / 4)
}

fn isolate(p: &Poly, bound: i64, width: f64) -> Vec<(f64, f64)> {
    let mut seq = vec![p.clone(), p.derivative()];
    while seq.last().unwrap().degree().unwrap_or(0) > 0 {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(Poly(r.0.iter().map(|c| -c).collect()));
    }
    let count = |lo: &BigRational, hi: &BigRational| -> usize {
        Poly::sign_changes_at(&seq, lo) - Poly::sign_changes_at(&seq, hi)
    };
    let w = BigRational::new(BigInt::from((width * 1e12) as i64), BigInt::from(1_000_000_000_000i64));
    let mut out = Vec::new();
    let mut stack = vec![(q(-bound - 1), q(bound + 1))];
    while let Some((lo, hi)) = stack.pop() {
        let n = count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && &hi - &lo <= w {
            out.push((to_f64(&lo), to_f64(&hi)));
            continue;
        }
        let mid = (&lo + &hi) / q(2);
        if p.eval(&mid).is_zero() {
            // rational roots were removed already; nudge the split point
            let mid2 = (&lo + &mid) / q(2);
            stack.push((mid2.clone(), hi));
            stack.push((lo, mid2));
        } else {
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
    }
    out
}

fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        // [[3, 1], [2, 2]]: x^2 - 5x + 4
        assert_eq!(charpoly(&[vec![3, 1], vec![2, 2]]), Poly::from_ints(&[4, -5, 1]));
        assert_eq!(charpoly(&[vec![2]]), Poly::from_ints(&[-2, 1]));
    }

    #[test]
    fn golden_ratio_roots() {
        let r = real_roots(&Poly::from_ints(&[-1, 1, 1]), 1e-9);
        assert!(r.rational.is_empty());
        assert_eq!(r.irrational.len(), 2);
        let s5 = 5f64.sqrt();
        let expect = [(-1.0 - s5) / 2.0, (-1.0 + s5) / 2.0];
        for (iv, e) in r.irrational.iter().zip(expect) {
            assert!(iv.lo <= e && e <= iv.hi && iv.hi - iv.lo < 1e-8);
        }
    }

    #[test]
    fn mixed_roots_and_multiplicity() {
        // (x - 3)(x + 2)^2 (x^2 - 2)^2 (x^2 + 1)
        let mut p = Poly::from_ints(&[-3, 1]);
        for f in [[2, 1, 0], [2, 1, 0], [-2, 0, 1], [-2, 0, 1], [1, 0, 1]] {
            let g = Poly::from_ints(&f);
            let mut c = vec![BigRational::zero(); p.0.len() + g.0.len() - 1];
            for (i, a) in p.0.iter().enumerate() {
                for (j, b) in g.0.iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            p = Poly::new(c);
        }
        let r = real_roots(&p, 1e-6);
        assert_eq!(r.rational, vec![-2, -2, 3]);
        assert_eq!(r.irrational.len(), 2);
        assert!(r.irrational.iter().all(|iv| iv.multiplicity == 2));
        assert_eq!(r.non_real, 2);
    }
}

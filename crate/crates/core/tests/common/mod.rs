//! Oracles shared by the integration tests.

use std::collections::HashMap;

use eichler_core::field::{is_prime, AlgInt, Field};
use eichler_core::linalg::{rat_inverse, Rat};
use eichler_core::orders::{ideal_classes, level_one_order, mass_formula, standard_order, IdealClass, Mode};
use eichler_core::quadratic::QuadraticModule;
use eichler_core::quaternion::{Quaternion, QuaternionAlgebra};
use eichler_core::theta::ThetaSeries;

#[allow(dead_code)]
pub fn classes(field: &Field, p: i64, mode: Mode) -> (QuaternionAlgebra, Vec<IdealClass>) {
    let alg = QuaternionAlgebra::construct(field, p).unwrap();
    let mut o = standard_order(&alg).unwrap();
    if mode == Mode::LevelOne {
        o = level_one_order(&alg, &o).unwrap();
    }
    let ell = (2..)
        .find(|&l| is_prime(l) && l != p && field.discriminant() % l != 0)
        .unwrap();
    let prime = field.primes_above(ell)[0].clone();
    let cs = ideal_classes(&alg, &o, &prime, mass_formula(&alg, mode).unwrap()).unwrap();
    (alg, cs)
}

/// Counts of Q(x) = Nrd(x) / n(M) over every integer combination of the
/// Z-basis in a box that contains the ellipsoid Tr Q(x) <= bound.
pub fn box_scan(alg: &QuaternionAlgebra, m: &QuadraticModule, bound: i64) -> (HashMap<AlgInt, u64>, u64) {
    let f = alg.field();
    let basis = m.lattice.z_basis(alg);
    let n = m.normalizer.to_element();
    let q = |x: &Quaternion| -> AlgInt { f.el_div(&alg.reduced_norm(x), &n).to_alg_int().expect("integral value") };
    let k = basis.len();
    let diag: Vec<AlgInt> = basis.iter().map(&q).collect();
    let mut polar = vec![vec![AlgInt::ZERO; k]; k];
    for a in 0..k {
        for b in 0..k {
            let s = q(&basis[a].add(&basis[b]));
            polar[a][b] = AlgInt::new(s.a - diag[a].a - diag[b].a, s.b - diag[a].b - diag[b].b);
        }
    }
    // Tr Q(x) = x^T S x
    let s: Vec<Vec<Rat>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    if a == b {
                        Rat::from_integer(f.trace(diag[a]) as i128)
                    } else {
                        Rat::new(f.trace(polar[a][b]) as i128, 2)
                    }
                })
                .collect()
        })
        .collect();
    let inv = rat_inverse(&s).unwrap();
    let radius: Vec<i64> = (0..k)
        .map(|a| {
            let r = inv[a][a] * Rat::from_integer(bound as i128);
            ((*r.numer() as f64 / *r.denom() as f64).sqrt() + 1e-9).floor() as i64
        })
        .collect();
    let mut counts = HashMap::new();
    let mut scanned = 0u64;
    let mut c: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        scanned += 1;
        let mut v = AlgInt::ZERO;
        for a in 0..k {
            if c[a] == 0 {
                continue;
            }
            let sq = c[a] * c[a];
            v.a += sq * diag[a].a;
            v.b += sq * diag[a].b;
            for b in a + 1..k {
                let t = c[a] * c[b];
                v.a += t * polar[a][b].a;
                v.b += t * polar[a][b].b;
            }
        }
        if f.trace(v) <= bound {
            *counts.entry(v).or_insert(0) += 1;
        }
        let mut i = 0;
        loop {
            if i == k {
                return (counts, scanned);
            }
            c[i] += 1;
            if c[i] <= radius[i] {
                break;
            }
            c[i] = -radius[i];
            i += 1;
        }
    }
}

/// Coefficients a_1..a_n of q prod (1 - q^k)^2 (1 - q^{11k})^2.
pub fn eta_11(n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n + 1];
    s[0] = 1;
    let mut times = |step: usize| {
        for _ in 0..2 {
            for k in (step..=n).rev() {
                s[k] -= s[k - step];
            }
        }
    };
    for k in 1..=n {
        times(k);
        if 11 * k <= n {
            times(11 * k);
        }
    }
    // shift by q
    (0..n).map(|i| s[i]).collect()
}

/// Whether `th` lists exactly the box-scan counts.
pub fn matches_box(th: &ThetaSeries, oracle: &HashMap<AlgInt, u64>) -> bool {
    let listed: u64 = th.coefficients.iter().map(|c| c.count).sum();
    listed == oracle.values().sum::<u64>()
        && th
            .coefficients
            .iter()
            .all(|c| c.count == oracle.get(&c.nu).copied().unwrap_or(0))
}

//! Independent oracles: a naive box scan for theta coefficients and a
//! power-series expansion of the weight two newform of level 11.

#![allow(clippy::needless_range_loop)]

mod common;

use common::{box_scan, classes, eta_11, matches_box};
use eichler_core::brandt::{brandt, cuspidal_eigenvalues};
use eichler_core::field::{AlgInt, Field};
use eichler_core::linalg::Rat;
use eichler_core::orders::Mode;
use eichler_core::quadratic::hom_module;
use eichler_core::theta::{theta, ThetaSeries};

fn check_all_modules(d: i64, p: i64, mode: Mode, bound: i64) -> u64 {
    let field = Field::new(d).unwrap();
    let (alg, cs) = classes(&field, p, mode);
    let mut scanned = 0;
    for i in 0..cs.len() {
        for j in 0..cs.len() {
            let m = hom_module(&alg, &cs, i, j).unwrap();
            let th = theta(&field, &m, bound, false).unwrap();
            let (oracle, n) = box_scan(&alg, &m, bound);
            scanned += n;
            assert!(matches_box(&th, &oracle), "module ({i}, {j}) of ({d}, {p})");
        }
    }
    scanned
}

#[test]
fn box_scan_rational() {
    check_all_modules(1, 11, Mode::LevelP, 10);
    check_all_modules(1, 23, Mode::LevelP, 10);
}

#[test]
fn box_scan_sqrt5() {
    check_all_modules(5, 2, Mode::LevelP, 10);
    check_all_modules(5, 2, Mode::LevelOne, 10);
    check_all_modules(5, 3, Mode::LevelP, 10);
}

#[test]
fn eta_product_series() {
    let a = eta_11(12);
    assert_eq!(&a[..12], &[1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2]);
}

#[test]
fn q11_brandt_eigenvalues_match_newform() {
    let field = Field::rationals();
    let (alg, cs) = classes(&field, 11, Mode::LevelP);
    let bound = 30;
    let thetas: Vec<Vec<ThetaSeries>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| theta(&field, &hom_module(&alg, &cs, i, j).unwrap(), bound, false).unwrap())
                .collect()
        })
        .collect();
    let weights: Vec<u64> = cs.iter().map(|c| c.weight).collect();
    let f = eta_11(bound as usize);
    for q in [2i64, 3, 5, 7, 13, 17, 19, 23, 29] {
        let b = brandt(&field, &thetas, &weights, AlgInt::rational(q)).unwrap();
        let e = cuspidal_eigenvalues(&b, q + 1).unwrap();
        assert_eq!(e.roots.rational, vec![f[q as usize - 1]], "q = {q}");
    }
    // every theta difference is a multiple of the newform
    for j in 0..2 {
        let diff = thetas[1][j].difference(&thetas[0][j]).unwrap();
        let c = Rat::new(diff[1] as i128, f[0] as i128);
        for n in 1..=bound as usize {
            assert_eq!(
                Rat::from_integer(diff[n] as i128),
                c * Rat::from_integer(f[n - 1] as i128),
                "n = {n}"
            );
        }
    }
}

#[test]
fn q11_degree_one_counts() {
    let field = Field::rationals();
    let (alg, cs) = classes(&field, 11, Mode::LevelP);
    let mut diagonal = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let m = hom_module(&alg, &cs, i, j).unwrap();
            let a1 = box_scan(&alg, &m, 1).0.get(&AlgInt::ONE).copied().unwrap_or(0);
            if i == j {
                diagonal.push(a1);
            } else {
                assert_eq!(a1, 0);
            }
        }
    }
    diagonal.sort_unstable();
    assert_eq!(diagonal, vec![4, 6]);
}

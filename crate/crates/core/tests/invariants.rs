//! Structural invariants of class sets, degree forms, theta series, Brandt
//! matrices and span ranks.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use eichler_core::basis::span_rank;
use eichler_core::brandt::brandt;
use eichler_core::enumerate::Enumerator;
use eichler_core::field::{AlgInt, Field, FieldElement};
use eichler_core::orders::{
    ideal_classes, is_isomorphic, left_order, mass_formula, neighbors, reduced_discriminant, right_order,
    standard_order, IdealClass, LeftIdeal, Mode,
};
use eichler_core::quadratic::{hom_module, lattice_form, QuadraticModule};
use eichler_core::quaternion::{Quaternion, QuaternionAlgebra};
use eichler_core::theta::{theta, ThetaSeries};
use proptest::prelude::*;

struct Case {
    field: Field,
    alg: QuaternionAlgebra,
    classes: Vec<IdealClass>,
}

fn build(d: i64, p: i64, ell: i64) -> Case {
    let field = Field::new(d).unwrap();
    let alg = QuaternionAlgebra::construct(&field, p).unwrap();
    let o = standard_order(&alg).unwrap();
    let prime = field.primes_above(ell)[0].clone();
    let classes = ideal_classes(&alg, &o, &prime, mass_formula(&alg, Mode::LevelP).unwrap()).unwrap();
    Case { field, alg, classes }
}

fn sqrt5_11() -> &'static Case {
    static C: OnceLock<Case> = OnceLock::new();
    C.get_or_init(|| build(5, 11, 2))
}

fn q37() -> &'static Case {
    static C: OnceLock<Case> = OnceLock::new();
    C.get_or_init(|| build(1, 37, 2))
}

fn thetas(c: &Case, bound: i64) -> Vec<Vec<ThetaSeries>> {
    let h = c.classes.len();
    (0..h)
        .map(|i| {
            (0..h)
                .map(|j| theta(&c.field, &hom_module(&c.alg, &c.classes, i, j).unwrap(), bound, false).unwrap())
                .collect()
        })
        .collect()
}

fn weights(c: &Case) -> Vec<u64> {
    c.classes.iter().map(|k| k.weight).collect()
}

#[test]
fn neighbour_graph_is_regular_and_discriminants_agree() {
    for (c, ell) in [(sqrt5_11(), 2), (sqrt5_11(), 19), (q37(), 3)] {
        let prime = c.field.primes_above(ell)[0].clone();
        let disc = reduced_discriminant(&c.alg, &left_order(&c.alg, &c.classes[0].ideal.lattice).unwrap()).unwrap();
        for k in &c.classes {
            assert_eq!(
                neighbors(&c.alg, &k.ideal, &prime).unwrap().len() as i64,
                prime.norm + 1
            );
            let l = left_order(&c.alg, &k.ideal.lattice).unwrap();
            let r = right_order(&c.alg, &k.ideal.lattice).unwrap();
            assert_eq!(reduced_discriminant(&c.alg, &l).unwrap(), disc);
            assert_eq!(reduced_discriminant(&c.alg, &r).unwrap(), disc);
        }
    }
}

#[test]
fn isomorphism_is_an_equivalence() {
    let c = sqrt5_11();
    let prime = c.field.primes_above(3)[0].clone();
    let mut sample: Vec<LeftIdeal> = c.classes.iter().map(|k| k.ideal.clone()).collect();
    for k in c.classes.iter().take(2) {
        sample.extend(neighbors(&c.alg, &k.ideal, &prime).unwrap().into_iter().take(3));
    }
    let n = sample.len();
    let iso: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| is_isomorphic(&c.alg, &sample[a], &sample[b]).unwrap().is_some())
                .collect()
        })
        .collect();
    for a in 0..n {
        assert!(iso[a][a]);
        for b in 0..n {
            assert_eq!(iso[a][b], iso[b][a]);
            for e in 0..n {
                if iso[a][b] && iso[b][e] {
                    assert!(iso[a][e]);
                }
            }
        }
    }
    // class representatives are pairwise non-isomorphic
    let h = c.classes.len();
    for a in 0..h {
        for b in 0..h {
            assert_eq!(iso[a][b], a == b);
        }
    }
}

#[test]
fn classes_do_not_depend_on_auxiliary_prime() {
    let a = sqrt5_11();
    let b = build(5, 11, 3);
    assert_eq!(a.classes.len(), b.classes.len());
    for x in &a.classes {
        let hits: Vec<&IdealClass> = b
            .classes
            .iter()
            .filter(|y| is_isomorphic(&a.alg, &x.ideal, &y.ideal).unwrap().is_some())
            .collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].weight, x.weight);
    }
}

fn module_element(alg: &QuaternionAlgebra, m: &QuadraticModule, c: &[i64]) -> Quaternion {
    m.lattice
        .z_basis(alg)
        .iter()
        .zip(c)
        .fold(Quaternion::zero(), |acc, (b, &k)| {
            acc.add(&b.scale_rat((k as i128).into()))
        })
}

fn q_value(alg: &QuaternionAlgebra, n: AlgInt, x: &Quaternion) -> FieldElement {
    alg.field().el_div(&alg.reduced_norm(x), &n.to_element())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_form_is_symmetric_bilinear(i in 0usize..4, j in 0usize..4, x in coeffs(), y in coeffs(), z in coeffs()) {
        let c = sqrt5_11();
        let (alg, f) = (&c.alg, &c.field);
        let m = hom_module(alg, &c.classes, i, j).unwrap();
        let n = m.normalizer;
        let (x, y, z) = (module_element(alg, &m, &x), module_element(alg, &m, &y), module_element(alg, &m, &z));
        let q = |v: &Quaternion| q_value(alg, n, v);
        let b = |u: &Quaternion, v: &Quaternion| q(&u.add(v)) - q(u) - q(v);
        prop_assert_eq!(b(&x, &y), b(&y, &x));
        prop_assert_eq!(b(&x.add(&z), &y), b(&x, &y) + b(&z, &y));
        prop_assert_eq!(b(&x, &x), q(&x) + q(&x));
        prop_assert_eq!(b(&x, &y), f.el_div(&alg.reduced_trace(&alg.mul(&x, &alg.conjugate(&y))), &n.to_element()));
        prop_assert!(q(&x).to_alg_int().is_some());
    }

    #[test]
    fn degree_is_multiplicative(i in 0usize..4, j in 0usize..4, k in 0usize..4, x in coeffs(), y in coeffs()) {
        let c = sqrt5_11();
        let (alg, f) = (&c.alg, &c.field);
        let mij = hom_module(alg, &c.classes, i, j).unwrap();
        let mjk = hom_module(alg, &c.classes, j, k).unwrap();
        let mik = hom_module(alg, &c.classes, i, k).unwrap();
        let (x, y) = (module_element(alg, &mij, &x), module_element(alg, &mjk, &y));
        // y x lies in n(I_j) M_ik
        let nj = c.classes[j].ideal.norm.to_element();
        let yx = alg.scale(&alg.mul(&y, &x), &f.el_inv(&nj));
        prop_assert!(mik.lattice.contains(alg, &yx));
        // Q_ik(yx / n_j) = u Q_jk(y) Q_ij(x) with u a totally positive unit
        let u = f.el_div(
            &f.el_mul(&mij.normalizer.to_element(), &mjk.normalizer.to_element()),
            &f.el_mul(&mik.normalizer.to_element(), &f.el_mul(&nj, &nj)),
        );
        prop_assert!(f.is_totally_positive(&u));
        prop_assert_eq!(f.el_norm(&u), 1.into());
        let lhs = q_value(alg, mik.normalizer, &yx);
        let rhs = f.el_mul(&u, &f.el_mul(&q_value(alg, mjk.normalizer, &y), &q_value(alg, mij.normalizer, &x)));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn unit_change_of_normalizer_permutes_coefficients() {
    let c = sqrt5_11();
    let f = &c.field;
    // w^2 = w + 1 is a totally positive unit
    let u = f.mul(f.omega(), f.omega());
    assert_eq!(f.norm(u), 1);
    for (i, j) in [(0, 0), (1, 2), (3, 1)] {
        let m = hom_module(&c.alg, &c.classes, i, j).unwrap();
        let bound = 24;
        let base = Enumerator::new(&m.form).value_counts(bound, false).unwrap();
        let scaled = f.mul(u, m.normalizer).to_element();
        let form = lattice_form(&c.alg, &m.lattice, &scaled).unwrap();
        let moved = Enumerator::new(&form).value_counts(bound, false).unwrap();
        let mut compared = 0;
        for (&nu, &count) in &moved {
            let back = f.mul(u, nu);
            if f.trace(back) <= bound {
                assert_eq!(base.get(&back).copied().unwrap_or(0), count, "nu = {nu}");
                compared += 1;
            }
        }
        for (&nu, &count) in &base {
            let image = f.div_exact(nu, u).unwrap();
            if f.trace(image) <= bound {
                assert_eq!(moved.get(&image).copied().unwrap_or(0), count);
            }
        }
        assert!(compared > 5);
    }
}

#[test]
fn parity_and_conjugation() {
    let c = sqrt5_11();
    for i in 0..c.classes.len() {
        let m = hom_module(&c.alg, &c.classes, i, i).unwrap();
        let th = theta(&c.field, &m, 12, false).unwrap();
        assert_eq!(th.coefficients[0].count, 1);
        assert!(th.coefficients[1..].iter().all(|k| k.count % 2 == 0));
        let conj = lattice_form(&c.alg, &m.lattice.conjugate(&c.alg), &m.normalizer.to_element()).unwrap();
        let counts = Enumerator::new(&conj).value_counts(12, false).unwrap();
        for k in &th.coefficients {
            assert_eq!(counts.get(&k.nu).copied().unwrap_or(0), k.count);
        }
    }
}

#[test]
fn weighted_theta_sum_is_row_independent() {
    for c in [sqrt5_11(), q37()] {
        let th = thetas(c, 12);
        let w = weights(c);
        let l = w.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
        let sums: Vec<Vec<u64>> = th
            .iter()
            .map(|row| {
                (0..row[0].coefficients.len())
                    .map(|n| {
                        row.iter()
                            .zip(&w)
                            .map(|(t, &wj)| t.coefficients[n].count * (l / wj))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        assert!(sums.iter().all(|s| *s == sums[0]));
    }
}

/// Sum of divisors of m prime to p.
fn sigma_prime_to(m: i64, p: i64) -> i64 {
    (1..=m).filter(|d| m % d == 0 && d % p != 0).sum()
}

#[test]
fn brandt_row_sums_and_symmetry_for_all_indices() {
    let c = q37();
    let th = thetas(c, 40);
    let w = weights(c);
    let h = w.len();
    for m in 1..=40 {
        let b = brandt(&c.field, &th, &w, AlgInt::rational(m)).unwrap();
        for i in 0..h {
            assert_eq!(b.entries[i].iter().sum::<i64>(), sigma_prime_to(m, 37), "m = {m}");
            for j in 0..h {
                assert_eq!(w[j] as i64 * b.entries[i][j], w[i] as i64 * b.entries[j][i]);
            }
        }
    }
}

#[test]
fn span_rank_is_monotone_and_settles() {
    let c = q37();
    let full = thetas(c, 30);
    let mut last = 0;
    for bound in 1..=30 {
        let rank = span_rank(&c.field, &thetas(c, bound), Some(2)).unwrap().rank;
        assert!(rank >= last);
        last = rank;
    }
    let report = span_rank(&c.field, &full, Some(2)).unwrap();
    assert_eq!(report.rank, 2);
    assert!(report.stable);
}

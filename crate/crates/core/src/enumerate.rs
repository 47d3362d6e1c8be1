//! Exact enumeration of lattice vectors of bounded trace for an O_L-valued
//! totally positive quadratic form.
//!
//! The form is given on a Z-basis e_1..e_n (n = 4g) by Q(e_k) and the
//! polar values B(e_k, e_l) = Q(e_k + e_l) - Q(e_k) - Q(e_l). Vectors are
//! enumerated on the rational positive definite form Tr_{L/Q}(Q(x)) by
//! Fincke-Pohst after an LLL change of basis. Floating point only decides the
//! search intervals: the radius carries a slack of one and every candidate is
//! accepted or rejected by exact evaluation of Q.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{AlgInt, Field};
use crate::linalg::{congruent_gram, lll_transform};

/// Default cap on the number of lattice points visited by one enumeration.
pub const DEFAULT_POINT_CAP: u64 = 200_000_000;

#[derive(Clone, Debug)]
pub struct OlForm {
    field: Field,
    diag: Vec<AlgInt>,
    /// Symmetric matrix of polar values; the diagonal is unused.
    polar: Vec<Vec<AlgInt>>,
}

impl OlForm {
    pub fn new(field: &Field, diag: Vec<AlgInt>, polar: Vec<Vec<AlgInt>>) -> OlForm {
        OlForm {
            field: field.clone(),
            diag,
            polar,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self, c: &[i64]) -> AlgInt {
        let n = self.dim();
        let mut a = 0i64;
        let mut b = 0i64;
        for k in 0..n {
            if c[k] == 0 {
                continue;
            }
            let ck = c[k];
            a += ck * ck * self.diag[k].a;
            b += ck * ck * self.diag[k].b;
            for l in k + 1..n {
                if c[l] != 0 {
                    let m = ck * c[l];
                    a += m * self.polar[k][l].a;
                    b += m * self.polar[k][l].b;
                }
            }
        }
        AlgInt::new(a, b)
    }

    /// Gram matrix G of the trace form: x^T G x = 2 Tr(Q(x)).
    pub fn trace_gram(&self) -> Vec<Vec<i128>> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        if k == l {
                            2 * self.field.trace(self.diag[k]) as i128
                        } else {
                            self.field.trace(self.polar[k][l]) as i128
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The same form on the basis e'_k = sum_l u[k][l] e_l.
    pub fn transformed(&self, u: &[Vec<i128>]) -> OlForm {
        let n = self.dim();
        let rows: Vec<Vec<i64>> = u
            .iter()
            .map(|r| r.iter().map(|&v| i64::try_from(v).expect("transform entry")).collect())
            .collect();
        let diag: Vec<AlgInt> = rows.iter().map(|r| self.value(r)).collect();
        let mut polar = vec![vec![AlgInt::ZERO; n]; n];
        for k in 0..n {
            for l in k + 1..n {
                let s: Vec<i64> = rows[k].iter().zip(&rows[l]).map(|(x, y)| x + y).collect();
                let v = self.value(&s) - diag[k] - diag[l];
                polar[k][l] = v;
                polar[l][k] = v;
            }
        }
        OlForm {
            field: self.field.clone(),
            diag,
            polar,
        }
    }
}

/// A form prepared for repeated enumeration.
pub struct Enumerator {
    reduced: OlForm,
    transform: Vec<Vec<i64>>,
    chol: Vec<Vec<f64>>,
    cap: u64,
}

impl Enumerator {
    pub fn new(form: &OlForm) -> Enumerator {
        let gram = form.trace_gram();
        let u = lll_transform(&gram);
        let reduced = form.transformed(&u);
        let g = congruent_gram(&gram, &u);
        debug_assert_eq!(g, reduced.trace_gram());
        let chol = cholesky(&g);
        Enumerator {
            reduced,
            transform: u.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect(),
            chol,
            cap: DEFAULT_POINT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn to_original(&self, x: &[i64]) -> Vec<i64> {
        let n = x.len();
        (0..n)
            .map(|l| (0..n).map(|k| x[k] * self.transform[k][l]).sum())
            .collect()
    }

    /// All vectors with Tr(Q(x)) <= bound, as coordinates in the original
    /// basis together with Q(x), in a deterministic order.
    pub fn short_vectors(&self, bound: i64) -> Result<Vec<(Vec<i64>, AlgInt)>> {
        let field = self.reduced.field().clone();
        let chunks = self.run(bound, false, |x, v, acc: &mut Vec<(Vec<i64>, AlgInt)>| {
            if field.trace(v) <= bound {
                acc.push((x.to_vec(), v));
            }
        })?;
        Ok(chunks
            .into_iter()
            .flatten()
            .map(|(x, v)| (self.to_original(&x), v))
            .collect())
    }

    /// Representation numbers: value -> #{x : Q(x) = value, Tr(Q(x)) <= bound}.
    pub fn value_counts(&self, bound: i64, parallel: bool) -> Result<HashMap<AlgInt, u64>> {
        let field = self.reduced.field().clone();
        let chunks = self.run(bound, parallel, |_, v, acc: &mut HashMap<AlgInt, u64>| {
            if field.trace(v) <= bound {
                *acc.entry(v).or_insert(0) += 1;
            }
        })?;
        let mut total = HashMap::new();
        for chunk in chunks {
            for (k, v) in chunk {
                *total.entry(k).or_insert(0) += v;
            }
        }
        Ok(total)
    }

    /// Splits the search tree at the last coordinate and folds each subtree
    /// into its own accumulator; the chunk order is the coordinate order.
    fn run<A, F>(&self, bound: i64, parallel: bool, visit: F) -> Result<Vec<A>>
    where
        A: Default + Send,
        F: Fn(&[i64], AlgInt, &mut A) + Sync,
    {
        let n = self.reduced.dim();
        let budget = (2 * bound) as f64 + 1.0;
        let top = n - 1;
        let q = &self.chol;
        let r = (budget / q[top][top]).sqrt();
        let hi = (r + 1e-9).floor() as i64;
        let visited = AtomicU64::new(0);
        let subtree = |xt: i64| -> Result<A> {
            let mut acc = A::default();
            let mut x = vec![0i64; n];
            x[top] = xt;
            let rem = budget - q[top][top] * (xt as f64) * (xt as f64);
            if rem >= 0.0 {
                if top == 0 {
                    visited.fetch_add(1, Ordering::Relaxed);
                    let v = self.reduced.value(&x);
                    visit(&x, v, &mut acc);
                } else {
                    self.descend(top - 1, &mut x, rem, &visited, &visit, &mut acc)?;
                }
            }
            Ok(acc)
        };
        let values: Vec<i64> = (-hi..=hi).collect();
        let out: Vec<Result<A>> = if parallel {
            values.par_iter().map(|&xt| subtree(xt)).collect()
        } else {
            values.iter().map(|&xt| subtree(xt)).collect()
        };
        out.into_iter().collect()
    }

    fn descend<A, F>(
        &self,
        i: usize,
        x: &mut [i64],
        remaining: f64,
        visited: &AtomicU64,
        visit: &F,
        acc: &mut A,
    ) -> Result<()>
    where
        F: Fn(&[i64], AlgInt, &mut A),
    {
        let q = &self.chol;
        let n = x.len();
        let mut center = 0.0;
        for j in i + 1..n {
            center -= q[i][j] * x[j] as f64;
        }
        let r = (remaining.max(0.0) / q[i][i]).sqrt();
        let lo = (center - r - 1e-9).ceil() as i64;
        let hi = (center + r + 1e-9).floor() as i64;
        for xi in lo..=hi {
            let d = xi as f64 - center;
            let rem = remaining - q[i][i] * d * d;
            if rem < 0.0 {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                let count = visited.fetch_add(1, Ordering::Relaxed);
                if count >= self.cap {
                    return Err(Error::BoundTooLarge(self.cap));
                }
                let v = self.reduced.value(x);
                visit(x, v, acc);
            } else {
                self.descend(i - 1, x, rem, visited, visit, acc)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

/// q with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
fn cholesky(g: &[Vec<i128>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    for i in 0..n {
        assert!(q[i][i] > 0.0, "trace form is not positive definite");
        for j in 0..i {
            q[i][j] = 0.0;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_of_squares(n: usize) -> OlForm {
        let f = Field::rationals();
        OlForm::new(&f, vec![AlgInt::ONE; n], vec![vec![AlgInt::ZERO; n]; n])
    }

    #[test]
    fn sum_of_four_squares_counts() {
        // r_4(m) = 8 * sum of divisors of m not divisible by 4
        let e = Enumerator::new(&sum_of_squares(4));
        let counts = e.value_counts(10, false).unwrap();
        let r4 = |m: i64| -> u64 { 8 * (1..=m).filter(|d| m % d == 0 && d % 4 != 0).sum::<i64>() as u64 };
        for m in 1..=10 {
            assert_eq!(counts[&AlgInt::rational(m)], r4(m), "m={m}");
        }
        assert_eq!(counts[&AlgInt::ZERO], 1);
    }

    #[test]
    fn parallel_matches_serial() {
        let e = Enumerator::new(&sum_of_squares(4));
        let a = e.value_counts(12, false).unwrap();
        let b = e.value_counts(12, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn skewed_basis_is_reduced_exactly() {
        // x^2 + (x + 7y)^2 written on a skewed basis
        let f = Field::rationals();
        let form = OlForm::new(
            &f,
            vec![AlgInt::rational(2), AlgInt::rational(49)],
            vec![
                vec![AlgInt::ZERO, AlgInt::rational(14)],
                vec![AlgInt::rational(14), AlgInt::ZERO],
            ],
        );
        let e = Enumerator::new(&form);
        let vs = e.short_vectors(5).unwrap();
        for (x, v) in &vs {
            assert_eq!(form.value(x), *v);
        }
        // values of u^2 + w^2 with u = x, w = x + 7 y: all (u, w) with u = w mod 7
        let expect = (-3i64..=3)
            .flat_map(|u| (-3i64..=3).map(move |w| (u, w)))
            .filter(|(u, w)| (w - u).rem_euclid(7) == 0 && u * u + w * w <= 5)
            .count();
        assert_eq!(vs.len(), expect);
    }

    #[test]
    fn cap_is_enforced() {
        let e = Enumerator::new(&sum_of_squares(4)).with_cap(10);
        assert!(matches!(e.value_counts(10, false), Err(Error::BoundTooLarge(10))));
    }

    #[test]
    fn real_quadratic_trace_form() {
        // Q(x1, x2) = x1^2 + x2^2 over O_L, L = Q(sqrt 5), on the Z-basis
        // (e1, w e1, e2, w e2)
        let f = Field::new(5).unwrap();
        let w = f.omega();
        let w2 = f.mul(w, w);
        let diag = vec![AlgInt::ONE, w2, AlgInt::ONE, w2];
        let mut polar = vec![vec![AlgInt::ZERO; 4]; 4];
        // B(e1, w e1) = 2 w
        polar[0][1] = AlgInt::new(0, 2);
        polar[1][0] = AlgInt::new(0, 2);
        polar[2][3] = AlgInt::new(0, 2);
        polar[3][2] = AlgInt::new(0, 2);
        let form = OlForm::new(&f, diag, polar);
        let g = form.trace_gram();
        // Tr(1) = 2, Tr(w^2) = Tr(w + 1) = 3, Tr(2w) = 2
        assert_eq!(g[0], vec![4, 2, 0, 0]);
        assert_eq!(g[1], vec![2, 6, 0, 0]);
        let counts = Enumerator::new(&form).value_counts(4, false).unwrap();
        // Q = 1: (+-1, 0), (0, +-1) and unit multiples of norm 1 squares: only +-1
        assert_eq!(counts[&AlgInt::ONE], 4);
        // Q = 2 = 1 + 1: 4 ways; also w^2 + w'^2-type sums are excluded by exact value
        assert_eq!(counts[&AlgInt::rational(2)], 4);
    }
}

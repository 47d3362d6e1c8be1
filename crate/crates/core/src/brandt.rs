//! Brandt matrices b_ij(m) = a_m(theta_ij) / (2 w_j), the identities of
//! the Hecke algebra they satisfy, and their cuspidal eigenvalues.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgInt, Field, PrimeIdeal};
use crate::poly::{charpoly, real_roots, Poly, RealRoots};
use crate::theta::ThetaSeries;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrandtMatrix {
    /// Canonical generator of the index ideal.
    pub ideal: AlgInt,
    pub entries: Matrix,
}

/// `thetas[i][j]` is the series of M_ij.
pub fn brandt(field: &Field, thetas: &[Vec<ThetaSeries>], weights: &[u64], m: AlgInt) -> Result<BrandtMatrix> {
    let h = weights.len();
    let mut entries = vec![vec![0i64; h]; h];
    for i in 0..h {
        for j in 0..h {
            let a = thetas[i][j].coefficient(field, m)?;
            let d = 2 * weights[j];
            if a % d != 0 {
                return Err(Error::Verification(format!(
                    "a_{m}(theta_{i}{j}) = {a} is not divisible by 2 w_{j} = {d}"
                )));
            }
            entries[i][j] = (a / d) as i64;
        }
    }
    Ok(BrandtMatrix { ideal: m, entries })
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_lin(a: &Matrix, b: &Matrix, s: i64) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - s * v).collect())
        .collect()
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeCheck {
    pub identity: String,
    pub ideals: Vec<AlgInt>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeReport {
    pub checks: Vec<HeckeCheck>,
    /// Identities not checked because an index exceeds the trace bound.
    pub skipped: Vec<String>,
    pub passed: bool,
}

/// Sum of N(d) over the divisors d of the ideal generated by `m`, for m
/// given with its factorization into primes (with repetition).
fn sigma(primes: &[&PrimeIdeal]) -> i64 {
    let mut groups: Vec<(AlgInt, i64, u32)> = Vec::new();
    for p in primes {
        match groups.iter_mut().find(|g| g.0 == p.generator) {
            Some(g) => g.2 += 1,
            None => groups.push((p.generator, p.norm, 1)),
        }
    }
    groups
        .iter()
        .map(|&(_, n, e)| (0..=e).map(|k| n.pow(k)).sum::<i64>())
        .product()
}

/// Commutation, multiplicativity, prime-power recursion, Eisenstein row
/// sums and weighted symmetry for the Brandt matrices at `primes`.
pub fn hecke_property_suite(
    field: &Field,
    thetas: &[Vec<ThetaSeries>],
    weights: &[u64],
    primes: &[PrimeIdeal],
) -> Result<HeckeReport> {
    let h = weights.len();
    let bound = thetas[0][0].bound;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let get = |m: AlgInt| -> Result<Option<BrandtMatrix>> {
        if field.trace(m) > bound {
            Ok(None)
        } else {
            brandt(field, thetas, weights, m).map(Some)
        }
    };
    let mut push = |identity: &str, ideals: Vec<AlgInt>, passed: bool| {
        checks.push(HeckeCheck {
            identity: identity.to_string(),
            ideals,
            passed,
        });
    };
    let one = get(AlgInt::ONE)?.expect("trace of 1 is within any bound");
    push("unit", vec![AlgInt::ONE], one.entries == identity(h));
    let mut mats: Vec<(PrimeIdeal, BrandtMatrix)> = Vec::new();
    for q in primes {
        match get(q.generator)? {
            Some(b) => mats.push((q.clone(), b)),
            None => skipped.push(format!("B({}) exceeds bound {bound}", q.generator)),
        }
    }
    let row_sums_ok = |b: &BrandtMatrix, s: i64| b.entries.iter().all(|r| r.iter().sum::<i64>() == s);
    let symmetric = |b: &BrandtMatrix| {
        (0..h).all(|i| (0..h).all(|j| weights[j] as i64 * b.entries[i][j] == weights[i] as i64 * b.entries[j][i]))
    };
    for (q, b) in &mats {
        push("row_sum", vec![q.generator], row_sums_ok(b, q.norm + 1));
        push("weighted_symmetry", vec![q.generator], symmetric(b));
        push(
            "nonnegative",
            vec![q.generator],
            b.entries.iter().flatten().all(|&v| v >= 0),
        );
        // prime powers
        let mut prev = one.entries.clone();
        let mut cur = b.entries.clone();
        let mut power = q.generator;
        let mut factors = vec![q];
        loop {
            power = field.canonical_product(power, q.generator);
            factors.push(q);
            let Some(next) = get(power)? else {
                skipped.push(format!("B(({})^{}) exceeds bound {bound}", q.generator, factors.len()));
                break;
            };
            let expected = mat_lin(&mat_mul(&cur, &b.entries), &prev, q.norm);
            push(
                "prime_power_recursion",
                vec![q.generator, power],
                next.entries == expected,
            );
            push("row_sum", vec![power], row_sums_ok(&next, sigma(&factors)));
            prev = cur;
            cur = next.entries;
        }
    }
    for (x, (q1, b1)) in mats.iter().enumerate() {
        for (q2, b2) in &mats[x + 1..] {
            let ab = mat_mul(&b1.entries, &b2.entries);
            push(
                "commutation",
                vec![q1.generator, q2.generator],
                ab == mat_mul(&b2.entries, &b1.entries),
            );
            if q1.generator == q2.generator {
                continue;
            }
            let prod = field.canonical_product(q1.generator, q2.generator);
            match get(prod)? {
                Some(b12) => {
                    push("multiplicativity", vec![q1.generator, q2.generator], b12.entries == ab);
                    push("row_sum", vec![prod], row_sums_ok(&b12, sigma(&[q1, q2])));
                }
                None => skipped.push(format!("B(({})({})) exceeds bound {bound}", q1.generator, q2.generator)),
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(HeckeReport {
        checks,
        skipped,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Eigenvalues {
    pub ideal: AlgInt,
    /// Characteristic polynomial, constant term first.
    pub charpoly: Vec<String>,
    /// Characteristic polynomial on the complement of the Eisenstein line.
    pub cuspidal_charpoly: Vec<String>,
    pub roots: RealRoots,
}

fn render(p: &Poly) -> Result<Vec<String>> {
    Ok(p.integer_coefficients()
        .ok_or_else(|| Error::Verification("characteristic polynomial is not integral".into()))?
        .iter()
        .map(|c| c.to_string())
        .collect())
}

/// Eigenvalues of B(q) after removing the Eisenstein eigenvalue N(q) + 1.
pub fn cuspidal_eigenvalues(b: &BrandtMatrix, eisenstein: i64) -> Result<Eigenvalues> {
    let cp = charpoly(&b.entries);
    let lin = Poly::from_ints(&[-eisenstein, 1]);
    let (cusp, r) = cp.div_rem(&lin);
    if !r.is_zero() {
        return Err(Error::Verification(format!(
            "{eisenstein} is not an eigenvalue of B({})",
            b.ideal
        )));
    }
    Ok(Eigenvalues {
        ideal: b.ideal,
        charpoly: render(&cp)?,
        cuspidal_charpoly: render(&cusp)?,
        roots: real_roots(&cusp, 1e-9),
    })
}

//! Rank of the span of theta differences, the classical genus oracle and
//! the property checks used for real quadratic fields.

use serde::Serialize;

use crate::brandt::BrandtMatrix;
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field, PrimeIdeal};
use crate::linalg::{integer_rank, Rat};
use crate::theta::ThetaSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub classes: usize,
    pub bound: i64,
    pub rank: usize,
    pub expected: Option<usize>,
    /// `Some(rank == expected)` when an expected dimension is known.
    pub verdict: Option<bool>,
    pub pivots: Vec<AlgInt>,
    /// Smallest trace at which the rank reaches its final value.
    pub stabilized_at: i64,
    /// The rank did not change over the upper half of the trace range.
    pub stable: bool,
}

/// One row theta_ij - theta_1j for every i >= 2 and every j.
fn difference_rows(thetas: &[Vec<ThetaSeries>]) -> Result<Vec<Vec<i64>>> {
    let h = thetas.len();
    let mut rows = Vec::new();
    for i in 1..h {
        for j in 0..h {
            rows.push(thetas[i][j].difference(&thetas[0][j])?);
        }
    }
    Ok(rows)
}

/// Exact rank of the differences theta_ij - theta_1j, with the pivot
/// coefficients found by left-to-right elimination.
pub fn span_rank(field: &Field, thetas: &[Vec<ThetaSeries>], expected: Option<usize>) -> Result<SpanReport> {
    let h = thetas.len();
    let bound = thetas[0][0].bound;
    let rows = difference_rows(thetas)?;
    let (rank, pivot_cols) = if rows.is_empty() {
        (0, Vec::new())
    } else {
        integer_rank(&rows)
    };
    let index: Vec<AlgInt> = thetas[0][0].coefficients.iter().map(|c| c.nu).collect();
    let pivots: Vec<AlgInt> = pivot_cols.iter().map(|&c| index[c]).collect();
    let stabilized_at = pivots.last().map_or(0, |&nu| field.trace(nu));
    Ok(SpanReport {
        classes: h,
        bound,
        rank,
        expected,
        verdict: expected.map(|e| e == rank),
        pivots,
        stabilized_at,
        stable: 2 * stabilized_at <= bound,
    })
}

/// dim S_2(Gamma_0(p)), the genus of X_0(p), for a prime p.
pub fn classical_dimension(p: i64) -> usize {
    let kron = |a: i64| -> i64 {
        if p == 2 {
            // (-1 | 2) = 1 is irrelevant here; (-3 | 2) = -1
            if a == -3 {
                -1
            } else {
                0
            }
        } else {
            crate::field::legendre(a, p)
        }
    };
    let nu2 = if p == 2 { 1 } else { 1 + kron(-1) };
    let nu3 = if p == 3 { 1 } else { 1 + kron(-3) };
    let g = Rat::from_integer(1) + Rat::new((p + 1) as i128, 12)
        - Rat::new(nu2 as i128, 4)
        - Rat::new(nu3 as i128, 3)
        - Rat::from_integer(1);
    assert!(g.is_integer(), "genus formula produced {g}");
    g.to_integer() as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub rank: usize,
    /// H - 1 minus the corank forced by coincident difference rows.
    pub rank_upper_bound: usize,
    /// sum_k b_ik(q) theta_kj = a_{pi nu}(theta_ij) + N(q) a_{nu / pi}(theta_ij)
    /// wherever all coefficients are known.
    pub hecke_relation: bool,
    /// The difference span is mapped into itself by every T_q.
    pub hecke_stable: bool,
    /// sum_j theta_ij / w_j does not depend on i.
    pub eisenstein_independent: bool,
    pub discrepancies: Vec<String>,
}

/// Property checks in lieu of a dimension oracle for real quadratic fields.
pub fn hilbert_consistency(
    field: &Field,
    thetas: &[Vec<ThetaSeries>],
    weights: &[u64],
    brandt: &[(PrimeIdeal, BrandtMatrix)],
) -> Result<HilbertReport> {
    let h = thetas.len();
    let bound = thetas[0][0].bound;
    let index: Vec<AlgInt> = thetas[0][0].coefficients.iter().map(|c| c.nu).collect();
    let mut discrepancies = Vec::new();

    let rows = difference_rows(thetas)?;
    let rank = if rows.is_empty() { 0 } else { integer_rank(&rows).0 };
    let mut distinct: Vec<Vec<u64>> = Vec::new();
    for row in thetas {
        let flat: Vec<u64> = row.iter().flat_map(|t| t.counts()).collect();
        if !distinct.contains(&flat) {
            distinct.push(flat);
        }
    }
    let rank_upper_bound = distinct.len().saturating_sub(1);
    if rank > rank_upper_bound {
        discrepancies.push(format!("rank {rank} exceeds {rank_upper_bound}"));
    }

    // Eisenstein independence, compared as rationals via the common
    // denominator lcm(w_j)
    let l = weights.iter().fold(1u64, |a, &w| num_integer::lcm(a, w));
    let weighted = |i: usize| -> Vec<u64> {
        (0..index.len())
            .map(|n| {
                (0..h)
                    .map(|j| thetas[i][j].coefficients[n].count * (l / weights[j]))
                    .sum()
            })
            .collect()
    };
    let base = weighted(0);
    let mut eisenstein_independent = true;
    for i in 1..h {
        if weighted(i) != base {
            eisenstein_independent = false;
            discrepancies.push(format!("weighted theta sum differs for class {i}"));
        }
    }

    let mut hecke_relation = true;
    let mut hecke_stable = true;
    for (q, b) in brandt {
        let pi = q.generator;
        // coefficients nu with both pi nu and nu / pi within the bound; the
        // trace of nu / pi can exceed that of nu when g = 2
        let cols: Vec<usize> = (0..index.len())
            .filter(|&n| {
                field.trace(field.mul(pi, index[n])) <= bound
                    && field.div_exact(index[n], pi).is_none_or(|x| field.trace(x) <= bound)
            })
            .collect();
        let lookup = |t: &ThetaSeries, nu: AlgInt| -> Result<u64> { t.coefficient(field, nu) };
        let hecke = |t: &ThetaSeries, nu: AlgInt| -> Result<i64> {
            let up = lookup(t, field.mul(pi, nu))? as i64;
            let down = match field.div_exact(nu, pi) {
                Some(x) if nu.is_zero() || field.is_totally_positive(&x.to_element()) => lookup(t, x)? as i64,
                _ => 0,
            };
            Ok(up + q.norm * down)
        };
        for i in 0..h {
            for j in 0..h {
                for &n in &cols {
                    let lhs: i64 = (0..h)
                        .map(|k| b.entries[i][k] * thetas[k][j].coefficients[n].count as i64)
                        .sum();
                    let rhs = hecke(&thetas[i][j], index[n])?;
                    if lhs != rhs {
                        if hecke_relation {
                            discrepancies.push(format!(
                                "Hecke relation at {pi} fails for ({i}, {j}) at nu = {}",
                                index[n]
                            ));
                        }
                        hecke_relation = false;
                    }
                }
            }
        }
        // span stability on the columns where T_q is computable
        let mut span: Vec<Vec<i64>> = Vec::new();
        let mut images: Vec<(usize, usize, Vec<i64>)> = Vec::new();
        for i in 1..h {
            for j in 0..h {
                let d = thetas[i][j].difference(&thetas[0][j])?;
                span.push(cols.iter().map(|&n| d[n]).collect());
                let image = cols
                    .iter()
                    .map(|&n| Ok(hecke(&thetas[i][j], index[n])? - hecke(&thetas[0][j], index[n])?))
                    .collect::<Result<Vec<i64>>>()?;
                images.push((i, j, image));
            }
        }
        if span.is_empty() || cols.is_empty() {
            continue;
        }
        let base_rank = integer_rank(&span).0;
        for (i, j, image) in images {
            let mut aug = span.clone();
            aug.push(image);
            if integer_rank(&aug).0 != base_rank {
                hecke_stable = false;
                discrepancies.push(format!("T_{pi} maps theta_{i}{j} - theta_0{j} out of the span"));
            }
        }
    }
    if h == 0 {
        return Err(Error::Verification("no classes".into()));
    }
    Ok(HilbertReport {
        rank,
        rank_upper_bound,
        hecke_relation,
        hecke_stable,
        eisenstein_independent,
        discrepancies,
    })
}

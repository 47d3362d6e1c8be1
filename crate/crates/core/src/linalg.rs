//! Exact integer and rational linear algebra: Hermite normal form, full-rank
//! Z-lattices in Q^n, rational inverses, fraction-free rank, and an LLL
//! reduction driven by an exact integer Gram matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// Row-style Hermite normal form. Rows span the lattice; the result has
/// strictly increasing pivot columns, positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
///
/// Runs in i128 and repeats the elimination over BigInt if an intermediate
/// entry overflows; the reduced result always fits.
pub fn hnf(rows: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    if let Some(h) = hnf_generic::<i128>(rows.clone(), ncols) {
        return h;
    }
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    hnf_generic::<BigInt>(big, ncols)
        .expect("BigInt arithmetic does not overflow")
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| i128::try_from(v).expect("HNF entry exceeds i128"))
                .collect()
        })
        .collect()
}

trait HnfScalar: Clone + Ord + Zero + Signed {
    fn div_floor_checked(&self, other: &Self) -> Option<Self>;
    /// `self - q * v`, `None` on overflow.
    fn sub_mul_checked(&self, q: &Self, v: &Self) -> Option<Self>;
}

impl HnfScalar for i128 {
    fn div_floor_checked(&self, other: &Self) -> Option<Self> {
        self.checked_div_euclid(*other)
    }
    fn sub_mul_checked(&self, q: &Self, v: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*v)?)
    }
}

impl HnfScalar for BigInt {
    fn div_floor_checked(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_mod_floor(other);
        // euclidean division for negative divisors
        Some(if other.is_negative() && !r.is_zero() { q + 1 } else { q })
    }
    fn sub_mul_checked(&self, q: &Self, v: &Self) -> Option<Self> {
        Some(self - q * v)
    }
}

fn hnf_generic<T: HnfScalar>(mut rows: Vec<Vec<T>>, ncols: usize) -> Option<Vec<Vec<T>>> {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs());
            let Some(pi) = pivot else { break };
            rows.swap(r, pi);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor_checked(&rows[r][c])?;
                    if !q.is_zero() {
                        let (head, tail) = rows.split_at_mut(i);
                        sub_scaled(&mut tail[0], &head[r], &q)?;
                    }
                    if !rows[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -v.clone();
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor_checked(&rows[r][c])?;
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                sub_scaled(&mut head[i], &tail[0], &q)?;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    Some(rows)
}

fn sub_scaled<T: HnfScalar>(target: &mut [T], row: &[T], q: &T) -> Option<()> {
    for (t, v) in target.iter_mut().zip(row) {
        *t = t.sub_mul_checked(q, v)?;
    }
    Some(())
}

/// A Z-lattice in Q^n stored as `basis / denom` with `basis` in Hermite
/// normal form and `denom` minimal. Equal lattices have equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZLattice {
    pub denominator: i128,
    pub basis: Vec<Vec<i128>>,
}

impl ZLattice {
    pub fn from_rows(rows: &[Vec<Rat>], dim: usize) -> ZLattice {
        let mut den: i128 = 1;
        for row in rows {
            debug_assert_eq!(row.len(), dim);
            for v in row {
                den = den.lcm(v.denom());
            }
        }
        let int_rows: Vec<Vec<i128>> = rows
            .iter()
            .map(|row| row.iter().map(|v| (v * den).to_integer()).collect())
            .collect();
        Self::from_integer_rows(int_rows, den, dim)
    }

    pub fn from_integer_rows(rows: Vec<Vec<i128>>, denominator: i128, dim: usize) -> ZLattice {
        let mut basis = hnf(rows, dim);
        let mut g = denominator;
        for row in &basis {
            for v in row {
                g = g.gcd(v);
            }
        }
        let g = g.abs().max(1);
        for row in basis.iter_mut() {
            for v in row.iter_mut() {
                *v /= g;
            }
        }
        ZLattice {
            denominator: denominator / g,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, |r| r.len())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|row| row.iter().map(|&v| Rat::new(v, self.denominator)).collect())
            .collect()
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<i128>> {
        let mut w: Vec<Rat> = v.iter().map(|x| x * self.denominator).collect();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let pc = row.iter().position(|&x| x != 0).expect("zero row in HNF");
            let q = w[pc] / rat(row[pc]);
            if !q.is_integer() {
                return None;
            }
            let q = q.to_integer();
            for (wi, &ri) in w.iter_mut().zip(row) {
                *wi -= rat(q * ri);
            }
            coords.push(q);
        }
        if w.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.rows().iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        let mut rows = self.rows();
        rows.extend(other.rows());
        ZLattice::from_rows(&rows, self.dim())
    }

    pub fn scale(&self, s: Rat) -> ZLattice {
        let rows: Vec<Vec<Rat>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v * s).collect())
            .collect();
        ZLattice::from_rows(&rows, self.dim())
    }

    /// Dual lattice with respect to the standard dot product (full rank only).
    pub fn dual(&self) -> ZLattice {
        let inv = rat_inverse(&self.rows()).expect("dual of a degenerate lattice");
        let n = inv.len();
        let rows: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| inv[j][i]).collect()).collect();
        ZLattice::from_rows(&rows, n)
    }

    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// Covolume `|det(basis)|` (full rank only).
    pub fn covolume(&self) -> Rat {
        let mut v = Rat::one();
        for (i, row) in self.basis.iter().enumerate() {
            v *= Rat::new(row[i], self.denominator);
        }
        v.abs()
    }

    /// Coefficient vectors (relative to this basis) of a complete set of
    /// representatives for `self / sub`.
    pub fn coset_representatives(&self, sub: &ZLattice) -> Vec<Vec<i128>> {
        let n = self.rank();
        let coords: Vec<Vec<i128>> = sub
            .rows()
            .iter()
            .map(|r| self.coordinates(r).expect("sublattice not contained"))
            .collect();
        let h = hnf(coords, n);
        assert_eq!(h.len(), n, "sublattice has smaller rank");
        let diag: Vec<i128> = (0..n).map(|i| h[i][i]).collect();
        let total: i128 = diag.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut c = vec![0i128; n];
        loop {
            out.push(c.clone());
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                c[k] += 1;
                if c[k] < diag[k] {
                    break;
                }
                c[k] = 0;
            }
        }
    }
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn rat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c];
                for k in 0..2 * n {
                    let t = a[c][k] * f;
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rat_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            if !a[r][c].is_zero() {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    let t = a[c][k] * f;
                    a[r][k] -= t;
                }
            }
        }
    }
    det
}

/// Exact rank by fraction-free (Bareiss) elimination over Z, scanning columns
/// left to right and taking the first usable row. Returns the rank and the
/// pivot column indices.
pub fn integer_rank(rows: &[Vec<i64>]) -> (usize, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for k in c + 1..ncols {
                let v = (&a[r][c] * &a[i][k] - &a[i][c] * &a[r][k]) / &prev;
                a[i][k] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

/// LLL reduction (delta = 0.99) of the lattice whose exact Gram matrix is
/// `gram`. Returns a unimodular integer matrix `u`; the reduced basis is
/// `u * old_basis`. Floating point only steers the choice of `u`.
pub fn lll_transform(gram: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = gram.len();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut g: Vec<Vec<i128>> = gram.to_vec();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL failed to converge");
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i128;
                apply_row_op(&mut u, &mut g, k, j, q);
            }
        }
        let (mu, bstar) = gso(&g);
        if bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            u.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    u
}

fn apply_row_op(u: &mut [Vec<i128>], g: &mut [Vec<i128>], k: usize, j: usize, q: i128) {
    let n = g.len();
    let uj = u[j].clone();
    for (a, b) in u[k].iter_mut().zip(&uj) {
        *a -= q * b;
    }
    // b_k <- b_k - q b_j : update row and column k of the Gram matrix
    let gjj = g[j][j];
    let gkj = g[k][j];
    let new_kk = g[k][k] - 2 * q * gkj + q * q * gjj;
    for t in 0..n {
        if t != k {
            let v = g[k][t] - q * g[j][t];
            g[k][t] = v;
            g[t][k] = v;
        }
    }
    g[k][k] = new_kk;
}

fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = g[i][j] as f64;
            for k in 0..j {
                v -= mu[j][k] * r[i][k];
            }
            r[i][j] = v;
            if j < i {
                mu[i][j] = v / bstar[j];
            } else {
                bstar[i] = v;
            }
        }
    }
    (mu, bstar)
}

/// `u * g * u^T` in exact integers.
pub fn congruent_gram(g: &[Vec<i128>], u: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = g.len();
    let ug: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| u[i][k] * g[k][j]).sum()).collect())
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| ug[i][k] * u[j][k]).sum()).collect())
        .collect()
}

//! Rank-four O_L-lattices in B: orders, left ideals, neighbours, ideal
//! classes and the mass formula.
//!
//! Every lattice is stored through its Z-structure of rank 4g in the
//! coordinates of [`QuaternionAlgebra::coordinates`], in Hermite normal form,
//! so equal lattices compare equal.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field, FieldElement, OlIdeal, PrimeIdeal};
use crate::linalg::{rat, rat_inverse, Rat, ZLattice};
use crate::quadratic::lattice_form;
use crate::quaternion::{Quaternion, QuaternionAlgebra};

/// Which Eichler order the pipeline works with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// End(E) tensor O_L: reduced discriminant (p).
    LevelP,
    /// A maximal order of reduced discriminant (1); needs every prime above
    /// p to have even residue degree.
    LevelOne,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::LevelP => "level_p",
            Mode::LevelOne => "level_one",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "level_p" => Ok(Mode::LevelP),
            "level_one" => Ok(Mode::LevelOne),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuaternionLattice {
    pub lattice: ZLattice,
}

impl QuaternionLattice {
    /// Z-span of `gens`.
    pub fn from_z_generators(alg: &QuaternionAlgebra, gens: &[Quaternion]) -> Self {
        let rows: Vec<Vec<Rat>> = gens.iter().map(|x| alg.coordinates(x)).collect();
        QuaternionLattice {
            lattice: ZLattice::from_rows(&rows, alg.rational_dim()),
        }
    }

    /// O_L-span of `gens`.
    pub fn from_generators(alg: &QuaternionAlgebra, gens: &[Quaternion]) -> Self {
        let f = alg.field();
        let mut all = gens.to_vec();
        if f.degree() == 2 {
            let w = f.omega().to_element();
            all.extend(gens.iter().map(|x| alg.scale(x, &w)));
        }
        Self::from_z_generators(alg, &all)
    }

    pub fn z_basis(&self, alg: &QuaternionAlgebra) -> Vec<Quaternion> {
        self.lattice.rows().iter().map(|r| alg.from_coordinates(r)).collect()
    }

    pub fn contains(&self, alg: &QuaternionAlgebra, x: &Quaternion) -> bool {
        self.lattice.contains(&alg.coordinates(x))
    }

    pub fn contains_lattice(&self, other: &QuaternionLattice) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn is_full(&self, alg: &QuaternionAlgebra) -> bool {
        self.lattice.rank() == alg.rational_dim()
    }

    pub fn sum(&self, other: &QuaternionLattice) -> Self {
        QuaternionLattice {
            lattice: self.lattice.sum(&other.lattice),
        }
    }

    pub fn intersect(&self, other: &QuaternionLattice) -> Self {
        QuaternionLattice {
            lattice: self.lattice.intersect(&other.lattice),
        }
    }

    /// Z-span of all products x y with x in `self`, y in `other`.
    pub fn product(&self, alg: &QuaternionAlgebra, other: &QuaternionLattice) -> Self {
        let a = self.z_basis(alg);
        let b = other.z_basis(alg);
        let gens: Vec<Quaternion> = a.iter().flat_map(|x| b.iter().map(move |y| alg.mul(x, y))).collect();
        Self::from_z_generators(alg, &gens)
    }

    pub fn conjugate(&self, alg: &QuaternionAlgebra) -> Self {
        let gens: Vec<Quaternion> = self.z_basis(alg).iter().map(|x| alg.conjugate(x)).collect();
        Self::from_z_generators(alg, &gens)
    }

    /// The lattice x L.
    pub fn left_multiply(&self, alg: &QuaternionAlgebra, x: &Quaternion) -> Self {
        let gens: Vec<Quaternion> = self.z_basis(alg).iter().map(|y| alg.mul(x, y)).collect();
        Self::from_z_generators(alg, &gens)
    }

    /// The lattice L x.
    pub fn right_multiply(&self, alg: &QuaternionAlgebra, x: &Quaternion) -> Self {
        let gens: Vec<Quaternion> = self.z_basis(alg).iter().map(|y| alg.mul(y, x)).collect();
        Self::from_z_generators(alg, &gens)
    }

    pub fn scale(&self, alg: &QuaternionAlgebra, s: &FieldElement) -> Self {
        let gens: Vec<Quaternion> = self.z_basis(alg).iter().map(|y| alg.scale(y, s)).collect();
        Self::from_z_generators(alg, &gens)
    }

    /// Covolume of the Z-structure.
    pub fn covolume(&self) -> Rat {
        self.lattice.covolume()
    }

    /// A basis of the lattice as a free O_L-module, by Euclidean row
    /// reduction over O_L.
    pub fn ol_basis(&self, alg: &QuaternionAlgebra) -> Vec<Quaternion> {
        let f = alg.field();
        let elems = self.z_basis(alg);
        if f.degree() == 1 {
            return elems;
        }
        let mut den: i128 = 1;
        for e in &elems {
            for c in &e.0 {
                den = num_integer::lcm(den, c.denominator());
            }
        }
        let mut rows: Vec<[AlgInt; 4]> = elems
            .iter()
            .map(|e| {
                e.0.map(|c| c.scale(rat(den)).to_alg_int().expect("cleared denominators"))
            })
            .collect();
        let mut r = 0;
        for col in 0..4 {
            loop {
                let piv = (r..rows.len())
                    .filter(|&i| !rows[i][col].is_zero())
                    .min_by_key(|&i| f.norm(rows[i][col]).abs());
                let Some(pi) = piv else { break };
                rows.swap(r, pi);
                let mut clean = true;
                for i in r + 1..rows.len() {
                    if rows[i][col].is_zero() {
                        continue;
                    }
                    let (q, _) = f.div_rem(rows[i][col], rows[r][col]);
                    for c in 0..4 {
                        let t = f.mul(q, rows[r][c]);
                        rows[i][c] = rows[i][c] - t;
                    }
                    if !rows[i][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if r < rows.len() && !rows[r][col].is_zero() {
                r += 1;
            }
        }
        rows.truncate(r);
        assert_eq!(rows.len(), 4, "lattice is not of full O_L-rank");
        let inv = Rat::new(1, den);
        rows.iter()
            .map(|row| Quaternion(row.map(|c| c.to_element().scale(inv))))
            .collect()
    }

    /// Gram matrix Trd(x_k y_l) over O_L on an O_L-basis.
    pub fn trd_gram(&self, alg: &QuaternionAlgebra, basis: &[Quaternion]) -> Vec<Vec<FieldElement>> {
        basis
            .iter()
            .map(|x| basis.iter().map(|y| alg.reduced_trace(&alg.mul(x, y))).collect())
            .collect()
    }

    /// Canonical totally positive generator of the O_L-ideal generated by
    /// the reduced norms of the lattice.
    pub fn norm_generator(&self, alg: &QuaternionAlgebra) -> FieldElement {
        let basis = self.z_basis(alg);
        let mut gens = Vec::new();
        for (k, x) in basis.iter().enumerate() {
            gens.push(alg.reduced_norm(x));
            for y in &basis[k + 1..] {
                gens.push(alg.reduced_trace(&alg.mul(x, &alg.conjugate(y))));
            }
        }
        OlIdeal::from_generators(alg.field(), &gens).generator(alg.field())
    }
}

/// A full O_L-lattice that is a ring with unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Order {
    pub lattice: QuaternionLattice,
}

impl Order {
    /// Certifies that `lattice` contains 1, is O_L-stable and closed under
    /// multiplication.
    pub fn new(alg: &QuaternionAlgebra, lattice: QuaternionLattice) -> Result<Order> {
        if !lattice.is_full(alg) {
            return Err(Error::NotAnOrder("lattice is not of full rank".into()));
        }
        if !lattice.contains(alg, &Quaternion::one()) {
            return Err(Error::NotAnOrder("lattice does not contain 1".into()));
        }
        let basis = lattice.z_basis(alg);
        let w = alg.field().omega().to_element();
        for x in &basis {
            if alg.field().degree() == 2 && !lattice.contains(alg, &alg.scale(x, &w)) {
                return Err(Error::NotAnOrder("lattice is not an O_L-module".into()));
            }
            for y in &basis {
                if !lattice.contains(alg, &alg.mul(x, y)) {
                    return Err(Error::NotAnOrder("lattice is not closed under multiplication".into()));
                }
            }
        }
        Ok(Order { lattice })
    }
}

/// A left ideal together with the canonical generator of its norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeftIdeal {
    pub lattice: QuaternionLattice,
    pub norm: AlgInt,
}

impl LeftIdeal {
    pub fn unit(order: &Order) -> LeftIdeal {
        LeftIdeal {
            lattice: order.lattice.clone(),
            norm: AlgInt::ONE,
        }
    }

    /// Wraps an integral lattice, computing its norm.
    pub fn from_lattice(alg: &QuaternionAlgebra, lattice: QuaternionLattice) -> LeftIdeal {
        let norm = ideal_norm_of(alg, &lattice);
        LeftIdeal { lattice, norm }
    }
}

fn ideal_norm_of(alg: &QuaternionAlgebra, lattice: &QuaternionLattice) -> AlgInt {
    lattice
        .norm_generator(alg)
        .to_alg_int()
        .expect("integral ideal has integral norm")
}

/// Basis of the maximal order of the rational algebra with the given
/// presentation, matching [`crate::quaternion::rational_presentation`].
fn rational_maximal_order(p: i64, a: i64, b: i64) -> Result<Vec<Quaternion>> {
    let q = |c: [i128; 4], den: i128| Quaternion::from_ints(c, den);
    Ok(if p == 2 {
        vec![
            q([1, 0, 0, 0], 1),
            q([0, 1, 0, 0], 1),
            q([0, 0, 1, 0], 1),
            q([1, 1, 1, 1], 2),
        ]
    } else if p % 4 == 3 {
        vec![
            q([1, 0, 1, 0], 2),
            q([0, 1, 0, 1], 2),
            q([0, 0, 1, 0], 1),
            q([0, 0, 0, 1], 1),
        ]
    } else if p % 8 == 5 {
        vec![
            q([1, 0, 0, 0], 1),
            q([1, 0, 1, 1], 2),
            q([0, 1, 2, 1], 4),
            q([0, 0, 0, 1], 1),
        ]
    } else {
        debug_assert_eq!(a, -p);
        let qq = -b;
        let c = (0..qq as i128)
            .find(|&c| (c * c * p as i128 + 1) % qq as i128 == 0)
            .ok_or_else(|| Error::NotAnOrder(format!("no c with {qq} | c^2 {p} + 1")))?;
        vec![
            q([1, 0, 1, 0], 2),
            q([0, 1, 0, 1], 2),
            q([0, 0, qq as i128, 0], qq as i128 * qq as i128).add(&q([0, 0, 0, c], qq as i128)),
            q([0, 0, 0, 1], 1),
        ]
    })
}

/// O_B tensor O_L for the maximal order O_B of the rational algebra.
pub fn standard_order(alg: &QuaternionAlgebra) -> Result<Order> {
    let (a, b) = alg.structure_constants();
    let basis = rational_maximal_order(alg.p(), a, b)?;
    let order = Order::new(alg, QuaternionLattice::from_generators(alg, &basis))?;
    let disc = reduced_discriminant(alg, &order)?;
    let expected = alg.field().canonical_associate(AlgInt::rational(alg.p()));
    if disc != expected {
        return Err(Error::NotAnOrder(format!(
            "standard order has reduced discriminant {disc}, expected {expected}"
        )));
    }
    Ok(order)
}

/// Canonical generator of d(O), where d(O)^2 = det(Trd(e_k e_l)).
pub fn reduced_discriminant(alg: &QuaternionAlgebra, order: &Order) -> Result<AlgInt> {
    let f = alg.field();
    let basis = order.lattice.ol_basis(alg);
    let det = f.det(&order.lattice.trd_gram(alg, &basis));
    let det = det
        .to_alg_int()
        .ok_or_else(|| Error::NotAnOrder("discriminant is not integral".into()))?;
    if det.is_zero() {
        return Err(Error::NotAnOrder("degenerate trace form".into()));
    }
    let sq = f.canonical_associate(det);
    let root = f
        .sqrt_exact(sq)
        .ok_or_else(|| Error::NotAnOrder(format!("discriminant {det} is not a square")))?;
    Ok(f.canonical_associate(root))
}

/// {x in B : x I in I}.
pub fn left_order(alg: &QuaternionAlgebra, lattice: &QuaternionLattice) -> Result<Order> {
    let mut acc: Option<QuaternionLattice> = None;
    for e in lattice.ol_basis(alg) {
        let part = lattice.right_multiply(alg, &alg.inverse(&e));
        acc = Some(match acc {
            None => part,
            Some(a) => a.intersect(&part),
        });
    }
    Order::new(alg, acc.expect("nonempty basis"))
}

/// {x in B : I x in I}.
pub fn right_order(alg: &QuaternionAlgebra, lattice: &QuaternionLattice) -> Result<Order> {
    let mut acc: Option<QuaternionLattice> = None;
    for e in lattice.ol_basis(alg) {
        let part = lattice.left_multiply(alg, &alg.inverse(&e));
        acc = Some(match acc {
            None => part,
            Some(a) => a.intersect(&part),
        });
    }
    Order::new(alg, acc.expect("nonempty basis"))
}

/// Canonical generator of the O_L-ideal generated by Nrd(I).
pub fn ideal_norm(alg: &QuaternionAlgebra, ideal: &LeftIdeal) -> AlgInt {
    ideal_norm_of(alg, &ideal.lattice)
}

/// The N(q) + 1 left ideals J in I with I / J of length one at q, in a
/// deterministic order.
pub fn neighbors(alg: &QuaternionAlgebra, ideal: &LeftIdeal, prime: &PrimeIdeal) -> Result<Vec<LeftIdeal>> {
    let f = alg.field();
    if prime.p == alg.p() {
        return Err(Error::BadPrime(format!(
            "{} lies above p = {}",
            prime.generator,
            alg.p()
        )));
    }
    if f.degree() == 2 && f.discriminant() % prime.p == 0 {
        return Err(Error::BadPrime(format!("{} is ramified in L", prime.generator)));
    }
    let pi = prime.generator;
    let pi_el = pi.to_element();
    let right = right_order(alg, &ideal.lattice)?;
    let pi_right = right.lattice.scale(alg, &pi_el);
    let pi_ideal = ideal.lattice.scale(alg, &pi_el);
    let ideal_basis = ideal.lattice.ol_basis(alg);
    let right_rows = right.lattice.lattice.rows();
    let target = (prime.norm + 1) as usize;
    let mut found: Vec<QuaternionLattice> = Vec::new();
    for coeffs in right.lattice.lattice.coset_representatives(&pi_right.lattice) {
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let mut v = vec![Rat::zero(); alg.rational_dim()];
        for (c, row) in coeffs.iter().zip(&right_rows) {
            for (vi, r) in v.iter_mut().zip(row) {
                *vi += *r * rat(*c);
            }
        }
        let alpha = alg.from_coordinates(&v);
        let nrd = alg.nrd_int(&alpha).expect("integral element");
        if !f.divides(pi, nrd) {
            continue;
        }
        let images: Vec<Quaternion> = ideal_basis.iter().map(|e| alg.mul(e, &alpha)).collect();
        if found.iter().any(|j| images.iter().all(|x| j.contains(alg, x))) {
            continue;
        }
        let j = QuaternionLattice::from_generators(alg, &images).sum(&pi_ideal);
        found.push(j);
        if found.len() == target {
            break;
        }
    }
    if found.len() != target {
        return Err(Error::Verification(format!(
            "found {} neighbours at {}, expected {}",
            found.len(),
            pi,
            target
        )));
    }
    let expected_norm = f.canonical_product(ideal.norm, pi);
    Ok(found
        .into_iter()
        .map(|lattice| {
            let j = LeftIdeal::from_lattice(alg, lattice);
            debug_assert_eq!(j.norm, expected_norm);
            j
        })
        .collect())
}

/// Decides whether I = J x for some x in B^x, returning such an x.
pub fn is_isomorphic(alg: &QuaternionAlgebra, i: &LeftIdeal, j: &LeftIdeal) -> Result<Option<Quaternion>> {
    let f = alg.field();
    let m = j.lattice.conjugate(alg).product(alg, &i.lattice);
    let n = m.norm_generator(alg);
    let form = lattice_form(alg, &m, &n)?;
    let basis = m.z_basis(alg);
    let g = f.degree() as i64;
    for (c, v) in Enumerator::new(&form).short_vectors(g)? {
        if v != AlgInt::ONE {
            continue;
        }
        let mut y = Quaternion::zero();
        for (ck, e) in c.iter().zip(&basis) {
            y = y.add(&e.scale_rat(rat(*ck as i128)));
        }
        let x = alg.scale(&y, &f.el_inv(&j.norm.to_element()));
        if j.lattice.right_multiply(alg, &x) == i.lattice {
            return Ok(Some(x));
        }
        return Err(Error::Verification(format!(
            "norm-one element of J^-1 I does not map J onto I ({})",
            j.norm
        )));
    }
    Ok(None)
}

/// w = #(O^x / O_L^x) = #{x in O : Nrd(x) = 1} / 2.
pub fn unit_weight(alg: &QuaternionAlgebra, order: &Order) -> Result<u64> {
    let form = lattice_form(alg, &order.lattice, &FieldElement::one())?;
    let g = alg.field().degree() as i64;
    let n = Enumerator::new(&form)
        .short_vectors(g)?
        .iter()
        .filter(|(_, v)| *v == AlgInt::ONE)
        .count() as u64;
    Ok(n / 2)
}

/// Exact values |zeta_L(-1)| for the supported fields.
pub fn zeta_minus_one(field: &Field) -> Result<Rat> {
    Ok(match field.d() {
        1 => Rat::new(1, 12),
        2 => Rat::new(1, 12),
        5 => Rat::new(1, 30),
        13 => Rat::new(1, 6),
        17 => Rat::new(1, 3),
        d => return Err(Error::UnsupportedField(d)),
    })
}

/// Eichler mass 2^(1-g) |zeta_L(-1)| h_L prod_{q | D} (Nq - 1) prod_{q | N} (Nq + 1)
/// for the order selected by `mode`.
pub fn mass_formula(alg: &QuaternionAlgebra, mode: Mode) -> Result<Rat> {
    let f = alg.field();
    let g = f.degree() as u32;
    let mut m = zeta_minus_one(f)? / rat(1i128 << (g - 1));
    for q in alg.ramified_primes() {
        m *= rat((q.norm - 1) as i128);
    }
    if mode == Mode::LevelP {
        for q in f.primes_above(alg.p()) {
            if q.residue_degree % 2 == 0 {
                m *= rat((q.norm + 1) as i128);
            }
        }
    }
    Ok(m)
}

/// A left ideal class representative with the weight of its right order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealClass {
    pub ideal: LeftIdeal,
    pub weight: u64,
}

/// Breadth-first search over the neighbour graph at `prime`, stopping once
/// the accumulated mass reaches `mass`.
pub fn ideal_classes(alg: &QuaternionAlgebra, order: &Order, prime: &PrimeIdeal, mass: Rat) -> Result<Vec<IdealClass>> {
    let start = LeftIdeal::unit(order);
    let w = unit_weight(alg, order)?;
    let mut classes = vec![IdealClass {
        ideal: start,
        weight: w,
    }];
    let mut total = Rat::new(1, w as i128);
    let mut head = 0;
    while total < mass && head < classes.len() {
        let current = classes[head].ideal.clone();
        head += 1;
        for j in neighbors(alg, &current, prime)? {
            let mut known = false;
            for c in &classes {
                if is_isomorphic(alg, &j, &c.ideal)?.is_some() {
                    known = true;
                    break;
                }
            }
            if known {
                continue;
            }
            let w = unit_weight(alg, &right_order(alg, &j.lattice)?)?;
            total += Rat::new(1, w as i128);
            classes.push(IdealClass { ideal: j, weight: w });
            if total >= mass {
                break;
            }
        }
    }
    if total != mass {
        return Err(Error::MassMismatch {
            found: total.to_string(),
            expected: mass.to_string(),
        });
    }
    Ok(classes)
}

/// A maximal order of reduced discriminant (1) containing `order`, found by
/// adjoining elements x / p with x in O and O + O(x/p) integral.
pub fn level_one_order(alg: &QuaternionAlgebra, order: &Order) -> Result<Order> {
    let f = alg.field();
    let p = alg.p();
    if f.primes_above(p).iter().any(|q| q.residue_degree % 2 == 1) {
        return Err(Error::LevelOneImpossible(p));
    }
    let mut current = order.clone();
    let mut guard = 0;
    loop {
        let disc = reduced_discriminant(alg, &current)?;
        if disc == AlgInt::ONE {
            return Ok(current);
        }
        guard += 1;
        if guard > 8 {
            return Err(Error::Verification("saturation did not terminate".into()));
        }
        let disc_norm = f.norm(disc).abs() as i128;
        current = saturate_once(alg, &current, p, disc_norm)?
            .ok_or_else(|| Error::Verification(format!("no overorder found above {p}")))?;
    }
}

fn trace_dual(alg: &QuaternionAlgebra, lattice: &QuaternionLattice) -> QuaternionLattice {
    let f = alg.field();
    let basis = lattice.z_basis(alg);
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| f.el_trace(&alg.reduced_trace(&alg.mul(x, &alg.conjugate(y)))))
                .collect()
        })
        .collect();
    let inv = rat_inverse(&gram).expect("nondegenerate trace form");
    let rows = lattice.lattice.rows();
    let n = rows.len();
    let dual_rows: Vec<Vec<Rat>> = inv
        .iter()
        .map(|r| {
            (0..n)
                .map(|c| (0..n).fold(Rat::zero(), |s, k| s + r[k] * rows[k][c]))
                .collect()
        })
        .collect();
    QuaternionLattice {
        lattice: ZLattice::from_rows(&dual_rows, n),
    }
}

fn saturate_once(alg: &QuaternionAlgebra, order: &Order, p: i64, max_index: i128) -> Result<Option<Order>> {
    let pe = FieldElement::from_int(p as i128);
    let p_order = order.lattice.scale(alg, &pe);
    let candidates = order
        .lattice
        .intersect(&trace_dual(alg, &order.lattice).scale(alg, &pe));
    let rows = candidates.lattice.rows();
    let inv_p = FieldElement::from_rat(Rat::new(1, p as i128));
    for coeffs in candidates.lattice.coset_representatives(&p_order.lattice) {
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let mut v = vec![Rat::zero(); alg.rational_dim()];
        for (c, row) in coeffs.iter().zip(&rows) {
            for (vi, r) in v.iter_mut().zip(row) {
                *vi += *r * rat(*c);
            }
        }
        let y = alg.scale(&alg.from_coordinates(&v), &inv_p);
        if alg.nrd_int(&y).is_none() {
            continue;
        }
        if let Some(lattice) = ring_closure(alg, &order.lattice, &y, max_index) {
            return Ok(Some(Order::new(alg, lattice)?));
        }
    }
    Ok(None)
}

/// Smallest ring lattice containing `base` and `y`, or `None` once the
/// index over `base` exceeds `max_index`.
fn ring_closure(
    alg: &QuaternionAlgebra,
    base: &QuaternionLattice,
    y: &Quaternion,
    max_index: i128,
) -> Option<QuaternionLattice> {
    let vol = base.covolume();
    let mut current = base.sum(&QuaternionLattice::from_generators(alg, &[*y]));
    loop {
        if !current.is_full(alg) || vol / current.covolume() > rat(max_index) {
            return None;
        }
        let next = current.sum(&current.product(alg, &current));
        if next == current {
            return Some(current);
        }
        current = next;
    }
}

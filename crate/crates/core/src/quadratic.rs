//! Hom-modules M_ij = conj(I_j) I_i with the O_L-valued degree form
//! Q(x) = Nrd(x) / n, where n generates the norm ideal of M.

use serde::Serialize;

use crate::enumerate::OlForm;
use crate::error::{Error, Result};
use crate::field::{AlgInt, FieldElement, OlIdeal};
use crate::orders::{IdealClass, Mode, QuaternionLattice};
use crate::quaternion::QuaternionAlgebra;

/// The form Nrd(x) / n on the Z-basis of `lattice`; fails unless every
/// value is integral.
pub fn lattice_form(alg: &QuaternionAlgebra, lattice: &QuaternionLattice, n: &FieldElement) -> Result<OlForm> {
    let f = alg.field();
    let basis = lattice.z_basis(alg);
    let ninv = f.el_inv(n);
    let integral = |x: FieldElement| -> Result<AlgInt> {
        f.el_mul(&x, &ninv)
            .to_alg_int()
            .ok_or_else(|| Error::Verification("degree form is not O_L-integral".into()))
    };
    let dim = basis.len();
    let mut diag = Vec::with_capacity(dim);
    let mut polar = vec![vec![AlgInt::ZERO; dim]; dim];
    for k in 0..dim {
        diag.push(integral(alg.reduced_norm(&basis[k]))?);
        for l in k + 1..dim {
            let v = integral(alg.reduced_trace(&alg.mul(&basis[k], &alg.conjugate(&basis[l]))))?;
            polar[k][l] = v;
            polar[l][k] = v;
        }
    }
    Ok(OlForm::new(f, diag, polar))
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticModule {
    pub i: usize,
    pub j: usize,
    #[serde(skip)]
    pub lattice: QuaternionLattice,
    /// Canonical generator of the norm ideal of the lattice.
    pub normalizer: AlgInt,
    /// Gram matrix of B(x, y) = Q(x + y) - Q(x) - Q(y) on an O_L-basis.
    pub gram: Vec<Vec<AlgInt>>,
    #[serde(skip)]
    pub form: OlForm,
}

/// M_ij = conj(I_j) I_i with its normalized degree form.
pub fn hom_module(alg: &QuaternionAlgebra, classes: &[IdealClass], i: usize, j: usize) -> Result<QuadraticModule> {
    let f = alg.field();
    let lattice = classes[j]
        .ideal
        .lattice
        .conjugate(alg)
        .product(alg, &classes[i].ideal.lattice);
    let n = lattice.norm_generator(alg);
    let normalizer = n
        .to_alg_int()
        .ok_or_else(|| Error::Verification("hom-module norm is not integral".into()))?;
    let form = lattice_form(alg, &lattice, &n)?;
    let ninv = f.el_inv(&n);
    let basis = lattice.ol_basis(alg);
    let gram = basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| {
                    let b = alg.reduced_trace(&alg.mul(x, &alg.conjugate(y)));
                    f.el_mul(&b, &ninv)
                        .to_alg_int()
                        .ok_or_else(|| Error::Verification("Gram entry is not integral".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadraticModule {
        i,
        j,
        lattice,
        normalizer,
        gram,
        form,
    })
}

/// Determinant of the Gram matrix and the level: the smallest ideal N with
/// N A^-1 integral and of even diagonal, as canonical generators.
pub fn gram_and_level(alg: &QuaternionAlgebra, m: &QuadraticModule) -> Result<(AlgInt, AlgInt)> {
    let f = alg.field();
    let a: Vec<Vec<FieldElement>> = m
        .gram
        .iter()
        .map(|r| r.iter().map(|v| v.to_element()).collect())
        .collect();
    let det = f
        .det(&a)
        .to_alg_int()
        .ok_or_else(|| Error::Verification("Gram determinant is not integral".into()))?;
    let inv = f
        .inverse(&a)
        .ok_or_else(|| Error::Verification("degenerate Gram matrix".into()))?;
    let half = FieldElement::from_rat(crate::linalg::Rat::new(1, 2));
    let unit = OlIdeal::principal(f, &FieldElement::one());
    let mut level = unit.clone();
    for (k, row) in inv.iter().enumerate() {
        for (l, v) in row.iter().enumerate() {
            let x = if k == l { f.el_mul(v, &half) } else { *v };
            if x.is_zero() {
                continue;
            }
            let den = unit.intersect(&OlIdeal::principal(f, &f.el_inv(&x)));
            level = level.intersect(&den);
        }
    }
    let level = level.generator(f).to_alg_int().expect("level ideal is integral");
    Ok((det, level))
}

/// Checks the level against (p) in level-p mode and (1) in level-one mode.
pub fn check_level(alg: &QuaternionAlgebra, m: &QuadraticModule, mode: Mode) -> Result<AlgInt> {
    let (_, level) = gram_and_level(alg, m)?;
    let expected = match mode {
        Mode::LevelP => alg.field().canonical_associate(AlgInt::rational(alg.p())),
        Mode::LevelOne => AlgInt::ONE,
    };
    if level != expected {
        return Err(Error::LevelMismatch {
            found: level.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(level)
}

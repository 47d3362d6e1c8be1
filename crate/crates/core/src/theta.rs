//! Theta series of Hom-modules: a_nu = #{x in M : Q(x) = nu} for every
//! totally positive nu of trace at most B, and nu = 0.

use serde::{Deserialize, Serialize};

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field};
use crate::quadratic::QuadraticModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCoefficient {
    pub nu: AlgInt,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaSeries {
    pub i: usize,
    pub j: usize,
    pub bound: i64,
    /// One entry per element of `enumerate_totally_positive(bound)`.
    pub coefficients: Vec<ThetaCoefficient>,
}

/// Gram matrix of x -> 2 Tr(Q(x)) on the Z-basis of M.
pub fn trace_form(m: &QuadraticModule) -> Vec<Vec<i128>> {
    m.form.trace_gram()
}

pub fn theta(field: &Field, m: &QuadraticModule, bound: i64, parallel: bool) -> Result<ThetaSeries> {
    theta_with_cap(field, m, bound, parallel, crate::enumerate::DEFAULT_POINT_CAP)
}

pub fn theta_with_cap(field: &Field, m: &QuadraticModule, bound: i64, parallel: bool, cap: u64) -> Result<ThetaSeries> {
    let counts = Enumerator::new(&m.form).with_cap(cap).value_counts(bound, parallel)?;
    let index = field.enumerate_totally_positive(bound);
    let coefficients: Vec<ThetaCoefficient> = index
        .iter()
        .map(|&nu| ThetaCoefficient {
            nu,
            count: counts.get(&nu).copied().unwrap_or(0),
        })
        .collect();
    let bucketed: u64 = coefficients.iter().map(|c| c.count).sum();
    let total: u64 = counts.values().sum();
    if bucketed != total {
        return Err(Error::Verification(format!(
            "module ({}, {}): {} of {} vectors have values that are not totally positive",
            m.i,
            m.j,
            total - bucketed,
            total
        )));
    }
    Ok(ThetaSeries {
        i: m.i,
        j: m.j,
        bound,
        coefficients,
    })
}

impl ThetaSeries {
    pub fn counts(&self) -> Vec<u64> {
        self.coefficients.iter().map(|c| c.count).collect()
    }

    /// a_nu; nu must be zero or totally positive.
    pub fn coefficient(&self, field: &Field, nu: AlgInt) -> Result<u64> {
        let t = field.trace(nu);
        if t > self.bound {
            return Err(Error::CoefficientOutOfRange {
                trace: t,
                bound: self.bound,
            });
        }
        Ok(self.coefficients.iter().find(|c| c.nu == nu).map_or(0, |c| c.count))
    }

    /// Coefficient-wise difference self - other.
    pub fn difference(&self, other: &ThetaSeries) -> Result<Vec<i64>> {
        if self.bound != other.bound {
            return Err(Error::IncompatibleBounds(self.bound, other.bound));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.count as i64 - b.count as i64)
            .collect())
    }
}

//! Coefficient sequences of the asymptotic and origin-regular solutions and
//! the gamma coefficients of their Wronskian expansion.
//!
//! The `*_seq` functions are generic over [`Real`] and are what the Wronskian
//! kernels use; the remaining functions are `f64` conveniences returning the
//! documented coefficient records.

mod recurrence;
mod residual;
mod sum;

pub use recurrence::{
    prefactor_coefficients, quartic_b_seq, quartic_h_seq, sextic_b_seq, sextic_h_seq,
    QesTermination,
};
pub use residual::residual_check;
pub use sum::{levin_u, sum_blocks, sum_exact, SumOutcome, SumStatus, Summation, STABILIZATION_RUN};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::potential::{AsymptoticSolutionSpec, Branch, Family, SexticPotential};

/// Relative size below which a QES coefficient counts as zero.
pub const QES_ZERO_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("leading factor vanishes at n = {n} but the right-hand side is {rhs:e} (logarithmic case)")]
    InconsistentRecurrence { n: usize, rhs: f64 },
    #[error("asymptotic spec belongs to the wrong family")]
    WrongFamily,
    #[error("the power-series recurrence needs the recessive branch")]
    WrongBranch,
    #[error("gamma index {0} out of range")]
    BadIndex(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HCoefficients {
    pub values: Vec<f64>,
    pub truncation_order: usize,
    pub qes_terminated: bool,
    /// Highest index with a nonzero coefficient once termination is detected.
    pub termination_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BCoefficients {
    pub values: Vec<f64>,
    pub nu: f64,
    pub truncation_order: usize,
}

impl BCoefficients {
    fn get(&self, i: usize) -> f64 {
        self.values.get(i).copied().unwrap_or(0.0)
    }
}

/// A single gamma coefficient with its summation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaValue {
    pub value: f64,
    pub status: SumStatus,
    pub terms_used: usize,
    pub smallest_block: f64,
    pub largest_block: f64,
}

impl GammaValue {
    pub fn accepted(&self) -> bool {
        self.status.accepted()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaCoefficients {
    pub family: Family,
    pub values: BTreeMap<i64, GammaValue>,
}

impl GammaCoefficients {
    pub fn get(&self, k: i64) -> Option<f64> {
        self.values.get(&k).map(|g| g.value)
    }

    pub fn all_accepted(&self) -> bool {
        self.values.values().all(GammaValue::accepted)
    }
}

fn check_family(spec: &AsymptoticSolutionSpec, family: Family) -> Result<(), SeriesError> {
    if spec.family() == Some(family) {
        Ok(())
    } else {
        Err(SeriesError::WrongFamily)
    }
}

fn check_recessive(spec: &AsymptoticSolutionSpec) -> Result<(), SeriesError> {
    if spec.branch == Branch::Recessive {
        Ok(())
    } else {
        Err(SeriesError::WrongBranch)
    }
}

pub fn quartic_h(spec: &AsymptoticSolutionSpec, am2: f64, e: f64, m: usize) -> Result<HCoefficients, SeriesError> {
    check_family(spec, Family::Quartic)?;
    let values = quartic_h_seq(spec.alpha(1), spec.alpha(3), am2, e, m);
    Ok(HCoefficients { values, truncation_order: m, qes_terminated: false, termination_index: None })
}

pub fn sextic_h(spec: &AsymptoticSolutionSpec, am2: f64, e: f64, m: usize) -> Result<HCoefficients, SeriesError> {
    check_family(spec, Family::Sextic)?;
    let (values, term) = sextic_h_seq(spec.alpha(2), spec.alpha(4), spec.mu, am2, e, m);
    Ok(HCoefficients {
        values,
        truncation_order: m,
        qes_terminated: term.is_some(),
        termination_index: term.map(|t| t.last_nonzero),
    })
}

pub fn quartic_b(
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    a2: f64,
    e: f64,
    k: usize,
) -> Result<BCoefficients, SeriesError> {
    check_family(spec, Family::Quartic)?;
    check_recessive(spec)?;
    let values = quartic_b_seq(spec.alpha(1), spec.alpha(3), a2, nu, e, k)?;
    Ok(BCoefficients { values, nu, truncation_order: k })
}

pub fn sextic_b(
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    pot: &SexticPotential,
    e: f64,
    k: usize,
) -> Result<BCoefficients, SeriesError> {
    check_family(spec, Family::Sextic)?;
    check_recessive(spec)?;
    let values = sextic_b_seq(spec.alpha(2), spec.alpha(4), pot.a4, pot.a2, nu, e, k)?;
    Ok(BCoefficients { values, nu, truncation_order: k })
}

/// Terms of the quartic gamma sum, one per `h_m`.
pub fn quartic_gamma_terms<T: crate::real::Real>(h: &[T], b: &[T], a1: &T, nu: &T, k: usize) -> Vec<T> {
    let two_a1 = T::from_f64(2.0) * a1.clone();
    let at = |i: usize| b.get(i).cloned().unwrap_or_else(T::zero);
    h.iter()
        .enumerate()
        .map(|(m, hm)| {
            let w = T::from_usize(2 * m + k + 2) + nu.clone();
            hm.clone() * (two_a1.clone() * at(k + m) - w * at(k + m + 1))
        })
        .collect()
}

/// Terms of the sextic gamma sum, one per even-index `h_{2m}`.
pub fn sextic_gamma_terms<T: crate::real::Real>(
    h: &[T],
    b: &[T],
    a2: &T,
    nu: &T,
    mu: &T,
    two_k: usize,
) -> Vec<T> {
    let two_a2 = T::from_f64(2.0) * a2.clone();
    let at = |i: usize| b.get(i).cloned().unwrap_or_else(T::zero);
    h.iter()
        .step_by(2)
        .enumerate()
        .map(|(m, hm)| {
            let w = T::from_usize(two_k + 4 * m + 2) + nu.clone() - mu.clone();
            hm.clone() * (two_a2.clone() * at(two_k + 2 * m) - w * at(two_k + 2 * m + 2))
        })
        .collect()
}

/// Block length that removes the periodic sign pattern of each family's sums.
pub fn block_length(family: Family) -> usize {
    match family {
        Family::Quartic => 3,
        Family::Sextic => 2,
    }
}

fn sum_with(terms: &[f64], family: Family, h: &HCoefficients, summation: Summation) -> SumOutcome<f64> {
    if h.qes_terminated {
        sum_exact(terms)
    } else {
        sum_blocks(terms, block_length(family), summation)
    }
}

fn gamma_value(outcome: SumOutcome<f64>) -> GammaValue {
    GammaValue {
        value: outcome.value,
        status: outcome.status,
        terms_used: outcome.terms_used,
        smallest_block: outcome.smallest_block,
        largest_block: outcome.largest_block,
    }
}

/// `gamma_k` of the quartic expansion, `k >= 1`.
pub fn quartic_gamma(
    h: &HCoefficients,
    b: &BCoefficients,
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    k: i64,
    summation: Summation,
) -> Result<GammaValue, SeriesError> {
    check_family(spec, Family::Quartic)?;
    if k < 1 {
        return Err(SeriesError::BadIndex(k));
    }
    let k = k as usize;
    let needed = k + h.values.len();
    let bv: Vec<f64> = (0..=needed).map(|i| b.get(i)).collect();
    let terms = quartic_gamma_terms(&h.values, &bv, &spec.alpha(1), &nu, k);
    Ok(gamma_value(sum_with(&terms, Family::Quartic, h, summation)))
}

/// `gamma_{2k}` of the sextic expansion, `two_k >= 0` and even.
pub fn sextic_gamma(
    h: &HCoefficients,
    b: &BCoefficients,
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    two_k: i64,
    summation: Summation,
) -> Result<GammaValue, SeriesError> {
    check_family(spec, Family::Sextic)?;
    if two_k < 0 || two_k % 2 != 0 {
        return Err(SeriesError::BadIndex(two_k));
    }
    let two_k = two_k as usize;
    let needed = two_k + h.values.len() + 2;
    let bv: Vec<f64> = (0..=needed).map(|i| b.get(i)).collect();
    let terms = sextic_gamma_terms(&h.values, &bv, &spec.alpha(2), &nu, &spec.mu, two_k);
    Ok(gamma_value(sum_with(&terms, Family::Sextic, h, summation)))
}

/// Collects several gamma coefficients into one record.
pub fn gamma_table(
    family: Family,
    h: &HCoefficients,
    b: &BCoefficients,
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    indices: &[i64],
    summation: Summation,
) -> Result<GammaCoefficients, SeriesError> {
    let mut values = BTreeMap::new();
    for &k in indices {
        let g = match family {
            Family::Quartic => quartic_gamma(h, b, spec, nu, k, summation)?,
            Family::Sextic => sextic_gamma(h, b, spec, nu, k, summation)?,
        };
        values.insert(k, g);
    }
    Ok(GammaCoefficients { family, values })
}

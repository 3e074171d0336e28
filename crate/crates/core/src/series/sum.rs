//! Truncation control for the gamma sums.
//!
//! Terms are first grouped into fixed-length blocks so that the periodic
//! sign pattern of the summands does not fake a small increment. The block
//! sums are then accumulated and classified.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Relative increment size counted as negligible.
pub const STABILIZATION_TOL: f64 = 1e-14;
/// Number of consecutive negligible block increments that count as converged.
pub const STABILIZATION_RUN: usize = 5;
/// Agreement required between the last two Levin estimates.
pub const LEVIN_TOL: f64 = 1e-10;
/// Spacing of the Levin orders compared against each other.
pub const LEVIN_STEP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Summation {
    /// Partial sums with stabilization or optimal truncation.
    #[default]
    Truncated,
    /// Levin u-transform over the block sums.
    Levin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumStatus {
    /// Finite sum (terminated series).
    Exact,
    Stabilized,
    OptimallyTruncated,
    Extrapolated,
    /// Neither criterion met; the full partial sum is returned.
    Exhausted,
}

impl SumStatus {
    pub fn accepted(self) -> bool {
        !matches!(self, SumStatus::Exhausted)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumOutcome<T> {
    pub value: T,
    pub status: SumStatus,
    pub terms_used: usize,
    pub smallest_block: f64,
    pub largest_block: f64,
}

fn blocks<T: Real>(terms: &[T], block: usize) -> Vec<T> {
    terms
        .chunks(block.max(1))
        .map(|c| c.iter().cloned().fold(T::zero(), |a, t| a + t))
        .collect()
}

pub fn sum_blocks<T: Real>(terms: &[T], block: usize, summation: Summation) -> SumOutcome<T> {
    // Double precision coefficients eventually overflow or underflow; the
    // sum ends at the first term that is no longer representable.
    let finite = terms.iter().position(|t| !t.to_f64().is_finite()).unwrap_or(terms.len());
    if finite == terms.len() && terms.iter().all(|t| t.is_zero()) {
        // h and b can vanish on complementary residues, e.g. A2 = E = 0
        return SumOutcome {
            value: T::zero(),
            status: SumStatus::Exact,
            terms_used: terms.len(),
            smallest_block: 0.0,
            largest_block: 0.0,
        };
    }
    let terms = &terms[..finite];
    let mut b = blocks(terms, block);
    // trailing zeros come from underflow of the power-series coefficients
    while b.len() > 1 && b.last().is_some_and(|x| x.is_zero()) {
        b.pop();
    }
    let mags: Vec<f64> = b.iter().map(|x| x.to_f64().abs()).collect();
    let largest = mags.iter().cloned().fold(0.0, f64::max);
    let smallest = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    // Levin mode asks for the best value the precision allows; a tail that
    // is merely below 1e-14 of the total may still shift a cancelling sum
    let tol = match summation {
        Summation::Truncated => STABILIZATION_TOL,
        Summation::Levin => STABILIZATION_TOL.min(1e3 * T::epsilon()),
    };
    let truncated = truncate(&b, &mags, block, terms.len(), tol);
    let mut out = SumOutcome {
        value: truncated.0,
        status: truncated.1,
        terms_used: truncated.2,
        smallest_block: if smallest.is_finite() { smallest } else { 0.0 },
        largest_block: largest,
    };
    if summation == Summation::Levin && out.status != SumStatus::Stabilized {
        let usable = b.iter().position(|x| x.is_zero()).unwrap_or(b.len());
        if let Some((value, ok, order)) = levin_scan(&b[..usable]) {
            out.value = value;
            out.status = if ok { SumStatus::Extrapolated } else { SumStatus::Exhausted };
            out.terms_used = (order * block).min(terms.len());
        }
    }
    out
}

/// Highest Levin order tried: the transform loses roughly one digit per
/// three orders, so the cap grows with the working precision.
fn levin_max_order<T: Real>() -> usize {
    let digits = -T::epsilon().log10();
    (3.0 * digits).max(8.0) as usize
}

/// Levin estimates at orders `LEVIN_STEP, 2 LEVIN_STEP, ...`; returns the
/// estimate whose change from the previous order is smallest, whether that
/// change meets [`LEVIN_TOL`], and the number of blocks used.
fn levin_scan<T: Real>(b: &[T]) -> Option<(T, bool, usize)> {
    let cap = b.len().min(levin_max_order::<T>());
    if cap < 4 {
        return None;
    }
    let mut orders: Vec<usize> = (1..).map(|j| j * LEVIN_STEP).take_while(|&o| o < cap).collect();
    orders.insert(0, 3);
    orders.push(cap);
    let mut prev: Option<T> = None;
    let mut best: Option<(T, f64, usize)> = None;
    for o in orders {
        let v = levin_u(&b[..o]);
        if !v.to_f64().is_finite() {
            break;
        }
        if let Some(p) = prev {
            let rel = (v.clone() - p).abs().to_f64() / v.abs().to_f64().max(f64::MIN_POSITIVE);
            if best.as_ref().is_none_or(|x| rel < x.1) {
                best = Some((v.clone(), rel, o));
            }
        }
        prev = Some(v);
    }
    best.map(|(v, rel, o)| (v, rel <= LEVIN_TOL, o))
}

/// Plain sum of a terminated series.
pub fn sum_exact<T: Real>(terms: &[T]) -> SumOutcome<T> {
    let mags: Vec<f64> = terms.iter().map(|x| x.to_f64().abs()).collect();
    SumOutcome {
        value: terms.iter().cloned().fold(T::zero(), |a, t| a + t),
        status: SumStatus::Exact,
        terms_used: terms.len(),
        smallest_block: mags.iter().cloned().fold(f64::INFINITY, f64::min).min(f64::MAX),
        largest_block: mags.iter().cloned().fold(0.0, f64::max),
    }
}

fn truncate<T: Real>(b: &[T], mags: &[f64], block: usize, n_terms: usize, tol: f64) -> (T, SumStatus, usize) {
    let mut partial = Vec::with_capacity(b.len());
    let mut s = T::zero();
    for x in b {
        s = s + x.clone();
        partial.push(s.clone());
    }
    if b.is_empty() {
        return (T::zero(), SumStatus::Stabilized, 0);
    }
    let total = s.to_f64().abs();
    if b.len() > STABILIZATION_RUN {
        let tail = &mags[b.len() - STABILIZATION_RUN..];
        if tail.iter().all(|&m| m <= tol * total) {
            return (s, SumStatus::Stabilized, n_terms);
        }
    }
    let (j_min, _) = mags
        .iter()
        .enumerate()
        .skip(1)
        .fold((0usize, f64::INFINITY), |acc, (j, &m)| if m < acc.1 { (j, m) } else { acc });
    if j_min >= 1 && j_min + 2 < b.len() {
        return (partial[j_min - 1].clone(), SumStatus::OptimallyTruncated, j_min * block);
    }
    (s, SumStatus::Exhausted, n_terms)
}

fn powi<T: Real>(x: T, mut e: usize) -> T {
    let mut base = x;
    let mut acc = T::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

/// Levin u-transform (beta = 1) of the series whose terms are `a`.
pub fn levin_u<T: Real>(a: &[T]) -> T {
    let n = a.len();
    let k = n - 1;
    let beta = 1.0;
    let mut num = T::zero();
    let mut den = T::zero();
    let mut s = T::zero();
    let mut binom = T::one();
    let base = T::from_f64(beta + k as f64);
    for (j, aj) in a.iter().enumerate() {
        s = s + aj.clone();
        let bj = T::from_f64(beta + j as f64);
        let ratio = bj.clone() / base.clone();
        let c = powi(ratio, k.saturating_sub(1));
        let mut w = binom.clone() * c / (bj * aj.clone());
        if j % 2 == 1 {
            w = -w;
        }
        num = num + w.clone() * s.clone();
        den = den + w;
        binom = binom * T::from_usize(k - j) / T::from_usize(j + 1);
    }
    num / den
}

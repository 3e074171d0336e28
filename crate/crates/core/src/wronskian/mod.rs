//! The energy-dependent Wronskian of the regular and recessive solutions,
//! evaluated through its Gamma-weighted closed form.
//!
//! For reference index `n` the quartic form is
//!
//! ```text
//! W = c^-(n + nu/3) sum_{i=0..2} Gamma(n + 1 + (nu + i)/3) c^(-i/3) gamma_{3n+1+i},  c = (2/3) sqrt(A4)
//! ```
//!
//! and the sextic one
//!
//! ```text
//! W = c^-(n + d) sum_{i=0..1} Gamma(n + 1 + d + i/2) c^(-i/2) gamma_{4n+2i},  c = sqrt(A6)/2,  d = (1 + nu + mu)/4
//! ```
//!
//! The value is the same for every `n`; evaluating several of them gives the
//! consistency spread reported with each value.

pub mod log_gamma;

pub use log_gamma::{ln_gamma_signed, log_gamma, GammaError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potential::{Family, Potential, QuarticPotential, SexticPotential};
use crate::real::{Ext, Real};
use crate::series::{
    block_length, quartic_b_seq, quartic_gamma_terms, quartic_h_seq, sextic_b_seq, sextic_gamma_terms,
    sextic_h_seq, sum_blocks, sum_exact, SeriesError, Summation,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WronskianError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("Gamma pole at argument {0}")]
    GammaPole(f64),
    #[error("nu = {nu} is not an indicial root for A-2 = {am2}")]
    NotIndicial { nu: f64, am2: f64 },
    #[error("degenerate indicial exponents (1 + 4 A-2 = 0) are not supported")]
    DegenerateIndicial,
    #[error("non-finite Wronskian at E = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
    /// Double for scanning, extended when a root is poorly conditioned.
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationConfig {
    /// Highest `h_m` index kept.
    pub h_terms: usize,
    /// Index `n` at which the reported value is taken.
    pub n_ref: usize,
    /// Indices compared for the consistency spread.
    pub n_set: Vec<usize>,
    pub spread_tolerance: f64,
    pub precision: Precision,
    pub summation: Summation,
}

pub const DEFAULT_H_TERMS: usize = 600;
pub const DEFAULT_N_REF: usize = 30;

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig {
            h_terms: DEFAULT_H_TERMS,
            n_ref: DEFAULT_N_REF,
            n_set: vec![DEFAULT_N_REF, DEFAULT_N_REF + 1, DEFAULT_N_REF + 2],
            spread_tolerance: 1e-6,
            precision: Precision::Auto,
            summation: Summation::Truncated,
        }
    }
}

impl TruncationConfig {
    /// Same settings with only index `n` evaluated.
    pub fn single(&self, n: usize) -> Self {
        TruncationConfig { n_ref: n, n_set: vec![n], ..self.clone() }
    }

    pub fn with_precision(&self, precision: Precision) -> Self {
        TruncationConfig { precision, ..self.clone() }
    }
}

/// Value of the closed form at one index `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexValue {
    pub n: usize,
    pub value: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WronskianValue {
    pub energy: f64,
    /// W at the reference index.
    pub value: f64,
    /// Largest pairwise difference across the index set, over `scale`.
    pub spread: f64,
    /// Largest Gamma-weighted term magnitude encountered.
    pub scale: f64,
    pub converged: bool,
    /// Every gamma sum met the truncation policy.
    pub gammas_accepted: bool,
    pub qes_terminated: bool,
    pub per_index: Vec<IndexValue>,
}

impl WronskianValue {
    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.value / self.scale
        } else {
            self.value
        }
    }
}

/// Potential data converted to the working scalar type.
struct Kernel<T> {
    family: Family,
    low: T,
    lead: T,
    mu: T,
    am2: T,
    nu: T,
    pot_a2: T,
    pot_a4: T,
    /// `c` of the closed form.
    base: T,
    /// `lambda^2`: energies are evaluated at `lambda^2 E`.
    energy_scale: T,
    /// Log of the constant that maps the rescaled Wronskian back.
    ln_unscale: T,
}

/// Leading exponent `sqrt(A_lead)` after rescaling `r = lambda rho`.
///
/// The substitution multiplies `h_m` by `lambda^-m` and `b_n` by
/// `lambda^n`, so every gamma term changes by the same factor; the value
/// matters only for keeping double precision coefficients inside the
/// exponent range over several hundred terms.
const SCALED_LEAD: f64 = 32.0;

fn check_nu(am2: f64, nu: f64) -> Result<(), WronskianError> {
    if (1.0 + 4.0 * am2).abs() <= 1e-14 {
        return Err(WronskianError::DegenerateIndicial);
    }
    if (nu * (nu - 1.0) - am2).abs() > 1e-9 * am2.abs().max(1.0) {
        return Err(WronskianError::NotIndicial { nu, am2 });
    }
    Ok(())
}

impl<T: Real> Kernel<T> {
    fn quartic(pot: &QuarticPotential, nu: f64) -> Self {
        let lambda = T::from_f64((SCALED_LEAD / pot.a4.sqrt()).cbrt());
        let l2 = lambda.clone() * lambda.clone();
        let a4 = T::from_f64(pot.a4) * l2.clone() * l2.clone() * l2.clone();
        let a2 = T::from_f64(pot.a2) * l2.clone() * l2.clone();
        let nu = T::from_f64(nu);
        let root = a4.sqrt();
        let lead = -root.clone();
        let low = -(a2.clone() / (T::from_f64(2.0) * root.clone()));
        Kernel {
            family: Family::Quartic,
            base: T::from_f64(2.0) * root / T::from_f64(3.0),
            low,
            lead,
            mu: -T::one(),
            am2: nu.clone() * (nu.clone() - T::one()),
            ln_unscale: -(T::from_f64(2.0) - nu.clone()) * lambda.ln(),
            nu,
            pot_a2: a2,
            pot_a4: a4,
            energy_scale: l2,
        }
    }

    fn sextic(pot: &SexticPotential, nu: f64) -> Self {
        let lambda = T::from_f64((SCALED_LEAD / pot.a6.sqrt()).powf(0.25));
        let l2 = lambda.clone() * lambda.clone();
        let l4 = l2.clone() * l2.clone();
        let a6 = T::from_f64(pot.a6) * l4.clone() * l4.clone();
        let a4 = T::from_f64(pot.a4) * l4.clone() * l2.clone();
        let a2 = T::from_f64(pot.a2) * l4;
        let nu = T::from_f64(nu);
        let root = a6.sqrt();
        let two = T::from_f64(2.0);
        let low = -(a4.clone() / (two.clone() * root.clone()));
        let disc = T::from_f64(4.0) * a6.clone() * a2.clone() - a4.clone() * a4.clone();
        let mu = -T::from_f64(1.5) - disc / (T::from_f64(8.0) * a6 * root.clone());
        Kernel {
            family: Family::Sextic,
            base: root.clone() / two,
            low,
            lead: -root,
            ln_unscale: -(T::one() - nu.clone() - mu.clone()) * lambda.ln(),
            mu,
            am2: nu.clone() * (nu.clone() - T::one()),
            nu,
            pot_a2: a2,
            pot_a4: a4,
            energy_scale: l2,
        }
    }

    /// Returns per-index `(W_n, scale_n)`, whether every sum was accepted,
    /// and the QES termination flag.
    fn evaluate(
        &self,
        e: f64,
        ns: &[usize],
        h_terms: usize,
        summation: Summation,
    ) -> Result<(Vec<(T, f64)>, bool, bool), WronskianError> {
        let e = T::from_f64(e) * self.energy_scale.clone();
        let n_max = ns.iter().copied().max().unwrap_or(0);
        let (h, qes) = match self.family {
            Family::Quartic => {
                (quartic_h_seq(self.low.clone(), self.lead.clone(), self.am2.clone(), e.clone(), h_terms), false)
            }
            Family::Sextic => {
                let (h, t) = sextic_h_seq(
                    self.low.clone(),
                    self.lead.clone(),
                    self.mu.clone(),
                    self.am2.clone(),
                    e.clone(),
                    h_terms,
                );
                (h, t.is_some())
            }
        };
        let b = match self.family {
            Family::Quartic => quartic_b_seq(
                self.low.clone(),
                self.lead.clone(),
                self.pot_a2.clone(),
                self.nu.clone(),
                e,
                3 * n_max + 3 + h_terms + 2,
            )?,
            Family::Sextic => sextic_b_seq(
                self.low.clone(),
                self.lead.clone(),
                self.pot_a4.clone(),
                self.pot_a2.clone(),
                self.nu.clone(),
                e,
                4 * n_max + 2 + h_terms + 3,
            )?,
        };
        let ln_c = self.base.ln();
        let block = block_length(self.family);
        let mut accepted = true;
        let mut out = Vec::with_capacity(ns.len());
        for &n in ns {
            let (count, denom) = match self.family {
                Family::Quartic => (3, T::from_f64(3.0)),
                Family::Sextic => (2, T::from_f64(2.0)),
            };
            let offset = match self.family {
                Family::Quartic => self.nu.clone() / T::from_f64(3.0),
                Family::Sextic => (T::one() + self.nu.clone() + self.mu.clone()) / T::from_f64(4.0),
            };
            let mut w = T::zero();
            let mut scale: f64 = 0.0;
            for i in 0..count {
                let terms = match self.family {
                    Family::Quartic => quartic_gamma_terms(&h, &b, &self.low, &self.nu, 3 * n + 1 + i),
                    Family::Sextic => {
                        sextic_gamma_terms(&h, &b, &self.low, &self.nu, &self.mu, 4 * n + 2 * i)
                    }
                };
                let g = if qes { sum_exact(&terms) } else { sum_blocks(&terms, block, summation) };
                accepted &= g.status.accepted();
                if g.value.is_zero() {
                    continue;
                }
                let power = T::from_usize(n) + offset.clone() + T::from_usize(i) / denom.clone();
                let arg = power.clone() + T::one();
                let (lg, sign) = arg.ln_gamma_signed().ok_or(WronskianError::GammaPole(arg.to_f64()))?;
                let g_sign = if g.value.to_f64() < 0.0 { -1.0 } else { 1.0 };
                let log_mag = lg - power * ln_c.clone() + g.value.abs().ln() + self.ln_unscale.clone();
                let mag = log_mag.exp();
                scale = scale.max(mag.to_f64());
                let t = if sign * g_sign < 0.0 { -mag } else { mag };
                w = w + t;
            }
            out.push((w, scale));
        }
        Ok((out, accepted, qes))
    }
}

fn assemble<T: Real>(
    e: f64,
    n: usize,
    ns: &[usize],
    parts: Vec<(T, f64)>,
    accepted: bool,
    qes: bool,
    trunc: &TruncationConfig,
) -> Result<WronskianValue, WronskianError> {
    let scale = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut spread: f64 = 0.0;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let d = (parts[i].0.clone() - parts[j].0.clone()).abs().to_f64();
            spread = spread.max(d);
        }
    }
    let spread = if scale > 0.0 { spread / scale } else { spread };
    let idx = ns.iter().position(|&m| m == n).unwrap_or(0);
    let value = parts[idx].0.to_f64();
    if !value.is_finite() || !scale.is_finite() {
        return Err(WronskianError::NonFinite(e));
    }
    let per_index = ns
        .iter()
        .zip(&parts)
        .map(|(&m, p)| IndexValue { n: m, value: p.0.to_f64(), scale: p.1 })
        .collect();
    Ok(WronskianValue {
        energy: e,
        value,
        spread,
        scale,
        converged: accepted && spread <= trunc.spread_tolerance,
        gammas_accepted: accepted,
        qes_terminated: qes,
        per_index,
    })
}

fn index_set(n: usize, trunc: &TruncationConfig) -> Vec<usize> {
    let mut ns = vec![n];
    for &m in &trunc.n_set {
        if !ns.contains(&m) {
            ns.push(m);
        }
    }
    ns
}

fn run<T: Real>(
    kernel: Kernel<T>,
    e: f64,
    n: usize,
    trunc: &TruncationConfig,
) -> Result<WronskianValue, WronskianError> {
    let ns = index_set(n, trunc);
    let (parts, accepted, qes) = kernel.evaluate(e, &ns, trunc.h_terms, trunc.summation)?;
    assemble(e, n, &ns, parts, accepted, qes, trunc)
}

pub fn quartic_wronskian(
    pot: &QuarticPotential,
    nu: f64,
    e: f64,
    n: usize,
    trunc: &TruncationConfig,
) -> Result<WronskianValue, WronskianError> {
    check_nu(pot.am2, nu)?;
    match trunc.precision {
        Precision::Extended => run(Kernel::<Ext>::quartic(pot, nu), e, n, trunc),
        _ => run(Kernel::<f64>::quartic(pot, nu), e, n, trunc),
    }
}

pub fn sextic_wronskian(
    pot: &SexticPotential,
    nu: f64,
    e: f64,
    n: usize,
    trunc: &TruncationConfig,
) -> Result<WronskianValue, WronskianError> {
    check_nu(pot.am2, nu)?;
    match trunc.precision {
        Precision::Extended => run(Kernel::<Ext>::sextic(pot, nu), e, n, trunc),
        _ => run(Kernel::<f64>::sextic(pot, nu), e, n, trunc),
    }
}

/// Either family at the configured reference index.
pub fn wronskian(pot: &Potential, nu: f64, e: f64, trunc: &TruncationConfig) -> Result<WronskianValue, WronskianError> {
    match pot {
        Potential::Quartic(q) => quartic_wronskian(q, nu, e, trunc.n_ref, trunc),
        Potential::Sextic(s) => sextic_wronskian(s, nu, e, trunc.n_ref, trunc),
    }
}

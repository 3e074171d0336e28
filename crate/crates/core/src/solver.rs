//! Eigenvalue enumeration: energy grid scan, bracket refinement, error
//! estimates and sector bookkeeping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::potential::{indicial_exponents, Potential, PotentialError};
use crate::wronskian::{wronskian, Precision, TruncationConfig, WronskianError, WronskianValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Wronskian(#[from] WronskianError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no convergence after {iterations} iterations in [{lo}, {hi}]")]
    MaxIterations { lo: f64, hi: f64, iterations: usize },
    #[error("W has equal signs at both ends of [{lo}, {hi}]; truncation may be too low")]
    LostBracket { lo: f64, hi: f64 },
    #[error("found {found} roots in [{e_min}, {e_max}], {wanted} requested")]
    InsufficientRoots { found: usize, wanted: usize, e_min: f64, e_max: f64 },
    #[error("sector {0} needs a vanishing centrifugal term")]
    SectorNeedsLine(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyScanConfig {
    pub e_min: f64,
    pub e_max: f64,
    pub step: f64,
    /// Absolute tolerance on the energy.
    pub root_tolerance: f64,
    pub max_refine_iterations: usize,
    /// Local halving near detected roots and suspicious minima of |W|.
    pub halving_pass: bool,
    pub truncation: TruncationConfig,
    pub execution: Execution,
}

impl Default for EnergyScanConfig {
    fn default() -> Self {
        EnergyScanConfig {
            e_min: -10.0,
            e_max: 10.0,
            step: 0.01,
            root_tolerance: 1e-11,
            max_refine_iterations: 200,
            halving_pass: true,
            truncation: TruncationConfig::default(),
            execution: Execution::default(),
        }
    }
}

impl EnergyScanConfig {
    pub fn with_range(&self, e_min: f64, e_max: f64) -> Self {
        EnergyScanConfig { e_min, e_max, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::InvalidConfig(m.to_string()));
        if !(self.e_min.is_finite() && self.e_max.is_finite()) || self.e_min >= self.e_max {
            return bad("need finite e_min < e_max");
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad("step must be positive");
        }
        if !(self.root_tolerance > 0.0) {
            return bad("root_tolerance must be positive");
        }
        if self.max_refine_iterations == 0 {
            return bad("max_refine_iterations must be positive");
        }
        if self.truncation.n_set.is_empty() {
            return bad("n_set must not be empty");
        }
        Ok(())
    }
}

/// Boundary condition class at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// Line problem, even states (`nu = 0`).
    Even,
    /// Line problem, odd states (`nu = 1`).
    Odd,
    /// Larger indicial root.
    Regular,
    /// Smaller indicial root.
    Other,
}

impl Sector {
    pub fn name(self) -> &'static str {
        match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
            Sector::Regular => "regular",
            Sector::Other => "other",
        }
    }
}

pub fn sector_nu(pot: &Potential, sector: Sector) -> Result<f64, SolverError> {
    match sector {
        Sector::Even | Sector::Odd if pot.am2() != 0.0 => Err(SolverError::SectorNeedsLine(sector.name())),
        Sector::Even => Ok(0.0),
        Sector::Odd => Ok(1.0),
        Sector::Regular => Ok(indicial_exponents(pot.am2())?.nu_regular),
        Sector::Other => Ok(indicial_exponents(pot.am2())?.nu_other),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanWarning {
    pub energy: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub brackets: Vec<Bracket>,
    pub warnings: Vec<ScanWarning>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueResult {
    pub energy: f64,
    pub sector_nu: f64,
    pub bracket: (f64, f64),
    /// Max of root tolerance, cross-index drift and truncation drift.
    pub estimated_error: f64,
    pub index_in_sector: usize,
    pub qes_exact: bool,
    pub n_drift: f64,
    pub truncation_drift: f64,
    pub precision: Precision,
    /// Whether W at the root met the truncation policy and spread tolerance.
    pub converged: bool,
}

/// Result of a bracketed refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct RootEstimate {
    pub energy: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub at_root: WronskianValue,
    /// W at the final bracket ends.
    pub ends: (WronskianValue, WronskianValue),
    /// W at the initial bracket ends.
    pub initial: (WronskianValue, WronskianValue),
}

fn scan_truncation(t: &TruncationConfig) -> TruncationConfig {
    match t.precision {
        Precision::Extended => t.clone(),
        _ => t.with_precision(Precision::Double),
    }
}

fn grid(e_min: f64, e_max: f64, step: f64) -> Vec<f64> {
    let n = ((e_max - e_min) / step + 1e-9).floor() as usize;
    let mut g: Vec<f64> = (0..=n).map(|i| e_min + i as f64 * step).collect();
    if e_max - g[n] > 1e-9 * step {
        g.push(e_max);
    }
    g
}

type Sample = (f64, Option<WronskianValue>);

fn evaluate_points(pot: &Potential, nu: f64, energies: &[f64], t: &TruncationConfig, exec: Execution) -> Vec<Sample> {
    let vals = exec.map(energies, |&e| wronskian(pot, nu, e, t));
    energies.iter().copied().zip(vals.into_iter().map(Result::ok)).collect()
}

fn sign_brackets(samples: &[Sample]) -> Vec<Bracket> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (e, w) in samples {
        let Some(w) = w.as_ref().filter(|w| w.converged) else { continue };
        let v = w.value;
        if v == 0.0 {
            out.push(Bracket { lo: *e, hi: *e });
        } else if let Some((pe, pv)) = prev {
            if pv != 0.0 && (pv < 0.0) != (v < 0.0) {
                out.push(Bracket { lo: pe, hi: *e });
            }
        }
        prev = Some((*e, v));
    }
    out
}

/// All grid intervals where W changes sign, with an optional halving pass.
pub fn scan_brackets(pot: &Potential, nu: f64, config: &EnergyScanConfig) -> Result<ScanOutcome, SolverError> {
    config.validate()?;
    let t = scan_truncation(&config.truncation);
    // no bound state lies below the infimum of the potential
    let floor = pot.spectral_lower_bound();
    if config.e_max < floor {
        return Ok(ScanOutcome { brackets: vec![], warnings: vec![], evaluations: 0 });
    }
    let skip = ((floor - config.e_min) / config.step).floor().max(0.0);
    let start = config.e_min + skip * config.step;
    let energies = grid(start, config.e_max, config.step);
    let mut samples = evaluate_points(pot, nu, &energies, &t, config.execution);
    let mut evaluations = samples.len();
    if config.halving_pass {
        let extra = halving_points(&samples);
        evaluations += extra.len();
        samples.extend(evaluate_points(pot, nu, &extra, &t, config.execution));
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let warnings = samples
        .iter()
        .filter_map(|(e, w)| match w {
            None => Some(ScanWarning { energy: *e, reason: "evaluation failed".into() }),
            Some(w) if !w.converged => Some(ScanWarning {
                energy: *e,
                reason: format!("not converged (spread {:.1e}, sums accepted {})", w.spread, w.gammas_accepted),
            }),
            _ => None,
        })
        .collect();
    Ok(ScanOutcome { brackets: sign_brackets(&samples), warnings, evaluations })
}

/// Midpoints of intervals next to a sign change or a local minimum of the
/// normalized |W| without one.
fn halving_points(samples: &[Sample]) -> Vec<f64> {
    let valid: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|(e, w)| w.as_ref().filter(|w| w.converged).map(|w| (*e, w.normalized())))
        .collect();
    let mut mids = Vec::new();
    for i in 1..valid.len() {
        let (e0, v0) = valid[i - 1];
        let (e1, v1) = valid[i];
        if (v0 < 0.0) != (v1 < 0.0) {
            mids.push(0.5 * (e0 + e1));
        }
    }
    for i in 1..valid.len().saturating_sub(1) {
        let (a, b, c) = (valid[i - 1], valid[i], valid[i + 1]);
        let same = (a.1 < 0.0) == (b.1 < 0.0) && (b.1 < 0.0) == (c.1 < 0.0);
        if same && b.1.abs() < a.1.abs() && b.1.abs() < c.1.abs() {
            mids.push(0.5 * (a.0 + b.0));
            mids.push(0.5 * (b.0 + c.0));
        }
    }
    mids.sort_by(f64::total_cmp);
    mids.dedup();
    mids
}

/// Brent's method on a bracket with a sign change of `W`.
pub fn refine_root<F>(w: F, bracket: Bracket, config: &EnergyScanConfig) -> Result<RootEstimate, SolverError>
where
    F: Fn(f64) -> Result<WronskianValue, WronskianError>,
{
    let tol = config.root_tolerance;
    let wa = w(bracket.lo)?;
    if bracket.lo == bracket.hi || wa.value == 0.0 {
        return Ok(RootEstimate {
            energy: bracket.lo,
            bracket: (bracket.lo, bracket.lo),
            iterations: 0,
            at_root: wa.clone(),
            ends: (wa.clone(), wa.clone()),
            initial: (wa.clone(), wa),
        });
    }
    let wb = w(bracket.hi)?;
    if wb.value == 0.0 {
        return Ok(RootEstimate {
            energy: bracket.hi,
            bracket: (bracket.hi, bracket.hi),
            iterations: 0,
            at_root: wb.clone(),
            ends: (wb.clone(), wb.clone()),
            initial: (wa, wb),
        });
    }
    if (wa.value < 0.0) == (wb.value < 0.0) {
        return Err(SolverError::LostBracket { lo: bracket.lo, hi: bracket.hi });
    }
    let initial = (wa.clone(), wb.clone());
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut wa, mut wb) = (wa, wb);
    let (mut c, mut wc) = (a, wa.clone());
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=config.max_refine_iterations {
        if (wb.value < 0.0) == (wc.value < 0.0) {
            c = a;
            wc = wa.clone();
            d = b - a;
            e = d;
        }
        if wc.value.abs() < wb.value.abs() {
            a = b;
            b = c;
            c = a;
            wa = wb.clone();
            wb = wc.clone();
            wc = wa.clone();
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || wb.value == 0.0 {
            let ends = if b <= c { (wb.clone(), wc) } else { (wc, wb.clone()) };
            return Ok(RootEstimate {
                energy: b,
                bracket: (b.min(c), b.max(c)),
                iterations: iter,
                at_root: wb,
                ends,
                initial,
            });
        }
        let (fa, fb, fc) = (wa.value, wb.value, wc.value);
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        wa = wb.clone();
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        wb = w(b)?;
    }
    Err(SolverError::MaxIterations { lo: a.min(b), hi: a.max(b), iterations: config.max_refine_iterations })
}

/// Root of the linear interpolant between the bracket ends, per index `n`.
fn index_roots(est: &RootEstimate) -> Vec<(usize, f64)> {
    let (lo, hi) = est.bracket;
    if hi <= lo {
        return est.at_root.per_index.iter().map(|p| (p.n, est.energy)).collect();
    }
    est.ends
        .0
        .per_index
        .iter()
        .zip(&est.ends.1.per_index)
        .map(|(a, b)| {
            let denom = b.value - a.value;
            let r = if denom != 0.0 { lo - a.value * (hi - lo) / denom } else { est.energy };
            (a.n, r)
        })
        .collect()
}

fn index_drift(est: &RootEstimate, n_ref: usize) -> f64 {
    let roots = index_roots(est);
    let reference = roots.iter().find(|r| r.0 == n_ref).map(|r| r.1).unwrap_or(est.energy);
    roots.iter().map(|r| (r.1 - reference).abs()).fold(0.0, f64::max)
}

/// Refines near `guess`, widening the search window until a sign change
/// appears or `limit` is exceeded.
fn refine_near<F>(w: &F, guess: f64, delta: f64, limit: Bracket, config: &EnergyScanConfig) -> Result<RootEstimate, SolverError>
where
    F: Fn(f64) -> Result<WronskianValue, WronskianError>,
{
    let mut delta = delta;
    let width = limit.hi - limit.lo;
    while delta < width {
        let lo = (guess - delta).max(limit.lo);
        let hi = (guess + delta).min(limit.hi);
        let (a, b) = (w(lo)?, w(hi)?);
        if (a.value < 0.0) != (b.value < 0.0) || a.value == 0.0 || b.value == 0.0 {
            return refine_root(w, Bracket { lo, hi }, config);
        }
        delta *= 16.0;
    }
    refine_root(w, limit, config)
}

/// Energy error implied by double precision rounding of the closed form.
fn conditioning(est: &RootEstimate) -> f64 {
    let (a, b) = &est.initial;
    let width = b.energy - a.energy;
    if width <= 0.0 {
        return 0.0;
    }
    let slope = ((b.value - a.value) / width).abs();
    f64::EPSILON * a.scale.max(b.scale) / slope
}

/// Refines one bracket into a fully annotated eigenvalue.
pub fn solve_bracket(
    pot: &Potential,
    nu: f64,
    bracket: Bracket,
    index: usize,
    config: &EnergyScanConfig,
) -> Result<EigenvalueResult, SolverError> {
    let trunc = &config.truncation;
    let mut precision = match trunc.precision {
        Precision::Extended => Precision::Extended,
        _ => Precision::Double,
    };
    let t = trunc.with_precision(precision);
    let mut est = refine_root(|e| wronskian(pot, nu, e, &t), bracket, config)?;
    if trunc.precision == Precision::Auto {
        let cond = conditioning(&est);
        if cond > 1e-3 * config.root_tolerance {
            precision = Precision::Extended;
            let tx = trunc.with_precision(precision);
            let delta = (1e3 * cond).max(1e-9);
            let polished = refine_near(&|e| wronskian(pot, nu, e, &tx), est.energy, delta, bracket, config)?;
            est = RootEstimate { initial: est.initial, ..polished };
        }
    }
    let t = trunc.with_precision(precision);
    let n_drift = index_drift(&est, t.n_ref);
    let deeper = TruncationConfig { h_terms: t.h_terms + 20, ..t.clone() }.single(t.n_ref);
    let window = (1e3 * config.root_tolerance).max(1e-9);
    let truncation_drift =
        match refine_near(&|e| wronskian(pot, nu, e, &deeper), est.energy, window, bracket, config) {
            Ok(r) => (r.energy - est.energy).abs(),
            Err(_) => f64::INFINITY,
        };
    Ok(EigenvalueResult {
        energy: est.energy,
        sector_nu: nu,
        bracket: est.bracket,
        estimated_error: config.root_tolerance.max(n_drift).max(truncation_drift),
        index_in_sector: index,
        qes_exact: est.at_root.qes_terminated,
        n_drift,
        truncation_drift,
        precision,
        converged: est.at_root.gammas_accepted,
    })
}

/// The `count` lowest roots inside the configured energy window.
pub fn eigenvalues(
    pot: &Potential,
    nu: f64,
    count: usize,
    config: &EnergyScanConfig,
) -> Result<Vec<EigenvalueResult>, SolverError> {
    if count == 0 {
        return Ok(vec![]);
    }
    let scan = scan_brackets(pot, nu, config)?;
    if scan.brackets.len() < count {
        return Err(SolverError::InsufficientRoots {
            found: scan.brackets.len(),
            wanted: count,
            e_min: config.e_min,
            e_max: config.e_max,
        });
    }
    let jobs: Vec<(usize, Bracket)> = scan.brackets.into_iter().take(count).enumerate().collect();
    config
        .execution
        .map(&jobs, |(k, b)| solve_bracket(pot, nu, *b, *k, config))
        .into_iter()
        .collect()
}

/// Like [`eigenvalues`] but grows the upper end of the window from
/// `config.e_min` (or the potential's lower bound) until `count` roots are
/// bracketed.
pub fn eigenvalues_auto(
    pot: &Potential,
    nu: f64,
    count: usize,
    config: &EnergyScanConfig,
) -> Result<Vec<EigenvalueResult>, SolverError> {
    if count == 0 {
        return Ok(vec![]);
    }
    let floor = (pot.spectral_lower_bound() - config.step).floor();
    let start = config.e_min.max(floor);
    let mut chunk = 10.0f64.max(4.0 * config.step);
    let mut lo = start;
    let mut brackets: Vec<Bracket> = Vec::new();
    let mut last: Option<f64> = None;
    for _ in 0..24 {
        let hi = lo + chunk;
        let scan = scan_brackets(pot, nu, &config.with_range(lo, hi))?;
        for b in scan.brackets {
            if last.is_none_or(|l| b.lo >= l) && !brackets.iter().any(|x| x.lo == b.lo && x.hi == b.hi) {
                brackets.push(b);
            }
        }
        last = brackets.last().map(|b| b.hi);
        if brackets.len() >= count {
            break;
        }
        lo = hi;
        chunk *= 2.0;
    }
    if brackets.len() < count {
        return Err(SolverError::InsufficientRoots { found: brackets.len(), wanted: count, e_min: start, e_max: lo });
    }
    let jobs: Vec<(usize, Bracket)> = brackets.into_iter().take(count).enumerate().collect();
    config
        .execution
        .map(&jobs, |(k, b)| solve_bracket(pot, nu, *b, *k, config))
        .into_iter()
        .collect()
}

/// Level after merging several sectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedLevel {
    pub k: usize,
    pub result: EigenvalueResult,
}

/// Sorts the union of sector spectra by energy and relabels the levels.
pub fn merge_sectors(sectors: &[Vec<EigenvalueResult>]) -> Vec<MergedLevel> {
    let mut all: Vec<EigenvalueResult> = sectors.iter().flatten().cloned().collect();
    all.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.sector_nu.total_cmp(&b.sector_nu)));
    all.into_iter().enumerate().map(|(k, result)| MergedLevel { k, result }).collect()
}

/// W on a uniform grid `e_min, e_min + step, ..` up to `e_max`.
pub fn sample_wronskian(
    pot: &Potential,
    nu: f64,
    e_min: f64,
    e_max: f64,
    step: f64,
    trunc: &TruncationConfig,
    exec: Execution,
) -> Result<Vec<Result<WronskianValue, WronskianError>>, SolverError> {
    if !(e_min <= e_max) || !(step > 0.0) {
        return Err(SolverError::InvalidConfig("need e_min <= e_max and step > 0".into()));
    }
    let n = ((e_max - e_min) / step + 1e-9).floor() as usize;
    let energies: Vec<f64> = (0..=n).map(|i| e_min + i as f64 * step).collect();
    let t = scan_truncation(trunc);
    Ok(exec.map(&energies, |&e| wronskian(pot, nu, e, &t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{qes_potential, QuarticPotential};
    use crate::wronskian::IndexValue;

    fn fake(e: f64, v: f64) -> WronskianValue {
        WronskianValue {
            energy: e,
            value: v,
            spread: 0.0,
            scale: 1.0,
            converged: true,
            gammas_accepted: true,
            qes_terminated: false,
            per_index: vec![IndexValue { n: 0, value: v, scale: 1.0 }],
        }
    }

    #[test]
    fn refine_finds_center_of_odd_function() {
        let config = EnergyScanConfig::default();
        let c = 0.123_456_789;
        let est = refine_root(|e| Ok(fake(e, (e - c).powi(3) + (e - c))), Bracket { lo: -1.0, hi: 2.0 }, &config).unwrap();
        assert!((est.energy - c).abs() < 1e-11);
    }

    #[test]
    fn refine_reports_lost_bracket() {
        let config = EnergyScanConfig::default();
        let err = refine_root(|e| Ok(fake(e, 1.0 + e * e)), Bracket { lo: -1.0, hi: 1.0 }, &config).unwrap_err();
        assert!(matches!(err, SolverError::LostBracket { .. }));
    }

    #[test]
    fn refine_reports_max_iterations() {
        let config = EnergyScanConfig { max_refine_iterations: 2, root_tolerance: 1e-15, ..Default::default() };
        let err = refine_root(|e| Ok(fake(e, (e - 0.3).powi(3))), Bracket { lo: -100.0, hi: 100.0 }, &config);
        assert!(matches!(err, Err(SolverError::MaxIterations { .. })));
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = grid(0.0, 12.0, 0.05);
        assert_eq!(g.len(), 241);
        assert_eq!(*g.last().unwrap(), 12.0);
    }

    #[test]
    fn below_potential_minimum_is_empty() {
        let pot: Potential = QuarticPotential::double_well(-10.0).into();
        let config = EnergyScanConfig::default().with_range(-40.0, -26.0);
        assert!(scan_brackets(&pot, 0.0, &config).unwrap().brackets.is_empty());
    }

    #[test]
    fn pure_quartic_brackets() {
        let pot: Potential = QuarticPotential::double_well(0.0).into();
        let config = EnergyScanConfig::default().with_range(0.0, 12.0);
        let b = scan_brackets(&pot, 0.0, &config).unwrap().brackets;
        assert_eq!(b.len(), 2);
        assert!(b[0].lo <= 1.0604 && 1.0604 <= b[0].hi);
        assert!(b[1].lo <= 7.4557 && 7.4557 <= b[1].hi);
    }

    #[test]
    fn sectors() {
        let line: Potential = QuarticPotential::double_well(-1.0).into();
        assert_eq!(sector_nu(&line, Sector::Even).unwrap(), 0.0);
        assert_eq!(sector_nu(&line, Sector::Odd).unwrap(), 1.0);
        let radial: Potential = qes_potential((2.0 + 3f64.sqrt()) / 4.0, 1.0).into();
        assert!(sector_nu(&radial, Sector::Even).is_err());
        assert!((sector_nu(&radial, Sector::Regular).unwrap() - 1.366_025_403_784_438_6).abs() < 1e-15);
    }

    #[test]
    fn merge_relabels_by_energy() {
        let pot: Potential = QuarticPotential::double_well(-3.0).into();
        let config = EnergyScanConfig::default().with_range(-3.0, 5.0);
        let even = eigenvalues(&pot, 0.0, 2, &config).unwrap();
        let odd = eigenvalues(&pot, 1.0, 1, &config).unwrap();
        let merged = merge_sectors(&[even, odd]);
        let e: Vec<f64> = merged.iter().map(|m| m.result.energy).collect();
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(merged[1].result.sector_nu, 1.0);
        assert_eq!(merged[2].k, 2);
    }
}

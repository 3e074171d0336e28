//! Reference eigenvalues by direct integration of `-u'' + V u = E u`.
//!
//! Line problems (even/odd) use a uniform grid on `[0, r_max]`. Radial
//! problems use a logarithmic grid `x = ln r` with `u = r^(1/2) y`, which
//! turns the equation into `y'' = f(x) y`, `f = r^2 (V - E) + 1/4`, again with
//! no first-derivative term. Both are integrated with Numerov's scheme. The
//! log grid is only used for the larger indicial root, where the regular
//! solution dominates outward; the even line state would be recessive there.
//! Levels are
//! bracketed by node counting of the outward solution and refined by
//! bisection on the Casoratian of outward and inward solutions at the outer
//! turning point. Nothing here uses the series machinery.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::potential::{Family, Potential};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("cutoff r_max = {r_max} too small: V(r_max) - E = {margin} < {required} at E = {energy}")]
    CutoffTooSmall { r_max: f64, energy: f64, margin: f64, required: f64 },
    #[error("level {level} could not be bracketed (last interval [{lo}, {hi}])")]
    NotBracketed { level: usize, lo: f64, hi: f64 },
    #[error("boundary {0:?} requires a potential without centrifugal term")]
    Boundary(Boundary),
    #[error("1 + 4*Am2 < 0")]
    ComplexExponent,
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `u ~ r^nu` with the larger indicial root.
    DirichletOrigin,
    /// `u'(0) = 0` on the half line.
    Even1d,
    /// `u(0) = 0` on the half line.
    Odd1d,
}

/// Required margin `V(r_max) - E`.
pub const CUTOFF_MARGIN: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    /// Outer cutoff; `None` picks 6 (quartic) or 4 (sextic).
    pub r_max: Option<f64>,
    /// Extend `r_max` until the margin holds instead of failing.
    pub auto_extend: bool,
    pub r_min: f64,
    pub grid_points: usize,
    /// Matching radius; `None` uses the outer classical turning point.
    pub matching_radius: Option<f64>,
    pub energy_tolerance: f64,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            r_max: None,
            auto_extend: true,
            r_min: 1e-6,
            grid_points: 20000,
            matching_radius: None,
            energy_tolerance: 1e-12,
            execution: Execution::default(),
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: &str| Err(OracleError::InvalidConfig(m.into()));
        if self.grid_points < 100 {
            return bad("grid_points must be at least 100");
        }
        if !(self.r_min > 0.0) || self.r_max.is_some_and(|r| !(r > self.r_min)) {
            return bad("need 0 < r_min < r_max");
        }
        if !(self.energy_tolerance > 0.0) {
            return bad("energy_tolerance must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLevel {
    pub energy: f64,
    /// Nodes of the glued eigenfunction on `(r_min, r_max)`.
    pub nodes: usize,
    pub r_max: f64,
}

/// Behaviour imposed at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    /// `u'(0) = 0`, uniform grid.
    Even,
    /// `u(0) = 0`, uniform grid.
    Odd,
    /// `u ~ r^nu` with `nu > 1/2`, log grid.
    Power(f64),
}

/// `V(r) = P(r) + am2 r^-2` on the half line.
pub struct Problem<'a> {
    pub poly: &'a (dyn Fn(f64) -> f64 + Sync),
    pub am2: f64,
    pub start: Start,
    pub default_r_max: f64,
}

impl Problem<'_> {
    fn v(&self, r: f64) -> f64 {
        if self.am2 == 0.0 {
            (self.poly)(r)
        } else {
            (self.poly)(r) + self.am2 / (r * r)
        }
    }
}

fn boundary_start(am2: f64, boundary: Boundary) -> Result<Start, OracleError> {
    match boundary {
        Boundary::Even1d | Boundary::Odd1d if am2 != 0.0 => Err(OracleError::Boundary(boundary)),
        Boundary::Even1d => Ok(Start::Even),
        Boundary::Odd1d => Ok(Start::Odd),
        Boundary::DirichletOrigin => {
            let d = 1.0 + 4.0 * am2;
            if d <= 0.0 {
                return Err(OracleError::ComplexExponent);
            }
            Ok(Start::Power(0.5 * (1.0 + d.sqrt())))
        }
    }
}

struct Grid {
    x0: f64,
    h: f64,
    n: usize,
    r_max: f64,
    log: bool,
}

impl Grid {
    fn r(&self, i: usize) -> f64 {
        let x = self.x0 + self.h * i as f64;
        if self.log {
            x.exp()
        } else {
            x
        }
    }
}

struct Shot {
    casoratian: f64,
    nodes: usize,
}

impl Problem<'_> {
    fn grid(&self, config: &OracleConfig, e: f64) -> Result<Grid, OracleError> {
        let mut r_max = config.r_max.unwrap_or(self.default_r_max);
        let mut tries = 0;
        while self.v(r_max) - e < CUTOFF_MARGIN {
            if !config.auto_extend || tries > 60 {
                return Err(OracleError::CutoffTooSmall {
                    r_max,
                    energy: e,
                    margin: self.v(r_max) - e,
                    required: CUTOFF_MARGIN,
                });
            }
            r_max *= 1.1;
            tries += 1;
        }
        let n = config.grid_points;
        if let Start::Power(_) = self.start {
            let x0 = config.r_min.ln();
            Ok(Grid { x0, h: (r_max.ln() - x0) / n as f64, n, r_max, log: true })
        } else {
            Ok(Grid { x0: 0.0, h: r_max / n as f64, n, r_max, log: false })
        }
    }

    fn f(&self, g: &Grid, e: f64) -> Vec<f64> {
        (0..=g.n)
            .map(|i| {
                let r = g.r(i);
                if g.log {
                    r * r * ((self.poly)(r) - e) + self.am2 + 0.25
                } else {
                    (self.poly)(r) - e
                }
            })
            .collect()
    }

    /// Outward values on `0..=end` and node count up to `end`.
    fn outward(&self, g: &Grid, f: &[f64], e: f64, end: usize) -> (Vec<f64>, usize) {
        let c = g.h * g.h / 12.0;
        let mut y = vec![0.0; end + 1];
        match self.start {
            Start::Power(nu) => {
                let a2 = -e / (2.0 * (2.0 * nu + 1.0));
                let seed = |r: f64| r.powf(nu - 0.5) * (1.0 + a2 * r * r);
                y[0] = seed(g.r(0));
                y[1] = seed(g.r(1));
            }
            Start::Even => {
                // y(-h) = y(h) in the first Numerov step
                y[0] = 1.0;
                y[1] = (1.0 + 5.0 * c * f[0]) / (1.0 - c * f[1]);
            }
            Start::Odd => {
                y[0] = 0.0;
                y[1] = g.h * (1.0 - e * g.h * g.h / 6.0);
            }
        }
        let mut nodes = 0;
        for i in 1..end {
            let next = (2.0 * (1.0 + 5.0 * c * f[i]) * y[i] - (1.0 - c * f[i - 1]) * y[i - 1]) / (1.0 - c * f[i + 1]);
            y[i + 1] = next;
            if (next < 0.0) != (y[i] < 0.0) && next != 0.0 {
                nodes += 1;
            }
            if next.abs() > 1e200 {
                for v in y.iter_mut().take(i + 2) {
                    *v *= 1e-200;
                }
            }
        }
        (y, nodes)
    }

    /// Inward values on `start..=n`, seeded by the decaying WKB branch.
    fn inward(&self, g: &Grid, f: &[f64], start: usize) -> (Vec<f64>, usize) {
        let n = g.n;
        let mut y = vec![0.0; n + 1];
        y[n] = 1.0;
        let kappa = 0.5 * (f[n].max(0.0).sqrt() + f[n - 1].max(0.0).sqrt());
        y[n - 1] = (f[n] / f[n - 1]).abs().powf(0.25) * (g.h * kappa).exp();
        let c = g.h * g.h / 12.0;
        let mut nodes = 0;
        for i in (start + 1..n).rev() {
            let prev = (2.0 * (1.0 + 5.0 * c * f[i]) * y[i] - (1.0 - c * f[i + 1]) * y[i + 1]) / (1.0 - c * f[i - 1]);
            y[i - 1] = prev;
            if (prev < 0.0) != (y[i] < 0.0) && prev != 0.0 {
                nodes += 1;
            }
            if prev.abs() > 1e200 {
                for v in y.iter_mut().skip(i - 1) {
                    *v *= 1e-200;
                }
            }
        }
        (y, nodes)
    }

    fn matching_index(&self, g: &Grid, e: f64, config: &OracleConfig) -> usize {
        let i = match config.matching_radius {
            Some(rm) => ((rm.ln() - g.x0) / g.h).round() as usize,
            None => {
                // outer turning point of V itself; f carries an extra 1/4
                let w: Vec<f64> = (0..=g.n).map(|i| self.v(g.r(i)) - e).collect();
                w.iter().rposition(|&v| v < 0.0).unwrap_or_else(|| {
                    (0..=g.n).min_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap_or(g.n / 2)
                })
            }
        };
        i.clamp(2, g.n - 3)
    }

    fn shoot(&self, g: &Grid, e: f64, config: &OracleConfig) -> Shot {
        let f = self.f(g, e);
        let m = self.matching_index(g, e, config);
        let (yo, no) = self.outward(g, &f, e, m + 1);
        let (yi, ni) = self.inward(g, &f, m);
        let so = yo[m].abs() + yo[m + 1].abs();
        let si = yi[m].abs() + yi[m + 1].abs();
        let cas = (yo[m] * yi[m + 1] - yo[m + 1] * yi[m]) / (so * si);
        Shot { casoratian: cas, nodes: no + ni }
    }

    /// Number of levels below `e` on the grid.
    fn count(&self, g: &Grid, e: f64) -> usize {
        let f = self.f(g, e);
        self.outward(g, &f, e, g.n).1
    }

    fn floor(&self) -> f64 {
        // coarse search for min V, enough as a starting point
        (0..=4000)
            .map(|i| self.v(1e-3 + (self.default_r_max * 2.0) * i as f64 / 4000.0))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn level(&self, k: usize, config: &OracleConfig) -> Result<OracleLevel, OracleError> {
        config.validate()?;
        let mut lo = self.floor() - 1.0;
        let mut step = 1.0;
        let mut hi = lo + step;
        // grow until more than k levels lie below hi
        loop {
            let g = self.grid(config, hi)?;
            if self.count(&g, hi) > k {
                break;
            }
            lo = hi;
            step *= 2.0;
            hi += step;
            if step > 1e9 {
                return Err(OracleError::NotBracketed { level: k, lo, hi });
            }
        }
        let g = self.grid(config, hi)?;
        for _ in 0..200 {
            let (s_lo, s_hi) = (self.shoot(&g, lo, config), self.shoot(&g, hi, config));
            let below = self.count(&g, lo);
            let above = self.count(&g, hi);
            if below == k && above == k + 1 && (s_lo.casoratian < 0.0) != (s_hi.casoratian < 0.0) {
                return self.bisect(&g, lo, hi, s_lo.casoratian, config);
            }
            if hi - lo < config.energy_tolerance {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.count(&g, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(OracleError::NotBracketed { level: k, lo, hi })
    }

    fn bisect(&self, g: &Grid, mut lo: f64, mut hi: f64, c_lo: f64, config: &OracleConfig) -> Result<OracleLevel, OracleError> {
        let neg = c_lo < 0.0;
        while hi - lo > config.energy_tolerance {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let c = self.shoot(g, mid, config).casoratian;
            if c == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (c < 0.0) == neg {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        let margin = self.v(g.r_max) - e;
        if margin < CUTOFF_MARGIN {
            return Err(OracleError::CutoffTooSmall { r_max: g.r_max, energy: e, margin, required: CUTOFF_MARGIN });
        }
        Ok(OracleLevel { energy: e, nodes: self.shoot(g, e, config).nodes, r_max: g.r_max })
    }
}

/// The `count` lowest levels of a general problem.
pub fn oracle_levels(problem: &Problem, count: usize, config: &OracleConfig) -> Result<Vec<OracleLevel>, OracleError> {
    let ks: Vec<usize> = (0..count).collect();
    config.execution.map(&ks, |&k| problem.level(k, config)).into_iter().collect()
}

fn default_r_max(family: Family) -> f64 {
    match family {
        Family::Quartic => 6.0,
        Family::Sextic => 4.0,
    }
}

/// The `count` lowest eigenvalues of `pot` with the given boundary condition.
pub fn oracle_eigenvalues(
    pot: &Potential,
    boundary: Boundary,
    count: usize,
    config: &OracleConfig,
) -> Result<Vec<f64>, OracleError> {
    Ok(oracle_states(pot, boundary, count, config)?.into_iter().map(|l| l.energy).collect())
}

pub fn oracle_states(
    pot: &Potential,
    boundary: Boundary,
    count: usize,
    config: &OracleConfig,
) -> Result<Vec<OracleLevel>, OracleError> {
    let start = boundary_start(pot.am2(), boundary)?;
    let poly = |r: f64| pot.eval_polynomial(r);
    let problem = Problem { poly: &poly, am2: pot.am2(), start, default_r_max: default_r_max(pot.family()) };
    oracle_levels(&problem, count, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::QuarticPotential;

    fn harmonic(boundary: Boundary) -> Vec<f64> {
        let poly = |r: f64| r * r;
        let start = boundary_start(0.0, boundary).unwrap();
        let p = Problem { poly: &poly, am2: 0.0, start, default_r_max: 6.0 };
        oracle_levels(&p, 3, &OracleConfig::default()).unwrap().iter().map(|l| l.energy).collect()
    }

    #[test]
    fn harmonic_even_and_odd() {
        for (e, exact) in harmonic(Boundary::Even1d).iter().zip([1.0, 5.0, 9.0]) {
            assert!((e - exact).abs() < 1e-8, "{e}");
        }
        for (e, exact) in harmonic(Boundary::Odd1d).iter().zip([3.0, 7.0, 11.0]) {
            assert!((e - exact).abs() < 1e-8, "{e}");
        }
    }

    #[test]
    fn pure_quartic_ground_state() {
        let pot: Potential = QuarticPotential::double_well(0.0).into();
        let e = oracle_eigenvalues(&pot, Boundary::Even1d, 1, &OracleConfig::default()).unwrap();
        assert!((e[0] - 1.060_362_09).abs() < 1e-7);
    }

    #[test]
    fn fixed_short_cutoff_fails() {
        let pot: Potential = QuarticPotential::double_well(0.0).into();
        let config = OracleConfig { r_max: Some(1.5), auto_extend: false, ..Default::default() };
        let err = oracle_eigenvalues(&pot, Boundary::Even1d, 1, &config).unwrap_err();
        assert!(matches!(err, OracleError::CutoffTooSmall { .. }));
    }

    #[test]
    fn line_boundaries_reject_centrifugal_term() {
        let pot: Potential = QuarticPotential::new(1.0, 0.0, 2.0).unwrap().into();
        assert!(oracle_eigenvalues(&pot, Boundary::Odd1d, 1, &OracleConfig::default()).is_err());
    }
}

//! Potential families, indicial exponents at the origin and the exponent
//! sets of the two large-`r` solution branches.
//!
//! The effective radial potential is
//!
//! ```text
//! quartic:  V(r) = A4 r^4 + A2 r^2 + Am2 r^-2            (A4 > 0)
//! sextic:   V(r) = A6 r^6 + A4 r^4 + A2 r^2 + Am2 r^-2    (A6 > 0)
//! ```
//!
//! and a solution branch at infinity behaves as
//! `exp(sum_p alpha_p r^p / p) r^mu sum_m h_m r^-m`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("leading coefficient must be positive for confinement, got {0}")]
    NotConfining(f64),
    #[error("1 + 4*Am2 = {0} < 0: indicial exponents are complex")]
    ComplexIndicial(f64),
    #[error("non-finite potential coefficient")]
    NonFinite,
}

/// Which family a potential belongs to. `N` is half the leading degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Quartic,
    Sextic,
}

impl Family {
    /// Number of exponents `alpha_1 .. alpha_{N+1}` in an asymptotic branch.
    pub fn exponent_count(self) -> usize {
        match self {
            Family::Quartic => 3,
            Family::Sextic => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Quartic => f.write_str("quartic"),
            Family::Sextic => f.write_str("sextic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPotential {
    pub a4: f64,
    pub a2: f64,
    pub am2: f64,
}

impl QuarticPotential {
    pub fn new(a4: f64, a2: f64, am2: f64) -> Result<Self, PotentialError> {
        if !(a4.is_finite() && a2.is_finite() && am2.is_finite()) {
            return Err(PotentialError::NonFinite);
        }
        if a4 <= 0.0 {
            return Err(PotentialError::NotConfining(a4));
        }
        check_centrifugal(am2)?;
        Ok(Self { a4, a2, am2 })
    }

    /// One-dimensional double well `r^4 + a2 r^2`.
    pub fn double_well(a2: f64) -> Self {
        Self { a4: 1.0, a2, am2: 0.0 }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.a4 * r2 * r2 + self.a2 * r2 + centrifugal(self.am2, r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SexticPotential {
    pub a6: f64,
    pub a4: f64,
    pub a2: f64,
    pub am2: f64,
}

impl SexticPotential {
    pub fn new(a6: f64, a4: f64, a2: f64, am2: f64) -> Result<Self, PotentialError> {
        if !(a6.is_finite() && a4.is_finite() && a2.is_finite() && am2.is_finite()) {
            return Err(PotentialError::NonFinite);
        }
        if a6 <= 0.0 {
            return Err(PotentialError::NotConfining(a6));
        }
        check_centrifugal(am2)?;
        Ok(Self { a6, a4, a2, am2 })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        ((self.a6 * r2 + self.a4) * r2 + self.a2) * r2 + centrifugal(self.am2, r2)
    }
}

fn centrifugal(am2: f64, r2: f64) -> f64 {
    if am2 == 0.0 {
        0.0
    } else {
        am2 / r2
    }
}

fn check_centrifugal(am2: f64) -> Result<(), PotentialError> {
    let disc = 1.0 + 4.0 * am2;
    if disc < 0.0 {
        Err(PotentialError::ComplexIndicial(disc))
    } else {
        Ok(())
    }
}

/// A potential of either supported family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Quartic(QuarticPotential),
    Sextic(SexticPotential),
}

impl Potential {
    pub fn family(&self) -> Family {
        match self {
            Potential::Quartic(_) => Family::Quartic,
            Potential::Sextic(_) => Family::Sextic,
        }
    }

    pub fn am2(&self) -> f64 {
        match self {
            Potential::Quartic(p) => p.am2,
            Potential::Sextic(p) => p.am2,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Potential::Quartic(p) => p.eval(r),
            Potential::Sextic(p) => p.eval(r),
        }
    }

    /// The polynomial part of the potential (everything but `Am2 r^-2`).
    pub fn eval_polynomial(&self, r: f64) -> f64 {
        let r2 = r * r;
        match self {
            Potential::Quartic(p) => (p.a4 * r2 + p.a2) * r2,
            Potential::Sextic(p) => ((p.a6 * r2 + p.a4) * r2 + p.a2) * r2,
        }
    }

    /// Greatest lower bound of the spectrum we can certify cheaply.
    ///
    /// For `Am2 >= 0` this is `inf_{r>0} V(r)`. For an attractive centrifugal
    /// term (`-1/4 <= Am2 < 0`) Hardy's inequality gives
    /// `H >= inf_r [P(r) + (Am2 + 1/4) r^-2] >= inf_r P(r)`, so the infimum of
    /// the polynomial part `P` is used.
    pub fn spectral_lower_bound(&self) -> f64 {
        let am2 = self.am2().max(0.0);
        let f = |r: f64| {
            let v = self.eval_polynomial(r);
            if am2 > 0.0 {
                v + am2 / (r * r)
            } else {
                v
            }
        };
        // V grows at least like r^4 past the region where the subleading
        // terms matter, so a bounded search window is enough.
        let scale = match self {
            Potential::Quartic(p) => 2.0 + (p.a2.abs() / p.a4).sqrt() + (p.am2.abs() / p.a4).powf(1.0 / 6.0),
            Potential::Sextic(p) => {
                2.0 + (p.a4.abs() / p.a6).sqrt() + (p.a2.abs() / p.a6).powf(0.25) + (p.am2.abs() / p.a6).powf(0.125)
            }
        };
        let lo: f64 = if am2 > 0.0 { 1e-3 } else { 0.0 };
        let samples = 4000;
        let mut best_r = lo;
        let mut best = f(lo.max(1e-300));
        for i in 0..=samples {
            let r = lo + (scale - lo) * i as f64 / samples as f64;
            let v = f(r.max(1e-300));
            if v < best {
                best = v;
                best_r = r;
            }
        }
        let h = (scale - lo) / samples as f64;
        let (mut a, mut b) = ((best_r - h).max(lo), best_r + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c.max(1e-300)) < f(d.max(1e-300)) {
                b = d;
            } else {
                a = c;
            }
        }
        best.min(f((0.5 * (a + b)).max(1e-300)))
    }
}

impl From<QuarticPotential> for Potential {
    fn from(p: QuarticPotential) -> Self {
        Potential::Quartic(p)
    }
}

impl From<SexticPotential> for Potential {
    fn from(p: SexticPotential) -> Self {
        Potential::Sextic(p)
    }
}

/// The two roots of `nu (nu - 1) = Am2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialPair {
    pub nu_regular: f64,
    pub nu_other: f64,
    /// Set when `1 + 4 Am2 = 0`: the roots coincide and the second solution
    /// is logarithmic.
    pub degenerate: bool,
}

pub fn indicial_exponents(am2: f64) -> Result<IndicialPair, PotentialError> {
    let disc = 1.0 + 4.0 * am2;
    if !disc.is_finite() {
        return Err(PotentialError::NonFinite);
    }
    if disc < 0.0 {
        return Err(PotentialError::ComplexIndicial(disc));
    }
    let root = disc.sqrt();
    Ok(IndicialPair {
        nu_regular: 0.5 * (1.0 + root),
        nu_other: 0.5 * (1.0 - root),
        degenerate: disc == 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Exponentially decaying at infinity.
    Recessive,
    /// Exponentially growing at infinity.
    Dominant,
}

/// Exponents of one asymptotic solution branch.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSolutionSpec {
    /// `alphas[p - 1]` holds `alpha_p`; the last entry is the leading rate.
    pub alphas: Vec<f64>,
    pub mu: f64,
    pub branch: Branch,
}

impl AsymptoticSolutionSpec {
    pub fn alpha(&self, p: usize) -> f64 {
        self.alphas[p - 1]
    }

    pub fn leading(&self) -> f64 {
        *self.alphas.last().expect("at least one exponent")
    }

    pub fn family(&self) -> Option<Family> {
        match self.alphas.len() {
            3 => Some(Family::Quartic),
            4 => Some(Family::Sextic),
            _ => None,
        }
    }
}

pub fn quartic_exponents(pot: &QuarticPotential, branch: Branch) -> AsymptoticSolutionSpec {
    let root = pot.a4.sqrt();
    let sign = match branch {
        Branch::Recessive => -1.0,
        Branch::Dominant => 1.0,
    };
    let a3 = sign * root;
    let a1 = sign * pot.a2 / (2.0 * root);
    AsymptoticSolutionSpec { alphas: vec![a1, 0.0, a3], mu: -1.0, branch }
}

pub fn sextic_exponents(pot: &SexticPotential, branch: Branch) -> AsymptoticSolutionSpec {
    let root = pot.a6.sqrt();
    let sign = match branch {
        Branch::Recessive => -1.0,
        Branch::Dominant => 1.0,
    };
    let a4 = sign * root;
    let a2 = sign * pot.a4 / (2.0 * root);
    let shift = (4.0 * pot.a6 * pot.a2 - pot.a4 * pot.a4) / (8.0 * pot.a6 * root);
    let mu = -1.5 + sign * shift;
    AsymptoticSolutionSpec { alphas: vec![0.0, a2, 0.0, a4], mu, branch }
}

/// Quasi-exactly solvable sextic family
/// `r^6 - (4s + 4J - 2) r^2 + (4s - 1)(4s - 3)/4 r^-2`.
pub fn qes_potential(s: f64, j: f64) -> SexticPotential {
    SexticPotential {
        a6: 1.0,
        a4: 0.0,
        a2: -(4.0 * s + 4.0 * j - 2.0),
        am2: 0.25 * (4.0 * s - 1.0) * (4.0 * s - 3.0),
    }
}

//! Scalar abstraction shared by the recurrences and Wronskian kernels.
//!
//! Two implementations exist: plain `f64` and [`Ext`], a 192-bit binary
//! floating point number. The extended type is used when the Gamma-weighted
//! closed form suffers cancellation beyond what double precision resolves.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use dashu_base::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_ratio::RBig;

use crate::wronskian::log_gamma::ln_gamma_signed;

/// Significand bits carried by [`Ext`].
pub const EXT_BITS: usize = 192;

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    /// `(ln |Gamma(x)|, sign Gamma(x))`, `None` at poles.
    fn ln_gamma_signed(&self) -> Option<(Self, f64)>;
    fn is_zero(&self) -> bool;
    /// Unit roundoff of the representation.
    fn epsilon() -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn powf(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln_gamma_signed(&self) -> Option<(Self, f64)> {
        ln_gamma_signed(*self).ok()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

type Big = FBig<HalfEven, 2>;

/// Extended precision real with [`EXT_BITS`] significand bits.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Ext(Big);

impl Ext {
    fn wrap(x: Big) -> Self {
        Ext(x.with_precision(EXT_BITS).value())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Ext::wrap(RBig::from_parts_signed(num.into(), den.into()).to_float(EXT_BITS).value())
    }

    fn from_rbig(r: &RBig) -> Self {
        Ext::wrap(r.to_float(EXT_BITS).value())
    }

    pub fn pi() -> Ext {
        static PI: OnceLock<Ext> = OnceLock::new();
        PI.get_or_init(|| {
            // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
            let atan_inv = |q: i64| {
                let x = Ext::from_ratio(1, q);
                let x2 = x.clone() * x.clone();
                let mut power = x;
                let mut sum = Ext::zero();
                let tiny = 2f64.powi(-(EXT_BITS as i32) - 8);
                let mut k = 0i64;
                loop {
                    let term = power.clone() / Ext::from_f64((2 * k + 1) as f64);
                    if term.to_f64().abs() < tiny {
                        break;
                    }
                    sum = if k % 2 == 0 { sum + term } else { sum - term };
                    power = power * x2.clone();
                    k += 1;
                }
                sum
            };
            Ext::from_f64(16.0) * atan_inv(5) - Ext::from_f64(4.0) * atan_inv(239)
        })
        .clone()
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:e})", self.to_f64())
    }
}

macro_rules! ext_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Ext {
            type Output = Ext;
            fn $method(self, rhs: Ext) -> Ext {
                Ext($trait::$method(self.0, rhs.0))
            }
        }
    };
}

ext_binop!(Add, add);
ext_binop!(Sub, sub);
ext_binop!(Mul, mul);
ext_binop!(Div, div);

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext(-self.0)
    }
}

impl Real for Ext {
    fn from_f64(x: f64) -> Self {
        Ext::wrap(Big::try_from(x).expect("finite value"))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn abs(&self) -> Self {
        Ext(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        Ext(self.0.sqrt())
    }
    fn ln(&self) -> Self {
        Ext(self.0.ln())
    }
    fn exp(&self) -> Self {
        Ext(self.0.exp())
    }
    fn ln_gamma_signed(&self) -> Option<(Self, f64)> {
        ext_ln_gamma_signed(self)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }
    fn epsilon() -> f64 {
        2f64.powi(1 - EXT_BITS as i32)
    }
}

/// Number of Stirling correction terms and the argument above which the
/// asymptotic series is used directly.
const STIRLING_TERMS: usize = 30;
const STIRLING_THRESHOLD: f64 = 40.0;

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=STIRLING_TERMS`.
fn stirling_coefficients() -> &'static [Ext] {
    static COEFFS: OnceLock<Vec<Ext>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n_max = 2 * STIRLING_TERMS;
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut bern: Vec<RBig> = vec![RBig::ONE];
        for m in 1..=n_max {
            let mut acc = RBig::ZERO;
            let mut binom = RBig::ONE; // C(m+1, 0)
            for (k, b) in bern.iter().enumerate() {
                acc += &binom * b;
                binom = binom * RBig::from((m + 1 - k) as u64) / RBig::from((k + 1) as u64);
            }
            bern.push(-acc / RBig::from((m + 1) as u64));
        }
        (1..=STIRLING_TERMS)
            .map(|k| {
                let denom = RBig::from((2 * k * (2 * k - 1)) as u64);
                Ext::from_rbig(&(&bern[2 * k] / denom))
            })
            .collect()
    })
}

fn ext_ln_gamma_signed(x: &Ext) -> Option<(Ext, f64)> {
    let xf = x.to_f64();
    if xf <= 0.0 && xf == xf.round() && (x.clone() - Ext::from_f64(xf)).is_zero() {
        return None;
    }
    // Shift upward: Gamma(x) = Gamma(x + n) / prod_{i<n} (x + i).
    let mut y = x.clone();
    let mut prod = Ext::one();
    let mut shifted = false;
    while y.to_f64() < STIRLING_THRESHOLD {
        prod = prod * y.clone();
        y = y + Ext::one();
        shifted = true;
    }
    let half = Ext::from_ratio(1, 2);
    let ln_two_pi = (Ext::from_f64(2.0) * Ext::pi()).ln();
    let inv = Ext::one() / y.clone();
    let inv2 = inv.clone() * inv.clone();
    let mut corr = Ext::zero();
    let mut p = inv;
    for c in stirling_coefficients() {
        corr = corr + c.clone() * p.clone();
        p = p * inv2.clone();
    }
    let mut lg = (y.clone() - half.clone()) * y.ln() - y + half * ln_two_pi + corr;
    let mut sign = 1.0;
    if shifted {
        if prod.to_f64() < 0.0 {
            sign = -1.0;
        }
        lg = lg - prod.abs().ln();
    }
    Some((lg, sign))
}

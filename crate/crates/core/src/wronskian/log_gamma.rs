//! Real log-gamma in double precision.
//!
//! Arguments are reduced into `[1.5, 2.5)` where the Taylor series of
//! `ln Gamma(2 + z)` in terms of `zeta(k) - 1` converges quickly and has no
//! cancellation at the zeros `x = 1, 2`. Large arguments use the Stirling
//! series; negative arguments use reflection.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum GammaError {
    #[error("Gamma has a pole at {0}")]
    Pole(f64),
    #[error("non-finite argument")]
    NonFinite,
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// `zeta(k) - 1` for `k = 2..=31`.
const ZETA_MINUS_ONE: [f64; 30] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
    0.000_994_575_127_818_085_3,
    0.000_494_188_604_119_464_6,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_1,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_840e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_961e-7,
    4.769_329_867_878_065e-7,
    2.384_505_027_277_330e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_429e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
];

/// Stirling coefficients `B_{2k} / (2k (2k - 1))`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Gamma(2 + z)` for `|z| <= 1/2`.
fn ln_gamma_two_plus(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = z * z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        let term = c * zk / k;
        sum += if i % 2 == 0 { term } else { -term };
        zk *= z;
    }
    (1.0 - EULER_GAMMA) * z + sum
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x >= 10.0 {
        return ln_gamma_stirling(x);
    }
    if x < 0.5 {
        return ln_gamma_positive(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        // ln Gamma(x) = ln Gamma(2 + z) - ln(1 + z), z = x - 1
        let z = x - 1.0;
        return ln_gamma_two_plus(z) - z.ln_1p();
    }
    let mut y = x;
    let mut prod = 1.0;
    while y >= 2.5 {
        y -= 1.0;
        prod *= y;
    }
    ln_gamma_two_plus(y - 2.0) + if prod == 1.0 { 0.0 } else { prod.ln() }
}

/// `(ln |Gamma(x)|, sign Gamma(x))`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64), GammaError> {
    if !x.is_finite() {
        return Err(GammaError::NonFinite);
    }
    if x > 0.0 {
        return Ok((ln_gamma_positive(x), 1.0));
    }
    if x == x.floor() {
        return Err(GammaError::Pole(x));
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let frac = x - x.round();
    let s = (PI * frac).sin();
    let sin_pi_x = if (x.round() as i64) % 2 == 0 { s } else { -s };
    let lg = PI.ln() - sin_pi_x.abs().ln() - ln_gamma_positive(1.0 - x);
    let sign = if (x.floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
    Ok((lg, sign))
}

/// Natural log of `|Gamma(x)|`.
pub fn log_gamma(x: f64) -> Result<f64, GammaError> {
    ln_gamma_signed(x).map(|(lg, _)| lg)
}

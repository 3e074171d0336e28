use super::{quartic_b_seq, sextic_b_seq, SeriesError};
use crate::potential::{AsymptoticSolutionSpec, Potential};

/// Residual of the differential equation for `w` at `r`, with `w` built
/// from the first `k + 1` power-series coefficients.
pub fn residual_check(
    pot: &Potential,
    spec: &AsymptoticSolutionSpec,
    nu: f64,
    e: f64,
    r: f64,
    k: usize,
) -> Result<f64, SeriesError> {
    if spec.family() != Some(pot.family()) {
        return Err(SeriesError::WrongFamily);
    }
    let b = match pot {
        Potential::Quartic(q) => quartic_b_seq(spec.alpha(1), spec.alpha(3), q.a2, nu, e, k)?,
        Potential::Sextic(s) => sextic_b_seq(spec.alpha(2), spec.alpha(4), s.a4, s.a2, nu, e, k)?,
    };
    // S = sum b_n r^n and its first two derivatives
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (n, bn) in b.iter().enumerate().rev() {
        let nf = n as f64;
        s0 = s0 * r + bn;
        if n >= 1 {
            s1 = s1 * r + nf * bn;
        }
        if n >= 2 {
            s2 = s2 * r + nf * (nf - 1.0) * bn;
        }
    }
    let rn = r.powf(nu);
    let w = rn * s0;
    let w1 = rn * (nu * s0 / r + s1);
    let w2 = rn * (nu * (nu - 1.0) * s0 / (r * r) + 2.0 * nu * s1 / r + s2);
    let am2 = pot.am2();
    let res = match pot {
        Potential::Quartic(q) => {
            let (a1, a3) = (spec.alpha(1), spec.alpha(3));
            w2 + 2.0 * (a3 * r * r - a1) * w1
                + (-2.0 * q.a2 * r * r + 2.0 * a3 * r + e + a1 * a1 - am2 / (r * r)) * w
        }
        Potential::Sextic(s) => {
            let (a2, a4) = (spec.alpha(2), spec.alpha(4));
            let r2 = r * r;
            w2 + 2.0 * (a4 * r2 * r - a2 * r) * w1
                + (-2.0 * s.a4 * r2 * r2 + (3.0 * a4 + a2 * a2 - s.a2) * r2 + e - a2 - am2 / r2) * w
        }
    };
    Ok(res.abs())
}

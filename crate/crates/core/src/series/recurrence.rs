//! Three- and five-term recurrences for `h_m` and `b_n`.
//!
//! The regular solution is written `u = P(r) w(r)` with
//! `P = exp(alpha_3 r^3 / 3 - alpha_1 r)` (quartic) or
//! `P = exp(alpha_4 r^4 / 4 - alpha_2 r^2 / 2)` (sextic), and
//! `w = r^nu sum b_n r^n`.

use super::{SeriesError, QES_ZERO_THRESHOLD};
use crate::potential::Family;
use crate::real::Real;

/// Where a sextic `h` sequence terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QesTermination {
    /// Last index with a structurally nonzero coefficient.
    pub last_nonzero: usize,
    /// Index at which the `h_{m-4}` coefficient of the recurrence vanishes.
    pub critical_index: usize,
}

fn at<T: Real>(v: &[T], i: isize) -> T {
    if i < 0 {
        T::zero()
    } else {
        v[i as usize].clone()
    }
}

pub fn quartic_h_seq<T: Real>(a1: T, a3: T, am2: T, e: T, m_max: usize) -> Vec<T> {
    let two = T::from_f64(2.0);
    let shift = e + a1.clone() * a1.clone();
    let mut h = Vec::with_capacity(m_max + 1);
    h.push(T::one());
    for m in 1..=m_max {
        let mi = m as isize;
        let mf = T::from_usize(m);
        let c3 = T::from_usize((m - 1) * m.saturating_sub(2)) - am2.clone();
        let rhs = shift.clone() * at(&h, mi - 1) - two.clone() * a1.clone() * (mf.clone() - T::one()) * at(&h, mi - 2)
            + c3 * at(&h, mi - 3);
        h.push(rhs / (two.clone() * a3.clone() * mf));
    }
    h
}

/// Sextic `h_m`; odd indices vanish identically. When the series terminates
/// (QES case) the roundoff tail beyond the termination point is zeroed.
pub fn sextic_h_seq<T: Real>(
    a2: T,
    a4: T,
    mu: T,
    am2: T,
    e: T,
    m_max: usize,
) -> (Vec<T>, Option<QesTermination>) {
    let two = T::from_f64(2.0);
    let mut h = Vec::with_capacity(m_max + 1);
    h.push(T::one());
    for m in 1..=m_max {
        if m % 2 == 1 {
            h.push(T::zero());
            continue;
        }
        let mi = m as isize;
        let mf = T::from_usize(m);
        let c2 = e.clone() + a2.clone() * (T::from_f64(5.0) - two.clone() * mf.clone() + two.clone() * mu.clone());
        let x = mf.clone() - T::from_f64(4.0) - mu.clone();
        let c4 = x.clone() * (x + T::one()) - am2.clone();
        let rhs = c2 * at(&h, mi - 2) + c4 * at(&h, mi - 4);
        h.push(rhs / (two.clone() * a4.clone() * mf));
    }
    let term = detect_termination(&h, &mu, &am2);
    if let Some(t) = term {
        for v in h.iter_mut().skip(t.last_nonzero + 1) {
            *v = T::zero();
        }
    }
    (h, term)
}

fn detect_termination<T: Real>(h: &[T], mu: &T, am2: &T) -> Option<QesTermination> {
    let mu = mu.to_f64();
    let am2 = am2.to_f64();
    let m_max = h.len().checked_sub(1)?;
    let mut peak: f64 = 1.0;
    let mut m = 4;
    while m <= m_max + 2 {
        // h_{m-2} must exist for the check
        if m - 2 > m_max {
            break;
        }
        for v in &h[..m - 2] {
            peak = peak.max(v.to_f64().abs());
        }
        let x = m as f64 - 4.0 - mu;
        let c4 = x * (x + 1.0) - am2;
        if c4.abs() <= 1e-9 * (am2.abs() + (m * m) as f64) && h[m - 2].to_f64().abs() <= QES_ZERO_THRESHOLD * peak {
            return Some(QesTermination { last_nonzero: m - 4, critical_index: m });
        }
        m += 2;
    }
    None
}

/// Taylor coefficients `p_0..p_count` of the prefactor `P(r)`.
///
/// `low` and `lead` are `alpha_1, alpha_3` (quartic) or `alpha_2, alpha_4`
/// (sextic).
pub fn prefactor_coefficients<T: Real>(family: Family, low: &T, lead: &T, count: usize) -> Vec<T> {
    // ln P = sum c_j r^j
    let mut c = vec![T::zero(); count + 1];
    let mut set = |j: usize, v: T| {
        if j <= count {
            c[j] = v;
        }
    };
    match family {
        Family::Quartic => {
            set(1, -low.clone());
            set(3, lead.clone() / T::from_f64(3.0));
        }
        Family::Sextic => {
            set(2, -low.clone() / T::from_f64(2.0));
            set(4, lead.clone() / T::from_f64(4.0));
        }
    }
    let mut p = Vec::with_capacity(count + 1);
    p.push(T::one());
    for n in 1..=count {
        let mut acc = T::zero();
        for j in 1..=n {
            if !c[j].is_zero() {
                acc = acc + T::from_usize(j) * c[j].clone() * p[n - j].clone();
            }
        }
        p.push(acc / T::from_usize(n));
    }
    p
}

/// Solves one step `n (n - 1 + 2 nu) b_n = rhs`. At a vanishing leading
/// factor the free coefficient is fixed so that the coefficient of
/// `r^{nu + n}` in `u = P w` vanishes, which keeps `u` a pure Frobenius
/// solution.
fn step<T: Real>(
    n: usize,
    nu: &T,
    terms: &[T],
    b: &[T],
    prefactor: &mut Option<Vec<T>>,
    family: Family,
    low: &T,
    lead: &T,
) -> Result<T, SeriesError> {
    let rhs = terms.iter().cloned().fold(T::zero(), |a, t| a + t);
    let gap = T::from_usize(n) - T::one() + T::from_f64(2.0) * nu.clone();
    if gap.to_f64().abs() > 1e-12 {
        return Ok(rhs / (T::from_usize(n) * gap));
    }
    let size: f64 = terms.iter().map(|t| t.to_f64().abs()).sum();
    if rhs.to_f64().abs() > 1e-10 * size.max(f64::MIN_POSITIVE) {
        return Err(SeriesError::InconsistentRecurrence { n, rhs: rhs.to_f64() });
    }
    let p = prefactor.get_or_insert_with(|| prefactor_coefficients(family, low, lead, n));
    if p.len() <= n {
        *p = prefactor_coefficients(family, low, lead, n);
    }
    let mut acc = T::zero();
    for j in 1..=n {
        acc = acc + p[j].clone() * b[n - j].clone();
    }
    Ok(-acc)
}

pub fn quartic_b_seq<T: Real>(a1: T, a3: T, a2: T, nu: T, e: T, k_max: usize) -> Result<Vec<T>, SeriesError> {
    let two = T::from_f64(2.0);
    let shift = e + a1.clone() * a1.clone();
    let mut prefactor = None;
    let mut b: Vec<T> = Vec::with_capacity(k_max + 1);
    b.push(T::one());
    for n in 1..=k_max {
        let ni = n as isize;
        let nf = T::from_usize(n);
        let terms = [
            two.clone() * a1.clone() * (nf.clone() - T::one() + nu.clone()) * at(&b, ni - 1),
            -(shift.clone() * at(&b, ni - 2)),
            -(two.clone() * a3.clone() * (nf - two.clone() + nu.clone()) * at(&b, ni - 3)),
            two.clone() * a2.clone() * at(&b, ni - 4),
        ];
        let v = step(n, &nu, &terms, &b, &mut prefactor, Family::Quartic, &a1, &a3)?;
        b.push(v);
    }
    Ok(b)
}

pub fn sextic_b_seq<T: Real>(
    a2: T,
    a4: T,
    pot_a4: T,
    pot_a2: T,
    nu: T,
    e: T,
    k_max: usize,
) -> Result<Vec<T>, SeriesError> {
    let two = T::from_f64(2.0);
    let two_nu = two.clone() * nu.clone();
    let quad = pot_a2 - a2.clone() * a2.clone();
    let mut prefactor = None;
    let mut b: Vec<T> = Vec::with_capacity(k_max + 1);
    b.push(T::one());
    for n in 1..=k_max {
        let ni = n as isize;
        let twon = T::from_usize(2 * n);
        let terms = [
            (a2.clone() * (twon.clone() - T::from_f64(3.0) + two_nu.clone()) - e.clone()) * at(&b, ni - 2),
            (quad.clone() - a4.clone() * (twon - T::from_f64(5.0) + two_nu.clone())) * at(&b, ni - 4),
            two.clone() * pot_a4.clone() * at(&b, ni - 6),
        ];
        let v = step(n, &nu, &terms, &b, &mut prefactor, Family::Sextic, &a2, &a4)?;
        b.push(v);
    }
    Ok(b)
}

//! Series coefficients checked against exact rational arithmetic.
//!
//! The references here never use the recurrences of the crate. The
//! asymptotic coefficients come from applying the transformed differential
//! operator to a formal Laurent series and solving order by order; the
//! power-series coefficients come from the plain Frobenius expansion of the
//! Schrodinger equation divided by the exponential prefactor.

use std::collections::BTreeMap;

use dashu_ratio::RBig;

use anharmonic::potential::{qes_potential, quartic_exponents, sextic_exponents, Branch, QuarticPotential, SexticPotential};
use anharmonic::series::{
    gamma_table, quartic_b_seq, quartic_gamma, quartic_h, quartic_h_seq, sextic_b, sextic_gamma, sextic_h, sextic_h_seq,
    SeriesError, SumStatus, Summation,
};
use anharmonic::potential::Family;

type Laurent = BTreeMap<i64, RBig>;

fn q(n: i64, d: i64) -> RBig {
    RBig::from(n) / RBig::from(d)
}

fn f(x: &RBig) -> f64 {
    x.to_f64().value()
}

fn poly(terms: &[(i64, RBig)]) -> Laurent {
    let mut out = Laurent::new();
    for (e, c) in terms {
        add_term(&mut out, *e, c.clone());
    }
    out
}

fn add_term(l: &mut Laurent, e: i64, c: RBig) {
    let v = l.remove(&e).unwrap_or(RBig::ZERO) + c;
    if v != RBig::ZERO {
        l.insert(e, v);
    }
}

fn add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (e, c) in b {
        add_term(&mut out, *e, c.clone());
    }
    out
}

fn scale(a: &Laurent, s: &RBig) -> Laurent {
    a.iter().map(|(e, c)| (*e, c * s)).filter(|(_, c)| *c != RBig::ZERO).collect()
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            add_term(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn deriv(a: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (e, c) in a {
        add_term(&mut out, e - 1, c * RBig::from(*e));
    }
    out
}

/// `Q` in `f'' + 2 S' f' + Q f = 0`, the equation for `f` when
/// `u = exp(S) f` solves `-u'' + (V - E) u = 0`.
fn transformed_q(s_prime: &Laurent, v: &Laurent, e: &RBig) -> Laurent {
    let mut q = add(&deriv(s_prime), &mul(s_prime, s_prime));
    q = add(&q, &scale(v, &RBig::from(-1)));
    add_term(&mut q, 0, e.clone());
    q
}

fn apply(f: &Laurent, s_prime: &Laurent, q: &Laurent) -> Laurent {
    let f1 = deriv(f);
    let mut out = deriv(&f1);
    out = add(&out, &scale(&mul(s_prime, &f1), &RBig::from(2)));
    add(&out, &mul(q, f))
}

/// Formal solution `f = sum h_m r^-m`, `h_0 = 1`, solved order by order.
fn asymptotic_coefficients(s_prime: &Laurent, v: &Laurent, e: &RBig, m_max: usize) -> Vec<RBig> {
    let q = transformed_q(s_prime, v, e);
    assert!(q.keys().all(|&k| k <= 0), "exponents do not cancel the growth: {q:?}");
    let (&d, lead) = s_prime.iter().next_back().unwrap();
    let mut h = vec![RBig::ONE];
    for m in 1..=m_max {
        let f: Laurent = h.iter().enumerate().map(|(k, c)| (-(k as i64), c.clone())).collect();
        let res = apply(&f, s_prime, &q);
        let at = res.get(&(d - 1 - m as i64)).cloned().unwrap_or(RBig::ZERO);
        // the new term contributes -2 lead m h_m at this order
        h.push(at / (RBig::from(2) * lead * RBig::from(m as i64)));
    }
    h
}

/// Frobenius coefficients of `u = sum c_n r^(nu + n)`, with the free
/// coefficient of a vanishing indicial factor set to zero.
fn frobenius(v: &Laurent, nu: &RBig, e: &RBig, n_max: usize) -> Vec<RBig> {
    let am2 = v.get(&-2).cloned().unwrap_or(RBig::ZERO);
    let mut c: Vec<RBig> = vec![RBig::ONE];
    for n in 1..=n_max {
        let p = nu + RBig::from(n as i64);
        let factor = &p * (&p - RBig::ONE) - &am2;
        let mut rhs = RBig::ZERO;
        if n >= 2 {
            rhs -= e * &c[n - 2];
        }
        for (&k, vk) in v.range(1..) {
            let j = n as i64 - 2 - k;
            if j >= 0 {
                rhs += vk * &c[j as usize];
            }
        }
        if factor == RBig::ZERO {
            assert_eq!(rhs, RBig::ZERO, "logarithmic case");
            c.push(RBig::ZERO);
        } else {
            c.push(rhs / factor);
        }
    }
    c
}

/// Taylor coefficients of `exp(g)` for a polynomial `g` with `g(0) = 0`.
fn exp_series(g: &Laurent, n_max: usize) -> Vec<RBig> {
    let mut e = vec![RBig::ONE];
    for n in 1..=n_max {
        let mut acc = RBig::ZERO;
        for (&j, gj) in g.range(1..=n as i64) {
            acc += RBig::from(j) * gj * &e[n - j as usize];
        }
        e.push(acc / RBig::from(n as i64));
    }
    e
}

fn cauchy(a: &[RBig], b: &[RBig], n_max: usize) -> Vec<RBig> {
    (0..=n_max).map(|n| (0..=n).fold(RBig::ZERO, |s, i| s + &a[i] * &b[n - i])).collect()
}

fn assert_close(got: &[f64], want: &[RBig], rel: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: length");
    let scale = want.iter().map(|w| f(w).abs()).fold(0.0, f64::max);
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        let w = f(w);
        let tol = rel * w.abs().max(1e-14 * scale);
        assert!((g - w).abs() <= tol, "{what}[{i}]: got {g:e}, exact {w:e}");
    }
}

fn quartic_case(a2: i64, am2: RBig, e: RBig) {
    // A4 = 1, recessive: S = -r^3/3 + a1 r + mu ln r
    let a3 = RBig::from(-1);
    let a1 = RBig::from(a2) / (RBig::from(2) * &a3);
    let mu = RBig::from(-1);
    let s_prime = poly(&[(2, a3.clone()), (0, a1.clone()), (-1, mu.clone())]);
    let v = poly(&[(4, RBig::ONE), (2, RBig::from(a2)), (-2, am2.clone())]);
    let exact = asymptotic_coefficients(&s_prime, &v, &e, 40);

    let pot = QuarticPotential::new(1.0, a2 as f64, f(&am2)).unwrap();
    let spec = quartic_exponents(&pot, Branch::Recessive);
    assert_eq!(spec.alpha(1), f(&a1));
    assert_eq!(spec.alpha(3), f(&a3));
    assert_eq!(spec.mu, f(&mu));
    let got = quartic_h_seq(spec.alpha(1), spec.alpha(3), f(&am2), f(&e), 40);
    assert_close(&got, &exact, 1e-12, "quartic h");
}

#[test]
fn quartic_asymptotic_coefficients_match_formal_solution() {
    quartic_case(-3, RBig::ZERO, q(7, 5));
    quartic_case(2, q(3, 4), q(-1, 3));
    quartic_case(-10, RBig::from(2), RBig::from(11));
}

fn sextic_spec_exact(a4: &RBig, a2: &RBig) -> (RBig, RBig, RBig) {
    // A6 = 1, recessive: S = -r^4/4 + b2 r^2/2 + mu ln r
    let b4 = RBig::from(-1);
    let b2 = a4 / (RBig::from(2) * &b4);
    // the r^2 term of S'' + S'^2 - V must vanish
    let mu = (a2 - &b2 * &b2 - RBig::from(3) * &b4) / (RBig::from(2) * &b4);
    (b4, b2, mu)
}

fn sextic_case(a4: RBig, a2: RBig, am2: RBig, e: RBig, m_max: usize) -> (Vec<RBig>, Vec<f64>, Option<usize>) {
    let (b4, b2, mu) = sextic_spec_exact(&a4, &a2);
    let s_prime = poly(&[(3, b4.clone()), (1, b2.clone()), (-1, mu.clone())]);
    let v = poly(&[(6, RBig::ONE), (4, a4.clone()), (2, a2.clone()), (-2, am2.clone())]);
    let exact = asymptotic_coefficients(&s_prime, &v, &e, m_max);

    let pot = SexticPotential::new(1.0, f(&a4), f(&a2), f(&am2)).unwrap();
    let spec = sextic_exponents(&pot, Branch::Recessive);
    assert_eq!(spec.alpha(2), f(&b2));
    assert_eq!(spec.alpha(4), f(&b4));
    assert!((spec.mu - f(&mu)).abs() < 1e-15);
    let (got, term) = sextic_h_seq(spec.alpha(2), spec.alpha(4), spec.mu, f(&am2), f(&e), m_max);
    (exact, got, term.map(|t| t.last_nonzero))
}

#[test]
fn sextic_asymptotic_coefficients_match_formal_solution() {
    let (exact, got, term) = sextic_case(q(1, 2), RBig::from(-2), q(3, 4), q(2, 3), 40);
    assert!(term.is_none());
    assert_close(&got, &exact, 1e-12, "sextic h");
    for (m, h) in exact.iter().enumerate() {
        if m % 2 == 1 {
            assert_eq!(*h, RBig::ZERO);
        }
    }
    let (exact, got, _) = sextic_case(RBig::from(-3), RBig::from(1), RBig::ZERO, q(-5, 2), 40);
    assert_close(&got, &exact, 1e-12, "sextic h");
}

#[test]
fn qes_series_terminate_exactly() {
    // s = 2 gives rational levels: E = 0 for J = 1 and E = +-8 for J = 2
    let s = RBig::from(2);
    let am2 = (RBig::from(4) * &s - RBig::ONE) * (RBig::from(4) * &s - RBig::from(3)) / RBig::from(4);
    for (j, e, last) in [(1, 0, 0), (2, 8, 2), (2, -8, 2)] {
        let a2 = -(RBig::from(4) * &s + RBig::from(4 * j) - RBig::from(2));
        let (exact, got, term) = sextic_case(RBig::ZERO, a2, am2.clone(), RBig::from(e), 30);
        assert!(exact[last] != RBig::ZERO, "J={j} E={e}");
        assert!(exact[last + 1..].iter().all(|h| *h == RBig::ZERO), "J={j} E={e}: exact series does not terminate");
        assert_eq!(term, Some(last), "J={j} E={e}");
        assert_close(&got, &exact, 1e-13, "qes h");
        assert!(got[last + 1..].iter().all(|h| *h == 0.0));
    }
    let pot = qes_potential(2.0, 2.0);
    let spec = sextic_exponents(&pot, Branch::Recessive);
    let h = sextic_h(&spec, pot.am2, 8.0, 30).unwrap();
    assert!(h.qes_terminated);
    assert_eq!(h.termination_index, Some(2));
}

fn quartic_power_case(a2: i64, am2: RBig, nu: RBig, e: RBig) {
    let n = 30;
    let a3 = RBig::from(-1);
    let a1 = RBig::from(a2) / (RBig::from(2) * &a3);
    let v = poly(&[(4, RBig::ONE), (2, RBig::from(a2)), (-2, am2.clone())]);
    let c = frobenius(&v, &nu, &e, n);
    // w = u / P with P = exp(a3 r^3 / 3 - a1 r)
    let inv_p = exp_series(&poly(&[(3, -&a3 / RBig::from(3)), (1, a1.clone())]), n);
    let exact = cauchy(&c, &inv_p, n);
    let got = quartic_b_seq(f(&a1), f(&a3), a2 as f64, f(&nu), f(&e), n).unwrap();
    assert_close(&got, &exact, 1e-11, "quartic b");
}

#[test]
fn quartic_power_series_matches_frobenius_expansion() {
    quartic_power_case(-3, RBig::ZERO, RBig::ZERO, q(7, 5));
    quartic_power_case(-3, RBig::ZERO, RBig::ONE, q(7, 5));
    quartic_power_case(4, RBig::from(2), RBig::from(2), q(-9, 4));
    quartic_power_case(-6, q(3, 4), q(3, 2), RBig::from(5));
}

#[test]
fn sextic_power_series_matches_frobenius_expansion() {
    let n = 30;
    for (a4, a2, am2, nu, e) in [
        (q(1, 2), RBig::from(-2), RBig::ZERO, RBig::ZERO, q(2, 3)),
        (RBig::from(-3), RBig::from(1), RBig::from(2), RBig::from(2), q(-5, 2)),
    ] {
        let (b4, b2, _) = sextic_spec_exact(&a4, &a2);
        let v = poly(&[(6, RBig::ONE), (4, a4.clone()), (2, a2.clone()), (-2, am2.clone())]);
        let c = frobenius(&v, &nu, &e, n);
        // P = exp(b4 r^4 / 4 - b2 r^2 / 2)
        let inv_p = exp_series(&poly(&[(4, -&b4 / RBig::from(4)), (2, &b2 / RBig::from(2))]), n);
        let exact = cauchy(&c, &inv_p, n);
        let pot = SexticPotential::new(1.0, f(&a4), f(&a2), f(&am2)).unwrap();
        let spec = sextic_exponents(&pot, Branch::Recessive);
        let got = sextic_b(&spec, f(&nu), &pot, f(&e), n).unwrap();
        assert_close(&got.values, &exact, 1e-11, "sextic b");
    }
}

#[test]
fn gamma_indices_are_validated() {
    let pot = QuarticPotential::double_well(-3.0);
    let spec = quartic_exponents(&pot, Branch::Recessive);
    let h = quartic_h(&spec, 0.0, 1.0, 30).unwrap();
    let b = anharmonic::series::quartic_b(&spec, 0.0, pot.a2, 1.0, 80).unwrap();
    assert_eq!(quartic_gamma(&h, &b, &spec, 0.0, 0, Summation::Truncated), Err(SeriesError::BadIndex(0)));
    let table = gamma_table(Family::Quartic, &h, &b, &spec, 0.0, &[1, 2, 5], Summation::Truncated).unwrap();
    assert_eq!(table.values.keys().copied().collect::<Vec<_>>(), [1, 2, 5]);

    let sp = qes_potential(2.0, 2.0);
    let sspec = sextic_exponents(&sp, Branch::Recessive);
    let sh = sextic_h(&sspec, sp.am2, 8.0, 30).unwrap();
    let sb = sextic_b(&sspec, 3.5, &sp, 8.0, 80).unwrap();
    assert_eq!(sextic_gamma(&sh, &sb, &sspec, 3.5, 3, Summation::Truncated), Err(SeriesError::BadIndex(3)));
    let g = sextic_gamma(&sh, &sb, &sspec, 3.5, 2, Summation::Truncated).unwrap();
    assert_eq!(g.status, SumStatus::Exact);
    assert_eq!(g.smallest_block, 0.0);
}

#[test]
fn wrong_family_is_rejected() {
    let pot = QuarticPotential::double_well(-3.0);
    let spec = quartic_exponents(&pot, Branch::Recessive);
    assert_eq!(sextic_h(&spec, 0.0, 1.0, 10).unwrap_err(), SeriesError::WrongFamily);
    let dominant = quartic_exponents(&pot, Branch::Dominant);
    assert_eq!(
        anharmonic::series::quartic_b(&dominant, 0.0, pot.a2, 1.0, 10).unwrap_err(),
        SeriesError::WrongBranch
    );
}

//! Structural properties of the spectra over random parameters.

use proptest::prelude::*;

use anharmonic::oracle::{oracle_eigenvalues, Boundary, OracleConfig};
use anharmonic::potential::{
    indicial_exponents, qes_potential, quartic_exponents, sextic_exponents, Branch, Family, Potential,
    QuarticPotential, SexticPotential,
};
use anharmonic::series::{gamma_table, quartic_b, quartic_h, residual_check, sextic_b, sextic_h, Summation};
use anharmonic::solver::{eigenvalues_auto, EnergyScanConfig, EigenvalueResult};

fn config() -> EnergyScanConfig {
    EnergyScanConfig::default().with_range(f64::NEG_INFINITY, f64::INFINITY)
}

fn levels(pot: Potential, nu: f64, count: usize) -> Vec<EigenvalueResult> {
    eigenvalues_auto(&pot, nu, count, &config()).expect("levels found")
}

fn energies(pot: Potential, nu: f64, count: usize) -> Vec<f64> {
    levels(pot, nu, count).into_iter().map(|r| r.energy).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn even_and_odd_levels_interlace(a2 in -6.0f64..4.0) {
        let pot: Potential = QuarticPotential::double_well(a2).into();
        let even = energies(pot, 0.0, 2);
        let odd = energies(pot, 1.0, 2);
        prop_assert!(even[0] < odd[0] && odd[0] < even[1] && even[1] < odd[1], "{even:?} {odd:?}");
    }

    #[test]
    fn ground_state_increases_with_a2(a2 in -6.0f64..4.0, step in 0.1f64..1.0) {
        let lo = energies(QuarticPotential::double_well(a2).into(), 0.0, 1)[0];
        let hi = energies(QuarticPotential::double_well(a2 + step).into(), 0.0, 1)[0];
        prop_assert!(hi > lo, "E0({a2}) = {lo}, E0({}) = {hi}", a2 + step);
    }

    #[test]
    fn coordinate_scaling(a4 in 0.3f64..3.0, a2 in -3.0f64..3.0) {
        // x -> a4^(-1/6) x maps (a4, a2) onto (1, a2 a4^(-2/3))
        let e = energies(QuarticPotential::new(a4, a2, 0.0).unwrap().into(), 1.0, 1)[0];
        let unit = energies(QuarticPotential::double_well(a2 * a4.powf(-2.0 / 3.0)).into(), 1.0, 1)[0];
        prop_assert!((e - a4.powf(1.0 / 3.0) * unit).abs() < 1e-8, "{e} vs {}", a4.powf(1.0 / 3.0) * unit);
    }

    #[test]
    fn two_level_qes_pair(s in 0.6f64..2.0) {
        // u = r^(2s - 1/2) exp(-r^4/4) (1 + c r^2) gives E^2 = 32 s
        let pot: Potential = qes_potential(s, 2.0).into();
        let nu = indicial_exponents(pot.am2()).unwrap().nu_regular;
        let got = levels(pot, nu, 2);
        let want = (32.0 * s).sqrt();
        prop_assert!((got[0].energy + want).abs() < 1e-8, "{} vs {}", got[0].energy, -want);
        prop_assert!((got[1].energy - want).abs() < 1e-8, "{} vs {}", got[1].energy, want);
        prop_assert!(got[0].qes_exact && got[1].qes_exact);
    }

    #[test]
    fn four_level_qes_spectrum_is_symmetric(s in 0.6f64..1.5) {
        let pot: Potential = qes_potential(s, 4.0).into();
        let nu = indicial_exponents(pot.am2()).unwrap().nu_regular;
        let e = energies(pot, nu, 4);
        prop_assert!((e[0] + e[3]).abs() < 1e-8 && (e[1] + e[2]).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn radial_ground_state_agrees_with_shooting(a2 in -4.0f64..4.0, am2 in 0.2f64..3.0) {
        let q = QuarticPotential::new(1.0, a2, am2).unwrap();
        let pot: Potential = q.into();
        let nu = indicial_exponents(am2).unwrap().nu_regular;
        let w = energies(pot, nu, 1)[0];
        let o = oracle_eigenvalues(&pot, Boundary::DirichletOrigin, 1, &OracleConfig::default()).unwrap()[0];
        prop_assert!((w - o).abs() < 1e-7, "wronskian {w}, oracle {o}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn series_solves_the_equation(
        sextic in any::<bool>(),
        lead in 0.5f64..2.0,
        a4 in -2.0f64..2.0,
        a2 in -6.0f64..4.0,
        am2 in 0.0f64..3.0,
        e in -5.0f64..20.0,
        other in any::<bool>(),
    ) {
        let (pot, spec): (Potential, _) = if sextic {
            let s = SexticPotential::new(lead, a4, a2, am2).unwrap();
            (s.into(), sextic_exponents(&s, Branch::Recessive))
        } else {
            let q = QuarticPotential::new(lead, a2, am2).unwrap();
            (q.into(), quartic_exponents(&q, Branch::Recessive))
        };
        let pair = indicial_exponents(am2).unwrap();
        // the smaller root is only free of logarithms when the roots do not differ by an integer
        let gap = pair.nu_regular - pair.nu_other;
        let nu = if other && (gap - gap.round()).abs() > 0.05 { pair.nu_other } else { pair.nu_regular };
        let r = residual_check(&pot, &spec, nu, e, 0.5, 60).unwrap();
        prop_assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn gamma_tables_hold_requested_indices(a2 in -6.0f64..4.0, e in -5.0f64..20.0) {
        let q = QuarticPotential::double_well(a2);
        let spec = quartic_exponents(&q, Branch::Recessive);
        let h = quartic_h(&spec, 0.0, e, 60).unwrap();
        let b = quartic_b(&spec, 0.0, a2, e, 140).unwrap();
        let idx = [1, 3, 30];
        let t = gamma_table(Family::Quartic, &h, &b, &spec, 0.0, &idx, Summation::Truncated).unwrap();
        prop_assert_eq!(t.values.keys().copied().collect::<Vec<_>>(), idx.to_vec());
        for g in t.values.values() {
            prop_assert!(g.terms_used <= h.values.len());
            prop_assert!(g.smallest_block <= g.largest_block);
            prop_assert!(g.value.is_finite());
        }
    }

    #[test]
    fn qes_gammas_are_exact_sums(s in 0.6f64..2.0, j in 1usize..5) {
        let pot = qes_potential(s, j as f64);
        let spec = sextic_exponents(&pot, Branch::Recessive);
        let nu = indicial_exponents(pot.am2).unwrap().nu_regular;
        let h = sextic_h(&spec, pot.am2, 0.0, 40).unwrap();
        // E = 0 is a quasi-exact level only for odd J
        prop_assert_eq!(h.qes_terminated, j % 2 == 1);
        if h.qes_terminated {
            let b = sextic_b(&spec, nu, &pot, 0.0, 120).unwrap();
            let t = gamma_table(Family::Sextic, &h, &b, &spec, nu, &[0, 2, 10], Summation::Levin).unwrap();
            prop_assert!(t.all_accepted());
            prop_assert_eq!(h.termination_index, Some(2 * (j - 1)));
        }
    }
}

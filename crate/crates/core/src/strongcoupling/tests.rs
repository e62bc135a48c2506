use super::*;

// 30-digit direct sums (mpmath) of the defect-hop lattice series, S_j
// summed to j = 120.
const DE0_N2_B6: f64 = -0.971_102_182_594_87;
const DE0_N3_B6: f64 = -0.013_156_465_021_55;
const MU2_N2_B6: f64 = 2.107_243_403_489_732;
const MU2_N3_PLUS_B6: f64 = 300.680_046_951_955_3;
const MU2_N3_MINUS_B6: f64 = -181.054_001_178_480_36;
const S1_PLUS_N2_B6: f64 = 0.012_844_024_787_941_895;
const S1_MINUS_N3_B6: f64 = -0.127_821_895_370_862_4;

fn unit(beta: u32) -> PowerLawModel {
    PowerLawModel::unit(beta).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn first_order_values() {
    assert!((mu1(2, 0.1, Branch::Particle) + 0.4).abs() < 1e-15);
    assert!((mu1(5, 0.01, Branch::Hole) - 0.1).abs() < 1e-15);
    assert_eq!(mu1(3, 0.0, Branch::Particle), 0.0);
}

#[test]
fn delta_e0_values_and_closed_form() {
    let m6 = unit(6);
    assert!((delta_e0(2, &m6).unwrap() - DE0_N2_B6).abs() < 1e-12);
    assert!((delta_e0(3, &m6).unwrap() - DE0_N3_B6).abs() < 1e-12);
    for beta in [2, 3, 6] {
        for n in 2..=8 {
            let s = delta_e0(n, &unit(beta)).unwrap();
            let c = delta_e0_closed(n, &unit(beta)).unwrap();
            assert!(s < 0.0);
            assert!((s - c).abs() < 1e-12 * s.abs().max(1e-3), "β={beta} n={n}: {s} vs {c}");
        }
    }
    assert!(delta_e0(1, &m6).is_err());
}

#[test]
fn summands_of_delta_e0_are_negative() {
    let m = unit(3);
    for n in 2..6u32 {
        for p in 1..200u32 {
            let r = (p * n) as f64;
            assert!(2.0 * m.at(r) - m.at(r - 1.0) - m.at(r + 1.0) <= 0.0);
        }
    }
}

#[test]
fn along_bracket_tends_to_delta_e0() {
    let c = DefectHopContext {
        n: 3,
        beta: 6,
        charge: Branch::Particle,
        process: SecondOrderProcess::BackgroundPolarization,
    };
    let d0 = delta_e0(3, &unit(6)).unwrap();
    let far = defect_denominator(&c, 60, Direction::Right).unwrap();
    assert!((far - d0).abs() < 1e-12);
    let far_against = defect_denominator(&c, 60, Direction::Left).unwrap();
    assert!((far_against - d0).abs() < 1e-12);
}

#[test]
fn lattice_sums_match_polygamma_brackets() {
    for beta in [3, 6] {
        let model = unit(beta);
        for n in 2..=5 {
            for charge in Branch::both() {
                let forward = along(charge);
                for j in 0..=5u32 {
                    let cases: &[(SecondOrderProcess, Direction, bool)] = if j == 0 {
                        &[(SecondOrderProcess::VirtualDeformation, forward.reversed(), false)]
                    } else {
                        &[
                            (SecondOrderProcess::BackgroundPolarization, forward, true),
                            (SecondOrderProcess::BackgroundPolarization, forward.reversed(), false),
                        ]
                    };
                    for &(process, dir, is_along) in cases {
                        let ctx = DefectHopContext {
                            n,
                            beta,
                            charge,
                            process,
                        };
                        let lattice = defect_denominator(&ctx, j, dir);
                        let closed = bracket_for(process, n, &model, j, charge, is_along);
                        match (lattice, closed) {
                            (Ok(l), Ok(c)) => {
                                assert!((l - c).abs() < 1e-9, "β={beta} n={n} {charge:?} j={j} {dir:?}: {l} vs {c}")
                            }
                            (Err(Error::HopBlocked(_)), Err(Error::HopBlocked(_))) => {
                                assert!(n == 2 && j == 0 && charge == Branch::Particle)
                            }
                            other => panic!("{other:?}"),
                        }
                    }
                }
                let ctx = DefectHopContext {
                    n,
                    beta,
                    charge,
                    process: SecondOrderProcess::TwoCellHop,
                };
                let l = defect_denominator(&ctx, 1, forward).unwrap();
                let c = two_cell_bracket(n, &model).unwrap();
                assert!((l - c).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn mismatch_summary() {
    for beta in [3, 6] {
        for n in 2..=5 {
            assert!(max_denominator_mismatch(n, beta, 5).unwrap() < 1e-9);
        }
    }
}

#[test]
fn s_terms_from_lattice_hops() {
    let m6 = unit(6);
    let s = s_term(1, 2, &m6, Branch::Particle).unwrap();
    assert!((s - S1_PLUS_N2_B6).abs() < 1e-12, "{s}");
    let s = s_term(1, 3, &m6, Branch::Hole).unwrap();
    assert!((s - S1_MINUS_N3_B6).abs() < 1e-11, "{s}");

    let ctx = |charge| DefectHopContext {
        n: 2,
        beta: 6,
        charge,
        process: SecondOrderProcess::BackgroundPolarization,
    };
    let c = ctx(Branch::Particle);
    let a = defect_denominator(&c, 1, Direction::Right).unwrap();
    let b = defect_denominator(&c, 1, Direction::Left).unwrap();
    let d0 = delta_e0(2, &m6).unwrap();
    let lattice = 1.0 / a + 1.0 / b - 2.0 / d0;
    assert!((lattice - S1_PLUS_N2_B6).abs() < 1e-9);
}

#[test]
fn s_terms_vanish_at_large_j() {
    let m = unit(6);
    let s10 = s_term(10, 2, &m, Branch::Hole).unwrap().abs();
    let s100 = s_term(100, 2, &m, Branch::Hole).unwrap().abs();
    assert!(s100 < 1e-6 * s10);
    assert!(s_term(0, 2, &m, Branch::Hole).is_err());
}

#[test]
fn second_order_reference_values() {
    let m6 = unit(6);
    let c = |n, b| mu2_breakdown(n, &m6, b).unwrap().total();
    assert!(rel(c(2, Branch::Particle), MU2_N2_B6) < 1e-10);
    assert!(rel(c(2, Branch::Hole), -MU2_N2_B6) < 1e-10);
    assert!(rel(c(3, Branch::Particle), MU2_N3_PLUS_B6) < 1e-10);
    assert!(rel(c(3, Branch::Hole), MU2_N3_MINUS_B6) < 1e-10);
}

#[test]
fn deformation_delta_at_n2() {
    let m6 = unit(6);
    assert_eq!(deformation_coefficient(2, Branch::Particle), 0.0);
    assert_eq!(deformation_coefficient(2, Branch::Hole), 1.0);
    assert_eq!(deformation_coefficient(3, Branch::Particle), 1.0);
    let p = mu2_breakdown(2, &m6, Branch::Particle).unwrap();
    assert_eq!(p.deformation, 0.0);
    let h = mu2_breakdown(2, &m6, Branch::Hole).unwrap();
    assert!(h.deformation != 0.0);
    assert!(h.s_terms >= MIN_S_TERMS);
}

#[test]
fn second_order_scaling_and_parity() {
    let m6 = unit(6);
    for charge in Branch::both() {
        assert_eq!(mu2_full(3, &m6, 0.0, charge).unwrap(), 0.0);
        let a = mu2_full(3, &m6, 0.01, charge).unwrap();
        let b = mu2_full(3, &m6, -0.01, charge).unwrap();
        assert_eq!(a, b);
        // coefficient enters as 1/C
        let scaled = mu2_full(3, &PowerLawModel::new(6, 2.0).unwrap(), 0.01, charge).unwrap();
        assert!(rel(scaled, 0.5 * a) < 1e-12);
    }
}

#[test]
fn vdw_closed_form_tracks_full_result() {
    let m6 = unit(6);
    for n in 2..=6 {
        for charge in Branch::both() {
            let full = mu2_full(n, &m6, 1.0, charge).unwrap();
            let closed = mu2_vdw_closed(n, 1.0, charge).unwrap();
            let bd = mu2_breakdown(n, &m6, charge).unwrap();
            // the closed form is everything except the S_j sum
            assert!(rel(closed, full - bd.s_sum) < 1e-10, "n={n} {charge:?}");
            assert!(rel(closed, full) < 0.05, "n={n} {charge:?}");
        }
    }
    assert_eq!(mu2_vdw_closed(4, 0.0, Branch::Hole).unwrap(), 0.0);
}

#[test]
fn pi_cubed_constant_is_far_off() {
    let m6 = unit(6);
    let full = mu2_full(2, &m6, 1.0, Branch::Hole).unwrap();
    let wrong = mu2_vdw_closed_with_pi_power(2, 1.0, Branch::Hole, 3).unwrap();
    assert!(rel(wrong, full) > 0.05);
}

#[test]
fn first_order_closure_at_half_filling() {
    let m6 = unit(6);
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
    let l = lobe(2, &m6, &grid, 1).unwrap();
    let js = l.closure_estimate.unwrap();
    assert!((js - 0.243_029_94).abs() < 1e-8, "{js}");
    let i = l.mu_plus.len();
    assert_eq!(l.mu_minus.len(), i);
    assert_eq!(l.mu_plus[0], mu0_series(Filling::unit(2).unwrap(), &m6, Branch::Particle).unwrap());
}

#[test]
fn second_order_closures_spread_over_decades() {
    let m6 = unit(6);
    let grid: Vec<f64> = (0..=700).map(|i| 10f64.powf(-7.0 + i as f64 * 0.01)).collect();
    let js: Vec<f64> = (2..=4)
        .map(|n| lobe(n, &m6, &grid, 2).unwrap().closure_estimate.unwrap())
        .collect();
    assert!(js[0] > 10.0 * js[1] && js[1] > 10.0 * js[2], "{js:?}");
}

#[test]
fn lobe_rejects_bad_grids() {
    let m6 = unit(6);
    assert!(lobe(2, &m6, &[], 1).is_err());
    assert!(lobe(2, &m6, &[0.1, 0.05], 1).is_err());
    assert!(lobe(2, &m6, &[-0.1, 0.0], 1).is_err());
    assert!(lobe(2, &m6, &[0.0, 0.1], 3).is_err());
}

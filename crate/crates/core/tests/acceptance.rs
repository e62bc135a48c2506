//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use staircase_core::classical::{
    brute_force_open_ground, brute_force_ring_ground, build_staircase, hubbard_configuration, mu0_closed,
    mu0_series, unit_step_scaling_exponent, Branch, Filling, PowerLawModel,
};
use staircase_core::edlab::{
    chemical_potential_sweep, extrapolate_samples, fit_boundaries, ground_energy, ChemicalPotentialSample,
    EDProblem, EdOptions,
};
use staircase_core::specfun::riemann_zeta;
use staircase_core::strongcoupling::{lobe, max_denominator_mismatch, mu2_full, mu2_vdw_closed};
use staircase_core::Result;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const MU_MINUS_HALF: f64 = 0.045_223_291_537_539_834;
const MU_PLUS_HALF: f64 = 1.989_462_832_431_358_4;
const MU_MINUS_THIRD: f64 = 0.004_866_095_202_281_143_4;
const MU_PLUS_THIRD: f64 = 0.044_431_909_867_981_117;

const HALF_LENGTHS: [usize; 4] = [12, 16, 20, 24];
const HALF_HOPPINGS: [f64; 6] = [0.005, 0.01, 0.015, 0.02, 0.025, 0.03];
const THIRD_LENGTHS: [usize; 4] = [18, 21, 24, 27];
const THIRD_HOPPINGS: [f64; 5] = [1e-4, 2e-4, 3e-4, 4e-4, 5e-4];

fn unit(beta: u32) -> PowerLawModel {
    PowerLawModel::unit(beta).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    let start = Instant::now();
    let mut out = f().unwrap_or_else(|e| Outcome {
        passed: false,
        detail: format!("error: {e}"),
    });
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
        }
        out.detail = format!("{}; {:.2?} (limit {:?})", out.detail, elapsed, limit);
    } else {
        out.detail = format!("{}; {:.1?}", out.detail, elapsed);
    }
    out
}

fn closed_form() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for beta in [2, 3, 6] {
        let m = unit(beta);
        for n in 2..=10 {
            for b in Branch::both() {
                let d = mu0_closed(n, &m, b)? - mu0_series(Filling::unit(n)?, &m, b)?;
                worst = worst.max(d.abs());
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-10,
        detail: format!("max |closed - series| = {worst:.2e}"),
    })
}

fn staircase() -> Result<Outcome> {
    let steps = build_staircase(&unit(6), 20)?;
    let half = steps.iter().find(|s| s.filling.n() == 2).unwrap();
    let d_lo = (half.mu_lo - MU_MINUS_HALF).abs();
    let d_hi = (half.mu_hi - MU_PLUS_HALF).abs();
    let widest = steps.iter().all(|s| s.width() <= half.width());
    let ordered = steps.windows(2).all(|w| w[0].is_stable() && w[0].mu_hi < w[1].mu_lo);
    let mut exponents = Vec::new();
    for beta in [3, 6] {
        let s = build_staircase(&unit(beta), 40)?;
        exponents.push((beta, unit_step_scaling_exponent(&s, 4, 40)?));
    }
    let scaling = exponents.iter().all(|&(b, a)| (a / b as f64 - 1.0).abs() < 0.1);
    Ok(Outcome {
        passed: d_lo <= 1e-6 && d_hi <= 1e-6 && widest && ordered && scaling,
        detail: format!(
            "1/2 step [{:.9}, {:.9}], widest {widest}, {} steps disjoint {ordered}, exponents {exponents:?}",
            half.mu_lo,
            half.mu_hi,
            steps.len()
        ),
    })
}

fn sum_rule() -> Result<Outcome> {
    let half = Filling::unit(2)?;
    let mut worst: f64 = 0.0;
    for beta in [2, 3, 6] {
        let m = unit(beta);
        let s = mu0_series(half, &m, Branch::Particle)? + mu0_series(half, &m, Branch::Hole)?;
        worst = worst.max((s - 2.0 * riemann_zeta(beta as f64)?).abs());
    }
    Ok(Outcome {
        passed: worst <= 1e-9,
        detail: format!("max deviation {worst:.2e}"),
    })
}

fn first_order(half: &Result<Vec<ChemicalPotentialSample>>) -> Result<Outcome> {
    let m6 = unit(6);
    let h = 1e-2;
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let l = lobe(n, &m6, &[0.0, h], 1)?;
        let slope = ((l.mu_plus[1] - l.mu_minus[1]) - (l.mu_plus[0] - l.mu_minus[0])) / h;
        worst = worst.max((slope + 4.0 * n as f64).abs());
    }
    let fit = fit_boundaries(half.as_ref().map_err(Clone::clone)?, 1, 2)?;
    let ed_slope = fit.gap[1];
    Ok(Outcome {
        passed: worst <= 1e-12 && rel(ed_slope, -8.0) <= 0.02,
        detail: format!(
            "analytic slope error {worst:.2e}; ED gap slope {ed_slope:.4} ({:+.2}% from -8)",
            100.0 * (ed_slope + 8.0) / 8.0
        ),
    })
}

fn second_order() -> Result<Outcome> {
    let m6 = unit(6);
    let mut worst_closed: f64 = 0.0;
    for n in 2..=6 {
        for b in Branch::both() {
            worst_closed = worst_closed.max(rel(mu2_vdw_closed(n, 1.0, b)?, mu2_full(n, &m6, 1.0, b)?));
        }
    }
    let mut worst_lattice: f64 = 0.0;
    for beta in [3, 6] {
        for n in 2..=5 {
            worst_lattice = worst_lattice.max(max_denominator_mismatch(n, beta, 5)?);
        }
    }
    Ok(Outcome {
        passed: worst_closed < 0.05 && worst_lattice <= 1e-9,
        detail: format!("closed vs full {worst_closed:.3e} relative; lattice vs polygamma {worst_lattice:.2e}"),
    })
}

/// Quadratic fit of the extrapolated boundaries against `(mu0, ∓2n, mu2/J^2)`.
fn compare_quadratic(n: u32, samples: &[ChemicalPotentialSample], mu0: [f64; 2]) -> Result<(bool, String)> {
    let m6 = unit(6);
    let fit = fit_boundaries(samples, 1, 2)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, (branch, got)) in [(Branch::Particle, &fit.mu_plus), (Branch::Hole, &fit.mu_minus)]
        .into_iter()
        .enumerate()
    {
        let c1 = -branch.sign() * 2.0 * n as f64;
        let c2 = mu2_full(n, &m6, 1.0, branch)?;
        let d0 = (got[0] - mu0[k]).abs();
        let r1 = rel(got[1], c1);
        let r2 = rel(got[2], c2);
        ok &= d0 <= 1e-3 && r1 <= 0.02 && r2 <= 0.1;
        parts.push(format!(
            "{}: c0 off {d0:.1e}, c1 {:.3} vs {c1} ({:.1}%), c2 {:.2} vs {c2:.2} ({:.0}%)",
            if k == 0 { "mu+" } else { "mu-" },
            got[1],
            100.0 * r1,
            got[2],
            100.0 * r2
        ));
    }
    Ok((ok, format!("1/{n} {}", parts.join("; "))))
}

fn ed_vs_perturbation(half: &Result<Vec<ChemicalPotentialSample>>) -> Result<Outcome> {
    let m6 = unit(6);
    let (ok_half, d_half) = compare_quadratic(2, half.as_ref().map_err(Clone::clone)?, [MU_PLUS_HALF, MU_MINUS_HALF])?;
    let third = chemical_potential_sweep(
        &THIRD_LENGTHS,
        Filling::unit(3)?,
        &THIRD_HOPPINGS,
        &m6,
        7,
        &EdOptions::default(),
    )?;
    let (ok_third, d_third) = compare_quadratic(3, &third, [MU_PLUS_THIRD, MU_MINUS_THIRD])?;
    Ok(Outcome {
        passed: ok_half && ok_third,
        detail: format!("{d_half} | {d_third}"),
    })
}

fn closures() -> Result<Outcome> {
    let m6 = unit(6);
    let linear: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
    let first = lobe(2, &m6, &linear, 1)?.closure_estimate;
    let grid: Vec<f64> = (0..=700).map(|i| 10f64.powf(-7.0 + i as f64 * 0.01)).collect();
    let js = (2..=4)
        .map(|n| lobe(n, &m6, &grid, 2).map(|l| l.closure_estimate))
        .collect::<Result<Vec<_>>>()?;
    let passed = match (first, js[0], js[1], js[2]) {
        (Some(f), Some(a), Some(b), Some(c)) => (f - 0.24303).abs() <= 1e-4 && a > 10.0 * b && b > 10.0 * c,
        _ => false,
    };
    Ok(Outcome {
        passed,
        detail: format!("first order J*(2) = {first:?}; second order J*(2,3,4) = {js:?}"),
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn classical_oracle() -> Result<Outcome> {
    let mut ring_worst: f64 = 0.0;
    let mut open_mismatch = 0;
    let mut cases = 0;
    for beta in [3, 6] {
        let m = unit(beta);
        for l in 2..=14 {
            for n in 1..l {
                let g = gcd(n, l);
                let q = Filling::new((n / g) as u32, (l / g) as u32)?;
                let e = hubbard_configuration(q, g).ring_energy(&m);
                let (b, _) = brute_force_ring_ground(&m, l, n)?;
                ring_worst = ring_worst.max((e - b).abs() / b.abs().max(1.0));
            }
            for n in 0..=l {
                let e = ground_energy(&EDProblem::new(l, n, 0.0, m, 7))?.ground_energy;
                let (b, _) = brute_force_open_ground(&m, l, n, Some(7))?;
                open_mismatch += usize::from(e != b);
                cases += 1;
            }
        }
    }
    Ok(Outcome {
        passed: ring_worst <= 1e-12 && open_mismatch == 0,
        detail: format!("ring max relative deviation {ring_worst:.2e}; open chains {open_mismatch}/{cases} mismatches"),
    })
}

fn truncation(half: &Result<Vec<ChemicalPotentialSample>>) -> Result<Outcome> {
    let m6 = unit(6);
    let q = Filling::unit(2)?;
    let hoppings = [0.0, 0.01];
    let opts = EdOptions::default();
    let r7: Vec<ChemicalPotentialSample> = chemical_potential_sweep(&HALF_LENGTHS, q, &[0.0], &m6, 7, &opts)?
        .into_iter()
        .chain(
            half.as_ref()
                .map_err(Clone::clone)?
                .iter()
                .copied()
                .filter(|s| s.hopping == 0.01),
        )
        .collect();
    let r9 = chemical_potential_sweep(&HALF_LENGTHS, q, &hoppings, &m6, 9, &opts)?;
    let mut worst: f64 = 0.0;
    let picks: [fn(&ChemicalPotentialSample) -> f64; 2] = [|s| s.mu_plus, |s| s.mu_minus];
    for pick in picks {
        let a = extrapolate_samples(&r7, 1, pick)?;
        let b = extrapolate_samples(&r9, 1, pick)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x.1 - y.1).abs());
        }
    }
    Ok(Outcome {
        passed: worst < 1e-6,
        detail: format!("max |mu(r=9) - mu(r=7)| = {worst:.2e} at J in {hoppings:?}"),
    })
}

fn main() -> ExitCode {
    let half = chemical_potential_sweep(
        &HALF_LENGTHS,
        Filling::unit(2).unwrap(),
        &HALF_HOPPINGS,
        &unit(6),
        7,
        &EdOptions::default(),
    );
    let criteria: Vec<(u32, Outcome)> = vec![
        (1, timed(Some(Duration::from_secs(1)), closed_form)),
        (2, timed(Some(Duration::from_secs(10)), staircase)),
        (3, timed(Some(Duration::from_secs(1)), sum_rule)),
        (4, timed(None, || first_order(&half))),
        (5, timed(None, second_order)),
        (6, timed(None, || ed_vs_perturbation(&half))),
        (7, timed(None, closures)),
        (8, timed(Some(Duration::from_secs(60)), classical_oracle)),
        (9, timed(None, || truncation(&half))),
    ];
    let mut failed = 0;
    for (k, c) in &criteria {
        println!("criterion {k}: {} {}", if c.passed { "PASS" } else { "FAIL" }, c.detail);
        failed += usize::from(!c.passed);
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

//! Cross-validation battery behind `phasecli verify`.

use staircase_core::classical::{
    brute_force_open_ground, brute_force_ring_ground, build_staircase, hubbard_configuration, mu0_closed,
    mu0_series, unit_step_scaling_exponent, Branch, Filling, PowerLawModel,
};
use staircase_core::edlab::{
    chemical_potential_sweep, extrapolate_samples, fit_boundaries, ground_energy, ChemicalPotentialSample, EDProblem,
    EdOptions,
};
use staircase_core::specfun::riemann_zeta;
use staircase_core::strongcoupling::{
    lobe, max_denominator_mismatch, mu2_full, mu2_vdw_closed_with_pi_power,
};
use staircase_core::Result;

/// Half-filling step at β = 6 from a 30-digit evaluation of the series.
pub const HALF_FILLING_MU_MINUS: f64 = 0.045_223_291_537_539_834;
pub const HALF_FILLING_MU_PLUS: f64 = 1.989_462_832_431_358_4;
/// Second-order coefficients `mu_±^(2) / J^2` of the 1/2 lobe at β = 6.
pub const HALF_FILLING_MU2: [f64; 2] = [2.107_243_403_489_732, -2.107_243_403_489_732];

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Skip the exact-diagonalization studies that take minutes.
    pub quick: bool,
    /// Power of π in the constants of the β = 6 second-order closed form.
    pub pi_power: i32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quick: false,
            pi_power: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn unit(beta: u32) -> PowerLawModel {
    PowerLawModel::unit(beta).expect("valid exponent")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn run(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_battery(opts: &VerifyOptions) -> Vec<Check> {
    let m6 = unit(6);
    let quick = opts.quick;
    let mut checks = vec![
        run("closed form against series", || {
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
            Ok((worst <= 1e-10, format!("max deviation {worst:.2e}")))
        }),
        run("half-filling step", || {
            let max_den = if quick { 12 } else { 20 };
            let steps = build_staircase(&m6, max_den)?;
            let half = steps
                .iter()
                .find(|s| s.filling.n() == 2)
                .expect("1/2 is always present");
            let values = (half.mu_lo - HALF_FILLING_MU_MINUS).abs() <= 1e-6
                && (half.mu_hi - HALF_FILLING_MU_PLUS).abs() <= 1e-6;
            let widest = steps.iter().all(|s| s.width() <= half.width());
            let ordered = steps.windows(2).all(|w| w[0].is_stable() && w[0].mu_hi <= w[1].mu_lo);
            Ok((
                values && widest && ordered,
                format!(
                    "[{:.9}, {:.9}], widest {widest}, {} steps ordered {ordered}",
                    half.mu_lo,
                    half.mu_hi,
                    steps.len()
                ),
            ))
        }),
        run("step midpoint scaling", || {
            let n_max = if quick { 20 } else { 40 };
            let mut ok = true;
            let mut detail = Vec::new();
            for beta in [3, 6] {
                let steps = build_staircase(&unit(beta), n_max)?;
                let a = unit_step_scaling_exponent(&steps, 4, n_max)?;
                ok &= (a / beta as f64 - 1.0).abs() < 0.1;
                detail.push(format!("β={beta}: {a:.4}"));
            }
            Ok((ok, detail.join(", ")))
        }),
        run("sum rule at half filling", || {
            let half = Filling::unit(2)?;
            let mut worst: f64 = 0.0;
            for beta in [2, 3, 6] {
                let m = unit(beta);
                let s = mu0_series(half, &m, Branch::Particle)? + mu0_series(half, &m, Branch::Hole)?;
                worst = worst.max((s - 2.0 * riemann_zeta(beta as f64)?).abs());
            }
            Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
        }),
        run("first-order gap slope", || {
            let h = 1e-2;
            let mut worst: f64 = 0.0;
            for n in 2..=6 {
                let l = lobe(n, &m6, &[0.0, h], 1)?;
                let slope = ((l.mu_plus[1] - l.mu_minus[1]) - (l.mu_plus[0] - l.mu_minus[0])) / h;
                worst = worst.max((slope + 4.0 * n as f64).abs());
            }
            Ok((worst <= 1e-12, format!("max deviation {worst:.2e}")))
        }),
        run("β=6 closed second order", || {
            let mut worst: f64 = 0.0;
            for n in 2..=6 {
                for b in Branch::both() {
                    let closed = mu2_vdw_closed_with_pi_power(n, 1.0, b, opts.pi_power)?;
                    worst = worst.max(rel(closed, mu2_full(n, &m6, 1.0, b)?));
                }
            }
            Ok((worst < 0.05, format!("max relative deviation {worst:.3e}")))
        }),
        run("denominators against lattice sums", || {
            let mut worst: f64 = 0.0;
            for beta in [3, 6] {
                for n in 2..=5 {
                    worst = worst.max(max_denominator_mismatch(n, beta, 5)?);
                }
            }
            Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
        }),
        run("lobe closures", || {
            let linear: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
            let first = lobe(2, &m6, &linear, 1)?.closure_estimate;
            let grid: Vec<f64> = (0..=700).map(|i| 10f64.powf(-7.0 + i as f64 * 0.01)).collect();
            let js = (2..=4)
                .map(|n| lobe(n, &m6, &grid, 2).map(|l| l.closure_estimate))
                .collect::<Result<Vec<_>>>()?;
            let ok = match (first, js[0], js[1], js[2]) {
                (Some(f), Some(a), Some(b), Some(c)) => (f - 0.24303).abs() <= 1e-4 && a > 10.0 * b && b > 10.0 * c,
                _ => false,
            };
            Ok((ok, format!("first order J*(2) = {first:?}, second order J* = {js:?}")))
        }),
        run("Hubbard crystals on rings", || {
            let l_max = if quick { 10 } else { 14 };
            let mut worst: f64 = 0.0;
            for beta in [3, 6] {
                let m = unit(beta);
                for l in 2..=l_max {
                    for n in 1..l {
                        let g = gcd(n, l);
                        let q = Filling::new((n / g) as u32, (l / g) as u32)?;
                        let e = hubbard_configuration(q, g).ring_energy(&m);
                        let (b, _) = brute_force_ring_ground(&m, l, n)?;
                        worst = worst.max((e - b).abs() / b.abs().max(1.0));
                    }
                }
            }
            Ok((worst <= 1e-12, format!("L <= {l_max}, max relative deviation {worst:.2e}")))
        }),
        run("ED at zero hopping", || {
            let l_max = if quick { 10 } else { 14 };
            let mut bad = 0;
            for beta in [3, 6] {
                let m = unit(beta);
                for l in 2..=l_max {
                    for n in 1..l {
                        let e = ground_energy(&EDProblem::new(l, n, 0.0, m, 7))?.ground_energy;
                        let (b, _) = brute_force_open_ground(&m, l, n, Some(7))?;
                        bad += usize::from(e != b);
                    }
                }
            }
            Ok((bad == 0, format!("L <= {l_max}, {bad} mismatches")))
        }),
        run("ED extrapolation at zero hopping", || {
            let lengths: &[usize] = if quick { &[12, 16, 20] } else { &[12, 16, 20, 24] };
            let s = chemical_potential_sweep(lengths, Filling::unit(2)?, &[0.0], &m6, 7, &EdOptions::default())?;
            let a = extrapolate_samples(&s, 1, |s| s.mu_minus)?[0].1;
            let d = (a - HALF_FILLING_MU_MINUS).abs();
            Ok((d <= 1e-3, format!("mu_- = {a:.6}, deviation {d:.2e}")))
        }),
    ];
    if !quick {
        checks.extend(ed_studies());
    }
    checks
}

fn ed_studies() -> Vec<Check> {
    let m6 = unit(6);
    let half = Filling::unit(2).expect("1/2");
    let hoppings = [0.005, 0.01, 0.015, 0.02, 0.025, 0.03];
    let fit = chemical_potential_sweep(&[12, 16, 20, 24], half, &hoppings, &m6, 7, &EdOptions::default())
        .and_then(|s| fit_boundaries(&s, 1, 2));
    vec![
        run("ED first-order slope", || {
            let slope = fit.clone()?.gap[1];
            Ok((rel(slope, -8.0) <= 0.02, format!("gap slope {slope:.4}, target -8")))
        }),
        run("ED against second order", || {
            let fit = fit.clone()?;
            let targets = [
                (HALF_FILLING_MU_PLUS, -4.0, HALF_FILLING_MU2[0], &fit.mu_plus),
                (HALF_FILLING_MU_MINUS, 4.0, HALF_FILLING_MU2[1], &fit.mu_minus),
            ];
            let mut ok = true;
            let mut detail = Vec::new();
            for (c0, c1, c2, got) in targets {
                ok &= (got[0] - c0).abs() <= 1e-3 && rel(got[1], c1) <= 0.02 && rel(got[2], c2) <= 0.1;
                detail.push(format!("({:.6}, {:.4}, {:.4})", got[0], got[1], got[2]));
            }
            Ok((ok, format!("fits {}", detail.join(" "))))
        }),
        run("interaction range 7 against 9", || {
            let opts = EdOptions::default();
            let lengths = [12, 16, 20];
            let a = chemical_potential_sweep(&lengths, half, &[0.0, 0.01], &m6, 7, &opts)?;
            let b = chemical_potential_sweep(&lengths, half, &[0.0, 0.01], &m6, 9, &opts)?;
            let mut worst: f64 = 0.0;
            let picks: [fn(&ChemicalPotentialSample) -> f64; 2] = [|s| s.mu_plus, |s| s.mu_minus];
            for pick in picks {
                let ea = extrapolate_samples(&a, 1, pick)?;
                let eb = extrapolate_samples(&b, 1, pick)?;
                for (x, y) in ea.iter().zip(&eb) {
                    worst = worst.max((x.1 - y.1).abs());
                }
            }
            Ok((worst < 1e-6, format!("max change {worst:.2e}")))
        }),
    ]
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

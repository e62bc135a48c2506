use super::{filled_lattice_chemical_potential, gcd, mu0_series, Branch, Filling, PowerLawModel};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stability interval `[mu_lo, mu_hi]` of one commensurate crystal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaircaseStep {
    pub filling: Filling,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub order: u8,
    pub hopping: f64,
}

impl StaircaseStep {
    pub fn width(&self) -> f64 {
        self.mu_hi - self.mu_lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.mu_hi + self.mu_lo)
    }

    pub fn is_stable(&self) -> bool {
        self.mu_lo <= self.mu_hi
    }
}

/// Reduced fractions `0 < m/n <= 1/2` with `2 <= n <= max_denominator`,
/// ascending.
pub fn farey_fillings(max_denominator: u32) -> Vec<Filling> {
    let mut out: Vec<Filling> = (2..=max_denominator)
        .flat_map(|n| {
            (1..=n / 2)
                .filter(move |&m| gcd(m as u64, n as u64) == 1)
                .map(move |m| Filling::new(m, n).expect("reduced by construction"))
        })
        .collect();
    out.sort_by(|a, b| (a.m() as u64 * b.n() as u64).cmp(&(b.m() as u64 * a.n() as u64)));
    out
}

/// Interval of `1 - q` obtained from that of `q` by particle-hole symmetry.
pub fn filling_hole_dual(step: &StaircaseStep, omega: f64) -> Option<StaircaseStep> {
    let filling = step.filling.conjugate()?;
    Some(StaircaseStep {
        filling,
        mu_lo: omega - step.mu_hi,
        mu_hi: omega - step.mu_lo,
        order: step.order,
        hopping: step.hopping,
    })
}

/// Zeroth-order devil's staircase for all fillings with denominator up to
/// `max_denominator`, mirrored above half filling, sorted by `q`.
pub fn build_staircase(model: &PowerLawModel, max_denominator: u32) -> Result<Vec<StaircaseStep>> {
    if max_denominator < 2 {
        return Err(Error::InvalidInput(format!(
            "max_denominator must be at least 2, got {max_denominator}"
        )));
    }
    let lower: Vec<StaircaseStep> = farey_fillings(max_denominator)
        .into_par_iter()
        .map(|q| {
            Ok(StaircaseStep {
                filling: q,
                mu_lo: mu0_series(q, model, Branch::Hole)?,
                mu_hi: mu0_series(q, model, Branch::Particle)?,
                order: 0,
                hopping: 0.0,
            })
        })
        .collect::<Result<_>>()?;
    let omega = filled_lattice_chemical_potential(model)?;
    let upper: Vec<StaircaseStep> = lower
        .iter()
        .rev()
        .filter(|s| s.filling.n() != 2)
        .filter_map(|s| filling_hole_dual(s, omega))
        .collect();
    Ok(lower.into_iter().chain(upper).collect())
}

/// Exponent `a` in `midpoint ~ (1/n)^a` over the `1/n` steps with
/// `n_min <= n <= n_max`.
pub fn unit_step_scaling_exponent(steps: &[StaircaseStep], n_min: u32, n_max: u32) -> Result<f64> {
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .filter(|s| s.filling.is_unit() && (n_min..=n_max).contains(&s.filling.n()))
        .map(|s| (1.0 / s.filling.n() as f64, s.midpoint()))
        .collect();
    crate::edlab::loglog_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_count_and_order() {
        let f = farey_fillings(5);
        let names: Vec<String> = f.iter().map(|q| q.to_string()).collect();
        assert_eq!(names, ["1/5", "1/4", "1/3", "2/5", "1/2"]);
    }

    #[test]
    fn staircase_small() {
        let model = PowerLawModel::unit(6).unwrap();
        let steps = build_staircase(&model, 5).unwrap();
        assert_eq!(steps.len(), 9);
        let half = steps.iter().find(|s| s.filling == Filling::unit(2).unwrap()).unwrap();
        assert!((half.mu_lo - 0.045_223_291_537_539_834).abs() < 1e-12);
        assert!((half.mu_hi - 1.989_462_832_431_358_4).abs() < 1e-12);
        let widest = steps
            .iter()
            .max_by(|a, b| a.width().partial_cmp(&b.width()).unwrap())
            .unwrap();
        assert_eq!(widest.filling, half.filling);
        // 2/5 sits between 1/3 and 1/2
        let third = &steps[2];
        let two_fifths = &steps[3];
        assert!(third.mu_hi < two_fifths.mu_lo && two_fifths.mu_hi < half.mu_lo);
        assert!(steps.windows(2).all(|w| w[0].filling.value() < w[1].filling.value()));
    }

    #[test]
    fn mirrored_steps_are_ordered() {
        let model = PowerLawModel::unit(3).unwrap();
        let steps = build_staircase(&model, 8).unwrap();
        for w in steps.windows(2) {
            assert!(w[0].is_stable());
            assert!(w[0].mu_hi <= w[1].mu_lo, "{} then {}", w[0].filling, w[1].filling);
        }
    }

    #[test]
    fn unit_steps_follow_the_potential_tail() {
        for beta in [3u32, 6] {
            let steps = build_staircase(&PowerLawModel::unit(beta).unwrap(), 20).unwrap();
            let a = unit_step_scaling_exponent(&steps, 4, 20).unwrap();
            assert!((a / beta as f64 - 1.0).abs() < 0.1, "β={beta}: {a}");
        }
    }

    #[test]
    fn rejects_tiny_denominator() {
        assert!(build_staircase(&PowerLawModel::unit(6).unwrap(), 1).is_err());
    }
}

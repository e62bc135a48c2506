//! Strong-coupling expansion of the `q = 1/n` lobes in the hopping `J`.
//!
//! At first order a fractional defect delocalises with hopping amplitude
//! `J` over one unit cell; the ground state sits at quasi-momentum zero and
//! the boundaries move by `∓2nJ`. Second order collects three kinds of
//! virtual hop: background particles around the defect (i), the particle
//! next to the defect moving the other way (ii), and the defect jumping two
//! unit cells through a virtual intermediate state (iii).

mod defect;
mod second;

pub use defect::{along, default_window_cells, defect_denominator, defect_denominator_with_window, MIN_WINDOW_CELLS};
pub use second::{
    against_bracket, along_bracket, bracket_for, deformation_coefficient, delta_e0_closed, mu2_breakdown,
    mu2_full, mu2_vdw_closed, mu2_vdw_closed_with_pi_power, s_term, two_cell_bracket, SecondOrderBreakdown,
    MIN_S_TERMS,
};

use crate::classical::{mu0_series, Branch, Filling, PowerLawModel};
use crate::error::{domain, Error, Result};
use crate::series::{sum_series, SeriesPolicy};
use serde::{Deserialize, Serialize};

/// The three classes of second-order virtual hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SecondOrderProcess {
    /// (i) a particle `+j`, `j >= 1`, hops once and back.
    BackgroundPolarization,
    /// (ii) the `+0` particle hops away from the defect direction and back.
    VirtualDeformation,
    /// (iii) the defect moves two unit cells.
    TwoCellHop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn step(self) -> i64 {
        match self {
            Direction::Left => -1,
            Direction::Right => 1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// One virtual hop next to a fractional defect in the `1/n` crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectHopContext {
    pub n: u32,
    pub beta: u32,
    pub charge: Branch,
    pub process: SecondOrderProcess,
}

impl DefectHopContext {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain("defect context", format!("requires n >= 2, got {}", self.n)));
        }
        PowerLawModel::unit(self.beta).map(|_| ())
    }
}

/// First-order shift `mu_±^(1) = ∓2nJ`.
pub fn mu1(n: u32, hopping: f64, charge: Branch) -> f64 {
    -charge.sign() * 2.0 * n as f64 * hopping
}

/// `ΔE^(0)(1/n) = Σ_p [2V(pn) - V(pn-1) - V(pn+1)]`, the (negative) cost of
/// moving one crystal particle by a site.
pub fn delta_e0(n: u32, model: &PowerLawModel) -> Result<f64> {
    if n < 2 {
        return Err(domain("delta_e0", format!("requires n >= 2, got {n}")));
    }
    let nn = n as u64;
    let term = |p: u64| {
        let r = (p * nn) as f64;
        2.0 * model.shape(r) - model.shape(r - 1.0) - model.shape(r + 1.0)
    };
    Ok(model.coefficient() * sum_series("ΔE^(0)", &SeriesPolicy::default(), term)?)
}

/// Expansion order of a phase boundary.
fn check_order(order: u8) -> Result<()> {
    if order == 1 || order == 2 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("lobe order must be 1 or 2, got {order}")))
    }
}

/// Precomputed coefficients of `mu_±(J) = mu0 + c1 J + c2 J^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficients {
    pub mu0: f64,
    pub linear: f64,
    pub quadratic: f64,
}

impl BoundaryCoefficients {
    pub fn new(n: u32, model: &PowerLawModel, order: u8, charge: Branch) -> Result<Self> {
        if order > 2 {
            return Err(Error::InvalidInput(format!("expansion order {order} is not available")));
        }
        let q = Filling::unit(n)?;
        let mu0 = mu0_series(q, model, charge)?;
        let linear = if order >= 1 { mu1(n, 1.0, charge) } else { 0.0 };
        let quadratic = if order >= 2 {
            mu2_breakdown(n, model, charge)?.total()
        } else {
            0.0
        };
        Ok(Self { mu0, linear, quadratic })
    }

    pub fn at(&self, hopping: f64) -> f64 {
        self.mu0 + hopping * (self.linear + hopping * self.quadratic)
    }
}

/// Sampled phase boundary of one lobe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LobeCurve {
    pub filling: Filling,
    pub beta: u32,
    pub hopping_grid: Vec<f64>,
    pub mu_plus: Vec<f64>,
    pub mu_minus: Vec<f64>,
    pub order: u8,
    /// Hopping where the two boundaries meet; only an estimate, since the
    /// expansion breaks down near the tip of the lobe.
    pub closure_estimate: Option<f64>,
}

/// Largest `|lattice - closed form|` over every second-order virtual hop of
/// the `1/n` defects (both charges, `0 <= j <= max_j`), in units of `C`.
///
/// A hop blocked by hard-core occupancy must be blocked on both sides.
pub fn max_denominator_mismatch(n: u32, beta: u32, max_j: u32) -> Result<f64> {
    let model = PowerLawModel::unit(beta)?;
    let mut worst: f64 = 0.0;
    for charge in Branch::both() {
        let forward = along(charge);
        let mut cases = vec![(SecondOrderProcess::VirtualDeformation, 0, forward.reversed(), false)];
        cases.push((SecondOrderProcess::TwoCellHop, 1, forward, true));
        for j in 1..=max_j {
            cases.push((SecondOrderProcess::BackgroundPolarization, j, forward, true));
            cases.push((SecondOrderProcess::BackgroundPolarization, j, forward.reversed(), false));
        }
        for (process, j, dir, is_along) in cases {
            let ctx = DefectHopContext {
                n,
                beta,
                charge,
                process,
            };
            match (defect_denominator(&ctx, j, dir), bracket_for(process, n, &model, j, charge, is_along)) {
                (Ok(l), Ok(c)) => worst = worst.max((l - c).abs()),
                (Err(Error::HopBlocked(_)), Err(Error::HopBlocked(_))) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
    }
    Ok(worst)
}

/// Bisection tolerance on `J*`.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Phase boundaries of the `1/n` lobe up to `order` on `hopping_grid`.
pub fn lobe(n: u32, model: &PowerLawModel, hopping_grid: &[f64], order: u8) -> Result<LobeCurve> {
    check_order(order)?;
    if hopping_grid.is_empty() {
        return Err(Error::InvalidInput("empty hopping grid".into()));
    }
    if hopping_grid.iter().any(|j| !(*j >= 0.0) || !j.is_finite()) {
        return Err(Error::InvalidInput("hopping values must be finite and >= 0".into()));
    }
    if hopping_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("hopping grid must be strictly ascending".into()));
    }
    let plus = BoundaryCoefficients::new(n, model, order, Branch::Particle)?;
    let minus = BoundaryCoefficients::new(n, model, order, Branch::Hole)?;
    let gap = |j: f64| plus.at(j) - minus.at(j);

    let mut closure = None;
    for w in hopping_grid.windows(2) {
        if gap(w[0]) > 0.0 && gap(w[1]) <= 0.0 {
            let (mut lo, mut hi) = (w[0], w[1]);
            while hi - lo > CLOSURE_TOLERANCE * model.coefficient() {
                let mid = 0.5 * (lo + hi);
                if gap(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            closure = Some(0.5 * (lo + hi));
            break;
        }
    }
    Ok(LobeCurve {
        filling: Filling::unit(n)?,
        beta: model.beta(),
        hopping_grid: hopping_grid.to_vec(),
        mu_plus: hopping_grid.iter().map(|&j| plus.at(j)).collect(),
        mu_minus: hopping_grid.iter().map(|&j| minus.at(j)).collect(),
        order,
        closure_estimate: closure,
    })
}

#[cfg(test)]
mod tests;

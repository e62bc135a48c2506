//! Classical energies of single hops in an explicit defect state.
//!
//! A particle defect (charge `+1/n`) in the `1/n` crystal is one short gap
//! of `n - 1`: particles sit at `i n` for `i <= 0` and at `i n - 1` for
//! `i >= 1`. A hole defect is one long gap of `n + 1` (`i n + 1` for
//! `i >= 1`). Particle `+j` is the `j`-th particle to the right of the
//! defect, index `j + 1`. Energies are in units of the interaction
//! coefficient.

use super::{DefectHopContext, Direction, SecondOrderProcess};
use crate::classical::{Branch, PowerLawModel};
use crate::error::{Error, Result};
use crate::series::CompensatedSum;

/// Smallest number of cells kept on each side of the defect.
pub const MIN_WINDOW_CELLS: usize = 200;
const MAX_WINDOW_CELLS: usize = 2_000_000;

/// Default half-window: large enough that the neglected pairs are below
/// `1e-12` for every exponent.
pub fn default_window_cells(beta: u32) -> usize {
    let wanted = 10f64.powf(12.0 / beta as f64).ceil() as usize;
    wanted.clamp(MIN_WINDOW_CELLS, MAX_WINDOW_CELLS)
}

/// Direction in which the defect itself moves when particle `+0` hops.
pub fn along(charge: Branch) -> Direction {
    match charge {
        Branch::Particle => Direction::Right,
        Branch::Hole => Direction::Left,
    }
}

fn position(n: i64, charge: Branch, index: i64) -> i64 {
    if index <= 0 {
        index * n
    } else {
        match charge {
            Branch::Particle => index * n - 1,
            Branch::Hole => index * n + 1,
        }
    }
}

/// `E(before) - E(after)` when particle `index` moves by `step` sites.
pub(crate) fn hop_energy(
    n: u32,
    model: &PowerLawModel,
    charge: Branch,
    index: i64,
    step: i64,
    cells: usize,
) -> Result<f64> {
    let n = n as i64;
    let w = cells as i64;
    if index.abs() + 2 > w / 2 {
        return Err(Error::Window(format!(
            "particle {index} is too close to the edge of a {cells}-cell window"
        )));
    }
    let from = position(n, charge, index);
    let to = from + step;
    if position(n, charge, index - 1) == to || position(n, charge, index + 1) == to {
        return Err(Error::HopBlocked(format!(
            "site {to} is occupied in the n={n} defect state"
        )));
    }
    let v = |d: i64| model.shape(d.unsigned_abs() as f64);
    let mut acc = CompensatedSum::default();
    // far pairs first
    for k in (1..=w).rev() {
        for other in [index - k, index + k] {
            if other <= -w || other > w {
                continue;
            }
            let x = position(n, charge, other);
            acc.add(v(x - from) - v(x - to));
        }
    }
    Ok(model.coefficient() * acc.value())
}

/// Lattice-sum energy difference of the virtual hop selected by `ctx`, `j`
/// and `direction`, with a half-window of [`default_window_cells`].
///
/// The moving particle is `+j`, hopping in `direction`.
/// Process (ii) is the `+0` particle hopping against the defect's own
/// direction; process (iii) is the intermediate state of the two-cell defect
/// hop (`+1` moving along); process (i) covers `j >= 1` in either direction.
pub fn defect_denominator(ctx: &DefectHopContext, j: u32, direction: Direction) -> Result<f64> {
    defect_denominator_with_window(ctx, j, direction, default_window_cells(ctx.beta))
}

pub fn defect_denominator_with_window(
    ctx: &DefectHopContext,
    j: u32,
    direction: Direction,
    cells: usize,
) -> Result<f64> {
    ctx.validate()?;
    let forward = along(ctx.charge);
    let ok = match ctx.process {
        SecondOrderProcess::BackgroundPolarization => j >= 1,
        SecondOrderProcess::VirtualDeformation => j == 0 && direction != forward,
        SecondOrderProcess::TwoCellHop => j == 1 && direction == forward,
    };
    if !ok {
        return Err(Error::InvalidInput(format!(
            "hop of particle +{j} to the {direction:?} does not belong to process {:?}",
            ctx.process
        )));
    }
    let model = PowerLawModel::unit(ctx.beta)?;
    hop_energy(ctx.n, &model, ctx.charge, j as i64 + 1, direction.step(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32, beta: u32, charge: Branch, process: SecondOrderProcess) -> DefectHopContext {
        DefectHopContext {
            n,
            beta,
            charge,
            process,
        }
    }

    #[test]
    fn two_cell_hop_denominator() {
        let c = ctx(2, 6, Branch::Particle, SecondOrderProcess::TwoCellHop);
        let d = defect_denominator(&c, 1, Direction::Right).unwrap();
        let expect = 2.0 / 64.0 - 1.0 / 729.0 - 1.0;
        assert!((d - expect).abs() < 1e-12, "{d}");
        let c = ctx(3, 6, Branch::Hole, SecondOrderProcess::TwoCellHop);
        let d = defect_denominator(&c, 1, Direction::Left).unwrap();
        let expect = 2.0 / 729.0 - 1.0 / 4096.0 - 1.0 / 64.0;
        assert!((d - expect).abs() < 1e-12, "{d}");
    }

    #[test]
    fn first_order_move_costs_nothing() {
        let m = PowerLawModel::unit(6).unwrap();
        for charge in Branch::both() {
            let e = hop_energy(3, &m, charge, 1, along(charge).step(), 400).unwrap();
            assert!(e.abs() < 1e-15);
        }
    }

    #[test]
    fn mirror_images_agree() {
        // particle i and 1 - i are reflections of each other
        let m = PowerLawModel::unit(3).unwrap();
        for charge in Branch::both() {
            for j in 0..4i64 {
                for step in [-1, 1] {
                    let right = hop_energy(4, &m, charge, j + 1, step, 2000);
                    let left = hop_energy(4, &m, charge, -j, -step, 2000);
                    match (right, left) {
                        (Ok(a), Ok(b)) => assert!((a - b).abs() < 1e-13),
                        (Err(_), Err(_)) => {}
                        other => panic!("{other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn blocked_hop_at_n2() {
        let c = ctx(2, 6, Branch::Particle, SecondOrderProcess::VirtualDeformation);
        assert!(matches!(
            defect_denominator(&c, 0, Direction::Left),
            Err(Error::HopBlocked(_))
        ));
        let c = ctx(2, 6, Branch::Hole, SecondOrderProcess::VirtualDeformation);
        assert!(defect_denominator(&c, 0, Direction::Right).is_ok());
    }

    #[test]
    fn process_mismatch_is_rejected() {
        let c = ctx(3, 6, Branch::Particle, SecondOrderProcess::VirtualDeformation);
        assert!(defect_denominator(&c, 0, Direction::Right).is_err());
        assert!(defect_denominator(&c, 2, Direction::Left).is_err());
        let c = ctx(3, 6, Branch::Particle, SecondOrderProcess::BackgroundPolarization);
        assert!(defect_denominator(&c, 0, Direction::Right).is_err());
    }

    #[test]
    fn window_edge() {
        let c = ctx(3, 6, Branch::Particle, SecondOrderProcess::BackgroundPolarization);
        assert!(matches!(
            defect_denominator_with_window(&c, 120, Direction::Right, 200),
            Err(Error::Window(_))
        ));
    }
}

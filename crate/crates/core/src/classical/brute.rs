//! Exhaustive classical minimisation over all occupation patterns.

use super::{ring_energy, CrystalConfiguration, PowerLawModel};
use crate::error::{Error, Result};

/// Largest number of patterns either search will visit.
pub const BRUTE_FORCE_CAP: u128 = 3_000_000;

/// Largest lattice the searches accept.
const MAX_SITES: usize = 32;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn check_size(what: &'static str, length: usize, particles: usize) -> Result<()> {
    if particles > length {
        return Err(Error::InvalidInput(format!(
            "{particles} particles do not fit on {length} sites"
        )));
    }
    if length > MAX_SITES {
        return Err(Error::SizeCap {
            what,
            needed: length as u128,
            cap: MAX_SITES as u128,
        });
    }
    let count = binomial(length, particles);
    if count > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap {
            what,
            needed: count,
            cap: BRUTE_FORCE_CAP,
        });
    }
    Ok(())
}

/// Calls `visit` with every `length`-bit mask holding `particles` ones, in
/// increasing integer order.
fn for_each_pattern(length: usize, particles: usize, mut visit: impl FnMut(u64)) {
    if particles == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << length;
    let mut x = (1u64 << particles) - 1;
    while x < limit {
        visit(x);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

fn positions_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Exact classical ground state on a ring (shortest-distance interactions)
/// and the first minimiser in integer order of its bit pattern.
pub fn brute_force_ring_ground(
    model: &PowerLawModel,
    length: usize,
    particles: usize,
) -> Result<(f64, CrystalConfiguration)> {
    if length > 24 {
        return Err(Error::SizeCap {
            what: "ring brute force",
            needed: length as u128,
            cap: 24,
        });
    }
    check_size("ring brute force", length, particles)?;
    let mut best = (f64::INFINITY, 0u64);
    let mut pos = Vec::with_capacity(particles);
    for_each_pattern(length, particles, |mask| {
        pos.clear();
        pos.extend(positions_of(mask));
        let e = ring_energy(model, length, &pos);
        if e < best.0 {
            best = (e, mask);
        }
    });
    let config = CrystalConfiguration::from_positions(length, positions_of(best.1))?;
    Ok((best.0, config))
}

/// Interaction energy on an open chain keeping only pairs with separation
/// at most `range` (all pairs when `None`).
pub fn open_chain_energy(model: &PowerLawModel, positions: &[usize], range: Option<usize>) -> f64 {
    let cut = range.unwrap_or(usize::MAX);
    let mut e = 0.0;
    for (a, &x) in positions.iter().enumerate() {
        for &y in &positions[a + 1..] {
            let d = y.abs_diff(x);
            if d <= cut {
                e += model.at(d as f64);
            }
        }
    }
    e
}

/// Exact classical ground state of `particles` on an open chain of
/// `length` sites with the interaction truncated at `range`. Returns the
/// energy and the sorted positions of one minimiser.
pub fn brute_force_open_ground(
    model: &PowerLawModel,
    length: usize,
    particles: usize,
    range: Option<usize>,
) -> Result<(f64, Vec<usize>)> {
    check_size("open-chain brute force", length, particles)?;
    let mut best = (f64::INFINITY, 0u64);
    let mut pos = Vec::with_capacity(particles);
    for_each_pattern(length, particles, |mask| {
        pos.clear();
        pos.extend(positions_of(mask));
        let e = open_chain_energy(model, &pos, range);
        if e < best.0 {
            best = (e, mask);
        }
    });
    Ok((best.0, positions_of(best.1)))
}

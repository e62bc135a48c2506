//! Zeroth-order chemical potentials `mu_±(q)` at `J = 0`.

use super::{balanced_positions, ring_energy, Branch, Filling, PowerLawModel};
use crate::error::{domain, Error, Result};
use crate::series::{sum_series, SeriesPolicy};
use crate::specfun::{polygamma, riemann_zeta};

/// Energy to remove one particle from the completely filled lattice,
/// `2 ζ(β) C`. Particle-hole symmetry reads `mu_±(q) = Ω - mu_∓(1 - q)`.
pub fn filled_lattice_chemical_potential(model: &PowerLawModel) -> Result<f64> {
    Ok(2.0 * riemann_zeta(model.beta() as f64)? * model.coefficient())
}

/// `mu_±(q)` from the particle-by-particle change of interaction energy.
///
/// In a Hubbard crystal the `p`-th neighbour distances take the two values
/// `floor(p/q)` and `floor(p/q) + 1`, in proportions that make their mean
/// exactly `p/q`. Adding (removing) particles shrinks (stretches) every
/// such mean distance; bond order `p` then contributes the intercept of the
/// chord of `V` through the two distances in use on that side of `p/q`.
/// When `p/q` is an integer the two sides differ, which is where the
/// stability window of the step comes from. For `q = 1/n` the term reads
/// `± [r_p V(r_p ∓ 1) - (r_p ∓ 1) V(r_p)]` with `r_p = p n`.
pub fn mu0_series(q: Filling, model: &PowerLawModel, branch: Branch) -> Result<f64> {
    mu0_series_with(q, model, branch, &SeriesPolicy::default())
}

pub fn mu0_series_with(
    q: Filling,
    model: &PowerLawModel,
    branch: Branch,
    policy: &SeriesPolicy,
) -> Result<f64> {
    if q.n() == 1 && branch == Branch::Particle {
        return Err(Error::UnsupportedFilling {
            m: 1,
            n: 1,
            reason: "no particle can be added to the filled lattice",
        });
    }
    let (m, n) = (q.m() as u64, q.n() as u64);
    let v = |r: u64| model.shape(r as f64);
    let term = |p: u64| -> f64 {
        let scaled = p * n;
        let r = scaled / m;
        if scaled % m == 0 && branch == Branch::Particle {
            // chord through (r-1, r)
            v(r - 1) + (r - 1) as f64 * (v(r - 1) - v(r))
        } else {
            // chord through (r, r+1)
            v(r) + r as f64 * (v(r) - v(r + 1))
        }
    };
    // the summand is quasi-periodic with period m in p; whole blocks of m
    // bond orders are smooth in the block index
    let block = |k: u64| (((k - 1) * m + 1)..=(k * m)).map(term).sum::<f64>();
    let reduced = sum_series("zeroth-order chemical potential", policy, block)?;
    Ok(model.coefficient() * reduced)
}

/// Polygamma closed form of `mu_±(1/n)`.
///
/// At `β = 2` the pair `-Ψ(z) - ζ(1)` is read as its finite limit
/// `-(Ψ(z) - Ψ(1))`; for `β >= 3` the expression is evaluated term by term.
pub fn mu0_closed(n: u32, model: &PowerLawModel, branch: Branch) -> Result<f64> {
    if n < 2 {
        return Err(domain("mu0_closed", format!("requires n >= 2, got {n}")));
    }
    let beta = model.beta();
    let nf = n as f64;
    let s = branch.sign();
    let z = (nf - s) / nf;
    let parity = |k: u32| if k % 2 == 0 { 1.0 } else { -1.0 };
    let fact = |k: u32| (1..=k).fold(1.0, |a, i| a * i as f64);

    let first = parity(beta) * polygamma(beta - 1, z)? / (nf.powi(beta as i32) * fact(beta - 1))
        + riemann_zeta(beta as f64)? / nf.powi(beta as i32);
    let second = if beta >= 3 {
        parity(beta - 1) * polygamma(beta - 2, z)? / (nf.powi(beta as i32 - 1) * fact(beta - 2))
            - riemann_zeta(beta as f64 - 1.0)? / nf.powi(beta as i32 - 1)
    } else {
        -(polygamma(0, z)? - polygamma(0, 1.0)?) / nf
    };
    Ok(model.coefficient() * (first + s * second))
}

/// `mu_±(q)` as a literal energy difference `E(N ± 1) - E(N)` of balanced
/// crystals on a ring of `cells * n` sites with shortest-distance pair
/// interactions. Converges to [`mu0_series`] as `cells` grows; independent
/// of it term by term.
pub fn mu0_ring_difference(
    q: Filling,
    model: &PowerLawModel,
    cells: usize,
    branch: Branch,
) -> Result<f64> {
    if cells < 2 {
        return Err(Error::InvalidInput("ring needs at least two unit cells".into()));
    }
    let length = cells * q.n() as usize;
    let particles = cells * q.m() as usize;
    let energy = |count: usize| ring_energy(model, length, &balanced_positions(length, count));
    match branch {
        Branch::Particle => {
            if particles + 1 > length {
                return Err(Error::UnsupportedFilling {
                    m: q.m(),
                    n: q.n(),
                    reason: "ring is already full",
                });
            }
            Ok(energy(particles + 1) - energy(particles))
        }
        Branch::Hole => Ok(energy(particles) - energy(particles - 1)),
    }
}

//! Exact diagonalization of finite open chains.
//!
//! The interaction is truncated at `r` sites and there is no coupling
//! between the two ends. Chemical potentials are ground-state energy
//! differences of neighbouring particle-number sectors.

mod basis;
mod eigen;
mod fit;
mod hamiltonian;

pub use basis::{BinomialTable, FixedNumberBasis, MAX_SITES};
pub use eigen::{lowest_eigenpair, start_vector, Eigenpair, SolverKind, SolverOptions};
pub use fit::{extrapolate_inverse_l, extrapolate_polynomial_inverse_l, fit_polynomial_in_j, loglog_slope, polynomial_fit};
pub use hamiltonian::Hamiltonian;

use crate::classical::{Filling, PowerLawModel};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_DIMENSION_CAP: u128 = 5_000_000;
pub const DEFAULT_INTERACTION_RANGE: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    Open,
}

/// One fixed-N sector of a finite chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EDProblem {
    pub length: usize,
    pub particles: usize,
    pub hopping: f64,
    pub model: PowerLawModel,
    pub interaction_range: usize,
    pub boundary: Boundary,
    pub dimension_cap: u128,
}

impl EDProblem {
    pub fn new(length: usize, particles: usize, hopping: f64, model: PowerLawModel, interaction_range: usize) -> Self {
        Self {
            length,
            particles,
            hopping,
            model,
            interaction_range,
            boundary: Boundary::Open,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles > self.length {
            return Err(Error::InvalidInput(format!(
                "{} particles do not fit on {} sites",
                self.particles, self.length
            )));
        }
        if self.interaction_range < 1 {
            return Err(Error::InvalidInput("interaction range must be at least 1".into()));
        }
        if !self.hopping.is_finite() {
            return Err(Error::InvalidInput("hopping must be finite".into()));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        self.validate()?;
        let basis = FixedNumberBasis::new(self.length, self.particles, self.dimension_cap)?;
        Ok(Hamiltonian::new(basis, &self.model, self.interaction_range, self.hopping))
    }
}

/// Matrix-action handle for `problem`.
pub fn build_hamiltonian(problem: &EDProblem) -> Result<Hamiltonian> {
    problem.hamiltonian()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EDResult {
    pub ground_energy: f64,
    pub residual_norm: f64,
    pub iterations: usize,
    pub dimension: usize,
    pub solver: SolverKind,
}

impl EDResult {
    fn from_pair(pair: &Eigenpair, dimension: usize) -> Self {
        Self {
            ground_energy: pair.value,
            residual_norm: pair.residual_norm,
            iterations: pair.iterations,
            dimension,
            solver: pair.solver,
        }
    }
}

pub fn ground_energy(problem: &EDProblem) -> Result<EDResult> {
    ground_energy_with(problem, &SolverOptions::default())
}

pub fn ground_energy_with(problem: &EDProblem, opts: &SolverOptions) -> Result<EDResult> {
    ground_state(problem, opts).map(|(r, _)| r)
}

/// Ground-state energy together with its normalised eigenvector.
pub fn ground_state(problem: &EDProblem, opts: &SolverOptions) -> Result<(EDResult, Vec<f64>)> {
    let h = problem.hamiltonian()?;
    let pair = lowest_eigenpair(&h, opts)?;
    Ok((EDResult::from_pair(&pair, h.dimension()), pair.vector))
}

/// How a nominal length `L` at filling `q` becomes a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainGeometry {
    /// `N = qL` particles on just enough sites that the crystal
    /// `X_i = floor(i n / m)` occupies both end sites.
    Commensurate,
    /// `N = qL` particles on `L` sites.
    Plain,
}

impl ChainGeometry {
    /// `(sites, particles)` for nominal length `length`.
    pub fn chain(self, length: usize, q: Filling) -> Result<(usize, usize)> {
        let (m, n) = (q.m() as usize, q.n() as usize);
        if length == 0 || length % n != 0 {
            return Err(Error::InvalidInput(format!(
                "length {length} is not a multiple of the unit cell of {q}"
            )));
        }
        let particles = length / n * m;
        let sites = match self {
            ChainGeometry::Plain => length,
            ChainGeometry::Commensurate => (particles - 1) * n / m + 1,
        };
        Ok((sites, particles))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdOptions {
    pub geometry: ChainGeometry,
    pub solver: SolverOptions,
    pub dimension_cap: u128,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self {
            geometry: ChainGeometry::Commensurate,
            solver: SolverOptions::default(),
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

/// `mu_+ = E(N+1) - E(N)` and `mu_- = E(N) - E(N-1)` at one length and
/// hopping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentialSample {
    pub length: usize,
    pub filling: Filling,
    pub hopping: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

/// Smallest length at which a `1/n` crystal is expected to be resolved.
pub fn minimum_length(q: Filling) -> usize {
    2 * (q.n() as usize).pow(2)
}

pub fn chemical_potentials(
    length: usize,
    q: Filling,
    hopping: f64,
    model: &PowerLawModel,
    range: usize,
) -> Result<ChemicalPotentialSample> {
    let s = chemical_potential_scan(length, q, &[hopping], model, range, &EdOptions::default())?;
    Ok(s[0])
}

/// The three sectors of one length, kept so that a scan over the hopping
/// reuses bases and diagonals.
struct SectorTriple {
    sectors: [Hamiltonian; 3],
}

impl SectorTriple {
    fn new(sites: usize, particles: usize, model: &PowerLawModel, range: usize, cap: u128) -> Result<Self> {
        if particles == 0 || particles + 1 > sites {
            return Err(Error::InvalidInput(format!(
                "{particles} particles on {sites} sites leave no room for both excitations"
            )));
        }
        if range < 1 {
            return Err(Error::InvalidInput("interaction range must be at least 1".into()));
        }
        let make = |n: usize| -> Result<Hamiltonian> {
            let basis = FixedNumberBasis::new(sites, n, cap)?;
            Ok(Hamiltonian::new(basis, model, range, 0.0))
        };
        Ok(Self {
            sectors: [make(particles - 1)?, make(particles)?, make(particles + 1)?],
        })
    }
}

/// One ground-state solve inside a chemical-potential scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorSolve {
    pub sites: usize,
    pub particles: usize,
    pub hopping: f64,
    pub result: EDResult,
}

/// Chemical potentials at one nominal length for every hopping in
/// `hoppings`, solved in the given order.
pub fn chemical_potential_scan(
    length: usize,
    q: Filling,
    hoppings: &[f64],
    model: &PowerLawModel,
    range: usize,
    opts: &EdOptions,
) -> Result<Vec<ChemicalPotentialSample>> {
    Ok(chemical_potential_scan_detailed(length, q, hoppings, model, range, opts)?
        .into_iter()
        .map(|(s, _)| s)
        .collect())
}

/// [`chemical_potential_scan`] that also returns the `N-1`, `N`, `N+1`
/// solves behind each sample.
pub fn chemical_potential_scan_detailed(
    length: usize,
    q: Filling,
    hoppings: &[f64],
    model: &PowerLawModel,
    range: usize,
    opts: &EdOptions,
) -> Result<Vec<(ChemicalPotentialSample, [SectorSolve; 3])>> {
    let (sites, particles) = opts.geometry.chain(length, q)?;
    if length < minimum_length(q) {
        log::warn!(
            "length {length} is below 2n^2 = {} for filling {q}; finite-size errors may dominate",
            minimum_length(q)
        );
    }
    let mut triple = SectorTriple::new(sites, particles, model, range, opts.dimension_cap)?;
    let mut out = Vec::with_capacity(hoppings.len());
    for &j in hoppings {
        if !j.is_finite() {
            return Err(Error::InvalidInput("hopping must be finite".into()));
        }
        let mut solves = Vec::with_capacity(3);
        for (k, h) in triple.sectors.iter_mut().enumerate() {
            h.set_hopping(j);
            let pair = lowest_eigenpair(h, &opts.solver)?;
            solves.push(SectorSolve {
                sites,
                particles: particles + k - 1,
                hopping: j,
                result: EDResult::from_pair(&pair, h.dimension()),
            });
        }
        let e: Vec<f64> = solves.iter().map(|s| s.result.ground_energy).collect();
        let sample = ChemicalPotentialSample {
            length,
            filling: q,
            hopping: j,
            mu_plus: e[2] - e[1],
            mu_minus: e[1] - e[0],
        };
        out.push((sample, [solves[0], solves[1], solves[2]]));
    }
    Ok(out)
}

/// [`chemical_potential_scan`] for several lengths, run on the worker pool
/// and returned ordered by length, then hopping.
pub fn chemical_potential_sweep(
    lengths: &[usize],
    q: Filling,
    hoppings: &[f64],
    model: &PowerLawModel,
    range: usize,
    opts: &EdOptions,
) -> Result<Vec<ChemicalPotentialSample>> {
    Ok(chemical_potential_sweep_detailed(lengths, q, hoppings, model, range, opts)?
        .into_iter()
        .map(|(s, _)| s)
        .collect())
}

pub fn chemical_potential_sweep_detailed(
    lengths: &[usize],
    q: Filling,
    hoppings: &[f64],
    model: &PowerLawModel,
    range: usize,
    opts: &EdOptions,
) -> Result<Vec<(ChemicalPotentialSample, [SectorSolve; 3])>> {
    let per: Vec<Result<Vec<_>>> = lengths
        .par_iter()
        .map(|&l| chemical_potential_scan_detailed(l, q, hoppings, model, range, opts))
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

/// Ground states of many independent problems on the worker pool, in input
/// order.
pub fn ed_sweep(problems: &[EDProblem], opts: &SolverOptions) -> Vec<Result<EDResult>> {
    problems.par_iter().map(|p| ground_energy_with(p, opts)).collect()
}

/// Value extrapolated to infinite length, per hopping: `(J, a)` from a
/// least-squares polynomial of `degree` in `1/L` (`degree = 1` is `a + b/L`).
pub fn extrapolate_samples(
    samples: &[ChemicalPotentialSample],
    degree: usize,
    pick: impl Fn(&ChemicalPotentialSample) -> f64,
) -> Result<Vec<(f64, f64)>> {
    let mut hoppings: Vec<f64> = samples.iter().map(|s| s.hopping).collect();
    hoppings.sort_by(f64::total_cmp);
    hoppings.dedup();
    hoppings
        .into_iter()
        .map(|j| {
            let pts: Vec<(usize, f64)> = samples
                .iter()
                .filter(|s| s.hopping == j)
                .map(|s| (s.length, pick(s)))
                .collect();
            let c = extrapolate_polynomial_inverse_l(&pts, degree)?;
            Ok((j, c[0]))
        })
        .collect()
}

/// Polynomial-in-`J` coefficients of the extrapolated boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFit {
    pub mu_plus: Vec<f64>,
    pub mu_minus: Vec<f64>,
    /// `mu_plus - mu_minus`.
    pub gap: Vec<f64>,
}

/// Extrapolates each boundary to infinite length with a polynomial of
/// `length_degree` in `1/L`, then fits a polynomial of `hopping_degree` in
/// `J` to the extrapolated values.
pub fn fit_boundaries(
    samples: &[ChemicalPotentialSample],
    length_degree: usize,
    hopping_degree: usize,
) -> Result<BoundaryFit> {
    let fit = |pick: fn(&ChemicalPotentialSample) -> f64| -> Result<Vec<f64>> {
        let ext = extrapolate_samples(samples, length_degree, pick)?;
        fit_polynomial_in_j(&ext, hopping_degree)
    };
    Ok(BoundaryFit {
        mu_plus: fit(|s| s.mu_plus)?,
        mu_minus: fit(|s| s.mu_minus)?,
        gap: fit(|s| s.mu_plus - s.mu_minus)?,
    })
}

//! The hopping-free limit: classical crystals of hard-core particles with a
//! convex pair potential.

mod brute;
mod staircase;
mod zeroth;

pub use brute::{brute_force_open_ground, brute_force_ring_ground, open_chain_energy, BRUTE_FORCE_CAP};
pub use staircase::{
    build_staircase, farey_fillings, filling_hole_dual, unit_step_scaling_exponent, StaircaseStep,
};
pub use zeroth::{filled_lattice_chemical_potential, mu0_closed, mu0_ring_difference, mu0_series};

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Reduced filling fraction `m/n` with `1 <= m <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FillingRepr", into = "FillingRepr")]
pub struct Filling {
    m: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct FillingRepr {
    m: u32,
    n: u32,
}

impl TryFrom<FillingRepr> for Filling {
    type Error = Error;
    fn try_from(r: FillingRepr) -> Result<Self> {
        Filling::new(r.m, r.n)
    }
}

impl From<Filling> for FillingRepr {
    fn from(f: Filling) -> Self {
        FillingRepr { m: f.m, n: f.n }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Filling {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidFilling {
                m,
                n,
                reason: "numerator and denominator must be positive",
            });
        }
        if m > n {
            return Err(Error::InvalidFilling {
                m,
                n,
                reason: "filling must not exceed one",
            });
        }
        if gcd(m as u64, n as u64) != 1 {
            return Err(Error::InvalidFilling {
                m,
                n,
                reason: "fraction must be reduced",
            });
        }
        Ok(Self { m, n })
    }

    /// `1/n`.
    pub fn unit(n: u32) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn is_unit(&self) -> bool {
        self.m == 1
    }

    /// The particle-hole conjugate `1 - q`, absent for `q = 1`.
    pub fn conjugate(&self) -> Option<Self> {
        (self.m < self.n).then(|| Self {
            m: self.n - self.m,
            n: self.n,
        })
    }
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

/// `V(r) = C / r^beta` on the integer lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    beta: u32,
    coefficient: f64,
}

impl PowerLawModel {
    pub fn new(beta: u32, coefficient: f64) -> Result<Self> {
        if beta < 2 {
            return Err(Error::InvalidModel(format!(
                "interaction exponent must be at least 2, got {beta}"
            )));
        }
        if !(coefficient > 0.0) || !coefficient.is_finite() {
            return Err(Error::InvalidModel(format!(
                "interaction coefficient must be positive, got {coefficient}"
            )));
        }
        Ok(Self { beta, coefficient })
    }

    /// Unit coefficient, i.e. energies measured in `C / a^beta`.
    pub fn unit(beta: u32) -> Result<Self> {
        Self::new(beta, 1.0)
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// Reduced potential `r^{-beta}` for real `r > 0`, without the coefficient.
    #[inline]
    pub(crate) fn shape(&self, r: f64) -> f64 {
        r.powi(-(self.beta as i32))
    }

    #[inline]
    pub(crate) fn at(&self, r: f64) -> f64 {
        self.coefficient * self.shape(r)
    }

    /// The same exponent with unit coefficient.
    pub fn reduced(&self) -> Self {
        Self {
            beta: self.beta,
            coefficient: 1.0,
        }
    }
}

/// Pair potential at integer separation `r >= 1`.
pub fn potential(model: &PowerLawModel, r: i64) -> Result<f64> {
    if r < 1 {
        return Err(domain("potential", format!("separation must be >= 1, got {r}")));
    }
    Ok(model.at(r as f64))
}

/// Discrete convexity `V(r+1) + V(r-1) >= 2 V(r)` for `2 <= r <= range - 1`.
pub fn check_convex<F>(v: F, range: u64) -> bool
where
    F: Fn(u64) -> f64,
{
    (2..range).all(|r| v(r + 1) + v(r - 1) >= 2.0 * v(r))
}

/// Particle positions on a ring of `length` sites plus the separations
/// between cyclically consecutive particles (the last one wraps around).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalConfiguration {
    pub length: usize,
    pub positions: Vec<usize>,
    pub gap_sequence: Vec<usize>,
}

impl CrystalConfiguration {
    pub fn from_positions(length: usize, positions: Vec<usize>) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("positions must be strictly increasing".into()));
        }
        if positions.last().is_some_and(|&p| p >= length) {
            return Err(Error::InvalidInput("position outside the ring".into()));
        }
        let gap_sequence = if positions.is_empty() {
            Vec::new()
        } else {
            let mut g: Vec<usize> = positions.windows(2).map(|w| w[1] - w[0]).collect();
            g.push(length - positions[positions.len() - 1] + positions[0]);
            g
        };
        Ok(Self {
            length,
            positions,
            gap_sequence,
        })
    }

    /// Occupation bitmask (site `i` is bit `i`).
    pub fn bits(&self) -> u64 {
        self.positions.iter().fold(0u64, |acc, &p| acc | (1u64 << p))
    }

    /// Interaction energy on the ring, shortest distance, each pair once.
    pub fn ring_energy(&self, model: &PowerLawModel) -> f64 {
        ring_energy(model, self.length, &self.positions)
    }
}

pub(crate) fn ring_energy(model: &PowerLawModel, length: usize, positions: &[usize]) -> f64 {
    let table: Vec<f64> = (0..=length / 2)
        .map(|d| if d == 0 { 0.0 } else { model.at(d as f64) })
        .collect();
    let mut e = 0.0;
    for (a, &x) in positions.iter().enumerate() {
        for &y in &positions[a + 1..] {
            let d = y - x;
            e += table[d.min(length - d)];
        }
    }
    e
}

/// Hubbard's minimal-energy pattern `X_i = floor(i n / m)` over `cells` unit
/// cells, with `X_0 = 0`.
pub fn hubbard_configuration(q: Filling, cells: usize) -> CrystalConfiguration {
    let (m, n) = (q.m as usize, q.n as usize);
    let positions: Vec<usize> = (0..cells * m).map(|i| i * n / m).collect();
    CrystalConfiguration::from_positions(cells * n, positions)
        .expect("floor pattern is strictly increasing inside the ring")
}

/// Most uniform arrangement of `particles` on a ring of `length` sites.
pub(crate) fn balanced_positions(length: usize, particles: usize) -> Vec<usize> {
    (0..particles).map(|i| i * length / particles).collect()
}

/// Which excitation a chemical potential refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Adding a particle, `mu_+`.
    Particle,
    /// Removing a particle, `mu_-`.
    Hole,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Particle => 1.0,
            Branch::Hole => -1.0,
        }
    }

    pub fn both() -> [Branch; 2] {
        [Branch::Particle, Branch::Hole]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filling_validation() {
        assert!(Filling::new(2, 4).is_err());
        assert!(Filling::new(3, 2).is_err());
        assert!(Filling::new(0, 3).is_err());
        let q = Filling::new(2, 5).unwrap();
        assert_eq!(q.conjugate(), Some(Filling::new(3, 5).unwrap()));
        assert_eq!(Filling::new(1, 1).unwrap().conjugate(), None);
        assert_eq!(q.to_string(), "2/5");
    }

    #[test]
    fn filling_json_rejects_unreduced() {
        let ok: Filling = serde_json::from_str(r#"{"m":1,"n":3}"#).unwrap();
        assert_eq!(ok, Filling::unit(3).unwrap());
        assert!(serde_json::from_str::<Filling>(r#"{"m":2,"n":6}"#).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(PowerLawModel::new(1, 1.0).is_err());
        assert!(PowerLawModel::new(6, 0.0).is_err());
        assert!(PowerLawModel::new(6, -2.0).is_err());
        assert!(PowerLawModel::new(2, 3.5).is_ok());
    }

    #[test]
    fn potential_values() {
        let m6 = PowerLawModel::unit(6).unwrap();
        let m3 = PowerLawModel::unit(3).unwrap();
        assert_eq!(potential(&m6, 1).unwrap(), 1.0);
        assert_eq!(potential(&m6, 2).unwrap(), 1.0 / 64.0);
        assert!((potential(&m3, 3).unwrap() - 1.0 / 27.0).abs() < 1e-17);
        assert!(potential(&m6, 0).is_err());
        let scaled = PowerLawModel::new(6, 2.5).unwrap();
        assert_eq!(potential(&scaled, 2).unwrap(), 2.5 / 64.0);
    }

    #[test]
    fn convexity() {
        let m6 = PowerLawModel::unit(6).unwrap();
        assert!(check_convex(|r| potential(&m6, r as i64).unwrap(), 50));
        assert!(!check_convex(|r| -((r * r) as f64), 50));
        assert!(!check_convex(|r| (r as f64).sqrt(), 50));
        // linear potentials sit on the boundary: equality everywhere
        assert!(check_convex(|r| -(r as f64), 50));
        assert!(check_convex(|_| 1.0, 50));
    }

    #[test]
    fn hubbard_patterns() {
        let c = hubbard_configuration(Filling::unit(2).unwrap(), 4);
        assert_eq!(c.gap_sequence, vec![2; 4]);
        let c = hubbard_configuration(Filling::unit(3).unwrap(), 3);
        assert_eq!(c.positions, vec![0, 3, 6]);
        assert_eq!(c.gap_sequence, vec![3; 3]);
        let c = hubbard_configuration(Filling::new(2, 5).unwrap(), 3);
        assert_eq!(c.positions, vec![0, 2, 5, 7, 10, 12]);
        assert_eq!(c.gap_sequence, vec![2, 3, 2, 3, 2, 3]);
    }

    #[test]
    fn hubbard_gaps_are_floor_or_ceil() {
        for n in 2..12u32 {
            for m in 1..n {
                let Ok(q) = Filling::new(m, n) else { continue };
                let c = hubbard_configuration(q, 3);
                let lo = (n / m) as usize;
                let hi = n.div_ceil(m) as usize;
                assert!(c.gap_sequence.iter().all(|&g| g == lo || g == hi), "{q}");
                // one unit cell repeats
                let per = m as usize;
                for (i, g) in c.gap_sequence.iter().enumerate() {
                    assert_eq!(*g, c.gap_sequence[i % per]);
                }
            }
        }
    }
}

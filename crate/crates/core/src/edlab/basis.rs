//! Fixed-particle-number occupation basis.
//!
//! States are bit patterns (site `i` is bit `i`) listed in increasing
//! integer order, which for a fixed popcount is colexicographic order. The
//! index of a pattern with particles at `p_0 < p_1 < ...` is
//! `Σ_k C(p_k, k + 1)`, so moving particle `k` from `i` to `i + 1` shifts
//! the index by exactly `C(i, k)`.

use crate::error::{Error, Result};

pub const MAX_SITES: usize = 63;

/// Pascal triangle up to `MAX_SITES`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows = vec![vec![0u64; max_n + 2]; max_n + 1];
        for n in 0..=max_n {
            rows[n][0] = 1;
            for k in 1..=n {
                rows[n][k] = rows[n - 1][k - 1].saturating_add(if k < n { rows[n - 1][k] } else { 0 });
            }
        }
        Self { rows }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixedNumberBasis {
    sites: usize,
    particles: usize,
    binomial: BinomialTable,
    states: Vec<u64>,
}

impl FixedNumberBasis {
    /// Enumerates all `C(sites, particles)` patterns, refusing sectors larger
    /// than `cap`.
    pub fn new(sites: usize, particles: usize, cap: u128) -> Result<Self> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::InvalidInput(format!(
                "chain length must lie in 1..={MAX_SITES}, got {sites}"
            )));
        }
        if particles > sites {
            return Err(Error::InvalidInput(format!(
                "{particles} particles do not fit on {sites} sites"
            )));
        }
        let binomial = BinomialTable::new(sites);
        let dim = binomial.get(sites, particles) as u128;
        if dim > cap {
            return Err(Error::SizeCap {
                what: "ED sector dimension",
                needed: dim,
                cap,
            });
        }
        let mut states = Vec::with_capacity(dim as usize);
        if particles == 0 {
            states.push(0);
        } else {
            let limit = 1u64 << sites;
            let mut x = (1u64 << particles) - 1;
            while x < limit {
                states.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(states.len() as u128, dim);
        Ok(Self {
            sites,
            particles,
            binomial,
            states,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    #[inline]
    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }

    pub fn binomial(&self) -> &BinomialTable {
        &self.binomial
    }

    /// Index of `state`; `None` if it is not in this sector.
    pub fn rank(&self, state: u64) -> Option<usize> {
        if state.count_ones() as usize != self.particles || (self.sites < 64 && state >> self.sites != 0) {
            return None;
        }
        let mut m = state;
        let mut k = 0;
        let mut r = 0u64;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            k += 1;
            r += self.binomial.get(p, k);
            m &= m - 1;
        }
        Some(r as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_is_position_in_list() {
        let b = FixedNumberBasis::new(9, 4, u128::MAX).unwrap();
        assert_eq!(b.dimension(), 126);
        for (i, &s) in b.states().iter().enumerate() {
            assert_eq!(b.rank(s), Some(i));
        }
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.rank(0b111), None);
        assert_eq!(b.rank(1 << 20 | 0b111), None);
    }

    #[test]
    fn small_sector_order() {
        let b = FixedNumberBasis::new(3, 2, u128::MAX).unwrap();
        assert_eq!(b.states(), &[0b011, 0b101, 0b110]);
    }

    #[test]
    fn hop_shift_is_a_binomial() {
        let b = FixedNumberBasis::new(10, 4, u128::MAX).unwrap();
        for (a, &s) in b.states().iter().enumerate() {
            let mut m = s;
            let mut k = 0;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                if i + 1 < 10 && s >> (i + 1) & 1 == 0 {
                    let t = s ^ (1 << i) ^ (1 << (i + 1));
                    assert_eq!(b.rank(t).unwrap(), a + b.binomial().get(i, k) as usize);
                }
                m &= m - 1;
                k += 1;
            }
        }
    }

    #[test]
    fn cap_and_bounds() {
        assert!(matches!(FixedNumberBasis::new(20, 10, 1000), Err(Error::SizeCap { .. })));
        assert!(FixedNumberBasis::new(4, 5, u128::MAX).is_err());
        assert!(FixedNumberBasis::new(64, 1, u128::MAX).is_err());
        assert_eq!(FixedNumberBasis::new(5, 0, 10).unwrap().dimension(), 1);
        assert_eq!(BinomialTable::new(63).get(63, 31), 916_312_070_471_295_267);
    }
}

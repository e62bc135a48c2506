use super::basis::FixedNumberBasis;
use crate::classical::{open_chain_energy, PowerLawModel};
use rayon::prelude::*;

const CHUNK: usize = 4096;

/// `H = Σ_{i<j, j-i<=r} V(j-i) n_i n_j - J Σ_i (b_i^† b_{i+1} + h.c.)` on an
/// open chain, acting on one fixed-N sector.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: FixedNumberBasis,
    diagonal: Vec<f64>,
    hopping: f64,
}

impl Hamiltonian {
    pub fn new(basis: FixedNumberBasis, model: &PowerLawModel, range: usize, hopping: f64) -> Self {
        let diagonal = basis
            .states()
            .par_iter()
            .map(|&s| {
                let pos: Vec<usize> = (0..basis.sites()).filter(|i| s >> i & 1 == 1).collect();
                open_chain_energy(model, &pos, Some(range))
            })
            .collect();
        Self {
            basis,
            diagonal,
            hopping,
        }
    }

    pub fn basis(&self) -> &FixedNumberBasis {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn set_hopping(&mut self, hopping: f64) {
        self.hopping = hopping;
    }

    /// Sum of `x` over all states one hop away from state `a`.
    #[inline]
    fn neighbour_sum(&self, a: usize, x: &[f64]) -> f64 {
        let s = self.basis.state(a);
        let sites = self.basis.sites();
        let binom = self.basis.binomial();
        let mut acc = 0.0;
        let mut m = s;
        let mut k = 0;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            if i + 1 < sites && s >> (i + 1) & 1 == 0 {
                acc += x[a + binom.get(i, k) as usize];
            }
            if i >= 1 && s >> (i - 1) & 1 == 0 {
                acc += x[a - binom.get(i - 1, k) as usize];
            }
            m &= m - 1;
            k += 1;
        }
        acc
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dimension());
        assert_eq!(y.len(), self.dimension());
        let j = self.hopping;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
            let base = c * CHUNK;
            for (o, yo) in out.iter_mut().enumerate() {
                let a = base + o;
                let hop = if j == 0.0 { 0.0 } else { self.neighbour_sum(a, x) };
                *yo = self.diagonal[a] * x[a] - j * hop;
            }
        });
    }

    /// Dense copy, for small sectors.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let d = self.dimension();
        let mut m = nalgebra::DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for c in 0..d {
            e[c] = 1.0;
            self.apply(&e, &mut col);
            m.set_column(c, &nalgebra::DVector::from_column_slice(&col));
            e[c] = 0.0;
        }
        m
    }

    /// `<x, H x> / <x, x>`.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        dot(x, &y) / dot(x, x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

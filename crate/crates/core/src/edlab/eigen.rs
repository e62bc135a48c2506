//! Lowest eigenpair of a [`Hamiltonian`].

use super::hamiltonian::{dot, Hamiltonian};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverKind {
    /// Dense up to `dense_threshold`, Davidson above.
    Auto,
    Dense,
    Lanczos,
    Davidson,
    /// Zero hopping: the lowest diagonal entry.
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub kind: SolverKind,
    /// Required `‖H v - E v‖` for a normalised `v`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub dense_threshold: usize,
    /// Krylov vectors kept before a restart.
    pub max_subspace: usize,
    pub seed: u64,
    /// Norm of the random part of the start vector.
    pub perturbation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            kind: SolverKind::Auto,
            tolerance: 1e-10,
            max_iterations: 10_000,
            dense_threshold: 2000,
            max_subspace: 24,
            seed: 0x5eed_1d5_u64,
            perturbation: 1e-2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub solver: SolverKind,
}

/// Lowest eigenvalue and a normalised eigenvector of `h`.
pub fn lowest_eigenpair(h: &Hamiltonian, opts: &SolverOptions) -> Result<Eigenpair> {
    if h.hopping() == 0.0 && matches!(opts.kind, SolverKind::Auto | SolverKind::Diagonal) {
        return Ok(diagonal_minimum(h));
    }
    match opts.kind {
        SolverKind::Dense => dense(h),
        SolverKind::Lanczos => lanczos(h, opts),
        SolverKind::Davidson => davidson(h, opts),
        SolverKind::Diagonal => Err(Error::InvalidInput(
            "the diagonal solver needs zero hopping".into(),
        )),
        SolverKind::Auto if h.dimension() <= opts.dense_threshold => dense(h),
        SolverKind::Auto => davidson(h, opts),
    }
}

fn diagonal_minimum(h: &Hamiltonian) -> Eigenpair {
    let d = h.diagonal();
    let (idx, &value) = d
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("sectors are non-empty");
    let mut vector = vec![0.0; d.len()];
    vector[idx] = 1.0;
    Eigenpair {
        value,
        vector,
        residual_norm: 0.0,
        iterations: 0,
        solver: SolverKind::Diagonal,
    }
}

fn residual(h: &Hamiltonian, v: &[f64], value: f64) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.apply(v, &mut hv);
    hv.iter().zip(v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt()
}

fn dense(h: &Hamiltonian) -> Result<Eigenpair> {
    let eig = SymmetricEigen::new(h.to_dense());
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("sectors are non-empty");
    let mut vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    normalise(&mut vector);
    let residual_norm = residual(h, &vector, value);
    Ok(Eigenpair {
        value,
        vector,
        residual_norm,
        iterations: 1,
        solver: SolverKind::Dense,
    })
}

fn normalise(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a += alpha * b);
}

/// Two passes of classical Gram-Schmidt against `basis`.
fn orthogonalise(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            axpy(-c, b, v);
        }
    }
}

/// Flat weight on the lowest-diagonal states plus a fixed-seed random part
/// of norm `perturbation`. For a commensurate sector at small hopping the
/// lowest diagonal state is the classical crystal.
pub fn start_vector(h: &Hamiltonian, opts: &SolverOptions) -> Vec<f64> {
    let d = h.diagonal();
    let lowest = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut v: Vec<f64> = d
        .iter()
        .map(|&x| if x - lowest <= 1e-9 * lowest.abs().max(1.0) { 1.0 } else { 0.0 })
        .collect();
    normalise(&mut v);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut noise: Vec<f64> = (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalise(&mut noise);
    axpy(opts.perturbation, &noise, &mut v);
    normalise(&mut v);
    v
}

fn lowest_of(small: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(small.clone());
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    (value, eig.eigenvectors.column(idx).iter().copied().collect())
}

fn combine(vectors: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; vectors[0].len()];
    for (v, &c) in vectors.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

/// Explicitly restarted Lanczos with full reorthogonalisation.
fn lanczos(h: &Hamiltonian, opts: &SolverOptions) -> Result<Eigenpair> {
    let dim = h.dimension();
    let m = opts.max_subspace.max(4).min(dim);
    let mut start = start_vector(h, opts);
    let mut iterations = 0;
    let mut w = vec![0.0; dim];
    let last_residual = loop {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut broke_down = false;
        for k in 0..m {
            h.apply(&basis[k], &mut w);
            iterations += 1;
            let a = dot(&basis[k], &w);
            alpha.push(a);
            orthogonalise(&mut w, &basis);
            let b = normalise(&mut w);
            if k + 1 == m {
                break;
            }
            if b < 1e-14 {
                broke_down = true;
                break;
            }
            beta.push(b);
            basis.push(w.clone());
        }
        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (value, s) = lowest_of(&t);
        let mut ritz = combine(&basis[..k], &s);
        normalise(&mut ritz);
        let res = residual(h, &ritz, value);
        if res <= opts.tolerance || broke_down && res <= 10.0 * opts.tolerance {
            return Ok(Eigenpair {
                value,
                vector: ritz,
                residual_norm: res,
                iterations,
                solver: SolverKind::Lanczos,
            });
        }
        if iterations >= opts.max_iterations {
            break res;
        }
        start = ritz;
    };
    Err(Error::NoConvergence {
        iterations,
        residual: last_residual,
    })
}

/// Davidson iteration with the diagonal as preconditioner and a thick
/// restart that keeps the current and previous Ritz vectors.
fn davidson(h: &Hamiltonian, opts: &SolverOptions) -> Result<Eigenpair> {
    let dim = h.dimension();
    let diag = h.diagonal();
    let max_sub = opts.max_subspace.max(4).min(dim);
    let mut basis: Vec<Vec<f64>> = vec![start_vector(h, opts)];
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut projected = DMatrix::<f64>::zeros(0, 0);
    let mut previous: Option<Vec<f64>> = None;
    let mut last_residual = f64::INFINITY;

    for iteration in 1..=opts.max_iterations {
        // extend the projected matrix by the newest basis vector
        let newest = basis.len() - 1;
        let mut hv = vec![0.0; dim];
        h.apply(&basis[newest], &mut hv);
        images.push(hv);
        let k = basis.len();
        let mut grown = DMatrix::zeros(k, k);
        grown.view_mut((0, 0), (k - 1, k - 1)).copy_from(&projected);
        for i in 0..k {
            let x = dot(&basis[i], &images[newest]);
            grown[(i, newest)] = x;
            grown[(newest, i)] = x;
        }
        projected = grown;

        let (theta, s) = lowest_of(&projected);
        let mut u = combine(&basis, &s);
        let mut r = combine(&images, &s);
        let norm = normalise(&mut u);
        r.iter_mut().zip(&u).for_each(|(ri, ui)| *ri = *ri / norm - theta * ui);
        last_residual = dot(&r, &r).sqrt();
        if last_residual <= opts.tolerance {
            // recheck against a fresh product to shed accumulated rounding
            let true_residual = residual(h, &u, theta);
            if true_residual <= opts.tolerance {
                return Ok(Eigenpair {
                    value: theta,
                    vector: u,
                    residual_norm: true_residual,
                    iterations: iteration,
                    solver: SolverKind::Davidson,
                });
            }
        }

        let mut t: Vec<f64> = r
            .iter()
            .zip(diag)
            .map(|(ri, di)| {
                let gap = di - theta;
                let gap = if gap.abs() < 1e-12 { 1e-12f64.copysign(gap) } else { gap };
                ri / gap
            })
            .collect();

        if basis.len() >= max_sub {
            let mut kept = vec![u.clone()];
            if let Some(p) = previous.take() {
                let mut p = p;
                orthogonalise(&mut p, &kept);
                if normalise(&mut p) > 1e-8 {
                    kept.push(p);
                }
            }
            images.clear();
            basis = kept;
            // rebuild images and the projected matrix for the kept vectors
            for b in &basis {
                let mut hb = vec![0.0; dim];
                h.apply(b, &mut hb);
                images.push(hb);
            }
            let k = basis.len();
            projected = DMatrix::from_fn(k, k, |i, j| dot(&basis[i], &images[j]));
            projected = (&projected + projected.transpose()) * 0.5;
        }
        previous = Some(u);

        orthogonalise(&mut t, &basis);
        if normalise(&mut t) < 1e-14 {
            // preconditioned residual lies in the subspace; fall back to r
            t = r;
            orthogonalise(&mut t, &basis);
            if normalise(&mut t) < 1e-14 {
                break;
            }
        }
        basis.push(t);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual: last_residual,
    })
}

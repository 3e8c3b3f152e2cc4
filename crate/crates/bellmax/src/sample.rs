//! Random matrices, states and projectors for tests and diagnostics.
//!
//! Everything takes an explicit RNG so callers stay reproducible.

use num_complex::Complex64;
use rand::Rng;

use crate::numerics::{vec_inner, vec_norm, Matrix, Scalar};

/// Standard normal via Box-Muller.
pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> Scalar {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn real_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), 0.0))
}

/// Haar-ish random unit vector (Gaussian entries, normalized).
pub fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub fn real_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..dim).map(|_| Complex64::new(gaussian(rng), 0.0)).collect();
        let n = vec_norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random Hermitian matrix (G + G†)/2.
pub fn hermitian<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let g = complex_matrix(rng, dim, dim);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let cols = orthonormal_columns(rng, dim, |r| complex_gaussian(r));
    Matrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Random real orthogonal matrix.
pub fn real_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let cols = orthonormal_columns(rng, dim, |r| Complex64::new(gaussian(r), 0.0));
    Matrix::from_fn(dim, dim, |r, c| cols[c][r])
}

fn orthonormal_columns<R: Rng>(
    rng: &mut R,
    dim: usize,
    mut entry: impl FnMut(&mut R) -> Scalar,
) -> Vec<Vec<Scalar>> {
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut cand: Vec<Scalar> = (0..dim).map(|_| entry(rng)).collect();
        for existing in &cols {
            let overlap = vec_inner(existing, &cand);
            for (c, e) in cand.iter_mut().zip(existing) {
                *c -= overlap * e;
            }
        }
        let n = vec_norm(&cand);
        if n > 1e-6 {
            cols.push(cand.into_iter().map(|x| x / n).collect());
        }
    }
    cols
}

/// Random rank-1 projector |v><v|.
pub fn rank1_projector<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let v = unit_vector(rng, dim);
    Matrix::outer(&v, &v)
}

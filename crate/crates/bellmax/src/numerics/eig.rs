//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! At dimension <= 16 the full spectrum is cheap, so we always compute it and
//! select what is needed. The sweep order is fixed, which makes the output
//! deterministic for a fixed input matrix.

use num_complex::Complex64;

use super::{check_eig_input, vec_norm, Matrix, Scalar};
use crate::Result;

/// An eigenvalue with a unit-norm eigenvector.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<Scalar>,
}

const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Full spectrum of a Hermitian matrix, sorted descending.
///
/// Returns the eigenvalues and a unitary whose columns are the matching
/// eigenvectors.
pub fn hermitian_eigen(h: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    check_eig_input(h)?;
    let (values, vectors) = jacobi(h);
    // Stable sort keeps the Jacobi column order on ties.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let n = h.rows();
    let sorted_vectors = Matrix::from_fn(n, n, |r, c| vectors.get(r, order[c]));
    Ok((sorted_values, sorted_vectors))
}

/// Algebraically largest eigenvalue and a corresponding unit eigenvector.
pub fn hermitian_eig_max(h: &Matrix) -> Result<EigenPair> {
    let (values, vectors) = hermitian_eigen(h)?;
    let vector = vectors.column(0);
    let norm = vec_norm(&vector);
    Ok(EigenPair {
        value: values[0],
        vector: vector.into_iter().map(|x| x / norm).collect(),
    })
}

/// Cyclic Jacobi for a Hermitian matrix. Caller has validated the input.
fn jacobi(h: &Matrix) -> (Vec<f64>, Matrix) {
    let n = h.rows();
    let mut a = h.clone();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    let threshold = OFF_DIAGONAL_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, threshold);
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    (values, v)
}

/// Zero out a[p][q] with a unitary plane rotation; update a and the
/// accumulated eigenvector matrix v.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, threshold: f64) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= threshold {
        return;
    }
    let phase = apq / r; // e^{i arg(apq)}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // R differs from the identity only in the (p,q) plane:
    //   R[p][p] = c, R[p][q] = s*phase, R[q][p] = -s*conj(phase), R[q][q] = c
    let sp = phase * s;

    let n = a.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        let new_kp = akp * c - akq * sp.conj();
        let new_kq = akp * sp + akq * c;
        a.set(k, p, new_kp);
        a.set(p, k, new_kp.conj());
        a.set(k, q, new_kq);
        a.set(q, k, new_kq.conj());
    }
    a.set(p, p, Complex64::new(app - t * r, 0.0));
    a.set(q, q, Complex64::new(aqq + t * r, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));

    for k in 0..v.rows() {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * sp.conj());
        v.set(k, q, vkp * sp + vkq * c);
    }
}

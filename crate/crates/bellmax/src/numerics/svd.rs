//! Singular value decomposition by one-sided Jacobi column orthogonalization.

use num_complex::Complex64;

use super::{vec_norm, Matrix, Scalar, MAX_DIM};
use crate::{Error, Result};

/// Decomposition M = U · diag(s) · W† with s sorted descending,
/// U of shape rows×rows and W of shape cols×cols, both unitary.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub w: Matrix,
}

impl Svd {
    /// Rebuild U · diag(s) · W† (mostly for checks).
    pub fn reconstruct(&self) -> Matrix {
        let rows = self.u.rows();
        let cols = self.w.rows();
        let mut s = Matrix::zeros(rows, cols);
        for (i, &x) in self.singular_values.iter().enumerate() {
            s.set(i, i, Scalar::new(x, 0.0));
        }
        &(&self.u * &s) * &self.w.adjoint()
    }
}

const MAX_SWEEPS: usize = 60;
const PAIR_TOL: f64 = 1e-14;

pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.rows() > MAX_DIM || m.cols() > MAX_DIM {
        return Err(Error::DimensionOutOfRange {
            dim: m.rows().max(m.cols()),
            min: 1,
            max: MAX_DIM,
        });
    }
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        // M = U S W†  <=>  M† = W S† U†
        let s = svd_tall(&m.adjoint())?;
        Ok(Svd {
            u: s.w,
            singular_values: s.singular_values,
            w: s.u,
        })
    }
}

/// One-sided Jacobi on a matrix with rows >= cols: rotate column pairs until
/// mutually orthogonal, then read off norms as singular values.
fn svd_tall(m: &Matrix) -> Result<Svd> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut w = Matrix::identity(cols);
    let scale = a.max_abs();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in (p + 1)..cols {
                    let mut gpp = 0.0f64;
                    let mut gqq = 0.0f64;
                    let mut gpq = Complex64::new(0.0, 0.0);
                    for r in 0..rows {
                        let xp = a.get(r, p);
                        let xq = a.get(r, q);
                        gpp += xp.norm_sqr();
                        gqq += xq.norm_sqr();
                        gpq += xp.conj() * xq;
                    }
                    let off = gpq.norm();
                    if off <= PAIR_TOL * (gpp * gqq).sqrt().max(PAIR_TOL * scale * scale) {
                        continue;
                    }
                    rotated = true;
                    // Diagonalize the 2x2 Gram block [[gpp, gpq],[conj(gpq), gqq]].
                    let phase = gpq / off;
                    let tau = (gqq - gpp) / (2.0 * off);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let sp = phase * s;
                    for r in 0..rows {
                        let xp = a.get(r, p);
                        let xq = a.get(r, q);
                        a.set(r, p, xp * c - xq * sp.conj());
                        a.set(r, q, xp * sp + xq * c);
                    }
                    for r in 0..cols {
                        let xp = w.get(r, p);
                        let xq = w.get(r, q);
                        w.set(r, p, xp * c - xq * sp.conj());
                        w.set(r, q, xp * sp + xq * c);
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| vec_norm(&a.column(j))).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let w_sorted = Matrix::from_fn(cols, cols, |r, c| w.get(r, order[c]));

    // Left vectors: normalized columns for nonzero singular values, then an
    // orthonormal completion for the rest.
    let tiny = PAIR_TOL * scale.max(1.0);
    let mut u_cols: Vec<Vec<Scalar>> = Vec::with_capacity(rows);
    for (k, &j) in order.iter().enumerate() {
        if singular_values[k] > tiny {
            let col = a.column(j);
            u_cols.push(col.iter().map(|&x| x / singular_values[k]).collect());
        }
    }
    complete_basis(&mut u_cols, rows);
    let u = Matrix::from_fn(rows, rows, |r, c| u_cols[c][r]);

    Ok(Svd {
        u,
        singular_values,
        w: w_sorted,
    })
}

/// Extend a set of orthonormal columns to a full orthonormal basis by
/// Gram-Schmidt over the standard basis.
fn complete_basis(cols: &mut Vec<Vec<Scalar>>, dim: usize) {
    let mut k = 0;
    while cols.len() < dim {
        assert!(k < dim, "basis completion ran out of candidates");
        let mut cand: Vec<Scalar> = vec![Complex64::new(0.0, 0.0); dim];
        cand[k] = Complex64::new(1.0, 0.0);
        k += 1;
        for existing in cols.iter() {
            let overlap = super::vec_inner(existing, &cand);
            for (c, e) in cand.iter_mut().zip(existing) {
                *c -= overlap * e;
            }
        }
        let norm = vec_norm(&cand);
        if norm > 0.5 {
            cols.push(cand.into_iter().map(|x| x / norm).collect());
        }
    }
}

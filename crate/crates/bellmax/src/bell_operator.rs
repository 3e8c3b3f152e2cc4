//! The Bell operator for a fixed measurement assignment.
//!
//! The quantum value of a Bell expression at fixed projectors is the largest
//! eigenvalue of the Hermitian operator
//!
//! ```text
//!   H = sum_ij c[i][j] A_i (x) B_j + sum_i marg_A[i] A_i (x) I
//!     + sum_j marg_B[j] I (x) B_j + constant I (x) I
//! ```
//!
//! and the optimal state is the corresponding eigenvector.

use crate::inequality::BellInequality;
use crate::numerics::{self, hermitian_eig_max, Matrix, Scalar};
use crate::{Error, Result};

/// Tolerance for accepting an input matrix as a projector.
const PROJECTOR_TOL: f64 = 1e-10;

/// Assembled Hermitian Bell operator.
#[derive(Clone, Debug)]
pub struct BellOperator {
    pub matrix: Matrix,
    pub dim_a: usize,
    pub dim_b: usize,
}

fn check_projectors(projs: &[Matrix], expected: usize, party: &str) -> Result<usize> {
    if projs.len() != expected {
        return Err(Error::ShapeMismatch(format!(
            "party {} has {} projectors but the inequality has {} settings",
            party,
            projs.len(),
            expected
        )));
    }
    let dim = projs[0].rows();
    for p in projs {
        if !p.is_square() || p.rows() != dim {
            return Err(Error::ShapeMismatch(format!(
                "all projectors of party {} must be square of the same dimension",
                party
            )));
        }
        let h = p.hermiticity_residual();
        if h > numerics::HERMITICITY_TOL {
            return Err(Error::NotHermitian { residual: h });
        }
        let idem = p.idempotency_residual();
        if idem > PROJECTOR_TOL {
            return Err(Error::NotProjector { residual: idem });
        }
    }
    Ok(dim)
}

/// Assemble the Bell operator for the given projector assignment.
pub fn assemble(
    ineq: &BellInequality,
    projs_a: &[Matrix],
    projs_b: &[Matrix],
) -> Result<BellOperator> {
    let dim_a = check_projectors(projs_a, ineq.settings_a(), "A")?;
    let dim_b = check_projectors(projs_b, ineq.settings_b(), "B")?;
    let total = dim_a * dim_b;
    if total > numerics::MAX_DIM {
        return Err(Error::DimensionOutOfRange {
            dim: total,
            min: 1,
            max: numerics::MAX_DIM,
        });
    }

    let id_a = Matrix::identity(dim_a);
    let id_b = Matrix::identity(dim_b);
    let mut h = Matrix::zeros(total, total);
    for (i, a) in projs_a.iter().enumerate() {
        for (j, b) in projs_b.iter().enumerate() {
            let c = ineq.joint()[i][j];
            if c != 0.0 {
                h = &h + &a.kron(b).scale_re(c);
            }
        }
        let c = ineq.marg_a()[i];
        if c != 0.0 {
            h = &h + &a.kron(&id_b).scale_re(c);
        }
    }
    for (j, b) in projs_b.iter().enumerate() {
        let c = ineq.marg_b()[j];
        if c != 0.0 {
            h = &h + &id_a.kron(b).scale_re(c);
        }
    }
    if ineq.constant() != 0.0 {
        h = &h + &Matrix::identity(total).scale_re(ineq.constant());
    }
    Ok(BellOperator {
        matrix: h,
        dim_a,
        dim_b,
    })
}

/// Largest eigenvalue of the assembled operator and its eigenvector.
pub fn quantum_value(
    ineq: &BellInequality,
    projs_a: &[Matrix],
    projs_b: &[Matrix],
) -> Result<(f64, Vec<Scalar>)> {
    let op = assemble(ineq, projs_a, projs_b)?;
    let pair = hermitian_eig_max(&op.matrix)?;
    Ok((pair.value, pair.vector))
}

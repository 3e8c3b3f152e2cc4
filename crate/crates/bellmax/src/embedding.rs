//! The complex-to-real Hilbert-space doubling map.
//!
//! Component-space rule: every complex entry a = x + iy of an operator
//! becomes the 2x2 real block [[x, -y], [y, x]]. The map is an algebra
//! homomorphism, preserves Hermitian conjugation (as transposition of the
//! real image), doubles real parts of traces, and sends projectors to
//! projectors of twice the rank.
//!
//! Product-space rule: a bipartite state with coefficient matrix V maps to
//! map(V)/sqrt(2) — a different rule from the component one (it produces
//! (2n)^2 coefficients, not 2n^2), and the Bob-side operator image must be
//! taken of the complex conjugate. With those conventions every expectation
//! value Tr(A V B^T V†) is preserved exactly, which is what lets real
//! ququarts reproduce any complex-qubit correlation.

use num_complex::Complex64;

use crate::bell_operator::assemble;
use crate::inequality::BellInequality;
use crate::measurements::{Field, ScenarioShape, SettingKind};
use crate::numerics::{Matrix, Scalar};
use crate::optimizer::ViolationResult;
use crate::{Error, Result};

const STATE_NORM_TOL: f64 = 1e-8;

/// A full real-embedded scenario: state coefficient matrix plus both
/// parties' mapped projectors.
#[derive(Clone, Debug)]
pub struct RealEmbedding {
    pub source_dim: usize,
    pub target_dim: usize,
    /// Real coefficient matrix of the embedded state, unit Frobenius norm.
    pub state: Matrix,
    pub projectors_a: Vec<Matrix>,
    pub projectors_b: Vec<Matrix>,
}

/// Component-space rule: n x n complex to 2n x 2n real, block per entry.
pub fn map_matrix(m: &Matrix) -> Matrix {
    Matrix::from_fn(2 * m.rows(), 2 * m.cols(), |r, c| {
        let z = m.get(r / 2, c / 2);
        let v = match (r % 2, c % 2) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        };
        Complex64::new(v, 0.0)
    })
}

/// Product-space rule for states: map the coefficient matrix and renormalize
/// by 1/sqrt(2).
pub fn map_state(v: &Matrix) -> Result<Matrix> {
    let norm = v.frobenius_norm();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(map_matrix(v).scale_re(1.0 / 2.0f64.sqrt()))
}

/// Both sides of the expectation identity for one joint term.
#[derive(Clone, Copy, Debug)]
pub struct ExpectationCheck {
    /// Complex side: Tr(A V B^T V†).
    pub lhs: f64,
    /// Real side: Tr(A' V' B'^T V'†) with A' = map(A), B' = map(B*).
    pub rhs: f64,
    pub delta: f64,
}

fn check_projector(p: &Matrix) -> Result<()> {
    let h = p.hermiticity_residual();
    if h > 1e-10 {
        return Err(Error::NotHermitian { residual: h });
    }
    let idem = p.idempotency_residual();
    if idem > 1e-10 {
        return Err(Error::NotProjector { residual: idem });
    }
    Ok(())
}

/// Evaluate Tr(A V B^T V†) on both sides of the doubling map.
pub fn verify_expectation(v: &Matrix, p_a: &Matrix, p_b: &Matrix) -> Result<ExpectationCheck> {
    if v.rows() != p_a.rows() || v.cols() != p_b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "state is {}x{} but projectors are {}x{} and {}x{}",
            v.rows(),
            v.cols(),
            p_a.rows(),
            p_a.cols(),
            p_b.rows(),
            p_b.cols()
        )));
    }
    check_projector(p_a)?;
    check_projector(p_b)?;
    let lhs = joint_expectation(p_a, p_b, v);
    let v2 = map_state(v)?;
    let a2 = map_matrix(p_a);
    let b2 = map_matrix(&p_b.conj());
    let rhs = joint_expectation(&a2, &b2, &v2);
    Ok(ExpectationCheck {
        lhs,
        rhs,
        delta: (lhs - rhs).abs(),
    })
}

/// Tr(A V B^T V†), the joint outcome probability for projectors A, B and
/// coefficient matrix V.
fn joint_expectation(a: &Matrix, b: &Matrix, v: &Matrix) -> f64 {
    (&(&(a * v) * &b.transpose()) * &v.adjoint()).trace().re
}

/// Reshape a product-space state vector (index i*dim_b + j) into its
/// coefficient matrix.
pub fn state_to_coefficients(state: &[Scalar], dim_a: usize, dim_b: usize) -> Result<Matrix> {
    if state.len() != dim_a * dim_b {
        return Err(Error::ShapeMismatch(format!(
            "state length {} is not {} x {}",
            state.len(),
            dim_a,
            dim_b
        )));
    }
    Ok(Matrix::from_fn(dim_a, dim_b, |i, j| state[i * dim_b + j]))
}

/// Flatten a coefficient matrix back into a state vector.
pub fn coefficients_to_state(v: &Matrix) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(v.rows() * v.cols());
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            out.push(v.get(i, j));
        }
    }
    out
}

/// Map a complex solution into the doubled real space.
pub fn embed(
    projs_a: &[Matrix],
    projs_b: &[Matrix],
    state: &[Scalar],
    dim_a: usize,
    dim_b: usize,
) -> Result<RealEmbedding> {
    let v = state_to_coefficients(state, dim_a, dim_b)?;
    let mapped_state = map_state(&v)?;
    Ok(RealEmbedding {
        source_dim: dim_a,
        target_dim: 2 * dim_a,
        state: mapped_state,
        projectors_a: projs_a.iter().map(map_matrix).collect(),
        // Bob-side images are taken of the complex conjugates.
        projectors_b: projs_b.iter().map(|p| map_matrix(&p.conj())).collect(),
    })
}

/// Turn a complex-qubit optimum into a real-ququart certificate achieving
/// the same quantum value.
///
/// The certificate's value is the expectation of the embedded state on the
/// re-assembled real operator; for optima this is also the operator's top
/// eigenvalue. Only source dimension 2 keeps the product dimension within
/// the 16-dimensional operator limit.
pub fn embed_scenario(ineq: &BellInequality, solution: &ViolationResult) -> Result<ViolationResult> {
    if solution.shape.field != Field::Complex {
        return Err(Error::UnsupportedScenario(
            "embedding certificates start from complex-field solutions".into(),
        ));
    }
    let (dim_a, dim_b) = (solution.shape.dim_a, solution.shape.dim_b);
    if dim_a != 2 || dim_b != 2 {
        return Err(Error::DimensionOutOfRange {
            dim: dim_a.max(dim_b),
            min: 2,
            max: 2,
        });
    }
    let embedding = embed(
        &solution.projectors_a,
        &solution.projectors_b,
        &solution.state,
        dim_a,
        dim_b,
    )?;
    let state = coefficients_to_state(&embedding.state);
    let op = assemble(ineq, &embedding.projectors_a, &embedding.projectors_b)?;
    let value = op.matrix.expectation(&state);

    // Ranks double; degenerate settings stay degenerate.
    let lift_kinds = |kinds: &[SettingKind]| -> Vec<SettingKind> {
        kinds
            .iter()
            .map(|k| match k {
                SettingKind::Projective(r) => SettingKind::Projective(2 * r),
                other => *other,
            })
            .collect()
    };
    let shape = ScenarioShape::new(
        Field::Real,
        2 * dim_a,
        2 * dim_b,
        lift_kinds(&solution.shape.kinds_a),
        lift_kinds(&solution.shape.kinds_b),
    )?;
    Ok(ViolationResult {
        value,
        violation: ineq.violation_of(value),
        shape,
        params: Vec::new(),
        projectors_a: embedding.projectors_a,
        projectors_b: embedding.projectors_b,
        state,
        combination_index: solution.combination_index,
        restart_histogram: Vec::new(),
    })
}

/// Pad a qubit assignment into ququarts with support-aligned rank-2
/// projectors: each projector keeps its action on the first two coordinates
/// and gains just enough rank on the complement, and the state occupies the
/// top 2x2 block of each party's space.
///
/// This is plain subspace padding, not the doubling map; it certifies that a
/// qubit optimum is reachable inside the rank-2 ququart search space.
pub fn pad_qubit_to_ququart(
    projs_a: &[Matrix],
    projs_b: &[Matrix],
    state: &[Scalar],
) -> Result<(Vec<Matrix>, Vec<Matrix>, Vec<Scalar>)> {
    if state.len() != 4 {
        return Err(Error::ShapeMismatch(format!(
            "expected a two-qubit state of length 4, got {}",
            state.len()
        )));
    }
    let pad = |projs: &[Matrix]| -> Result<Vec<Matrix>> {
        projs
            .iter()
            .map(|p| {
                if p.rows() != 2 || p.cols() != 2 {
                    return Err(Error::ShapeMismatch("qubit projectors must be 2x2".into()));
                }
                let rank = p.trace().re.round() as usize;
                let mut out = Matrix::zeros(4, 4);
                for r in 0..2 {
                    for c in 0..2 {
                        out.set(r, c, p.get(r, c));
                    }
                }
                // Fill the complement block up to rank 2.
                match rank {
                    0 => {
                        out.set(2, 2, Complex64::new(1.0, 0.0));
                        out.set(3, 3, Complex64::new(1.0, 0.0));
                    }
                    1 => out.set(2, 2, Complex64::new(1.0, 0.0)),
                    _ => {}
                }
                Ok(out)
            })
            .collect()
    };
    let mut padded_state = vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..2 {
        for j in 0..2 {
            padded_state[i * 4 + j] = state[i * 2 + j];
        }
    }
    Ok((pad(projs_a)?, pad(projs_b)?, padded_state))
}

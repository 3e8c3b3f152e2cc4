//! Post-processing of optima: Schmidt structure of the optimal state,
//! detection of measurements that act degenerately on its support, and the
//! maximal-entanglement flag used to star table entries.

use serde::{Deserialize, Serialize};

use crate::numerics::{svd, Matrix, Scalar};
use crate::optimizer::ViolationResult;
use crate::{embedding, Error, Result};

/// Schmidt coefficients below this count as zero when measuring effective
/// rank. The optimizer converges to ~1e-10, so this absorbs simplex noise.
pub const RANK_TOLERANCE: f64 = 1e-7;

/// Default tolerance for degeneracy verdicts.
pub const DEGENERACY_TOLERANCE: f64 = 1e-6;

/// Default tolerance for coefficient equality in the star flag. The simplex
/// converges the value to ~1e-10, which pins the eigenvector (and hence the
/// coefficients) only to the square root of that.
pub const STAR_TOLERANCE: f64 = 1e-4;

/// How one measurement acts on the support of the optimal state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SettingVerdict {
    /// The projector contains the support: outcome 1 with certainty.
    ActsAsIdentity,
    /// The projector annihilates the support: outcome 0 with certainty.
    ActsAsZero,
    Genuine,
}

impl std::fmt::Display for SettingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SettingVerdict::ActsAsIdentity => write!(f, "acts-as-identity"),
            SettingVerdict::ActsAsZero => write!(f, "acts-as-zero"),
            SettingVerdict::Genuine => write!(f, "genuine"),
        }
    }
}

/// Schmidt decomposition of a bipartite pure state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Non-negative coefficients, descending; their squares sum to 1.
    pub coefficients: Vec<f64>,
    /// Columns are Alice's Schmidt vectors.
    pub basis_a: Matrix,
    /// Columns are Bob's Schmidt vectors; the state is
    /// sum_k c_k |a_k> (x) |b_k>.
    pub basis_b: Matrix,
    /// Number of coefficients above [`RANK_TOLERANCE`].
    pub effective_rank: usize,
}

impl SchmidtDecomposition {
    /// Projector onto the support of the given party (0 = Alice, 1 = Bob).
    pub fn support_projector(&self, party: usize) -> Matrix {
        let basis = if party == 0 { &self.basis_a } else { &self.basis_b };
        let dim = basis.rows();
        let mut p = Matrix::zeros(dim, dim);
        for k in 0..self.effective_rank {
            let col = basis.column(k);
            p = &p + &Matrix::outer(&col, &col);
        }
        p
    }
}

/// Full per-result report.
#[derive(Clone, Debug)]
pub struct SchmidtReport {
    pub decomposition: SchmidtDecomposition,
    pub is_maximally_entangled: bool,
    pub verdicts_a: Vec<SettingVerdict>,
    pub verdicts_b: Vec<SettingVerdict>,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub rank_tolerance: f64,
    pub degeneracy_tolerance: f64,
    pub star_tolerance: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            rank_tolerance: RANK_TOLERANCE,
            degeneracy_tolerance: DEGENERACY_TOLERANCE,
            star_tolerance: STAR_TOLERANCE,
        }
    }
}

/// Schmidt-decompose a unit state vector living in dim_a x dim_b.
pub fn schmidt(state: &[Scalar], dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    schmidt_with(state, dim_a, dim_b, RANK_TOLERANCE)
}

pub fn schmidt_with(
    state: &[Scalar],
    dim_a: usize,
    dim_b: usize,
    rank_tolerance: f64,
) -> Result<SchmidtDecomposition> {
    let norm = crate::numerics::vec_norm(state);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    let coeffs = embedding::state_to_coefficients(state, dim_a, dim_b)?;
    let decomposition = svd(&coeffs)?;
    // C = U diag(s) W†, so |state> = sum_k s_k |u_k> (x) |conj(w_k)>.
    let basis_b = decomposition.w.conj();
    let coefficients = decomposition.singular_values;
    let effective_rank = coefficients.iter().filter(|&&s| s > rank_tolerance).count();
    Ok(SchmidtDecomposition {
        coefficients,
        basis_a: decomposition.u,
        basis_b,
        effective_rank,
    })
}

/// True when every coefficient on the effective support is equal within
/// tolerance and the support is genuinely entangled (rank at least 2).
///
/// Comparing on the support means a rank-2 maximally entangled state inside
/// qutrits still counts.
pub fn flag_maximal_entanglement(decomposition: &SchmidtDecomposition, tol: f64) -> bool {
    let rank = decomposition.effective_rank;
    if rank < 2 {
        return false;
    }
    let top = decomposition.coefficients[0];
    let bottom = decomposition.coefficients[rank - 1];
    top - bottom <= tol
}

/// Classify every projector of one party against the state's support.
fn party_verdicts(projs: &[Matrix], support: &Matrix, tol: f64) -> Vec<SettingVerdict> {
    projs
        .iter()
        .map(|p| {
            let ps = p * support;
            if (&ps - support).max_abs() <= tol {
                SettingVerdict::ActsAsIdentity
            } else if ps.max_abs() <= tol {
                SettingVerdict::ActsAsZero
            } else {
                SettingVerdict::Genuine
            }
        })
        .collect()
}

/// Per-setting verdicts for both parties of an optimization result.
pub fn detect_effective_degeneracy(
    result: &ViolationResult,
    tol: f64,
) -> Result<(Vec<SettingVerdict>, Vec<SettingVerdict>)> {
    let decomposition = schmidt(&result.state, result.shape.dim_a, result.shape.dim_b)?;
    let support_a = decomposition.support_projector(0);
    let support_b = decomposition.support_projector(1);
    Ok((
        party_verdicts(&result.projectors_a, &support_a, tol),
        party_verdicts(&result.projectors_b, &support_b, tol),
    ))
}

/// Full analysis of an optimization result.
pub fn analyze(result: &ViolationResult, options: &AnalysisOptions) -> Result<SchmidtReport> {
    let decomposition = schmidt_with(
        &result.state,
        result.shape.dim_a,
        result.shape.dim_b,
        options.rank_tolerance,
    )?;
    let is_maximally_entangled = flag_maximal_entanglement(&decomposition, options.star_tolerance);
    let support_a = decomposition.support_projector(0);
    let support_b = decomposition.support_projector(1);
    let verdicts_a = party_verdicts(&result.projectors_a, &support_a, options.degeneracy_tolerance);
    let verdicts_b = party_verdicts(&result.projectors_b, &support_b, options.degeneracy_tolerance);
    Ok(SchmidtReport {
        decomposition,
        is_maximally_entangled,
        verdicts_a,
        verdicts_b,
    })
}

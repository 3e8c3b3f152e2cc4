//! On-disk record of one optimization run.
//!
//! The record stores everything needed to re-verify the result offline:
//! the inequality identity (name plus content hash), the measurement shape,
//! the optimizer configuration, the winning chart parameters, and the
//! optimal state. Re-building the projectors from the stored parameters and
//! re-assembling the operator must reproduce the stored value to 1e-9.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use bellmax::optimizer::HistogramBin;
use bellmax::{
    AnalysisOptions, BellInequality, Error, Result, ScenarioShape, Scalar, SettingVerdict,
    ViolationResult,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityRef {
    pub name: String,
    /// SHA-256 of the canonical serialized inequality.
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SettingRecord {
    pub party: char,
    pub index: usize,
    pub kind: String,
    pub verdict: SettingVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub inequality: InequalityRef,
    pub shape: ScenarioShape,
    pub config: bellmax::OptimizerConfig,
    pub value: f64,
    pub violation: f64,
    pub maximally_entangled: bool,
    pub schmidt_coefficients: Vec<f64>,
    pub settings: Vec<SettingRecord>,
    /// Chart parameters of the winning combination (Alice then Bob).
    pub params: Vec<f64>,
    pub state_re: Vec<f64>,
    pub state_im: Vec<f64>,
    pub combination_index: usize,
    pub restart_histogram: Vec<HistogramBin>,
    pub wall_time_ms: u64,
}

/// Content hash of the canonical form, independent of file formatting.
pub fn inequality_hash(ineq: &BellInequality) -> String {
    let digest = Sha256::digest(ineq.save_bytes());
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

impl RunRecord {
    pub fn from_result(
        ineq: &BellInequality,
        result: &ViolationResult,
        config: &bellmax::OptimizerConfig,
        wall_time_ms: u64,
    ) -> Result<Self> {
        let report = bellmax::analyze(result, &AnalysisOptions::default())?;
        let mut settings = Vec::new();
        for (index, (kind, verdict)) in result
            .shape
            .kinds_a
            .iter()
            .zip(&report.verdicts_a)
            .enumerate()
        {
            settings.push(SettingRecord {
                party: 'A',
                index,
                kind: kind.to_string(),
                verdict: *verdict,
            });
        }
        for (index, (kind, verdict)) in result
            .shape
            .kinds_b
            .iter()
            .zip(&report.verdicts_b)
            .enumerate()
        {
            settings.push(SettingRecord {
                party: 'B',
                index,
                kind: kind.to_string(),
                verdict: *verdict,
            });
        }
        Ok(Self {
            inequality: InequalityRef {
                name: ineq.name().to_string(),
                sha256: inequality_hash(ineq),
            },
            shape: result.shape.clone(),
            config: *config,
            value: result.value,
            violation: result.violation,
            maximally_entangled: report.is_maximally_entangled,
            schmidt_coefficients: report.decomposition.coefficients.clone(),
            settings,
            params: result.params.clone(),
            state_re: result.state.iter().map(|z| z.re).collect(),
            state_im: result.state.iter().map(|z| z.im).collect(),
            combination_index: result.combination_index,
            restart_histogram: result.restart_histogram.clone(),
            wall_time_ms,
        })
    }

    pub fn state(&self) -> Result<Vec<Scalar>> {
        if self.state_re.len() != self.state_im.len() {
            return Err(Error::Malformed(
                "state_re and state_im lengths differ".into(),
            ));
        }
        Ok(self
            .state_re
            .iter()
            .zip(&self.state_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect())
    }

    pub fn save_path(&self, path: &std::path::Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        std::fs::write(path, bytes)?;
        Ok(())
    }

    pub fn load_path(path: &std::path::Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

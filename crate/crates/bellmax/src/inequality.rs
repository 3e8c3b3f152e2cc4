//! Bipartite two-outcome Bell inequalities in Collins-Gisin form.
//!
//! An inequality is the expression
//!
//! ```text
//!   constant + sum_i marg_A[i] p(A_i=1) + sum_j marg_B[j] p(B_j=1)
//!            + sum_ij joint[i][j] p(A_i=1, B_j=1)  <=  classical_bound
//! ```
//!
//! where the classical bound is the maximum over all local deterministic
//! strategies. The bound stored in a file must match the enumerated bound
//! exactly; loading re-verifies it.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard cap on m_A + m_B for exhaustive 2^(m_A+m_B) strategy enumeration.
pub const MAX_ENUMERATION_SETTINGS: usize = 24;

/// A Bell inequality in Collins-Gisin (outcome-1 probability) form.
#[derive(Clone, Debug, PartialEq)]
pub struct BellInequality {
    name: String,
    type_tag: String,
    constant: f64,
    marg_a: Vec<f64>,
    marg_b: Vec<f64>,
    joint: Vec<Vec<f64>>,
    classical_bound: f64,
}

/// One extreme point of the local polytope: an outcome-1 assignment for
/// every setting of each party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub a: Vec<bool>,
    pub b: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct FileFormat {
    name: String,
    #[serde(rename = "type")]
    type_tag: String,
    constant: f64,
    #[serde(rename = "marg_A")]
    marg_a: Vec<f64>,
    #[serde(rename = "marg_B")]
    marg_b: Vec<f64>,
    joint: Vec<Vec<f64>>,
    classical_bound: f64,
}

impl BellInequality {
    /// Validate shapes, enumerate the classical bound and check it against
    /// the stored value.
    pub fn from_parts(
        name: impl Into<String>,
        type_tag: impl Into<String>,
        constant: f64,
        marg_a: Vec<f64>,
        marg_b: Vec<f64>,
        joint: Vec<Vec<f64>>,
        classical_bound: f64,
    ) -> Result<Self> {
        let name = name.into();
        let type_tag = type_tag.into();
        let m_a = marg_a.len();
        let m_b = marg_b.len();
        if m_a == 0 || m_b == 0 {
            return Err(Error::Malformed("empty marginal vector".into()));
        }
        if joint.len() != m_a || joint.iter().any(|row| row.len() != m_b) {
            return Err(Error::ShapeMismatch(format!(
                "joint table must be {}x{} to match the marginals",
                m_a, m_b
            )));
        }
        let expected_tag = format!("{}{}22", m_a, m_b);
        if type_tag != expected_tag {
            return Err(Error::ShapeMismatch(format!(
                "type tag {:?} inconsistent with {} x {} settings and two outcomes (expected {:?})",
                type_tag, m_a, m_b, expected_tag
            )));
        }
        let ineq = Self {
            name,
            type_tag,
            constant,
            marg_a,
            marg_b,
            joint,
            classical_bound,
        };
        let computed = ineq.enumerate_classical_bound()?;
        if computed != classical_bound {
            return Err(Error::BoundMismatch {
                stored: classical_bound,
                computed,
            });
        }
        Ok(ineq)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn type_tag(&self) -> &str {
        &self.type_tag
    }

    pub fn settings_a(&self) -> usize {
        self.marg_a.len()
    }

    pub fn settings_b(&self) -> usize {
        self.marg_b.len()
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn marg_a(&self) -> &[f64] {
        &self.marg_a
    }

    pub fn marg_b(&self) -> &[f64] {
        &self.marg_b
    }

    pub fn joint(&self) -> &[Vec<f64>] {
        &self.joint
    }

    /// The classical bound verified at construction time.
    pub fn classical_bound(&self) -> f64 {
        self.classical_bound
    }

    /// Quantum value minus classical bound.
    pub fn violation_of(&self, quantum_value: f64) -> f64 {
        quantum_value - self.classical_bound
    }

    /// Value of the Bell expression at one deterministic strategy.
    pub fn evaluate_strategy(&self, a: &[bool], b: &[bool]) -> f64 {
        assert_eq!(a.len(), self.settings_a(), "strategy length mismatch for A");
        assert_eq!(b.len(), self.settings_b(), "strategy length mismatch for B");
        let mut value = self.constant;
        for (i, &ai) in a.iter().enumerate() {
            if !ai {
                continue;
            }
            value += self.marg_a[i];
            for (j, &bj) in b.iter().enumerate() {
                if bj {
                    value += self.joint[i][j];
                }
            }
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj {
                value += self.marg_b[j];
            }
        }
        value
    }

    /// All 2^(m_A+m_B) deterministic strategies in lexicographic order over
    /// the (a, b) bit patterns.
    pub fn strategies(&self) -> impl Iterator<Item = DeterministicStrategy> + '_ {
        let m_a = self.settings_a();
        let m_b = self.settings_b();
        (0u32..1 << m_a).flat_map(move |ka| {
            (0u32..1 << m_b).map(move |kb| DeterministicStrategy {
                a: bits(ka, m_a),
                b: bits(kb, m_b),
            })
        })
    }

    /// Max of the Bell expression over all deterministic strategies.
    pub fn enumerate_classical_bound(&self) -> Result<f64> {
        let m_a = self.settings_a();
        let m_b = self.settings_b();
        if m_a + m_b > MAX_ENUMERATION_SETTINGS {
            return Err(Error::EnumerationTooLarge { settings: m_a + m_b });
        }
        let mut best = f64::NEG_INFINITY;
        for ka in 0u32..1 << m_a {
            let a = bits(ka, m_a);
            // Score of each b_j given a, so the inner loop is a cheap sum.
            let mut base = self.constant;
            let mut col_score = self.marg_b.clone();
            for (i, &ai) in a.iter().enumerate() {
                if ai {
                    base += self.marg_a[i];
                    for (score, c) in col_score.iter_mut().zip(&self.joint[i]) {
                        *score += c;
                    }
                }
            }
            for kb in 0u32..1 << m_b {
                let mut value = base;
                for (j, score) in col_score.iter().enumerate() {
                    if kb >> (m_b - 1 - j) & 1 == 1 {
                        value += score;
                    }
                }
                if value > best {
                    best = value;
                }
            }
        }
        Ok(best)
    }

    /// Parse from the JSON document format, re-verifying the classical bound.
    pub fn load_bytes(bytes: &[u8]) -> Result<Self> {
        let raw: FileFormat = serde_json::from_slice(bytes)?;
        Self::from_parts(
            raw.name,
            raw.type_tag,
            raw.constant,
            raw.marg_a,
            raw.marg_b,
            raw.joint,
            raw.classical_bound,
        )
    }

    pub fn load_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::load_bytes(&std::fs::read(path)?)
    }

    pub fn save_bytes(&self) -> Vec<u8> {
        let raw = FileFormat {
            name: self.name.clone(),
            type_tag: self.type_tag.clone(),
            constant: self.constant,
            marg_a: self.marg_a.clone(),
            marg_b: self.marg_b.clone(),
            joint: self.joint.clone(),
            classical_bound: self.classical_bound,
        };
        let mut out = serde_json::to_vec_pretty(&raw).expect("serializing an inequality");
        out.push(b'\n');
        out
    }

    pub fn save_path(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.save_bytes())?;
        Ok(())
    }

    /// The same inequality with the parties swapped.
    pub fn transposed(&self) -> Self {
        let m_a = self.settings_a();
        let m_b = self.settings_b();
        let joint_t: Vec<Vec<f64>> = (0..m_b)
            .map(|j| (0..m_a).map(|i| self.joint[i][j]).collect())
            .collect();
        Self {
            name: self.name.clone(),
            type_tag: format!("{}{}22", m_b, m_a),
            constant: self.constant,
            marg_a: self.marg_b.clone(),
            marg_b: self.marg_a.clone(),
            joint: joint_t,
            classical_bound: self.classical_bound,
        }
    }
}

fn bits(pattern: u32, len: usize) -> Vec<bool> {
    (0..len).map(|i| pattern >> (len - 1 - i) & 1 == 1).collect()
}

/// The CHSH inequality in Clauser-Horne form (classical bound 0).
pub fn bundled_chsh() -> BellInequality {
    BellInequality::load_bytes(include_bytes!("../../../data/chsh.json"))
        .expect("bundled CHSH file is valid")
}

/// The I3322 inequality in Collins-Gisin form (classical bound 0).
pub fn bundled_i3322() -> BellInequality {
    BellInequality::load_bytes(include_bytes!("../../../data/i3322.json"))
        .expect("bundled I3322 file is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chsh_bound_is_zero() {
        let chsh = bundled_chsh();
        assert_eq!(chsh.classical_bound(), 0.0);
        assert_eq!(chsh.enumerate_classical_bound().unwrap(), 0.0);
        assert_eq!(chsh.settings_a(), 2);
        assert_eq!(chsh.settings_b(), 2);
        assert_eq!(chsh.strategies().count(), 16);
    }

    #[test]
    fn i3322_bound_is_zero() {
        let ineq = bundled_i3322();
        assert_eq!(ineq.classical_bound(), 0.0);
        assert_eq!(ineq.strategies().count(), 64);
    }

    #[test]
    fn all_zero_inequality() {
        let ineq = BellInequality::from_parts(
            "null",
            "2222",
            0.0,
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            0.0,
        )
        .unwrap();
        assert_eq!(ineq.classical_bound(), 0.0);
    }

    #[test]
    fn bound_matches_direct_strategy_scan() {
        // Cross-check the two-level enumeration against a plain scan over the
        // strategy iterator.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m_a = rng.gen_range(1..=3);
            let m_b = rng.gen_range(1..=3);
            let marg_a: Vec<f64> = (0..m_a).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let marg_b: Vec<f64> = (0..m_b).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let joint: Vec<Vec<f64>> = (0..m_a)
                .map(|_| (0..m_b).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let probe = BellInequality {
                name: "probe".into(),
                type_tag: format!("{}{}22", m_a, m_b),
                constant: rng.gen_range(-1.0..1.0),
                marg_a,
                marg_b,
                joint,
                classical_bound: 0.0,
            };
            let fast = probe.enumerate_classical_bound().unwrap();
            let slow = probe
                .strategies()
                .map(|s| probe.evaluate_strategy(&s.a, &s.b))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn transpose_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m_a = rng.gen_range(1..=3);
            let m_b = rng.gen_range(1..=3);
            let probe = BellInequality {
                name: "probe".into(),
                type_tag: format!("{}{}22", m_a, m_b),
                constant: rng.gen_range(-1.0..1.0),
                marg_a: (0..m_a).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                marg_b: (0..m_b).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                joint: (0..m_a)
                    .map(|_| (0..m_b).map(|_| rng.gen_range(-2.0..2.0)).collect())
                    .collect(),
                classical_bound: 0.0,
            };
            let direct = probe.enumerate_classical_bound().unwrap();
            let swapped = probe.transposed().enumerate_classical_bound().unwrap();
            assert!((direct - swapped).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn constant_shifts_bound() {
        let chsh = bundled_chsh();
        let shifted = BellInequality {
            constant: chsh.constant + 3.5,
            ..chsh.clone()
        };
        assert_eq!(
            shifted.enumerate_classical_bound().unwrap(),
            chsh.classical_bound() + 3.5
        );
    }

    #[test]
    fn violation_of_matches_reported_convention() {
        let chsh = bundled_chsh();
        assert_eq!(chsh.violation_of(0.207107), 0.207107);
        let i3322 = bundled_i3322();
        assert_eq!(i3322.violation_of(0.25), 0.25);
        // An inequality with bound 1 reports one less than the eigenvalue.
        let bound_one = BellInequality::from_parts(
            "single",
            "1122",
            0.0,
            vec![0.0],
            vec![0.0],
            vec![vec![1.0]],
            1.0,
        )
        .unwrap();
        assert_eq!(bound_one.violation_of(1.0), 0.0);
    }

    #[test]
    fn round_trip_identity() {
        let ineq = bundled_i3322();
        let bytes = ineq.save_bytes();
        let back = BellInequality::load_bytes(&bytes).unwrap();
        assert_eq!(ineq, back);
    }

    #[test]
    fn shape_and_bound_errors() {
        // 2x3 joint with a 2222 tag.
        let doc = r#"{
            "name": "bad", "type": "2222", "constant": 0,
            "marg_A": [0, 0], "marg_B": [0, 0, 0],
            "joint": [[0, 0, 0], [0, 0, 0]],
            "classical_bound": 0
        }"#;
        match BellInequality::load_bytes(doc.as_bytes()) {
            Err(Error::ShapeMismatch(_)) => {}
            other => panic!("expected shape error, got {:?}", other.map(|_| ())),
        }

        let doc = r#"{
            "name": "bad-bound", "type": "2222", "constant": 0,
            "marg_A": [-1, 0], "marg_B": [-1, 0],
            "joint": [[1, 1], [1, -1]],
            "classical_bound": 0.125
        }"#;
        match BellInequality::load_bytes(doc.as_bytes()) {
            Err(Error::BoundMismatch { stored, computed }) => {
                assert_eq!(stored, 0.125);
                assert_eq!(computed, 0.0);
            }
            other => panic!("expected bound mismatch, got {:?}", other.map(|_| ())),
        }

        assert!(BellInequality::load_bytes(b"not json").is_err());
    }
}

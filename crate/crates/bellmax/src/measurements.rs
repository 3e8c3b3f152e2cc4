//! Outcome-1 projectors from parameter vectors, with per-party gauge fixing.
//!
//! Both parties may rotate their local bases freely, so the first
//! nondegenerate operator of a party is pinned to a fixed diagonal
//! representative, the second to a reduced form, and only later operators
//! carry the full chart. Gauge positions count nondegenerate settings of one
//! party in declaration order; degenerate settings carry no parameters and
//! are skipped.
//!
//! Real-field charts are the complex charts with every phase angle pinned to
//! zero: the construction literally routes real parameters through the
//! complex code path with zeros inserted at the phase slots, so real output
//! equals complex output entry for entry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{Matrix, Scalar};
use crate::{Error, Result};

/// Scalar field of the local Hilbert spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

/// What one measurement setting does: always 0, always 1, or a genuine
/// projective measurement of the given outcome-1 rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingKind {
    DegenerateZero,
    DegenerateOne,
    Projective(usize),
}

impl SettingKind {
    pub fn is_degenerate(self) -> bool {
        !matches!(self, SettingKind::Projective(_))
    }

    pub fn rank(self) -> Option<usize> {
        match self {
            SettingKind::Projective(r) => Some(r),
            _ => None,
        }
    }

    fn valid_for(self, dim: usize) -> bool {
        match self {
            SettingKind::DegenerateZero | SettingKind::DegenerateOne => true,
            SettingKind::Projective(r) => match dim {
                2 => r == 1,
                3 => r == 1 || r == 2,
                // Four-dimensional spaces are restricted to rank 2.
                4 => r == 2,
                _ => false,
            },
        }
    }
}

impl std::fmt::Display for SettingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SettingKind::DegenerateZero => write!(f, "degenerate-zero"),
            SettingKind::DegenerateOne => write!(f, "degenerate-one"),
            SettingKind::Projective(r) => write!(f, "projective-{}", r),
        }
    }
}

impl std::str::FromStr for SettingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degenerate-zero" => Ok(SettingKind::DegenerateZero),
            "degenerate-one" => Ok(SettingKind::DegenerateOne),
            _ => s
                .strip_prefix("projective-")
                .and_then(|r| r.parse().ok())
                .map(SettingKind::Projective)
                .ok_or_else(|| Error::Malformed(format!("unknown setting kind {:?}", s))),
        }
    }
}

impl Serialize for SettingKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SettingKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A full measurement layout: field, local dimensions, and the kind of every
/// setting on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioShape {
    pub field: Field,
    pub dim_a: usize,
    pub dim_b: usize,
    pub kinds_a: Vec<SettingKind>,
    pub kinds_b: Vec<SettingKind>,
}

impl ScenarioShape {
    pub fn new(
        field: Field,
        dim_a: usize,
        dim_b: usize,
        kinds_a: Vec<SettingKind>,
        kinds_b: Vec<SettingKind>,
    ) -> Result<Self> {
        for &dim in &[dim_a, dim_b] {
            if !(2..=4).contains(&dim) {
                return Err(Error::DimensionOutOfRange { dim, min: 2, max: 4 });
            }
        }
        for (dim, kinds) in [(dim_a, &kinds_a), (dim_b, &kinds_b)] {
            for &kind in kinds {
                if !kind.valid_for(dim) {
                    return Err(Error::UnsupportedScenario(format!(
                        "setting kind {} is not supported in dimension {}",
                        kind, dim
                    )));
                }
            }
        }
        Ok(Self {
            field,
            dim_a,
            dim_b,
            kinds_a,
            kinds_b,
        })
    }

    /// Total number of free parameters under the gauge fixing.
    pub fn parameter_count(&self) -> usize {
        party_parameter_count(self.field, self.dim_a, &self.kinds_a)
            + party_parameter_count(self.field, self.dim_b, &self.kinds_b)
    }

    /// Count of degenerate settings across both parties.
    pub fn degenerate_settings(&self) -> usize {
        self.kinds_a
            .iter()
            .chain(&self.kinds_b)
            .filter(|k| k.is_degenerate())
            .count()
    }
}

fn party_parameter_count(field: Field, dim: usize, kinds: &[SettingKind]) -> usize {
    let mut position = 0;
    let mut total = 0;
    for &kind in kinds {
        if kind.is_degenerate() {
            continue;
        }
        total += phase_mask(dim, position)
            .iter()
            .filter(|&&is_phase| field == Field::Complex || !is_phase)
            .count();
        position += 1;
    }
    total
}

/// Parameter slots of the complex chart at a gauge position; `true` marks a
/// phase angle, which the real field pins to zero.
fn phase_mask(dim: usize, position: usize) -> &'static [bool] {
    const A: bool = false; // rotation-like angle, present in both fields
    const P: bool = true; // phase, complex only
    match (dim, position) {
        (2, 0) => &[],
        (2, 1) => &[A],
        (2, _) => &[A, P],
        (3, 0) => &[],
        (3, 1) => &[A],
        (3, 2) => &[A, A, P],
        (3, _) => &[A, A, P, P],
        (4, 0) => &[],
        (4, 1) => &[A, P],
        (4, _) => &[A, A, P, A, P, A, P, P],
        _ => unreachable!("dimension validated before chart lookup"),
    }
}

/// Parameters consumed by one setting of the given kind at a gauge position.
pub fn setting_parameter_count(field: Field, dim: usize, kind: SettingKind, position: usize) -> usize {
    if kind.is_degenerate() {
        return 0;
    }
    phase_mask(dim, position)
        .iter()
        .filter(|&&is_phase| field == Field::Complex || !is_phase)
        .count()
}

/// Insert zeros at the phase slots of a real parameter vector, producing the
/// complex parameter vector that realizes the identical projectors.
pub fn lift_real_params(shape: &ScenarioShape, params: &[f64]) -> Result<Vec<f64>> {
    if shape.field != Field::Real {
        return Err(Error::UnsupportedScenario(
            "parameter lifting applies to real-field shapes".into(),
        ));
    }
    if params.len() != shape.parameter_count() {
        return Err(Error::ParameterCount {
            expected: shape.parameter_count(),
            got: params.len(),
        });
    }
    let mut out = Vec::new();
    let mut cursor = 0;
    for (dim, kinds) in [(shape.dim_a, &shape.kinds_a), (shape.dim_b, &shape.kinds_b)] {
        let mut position = 0;
        for &kind in kinds {
            if kind.is_degenerate() {
                continue;
            }
            for &is_phase in phase_mask(dim, position) {
                if is_phase {
                    out.push(0.0);
                } else {
                    out.push(params[cursor]);
                    cursor += 1;
                }
            }
            position += 1;
        }
    }
    Ok(out)
}

/// Build the outcome-1 projector for one setting.
///
/// `position` is the ordinal of this setting among its party's nondegenerate
/// settings; it selects the gauge-fixed chart. The parameter slice must have
/// exactly the length reported by [`setting_parameter_count`].
pub fn build_projector(
    field: Field,
    dim: usize,
    kind: SettingKind,
    params: &[f64],
    position: usize,
) -> Result<Matrix> {
    if !kind.valid_for(dim) || !(2..=4).contains(&dim) {
        return Err(Error::UnsupportedScenario(format!(
            "setting kind {} in dimension {}",
            kind, dim
        )));
    }
    let expected = setting_parameter_count(field, dim, kind, position);
    if params.len() != expected {
        return Err(Error::ParameterCount {
            expected,
            got: params.len(),
        });
    }
    match kind {
        SettingKind::DegenerateZero => Ok(Matrix::zeros(dim, dim)),
        SettingKind::DegenerateOne => Ok(Matrix::identity(dim)),
        SettingKind::Projective(rank) => {
            let full = match field {
                Field::Complex => params.to_vec(),
                Field::Real => {
                    // Same chart with zeros in the phase slots.
                    let mask = phase_mask(dim, position);
                    let mut full = Vec::with_capacity(mask.len());
                    let mut cursor = 0;
                    for &is_phase in mask {
                        if is_phase {
                            full.push(0.0);
                        } else {
                            full.push(params[cursor]);
                            cursor += 1;
                        }
                    }
                    full
                }
            };
            build_projective(dim, rank, &full, position)
        }
    }
}

fn build_projective(dim: usize, rank: usize, p: &[f64], position: usize) -> Result<Matrix> {
    match dim {
        2 => {
            let v = match position {
                0 => vec![re(1.0), re(0.0)],
                1 => vec![re(p[0].sin()), re(p[0].cos())],
                _ => qubit_vector(p[0], p[1]),
            };
            Ok(Matrix::outer(&v, &v))
        }
        3 => {
            let m = match position {
                0 => vec![re(0.0), re(0.0), re(1.0)],
                1 => vec![re(p[0].sin()), re(0.0), re(p[0].cos())],
                2 => qutrit_vector(p[0], p[1], p[2], 0.0),
                _ => qutrit_vector(p[0], p[1], p[2], p[3]),
            };
            let pm = Matrix::outer(&m, &m);
            Ok(if rank == 1 {
                pm
            } else {
                &Matrix::identity(3) - &pm
            })
        }
        4 => {
            let base = |phi: f64, psi: f64| {
                (&Matrix::identity(4) + &h_matrix(phi, psi)).scale_re(0.5)
            };
            match position {
                0 => Ok(Matrix::real_diag(&[1.0, 1.0, 0.0, 0.0])),
                1 => Ok(base(p[0], p[1])),
                _ => {
                    // p = [phi, psi, beta1, gamma1, beta2, gamma2, delta2, nu]
                    let u = ququart_unitary(p[2], p[3], p[4], p[5], p[6], p[7]);
                    Ok(&(&u * &base(p[0], p[1])) * &u.adjoint())
                }
            }
        }
        _ => unreachable!("dimension validated before chart dispatch"),
    }
}

fn re(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

fn polar(theta: f64) -> Scalar {
    Complex64::new(theta.cos(), theta.sin())
}

fn qubit_vector(theta: f64, alpha: f64) -> Vec<Scalar> {
    vec![polar(alpha) * theta.sin(), re(theta.cos())]
}

fn qutrit_vector(phi: f64, theta: f64, alpha: f64, beta: f64) -> Vec<Scalar> {
    vec![
        polar(alpha) * (phi.cos() * theta.sin()),
        polar(beta) * (phi.sin() * theta.sin()),
        re(theta.cos()),
    ]
}

/// The two-parameter reduced form of the second rank-2 operator in
/// four dimensions: cos/sin coupling on the index pairs (0,2) and (1,3).
fn h_matrix(phi: f64, psi: f64) -> Matrix {
    let mut h = Matrix::zeros(4, 4);
    h.set(0, 0, re(phi.cos()));
    h.set(0, 2, re(phi.sin()));
    h.set(2, 0, re(phi.sin()));
    h.set(2, 2, re(-phi.cos()));
    h.set(1, 1, re(psi.cos()));
    h.set(1, 3, re(psi.sin()));
    h.set(3, 1, re(psi.sin()));
    h.set(3, 3, re(-psi.cos()));
    h
}

/// 2x2 special unitary [[e^{ib} cos g, e^{id} sin g], [-e^{-id} sin g, e^{-ib} cos g]].
fn su2(beta: f64, gamma: f64, delta: f64) -> Matrix {
    Matrix::from_rows(&[
        vec![polar(beta) * gamma.cos(), polar(delta) * gamma.sin()],
        vec![-polar(-delta) * gamma.sin(), polar(-beta) * gamma.cos()],
    ])
}

/// Block transformation u_12 u_34 with the gauge-redundant phases removed:
/// the first block loses its off-diagonal phase, the second keeps a relative
/// phase nu against the first.
fn ququart_unitary(beta1: f64, gamma1: f64, beta2: f64, gamma2: f64, delta2: f64, nu: f64) -> Matrix {
    let b1 = su2(beta1, gamma1, 0.0);
    let b2 = su2(beta2, gamma2, delta2).scale(polar(nu));
    let mut u = Matrix::zeros(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            u.set(r, c, b1.get(r, c));
            u.set(2 + r, 2 + c, b2.get(r, c));
        }
    }
    u
}

/// Build one party's projectors, consuming a flat parameter slice in setting
/// order.
pub fn build_party_projectors(
    field: Field,
    dim: usize,
    kinds: &[SettingKind],
    params: &[f64],
) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(kinds.len());
    let mut cursor = 0;
    let mut position = 0;
    for &kind in kinds {
        let count = setting_parameter_count(field, dim, kind, position);
        if cursor + count > params.len() {
            return Err(Error::ParameterCount {
                expected: party_parameter_count(field, dim, kinds),
                got: params.len(),
            });
        }
        out.push(build_projector(
            field,
            dim,
            kind,
            &params[cursor..cursor + count],
            position,
        )?);
        cursor += count;
        if !kind.is_degenerate() {
            position += 1;
        }
    }
    if cursor != params.len() {
        return Err(Error::ParameterCount {
            expected: cursor,
            got: params.len(),
        });
    }
    Ok(out)
}

/// Build projectors for both parties from the full parameter vector
/// (Alice's settings first, then Bob's).
pub fn build_scenario_projectors(
    shape: &ScenarioShape,
    params: &[f64],
) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    let split = party_parameter_count(shape.field, shape.dim_a, &shape.kinds_a);
    if params.len() != shape.parameter_count() {
        return Err(Error::ParameterCount {
            expected: shape.parameter_count(),
            got: params.len(),
        });
    }
    let projs_a = build_party_projectors(shape.field, shape.dim_a, &shape.kinds_a, &params[..split])?;
    let projs_b = build_party_projectors(shape.field, shape.dim_b, &shape.kinds_b, &params[split..])?;
    Ok((projs_a, projs_b))
}

/// Every combination of setting kinds explored by the optimizer.
///
/// Qubits may use degenerate settings; qutrits choose rank 1 or rank 2 per
/// setting; ququarts are fixed to rank 2 everywhere.
pub fn enumerate_kind_combinations(
    dim: usize,
    m_a: usize,
    m_b: usize,
    allow_degenerate: bool,
) -> Result<Vec<(Vec<SettingKind>, Vec<SettingKind>)>> {
    if !(2..=4).contains(&dim) {
        return Err(Error::DimensionOutOfRange { dim, min: 2, max: 4 });
    }
    if allow_degenerate && dim != 2 {
        return Err(Error::UnsupportedScenario(format!(
            "degenerate settings are only explored for qubits (dim 2), not dim {}",
            dim
        )));
    }
    let variants: Vec<SettingKind> = match dim {
        2 if allow_degenerate => vec![
            SettingKind::Projective(1),
            SettingKind::DegenerateZero,
            SettingKind::DegenerateOne,
        ],
        2 => vec![SettingKind::Projective(1)],
        3 => vec![SettingKind::Projective(1), SettingKind::Projective(2)],
        _ => vec![SettingKind::Projective(2)],
    };
    let total_settings = m_a + m_b;
    let mut combos = Vec::with_capacity(variants.len().pow(total_settings as u32));
    let mut current = vec![variants[0]; total_settings];
    odometer(&variants, &mut current, 0, &mut |kinds: &[SettingKind]| {
        combos.push((kinds[..m_a].to_vec(), kinds[m_a..].to_vec()));
    });
    Ok(combos)
}

fn odometer(
    variants: &[SettingKind],
    current: &mut Vec<SettingKind>,
    index: usize,
    emit: &mut impl FnMut(&[SettingKind]),
) {
    if index == current.len() {
        emit(current);
        return;
    }
    for &v in variants {
        current[index] = v;
        odometer(variants, current, index + 1, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shape(field: Field, dim: usize, kinds: Vec<SettingKind>) -> ScenarioShape {
        ScenarioShape::new(field, dim, dim, kinds.clone(), kinds).unwrap()
    }

    fn all_projective(rank: usize, count: usize) -> Vec<SettingKind> {
        vec![SettingKind::Projective(rank); count]
    }

    #[test]
    fn parameter_counts_match_gauge_fixing() {
        // Complex qubits, 2+2 settings: 0+1 per party.
        assert_eq!(shape(Field::Complex, 2, all_projective(1, 2)).parameter_count(), 2);
        // Real qubits, CHSH shape: halved with minimum zero.
        assert_eq!(shape(Field::Real, 2, all_projective(1, 2)).parameter_count(), 2);
        // Complex qubits with more settings: 0+1+2+2.
        assert_eq!(shape(Field::Complex, 2, all_projective(1, 4)).parameter_count(), 10);
        assert_eq!(shape(Field::Real, 2, all_projective(1, 4)).parameter_count(), 6);
        // Complex qutrits: 0+1+3+4; real: 0+1+2+2.
        assert_eq!(shape(Field::Complex, 3, all_projective(1, 4)).parameter_count(), 16);
        assert_eq!(shape(Field::Real, 3, all_projective(2, 4)).parameter_count(), 10);
        // Complex ququarts, one party with 4 rank-2 settings: 0+2+8+8 = 18.
        let one_sided = ScenarioShape::new(
            Field::Complex,
            4,
            4,
            all_projective(2, 4),
            vec![SettingKind::DegenerateOne; 0],
        );
        // ScenarioShape wants settings on both sides for real scenarios, but
        // the per-party count is what the example pins down.
        assert!(one_sided.is_ok());
        assert_eq!(
            party_parameter_count(Field::Complex, 4, &all_projective(2, 4)),
            18
        );
        assert_eq!(party_parameter_count(Field::Real, 4, &all_projective(2, 4)), 9);
    }

    #[test]
    fn degenerate_settings_consume_nothing_and_shift_gauge() {
        let kinds = vec![
            SettingKind::DegenerateZero,
            SettingKind::Projective(1),
            SettingKind::DegenerateOne,
            SettingKind::Projective(1),
        ];
        // First nondegenerate is gauge position 0, second position 1.
        assert_eq!(party_parameter_count(Field::Complex, 2, &kinds), 1);
        let projs = build_party_projectors(Field::Complex, 2, &kinds, &[0.3]).unwrap();
        assert_eq!(projs[0], Matrix::zeros(2, 2));
        assert_eq!(projs[2], Matrix::identity(2));
        assert_eq!(projs[1], Matrix::real_diag(&[1.0, 0.0]));
    }

    #[test]
    fn gauge_representatives() {
        let p = build_projector(Field::Complex, 2, SettingKind::Projective(1), &[], 0).unwrap();
        assert_eq!(p, Matrix::real_diag(&[1.0, 0.0]));

        let p = build_projector(Field::Complex, 3, SettingKind::Projective(1), &[], 0).unwrap();
        assert_eq!(p, Matrix::real_diag(&[0.0, 0.0, 1.0]));
        let p = build_projector(Field::Complex, 3, SettingKind::Projective(2), &[], 0).unwrap();
        assert_eq!(p, Matrix::real_diag(&[1.0, 1.0, 0.0]));

        let p = build_projector(Field::Complex, 4, SettingKind::Projective(2), &[], 0).unwrap();
        assert_eq!(p, Matrix::real_diag(&[1.0, 1.0, 0.0, 0.0]));

        // Position 1 at zero angles coincides with the position-0 form:
        // (1 + H(0,0))/2 with H(0,0) = diag(1,1,-1,-1).
        let p = build_projector(Field::Complex, 4, SettingKind::Projective(2), &[0.0, 0.0], 1).unwrap();
        assert_eq!(p, Matrix::real_diag(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn projectors_are_projectors_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let cells: Vec<(usize, SettingKind)> = vec![
            (2, SettingKind::Projective(1)),
            (3, SettingKind::Projective(1)),
            (3, SettingKind::Projective(2)),
            (4, SettingKind::Projective(2)),
        ];
        for &(dim, kind) in &cells {
            for position in 0..4 {
                for &field in &[Field::Real, Field::Complex] {
                    let n = setting_parameter_count(field, dim, kind, position);
                    for _ in 0..25 {
                        let params: Vec<f64> =
                            (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
                        let p = build_projector(field, dim, kind, &params, position).unwrap();
                        assert!(p.hermiticity_residual() <= 1e-12, "{dim} {kind} {position}");
                        assert!(p.idempotency_residual() <= 1e-12, "{dim} {kind} {position}");
                        let rank = kind.rank().unwrap() as f64;
                        assert!((p.trace().re - rank).abs() <= 1e-10);
                        if field == Field::Real {
                            assert!(p.max_imag() == 0.0, "real field must be structurally real");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn real_equals_complex_with_zero_phases_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for &dim in &[2usize, 3, 4] {
            let rank = if dim == 4 { 2 } else { 1 };
            let kinds = all_projective(rank, 3);
            let real_shape = shape(Field::Real, dim, kinds.clone());
            let complex_shape = shape(Field::Complex, dim, kinds);
            for _ in 0..20 {
                let params: Vec<f64> = (0..real_shape.parameter_count())
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect();
                let lifted = lift_real_params(&real_shape, &params).unwrap();
                assert_eq!(lifted.len(), complex_shape.parameter_count());
                let (ra, rb) = build_scenario_projectors(&real_shape, &params).unwrap();
                let (ca, cb) = build_scenario_projectors(&complex_shape, &lifted).unwrap();
                for (r, c) in ra.iter().zip(&ca).chain(rb.iter().zip(&cb)) {
                    assert_eq!(r, c, "real and lifted complex builds must agree exactly");
                }
            }
        }
    }

    #[test]
    fn qubit_chart_is_surjective() {
        // Recover Bloch angles from 100 random rank-1 projectors and rebuild.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let target = sample::rank1_projector(&mut rng, 2);
            // Principal eigenvector of the projector.
            let pair = crate::numerics::hermitian_eig_max(&target).unwrap();
            let v = pair.vector;
            let (theta, alpha) = if v[1].norm() > 1e-12 {
                let w0 = v[0] * v[1].conj() / v[1].norm(); // first component with real second
                (w0.norm().atan2(v[1].norm()), w0.arg())
            } else {
                (std::f64::consts::FRAC_PI_2, v[0].arg())
            };
            let rebuilt =
                build_projector(Field::Complex, 2, SettingKind::Projective(1), &[theta, alpha], 2)
                    .unwrap();
            assert!(
                (&rebuilt - &target).max_abs() <= 1e-10,
                "recovery failed: {:?} vs {:?}",
                rebuilt,
                target
            );
        }
    }

    #[test]
    fn ququart_full_chart_covers_reduced_forms() {
        // Zero transformation parameters reproduce the position-1 family...
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let psi = rng.gen_range(0.0..std::f64::consts::TAU);
            let reduced =
                build_projector(Field::Complex, 4, SettingKind::Projective(2), &[phi, psi], 1)
                    .unwrap();
            let full = build_projector(
                Field::Complex,
                4,
                SettingKind::Projective(2),
                &[phi, psi, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                2,
            )
            .unwrap();
            assert!((&full - &reduced).max_abs() <= 1e-10);
        }
        // ...and zero angles reproduce the position-0 representative.
        let rep = build_projector(
            Field::Complex,
            4,
            SettingKind::Projective(2),
            &[0.0; 8],
            2,
        )
        .unwrap();
        assert!((&rep - &Matrix::real_diag(&[1.0, 1.0, 0.0, 0.0])).max_abs() <= 1e-10);
    }

    #[test]
    fn combination_enumeration_counts() {
        assert_eq!(enumerate_kind_combinations(2, 2, 2, true).unwrap().len(), 81);
        assert_eq!(enumerate_kind_combinations(2, 3, 3, false).unwrap().len(), 1);
        assert_eq!(enumerate_kind_combinations(3, 2, 2, false).unwrap().len(), 16);
        assert_eq!(enumerate_kind_combinations(4, 2, 2, false).unwrap().len(), 1);
        assert!(enumerate_kind_combinations(4, 2, 2, true).is_err());
        assert!(enumerate_kind_combinations(3, 2, 2, true).is_err());
        // All-projective comes first so combination index 0 is the
        // nondegenerate case.
        let combos = enumerate_kind_combinations(2, 2, 2, true).unwrap();
        assert!(combos[0].0.iter().chain(&combos[0].1).all(|k| !k.is_degenerate()));
    }

    #[test]
    fn parameter_slice_length_is_enforced() {
        let err = build_projector(Field::Complex, 2, SettingKind::Projective(1), &[0.1], 0);
        assert!(matches!(err, Err(Error::ParameterCount { .. })));
        let err = build_projector(Field::Complex, 2, SettingKind::DegenerateOne, &[0.1], 0);
        assert!(matches!(err, Err(Error::ParameterCount { .. })));
        let err = build_projector(Field::Real, 4, SettingKind::Projective(2), &[0.1; 8], 2);
        assert!(matches!(err, Err(Error::ParameterCount { .. })));
    }

    #[test]
    fn rank_restrictions_per_dimension() {
        assert!(build_projector(Field::Real, 2, SettingKind::Projective(2), &[], 0).is_err());
        assert!(build_projector(Field::Real, 4, SettingKind::Projective(1), &[], 0).is_err());
        assert!(ScenarioShape::new(
            Field::Real,
            4,
            4,
            vec![SettingKind::Projective(1)],
            vec![SettingKind::Projective(2)]
        )
        .is_err());
        assert!(ScenarioShape::new(Field::Real, 5, 5, vec![], vec![]).is_err());
    }
}

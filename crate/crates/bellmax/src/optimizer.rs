//! Maximization of the quantum value over measurement parameters.
//!
//! The local search is an uphill simplex (Nelder-Mead with the classic
//! coefficients). It climbs to a local maximum, so it is restarted from
//! seeded random positions many times, once per setting-kind combination.
//! Restart seeds are a pure function of (master seed, combination index,
//! restart index); together with a fixed merge order this makes results
//! deterministic regardless of how restarts are scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell_operator::quantum_value;
use crate::inequality::BellInequality;
use crate::measurements::{
    build_scenario_projectors, enumerate_kind_combinations, Field, ScenarioShape,
};
use crate::numerics::{Matrix, Scalar};
use crate::{Error, Result};

/// Values closer than this are treated as ties when picking the best
/// combination; ties prefer fewer degenerate settings, then lower index.
const TIE_TOL: f64 = 1e-9;

/// Restart-histogram cluster width.
const HISTOGRAM_RESOLUTION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Random restarts per setting-kind combination.
    pub restarts: usize,
    /// Simplex iteration cap per restart.
    pub max_iterations: usize,
    /// Convergence threshold on the simplex function-value spread.
    pub simplex_tolerance: f64,
    /// Offset (radians) used to build the initial simplex around a start.
    pub initial_step: f64,
    /// Seed from which every restart seed is derived.
    pub master_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_iterations: 2000,
            simplex_tolerance: 1e-10,
            initial_step: 0.5,
            master_seed: 1,
        }
    }
}

impl OptimizerConfig {
    /// Spec-scale restart defaults: 200 for qubits, 1000 for qutrits, 5000
    /// for ququarts.
    pub fn default_for_dim(dim: usize) -> Self {
        let restarts = match dim {
            2 => 200,
            3 => 1000,
            _ => 5000,
        };
        Self {
            restarts,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !self.simplex_tolerance.is_finite() || self.simplex_tolerance <= 0.0 {
            return Err(Error::InvalidConfig("simplex_tolerance must be positive".into()));
        }
        if !self.initial_step.is_finite() || self.initial_step <= 0.0 {
            return Err(Error::InvalidConfig("initial_step must be positive".into()));
        }
        Ok(())
    }
}

/// One cluster of restart outcomes (values binned at 1e-6).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub value: f64,
    pub count: usize,
}

/// Best measurement assignment found for one inequality.
#[derive(Clone, Debug)]
pub struct ViolationResult {
    /// Largest eigenvalue of the Bell operator at the optimum.
    pub value: f64,
    /// `value` minus the classical bound.
    pub violation: f64,
    pub shape: ScenarioShape,
    /// Chart parameters realizing the optimum (empty for directly
    /// constructed certificates).
    pub params: Vec<f64>,
    pub projectors_a: Vec<Matrix>,
    pub projectors_b: Vec<Matrix>,
    /// Top eigenvector of the Bell operator.
    pub state: Vec<Scalar>,
    /// Index of the winning combination in enumeration order.
    pub combination_index: usize,
    /// Distribution of per-restart best values, clustered at 1e-6.
    pub restart_histogram: Vec<HistogramBin>,
}

/// Uphill simplex: maximize `objective` starting from `x0`.
///
/// Returns a point and value with value >= objective(x0). A zero-dimensional
/// input is evaluated directly.
pub fn nelder_mead_maximize(
    objective: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    config: &OptimizerConfig,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    if n == 0 {
        let value = objective(x0);
        return (Vec::new(), value);
    }

    // Classic coefficients: reflection 1, expansion 2, contraction 0.5,
    // shrink 0.5.
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), objective(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += config.initial_step;
        let f = objective(&x);
        simplex.push((x, f));
    }

    for _ in 0..config.max_iterations {
        // Descending by value: best first.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex[0].1 - simplex[n].1;
        if spread < config.simplex_tolerance {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflected: Vec<f64> = (0..n)
            .map(|k| centroid[k] + ALPHA * (centroid[k] - worst.0[k]))
            .collect();
        let f_reflected = objective(&reflected);

        if f_reflected > simplex[0].1 {
            let expanded: Vec<f64> = (0..n)
                .map(|k| centroid[k] + GAMMA * (centroid[k] - worst.0[k]))
                .collect();
            let f_expanded = objective(&expanded);
            simplex[n] = if f_expanded > f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected > simplex[n - 1].1 {
            simplex[n] = (reflected, f_reflected);
        } else {
            // Contract toward the better of worst/reflected.
            let (toward, f_toward) = if f_reflected > worst.1 {
                (&reflected, f_reflected)
            } else {
                (&worst.0, worst.1)
            };
            let contracted: Vec<f64> = (0..n)
                .map(|k| centroid[k] + RHO * (toward[k] - centroid[k]))
                .collect();
            let f_contracted = objective(&contracted);
            if f_contracted > f_toward {
                simplex[n] = (contracted, f_contracted);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (x, b) in entry.0.iter_mut().zip(&best) {
                        *x = b + SIGMA * (*x - b);
                    }
                    entry.1 = objective(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (x, f) = simplex.swap_remove(0);
    (x, f)
}

/// Per-restart seed derived from the master seed and both loop indices, so
/// execution order cannot change results.
fn restart_seed(master_seed: u64, combination: u64, restart: u64) -> u64 {
    let s = splitmix(master_seed.wrapping_add(combination.wrapping_mul(0x9E3779B97F4A7C15)));
    splitmix(s.wrapping_add(restart.wrapping_mul(0xBF58476D1CE4E5B9)))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

struct ComboOutcome {
    index: usize,
    degenerate_settings: usize,
    shape: ScenarioShape,
    params: Vec<f64>,
    value: f64,
    restart_values: Vec<f64>,
}

/// Maximize the violation of one inequality over all setting-kind
/// combinations for the given field and local dimension.
pub fn maximize_violation(
    ineq: &BellInequality,
    field: Field,
    dim: usize,
    allow_degenerate: bool,
    config: &OptimizerConfig,
) -> Result<ViolationResult> {
    config.validate()?;
    let combos = enumerate_kind_combinations(dim, ineq.settings_a(), ineq.settings_b(), allow_degenerate)?;

    let outcomes: Vec<ComboOutcome> = combos
        .into_iter()
        .enumerate()
        .map(|(index, (kinds_a, kinds_b))| {
            let shape = ScenarioShape::new(field, dim, dim, kinds_a, kinds_b)?;
            run_combination(ineq, shape, index, config)
        })
        .collect::<Result<_>>()?;

    // Histogram over every restart outcome in the whole search.
    let mut bins = std::collections::BTreeMap::new();
    for outcome in &outcomes {
        for &v in &outcome.restart_values {
            let key = (v / HISTOGRAM_RESOLUTION).round() as i64;
            *bins.entry(key).or_insert(0usize) += 1;
        }
    }
    let restart_histogram: Vec<HistogramBin> = bins
        .into_iter()
        .map(|(key, count)| HistogramBin {
            value: key as f64 * HISTOGRAM_RESOLUTION,
            count,
        })
        .collect();

    // Fixed-order scan with the tie-break keeps the winner independent of
    // scheduling.
    let mut best: Option<&ComboOutcome> = None;
    for outcome in &outcomes {
        best = Some(match best {
            None => outcome,
            Some(current) => {
                if (outcome.value - current.value).abs() <= TIE_TOL {
                    if outcome.degenerate_settings < current.degenerate_settings {
                        outcome
                    } else {
                        current
                    }
                } else if outcome.value > current.value {
                    outcome
                } else {
                    current
                }
            }
        });
    }
    let best = best.expect("at least one combination");

    let (projectors_a, projectors_b) = build_scenario_projectors(&best.shape, &best.params)?;
    let (value, state) = quantum_value(ineq, &projectors_a, &projectors_b)?;
    Ok(ViolationResult {
        value,
        violation: ineq.violation_of(value),
        shape: best.shape.clone(),
        params: best.params.clone(),
        projectors_a,
        projectors_b,
        state,
        combination_index: best.index,
        restart_histogram,
    })
}

fn run_combination(
    ineq: &BellInequality,
    shape: ScenarioShape,
    index: usize,
    config: &OptimizerConfig,
) -> Result<ComboOutcome> {
    let n = shape.parameter_count();
    let objective = |params: &[f64]| -> f64 {
        let (projs_a, projs_b) =
            build_scenario_projectors(&shape, params).expect("chart parameters are total");
        let (value, _) = quantum_value(ineq, &projs_a, &projs_b)
            .expect("charts produce valid projectors of a supported dimension");
        value
    };

    if n == 0 {
        // Constant objective; evaluate once.
        let value = objective(&[]);
        return Ok(ComboOutcome {
            index,
            degenerate_settings: shape.degenerate_settings(),
            shape,
            params: Vec::new(),
            value,
            restart_values: vec![value],
        });
    }

    let runs: Vec<(Vec<f64>, f64)> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(restart_seed(
                config.master_seed,
                index as u64,
                restart as u64,
            ));
            let x0: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            nelder_mead_maximize(&objective, &x0, config)
        })
        .collect();

    let restart_values: Vec<f64> = runs.iter().map(|(_, f)| *f).collect();
    // Scan in restart order; strict improvement keeps the lowest index on ties.
    let mut best_idx = 0;
    for (i, (_, f)) in runs.iter().enumerate() {
        if *f > runs[best_idx].1 {
            best_idx = i;
        }
    }
    let (params, value) = runs.into_iter().nth(best_idx).expect("nonempty restarts");
    Ok(ComboOutcome {
        index,
        degenerate_settings: shape.degenerate_settings(),
        shape,
        params,
        value,
        restart_values,
    })
}

/// One cell of a cross-dimension sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SweepKey {
    pub field: Field,
    pub dim: usize,
    pub allow_degenerate: bool,
}

impl std::fmt::Display for SweepKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} d={}{}",
            self.field,
            self.dim,
            if self.allow_degenerate { " deg" } else { "" }
        )
    }
}

/// All cells of a full table row, in reporting order.
pub fn sweep_keys() -> Vec<SweepKey> {
    let mut keys = Vec::new();
    for &(dim, deg) in &[(2usize, false), (2, true), (3, false), (4, false)] {
        for &field in &[Field::Real, Field::Complex] {
            keys.push(SweepKey {
                field,
                dim,
                allow_degenerate: deg,
            });
        }
    }
    keys
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub base: OptimizerConfig,
    /// Restarts per combination for dimensions 2, 3, 4.
    pub restarts_by_dim: [usize; 3],
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            base: OptimizerConfig::default(),
            restarts_by_dim: [200, 1000, 5000],
        }
    }
}

impl SweepConfig {
    fn config_for(&self, dim: usize) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts_by_dim[dim - 2],
            ..self.base
        }
    }
}

/// Expected "bigger search space does at least as well" relations, checked
/// against the sweep results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub smaller: SweepKey,
    pub larger: SweepKey,
    pub smaller_value: f64,
    pub larger_value: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub checks: Vec<MonotonicityCheck>,
}

impl MonotonicityReport {
    pub fn violations(&self) -> impl Iterator<Item = &MonotonicityCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }
}

/// Full table row for one inequality.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// Results in [`sweep_keys`] order.
    pub entries: Vec<(SweepKey, ViolationResult)>,
    pub monotonicity: MonotonicityReport,
}

impl SweepOutcome {
    pub fn get(&self, field: Field, dim: usize, allow_degenerate: bool) -> Option<&ViolationResult> {
        let key = SweepKey {
            field,
            dim,
            allow_degenerate,
        };
        self.entries.iter().find(|(k, _)| *k == key).map(|(_, r)| r)
    }

    pub fn best_value(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, r)| r.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Optimize one inequality over every (field, dimension, degeneracy) cell and
/// report expected search-space monotonicity.
pub fn cross_dimension_sweep(ineq: &BellInequality, config: &SweepConfig) -> Result<SweepOutcome> {
    let mut entries = Vec::new();
    for key in sweep_keys() {
        let cell_config = config.config_for(key.dim);
        let result = maximize_violation(ineq, key.field, key.dim, key.allow_degenerate, &cell_config)?;
        entries.push((key, result));
    }

    // Embedding relations that must hold up to search noise: real within
    // complex at fixed dimension, nondegenerate within degenerate for
    // qubits, lower within higher dimension, and complex qubits within real
    // ququarts via the doubling map.
    let expected: Vec<(SweepKey, SweepKey)> = {
        let k = |field, dim, deg| SweepKey {
            field,
            dim,
            allow_degenerate: deg,
        };
        vec![
            (k(Field::Real, 2, false), k(Field::Complex, 2, false)),
            (k(Field::Real, 2, true), k(Field::Complex, 2, true)),
            (k(Field::Real, 2, false), k(Field::Real, 2, true)),
            (k(Field::Complex, 2, false), k(Field::Complex, 2, true)),
            (k(Field::Real, 2, false), k(Field::Real, 3, false)),
            (k(Field::Real, 3, false), k(Field::Real, 4, false)),
            (k(Field::Complex, 2, false), k(Field::Complex, 3, false)),
            (k(Field::Complex, 3, false), k(Field::Complex, 4, false)),
            (k(Field::Complex, 2, false), k(Field::Real, 4, false)),
        ]
    };
    let lookup = |key: &SweepKey| {
        entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, r)| r.value)
            .expect("all sweep cells present")
    };
    let checks = expected
        .into_iter()
        .map(|(smaller, larger)| {
            let smaller_value = lookup(&smaller);
            let larger_value = lookup(&larger);
            MonotonicityCheck {
                smaller,
                larger,
                smaller_value,
                larger_value,
                satisfied: larger_value >= smaller_value -0.5e-6,
            }
        })
        .collect();

    Ok(SweepOutcome {
        entries,
        monotonicity: MonotonicityReport { checks },
    })
}

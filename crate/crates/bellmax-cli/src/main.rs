//! Command-line driver: optimize single inequalities, sweep a corpus across
//! fields and dimensions, verify real embeddings of stored complex runs, and
//! print classical bounds.
//!
//! Exit codes: 0 ok, 2 usage, 3 unsupported shape, 4 verification failure.

mod record;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bellmax::measurements::build_scenario_projectors;
use bellmax::optimizer::{sweep_keys, SweepKey};
use bellmax::{
    assemble, cross_dimension_sweep, embed_scenario, maximize_violation, quantum_value,
    BellInequality, Error, Field, OptimizerConfig, SweepConfig, ViolationResult,
};
use record::{inequality_hash, RunRecord};

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_UNSUPPORTED: i32 = 3;
const EXIT_VERIFICATION: i32 = 4;

/// Round-trip verification tolerance for stored runs.
const VERIFY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "bellmax",
    version,
    about = "Maximum quantum violation of bipartite two-outcome Bell inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the violation of one inequality at a fixed field/dimension.
    Optimize(OptimizeArgs),
    /// Run every (field, dimension, degeneracy) cell for each inequality in
    /// a corpus directory.
    Sweep(SweepArgs),
    /// Rebuild a stored complex run, embed it into the doubled real space
    /// and report the value difference.
    EmbedCheck(EmbedCheckArgs),
    /// Print the enumerated classical bound of an inequality file.
    Classical(ClassicalArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    /// Inequality file (JSON).
    #[arg(long)]
    ineq: PathBuf,
    /// Scalar field of the local Hilbert spaces.
    #[arg(long, value_parser = parse_field, default_value = "real")]
    field: Field,
    /// Local dimension (2, 3 or 4).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Also explore degenerate (always-0 / always-1) settings; qubits only.
    #[arg(long)]
    allow_degenerate: bool,
    /// Random restarts per setting combination (default scales with dim).
    #[arg(long)]
    restarts: Option<usize>,
    /// Master seed; restart seeds derive from it deterministically.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write a JSON run record here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Directory of inequality JSON files.
    #[arg(long)]
    corpus: PathBuf,
    /// Restarts per combination for every cell (default 200/1000/5000 by dim).
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output format.
    #[arg(long, value_parser = ["json", "csv"], default_value = "csv")]
    format: String,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedCheckArgs {
    /// Inequality file the record was produced from.
    #[arg(long)]
    ineq: PathBuf,
    /// Run record written by `optimize --out`.
    #[arg(long)]
    record: PathBuf,
}

#[derive(Args)]
struct ClassicalArgs {
    #[arg(long)]
    ineq: PathBuf,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        _ => Err(format!("unknown field {:?} (use real or complex)", s)),
    }
}

fn main() {
    // BELLMAX_THREADS caps the rayon worker count; results are identical for
    // any thread count because restart merging is order-fixed.
    if let Ok(threads) = std::env::var("BELLMAX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Optimize(args) => run_optimize(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::EmbedCheck(args) => run_embed_check(&args),
        Command::Classical(args) => run_classical(&args),
    };
    std::process::exit(code);
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::UnsupportedScenario(_) | Error::DimensionOutOfRange { .. } => EXIT_UNSUPPORTED,
        Error::BoundMismatch { .. } | Error::NotNormalized { .. } => EXIT_VERIFICATION,
        _ => EXIT_FAILURE,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {}", err);
    exit_code_for(err)
}

fn load_inequality(path: &Path) -> Result<BellInequality, Error> {
    BellInequality::load_path(path)
}

fn run_optimize(args: &OptimizeArgs) -> i32 {
    let ineq = match load_inequality(&args.ineq) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    if !(2..=4).contains(&args.dim) {
        return fail(&Error::DimensionOutOfRange {
            dim: args.dim,
            min: 2,
            max: 4,
        });
    }
    let config = OptimizerConfig {
        restarts: args
            .restarts
            .unwrap_or_else(|| OptimizerConfig::default_for_dim(args.dim).restarts),
        master_seed: args.seed,
        ..OptimizerConfig::default()
    };
    let started = Instant::now();
    let result = match maximize_violation(&ineq, args.field, args.dim, args.allow_degenerate, &config)
    {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let wall_time_ms = started.elapsed().as_millis() as u64;

    // Independent verify pass: rebuild from stored parameters and compare.
    match verify_result(&ineq, &result) {
        Ok(delta) if delta <= VERIFY_TOL => {}
        Ok(delta) => {
            eprintln!(
                "error: re-evaluated value differs from stored value by {:.3e}",
                delta
            );
            return EXIT_VERIFICATION;
        }
        Err(e) => return fail(&e),
    }

    let record = match RunRecord::from_result(&ineq, &result, &config, wall_time_ms) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    println!(
        "{}: value {:.6}  violation {:.6}  maximally-entangled {}",
        ineq.name(),
        record.value,
        record.violation,
        if record.maximally_entangled { "yes" } else { "no" }
    );
    if let Some(out) = &args.out {
        if let Err(e) = record.save_path(out) {
            return fail(&e);
        }
    }
    EXIT_OK
}

/// Rebuild projectors from stored parameters and re-assemble the operator;
/// returns the value difference.
fn verify_result(ineq: &BellInequality, result: &ViolationResult) -> Result<f64, Error> {
    let (pa, pb) = build_scenario_projectors(&result.shape, &result.params)?;
    let (value, _) = quantum_value(ineq, &pa, &pb)?;
    Ok((value - result.value).abs())
}

struct SweepRow {
    name: String,
    type_tag: String,
    cells: Vec<(SweepKey, Option<f64>)>,
    monotonicity_violations: usize,
    error: Option<String>,
}

fn run_sweep(args: &SweepArgs) -> i32 {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(&args.corpus) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect(),
        Err(e) => return fail(&Error::Io(e)),
    };
    files.sort();

    let mut rows = Vec::new();
    for file in &files {
        rows.push(sweep_one(file, args));
    }

    let rendered = match args.format.as_str() {
        "json" => render_json(&rows),
        _ => render_csv(&rows),
    };
    if let Some(out) = &args.out {
        if let Err(e) = std::fs::write(out, rendered) {
            return fail(&Error::Io(e));
        }
    } else {
        print!("{}", rendered);
    }
    EXIT_OK
}

fn sweep_one(file: &Path, args: &SweepArgs) -> SweepRow {
    let name_fallback = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.display().to_string());
    let ineq = match load_inequality(file) {
        Ok(i) => i,
        Err(e) => {
            return SweepRow {
                name: name_fallback,
                type_tag: String::new(),
                cells: sweep_keys().into_iter().map(|k| (k, None)).collect(),
                monotonicity_violations: 0,
                error: Some(e.to_string()),
            }
        }
    };
    let mut config = SweepConfig {
        base: OptimizerConfig {
            master_seed: args.seed,
            ..OptimizerConfig::default()
        },
        ..SweepConfig::default()
    };
    if let Some(r) = args.restarts {
        config.restarts_by_dim = [r, r, r];
    }
    match cross_dimension_sweep(&ineq, &config) {
        Ok(outcome) => SweepRow {
            name: ineq.name().to_string(),
            type_tag: ineq.type_tag().to_string(),
            cells: outcome
                .entries
                .iter()
                .map(|(k, r)| (*k, Some(r.violation)))
                .collect(),
            monotonicity_violations: outcome.monotonicity.violations().count(),
            error: None,
        },
        Err(e) => SweepRow {
            name: ineq.name().to_string(),
            type_tag: ineq.type_tag().to_string(),
            cells: sweep_keys().into_iter().map(|k| (k, None)).collect(),
            monotonicity_violations: 0,
            error: Some(e.to_string()),
        },
    }
}

fn cell_label(key: &SweepKey) -> String {
    let dim_name = match key.dim {
        2 => "qubit",
        3 => "qutrit",
        _ => "ququart",
    };
    format!(
        "{}_{}{}",
        key.field,
        dim_name,
        if key.allow_degenerate { "_deg" } else { "" }
    )
}

fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("name,type");
    for key in sweep_keys() {
        out.push(',');
        out.push_str(&cell_label(&key));
    }
    out.push_str(",monotonicity_violations,status\n");
    for row in rows {
        out.push_str(&csv_escape(&row.name));
        out.push(',');
        out.push_str(&row.type_tag);
        for (_, cell) in &row.cells {
            out.push(',');
            if let Some(v) = cell {
                out.push_str(&format!("{:.6}", v));
            }
        }
        out.push_str(&format!(
            ",{},{}\n",
            row.monotonicity_violations,
            match &row.error {
                None => "ok".to_string(),
                Some(e) => format!("failed: {}", csv_escape(e)),
            }
        ));
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_json(rows: &[SweepRow]) -> String {
    let value: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let mut cells = serde_json::Map::new();
            for (key, cell) in &row.cells {
                cells.insert(
                    cell_label(key),
                    match cell {
                        Some(v) => serde_json::json!(v),
                        None => serde_json::Value::Null,
                    },
                );
            }
            serde_json::json!({
                "name": row.name,
                "type": row.type_tag,
                "violations": cells,
                "monotonicity_violations": row.monotonicity_violations,
                "status": match &row.error {
                    None => "ok".to_string(),
                    Some(e) => format!("failed: {}", e),
                },
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&value).expect("serializing sweep rows");
    s.push('\n');
    s
}

fn run_embed_check(args: &EmbedCheckArgs) -> i32 {
    let ineq = match load_inequality(&args.ineq) {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let record = match RunRecord::load_path(&args.record) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if record.inequality.sha256 != inequality_hash(&ineq) {
        eprintln!(
            "error: record was produced from a different inequality (hash mismatch for {})",
            record.inequality.name
        );
        return EXIT_VERIFICATION;
    }
    if record.shape.field != Field::Complex {
        eprintln!("error: embed-check needs a complex-field record");
        return EXIT_UNSUPPORTED;
    }

    let state = match record.state() {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    // Norm precondition; map_state would reject it anyway, check up front.
    let norm = bellmax::numerics::vec_norm(&state);
    if (norm - 1.0).abs() > 1e-8 {
        return fail(&Error::NotNormalized { norm });
    }

    let (pa, pb) = match build_scenario_projectors(&record.shape, &record.params) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let complex_op = match assemble(&ineq, &pa, &pb) {
        Ok(op) => op,
        Err(e) => return fail(&e),
    };
    let complex_value = complex_op.matrix.expectation(&state);
    if (complex_value - record.value).abs() > VERIFY_TOL {
        eprintln!(
            "error: stored value {:.9} does not match re-evaluated expectation {:.9}",
            record.value, complex_value
        );
        return EXIT_VERIFICATION;
    }

    let solution = ViolationResult {
        value: record.value,
        violation: record.violation,
        shape: record.shape.clone(),
        params: record.params.clone(),
        projectors_a: pa,
        projectors_b: pb,
        state,
        combination_index: record.combination_index,
        restart_histogram: record.restart_histogram.clone(),
    };
    let certificate = match embed_scenario(&ineq, &solution) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let delta = (certificate.value - complex_value).abs();
    println!(
        "complex value {:.6}  real-{}d certificate {:.6}  delta {:.3e}",
        complex_value,
        certificate.shape.dim_a,
        certificate.value,
        delta
    );
    if delta <= VERIFY_TOL {
        EXIT_OK
    } else {
        eprintln!("error: embedding changed the value by {:.3e}", delta);
        EXIT_VERIFICATION
    }
}

fn run_classical(args: &ClassicalArgs) -> i32 {
    match load_inequality(&args.ineq) {
        Ok(ineq) => {
            println!("{}: classical bound {:.6}", ineq.name(), ineq.classical_bound());
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

//! Command implementations behind the `solvable` binary: classification,
//! partitioning, factorization, benchmarking against exact ground states,
//! measurement simulation, and DOT export.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use solvable::classify::{satisfies, SolvabilityClass};
use solvable::factor::{factorize, FactorError, FactorizedFragment};
use solvable::hamgraph::{
    anti_graph_of, build_anti_graph, connected_components, quotient_graph,
    recognize_line_graph, root_graph, twin_partition,
};
use solvable::io::{read_hamiltonian_file, HamFileError, HamiltonianFile};
use solvable::partition::{
    partition_report, partition_to_json, sorted_insertion, Partition,
};
use solvable::solver::{
    build_measurement_plan, expectation, ground_state, simulate_measurements,
    variance_metric, GroundStateOptions, GroundStateResult, StateVector,
};

/// Exit codes: 0 success, 2 parse error, 3 precondition error, 4
/// non-convergence.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] HamFileError),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<solvable::solver::SolverError> for CliError {
    fn from(e: solvable::solver::SolverError) -> Self {
        match e {
            solvable::solver::SolverError::NonConvergence(n) => {
                CliError::NonConvergence(format!("after {n} iterations"))
            }
            other => CliError::Precondition(other.to_string()),
        }
    }
}

/// Runtime knobs shared by the commands; every field has the library
/// default and can come from flags or a flat key=value config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub class: Option<SolvabilityClass>,
    pub shots: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub formats: Vec<String>,
    pub max_qubits: usize,
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            class: None,
            shots: 1_000_000,
            seed: 1,
            out: None,
            formats: vec!["json".into(), "csv".into()],
            max_qubits: 16,
            tol: 1e-8,
        }
    }
}

impl RunConfig {
    /// Merge `key=value` lines (same keys as the flags) into the config.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Precondition(format!("config line {}: expected key=value", i + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| {
                CliError::Precondition(format!("config line {}: bad {what}: {value}", i + 1))
            };
            match key {
                "class" => {
                    self.class =
                        Some(value.parse().map_err(|_| bad("class"))?)
                }
                "shots" => self.shots = value.parse().map_err(|_| bad("shots"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
                "out" => self.out = Some(PathBuf::from(value)),
                "format" => {
                    self.formats = value.split(',').map(|s| s.trim().to_string()).collect()
                }
                "max-qubits" => {
                    self.max_qubits = value.parse().map_err(|_| bad("max-qubits"))?
                }
                "tol" => self.tol = value.parse().map_err(|_| bad("tol"))?,
                other => {
                    return Err(CliError::Precondition(format!(
                        "config line {}: unknown key `{other}`",
                        i + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn ground_options(&self) -> GroundStateOptions {
        GroundStateOptions {
            max_qubits: self.max_qubits,
            tol: self.tol,
            ..GroundStateOptions::default()
        }
    }
}

pub fn load(path: &Path) -> Result<HamiltonianFile, CliError> {
    Ok(read_hamiltonian_file(path)?)
}

fn write_output(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), contents)?;
            eprintln!("wrote {}", dir.join(name).display());
        }
        None => println!("{contents}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------

pub struct ClassifyOutcome {
    pub class: SolvabilityClass,
    pub verdict: bool,
    pub report: String,
}

pub fn cmd_classify(
    file: &Path,
    cfg: &RunConfig,
    with_certificate: bool,
) -> Result<ClassifyOutcome, CliError> {
    let f = load(file)?;
    let class = cfg
        .class
        .ok_or_else(|| CliError::Precondition("classify requires --class".into()))?;
    let ops = f.hamiltonian.ops();
    let verdict = satisfies(&ops, class);
    let mut report = format!(
        "{}: {} terms on {} qubits: {} = {}\n",
        f.label,
        f.hamiltonian.len(),
        f.n_qubits,
        class,
        verdict
    );
    if with_certificate && verdict && !ops.is_empty() {
        let g = build_anti_graph(&f.hamiltonian);
        let tw = twin_partition(&g);
        let _ = writeln!(report, "twin classes: {}", tw.classes.len());
        for (i, c) in tw.classes.iter().enumerate() {
            let members: Vec<String> =
                c.iter().map(|&v| f.hamiltonian.terms()[v].op.to_string()).collect();
            let _ = writeln!(report, "  class {i}: {}", members.join(" | "));
        }
        let q = quotient_graph(&g, &tw).expect("twin partition is valid");
        for (ci, comp) in connected_components(&q).iter().enumerate() {
            let sub = q.induced(comp);
            if sub.vertex_count() > 0 && comp.iter().all(|&v| q.degree(v) > 0) {
                if let Some(k) = recognize_line_graph(&sub) {
                    let _ = writeln!(
                        report,
                        "  component {ci}: Krausz cliques {:?}",
                        k.cliques
                    );
                }
            }
        }
    }
    Ok(ClassifyOutcome {
        class,
        verdict,
        report,
    })
}

// ---------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------

pub fn cmd_partition(file: &Path, cfg: &RunConfig) -> Result<Partition, CliError> {
    let f = load(file)?;
    let class = cfg
        .class
        .ok_or_else(|| CliError::Precondition("partition requires --class".into()))?;
    let p = sorted_insertion(&f.hamiltonian, class);
    let stats = partition_report(&p);
    let mut doc = partition_to_json(&p);
    doc["stats"] = serde_json::to_value(&stats).expect("stats serialize");
    doc["label"] = serde_json::Value::String(f.label.clone());
    if cfg.formats.iter().any(|f| f == "json") {
        write_output(
            cfg,
            &format!("{}_{}_partition.json", f.label.to_lowercase(), slug(class)),
            &serde_json::to_string_pretty(&doc).expect("json"),
        )?;
    }
    eprintln!(
        "{}: {} fragments under {class}; largest L1 {:.4} ({} terms)",
        f.label,
        p.fragments.len(),
        stats
            .largest_fragment
            .map(|i| stats.fragments[i].l1_norm)
            .unwrap_or(0.0),
        stats
            .largest_fragment
            .map(|i| stats.fragments[i].term_count)
            .unwrap_or(0),
    );
    Ok(p)
}

fn slug(class: SolvabilityClass) -> String {
    class.name().to_lowercase().replace(' ', "-")
}

// ---------------------------------------------------------------------
// factorize
// ---------------------------------------------------------------------

pub fn cmd_factorize(file: &Path, cfg: &RunConfig) -> Result<Vec<FactorizedFragment>, CliError> {
    let f = load(file)?;
    let class = cfg.class.unwrap_or(SolvabilityClass::SymTwcFf);
    let p = sorted_insertion(&f.hamiltonian, class);
    let mut out = Vec::new();
    let mut docs = Vec::new();
    for (i, frag) in p.fragments.iter().enumerate() {
        let ff = factorize(frag)?;
        eprintln!(
            "fragment {i}: K = {}, components = {}, sizes = {:?}",
            ff.symmetry_generators.len(),
            ff.components.len(),
            ff.components
                .iter()
                .map(|c| c.generators.len())
                .collect::<Vec<_>>()
        );
        docs.push(factorized_to_json(&ff));
        out.push(ff);
    }
    write_output(
        cfg,
        &format!("{}_{}_factorized.json", f.label.to_lowercase(), slug(class)),
        &serde_json::to_string_pretty(&serde_json::Value::Array(docs)).expect("json"),
    )?;
    Ok(out)
}

pub fn factorized_to_json(ff: &FactorizedFragment) -> serde_json::Value {
    let gens: Vec<String> = ff
        .symmetry_generators
        .iter()
        .map(|g| g.to_string())
        .collect();
    let poly = |p: &solvable::factor::SymPolynomial| -> serde_json::Value {
        serde_json::Value::Array(
            p.terms
                .iter()
                .map(|(&mask, &c)| {
                    serde_json::json!({
                        "exponents": format!("{mask:b}"),
                        "coeff": c,
                    })
                })
                .collect(),
        )
    };
    serde_json::json!({
        "n_qubits": ff.n_qubits,
        "symmetry_generators": gens,
        "constant_poly": poly(&ff.constant_poly),
        "components": ff.components.iter().map(|comp| {
            serde_json::json!({
                "root_vertices": comp.root.vertex_count,
                "root_edges": comp.root.edges,
                "generators": comp.generators.iter().map(|g| {
                    serde_json::json!({
                        "pauli": g.pauli.to_string(),
                        "root_edge": [g.root_edge.0, g.root_edge.1],
                        "orientation": g.orientation,
                        "coeff_poly": poly(&g.coeff_poly),
                    })
                }).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub class: SolvabilityClass,
    pub metric: f64,
    pub fragment_count: usize,
    pub largest_l1: f64,
    pub largest_terms: usize,
    pub seconds: f64,
}

#[derive(Debug)]
pub struct BenchmarkOutcome {
    pub label: String,
    pub ground: GroundStateResult,
    pub rows: Vec<BenchmarkRow>,
    pub hamiltonian_l1: f64,
    pub hamiltonian_terms: usize,
}

/// Table order for benchmark output.
pub const BENCHMARK_CLASSES: [SolvabilityClass; 10] = [
    SolvabilityClass::Pauli,
    SolvabilityClass::Fc,
    SolvabilityClass::Ac,
    SolvabilityClass::Nc,
    SolvabilityClass::TwcAc,
    SolvabilityClass::SymTwcAc,
    SolvabilityClass::Ff,
    SolvabilityClass::SymFf,
    SolvabilityClass::TwcFf,
    SolvabilityClass::SymTwcFf,
];

pub fn run_benchmark(
    f: &HamiltonianFile,
    classes: &[SolvabilityClass],
    cfg: &RunConfig,
) -> Result<BenchmarkOutcome, CliError> {
    let ground = ground_state(&f.hamiltonian, &cfg.ground_options())?;
    if ground.degenerate {
        eprintln!(
            "note: ground space of {} is (near-)degenerate; metrics use one member",
            f.label
        );
    }
    let mut rows = Vec::new();
    for &class in classes {
        let t0 = Instant::now();
        let p = sorted_insertion(&f.hamiltonian, class);
        let budget = variance_metric(&p, &ground.state);
        let stats = partition_report(&p);
        let largest = stats.largest_fragment;
        let row = BenchmarkRow {
            class,
            metric: budget.metric,
            fragment_count: p.fragments.len(),
            largest_l1: largest.map(|i| stats.fragments[i].l1_norm).unwrap_or(0.0),
            largest_terms: largest
                .map(|i| stats.fragments[i].term_count)
                .unwrap_or(0),
            seconds: t0.elapsed().as_secs_f64(),
        };
        eprintln!(
            "{} {}: metric {:.4}, {} fragments, largest {:.4} ({}) [{:.2}s]",
            f.label,
            class,
            row.metric,
            row.fragment_count,
            row.largest_l1,
            row.largest_terms,
            row.seconds
        );
        rows.push(row);
    }
    Ok(BenchmarkOutcome {
        label: f.label.clone(),
        ground,
        rows,
        hamiltonian_l1: f.hamiltonian.l1_norm(),
        hamiltonian_terms: f.hamiltonian.len(),
    })
}

pub fn benchmark_csv(outcomes: &[BenchmarkOutcome]) -> String {
    let mut metric = String::from("system");
    for c in BENCHMARK_CLASSES {
        let _ = write!(metric, ",{}", c.name());
    }
    metric.push('\n');
    let mut largest = String::from("system,H_e");
    for c in BENCHMARK_CLASSES {
        let _ = write!(largest, ",{}", c.name());
    }
    largest.push('\n');
    for o in outcomes {
        let cell = |cls: SolvabilityClass| o.rows.iter().find(|r| r.class == cls);
        let _ = write!(metric, "{}", o.label);
        for c in BENCHMARK_CLASSES {
            match cell(c) {
                Some(r) => {
                    let _ = write!(metric, ",{:.6}", r.metric);
                }
                None => metric.push(','),
            }
        }
        metric.push('\n');
        let _ = write!(
            largest,
            "{},{:.4}({})",
            o.label, o.hamiltonian_l1, o.hamiltonian_terms
        );
        for c in BENCHMARK_CLASSES {
            match cell(c) {
                Some(r) => {
                    let _ = write!(largest, ",{:.4}({})", r.largest_l1, r.largest_terms);
                }
                None => largest.push(','),
            }
        }
        largest.push('\n');
    }
    format!("# variance metric\n{metric}# largest fragment L1(terms)\n{largest}")
}

pub fn benchmark_json(outcomes: &[BenchmarkOutcome]) -> serde_json::Value {
    serde_json::Value::Array(
        outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "system": o.label,
                    "ground_energy": o.ground.energy,
                    "ground_residual": o.ground.residual,
                    "ground_degenerate": o.ground.degenerate,
                    "hamiltonian_l1": o.hamiltonian_l1,
                    "hamiltonian_terms": o.hamiltonian_terms,
                    "rows": o.rows.iter().map(|r| serde_json::json!({
                        "class": r.class.name(),
                        "metric": r.metric,
                        "fragments": r.fragment_count,
                        "largest_l1": r.largest_l1,
                        "largest_terms": r.largest_terms,
                        "seconds": r.seconds,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn cmd_benchmark(files: &[PathBuf], cfg: &RunConfig) -> Result<Vec<BenchmarkOutcome>, CliError> {
    let classes: Vec<SolvabilityClass> = match cfg.class {
        Some(c) => vec![c],
        None => BENCHMARK_CLASSES.to_vec(),
    };
    let mut outcomes = Vec::new();
    for file in files {
        let f = load(file)?;
        outcomes.push(run_benchmark(&f, &classes, cfg)?);
    }
    if cfg.formats.iter().any(|f| f == "csv") {
        write_output(cfg, "benchmark.csv", &benchmark_csv(&outcomes))?;
    }
    if cfg.formats.iter().any(|f| f == "json") {
        write_output(
            cfg,
            "benchmark.json",
            &serde_json::to_string_pretty(&benchmark_json(&outcomes)).expect("json"),
        )?;
    }
    Ok(outcomes)
}

// ---------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct SimulateOutcome {
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
    pub shots_used: Vec<u64>,
}

pub fn cmd_simulate(file: &Path, cfg: &RunConfig) -> Result<SimulateOutcome, CliError> {
    let f = load(file)?;
    let class = cfg.class.unwrap_or(SolvabilityClass::SymTwcFf);
    if cfg.shots == 0 {
        return Err(CliError::Precondition("shots must be positive".into()));
    }
    let ground = ground_state(&f.hamiltonian, &cfg.ground_options())?;
    let p = sorted_insertion(&f.hamiltonian, class);
    let budget = variance_metric(&p, &ground.state);
    let exact = expectation(&f.hamiltonian, &ground.state);
    let (estimate, stderr, shots_used) =
        simulate_partition(&p, &budget.shot_fractions, &ground.state, cfg.shots, cfg.seed)?;
    eprintln!(
        "{}: estimate {estimate:.8} +- {stderr:.2e} (exact {exact:.8}, {} fragments, {} shots)",
        f.label,
        p.fragments.len(),
        cfg.shots
    );
    Ok(SimulateOutcome {
        estimate,
        stderr,
        exact,
        shots_used,
    })
}

/// Allocate shots by the optimal fractions (one-shot floor for fragments
/// with nonzero expectation contributions) and simulate every fragment.
pub fn simulate_partition(
    p: &Partition,
    fractions: &[f64],
    state: &StateVector,
    total_shots: u64,
    seed: u64,
) -> Result<(f64, f64, Vec<u64>), CliError> {
    let mut shots: Vec<u64> = fractions
        .iter()
        .map(|&f| (f * total_shots as f64).round() as u64)
        .collect();
    for s in &mut shots {
        if *s == 0 {
            *s = 1;
        }
    }
    // push rounding drift onto the largest allocation
    let drift = shots.iter().sum::<u64>() as i64 - total_shots as i64;
    if drift != 0 {
        if let Some(max_idx) = (0..shots.len()).max_by_key(|&i| shots[i]) {
            let adjusted = shots[max_idx] as i64 - drift;
            shots[max_idx] = adjusted.max(1) as u64;
        }
    }
    let mut estimate = 0.0;
    let mut var_sum = 0.0;
    for (i, frag) in p.fragments.iter().enumerate() {
        let ff = factorize(frag)?;
        let plan = build_measurement_plan(&ff)?;
        let (est, err) = simulate_measurements(&plan, &ff, state, shots[i], seed ^ (i as u64) << 32 | i as u64)?;
        estimate += est;
        var_sum += err * err;
    }
    Ok((estimate, var_sum.sqrt(), shots))
}

// ---------------------------------------------------------------------
// graph-export
// ---------------------------------------------------------------------

pub fn cmd_graph_export(file: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    let f = load(file)?;
    let g = build_anti_graph(&f.hamiltonian);
    let labels: Vec<String> = f
        .hamiltonian
        .terms()
        .iter()
        .map(|t| t.op.to_string())
        .collect();
    write_output(
        cfg,
        &format!("{}_anti.dot", f.label.to_lowercase()),
        &g.to_dot(Some(&labels)),
    )?;
    // root graphs of the twin-free quotient components, where recognizable
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).collect();
    let sub = g.induced(&keep);
    let tw = twin_partition(&sub);
    let q = quotient_graph(&sub, &tw).expect("twin partition valid");
    for (ci, comp) in connected_components(&q).iter().enumerate() {
        let cg = q.induced(comp);
        if let Some(k) = recognize_line_graph(&cg) {
            let r = root_graph(&k);
            let names: Vec<String> = (0..cg.vertex_count())
                .map(|v| labels[cg.vertex_labels[v]].clone())
                .collect();
            write_output(
                cfg,
                &format!("{}_root_{ci}.dot", f.label.to_lowercase()),
                &r.to_dot(Some(&names)),
            )?;
        }
    }
    let _ = anti_graph_of(&f.hamiltonian.ops());
    Ok(())
}

//! Batch experiments: instances x settings over shared realizations, written
//! as CSV tables plus a JSON metadata file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use mscps_core::label::{LabelOptions, TerminalRule};
use mscps_core::planners::RolloutConfig;
use mscps_core::probability::{ConflictRule, PeerKnowledge};
use mscps_core::rng::derive_seed;
use mscps_core::simulation::{compute_metrics, sample_realizations, simulate_run, Metrics, PenaltyConvention};
use mscps_core::{Instance, RealizationMatrix, RunRecord, Setting, SimConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{full_factorial, generate, GenError, GenParams, Grid, BETA_CONCENTRATION};
use crate::io::{load_instance, IoError};

/// Version tag written in the first line of every CSV.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("config lists no settings")]
    NoSettings,
    #[error(transparent)]
    UnknownSetting(#[from] mscps_core::Error),
    #[error("reference setting {0} is not among the configured settings")]
    Reference(String),
    #[error("runs must be >= 1")]
    NoRuns,
    #[error("config produces no instances")]
    NoInstances,
    #[error("beta grid is empty")]
    EmptyBetaGrid,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Instance(#[from] IoError),
    #[error("instance {index}: {source}")]
    Generate { index: usize, source: GenError },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    #[default]
    OnFailure,
    OnSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictMode {
    #[default]
    Inclusive,
    StrictPrefix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub n_best: usize,
    pub max_labels: usize,
    pub dead_end_candidates: bool,
    pub horizon: usize,
    pub penalty: PenaltyMode,
    pub conflict: ConflictMode,
    /// Other drivers' penalties are assumed equal to the planner's own.
    pub assume_own_peers: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let label = LabelOptions::default();
        Self {
            n_best: label.n_best,
            max_labels: label.max_labels,
            dead_end_candidates: false,
            horizon: RolloutConfig::default().horizon,
            penalty: PenaltyMode::OnFailure,
            conflict: ConflictMode::Inclusive,
            assume_own_peers: false,
        }
    }
}

impl SolverConfig {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            label: LabelOptions {
                n_best: self.n_best,
                max_labels: self.max_labels,
                terminal: if self.dead_end_candidates {
                    TerminalRule::DeadEnd
                } else {
                    TerminalRule::AnyPrefix
                },
                ..LabelOptions::default()
            },
            rule: match self.conflict {
                ConflictMode::Inclusive => ConflictRule::Inclusive,
                ConflictMode::StrictPrefix => ConflictRule::StrictPrefix,
            },
            peers: if self.assume_own_peers {
                PeerKnowledge::AssumeOwn
            } else {
                PeerKnowledge::Shared
            },
            rollout: RolloutConfig { horizon: self.horizon },
            penalty_convention: match self.penalty {
                PenaltyMode::OnFailure => PenaltyConvention::OnFailure,
                PenaltyMode::OnSuccess => PenaltyConvention::OnSuccess,
            },
        }
    }
}

/// Experiment description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub runs: usize,
    pub settings: Vec<String>,
    /// Setting the relative differences are taken against; defaults to the
    /// first listed setting.
    pub reference: Option<String>,
    pub base: GenParams,
    pub grid: Grid,
    /// Instances drawn per parameter set.
    pub replicates: usize,
    /// Instance files used instead of the generator, relative to the config.
    pub instance_files: Vec<PathBuf>,
    pub solver: SolverConfig,
    /// Per (instance, setting) wall-clock cap in seconds; once over it the
    /// remaining runs of the cell are skipped. The first run always goes
    /// through.
    pub time_limit_secs: Option<f64>,
    pub beta_grid: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            seed: 0,
            runs: 100,
            settings: Vec::new(),
            reference: None,
            base: GenParams::default(),
            grid: Grid::default(),
            replicates: 1,
            instance_files: Vec::new(),
            solver: SolverConfig::default(),
            time_limit_secs: None,
            beta_grid: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for f in &mut cfg.instance_files {
            if f.is_relative() {
                *f = dir.join(&*f);
            }
        }
        Ok(cfg)
    }

    /// Parsed settings, in configured order.
    pub fn parsed_settings(&self) -> Result<Vec<Setting>, ConfigError> {
        if self.settings.is_empty() {
            return Err(ConfigError::NoSettings);
        }
        Ok(self
            .settings
            .iter()
            .map(|s| s.parse::<Setting>())
            .collect::<Result<Vec<_>, _>>()?)
    }

    pub fn reference_setting(&self) -> Result<Setting, ConfigError> {
        let settings = self.parsed_settings()?;
        match &self.reference {
            None => Ok(settings[0]),
            Some(name) => {
                let s: Setting = name.parse()?;
                if settings.contains(&s) {
                    Ok(s)
                } else {
                    Err(ConfigError::Reference(name.clone()))
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.reference_setting()?;
        if self.runs == 0 {
            return Err(ConfigError::NoRuns);
        }
        if self.instance_files.is_empty() && self.replicates == 0 {
            return Err(ConfigError::NoInstances);
        }
        Ok(())
    }
}

/// One instance of an experiment and where it came from.
#[derive(Debug, Clone)]
pub struct ExperimentInstance {
    pub index: usize,
    pub instance: Instance,
    pub params: Option<GenParams>,
    pub source: Option<PathBuf>,
    pub seed: u64,
}

fn instance_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, 2 * index as u64)
}

fn matrix_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, 2 * index as u64 + 1)
}

pub fn build_instances(cfg: &ExperimentConfig) -> Result<Vec<ExperimentInstance>, ExperimentError> {
    let mut out = Vec::new();
    if !cfg.instance_files.is_empty() {
        for (index, path) in cfg.instance_files.iter().enumerate() {
            out.push(ExperimentInstance {
                index,
                instance: load_instance(path)?,
                params: None,
                source: Some(path.clone()),
                seed: instance_seed(cfg.seed, index),
            });
        }
        return Ok(out);
    }
    for params in full_factorial(&cfg.base, &cfg.grid) {
        for _ in 0..cfg.replicates {
            let index = out.len();
            let seed = instance_seed(cfg.seed, index);
            let instance = generate(&params, seed).map_err(|source| ExperimentError::Generate { index, source })?;
            out.push(ExperimentInstance {
                index,
                instance,
                params: Some(params.clone()),
                source: None,
                seed,
            });
        }
    }
    if out.is_empty() {
        return Err(ConfigError::NoInstances.into());
    }
    Ok(out)
}

/// Result of one (instance, setting) cell.
#[derive(Debug, Clone)]
pub struct Cell {
    pub instance: usize,
    pub setting: Setting,
    pub records: Vec<RunRecord>,
    pub metrics: Metrics,
    /// Runs not simulated because the cell hit its time limit.
    pub skipped: usize,
}

fn run_cell(
    setting: Setting,
    inst: &ExperimentInstance,
    matrix: &RealizationMatrix,
    sim: &SimConfig,
    limit: Option<Duration>,
) -> Cell {
    let start = Instant::now();
    let mut records = Vec::with_capacity(matrix.runs());
    for run in 0..matrix.runs() {
        if let Some(limit) = limit.filter(|_| run > 0) {
            if start.elapsed() > limit {
                log::warn!(
                    "instance {} {}: time limit reached after {run} of {} runs",
                    inst.index,
                    setting,
                    matrix.runs()
                );
                break;
            }
        }
        records.push(simulate_run(setting, &inst.instance, matrix, run, sim));
    }
    Cell {
        instance: inst.index,
        setting,
        metrics: compute_metrics(&records, &inst.instance, sim.penalty_convention),
        skipped: matrix.runs() - records.len(),
        records,
    }
}

/// Simulates every setting on every instance. Cells are spread over the
/// current rayon pool and returned in (instance, setting) order.
pub fn simulate_cells(
    instances: &[ExperimentInstance],
    settings: &[Setting],
    cfg: &ExperimentConfig,
) -> (Vec<RealizationMatrix>, Vec<Cell>) {
    let sim = cfg.solver.sim_config();
    let limit = cfg.time_limit_secs.map(Duration::from_secs_f64);
    let matrices: Vec<RealizationMatrix> = instances
        .par_iter()
        .map(|e| sample_realizations(&e.instance, cfg.runs, matrix_seed(cfg.seed, e.index)))
        .collect();
    for (e, m) in instances.iter().zip(&matrices) {
        log::info!(
            "instance {}: {} stations, matrix {:016x}",
            e.index,
            e.instance.graph.num_stations(),
            m.fingerprint()
        );
    }
    let jobs: Vec<(usize, Setting)> = (0..instances.len())
        .flat_map(|i| settings.iter().map(move |&s| (i, s)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(i, s)| run_cell(s, &instances[i], &matrices[i], &sim, limit))
        .collect();
    (matrices, cells)
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

struct Table {
    buf: Vec<u8>,
}

impl Table {
    fn new(kind: &str, header: &[&str]) -> Result<(Self, csv::Writer<Vec<u8>>), csv::Error> {
        let comment = format!("# mscps {kind} v{FORMAT_VERSION}\n");
        let mut w = csv::Writer::from_writer(comment.into_bytes());
        w.write_record(header)?;
        Ok((Self { buf: Vec::new() }, w))
    }

    fn finish(mut self, w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, ExperimentError> {
        self.buf = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(self.buf)
    }
}

const RUNS_HEADER: [&str; 9] = [
    "instance",
    "setting",
    "run",
    "position",
    "agent",
    "t0",
    "search_time",
    "success",
    "visited",
];

pub fn runs_csv(instances: &[ExperimentInstance], cells: &[Cell]) -> Result<Vec<u8>, ExperimentError> {
    let (t, mut w) = Table::new("runs", &RUNS_HEADER)?;
    for c in cells {
        let inst = &instances[c.instance].instance;
        for (run, rec) in c.records.iter().enumerate() {
            for (pos, o) in rec.agents.iter().enumerate() {
                let a = inst.agent(pos);
                w.write_record([
                    c.instance.to_string(),
                    c.setting.to_string(),
                    run.to_string(),
                    pos.to_string(),
                    a.id.to_string(),
                    fmt_f(a.t0),
                    fmt_f(o.search_time),
                    u8::from(o.success).to_string(),
                    o.visited.len().to_string(),
                ])?;
            }
        }
    }
    t.finish(w)
}

const SUMMARY_HEADER: [&str; 16] = [
    "instance",
    "setting",
    "agents",
    "stations",
    "runs",
    "skipped",
    "alpha_hat",
    "rho_hat",
    "all_success",
    "t_hat",
    "t_max",
    "t_min",
    "rho_min",
    "rho_max",
    "beta_global",
    "matrix",
];

pub fn summary_csv(
    instances: &[ExperimentInstance],
    matrices: &[RealizationMatrix],
    cells: &[Cell],
) -> Result<Vec<u8>, ExperimentError> {
    let (t, mut w) = Table::new("summary", &SUMMARY_HEADER)?;
    for c in cells {
        let inst = &instances[c.instance].instance;
        let m = &c.metrics;
        w.write_record([
            c.instance.to_string(),
            c.setting.to_string(),
            inst.num_agents().to_string(),
            inst.graph.num_stations().to_string(),
            c.records.len().to_string(),
            c.skipped.to_string(),
            fmt_f(m.alpha_hat),
            fmt_f(m.rho_hat),
            fmt_f(m.all_success),
            fmt_f(m.t_hat),
            fmt_f(m.t_max),
            fmt_f(m.t_min),
            fmt_f(m.rho_min),
            fmt_f(m.rho_max),
            fmt_f(inst.beta_global),
            format!("{:016x}", matrices[c.instance].fingerprint()),
        ])?;
    }
    t.finish(w)
}

pub fn positions_csv(instances: &[ExperimentInstance], cells: &[Cell]) -> Result<Vec<u8>, ExperimentError> {
    let (t, mut w) = Table::new(
        "positions",
        &[
            "instance",
            "setting",
            "position",
            "agent",
            "t0",
            "alpha_hat_i",
            "rho_hat_i",
            "t_hat_i",
        ],
    )?;
    for c in cells {
        let inst = &instances[c.instance].instance;
        for pos in 0..inst.num_agents() {
            let a = inst.agent(pos);
            w.write_record([
                c.instance.to_string(),
                c.setting.to_string(),
                pos.to_string(),
                a.id.to_string(),
                fmt_f(a.t0),
                fmt_f(c.metrics.alpha_hat_i[pos]),
                fmt_f(c.metrics.rho_hat_i[pos]),
                fmt_f(c.metrics.t_hat_i[pos]),
            ])?;
        }
    }
    t.finish(w)
}

/// `100 * (alpha - alpha_ref) / alpha_ref`; zero when both vanish.
pub fn delta_percent(alpha: f64, alpha_ref: f64) -> f64 {
    if alpha_ref == 0.0 {
        if alpha == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (alpha - alpha_ref) / alpha_ref
    }
}

pub fn comparison_csv(cells: &[Cell], reference: Setting) -> Result<Vec<u8>, ExperimentError> {
    let (t, mut w) = Table::new(
        "comparison",
        &[
            "instance",
            "setting",
            "reference",
            "alpha_hat",
            "alpha_ref",
            "delta_pct",
        ],
    )?;
    for c in cells {
        let Some(r) = cells
            .iter()
            .find(|r| r.instance == c.instance && r.setting == reference)
        else {
            continue;
        };
        w.write_record([
            c.instance.to_string(),
            c.setting.to_string(),
            reference.to_string(),
            fmt_f(c.metrics.alpha_hat),
            fmt_f(r.metrics.alpha_hat),
            fmt_f(delta_percent(c.metrics.alpha_hat, r.metrics.alpha_hat)),
        ])?;
    }
    t.finish(w)
}

#[derive(Debug, Serialize)]
struct InstanceMeta {
    index: usize,
    seed: u64,
    matrix_seed: u64,
    matrix: String,
    agents: usize,
    stations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<GenParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct GeneratorMeta {
    availability_law: &'static str,
    concentration: f64,
    placement: &'static str,
}

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    format_version: u32,
    name: &'a str,
    seed: u64,
    runs: usize,
    settings: Vec<String>,
    reference: String,
    beta_global: f64,
    budget: f64,
    penalty: f64,
    speed_kmh: f64,
    solver: &'a SolverConfig,
    generator: GeneratorMeta,
    instances: Vec<InstanceMeta>,
}

pub fn metadata_json(
    cfg: &ExperimentConfig,
    instances: &[ExperimentInstance],
    matrices: &[RealizationMatrix],
) -> Result<Vec<u8>, ConfigError> {
    let meta = Metadata {
        format_version: FORMAT_VERSION,
        name: &cfg.name,
        seed: cfg.seed,
        runs: cfg.runs,
        settings: cfg.parsed_settings()?.iter().map(|s| s.to_string()).collect(),
        reference: cfg.reference_setting()?.to_string(),
        beta_global: cfg.base.beta_global,
        budget: cfg.base.budget,
        penalty: cfg.base.penalty,
        speed_kmh: cfg.base.speed_kmh,
        solver: &cfg.solver,
        generator: GeneratorMeta {
            availability_law: "beta",
            concentration: BETA_CONCENTRATION,
            placement:
                "uniform disc of radius search_radius + start_radius, stations outside every search radius dropped",
        },
        instances: instances
            .iter()
            .zip(matrices)
            .map(|(e, m)| InstanceMeta {
                index: e.index,
                seed: e.seed,
                matrix_seed: m.seed(),
                matrix: format!("{:016x}", m.fingerprint()),
                agents: e.instance.num_agents(),
                stations: e.instance.graph.num_stations(),
                params: e.params.clone(),
                source: e.source.clone(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata always serializes");
    text.push('\n');
    Ok(text.into_bytes())
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, ExperimentError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|source| ExperimentError::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub instances: Vec<ExperimentInstance>,
    pub matrices: Vec<RealizationMatrix>,
    pub cells: Vec<Cell>,
    pub files: Vec<PathBuf>,
}

/// Runs `cfg` and writes `runs.csv`, `summary.csv`, `positions.csv`,
/// `comparison.csv` and `metadata.json` into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<ExperimentOutput, ExperimentError> {
    cfg.validate()?;
    let settings = cfg.parsed_settings()?;
    let reference = cfg.reference_setting()?;
    let instances = build_instances(cfg)?;
    log::info!(
        "{}: {} instances x {} settings x {} runs",
        cfg.name,
        instances.len(),
        settings.len(),
        cfg.runs
    );
    let (matrices, cells) = simulate_cells(&instances, &settings, cfg);

    fs::create_dir_all(out).map_err(|source| ExperimentError::Write {
        path: out.to_path_buf(),
        source,
    })?;
    let files = vec![
        write(out, "runs.csv", &runs_csv(&instances, &cells)?)?,
        write(out, "summary.csv", &summary_csv(&instances, &matrices, &cells)?)?,
        write(out, "positions.csv", &positions_csv(&instances, &cells)?)?,
        write(out, "comparison.csv", &comparison_csv(&cells, reference)?)?,
        write(out, "metadata.json", &metadata_json(cfg, &instances, &matrices)?)?,
    ];
    Ok(ExperimentOutput {
        instances,
        matrices,
        cells,
        files,
    })
}

/// One row of a global-penalty sensitivity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta_global: f64,
    pub instance: usize,
    pub setting: Setting,
    pub metrics: Metrics,
}

/// Reruns the configured settings that react to the global penalty for every
/// value of `beta_grid` (falling back to `cfg.beta_grid`) and writes
/// `sweep.csv` into `out`.
pub fn sensitivity_sweep(
    cfg: &ExperimentConfig,
    beta_grid: &[f64],
    out: &Path,
) -> Result<(Vec<SweepRow>, PathBuf), ExperimentError> {
    cfg.validate()?;
    let grid = if beta_grid.is_empty() {
        &cfg.beta_grid[..]
    } else {
        beta_grid
    };
    if grid.is_empty() {
        return Err(ConfigError::EmptyBetaGrid.into());
    }
    let settings: Vec<Setting> = cfg
        .parsed_settings()?
        .into_iter()
        .filter(|s| s.uses_global_penalty())
        .collect();
    let base = build_instances(cfg)?;
    let mut rows = Vec::new();
    for &beta in grid {
        let instances: Vec<ExperimentInstance> = base
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.instance.beta_global = beta;
                e
            })
            .collect();
        let (_, cells) = simulate_cells(&instances, &settings, cfg);
        rows.extend(cells.into_iter().map(|c| SweepRow {
            beta_global: beta,
            instance: c.instance,
            setting: c.setting,
            metrics: c.metrics,
        }));
    }

    let (t, mut w) = Table::new(
        "sweep",
        &[
            "beta_global",
            "instance",
            "setting",
            "alpha_hat",
            "rho_hat",
            "rho_min",
            "t_hat",
            "t_max",
        ],
    )?;
    for r in &rows {
        w.write_record([
            fmt_f(r.beta_global),
            r.instance.to_string(),
            r.setting.to_string(),
            fmt_f(r.metrics.alpha_hat),
            fmt_f(r.metrics.rho_hat),
            fmt_f(r.metrics.rho_min),
            fmt_f(r.metrics.t_hat),
            fmt_f(r.metrics.t_max),
        ])?;
    }
    let bytes = t.finish(w)?;
    fs::create_dir_all(out).map_err(|source| ExperimentError::Write {
        path: out.to_path_buf(),
        source,
    })?;
    let path = write(out, "sweep.csv", &bytes)?;
    Ok((rows, path))
}

/// Mean, median, max, min and quartiles of `values`, linear interpolation
/// between order statistics.
pub fn describe(values: &[f64]) -> Option<[f64; 6]> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = p * (v.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    Some([mean, q(0.5), v[v.len() - 1], v[0], q(0.25), q(0.75)])
}

/// Human-readable table of the relative differences per setting.
pub fn comparison_report(cells: &[Cell], reference: Setting) -> String {
    let mut settings: Vec<Setting> = cells.iter().map(|c| c.setting).collect();
    settings.dedup();
    settings.sort();
    settings.dedup();
    let mut s = String::new();
    let _ = writeln!(s, "delta [%] vs {reference}: mean median max min q1 q3");
    for setting in settings.into_iter().filter(|&x| x != reference) {
        let deltas: Vec<f64> = cells
            .iter()
            .filter(|c| c.setting == setting)
            .filter_map(|c| {
                cells
                    .iter()
                    .find(|r| r.instance == c.instance && r.setting == reference)
                    .map(|r| delta_percent(c.metrics.alpha_hat, r.metrics.alpha_hat))
            })
            .collect();
        if let Some(d) = describe(&deltas) {
            let _ = writeln!(
                s,
                "{setting:>9}: {:8.2} {:8.2} {:8.2} {:8.2} {:8.2} {:8.2}",
                d[0], d[1], d[2], d[3], d[4], d[5]
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            runs: 5,
            settings: vec!["DEC".into(), "DEC-I-c".into()],
            base: GenParams {
                agents: 2,
                search_radius: 800.0,
                start_radius: 100.0,
                ..GenParams::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn config_errors_before_running() {
        let mut cfg = small_config();
        cfg.settings.clear();
        assert!(matches!(cfg.validate(), Err(ConfigError::NoSettings)));
        cfg.settings = vec!["DEC".into(), "NOPE".into()];
        assert!(matches!(cfg.validate(), Err(ConfigError::UnknownSetting(_))));
        cfg.settings = vec!["DEC".into()];
        cfg.reference = Some("OFF".into());
        assert!(matches!(cfg.validate(), Err(ConfigError::Reference(_))));
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"setings": []}"#).unwrap_err();
        assert!(err.to_string().contains("setings"));
    }

    #[test]
    fn delta_and_describe() {
        assert_eq!(delta_percent(90.0, 100.0), -10.0);
        assert_eq!(delta_percent(0.0, 0.0), 0.0);
        let d = describe(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(d, [2.5, 2.5, 4.0, 1.0, 1.75, 3.25]);
        assert!(describe(&[]).is_none());
    }

    #[test]
    fn settings_share_matrices_and_rows_line_up() {
        let cfg = small_config();
        let instances = build_instances(&cfg).unwrap();
        let settings = cfg.parsed_settings().unwrap();
        let (matrices, cells) = simulate_cells(&instances, &settings, &cfg);
        assert_eq!(matrices.len(), 1);
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].setting, Setting::Dec);
        assert!(cells.iter().all(|c| c.records.len() == 5 && c.skipped == 0));
        let runs = String::from_utf8(runs_csv(&instances, &cells).unwrap()).unwrap();
        assert!(runs.starts_with("# mscps runs v1\ninstance,setting,run,"));
        assert_eq!(runs.lines().count(), 2 + 2 * 5 * 2);
    }

    #[test]
    fn zero_time_limit_skips_runs() {
        let mut cfg = small_config();
        cfg.time_limit_secs = Some(0.0);
        let instances = build_instances(&cfg).unwrap();
        let (_, cells) = simulate_cells(&instances, &[Setting::Dec], &cfg);
        // The first run always goes through.
        assert!(!cells[0].records.is_empty());
        assert_eq!(cells[0].records.len() + cells[0].skipped, 5);
    }
}

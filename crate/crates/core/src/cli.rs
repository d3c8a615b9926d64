//! Command-line front end. Every subcommand merges defaults, an optional JSON
//! config file and explicit flags (flags win), writes its artifacts into
//! `--out`, and drops the effective configuration next to them as
//! `config.json`.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assign::Strategy;
use crate::experiment::{
    self, derive_seed, prepare, prepare_table, render_svg_charts, render_tables,
    run_prepared_traced, topology_for, ExperimentConfig, ExperimentError, PreparedScenario,
    ScenarioInput, Stream, SweepGrid, SweepRow,
};
use crate::io::{write_atomic, write_atomic_with};
use crate::meshgen::{DEFAULT_COVERAGE_M, DEFAULT_THRESHOLD_K};
use crate::par::{self, Execution};
use crate::payment::{HopPolicy, Sat, TraceLog, DEFAULT_AMOUNTS};
use crate::scenario::{
    distances, generate_synthetic, parse_scenario, resample, BoundingBox, DistanceTable, Scenario,
    SyntheticParams, DEFAULT_SYNTHETIC_SIDE_M,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "meshpay",
    version,
    about = "Offline payment-channel simulations over mobile mesh networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resample a mobility trace and precompute pairwise distances.
    Ingest(IngestArgs),
    /// Generate a random-waypoint scenario.
    Synth(SynthArgs),
    /// Build the mobility-aware mesh and its connectivity report.
    Mesh(MeshArgs),
    /// Derive a channel topology from the mesh.
    Assign(AssignArgs),
    /// Simulate one configuration on one scenario.
    Run(RunArgs),
    /// Sweep a parameter grid over a set of scenarios.
    Sweep(SweepArgs),
    /// Summarize a results CSV into tables, JSON and charts.
    Report(ReportArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SourceArgs {
    /// Scenario file (`node time x y` rows).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Precomputed distance CSV, used instead of a scenario.
    #[arg(long)]
    pub distances: Option<PathBuf>,
    /// Sampling interval in seconds.
    #[arg(long)]
    pub interval: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct MeshFlags {
    /// Radio coverage in meters.
    #[arg(long = "coverage-d")]
    pub coverage_d: Option<f64>,
    /// Minimum number of epochs a pair must be in range.
    #[arg(long = "threshold-k")]
    pub threshold_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of nodes.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scenario duration in seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Side of the square area in meters.
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long = "speed-min")]
    pub speed_min: Option<f64>,
    #[arg(long = "speed-max")]
    pub speed_max: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub mesh: MeshFlags,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct AssignArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub mesh: MeshFlags,
    /// cds, ust or baseline.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub mesh: MeshFlags,
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    /// Total investment in satoshi, split equally over all channels.
    #[arg(long, value_delimiter = ',')]
    pub investment: Option<Vec<Sat>>,
    #[arg(long = "payments-per-epoch", value_delimiter = ',')]
    pub payments_per_epoch: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Allow hops outside the sender's mesh component.
    #[arg(long = "endpoints-only")]
    pub endpoints_only: bool,
    /// Also write the per-payment trace log.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Scenario files; without any, synthetic scenarios are generated.
    #[arg(long, value_delimiter = ',')]
    pub scenario: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub interval: Option<f64>,
    #[command(flatten)]
    pub mesh: MeshFlags,
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    #[arg(long, value_delimiter = ',')]
    pub investment: Option<Vec<Sat>>,
    #[arg(long = "payments-per-epoch", value_delimiter = ',')]
    pub payments_per_epoch: Option<Vec<usize>>,
    /// Node counts for synthetic scenarios.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
    /// Synthetic scenarios generated per node count.
    #[arg(long = "scenarios-per-size")]
    pub scenarios_per_size: Option<usize>,
    /// Side of the synthetic area in meters.
    #[arg(long)]
    pub side: Option<f64>,
    /// Base seed; scenario i runs with seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long = "endpoints-only")]
    pub endpoints_only: bool,
    /// Also render SVG charts.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Results CSV produced by `sweep`.
    #[arg(long)]
    pub results: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Config-file schema and merged effective configuration. Unset fields fall
/// back to the defaults in [`Settings::defaults`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    pub scenario: Option<PathBuf>,
    pub scenarios: Option<Vec<PathBuf>>,
    pub distances: Option<PathBuf>,
    pub results: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub interval: Option<f64>,
    pub duration: Option<f64>,
    pub coverage_d: Option<f64>,
    pub threshold_k: Option<usize>,
    pub strategy: Option<Vec<Strategy>>,
    pub investment: Option<Vec<Sat>>,
    pub payments_per_epoch: Option<Vec<usize>>,
    pub nodes: Option<Vec<usize>>,
    pub scenarios_per_size: Option<usize>,
    pub side: Option<f64>,
    pub speed_min: Option<f64>,
    pub speed_max: Option<f64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub amounts: Option<Vec<Sat>>,
    pub hop_policy: Option<HopPolicy>,
    pub trace: Option<bool>,
    pub svg: Option<bool>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Settings { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Settings {
    pub fn defaults() -> Self {
        Settings {
            out: Some(PathBuf::from("out")),
            interval: Some(600.0),
            duration: Some(21_600.0),
            coverage_d: Some(DEFAULT_COVERAGE_M),
            threshold_k: Some(DEFAULT_THRESHOLD_K),
            strategy: Some(Strategy::ALL.to_vec()),
            investment: Some(vec![100_000]),
            payments_per_epoch: Some((2..=10).map(|n| n * 10).collect()),
            nodes: Some(vec![100]),
            scenarios_per_size: Some(10),
            side: Some(DEFAULT_SYNTHETIC_SIDE_M),
            speed_min: Some(0.5),
            speed_max: Some(2.0),
            seed: Some(42),
            amounts: Some(DEFAULT_AMOUNTS.to_vec()),
            hop_policy: Some(HopPolicy::SameComponent),
            trace: Some(false),
            svg: Some(false),
            ..Settings::default()
        }
    }

    /// Field-wise overlay: values set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        overlay!(
            self,
            top,
            scenario,
            scenarios,
            distances,
            results,
            out,
            interval,
            duration,
            coverage_d,
            threshold_k,
            strategy,
            investment,
            payments_per_epoch,
            nodes,
            scenarios_per_size,
            side,
            speed_min,
            speed_max,
            seed,
            jobs,
            amounts,
            hop_policy,
            trace,
            svg
        )
    }

    pub fn load(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input {
            path: path.into(),
            msg: e.to_string(),
        })
    }

    /// `defaults <- config file <- flags`.
    pub fn resolve(config: Option<&Path>, flags: Settings) -> Result<Settings, CliError> {
        let file = match config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        Ok(Settings::defaults().overlay(file).overlay(flags))
    }

    fn out(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    fn one<T: Copy + std::fmt::Debug>(list: &Option<Vec<T>>, name: &str) -> Result<T, CliError> {
        match list.as_deref() {
            Some([v]) => Ok(*v),
            Some(vs) => Err(CliError::Usage(format!(
                "--{name} takes exactly one value here, got {vs:?}"
            ))),
            None => Err(CliError::Usage(format!("--{name} is required"))),
        }
    }

    fn interval(&self) -> f64 {
        self.interval.unwrap_or(600.0)
    }

    fn coverage(&self) -> f64 {
        self.coverage_d.unwrap_or(DEFAULT_COVERAGE_M)
    }

    fn threshold(&self) -> usize {
        self.threshold_k.unwrap_or(DEFAULT_THRESHOLD_K)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(42)
    }
}

/// Result of a dispatched command: `ok` is false when some run failed even
/// though artifacts were written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub ok: bool,
    pub artifacts: Vec<PathBuf>,
}

pub fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Synth(a) => synth(a),
        Command::Mesh(a) => mesh(a),
        Command::Assign(a) => assign(a),
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
    }
}

fn source_settings(s: SourceArgs) -> Settings {
    Settings {
        scenario: s.scenario,
        distances: s.distances,
        interval: s.interval,
        ..Settings::default()
    }
}

fn mesh_settings(base: Settings, m: MeshFlags) -> Settings {
    Settings {
        coverage_d: m.coverage_d,
        threshold_k: m.threshold_k,
        ..base
    }
}

fn with_common(base: Settings, c: &CommonArgs) -> Result<Settings, CliError> {
    Settings::resolve(
        c.config.as_deref(),
        Settings {
            out: c.out.clone(),
            ..base
        },
    )
}

fn read_scenario(path: &Path) -> Result<Scenario, CliError> {
    let f = File::open(path).map_err(io_err(path))?;
    parse_scenario(BufReader::new(f)).map_err(|e| CliError::Input {
        path: path.into(),
        msg: e.to_string(),
    })
}

fn read_distances(path: &Path) -> Result<DistanceTable, CliError> {
    let f = File::open(path).map_err(io_err(path))?;
    DistanceTable::read_csv(BufReader::new(f)).map_err(|e| CliError::Input {
        path: path.into(),
        msg: e.to_string(),
    })
}

fn scenario_id(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

/// Loads the configured source and builds the mesh-side state.
fn prepared_source(s: &Settings) -> Result<PreparedScenario, CliError> {
    let mode = Execution::default();
    if let Some(path) = &s.distances {
        let table = read_distances(path)?;
        return Ok(prepare_table(
            scenario_id(path),
            &table,
            s.coverage(),
            s.threshold(),
            mode,
        )?);
    }
    let Some(path) = &s.scenario else {
        return Err(CliError::Usage(
            "one of --scenario or --distances is required".into(),
        ));
    };
    let scenario = read_scenario(path)?;
    Ok(prepare(
        scenario_id(path),
        &scenario,
        s.coverage(),
        s.threshold(),
        s.interval(),
        mode,
    )?)
}

struct Artifacts {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Artifacts {
    fn new(s: &Settings) -> Result<Self, CliError> {
        let dir = s.out();
        std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let mut a = Artifacts {
            dir,
            written: Vec::new(),
        };
        let json = serde_json::to_string_pretty(s).expect("settings serialize");
        a.write("config.json", json.as_bytes())?;
        Ok(a)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let p = self.path(name);
        write_atomic(&p, bytes).map_err(io_err(&p))?;
        self.written.push(p);
        Ok(())
    }

    fn write_with(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let p = self.path(name);
        write_atomic_with(&p, |w| fill(w)).map_err(io_err(&p))?;
        self.written.push(p);
        Ok(())
    }

    fn done(self, ok: bool) -> Outcome {
        Outcome {
            ok,
            artifacts: self.written,
        }
    }
}

fn config_line(s: &Settings) -> String {
    serde_json::to_string(s).expect("settings serialize")
}

fn ingest(a: IngestArgs) -> Result<Outcome, CliError> {
    let s = with_common(source_settings(a.source), &a.common)?;
    let Some(path) = s.scenario.clone() else {
        return Err(CliError::Usage("--scenario is required".into()));
    };
    let scenario = read_scenario(&path)?;
    let frames = resample(&scenario, s.interval()).map_err(ExperimentError::from)?;
    let table = distances(&frames).map_err(ExperimentError::from)?;
    let mut out = Artifacts::new(&s)?;
    out.write_with("frames.csv", |w| {
        writeln!(w, "node,time,x,y")?;
        for node in 0..scenario.nodes() {
            for f in &frames {
                let (x, y) = f.positions[node];
                writeln!(w, "{node},{},{x},{y}", f.time)?;
            }
        }
        Ok(())
    })?;
    out.write_with("distances.csv", |w| table.write_csv(w))?;
    println!(
        "{}: {} nodes, {} frames, {} distance rows",
        scenario_id(&path),
        scenario.nodes(),
        frames.len(),
        table.pair_count() * table.epochs()
    );
    Ok(out.done(true))
}

fn synth_params(s: &Settings, nodes: usize, seed: u64) -> SyntheticParams {
    let side = s.side.unwrap_or(DEFAULT_SYNTHETIC_SIDE_M);
    SyntheticParams {
        nodes,
        duration: s.duration.unwrap_or(21_600.0),
        bbox: BoundingBox::square(side),
        speed: (s.speed_min.unwrap_or(0.5), s.speed_max.unwrap_or(2.0)),
        seed,
    }
}

fn synth(a: SynthArgs) -> Result<Outcome, CliError> {
    let flags = Settings {
        nodes: a.nodes,
        seed: a.seed,
        duration: a.duration,
        side: a.side,
        speed_min: a.speed_min,
        speed_max: a.speed_max,
        ..Settings::default()
    };
    let s = with_common(flags, &a.common)?;
    let nodes = Settings::one(&s.nodes, "nodes")?;
    let params = synth_params(&s, nodes, s.seed());
    let scenario = generate_synthetic(&params).map_err(ExperimentError::from)?;
    let mut out = Artifacts::new(&s)?;
    let text = format!("# generator: {params}\n{}", scenario.to_text());
    out.write("scenario.txt", text.as_bytes())?;
    println!("synthetic scenario: {params}");
    Ok(out.done(true))
}

fn mesh(a: MeshArgs) -> Result<Outcome, CliError> {
    let s = with_common(mesh_settings(source_settings(a.source), a.mesh), &a.common)?;
    let prepared = prepared_source(&s)?;
    let mut out = Artifacts::new(&s)?;
    let g = &prepared.mesh.graph;
    let header = [
        ("scenario", prepared.id.clone()),
        ("coverage_d", s.coverage().to_string()),
        ("threshold_k", s.threshold().to_string()),
        ("mesh", g.fingerprint()),
        ("config", config_line(&s)),
    ];
    out.write(
        "mesh.edges",
        crate::graph::write_edge_list(g, &header).as_bytes(),
    )?;
    let report = serde_json::json!({
        "scenario": prepared.id,
        "nodes": g.vertex_count(),
        "edges": g.edge_count(),
        "screen": prepared.screen,
        "config": s,
    });
    out.write(
        "screen.json",
        serde_json::to_string_pretty(&report)
            .expect("json")
            .as_bytes(),
    )?;
    println!(
        "{}: {} nodes, {} mesh links, {}",
        prepared.id,
        g.vertex_count(),
        g.edge_count(),
        prepared.screen.describe()
    );
    Ok(out.done(true))
}

fn assign(a: AssignArgs) -> Result<Outcome, CliError> {
    let flags = Settings {
        strategy: a.strategy,
        seed: a.seed,
        ..mesh_settings(source_settings(a.source), a.mesh)
    };
    let s = with_common(flags, &a.common)?;
    let strategy = Settings::one(&s.strategy, "strategy")?;
    let prepared = prepared_source(&s)?;
    let (topo, summary) = topology_for(&prepared, strategy, s.seed())?;
    let mut out = Artifacts::new(&s)?;
    let mut text = format!("# config: {}\n", config_line(&s));
    text.push_str(&topo.to_edge_list());
    out.write("topology.edges", text.as_bytes())?;
    let doc = serde_json::json!({ "scenario": prepared.id, "strategy": strategy, "report": summary, "config": s });
    out.write(
        "topology.json",
        serde_json::to_string_pretty(&doc).expect("json").as_bytes(),
    )?;
    println!(
        "{} {}: {} channels, degree variance {:.3}, mean closeness {:.4}, diameter {}",
        prepared.id,
        strategy,
        summary.edges,
        summary.degree_variance,
        summary.mean_closeness,
        summary.diameter
    );
    Ok(out.done(true))
}

fn hop_policy(endpoints_only: bool) -> Option<HopPolicy> {
    endpoints_only.then_some(HopPolicy::EndpointsOnly)
}

fn run(a: RunArgs) -> Result<Outcome, CliError> {
    let flags = Settings {
        strategy: a.strategy,
        investment: a.investment,
        payments_per_epoch: a.payments_per_epoch,
        seed: a.seed,
        hop_policy: hop_policy(a.endpoints_only),
        trace: a.trace.then_some(true),
        ..mesh_settings(source_settings(a.source), a.mesh)
    };
    let s = with_common(flags, &a.common)?;
    let config = ExperimentConfig {
        strategy: Settings::one(&s.strategy, "strategy")?,
        payments_per_epoch: Settings::one(&s.payments_per_epoch, "payments-per-epoch")?,
        total_investment: Settings::one(&s.investment, "investment")?,
        coverage_d: s.coverage(),
        threshold_k: s.threshold(),
        epoch_interval: s.interval(),
        seed: s.seed(),
        amounts: s
            .amounts
            .clone()
            .unwrap_or_else(|| DEFAULT_AMOUNTS.to_vec()),
        hop_policy: s.hop_policy.unwrap_or_default(),
    };
    config.validate()?;
    let prepared = prepared_source(&s)?;
    let (topo, summary) = topology_for(&prepared, config.strategy, config.seed)?;
    let mut out = Artifacts::new(&s)?;
    let mut log = TraceLog::new(Vec::new()).map_err(io_err(&out.path("trace.csv")))?;
    let result = run_prepared_traced(&config, &prepared, &topo, &summary, &mut log)?;
    out.write_with("result.csv", |w| {
        experiment::write_results_csv(w, [&result]).map_err(std::io::Error::other)
    })?;
    if s.trace == Some(true) {
        out.write("trace.csv", &log.into_inner())?;
    }
    print_row(&result);
    Ok(out.done(true))
}

fn print_row(r: &experiment::RunResult) {
    println!(
        "{} {} n={} inv={} channels={} success={}/{} ({:.2}%) fail_capacity={} fail_mesh={}",
        r.scenario,
        r.strategy,
        r.n_per_epoch,
        r.investment,
        r.channels,
        r.success,
        r.total,
        100.0 * r.success_rate,
        r.fail_capacity,
        r.fail_mesh
    );
}

/// Scenario set for a sweep: listed files, or synthetic scenarios per node
/// count seeded from the base seed.
pub fn sweep_scenarios(s: &Settings, mode: Execution) -> Result<Vec<ScenarioInput>, CliError> {
    if let Some(files) = s.scenarios.as_ref().filter(|f| !f.is_empty()) {
        return files
            .iter()
            .map(|p| {
                Ok(ScenarioInput {
                    id: scenario_id(p),
                    scenario: read_scenario(p)?,
                })
            })
            .collect();
    }
    let nodes = s.nodes.clone().unwrap_or_else(|| vec![100]);
    let per = s.scenarios_per_size.unwrap_or(10);
    let specs: Vec<(usize, usize)> = nodes
        .iter()
        .flat_map(|&n| (0..per).map(move |i| (n, i)))
        .collect();
    let base = s.seed();
    par::map_slice(&specs, mode, |&(n, i)| {
        let params = synth_params(
            s,
            n,
            derive_seed(base, Stream::Scenario, &[n as u64, i as u64]),
        );
        generate_synthetic(&params)
            .map(|scenario| ScenarioInput {
                id: format!("rwp-{n}-{i:02}"),
                scenario,
            })
            .map_err(|e| CliError::Experiment(e.into()))
    })
    .into_iter()
    .collect()
}

pub fn sweep_grid(s: &Settings) -> SweepGrid {
    SweepGrid {
        strategies: s.strategy.clone().unwrap_or_else(|| Strategy::ALL.to_vec()),
        payments_per_epoch: s.payments_per_epoch.clone().unwrap_or_default(),
        investments: s.investment.clone().unwrap_or_default(),
        coverage_d: s.coverage(),
        threshold_k: s.threshold(),
        epoch_interval: s.interval(),
        seed_base: s.seed(),
        amounts: s
            .amounts
            .clone()
            .unwrap_or_else(|| DEFAULT_AMOUNTS.to_vec()),
        hop_policy: s.hop_policy.unwrap_or_default(),
    }
}

fn sweep(a: SweepArgs) -> Result<Outcome, CliError> {
    let flags = Settings {
        scenarios: a.scenario,
        interval: a.interval,
        strategy: a.strategy,
        investment: a.investment,
        payments_per_epoch: a.payments_per_epoch,
        nodes: a.nodes,
        scenarios_per_size: a.scenarios_per_size,
        side: a.side,
        seed: a.seed,
        jobs: a.jobs,
        hop_policy: hop_policy(a.endpoints_only),
        svg: a.svg.then_some(true),
        ..mesh_settings(Settings::default(), a.mesh)
    };
    let s = with_common(flags, &a.common)?;
    let grid = sweep_grid(&s);
    grid.validate()?;
    let mut out = Artifacts::new(&s)?;
    let results_path = out.path("results.csv");

    let table = par::with_jobs(s.jobs, || -> Result<_, CliError> {
        let mode = Execution::default();
        let scenarios = sweep_scenarios(&s, mode)?;
        let mut table = None;
        write_atomic_with(&results_path, |w| {
            let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            csv.write_record(experiment::RESULTS_HEADER)?;
            let mut write_err: Option<csv::Error> = None;
            let swept =
                experiment::sweep_with(&grid, &scenarios, mode, |row: &SweepRow| match row {
                    Ok(r) => {
                        print_row(r);
                        if let Err(e) = csv
                            .serialize(r)
                            .and_then(|()| csv.flush().map_err(csv::Error::from))
                        {
                            write_err.get_or_insert(e);
                        }
                    }
                    Err(f) => eprintln!(
                        "{} {} n={} inv={}: {}",
                        f.scenario, f.strategy, f.n_per_epoch, f.investment, f.error
                    ),
                });
            if let Some(e) = write_err {
                return Err(e.into());
            }
            table = Some(swept.map_err(|e| std::io::Error::other(e.to_string()))?);
            Ok(())
        })
        .map_err(io_err(&results_path))?;
        Ok(table.expect("sweep table"))
    })?;
    out.written.push(results_path);

    let failures: Vec<_> = table.failures().cloned().collect();
    out.write_with("errors.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        if failures.is_empty() {
            csv.write_record([
                "scenario",
                "strategy",
                "n_per_epoch",
                "investment",
                "seed",
                "error",
            ])?;
        }
        for f in &failures {
            csv.serialize(f)?;
        }
        csv.flush()
    })?;
    let rows: Vec<_> = table.results().cloned().collect();
    if !rows.is_empty() {
        write_summary(&mut out, &rows, &s)?;
    }
    let total = table.rows.len();
    println!("sweep: {} runs, {} failed", total, failures.len());
    Ok(out.done(failures.is_empty()))
}

fn write_summary(
    out: &mut Artifacts,
    rows: &[experiment::RunResult],
    s: &Settings,
) -> Result<(), CliError> {
    let summary = experiment::report(rows)?;
    let doc = serde_json::json!({ "summary": summary, "config": s });
    out.write(
        "summary.json",
        serde_json::to_string_pretty(&doc).expect("json").as_bytes(),
    )?;
    let tables = render_tables(&summary);
    out.write("tables.txt", tables.as_bytes())?;
    if s.svg == Some(true) {
        for (stem, svg) in render_svg_charts(&summary) {
            out.write(&format!("{stem}.svg"), svg.as_bytes())?;
        }
    }
    print!("{tables}");
    Ok(())
}

fn report(a: ReportArgs) -> Result<Outcome, CliError> {
    let flags = Settings {
        results: a.results,
        svg: a.svg.then_some(true),
        ..Settings::default()
    };
    let s = with_common(flags, &a.common)?;
    let Some(path) = s.results.clone() else {
        return Err(CliError::Usage("--results is required".into()));
    };
    let f = File::open(&path).map_err(io_err(&path))?;
    let rows = experiment::read_results_csv(BufReader::new(f)).map_err(|e| CliError::Input {
        path: path.clone(),
        msg: e.to_string(),
    })?;
    let mut out = Artifacts::new(&s)?;
    write_summary(&mut out, &rows, &s)?;
    Ok(out.done(true))
}

//! Mobility traces: ingest, fixed-interval resampling, pairwise distances, and
//! a random-waypoint generator for self-contained scenarios.

use std::fmt::{self, Write as _};
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::par::{self, Execution};

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("time {t} outside [0, {duration}]")]
    OutOfRange { t: f64, duration: f64 },
    #[error("epoch {epoch} outside table of {epochs} epochs")]
    EpochOutOfRange { epoch: usize, epochs: usize },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for ScenarioError {
    fn from(e: std::io::Error) -> Self {
        ScenarioError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub node: usize,
    pub time: f64,
    pub x: f64,
    pub y: f64,
}

/// Axis-aligned box in meters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        BoundingBox {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    /// Box anchored at the origin.
    pub fn square(side: f64) -> Self {
        BoundingBox::new(0.0, 0.0, side, side)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }

    fn is_degenerate(&self) -> bool {
        !(self.max_x > self.min_x && self.max_y > self.min_y)
            || [self.min_x, self.min_y, self.max_x, self.max_y]
                .iter()
                .any(|v| !v.is_finite())
    }

    fn clamp(&self, x: f64, y: f64) -> (f64, f64) {
        (
            x.clamp(self.min_x, self.max_x),
            y.clamp(self.min_y, self.max_y),
        )
    }
}

/// One node's waypoints, sorted by strictly increasing time, starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    points: Vec<(f64, f64, f64)>,
}

impl Trace {
    fn new(points: Vec<(f64, f64, f64)>) -> Self {
        Trace { points }
    }

    /// `(time, x, y)` tuples in time order.
    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    pub fn last_time(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }

    /// Linear interpolation between bracketing waypoints; the final position
    /// is held after the last waypoint.
    pub fn position_at(&self, t: f64) -> (f64, f64) {
        let pts = &self.points;
        let idx = pts.partition_point(|p| p.0 <= t);
        if idx == 0 {
            return (pts[0].1, pts[0].2);
        }
        let (t0, x0, y0) = pts[idx - 1];
        if t0 == t || idx == pts.len() {
            return (x0, y0);
        }
        let (t1, x1, y1) = pts[idx];
        let f = (t - t0) / (t1 - t0);
        (x0 + (x1 - x0) * f, y0 + (y1 - y0) * f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    traces: Vec<Trace>,
    duration: f64,
    bbox: BoundingBox,
}

impl Scenario {
    /// Number of nodes `M`.
    pub fn nodes(&self) -> usize {
        self.traces.len()
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }

    pub fn trace(&self, node: usize) -> &Trace {
        &self.traces[node]
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn waypoints(&self) -> impl Iterator<Item = Waypoint> + '_ {
        self.traces.iter().enumerate().flat_map(|(node, tr)| {
            tr.points
                .iter()
                .map(move |&(time, x, y)| Waypoint { node, time, x, y })
        })
    }

    /// Position of `node` at time `t`.
    pub fn position_at(&self, node: usize, t: f64) -> Result<(f64, f64), ScenarioError> {
        position_at(&self.traces[node], t, self.duration)
    }

    /// Builds a scenario from waypoints in any order. The bounding box defaults
    /// to the tight box around all waypoints.
    pub fn from_waypoints(
        waypoints: impl IntoIterator<Item = Waypoint>,
        bbox: Option<BoundingBox>,
    ) -> Result<Self, ScenarioError> {
        let mut per_node: Vec<Vec<(f64, f64, f64)>> = Vec::new();
        for w in waypoints {
            if !(w.time.is_finite() && w.x.is_finite() && w.y.is_finite()) || w.time < 0.0 {
                return Err(ScenarioError::Validation(format!(
                    "node {} has a non-finite or negative entry at t={}",
                    w.node, w.time
                )));
            }
            if w.node >= per_node.len() {
                per_node.resize_with(w.node + 1, Vec::new);
            }
            per_node[w.node].push((w.time, w.x, w.y));
        }
        if per_node.is_empty() {
            return Err(ScenarioError::Validation("scenario has no nodes".into()));
        }
        let mut duration = 0.0f64;
        let mut tight = BoundingBox::new(
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for (node, pts) in per_node.iter_mut().enumerate() {
            if pts.is_empty() {
                return Err(ScenarioError::Validation(format!(
                    "node {node} has no waypoints"
                )));
            }
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            if pts[0].0 != 0.0 {
                return Err(ScenarioError::Validation(format!(
                    "node {node} has no waypoint at time 0"
                )));
            }
            if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(ScenarioError::Validation(format!(
                    "node {node} has two waypoints at time {}",
                    w[0].0
                )));
            }
            for &(t, x, y) in pts.iter() {
                duration = duration.max(t);
                tight.min_x = tight.min_x.min(x);
                tight.min_y = tight.min_y.min(y);
                tight.max_x = tight.max_x.max(x);
                tight.max_y = tight.max_y.max(y);
            }
        }
        let bbox = match bbox {
            Some(b) => {
                if let Some(node) = per_node
                    .iter()
                    .position(|pts| pts.iter().any(|&(_, x, y)| !b.contains(x, y)))
                {
                    return Err(ScenarioError::Validation(format!(
                        "node {node} leaves the bounding box"
                    )));
                }
                b
            }
            None => tight,
        };
        Ok(Scenario {
            traces: per_node.into_iter().map(Trace::new).collect(),
            duration,
            bbox,
        })
    }

    /// Writes `node time x y` rows with a `# bbox:` header. Parsing the output
    /// yields an identical scenario.
    pub fn to_text(&self) -> String {
        let b = self.bbox;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# bbox: {} {} {} {}",
            b.min_x, b.min_y, b.max_x, b.max_y
        );
        for w in self.waypoints() {
            let _ = writeln!(out, "{} {} {} {}", w.node, w.time, w.x, w.y);
        }
        out
    }
}

/// Parses rows of `node time x y`, separated by whitespace or commas. Lines
/// starting with `#` are comments, except `# bbox: min_x min_y max_x max_y`
/// which pins the bounding box. A leading `node,time,x,y` header is skipped.
pub fn parse_scenario<R: BufRead>(reader: R) -> Result<Scenario, ScenarioError> {
    let mut waypoints = Vec::new();
    let mut bbox = None;
    let mut seen_data = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("bbox:") {
                let vals = numbers(rest, lineno)?;
                if vals.len() != 4 {
                    return Err(ScenarioError::Parse {
                        line: lineno,
                        msg: "bbox needs 4 values".into(),
                    });
                }
                let b = BoundingBox::new(vals[0], vals[1], vals[2], vals[3]);
                if b.is_degenerate() {
                    return Err(ScenarioError::Validation("degenerate bounding box".into()));
                }
                bbox = Some(b);
            }
            continue;
        }
        if !seen_data && trimmed.to_ascii_lowercase().starts_with("node") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let fields = fields(trimmed);
        if fields.len() != 4 {
            return Err(ScenarioError::Parse {
                line: lineno,
                msg: format!("expected 4 fields (node time x y), found {}", fields.len()),
            });
        }
        let node = fields[0]
            .parse::<usize>()
            .map_err(|e| ScenarioError::Parse {
                line: lineno,
                msg: format!("node id {:?}: {e}", fields[0]),
            })?;
        let vals = numbers(&fields[1..].join(" "), lineno)?;
        waypoints.push(Waypoint {
            node,
            time: vals[0],
            x: vals[1],
            y: vals[2],
        });
    }
    Scenario::from_waypoints(waypoints, bbox)
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario(text.as_bytes())
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .collect()
}

fn numbers(text: &str, line: usize) -> Result<Vec<f64>, ScenarioError> {
    fields(text)
        .into_iter()
        .map(|f| {
            f.parse::<f64>().map_err(|e| ScenarioError::Parse {
                line,
                msg: format!("{f:?}: {e}"),
            })
        })
        .collect()
}

/// Interpolated position of a trace at `t`, which must lie in `[0, duration]`.
pub fn position_at(trace: &Trace, t: f64, duration: f64) -> Result<(f64, f64), ScenarioError> {
    if !(0.0..=duration).contains(&t) {
        return Err(ScenarioError::OutOfRange { t, duration });
    }
    Ok(trace.position_at(t))
}

/// Positions of every node at one sampling instant; index = node id.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionFrame {
    pub epoch_index: usize,
    pub time: f64,
    pub positions: Vec<(f64, f64)>,
}

/// Number of frames produced when sampling `duration` every `interval`.
pub fn frame_count(duration: f64, interval: f64) -> usize {
    // Guard against 21600/600 landing a hair under 36.
    ((duration / interval) + 1e-9).floor() as usize
}

/// Samples every node at `0, interval, 2*interval, ...`, yielding exactly
/// `floor(duration / interval)` frames.
pub fn resample(scenario: &Scenario, interval: f64) -> Result<Vec<PositionFrame>, ScenarioError> {
    resample_with(scenario, interval, Execution::default())
}

pub fn resample_with(
    scenario: &Scenario,
    interval: f64,
    mode: Execution,
) -> Result<Vec<PositionFrame>, ScenarioError> {
    if !(interval > 0.0 && interval.is_finite()) {
        return Err(ScenarioError::Validation(format!(
            "interval must be positive, got {interval}"
        )));
    }
    if interval > scenario.duration {
        return Err(ScenarioError::Validation(format!(
            "interval {interval} exceeds scenario duration {}",
            scenario.duration
        )));
    }
    let frames = frame_count(scenario.duration, interval);
    let times: Vec<f64> = (0..frames).map(|e| e as f64 * interval).collect();
    // node-major sampling, merged back into epoch-major frames
    let per_node: Vec<Vec<(f64, f64)>> = par::map_slice(scenario.traces(), mode, |tr| {
        times.iter().map(|&t| tr.position_at(t)).collect()
    });
    Ok(times
        .iter()
        .enumerate()
        .map(|(e, &time)| PositionFrame {
            epoch_index: e,
            time,
            positions: per_node.iter().map(|p| p[e]).collect(),
        })
        .collect())
}

/// Pairwise Euclidean distances for every epoch, stored in condensed
/// upper-triangle order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    nodes: usize,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl DistanceTable {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn epochs(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn pair_count(&self) -> usize {
        self.nodes * self.nodes.saturating_sub(1) / 2
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * (2 * self.nodes - i - 1) / 2 + (j - i - 1)
    }

    /// Distance between `i` and `j` at `epoch`. Panics on out-of-range input.
    pub fn distance(&self, epoch: usize, i: usize, j: usize) -> f64 {
        assert!(i < self.nodes && j < self.nodes && epoch < self.epochs());
        if i == j {
            return 0.0;
        }
        self.values[epoch * self.pair_count() + self.pair_index(i, j)]
    }

    /// Distances of all pairs `(i, j)`, `i < j`, at one epoch in canonical order.
    pub fn epoch_slice(&self, epoch: usize) -> &[f64] {
        let p = self.pair_count();
        &self.values[epoch * p..(epoch + 1) * p]
    }

    /// Writes `source,target,time,distance` rows grouped by pair.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "source,target,time,distance")?;
        let mut k = 0;
        for i in 0..self.nodes {
            for j in (i + 1)..self.nodes {
                for (e, t) in self.times.iter().enumerate() {
                    writeln!(w, "{i},{j},{t},{}", self.values[e * self.pair_count() + k])?;
                }
                k += 1;
            }
        }
        Ok(())
    }

    /// Reads the CSV written by [`DistanceTable::write_csv`]. Rows may come in
    /// any order but every pair must appear once per epoch.
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self, ScenarioError> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers().map_err(csv_err)?.clone();
        if headers.iter().collect::<Vec<_>>() != ["source", "target", "time", "distance"] {
            return Err(ScenarioError::Parse {
                line: 1,
                msg: "expected header source,target,time,distance".into(),
            });
        }
        let mut rows = Vec::new();
        for (idx, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let line = idx + 2;
            let bad = |msg: String| ScenarioError::Parse { line, msg };
            if rec.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", rec.len())));
            }
            let s: usize = rec[0]
                .trim()
                .parse()
                .map_err(|e| bad(format!("source: {e}")))?;
            let t: usize = rec[1]
                .trim()
                .parse()
                .map_err(|e| bad(format!("target: {e}")))?;
            let time: f64 = rec[2]
                .trim()
                .parse()
                .map_err(|e| bad(format!("time: {e}")))?;
            let d: f64 = rec[3]
                .trim()
                .parse()
                .map_err(|e| bad(format!("distance: {e}")))?;
            if s == t || d < 0.0 || !d.is_finite() {
                return Err(bad("self pair or invalid distance".into()));
            }
            rows.push((s.min(t), s.max(t), time, d));
        }
        let nodes = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
        let mut times: Vec<f64> = rows.iter().map(|r| r.2).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        let mut table = DistanceTable {
            nodes,
            times,
            values: Vec::new(),
        };
        let pairs = table.pair_count();
        table.values = vec![f64::NAN; pairs * table.epochs()];
        if rows.len() != table.values.len() {
            return Err(ScenarioError::Validation(format!(
                "expected {} rows for {} nodes over {} epochs, found {}",
                table.values.len(),
                nodes,
                table.epochs(),
                rows.len()
            )));
        }
        for (s, t, time, d) in rows {
            let e = table
                .times
                .binary_search_by(|x| x.total_cmp(&time))
                .unwrap_or_default();
            let slot = e * pairs + table.pair_index(s, t);
            if !table.values[slot].is_nan() {
                return Err(ScenarioError::Validation(format!(
                    "duplicate row for ({s},{t}) at {time}"
                )));
            }
            table.values[slot] = d;
        }
        Ok(table)
    }
}

fn csv_err(e: csv::Error) -> ScenarioError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    ScenarioError::Parse {
        line,
        msg: e.to_string(),
    }
}

/// Pairwise distances for every frame. All frames must cover the same nodes.
pub fn distances(frames: &[PositionFrame]) -> Result<DistanceTable, ScenarioError> {
    distances_with(frames, Execution::default())
}

pub fn distances_with(
    frames: &[PositionFrame],
    mode: Execution,
) -> Result<DistanceTable, ScenarioError> {
    let Some(first) = frames.first() else {
        return Err(ScenarioError::Validation("no frames".into()));
    };
    let nodes = first.positions.len();
    if let Some(f) = frames.iter().find(|f| f.positions.len() != nodes) {
        return Err(ScenarioError::Validation(format!(
            "frame {} has {} nodes, expected {nodes}",
            f.epoch_index,
            f.positions.len()
        )));
    }
    let per_epoch: Vec<Vec<f64>> = par::map_slice(frames, mode, |f| {
        let p = &f.positions;
        let mut out = Vec::with_capacity(nodes * nodes.saturating_sub(1) / 2);
        for i in 0..nodes {
            for j in (i + 1)..nodes {
                out.push((p[i].0 - p[j].0).hypot(p[i].1 - p[j].1));
            }
        }
        out
    });
    Ok(DistanceTable {
        nodes,
        times: frames.iter().map(|f| f.time).collect(),
        values: per_epoch.concat(),
    })
}

/// Side of the default synthetic area. At 90 m coverage and k = 5 this keeps
/// 100-node meshes connected while leaving room for liquidity contention.
pub const DEFAULT_SYNTHETIC_SIDE_M: f64 = 660.0;

/// Parameters for the random-waypoint generator.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SyntheticParams {
    pub nodes: usize,
    pub duration: f64,
    pub bbox: BoundingBox,
    /// Minimum and maximum walking speed in m/s.
    pub speed: (f64, f64),
    pub seed: u64,
}

impl SyntheticParams {
    /// Six hours of walking at 0.5 to 2 m/s inside a
    /// [`DEFAULT_SYNTHETIC_SIDE_M`] square.
    pub fn pedestrian(nodes: usize, seed: u64) -> Self {
        SyntheticParams {
            nodes,
            duration: 21_600.0,
            bbox: BoundingBox::square(DEFAULT_SYNTHETIC_SIDE_M),
            speed: (0.5, 2.0),
            seed,
        }
    }
}

impl fmt::Display for SyntheticParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.bbox;
        write!(
            f,
            "rwp nodes={} duration={} bbox=[{},{},{},{}] speed=[{},{}] seed={}",
            self.nodes,
            self.duration,
            b.min_x,
            b.min_y,
            b.max_x,
            b.max_y,
            self.speed.0,
            self.speed.1,
            self.seed
        )
    }
}

/// Random-waypoint mobility: each node starts uniformly inside the box, then
/// repeatedly walks in a straight line to a uniform destination at a speed
/// drawn uniformly from the speed range. The final segment is cut at exactly
/// `duration`.
pub fn generate_synthetic(params: &SyntheticParams) -> Result<Scenario, ScenarioError> {
    let SyntheticParams {
        nodes,
        duration,
        bbox,
        speed,
        seed,
    } = *params;
    if nodes < 2 {
        return Err(ScenarioError::Validation(format!(
            "need at least 2 nodes, got {nodes}"
        )));
    }
    if bbox.is_degenerate() {
        return Err(ScenarioError::Validation("degenerate bounding box".into()));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(ScenarioError::Validation(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let (vmin, vmax) = speed;
    if !(vmin > 0.0 && vmax >= vmin && vmax.is_finite()) {
        return Err(ScenarioError::Validation(format!(
            "invalid speed range ({vmin}, {vmax})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| {
        (
            rng.random_range(bbox.min_x..=bbox.max_x),
            rng.random_range(bbox.min_y..=bbox.max_y),
        )
    };
    let mut waypoints = Vec::new();
    for node in 0..nodes {
        let (mut x, mut y) = point(&mut rng);
        let mut t = 0.0;
        waypoints.push(Waypoint {
            node,
            time: t,
            x,
            y,
        });
        loop {
            let (nx, ny) = point(&mut rng);
            let v = if vmax > vmin {
                rng.random_range(vmin..=vmax)
            } else {
                vmin
            };
            let dist = (nx - x).hypot(ny - y);
            if dist == 0.0 {
                continue;
            }
            let dt = dist / v;
            if t + dt >= duration {
                let f = (duration - t) / dt;
                let (cx, cy) = bbox.clamp(x + (nx - x) * f, y + (ny - y) * f);
                if duration > t {
                    waypoints.push(Waypoint {
                        node,
                        time: duration,
                        x: cx,
                        y: cy,
                    });
                }
                break;
            }
            t += dt;
            x = nx;
            y = ny;
            waypoints.push(Waypoint {
                node,
                time: t,
                x,
                y,
            });
        }
    }
    Scenario::from_waypoints(waypoints, Some(bbox))
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::run::RunResult;
use super::sweep::cell_means;
use super::ExperimentError;
use crate::assign::Strategy;
use crate::payment::Sat;

/// Writes the results CSV; the header follows the [`RunResult`] field order.
pub fn write_results_csv<'a, W: Write>(
    out: W,
    rows: impl IntoIterator<Item = &'a RunResult>,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const RESULTS_HEADER: [&str; 14] = [
    "scenario",
    "strategy",
    "nodes",
    "n_per_epoch",
    "investment",
    "seed",
    "channels",
    "total",
    "success",
    "fail_capacity",
    "fail_mesh",
    "success_rate",
    "degree_variance",
    "mean_closeness",
];

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<RunResult>, ExperimentError> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize()
        .map(|r| r.map_err(|e| ExperimentError::Config(format!("results csv: {e}"))))
        .collect()
}

/// Mean channel count per strategy and network size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelCountRow {
    pub strategy: Strategy,
    pub nodes: usize,
    pub mean_channels: f64,
    pub scenarios: usize,
}

/// Outcome shares over every payment of a strategy and network size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    pub strategy: Strategy,
    pub nodes: usize,
    pub payments: usize,
    pub success_pct: f64,
    pub fail_capacity_pct: f64,
    pub fail_mesh_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n_per_epoch: usize,
    pub mean_success_rate: f64,
    pub runs: usize,
}

/// Success rate against payments per epoch for one plot line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessSeries {
    pub strategy: Strategy,
    pub nodes: usize,
    pub investment: Sat,
    pub points: Vec<SeriesPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub channels: Vec<ChannelCountRow>,
    pub failures: Vec<FailureRow>,
    pub series: Vec<SuccessSeries>,
}

pub fn report(rows: &[RunResult]) -> Result<Summary, ExperimentError> {
    if rows.is_empty() {
        return Err(ExperimentError::Config("no result rows to report".into()));
    }
    // one channel count per (scenario, strategy)
    let mut per_topology: BTreeMap<(Strategy, usize), BTreeMap<&str, usize>> = BTreeMap::new();
    let mut outcomes: BTreeMap<(Strategy, usize), [usize; 4]> = BTreeMap::new();
    for r in rows {
        per_topology
            .entry((r.strategy, r.nodes))
            .or_default()
            .insert(&r.scenario, r.channels);
        let o = outcomes.entry((r.strategy, r.nodes)).or_default();
        o[0] += r.total;
        o[1] += r.success;
        o[2] += r.fail_capacity;
        o[3] += r.fail_mesh;
    }
    let channels = per_topology
        .into_iter()
        .map(|((strategy, nodes), per)| ChannelCountRow {
            strategy,
            nodes,
            mean_channels: per.values().sum::<usize>() as f64 / per.len() as f64,
            scenarios: per.len(),
        })
        .collect();
    let pct = |x: usize, total: usize| {
        if total == 0 {
            0.0
        } else {
            100.0 * x as f64 / total as f64
        }
    };
    let failures = outcomes
        .into_iter()
        .map(|((strategy, nodes), [total, ok, cap, mesh])| FailureRow {
            strategy,
            nodes,
            payments: total,
            success_pct: pct(ok, total),
            fail_capacity_pct: pct(cap, total),
            fail_mesh_pct: pct(mesh, total),
        })
        .collect();
    let mut series: BTreeMap<(Strategy, usize, Sat), Vec<SeriesPoint>> = BTreeMap::new();
    for c in cell_means(rows) {
        series
            .entry((c.key.strategy, c.key.nodes, c.key.investment))
            .or_default()
            .push(SeriesPoint {
                n_per_epoch: c.key.n_per_epoch,
                mean_success_rate: c.mean_success_rate,
                runs: c.runs,
            });
    }
    let series = series
        .into_iter()
        .map(|((strategy, nodes, investment), points)| SuccessSeries {
            strategy,
            nodes,
            investment,
            points,
        })
        .collect();
    Ok(Summary {
        channels,
        failures,
        series,
    })
}

/// Plain-text rendering of the channel and failure tables.
pub fn render_tables(s: &Summary) -> String {
    let sizes: BTreeSet<usize> = s.channels.iter().map(|r| r.nodes).collect();
    let strategies: BTreeSet<Strategy> = s.channels.iter().map(|r| r.strategy).collect();
    let mut out = String::new();
    let _ = write!(out, "Average number of channels\n{:<10}", "approach");
    for n in &sizes {
        let _ = write!(out, "{:>12}", format!("{n} nodes"));
    }
    out.push('\n');
    for st in &strategies {
        let _ = write!(out, "{:<10}", st.as_str());
        for n in &sizes {
            match s
                .channels
                .iter()
                .find(|r| r.strategy == *st && r.nodes == *n)
            {
                Some(r) => {
                    let _ = write!(out, "{:>12.1}", r.mean_channels);
                }
                None => {
                    let _ = write!(out, "{:>12}", "-");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(
        out,
        "\nPayment failures (% of all payments)\n{:<10}",
        "approach"
    );
    for label in ["capacity", "mesh"] {
        for n in &sizes {
            let _ = write!(out, "{:>16}", format!("{label} {n}"));
        }
    }
    out.push('\n');
    for st in &strategies {
        let _ = write!(out, "{:<10}", st.as_str());
        for pick in [0, 1] {
            for n in &sizes {
                match s
                    .failures
                    .iter()
                    .find(|r| r.strategy == *st && r.nodes == *n)
                {
                    Some(r) => {
                        let v = if pick == 0 {
                            r.fail_capacity_pct
                        } else {
                            r.fail_mesh_pct
                        };
                        let _ = write!(out, "{:>16.2}", v);
                    }
                    None => {
                        let _ = write!(out, "{:>16}", "-");
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// One SVG line chart per (nodes, investment): success rate against N, one
/// polyline per strategy. Returns `(file stem, svg text)` pairs.
pub fn render_svg_charts(s: &Summary) -> Vec<(String, String)> {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let colors = |st: Strategy| match st {
        Strategy::Cds => "#1f77b4",
        Strategy::Ust => "#ff7f0e",
        Strategy::Baseline => "#2ca02c",
    };
    let mut groups: BTreeMap<(usize, Sat), Vec<&SuccessSeries>> = BTreeMap::new();
    for line in &s.series {
        groups
            .entry((line.nodes, line.investment))
            .or_default()
            .push(line);
    }
    let mut charts = Vec::new();
    for ((nodes, investment), lines) in groups {
        let ns: Vec<usize> = lines
            .iter()
            .flat_map(|l| l.points.iter().map(|p| p.n_per_epoch))
            .collect();
        let (lo, hi) = (
            *ns.iter().min().unwrap_or(&0) as f64,
            *ns.iter().max().unwrap_or(&1) as f64,
        );
        let span = if hi > lo { hi - lo } else { 1.0 };
        let x = |n: usize| PAD + (n as f64 - lo) / span * (W - 2.0 * PAD);
        let y = |r: f64| H - PAD - r * (H - 2.0 * PAD);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20" text-anchor="middle">{nodes} nodes, {investment} sat</text>"#,
            W / 2.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{PAD}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            H - PAD,
            W - PAD,
            H - PAD
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{}" stroke="black"/>"#,
            H - PAD
        );
        for tick in 0..=4 {
            let r = tick as f64 / 4.0;
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" text-anchor="end">{:.0}%</text>"#,
                PAD - 4.0,
                y(r) + 4.0,
                r * 100.0
            );
        }
        let mut seen = BTreeSet::new();
        for &n in &ns {
            if seen.insert(n) {
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" text-anchor="middle">{n}</text>"#,
                    x(n),
                    H - PAD + 16.0
                );
            }
        }
        for (i, line) in lines.iter().enumerate() {
            let pts: Vec<String> = line
                .points
                .iter()
                .map(|p| format!("{:.1},{:.1}", x(p.n_per_epoch), y(p.mean_success_rate)))
                .collect();
            let c = colors(line.strategy);
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#,
                pts.join(" ")
            );
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" fill="{c}">{}</text>"#,
                W - PAD - 60.0,
                PAD + 14.0 * i as f64,
                line.strategy
            );
        }
        svg.push_str("</svg>\n");
        charts.push((format!("success_{nodes}n_{investment}sat"), svg));
    }
    charts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(
        scenario: &str,
        strategy: Strategy,
        n: usize,
        channels: usize,
        success: usize,
        cap: usize,
        mesh: usize,
    ) -> RunResult {
        let total = success + cap + mesh;
        RunResult {
            scenario: scenario.into(),
            strategy,
            nodes: 100,
            n_per_epoch: n,
            investment: 100_000,
            seed: 1,
            channels,
            total,
            success,
            fail_capacity: cap,
            fail_mesh: mesh,
            success_rate: success as f64 / total as f64,
            degree_variance: 0.5,
            mean_closeness: 0.25,
        }
    }

    #[test]
    fn csv_round_trip_and_header() {
        let rows = vec![row("s0", Strategy::Cds, 20, 99, 700, 10, 10)];
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "scenario,strategy,nodes,n_per_epoch,investment,seed,channels,total,success,fail_capacity,fail_mesh,success_rate,degree_variance,mean_closeness\n"
        ));
        assert!(text.contains("s0,cds,100,20,100000,1,99,720,700,10,10,"));
        assert_eq!(read_results_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn tables_aggregate() {
        let rows = vec![
            row("s0", Strategy::Cds, 20, 99, 80, 15, 5),
            row("s0", Strategy::Cds, 30, 99, 60, 35, 5),
            row("s0", Strategy::Baseline, 20, 600, 50, 45, 5),
            row("s1", Strategy::Baseline, 20, 700, 70, 25, 5),
        ];
        let s = report(&rows).unwrap();
        let base = s
            .channels
            .iter()
            .find(|r| r.strategy == Strategy::Baseline)
            .unwrap();
        assert_eq!((base.mean_channels, base.scenarios), (650.0, 2));
        let cds = s
            .channels
            .iter()
            .find(|r| r.strategy == Strategy::Cds)
            .unwrap();
        assert_eq!((cds.mean_channels, cds.scenarios), (99.0, 1));
        for f in &s.failures {
            assert!((f.success_pct + f.fail_capacity_pct + f.fail_mesh_pct - 100.0).abs() < 1e-9);
        }
        let cds_f = s
            .failures
            .iter()
            .find(|r| r.strategy == Strategy::Cds)
            .unwrap();
        assert_eq!(cds_f.payments, 200);
        assert!((cds_f.fail_capacity_pct - 25.0).abs() < 1e-12);
        let base_series = s
            .series
            .iter()
            .find(|l| l.strategy == Strategy::Baseline)
            .unwrap();
        assert_eq!(base_series.points.len(), 1);
        assert!((base_series.points[0].mean_success_rate - 0.6).abs() < 1e-12);
        let text = render_tables(&s);
        assert!(text.contains("baseline") && text.contains("650.0"));
        let charts = render_svg_charts(&s);
        assert_eq!(charts.len(), 1);
        assert!(charts[0].1.contains("<polyline"));
    }

    #[test]
    fn empty_report_is_an_error() {
        assert!(report(&[]).is_err());
    }
}

//! Channel balances and payment execution over a mesh snapshot.

use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assign::{LnTopology, Strategy};
use crate::graph::{component_labels, paths::lex_bfs, Graph, Vertex};
use crate::meshgen::MeshSnapshot;

/// Amounts are whole satoshi.
pub type Sat = u64;

/// Payment amounts drawn by the default workload.
pub const DEFAULT_AMOUNTS: [Sat; 6] = [1, 5, 10, 20, 50, 100];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaymentError {
    #[error("topology has no channels to fund")]
    NoChannels,
    #[error(
        "investment of {investment} sat cannot fund {channels} channels with at least 1 sat each"
    )]
    InsufficientInvestment { investment: Sat, channels: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("sender and receiver are both {0}")]
    SelfPayment(Vertex),
    #[error("payment amount must be positive")]
    ZeroAmount,
    #[error("request for epoch {found} passed to epoch {expected}")]
    EpochMismatch { expected: usize, found: usize },
    #[error("snapshot covers {snapshot} nodes but the network has {network}")]
    SnapshotSize { snapshot: usize, network: usize },
}

/// A funded channel between `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Channel {
    pub u: Vertex,
    pub v: Vertex,
    pub capacity: Sat,
    /// Spendable by `u` toward `v`.
    pub balance_uv: Sat,
    /// Spendable by `v` toward `u`.
    pub balance_vu: Sat,
}

impl Channel {
    /// Splits `capacity` evenly; the odd satoshi goes to `u`.
    pub fn new(u: Vertex, v: Vertex, capacity: Sat) -> Self {
        let (u, v) = (u.min(v), u.max(v));
        let balance_vu = capacity / 2;
        Channel {
            u,
            v,
            capacity,
            balance_uv: capacity - balance_vu,
            balance_vu,
        }
    }

    /// Balance spendable from `from` toward the other endpoint.
    pub fn spendable(&self, from: Vertex) -> Sat {
        if from == self.u {
            self.balance_uv
        } else {
            self.balance_vu
        }
    }

    fn shift(&mut self, from: Vertex, amount: Sat) {
        if from == self.u {
            self.balance_uv -= amount;
            self.balance_vu += amount;
        } else {
            self.balance_vu -= amount;
            self.balance_uv += amount;
        }
    }
}

/// Which LN hops a payment may use relative to the mesh snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HopPolicy {
    /// Every hop must lie in the sender's mesh component.
    #[default]
    SameComponent,
    /// Only sender and receiver must share a mesh component.
    EndpointsOnly,
}

/// Funded channels over a topology. One simulation run owns one network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelNetwork {
    strategy: Option<Strategy>,
    channels: Vec<Channel>,
    /// Per vertex: `(neighbor, channel index)` sorted by neighbor.
    adj: Vec<Vec<(Vertex, usize)>>,
    total_investment: Sat,
    remainder: Sat,
}

impl ChannelNetwork {
    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn strategy(&self) -> Option<Strategy> {
        self.strategy
    }

    pub fn total_investment(&self) -> Sat {
        self.total_investment
    }

    /// Investment left over after equal integer division across channels.
    pub fn remainder(&self) -> Sat {
        self.remainder
    }

    pub fn channel(&self, a: Vertex, b: Vertex) -> Option<&Channel> {
        let list = self.adj.get(a)?;
        let idx = list.binary_search_by_key(&b, |&(n, _)| n).ok()?;
        Some(&self.channels[list[idx].1])
    }

    /// Balance spendable from `a` toward `b`, if they share a channel.
    pub fn spendable(&self, a: Vertex, b: Vertex) -> Option<Sat> {
        self.channel(a, b).map(|c| c.spendable(a))
    }

    /// Hash over all balances.
    pub fn state_digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.channels.hash(&mut h);
        h.finish()
    }

    /// Minimum-hop path in the feasible subgraph: channels whose directed
    /// balance covers `amount`, restricted to vertices where `allowed` holds.
    pub fn feasible_path(
        &self,
        src: Vertex,
        dst: Vertex,
        amount: Sat,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        let allowed = &allowed;
        let net = self;
        lex_bfs(self.nodes(), src, dst, move |u| {
            net.adj[u]
                .iter()
                .filter(move |&&(v, c)| allowed(v) && net.channels[c].spendable(u) >= amount)
                .map(|&(v, _)| v)
        })
    }

    fn validate(&self, req: &PaymentRequest) -> Result<(), PaymentError> {
        for v in [req.sender, req.receiver] {
            if v >= self.nodes() {
                return Err(PaymentError::UnknownVertex(v));
            }
        }
        if req.sender == req.receiver {
            return Err(PaymentError::SelfPayment(req.sender));
        }
        if req.amount == 0 {
            return Err(PaymentError::ZeroAmount);
        }
        Ok(())
    }

    /// Executes one payment given precomputed mesh component labels.
    pub fn execute_with_labels(
        &mut self,
        labels: &[usize],
        req: &PaymentRequest,
        policy: HopPolicy,
    ) -> Result<PaymentOutcome, PaymentError> {
        self.validate(req)?;
        if labels.len() != self.nodes() {
            return Err(PaymentError::SnapshotSize {
                snapshot: labels.len(),
                network: self.nodes(),
            });
        }
        let home = labels[req.sender];
        if labels[req.receiver] != home {
            return Ok(PaymentOutcome::FailNoMeshPath);
        }
        let path = match policy {
            HopPolicy::SameComponent => {
                self.feasible_path(req.sender, req.receiver, req.amount, |v| labels[v] == home)
            }
            HopPolicy::EndpointsOnly => {
                self.feasible_path(req.sender, req.receiver, req.amount, |_| true)
            }
        };
        let Some(path) = path else {
            return Ok(PaymentOutcome::FailNoCapacity);
        };
        for hop in path.windows(2) {
            let list = &self.adj[hop[0]];
            let idx = list
                .binary_search_by_key(&hop[1], |&(n, _)| n)
                .expect("path follows channels");
            self.channels[list[idx].1].shift(hop[0], req.amount);
        }
        Ok(PaymentOutcome::Success(path))
    }
}

/// Divides `total_investment` equally across the topology's channels.
pub fn fund(topology: &LnTopology, total_investment: Sat) -> Result<ChannelNetwork, PaymentError> {
    let mut net = fund_graph(&topology.graph, total_investment)?;
    net.strategy = Some(topology.strategy);
    Ok(net)
}

/// Funds every edge of `g` with `floor(total / |E|)` satoshi.
pub fn fund_graph(g: &Graph, total_investment: Sat) -> Result<ChannelNetwork, PaymentError> {
    let count = g.edge_count();
    if count == 0 {
        return Err(PaymentError::NoChannels);
    }
    if total_investment < count as Sat {
        return Err(PaymentError::InsufficientInvestment {
            investment: total_investment,
            channels: count,
        });
    }
    let capacity = total_investment / count as Sat;
    let mut adj = vec![Vec::new(); g.vertex_count()];
    let channels: Vec<Channel> = g
        .edges()
        .enumerate()
        .map(|(i, (u, v))| {
            adj[u].push((v, i));
            adj[v].push((u, i));
            Channel::new(u, v, capacity)
        })
        .collect();
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(ChannelNetwork {
        strategy: None,
        channels,
        adj,
        total_investment,
        remainder: total_investment - capacity * count as Sat,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaymentRequest {
    pub epoch: usize,
    pub sender: Vertex,
    pub receiver: Vertex,
    pub amount: Sat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PaymentOutcome {
    Success(Vec<Vertex>),
    FailNoMeshPath,
    FailNoCapacity,
}

impl PaymentOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, PaymentOutcome::Success(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            PaymentOutcome::Success(_) => "success",
            PaymentOutcome::FailNoMeshPath => "fail_no_mesh_path",
            PaymentOutcome::FailNoCapacity => "fail_no_capacity",
        }
    }
}

impl fmt::Display for PaymentOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn check_snapshot(
    net: &ChannelNetwork,
    snapshot: &MeshSnapshot,
) -> Result<Vec<usize>, PaymentError> {
    let n = snapshot.graph.vertex_count();
    if n != net.nodes() {
        return Err(PaymentError::SnapshotSize {
            snapshot: n,
            network: net.nodes(),
        });
    }
    Ok(component_labels(&snapshot.graph))
}

/// Routes one payment. Failures leave the network untouched.
pub fn execute(
    net: &mut ChannelNetwork,
    snapshot: &MeshSnapshot,
    req: &PaymentRequest,
    policy: HopPolicy,
) -> Result<PaymentOutcome, PaymentError> {
    let labels = check_snapshot(net, snapshot)?;
    net.execute_with_labels(&labels, req, policy)
}

/// Executes requests in order against one snapshot. Balances carry over
/// between payments and into later epochs.
pub fn run_epoch(
    net: &mut ChannelNetwork,
    snapshot: &MeshSnapshot,
    reqs: &[PaymentRequest],
    policy: HopPolicy,
) -> Result<Vec<PaymentOutcome>, PaymentError> {
    if let Some(r) = reqs.iter().find(|r| r.epoch != snapshot.epoch_index) {
        return Err(PaymentError::EpochMismatch {
            expected: snapshot.epoch_index,
            found: r.epoch,
        });
    }
    let labels = check_snapshot(net, snapshot)?;
    reqs.iter()
        .map(|r| net.execute_with_labels(&labels, r, policy))
        .collect()
}

/// CSV payment log: `epoch,sender,receiver,amount,outcome,path`, with the
/// path as `-`-joined vertex ids.
pub struct TraceLog<W: Write> {
    out: W,
}

impl<W: Write> TraceLog<W> {
    pub fn new(mut out: W) -> std::io::Result<Self> {
        writeln!(out, "epoch,sender,receiver,amount,outcome,path")?;
        Ok(TraceLog { out })
    }

    pub fn record(
        &mut self,
        req: &PaymentRequest,
        outcome: &PaymentOutcome,
    ) -> std::io::Result<()> {
        let path = match outcome {
            PaymentOutcome::Success(p) => p
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("-"),
            _ => String::new(),
        };
        writeln!(
            self.out,
            "{},{},{},{},{},{}",
            req.epoch, req.sender, req.receiver, req.amount, outcome, path
        )
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

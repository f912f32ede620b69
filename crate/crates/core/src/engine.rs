//! Asynchronous gossip simulation.
//!
//! Time is counted in global ticks: each tick one uniformly chosen node wakes
//! up and completes one pairwise-averaging round. (With n independent rate-λ
//! Poisson clocks the ticks form a rate-nλ process; absolute time is not
//! modeled.)
//!
//! Cost is counted in one-hop transmissions:
//!
//! * a standard round costs 2 (value to the neighbor, value back);
//! * every geographic query costs `2·hops`: the query is routed out, and either
//!   a rejection or the partner's value comes back over the same hop count.
//!
//! A geographic target that falls in the source's own cell produces a 0-hop
//! route; it is redrawn at no cost and does not count as a query.

use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::FieldSpec;
use crate::rng::{self, SimRng};
use crate::routing::greedy_hops;
use crate::sampling::{self, decide_accept, RejectionPolicy};
use crate::topology::{self, GeometryKind, Topology};

/// Upper limit on target draws within a single geographic round.
pub const QUERY_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GossipState {
    x: Vec<f64>,
    tick: u64,
    x_ave: f64,
    x0_norm: f64,
    x0_sum: f64,
}

impl GossipState {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// True average of the initial values.
    pub fn average(&self) -> f64 {
        self.x_ave
    }

    pub fn initial_norm(&self) -> f64 {
        self.x0_norm
    }

    pub fn initial_sum(&self) -> f64 {
        self.x0_sum
    }

    pub fn sum(&self) -> f64 {
        self.x.iter().sum()
    }

    fn average_pair(&mut self, a: usize, b: usize) {
        let m = (self.x[a] + self.x[b]) / 2.0;
        self.x[a] = m;
        self.x[b] = m;
        self.tick += 1;
    }
}

pub fn init_state(t: &Topology, x0: Vec<f64>) -> Result<GossipState> {
    if x0.len() != t.n() {
        return Err(Error::LengthMismatch {
            expected: t.n(),
            actual: x0.len(),
        });
    }
    let x0_sum: f64 = x0.iter().sum();
    let x0_norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(GossipState {
        x_ave: x0_sum / x0.len() as f64,
        x0_norm,
        x0_sum,
        x: x0,
        tick: 0,
    })
}

/// Normalized estimation error `‖x(k) − x̄·1‖₂ / ‖x(0)‖₂`.
pub fn error(s: &GossipState) -> Result<f64> {
    if s.x0_norm == 0.0 {
        return Err(Error::UndefinedError);
    }
    let dev = s
        .x
        .iter()
        .map(|v| (v - s.x_ave) * (v - s.x_ave))
        .sum::<f64>()
        .sqrt();
    Ok(dev / s.x0_norm)
}

/// One accepted exchange as recorded by a [`CostLedger`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    /// Hops of the accepted route.
    pub hops: u64,
    /// Queries issued, including the accepted one.
    pub queries: u64,
    pub transmissions: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CostLedger {
    pub transmissions: u64,
    pub rounds: u64,
    /// Total queries issued over all rounds.
    pub queries: u64,
    /// Total hops of accepted routes.
    pub accepted_hops: u64,
    pub max_queries: u64,
    pub per_round: Option<Vec<RoundRecord>>,
}

impl CostLedger {
    /// A ledger that also keeps one [`RoundRecord`] per round.
    pub fn recording() -> Self {
        Self {
            per_round: Some(Vec::new()),
            ..Self::default()
        }
    }

    fn record(&mut self, rec: RoundRecord) {
        self.transmissions += rec.transmissions;
        self.rounds += 1;
        self.queries += rec.queries;
        self.accepted_hops += rec.hops;
        self.max_queries = self.max_queries.max(rec.queries);
        if let Some(log) = self.per_round.as_mut() {
            log.push(rec);
        }
    }

    pub fn mean_queries(&self) -> f64 {
        self.queries as f64 / self.rounds.max(1) as f64
    }

    pub fn mean_hops(&self) -> f64 {
        self.accepted_hops as f64 / self.rounds.max(1) as f64
    }
}

/// Nearest-neighbor gossip: a uniform node averages with a uniform neighbor.
pub fn standard_round<R: Rng + ?Sized>(
    s: &mut GossipState,
    t: &Topology,
    ledger: &mut CostLedger,
    rng: &mut R,
) -> Result<()> {
    let u = rng.gen_range(0..t.n());
    let nb = t.neighbors(u);
    if nb.is_empty() {
        return Err(Error::Protocol(format!("node {u} has no neighbors")));
    }
    let w = nb[rng.gen_range(0..nb.len())];
    s.average_pair(u, w);
    ledger.record(RoundRecord {
        hops: 1,
        queries: 1,
        transmissions: 2,
    });
    Ok(())
}

/// Outcome of the query loop of one geographic round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartnerDraw {
    pub partner: usize,
    /// Hops of the accepted route.
    pub hops: u64,
    pub queries: u64,
    pub transmissions: u64,
}

/// Draws uniform targets from `source`, routes greedily and applies the
/// acceptance test at the node where each route stops, until a query is
/// accepted.
pub fn draw_partner<R: Rng + ?Sized>(
    t: &Topology,
    policy: &RejectionPolicy,
    source: usize,
    rng: &mut R,
) -> Result<PartnerDraw> {
    let mut queries = 0;
    let mut transmissions = 0;
    for _ in 0..QUERY_CAP {
        let target = t.random_position(rng);
        let (end, hops) = greedy_hops(t, source, &target);
        if hops == 0 {
            continue;
        }
        queries += 1;
        transmissions += 2 * hops as u64;
        if decide_accept(policy, end, rng) {
            return Ok(PartnerDraw {
                partner: end,
                hops: hops as u64,
                queries,
                transmissions,
            });
        }
    }
    Err(Error::DegeneratePolicy(format!(
        "no partner accepted within {QUERY_CAP} draws from node {source}"
    )))
}

/// Geographic gossip with rejection sampling.
pub fn geographic_round<R: Rng + ?Sized>(
    s: &mut GossipState,
    t: &Topology,
    policy: &RejectionPolicy,
    ledger: &mut CostLedger,
    rng: &mut R,
) -> Result<()> {
    if policy.len() != t.n() {
        return Err(Error::LengthMismatch {
            expected: t.n(),
            actual: policy.len(),
        });
    }
    let u = rng.gen_range(0..t.n());
    let draw = draw_partner(t, policy, u, rng)?;
    s.average_pair(u, draw.partner);
    ledger.record(RoundRecord {
        hops: draw.hops,
        queries: draw.queries,
        transmissions: draw.transmissions,
    });
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    Standard,
    Geographic,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::Standard => "standard",
            Protocol::Geographic => "geographic",
        }
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Protocol::Standard),
            "geographic" => Ok(Protocol::Geographic),
            other => Err(Error::Parse(format!("unknown protocol `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolicySpec {
    Always,
    Fixed { c: f64 },
    Quantile { mu: f64, nu: f64 },
}

impl PolicySpec {
    /// Always-accept on the regular geometries, quantile `μ = ν = 0.1` on rgg.
    pub fn default_for(kind: GeometryKind) -> Self {
        match kind {
            GeometryKind::Rgg => PolicySpec::Quantile { mu: 0.1, nu: 0.1 },
            _ => PolicySpec::Always,
        }
    }

    pub fn build(&self, t: &Topology) -> Result<RejectionPolicy> {
        let areas = topology::voronoi_areas(t)?;
        match *self {
            PolicySpec::Always => Ok(sampling::policy_always(&areas)),
            PolicySpec::Fixed { c } => sampling::policy_fixed_tau(&areas, c),
            PolicySpec::Quantile { mu, nu } => sampling::policy_quantile(&areas, mu, nu),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopologySpec {
    pub kind: GeometryKind,
    pub n: usize,
    /// Connection radius for rgg; `None` selects the default radius.
    pub radius: Option<f64>,
    pub seed: u64,
}

impl TopologySpec {
    pub fn new(kind: GeometryKind, n: usize) -> Self {
        Self {
            kind,
            n,
            radius: None,
            seed: 0,
        }
    }

    pub fn build(&self) -> Result<Topology> {
        match self.kind {
            GeometryKind::Cycle => topology::build_cycle(self.n),
            GeometryKind::Grid => topology::build_grid(self.n),
            GeometryKind::Rgg => {
                let r = match self.radius {
                    Some(r) => r,
                    None => topology::default_radius(self.n)?,
                };
                topology::build_rgg(self.n, r, self.seed)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub topology: TopologySpec,
    pub protocol: Protocol,
    /// `None` picks [`PolicySpec::default_for`] the geometry.
    pub policy: Option<PolicySpec>,
    pub field: FieldSpec,
    pub epsilon: f64,
    pub max_ticks: u64,
    /// Seed of the simulation streams.
    pub seed: u64,
    /// Ticks between error samples; `None` means `n`.
    pub checkpoint_stride: Option<u64>,
    /// A run stops at the first checkpoint with error below
    /// `epsilon · stop_fraction`.
    pub stop_fraction: f64,
}

impl SimConfig {
    pub fn new(topology: TopologySpec, protocol: Protocol, field: FieldSpec) -> Self {
        Self {
            topology,
            protocol,
            policy: None,
            field,
            epsilon: 0.01,
            max_ticks: 100_000_000,
            seed: topology.seed,
            checkpoint_stride: None,
            stop_fraction: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.checkpoint_stride == Some(0) {
            return Err(Error::InvalidParameter("checkpoint stride must be positive".into()));
        }
        if !(self.stop_fraction > 0.0) {
            return Err(Error::InvalidParameter("stop fraction must be positive".into()));
        }
        Ok(())
    }

    pub fn stride(&self) -> u64 {
        self.checkpoint_stride
            .unwrap_or(self.topology.n as u64)
            .max(1)
    }

    pub fn policy_spec(&self) -> PolicySpec {
        self.policy
            .unwrap_or_else(|| PolicySpec::default_for(self.topology.kind))
    }
}

/// The deterministic parts of an experiment: graph, policy and `x(0)`.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub topology: Topology,
    pub policy: RejectionPolicy,
    pub x0: Vec<f64>,
}

impl Prepared {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let topology = cfg.topology.build()?;
        Self::with_topology(cfg, topology)
    }

    pub fn with_topology(cfg: &SimConfig, topology: Topology) -> Result<Self> {
        let policy = match cfg.protocol {
            Protocol::Geographic => cfg.policy_spec().build(&topology)?,
            // Unused by standard gossip; skip the Voronoi computation.
            Protocol::Standard => {
                let areas = topology::VoronoiTessellation::from_areas(vec![1.0; topology.n()])?;
                sampling::policy_always(&areas)
            }
        };
        let x0 = cfg.field.generate(&topology)?;
        Ok(Self {
            topology,
            policy,
            x0,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub tick: u64,
    pub error: f64,
    pub transmissions: u64,
    pub rounds: u64,
    pub max_queries: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub trajectory: Vec<Checkpoint>,
    pub converged: bool,
    pub ledger: CostLedger,
}

impl RunOutcome {
    pub fn last(&self) -> &Checkpoint {
        self.trajectory.last().expect("trajectory holds tick 0")
    }
}

/// Runs trial 0 of `cfg`.
pub fn run(cfg: &SimConfig) -> Result<RunOutcome> {
    let prep = Prepared::new(cfg)?;
    run_prepared(&prep, cfg, 0)
}

/// Runs one trial on prepared inputs, with the stream of `(cfg.seed, trial)`.
pub fn run_prepared(prep: &Prepared, cfg: &SimConfig, trial: u64) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut rng = rng::trial_stream(cfg.seed, trial);
    let mut state = init_state(&prep.topology, prep.x0.clone())?;
    let mut ledger = CostLedger::default();
    let stride = cfg.stride();
    let threshold = cfg.epsilon * cfg.stop_fraction;

    let checkpoint = |state: &GossipState, ledger: &CostLedger| -> Result<Checkpoint> {
        Ok(Checkpoint {
            tick: state.tick,
            error: error(state)?,
            transmissions: ledger.transmissions,
            rounds: ledger.rounds,
            max_queries: ledger.max_queries,
        })
    };

    let mut trajectory = vec![checkpoint(&state, &ledger)?];
    let mut converged = trajectory[0].error < threshold;
    while !converged && state.tick < cfg.max_ticks {
        let steps = (stride - state.tick % stride).min(cfg.max_ticks - state.tick);
        step(cfg.protocol, &mut state, prep, &mut ledger, &mut rng, steps)?;
        let cp = checkpoint(&state, &ledger)?;
        converged = cp.error < threshold;
        trajectory.push(cp);
    }
    Ok(RunOutcome {
        trajectory,
        converged,
        ledger,
    })
}

fn step(
    protocol: Protocol,
    state: &mut GossipState,
    prep: &Prepared,
    ledger: &mut CostLedger,
    rng: &mut SimRng,
    rounds: u64,
) -> Result<()> {
    for _ in 0..rounds {
        match protocol {
            Protocol::Standard => standard_round(state, &prep.topology, ledger, rng)?,
            Protocol::Geographic => {
                geographic_round(state, &prep.topology, &prep.policy, ledger, rng)?
            }
        }
    }
    Ok(())
}

/// Runs `trials` independent trials on a shared graph and `x(0)`, in parallel.
/// Results are ordered by trial index and do not depend on scheduling.
pub fn run_trials(cfg: &SimConfig, trials: u64) -> Result<(Prepared, Vec<RunOutcome>)> {
    let prep = Prepared::new(cfg)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| run_prepared(&prep, cfg, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((prep, outcomes))
}

/// Earliest sampled tick from which at most an `epsilon` fraction of trials
/// has error `>= epsilon`, at that tick and at every later sampled tick.
///
/// A trial that stopped early keeps its last sampled error.
pub fn averaging_time(outcomes: &[RunOutcome], epsilon: f64) -> Result<u64> {
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter("no trials".into()));
    }
    let mut ticks: Vec<u64> = outcomes
        .iter()
        .flat_map(|o| o.trajectory.iter().map(|c| c.tick))
        .collect();
    ticks.sort_unstable();
    ticks.dedup();

    let mut cursors = vec![0usize; outcomes.len()];
    let fractions: Vec<f64> = ticks
        .iter()
        .map(|&k| {
            let mut above = 0;
            for (o, cur) in outcomes.iter().zip(cursors.iter_mut()) {
                while *cur + 1 < o.trajectory.len() && o.trajectory[*cur + 1].tick <= k {
                    *cur += 1;
                }
                if o.trajectory[*cur].error >= epsilon {
                    above += 1;
                }
            }
            above as f64 / outcomes.len() as f64
        })
        .collect();

    let last_fraction = *fractions.last().expect("at least tick 0");
    if last_fraction > epsilon {
        return Err(Error::NotConverged { last_fraction });
    }
    let mut first_good = ticks.len() - 1;
    while first_good > 0 && fractions[first_good - 1] <= epsilon {
        first_good -= 1;
    }
    Ok(ticks[first_good])
}

/// ε-averaging time over `trials >= 20` independent runs from a fixed `x(0)`.
pub fn estimate_averaging_time(cfg: &SimConfig, trials: u64) -> Result<u64> {
    if trials < 20 {
        return Err(Error::InvalidParameter(format!(
            "averaging-time estimation needs at least 20 trials, got {trials}"
        )));
    }
    let (_, outcomes) = run_trials(cfg, trials)?;
    averaging_time(&outcomes, cfg.epsilon)
}

pub const TRAJECTORY_HEADER: &str = "tick,error,transmissions,rounds,max_queries";

pub fn write_trajectory_csv<W: Write + ?Sized>(trajectory: &[Checkpoint], out: &mut W) -> Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for c in trajectory {
        writeln!(
            out,
            "{},{},{},{},{}",
            c.tick, c.error, c.transmissions, c.rounds, c.max_queries
        )?;
    }
    Ok(())
}

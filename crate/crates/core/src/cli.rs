//! Command-line harness.
//!
//! Four subcommands, all deterministic for fixed flags:
//!
//! * `generate`: write a topology in the text format of
//!   [`write_topology`](crate::topology::write_topology);
//! * `run`: one simulation, trajectory CSV `tick,error,transmissions,rounds,max_queries`;
//! * `sweep`: repeated runs over a list of sizes, one summary row per
//!   `(n, protocol)` plus log-log slope rows;
//! * `spectral`: `λ₂(W)` for the standard and geographic overlays.
//!
//! Exit codes: 0 success, 2 usage, 3 not converged, 4 internal.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{
    self, PolicySpec, Prepared, Protocol, SimConfig, TopologySpec,
};
use crate::error::{Error, Result};
use crate::fields::{self, FieldSpec};
use crate::sampling;
use crate::spectral;
use crate::stats;
use crate::topology::{self, GeometryKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub const SWEEP_HEADER: &str =
    "n,protocol,trials,mean_transmissions,mean_rounds,mean_hops,mean_queries,averaging_time";
pub const SPECTRAL_HEADER: &str = "n,topology,protocol,lambda2,gap,predicted_rounds";

#[derive(Debug, Parser)]
#[command(name = "geogossip", version, about = "Gossip averaging simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a topology and write it in text form.
    Generate(GenerateArgs),
    /// Run one simulation and write its trajectory CSV.
    Run(RunArgs),
    /// Sweep network sizes and write a scaling CSV.
    Sweep(SweepArgs),
    /// Report second eigenvalues and predicted averaging times.
    Spectral(SpectralArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cycle,
    Grid,
    Rgg,
}

impl From<KindArg> for GeometryKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cycle => GeometryKind::Cycle,
            KindArg::Grid => GeometryKind::Grid,
            KindArg::Rgg => GeometryKind::Rgg,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Standard,
    Geographic,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Standard => Protocol::Standard,
            ProtocolArg::Geographic => Protocol::Geographic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Always,
    Fixed,
    Quantile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Linear,
    Diffusion,
    Spike,
    Constant,
}

#[derive(Debug, Clone, Args)]
pub struct TopologyArgs {
    #[arg(long, value_enum, default_value = "rgg")]
    pub kind: KindArg,
    #[arg(long)]
    pub n: Option<usize>,
    /// Connection radius (rgg only); defaults to √(10·ln n / n).
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl TopologyArgs {
    fn spec(&self) -> Result<TopologySpec> {
        let n = self
            .n
            .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
        Ok(TopologySpec {
            kind: self.kind.into(),
            n,
            radius: self.r,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Rejection policy; defaults to quantile on rgg and always elsewhere.
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Threshold constant for `--policy fixed` (τ = c/n).
    #[arg(long, default_value_t = 0.1)]
    pub c: f64,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.1)]
    pub nu: f64,
}

impl PolicyArgs {
    fn spec(&self) -> Option<PolicySpec> {
        self.policy.map(|p| match p {
            PolicyArg::Always => PolicySpec::Always,
            PolicyArg::Fixed => PolicySpec::Fixed { c: self.c },
            PolicyArg::Quantile => PolicySpec::Quantile {
                mu: self.mu,
                nu: self.nu,
            },
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum, default_value = "spike")]
    pub field: FieldArg,
    /// Diffusion sources.
    #[arg(long, default_value_t = fields::DEFAULT_SOURCES)]
    pub sources: usize,
    /// Diffusion smoothing iterations.
    #[arg(long, default_value_t = fields::DEFAULT_ITERATIONS)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_ticks: u64,
    /// Ticks between checkpoints; defaults to n.
    #[arg(long)]
    pub stride: Option<u64>,
}

impl SimArgs {
    fn field(&self, seed: u64) -> FieldSpec {
        match self.field {
            FieldArg::Linear => FieldSpec::Linear,
            FieldArg::Spike => FieldSpec::Spike,
            FieldArg::Constant => FieldSpec::Constant(1.0),
            FieldArg::Diffusion => FieldSpec::Diffusion {
                sources: self.sources,
                iterations: self.iterations,
                seed,
            },
        }
    }

    fn config(&self, topology: TopologySpec, protocol: Protocol) -> SimConfig {
        let mut cfg = SimConfig::new(topology, protocol, self.field(topology.seed));
        cfg.policy = self.policy.spec();
        cfg.epsilon = self.epsilon;
        cfg.max_ticks = self.max_ticks;
        cfg.checkpoint_stride = self.stride;
        cfg
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long, value_enum, default_value = "geographic")]
    pub protocol: ProtocolArg,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the initial field as `node,value` CSV.
    #[arg(long)]
    pub field_out: Option<PathBuf>,
    /// Run every configuration of a `key=value` manifest instead; see
    /// [`ExperimentManifest`].
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "rgg")]
    pub kind: KindArg,
    /// Comma-separated network sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    /// Comma-separated protocols.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "standard,geographic")]
    pub protocols: Vec<ProtocolArg>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and executes, writing CSV to `stdout`
/// unless `--out` is given. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSize(_)
        | Error::InvalidRadius(_)
        | Error::InvalidParameter(_)
        | Error::Parse(_)
        | Error::LengthMismatch { .. } => EXIT_USAGE,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_INTERNAL,
    }
}

pub fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Generate(a) => cmd_generate(a, stdout, stderr),
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::Spectral(a) => cmd_spectral(a, stdout),
    }
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

pub fn cmd_generate(a: &GenerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let t = a.topology.spec()?.build()?;
    let summary = format!("{} {} {}", t.n(), t.edge_count(), topology::is_connected(&t));
    match &a.out {
        Some(p) => {
            with_output(Some(p), stdout, |w| topology::write_topology(&t, w))?;
            writeln!(stdout, "{summary}")?;
        }
        None => {
            topology::write_topology(&t, stdout)?;
            writeln!(stderr, "{summary}")?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_run(a: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    if let Some(path) = &a.manifest {
        let converged = ExperimentManifest::load(path)?.execute()?;
        return Ok(if converged { EXIT_OK } else { EXIT_NOT_CONVERGED });
    }
    let cfg = a.sim.config(a.topology.spec()?, a.protocol.into());
    let prep = Prepared::new(&cfg)?;
    if let Some(p) = &a.field_out {
        with_output(Some(p), stdout, |w| fields::write_field_csv(&prep.x0, w))?;
    }
    let out = engine::run_prepared(&prep, &cfg, 0)?;
    with_output(a.out.as_deref(), stdout, |w| {
        engine::write_trajectory_csv(&out.trajectory, w)
    })?;
    Ok(if out.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

/// One `(n, protocol)` summary of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub protocol: Protocol,
    pub trials: u64,
    pub mean_transmissions: f64,
    pub mean_rounds: f64,
    pub mean_hops: f64,
    pub mean_queries: f64,
    pub averaging_time: Option<u64>,
    pub all_converged: bool,
}

/// Runs `trials` simulations of `cfg` and summarizes them. Transmissions and
/// rounds are taken at the first checkpoint with error below ε.
pub fn sweep_point(cfg: &SimConfig, trials: u64) -> Result<SweepRow> {
    let (_, outcomes) = engine::run_trials(cfg, trials)?;
    let pick = |f: &dyn Fn(&engine::RunOutcome) -> f64| -> f64 {
        stats::mean(&outcomes.iter().map(f).collect::<Vec<_>>())
    };
    let averaging_time = if trials >= 20 {
        engine::averaging_time(&outcomes, cfg.epsilon).ok()
    } else {
        None
    };
    Ok(SweepRow {
        n: cfg.topology.n,
        protocol: cfg.protocol,
        trials,
        mean_transmissions: pick(&|o| o.last().transmissions as f64),
        mean_rounds: pick(&|o| o.last().rounds as f64),
        mean_hops: pick(&|o| o.ledger.mean_hops()),
        mean_queries: pick(&|o| o.ledger.mean_queries()),
        averaging_time,
        all_converged: outcomes.iter().all(|o| o.converged),
    })
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if a.ns.is_empty() {
        return Err(Error::InvalidParameter("no network sizes given".into()));
    }
    let mut rows = Vec::new();
    for &proto in &a.protocols {
        for &n in &a.ns {
            let spec = TopologySpec {
                kind: a.kind.into(),
                n,
                radius: a.r,
                seed: a.seed,
            };
            let cfg = a.sim.config(spec, proto.into());
            rows.push(sweep_point(&cfg, a.trials)?);
        }
    }
    if a.ns.len() < 3 {
        writeln!(stderr, "warning: fewer than 3 sizes, slope rows omitted")?;
    }
    with_output(a.out.as_deref(), stdout, |w| {
        write_sweep_csv(&rows, a.ns.len() >= 3, w)
    })?;
    Ok(if rows.iter().all(|r| r.all_converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the summary rows, then (when asked) one `slope` row per protocol
/// holding the log-log slopes of transmissions, rounds and averaging time
/// against `n`.
pub fn write_sweep_csv(rows: &[SweepRow], slopes: bool, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.protocol.as_str(),
            r.trials,
            r.mean_transmissions,
            r.mean_rounds,
            r.mean_hops,
            r.mean_queries,
            opt(r.averaging_time)
        )?;
    }
    if slopes {
        for proto in [Protocol::Standard, Protocol::Geographic] {
            let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.protocol == proto).collect();
            if sel.len() < 3 {
                continue;
            }
            let ns: Vec<f64> = sel.iter().map(|r| r.n as f64).collect();
            let col = |f: &dyn Fn(&SweepRow) -> f64| {
                stats::log_log_slope(&ns, &sel.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            let tave = if sel.iter().all(|r| r.averaging_time.is_some()) {
                col(&|r| r.averaging_time.unwrap_or(0) as f64)
            } else {
                None
            };
            writeln!(
                w,
                "slope,{},{},{},{},{},{},{}",
                proto.as_str(),
                sel[0].trials,
                opt(col(&|r| r.mean_transmissions)),
                opt(col(&|r| r.mean_rounds)),
                opt(col(&|r| r.mean_hops)),
                opt(col(&|r| r.mean_queries)),
                opt(tave)
            )?;
        }
    }
    Ok(())
}

/// One row of the spectral report.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralRow {
    pub n: usize,
    pub kind: GeometryKind,
    pub protocol: Protocol,
    pub lambda2: f64,
    pub predicted_rounds: Option<f64>,
}

pub fn spectral_rows(
    spec: &TopologySpec,
    policy: Option<PolicySpec>,
    epsilon: f64,
) -> Result<Vec<SpectralRow>> {
    let t = spec.build()?;
    let standard = spectral::lambda2(&spectral::build_w(&spectral::selection_standard(&t)?)?)?;
    let areas = topology::voronoi_areas(&t)?;
    let policy = policy
        .unwrap_or_else(|| PolicySpec::default_for(t.kind()))
        .build(&t)?;
    let q = sampling::induced_distribution(&policy, &areas)?;
    let geographic = spectral::lambda2(&spectral::build_w(&spectral::selection_geographic(&q))?)?;
    [(Protocol::Standard, standard), (Protocol::Geographic, geographic)]
        .into_iter()
        .map(|(protocol, l2)| {
            let predicted = match spectral::predicted_rounds(l2, epsilon) {
                Ok(v) => Some(v),
                Err(Error::NoGap(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(SpectralRow {
                n: t.n(),
                kind: t.kind(),
                protocol,
                lambda2: l2,
                predicted_rounds: predicted,
            })
        })
        .collect()
}

pub fn write_spectral_csv(rows: &[SpectralRow], w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{SPECTRAL_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            r.kind,
            r.protocol.as_str(),
            r.lambda2,
            1.0 - r.lambda2,
            r.predicted_rounds
                .map(|v| v.to_string())
                .unwrap_or_else(|| "inf".into())
        )?;
    }
    Ok(())
}

pub fn cmd_spectral(a: &SpectralArgs, stdout: &mut dyn Write) -> Result<i32> {
    let rows = spectral_rows(&a.topology.spec()?, a.policy.spec(), a.epsilon)?;
    with_output(a.out.as_deref(), stdout, |w| write_spectral_csv(&rows, w))?;
    Ok(EXIT_OK)
}

/// A batch of simulations read from a line-oriented `key=value` file.
///
/// Keys before the first `[run]` line are global (`seed`, `trials`); each
/// `[run]` section then takes the long flag names of `run` with `_` or `-`
/// (`kind`, `n`, `r`, `protocol`, `policy`, `c`, `mu`, `nu`, `field`,
/// `sources`, `iterations`, `epsilon`, `max_ticks`, `stride`) and a required
/// `out`. Blank lines and lines starting with `#` are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentManifest {
    pub seed: u64,
    pub trials: u64,
    pub runs: Vec<(SimConfig, PathBuf)>,
}

impl ExperimentManifest {
    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        let mut seed = 0u64;
        let mut trials = 1u64;
        let mut sections: Vec<Vec<(String, String)>> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[run]" {
                sections.push(Vec::new());
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            let (k, v) = (k.trim().replace('-', "_"), v.trim().to_string());
            match sections.last_mut() {
                Some(sec) => sec.push((k, v)),
                None => match k.as_str() {
                    "seed" => seed = parse(&v)?,
                    "trials" => trials = parse(&v)?,
                    other => return Err(Error::Parse(format!("unknown global key `{other}`"))),
                },
            }
        }
        let runs = sections
            .iter()
            .map(|sec| section_config(sec, seed))
            .collect::<Result<Vec<_>>>()?;
        let mut outs: Vec<&PathBuf> = runs.iter().map(|(_, p)| p).collect();
        outs.sort();
        if outs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("manifest output paths must be distinct".into()));
        }
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        Ok(Self { seed, trials, runs })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(BufReader::new(File::open(path)?))
    }

    /// Runs every configuration. With one trial the trajectory goes to `out`;
    /// with more, trial `t` goes to `<stem>.trial<t>.<ext>`. Returns whether
    /// every run converged.
    pub fn execute(&self) -> Result<bool> {
        let mut all = true;
        for (cfg, out) in &self.runs {
            let prep = Prepared::new(cfg)?;
            for t in 0..self.trials {
                let res = engine::run_prepared(&prep, cfg, t)?;
                all &= res.converged;
                let path = if self.trials == 1 {
                    out.clone()
                } else {
                    trial_path(out, t)
                };
                let mut w = BufWriter::new(File::create(&path)?);
                engine::write_trajectory_csv(&res.trajectory, &mut w)?;
                w.flush()?;
            }
        }
        Ok(all)
    }
}

fn trial_path(out: &Path, t: u64) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    let name = match out.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.trial{t}.{ext}"),
        None => format!("{stem}.trial{t}"),
    };
    out.with_file_name(name)
}

fn parse<T: std::str::FromStr>(v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Parse(format!("cannot parse `{v}`")))
}

fn section_config(sec: &[(String, String)], seed: u64) -> Result<(SimConfig, PathBuf)> {
    let get = |k: &str| sec.iter().rev().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
    for (k, _) in sec {
        const KNOWN: &[&str] = &[
            "kind", "n", "r", "protocol", "policy", "c", "mu", "nu", "field", "sources",
            "iterations", "epsilon", "max_ticks", "stride", "out",
        ];
        if !KNOWN.contains(&k.as_str()) {
            return Err(Error::Parse(format!("unknown run key `{k}`")));
        }
    }
    let kind: GeometryKind = get("kind").unwrap_or("rgg").parse()?;
    let n: usize = parse(get("n").ok_or_else(|| Error::Parse("run section needs n".into()))?)?;
    let radius = get("r").map(parse).transpose()?;
    let protocol: Protocol = get("protocol").unwrap_or("geographic").parse()?;
    let num = |k: &str, d: f64| -> Result<f64> { get(k).map(parse).transpose().map(|v| v.unwrap_or(d)) };
    let policy = match get("policy") {
        None => None,
        Some("always") => Some(PolicySpec::Always),
        Some("fixed") => Some(PolicySpec::Fixed { c: num("c", 0.1)? }),
        Some("quantile") => Some(PolicySpec::Quantile {
            mu: num("mu", 0.1)?,
            nu: num("nu", 0.1)?,
        }),
        Some(other) => return Err(Error::Parse(format!("unknown policy `{other}`"))),
    };
    let mut field: FieldSpec = get("field").unwrap_or("spike").parse()?;
    if let FieldSpec::Diffusion {
        sources,
        iterations,
        ..
    } = &mut field
    {
        *sources = get("sources").map(parse).transpose()?.unwrap_or(*sources);
        *iterations = get("iterations").map(parse).transpose()?.unwrap_or(*iterations);
    }
    if let FieldSpec::Diffusion { seed: s, .. } = &mut field {
        *s = seed;
    }
    let topology = TopologySpec {
        kind,
        n,
        radius,
        seed,
    };
    let mut cfg = SimConfig::new(topology, protocol, field);
    cfg.policy = policy;
    cfg.epsilon = num("epsilon", 0.01)?;
    if let Some(v) = get("max_ticks") {
        cfg.max_ticks = parse(v)?;
    }
    cfg.checkpoint_stride = get("stride").map(parse).transpose()?;
    cfg.validate()?;
    let out = PathBuf::from(get("out").ok_or_else(|| Error::Parse("run section needs out".into()))?);
    Ok((cfg, out))
}

/// Entry point used by the binary.
pub fn main_from_env() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = main_with_args(std::env::args_os(), &mut lock, &mut io::stderr());
    let _ = lock.flush();
    code
}

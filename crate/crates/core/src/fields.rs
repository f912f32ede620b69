//! Initial observation fields.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::rng;
use crate::topology::{nearest_node, Topology};

pub const DEFAULT_SOURCES: usize = 5;
pub const DEFAULT_ITERATIONS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    /// The first coordinate of each node.
    Linear,
    /// Smoothed unit impulses at randomly chosen nodes.
    Diffusion {
        sources: usize,
        iterations: usize,
        seed: u64,
    },
    /// A single 1 at the node nearest the region center.
    Spike,
    /// The same value everywhere.
    Constant(f64),
}

impl FieldSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FieldSpec::Linear => "linear",
            FieldSpec::Diffusion { .. } => "diffusion",
            FieldSpec::Spike => "spike",
            FieldSpec::Constant(_) => "constant",
        }
    }

    pub fn generate(&self, t: &Topology) -> Result<Vec<f64>> {
        match *self {
            FieldSpec::Linear => Ok(linear_field(t)),
            FieldSpec::Spike => Ok(spike_field(t)),
            FieldSpec::Diffusion {
                sources,
                iterations,
                seed,
            } => diffusion_field(t, sources, iterations, seed),
            FieldSpec::Constant(c) => Ok(vec![c; t.n()]),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.kind_name())
    }
}

/// Parses a bare kind name; diffusion gets the default parameters and seed 0.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(FieldSpec::Linear),
            "spike" => Ok(FieldSpec::Spike),
            "diffusion" => Ok(FieldSpec::Diffusion {
                sources: DEFAULT_SOURCES,
                iterations: DEFAULT_ITERATIONS,
                seed: 0,
            }),
            "constant" => Ok(FieldSpec::Constant(1.0)),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// `x_s = u`-coordinate of node `s` (`θ/2π` on the cycle).
pub fn linear_field(t: &Topology) -> Vec<f64> {
    t.positions().iter().map(|p| p.first_coordinate()).collect()
}

pub fn spike_field(t: &Topology) -> Vec<f64> {
    let mut x = vec![0.0; t.n()];
    if !x.is_empty() {
        x[nearest_node(t, &t.center())] = 1.0;
    }
    x
}

/// Places `sources` unit impulses at distinct uniformly chosen nodes, then
/// runs `iterations` synchronous steps of `x_s ← ½x_s + ½·mean(x over N(s))`.
///
/// The smoother conserves the sum only on regular graphs.
pub fn diffusion_field(t: &Topology, sources: usize, iterations: usize, seed: u64) -> Result<Vec<f64>> {
    if sources == 0 {
        return Err(Error::InvalidParameter("diffusion needs at least one source".into()));
    }
    let n = t.n();
    let mut x = vec![0.0; n];
    let mut rng = rng::stream(seed, rng::FIELD_STREAM);
    for s in index::sample(&mut rng, n, sources.min(n)) {
        x[s] = 1.0;
    }
    let mut next = vec![0.0; n];
    for _ in 0..iterations {
        for (s, out) in next.iter_mut().enumerate() {
            let nb = t.neighbors(s);
            *out = if nb.is_empty() {
                x[s]
            } else {
                let mean = nb.iter().map(|&w| x[w]).sum::<f64>() / nb.len() as f64;
                0.5 * x[s] + 0.5 * mean
            };
        }
        std::mem::swap(&mut x, &mut next);
    }
    Ok(x)
}

/// Writes `node,value` rows.
pub fn write_field_csv<W: Write + ?Sized>(x: &[f64], out: &mut W) -> Result<()> {
    writeln!(out, "node,value")?;
    for (i, v) in x.iter().enumerate() {
        writeln!(out, "{i},{v}")?;
    }
    Ok(())
}

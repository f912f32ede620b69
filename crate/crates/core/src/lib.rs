//! Distributed averaging on sensor-network graphs.
//!
//! Two pairwise-averaging protocols are simulated under an asynchronous
//! one-activation-per-tick clock:
//!
//! * **standard gossip**: the activated node averages with a uniformly chosen
//!   one-hop neighbor;
//! * **geographic gossip**: the activated node draws a uniform location in the
//!   deployment region, greedily routes a query toward it, and averages with the
//!   node where routing stops. The receiving node accepts with a probability
//!   derived from its Voronoi cell area (rejection sampling), which tempers the
//!   partner distribution toward uniform.
//!
//! Alongside the simulator sit the spectral tools that predict convergence
//! (the averaging matrix `W` and its second eigenvalue), three initial-field
//! generators, and a CSV-producing harness used by the `geogossip` binary.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`topology`] | cycle / grid / random geometric graph, Voronoi areas |
//! | [`routing`] | greedy geographic routing |
//! | [`sampling`] | rejection-sampling policies and the induced partner law |
//! | [`engine`] | gossip rounds, cost accounting, trajectories, averaging time |
//! | [`spectral`] | selection matrices, `W`, `λ₂`, closed forms |
//! | [`fields`] | linear, diffusion and spike initial fields |
//! | [`cli`] | `generate`, `run`, `sweep`, `spectral` commands |
//!
//! ```
//! use geogossip::{engine, fields, sampling, topology};
//! use rand::SeedableRng;
//!
//! let topo = topology::build_cycle(16).unwrap();
//! let areas = topology::voronoi_areas(&topo).unwrap();
//! let policy = sampling::policy_always(&areas);
//! let mut state = engine::init_state(&topo, fields::spike_field(&topo)).unwrap();
//! let mut ledger = engine::CostLedger::default();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! for _ in 0..200 {
//!     engine::geographic_round(&mut state, &topo, &policy, &mut ledger, &mut rng).unwrap();
//! }
//! assert!(engine::error(&state).unwrap() < 1.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod fields;
pub mod rng;
pub mod routing;
pub mod sampling;
pub mod spectral;
pub mod stats;
pub mod topology;

pub use error::{Error, Result};

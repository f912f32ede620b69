//! Seeding and stream splitting.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] built from a
//! single 64-bit seed plus a stream index. Streams are disjoint, so a trial's
//! randomness depends only on `(seed, trial)` and never on how many other
//! trials run or in which order.
//!
//! | stream | consumer |
//! |--------|----------|
//! | 0 | node placement (`build_rgg`) |
//! | 1 | initial-field randomness (diffusion sources) |
//! | `TRIAL_BASE + t` | simulation trial `t` |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub const TOPOLOGY_STREAM: u64 = 0;
pub const FIELD_STREAM: u64 = 1;
pub const TRIAL_BASE: u64 = 1 << 16;

pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn trial_stream(seed: u64, trial: u64) -> SimRng {
    stream(seed, TRIAL_BASE + trial)
}

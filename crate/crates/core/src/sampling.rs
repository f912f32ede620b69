//! Rejection sampling over Voronoi areas.
//!
//! A node whose cell area `a_v` exceeds the threshold `τ` accepts an incoming
//! query with probability `r_v = min(τ/a_v, 1)`. With targets drawn uniformly
//! from the region, node `v` is queried with probability `a_v`, so accepted
//! partners follow `q_v ∝ min(τ, a_v)`: large cells are damped toward the
//! typical cell size and the partner law moves toward uniform.

use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::VoronoiTessellation;

#[derive(Clone, Debug, PartialEq)]
pub struct RejectionPolicy {
    pub tau: f64,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    accept: Vec<f64>,
    total_acceptance: f64,
}

impl RejectionPolicy {
    fn from_tau(areas: &VoronoiTessellation, tau: f64, mu: Option<f64>, nu: Option<f64>) -> Self {
        let accept: Vec<f64> = areas.areas().iter().map(|&a| (tau / a).min(1.0)).collect();
        let total_acceptance = areas
            .areas()
            .iter()
            .zip(&accept)
            .map(|(a, r)| a * r)
            .sum::<f64>()
            .min(1.0);
        Self {
            tau,
            mu,
            nu,
            accept,
            total_acceptance,
        }
    }

    /// Per-node acceptance probabilities `r_v`.
    pub fn accept(&self) -> &[f64] {
        &self.accept
    }

    pub fn accept_probability(&self, v: usize) -> f64 {
        self.accept[v]
    }

    /// Chance `P_a = Σ a_v r_v` that a uniformly targeted query is accepted.
    pub fn total_acceptance(&self) -> f64 {
        self.total_acceptance
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accept.is_empty()
    }
}

/// Threshold `τ = c/n` for `0 < c < ¼`.
pub fn policy_fixed_tau(areas: &VoronoiTessellation, c: f64) -> Result<RejectionPolicy> {
    if !(c > 0.0 && c < 0.25) {
        return Err(Error::InvalidParameter(format!("c must lie in (0, 1/4), got {c}")));
    }
    let tau = c / areas.len() as f64;
    Ok(RejectionPolicy::from_tau(areas, tau, None, None))
}

/// Threshold at the empirical area quantile `p = min(ν, μ/(1+μ))`: the k-th
/// smallest area with `k = max(1, ⌈p·n⌉)`.
///
/// At most `⌈ν·n⌉` nodes end up sampled below `1/n` and none above `(1+μ)/n`.
pub fn policy_quantile(areas: &VoronoiTessellation, mu: f64, nu: f64) -> Result<RejectionPolicy> {
    if !(mu > 0.0 && mu.is_finite()) || !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mu and nu must be positive, got mu={mu}, nu={nu}"
        )));
    }
    let n = areas.len();
    if n < 2 {
        return Err(Error::InvalidSize(format!("quantile policy needs n >= 2, got {n}")));
    }
    let p = nu.min(mu / (1.0 + mu));
    let k = ((p * n as f64).ceil() as usize).clamp(1, n);
    let mut sorted = areas.areas().to_vec();
    sorted.sort_by(f64::total_cmp);
    let tau = sorted[k - 1];
    Ok(RejectionPolicy::from_tau(areas, tau, Some(mu), Some(nu)))
}

/// Always-accept policy: `τ` at the largest area, so every `r_v = 1`.
pub fn policy_always(areas: &VoronoiTessellation) -> RejectionPolicy {
    let tau = areas.areas().iter().copied().fold(0.0, f64::max);
    let mut policy = RejectionPolicy::from_tau(areas, tau, None, None);
    policy.accept.iter_mut().for_each(|r| *r = 1.0);
    policy.total_acceptance = 1.0;
    policy
}

/// Accepted-partner law `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedDistribution {
    q: Vec<f64>,
}

impl InducedDistribution {
    pub fn from_probabilities(q: Vec<f64>) -> Result<Self> {
        let total: f64 = q.iter().sum();
        if q.is_empty() || q.iter().any(|&x| !(x >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "probabilities must be nonnegative and sum to one".into(),
            ));
        }
        Ok(Self { q })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            q: vec![1.0 / n as f64; n],
        }
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// `q_v = min(τ, a_v) / Σ_t min(τ, a_t)`.
pub fn induced_distribution(
    policy: &RejectionPolicy,
    areas: &VoronoiTessellation,
) -> Result<InducedDistribution> {
    if policy.len() != areas.len() {
        return Err(Error::LengthMismatch {
            expected: policy.len(),
            actual: areas.len(),
        });
    }
    let weights: Vec<f64> = areas.areas().iter().map(|&a| a.min(policy.tau)).collect();
    let total: f64 = weights.iter().sum();
    Ok(InducedDistribution {
        q: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// `(‖q − 1/n‖₁, ‖q − 1/n‖₂)`.
pub fn distance_to_uniform(q: &InducedDistribution) -> (f64, f64) {
    let u = 1.0 / q.len() as f64;
    let (l1, sq) = q.q.iter().fold((0.0, 0.0), |(l1, sq), &x| {
        let d = x - u;
        (l1 + d.abs(), sq + d * d)
    });
    (l1, sq.sqrt())
}

/// Mean number of queries until acceptance, `1/P_a`.
pub fn expected_queries(policy: &RejectionPolicy) -> Result<f64> {
    if !(policy.total_acceptance > 0.0) {
        return Err(Error::DegeneratePolicy("total acceptance is zero".into()));
    }
    Ok(1.0 / policy.total_acceptance)
}

/// Independent accept/reject decision at node `v`.
pub fn decide_accept<R: Rng + ?Sized>(policy: &RejectionPolicy, v: usize, rng: &mut R) -> bool {
    let r = policy.accept[v];
    r >= 1.0 || rng.gen::<f64>() < r
}

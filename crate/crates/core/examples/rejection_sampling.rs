//! Compares the partner law of plain geographic sampling with the tempered
//! laws of the fixed and quantile rejection policies.

use geogossip::engine::draw_partner;
use geogossip::rng;
use geogossip::sampling::{
    distance_to_uniform, expected_queries, induced_distribution, policy_always, policy_fixed_tau,
    policy_quantile, RejectionPolicy,
};
use geogossip::stats::total_variation;
use geogossip::topology::{build_rgg, default_radius, voronoi_areas};
use rand::Rng;

fn main() -> geogossip::Result<()> {
    let n = 100;
    let t = build_rgg(n, default_radius(n)?, 5)?;
    let areas = voronoi_areas(&t)?;

    let policies: Vec<(&str, RejectionPolicy)> = vec![
        ("always", policy_always(&areas)),
        ("fixed c=0.1", policy_fixed_tau(&areas, 0.1)?),
        ("quantile 0.1", policy_quantile(&areas, 0.1, 0.1)?),
    ];
    println!("{:<14} {:>8} {:>8} {:>8} {:>8} {:>8}", "policy", "l1", "l2*sqrt(n)", "E[Q]", "meanQ", "TV");
    for (name, policy) in &policies {
        let q = induced_distribution(policy, &areas)?;
        let (l1, l2) = distance_to_uniform(&q);

        let mut rng = rng::stream(5, 7);
        let samples = 200_000;
        let mut counts = vec![0u64; n];
        let mut queries = 0;
        for _ in 0..samples {
            let d = draw_partner(&t, policy, rng.gen_range(0..n), &mut rng)?;
            counts[d.partner] += 1;
            queries += d.queries;
        }
        let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
        println!(
            "{name:<14} {l1:>8.4} {:>10.4} {:>8.3} {:>8.3} {:>8.4}",
            l2 * (n as f64).sqrt(),
            expected_queries(policy)?,
            queries as f64 / samples as f64,
            total_variation(&freq, q.q()),
        );
    }
    Ok(())
}

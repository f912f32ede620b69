//! Routes packets toward random locations and compares the result against
//! the nearest-node oracle and the hop ceiling.

use geogossip::rng;
use geogossip::routing::{greedy_route, hop_bound};
use geogossip::topology::{build_rgg, default_radius, nearest_node, Position};
use rand::Rng;

fn main() -> geogossip::Result<()> {
    let n = 500;
    let r = default_radius(n)?;
    let t = build_rgg(n, r, 3)?;
    let bound = hop_bound(r)?;
    let mut rng = rng::stream(3, 99);

    let route = greedy_route(&t, 0, &Position::planar(0.95, 0.95));
    println!("node 0 -> (0.95, 0.95): {} hops via {:?}", route.hops, route.path);

    let trials = 10_000;
    let mut histogram = vec![0usize; bound + 2];
    let mut misses = 0;
    for _ in 0..trials {
        let source = rng.gen_range(0..n);
        let target = t.random_position(&mut rng);
        let route = greedy_route(&t, source, &target);
        if route.terminated_at != nearest_node(&t, &target) {
            misses += 1;
        }
        histogram[route.hops.min(bound + 1)] += 1;
    }
    println!("{trials} routes, {misses} stopped short of the nearest node, ceiling {bound} hops");
    for (h, c) in histogram.iter().enumerate() {
        let label = if h > bound { format!(">{bound}") } else { h.to_string() };
        println!("{label:>4} hops {c:>6} {}", "#".repeat(c * 60 / trials));
    }
    Ok(())
}

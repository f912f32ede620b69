//! Builds the three deployments and summarizes their graphs and Voronoi cells.
//!
//! ```text
//! cargo run --release --example topologies -- 400 7
//! ```

use geogossip::topology::{
    build_cycle, build_grid, build_rgg, default_radius, is_connected, voronoi_areas, Topology,
};

fn summarize(label: &str, t: &Topology) -> geogossip::Result<()> {
    let areas = voronoi_areas(t)?;
    let a = areas.areas();
    let (lo, hi) = a
        .iter()
        .fold((f64::MAX, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let degrees: Vec<usize> = (0..t.n()).map(|s| t.degree(s)).collect();
    println!(
        "{label:<6} n={:<5} edges={:<6} connected={:<5} degree {}..{}  cell area x n {:.3}..{:.3}",
        t.n(),
        t.edge_count(),
        is_connected(t),
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap(),
        lo * t.n() as f64,
        hi * t.n() as f64,
    );
    Ok(())
}

fn main() -> geogossip::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(400);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let side = (n as f64).sqrt().round() as usize;
    summarize("cycle", &build_cycle(n)?)?;
    summarize("grid", &build_grid(side * side)?)?;
    let r = default_radius(n)?;
    println!("rgg radius {r:.4}");
    summarize("rgg", &build_rgg(n, r, seed)?)?;
    Ok(())
}

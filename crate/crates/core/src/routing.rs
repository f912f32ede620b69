//! Greedy geographic routing toward a location.

use crate::error::{Error, Result};
use crate::topology::{Position, Topology};

/// Path followed by a greedily routed packet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub path: Vec<usize>,
    pub hops: usize,
    pub terminated_at: usize,
}

/// Forwards from `source` to the neighbor closest to `target` until no
/// neighbor is strictly closer than the current holder.
///
/// Equidistant neighbors are broken by lowest id. The final holder is returned
/// even when it is only a local minimum of the distance.
pub fn greedy_route(t: &Topology, source: usize, target: &Position) -> Route {
    let mut path = vec![source];
    let mut current = source;
    let mut current_d = t.distance_to(source, target);
    loop {
        let mut next = None;
        let mut best_d = current_d;
        for &w in t.neighbors(current) {
            let d = t.distance_to(w, target);
            if d < best_d {
                best_d = d;
                next = Some(w);
            }
        }
        match next {
            Some(w) => {
                path.push(w);
                current = w;
                current_d = best_d;
            }
            None => break,
        }
    }
    Route {
        hops: path.len() - 1,
        terminated_at: current,
        path,
    }
}

/// Hop count of [`greedy_route`] without materializing the path.
pub(crate) fn greedy_hops(t: &Topology, source: usize, target: &Position) -> (usize, usize) {
    let mut current = source;
    let mut current_d = t.distance_to(source, target);
    let mut hops = 0;
    loop {
        let mut next = None;
        for &w in t.neighbors(current) {
            let d = t.distance_to(w, target);
            if d < current_d {
                current_d = d;
                next = Some(w);
            }
        }
        match next {
            Some(w) => {
                current = w;
                hops += 1;
            }
            None => return (current, hops),
        }
    }
}

/// Diagnostic ceiling `⌈2/r⌉ + 1` on greedy hops in a connected random
/// geometric graph.
pub fn hop_bound(r: f64) -> Result<usize> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidRadius(r));
    }
    Ok((2.0 / r).ceil() as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_cycle, build_grid, build_rgg, default_radius, nearest_node, rgg_from_points};
    use rand::SeedableRng;
    use std::f64::consts::PI;

    #[test]
    fn target_in_own_cell() {
        let g = build_grid(16).unwrap();
        let p = g.position(5);
        let r = greedy_route(&g, 5, &p);
        assert_eq!(r.hops, 0);
        assert_eq!(r.terminated_at, 5);
        assert_eq!(r.path, vec![5]);
    }

    #[test]
    fn cycle_half_turn() {
        let c = build_cycle(8).unwrap();
        let r = greedy_route(&c, 0, &Position::angle(PI));
        assert_eq!(r.terminated_at, 4);
        assert_eq!(r.hops, 4);
        assert_eq!(r.path, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn two_node_path() {
        let t = rgg_from_points(&[(0.25, 0.5), (0.75, 0.5)], 0.6).unwrap();
        let r = greedy_route(&t, 0, &Position::planar(0.9, 0.1));
        assert_eq!(r.path, vec![0, 1]);
        assert_eq!(r.hops, 1);
    }

    #[test]
    fn hop_bound_values() {
        assert_eq!(hop_bound(0.5).unwrap(), 5);
        assert_eq!(hop_bound(2f64.sqrt()).unwrap(), 3);
        assert_eq!(hop_bound(default_radius(1000).unwrap()).unwrap(), 9);
        assert!(matches!(hop_bound(0.0), Err(Error::InvalidRadius(_))));
    }

    #[test]
    fn regular_geometries_reach_nearest() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for t in [build_cycle(37).unwrap(), build_grid(64).unwrap()] {
            for _ in 0..2000 {
                let target = t.random_position(&mut rng);
                let s = rand::Rng::gen_range(&mut rng, 0..t.n());
                let r = greedy_route(&t, s, &target);
                assert_eq!(r.terminated_at, nearest_node(&t, &target));
                assert_eq!((r.terminated_at, r.hops), greedy_hops(&t, s, &target));
            }
        }
    }

    #[test]
    fn rgg_routes_progress_monotonically() {
        let t = build_rgg(300, default_radius(300).unwrap(), 4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let target = t.random_position(&mut rng);
            let s = rand::Rng::gen_range(&mut rng, 0..t.n());
            let r = greedy_route(&t, s, &target);
            assert_eq!(r.hops, r.path.len() - 1);
            for w in r.path.windows(2) {
                assert!(t.are_adjacent(w[0], w[1]));
                assert!(t.distance_to(w[1], &target) < t.distance_to(w[0], &target));
            }
        }
    }
}

//! End-to-end acceptance checks. Every criterion prints one PASS/FAIL line per
//! checked quantity; the process exits nonzero if any of them failed.

use geogossip::cli;
use geogossip::engine::{
    self, init_state, CostLedger, PolicySpec, Protocol, SimConfig, TopologySpec,
};
use geogossip::fields::FieldSpec;
use geogossip::rng;
use geogossip::routing::{greedy_route, hop_bound};
use geogossip::sampling::{self, induced_distribution};
use geogossip::spectral::{self, build_w, lambda2, selection_geographic, selection_standard};
use geogossip::stats::{log_log_slope, total_variation};
use geogossip::topology::{
    build_cycle, build_rgg, default_radius, is_connected, nearest_node, voronoi_areas,
    GeometryKind, Position, Topology,
};
use rand::Rng;
use rayon::prelude::*;

fn report(id: u32, pass: bool, detail: &str) -> bool {
    println!("[{}] criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn connected_rgg(n: usize, count: usize) -> Vec<Topology> {
    let r = default_radius(n).unwrap();
    (0u64..)
        .map(|s| build_rgg(n, r, s).unwrap())
        .filter(is_connected)
        .take(count)
        .collect()
}

fn quantile_policy(t: &Topology) -> sampling::RejectionPolicy {
    PolicySpec::Quantile { mu: 0.1, nu: 0.1 }.build(t).unwrap()
}

fn criterion_01_spectral_closed_forms() -> bool {
    let mut cycle_err: f64 = 0.0;
    let mut overlay_err: f64 = 0.0;
    for n in [4, 8, 16, 32, 64, 128] {
        let c = build_cycle(n).unwrap();
        let got = lambda2(&build_w(&selection_standard(&c).unwrap()).unwrap()).unwrap();
        cycle_err = cycle_err.max((got - spectral::closed_form_cycle_lambda2(n).unwrap()).abs());

        let u = sampling::InducedDistribution::uniform(n);
        let got = lambda2(&build_w(&selection_geographic(&u)).unwrap()).unwrap();
        overlay_err =
            overlay_err.max((got - spectral::closed_form_complete_lambda2(n).unwrap()).abs());
    }
    let a = report(1, cycle_err <= 1e-9, &format!("cycle lambda2 max error {cycle_err:.3e} (tol 1e-9)"));
    let b = report(
        1,
        overlay_err <= 1e-9,
        &format!("overlay lambda2 vs 1-1/n+1/n^2 max error {overlay_err:.3e} (tol 1e-9)"),
    );
    a && b
}

fn averaging_slope(kind: GeometryKind, ns: &[usize], protocol: Protocol, field: FieldSpec, trials: u64) -> (Vec<f64>, Option<f64>) {
    let times: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let cfg = SimConfig::new(TopologySpec { seed: 1, ..TopologySpec::new(kind, n) }, protocol, field);
            engine::estimate_averaging_time(&cfg, trials).unwrap() as f64
        })
        .collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = log_log_slope(&xs, &times);
    (times, slope)
}

fn criterion_02_cycle_scaling() -> bool {
    let ns = [32, 64, 128];
    let (ts, s) = averaging_slope(GeometryKind::Cycle, &ns, Protocol::Standard, FieldSpec::Spike, 50);
    let s = s.unwrap_or(f64::NAN);
    let a = report(2, (s - 3.0).abs() <= 0.5, &format!("cycle standard T_ave {ts:?}, slope {s:.3} (3.0 ± 0.5)"));
    let (tg, g) = averaging_slope(GeometryKind::Cycle, &ns, Protocol::Geographic, FieldSpec::Spike, 50);
    let g = g.unwrap_or(f64::NAN);
    let b = report(2, (g - 1.0).abs() <= 0.3, &format!("cycle geographic T_ave {tg:?}, slope {g:.3} (1.0 ± 0.3)"));
    a && b
}

fn transmissions(kind: GeometryKind, ns: &[usize], protocol: Protocol, trials: u64) -> Vec<f64> {
    ns.iter()
        .map(|&n| {
            let mut cfg = SimConfig::new(
                TopologySpec { seed: 1, ..TopologySpec::new(kind, n) },
                protocol,
                FieldSpec::Linear,
            );
            cfg.policy = Some(PolicySpec::default_for(kind));
            let row = cli::sweep_point(&cfg, trials).unwrap();
            assert!(row.all_converged, "{kind} n={n} {protocol:?} did not converge");
            row.mean_transmissions
        })
        .collect()
}

fn slope_of(ns: &[usize], ys: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    log_log_slope(&xs, ys).unwrap_or(f64::NAN)
}

fn criterion_03_grid_scaling() -> bool {
    let ns = [64, 256, 1024];
    let std = transmissions(GeometryKind::Grid, &ns, Protocol::Standard, 20);
    let geo = transmissions(GeometryKind::Grid, &ns, Protocol::Geographic, 20);
    let (s, g) = (slope_of(&ns, &std), slope_of(&ns, &geo));
    let a = report(3, (s - 2.0).abs() <= 0.3, &format!("grid standard transmissions {std:.0?}, slope {s:.3} (2.0 ± 0.3)"));
    let b = report(3, (g - 1.5).abs() <= 0.3, &format!("grid geographic transmissions {geo:.0?}, slope {g:.3} (1.5 ± 0.3)"));
    a && b
}

fn criterion_04_rgg_headline() -> bool {
    let ns = [100, 200, 400, 800];
    let std = transmissions(GeometryKind::Rgg, &ns, Protocol::Standard, 20);
    let geo = transmissions(GeometryKind::Rgg, &ns, Protocol::Geographic, 20);
    let (s, g) = (slope_of(&ns, &std), slope_of(&ns, &geo));
    let ratios: Vec<f64> = geo.iter().zip(&std).map(|(g, s)| g / s).collect();
    let a = report(4, g <= 1.7, &format!("rgg geographic transmissions {geo:.0?}, slope {g:.3} (<= 1.7)"));
    let b = report(4, s >= 1.8, &format!("rgg standard transmissions {std:.0?}, slope {s:.3} (>= 1.8)"));
    let c = report(
        4,
        ratios.windows(2).all(|w| w[1] < w[0]),
        &format!("geographic/standard ratio {ratios:.3?} strictly decreasing"),
    );
    a && b && c
}

fn criterion_05_routing() -> bool {
    let n = 500;
    let graphs = connected_rgg(n, 20);
    let per_seed: Vec<(f64, f64, f64)> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let r = t.radius().unwrap();
            let bound = hop_bound(r).unwrap();
            let mut rng = rng::trial_stream(i as u64, 0);
            let routes = 10_000;
            let (mut nearest, mut within, mut hops) = (0, 0, 0usize);
            for _ in 0..routes {
                let source = rng.gen_range(0..n);
                let target = t.random_position(&mut rng);
                let route = greedy_route(t, source, &target);
                nearest += (route.terminated_at == nearest_node(t, &target)) as usize;
                within += (route.hops <= bound) as usize;
                hops += route.hops;
            }
            let mean_ratio = hops as f64 / routes as f64 / (2.0 / r);
            (nearest as f64 / routes as f64, within as f64 / routes as f64, mean_ratio)
        })
        .collect();
    let worst_nearest = per_seed.iter().map(|p| p.0).fold(1.0, f64::min);
    let worst_within = per_seed.iter().map(|p| p.1).fold(1.0, f64::min);
    let ratio_lo = per_seed.iter().map(|p| p.2).fold(f64::MAX, f64::min);
    let ratio_hi = per_seed.iter().map(|p| p.2).fold(0.0, f64::max);
    let a = report(5, worst_nearest >= 0.99, &format!("worst-seed fraction ending at nearest node {worst_nearest:.4} (>= 0.99)"));
    let b = report(5, worst_within >= 0.99, &format!("worst-seed fraction within hop bound {worst_within:.4} (>= 0.99)"));
    let c = report(
        5,
        ratio_lo >= 0.05 && ratio_hi <= 1.0,
        &format!("mean hops/(2/r) in [{ratio_lo:.3}, {ratio_hi:.3}] (within [0.05, 1.0])"),
    );
    a && b && c
}

fn criterion_06_rejection_sampling_law() -> bool {
    let n = 100;
    let t = &connected_rgg(n, 1)[0];
    let areas = voronoi_areas(t).unwrap();
    let policy = quantile_policy(t);
    let q = induced_distribution(&policy, &areas).unwrap();

    let samples = 1_000_000u64;
    let chunks = 16u64;
    let partial: Vec<(Vec<u64>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::trial_stream(6, c);
            let mut counts = vec![0u64; n];
            let mut queries = 0;
            for _ in 0..samples / chunks {
                let source = rng.gen_range(0..n);
                let d = engine::draw_partner(t, &policy, source, &mut rng).unwrap();
                counts[d.partner] += 1;
                queries += d.queries;
            }
            (counts, queries)
        })
        .collect();
    let mut counts = vec![0u64; n];
    let mut queries = 0;
    for (c, qs) in partial {
        counts.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        queries += qs;
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let tv = total_variation(&freq, q.q());
    let max_freq = freq.iter().cloned().fold(0.0, f64::max);
    let cap = (1.0 + 0.1) / n as f64 * 1.1;
    let mean_q = queries as f64 / samples as f64;
    let expected = sampling::expected_queries(&policy).unwrap();
    let rel = (mean_q - expected).abs() / expected;
    let a = report(6, tv <= 0.02, &format!("TV(empirical, q) = {tv:.4} (<= 0.02)"));
    let b = report(6, max_freq <= cap, &format!("max frequency {max_freq:.5} (<= {cap:.5})"));
    let c = report(6, rel <= 0.05, &format!("mean queries {mean_q:.4} vs 1/P_a {expected:.4}, rel {rel:.4} (<= 0.05)"));
    a && b && c
}

fn criterion_07_threshold_coverage() -> bool {
    let n = 500;
    let r = default_radius(n).unwrap();
    let tessellations: Vec<Vec<f64>> = (0..50u64)
        .into_par_iter()
        .map(|s| voronoi_areas(&build_rgg(n, r, s).unwrap()).unwrap().areas().to_vec())
        .collect();
    let mut ok = true;
    for c in [0.05, 0.1, 0.2] {
        let tau = c / n as f64;
        let good = tessellations
            .iter()
            .filter(|a| a.iter().filter(|&&x| x > tau).count() as f64 / n as f64 >= 1.0 - 4.0 * c)
            .count();
        ok &= report(7, good as f64 >= 0.95 * 50.0, &format!("c = {c}: {good}/50 seeds with fraction above tau >= {}", 1.0 - 4.0 * c));
    }
    ok
}

fn criterion_08_max_queries() -> bool {
    let n = 200;
    let t = &connected_rgg(n, 1)[0];
    let policy = quantile_policy(t);
    let pa = policy.total_acceptance();
    let (k, eps) = (10_000f64, 0.05f64);
    let bound = ((k.ln() + (2.0 / eps).ln()) / -(1.0 - pa).ln()).ceil() as u64;
    let reps = 200u64;
    let maxima: Vec<u64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng::trial_stream(8, rep);
            let mut state = init_state(t, vec![0.0; n]).unwrap();
            let mut ledger = CostLedger::default();
            for _ in 0..k as u64 {
                engine::geographic_round(&mut state, t, &policy, &mut ledger, &mut rng).unwrap();
            }
            ledger.max_queries
        })
        .collect();
    // Q is the number of queries issued in a round, the accepted one included.
    let good = maxima.iter().filter(|&&m| m <= bound).count();
    let rejections_only = maxima.iter().filter(|&&m| m - 1 <= bound).count();
    let pass = good as f64 >= 0.975 * reps as f64;
    let worst = maxima.iter().max().unwrap();
    report(
        8,
        pass,
        &format!(
            "P_a = {pa:.3}, bound {bound}, {good}/{reps} repetitions within (worst {worst}, need >= 97.5%; {rejections_only}/{reps} counting rejections only)"
        ),
    )
}

fn mass_and_extremes(protocol: Protocol) -> (f64, bool) {
    let t = &connected_rgg(200, 1)[0];
    let policy = quantile_policy(t);
    let x0 = geogossip::fields::linear_field(t);
    let mut state = init_state(t, x0).unwrap();
    let mut ledger = CostLedger::default();
    let mut rng = rng::trial_stream(9, (protocol == Protocol::Geographic) as u64);
    let initial = state.sum();
    let (mut hi, mut lo) = extremes(state.x());
    let mut monotone = true;
    for _ in 0..1_000_000 {
        match protocol {
            Protocol::Standard => engine::standard_round(&mut state, t, &mut ledger, &mut rng),
            Protocol::Geographic => engine::geographic_round(&mut state, t, &policy, &mut ledger, &mut rng),
        }
        .unwrap();
        let (h, l) = extremes(state.x());
        monotone &= h <= hi && l >= lo;
        (hi, lo) = (h, l);
    }
    ((state.sum() - initial).abs() / initial.abs(), monotone)
}

fn extremes(x: &[f64]) -> (f64, f64) {
    x.iter().fold((f64::MIN, f64::MAX), |(h, l), &v| (h.max(v), l.min(v)))
}

fn voronoi_against_monte_carlo() -> (f64, f64) {
    let t = build_rgg(50, 0.3, 9).unwrap();
    let areas = voronoi_areas(&t).unwrap();
    let sum_err = (areas.areas().iter().sum::<f64>() - 1.0).abs();
    let points = 1_000_000;
    let mut rng = rng::trial_stream(9, 1000);
    let mut hits = vec![0u64; t.n()];
    let sites: Vec<(f64, f64)> = t.positions().iter().map(|p| match *p {
            Position::Planar { u, v } => (u, v),
            Position::Angle(_) => unreachable!(),
        }).collect();
    for _ in 0..points {
        let (u, v): (f64, f64) = (rng.gen(), rng.gen());
        let best = sites
            .iter()
            .enumerate()
            .map(|(i, s)| (i, (s.0 - u).powi(2) + (s.1 - v).powi(2)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0;
        hits[best] += 1;
    }
    let worst_z = areas
        .areas()
        .iter()
        .zip(&hits)
        .map(|(&a, &h)| {
            let sd = (points as f64 * a * (1.0 - a)).sqrt();
            (h as f64 - points as f64 * a).abs() / sd
        })
        .fold(0.0, f64::max);
    (sum_err, worst_z)
}

fn routes_make_progress() -> bool {
    let t = build_rgg(500, default_radius(500).unwrap(), 9).unwrap();
    let mut rng = rng::trial_stream(9, 2000);
    (0..100_000).all(|_| {
        let source = rng.gen_range(0..t.n());
        let target = t.random_position(&mut rng);
        let route = greedy_route(&t, source, &target);
        route
            .path
            .windows(2)
            .all(|w| t.are_adjacent(w[0], w[1]) && t.distance_to(w[1], &target) < t.distance_to(w[0], &target))
    })
}

fn reruns_identical() -> bool {
    let dir = tempfile::tempdir().unwrap();
    let once = |tag: &str| {
        let topo = dir.path().join(format!("topo{tag}.txt"));
        let traj = dir.path().join(format!("traj{tag}.csv"));
        let mut sink = Vec::new();
        let mut err = Vec::new();
        let code = cli::main_with_args(
            ["geogossip", "generate", "--kind", "rgg", "--n", "150", "--seed", "4", "--out", topo.to_str().unwrap()],
            &mut sink,
            &mut err,
        );
        assert_eq!(code, 0);
        let code = cli::main_with_args(
            ["geogossip", "run", "--kind", "rgg", "--n", "150", "--seed", "4", "--protocol", "geographic", "--out", traj.to_str().unwrap()],
            &mut sink,
            &mut err,
        );
        assert_eq!(code, 0);
        (std::fs::read(topo).unwrap(), std::fs::read(traj).unwrap())
    };
    once("a") == once("b")
}

fn criterion_09_property_suite() -> bool {
    let mut ok = true;
    for protocol in [Protocol::Standard, Protocol::Geographic] {
        let (drift, monotone) = mass_and_extremes(protocol);
        ok &= report(9, drift <= 1e-9, &format!("{protocol:?} relative mass drift after 1e6 rounds {drift:.3e} (<= 1e-9)"));
        ok &= report(9, monotone, &format!("{protocol:?} max nonincreasing and min nondecreasing every round"));
    }
    let (sum_err, z) = voronoi_against_monte_carlo();
    ok &= report(9, sum_err <= 1e-9, &format!("Voronoi areas sum error {sum_err:.3e} (<= 1e-9)"));
    ok &= report(9, z <= 3.0, &format!("Voronoi vs Monte-Carlo worst deviation {z:.2} sd (<= 3)"));
    ok &= report(9, routes_make_progress(), "1e5 greedy routes strictly approach their targets along edges");
    ok &= report(9, reruns_identical(), "generate and run outputs byte-identical across reruns");
    ok
}

fn criterion_10_gap_certificate() -> bool {
    let n = 200;
    let r = default_radius(n).unwrap();
    let results: Vec<(f64, f64, f64)> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            let t = build_rgg(n, r, s).unwrap();
            let areas = voronoi_areas(&t).unwrap();
            let policy = quantile_policy(&t);
            let q = induced_distribution(&policy, &areas).unwrap();
            let w = build_w(&selection_geographic(&q)).unwrap();
            (
                spectral::theorem1_gap_certificate(&q),
                spectral::deflated_top_eigenvalue(&w).unwrap(),
                lambda2(&w).unwrap(),
            )
        })
        .collect();
    let held = results.iter().filter(|(c, d, l)| c >= d && c >= l).count();
    let slack = results.iter().map(|(c, d, _)| c - d).fold(f64::MAX, f64::min);
    report(10, held == results.len(), &format!("certificate bounds the deflated top eigenvalue on {held}/50 policies (min slack {slack:.3e})"))
}

fn main() {
    let criteria: [(u32, fn() -> bool); 10] = [
        (1, criterion_01_spectral_closed_forms),
        (2, criterion_02_cycle_scaling),
        (3, criterion_03_grid_scaling),
        (4, criterion_04_rgg_headline),
        (5, criterion_05_routing),
        (6, criterion_06_rejection_sampling_law),
        (7, criterion_07_threshold_coverage),
        (8, criterion_08_max_queries),
        (9, criterion_09_property_suite),
        (10, criterion_10_gap_certificate),
    ];
    let failed: Vec<u32> = criteria
        .into_iter()
        .filter_map(|(id, check)| (!check()).then_some(id))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: {} of 10 criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}

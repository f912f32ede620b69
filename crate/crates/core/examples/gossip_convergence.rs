//! Runs standard and geographic gossip on the same random network and prints
//! their error trajectories and radio costs.

use geogossip::engine::{run, Protocol, SimConfig, TopologySpec};
use geogossip::fields::FieldSpec;
use geogossip::topology::GeometryKind;

fn main() -> geogossip::Result<()> {
    let n = 300;
    let spec = TopologySpec {
        seed: 11,
        ..TopologySpec::new(GeometryKind::Rgg, n)
    };
    for protocol in [Protocol::Standard, Protocol::Geographic] {
        let mut cfg = SimConfig::new(spec, protocol, FieldSpec::Linear);
        cfg.epsilon = 0.001;
        let out = run(&cfg)?;
        let last = out.last();
        println!(
            "{}: converged={} after {} rounds, {} transmissions, {:.2} hops and {:.2} queries per round",
            protocol.as_str(),
            out.converged,
            last.rounds,
            last.transmissions,
            out.ledger.mean_hops(),
            out.ledger.mean_queries(),
        );
        let every = (out.trajectory.len() / 8).max(1);
        for c in out.trajectory.iter().step_by(every) {
            println!("  tick {:>8}  error {:.3e}  tx {:>9}", c.tick, c.error, c.transmissions);
        }
    }
    Ok(())
}

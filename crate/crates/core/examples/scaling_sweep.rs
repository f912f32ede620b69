//! Measures cost to reach ε over growing networks and fits log-log slopes.
//!
//! ```text
//! cargo run --release --example scaling_sweep -- grid
//! ```

use geogossip::cli::{sweep_point, write_sweep_csv};
use geogossip::engine::{Protocol, SimConfig, TopologySpec};
use geogossip::fields::FieldSpec;
use geogossip::topology::GeometryKind;

fn main() -> geogossip::Result<()> {
    let kind: GeometryKind = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "cycle".into())
        .parse()?;
    let (ns, field): (&[usize], _) = match kind {
        GeometryKind::Cycle => (&[32, 64, 128], FieldSpec::Spike),
        GeometryKind::Grid => (&[64, 256, 1024], FieldSpec::Linear),
        GeometryKind::Rgg => (&[100, 200, 400, 800], FieldSpec::Linear),
    };
    let mut rows = Vec::new();
    for protocol in [Protocol::Standard, Protocol::Geographic] {
        for &n in ns {
            let spec = TopologySpec {
                seed: 1,
                ..TopologySpec::new(kind, n)
            };
            rows.push(sweep_point(&SimConfig::new(spec, protocol, field), 20)?);
        }
    }
    write_sweep_csv(&rows, true, &mut std::io::stdout())
}

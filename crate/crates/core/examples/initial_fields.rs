//! Generates each initial field on a grid and reports how far it starts from
//! consensus.

use geogossip::engine::{error, init_state};
use geogossip::fields::{write_field_csv, FieldSpec};
use geogossip::topology::build_grid;

fn main() -> geogossip::Result<()> {
    let t = build_grid(256)?;
    let fields = [
        FieldSpec::Linear,
        FieldSpec::Spike,
        FieldSpec::Diffusion {
            sources: 5,
            iterations: 50,
            seed: 3,
        },
        FieldSpec::Constant(2.5),
    ];
    for f in fields {
        let x = f.generate(&t)?;
        let s = init_state(&t, x)?;
        println!("{f:<10} mean {:.4}  initial error {:.4}", s.average(), error(&s)?);
    }
    if let Some(path) = std::env::args().nth(1) {
        let x = FieldSpec::Linear.generate(&t)?;
        write_field_csv(&x, &mut std::fs::File::create(&path)?)?;
        println!("linear field written to {path}");
    }
    Ok(())
}

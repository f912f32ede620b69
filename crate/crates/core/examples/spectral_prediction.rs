//! Second eigenvalues of the expected averaging matrices, the rounds they
//! predict, and the gap certificate for the tempered partner law.

use geogossip::engine::PolicySpec;
use geogossip::sampling::induced_distribution;
use geogossip::spectral::{
    build_w, closed_form_cycle_lambda2, deflated_top_eigenvalue, lambda2, predicted_rounds,
    random_walk_lambda2, selection_geographic, selection_standard, theorem1_gap_certificate,
};
use geogossip::topology::{build_cycle, build_grid, build_rgg, default_radius, voronoi_areas};

fn main() -> geogossip::Result<()> {
    let eps = 0.01;
    println!("cycle: n, lambda2, closed form, predicted rounds");
    for n in [16, 32, 64, 128] {
        let l2 = lambda2(&build_w(&selection_standard(&build_cycle(n)?)?)?)?;
        println!("  {n:>4} {l2:.9} {:.9} {:>10.1}", closed_form_cycle_lambda2(n)?, predicted_rounds(l2, eps)?);
    }

    println!("grid: n, (1 - walk lambda2) * n");
    for m in [4, 8, 16] {
        let g = build_grid(m * m)?;
        println!("  {:>4} {:.3}", m * m, (1.0 - random_walk_lambda2(&g)?) * (m * m) as f64);
    }

    println!("rgg: n, standard rounds, geographic rounds, certificate - deflated eigenvalue");
    for n in [100, 200, 400] {
        let t = build_rgg(n, default_radius(n)?, 1)?;
        let std_l2 = lambda2(&build_w(&selection_standard(&t)?)?)?;
        let policy = PolicySpec::Quantile { mu: 0.1, nu: 0.1 }.build(&t)?;
        let q = induced_distribution(&policy, &voronoi_areas(&t)?)?;
        let w = build_w(&selection_geographic(&q))?;
        println!(
            "  {n:>4} {:>10.0} {:>10.0} {:.2e}",
            predicted_rounds(std_l2, eps)?,
            predicted_rounds(lambda2(&w)?, eps)?,
            theorem1_gap_certificate(&q) - deflated_top_eigenvalue(&w)?,
        );
    }
    Ok(())
}

//! Range dimension of the transform on each true poly-Bergman level, next to
//! the SVD rank of sampled transforms.

use polybergman::quad::QuadratureRule;
use polybergman::range::{default_sample_points, numeric_rank_oracle, printed_dimension, range_profile, RANK_TOL};

fn main() -> polybergman::Result<()> {
    for (gamma, alpha) in [(0.0, 0.0), (0.3, 1.0), (0.0, 2.0), (1.0, 2.5)] {
        let rule = QuadratureRule::with_defaults(alpha)?;
        println!("gamma={gamma} alpha={alpha}");
        for n in 0..=6 {
            let p = range_profile(gamma, alpha, n)?;
            let rank = numeric_rank_oracle(gamma, alpha, n, &rule, &default_sample_points(n), RANK_TOL)?;
            println!(
                "  n={n} dim={} rank={rank} alt={} poles={:?} kernel={:?}",
                p.dimension,
                printed_dimension(gamma, alpha, n),
                p.range_exponents,
                p.kernel_ms
            );
        }
    }
    Ok(())
}

//! Evaluates a few disc polynomials and checks them against their monomial expansion.

use num_complex::Complex64;
use polybergman::discpoly::{disc_poly_expand, eval_disc_poly, DiscPolyIndex};

fn main() -> polybergman::Result<()> {
    let zeta = Complex64::new(0.3, 0.4);
    for gamma in [0.0, 0.5, 2.0] {
        for (m, n) in [(1, 1), (2, 1), (3, 2), (4, 4)] {
            let idx = DiscPolyIndex::new(m, n);
            let direct = eval_disc_poly(gamma, idx, zeta)?;
            let expanded = disc_poly_expand(gamma, idx)?;
            let termwise = expanded.eval(zeta)?;
            println!(
                "gamma={gamma:<3} R_{{{m},{n}}}(0.3+0.4i) = {:.12} {:+.12}i  ({} terms, diff {:.1e})",
                direct.re,
                direct.im + 0.0,
                expanded.len(),
                (direct - termwise).norm()
            );
        }
    }
    Ok(())
}

//! Gauss–Jacobi nodes on `(0, 1)` and the disc tensor rule built from them.

use num_complex::Complex64;
use polybergman::quad::{disc_integral, gauss_jacobi_rule, QuadratureRule};
use polybergman::weights::moment;

fn main() -> polybergman::Result<()> {
    for (n, exponent) in [(4, 0.0), (4, 2.5), (6, -0.5)] {
        println!("n={n} exponent={exponent}");
        for (t, w) in gauss_jacobi_rule(n, exponent)? {
            println!("  t={t:.16} w={w:.16}");
        }
    }

    // ∫_D |ζ|^{2k} (1−|ζ|²)^α dλ = π · moment(k, 0, α)
    let alpha = 1.5;
    let rule = QuadratureRule::new(16, alpha, 64)?;
    for k in [0, 3, 15, 31] {
        let q = disc_integral(|z| Complex64::new(z.norm_sqr().powi(k as i32), 0.0), &rule);
        let exact = std::f64::consts::PI * moment(k, 0, alpha)?;
        println!("k={k:>2} quadrature {:.16e} exact {exact:.16e}", q.re);
    }
    Ok(())
}

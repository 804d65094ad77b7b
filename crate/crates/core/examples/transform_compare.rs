//! Quadrature versus closed form for the weighted Cauchy transform of `R^γ_{m,n}`.

use num_complex::Complex64;
use polybergman::cauchy::{angular_count_for, compare_discpoly};
use polybergman::discpoly::DiscPolyIndex;
use polybergman::quad::{QuadratureRule, DEFAULT_ANGULAR_COUNT, DEFAULT_RADIAL_NODES};

fn main() -> polybergman::Result<()> {
    let (gamma, alpha) = (0.5, 1.0);
    let points = [
        Complex64::new(1.5, 0.0),
        Complex64::from_polar(2.0, std::f64::consts::PI / 3.0),
        Complex64::new(1.01, 0.0),
    ];
    for z in points {
        let angular = angular_count_for(z, DEFAULT_ANGULAR_COUNT, 1e-16);
        let rule = QuadratureRule::new(DEFAULT_RADIAL_NODES, alpha, angular)?;
        println!("z = {z:.4}, {angular} angles");
        for (m, n) in [(0, 0), (1, 2), (2, 2), (3, 1), (2, 5)] {
            let r = compare_discpoly(gamma, alpha, DiscPolyIndex::new(m, n), z, &rule)?;
            println!(
                "  (m,n)=({m},{n}) numeric {:.6e}  closed {:.6e}  |err| {:.1e}",
                r.numeric, r.closed, r.abs_err
            );
        }
    }
    Ok(())
}

//! Weighted norms of `z^{−p}` outside the disc: closed form, annulus quadrature
//! and divergence reporting.

use polybergman::cauchy::{exterior_norm_sq_power, exterior_norm_sq_power_numeric};
use polybergman::weights::ExteriorWeight;

fn main() -> polybergman::Result<()> {
    let weight = ExteriorWeight::new(-4.0, 2.0);
    for p in 1..=5 {
        let closed = exterior_norm_sq_power(p, weight)?.value().unwrap();
        let (numeric, tail) = exterior_norm_sq_power_numeric(p, weight, 1e4, 32)?;
        println!(
            "p={p} closed {closed:.15}  (x pi^-1 = {:.15})  numeric {numeric:.15}  tail <= {tail:.1e}",
            closed / std::f64::consts::PI
        );
    }
    for (a, b) in [(0.0, 0.0), (1.0, 2.0), (-2.0, -1.5)] {
        println!("a={a} b={b} p=1: {:?}", exterior_norm_sq_power(1, ExteriorWeight::new(a, b))?);
    }
    Ok(())
}

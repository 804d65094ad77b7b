//! Interior and exterior weight functionals and the resulting norm bound,
//! tested on random polyanalytic functions.

use polybergman::cauchy::{bound_constant, laurent_norm_sq, transform_polyanalytic_closed};
use polybergman::discpoly::{inner_product_fns, random_polyanalytic};
use polybergman::weights::{v_functional, w_functional, ExteriorWeight, WeightParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polybergman::Result<()> {
    for (a, b) in [(-4.0, 2.0), (-3.0, 2.0), (-1.0, 2.0), (0.0, 0.0)] {
        let w = ExteriorWeight::new(a, b);
        println!("a={a} b={b}: W = {:?}", w_functional(w, 1e-14)?);
    }
    for (g, al) in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)] {
        println!("gamma={g} alpha={al}: V = {:?}", v_functional(WeightParams::new(g, al)?));
    }

    let params = WeightParams::new(0.0, 0.0)?;
    let weight = ExteriorWeight::new(-4.0, 2.0);
    let constant = bound_constant(params, weight)?.value().expect("finite for these weights");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = random_polyanalytic(&mut rng, 4, 6);
        let lhs = laurent_norm_sq(&transform_polyanalytic_closed(&f, 0.0)?, weight)?.value().unwrap();
        let norm = inner_product_fns(&f, &f, 0.0)?.re;
        worst = worst.max(lhs / norm);
    }
    println!("constant {constant:.6}, largest ||Cf||^2/||f||^2 over 100 draws {worst:.6}");
    Ok(())
}

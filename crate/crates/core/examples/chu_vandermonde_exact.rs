//! The terminating `₂F₁(−m, b; c; 1)` sum equals `(c−b)_m/(c)_m` exactly in rationals,
//! while the same sum in floating point drifts.

use polybergman::scalar::{chu_vandermonde_rhs, hyp2f1_terminating, rational};
use num_traits::ToPrimitive;

fn main() -> polybergman::Result<()> {
    let (b, c) = (rational(-7, 3), rational(9, 2));
    for m in [2, 5, 10, 20] {
        let lhs = hyp2f1_terminating(m, b.clone(), c.clone())?;
        let rhs = chu_vandermonde_rhs(m, b.clone(), c.clone())?;
        let float = hyp2f1_terminating(m, -7.0 / 3.0, 4.5)?;
        let exact = rhs.to_f64().unwrap();
        println!(
            "m={m:>2} exact equal: {}  value {exact:.16e}  f64 rel err {:.1e}",
            lhs == rhs,
            ((float - exact) / exact).abs()
        );
    }
    Ok(())
}

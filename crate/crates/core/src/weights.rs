//! Radial weights on `(0,1)` and on the exterior of the disc.
//!
//! Interior weights are `ω_e(t) = (1−t)^e`; the exterior family is
//! `B_{a,b}(t) = t^a (t−1)^b` for `t > 1`. The two boundedness functionals
//!
//! ```text
//! V = ∫₀¹ ω_α(t)² / ω_γ(t) dt
//! W = ∫₀¹ B(1/t²) / (t (1−t)²) dt
//! ```
//!
//! are returned as [`Finiteness`] values so that divergence can be tabulated
//! alongside finite results.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{gauss_jacobi_unit, QuadratureRule};
use crate::scalar::{beta_fn, factorial, pochhammer, Rational};

/// Interior exponent `gamma` of `(1−t)^γ` and transform exponent `alpha` of `(1−t)^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightParams {
    pub gamma: f64,
    pub alpha: f64,
}

impl WeightParams {
    /// Both exponents must exceed −1 so the weights are integrable.
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma > -1.0) {
            return Err(Error::Parameter(format!("gamma must exceed -1, got {gamma}")));
        }
        if !(alpha > -1.0) {
            return Err(Error::Parameter(format!("alpha must exceed -1, got {alpha}")));
        }
        Ok(Self { gamma, alpha })
    }

    /// `α > (γ−1)/2`, equivalently `V < ∞`.
    pub fn is_bounded(&self) -> bool {
        self.alpha > (self.gamma - 1.0) / 2.0
    }

    pub fn require_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "boundedness needs alpha > (gamma - 1)/2, got gamma={}, alpha={}",
                self.gamma, self.alpha
            )))
        }
    }
}

/// Exterior weight `B_{a,b}(t) = t^a (t−1)^b` on `t > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExteriorWeight {
    pub a: f64,
    pub b: f64,
}

impl ExteriorWeight {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn eval(&self, t: f64) -> f64 {
        t.powf(self.a) * (t - 1.0).powf(self.b)
    }

    /// The sufficient condition `−a < b < −1` stated in the literature for this
    /// family. It does not make `W` finite; see [`w_functional`].
    pub fn stated_condition(&self) -> bool {
        -self.a < self.b && self.b < -1.0
    }
}

/// Endpoint of `(0,1)` at which an integral diverges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    Zero,
    One,
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Endpoint::Zero => write!(f, "t=0"),
            Endpoint::One => write!(f, "t=1"),
        }
    }
}

/// A value that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Finiteness {
    Finite(f64),
    Divergent(Endpoint),
}

impl Finiteness {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Finiteness::Finite(v) => Some(v),
            Finiteness::Divergent(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite(_))
    }
}

fn check_moment_domain(s: u32, alpha: f64) -> Result<()> {
    if f64::from(s) + alpha > -1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "moment needs s + alpha > -1, got s={s}, alpha={alpha}"
        )))
    }
}

/// `∫₀¹ t^k (1−t)^{s+α} dt = B(k+1, s+α+1) = k! / (s+α+1)_{k+1}`.
///
/// Evaluated as the product `(1/c) Π_{i=1}^{k} i/(c+i)` with `c = s+α+1`,
/// which neither overflows nor loses more than a few ulps per factor.
pub fn moment(k: u32, s: u32, alpha: f64) -> Result<f64> {
    check_moment_domain(s, alpha)?;
    let c = f64::from(s) + alpha + 1.0;
    Ok((1..=k).fold(1.0 / c, |acc, i| acc * f64::from(i) / (c + f64::from(i))))
}

/// Exact rational moment `k! / (s+α+1)_{k+1}` for rational `alpha`.
pub fn moment_exact(k: u32, s: u32, alpha: &Rational) -> Result<Rational> {
    let shift = alpha.clone() + Rational::from_integer((i64::from(s) + 1).into());
    if shift <= Rational::from_integer(0.into()) {
        return Err(Error::Domain(format!("moment needs s + alpha > -1, got s={s}, alpha={alpha}")));
    }
    let mut fact = Rational::from_integer(1.into());
    for i in 1..=k {
        fact *= Rational::from_integer(i64::from(i).into());
    }
    Ok(fact / pochhammer(shift, k + 1))
}

/// The reduced form `(n−j)! (α+1)_j / (α+1)_{n+1}` of `moment(n−j, j, α)`.
pub fn moment_pochhammer_form(n: u32, j: u32, alpha: f64) -> Result<f64> {
    if j > n {
        return Err(Error::Index(format!("need j <= n, got j={j}, n={n}")));
    }
    check_moment_domain(j, alpha)?;
    Ok(factorial(n - j) * pochhammer(alpha + 1.0, j) / pochhammer(alpha + 1.0, n + 1))
}

/// Quadrature evaluation of [`moment`]; the rule's exponent must equal `alpha`.
pub fn moment_numeric(k: u32, s: u32, alpha: f64, rule: &QuadratureRule) -> Result<f64> {
    check_moment_domain(s, alpha)?;
    if rule.jacobi_exponent() != alpha {
        return Err(Error::Parameter(format!(
            "rule exponent {} does not match alpha {alpha}",
            rule.jacobi_exponent()
        )));
    }
    Ok(rule.integrate_radial(|t| t.powi(k as i32) * (1.0 - t).powi(s as i32)))
}

/// `V = ∫₀¹ (1−t)^{2α−γ} dt`, finite iff `γ < 1 + 2α`.
pub fn v_functional(params: WeightParams) -> Finiteness {
    let e = 2.0 * params.alpha - params.gamma;
    if e > -1.0 {
        Finiteness::Finite(1.0 / (e + 1.0))
    } else {
        Finiteness::Divergent(Endpoint::One)
    }
}

/// Endpoint analysis of the `W` integrand `t^{−2a−2b−1} (1−t)^{b−2} (1+t)^b`.
///
/// Returns the exponents at `t=0` and `t=1` when the integral converges.
fn w_exponents(weight: ExteriorWeight) -> std::result::Result<(f64, f64), Endpoint> {
    if !(weight.b > 1.0) {
        return Err(Endpoint::One);
    }
    if !(weight.a + weight.b < 0.0) {
        return Err(Endpoint::Zero);
    }
    Ok((-2.0 * weight.a - 2.0 * weight.b - 1.0, weight.b - 2.0))
}

/// `W` with a fixed Gauss–Jacobi rule of `nodes` points absorbing both endpoint powers.
pub fn w_functional_with_nodes(weight: ExteriorWeight, nodes: usize) -> Result<Finiteness> {
    let (at_zero, at_one) = match w_exponents(weight) {
        Ok(e) => e,
        Err(endpoint) => return Ok(Finiteness::Divergent(endpoint)),
    };
    let rule = gauss_jacobi_unit(nodes, at_one, at_zero)?;
    let value = rule.iter().map(|&(t, w)| w * (1.0 + t).powf(weight.b)).sum();
    Ok(Finiteness::Finite(value))
}

const W_START_NODES: usize = 8;
const W_MAX_NODES: usize = 1024;

/// `W = ∫₀¹ B(1/t²) / (t(1−t)²) dt`.
///
/// Finite iff `b > 1` and `a + b < 0`; otherwise the failing endpoint is
/// returned. Finite values are refined by doubling the node count until two
/// successive estimates agree to `tol` relative.
pub fn w_functional(weight: ExteriorWeight, tol: f64) -> Result<Finiteness> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut nodes = W_START_NODES;
    let mut prev = match w_functional_with_nodes(weight, nodes)? {
        Finiteness::Finite(v) => v,
        div => return Ok(div),
    };
    while nodes < W_MAX_NODES {
        nodes *= 2;
        let cur = w_functional_with_nodes(weight, nodes)?.value().unwrap_or(f64::NAN);
        if (cur - prev).abs() <= tol * cur.abs() {
            return Ok(Finiteness::Finite(cur));
        }
        prev = cur;
    }
    Ok(Finiteness::Finite(prev))
}

/// Upper bound `W ≤ 2^b B(−2a−2b, b−1)`, from `(1+t)^b ≤ 2^b`.
pub fn w_upper_bound(weight: ExteriorWeight) -> Result<Finiteness> {
    match w_exponents(weight) {
        Ok(_) => Ok(Finiteness::Finite(
            2f64.powf(weight.b) * beta_fn(-2.0 * (weight.a + weight.b), weight.b - 1.0)?,
        )),
        Err(endpoint) => Ok(Finiteness::Divergent(endpoint)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn moment_examples() {
        assert!((moment(1, 0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((moment(2, 1, 0.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        for n in 0..6 {
            for j in 0..=n {
                let a = moment(n - j, j, 0.7).unwrap();
                let b = moment_pochhammer_form(n, j, 0.7).unwrap();
                assert!(((a - b) / b).abs() < 1e-13);
            }
        }
        assert!(moment(0, 0, -1.0).is_err());
        assert!(moment(0, 1, -1.5).is_ok());
    }

    #[test]
    fn exact_moment_agrees_with_beta() {
        assert_eq!(moment_exact(2, 1, &rational(0, 1)).unwrap(), rational(1, 12));
        let e = moment_exact(5, 2, &rational(1, 2)).unwrap();
        let f = moment(5, 2, 0.5).unwrap();
        assert!((num_traits::ToPrimitive::to_f64(&e).unwrap() - f).abs() < 1e-15);
    }

    #[test]
    fn moment_numeric_examples() {
        let r0 = QuadratureRule::new(16, 0.0, 1).unwrap();
        assert!((moment_numeric(1, 0, 0.0, &r0).unwrap() - 0.5).abs() < 1e-14);
        let r1 = QuadratureRule::new(16, 1.0, 1).unwrap();
        assert!((moment_numeric(0, 0, 1.0, &r1).unwrap() - 0.5).abs() < 1e-14);
        let rh = QuadratureRule::new(16, 0.5, 1).unwrap();
        let got = moment_numeric(5, 2, 0.5, &rh).unwrap();
        let want = beta_fn(6.0, 3.5).unwrap();
        assert!(((got - want) / want).abs() < 1e-13);
        assert!(moment_numeric(1, 0, 0.5, &r0).is_err());
    }

    #[test]
    fn moment_numeric_tracks_closed_form_up_to_twenty() {
        for &alpha in &[0.0, 0.5, 2.5] {
            let rule = QuadratureRule::new(24, alpha, 1).unwrap();
            for k in 0..=20 {
                for s in 0..=20 {
                    let num = moment_numeric(k, s, alpha, &rule).unwrap();
                    let cf = moment(k, s, alpha).unwrap();
                    assert!(((num - cf) / cf).abs() <= 1e-12, "k={k} s={s} alpha={alpha}");
                }
            }
        }
    }

    #[test]
    fn v_examples() {
        let p = |g, a| WeightParams::new(g, a).unwrap();
        assert_eq!(v_functional(p(0.0, 0.0)), Finiteness::Finite(1.0));
        assert_eq!(v_functional(p(1.0, 0.0)), Finiteness::Divergent(Endpoint::One));
        assert!((v_functional(p(0.0, 1.0)).value().unwrap() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn v_finiteness_matches_boundedness_predicate() {
        for gi in 0..40 {
            for ai in 0..40 {
                let gamma = -0.95 + 0.1 * f64::from(gi);
                let alpha = -0.95 + 0.1 * f64::from(ai);
                let p = WeightParams::new(gamma, alpha).unwrap();
                assert_eq!(v_functional(p).is_finite(), gamma < 1.0 + 2.0 * alpha);
                assert_eq!(p.is_bounded(), gamma < 1.0 + 2.0 * alpha);
            }
        }
    }

    #[test]
    fn w_examples() {
        let w = w_functional(ExteriorWeight::new(-4.0, 2.0), 1e-14).unwrap();
        assert!((w.value().unwrap() - 49.0 / 60.0).abs() < 1e-12);
        // integrand t (1+t)^2, so W = 1/2 + 2/3 + 1/4
        let w = w_functional(ExteriorWeight::new(-3.0, 2.0), 1e-14).unwrap();
        assert!((w.value().unwrap() - 17.0 / 12.0).abs() < 1e-12);
        assert_eq!(
            w_functional(ExteriorWeight::new(0.0, 0.0), 1e-12).unwrap(),
            Finiteness::Divergent(Endpoint::One)
        );
        assert_eq!(
            w_functional(ExteriorWeight::new(0.0, 2.0), 1e-12).unwrap(),
            Finiteness::Divergent(Endpoint::Zero)
        );
        assert!(w_functional(ExteriorWeight::new(-4.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn w_non_integer_exponents_against_a_fine_rule() {
        // integrand t^{2.4} (1−t)^{-0.5} (1+t)^{1.5}
        let b = ExteriorWeight::new(-3.2, 1.5);
        let v = w_functional(b, 1e-13).unwrap().value().unwrap();
        let fine = w_functional_with_nodes(b, 2048).unwrap().value().unwrap();
        assert!(((v - fine) / fine).abs() < 1e-13);
        let bound = w_upper_bound(b).unwrap().value().unwrap();
        assert!(v <= bound);
    }

    #[test]
    fn stated_condition_never_gives_finite_w() {
        for &(a, b) in &[(3.0, -2.0), (5.0, -1.5), (2.5, -1.1)] {
            let wt = ExteriorWeight::new(a, b);
            assert!(wt.stated_condition());
            assert!(!w_functional(wt, 1e-12).unwrap().is_finite());
        }
    }
}

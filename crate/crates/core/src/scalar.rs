//! Scalar special-function kernel.
//!
//! Pochhammer symbols, log-gamma and beta, the unit step `ε_p`, and the
//! terminating Gauss sum `₂F₁(−m, b; c; 1)` together with its Chu–Vandermonde
//! closed form. The Pochhammer and hypergeometric routines are generic over
//! [`Field`], so the same code runs in double precision and in exact rational
//! arithmetic.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` as an exact rational.
///
/// Panics when `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Arithmetic needed by the Pochhammer and hypergeometric routines.
pub trait Field:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// Returns `q` when the value is exactly the nonpositive integer `-q`.
    fn as_nonpositive_integer(&self) -> Option<u64>;

    fn to_f64_lossy(&self) -> f64;
}

impl Field for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn as_nonpositive_integer(&self) -> Option<u64> {
        if *self <= 0.0 && self.fract() == 0.0 && self.is_finite() {
            Some((-*self) as u64)
        } else {
            None
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn as_nonpositive_integer(&self) -> Option<u64> {
        if self.is_integer() && !self.is_positive() {
            (-self.to_integer()).to_u64()
        } else {
            None
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`, with `(a)_0 = 1`.
///
/// When `a` is a nonpositive integer `-q` and `k > q` the product contains the
/// factor zero; this is detected up front and an exact zero is returned.
pub fn pochhammer<T: Field>(a: T, k: u32) -> T {
    if let Some(q) = a.as_nonpositive_integer() {
        if u64::from(k) > q {
            return T::zero();
        }
    }
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * (a.clone() + T::from_i64(i64::from(i)));
    }
    acc
}

/// A Pochhammer symbol `(base)_length` held as data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochhammerArg {
    pub base: f64,
    pub length: u32,
}

impl PochhammerArg {
    pub fn new(base: f64, length: u32) -> Self {
        Self { base, length }
    }

    pub fn eval(&self) -> f64 {
        pochhammer(self.base, self.length)
    }
}

/// Unit step: 1 for `p >= 0`, 0 otherwise.
pub fn step_epsilon(p: i64) -> u8 {
    u8::from(p >= 0)
}

/// `n!` in double precision.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, nine terms). Returns NaN for `x <= 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Beta function `Γ(x)Γ(y)/Γ(x+y)` evaluated through log-gamma.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!(
            "beta_fn requires positive arguments, got ({x}, {y})"
        )));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

fn pole_check<T: Field>(c: &T, m: u32) -> Result<()> {
    if let Some(q) = c.as_nonpositive_integer() {
        if q < u64::from(m) {
            return Err(Error::Pole {
                c: c.to_f64_lossy(),
                index: (q + 1) as u32,
            });
        }
    }
    Ok(())
}

/// `₂F₁(−m, b; c; 1)` as the finite sum `Σ_{j=0}^{m} (−m)_j (b)_j / ((c)_j j!)`.
pub fn hyp2f1_terminating<T: Field>(m: u32, b: T, c: T) -> Result<T> {
    pole_check(&c, m)?;
    let mut term = T::one();
    let mut sum = T::one();
    for j in 0..m {
        let jj = T::from_i64(i64::from(j));
        let num = (T::from_i64(-i64::from(m)) + jj.clone()) * (b.clone() + jj.clone());
        let den = (c.clone() + jj) * T::from_i64(i64::from(j) + 1);
        term = term * num / den;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Chu–Vandermonde closed form `(c−b)_m / (c)_m`.
pub fn chu_vandermonde_rhs<T: Field>(m: u32, b: T, c: T) -> Result<T> {
    pole_check(&c, m)?;
    let num = pochhammer(c.clone() - b, m);
    let den = pochhammer(c, m);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(-2.0, 2), 2.0);
        assert_eq!(pochhammer(rational(-2, 1), 3), Rational::zero());
        assert_eq!(pochhammer(rational(1, 2), 2), rational(3, 4));
        assert_eq!(PochhammerArg::new(2.0, 3).eval(), 24.0);
    }

    #[test]
    fn pochhammer_zero_is_exact_even_after_large_factors() {
        // (−5)_8 would be 0 by multiplication too, but the early exit must also
        // give a clean positive zero rather than −0.0
        let v = pochhammer(-5.0, 8);
        assert_eq!(v.to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn step_examples() {
        assert_eq!(step_epsilon(2), 1);
        assert_eq!(step_epsilon(0), 1);
        assert_eq!(step_epsilon(-3), 0);
    }

    #[test]
    fn beta_examples() {
        assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((beta_fn(2.0, 3.0).unwrap() * 12.0 - 1.0).abs() < 1e-14);
        assert!((beta_fn(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-14);
        assert!(matches!(beta_fn(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(beta_fn(1.0, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn ln_gamma_accuracy_on_reference_points() {
        // factorials are exact in f64 up to 22!
        for n in 3..=22u32 {
            let exact = factorial(n - 1).ln();
            let got = ln_gamma(f64::from(n));
            assert!(((got - exact) / exact).abs() < 1e-14, "n={n}");
        }
        // Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(1/3)
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((ln_gamma(0.5).exp() / sqrt_pi - 1.0).abs() < 1e-14);
        assert!((ln_gamma(1.5).exp() / (0.5 * sqrt_pi) - 1.0).abs() < 1e-14);
        assert!((ln_gamma(1.0 / 3.0).exp() / 2.678_938_534_707_747_6 - 1.0).abs() < 1e-14);
        // Γ(50.5) via the half-integer product (2n)! √π / (4^n n!)
        let lg = ln_gamma(50.5);
        let mut expect = sqrt_pi.ln();
        for i in 0..50 {
            expect += (0.5 + f64::from(i)).ln();
        }
        assert!(((lg - expect) / expect).abs() < 1e-14);
        assert!(ln_gamma(0.0).is_nan());
    }

    #[test]
    fn hyp2f1_examples() {
        assert_eq!(hyp2f1_terminating(0, 3.7, 1.2).unwrap(), 1.0);
        assert!((hyp2f1_terminating(2, 1.0, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((hyp2f1_terminating(1, 2.0, 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            hyp2f1_terminating(2, rational(1, 1), rational(2, 1)).unwrap(),
            rational(1, 3)
        );
    }

    #[test]
    fn chu_vandermonde_examples() {
        assert_eq!(
            chu_vandermonde_rhs(2, rational(1, 1), rational(2, 1)).unwrap(),
            rational(1, 3)
        );
        assert_eq!(
            chu_vandermonde_rhs(3, rational(1, 1), rational(4, 1)).unwrap(),
            rational(1, 2)
        );
        for m in 1..6 {
            assert_eq!(chu_vandermonde_rhs(m, 2.5, 2.5).unwrap(), 0.0);
        }
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(
            hyp2f1_terminating(3, 1.0, -1.0),
            Err(Error::Pole { index: 2, .. })
        ));
        assert!(matches!(
            chu_vandermonde_rhs(3, 1.0, -2.0),
            Err(Error::Pole { index: 3, .. })
        ));
        // c = −3 only bites for m ≥ 4
        assert!(hyp2f1_terminating(3, 1.0, -3.0).is_ok());
        assert!(hyp2f1_terminating(4, rational(1, 1), rational(-3, 1)).is_err());
    }
}

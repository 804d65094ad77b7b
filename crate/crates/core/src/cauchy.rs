//! The weighted solid Cauchy transform
//!
//! ```text
//! C_α f(z) = (1/π) ∫_D f(ξ) (1−|ξ|²)^α / (z−ξ) dλ(ξ),   |z| > 1,
//! ```
//!
//! evaluated numerically by quadrature and in closed form on generic
//! monomials and disc polynomials. Every image is a finite Laurent tail
//! `Σ_{p≥1} c_p z^{−p}`; exterior norms of such tails against
//! `B_{a,b}(|z|²)` reduce to beta functions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::discpoly::{disc_poly_expand, DiscPolyIndex, MonomialIndex, PolyanalyticFn};
use crate::error::{Error, Result};
use crate::quad::{annulus_integral, disc_integral, AnnulusRule, QuadratureRule, Refined, RuleLadder};
use crate::scalar::{beta_fn, factorial, pochhammer, Rational};
use crate::weights::{moment, v_functional, w_functional, Endpoint, ExteriorWeight, Finiteness, WeightParams};

/// Default guard on `|z| − 1` below which numeric evaluation is refused.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Distance to an integer below which `α−γ` counts as that integer.
pub const INTEGER_TOL: f64 = 1e-9;

/// Tolerance used when [`bound_constant`] refines `W`.
pub const W_TOL: f64 = 1e-14;

/// Returns `k` when `α−γ` lies within [`INTEGER_TOL`] of the nonnegative integer `k`.
pub fn quantized_shift(gamma: f64, alpha: f64) -> Option<u32> {
    let d = alpha - gamma;
    let k = d.round();
    if k >= 0.0 && (d - k).abs() <= INTEGER_TOL && k <= f64::from(u32::MAX) {
        Some(k as u32)
    } else {
        None
    }
}

fn check_exponent(name: &str, value: f64) -> Result<()> {
    if value > -1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must exceed -1, got {value}")))
    }
}

fn check_exterior(z: Complex64, delta: f64) -> Result<()> {
    if z.norm() >= 1.0 + delta {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "|z| = {} is inside the guard band |z| >= 1 + {delta}",
            z.norm()
        )))
    }
}

/// Finite Laurent tail `Σ_{p≥1} c_p z^{−p}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LaurentTail {
    coeffs: BTreeMap<u32, Complex64>,
}

impl LaurentTail {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c z^{−p}`; coefficients that cancel to below `1e−300` are removed.
    pub fn add(&mut self, p: u32, c: Complex64) -> Result<()> {
        if p == 0 {
            return Err(Error::Index("Laurent tail powers start at p = 1".into()));
        }
        let merged = self.coeff(p) + c;
        if merged.norm() < 1e-300 {
            self.coeffs.remove(&p);
        } else {
            self.coeffs.insert(p, merged);
        }
        Ok(())
    }

    pub fn coeff(&self, p: u32) -> Complex64 {
        self.coeffs.get(&p).copied().unwrap_or_default()
    }

    /// `(p, c_p)` in increasing `p`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&p, &c)| (p, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.inv();
        self.iter().map(|(p, c)| c * w.powu(p)).sum()
    }
}

/// Numeric and closed values of one transform evaluation side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformReport {
    pub z: Complex64,
    pub numeric: Complex64,
    pub closed: Complex64,
    pub abs_err: f64,
    /// `None` when the closed value is zero.
    pub rel_err: Option<f64>,
}

impl TransformReport {
    pub fn new(z: Complex64, numeric: Complex64, closed: Complex64) -> Self {
        let abs_err = (numeric - closed).norm();
        Self {
            z,
            numeric,
            closed,
            abs_err,
            rel_err: (closed != Complex64::new(0.0, 0.0)).then(|| abs_err / closed.norm()),
        }
    }

    /// `|numeric − closed| ≤ tol · max(1, |closed|)`.
    pub fn within(&self, tol: f64) -> bool {
        self.abs_err <= tol * self.closed.norm().max(1.0)
    }
}

/// Largest angular count [`angular_count_for`] will return.
pub const MAX_ANGULAR_COUNT: usize = 1 << 20;

/// Smallest `base · 2^q` angular count whose aliasing error `|z|^{−M}` is
/// at most `tol`, capped at [`MAX_ANGULAR_COUNT`].
///
/// The uniform angular grid integrates `ξ^i ξ̄^k` exactly unless
/// `i ≡ k (mod M)`, so the kernel expansion `Σ ξ^i / z^{i+1}` leaks terms of
/// relative size `|z|^{−M}`.
pub fn angular_count_for(z: Complex64, base: usize, tol: f64) -> usize {
    let mut m = base.max(1);
    let decay = z.norm().ln();
    if !(decay > 0.0) {
        return MAX_ANGULAR_COUNT.max(m);
    }
    while m < MAX_ANGULAR_COUNT && -(m as f64) * decay > tol.ln() {
        m *= 2;
    }
    m
}

/// Quadrature value of `C_α f(z)` with the default guard [`DEFAULT_DELTA`].
pub fn transform_numeric(
    f: &PolyanalyticFn,
    alpha: f64,
    z: Complex64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    transform_numeric_with_delta(f, alpha, z, rule, DEFAULT_DELTA)
}

/// [`transform_numeric`] with an explicit guard `|z| ≥ 1 + delta`.
///
/// The rule must carry the Jacobi exponent `alpha`, so the weight is absorbed
/// exactly and the integrand seen by the rule is `f(ξ)/(z−ξ)`.
pub fn transform_numeric_with_delta(
    f: &PolyanalyticFn,
    alpha: f64,
    z: Complex64,
    rule: &QuadratureRule,
    delta: f64,
) -> Result<Complex64> {
    check_exponent("alpha", alpha)?;
    check_exterior(z, delta)?;
    if rule.jacobi_exponent() != alpha {
        return Err(Error::Parameter(format!(
            "rule exponent {} does not match alpha {alpha}",
            rule.jacobi_exponent()
        )));
    }
    let terms: Vec<(MonomialIndex, Complex64)> = f.terms().collect();
    let value = disc_integral(
        |xi| {
            let s = 1.0 - xi.norm_sqr();
            let fx: Complex64 = terms
                .iter()
                .map(|&(i, c)| c * xi.powu(i.j) * xi.conj().powu(i.k) * s.powi(i.l as i32))
                .sum();
            fx / (z - xi)
        },
        rule,
    );
    Ok(value / PI)
}

/// [`transform_numeric`] refined along a [`RuleLadder`] built for `alpha`.
pub fn transform_numeric_refined(
    f: &PolyanalyticFn,
    alpha: f64,
    z: Complex64,
    ladder: &RuleLadder,
) -> Result<Refined> {
    ladder.evaluate(|rule| transform_numeric(f, alpha, z, rule))
}

/// `C_α(e^ℓ_{jk})(z) = ε_{k−j} · moment(k, ℓ, α) · z^{−(k−j+1)}`.
pub fn transform_monomial_closed(idx: MonomialIndex, alpha: f64, z: Complex64) -> Result<Complex64> {
    check_exponent("alpha", alpha)?;
    if !(z.norm() > 1.0) {
        return Err(Error::Domain(format!("closed transform needs |z| > 1, got {}", z.norm())));
    }
    if idx.j > idx.k {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = moment(idx.k, idx.l, alpha)?;
    Ok(z.inv().powu(idx.k - idx.j + 1) * m)
}

/// Laurent tail of `C_α f` for a combination of generic monomials.
pub fn transform_polyanalytic_closed(f: &PolyanalyticFn, alpha: f64) -> Result<LaurentTail> {
    check_exponent("alpha", alpha)?;
    let mut tail = LaurentTail::new();
    for (idx, c) in f.terms() {
        if idx.j <= idx.k {
            tail.add(idx.k - idx.j + 1, c * moment(idx.k, idx.l, alpha)?)?;
        }
    }
    Ok(tail)
}

/// `c^{γ,ω_α}_{m,n} = ε_{n−m} (γ−α)_m n! / ((α+1)_{n+1} (γ+1)_m)`.
///
/// The factor `(γ−α)_m` is an exact zero whenever `α−γ` is (within
/// [`INTEGER_TOL`]) a nonnegative integer `k < m`.
pub fn transform_coeff(gamma: f64, alpha: f64, m: u32, n: u32) -> Result<f64> {
    check_exponent("gamma", gamma)?;
    check_exponent("alpha", alpha)?;
    if m > n {
        return Ok(0.0);
    }
    let lead = match quantized_shift(gamma, alpha) {
        Some(k) => pochhammer(-f64::from(k), m),
        None => pochhammer(gamma - alpha, m),
    };
    if lead == 0.0 {
        return Ok(0.0);
    }
    Ok(lead * factorial(n) / (pochhammer(alpha + 1.0, n + 1) * pochhammer(gamma + 1.0, m)))
}

/// [`transform_coeff`] in exact rational arithmetic.
pub fn transform_coeff_exact(gamma: &Rational, alpha: &Rational, m: u32, n: u32) -> Result<Rational> {
    let minus_one = Rational::from_integer((-1).into());
    if *gamma <= minus_one || *alpha <= minus_one {
        return Err(Error::Parameter(format!(
            "gamma and alpha must exceed -1, got ({gamma}, {alpha})"
        )));
    }
    if m > n {
        return Ok(Rational::from_integer(0.into()));
    }
    let one = Rational::from_integer(1.into());
    let fact: Rational = Rational::from_integer((1..=n).map(num_bigint::BigInt::from).product());
    let lead = pochhammer(gamma.clone() - alpha.clone(), m);
    Ok(lead * fact / (pochhammer(alpha.clone() + one.clone(), n + 1) * pochhammer(gamma.clone() + one, m)))
}

/// `C_α(R^γ_{m,n}) = c^{γ,ω_α}_{m,n} z^{−(n−m+1)}`, empty when the constant vanishes.
pub fn transform_discpoly_closed(gamma: f64, alpha: f64, idx: DiscPolyIndex) -> Result<LaurentTail> {
    let c = transform_coeff(gamma, alpha, idx.m, idx.n)?;
    let mut tail = LaurentTail::new();
    if c != 0.0 {
        tail.add(idx.n - idx.m + 1, Complex64::new(c, 0.0))?;
    }
    Ok(tail)
}

/// Closed transform of `Σ c_i R^γ_{m_i,n_i}`.
pub fn transform_fn_closed(
    terms: &[(Complex64, DiscPolyIndex)],
    gamma: f64,
    alpha: f64,
) -> Result<LaurentTail> {
    check_exponent("gamma", gamma)?;
    check_exponent("alpha", alpha)?;
    let mut tail = LaurentTail::new();
    for &(c, idx) in terms {
        for (p, v) in transform_discpoly_closed(gamma, alpha, idx)?.iter() {
            tail.add(p, c * v)?;
        }
    }
    Ok(tail)
}

/// Side-by-side numeric and closed transform of `R^γ_{m,n}` at `z`.
pub fn compare_discpoly(
    gamma: f64,
    alpha: f64,
    idx: DiscPolyIndex,
    z: Complex64,
    rule: &QuadratureRule,
) -> Result<TransformReport> {
    let f = disc_poly_expand(gamma, idx)?;
    let numeric = transform_numeric(&f, alpha, z, rule)?;
    let closed = transform_discpoly_closed(gamma, alpha, idx)?.eval(z);
    Ok(TransformReport::new(z, numeric, closed))
}

/// `‖z^{−p}‖²_B = π ∫₀¹ u^{p−2} B(1/u) du = π · B(p−1−a−b, b+1)`.
///
/// Diverges at the unit circle (`u = 1`) when `b ≤ −1` and at infinity
/// (`u = 0`) when `p ≤ a+b+1`.
pub fn exterior_norm_sq_power(p: u32, weight: ExteriorWeight) -> Result<Finiteness> {
    if p == 0 {
        return Err(Error::Index("exterior norms are taken for p >= 1".into()));
    }
    let x = f64::from(p) - 1.0 - weight.a - weight.b;
    let y = weight.b + 1.0;
    if !(y > 0.0) {
        return Ok(Finiteness::Divergent(Endpoint::One));
    }
    if !(x > 0.0) {
        return Ok(Finiteness::Divergent(Endpoint::Zero));
    }
    Ok(Finiteness::Finite(PI * beta_fn(x, y)?))
}

/// `‖C_α(e^ℓ_{jk})‖²_B = ε_{k−j} · moment(k, ℓ, α)² · ‖z^{−(k−j+1)}‖²_B`.
pub fn exterior_norm_sq_monomial_image(
    idx: MonomialIndex,
    alpha: f64,
    weight: ExteriorWeight,
) -> Result<Finiteness> {
    exterior_inner_product_images(idx, idx, alpha, weight)
}

/// `⟨C_α e1, C_α e2⟩_B`, zero unless both images have the same pole order.
///
/// The images are real multiples of `z^{−p}`, so the inner product is real.
pub fn exterior_inner_product_images(
    e1: MonomialIndex,
    e2: MonomialIndex,
    alpha: f64,
    weight: ExteriorWeight,
) -> Result<Finiteness> {
    check_exponent("alpha", alpha)?;
    if e1.j > e1.k || e2.j > e2.k || e1.k - e1.j != e2.k - e2.j {
        return Ok(Finiteness::Finite(0.0));
    }
    let m1 = moment(e1.k, e1.l, alpha)?;
    let m2 = moment(e2.k, e2.l, alpha)?;
    Ok(match exterior_norm_sq_power(e1.k - e1.j + 1, weight)? {
        Finiteness::Finite(v) => Finiteness::Finite(m1 * m2 * v),
        div => div,
    })
}

/// `‖Σ c_p z^{−p}‖²_B = Σ |c_p|² ‖z^{−p}‖²_B`, the powers being mutually orthogonal.
pub fn laurent_norm_sq(tail: &LaurentTail, weight: ExteriorWeight) -> Result<Finiteness> {
    let mut acc = 0.0;
    for (p, c) in tail.iter() {
        match exterior_norm_sq_power(p, weight)? {
            Finiteness::Finite(v) => acc += c.norm_sqr() * v,
            div => return Ok(div),
        }
    }
    Ok(Finiteness::Finite(acc))
}

/// Annulus quadrature of `∫_{|z|>1} |z|^{−2p} B(|z|²) dλ`, truncated at `outer`.
///
/// Returns the truncated value together with the bound
/// `2π R^{2(a+b−p+1)} / (2(p−a−b−1))` on the discarded tail, valid for `b ≥ 0`.
pub fn exterior_norm_sq_power_numeric(
    p: u32,
    weight: ExteriorWeight,
    outer: f64,
    nodes_per_panel: usize,
) -> Result<(f64, f64)> {
    if !(weight.b >= 0.0) {
        return Err(Error::Parameter(format!(
            "the tail bound needs b >= 0, got b = {}",
            weight.b
        )));
    }
    let decay = 2.0 * (f64::from(p) - weight.a - weight.b - 1.0);
    if !(decay > 0.0) {
        return Err(Error::Parameter(format!(
            "|z|^(-2p) B(|z|^2) is not integrable at infinity for p = {p}"
        )));
    }
    // the integrand is radial, so one angle suffices
    let rule = AnnulusRule::new(1.0, outer, nodes_per_panel, 1)?;
    let value = annulus_integral(
        |z| {
            let t = z.norm_sqr();
            Complex64::new(t.powi(-(p as i32)) * weight.eval(t), 0.0)
        },
        &rule,
    )
    .re;
    Ok((value, 2.0 * PI * outer.powf(-decay) / decay))
}

/// `(2/π) · V · W`, or the first divergent functional.
pub fn bound_constant(params: WeightParams, weight: ExteriorWeight) -> Result<Finiteness> {
    let v = match v_functional(params) {
        Finiteness::Finite(v) => v,
        div => return Ok(div),
    };
    let w = match w_functional(weight, W_TOL)? {
        Finiteness::Finite(w) => w,
        div => return Ok(div),
    };
    Ok(Finiteness::Finite(2.0 / PI * v * w))
}

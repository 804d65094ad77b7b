//! Range of the transform on the true poly-Bergman level `n`.
//!
//! `C_α(R^γ_{m,n}) = c^{γ,ω_α}_{m,n} z^{−(n−m+1)}`, so the range on level `n`
//! is spanned by the powers `z^{−(n−m+1)}` whose constant survives. The
//! constant vanishes for `m > n`, and for `m > k` when `α−γ = k` is a
//! nonnegative integer.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cauchy::{quantized_shift, transform_numeric};
use crate::discpoly::{disc_poly_expand, DiscPolyIndex};
use crate::error::{Error, Result};
use crate::quad::QuadratureRule;

/// Number of indices past `n` listed in [`RangeProfile::kernel_ms`].
pub const KERNEL_CUTOFF: u32 = 2;

/// Radius of the default oracle sample circle.
pub const SAMPLE_RADIUS: f64 = 1.5;

/// Default relative singular-value threshold of [`numeric_rank_oracle`].
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeProfile {
    pub gamma: f64,
    pub alpha: f64,
    pub n: u32,
    pub dimension: usize,
    /// `m ≤ n + KERNEL_CUTOFF` with `C_α(R^γ_{m,n}) = 0`.
    pub kernel_ms: Vec<u32>,
    /// Pole orders `p = n−m+1` present in the range.
    pub range_exponents: BTreeSet<u32>,
    /// Whether `α−γ` is a nonnegative integer.
    pub quantized: bool,
}

/// Whether `c^{γ,ω_α}_{m,n} = 0`.
pub fn coeff_vanishes(gamma: f64, alpha: f64, m: u32, n: u32) -> bool {
    m > n || quantized_shift(gamma, alpha).is_some_and(|k| m > k)
}

fn check_bounded(gamma: f64, alpha: f64) -> Result<()> {
    if !(gamma > -1.0 && alpha > -1.0) {
        return Err(Error::Parameter(format!(
            "gamma and alpha must exceed -1, got ({gamma}, {alpha})"
        )));
    }
    if !(alpha > 0.5 * (gamma - 1.0)) {
        return Err(Error::Parameter(format!(
            "the transform is unbounded unless alpha > (gamma - 1)/2, got ({gamma}, {alpha})"
        )));
    }
    Ok(())
}

pub fn range_profile(gamma: f64, alpha: f64, n: u32) -> Result<RangeProfile> {
    check_bounded(gamma, alpha)?;
    let range_exponents: BTreeSet<u32> = (0..=n)
        .filter(|&m| !coeff_vanishes(gamma, alpha, m, n))
        .map(|m| n - m + 1)
        .collect();
    let kernel_ms = (0..=n + KERNEL_CUTOFF)
        .filter(|&m| coeff_vanishes(gamma, alpha, m, n))
        .collect();
    Ok(RangeProfile {
        gamma,
        alpha,
        n,
        dimension: range_exponents.len(),
        kernel_ms,
        range_exponents,
        quantized: quantized_shift(gamma, alpha).is_some(),
    })
}

/// `min(n, α−γ+1) + 1` in the quantized case and `n+1` otherwise: the
/// alternative closed formula, kept for comparison tables.
pub fn printed_dimension(gamma: f64, alpha: f64, n: u32) -> usize {
    match quantized_shift(gamma, alpha) {
        Some(k) => n.min(k + 1) as usize + 1,
        None => n as usize + 1,
    }
}

/// `max(8, n+2)` points equispaced on `|z| = 1.5`, rotated off the real axis.
pub fn default_sample_points(n: u32) -> Vec<Complex64> {
    let count = (n as usize + 2).max(8);
    (0..count)
        .map(|i| {
            let theta = 0.1 + 2.0 * std::f64::consts::PI * i as f64 / count as f64;
            Complex64::from_polar(SAMPLE_RADIUS, theta)
        })
        .collect()
}

/// Numeric rank of `[C_α(R^γ_{m,n})(z_i)]_{m=0..n, i}` by quadrature.
///
/// Singular values above `tol` times the largest are counted; an all-zero
/// matrix has rank zero.
pub fn numeric_rank_oracle(
    gamma: f64,
    alpha: f64,
    n: u32,
    rule: &QuadratureRule,
    sample_points: &[Complex64],
    tol: f64,
) -> Result<usize> {
    if sample_points.len() < n as usize + 2 {
        return Err(Error::Parameter(format!(
            "rank oracle needs at least n + 2 = {} sample points, got {}",
            n + 2,
            sample_points.len()
        )));
    }
    let rows = n as usize + 1;
    let cols = sample_points.len();
    let mut values = Vec::with_capacity(rows * cols);
    for m in 0..=n {
        let f = disc_poly_expand(gamma, DiscPolyIndex::new(m, n))?;
        for &z in sample_points {
            values.push(transform_numeric(&f, alpha, z, rule)?);
        }
    }
    let matrix = DMatrix::from_row_slice(rows, cols, &values);
    let singular = matrix.singular_values();
    let largest = singular.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(singular.iter().filter(|&&s| s > tol * largest).count())
}

/// Nesting of the ranges on levels `n1 ≤ n2`.
///
/// Off the quantized set the pole-order sets are compared literally. In the
/// quantized case they are disjoint shifts of each other, so the check is on
/// dimension instead.
pub fn range_inclusion_check(gamma: f64, alpha: f64, n1: u32, n2: u32) -> Result<bool> {
    if n1 > n2 {
        return Err(Error::Index(format!("need n1 <= n2, got ({n1}, {n2})")));
    }
    let p1 = range_profile(gamma, alpha, n1)?;
    let p2 = range_profile(gamma, alpha, n2)?;
    if p1.quantized {
        Ok(p1.dimension <= p2.dimension)
    } else {
        Ok(p1.range_exponents.is_subset(&p2.range_exponents))
    }
}

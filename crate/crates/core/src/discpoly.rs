//! Generic monomials `e^ℓ_{jk}(ξ) = ξ^j ξ̄^k (1−|ξ|²)^ℓ`, disc polynomials
//! `R^γ_{m,n}` and their closed-form inner products on the unit disc.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{factorial, pochhammer, Rational};
use crate::weights::moment;

/// Index `(j, k, ℓ)` of `e^ℓ_{jk}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonomialIndex {
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl MonomialIndex {
    pub fn new(j: u32, k: u32, l: u32) -> Self {
        Self { j, k, l }
    }
}

/// Index `(m, n)` of `R^γ_{m,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiscPolyIndex {
    pub m: u32,
    pub n: u32,
}

impl DiscPolyIndex {
    pub fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }
}

fn check_interior(zeta: Complex64) -> Result<()> {
    if zeta.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "evaluation point {zeta} is not inside the unit disc"
        )))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > -1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("gamma must exceed -1, got {gamma}")))
    }
}

fn monomial_unchecked(idx: MonomialIndex, zeta: Complex64) -> Complex64 {
    let s = 1.0 - zeta.norm_sqr();
    zeta.powu(idx.j) * zeta.conj().powu(idx.k) * s.powi(idx.l as i32)
}

/// `ζ^j ζ̄^k (1−|ζ|²)^ℓ` for `|ζ| < 1`.
pub fn eval_monomial(idx: MonomialIndex, zeta: Complex64) -> Result<Complex64> {
    check_interior(zeta)?;
    Ok(monomial_unchecked(idx, zeta))
}

/// Finite combination `Σ c_i e^{ℓ_i}_{j_i k_i}` with merged indices.
///
/// Coefficients of magnitude below `1e−300` are dropped on insertion; nothing
/// else is pruned.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolyanalyticFn {
    terms: BTreeMap<MonomialIndex, Complex64>,
}

const ZERO_CUTOFF: f64 = 1e-300;

impl PolyanalyticFn {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Complex64, MonomialIndex)>) -> Self {
        let mut f = Self::new();
        for (c, idx) in terms {
            f.add_term(c, idx);
        }
        f
    }

    /// Adds `c · e^ℓ_{jk}`, merging with an existing term at the same index.
    pub fn add_term(&mut self, c: Complex64, idx: MonomialIndex) {
        let merged = self.terms.get(&idx).copied().unwrap_or_default() + c;
        if merged.norm() < ZERO_CUTOFF {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, merged);
        }
    }

    /// Terms in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (MonomialIndex, Complex64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn coefficient(&self, idx: MonomialIndex) -> Complex64 {
        self.terms.get(&idx).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `1 + max(k + ℓ)`: the factor `(1−|ξ|²)^ℓ` contributes `ℓ` to the degree
    /// in `ξ̄`. Zero for the empty combination.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|i| 1 + i.k + i.l).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(i, c)| (c * s, i)))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(c, i);
        }
        out
    }

    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        check_interior(zeta)?;
        Ok(self
            .terms()
            .map(|(i, c)| c * monomial_unchecked(i, zeta))
            .sum())
    }
}

/// Random combination of `1..=max_terms` generic monomials with indices in
/// `0..=max_index` and coefficients drawn uniformly from `[0,1) × [0,1)`.
///
/// The draw order is fixed (term count, then per term `j, k, ℓ, re, im`), so a
/// seeded generator reproduces the same function on every platform.
pub fn random_polyanalytic<R: Rng>(rng: &mut R, max_index: u32, max_terms: usize) -> PolyanalyticFn {
    let count = rng.gen_range(1..=max_terms.max(1));
    let mut f = PolyanalyticFn::new();
    for _ in 0..count {
        let j = rng.gen_range(0..=max_index);
        let k = rng.gen_range(0..=max_index);
        let l = rng.gen_range(0..=max_index);
        let re: f64 = rng.gen();
        let im: f64 = rng.gen();
        f.add_term(Complex64::new(re, im), MonomialIndex::new(j, k, l));
    }
    f
}

fn check_coeff_index(j: u32, m: u32, n: u32) -> Result<()> {
    if j > m.min(n) {
        return Err(Error::Index(format!(
            "disc polynomial coefficient needs j <= min(m, n), got j={j}, m={m}, n={n}"
        )));
    }
    Ok(())
}

/// `c^{γ,j}_{m,n} = (−1)^j m! n! / ((γ+1)_j j! (m−j)! (n−j)!)`.
pub fn disc_poly_coeff(gamma: f64, j: u32, m: u32, n: u32) -> Result<f64> {
    check_coeff_index(j, m, n)?;
    check_gamma(gamma)?;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let num = factorial(m) * factorial(n);
    let den = pochhammer(gamma + 1.0, j) * factorial(j) * factorial(m - j) * factorial(n - j);
    Ok(sign * num / den)
}

/// [`disc_poly_coeff`] in exact rational arithmetic.
pub fn disc_poly_coeff_exact(gamma: &Rational, j: u32, m: u32, n: u32) -> Result<Rational> {
    check_coeff_index(j, m, n)?;
    if *gamma <= Rational::from_integer((-1).into()) {
        return Err(Error::Parameter(format!("gamma must exceed -1, got {gamma}")));
    }
    let fact = |x: u32| Rational::from_integer((1..=x).map(num_bigint::BigInt::from).product());
    let num = fact(m) * fact(n);
    let one = Rational::from_integer(1.into());
    let den = pochhammer(gamma.clone() + one, j) * fact(j) * fact(m - j) * fact(n - j);
    let value = num / den;
    Ok(if j.is_multiple_of(2) { value } else { -value })
}

/// `R^γ_{m,n} = Σ_{j=0}^{min(m,n)} c^{γ,j}_{m,n} e^j_{m−j,n−j}`.
pub fn disc_poly_expand(gamma: f64, idx: DiscPolyIndex) -> Result<PolyanalyticFn> {
    check_gamma(gamma)?;
    let DiscPolyIndex { m, n } = idx;
    let mut f = PolyanalyticFn::new();
    for j in 0..=m.min(n) {
        let c = disc_poly_coeff(gamma, j, m, n)?;
        f.add_term(Complex64::new(c, 0.0), MonomialIndex::new(m - j, n - j, j));
    }
    Ok(f)
}

/// Direct evaluation of `R^γ_{m,n}(ζ)`.
///
/// With `q = min(m,n)`, `ρ = |ζ|²` and `s = 1−ρ` the sum is
/// `ζ^{m−q} ζ̄^{n−q} Σ_j c_j ρ^{q−j} s^j`; the inner sum runs as a Horner
/// scheme in `ρ` with coefficients built by their ratio recurrence.
pub fn eval_disc_poly(gamma: f64, idx: DiscPolyIndex, zeta: Complex64) -> Result<Complex64> {
    check_interior(zeta)?;
    check_gamma(gamma)?;
    let DiscPolyIndex { m, n } = idx;
    let q = m.min(n);
    let rho = zeta.norm_sqr();
    let s = 1.0 - rho;
    let mut coeff = 1.0;
    let mut s_pow = 1.0;
    let mut acc = 0.0;
    for j in 0..=q {
        acc = acc * rho + coeff * s_pow;
        let jf = f64::from(j);
        coeff *= -f64::from(m - j) * f64::from(n - j) / ((gamma + 1.0 + jf) * (jf + 1.0));
        s_pow *= s;
    }
    Ok(zeta.powu(m - q) * zeta.conj().powu(n - q) * acc)
}

/// `⟨e1, e2⟩_γ = ∫_D e1 · conj(e2) · (1−|ζ|²)^γ dλ`
/// `= π · δ_{j1−k1, j2−k2} · moment((j1+k1+j2+k2)/2, ℓ1+ℓ2, γ)`.
pub fn inner_product_monomials(e1: MonomialIndex, e2: MonomialIndex, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let d1 = i64::from(e1.j) - i64::from(e1.k);
    let d2 = i64::from(e2.j) - i64::from(e2.k);
    if d1 != d2 {
        return Ok(0.0);
    }
    // equal angular frequency forces an even total degree
    let half = (e1.j + e1.k + e2.j + e2.k) / 2;
    Ok(PI * moment(half, e1.l + e2.l, gamma)?)
}

/// Sesquilinear extension of [`inner_product_monomials`], conjugate-linear in `g`.
pub fn inner_product_fns(f: &PolyanalyticFn, g: &PolyanalyticFn, gamma: f64) -> Result<Complex64> {
    check_gamma(gamma)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i1, c1) in f.terms() {
        for (i2, c2) in g.terms() {
            let ip = inner_product_monomials(i1, i2, gamma)?;
            if ip != 0.0 {
                acc += c1 * c2.conj() * ip;
            }
        }
    }
    Ok(acc)
}

//! Truncated power series with complex coefficients.
//!
//! A [`PowerSeries`] of order `N` stores exactly `N + 1` Taylor coefficients
//! at the origin. Every operation keeps the truncation strict: coefficients
//! past the order of the result are never read or produced.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for symbol series.
pub const DEFAULT_ORDER: usize = 256;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PowerSeries {
    /// Builds a series from its coefficients. An empty input is the zero
    /// series of order 0.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The monomial `z^n` carried at order `n`.
    pub fn monomial(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `k`, or zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Index of the last nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() != 0.0)
            .unwrap_or(0)
    }

    /// Re-truncates (or zero-extends) to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new((0..=order).map(|k| self.coeff(k)).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Coefficientwise sum; the result has the larger of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        Self::new((0..=order).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Cauchy product truncated at `out_order`.
    pub fn mul(&self, other: &Self, out_order: usize) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); out_order + 1];
        let lhs = &self.coeffs[..self.coeffs.len().min(out_order + 1)];
        for (i, &a) in lhs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let rhs_len = other.coeffs.len().min(out_order + 1 - i);
            for (j, &b) in other.coeffs[..rhs_len].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `exp(f)` at the order of `f`, via `n g_n = sum_{k=1}^n k f_k g_{n-k}`.
    pub fn exp(&self) -> Self {
        let order = self.order();
        let mut g = vec![Complex64::new(0.0, 0.0); order + 1];
        g[0] = self.coeffs[0].exp();
        for n in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                acc += self.coeffs[k] * g[n - k] * k as f64;
            }
            g[n] = acc / n as f64;
        }
        Self::new(g)
    }

    /// Horner evaluation of the truncated polynomial at a point of the open
    /// unit disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideDisk(r));
        }
        Ok(self.eval_unchecked(z))
    }

    /// Horner evaluation without the disk check (boundary sampling of
    /// polynomials).
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Sum of squared coefficient moduli (the H^2 norm squared).
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise deviation, comparing up to the larger order.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let order = self.order().max(other.order());
        (0..=order)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// True when every coefficient is real.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }
}

/// Taylor coefficients of `(1 - z)^(-c)` up to order `n`.
pub fn phi_c_series(c: f64, n: usize) -> Result<PowerSeries> {
    if !(c > 0.0) {
        return Err(Error::NonPositiveExponent(c));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut current = 1.0_f64;
    coeffs.push(current);
    for k in 0..n {
        current *= (k as f64 + c) / (k as f64 + 1.0);
        coeffs.push(current);
    }
    Ok(PowerSeries::from_real(&coeffs))
}

/// Weight of the Dirac mass at `ζ = 1` defining the singular inner function.
pub(crate) const THETA_WEIGHT: f64 = 0.5;

/// Taylor coefficients of `exp(-(1/2)(1+z)/(1-z))`, obtained by
/// exponentiating `-1/2 - sum_{n>=1} z^n`.
pub fn theta_series(n: usize) -> PowerSeries {
    let mut log = vec![Complex64::new(-2.0 * THETA_WEIGHT, 0.0); n + 1];
    log[0] = Complex64::new(-THETA_WEIGHT, 0.0);
    PowerSeries::new(log).exp()
}

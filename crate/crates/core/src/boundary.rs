//! Boundary grids on the unit circle, the Pythagorean pair `(a, b)` of a
//! symbol, and outer functions built from a boundary modulus.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PowerSeries;
use crate::symbol::Symbol;

/// Grid size used when reconstructing coefficients.
pub const RECONSTRUCTION_GRID: usize = 1 << 14;
/// Grid size used when only the Pythagorean invariant is checked.
pub const CHECK_GRID: usize = 1 << 10;
/// Default bound on `| |a|^2 + |b|^2 - 1 |` over the grid.
pub const PYTHAGOREAN_TOL: f64 = 1e-8;

/// Samples at `ζ_j = exp(i(2πj/M + δ))`, `j = 0..M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    values: Vec<Complex64>,
    offset: f64,
}

impl BoundaryGrid {
    /// Default offset `π/M`, which keeps `ζ = 1` halfway between two nodes.
    pub fn default_offset(m: usize) -> f64 {
        PI / m as f64
    }

    pub fn new(values: Vec<Complex64>, offset: f64) -> Result<Self> {
        let m = values.len();
        if m < 8 || !m.is_power_of_two() {
            return Err(Error::BadGridSize(m));
        }
        Ok(Self { values, offset })
    }

    /// Samples `f` at the nodes of the default offset grid of size `m`.
    pub fn sample<F: Fn(f64) -> Complex64>(m: usize, f: F) -> Result<Self> {
        if m < 8 || !m.is_power_of_two() {
            return Err(Error::BadGridSize(m));
        }
        let offset = Self::default_offset(m);
        let values = (0..m)
            .map(|j| f(2.0 * PI * j as f64 / m as f64 + offset))
            .collect();
        Ok(Self { values, offset })
    }

    /// Samples a nonnegative real function (a modulus).
    pub fn sample_real<F: Fn(f64) -> f64>(m: usize, f: F) -> Result<Self> {
        Self::sample(m, |a| Complex64::new(f(a), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64 + self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts, which is how moduli are stored.
    pub fn real_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.re)
    }

    fn map_real<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|v| Complex64::new(f(v.re), 0.0))
                .collect(),
            offset: self.offset,
        }
    }

    /// Writes `angle,re,im` rows with a header line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["angle", "re", "im"])?;
        for (j, v) in self.values.iter().enumerate() {
            w.serialize((self.angle(j), v.re, v.im))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a grid written by [`BoundaryGrid::write_csv`]. Angles must be
    /// uniformly spaced by `2π/M`.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let mut angles = Vec::new();
        let mut values = Vec::new();
        for row in r.deserialize() {
            let (angle, re, im): (f64, f64, f64) = row?;
            angles.push(angle);
            values.push(Complex64::new(re, im));
        }
        let m = values.len();
        if m < 8 || !m.is_power_of_two() {
            return Err(Error::BadGridSize(m));
        }
        let step = 2.0 * PI / m as f64;
        for (j, a) in angles.iter().enumerate() {
            if (a - angles[0] - step * j as f64).abs() > 1e-9 {
                return Err(Error::Parse(format!("row {j}: angle {a} is off the uniform grid")));
            }
        }
        Self::new(values, angles[0])
    }
}

/// Boundary moduli `(|a|, |b|)` with `|a|^2 + |b|^2 = 1` and `|φ| = |b|/|a|`.
pub fn pythagorean_moduli(phi_modulus: &BoundaryGrid) -> Result<(BoundaryGrid, BoundaryGrid)> {
    for (index, value) in phi_modulus.real_values().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeSample { index, value });
        }
    }
    let a = phi_modulus.map_real(|x| 1.0 / x.mul_add(x, 1.0).sqrt());
    let b = phi_modulus.map_real(|x| x / x.mul_add(x, 1.0).sqrt());
    Ok((a, b))
}

/// An outer function: truncated Taylor series plus its boundary values on
/// the grid it was built from.
#[derive(Clone, Debug)]
pub struct OuterFunction {
    pub series: PowerSeries,
    pub boundary: BoundaryGrid,
}

/// Builds the outer function with boundary modulus `w` from the discrete
/// analytic completion of `log w`.
pub fn outer_completion(w: &BoundaryGrid, order: usize) -> Result<OuterFunction> {
    let m = w.len();
    let mut buf = Vec::with_capacity(m);
    for (index, value) in w.real_values().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveSample { index, value });
        }
        buf.push(Complex64::new(value.ln(), 0.0));
    }
    let mean_log = buf.iter().map(|c| c.re).sum::<f64>() / m as f64;

    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let spectrum = buf;

    // Taylor coefficients of u + iv: ĉ_0, then 2ĉ_n, with the grid offset
    // removed from the phase.
    let scale = 1.0 / m as f64;
    let coeffs: Vec<Complex64> = (0..=order)
        .map(|n| {
            if n == 0 {
                Complex64::new(mean_log, 0.0)
            } else if n < m / 2 {
                spectrum[n] * Complex64::from_polar(2.0 * scale, -(n as f64) * w.offset())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let series = PowerSeries::new(coeffs).exp();

    // Boundary values of u + iv on the grid nodes themselves.
    let mut half = vec![Complex64::new(0.0, 0.0); m];
    half[0] = spectrum[0];
    for n in 1..m / 2 {
        half[n] = spectrum[n] * 2.0;
    }
    half[m / 2] = spectrum[m / 2];
    planner.plan_fft_inverse(m).process(&mut half);
    let values = half.into_iter().map(|v| (v * scale).exp()).collect();

    Ok(OuterFunction {
        series,
        boundary: BoundaryGrid::new(values, w.offset())?,
    })
}

/// Taylor coefficients (to `order`) of the outer function whose boundary
/// modulus is sampled in `w`. The constant term is `exp(mean log w) > 0`.
pub fn outer_from_modulus(w: &BoundaryGrid, order: usize) -> Result<PowerSeries> {
    outer_completion(w, order).map(|o| o.series)
}

/// A symbol `φ` with its Pythagorean pair: `φ = b/a`, `|a|^2 + |b|^2 = 1` on
/// the circle, `a` outer with `a(0) > 0`.
#[derive(Clone, Debug)]
pub struct SymbolTriple {
    pub symbol: Symbol,
    pub phi: PowerSeries,
    pub a: PowerSeries,
    pub b: PowerSeries,
    /// Samples of `|φ|` on the grid.
    pub grid: BoundaryGrid,
    pub a_boundary: BoundaryGrid,
    pub b_boundary: BoundaryGrid,
    /// Largest `| |a|^2 + |b|^2 - 1 |` over the grid.
    pub residual: f64,
}

impl SymbolTriple {
    pub fn a_at_zero(&self) -> Complex64 {
        self.a.coeff(0)
    }
}

/// Builds the Pythagorean triple for `symbol` with grid size `m` and series
/// order `order`, failing when the grid residual exceeds `tolerance`.
pub fn symbol_from_phi_with_tol(
    symbol: &Symbol,
    m: usize,
    order: usize,
    tolerance: f64,
) -> Result<SymbolTriple> {
    let phi_boundary = BoundaryGrid::sample(m, |angle| symbol.boundary_value(angle))?;
    let grid = BoundaryGrid {
        values: phi_boundary
            .values()
            .iter()
            .map(|v| Complex64::new(v.norm(), 0.0))
            .collect(),
        offset: phi_boundary.offset,
    };
    let (a_modulus, _) = pythagorean_moduli(&grid)?;
    let outer = outer_completion(&a_modulus, order)?;

    let phi = symbol.series(order);
    let b = phi.mul(&outer.series, order);
    let b_boundary = BoundaryGrid::new(
        phi_boundary
            .values()
            .iter()
            .zip(outer.boundary.values())
            .map(|(p, a)| p * a)
            .collect(),
        grid.offset,
    )?;

    let residual = outer
        .boundary
        .values()
        .iter()
        .zip(b_boundary.values())
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    if !(residual <= tolerance) {
        return Err(Error::PythagoreanResidual {
            residual,
            tolerance,
        });
    }
    Ok(SymbolTriple {
        symbol: symbol.clone(),
        phi,
        a: outer.series,
        b,
        grid,
        a_boundary: outer.boundary,
        b_boundary,
        residual,
    })
}

pub fn symbol_from_phi(symbol: &Symbol, m: usize, order: usize) -> Result<SymbolTriple> {
    symbol_from_phi_with_tol(symbol, m, order, PYTHAGOREAN_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::phi_c_series;

    #[test]
    fn grid_size_validation() {
        assert!(matches!(
            BoundaryGrid::sample_real(12, |_| 1.0),
            Err(Error::BadGridSize(12))
        ));
        assert!(BoundaryGrid::sample_real(4, |_| 1.0).is_err());
        let g = BoundaryGrid::sample_real(8, |_| 1.0).unwrap();
        assert_eq!(g.offset(), PI / 8.0);
    }

    #[test]
    fn offset_grid_avoids_one() {
        let g = BoundaryGrid::sample_real(64, |_| 1.0).unwrap();
        for j in 0..64 {
            let a = g.angle(j) % (2.0 * PI);
            assert!(a.abs() > 1e-3 && (2.0 * PI - a).abs() > 1e-3);
        }
    }

    #[test]
    fn pythagorean_constant_cases() {
        let check = |phi: f64, a: f64, b: f64| {
            let g = BoundaryGrid::sample_real(8, |_| phi).unwrap();
            let (ga, gb) = pythagorean_moduli(&g).unwrap();
            for (x, y) in ga.real_values().zip(gb.real_values()) {
                assert!((x - a).abs() < 1e-15 && (y - b).abs() < 1e-15);
                assert!((x * x + y * y - 1.0).abs() < 1e-15);
            }
        };
        check(1.0, 0.5f64.sqrt(), 0.5f64.sqrt());
        check(0.0, 1.0, 0.0);
        check(3.0, 1.0 / 10f64.sqrt(), 3.0 / 10f64.sqrt());
    }

    #[test]
    fn pythagorean_rejects_negative_sample() {
        let g = BoundaryGrid::sample_real(8, |a| if a > 3.0 { -1.0 } else { 1.0 }).unwrap();
        assert!(matches!(
            pythagorean_moduli(&g),
            Err(Error::NegativeSample { .. })
        ));
    }

    #[test]
    fn outer_of_constant_is_constant() {
        let g = BoundaryGrid::sample_real(64, |_| 5.0).unwrap();
        let o = outer_from_modulus(&g, 8).unwrap();
        assert!((o.coeff(0) - Complex64::new(5.0, 0.0)).norm() < 1e-13);
        for k in 1..=8 {
            assert!(o.coeff(k).norm() < 1e-13);
        }
    }

    #[test]
    fn outer_rejects_zero_sample() {
        let g = BoundaryGrid::sample_real(8, |a| if a > 3.0 { 0.0 } else { 1.0 }).unwrap();
        assert!(matches!(
            outer_from_modulus(&g, 4),
            Err(Error::NonPositiveSample { .. })
        ));
    }

    #[test]
    fn outer_of_one_minus_z() {
        let m = RECONSTRUCTION_GRID;
        let g = BoundaryGrid::sample_real(m, |a| 2.0 * (0.5 * a).sin().abs()).unwrap();
        let o = outer_from_modulus(&g, 8).unwrap();
        let exact = PowerSeries::from_real(&[1.0, -1.0]);
        assert!(o.max_deviation(&exact) <= 1e-3, "{:?}", o);
        assert!(o.coeff(0).im == 0.0 && o.coeff(0).re > 0.0);
    }

    #[test]
    fn outer_is_multiplicative() {
        let m = 1 << 10;
        let w1 = |a: f64| 2.0 + a.cos();
        let w2 = |a: f64| (1.5 + (2.0 * a).sin()).powi(2);
        let g1 = BoundaryGrid::sample_real(m, w1).unwrap();
        let g2 = BoundaryGrid::sample_real(m, w2).unwrap();
        let g12 = BoundaryGrid::sample_real(m, |a| w1(a) * w2(a)).unwrap();
        let n = 32;
        let lhs = outer_from_modulus(&g12, n).unwrap();
        let rhs = outer_from_modulus(&g1, n)
            .unwrap()
            .mul(&outer_from_modulus(&g2, n).unwrap(), n);
        assert!(lhs.max_deviation(&rhs) <= 1e-6);
    }

    #[test]
    fn boundary_values_recover_modulus() {
        let g = BoundaryGrid::sample_real(256, |a| 1.0 + 0.5 * a.cos()).unwrap();
        let o = outer_completion(&g, 4).unwrap();
        for (v, w) in o.boundary.values().iter().zip(g.real_values()) {
            assert!((v.norm() - w).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_symbol_triple() {
        let t = symbol_from_phi(&Symbol::constant(Complex64::new(1.0, 0.0)), CHECK_GRID, 8).unwrap();
        let s = 0.5f64.sqrt();
        assert!((t.a.coeff(0).re - s).abs() < 1e-14);
        assert!((t.b.coeff(0).re - s).abs() < 1e-14);
        for k in 1..=8 {
            assert!(t.a.coeff(k).norm() < 1e-14 && t.b.coeff(k).norm() < 1e-14);
        }
    }

    #[test]
    fn phi_one_triple_satisfies_invariants() {
        let t = symbol_from_phi(&Symbol::PhiC { c: 1.0 }, CHECK_GRID, 64).unwrap();
        assert!(t.residual <= PYTHAGOREAN_TOL);
        assert!(t.a_at_zero().re > 0.0 && t.a_at_zero().im == 0.0);
        // b(0) = a(0) φ(0) = a(0)
        assert!((t.b.coeff(0) - t.a.coeff(0)).norm() < 1e-15);
    }

    #[test]
    fn residual_tolerance_is_enforced() {
        let err = symbol_from_phi_with_tol(&Symbol::PhiC { c: 0.5 }, CHECK_GRID, 8, -1.0);
        assert!(matches!(err, Err(Error::PythagoreanResidual { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let g = BoundaryGrid::sample(16, |a| Complex64::new(a.cos(), a.sin())).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("angle,re,im\n"));
        let back = BoundaryGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 16);
        assert!((back.offset() - g.offset()).abs() < 1e-15);
        for (x, y) in back.values().iter().zip(g.values()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_quarter_reconstruction_converges() {
        let target = phi_c_series(0.25, 16).unwrap();
        let err = |m: usize| {
            let g = BoundaryGrid::sample_real(m, |a| Symbol::PhiC { c: 0.25 }.boundary_value(a).norm())
                .unwrap();
            outer_from_modulus(&g, 16).unwrap().max_deviation(&target)
        };
        let e1 = err(1 << 12);
        let e2 = err(1 << 13);
        assert!(e2 < e1 && e2 <= e1);
    }
}

//! Dyadic Carleson squares, quadrature of measures `d(z) dA(z)`, and the
//! Carleson-measure classification behind weighted containment in `H(b)`.
//!
//! `dA` is normalized area (`A(D) = 1`), i.e. `r dr dθ / π`. The square
//! `S_{n,k}` is the polar box `1 - r ≤ 2^{-n}` over the `k`-th dyadic arc of
//! length `2π 2^{-n}`; negative `k` mirror positive `k` across the real axis.
//!
//! A measure is Carleson iff `2^n max_k μ(S_{n,k})` stays bounded, and
//! vanishing Carleson iff it tends to zero. With only finitely many levels
//! the classification is a trend: a fitted slope of `log2` of the level
//! ratios against `n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::SymbolTriple;
use crate::error::{Error, Result};
use crate::hardy::fit_slope;
use crate::quadrature::{adaptive, UnitRule};
use crate::symbol::{DiskPoint, Symbol, EXP_FLOOR};

/// Slope at or beyond which a level profile is called vanishing/unbounded.
pub const SLOPE_THRESHOLD: f64 = 0.1;
/// Largest max/min ratio across levels for a bounded profile.
pub const BOUNDED_BAND: f64 = 3.0;
/// Relative agreement between successive quadrature refinements.
pub const QUAD_REL_TOL: f64 = 0.01;
/// Extra refinements attempted past the starting level.
pub const MAX_EXTRA_REFINEMENTS: u32 = 3;
/// Default levels `n = 6..=14`.
pub const DEFAULT_LEVELS: (u32, u32) = (6, 14);
/// Opening of the Stolz angle used with the dyadic system, `1/(4π + 2)`.
pub fn stolz_alpha() -> f64 {
    1.0 / (4.0 * PI + 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicSquare {
    pub n: u32,
    pub k: i64,
}

impl DyadicSquare {
    pub fn new(n: u32, k: i64) -> Result<Self> {
        let half = if n >= 1 && n < 62 { 1i64 << (n - 1) } else { 0 };
        if half == 0 || k == 0 || k.abs() > half {
            return Err(Error::BadSquare { n, k });
        }
        Ok(Self { n, k })
    }

    /// Side length `h = 2^{-n}`.
    pub fn side(&self) -> f64 {
        (-(self.n as f64)).exp2()
    }

    /// Angular interval `[a0, a1]` of the arc `I_{n,k}`.
    pub fn arc(&self) -> (f64, f64) {
        let h = self.side();
        let k = self.k.unsigned_abs() as f64;
        let (a0, a1) = (2.0 * PI * (k - 1.0) * h, 2.0 * PI * k * h);
        if self.k > 0 {
            (a0, a1)
        } else {
            (-a1, -a0)
        }
    }

    pub fn mirror(&self) -> Self {
        Self { n: self.n, k: -self.k }
    }

    /// `|k| = 1`: the square has `ζ = 1` in its closure.
    pub fn touches_one(&self) -> bool {
        self.k.abs() == 1
    }

    pub fn as_box(&self) -> PolarBox {
        let (a0, a1) = self.arc();
        PolarBox {
            depth: (0.0, self.side()),
            angle: (a0, a1),
        }
    }

    /// The two squares of level `n + 1` under this one, followed by the band
    /// `2^{-n-1} ≤ 1 - r ≤ 2^{-n}` above them. Together they tile the square.
    pub fn subdivision(&self) -> (DyadicSquare, DyadicSquare, PolarBox) {
        let k = self.k.abs();
        let sign = self.k.signum();
        let left = DyadicSquare { n: self.n + 1, k: sign * (2 * k - 1) };
        let right = DyadicSquare { n: self.n + 1, k: sign * 2 * k };
        let h = self.side();
        let (a0, a1) = self.arc();
        (left, right, PolarBox { depth: (0.5 * h, h), angle: (a0, a1) })
    }
}

/// `{ r e^{iθ} : 1 - r ∈ [depth.0, depth.1], θ ∈ [angle.0, angle.1] }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarBox {
    pub depth: (f64, f64),
    pub angle: (f64, f64),
}

/// Membership of `z` in the closed square `S_{n,k}`.
pub fn square_contains(z: Complex64, s: &DyadicSquare) -> bool {
    let r = z.norm();
    if !(1.0 - r <= s.side()) || r >= 1.0 {
        return false;
    }
    let theta = z.arg();
    let (a0, a1) = s.arc();
    a0 <= theta && theta <= a1
}

/// `(1 - |z|) / |1 - z| ≥ alpha`.
pub fn stolz_contains(z: Complex64, alpha: f64) -> bool {
    let dist = (Complex64::new(1.0, 0.0) - z).norm();
    if dist == 0.0 {
        return false;
    }
    (1.0 - z.norm()) / dist >= alpha
}

/// A nonnegative density on the disk, integrated against normalized area.
pub trait Density: Sync {
    fn eval(&self, p: &DiskPoint) -> f64;

    /// `d(conj z) = d(z)`, which lets profiles skip negative `k`.
    fn is_conj_symmetric(&self) -> bool {
        false
    }
}

/// `d ≡ 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Uniform;

impl Density for Uniform {
    fn eval(&self, _: &DiskPoint) -> f64 {
        1.0
    }
    fn is_conj_symmetric(&self) -> bool {
        true
    }
}

impl<F: Fn(&DiskPoint) -> f64 + Sync> Density for F {
    fn eval(&self, p: &DiskPoint) -> f64 {
        self(p)
    }
}

/// A radial weight `G(|z|)`, parameterized by the depth `t = 1 - |z|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialWeight {
    /// `G ≡ 1`: the Dirichlet space, whose dual is the Bergman space.
    Unweighted,
    /// `G(r) = exp(-c/(1 - r))`.
    Gevrey { c: f64 },
}

impl RadialWeight {
    pub fn at_depth(&self, t: f64) -> f64 {
        match *self {
            RadialWeight::Unweighted => 1.0,
            RadialWeight::Gevrey { c } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let e = -c / t;
                if e < EXP_FLOOR {
                    0.0
                } else {
                    e.exp()
                }
            }
        }
    }

    pub fn at_radius(&self, r: f64) -> f64 {
        self.at_depth(1.0 - r)
    }
}

/// `|φ(z)|^2 G(|z|)`.
#[derive(Clone, Debug)]
pub struct SymbolDensity {
    pub symbol: Symbol,
    pub weight: RadialWeight,
}

impl Density for SymbolDensity {
    fn eval(&self, p: &DiskPoint) -> f64 {
        let g = self.weight.at_depth(1.0 - p.modulus());
        if g == 0.0 {
            return 0.0;
        }
        self.symbol.modulus_sq(p) * g
    }
    fn is_conj_symmetric(&self) -> bool {
        self.symbol.is_conj_symmetric()
    }
}

/// A quadrature estimate that records how far refinement went.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub refinement: u32,
    /// Successive refinements failed to agree to the tolerance.
    pub flagged: bool,
}

struct Panels {
    /// `(a, b)` subintervals.
    cells: Vec<(f64, f64)>,
}

impl Panels {
    /// Geometric grading toward the endpoint `toward_low ? lo : hi`, ratio
    /// 1/2, `levels` cells before the last one that reaches the endpoint.
    fn graded(lo: f64, hi: f64, levels: u32, toward_low: bool) -> Self {
        let len = hi - lo;
        let mut cells = Vec::with_capacity(levels as usize + 1);
        let mut outer = len;
        for _ in 0..levels {
            let inner = 0.5 * outer;
            cells.push((inner, outer));
            outer = inner;
        }
        cells.push((0.0, outer));
        let cells = cells
            .into_iter()
            .map(|(a, b)| if toward_low { (lo + a, lo + b) } else { (hi - b, hi - a) })
            .collect();
        Self { cells }
    }

    fn uniform(lo: f64, hi: f64, count: usize) -> Self {
        let step = (hi - lo) / count as f64;
        Self {
            cells: (0..count)
                .map(|i| (lo + step * i as f64, lo + step * (i + 1) as f64))
                .collect(),
        }
    }

    fn nodes(&self, rule: &UnitRule) -> Vec<(f64, f64)> {
        self.cells
            .iter()
            .flat_map(|&(a, b)| {
                let h = b - a;
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(move |(&x, &w)| (a + h * x, w * h))
            })
            .collect()
    }
}

/// Quadrature parameters at refinement level `level`.
#[derive(Clone, Copy, Debug)]
struct Resolution {
    radial_levels: u32,
    corner_levels: u32,
    radial_points: usize,
    angular_points: usize,
    angular_panels: usize,
}

impl Resolution {
    fn at(level: u32) -> Self {
        Self {
            radial_levels: 16 + 8 * level,
            corner_levels: 30 + 10 * level,
            radial_points: 6 + 2 * level as usize,
            angular_points: 8 + 4 * level as usize,
            angular_panels: 4,
        }
    }
}

/// Tensor polar quadrature of `∫_B d dA` at a fixed resolution.
///
/// The depth direction is graded geometrically toward `r = 1` when the box
/// reaches the circle. The angular direction is graded toward `θ = 0` when
/// the box has `ζ = 1` on its boundary, and split uniformly otherwise.
fn box_measure_at<D: Density + ?Sized>(d: &D, b: &PolarBox, res: Resolution) -> f64 {
    let (t0, t1) = b.depth;
    let (a0, a1) = b.angle;
    let at_circle = t0 == 0.0;
    let at_one = at_circle && (a0 == 0.0 || a1 == 0.0);

    let radial_rule = UnitRule::gauss_legendre(res.radial_points);
    let radial = if at_circle {
        let levels = if at_one { res.corner_levels } else { res.radial_levels };
        Panels::graded(t0, t1, levels, true)
    } else {
        Panels::uniform(t0, t1, 2)
    };
    let angular = if at_one {
        let rule = UnitRule::gauss_legendre(res.radial_points);
        Panels::graded(a0, a1, res.corner_levels, a0 == 0.0).nodes(&rule)
    } else {
        let rule = UnitRule::gauss_legendre(res.angular_points);
        Panels::uniform(a0, a1, res.angular_panels).nodes(&rule)
    };
    let radial = radial.nodes(&radial_rule);

    let mut total = 0.0;
    for &(theta, wa) in &angular {
        let half = (0.5 * theta).sin();
        let half_sq = half * half;
        let (sin, cos) = theta.sin_cos();
        let mut inner = 0.0;
        for &(t, wr) in &radial {
            let r = 1.0 - t;
            let p = DiskPoint {
                z: Complex64::new(r * cos, r * sin),
                one_minus_z: Complex64::new(t + 2.0 * r * half_sq, -r * sin),
                depth_sq: t * (2.0 - t),
                dist_one_sq: t * t + 4.0 * r * half_sq,
            };
            inner += wr * r * d.eval(&p);
        }
        total += wa * inner;
    }
    total / PI
}

/// `∫_B d dA`, refined from `refinement` until two successive levels agree
/// to 1%.
pub fn box_measure<D: Density + ?Sized>(d: &D, b: &PolarBox, refinement: u32) -> MeasureEstimate {
    let mut level = refinement;
    let mut prev = box_measure_at(d, b, Resolution::at(level));
    loop {
        level += 1;
        let next = box_measure_at(d, b, Resolution::at(level));
        let agree = (next - prev).abs() <= QUAD_REL_TOL * next.abs() || next == prev;
        if agree && next.is_finite() {
            return MeasureEstimate { value: next, refinement: level, flagged: false };
        }
        if level >= refinement + MAX_EXTRA_REFINEMENTS {
            return MeasureEstimate { value: next, refinement: level, flagged: true };
        }
        prev = next;
    }
}

/// `μ(S_{n,k})` for `dμ = d dA`.
pub fn square_measure<D: Density + ?Sized>(d: &D, s: &DyadicSquare, refinement: u32) -> MeasureEstimate {
    box_measure(d, &s.as_box(), refinement)
}

/// Exact normalized area of any `S_{n,k}`: `2·4^{-n} - 8^{-n}`.
pub fn uniform_square_area(n: u32) -> f64 {
    let h = (-(n as f64)).exp2();
    2.0 * h * h - h * h * h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Vanishing,
    Bounded,
    Unbounded,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Vanishing => "vanishing",
            Classification::Bounded => "bounded",
            Classification::Unbounded => "unbounded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: u32,
    pub k_max: i64,
    /// `2^n max_k μ(S_{n,k})`.
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonReport {
    pub n_min: u32,
    pub n_max: u32,
    pub levels: Vec<LevelRow>,
    /// Least-squares slope of `log2(ratio)` against `n`.
    pub slope: f64,
    /// `max ratio / min ratio` across levels.
    pub spread: f64,
    pub classification: Classification,
    /// Starting quadrature refinement.
    pub refinement: u32,
    /// Some square estimate did not converge.
    pub flagged: bool,
    pub caveat: String,
}

const CAVEAT: &str = "trend at the tested levels only; finitely many levels cannot certify o(h)";

/// Classification from the fitted slope and the spread of level ratios.
///
/// A flat slope with ratios spread beyond the bounded band falls back to the
/// sign of the slope.
pub fn classify(slope: f64, spread: f64) -> Classification {
    if slope <= -SLOPE_THRESHOLD {
        Classification::Vanishing
    } else if slope >= SLOPE_THRESHOLD {
        Classification::Unbounded
    } else if spread <= BOUNDED_BAND {
        Classification::Bounded
    } else if slope > 0.0 {
        Classification::Unbounded
    } else {
        Classification::Vanishing
    }
}

/// For each level `n`, the largest `2^n μ(S_{n,k})` over `k`, then slope fit
/// and classification. With `symmetric`, only `k > 0` is evaluated.
pub fn level_profile<D: Density + ?Sized>(
    d: &D,
    levels: (u32, u32),
    symmetric: bool,
    refinement: u32,
) -> CarlesonReport {
    let (n_min, n_max) = levels;
    let rows: Vec<LevelRow> = (n_min..=n_max)
        .map(|n| {
            let half = 1i64 << (n - 1);
            let ks: Vec<i64> = if symmetric {
                (1..=half).collect()
            } else {
                (1..=half).chain((1..=half).map(|k| -k)).collect()
            };
            let scale = (n as f64).exp2();
            let estimates: Vec<(i64, MeasureEstimate)> = ks
                .par_iter()
                .map(|&k| (k, square_measure(d, &DyadicSquare { n, k }, refinement)))
                .collect();
            let flagged = estimates.iter().any(|(_, e)| e.flagged);
            let (k_max, best) = estimates
                .iter()
                .fold((0, f64::NEG_INFINITY), |acc, (k, e)| {
                    if e.value > acc.1 {
                        (*k, e.value)
                    } else {
                        acc
                    }
                });
            LevelRow { n, k_max, ratio: scale * best, flagged }
        })
        .collect();
    report_from_rows(rows, refinement)
}

fn report_from_rows(levels: Vec<LevelRow>, refinement: u32) -> CarlesonReport {
    let xs: Vec<f64> = levels.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = levels.iter().map(|r| r.ratio.max(f64::MIN_POSITIVE).log2()).collect();
    let slope = fit_slope(&xs, &ys);
    let max = levels.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let min = levels.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    CarlesonReport {
        n_min: levels.first().map_or(0, |r| r.n),
        n_max: levels.last().map_or(0, |r| r.n),
        flagged: levels.iter().any(|r| r.flagged),
        classification: classify(slope, spread),
        levels,
        slope,
        spread,
        refinement,
        caveat: CAVEAT.to_string(),
    }
}

impl CarlesonReport {
    /// `n,k_max,ratio` rows with a header.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "k_max", "ratio"])?;
        for row in &self.levels {
            w.serialize((row.n, row.k_max, row.ratio))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Draws `samples` area-uniform points of `S_{n,1}` and checks that each
/// one lies in the Stolz angle of opening `1/(4π + 2)` or in some
/// `S_{m,2}`, `m > n`.
pub fn geometric_lemma_check(n: u32, samples: usize, seed: u64) -> bool {
    let alpha = stolz_alpha();
    let h = (-(n as f64)).exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let theta = rng.random::<f64>() * 2.0 * PI * h;
        let r_lo = 1.0 - h;
        let r = (r_lo * r_lo + rng.random::<f64>() * (1.0 - r_lo * r_lo)).sqrt();
        let z = Complex64::from_polar(r, theta);
        in_later_second_square(z, n) || stolz_contains(z, alpha)
    })
}

/// Whether `z ∈ S_{m,2}` for some `m > n`.
pub fn in_later_second_square(z: Complex64, n: u32) -> bool {
    let depth = 1.0 - z.norm();
    let mut m = n + 1;
    while m < 62 && (-(m as f64)).exp2() >= depth {
        if square_contains(z, &DyadicSquare { n: m, k: 2 }) {
            return true;
        }
        m += 1;
    }
    false
}

/// `G_n = 2 ∫_0^1 G(r) r^{2n+1} dr`.
pub fn moments<G: Fn(f64) -> f64>(g: G, n: u32) -> Result<f64> {
    let f = |r: f64| 2.0 * g(r) * r.powi(2 * n as i32 + 1);
    let e = adaptive(&f, 0.0, 1.0, 1e-13, 40);
    if !e.converged || !e.value.is_finite() {
        return Err(Error::DivergentMoment(n));
    }
    Ok(e.value)
}

/// Supremum of a density on a grid graded toward the circle and toward
/// `ζ = 1`. Level `l + 1` doubles the grid density of level `l`.
pub fn graded_sup<D: Density + ?Sized>(d: &D, level: u32) -> f64 {
    let per_octave = 1u32 << level;
    let octaves = 48;
    let depths: Vec<f64> = (0..=octaves * per_octave)
        .map(|i| (-(i as f64) / per_octave as f64).exp2())
        .collect();
    let mut angles: Vec<f64> = vec![0.0];
    for i in 0..=octaves * per_octave {
        let a = PI * (-(i as f64) / per_octave as f64).exp2();
        angles.push(a);
        angles.push(-a);
    }
    let uniform = 64 * per_octave as usize;
    angles.extend((0..uniform).map(|j| -PI + 2.0 * PI * j as f64 / uniform as f64));
    let mut sup = 0.0_f64;
    for &theta in &angles {
        for &t in &depths {
            sup = sup.max(d.eval(&DiskPoint::from_polar_depth(t, theta)));
        }
    }
    sup
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Containment {
    #[serde(rename = "compact-contained")]
    CompactlyContained,
    #[serde(rename = "contained-not-compact")]
    ContainedNotCompact,
    #[serde(rename = "not-contained")]
    NotContained,
}

impl Containment {
    pub fn as_str(self) -> &'static str {
        match self {
            Containment::CompactlyContained => "compact-contained",
            Containment::ContainedNotCompact => "contained-not-compact",
            Containment::NotContained => "not-contained",
        }
    }

    /// Ordering from easiest (compact) to hardest (not contained).
    pub fn rank(self) -> u8 {
        match self {
            Containment::CompactlyContained => 0,
            Containment::ContainedNotCompact => 1,
            Containment::NotContained => 2,
        }
    }
}

impl From<Classification> for Containment {
    fn from(c: Classification) -> Self {
        match c {
            Classification::Vanishing => Containment::CompactlyContained,
            Classification::Bounded => Containment::ContainedNotCompact,
            Classification::Unbounded => Containment::NotContained,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedContainment {
    pub symbol: Symbol,
    pub weight: RadialWeight,
    pub containment: Containment,
    pub report: CarlesonReport,
}

/// Containment of `H^2(w)` in `H(b)`, read off from whether
/// `|φ(z)|^2 G(|z|) dA` is a (vanishing) Carleson measure.
pub fn weighted_containment(triple: &SymbolTriple, weight: RadialWeight) -> WeightedContainment {
    weighted_containment_symbol(&triple.symbol, weight, DEFAULT_LEVELS, 0)
}

pub fn weighted_containment_symbol(
    symbol: &Symbol,
    weight: RadialWeight,
    levels: (u32, u32),
    refinement: u32,
) -> WeightedContainment {
    let density = SymbolDensity { symbol: symbol.clone(), weight };
    let report = level_profile(&density, levels, density.is_conj_symmetric(), refinement);
    WeightedContainment {
        symbol: symbol.clone(),
        weight,
        containment: report.classification.into(),
        report,
    }
}

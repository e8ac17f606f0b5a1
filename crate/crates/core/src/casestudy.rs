//! The family `φ_c = (1 - z)^{-c}` with and without the singular inner
//! factor `θ`, tested for containment of the Dirichlet space in `H(b)`.
//!
//! The measures are `dμ_c = |θ(z)|^2 |1 - z|^{-2c} dA` (with `θ`) and
//! `|1 - z|^{-2c} dA` (without). Without `θ` the containment threshold is
//! `c = 1/2`; with `θ` it moves to `c = 1`, because `|θ|` decays rapidly
//! inside every Stolz angle at `ζ = 1`.
//!
//! The level sets `C_t = {|θ|^2 = t}` are horocycles tangent at `ζ = 1`.
//! On `C_t`, `|1 - z|^2 = (1 - |z|^2)/s` with `s = -log t`, so
//! `|θ φ_c| = sqrt(t s^c) (1 - |z|^2)^{-c/2}` there.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carleson::{level_profile, CarlesonReport, Containment, Density, DEFAULT_LEVELS};
use crate::error::{Error, Result};
use crate::hardy::fit_slope;
use crate::symbol::{theta_modulus_sq, DiskPoint, Symbol};

/// Angular width of the arc around `ζ = 1` left out when sampling `C_t`.
pub const EXCLUDED_ARC: f64 = 1e-6;
/// Exponent margin separating the growth trends.
pub const TREND_MARGIN: f64 = 0.05;

/// The horocycle `{|θ(z)|^2 = t}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCircle {
    pub t: f64,
    pub s: f64,
    pub center: f64,
    pub radius: f64,
}

impl LevelCircle {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::BadLevel(t));
        }
        let s = -t.ln();
        let radius = 1.0 / (1.0 + s);
        // 1 - radius rather than s/(1 + s) keeps center + radius == 1.
        let center = 1.0 - radius;
        Ok(Self { t, s, center, radius })
    }

    /// The point `center + radius e^{iψ}`; `ψ = 0` is the tangency point.
    pub fn point(&self, psi: f64) -> DiskPoint {
        let half = (0.5 * psi).sin();
        let half_sq = half * half;
        let r = self.radius;
        // 1 - z = R (1 - e^{iψ}) = R (2 sin^2(ψ/2) - i sin ψ)
        let one_minus_z = Complex64::new(2.0 * r * half_sq, -r * psi.sin());
        DiskPoint {
            z: Complex64::new(self.center + r * psi.cos(), r * psi.sin()),
            one_minus_z,
            depth_sq: 4.0 * self.center * r * half_sq,
            dist_one_sq: 4.0 * r * r * half_sq,
        }
    }

    /// `samples` points evenly spread over the circle minus the excluded arc.
    pub fn sample(&self, samples: usize) -> Vec<(f64, DiskPoint)> {
        let span = 2.0 * PI - EXCLUDED_ARC;
        (0..samples)
            .map(|j| {
                let psi = 0.5 * EXCLUDED_ARC + span * (j as f64 + 0.5) / samples as f64;
                (psi, self.point(psi))
            })
            .collect()
    }
}

/// `|φ_c|^2` or `|θ φ_c|^2` from closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuDensity {
    pub c: f64,
    pub with_theta: bool,
}

pub fn mu_density(c: f64, with_theta: bool) -> Result<MuDensity> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveExponent(c));
    }
    Ok(MuDensity { c, with_theta })
}

impl MuDensity {
    pub fn symbol(&self) -> Symbol {
        if self.with_theta {
            Symbol::ThetaPhiC { c: self.c }
        } else {
            Symbol::PhiC { c: self.c }
        }
    }

    /// Checked evaluation at a point of the open disk other than `z = 1`.
    pub fn try_eval(&self, z: Complex64) -> Result<f64> {
        if z == Complex64::new(1.0, 0.0) {
            return Err(Error::SingularPoint);
        }
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk(z.norm()));
        }
        Ok(self.eval(&DiskPoint::from_z(z)))
    }
}

impl Density for MuDensity {
    fn eval(&self, p: &DiskPoint) -> f64 {
        let base = p.dist_one_sq.powf(-self.c);
        if self.with_theta {
            let t = theta_modulus_sq(p);
            if t == 0.0 {
                0.0
            } else {
                t * base
            }
        } else {
            base
        }
    }

    fn is_conj_symmetric(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetCheck {
    pub c: f64,
    pub t: f64,
    pub samples: usize,
    /// Largest relative gap between `|θ φ_c|` and `sqrt(t s^c)/(1-|z|^2)^{c/2}`.
    pub max_deviation: f64,
    /// Largest relative gap between `|θ|^2` and `t`.
    pub level_deviation: f64,
    /// Largest relative gap between `|1-z|^2` and `(1-|z|^2)/s`.
    pub distance_deviation: f64,
    /// `center + radius - 1`.
    pub tangency_gap: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Compares both sides of the level-set identities at `samples` points of
/// `C_t`. The left side goes through the complex symbol value.
pub fn levelset_identity_check(c: f64, t: f64, samples: usize) -> Result<LevelSetCheck> {
    mu_density(c, true)?;
    let circle = LevelCircle::new(t)?;
    let symbol = Symbol::ThetaPhiC { c };
    let mut check = LevelSetCheck {
        c,
        t,
        samples,
        max_deviation: 0.0,
        level_deviation: 0.0,
        distance_deviation: 0.0,
        tangency_gap: circle.center + circle.radius - 1.0,
    };
    for (_, p) in circle.sample(samples) {
        let lhs = symbol.eval_point(&p).norm();
        let rhs = (t * circle.s.powf(c)).sqrt() / p.depth_sq.powf(0.5 * c);
        check.max_deviation = check.max_deviation.max(rel(lhs, rhs));
        let theta_sq = Symbol::Theta.eval_point(&p).norm_sqr();
        check.level_deviation = check.level_deviation.max(rel(theta_sq, t));
        check.distance_deviation = check
            .distance_deviation
            .max(rel(p.one_minus_z.norm_sqr(), p.depth_sq / circle.s));
    }
    Ok(check)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Vanishing,
    Constant,
    Divergent,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Vanishing => "vanishing",
            Trend::Constant => "constant",
            Trend::Divergent => "divergent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub t: f64,
    pub psi: f64,
    pub one_minus_r: f64,
    /// `(1 - |z|)^{1/2} |f(z)|`
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub c: f64,
    pub with_theta: bool,
    pub samples: Vec<GrowthSample>,
    /// Fitted exponent `e` in `scaled ≈ C (1 - |z|)^e`, the smallest over
    /// the circles.
    pub exponent: f64,
    pub sup: f64,
    pub trend: Trend,
}

/// Scaled modulus `(1 - |z|)^{1/2} |f|` along `C_t`, `t ∈ {e^-1, e^-2, e^-3}`,
/// at `ψ = 2^{-j}`, `j = 4..=24`, and its power-law trend toward `ζ = 1`.
pub fn multiplier_growth_check(c: f64, with_theta: bool) -> Result<GrowthCheck> {
    let density = mu_density(c, with_theta)?;
    let symbol = density.symbol();
    let mut samples = Vec::new();
    let mut exponent = f64::INFINITY;
    for level in 1..=3 {
        let circle = LevelCircle::new((-(level as f64)).exp())?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for j in 4..=24 {
            let psi = (-(j as f64)).exp2();
            let p = circle.point(psi);
            let one_minus_r = p.depth_sq / (1.0 + p.modulus());
            let scaled = one_minus_r.sqrt() * symbol.eval_point(&p).norm();
            xs.push(one_minus_r.ln());
            ys.push(scaled.ln());
            samples.push(GrowthSample { t: circle.t, psi, one_minus_r, scaled });
        }
        exponent = exponent.min(fit_slope(&xs, &ys));
    }
    let sup = samples.iter().map(|s| s.scaled).fold(0.0, f64::max);
    let trend = if exponent >= TREND_MARGIN {
        Trend::Vanishing
    } else if exponent <= -TREND_MARGIN {
        Trend::Divergent
    } else {
        Trend::Constant
    };
    Ok(GrowthCheck { c, with_theta, samples, exponent, sup, trend })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub c: f64,
    pub verdict: Containment,
    pub report: CarlesonReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub with_theta: bool,
    pub levels: (u32, u32),
    pub rows: Vec<ExperimentRow>,
    pub flagged: bool,
}

/// Level profiles of `μ_c` for each `c`, with the containment verdict read
/// off the classification.
pub fn run_experiment(
    c_values: &[f64],
    with_theta: bool,
    levels: (u32, u32),
    refinement: u32,
) -> Result<Experiment> {
    let densities = c_values
        .iter()
        .map(|&c| mu_density(c, with_theta))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ExperimentRow> = densities
        .par_iter()
        .map(|d| {
            let report = level_profile(d, levels, true, refinement);
            ExperimentRow { c: d.c, verdict: report.classification.into(), report }
        })
        .collect();
    Ok(Experiment {
        with_theta,
        levels,
        flagged: rows.iter().any(|r| r.report.flagged),
        rows,
    })
}

/// The default grids: below and above the threshold on each side.
pub fn default_c_values(with_theta: bool) -> Vec<f64> {
    if with_theta {
        vec![0.75, 1.0, 1.25]
    } else {
        vec![0.25, 0.5, 0.75]
    }
}

pub fn default_levels() -> (u32, u32) {
    DEFAULT_LEVELS
}

impl Experiment {
    /// One row per `(c, n)`: `c,with_theta,n,max_ratio,slope,verdict`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["c", "with_theta", "n", "max_ratio", "slope", "verdict"])?;
        for row in &self.rows {
            for level in &row.report.levels {
                w.serialize((
                    row.c,
                    self.with_theta,
                    level.n,
                    level.ratio,
                    row.report.slope,
                    row.verdict.as_str(),
                ))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

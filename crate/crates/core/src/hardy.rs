//! Numeric `H^p` membership and the Hardy-space containment tests.
//!
//! Membership of `f` in `H^p` is judged from the integral means
//! `M_p(r) = ∫ |f(rζ)|^p dm(ζ)` on the radii `r_j = 1 - 2^{-j}`. Means that
//! settle give "yes"; means growing like a positive power of `1/(1 - r)`
//! give "no". At the critical exponent neither happens cleanly and the
//! verdict is "inconclusive".
//!
//! `H^p ⊂ H(b)` for `p ∈ (2, ∞)` is decided by `φ ∈ H^{p̃}` with
//! `p̃ = 2p/(p - 2)`. The endpoints map to `p̃ = 2` (`p = ∞`, where the
//! test is the BMOA criterion `φ ∈ H^2`) and `p̃ = ∞` (`p = 2`, where
//! `H(b) = H^2` iff `φ` is bounded).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::boundary::SymbolTriple;
use crate::error::{Error, Result};
use crate::series::PowerSeries;
use crate::symbol::{Evaluate, Symbol};

/// Growth exponent at or above which a sequence of means is declared
/// unbounded.
pub const GROWTH_MARGIN: f64 = 0.1;
/// Largest relative change between the two outermost means for "yes".
pub const STABLE_TOL: f64 = 0.05;
/// Number of outermost radii in the growth fit.
const FIT_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    No,
    Inconclusive,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Yes => "yes",
            Membership::No => "no",
            Membership::Inconclusive => "inconclusive",
        }
    }
}

pub(crate) fn serialize_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

/// Radii `1 - 2^{-j}` for `j = first..=last`, with grid sizes that keep the
/// trapezoid rule resolved at each radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSchedule {
    pub first: u32,
    pub last: u32,
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        Self { first: 3, last: 14 }
    }
}

impl RadiusSchedule {
    pub fn radii(&self) -> impl Iterator<Item = (f64, usize)> {
        (self.first..=self.last).map(|j| (1.0 - (-(j as f64)).exp2(), grid_for_level(j)))
    }
}

/// `2^{j+5}` nodes, clamped to `[2^10, 2^19]`: at `r = 1 - 2^{-j}` the
/// aliasing error of the trapezoid rule is of order `r^M ≈ e^{-32}`.
fn grid_for_level(j: u32) -> usize {
    1usize << (j + 5).clamp(10, 19)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HpVerdict {
    #[serde(serialize_with = "serialize_exponent")]
    pub p: f64,
    pub member: Membership,
    /// `(r, M_p(r))`, radii increasing toward 1.
    pub evidence: Vec<(f64, f64)>,
    /// Slope of `log M_p(r)` against `log 1/(1 - r)` over the outer radii.
    pub growth_exponent: f64,
    /// Relative change between the two outermost means.
    pub last_change: f64,
}

/// Trapezoid estimate of `∫_T |f(rζ)|^p dm(ζ)` on the offset grid of size
/// `m`; for `p = ∞` the maximum modulus on the grid.
pub fn hp_integral_mean<F: Evaluate + ?Sized>(f: &F, p: f64, r: f64, m: usize) -> f64 {
    let offset = PI / m as f64;
    let step = 2.0 * PI / m as f64;
    let values = (0..m).map(|j| {
        let z = Complex64::from_polar(r, step * j as f64 + offset);
        f.eval_at(z).norm()
    });
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else if p == 2.0 {
        values.map(|v| v * v).sum::<f64>() / m as f64
    } else {
        values.map(|v| v.powf(p)).sum::<f64>() / m as f64
    }
}

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn hp_membership<F: Evaluate + ?Sized>(f: &F, p: f64) -> HpVerdict {
    hp_membership_with(f, p, RadiusSchedule::default())
}

pub fn hp_membership_with<F: Evaluate + ?Sized>(f: &F, p: f64, schedule: RadiusSchedule) -> HpVerdict {
    let evidence: Vec<(f64, f64)> = schedule
        .radii()
        .map(|(r, m)| (r, hp_integral_mean(f, p, r, m)))
        .collect();
    classify(p, evidence)
}

fn classify(p: f64, evidence: Vec<(f64, f64)>) -> HpVerdict {
    let tail = &evidence[evidence.len().saturating_sub(FIT_POINTS)..];
    let xs: Vec<f64> = tail.iter().map(|(r, _)| -(1.0 - r).ln()).collect();
    let ys: Vec<f64> = tail.iter().map(|(_, m)| m.max(f64::MIN_POSITIVE).ln()).collect();
    let growth_exponent = if tail.iter().all(|(_, m)| *m == 0.0) {
        0.0
    } else {
        fit_slope(&xs, &ys)
    };
    let last_change = match evidence.as_slice() {
        [.., (_, a), (_, b)] if *b != 0.0 => ((b - a) / b).abs(),
        _ => 0.0,
    };
    let member = if !growth_exponent.is_finite() || growth_exponent >= GROWTH_MARGIN {
        Membership::No
    } else if last_change <= STABLE_TOL {
        Membership::Yes
    } else {
        Membership::Inconclusive
    };
    HpVerdict {
        p,
        member,
        evidence,
        growth_exponent,
        last_change,
    }
}

/// `p̃ = 2p/(p - 2)` with the endpoint conventions `p̃(∞) = 2`, `p̃(2) = ∞`.
pub fn dual_exponent(p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::ExponentBelowTwo(p));
    }
    Ok(if p.is_infinite() {
        2.0
    } else if p == 2.0 {
        f64::INFINITY
    } else {
        2.0 * p / (p - 2.0)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HpContainment {
    #[serde(serialize_with = "serialize_exponent")]
    pub p: f64,
    #[serde(serialize_with = "serialize_exponent")]
    pub p_tilde: f64,
    /// Whether `H^p ⊂ H(b)`.
    pub verdict: Membership,
    pub evidence: HpVerdict,
    /// The embedding `H^p ⊂ H(b)`, when it holds, is never compact.
    pub never_compact: bool,
}

/// Decides `H^p ⊂ H(b)` for `p ∈ [2, ∞]` through `φ ∈ H^{p̃}`.
pub fn containment_hp(triple: &SymbolTriple, p: f64) -> Result<HpContainment> {
    containment_hp_symbol(&triple.symbol, p)
}

pub fn containment_hp_symbol(symbol: &Symbol, p: f64) -> Result<HpContainment> {
    let p_tilde = dual_exponent(p)?;
    let evidence = hp_membership(symbol, p_tilde);
    Ok(HpContainment {
        p,
        p_tilde,
        verdict: evidence.member,
        evidence,
        never_compact: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SarasonCheck {
    /// `1 + sum_{k<=n} |φ_k|^2` for `n = 0..=order`; these are the monomial
    /// norms `‖z^n‖²_{H(b)}`.
    pub partial_sums: Vec<f64>,
    /// Effective decay exponent of `|φ_k|^2` from the last three dyadic
    /// blocks of partial sums.
    pub decay_exponent: f64,
    pub convergent: Membership,
}

/// Tests whether `lim ‖z^n‖²_{H(b)} = 1 + ‖φ‖²₂` is finite, i.e. `φ ∈ H^2`.
///
/// With `S_n` the partial sums and `N` the order, the block ratio
/// `ρ = (S_N - S_{N/2}) / (S_{N/2} - S_{N/4})` equals `2^{1-α}` for terms
/// `k^{-α}`. `α ≥ 1.1` is read as convergent, `α ≤ 0.9` as divergent.
pub fn sarason_limit_check(phi: &PowerSeries) -> SarasonCheck {
    let partial_sums = crate::toeplitz::monomial_norm_sweep(phi);
    let n = phi.order();
    let (decay_exponent, convergent) = if n < 8 {
        (f64::NAN, Membership::Inconclusive)
    } else {
        let s = |k: usize| partial_sums[k];
        let outer = s(n) - s(n / 2);
        let inner = s(n / 2) - s(n / 4);
        if outer == 0.0 {
            (f64::INFINITY, Membership::Yes)
        } else if inner == 0.0 {
            (f64::NEG_INFINITY, Membership::No)
        } else {
            let alpha = 1.0 - (outer / inner).log2();
            let verdict = if alpha >= 1.0 + GROWTH_MARGIN {
                Membership::Yes
            } else if alpha <= 1.0 - GROWTH_MARGIN {
                Membership::No
            } else {
                Membership::Inconclusive
            };
            (alpha, verdict)
        }
    };
    SarasonCheck {
        partial_sums,
        decay_exponent,
        convergent,
    }
}

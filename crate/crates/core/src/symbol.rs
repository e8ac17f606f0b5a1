//! Evaluable symbols and accurately represented disk points.
//!
//! The closed-form symbols `(1 - z)^(-c)` and the singular inner function
//! are singular at `ζ = 1`. Near that point `1 - |z|^2` and `|1 - z|^2` are
//! both tiny, so [`DiskPoint`] carries them explicitly instead of deriving
//! them from `z` by cancellation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::series::{phi_c_series, theta_series, PowerSeries, THETA_WEIGHT};

/// Below this exponent `exp` is flushed to zero.
pub(crate) const EXP_FLOOR: f64 = -700.0;

/// A point of the closed disk together with `1 - z`, `1 - |z|^2` and
/// `|1 - z|^2`, each computed without cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    pub z: Complex64,
    pub one_minus_z: Complex64,
    /// `1 - |z|^2`
    pub depth_sq: f64,
    /// `|1 - z|^2`
    pub dist_one_sq: f64,
}

impl DiskPoint {
    /// The point `r e^{iθ}` given `t = 1 - r` and the angle.
    pub fn from_polar_depth(t: f64, theta: f64) -> Self {
        let r = 1.0 - t;
        let z = Complex64::from_polar(r, theta);
        let half = (0.5 * theta).sin();
        // 1 - r e^{iθ} = t + r(1 - cos θ) - i r sin θ
        let one_minus_z = Complex64::new(t + 2.0 * r * half * half, -r * theta.sin());
        Self {
            z,
            one_minus_z,
            depth_sq: t * (2.0 - t),
            dist_one_sq: t * t + 4.0 * r * half * half,
        }
    }

    /// A point given by `1 - z` directly.
    pub fn from_one_minus_z(w: Complex64) -> Self {
        Self {
            z: Complex64::new(1.0, 0.0) - w,
            one_minus_z: w,
            depth_sq: 2.0 * w.re - w.norm_sqr(),
            dist_one_sq: w.norm_sqr(),
        }
    }

    pub fn from_z(z: Complex64) -> Self {
        Self {
            z,
            one_minus_z: Complex64::new(1.0, 0.0) - z,
            depth_sq: 1.0 - z.norm_sqr(),
            dist_one_sq: (Complex64::new(1.0, 0.0) - z).norm_sqr(),
        }
    }

    pub fn modulus(&self) -> f64 {
        self.z.norm()
    }
}

/// `|θ(z)|^2 = exp(-(1 - |z|^2) / |1 - z|^2)` for the weight-1/2 Dirac mass.
pub fn theta_modulus_sq(p: &DiskPoint) -> f64 {
    let e = -2.0 * THETA_WEIGHT * p.depth_sq / p.dist_one_sq;
    if e < EXP_FLOOR {
        0.0
    } else {
        e.exp()
    }
}

/// `θ(z) = exp(-(1/2)(1+z)/(1-z))`.
pub fn theta_value(p: &DiskPoint) -> Complex64 {
    let w = p.one_minus_z;
    let ratio = (Complex64::new(2.0, 0.0) - w) / w;
    let e = -THETA_WEIGHT * ratio;
    if e.re < EXP_FLOOR {
        Complex64::new(0.0, 0.0)
    } else {
        e.exp()
    }
}

/// A symbol `φ` that can be evaluated in the disk and on the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symbol {
    Constant { re: f64, im: f64 },
    /// `(1 - z)^(-c)`
    PhiC { c: f64 },
    /// The singular inner function alone.
    Theta,
    /// `θ(z) (1 - z)^(-c)`
    ThetaPhiC { c: f64 },
    /// A truncated series, evaluated as a polynomial.
    Series { series: PowerSeries },
}

impl Symbol {
    pub fn constant(value: Complex64) -> Self {
        Symbol::Constant {
            re: value.re,
            im: value.im,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_point(&DiskPoint::from_z(z))
    }

    pub fn eval_point(&self, p: &DiskPoint) -> Complex64 {
        match self {
            Symbol::Constant { re, im } => Complex64::new(*re, *im),
            Symbol::PhiC { c } => p.one_minus_z.powf(-c),
            Symbol::Theta => theta_value(p),
            Symbol::ThetaPhiC { c } => theta_value(p) * p.one_minus_z.powf(-c),
            Symbol::Series { series } => series.eval_unchecked(p.z),
        }
    }

    /// `|φ(z)|^2`, using closed forms where available.
    pub fn modulus_sq(&self, p: &DiskPoint) -> f64 {
        match self {
            Symbol::PhiC { c } => p.dist_one_sq.powf(-c),
            Symbol::Theta => theta_modulus_sq(p),
            Symbol::ThetaPhiC { c } => {
                let t = theta_modulus_sq(p);
                if t == 0.0 {
                    0.0
                } else {
                    t * p.dist_one_sq.powf(-c)
                }
            }
            _ => self.eval_point(p).norm_sqr(),
        }
    }

    /// Boundary value at `e^{i angle}`; the angle must avoid the singular
    /// point of the closed forms.
    pub fn boundary_value(&self, angle: f64) -> Complex64 {
        match self {
            Symbol::Theta | Symbol::ThetaPhiC { .. } => {
                // (1 + ζ)/(1 - ζ) = i cot(angle/2) on the circle.
                let cot = 1.0 / (0.5 * angle).tan();
                let theta = Complex64::new(0.0, -THETA_WEIGHT * cot).exp();
                match self {
                    Symbol::ThetaPhiC { c } => {
                        theta * DiskPoint::from_polar_depth(0.0, angle).one_minus_z.powf(-c)
                    }
                    _ => theta,
                }
            }
            _ => self.eval_point(&DiskPoint::from_polar_depth(0.0, angle)),
        }
    }

    /// Taylor coefficients up to `order`.
    pub fn series(&self, order: usize) -> PowerSeries {
        match self {
            Symbol::Constant { re, im } => PowerSeries::constant(Complex64::new(*re, *im), order),
            Symbol::PhiC { c } => phi_c_series(*c, order).expect("validated exponent"),
            Symbol::Theta => theta_series(order),
            Symbol::ThetaPhiC { c } => {
                theta_series(order).mul(&phi_c_series(*c, order).expect("validated exponent"), order)
            }
            Symbol::Series { series } => series.truncate(order),
        }
    }

    /// True when `φ(conj z) = conj φ(z)`, i.e. the coefficients are real.
    pub fn is_conj_symmetric(&self) -> bool {
        match self {
            Symbol::Constant { im, .. } => *im == 0.0,
            Symbol::Series { series } => series.has_real_coeffs(),
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Symbol::Constant { re, im } => format!("const({re},{im})"),
            Symbol::PhiC { c } => format!("phi_c(c={c})"),
            Symbol::Theta => "theta".to_string(),
            Symbol::ThetaPhiC { c } => format!("theta*phi_c(c={c})"),
            Symbol::Series { series } => format!("series(order={})", series.order()),
        }
    }
}

/// Anything that can be evaluated at points of the open disk.
pub trait Evaluate: Sync {
    fn eval_at(&self, z: Complex64) -> Complex64;
}

impl Evaluate for Symbol {
    fn eval_at(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }
}

impl Evaluate for PowerSeries {
    fn eval_at(&self, z: Complex64) -> Complex64 {
        self.eval_unchecked(z)
    }
}

impl<F: Fn(Complex64) -> Complex64 + Sync> Evaluate for F {
    fn eval_at(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

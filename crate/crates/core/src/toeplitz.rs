//! The co-analytic Toeplitz operator `T_φ̄` on polynomials and the
//! `H(b)`-norm of polynomials.
//!
//! The matrix of `T_φ̄` in the monomial basis is upper triangular with entry
//! `conj(φ_{n-m})` in row `m`, column `n`. It is never materialized: the
//! action on a polynomial of degree `d` is an `O(d^2)` correlation that reads
//! only `φ_0..φ_d`. For a polynomial `p`,
//!
//! ```text
//! ‖p‖²_{H(b)} = ‖p‖²₂ + ‖T_φ̄ p‖²₂
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

#[derive(Clone, Debug)]
pub struct CoToeplitz {
    phi: PowerSeries,
}

impl CoToeplitz {
    pub fn new(phi: PowerSeries) -> Self {
        Self { phi }
    }

    pub fn symbol(&self) -> &PowerSeries {
        &self.phi
    }

    /// `q_k = sum_{n=k}^{deg p} p_n conj(φ_{n-k})`; the result has the
    /// degree of `p`.
    pub fn apply(&self, p: &PowerSeries) -> Result<PowerSeries> {
        let degree = p.degree();
        if degree > self.phi.order() {
            return Err(Error::InsufficientOrder {
                degree,
                order: self.phi.order(),
            });
        }
        let pc = &p.coeffs()[..=degree];
        let phi: Vec<Complex64> = self.phi.coeffs()[..=degree].iter().map(|c| c.conj()).collect();
        let q = (0..=degree)
            .map(|k| {
                pc[k..]
                    .iter()
                    .zip(&phi)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&pn, &f)| acc + pn * f)
            })
            .collect();
        Ok(PowerSeries::new(q))
    }

    /// Matrix entry `⟨T_φ̄ z^n, z^m⟩`.
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        if m > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.phi.coeff(n - m).conj()
        }
    }
}

/// `‖p‖²₂ + ‖T_φ̄ p‖²₂`.
pub fn hb_norm_sq(phi: &PowerSeries, p: &PowerSeries) -> Result<f64> {
    let q = CoToeplitz::new(phi.clone()).apply(p)?;
    Ok(p.l2_norm_sq() + q.l2_norm_sq())
}

/// `‖z^n‖²_{H(b)} = 1 + sum_{k=0}^n |φ_k|^2`.
pub fn monomial_hb_norm_sq(phi: &PowerSeries, n: usize) -> Result<f64> {
    if n > phi.order() {
        return Err(Error::InsufficientOrder {
            degree: n,
            order: phi.order(),
        });
    }
    Ok(1.0 + phi.coeffs()[..=n].iter().map(|c| c.norm_sqr()).sum::<f64>())
}

/// All monomial norms `‖z^n‖²_{H(b)}` for `n = 0..=order` as running sums.
pub fn monomial_norm_sweep(phi: &PowerSeries) -> Vec<f64> {
    phi.coeffs()
        .iter()
        .scan(1.0, |acc, c| {
            *acc += c.norm_sqr();
            Some(*acc)
        })
        .collect()
}

/// Largest coefficient deviation between `T_φ̄ T_ψ̄ p` and `T_{(φψ)‾} p`.
pub fn homomorphism_residual(phi: &PowerSeries, psi: &PowerSeries, p: &PowerSeries) -> Result<f64> {
    let order = phi.order().min(psi.order());
    let product = phi.mul(psi, order);
    let t_phi = CoToeplitz::new(phi.clone());
    let t_psi = CoToeplitz::new(psi.clone());
    let composed = t_phi.apply(&t_psi.apply(p)?)?;
    let direct = CoToeplitz::new(product).apply(p)?;
    Ok(composed.max_deviation(&direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{phi_c_series, theta_series};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_symbol_scales_by_conjugate() {
        let lambda = c(0.3, -2.0);
        let t = CoToeplitz::new(PowerSeries::constant(lambda, 5));
        let p = PowerSeries::new(vec![c(1.0, 1.0), c(0.0, 2.0), c(-3.0, 0.5)]);
        let q = t.apply(&p).unwrap();
        assert!(q.max_deviation(&p.scale(lambda.conj())) < 1e-15);
    }

    #[test]
    fn phi_one_on_z_squared() {
        let t = CoToeplitz::new(phi_c_series(1.0, 8).unwrap());
        let q = t.apply(&PowerSeries::monomial(2)).unwrap();
        assert_eq!(q, PowerSeries::from_real(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn shift_symbol_acts_as_backward_shift() {
        let t = CoToeplitz::new(PowerSeries::from_real(&[0.0, 1.0]));
        let q = t.apply(&PowerSeries::monomial(1)).unwrap();
        assert_eq!(q, PowerSeries::from_real(&[1.0, 0.0]));
    }

    #[test]
    fn apply_rejects_short_symbol() {
        let t = CoToeplitz::new(phi_c_series(1.0, 3).unwrap());
        assert!(matches!(
            t.apply(&PowerSeries::monomial(4)),
            Err(Error::InsufficientOrder { degree: 4, order: 3 })
        ));
        assert!(monomial_hb_norm_sq(&phi_c_series(1.0, 3).unwrap(), 4).is_err());
    }

    #[test]
    fn norm_examples() {
        let p = PowerSeries::new(vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let zero = PowerSeries::zero(4);
        assert_eq!(hb_norm_sq(&zero, &p).unwrap(), p.l2_norm_sq());
        let phi1 = phi_c_series(1.0, 16).unwrap();
        for n in 0..=16 {
            assert_eq!(hb_norm_sq(&phi1, &PowerSeries::monomial(n)).unwrap(), n as f64 + 2.0);
            assert_eq!(monomial_hb_norm_sq(&phi1, n).unwrap(), n as f64 + 2.0);
            assert_eq!(monomial_hb_norm_sq(&zero.truncate(16), n).unwrap(), 1.0);
        }
        assert_eq!(monomial_hb_norm_sq(&phi1, 5).unwrap(), 7.0);
        let half = phi_c_series(0.5, 4).unwrap();
        assert_eq!(hb_norm_sq(&half, &PowerSeries::monomial(0)).unwrap(), 2.0);
    }

    #[test]
    fn homomorphism_on_hand_example() {
        let phi1 = phi_c_series(1.0, 4).unwrap();
        let r = homomorphism_residual(&phi1, &phi1, &PowerSeries::monomial(2)).unwrap();
        assert!(r <= 1e-13);
        // (φ_1 φ_1)_n = n + 1, so T p for p = z^2 is 3 + 2z + z^2.
        let sq = phi1.mul(&phi1, 4);
        let q = CoToeplitz::new(sq).apply(&PowerSeries::monomial(2)).unwrap();
        assert_eq!(q, PowerSeries::from_real(&[3.0, 2.0, 1.0]));
        let one = PowerSeries::constant(c(1.0, 0.0), 4);
        let p = PowerSeries::new(vec![c(1.0, -1.0), c(0.5, 0.5), c(2.0, 0.0)]);
        assert_eq!(homomorphism_residual(&phi1, &one, &p).unwrap(), 0.0);
    }

    #[test]
    fn pairing_identity_is_exact() {
        let phi = theta_series(24).mul(&phi_c_series(0.7, 24).unwrap(), 24);
        let t = CoToeplitz::new(phi.clone());
        for n in 0..=24 {
            let q = t.apply(&PowerSeries::monomial(n)).unwrap();
            for m in 0..=24 {
                let expected = if m > n { c(0.0, 0.0) } else { phi.coeff(n - m).conj() };
                assert_eq!(q.coeff(m), expected);
                assert_eq!(t.entry(m, n), expected);
            }
        }
    }

    #[test]
    fn monomial_norms_nondecreasing_and_limit() {
        let phi = phi_c_series(0.2, 256).unwrap();
        let sweep = monomial_norm_sweep(&phi);
        assert!(sweep.windows(2).all(|w| w[1] >= w[0]));
        let theta = theta_series(256);
        let s = monomial_norm_sweep(&theta);
        // Partial sums of an inner function's coefficients approach 1 + ‖θ‖² = 2.
        assert!(s[256] <= 2.0 + 1e-12 && s[256] > 1.9);
    }

    fn series(order: usize) -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), order + 1)
            .prop_map(|v| PowerSeries::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn apply_is_triangular(phi in series(20), p in series(12)) {
            let q = CoToeplitz::new(phi).apply(&p).unwrap();
            prop_assert!(q.order() <= p.degree());
        }

        #[test]
        fn homomorphism_holds(phi in series(32), psi in series(32), p in series(32)) {
            let r = homomorphism_residual(&phi, &psi, &p).unwrap();
            let composed = CoToeplitz::new(phi.mul(&psi, 32)).apply(&p).unwrap();
            prop_assert!(r <= 1e-12 * composed.max_abs().max(1.0));
        }
    }
}

//! Special-function kernel: Bessel I/J/K of real order, the point-pair
//! invariant `phi_s`, the two-branch product `script_j`, an adaptive
//! quadrature engine, and the machine-checked identity corpus.

pub mod bessel;
pub mod corpus;
pub mod quad;

pub use bessel::{
    bessel_i, bessel_i_real, bessel_j, bessel_j_real, bessel_k, gamma, ln_gamma, SpecialError,
};
pub use corpus::{default_corpus, verify_identity, IdentityReport};
pub use quad::{quad, quad_with_hint, Interval, QuadConfig, QuadResult, SemiInfTransform};

use num_complex::Complex64;

/// The point-pair invariant `phi_s(t) = (t + sqrt(t^2-1))^{-s} (t^2-1)^{-1/2}`
/// for `t > 1`, evaluated through `u = t - 1` so that nothing cancels as
/// `t -> 1+`.
pub fn phi_s(t: f64, s: f64) -> Result<f64, SpecialError> {
    if t <= 1.0 {
        return Err(SpecialError::NonPositive(t - 1.0));
    }
    let u = t - 1.0;
    let root = (u * (u + 2.0)).sqrt();
    // (t + root)^{-s} = exp(-s ln(1 + (u + root)))
    Ok((-s * (u + root).ln_1p()).exp() / root)
}

/// `script_j(s, z)`: the two-branch Bessel product, `J_s(4 pi sqrt(z))
/// J_s(4 pi sqrt(conj z))` for `Re z >= 0` and the I-version for `Re z <= 0`.
///
/// For real order the two factors are complex conjugates, so the value is
/// real and non-negative; it is returned as `f64`.
pub fn script_j(s: f64, z: Complex64) -> Result<f64, SpecialError> {
    if z.norm() == 0.0 {
        return Err(SpecialError::ZeroArgument);
    }
    let four_pi = 4.0 * std::f64::consts::PI;
    if z.re >= 0.0 {
        let w = four_pi * z.sqrt();
        Ok(bessel_j(s, w)?.norm_sqr())
    } else {
        let w = four_pi * (-z).sqrt();
        Ok(bessel_i(s, w)?.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn phi_examples() {
        // phi_0(t) = (t^2-1)^{-1/2}
        for t in [1.001, 1.5, 4.0] {
            assert_relative_eq!(
                phi_s(t, 0.0).unwrap(),
                (t * t - 1.0).powf(-0.5),
                max_relative = 1e-12
            );
        }
        // near t = 1: phi_s ~ 1/sqrt(2(t-1)), first correction -s sqrt(2u)
        let t = 1.0 + 1e-8;
        let ratio = phi_s(t, 1.5).unwrap() / (2.0 * (t - 1.0)).powf(-0.5);
        assert_relative_eq!(ratio, 1.0, max_relative = 5e-4);
        // decay like e^{-(s+1) d} with t = cosh d
        for s in [1.2, 2.0] {
            let v10 = phi_s(10.0f64.cosh(), s).unwrap();
            let v20 = phi_s(20.0f64.cosh(), s).unwrap();
            let slope = (v10 / v20).ln() / 10.0;
            assert_relative_eq!(slope, s + 1.0, max_relative = 1e-3);
        }
        assert!(phi_s(1.0, 1.0).is_err());
        assert!(phi_s(0.5, 1.0).is_err());
    }

    #[test]
    fn script_j_real_axis() {
        // z = -x: I_s(4 pi sqrt(x))^2
        for (s, x) in [(1.0, 0.04), (1.5, 0.09)] {
            let v = script_j(s, Complex64::new(-x, 0.0)).unwrap();
            let i = bessel_i_real(s, 4.0 * std::f64::consts::PI * x.sqrt());
            assert_relative_eq!(v, i * i, max_relative = 1e-12);
            assert!(v > 0.0);
        }
        // z = +x: J_s(4 pi sqrt(x))^2
        for (s, x) in [(1.0, 0.04), (2.0, 0.2)] {
            let v = script_j(s, Complex64::new(x, 0.0)).unwrap();
            let j = bessel_j_real(s, 4.0 * std::f64::consts::PI * x.sqrt());
            assert_relative_eq!(v, j * j, max_relative = 1e-12);
        }
        assert!(script_j(1.0, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn script_j_branch_agreement_on_axis() {
        // on Re z = 0 the J- and I-branches agree
        let four_pi = 4.0 * std::f64::consts::PI;
        for s in [1.0, 1.5] {
            for t in [0.1, 1.0, 10.0] {
                let z = Complex64::new(0.0, t);
                let via_j = bessel_j(s, four_pi * z.sqrt()).unwrap().norm_sqr();
                let via_i = bessel_i(s, four_pi * (-z).sqrt()).unwrap().norm_sqr();
                assert_relative_eq!(via_j, via_i, max_relative = 1e-9);
                // and the public function is continuous across the axis
                let near_pos = script_j(s, Complex64::new(1e-12, t)).unwrap();
                let near_neg = script_j(s, Complex64::new(-1e-12, t)).unwrap();
                assert_relative_eq!(near_pos, near_neg, max_relative = 1e-6);
            }
        }
    }
}

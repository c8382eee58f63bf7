//! Constitutive laws for the ideal polytropic gas and the convex entropy
//! potential with its two-sided root solver.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Physical constants of the gas model.
///
/// Pressure is `R * theta / v`, internal energy `c_v * theta`. The viscosity
/// is constant (its temperature exponent is stored but pinned to zero) while
/// the heat conductivity follows the power law `kappa * theta^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams<T> {
    /// Specific gas constant in `p = R * theta / v`.
    pub gas_constant: T,
    /// Heat capacity at constant volume.
    pub heat_capacity: T,
    /// Viscosity coefficient.
    pub viscosity_coeff: T,
    /// Conductivity coefficient.
    pub conductivity_coeff: T,
    /// Conductivity temperature exponent, `>= 0`.
    pub conductivity_exponent: T,
    /// Viscosity temperature exponent; must be exactly zero.
    pub viscosity_exponent: T,
}

impl<T: Scalar> GasParams<T> {
    /// Validates and builds the parameter set. The viscosity exponent is
    /// rejected unless it is exactly zero, so the constant-viscosity
    /// hypothesis is visible in the type rather than silently assumed.
    pub fn new(
        gas_constant: T,
        heat_capacity: T,
        viscosity_coeff: T,
        conductivity_coeff: T,
        conductivity_exponent: T,
        viscosity_exponent: T,
    ) -> Result<Self> {
        if !(gas_constant > T::zero()) {
            return Err(Error::InvalidParameter("gas_constant must be > 0".into()));
        }
        if !(heat_capacity > T::zero()) {
            return Err(Error::InvalidParameter("heat_capacity must be > 0".into()));
        }
        if !(viscosity_coeff > T::zero()) {
            return Err(Error::InvalidParameter("viscosity_coeff must be > 0".into()));
        }
        if !(conductivity_coeff > T::zero()) {
            return Err(Error::InvalidParameter(
                "conductivity_coeff must be > 0".into(),
            ));
        }
        if !(conductivity_exponent >= T::zero()) {
            return Err(Error::InvalidParameter(
                "conductivity_exponent must be >= 0".into(),
            ));
        }
        if viscosity_exponent != T::zero() {
            return Err(Error::InvalidParameter(
                "viscosity_exponent must be 0 (constant viscosity)".into(),
            ));
        }
        Ok(Self {
            gas_constant,
            heat_capacity,
            viscosity_coeff,
            conductivity_coeff,
            conductivity_exponent,
            viscosity_exponent,
        })
    }

    /// All coefficients one, conductivity exponent `beta`.
    pub fn normalized(beta: f64) -> Self {
        Self::new(
            T::one(),
            T::one(),
            T::one(),
            T::one(),
            cast(beta),
            T::zero(),
        )
        .expect("normalized parameters are valid for beta >= 0")
    }

    /// Ideal-gas pressure `R * theta / v`.
    pub fn pressure(&self, v: T, theta: T) -> Result<T> {
        if !(v > T::zero()) || !(theta > T::zero()) {
            return Err(Error::Domain(format!(
                "pressure requires v > 0 and theta > 0, got v = {v}, theta = {theta}"
            )));
        }
        Ok(self.gas_constant * theta / v)
    }

    /// Power-law heat conductivity `kappa * theta^beta`.
    pub fn conductivity(&self, theta: T) -> Result<T> {
        if !(theta > T::zero()) {
            return Err(Error::Domain(format!(
                "conductivity requires theta > 0, got {theta}"
            )));
        }
        Ok(self.conductivity_coeff * theta.powf(self.conductivity_exponent))
    }

    /// Viscosity; independent of temperature since the exponent is zero.
    pub fn viscosity(&self, _theta: T) -> T {
        self.viscosity_coeff
    }
}

/// The convex potential `y - ln y - 1`: nonnegative, zero exactly at `y = 1`.
///
/// Applied to specific volume and temperature it builds the energy-entropy
/// functional; its sub-level sets bound unit-mass cell averages.
pub fn entropy_potential<T: Scalar>(y: T) -> Result<T> {
    if !(y > T::zero()) {
        return Err(Error::Domain(format!(
            "entropy_potential requires y > 0, got {y}"
        )));
    }
    Ok(y - y.ln() - T::one())
}

/// The two roots `0 < alpha1 <= 1 <= alpha2` of `y - ln y - 1 = e0`.
///
/// Both roots come from bracketed bisection: plain bisection above 1, where
/// the potential has slope below one, and log-space bisection below 1, where
/// the root can be exponentially small and absolute spacing is meaningless.
/// For `e0 = 0` the double root `(1, 1)` is returned directly.
pub fn jensen_roots<T: Scalar>(e0: T) -> Result<(T, T)> {
    if !(e0 >= T::zero()) || !e0.is_finite() {
        return Err(Error::Domain(format!(
            "jensen_roots requires finite e0 >= 0, got {e0}"
        )));
    }
    if e0 == T::zero() {
        return Ok((T::one(), T::one()));
    }
    let w = |y: T| y - y.ln() - T::one();
    let two = cast::<T>(2.0);
    let half = cast::<T>(0.5);

    // Upper root: bracket [1, hi] grown geometrically, then bisect.
    let upper = {
        let mut hi = two;
        while w(hi) < e0 {
            hi = hi * two;
        }
        let mut lo = T::one();
        for _ in 0..400 {
            let mid = half * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if w(mid) < e0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        half * (lo + hi)
    };

    // Lower root: bracket (lo, hi] with w(lo) >= e0 >= w(hi), bisect in
    // log space so tiny roots keep full relative accuracy.
    let lower = {
        let mut lo = half;
        let mut hi = T::one();
        while w(lo) < e0 {
            hi = lo;
            lo = lo * half;
        }
        for _ in 0..400 {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if w(mid) >= e0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo * hi).sqrt()
    };

    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: f64, cv: f64, mu: f64, kappa: f64, beta: f64) -> GasParams<f64> {
        GasParams::new(r, cv, mu, kappa, beta, 0.0).unwrap()
    }

    #[test]
    fn pressure_identities() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(p.pressure(1.0, 1.0).unwrap(), 1.0);
        let p = params(2.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(p.pressure(4.0, 2.0).unwrap(), 1.0);
        let p = params(287.0, 1.0, 1.0, 1.0, 1.0);
        // Direct arithmetic: 287 * 1.2 / 0.8 = 430.5.
        assert!((p.pressure(0.8, 1.2).unwrap() - 430.5).abs() < 1e-12);
    }

    #[test]
    fn pressure_rejects_nonpositive_inputs() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(p.pressure(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(p.pressure(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn conductivity_values() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.5);
        assert_eq!(p.conductivity(1.0).unwrap(), 1.0);
        assert!((p.conductivity(4.0).unwrap() - 2.0).abs() < 1e-15);
        let p = params(1.0, 1.0, 1.0, 3.0, 2.0);
        // Direct arithmetic: 3 * 0.1^2 = 0.03.
        assert!((p.conductivity(0.1).unwrap() - 0.03).abs() < 1e-15);
        assert!(p.conductivity(0.0).is_err());
    }

    #[test]
    fn viscosity_is_temperature_independent() {
        let p = params(1.0, 1.0, 2.5, 1.0, 1.0);
        assert_eq!(p.viscosity(0.3), 2.5);
        assert_eq!(p.viscosity(7.0), 2.5);
    }

    #[test]
    fn gamma_must_be_zero() {
        assert!(GasParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.5).is_err());
        assert!(GasParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 0.0).is_err());
        assert!(GasParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn entropy_potential_values() {
        assert_eq!(entropy_potential(1.0_f64).unwrap(), 0.0);
        // Direct evaluation: e - ln(e) - 1 = e - 2.
        let e = std::f64::consts::E;
        assert!((entropy_potential(e).unwrap() - (e - 2.0)).abs() < 1e-15);
        // Direct evaluation: 0.5 - ln(0.5) - 1 = ln 2 - 0.5.
        let expect = std::f64::consts::LN_2 - 0.5;
        assert!((entropy_potential(0.5_f64).unwrap() - expect).abs() < 1e-15);
        assert!(entropy_potential(0.0_f64).is_err());
        assert!(entropy_potential(-1.0_f64).is_err());
    }

    #[test]
    fn jensen_roots_degenerate() {
        assert_eq!(jensen_roots(0.0_f64).unwrap(), (1.0, 1.0));
        assert!(jensen_roots(-1.0_f64).is_err());
        assert!(jensen_roots(f64::NAN).is_err());
    }

    /// Independent oracle: plain bisection of `y - ln y - 1 = e0` on (lo, 1).
    fn bisect_lower_oracle(e0: f64) -> f64 {
        let w = |y: f64| y - y.ln() - 1.0;
        let mut lo = 1e-300;
        let mut hi = 1.0;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if w(mid) >= e0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn jensen_roots_at_one_minus_ln_two() {
        // y = 2 satisfies 2 - ln 2 - 1 = 1 - ln 2 exactly.
        let e0 = 1.0 - std::f64::consts::LN_2;
        let (a1, a2) = jensen_roots(e0).unwrap();
        assert!((a2 - 2.0).abs() < 1e-10, "alpha2 = {a2}");
        let oracle = bisect_lower_oracle(e0);
        assert!((a1 - oracle).abs() < 1e-10, "alpha1 = {a1} vs {oracle}");
        // Sanity on magnitude from the oracle itself.
        assert!((a1 - 0.4064).abs() < 1e-3);
    }

    #[test]
    fn jensen_roots_order_and_residual() {
        for &e0 in &[1e-8f64, 1e-3, 0.3, 1.0, 7.5, 50.0] {
            let (a1, a2) = jensen_roots(e0).unwrap();
            assert!(0.0 < a1 && a1 <= 1.0 && 1.0 <= a2);
            let r1 = (a1 - a1.ln() - 1.0 - e0).abs();
            let r2 = (a2 - a2.ln() - 1.0 - e0).abs();
            assert!(r1 < 1e-10, "lower residual {r1} at e0 = {e0}");
            assert!(r2 < 1e-10, "upper residual {r2} at e0 = {e0}");
        }
    }

    #[test]
    fn jensen_roots_f32_converges() {
        let (a1, a2) = jensen_roots(0.25_f32).unwrap();
        let w = |y: f32| y - y.ln() - 1.0;
        assert!((w(a1) - 0.25).abs() < 1e-5);
        assert!((w(a2) - 0.25).abs() < 1e-5);
    }
}

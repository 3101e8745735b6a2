//! Planar-interface reflection for vertical polarization and its inversion
//! back to relative permittivity.

use crate::error::CoreError;

/// Fresnel amplitude reflection coefficient of a planar dielectric interface
/// for vertical polarization:
///
/// ```text
/// gamma = (e*cos(t) - sqrt(e - sin^2 t)) / (e*cos(t) + sqrt(e - sin^2 t))
/// ```
///
/// For e >= 1 and incidence below the polarizing angle the result lies in
/// [0, 1).
pub fn fresnel_forward(epsilon_r: f64, theta: f64) -> Result<f64, CoreError> {
    if !(epsilon_r >= 1.0) || !epsilon_r.is_finite() {
        return Err(CoreError::Domain(format!(
            "relative permittivity must be >= 1, got {epsilon_r}"
        )));
    }
    if !theta.is_finite() || theta.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(CoreError::Domain(format!(
            "incidence angle must lie in (-pi/2, pi/2), got {theta}"
        )));
    }
    let s2 = theta.sin() * theta.sin();
    let under = epsilon_r - s2;
    if under < 0.0 {
        return Err(CoreError::Domain(format!(
            "epsilon_r - sin^2(theta) = {under} < 0"
        )));
    }
    let root = under.sqrt();
    let a = epsilon_r * theta.cos();
    Ok((a - root) / (a + root))
}

/// Result of a permittivity inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivityEstimate {
    pub epsilon_r: f64,
    /// Set when gamma_f >= 0.98: the inversion is valid but epsilon_r is in
    /// the numerically meaningless > ~1e4 regime.
    pub high_epsilon_warning: bool,
}

/// Residual below which an inversion branch is accepted.
const INVERSION_TOLERANCE: f64 = 1e-6;
/// gamma at or above this attaches the high-permittivity warning.
const HIGH_EPSILON_GAMMA: f64 = 0.98;

/// Invert the vertical-polarization reflection coefficient to relative
/// permittivity at the given incidence angle.
///
/// The quadratic obtained by squaring the reflection relation has two
/// branches; both are evaluated and the one whose forward image reproduces
/// `gamma_f` with the smaller residual (and satisfies epsilon_r >= 1) is
/// returned. At theta = 0 this reduces to ((1 + g) / (1 - g))^2.
pub fn permittivity_from_gamma(gamma_f: f64, theta: f64) -> Result<PermittivityEstimate, CoreError> {
    if !gamma_f.is_finite() || gamma_f < 0.0 {
        return Err(CoreError::Domain(format!(
            "reflection coefficient must lie in [0, 1), got {gamma_f}"
        )));
    }
    if gamma_f >= 1.0 {
        return Err(CoreError::SingularInput(
            "reflection coefficient at unity: perfect conductor, no finite permittivity".into(),
        ));
    }
    if !theta.is_finite() || theta.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(CoreError::Domain(format!(
            "incidence angle must lie in (-pi/2, pi/2), got {theta}"
        )));
    }

    let g = gamma_f;
    let gp = g + 1.0;
    let gm = g - 1.0;
    let cos2 = theta.cos() * theta.cos();
    // discriminant term: 1 - (sin(2t) * (g-1)/(g+1))^2, always in [0, 1]
    let s = (2.0 * theta).sin() * gm / gp;
    let disc = (1.0 - s * s).max(0.0).sqrt();
    let base = gp * gp / (2.0 * cos2 * gm * gm);

    let mut best: Option<(f64, f64)> = None; // (epsilon, residual)
    for candidate in [base * (1.0 + disc), base * (1.0 - disc)] {
        if !(candidate >= 1.0) || !candidate.is_finite() {
            continue;
        }
        if let Ok(forward) = fresnel_forward(candidate, theta) {
            let residual = (forward - g).abs();
            if best.map_or(true, |(_, r)| residual < r) {
                best = Some((candidate, residual));
            }
        }
    }
    match best {
        Some((epsilon_r, residual)) if residual <= INVERSION_TOLERANCE => Ok(PermittivityEstimate {
            epsilon_r,
            high_epsilon_warning: g >= HIGH_EPSILON_GAMMA,
        }),
        Some((_, residual)) => Err(CoreError::InversionFailure(format!(
            "best branch residual {residual:e} exceeds {INVERSION_TOLERANCE:e} \
             (gamma_f = {g}, theta = {theta} rad)"
        ))),
        None => Err(CoreError::InversionFailure(format!(
            "no branch with epsilon_r >= 1 (gamma_f = {g}, theta = {theta} rad)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn forward_known_values() {
        // matched medium reflects nothing
        for theta in [0.0, 0.2, 0.5] {
            assert_relative_eq!(fresnel_forward(1.0, theta).unwrap(), 0.0, epsilon = 1e-12);
        }
        assert_relative_eq!(fresnel_forward(4.0, 0.0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(fresnel_forward(9.0, 0.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn forward_rejects_out_of_domain() {
        assert!(fresnel_forward(0.5, 0.0).is_err());
        assert!(fresnel_forward(4.0, 1.6).is_err());
    }

    #[test]
    fn normal_incidence_inversion_known_values() {
        let est = permittivity_from_gamma(1.0 / 3.0, 0.0).unwrap();
        assert_relative_eq!(est.epsilon_r, 4.0, max_relative = 1e-12);
        let est = permittivity_from_gamma(0.0, 0.0).unwrap();
        assert_relative_eq!(est.epsilon_r, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn unity_gamma_is_singular() {
        assert!(matches!(
            permittivity_from_gamma(1.0, 0.0),
            Err(CoreError::SingularInput(_))
        ));
    }

    #[test]
    fn normal_incidence_matches_closed_form_to_machine_precision() {
        // the squared-relation branch agrees with ((1+g)/(1-g))^2 at theta = 0
        let mut g = 0.0;
        while g <= 0.95 {
            let est = permittivity_from_gamma(g, 0.0).unwrap();
            let closed = ((1.0 + g) / (1.0 - g)).powi(2);
            assert_relative_eq!(est.epsilon_r, closed, max_relative = 1e-12);
            g += 0.01;
        }
    }

    #[test]
    fn round_trip_over_the_grid() {
        for &eps in &[1.5, 2.0, 3.0, 4.0, 6.5, 9.0, 15.0, 40.0] {
            for &deg in &[0.0, 5.0, 10.0, 20.0, 30.0] {
                let theta = (deg as f64).to_radians();
                let g = fresnel_forward(eps, theta).unwrap();
                let est = permittivity_from_gamma(g, theta).unwrap();
                assert!(
                    (est.epsilon_r - eps).abs() / eps < 1e-9,
                    "eps {eps} theta {deg} deg: recovered {}",
                    est.epsilon_r
                );
            }
        }
    }

    #[test]
    fn round_trip_agrees_with_bisection_oracle() {
        // independent route: bisection on the forward relation, which is
        // monotone in epsilon at fixed theta
        let bisect = |g: f64, theta: f64| -> f64 {
            let (mut lo, mut hi) = (1.0_f64, 100.0_f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if fresnel_forward(mid, theta).unwrap() < g {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let theta = 20f64.to_radians();
        let g = fresnel_forward(6.5, theta).unwrap();
        let oracle = bisect(g, theta);
        let est = permittivity_from_gamma(g, theta).unwrap();
        assert_relative_eq!(est.epsilon_r, 6.5, max_relative = 1e-9);
        assert_relative_eq!(est.epsilon_r, oracle, max_relative = 1e-9);
    }

    #[test]
    fn gamma_monotone_in_epsilon_at_normal_incidence() {
        let mut prev = fresnel_forward(1.0, 0.0).unwrap();
        for i in 1..1000 {
            let eps = 1.0 + i as f64 * (100.0 - 1.0) / 999.0;
            let g = fresnel_forward(eps, 0.0).unwrap();
            assert!(g > prev, "gamma not increasing at eps = {eps}");
            prev = g;
        }
    }

    #[test]
    fn degenerate_gamma_inverts_with_warning() {
        let est = permittivity_from_gamma(0.985, 0.0).unwrap();
        assert!(est.high_epsilon_warning);
        assert!(est.epsilon_r > 1e4);
        let est = permittivity_from_gamma(0.9, 0.0).unwrap();
        assert!(!est.high_epsilon_warning);
    }
}

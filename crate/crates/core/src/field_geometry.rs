//! Metric and topology of the state manifold with a transverse field.
//!
//! With `h ≠ 0` the metric picks up an off-diagonal `g_θχ = -(γ²/4)(h/J)N sinφ`,
//! removed by the shear `θ = θ' + (h/J) sinφ χ'`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::evolution::{detect_period, PeriodicityReport, Propagator};
use crate::geometry::{
    central_difference, check_fd_inputs, fubini_study, twisting_bracket, MetricTensor2D, THETA_CHI,
};
use crate::spin_state::{spin_coherent_state, BlochAngles, SystemConfig};
use crate::Result;

/// `sin²φ` within this of 1 counts as the sphere case.
pub const SPHERE_TOLERANCE: f64 = 1e-12;
/// Fidelity scan resolution used by [`classify_topology`], per unit `χ`.
const SCAN_STEPS_PER_UNIT_CHI: f64 = 20.0;

/// Field-dependent correction to the bracket of `g_χχ`, dropping to `+0.0`
/// at `h = 0` so that both charts share their arithmetic.
fn field_correction(spins: usize, ratio: f64, theta: f64, phi: f64, last_term: f64) -> f64 {
    let n = spins as f64;
    let (s, c) = theta.sin_cos();
    -2.0 * ratio * (n - 1.0) * s * c * c * phi.cos() + ratio * ratio * last_term
}

/// Closed-form metric in `(θ, χ)` for `H/J = (1/4)(Σσᶻ)² + (h/2J)Σσˣ`.
pub fn field_metric_closed_form(
    config: &SystemConfig,
    theta: f64,
    phi: f64,
) -> Result<MetricTensor2D> {
    let ratio = config.field_ratio()?;
    let n = config.spins() as f64;
    let prefactor = 0.25 * config.gauge_factor().powi(2) * n;
    let sin2 = theta.sin().powi(2);
    let last = 1.0 - sin2 * phi.cos().powi(2);
    let bracket = twisting_bracket(config.spins(), sin2)
        + field_correction(config.spins(), ratio, theta, phi, last);
    Ok(MetricTensor2D::new(
        THETA_CHI,
        prefactor,
        -prefactor * ratio * phi.sin(),
        prefactor * bracket,
    ))
}

/// Metric from central-difference tangents of [`crate::evolution::field_evolve`]
/// states; `θ` perturbs the initial angles, `χ` the evolution time.
pub fn field_metric_fd(
    config: &SystemConfig,
    theta: f64,
    phi: f64,
    chi: f64,
    step: f64,
) -> Result<MetricTensor2D> {
    check_fd_inputs(theta, step)?;
    let propagator = Propagator::new(config)?;
    field_metric_fd_with(&propagator, config, theta, phi, chi, step)
}

/// As [`field_metric_fd`], reusing a prepared propagator.
pub fn field_metric_fd_with(
    propagator: &Propagator,
    config: &SystemConfig,
    theta: f64,
    phi: f64,
    chi: f64,
    step: f64,
) -> Result<MetricTensor2D> {
    check_fd_inputs(theta, step)?;
    let state = |t: f64, x: f64| -> Result<Vec<_>> {
        let initial = spin_coherent_state(config, BlochAngles::new(t, phi));
        Ok(propagator.evolve(&initial, x)?.into_amplitudes())
    };
    let psi = state(theta, chi)?;
    let d_theta = central_difference(&state(theta + step, chi)?, &state(theta - step, chi)?, step);
    let d_chi = central_difference(&state(theta, chi + step)?, &state(theta, chi - step)?, step);
    Ok(fubini_study(
        THETA_CHI,
        config.gauge_factor(),
        &psi,
        &d_theta,
        &d_chi,
    ))
}

/// Sheared coordinates `(θ', χ')` at fixed `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformedCoords {
    pub theta_prime: f64,
    pub chi_prime: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartPoint {
    pub theta: f64,
    pub chi: f64,
}

/// `θ = θ' + (h/J) sinφ χ'`, `χ = χ'`.
pub fn transform_coordinates(
    config: &SystemConfig,
    coords: TransformedCoords,
) -> Result<ChartPoint> {
    let ratio = config.field_ratio()?;
    Ok(ChartPoint {
        theta: coords.theta_prime + ratio * coords.phi.sin() * coords.chi_prime,
        chi: coords.chi_prime,
    })
}

/// Metric in the sheared chart, where it is diagonal.
pub fn diagonalized_field_metric(
    config: &SystemConfig,
    coords: TransformedCoords,
) -> Result<MetricTensor2D> {
    let ratio = config.field_ratio()?;
    let theta = transform_coordinates(config, coords)?.theta;
    let phi = coords.phi;
    let n = config.spins() as f64;
    let prefactor = 0.25 * config.gauge_factor().powi(2) * n;
    let last = theta.cos().powi(2) * phi.cos().powi(2);
    let bracket = twisting_bracket(config.spins(), theta.sin().powi(2))
        + field_correction(config.spins(), ratio, theta, phi, last);
    Ok(MetricTensor2D::new(
        ("theta_prime", "chi_prime"),
        prefactor,
        0.0,
        prefactor * bracket,
    ))
}

/// Pulls a `(θ, χ)` metric back through the shear with slope `ratio·sinφ`.
pub fn pullback_through_shear(metric: &MetricTensor2D, ratio: f64, phi: f64) -> MetricTensor2D {
    let slope = ratio * phi.sin();
    MetricTensor2D::new(
        ("theta_prime", "chi_prime"),
        metric.g11,
        metric.g11 * slope + metric.g12,
        metric.g11 * slope * slope + 2.0 * metric.g12 * slope + metric.g22,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    ClosedDumbbell,
    Torus,
    InfiniteCylinder,
    Sphere,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::ClosedDumbbell => "closed-dumbbell",
            Topology::Torus => "torus",
            Topology::InfiniteCylinder => "infinite-cylinder",
            Topology::Sphere => "sphere",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub classification: Topology,
    pub field: f64,
    pub phi: f64,
    /// Absent for the sphere case, where periodicity plays no role.
    pub periodicity: Option<PeriodicityReport>,
    /// Set when the classification rests on not finding a period within the
    /// scanned horizon.
    pub horizon_limited: bool,
}

/// Zero field gives the closed dumbbell; `sin²φ = 1` the sphere; otherwise
/// periodic evolution gives a torus and anything else an infinite cylinder
/// (qualified by the horizon).
pub fn classify_topology(
    config: &SystemConfig,
    phi: f64,
    horizon_chi: f64,
) -> Result<TopologyReport> {
    let field = config.field();
    let report = |classification, periodicity, horizon_limited| TopologyReport {
        classification,
        field,
        phi,
        periodicity,
        horizon_limited,
    };
    let grid_steps = ((horizon_chi * SCAN_STEPS_PER_UNIT_CHI).ceil() as usize).max(100);
    if field == 0.0 {
        let periodicity = detect_period(config, horizon_chi.max(2.0 * PI), grid_steps)?;
        return Ok(report(Topology::ClosedDumbbell, Some(periodicity), false));
    }
    config.field_ratio()?;
    if (phi.sin().powi(2) - 1.0).abs() <= SPHERE_TOLERANCE {
        return Ok(report(Topology::Sphere, None, false));
    }
    let periodicity = detect_period(config, horizon_chi, grid_steps)?;
    if periodicity.periodic {
        Ok(report(Topology::Torus, Some(periodicity), false))
    } else {
        Ok(report(Topology::InfiniteCylinder, Some(periodicity), true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fs_metric_fd, metric_closed_form};
    use crate::Error;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    fn cfg(n: usize, ratio: f64) -> SystemConfig {
        SystemConfig::new(n).unwrap().with_field(ratio).unwrap()
    }

    #[test]
    fn zero_field_reduces_bit_for_bit() {
        for n in [1, 2, 5, 9] {
            for i in 0..=20 {
                let theta = PI * i as f64 / 20.0;
                let c = cfg(n, 0.0).with_gauge_factor(1.4).unwrap();
                let a = field_metric_closed_form(&c, theta, 0.7).unwrap();
                let b = metric_closed_form(&c, theta);
                assert_eq!(a.g11.to_bits(), b.g11.to_bits());
                assert_eq!(a.g22.to_bits(), b.g22.to_bits());
                assert_eq!(a.g12, 0.0);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let g = field_metric_closed_form(&cfg(4, 0.8), 1.0, 0.0).unwrap();
        assert_eq!(g.g12, 0.0);
        let g0 = metric_closed_form(&cfg(4, 0.0), 1.0);
        assert!((g.g22 - g0.g22).abs() > 1e-3);

        let g = field_metric_closed_form(&cfg(2, 1.0), FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((g.g22 - 0.75).abs() < 1e-15);
        assert!((g.g12 + 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_independent_fd_oracle() {
        // Values from a scipy expm oracle on the full 2^N space.
        let g = field_metric_closed_form(&cfg(3, 0.5), 1.0, FRAC_PI_3).unwrap();
        assert!((g.g22 - 0.9662155794287901).abs() < 1e-12);
        assert!((g.g12 + 0.3247595264191645).abs() < 1e-12);
    }

    #[test]
    fn fd_examples() {
        let c = cfg(5, 0.0);
        let a = field_metric_fd(&c, 1.2, 0.4, 0.9, 1e-4).unwrap();
        // fs_metric_fd uses φ = 0, which the zero-field metric does not see.
        let b = fs_metric_fd(&c, 1.2, 0.9, 1e-4).unwrap();
        assert!((a.g11 - b.g11).abs() < 1e-9);
        assert!((a.g12 - b.g12).abs() < 1e-9);
        assert!((a.g22 - b.g22).abs() < 1e-9);

        for (ratio, phi, chi) in [(0.3, 0.0, 0.2), (1.0, 1.0, 2.5), (-0.7, 2.0, 5.0)] {
            let g = field_metric_fd(&cfg(4, ratio), 0.8, phi, chi, 1e-4).unwrap();
            assert!((g.g11 - 1.0).abs() < 1e-6);
        }

        let g = field_metric_fd(&cfg(3, 0.5), 1.0, FRAC_PI_3, 0.8, 1e-4).unwrap();
        let want = -0.25 * 0.5 * 3.0 * FRAC_PI_3.sin();
        assert!((g.g12 - want).abs() < 1e-6);
    }

    #[test]
    fn fd_rejects_poles() {
        assert!(matches!(
            field_metric_fd(&cfg(3, 0.5), 0.0, 0.0, 0.0, 1e-4),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn transform_examples() {
        let co = TransformedCoords {
            theta_prime: 0.3,
            chi_prime: 0.5,
            phi: 1.0,
        };
        let p = transform_coordinates(&cfg(3, 0.0), co).unwrap();
        assert_eq!((p.theta, p.chi), (0.3, 0.5));
        let co0 = TransformedCoords { phi: 0.0, ..co };
        let p = transform_coordinates(&cfg(3, 2.0), co0).unwrap();
        assert_eq!((p.theta, p.chi), (0.3, 0.5));
        let co = TransformedCoords {
            theta_prime: 0.3,
            chi_prime: 0.5,
            phi: FRAC_PI_2,
        };
        let p = transform_coordinates(&cfg(3, 2.0), co).unwrap();
        assert!((p.theta - 1.3).abs() < 1e-15 && p.chi == 0.5);
    }

    #[test]
    fn diagonalized_examples() {
        let c = cfg(4, 0.0);
        let co = TransformedCoords {
            theta_prime: 0.9,
            chi_prime: 3.0,
            phi: 0.5,
        };
        let d = diagonalized_field_metric(&c, co).unwrap();
        let m = metric_closed_form(&c, 0.9);
        assert_eq!((d.g11, d.g12, d.g22), (m.g11, 0.0, m.g22));

        // φ = π/2: only the shear carries h.
        let ratio = 0.6;
        let co = TransformedCoords {
            theta_prime: 0.4,
            chi_prime: 1.5,
            phi: FRAC_PI_2,
        };
        let d = diagonalized_field_metric(&cfg(4, ratio), co).unwrap();
        let theta = 0.4 + ratio * 1.5;
        let m = metric_closed_form(&cfg(4, 0.0), theta);
        assert!((d.g22 - m.g22).abs() < 1e-12);
    }

    #[test]
    fn pullback_identity_on_grid() {
        // Deterministic LCG grid over (θ', χ', φ, h/J, N).
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let n = 2 + (next() * 10.0) as usize;
            let ratio = 4.0 * next() - 2.0;
            let co = TransformedCoords {
                theta_prime: PI * next(),
                chi_prime: 6.0 * next() - 3.0,
                phi: 2.0 * PI * next(),
            };
            let c = cfg(n, ratio);
            let theta = transform_coordinates(&c, co).unwrap().theta;
            let full = field_metric_closed_form(&c, theta, co.phi).unwrap();
            let pulled = pullback_through_shear(&full, ratio, co.phi);
            let diag = diagonalized_field_metric(&c, co).unwrap();
            let scale = 1.0 + diag.g22.abs();
            assert!(pulled.g12.abs() < 1e-12 * scale);
            assert_eq!(pulled.g11, full.g11);
            assert!((pulled.g22 - diag.g22).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn classify_examples() {
        let r = classify_topology(&cfg(4, 0.0), 0.3, 10.0).unwrap();
        assert_eq!(r.classification, Topology::ClosedDumbbell);
        assert!(!r.horizon_limited);

        for phi in [FRAC_PI_2, -FRAC_PI_2] {
            let r = classify_topology(&cfg(4, 1.0), phi, 10.0).unwrap();
            assert_eq!(r.classification, Topology::Sphere);
            assert!(r.periodicity.is_none());
        }

        let r = classify_topology(&cfg(2, SQRT_2), 0.0, 20.0).unwrap();
        assert_eq!(r.classification, Topology::Torus);
        assert!(r.periodicity.unwrap().spectral_certificate);

        let r = classify_topology(&cfg(4, 0.7), 0.0, 50.0).unwrap();
        assert_eq!(r.classification, Topology::InfiniteCylinder);
        assert!(r.horizon_limited);
    }

    #[test]
    fn classify_rejects_zero_coupling_with_field() {
        let c = cfg(3, 1.0).with_coupling(0.0).unwrap();
        assert_eq!(
            classify_topology(&c, 0.0, 10.0).unwrap_err(),
            Error::ZeroCoupling
        );
    }
}

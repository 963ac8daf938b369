//! Fubini-Study geometry of the `(θ, χ)` state manifold at zero field.
//!
//! The metric is diagonal with `g_θθ = γ²N/4` and `g_χχ` depending on `θ`
//! only, so the surface is a body of revolution around the `χ` circles and
//! its scalar curvature is a function of `θ` alone.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::entanglement::{entanglement_from_squares, EntanglementValue};
use crate::evolution::closed_form_evolve;
use crate::spin_state::{BlochAngles, SystemConfig};
use crate::{Error, Result, C64};

/// FD tangent vectors are not taken closer than this to `θ ∈ {0, π}`.
pub const POLE_MARGIN: f64 = 0.05;
pub const MIN_FD_STEP: f64 = 1e-6;
pub const MAX_FD_STEP: f64 = 1e-3;
/// Slack before a curvature inversion result outside `[0, 1]` is an error.
pub const COS2_SLACK: f64 = 1e-9;

/// Symmetric 2×2 metric sample in a named chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricTensor2D {
    pub coord_labels: (&'static str, &'static str),
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl MetricTensor2D {
    pub fn new(coord_labels: (&'static str, &'static str), g11: f64, g12: f64, g22: f64) -> Self {
        Self {
            coord_labels,
            g11,
            g12,
            g22,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}

pub(crate) const THETA_CHI: (&str, &str) = ("theta", "chi");

/// `(N-1) sin²θ [N-1-(N-3/2) sin²θ]`, the field-free part of `4g_χχ/(γ²N)`.
pub(crate) fn twisting_bracket(spins: usize, sin2: f64) -> f64 {
    let n = spins as f64;
    (n - 1.0) * sin2 * (n - 1.0 - (n - 1.5) * sin2)
}

/// Closed-form metric components at zero field.
pub fn metric_closed_form(config: &SystemConfig, theta: f64) -> MetricTensor2D {
    let n = config.spins() as f64;
    let gamma2 = config.gauge_factor().powi(2);
    let sin2 = theta.sin().powi(2);
    let prefactor = 0.25 * gamma2 * n;
    MetricTensor2D::new(
        THETA_CHI,
        prefactor,
        0.0,
        prefactor * twisting_bracket(config.spins(), sin2),
    )
}

/// The five overlaps from which the zero-field metric is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarProducts {
    /// `⟨ψ|ψ_θ⟩`
    pub psi_dtheta: C64,
    /// `⟨ψ|ψ_χ⟩`
    pub psi_dchi: C64,
    /// `⟨ψ_θ|ψ_θ⟩`
    pub dtheta_dtheta: C64,
    /// `⟨ψ_χ|ψ_χ⟩`
    pub dchi_dchi: C64,
    /// `⟨ψ_θ|ψ_χ⟩`
    pub dtheta_dchi: C64,
}

pub fn scalar_products(config: &SystemConfig, theta: f64) -> ScalarProducts {
    let n = config.spins() as f64;
    let (s, c) = theta.sin_cos();
    let c2 = c * c;
    ScalarProducts {
        psi_dtheta: C64::new(0.0, 0.0),
        psi_dchi: C64::new(0.0, -0.25 * n * (1.0 + (n - 1.0) * c2)),
        dtheta_dtheta: C64::new(0.25 * n, 0.0),
        dchi_dchi: C64::new(
            n / 16.0
                * ((n - 1.0) * (n - 2.0) * (n - 3.0) * c2 * c2
                    + (n - 1.0) * (6.0 * n - 8.0) * c2
                    + 3.0 * n
                    - 2.0),
            0.0,
        ),
        dtheta_dchi: C64::new(0.0, 0.25 * n * (n - 1.0) * s * c),
    }
}

/// `g_μν = γ² Re(⟨ψ_μ|ψ_ν⟩ - ⟨ψ_μ|ψ⟩⟨ψ|ψ_ν⟩)` from precomputed overlaps.
pub fn metric_from_products(gauge_factor: f64, p: &ScalarProducts) -> MetricTensor2D {
    let gamma2 = gauge_factor * gauge_factor;
    let component =
        |mu_nu: C64, psi_mu: C64, psi_nu: C64| gamma2 * (mu_nu - psi_mu.conj() * psi_nu).re;
    MetricTensor2D::new(
        THETA_CHI,
        component(p.dtheta_dtheta, p.psi_dtheta, p.psi_dtheta),
        component(p.dtheta_dchi, p.psi_dtheta, p.psi_dchi),
        component(p.dchi_dchi, p.psi_dchi, p.psi_dchi),
    )
}

fn braket(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Fubini-Study metric from a state and two tangent vectors. The projector
/// term makes the result independent of the phase convention.
pub(crate) fn fubini_study(
    labels: (&'static str, &'static str),
    gauge_factor: f64,
    psi: &[C64],
    d1: &[C64],
    d2: &[C64],
) -> MetricTensor2D {
    let gamma2 = gauge_factor * gauge_factor;
    let (p1, p2) = (braket(psi, d1), braket(psi, d2));
    let g =
        |da: &[C64], db: &[C64], pa: C64, pb: C64| gamma2 * (braket(da, db) - pa.conj() * pb).re;
    MetricTensor2D::new(
        labels,
        g(d1, d1, p1, p1),
        g(d1, d2, p1, p2),
        g(d2, d2, p2, p2),
    )
}

pub(crate) fn central_difference(plus: &[C64], minus: &[C64], step: f64) -> Vec<C64> {
    plus.iter()
        .zip(minus)
        .map(|(p, m)| (p - m) / (2.0 * step))
        .collect()
}

pub(crate) fn check_fd_inputs(theta: f64, step: f64) -> Result<()> {
    if !(POLE_MARGIN..=PI - POLE_MARGIN).contains(&theta) {
        return Err(Error::PoleProximity {
            theta,
            margin: POLE_MARGIN,
        });
    }
    if !(MIN_FD_STEP..=MAX_FD_STEP).contains(&step) {
        return Err(Error::InvalidStep {
            step,
            min: MIN_FD_STEP,
            max: MAX_FD_STEP,
        });
    }
    Ok(())
}

/// Metric from central-difference tangents of [`closed_form_evolve`] states.
pub fn fs_metric_fd(
    config: &SystemConfig,
    theta: f64,
    chi: f64,
    step: f64,
) -> Result<MetricTensor2D> {
    check_fd_inputs(theta, step)?;
    let state =
        |t: f64, c: f64| closed_form_evolve(config, BlochAngles::new(t, 0.0), c).into_amplitudes();
    let psi = state(theta, chi);
    let d_theta = central_difference(&state(theta + step, chi), &state(theta - step, chi), step);
    let d_chi = central_difference(&state(theta, chi + step), &state(theta, chi - step), step);
    Ok(fubini_study(
        THETA_CHI,
        config.gauge_factor(),
        &psi,
        &d_theta,
        &d_chi,
    ))
}

/// Scalar curvature and the single independent Riemann component at `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub theta: f64,
    pub scalar_curvature: f64,
    /// `R_θχθχ`
    pub riemann_component: f64,
}

/// `R = 2 R_θχθχ / (g_θθ g_χχ)` for a diagonal two-dimensional metric.
pub fn curvature_from_riemann(g_theta_theta: f64, g_chi_chi: f64, riemann_component: f64) -> f64 {
    2.0 * riemann_component / (g_theta_theta * g_chi_chi)
}

/// `R_θχθχ = -½ ∂²g_χχ + (∂g_χχ)²/(4g_χχ)` with `θ`-derivatives, given the
/// three values.
pub fn riemann_from_derivatives(g: f64, dg: f64, d2g: f64) -> f64 {
    -0.5 * d2g + dg * dg / (4.0 * g)
}

/// Analytic `R_θχθχ`.
///
/// With `u = sin²θ` and `g_χχ = A u Q(u)`, the ratio `(∂g)²/4g` reduces to
/// `A P²(1-u)/Q`, which stays finite at the poles where `g_χχ` vanishes.
fn riemann_component(config: &SystemConfig, theta: f64) -> f64 {
    let theta = fold_theta(theta);
    let n = config.spins() as f64;
    let a = 0.25 * config.gauge_factor().powi(2) * n * (n - 1.0);
    let b = n - 1.5;
    let u = theta.sin().powi(2);
    let p = (n - 1.0) - 2.0 * b * u;
    let q = (n - 1.0) - b * u;
    let cos2t = (2.0 * theta).cos();
    a * (4.0 * b * u * (1.0 - u) - p * cos2t + p * p * (1.0 - u) / q)
}

// Reflect into [0, π/2] so that R(θ) and R(π - θ) share one evaluation path;
// `π - (π - θ)` is exact in floating point (Sterbenz).
fn fold_theta(theta: f64) -> f64 {
    if theta > FRAC_PI_2 {
        PI - theta
    } else {
        theta
    }
}

/// Closed-form `R(θ)` together with `R_θχθχ`.
pub fn scalar_curvature(config: &SystemConfig, theta: f64) -> Result<CurvatureSample> {
    config.require_spins(2)?;
    let n = config.spins() as f64;
    let gamma2 = config.gauge_factor().powi(2);
    let x = (2.0 * n - 3.0) * fold_theta(theta).cos().powi(2);
    let r = 16.0 / (gamma2 * n) * (2.0 - (x + n) / ((x + 1.0) * (x + 1.0)));
    Ok(CurvatureSample {
        theta,
        scalar_curvature: r,
        riemann_component: riemann_component(config, theta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureExtrema {
    /// At `θ = π/2`.
    pub min: f64,
    /// At `θ ∈ {0, π}`.
    pub max: f64,
}

pub fn curvature_extrema(config: &SystemConfig) -> Result<CurvatureExtrema> {
    config.require_spins(2)?;
    let n = config.spins() as f64;
    let scale = 16.0 / (config.gauge_factor().powi(2) * n);
    Ok(CurvatureExtrema {
        min: scale * (2.0 - n),
        max: scale * (2.0 - 3.0 / (4.0 * (n - 1.0))),
    })
}

/// Open `θ` interval symmetric about `π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ThetaInterval {
    pub fn contains(&self, theta: f64) -> bool {
        self.lower < theta && theta < self.upper
    }
}

/// Where `R < 0`, i.e. `((2N-3)cos²θ + N)/((2N-3)cos²θ + 1)² > 2`.
///
/// With `y = (2N-3)cos²θ + 1` the condition is `2y² - y - (N-1) < 0`, so it
/// holds below the root `y* = (1 + sqrt(8N-7))/4`. Empty for `N <= 2`.
pub fn negative_curvature_region(config: &SystemConfig) -> Option<ThetaInterval> {
    let n = config.spins();
    if n <= 2 {
        return None;
    }
    let nf = n as f64;
    let y_star = (1.0 + (8.0 * nf - 7.0).sqrt()) / 4.0;
    let cos2_star = (y_star - 1.0) / (2.0 * nf - 3.0);
    let lower = cos2_star.sqrt().acos();
    Some(ThetaInterval {
        lower,
        upper: PI - lower,
    })
}

/// Radius of the `χ`-circle traced by the evolution, `sqrt(g_χχ)`.
pub fn evolution_circle_radius(config: &SystemConfig, theta: f64) -> f64 {
    let n = config.spins() as f64;
    let (s, _) = theta.sin_cos();
    0.5 * config.gauge_factor()
        * (n * (n - 1.0)).sqrt()
        * (n - 1.0 - (n - 1.5) * s * s).sqrt()
        * s.abs()
}

/// Inverts `R(θ)` for `cos²θ`, taking the root that lands in `[0, 1]` on
/// `[R_min, R_max]`.
pub fn cos2theta_from_curvature(config: &SystemConfig, curvature: f64) -> Result<f64> {
    config.require_spins(2)?;
    let n = config.spins() as f64;
    let q = curvature * config.gauge_factor().powi(2) * n;
    let radicand = q * (1.0 - n) + 32.0 * n - 28.0;
    if radicand < 0.0 {
        return Err(Error::CurvatureDomain {
            curvature,
            reason: "negative square-root argument",
            value: radicand,
        });
    }
    let cos2 = -(q - 24.0 + 4.0 * radicand.sqrt()) / ((q - 32.0) * (2.0 * n - 3.0));
    if !(-COS2_SLACK..=1.0 + COS2_SLACK).contains(&cos2) {
        return Err(Error::CurvatureDomain {
            curvature,
            reason: "cos²θ outside [0, 1]",
            value: cos2,
        });
    }
    Ok(cos2.clamp(0.0, 1.0))
}

/// Entanglement at `χ` as a function of the scalar curvature.
pub fn entanglement_vs_curvature(
    config: &SystemConfig,
    chi: f64,
    curvature: f64,
) -> Result<EntanglementValue> {
    let cos2 = cos2theta_from_curvature(config, curvature)?;
    Ok(entanglement_from_squares(
        config.spins(),
        cos2,
        1.0 - cos2,
        chi,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::entanglement_closed_form;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn cfg(n: usize) -> SystemConfig {
        SystemConfig::new(n).unwrap()
    }

    #[test]
    fn metric_examples() {
        let g = metric_closed_form(&cfg(6), FRAC_PI_2);
        assert!((g.g11 - 1.5).abs() < 1e-15);
        assert!((g.g22 - 3.75).abs() < 1e-14);
        assert_eq!(g.g12, 0.0);
        for n in [1, 2, 7] {
            assert_eq!(metric_closed_form(&cfg(n), 0.0).g22, 0.0);
        }
        assert!((metric_closed_form(&cfg(2), FRAC_PI_2).g22 - 0.25).abs() < 1e-15);
        let g = metric_closed_form(&cfg(3).with_gauge_factor(2.0).unwrap(), 1.0);
        let g1 = metric_closed_form(&cfg(3), 1.0);
        assert!((g.g22 - 4.0 * g1.g22).abs() < 1e-14);
    }

    #[test]
    fn scalar_product_examples() {
        for n in [2, 3, 8] {
            for theta in [0.0, 0.4, 2.0] {
                assert_eq!(
                    scalar_products(&cfg(n), theta).psi_dtheta,
                    C64::new(0.0, 0.0)
                );
            }
        }
        assert!(scalar_products(&cfg(2), FRAC_PI_2).dtheta_dchi.norm() < 1e-16);
        let p = scalar_products(&cfg(3), 0.0);
        assert!((p.psi_dchi - C64::new(0.0, -2.25)).norm() < 1e-15);
    }

    #[test]
    fn scalar_products_match_fd_overlaps() {
        // The closed-form states fix the phase gauge, so raw overlaps are comparable.
        let (n, theta, chi, h) = (5, 1.1, 0.8, 1e-5);
        let c = cfg(n);
        let st =
            |t: f64, x: f64| closed_form_evolve(&c, BlochAngles::new(t, 0.0), x).into_amplitudes();
        let psi = st(theta, chi);
        let dt = central_difference(&st(theta + h, chi), &st(theta - h, chi), h);
        let dc = central_difference(&st(theta, chi + h), &st(theta, chi - h), h);
        let p = scalar_products(&c, theta);
        for (got, want) in [
            (braket(&psi, &dt), p.psi_dtheta),
            (braket(&psi, &dc), p.psi_dchi),
            (braket(&dt, &dt), p.dtheta_dtheta),
            (braket(&dc, &dc), p.dchi_dchi),
            (braket(&dt, &dc), p.dtheta_dchi),
        ] {
            assert!(
                (got - want).norm() < 1e-7 * (1.0 + want.norm()),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn assembly_reproduces_closed_form() {
        for n in 1..=12 {
            for i in 0..=40 {
                let theta = PI * i as f64 / 40.0;
                let c = cfg(n).with_gauge_factor(1.3).unwrap();
                let a = metric_from_products(1.3, &scalar_products(&c, theta));
                let b = metric_closed_form(&c, theta);
                let scale = 1.0 + b.g22.abs();
                assert!((a.g11 - b.g11).abs() < 1e-12 * scale);
                assert!(a.g12.abs() < 1e-12);
                assert!((a.g22 - b.g22).abs() < 1e-12 * scale, "N={n} θ={theta}");
            }
        }
    }

    #[test]
    fn fd_metric_examples() {
        let c = cfg(6);
        let fd = fs_metric_fd(&c, FRAC_PI_3, 1.0, 1e-4).unwrap();
        let cf = metric_closed_form(&c, FRAC_PI_3);
        assert!(((fd.g11 - cf.g11) / cf.g11).abs() < 1e-6);
        assert!(((fd.g22 - cf.g22) / cf.g22).abs() < 1e-6);
        assert!(fd.g12.abs() < 1e-8);
        for chi in [0.3, 1.1, 2.7] {
            let g = fs_metric_fd(&c, 0.9, chi, 1e-4).unwrap();
            let g0 = fs_metric_fd(&c, 0.9, 0.3, 1e-4).unwrap();
            assert!((g.g11 - g0.g11).abs() < 1e-8);
            assert!((g.g22 - g0.g22).abs() < 1e-8);
        }
    }

    #[test]
    fn fd_metric_rejects_poles_and_steps() {
        let c = cfg(3);
        assert!(matches!(
            fs_metric_fd(&c, 0.01, 0.0, 1e-4),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            fs_metric_fd(&c, PI - 0.01, 0.0, 1e-4),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            fs_metric_fd(&c, 1.0, 0.0, 1e-2),
            Err(Error::InvalidStep { .. })
        ));
        assert!(matches!(
            fs_metric_fd(&c, 1.0, 0.0, 1e-8),
            Err(Error::InvalidStep { .. })
        ));
    }

    #[test]
    fn curvature_examples() {
        let r = |n: usize, theta: f64| scalar_curvature(&cfg(n), theta).unwrap().scalar_curvature;
        assert!(r(2, FRAC_PI_2).abs() < 1e-14);
        assert!((r(6, FRAC_PI_2) + 32.0 / 3.0).abs() < 1e-13);
        assert!((r(6, 0.0) - 74.0 / 15.0).abs() < 1e-13);
        assert!(scalar_curvature(&cfg(1), 1.0).is_err());
    }

    #[test]
    fn riemann_component_consistent_with_curvature() {
        for n in [2, 3, 6, 9, 20] {
            let c = cfg(n).with_gauge_factor(1.7).unwrap();
            for i in 1..50 {
                let theta = PI * i as f64 / 50.0;
                let s = scalar_curvature(&c, theta).unwrap();
                let g = metric_closed_form(&c, theta);
                let r = curvature_from_riemann(g.g11, g.g22, s.riemann_component);
                assert!(
                    (r - s.scalar_curvature).abs() < 1e-10 * (1.0 + r.abs()),
                    "N={n} θ={theta}"
                );
            }
        }
    }

    #[test]
    fn riemann_component_finite_at_poles() {
        let s = scalar_curvature(&cfg(5), 0.0).unwrap();
        assert!(s.riemann_component.abs() < 1e-13);
    }

    #[test]
    fn extrema_examples() {
        let e = curvature_extrema(&cfg(2)).unwrap();
        assert!(e.min.abs() < 1e-15 && (e.max - 10.0).abs() < 1e-14);
        let e = curvature_extrema(&cfg(9)).unwrap();
        assert!((e.min + 112.0 / 9.0).abs() < 1e-13);
        assert!((e.max - 61.0 / 18.0).abs() < 1e-13);
        assert!(curvature_extrema(&cfg(1)).is_err());
        for n in 2..=15 {
            let c = cfg(n);
            let e = curvature_extrema(&c).unwrap();
            assert!(
                (scalar_curvature(&c, FRAC_PI_2).unwrap().scalar_curvature - e.min).abs() < 1e-12
            );
            assert!((scalar_curvature(&c, 0.0).unwrap().scalar_curvature - e.max).abs() < 1e-12);
            assert!((scalar_curvature(&c, PI).unwrap().scalar_curvature - e.max).abs() < 1e-12);
            for i in 0..1000 {
                let r = scalar_curvature(&c, PI * i as f64 / 999.0)
                    .unwrap()
                    .scalar_curvature;
                assert!(e.min - 1e-12 <= r && r <= e.max + 1e-12);
            }
        }
    }

    #[test]
    fn negative_region() {
        assert!(negative_curvature_region(&cfg(2)).is_none());
        for n in [3, 4, 6, 9, 30] {
            let c = cfg(n);
            let iv = negative_curvature_region(&c).unwrap();
            assert!(iv.contains(FRAC_PI_2));
            assert!((iv.lower + iv.upper - PI).abs() < 1e-15);
            for end in [iv.lower, iv.upper] {
                assert!(scalar_curvature(&c, end).unwrap().scalar_curvature.abs() < 1e-9);
            }
            for i in 1..200 {
                let theta = PI * i as f64 / 200.0;
                let r = scalar_curvature(&c, theta).unwrap().scalar_curvature;
                if iv.contains(theta) {
                    assert!(r < 1e-12);
                } else {
                    assert!(r > -1e-12);
                }
            }
        }
    }

    #[test]
    fn circle_radius_examples() {
        assert_eq!(evolution_circle_radius(&cfg(5), 0.0), 0.0);
        assert!((evolution_circle_radius(&cfg(2), FRAC_PI_2) - 0.5).abs() < 1e-15);
        assert!((evolution_circle_radius(&cfg(6), FRAC_PI_2) - 15f64.sqrt() / 2.0).abs() < 1e-14);
        let radii: Vec<f64> = (2..30)
            .map(|n| evolution_circle_radius(&cfg(n), FRAC_PI_2))
            .collect();
        assert!(radii.windows(2).all(|w| w[1] > w[0]));
        for n in 1..10 {
            for i in 0..=30 {
                let theta = PI * i as f64 / 30.0;
                let c = cfg(n).with_gauge_factor(0.8).unwrap();
                let r = evolution_circle_radius(&c, theta);
                assert!((r * r - metric_closed_form(&c, theta).g22).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curvature_inversion() {
        for n in [2, 3, 6, 9] {
            let c = cfg(n);
            let e = curvature_extrema(&c).unwrap();
            assert!(cos2theta_from_curvature(&c, e.min).unwrap().abs() < 1e-9);
            assert!((cos2theta_from_curvature(&c, e.max).unwrap() - 1.0).abs() < 1e-9);
        }
        let c = cfg(6);
        let r = scalar_curvature(&c, FRAC_PI_3).unwrap().scalar_curvature;
        assert!((cos2theta_from_curvature(&c, r).unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn curvature_inversion_domain_errors() {
        let c = cfg(6);
        let e = curvature_extrema(&c).unwrap();
        assert!(matches!(
            cos2theta_from_curvature(&c, e.max + 1.0),
            Err(Error::CurvatureDomain { .. })
        ));
        assert!(matches!(
            cos2theta_from_curvature(&c, e.min - 5.0),
            Err(Error::CurvatureDomain { .. })
        ));
        assert!(matches!(
            entanglement_vs_curvature(&c, FRAC_PI_2, 100.0),
            Err(Error::CurvatureDomain { .. })
        ));
    }

    #[test]
    fn entanglement_curvature_map() {
        for n in [2, 3, 6, 9] {
            let c = cfg(n);
            let e = curvature_extrema(&c).unwrap();
            assert!(
                (entanglement_vs_curvature(&c, FRAC_PI_2, e.min)
                    .unwrap()
                    .value()
                    - 0.5)
                    .abs()
                    < 1e-9
            );
            assert!(
                entanglement_vs_curvature(&c, FRAC_PI_2, e.max)
                    .unwrap()
                    .value()
                    .abs()
                    < 1e-9
            );
            let theta = 0.7;
            let r = scalar_curvature(&c, theta).unwrap().scalar_curvature;
            let via_r = entanglement_vs_curvature(&c, 1.2, r).unwrap().value();
            let direct = entanglement_closed_form(&c, theta, 1.2).unwrap().value();
            assert!((via_r - direct).abs() < 1e-9);
        }
    }
}

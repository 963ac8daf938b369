//! System parameters and the two state representations.
//!
//! [`SymmetricState`] stores amplitudes `d_k` over Dicke states `|N,k⟩`, where
//! `k` counts down spins. The normalised Dicke state is a uniform superposition
//! of all `binom(N,k)` bitstrings of weight `k`, so `d_k = sqrt(binom(N,k)) c_k`
//! with `c_k` the amplitude of any single bitstring of that weight.
//!
//! [`FullState`] is the `2^N` computational-basis vector, only built for small
//! `N` as a brute-force cross-check. Bit `j` set means spin `j` is down.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Normalisation tolerance enforced on every constructed state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Weight outside the symmetric sector above which a projection is reported
/// as a symmetry violation.
pub const LEAKAGE_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_ORACLE_CAP: usize = 12;

/// Hard ceiling on `oracle_cap`; `2^26` complex amplitudes is 1 GiB.
const MAX_ORACLE_CAP: usize = 26;

/// Physical and numerical parameters.
///
/// `coupling` (J) and `field` (h) are in frequency units with ħ = 1.
/// `gauge_factor` (γ) multiplies every Fubini-Study metric component squared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    spins: usize,
    coupling: f64,
    field: f64,
    gauge_factor: f64,
    oracle_cap: usize,
}

impl SystemConfig {
    /// `N` spins with J = 1, h = 0, γ = 1 and the default oracle cap.
    pub fn new(spins: usize) -> Result<Self> {
        if spins == 0 {
            return Err(Error::InvalidConfig("spins must be at least 1".into()));
        }
        Ok(Self {
            spins,
            coupling: 1.0,
            field: 0.0,
            gauge_factor: 1.0,
            oracle_cap: DEFAULT_ORACLE_CAP,
        })
    }

    pub fn with_coupling(mut self, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "coupling {coupling} is not finite"
            )));
        }
        self.coupling = coupling;
        Ok(self)
    }

    pub fn with_field(mut self, field: f64) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::InvalidConfig(format!("field {field} is not finite")));
        }
        self.field = field;
        Ok(self)
    }

    pub fn with_gauge_factor(mut self, gauge_factor: f64) -> Result<Self> {
        if !(gauge_factor.is_finite() && gauge_factor > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gauge factor must be positive, got {gauge_factor}"
            )));
        }
        self.gauge_factor = gauge_factor;
        Ok(self)
    }

    pub fn with_oracle_cap(mut self, oracle_cap: usize) -> Result<Self> {
        if oracle_cap == 0 || oracle_cap > MAX_ORACLE_CAP {
            return Err(Error::InvalidConfig(format!(
                "oracle cap must lie in 1..={MAX_ORACLE_CAP}, got {oracle_cap}"
            )));
        }
        self.oracle_cap = oracle_cap;
        Ok(self)
    }

    pub fn spins(&self) -> usize {
        self.spins
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn gauge_factor(&self) -> f64 {
        self.gauge_factor
    }

    pub fn oracle_cap(&self) -> usize {
        self.oracle_cap
    }

    /// Dimensionless field strength `h/J`.
    pub fn field_ratio(&self) -> Result<f64> {
        if self.coupling == 0.0 {
            return Err(Error::ZeroCoupling);
        }
        Ok(self.field / self.coupling)
    }

    pub fn require_spins(&self, required: usize) -> Result<()> {
        if self.spins < required {
            return Err(Error::TooFewSpins {
                required,
                got: self.spins,
            });
        }
        Ok(())
    }

    pub fn require_oracle(&self) -> Result<()> {
        if self.spins > self.oracle_cap {
            return Err(Error::OracleCapExceeded {
                spins: self.spins,
                cap: self.oracle_cap,
            });
        }
        Ok(())
    }
}

/// Polar and azimuthal angles of the Bloch direction every spin starts in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Unit vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Read access to a state's amplitudes, shared by both representations.
pub trait Amplitudes {
    fn amplitudes(&self) -> &[C64];

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }
}

fn normalize(mut amps: Vec<C64>) -> Result<Vec<C64>> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    amps.iter_mut().for_each(|a| *a /= norm);
    Ok(amps)
}

fn check_unit_norm(amps: &[C64]) -> Result<()> {
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "state norm squared {n} differs from 1 by more than {NORM_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// State in the permutation-symmetric (Dicke) sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    amps: Vec<C64>,
}

impl SymmetricState {
    /// Wraps amplitudes that are already unit-normalised.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidArgument("need at least one spin".into()));
        }
        check_unit_norm(&amps)?;
        Ok(Self { amps })
    }

    /// Normalises arbitrary nonzero amplitudes.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidArgument("need at least one spin".into()));
        }
        Ok(Self {
            amps: normalize(amps)?,
        })
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn spins(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }
}

impl Amplitudes for SymmetricState {
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }
}

/// State on the full `2^N` Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    spins: usize,
    amps: Vec<C64>,
}

impl FullState {
    pub fn from_amplitudes(config: &SystemConfig, amps: Vec<C64>) -> Result<Self> {
        config.require_oracle()?;
        let dim = 1usize << config.spins();
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: dim,
            });
        }
        check_unit_norm(&amps)?;
        Ok(Self {
            spins: config.spins(),
            amps,
        })
    }

    pub(crate) fn from_raw(spins: usize, amps: Vec<C64>) -> Self {
        Self { spins, amps }
    }

    pub fn spins(&self) -> usize {
        self.spins
    }
}

impl Amplitudes for FullState {
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }
}

/// `ln binom(n, k)` for `k = 0..=n`, built by the multiplicative recurrence.
pub fn ln_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=n {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        out.push(acc);
    }
    out
}

fn ln_pow(abs_base: f64, exponent: usize) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        exponent as f64 * abs_base.ln()
    }
}

/// Product state with every spin along `angles`, in the Dicke basis.
///
/// `d_k = sqrt(binom(N,k)) cos^{N-k}(θ/2) sin^k(θ/2) e^{ikφ}`. Magnitudes are
/// assembled in log space so that large `N` neither overflows the binomial
/// nor underflows the powers.
pub fn spin_coherent_state(config: &SystemConfig, angles: BlochAngles) -> SymmetricState {
    let n = config.spins();
    let (s, c) = (0.5 * angles.theta).sin_cos();
    let ln_binom = ln_binomials(n);
    let amps: Vec<C64> = (0..=n)
        .map(|k| {
            let ln_mag = 0.5 * ln_binom[k] + ln_pow(c.abs(), n - k) + ln_pow(s.abs(), k);
            let mut sign = 1.0;
            if c < 0.0 && (n - k) % 2 == 1 {
                sign = -sign;
            }
            if s < 0.0 && k % 2 == 1 {
                sign = -sign;
            }
            C64::from_polar(sign * ln_mag.exp(), k as f64 * angles.phi)
        })
        .collect();
    // Exact normalisation holds by the binomial theorem; this only trims rounding.
    SymmetricState::from_raw(normalize(amps).expect("coherent state has unit norm"))
}

/// Spreads each Dicke amplitude uniformly over its weight class.
pub fn embed_full(config: &SystemConfig, state: &SymmetricState) -> Result<FullState> {
    config.require_oracle()?;
    let n = config.spins();
    if state.spins() != n {
        return Err(Error::DimensionMismatch {
            left: state.spins(),
            right: n,
        });
    }
    let scale: Vec<f64> = ln_binomials(n)
        .into_iter()
        .map(|lb| (-0.5 * lb).exp())
        .collect();
    let amps = (0..1usize << n)
        .map(|b| {
            let w = b.count_ones() as usize;
            state.amps[w] * scale[w]
        })
        .collect();
    Ok(FullState::from_raw(n, amps))
}

/// Result of projecting a full-space state onto the symmetric sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Renormalised symmetric component; `None` when it vanishes.
    pub state: Option<SymmetricState>,
    /// Probability weight outside the symmetric sector.
    pub leakage: f64,
}

impl Projection {
    /// The symmetric state, or a [`Error::SymmetryViolation`] when more than
    /// [`LEAKAGE_TOLERANCE`] of the weight leaked out.
    pub fn checked(self) -> Result<SymmetricState> {
        if self.leakage > LEAKAGE_TOLERANCE {
            return Err(Error::SymmetryViolation {
                leakage: self.leakage,
            });
        }
        self.state.ok_or(Error::ZeroNorm)
    }
}

pub fn project_symmetric(config: &SystemConfig, state: &FullState) -> Result<Projection> {
    config.require_oracle()?;
    let n = config.spins();
    if state.spins() != n {
        return Err(Error::DimensionMismatch {
            left: state.spins(),
            right: n,
        });
    }
    let mut sums = vec![C64::new(0.0, 0.0); n + 1];
    for (b, a) in state.amps.iter().enumerate() {
        sums[b.count_ones() as usize] += *a;
    }
    let amps: Vec<C64> = sums
        .into_iter()
        .zip(ln_binomials(n))
        .map(|(s, lb)| s * (-0.5 * lb).exp())
        .collect();
    let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let leakage = (state.norm_sqr() - kept).max(0.0);
    let state = normalize(amps).ok().map(SymmetricState::from_raw);
    Ok(Projection { state, leakage })
}

/// `⟨a|b⟩`.
pub fn inner<S: Amplitudes>(a: &S, b: &S) -> Result<C64> {
    let (a, b) = (a.amplitudes(), b.amplitudes());
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

/// `|⟨a|b⟩|`, insensitive to global phase.
pub fn fidelity<S: Amplitudes>(a: &S, b: &S) -> Result<f64> {
    Ok(inner(a, b)?.norm().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn coherent_state_poles() {
        let cfg = SystemConfig::new(4).unwrap();
        let up = spin_coherent_state(&cfg, BlochAngles::new(0.0, 0.0));
        assert!(close(
            up.amplitudes(),
            &[c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)],
            1e-15
        ));
        let down = spin_coherent_state(&cfg, BlochAngles::new(PI, 0.0));
        assert!(close(
            down.amplitudes(),
            &[c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)],
            1e-15
        ));
    }

    #[test]
    fn coherent_state_equator_two_spins() {
        let cfg = SystemConfig::new(2).unwrap();
        let s = spin_coherent_state(&cfg, BlochAngles::new(FRAC_PI_2, 0.0));
        assert!(close(
            s.amplitudes(),
            &[c(0.5), c(FRAC_1_SQRT_2), c(0.5)],
            1e-15
        ));
    }

    #[test]
    fn coherent_state_norm_large_n() {
        for n in [1, 7, 50, 120, 200] {
            let cfg = SystemConfig::new(n).unwrap();
            for theta in [0.1, 1.0, 2.0, 3.0] {
                let s = spin_coherent_state(&cfg, BlochAngles::new(theta, 0.4));
                assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn coherent_state_negative_half_angle() {
        // θ outside [0, π] flips signs of cos(θ/2) or sin(θ/2).
        let cfg = SystemConfig::new(3).unwrap();
        let s = spin_coherent_state(&cfg, BlochAngles::new(-0.8, 0.0));
        let (sn, cs) = (-0.4f64).sin_cos();
        let want = [
            cs.powi(3),
            3f64.sqrt() * cs * cs * sn,
            3f64.sqrt() * cs * sn * sn,
            sn.powi(3),
        ];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-14 && a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn embed_examples() {
        let cfg1 = SystemConfig::new(1).unwrap();
        let s = SymmetricState::from_amplitudes(vec![c(1.0), c(0.0)]).unwrap();
        assert!(close(
            embed_full(&cfg1, &s).unwrap().amplitudes(),
            &[c(1.0), c(0.0)],
            0.0
        ));

        let cfg2 = SystemConfig::new(2).unwrap();
        let s = SymmetricState::from_amplitudes(vec![c(0.0), c(1.0), c(0.0)]).unwrap();
        let f = embed_full(&cfg2, &s).unwrap();
        assert!(close(
            f.amplitudes(),
            &[c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)],
            1e-15
        ));
    }

    #[test]
    fn embed_rejects_above_cap() {
        let cfg = SystemConfig::new(5).unwrap().with_oracle_cap(4).unwrap();
        let s = spin_coherent_state(&cfg, BlochAngles::new(1.0, 0.0));
        assert_eq!(
            embed_full(&cfg, &s).unwrap_err(),
            Error::OracleCapExceeded { spins: 5, cap: 4 }
        );
    }

    #[test]
    fn project_examples() {
        let cfg = SystemConfig::new(2).unwrap();
        let up = FullState::from_amplitudes(&cfg, vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let p = project_symmetric(&cfg, &up).unwrap();
        assert_eq!(p.leakage, 0.0);
        assert!(close(
            p.state.unwrap().amplitudes(),
            &[c(1.0), c(0.0), c(0.0)],
            0.0
        ));

        let singlet = FullState::from_amplitudes(
            &cfg,
            vec![c(0.0), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2), c(0.0)],
        )
        .unwrap();
        let p = project_symmetric(&cfg, &singlet).unwrap();
        assert!((p.leakage - 1.0).abs() < 1e-15);
        assert!(p.state.is_none());
        assert!(matches!(
            project_symmetric(&cfg, &singlet).unwrap().checked(),
            Err(Error::SymmetryViolation { .. })
        ));

        let triplet = FullState::from_amplitudes(
            &cfg,
            vec![c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)],
        )
        .unwrap();
        let p = project_symmetric(&cfg, &triplet).unwrap();
        assert!(p.leakage < 1e-15);
        assert!(close(
            p.checked().unwrap().amplitudes(),
            &[c(0.0), c(1.0), c(0.0)],
            1e-15
        ));
    }

    #[test]
    fn fidelity_examples() {
        let cfg = SystemConfig::new(2).unwrap();
        let s = spin_coherent_state(&cfg, BlochAngles::new(0.7, 1.3));
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-15);
        let phased = SymmetricState::from_amplitudes(
            s.amplitudes()
                .iter()
                .map(|a| a * C64::from_polar(1.0, 0.9))
                .collect(),
        )
        .unwrap();
        assert!((fidelity(&s, &phased).unwrap() - 1.0).abs() < 1e-15);

        let a = SymmetricState::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        let b = SymmetricState::from_amplitudes(vec![c(0.0), c(1.0), c(0.0)]).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);

        let three = SymmetricState::from_amplitudes(vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(
            fidelity(&a, &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(0).is_err());
        let cfg = SystemConfig::new(3).unwrap();
        assert!(cfg.with_gauge_factor(0.0).is_err());
        assert!(cfg.with_gauge_factor(-1.0).is_err());
        assert!(cfg.with_field(f64::NAN).is_err());
        assert_eq!(
            cfg.with_coupling(0.0).unwrap().field_ratio().unwrap_err(),
            Error::ZeroCoupling
        );
        assert!(cfg.with_oracle_cap(0).is_err());
    }

    fn symmetric_state(max_spins: usize) -> impl Strategy<Value = SymmetricState> {
        (1..=max_spins)
            .prop_flat_map(|n| prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1))
            .prop_filter_map("nonzero", |v| {
                SymmetricState::normalized(v.into_iter().map(|(r, i)| C64::new(r, i)).collect())
                    .ok()
            })
    }

    proptest! {
        #[test]
        fn embed_project_round_trip(s in symmetric_state(10)) {
            let cfg = SystemConfig::new(s.spins()).unwrap();
            let full = embed_full(&cfg, &s).unwrap();
            prop_assert!((full.norm_sqr() - 1.0).abs() < 1e-12);
            let p = project_symmetric(&cfg, &full).unwrap();
            prop_assert!(p.leakage < 1e-12);
            let back = p.checked().unwrap();
            prop_assert!(close(back.amplitudes(), s.amplitudes(), 1e-14));
        }

        #[test]
        fn coherent_state_is_normalized(n in 1usize..200, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
            let cfg = SystemConfig::new(n).unwrap();
            let s = spin_coherent_state(&cfg, BlochAngles::new(theta, phi));
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
        }

        #[test]
        fn fidelity_phase_invariant(s in symmetric_state(8), alpha in -4.0f64..4.0) {
            let phase = C64::from_polar(1.0, alpha);
            let t = SymmetricState::normalized(s.amplitudes().iter().map(|a| a * phase).collect()).unwrap();
            prop_assert!((fidelity(&s, &t).unwrap() - 1.0).abs() < 1e-14);
        }
    }
}

//! Geometric measure of entanglement of one spin with the rest,
//! `E = (1 - |⟨σ_j⟩|)/2`.
//!
//! In the symmetric sector every spin has the same Bloch vector, obtained from
//! collective expectation values as `⟨σ_j⟩ = (2/N)⟨S⟩`. The partial-trace
//! route over a [`FullState`] is kept as an oracle.

use serde::{Deserialize, Serialize};

use crate::evolution::ladder_element;
use crate::spin_state::{Amplitudes, FullState, SymmetricState, SystemConfig};
use crate::{Error, Result};

/// Single-spin Bloch vector `⟨σ_j⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSpinVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub magnitude: f64,
}

impl MeanSpinVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self {
            sx,
            sy,
            sz,
            magnitude: (sx * sx + sy * sy + sz * sz).sqrt(),
        }
    }
}

/// Entanglement value, always in `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EntanglementValue(f64);

impl EntanglementValue {
    /// Clamps rounding excursions just outside `[0, 1/2]`.
    pub(crate) fn from_magnitude(magnitude: f64) -> Self {
        Self((0.5 * (1.0 - magnitude)).clamp(0.0, 0.5))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<EntanglementValue> for f64 {
    fn from(e: EntanglementValue) -> f64 {
        e.0
    }
}

pub fn mean_spin(config: &SystemConfig, state: &SymmetricState) -> Result<MeanSpinVector> {
    let n = config.spins();
    if state.spins() != n {
        return Err(Error::DimensionMismatch {
            left: state.spins(),
            right: n,
        });
    }
    let d = state.amplitudes();
    let nf = n as f64;
    let sz: f64 = d
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * (nf - 2.0 * k as f64))
        .sum::<f64>()
        / nf;
    // ⟨S_x⟩ = Σ 2x_k Re(d*_{k+1} d_k), ⟨S_y⟩ = -Σ 2x_k Im(d*_{k+1} d_k).
    let (mut jx, mut jy) = (0.0, 0.0);
    for k in 0..n {
        let t = d[k + 1].conj() * d[k] * (2.0 * ladder_element(n, k));
        jx += t.re;
        jy -= t.im;
    }
    Ok(MeanSpinVector::new(2.0 * jx / nf, 2.0 * jy / nf, sz))
}

pub fn geometric_entanglement(
    config: &SystemConfig,
    state: &SymmetricState,
) -> Result<EntanglementValue> {
    config.require_spins(2)?;
    Ok(EntanglementValue::from_magnitude(
        mean_spin(config, state)?.magnitude,
    ))
}

/// Bloch vector of spin `site` from the reduced density matrix of a full
/// state.
pub fn mean_spin_full(state: &FullState, site: usize) -> Result<MeanSpinVector> {
    if site >= state.spins() {
        return Err(Error::InvalidArgument(format!(
            "site {site} out of range for {} spins",
            state.spins()
        )));
    }
    let amps = state.amplitudes();
    let mask = 1usize << site;
    let (mut up, mut down) = (0.0, 0.0);
    let mut coherence = crate::C64::new(0.0, 0.0);
    for b in (0..amps.len()).filter(|b| b & mask == 0) {
        let (a_up, a_down) = (amps[b], amps[b | mask]);
        up += a_up.norm_sqr();
        down += a_down.norm_sqr();
        // ρ_{↑↓}
        coherence += a_up * a_down.conj();
    }
    Ok(MeanSpinVector::new(
        2.0 * coherence.re,
        -2.0 * coherence.im,
        up - down,
    ))
}

pub fn geometric_entanglement_full(state: &FullState, site: usize) -> Result<EntanglementValue> {
    if state.spins() < 2 {
        return Err(Error::TooFewSpins {
            required: 2,
            got: state.spins(),
        });
    }
    Ok(EntanglementValue::from_magnitude(
        mean_spin_full(state, site)?.magnitude,
    ))
}

/// Closed form in terms of `cos²θ`, `sin²θ`; shared by the curvature map.
pub(crate) fn entanglement_from_squares(
    spins: usize,
    cos2: f64,
    sin2: f64,
    chi: f64,
) -> EntanglementValue {
    let (sc, cc) = chi.sin_cos();
    let base = cc * cc + cos2 * sc * sc;
    let magnitude = (cos2 + sin2 * base.powi(spins as i32 - 1)).sqrt();
    EntanglementValue::from_magnitude(magnitude)
}

/// Entanglement of the one-axis-twisted coherent state (`h = 0`):
/// `E = ½[1 - sqrt(cos²θ + sin²θ (cos²χ + cos²θ sin²χ)^{N-1})]`.
pub fn entanglement_closed_form(
    config: &SystemConfig,
    theta: f64,
    chi: f64,
) -> Result<EntanglementValue> {
    config.require_spins(2)?;
    let (s, c) = theta.sin_cos();
    Ok(entanglement_from_squares(config.spins(), c * c, s * s, chi))
}

/// `E = ½(1 - |cos χ|^{N-1})`, the equatorial case.
pub fn entanglement_theta_half(config: &SystemConfig, chi: f64) -> Result<EntanglementValue> {
    config.require_spins(2)?;
    Ok(EntanglementValue::from_magnitude(
        chi.cos().abs().powi(config.spins() as i32 - 1),
    ))
}

/// Large-`N` value at `χ = π/2`, `E = ½(1 - |cos θ|)`.
pub fn entanglement_large_n_limit(theta: f64) -> EntanglementValue {
    EntanglementValue::from_magnitude(theta.cos().abs())
}

//! Time evolution in the dimensionless time `χ = Jt`.
//!
//! Three independent routes:
//! - [`closed_form_evolve`]: the one-axis-twisting phases `exp(-iχ(N-2k)²/4)`
//!   applied to the coherent-state amplitudes (`h = 0` only).
//! - [`field_evolve`] / [`Propagator`]: eigendecomposition of the tridiagonal
//!   collective Hamiltonian in the Dicke sector.
//! - [`brute_force_evolve`]: the full `2^N` Hamiltonian, exact phases when
//!   `h = 0` and a sub-stepped Taylor series otherwise.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::spin_state::{
    embed_full, fidelity, spin_coherent_state, Amplitudes, BlochAngles, FullState, SymmetricState,
    SystemConfig,
};
use crate::{Error, Result, C64};

/// Return fidelity a candidate period must reach.
pub const PERIOD_FIDELITY_THRESHOLD: f64 = 1.0 - 1e-9;
/// Slack on eigenvalue-difference ratios when testing commensurability.
pub const COMMENSURABILITY_TOLERANCE: f64 = 1e-9;
/// Largest denominator accepted for a rational eigenvalue-difference ratio.
pub const MAX_DENOMINATOR: u64 = 10_000;

/// `⟨k+1| S_x |k⟩` between adjacent Dicke states, `(1/2)sqrt((N-k)(k+1))`.
pub(crate) fn ladder_element(spins: usize, k: usize) -> f64 {
    0.5 * (((spins - k) * (k + 1)) as f64).sqrt()
}

/// `(J/4)(Σσᶻ)² + (h/2)Σσˣ` restricted to the Dicke sector.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveHamiltonian {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
}

impl CollectiveHamiltonian {
    /// In physical units (frequency, ħ = 1).
    pub fn new(config: &SystemConfig) -> Self {
        let n = config.spins();
        let (j, h) = (config.coupling(), config.field());
        let diagonal = (0..=n)
            .map(|k| {
                let m = n as f64 - 2.0 * k as f64;
                0.25 * j * m * m
            })
            .collect();
        let offdiagonal = (0..n).map(|k| h * ladder_element(n, k)).collect();
        Self {
            diagonal,
            offdiagonal,
        }
    }

    /// The generator of `χ`-evolution, `H/J`.
    pub fn dimensionless(config: &SystemConfig) -> Result<Self> {
        let j = config.coupling();
        if j == 0.0 {
            return Err(Error::ZeroCoupling);
        }
        let mut h = Self::new(config);
        h.diagonal.iter_mut().for_each(|d| *d /= j);
        h.offdiagonal.iter_mut().for_each(|o| *o /= j);
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (k, d) in self.diagonal.iter().enumerate() {
            m[(k, k)] = *d;
        }
        for (k, o) in self.offdiagonal.iter().enumerate() {
            m[(k, k + 1)] = *o;
            m[(k + 1, k)] = *o;
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let dim = self.dim();
        (0..dim)
            .map(|k| {
                let mut acc = v[k] * self.diagonal[k];
                if k > 0 {
                    acc += v[k - 1] * self.offdiagonal[k - 1];
                }
                if k + 1 < dim {
                    acc += v[k + 1] * self.offdiagonal[k];
                }
                acc
            })
            .collect()
    }

    pub fn expectation(&self, state: &SymmetricState) -> f64 {
        let v = state.amplitudes();
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(hv, a)| (a.conj() * hv).re)
            .sum()
    }
}

/// Diagonal of `(J/4)(Σσᶻ)²` over all `2^N` bitstrings.
pub fn full_space_diagonal(config: &SystemConfig) -> Result<Vec<f64>> {
    config.require_oracle()?;
    let n = config.spins();
    Ok((0..1usize << n)
        .map(|b| {
            let m = n as f64 - 2.0 * b.count_ones() as f64;
            0.25 * config.coupling() * m * m
        })
        .collect())
}

/// One-axis-twisting evolution of the coherent state, exact for `h = 0`.
///
/// The field in `config` is ignored.
pub fn closed_form_evolve(config: &SystemConfig, angles: BlochAngles, chi: f64) -> SymmetricState {
    let n = config.spins() as f64;
    let amps = spin_coherent_state(config, angles)
        .into_amplitudes()
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            let m = n - 2.0 * k as f64;
            d * C64::from_polar(1.0, -0.25 * chi * m * m)
        })
        .collect();
    SymmetricState::from_raw(amps)
}

/// Spectral decomposition of `H/J` in the Dicke sector, reusable across
/// many evolution times and initial states.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        let h = CollectiveHamiltonian::dimensionless(config)?;
        let dim = h.dim();
        let eig = SymmetricEigen::try_new(h.to_dense(), f64::EPSILON, 1000 * dim.max(10))
            .ok_or(Error::EigenNonConvergence { dim })?;
        Ok(Self {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    /// Eigenvalues of `H/J`, unsorted.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `exp(-iχH/J)|state⟩`.
    pub fn evolve(&self, state: &SymmetricState, chi: f64) -> Result<SymmetricState> {
        let v = state.amplitudes();
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: self.dim(),
            });
        }
        Ok(SymmetricState::from_raw(self.evolve_raw(v, chi)))
    }

    fn evolve_raw(&self, v: &[C64], chi: f64) -> Vec<C64> {
        let dim = self.dim();
        let coeffs: Vec<C64> = (0..dim)
            .map(|i| {
                let col = self.vectors.column(i);
                let overlap: C64 = col.iter().zip(v).map(|(c, a)| a * *c).sum();
                overlap * C64::from_polar(1.0, -chi * self.energies[i])
            })
            .collect();
        (0..dim)
            .map(|k| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * self.vectors[(k, i)])
                    .sum()
            })
            .collect()
    }

    /// Equal-weight superposition of every eigenvector; its return fidelity
    /// is 1 exactly when the propagator itself is the identity up to phase.
    pub fn spectral_probe(&self) -> SymmetricState {
        let dim = self.dim();
        let w = 1.0 / (dim as f64).sqrt();
        let amps = (0..dim)
            .map(|k| C64::new(w * self.vectors.row(k).sum(), 0.0))
            .collect();
        SymmetricState::from_raw(amps)
    }
}

/// Coherent state evolved under `H/J = (1/4)(Σσᶻ)² + (h/2J)Σσˣ`.
pub fn field_evolve(
    config: &SystemConfig,
    angles: BlochAngles,
    chi: f64,
) -> Result<SymmetricState> {
    let propagator = Propagator::new(config)?;
    propagator.evolve(&spin_coherent_state(config, angles), chi)
}

/// Applies `H/J - shift` on the full space: diagonal from bit weights,
/// `σˣ` terms as single bit flips.
fn apply_full(n: usize, diag: &[f64], half_ratio: f64, shift: f64, v: &[C64], out: &mut [C64]) {
    for (b, o) in out.iter_mut().enumerate() {
        let mut acc = v[b] * (diag[b] - shift);
        if half_ratio != 0.0 {
            let mut flips = C64::new(0.0, 0.0);
            for j in 0..n {
                flips += v[b ^ (1 << j)];
            }
            acc += flips * half_ratio;
        }
        *o = acc;
    }
}

/// Evolves the embedded coherent state with the full `2^N` Hamiltonian.
pub fn brute_force_evolve(
    config: &SystemConfig,
    angles: BlochAngles,
    chi: f64,
) -> Result<FullState> {
    config.require_oracle()?;
    let n = config.spins();
    let ratio = config.field_ratio()?;
    let diag: Vec<f64> = full_space_diagonal(config)?
        .into_iter()
        .map(|d| d / config.coupling())
        .collect();
    let initial = embed_full(config, &spin_coherent_state(config, angles))?;
    let mut v = initial.amplitudes().to_vec();

    if ratio == 0.0 {
        for (a, d) in v.iter_mut().zip(&diag) {
            *a *= C64::from_polar(1.0, -chi * d);
        }
        return Ok(FullState::from_raw(n, v));
    }

    // Centre the diagonal to shrink the operator norm, then restore the phase.
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(*d), hi.max(*d))
        });
    let shift = 0.5 * (lo + hi);
    let norm_bound = 0.5 * (hi - lo) + 0.5 * ratio.abs() * n as f64;
    let substeps = ((norm_bound * chi.abs()) / 0.5).ceil().max(1.0) as usize;
    let tau = chi / substeps as f64;
    let half_ratio = 0.5 * ratio;

    let dim = v.len();
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..substeps {
        term.copy_from_slice(&v);
        for k in 1..=60 {
            apply_full(n, &diag, half_ratio, shift, &term, &mut next);
            let factor = C64::new(0.0, -tau / k as f64);
            let mut size = 0.0;
            for ((t, nx), acc) in term.iter_mut().zip(&next).zip(v.iter_mut()) {
                *t = nx * factor;
                *acc += *t;
                size += t.norm_sqr();
            }
            if size < 1e-36 {
                break;
            }
        }
    }
    let phase = C64::from_polar(1.0, -chi * shift);
    v.iter_mut().for_each(|a| *a *= phase);
    Ok(FullState::from_raw(n, v))
}

/// Outcome of a periodicity search for the `χ`-evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub periodic: bool,
    /// Smallest detected return time, at most `horizon_chi`.
    pub period_chi: Option<f64>,
    pub horizon_chi: f64,
    /// Return fidelity at the period, or the best seen on the scan grid.
    pub max_return_fidelity: f64,
    /// True when the period came from exact commensurability of the spectrum
    /// rather than from the fidelity scan.
    pub spectral_certificate: bool,
}

/// Best rational approximation `p/q` with `q <= max_den`, from continued
/// fraction convergents.
fn best_rational(x: f64, max_den: u64) -> (i64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1u64, 1i64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a_i = a as i64;
        let q2 = (a_i.unsigned_abs())
            .checked_mul(q1)
            .and_then(|v| v.checked_add(q0));
        let q2 = match q2 {
            Some(q) if q <= max_den => q,
            _ => break,
        };
        let p2 = a_i * p1 + p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        (x.round() as i64, 1)
    } else {
        (p1, q1)
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Common period of the eigenphases, if every eigenvalue difference is a
/// rational multiple of the largest one.
fn commensurate_period(energies: &[f64]) -> Option<f64> {
    let base = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let diffs: Vec<f64> = energies
        .iter()
        .map(|e| e - base)
        .filter(|d| d.abs() > COMMENSURABILITY_TOLERANCE)
        .collect();
    let reference = diffs.iter().copied().fold(0.0, f64::max);
    if reference == 0.0 {
        // Single distinct level: any χ returns the state.
        return Some(0.0);
    }
    let mut fractions = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let ratio = d / reference;
        let (p, q) = best_rational(ratio, MAX_DENOMINATOR);
        if (ratio - p as f64 / q as f64).abs() > COMMENSURABILITY_TOLERANCE {
            return None;
        }
        fractions.push((p.unsigned_abs() as u128, q as u128));
    }
    let lcm = fractions
        .iter()
        .try_fold(1u128, |l, &(_, q)| l.checked_mul(q / gcd(l, q)))?;
    if lcm > 1u128 << 60 {
        return None;
    }
    let common = fractions
        .iter()
        .fold(lcm, |g, &(p, q)| gcd(g, p * (lcm / q)));
    // Fundamental frequency ω = reference · common / lcm.
    Some(TAU * lcm as f64 / (common as f64 * reference))
}

/// Decides whether `exp(-iχH/J)` returns to the identity (up to phase)
/// within `horizon_chi`.
///
/// Stage one looks for a common period of the spectrum and confirms it by
/// evolving a probe state that overlaps every eigenvector equally. When that
/// is inconclusive, a uniform fidelity scan over `(0, horizon_chi]` decides;
/// a miss is reported as non-periodic within the horizon, never as proven
/// aperiodicity.
pub fn detect_period(
    config: &SystemConfig,
    horizon_chi: f64,
    grid_steps: usize,
) -> Result<PeriodicityReport> {
    if !(horizon_chi > 0.0 && horizon_chi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive, got {horizon_chi}"
        )));
    }
    if grid_steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "grid_steps must be at least 100, got {grid_steps}"
        )));
    }
    let propagator = Propagator::new(config)?;
    let probe = propagator.spectral_probe();
    let return_fidelity =
        |chi: f64| -> Result<f64> { fidelity(&probe, &propagator.evolve(&probe, chi)?) };

    if let Some(period) = commensurate_period(propagator.energies()) {
        // A degenerate spectrum returns immediately; report the horizon-free 2π.
        let period = if period == 0.0 { TAU } else { period };
        let f = return_fidelity(period)?;
        if f >= PERIOD_FIDELITY_THRESHOLD && period <= horizon_chi {
            return Ok(PeriodicityReport {
                periodic: true,
                period_chi: Some(period),
                horizon_chi,
                max_return_fidelity: f,
                spectral_certificate: true,
            });
        }
    }

    let mut best = 0.0f64;
    for step in 1..=grid_steps {
        let chi = horizon_chi * step as f64 / grid_steps as f64;
        let f = return_fidelity(chi)?;
        if f >= PERIOD_FIDELITY_THRESHOLD {
            return Ok(PeriodicityReport {
                periodic: true,
                period_chi: Some(chi),
                horizon_chi,
                max_return_fidelity: f,
                spectral_certificate: false,
            });
        }
        best = best.max(f);
    }
    Ok(PeriodicityReport {
        periodic: false,
        period_chi: None,
        horizon_chi,
        max_return_fidelity: best,
        spectral_certificate: false,
    })
}

//! Optical elements acting on single-photon spin-orbit states.
//!
//! The q-plate couples spin to OAM: `|L,m⟩ → |R,m+2q⟩`, `|R,m⟩ → |L,m−2q⟩`.
//! Charges are carried as the integer `two_q = 2q` so half-integer plates are
//! exact.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

use crate::hilbert::{
    linear_components, shifted_m, HilbertError, LinearPol, PhotonState, SpinLabel, SpinOrbitMode,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("q-plate charge must be nonzero")]
    ZeroCharge,
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// A q-plate with topological charge `q = two_q / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QPlate {
    two_q: i32,
}

impl QPlate {
    pub fn new(two_q: i32) -> Result<Self, DeviceError> {
        if two_q == 0 {
            return Err(DeviceError::ZeroCharge);
        }
        Ok(Self { two_q })
    }

    pub fn two_q(&self) -> i32 {
        self.two_q
    }

    pub fn q(&self) -> f64 {
        f64::from(self.two_q) / 2.0
    }

    /// Local optic-axis orientation `α(φ) = qφ`.
    pub fn axis_angle(&self, phi: f64) -> f64 {
        self.q() * phi
    }

    pub fn apply(&self, s: &PhotonState) -> Result<PhotonState, DeviceError> {
        qplate_apply(self, s)
    }
}

/// Applies the q-plate operator; errors if a shifted OAM leaves the truncation.
pub fn qplate_apply(p: &QPlate, s: &PhotonState) -> Result<PhotonState, DeviceError> {
    let m_max = s.m_max();
    Ok(s.try_map_terms(|mode, amp| {
        let shift = match mode.spin {
            SpinLabel::L => p.two_q,
            SpinLabel::R => -p.two_q,
        };
        let m = shifted_m(mode.m, shift, m_max)?;
        Ok(vec![(SpinOrbitMode::new(mode.spin.flipped(), m), amp)])
    })?)
}

/// Half-wave plate with fast axis at `alpha`; global phase dropped.
///
/// `|L,m⟩ → e^{2iα}|R,m⟩`, `|R,m⟩ → e^{-2iα}|L,m⟩`, which sends the linear
/// polarization at angle `χ` to angle `2α − χ`.
pub fn hwp_apply(alpha: f64, s: &PhotonState) -> PhotonState {
    s.try_map_terms(|mode, amp| {
        let phase = match mode.spin {
            SpinLabel::L => Complex64::from_polar(1.0, 2.0 * alpha),
            SpinLabel::R => Complex64::from_polar(1.0, -2.0 * alpha),
        };
        Ok(vec![(
            SpinOrbitMode::new(mode.spin.flipped(), mode.m),
            amp * phase,
        )])
    })
    .expect("half-wave plate leaves m unchanged")
}

/// Projects the spin part onto the linear polarization at `axis_angle`.
/// The output is left unnormalized.
pub fn polarizer_project(axis_angle: f64, s: &PhotonState) -> PhotonState {
    let axis = linear_components(axis_angle);
    let comp = |spin: SpinLabel| {
        axis.iter()
            .find(|(sp, _)| *sp == spin)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    };
    let ms: std::collections::BTreeSet<i32> = s.support().map(|k| k.m).collect();
    let terms = ms.into_iter().flat_map(|m| {
        let overlap = comp(SpinLabel::L).conj() * s.amplitude(SpinOrbitMode::new(SpinLabel::L, m))
            + comp(SpinLabel::R).conj() * s.amplitude(SpinOrbitMode::new(SpinLabel::R, m));
        axis.map(|(spin, c)| (SpinOrbitMode::new(spin, m), c * overlap))
    });
    PhotonState::from_terms(s.m_max(), terms.collect::<Vec<_>>())
        .expect("polarizer leaves m unchanged")
}

/// Configuration of one detection arm: q-plate charge, waveplate angle and
/// apparatus rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analyzer {
    pub two_q: i32,
    pub theta: f64,
    pub beta: f64,
}

impl Analyzer {
    pub fn new(two_q: i32, theta: f64, beta: f64) -> Self {
        Self { two_q, theta, beta }
    }

    /// The matching analyzer `(−q, −θ)` for the partner arm.
    pub fn conjugate(&self, beta: f64) -> Self {
        Self::new(-self.two_q, -self.theta, beta)
    }

    /// Relative phase argument `2qβ + θ`.
    pub fn phase(&self) -> f64 {
        f64::from(self.two_q) * self.beta + self.theta
    }

    /// The two modes the analyzer projects on: `(R,+2q)` and `(L,−2q)`.
    pub fn modes(&self) -> [SpinOrbitMode; 2] {
        [
            SpinOrbitMode::new(SpinLabel::R, self.two_q),
            SpinOrbitMode::new(SpinLabel::L, -self.two_q),
        ]
    }

    pub fn state(&self, m_max: u32) -> Result<PhotonState, DeviceError> {
        analyzer_state(self, m_max)
    }
}

/// Detected state of a rotated analyzer,
/// `(e^{-i(2qβ+θ)}|R,+2q⟩ + e^{i(2qβ+θ)}|L,−2q⟩)/√2`.
pub fn analyzer_state(a: &Analyzer, m_max: u32) -> Result<PhotonState, DeviceError> {
    if a.two_q == 0 {
        return Err(DeviceError::ZeroCharge);
    }
    let phase = a.phase();
    let [xi, eta] = a.modes();
    Ok(PhotonState::from_terms(
        m_max,
        [
            (xi, Complex64::from_polar(FRAC_1_SQRT_2, -phase)),
            (eta, Complex64::from_polar(FRAC_1_SQRT_2, phase)),
        ],
    )?)
}

/// Builds the unrotated detected state from the device chain: `|H, 0⟩` (the
/// polarizer after single-mode-fiber filtering) propagated backwards through a
/// half-wave plate at `θ/2` and then the q-plate.
pub fn analyzer_state_chain(
    two_q: i32,
    theta: f64,
    m_max: u32,
) -> Result<PhotonState, DeviceError> {
    let plate = QPlate::new(two_q)?;
    let h = PhotonState::linear(m_max, LinearPol::H, 0)?;
    let rotated = hwp_apply(theta / 2.0, &h);
    let out = plate.apply(&rotated)?;
    Ok(out.normalized()?)
}

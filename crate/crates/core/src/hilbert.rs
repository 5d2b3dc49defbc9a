//! Sparse complex state vectors over the single- and two-photon spin-orbit
//! Hilbert spaces.
//!
//! A single photon mode is labelled by its circular spin (`L`/`R`) and an
//! integer orbital angular momentum `m`. States are finite sparse maps from
//! modes to complex amplitudes, truncated at `|m| <= m_max`.
//!
//! Linear polarizations are tied to the circular basis by
//!
//! ```text
//! |θ⟩ = cos θ |H⟩ + sin θ |V⟩ = (e^{-iθ}|L⟩ + e^{iθ}|R⟩) / √2
//! ```
//!
//! so `|H⟩ = (|L⟩ + |R⟩)/√2` and `|V⟩ = i(|R⟩ − |L⟩)/√2`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Amplitudes with magnitude below this are dropped from the support.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Default OAM truncation; covers `|m| = 2|q|` for every `|q| <= 2` with room to spare.
pub const DEFAULT_M_MAX: u32 = 8;

/// Tolerance used by [`PhotonState::is_normalized`] and [`BiphotonState::is_normalized`].
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("OAM index m = {m} exceeds the truncation m_max = {m_max}")]
    TruncationOverflow { m: i64, m_max: u32 },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
}

/// Circular spin of a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpinLabel {
    L,
    R,
}

impl SpinLabel {
    pub fn flipped(self) -> Self {
        match self {
            SpinLabel::L => SpinLabel::R,
            SpinLabel::R => SpinLabel::L,
        }
    }
}

/// Linear polarization labels, a view on top of the circular basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinearPol {
    H,
    V,
}

impl LinearPol {
    /// Orientation angle of the polarization in radians.
    pub fn angle(self) -> f64 {
        match self {
            LinearPol::H => 0.0,
            LinearPol::V => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Circular components `(⟨L|θ⟩, ⟨R|θ⟩)` of the linear polarization at angle `theta`.
pub fn linear_components(theta: f64) -> [(SpinLabel, Complex64); 2] {
    [
        (SpinLabel::L, Complex64::from_polar(FRAC_1_SQRT_2, -theta)),
        (SpinLabel::R, Complex64::from_polar(FRAC_1_SQRT_2, theta)),
    ]
}

/// Circular components of `|H⟩` or `|V⟩`.
///
/// Exact constants rather than [`linear_components`] at `π/2`, which would
/// leave a `cos(π/2) ≈ 6e-17` residue.
pub fn pol_components(pol: LinearPol) -> [(SpinLabel, Complex64); 2] {
    let s = FRAC_1_SQRT_2;
    match pol {
        LinearPol::H => [
            (SpinLabel::L, Complex64::new(s, 0.0)),
            (SpinLabel::R, Complex64::new(s, 0.0)),
        ],
        LinearPol::V => [
            (SpinLabel::L, Complex64::new(0.0, -s)),
            (SpinLabel::R, Complex64::new(0.0, s)),
        ],
    }
}

/// Basis label `(spin, m)` of a single photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinOrbitMode {
    pub spin: SpinLabel,
    pub m: i32,
}

impl SpinOrbitMode {
    pub const fn new(spin: SpinLabel, m: i32) -> Self {
        Self { spin, m }
    }
}

impl fmt::Display for SpinOrbitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{:?},{:+}⟩", self.spin, self.m)
    }
}

fn check_m(m: i64, m_max: u32) -> Result<i32, HilbertError> {
    if m.unsigned_abs() > u64::from(m_max) {
        Err(HilbertError::TruncationOverflow { m, m_max })
    } else {
        Ok(m as i32)
    }
}

/// Checks that a shifted OAM index stays inside the truncation window.
pub fn shifted_m(m: i32, shift: i32, m_max: u32) -> Result<i32, HilbertError> {
    check_m(i64::from(m) + i64::from(shift), m_max)
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Complex64>, key: K, amp: Complex64) {
    *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Complex64>) {
    map.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
}

/// A single-photon pure state (not necessarily normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    m_max: u32,
    amps: BTreeMap<SpinOrbitMode, Complex64>,
}

impl PhotonState {
    pub fn zero(m_max: u32) -> Self {
        Self {
            m_max,
            amps: BTreeMap::new(),
        }
    }

    /// Builds a state from `(mode, amplitude)` terms. Repeated modes add up.
    pub fn from_terms<I>(m_max: u32, terms: I) -> Result<Self, HilbertError>
    where
        I: IntoIterator<Item = (SpinOrbitMode, Complex64)>,
    {
        let mut amps = BTreeMap::new();
        for (mode, amp) in terms {
            check_m(i64::from(mode.m), m_max)?;
            accumulate(&mut amps, mode, amp);
        }
        prune(&mut amps);
        Ok(Self { m_max, amps })
    }

    pub fn basis(m_max: u32, spin: SpinLabel, m: i32) -> Result<Self, HilbertError> {
        Self::from_terms(
            m_max,
            [(SpinOrbitMode::new(spin, m), Complex64::new(1.0, 0.0))],
        )
    }

    /// `|pol, m⟩` for `pol ∈ {H, V}`.
    pub fn linear(m_max: u32, pol: LinearPol, m: i32) -> Result<Self, HilbertError> {
        Self::from_terms(
            m_max,
            pol_components(pol)
                .into_iter()
                .map(|(s, a)| (SpinOrbitMode::new(s, m), a)),
        )
    }

    /// Linear polarization at angle `theta` carrying OAM `m`.
    pub fn linear_at(m_max: u32, theta: f64, m: i32) -> Result<Self, HilbertError> {
        Self::from_terms(
            m_max,
            linear_components(theta)
                .into_iter()
                .map(|(s, a)| (SpinOrbitMode::new(s, m), a)),
        )
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn amplitude(&self, mode: SpinOrbitMode) -> Complex64 {
        self.amps.get(&mode).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpinOrbitMode, Complex64)> + '_ {
        self.amps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support(&self) -> impl Iterator<Item = SpinOrbitMode> + '_ {
        self.amps.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<Self, HilbertError> {
        let n = self.norm_sqr().sqrt();
        if self.is_zero() || n == 0.0 {
            return Err(HilbertError::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut amps: BTreeMap<_, _> = self.amps.iter().map(|(k, v)| (*k, v * factor)).collect();
        prune(&mut amps);
        Self {
            m_max: self.m_max,
            amps,
        }
    }

    /// Sum of two states; the result keeps the larger truncation.
    pub fn plus(&self, other: &Self) -> Self {
        let mut amps = self.amps.clone();
        for (k, v) in &other.amps {
            accumulate(&mut amps, *k, *v);
        }
        prune(&mut amps);
        Self {
            m_max: self.m_max.max(other.m_max),
            amps,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        inner_product(self, other)
    }

    /// Re-expresses the state over linear polarization labels.
    pub fn to_linear_basis(&self) -> LinearState {
        to_linear_basis(self)
    }

    /// Rebuilds the state from each mode's image under `f`, summing collisions.
    pub(crate) fn try_map_terms<F>(&self, mut f: F) -> Result<Self, HilbertError>
    where
        F: FnMut(SpinOrbitMode, Complex64) -> Result<Vec<(SpinOrbitMode, Complex64)>, HilbertError>,
    {
        let mut terms = Vec::with_capacity(self.amps.len());
        for (k, v) in &self.amps {
            terms.extend(f(*k, *v)?);
        }
        Self::from_terms(self.m_max, terms)
    }
}

/// `⟨a|b⟩ = Σ conj(a[k]) b[k]`.
pub fn inner_product(a: &PhotonState, b: &PhotonState) -> Complex64 {
    let (small, large, conj_small) = if a.amps.len() <= b.amps.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    small
        .amps
        .iter()
        .filter_map(|(k, s)| large.amps.get(k).map(|l| (s, l)))
        .map(|(s, l)| {
            if conj_small {
                s.conj() * l
            } else {
                l.conj() * s
            }
        })
        .sum()
}

/// Overlap `|⟨a|b⟩|²` of normalized states; insensitive to global phase.
pub fn fidelity(a: &PhotonState, b: &PhotonState) -> f64 {
    inner_product(a, b).norm_sqr()
}

/// A single-photon state written over `(H|V, m)` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearState {
    m_max: u32,
    amps: BTreeMap<(LinearPol, i32), Complex64>,
}

impl LinearState {
    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn amplitude(&self, pol: LinearPol, m: i32) -> Complex64 {
        self.amps.get(&(pol, m)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((LinearPol, i32), Complex64)> + '_ {
        self.amps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Back to the circular basis.
    pub fn to_circular(&self) -> PhotonState {
        let mut amps = BTreeMap::new();
        for (&(pol, m), &a) in &self.amps {
            for (spin, c) in pol_components(pol) {
                accumulate(&mut amps, SpinOrbitMode::new(spin, m), a * c);
            }
        }
        prune(&mut amps);
        PhotonState {
            m_max: self.m_max,
            amps,
        }
    }
}

/// Linear-basis amplitudes `a_H = ⟨H,m|ψ⟩`, `a_V = ⟨V,m|ψ⟩`.
pub fn to_linear_basis(s: &PhotonState) -> LinearState {
    let mut amps = BTreeMap::new();
    for (&mode, &a) in &s.amps {
        for pol in [LinearPol::H, LinearPol::V] {
            let c = pol_components(pol)
                .into_iter()
                .find(|(spin, _)| *spin == mode.spin)
                .map(|(_, c)| c)
                .unwrap_or_default();
            accumulate(&mut amps, (pol, mode.m), c.conj() * a);
        }
    }
    prune(&mut amps);
    LinearState {
        m_max: s.m_max,
        amps,
    }
}

/// Pair of modes `(transmitted, reflected)`; the order is positional.
pub type ModePair = (SpinOrbitMode, SpinOrbitMode);

/// A two-photon pure state over the transmitted (`t`) and reflected (`r`) arms.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    m_max: u32,
    amps: BTreeMap<ModePair, Complex64>,
}

impl BiphotonState {
    pub fn zero(m_max: u32) -> Self {
        Self {
            m_max,
            amps: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(m_max: u32, terms: I) -> Result<Self, HilbertError>
    where
        I: IntoIterator<Item = (ModePair, Complex64)>,
    {
        let mut amps = BTreeMap::new();
        for ((t, r), amp) in terms {
            check_m(i64::from(t.m), m_max)?;
            check_m(i64::from(r.m), m_max)?;
            accumulate(&mut amps, (t, r), amp);
        }
        prune(&mut amps);
        Ok(Self { m_max, amps })
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn amplitude(&self, t: SpinOrbitMode, r: SpinOrbitMode) -> Complex64 {
        self.amps.get(&(t, r)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModePair, Complex64)> + '_ {
        self.amps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<Self, HilbertError> {
        let n = self.norm_sqr().sqrt();
        if self.is_zero() || n == 0.0 {
            return Err(HilbertError::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut amps: BTreeMap<_, _> = self.amps.iter().map(|(k, v)| (*k, v * factor)).collect();
        prune(&mut amps);
        Self {
            m_max: self.m_max,
            amps,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut amps = self.amps.clone();
        for (k, v) in &other.amps {
            accumulate(&mut amps, *k, *v);
        }
        prune(&mut amps);
        Self {
            m_max: self.m_max.max(other.m_max),
            amps,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// Keeps only the terms whose `t` mode is in `t_modes` and `r` mode in `r_modes`.
    pub fn restricted(&self, t_modes: &[SpinOrbitMode], r_modes: &[SpinOrbitMode]) -> Self {
        let amps = self
            .amps
            .iter()
            .filter(|((t, r), _)| t_modes.contains(t) && r_modes.contains(r))
            .map(|(k, v)| (*k, *v))
            .collect();
        Self {
            m_max: self.m_max,
            amps,
        }
    }
}

/// `|t⟩ ⊗ |r⟩`.
pub fn tensor_product(t: &PhotonState, r: &PhotonState) -> BiphotonState {
    let mut amps = BTreeMap::new();
    for (kt, at) in &t.amps {
        for (kr, ar) in &r.amps {
            amps.insert((*kt, *kr), at * ar);
        }
    }
    prune(&mut amps);
    BiphotonState {
        m_max: t.m_max.max(r.m_max),
        amps,
    }
}

/// Projects the `t` arm of `joint` onto `t_bra`, leaving the unnormalized
/// `r`-arm state `Σ conj(t_bra[k_t]) joint[(k_t, k_r)] |k_r⟩`.
pub fn partial_inner(t_bra: &PhotonState, joint: &BiphotonState) -> PhotonState {
    let mut amps = BTreeMap::new();
    for ((kt, kr), a) in &joint.amps {
        if let Some(b) = t_bra.amps.get(kt) {
            accumulate(&mut amps, *kr, b.conj() * a);
        }
    }
    prune(&mut amps);
    PhotonState {
        m_max: joint.m_max,
        amps,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const L: SpinLabel = SpinLabel::L;
    const R: SpinLabel = SpinLabel::R;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} != {b}");
    }

    pub(crate) fn arb_state(m_max: u32, normalized: bool) -> impl Strategy<Value = PhotonState> {
        let m = m_max as i32;
        prop::collection::vec((any::<bool>(), -m..=m, -1.0f64..1.0, -1.0f64..1.0), 1..6)
            .prop_filter_map("nonzero", move |terms| {
                let s = PhotonState::from_terms(
                    m_max,
                    terms.into_iter().map(|(spin, m, re, im)| {
                        (SpinOrbitMode::new(if spin { R } else { L }, m), c(re, im))
                    }),
                )
                .ok()?;
                if s.norm_sqr() < 1e-6 {
                    return None;
                }
                if normalized {
                    s.normalized().ok()
                } else {
                    Some(s)
                }
            })
    }

    fn arb_joint(m_max: u32) -> impl Strategy<Value = BiphotonState> {
        let m = m_max as i32;
        prop::collection::vec(
            (
                any::<bool>(),
                -m..=m,
                any::<bool>(),
                -m..=m,
                -1.0f64..1.0,
                -1.0f64..1.0,
            ),
            1..8,
        )
        .prop_map(move |terms| {
            BiphotonState::from_terms(
                m_max,
                terms.into_iter().map(|(st, mt, sr, mr, re, im)| {
                    (
                        (
                            SpinOrbitMode::new(if st { R } else { L }, mt),
                            SpinOrbitMode::new(if sr { R } else { L }, mr),
                        ),
                        c(re, im),
                    )
                }),
            )
            .unwrap()
        })
    }

    #[test]
    fn basis_inner_products() {
        let r1 = PhotonState::basis(8, R, 1).unwrap();
        let l1 = PhotonState::basis(8, L, 1).unwrap();
        assert_eq!(inner_product(&r1, &r1), c(1.0, 0.0));
        assert_eq!(inner_product(&r1, &l1), c(0.0, 0.0));
    }

    #[test]
    fn detected_state_has_unit_norm() {
        let theta = 0.37;
        let s = PhotonState::from_terms(
            8,
            [
                (
                    SpinOrbitMode::new(R, 2),
                    Complex64::from_polar(FRAC_1_SQRT_2, -theta),
                ),
                (
                    SpinOrbitMode::new(L, -2),
                    Complex64::from_polar(FRAC_1_SQRT_2, theta),
                ),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(s.inner(&s).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.inner(&s).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn truncation_is_enforced() {
        assert_eq!(
            PhotonState::basis(2, R, 3),
            Err(HilbertError::TruncationOverflow { m: 3, m_max: 2 })
        );
        assert!(PhotonState::basis(2, R, -2).is_ok());
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let s = PhotonState::from_terms(
            4,
            [
                (SpinOrbitMode::new(R, 0), c(1.0, 0.0)),
                (SpinOrbitMode::new(L, 0), c(1e-15, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.support_len(), 1);
        assert!(PhotonState::zero(4).normalized().is_err());
    }

    #[test]
    fn tensor_of_basis_states() {
        let t = PhotonState::basis(8, R, 1).unwrap();
        let r = PhotonState::basis(8, L, -1).unwrap();
        let j = tensor_product(&t, &r);
        assert_eq!(j.support_len(), 1);
        assert_eq!(
            j.amplitude(SpinOrbitMode::new(R, 1), SpinOrbitMode::new(L, -1)),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn tensor_of_two_term_states_is_unit_norm() {
        let a = PhotonState::linear_at(8, 0.3, 1).unwrap();
        let b = PhotonState::linear_at(8, -1.1, -2).unwrap();
        let j = tensor_product(&a, &b);
        assert_eq!(j.support_len(), 4);
        assert_abs_diff_eq!(j.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_keeps_coefficients() {
        let t = PhotonState::from_terms(
            8,
            [
                (SpinOrbitMode::new(R, 0), c(0.6, 0.0)),
                (SpinOrbitMode::new(L, 0), c(0.8, 0.0)),
            ],
        )
        .unwrap();
        let r = PhotonState::basis(8, R, 2).unwrap();
        let j = tensor_product(&t, &r);
        let r2 = SpinOrbitMode::new(R, 2);
        assert_eq!(j.amplitude(SpinOrbitMode::new(R, 0), r2), c(0.6, 0.0));
        assert_eq!(j.amplitude(SpinOrbitMode::new(L, 0), r2), c(0.8, 0.0));
    }

    #[test]
    fn partial_inner_with_linear_labels() {
        let h = PhotonState::linear(8, LinearPol::H, 0).unwrap();
        let v = PhotonState::linear(8, LinearPol::V, 0).unwrap();
        let joint = tensor_product(&h, &v);
        let out = partial_inner(&h, &joint);
        assert_close(inner_product(&v, &out), c(1.0, 0.0), 1e-15);
        assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_inner_orthogonal_is_zero() {
        let joint = tensor_product(
            &PhotonState::basis(8, R, 1).unwrap(),
            &PhotonState::basis(8, L, 0).unwrap(),
        );
        let bra = PhotonState::basis(8, R, 2).unwrap();
        assert!(partial_inner(&bra, &joint).is_zero());
    }

    #[test]
    fn linear_basis_h_and_v() {
        let h = PhotonState::linear(8, LinearPol::H, 0).unwrap();
        assert_close(
            h.amplitude(SpinOrbitMode::new(L, 0)),
            c(FRAC_1_SQRT_2, 0.0),
            1e-16,
        );
        assert_close(
            h.amplitude(SpinOrbitMode::new(R, 0)),
            c(FRAC_1_SQRT_2, 0.0),
            1e-16,
        );
        let lin = h.to_linear_basis();
        assert_close(lin.amplitude(LinearPol::H, 0), c(1.0, 0.0), 1e-15);
        assert_close(lin.amplitude(LinearPol::V, 0), c(0.0, 0.0), 1e-15);

        // i(|R⟩ − |L⟩)/√2
        let v = PhotonState::linear(8, LinearPol::V, 0).unwrap();
        assert_close(
            v.amplitude(SpinOrbitMode::new(R, 0)),
            c(0.0, FRAC_1_SQRT_2),
            1e-16,
        );
        assert_close(
            v.amplitude(SpinOrbitMode::new(L, 0)),
            c(0.0, -FRAC_1_SQRT_2),
            1e-16,
        );
        let lin = v.to_linear_basis();
        assert_close(lin.amplitude(LinearPol::V, 0), c(1.0, 0.0), 1e-15);
        assert_close(lin.amplitude(LinearPol::H, 0), c(0.0, 0.0), 1e-15);
    }

    #[test]
    fn theta_linear_matches_h_v_superposition() {
        for theta in [0.0, 0.4, FRAC_PI_2, 2.0, PI] {
            let s = PhotonState::linear_at(8, theta, 0)
                .unwrap()
                .to_linear_basis();
            assert_close(s.amplitude(LinearPol::H, 0), c(theta.cos(), 0.0), 1e-15);
            assert_close(s.amplitude(LinearPol::V, 0), c(theta.sin(), 0.0), 1e-15);
        }
    }

    #[test]
    fn display_mode() {
        assert_eq!(SpinOrbitMode::new(R, -2).to_string(), "|R,-2⟩");
    }

    proptest! {
        #[test]
        fn round_trip_circular_linear(s in arb_state(8, false)) {
            let lin = s.to_linear_basis();
            prop_assert!((lin.norm_sqr() - s.norm_sqr()).abs() <= 1e-14);
            let back = lin.to_circular();
            for (k, a) in s.iter() {
                prop_assert!((back.amplitude(k) - a).norm() <= 1e-15);
            }
            for (k, a) in back.iter() {
                prop_assert!((s.amplitude(k) - a).norm() <= 1e-15);
            }
        }

        #[test]
        fn inner_is_conjugate_symmetric(a in arb_state(8, false), b in arb_state(8, false)) {
            prop_assert!((inner_product(&a, &b) - inner_product(&b, &a).conj()).norm() <= 1e-15);
        }

        #[test]
        fn cauchy_schwarz(a in arb_state(8, false), b in arb_state(8, false)) {
            let lhs = inner_product(&a, &b).norm_sqr();
            let rhs = a.norm_sqr() * b.norm_sqr();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15);
        }

        #[test]
        fn partial_inner_linear_in_joint(
            bra in arb_state(4, false),
            j1 in arb_joint(4),
            j2 in arb_joint(4),
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let k = c(re, im);
            let lhs = partial_inner(&bra, &j1.scaled(k).plus(&j2));
            let rhs = partial_inner(&bra, &j1).scaled(k).plus(&partial_inner(&bra, &j2));
            for (mode, a) in lhs.iter().chain(rhs.iter()) {
                let _ = a;
                prop_assert!((lhs.amplitude(mode) - rhs.amplitude(mode)).norm() <= 1e-12);
            }
        }

        #[test]
        fn partial_inner_antilinear_in_bra(
            b1 in arb_state(4, false),
            b2 in arb_state(4, false),
            joint in arb_joint(4),
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let k = c(re, im);
            let lhs = partial_inner(&b1.scaled(k).plus(&b2), &joint);
            let rhs = partial_inner(&b1, &joint)
                .scaled(k.conj())
                .plus(&partial_inner(&b2, &joint));
            for (mode, _) in lhs.iter().chain(rhs.iter()) {
                prop_assert!((lhs.amplitude(mode) - rhs.amplitude(mode)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn tensor_norm_multiplicative_over_random_states() {
        use proptest::strategy::ValueTree;
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::deterministic();
        let strat = (arb_state(8, true), arb_state(8, true));
        for _ in 0..1000 {
            let (a, b) = strat.new_tree(&mut runner).unwrap().current();
            let j = tensor_product(&a, &b);
            assert!((j.norm_sqr() - 1.0).abs() <= 1e-12);
            assert_eq!(j.support_len(), a.support_len() * b.support_len());
        }
    }
}

//! Coincidences, partner collapse, post-selected hypoentangled Bell states and
//! the CHSH parameter.
//!
//! Both arms carry an [`Analyzer`]. For the conjugate configuration
//! `(q, θ, β_t)` / `(−q, −θ, β_r)` the coincidence amplitude against a joint
//! state reduces to the 2×2 block on the per-arm composite bases
//!
//! ```text
//! t: |ξ⟩ = |R,+2q⟩, |η⟩ = |L,−2q⟩        r: |ξ⟩ = |R,−2q⟩, |η⟩ = |L,+2q⟩
//! ```
//!
//! giving `|M_ξξ e^{ix} + M_ηη e^{−ix}|² / 4` with `x = 2q(β_t − β_r)`. The
//! fringe is therefore `cos²(2qΔ + δ₀)` with an offset `δ₀` fixed by the phase
//! conventions; every Bell quantity here is invariant under that offset.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::devices::{analyzer_state, Analyzer, DeviceError};
use crate::hilbert::{
    partial_inner, BiphotonState, PhotonState, SpinLabel, SpinOrbitMode, PRUNE_THRESHOLD,
};

/// Default grid step of [`optimize_chsh`], radians.
pub const DEFAULT_RESOLUTION: f64 = 1e-3;

/// Bracket width at which golden-section refinement stops.
pub const REFINE_TOLERANCE: f64 = 1e-10;

/// Largest CHSH value any quantum state can reach.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BellError {
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error("analyzer is orthogonal to every transmitted mode of the joint state")]
    OrthogonalAnalyzer,
    #[error("joint state has no weight on the analyzer block; coincidences cannot be normalized")]
    DegenerateNormalization,
    #[error("projection onto the composite spin-orbit subspace is empty")]
    EmptyProjection,
    #[error("state is not supported on a 2x2 product of per-arm modes ({t} t-modes, {r} r-modes)")]
    UnsupportedShape { t: usize, r: usize },
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("need at least {needed} finite samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("fringe fit is ill-conditioned (visibility {visibility})")]
    IllConditionedFit { visibility: f64 },
}

/// Charge and waveplate angle of the transmitted arm. The reflected arm is
/// always the conjugate `(−q, −θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArmConfig {
    pub two_q: i32,
    pub theta: f64,
}

impl ArmConfig {
    pub fn new(two_q: i32, theta: f64) -> Self {
        Self { two_q, theta }
    }

    pub fn analyzers(&self, beta_t: f64, beta_r: f64) -> (Analyzer, Analyzer) {
        let t = Analyzer::new(self.two_q, self.theta, beta_t);
        (t, t.conjugate(beta_r))
    }

    /// Period of the coincidence fringe in `β_t − β_r`, `π/(2|q|)`.
    pub fn fringe_period(&self) -> f64 {
        PI / f64::from(self.two_q.abs())
    }
}

/// `β̄ = β + π/(4q)`, with signed `q`.
pub fn beta_bar(beta: f64, two_q: i32) -> f64 {
    beta + PI / (2.0 * f64::from(two_q))
}

/// Four analyzer rotations `(β_t, β_r, β′_t, β′_r)` for one CHSH test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshSettings {
    pub beta_t: f64,
    pub beta_r: f64,
    pub beta_t_prime: f64,
    pub beta_r_prime: f64,
    pub two_q: i32,
    pub theta: f64,
    /// Origin of the reflected-arm angles after offset calibration; the
    /// calibrated angles are `β_r − r_origin`, `β′_r − r_origin`.
    pub r_origin: f64,
}

impl ChshSettings {
    pub fn new(two_q: i32, betas: [f64; 4]) -> Result<Self, BellError> {
        if two_q == 0 {
            return Err(BellError::InvalidSettings("q must be nonzero".into()));
        }
        if betas.iter().any(|b| !b.is_finite()) {
            return Err(BellError::InvalidSettings(format!(
                "non-finite angle in {betas:?}"
            )));
        }
        let [beta_t, beta_r, beta_t_prime, beta_r_prime] = betas;
        Ok(Self {
            beta_t,
            beta_r,
            beta_t_prime,
            beta_r_prime,
            two_q,
            theta: 0.0,
            r_origin: 0.0,
        })
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Evenly spaced pattern `(0, s, 2s, 3s)` with `s = π/(16q)`.
    pub fn standard(two_q: i32) -> Result<Self, BellError> {
        let s = spacing(two_q);
        Self::new(two_q, [0.0, s, 2.0 * s, 3.0 * s])
    }

    /// Standard pattern with the reflected arm shifted so that a fringe
    /// `cos²(2qΔ + δ₀)` behaves like the offset-free `cos²(2qΔ)`.
    pub fn calibrated(two_q: i32, delta0: f64) -> Result<Self, BellError> {
        Self::standard(two_q).map(|s| s.with_r_offset(delta0 / f64::from(two_q)))
    }

    /// Shifts the reflected-arm angles and their calibrated origin together.
    pub fn with_r_offset(mut self, offset: f64) -> Self {
        self.beta_r += offset;
        self.beta_r_prime += offset;
        self.r_origin += offset;
        self
    }

    pub fn betas(&self) -> [f64; 4] {
        [
            self.beta_t,
            self.beta_r,
            self.beta_t_prime,
            self.beta_r_prime,
        ]
    }

    /// `(β_t, β_r)` pairs in CHSH order: `(t,r)`, `(t,r′)`, `(t′,r)`, `(t′,r′)`.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.beta_t, self.beta_r),
            (self.beta_t, self.beta_r_prime),
            (self.beta_t_prime, self.beta_r),
            (self.beta_t_prime, self.beta_r_prime),
        ]
    }

    /// Signs of the correlators in `S`.
    pub const SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

    /// Consecutive differences `β_r − β_t`, `β′_t − β_r`, `β′_r − β′_t`.
    pub fn spacings(&self) -> [f64; 3] {
        [
            self.beta_r - self.beta_t,
            self.beta_t_prime - self.beta_r,
            self.beta_r_prime - self.beta_t_prime,
        ]
    }

    /// Angles measured from the calibrated origin.
    pub fn calibrated_betas(&self) -> [f64; 4] {
        [
            self.beta_t,
            self.beta_r - self.r_origin,
            self.beta_t_prime,
            self.beta_r_prime - self.r_origin,
        ]
    }

    /// Consecutive differences of [`Self::calibrated_betas`].
    pub fn calibrated_spacings(&self) -> [f64; 3] {
        let [a, b, c, d] = self.calibrated_betas();
        [b - a, c - b, d - c]
    }

    pub fn arm(&self) -> ArmConfig {
        ArmConfig::new(self.two_q, self.theta)
    }
}

/// Standard CHSH spacing `π/(16q)`.
pub fn spacing(two_q: i32) -> f64 {
    PI / (8.0 * f64::from(two_q))
}

/// Result of fitting `A[V cos²(2qΔ + δ₀) + (1 − V)/2]` to fringe samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringeFit {
    pub visibility: f64,
    pub offset_delta0: f64,
    pub period: f64,
    /// Maximum of the fitted curve, `A(1 + V)/2`.
    pub peak: f64,
    pub residual_rms: f64,
}

/// Per-arm composite basis modes `(ξ_t, η_t, ξ_r, η_r)` for a transmitted charge.
pub fn composite_modes(two_q: i32) -> ([SpinOrbitMode; 2], [SpinOrbitMode; 2]) {
    (
        [
            SpinOrbitMode::new(SpinLabel::R, two_q),
            SpinOrbitMode::new(SpinLabel::L, -two_q),
        ],
        [
            SpinOrbitMode::new(SpinLabel::R, -two_q),
            SpinOrbitMode::new(SpinLabel::L, two_q),
        ],
    )
}

/// Diagonal block amplitudes `(M_ξξ, M_ηη)` of `joint` for the charge `two_q`.
pub fn block_amplitudes(joint: &BiphotonState, two_q: i32) -> (Complex64, Complex64) {
    let ([xt, et], [xr, er]) = composite_modes(two_q);
    (joint.amplitude(xt, xr), joint.amplitude(et, er))
}

/// Fringe offset `δ₀ ∈ (−π/2, π/2]` read off the block phases.
pub fn fringe_offset(joint: &BiphotonState, two_q: i32) -> Result<f64, BellError> {
    let (a, b) = block_amplitudes(joint, two_q);
    if a.norm() < PRUNE_THRESHOLD || b.norm() < PRUNE_THRESHOLD {
        // a single surviving term gives a flat fringe; any offset works
        if a.norm() < PRUNE_THRESHOLD && b.norm() < PRUNE_THRESHOLD {
            return Err(BellError::DegenerateNormalization);
        }
        return Ok(0.0);
    }
    Ok(wrap_offset((a * b.conj()).arg() / 2.0))
}

/// Fringe visibility predicted by the block, `2|M_ξξ||M_ηη| / (|M_ξξ|² + |M_ηη|²)`.
pub fn block_visibility(joint: &BiphotonState, two_q: i32) -> Result<f64, BellError> {
    let (a, b) = block_amplitudes(joint, two_q);
    let den = a.norm_sqr() + b.norm_sqr();
    if den == 0.0 {
        return Err(BellError::DegenerateNormalization);
    }
    Ok(2.0 * a.norm() * b.norm() / den)
}

/// Wraps an offset into `(−π/2, π/2]`, snapping values within 1e-9 of `−π/2`
/// to `+π/2` so that round-off cannot flip the reported branch.
fn wrap_offset(d: f64) -> f64 {
    let mut d = d - PI * (d / PI).round();
    if d <= -PI / 2.0 + 1e-9 {
        d += PI;
    }
    d
}

/// Normalized state of the reflected photon once the transmitted one is
/// detected by `a_t`.
pub fn collapse_partner(joint: &BiphotonState, a_t: &Analyzer) -> Result<PhotonState, BellError> {
    let bra = analyzer_state(a_t, joint.m_max())?;
    partial_inner(&bra, joint)
        .normalized()
        .map_err(|_| BellError::OrthogonalAnalyzer)
}

/// Unnormalized coincidence probability `|⟨a_t ⊗ a_r|joint⟩|²`.
pub fn coincidence_probability(
    joint: &BiphotonState,
    a_t: &Analyzer,
    a_r: &Analyzer,
) -> Result<f64, BellError> {
    let st = analyzer_state(a_t, joint.m_max())?;
    let sr = analyzer_state(a_r, joint.m_max())?;
    let mut amp = Complex64::new(0.0, 0.0);
    for (kt, at) in st.iter() {
        for (kr, ar) in sr.iter() {
            amp += at.conj() * ar.conj() * joint.amplitude(kt, kr);
        }
    }
    Ok(amp.norm_sqr())
}

/// Analytic fringe maximum `(|M_ξξ| + |M_ηη|)²/4` used to normalize coincidences.
/// For the hyperentangled source this is `(C_{+2q} + C_{−2q})²/8`.
pub fn coincidence_peak(joint: &BiphotonState, two_q: i32) -> Result<f64, BellError> {
    let (a, b) = block_amplitudes(joint, two_q);
    let peak = (a.norm() + b.norm()).powi(2) / 4.0;
    if peak < PRUNE_THRESHOLD * PRUNE_THRESHOLD {
        return Err(BellError::DegenerateNormalization);
    }
    Ok(peak)
}

/// Coincidence rate normalized so that the fringe peak is exactly 1.
pub fn coincidence(
    joint: &BiphotonState,
    a_t: &Analyzer,
    a_r: &Analyzer,
) -> Result<f64, BellError> {
    let peak = coincidence_peak(joint, a_t.two_q)?;
    Ok(coincidence_probability(joint, a_t, a_r)? / peak)
}

/// Coincidence for the conjugate configuration at `(β_t, β_r)`.
pub fn conjugate_coincidence(
    joint: &BiphotonState,
    cfg: ArmConfig,
    beta_t: f64,
    beta_r: f64,
) -> Result<f64, BellError> {
    let (t, r) = cfg.analyzers(beta_t, beta_r);
    coincidence(joint, &t, &r)
}

/// The four normalized coincidences entering one correlator, ordered
/// `C(β_t,β_r)`, `C(β̄_t,β̄_r)`, `C(β_t,β̄_r)`, `C(β̄_t,β_r)`.
pub fn correlator_terms(
    joint: &BiphotonState,
    cfg: ArmConfig,
    beta_t: f64,
    beta_r: f64,
) -> Result<[f64; 4], BellError> {
    let bt = beta_bar(beta_t, cfg.two_q);
    let br = beta_bar(beta_r, cfg.two_q);
    Ok([
        conjugate_coincidence(joint, cfg, beta_t, beta_r)?,
        conjugate_coincidence(joint, cfg, bt, br)?,
        conjugate_coincidence(joint, cfg, beta_t, br)?,
        conjugate_coincidence(joint, cfg, bt, beta_r)?,
    ])
}

/// Correlator `E = [C + C̄̄ − C_{·̄} − C_{̄·}] / [sum of the four]`.
pub fn correlation_e(
    joint: &BiphotonState,
    cfg: ArmConfig,
    beta_t: f64,
    beta_r: f64,
) -> Result<f64, BellError> {
    let [a, b, c, d] = correlator_terms(joint, cfg, beta_t, beta_r)?;
    let den = a + b + c + d;
    if den <= 0.0 {
        return Err(BellError::DegenerateNormalization);
    }
    Ok((a + b - c - d) / den)
}

/// `S = E(β_t,β_r) − E(β_t,β′_r) + E(β′_t,β_r) + E(β′_t,β′_r)`.
pub fn chsh_s(joint: &BiphotonState, s: &ChshSettings) -> Result<f64, BellError> {
    let cfg = s.arm();
    s.pairs()
        .iter()
        .zip(ChshSettings::SIGNS)
        .map(|(&(bt, br), sign)| correlation_e(joint, cfg, bt, br).map(|e| sign * e))
        .sum()
}

/// Projects onto the composite 2×2 subspace selected by the analyzers of
/// charge `two_q` and renormalizes.
pub fn postselect_bell(joint: &BiphotonState, two_q: i32) -> Result<BiphotonState, BellError> {
    let (t_modes, r_modes) = composite_modes(two_q);
    joint
        .restricted(&t_modes, &r_modes)
        .normalized()
        .map_err(|_| BellError::EmptyProjection)
}

/// Singular values of the 2×2 amplitude matrix, descending.
pub fn schmidt_coefficients(b: &BiphotonState) -> Result<(f64, f64), BellError> {
    let mut t_modes: Vec<SpinOrbitMode> = Vec::new();
    let mut r_modes: Vec<SpinOrbitMode> = Vec::new();
    for ((t, r), _) in b.iter() {
        if !t_modes.contains(&t) {
            t_modes.push(t);
        }
        if !r_modes.contains(&r) {
            r_modes.push(r);
        }
    }
    if t_modes.len() > 2 || r_modes.len() > 2 || b.is_zero() {
        return Err(BellError::UnsupportedShape {
            t: t_modes.len(),
            r: r_modes.len(),
        });
    }
    let entry = |i: usize, j: usize| match (t_modes.get(i), r_modes.get(j)) {
        (Some(t), Some(r)) => b.amplitude(*t, *r),
        _ => Complex64::new(0.0, 0.0),
    };
    let m = [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]];
    // Eigenvalues of the Hermitian Gram matrix G = M M†, written without
    // cancellation in the discriminant.
    let g00 = m[0][0].norm_sqr() + m[0][1].norm_sqr();
    let g11 = m[1][0].norm_sqr() + m[1][1].norm_sqr();
    let g01 = m[0][0] * m[1][0].conj() + m[0][1] * m[1][1].conj();
    let half_sum = (g00 + g11) / 2.0;
    let disc = ((g00 - g11) / 2.0).hypot(g01.norm());
    let hi = (half_sum + disc).max(0.0).sqrt();
    let lo = (half_sum - disc).max(0.0).sqrt();
    Ok((hi, lo))
}

/// Samples the conjugate-configuration fringe at `steps` evenly spaced values
/// of `Δ = β_t − β_r` over `[0, span)`, with `β_r = 0`.
pub fn fringe_scan(
    joint: &BiphotonState,
    cfg: ArmConfig,
    steps: usize,
    span: f64,
) -> Result<Vec<(f64, f64)>, BellError> {
    (0..steps)
        .map(|k| {
            let delta = span * k as f64 / steps as f64;
            conjugate_coincidence(joint, cfg, delta, 0.0).map(|c| (delta, c))
        })
        .collect()
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

/// Grid scan over `[0, len)` with step `resolution` followed by golden-section
/// refinement around the best grid point. Returns the argmax.
fn scan_and_refine<F>(f: F, start: f64, len: f64, resolution: f64) -> Result<f64, BellError>
where
    F: Fn(f64) -> Result<f64, BellError>,
{
    let steps = (len.abs() / resolution).ceil().max(1.0) as usize;
    let step = len / steps as f64;
    let mut best = (start, f64::NEG_INFINITY);
    for k in 0..steps {
        let x = start + step * k as f64;
        let v = f(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    let (lo, hi) = if step > 0.0 {
        (best.0 - step, best.0 + step)
    } else {
        (best.0 + step, best.0 - step)
    };
    let objective = |x: f64| f(x).unwrap_or(f64::NEG_INFINITY);
    let refined = golden_max(objective, lo, hi, REFINE_TOLERANCE);
    Ok(if objective(refined) >= best.1 {
        refined
    } else {
        best.0
    })
}

/// Searches CHSH settings for the largest `S`.
///
/// Every correlator produced by a pure state here is a pure cosine of
/// `4q(β_t − β_r)`, so the search runs over the calibrated family
/// `(0, s − Δ₀, 2s, 3s − Δ₀)`: first the correlator peak `Δ₀` is located on a
/// grid and refined, then the spacing `s` (taken with the sign of `q`). The
/// result is never worse than the standard spacing `π/(16q)` at the analytic
/// offset.
pub fn optimize_chsh(
    joint: &BiphotonState,
    two_q: i32,
    resolution: f64,
) -> Result<(ChshSettings, f64), BellError> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(BellError::InvalidSettings(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    if two_q == 0 {
        return Err(BellError::InvalidSettings("q must be nonzero".into()));
    }
    let cfg = ArmConfig::new(two_q, 0.0);
    // correlators repeat with period π/(2|q|)
    let e_period = cfg.fringe_period();
    let peak = scan_and_refine(
        |d| correlation_e(joint, cfg, d, 0.0),
        0.0,
        e_period,
        resolution,
    )?;
    let settings_for = |s: f64| {
        ChshSettings::new(two_q, [0.0, s, 2.0 * s, 3.0 * s]).map(|st| st.with_r_offset(-peak))
    };
    let sign = f64::from(two_q.signum());
    let best_s = scan_and_refine(
        |s| chsh_s(joint, &settings_for(s)?),
        0.0,
        sign * e_period / 2.0,
        resolution,
    )?;
    let found = settings_for(best_s)?;
    let found_value = chsh_s(joint, &found)?;

    let reference = ChshSettings::calibrated(two_q, fringe_offset(joint, two_q)?)?;
    let reference_value = chsh_s(joint, &reference)?;
    Ok(if found_value >= reference_value {
        (found, found_value)
    } else {
        (reference, reference_value)
    })
}

/// Least-squares fit of `A[V cos²(2qΔ + δ₀) + (1 − V)/2]` to `(Δ, C)` samples.
///
/// The fringe frequency is estimated from the data (a three-term recurrence
/// on evenly spaced samples, or a periodogram scan otherwise) and then refined
/// together with the linear coefficients by Gauss-Newton.
///
/// Flat data has no defined period; it is reported as
/// [`BellError::IllConditionedFit`] with visibility 0.
pub fn fringe_fit(samples: &[(f64, f64)]) -> Result<FringeFit, BellError> {
    const MIN_SAMPLES: usize = 8;
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if pts.len() < MIN_SAMPLES {
        return Err(BellError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: pts.len(),
        });
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.1), hi.max(p.1))
        });
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    if hi - lo <= 1e-12 * scale {
        return Err(BellError::IllConditionedFit { visibility: 0.0 });
    }

    let omega0 = recurrence_frequency(&pts).unwrap_or_else(|| periodogram_frequency(&pts));
    let (a, b, c, omega, rms) = gauss_newton(&pts, omega0);
    if !(a > 0.0) || !(omega > 0.0) {
        return Err(BellError::IllConditionedFit { visibility: 0.0 });
    }
    let amp = b.hypot(c);
    let psi = c.atan2(b);
    Ok(FringeFit {
        visibility: amp / a,
        offset_delta0: wrap_offset(-psi / 2.0),
        period: 2.0 * PI / omega,
        peak: a + amp,
        residual_rms: rms,
    })
}

/// Frequency from the recurrence `d_{k+1} + d_{k−1} = 2cos(ωh) d_k` obeyed by
/// first differences of a sampled sinusoid. Requires uniform spacing.
fn recurrence_frequency(pts: &[(f64, f64)]) -> Option<f64> {
    let h = pts[1].0 - pts[0].0;
    if !(h > 0.0) {
        return None;
    }
    let uniform = pts
        .windows(2)
        .all(|w| ((w[1].0 - w[0].0) - h).abs() <= 1e-9 * h.max(1.0));
    if !uniform {
        return None;
    }
    let d: Vec<f64> = pts.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for k in 1..d.len() - 1 {
        num += d[k] * (d[k + 1] + d[k - 1]);
        den += 2.0 * d[k] * d[k];
    }
    if den == 0.0 {
        return None;
    }
    let cos_wh = (num / den).clamp(-1.0, 1.0);
    let omega = cos_wh.acos() / h;
    (omega > 0.0).then_some(omega)
}

fn periodogram_frequency(pts: &[(f64, f64)]) -> f64 {
    let span = pts.last().unwrap().0 - pts[0].0;
    let min_step = pts
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .filter(|s| *s > 0.0)
        .fold(f64::INFINITY, f64::min);
    let base = PI / span;
    let top = PI / min_step;
    let mut best = (base, f64::INFINITY);
    let mut omega = base;
    while omega <= top {
        let (_, _, _, rss) = linear_fit(pts, omega);
        if rss < best.1 {
            best = (omega, rss);
        }
        omega += base / 8.0;
    }
    best.0
}

/// Linear least squares of `a + b cos ωx + c sin ωx`; returns `(a, b, c, rss)`.
fn linear_fit(pts: &[(f64, f64)], omega: f64) -> (f64, f64, f64, f64) {
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for &(x, y) in pts {
        let row = [1.0, (omega * x).cos(), (omega * x).sin()];
        for i in 0..3 {
            aty[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let sol = solve::<3>(ata, aty).unwrap_or([0.0; 3]);
    let rss = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - sol[0] - sol[1] * (omega * x).cos() - sol[2] * (omega * x).sin();
            r * r
        })
        .sum();
    (sol[0], sol[1], sol[2], rss)
}

fn gauss_newton(pts: &[(f64, f64)], omega0: f64) -> (f64, f64, f64, f64, f64) {
    let (mut a, mut b, mut c, mut rss) = linear_fit(pts, omega0);
    let mut omega = omega0;
    for _ in 0..100 {
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for &(x, y) in pts {
            let (s, co) = (omega * x).sin_cos();
            let r = y - (a + b * co + c * s);
            let row = [1.0, co, s, x * (c * co - b * s)];
            for i in 0..4 {
                jtr[i] += row[i] * r;
                for j in 0..4 {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }
        let Some(step) = solve::<4>(jtj, jtr) else {
            break;
        };
        let trial = omega + step[3];
        if !(trial > 0.0) {
            break;
        }
        let (ta, tb, tc, trss) = linear_fit(pts, trial);
        if trss > rss {
            break;
        }
        let done = step[3].abs() <= 1e-15 * omega.max(1.0) || trss == rss;
        (a, b, c, rss, omega) = (ta, tb, tc, trss, trial);
        if done {
            break;
        }
    }
    (a, b, c, omega, (rss / pts.len() as f64).sqrt())
}

/// Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut m: [[f64; N]; N], mut v: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (v[row] - tail) / m[row][row];
    }
    Some(x)
}

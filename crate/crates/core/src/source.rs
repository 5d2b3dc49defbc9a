//! The down-converted photon pair: polarization Bell state after the beam
//! splitter, OAM anti-correlated spectrum, and their hyperentangled product.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::hilbert::{
    pol_components, BiphotonState, HilbertError, LinearPol, SpinOrbitMode, NORM_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SourceError {
    #[error("invalid spectrum parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumShape {
    Flat,
    Gaussian,
}

impl std::str::FromStr for SpectrumShape {
    type Err = SourceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(Self::Flat),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(SourceError::InvalidParameter(format!(
                "unknown spectrum shape `{other}`"
            ))),
        }
    }
}

/// OAM correlation spectrum `C_m` of the pair, `Σ_m C_m |m⟩_t |−m⟩_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct OamSpectrum {
    m_max: u32,
    coefficients: BTreeMap<i32, Complex64>,
    description: String,
}

impl OamSpectrum {
    /// Normalizes arbitrary coefficients. Entries outside `|m| <= m_max` are
    /// rejected; missing entries are zero.
    ///
    /// Asymmetric spectra (`C_m ≠ C_{−m}`) are allowed; they reduce the
    /// post-selected fringe visibility and are used to study that degradation.
    pub fn from_coefficients<I>(m_max: u32, coefficients: I) -> Result<Self, SourceError>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in coefficients {
            if m.unsigned_abs() > m_max {
                return Err(SourceError::InvalidParameter(format!(
                    "coefficient index {m} outside m_max = {m_max}"
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(SourceError::InvalidParameter(format!(
                    "non-finite coefficient at m = {m}"
                )));
            }
            *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let norm = map.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(SourceError::InvalidParameter(
                "spectrum has no weight".to_string(),
            ));
        }
        for c in map.values_mut() {
            *c /= norm;
        }
        Ok(Self {
            m_max,
            coefficients: map,
            description: format!("custom(m_max={m_max})"),
        })
    }

    /// Real two-sided spectrum with `C_{+m}:C_{−m} = plus:minus` and nothing else.
    pub fn two_mode(m_max: u32, m: i32, plus: f64, minus: f64) -> Result<Self, SourceError> {
        let mut s = Self::from_coefficients(
            m_max,
            [
                (m, Complex64::new(plus, 0.0)),
                (-m, Complex64::new(minus, 0.0)),
            ],
        )?;
        s.description = format!("two_mode(m=±{}, ratio={plus}:{minus})", m.abs());
        Ok(s)
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn coefficient(&self, m: i32) -> Complex64 {
        self.coefficients.get(&m).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coefficients.iter().map(|(m, c)| (*m, *c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.coefficients
            .iter()
            .all(|(m, c)| (self.coefficient(-m) - c).norm() <= NORM_TOLERANCE)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Display for OamSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

/// Flat or Gaussian symmetric spectrum over `|m| <= m_max`.
/// `sigma` is ignored for the flat shape.
pub fn make_spectrum(
    shape: SpectrumShape,
    m_max: u32,
    sigma: f64,
) -> Result<OamSpectrum, SourceError> {
    if m_max < 1 {
        return Err(SourceError::InvalidParameter("m_max must be >= 1".into()));
    }
    let m = m_max as i32;
    let mut spec = match shape {
        SpectrumShape::Flat => {
            OamSpectrum::from_coefficients(m_max, (-m..=m).map(|k| (k, Complex64::new(1.0, 0.0))))?
        }
        SpectrumShape::Gaussian => {
            if !(sigma > 0.0) || !sigma.is_finite() {
                return Err(SourceError::InvalidParameter(format!(
                    "sigma must be positive and finite, got {sigma}"
                )));
            }
            let w = |k: i32| (-(f64::from(k).powi(2)) / (2.0 * sigma * sigma)).exp();
            OamSpectrum::from_coefficients(m_max, (-m..=m).map(|k| (k, Complex64::new(w(k), 0.0))))?
        }
    };
    spec.description = match shape {
        SpectrumShape::Flat => format!("flat(m_max={m_max})"),
        SpectrumShape::Gaussian => format!("gaussian(m_max={m_max}, sigma={sigma})"),
    };
    Ok(spec)
}

/// `(|H⟩_t|V⟩_r + |V⟩_t|H⟩_r)/√2` on `m = 0 ⊗ m = 0`, which in the circular
/// basis reads `i(|RR⟩ − |LL⟩)/√2`.
pub fn spin_bell_state(m_max: u32) -> BiphotonState {
    spin_bell_with_oam(m_max, [(0, Complex64::new(1.0, 0.0))])
        .expect("m = 0 is always inside the truncation")
}

fn spin_bell_with_oam<I>(m_max: u32, oam: I) -> Result<BiphotonState, HilbertError>
where
    I: IntoIterator<Item = (i32, Complex64)>,
{
    let h = pol_components(LinearPol::H);
    let v = pol_components(LinearPol::V);
    let norm = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut terms = Vec::new();
    for (m, cm) in oam {
        for (first, second) in [(&h, &v), (&v, &h)] {
            for (st, at) in first {
                for (sr, ar) in second {
                    terms.push((
                        (SpinOrbitMode::new(*st, m), SpinOrbitMode::new(*sr, -m)),
                        norm * cm * at * ar,
                    ));
                }
            }
        }
    }
    BiphotonState::from_terms(m_max, terms)
}

/// `|Ψ⟩_spin ⊗ Σ_m C_m |m⟩_t|−m⟩_r`.
pub fn hyper_state(spec: &OamSpectrum) -> BiphotonState {
    spin_bell_with_oam(spec.m_max, spec.iter()).expect("spectrum respects its own truncation")
}

//! Exact simulation of spin-orbit photon states.
//!
//! Photons are described by their circular spin and orbital angular momentum.
//! q-plates couple the two, turning a uniformly polarized beam into a
//! cylindrical vector beam and, on the detection side, turning a spin-orbit
//! hyperentangled down-converted pair into a two-dimensional Bell state over
//! composite spin-orbit modes.
//!
//! - [`hilbert`]: sparse single- and two-photon state vectors.
//! - [`devices`]: q-plate, half-wave plate, polarizer and analyzer states.
//! - [`source`]: polarization Bell state, OAM spectrum, hyperentangled pair.
//! - [`bell`]: coincidences, post-selection, correlators and CHSH.
//! - [`vectorfield`]: polarization direction patterns of q-plate beams.
//! - [`stochastic`]: finite-count CHSH estimates.
//! - [`cli`]: the `spinorbit` command-line front end.
//!
//! ```
//! use spinorbit::bell::{optimize_chsh, DEFAULT_RESOLUTION};
//! use spinorbit::source::{hyper_state, make_spectrum, SpectrumShape};
//!
//! let joint = hyper_state(&make_spectrum(SpectrumShape::Flat, 8, 0.0).unwrap());
//! let (_, s) = optimize_chsh(&joint, 2, DEFAULT_RESOLUTION).unwrap();
//! assert!((s - 2.0 * 2f64.sqrt()).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used deliberately so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod cli;
pub mod devices;
pub mod hilbert;
pub mod source;
pub mod stochastic;
pub mod vectorfield;

pub use bell::{ArmConfig, BellError, ChshSettings, FringeFit};
pub use devices::{Analyzer, DeviceError, QPlate};
pub use hilbert::{BiphotonState, HilbertError, LinearPol, PhotonState, SpinLabel, SpinOrbitMode};
pub use source::{OamSpectrum, SpectrumShape};

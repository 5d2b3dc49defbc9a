//! The two-qubit state left after both photons pass matching analyzers,
//! and its Schmidt coefficients.
//!
//!     cargo run --example postselected_bell

use spinorbit::bell::{postselect_bell, schmidt_coefficients};
use spinorbit::source::{hyper_state, make_spectrum, OamSpectrum, SpectrumShape};

fn main() {
    let m_max = 8;
    let spectra = [
        make_spectrum(SpectrumShape::Flat, m_max, 0.0).unwrap(),
        make_spectrum(SpectrumShape::Gaussian, m_max, 1.0).unwrap(),
        OamSpectrum::two_mode(m_max, 2, 1.0, 3.0).unwrap(),
        OamSpectrum::two_mode(m_max, 2, 1.0, 2.0).unwrap(),
    ];
    for spec in &spectra {
        println!("{spec}");
        let joint = hyper_state(spec);
        for two_q in [1, 2] {
            match postselect_bell(&joint, two_q) {
                Ok(bell) => {
                    let (hi, lo) = schmidt_coefficients(&bell).unwrap();
                    println!("  2q = {two_q}: Schmidt ({hi:.4}, {lo:.4})");
                    for ((t, r), c) in bell.iter() {
                        println!("      ({:+.4}{:+.4}i) {t}{r}", c.re, c.im);
                    }
                }
                Err(e) => println!("  2q = {two_q}: {e}"),
            }
        }
    }
}

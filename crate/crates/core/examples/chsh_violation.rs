//! CHSH parameter for the standard settings and after optimization, for a
//! range of q-plate charges and source spectra.
//!
//!     cargo run --release --example chsh_violation

use std::f64::consts::SQRT_2;

use spinorbit::bell::{chsh_s, fringe_offset, optimize_chsh, ChshSettings, DEFAULT_RESOLUTION};
use spinorbit::source::{hyper_state, make_spectrum, OamSpectrum, SpectrumShape};

fn main() {
    let joint = hyper_state(&make_spectrum(SpectrumShape::Flat, 8, 0.0).unwrap());
    println!("Tsirelson bound 2√2 = {:.12}", 2.0 * SQRT_2);
    for two_q in [1, 2, 3, 4, -1, -3] {
        let standard = ChshSettings::standard(two_q).unwrap();
        let calibrated =
            ChshSettings::calibrated(two_q, fringe_offset(&joint, two_q).unwrap()).unwrap();
        let (best, s_best) = optimize_chsh(&joint, two_q, DEFAULT_RESOLUTION).unwrap();
        println!(
            "2q = {two_q:>2}: S(uncalibrated) = {:+.6}  S(calibrated) = {:.12}  S(optimized) = {s_best:.12}",
            chsh_s(&joint, &standard).unwrap(),
            chsh_s(&joint, &calibrated).unwrap(),
        );
        let [a, b, c] = best.calibrated_spacings();
        println!(
            "        spacings {a:.6} {b:.6} {c:.6}  (π/(16q) = {:.6})",
            std::f64::consts::PI / (8.0 * f64::from(two_q))
        );
    }

    println!("\nimbalanced spectra, 2q = 2:");
    for ratio in [1.0, 2.0, 3.0] {
        let joint = hyper_state(&OamSpectrum::two_mode(8, 2, 1.0, ratio).unwrap());
        let (_, s) = optimize_chsh(&joint, 2, DEFAULT_RESOLUTION).unwrap();
        println!(
            "  1:{ratio}  S = {s:.6}  ({:.3} of 2√2)",
            s / (2.0 * SQRT_2)
        );
    }
}

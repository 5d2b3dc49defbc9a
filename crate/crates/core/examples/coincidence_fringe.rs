//! Coincidence fringes between conjugate analyzers and a fit of their
//! visibility, period and offset.
//!
//!     cargo run --example coincidence_fringe

use spinorbit::bell::{fringe_fit, fringe_scan, ArmConfig};
use spinorbit::source::{hyper_state, make_spectrum, OamSpectrum, SpectrumShape};

fn bar(c: f64) -> String {
    "#".repeat((c * 40.0).round() as usize)
}

fn main() {
    let joint = hyper_state(&make_spectrum(SpectrumShape::Flat, 8, 0.0).unwrap());
    let cfg = ArmConfig::new(2, 0.0);
    let period = cfg.fringe_period();
    println!("q = 1, one fringe period π/2 in 16 steps:");
    for (delta, c) in fringe_scan(&joint, cfg, 16, period).unwrap() {
        println!("  Δ={delta:.3}  {c:.3} {}", bar(c));
    }

    println!("\nfits over two periods:");
    for two_q in [1, 2, 3, -4] {
        let cfg = ArmConfig::new(two_q, 0.7);
        let samples = fringe_scan(&joint, cfg, 360, 2.0 * cfg.fringe_period()).unwrap();
        let fit = fringe_fit(&samples).unwrap();
        println!(
            "  2q = {two_q:>2}: V = {:.6}  period = {:.6} (π/|2q| = {:.6})  δ₀ = {:.6}",
            fit.visibility,
            fit.period,
            cfg.fringe_period(),
            fit.offset_delta0
        );
    }

    // Unequal weights of the two OAM partners wash the fringe out.
    println!("\nvisibility vs C(+2):C(-2):");
    for ratio in [1.0, 2.0, 3.0, 10.0] {
        let joint = hyper_state(&OamSpectrum::two_mode(8, 2, 1.0, ratio).unwrap());
        let cfg = ArmConfig::new(2, 0.0);
        let samples = fringe_scan(&joint, cfg, 360, 2.0 * cfg.fringe_period()).unwrap();
        let fit = fringe_fit(&samples).unwrap();
        println!("  1:{ratio:<4} V = {:.6}", fit.visibility);
    }
}

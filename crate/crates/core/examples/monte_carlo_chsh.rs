//! Finite-count CHSH estimates and how their error bars shrink with the
//! number of detected pairs.
//!
//!     cargo run --release --example monte_carlo_chsh

use spinorbit::bell::{chsh_s, fringe_offset, ChshSettings};
use spinorbit::source::{hyper_state, make_spectrum, SpectrumShape};
use spinorbit::stochastic::estimate_s;

fn main() {
    let joint = hyper_state(&make_spectrum(SpectrumShape::Flat, 8, 0.0).unwrap());
    let settings = ChshSettings::calibrated(2, fringe_offset(&joint, 2).unwrap()).unwrap();
    let exact = chsh_s(&joint, &settings).unwrap();
    println!("exact S = {exact:.6}");
    for n in [100, 1_000, 10_000, 100_000, 1_000_000] {
        let est = estimate_s(&joint, &settings, n, 42).unwrap();
        println!(
            "N = {n:>8}: Ŝ = {:.4} ± {:.4}  ({:+.1}σ from exact, {:.1}σ above 2)",
            est.s_hat,
            est.stderr,
            (est.s_hat - exact) / est.stderr,
            (est.s_hat - 2.0) / est.stderr,
        );
    }

    let est = estimate_s(&joint, &settings, 10_000, 7).unwrap();
    println!("\ncounts at N = 10000, seed 7 (ββ, β̄β̄, ββ̄, β̄β):");
    for (row, e) in est.table.counts.iter().zip(est.correlators) {
        println!("  {row:?}  E = {e:+.4}");
    }
}

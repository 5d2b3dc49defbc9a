//! Down-conversion source entangled in spin and orbital angular momentum.
//!
//!     cargo run --example hyperentangled_source

use spinorbit::bell::block_visibility;
use spinorbit::hilbert::{SpinLabel, SpinOrbitMode};
use spinorbit::source::{hyper_state, make_spectrum, spin_bell_state, OamSpectrum, SpectrumShape};

fn main() {
    let m_max = 4;
    for spectrum in [
        make_spectrum(SpectrumShape::Flat, m_max, 0.0).unwrap(),
        make_spectrum(SpectrumShape::Gaussian, m_max, 1.5).unwrap(),
        OamSpectrum::two_mode(m_max, 2, 1.0, 3.0).unwrap(),
    ] {
        let joint = hyper_state(&spectrum);
        println!(
            "{spectrum}: {} two-photon terms, norm² {:.15}",
            joint.support_len(),
            joint.norm_sqr()
        );
        for (m, c) in spectrum.iter() {
            print!("  C({m:+})={:.3}", c.re);
        }
        println!();
        match block_visibility(&joint, 2) {
            Ok(v) => println!("  fringe visibility seen by q = 1 analyzers: {v:.4}"),
            Err(e) => println!("  q = 1 analyzers see nothing: {e}"),
        }
    }

    // Fixing the orbital part of both photons leaves the spin Bell state.
    let joint = hyper_state(&make_spectrum(SpectrumShape::Flat, m_max, 0.0).unwrap());
    let m = 1;
    let modes = |spin_m: i32| {
        [
            SpinOrbitMode::new(SpinLabel::R, spin_m),
            SpinOrbitMode::new(SpinLabel::L, spin_m),
        ]
    };
    let slice = joint.restricted(&modes(m), &modes(-m));
    let shifted = spin_bell_state(m_max);
    let slice_at_zero = spinorbit::BiphotonState::from_terms(
        m_max,
        slice
            .iter()
            .map(|((t, r), c)| {
                (
                    (SpinOrbitMode::new(t.spin, 0), SpinOrbitMode::new(r.spin, 0)),
                    c,
                )
            })
            .collect::<Vec<_>>(),
    )
    .unwrap()
    .normalized()
    .unwrap();
    let overlap = slice_at_zero.inner(&shifted).norm_sqr();
    println!("\nOAM slice m = ±{m} vs spin Bell state: |⟨·|·⟩|² = {overlap:.15}");
}

//! q-plate action on circular modes and the states selected by a
//! q-plate / waveplate / polarizer analyzer.
//!
//!     cargo run --example qplate_analyzer

use std::f64::consts::FRAC_PI_4;

use spinorbit::devices::{analyzer_state, analyzer_state_chain, hwp_apply, Analyzer, QPlate};
use spinorbit::hilbert::{fidelity, LinearPol, PhotonState, SpinLabel};

fn show(label: &str, s: &PhotonState) {
    let terms: Vec<String> = s
        .iter()
        .map(|(mode, c)| format!("({:+.3}{:+.3}i){mode}", c.re, c.im))
        .collect();
    println!("  {label:<28} {}", terms.join(" + "));
}

fn main() {
    let m_max = 8;
    let plate = QPlate::new(2).unwrap();
    println!("q = {} plate:", plate.q());
    for spin in [SpinLabel::L, SpinLabel::R] {
        let s = PhotonState::basis(m_max, spin, 0).unwrap();
        show(&format!("{}", s.iter().next().unwrap().0), &s);
        show("  after plate", &plate.apply(&s).unwrap());
    }
    let h = PhotonState::linear(m_max, LinearPol::H, 0).unwrap();
    show("|H,0⟩ after plate", &plate.apply(&h).unwrap());
    show("|H,0⟩ after HWP at π/8", &hwp_apply(FRAC_PI_4 / 2.0, &h));

    println!("\nanalyzer states vs. the device chain:");
    for two_q in [1, 2, 3, -2] {
        for theta in [0.0, FRAC_PI_4, 1.0] {
            let closed = analyzer_state(&Analyzer::new(two_q, theta, 0.0), m_max).unwrap();
            let chain = analyzer_state_chain(two_q, theta, m_max).unwrap();
            println!(
                "  2q = {two_q:>2}  θ = {theta:.3}  fidelity {:.15}",
                fidelity(&closed, &chain)
            );
        }
    }

    let a = Analyzer::new(2, 0.3, 0.2);
    println!();
    show("analyzer (2q=2, θ=0.3, β=0.2)", &a.state(m_max).unwrap());
    show(
        "its conjugate at β=0.2",
        &a.conjugate(0.2).state(m_max).unwrap(),
    );
}

//! Polarization patterns behind a q-plate, drawn as ASCII arrows.
//!
//!     cargo run --example vector_fields

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use spinorbit::vectorfield::{direction_angle, pattern_period};

/// One of `- / | \` for a line at `angle` (polarization is headless).
fn glyph(angle: f64) -> char {
    let a = angle.rem_euclid(PI);
    let bin = ((a / (PI / 4.0)).round() as usize) % 4;
    ['-', '/', '|', '\\'][bin]
}

fn draw(two_q: i32, theta: f64) {
    let n = 11;
    for row in 0..n {
        let y = 1.0 - 2.0 * row as f64 / (n - 1) as f64;
        let line: String = (0..n)
            .map(|col| {
                let x = -1.0 + 2.0 * col as f64 / (n - 1) as f64;
                let r = x.hypot(y);
                if !(0.15..=1.05).contains(&r) {
                    ' '
                } else {
                    glyph(direction_angle(two_q, theta, y.atan2(x)))
                }
            })
            .flat_map(|c| [c, ' '])
            .collect();
        println!("  {line}");
    }
}

fn main() {
    let cases = [
        ("radial (q = 1/2, θ = 0)", 1, 0.0),
        ("azimuthal (q = 1/2, θ = π/2)", 1, FRAC_PI_2),
        ("q = 1, θ = 0", 2, 0.0),
        ("three-fold (q = 3/2, θ = π/4)", 3, FRAC_PI_4),
        ("q = -1/2", -1, 0.0),
    ];
    for (label, two_q, theta) in cases {
        let period = pattern_period(two_q).unwrap();
        println!("{label}: azimuthal period {:.4} rad", period);
        draw(two_q, theta);
        println!();
    }
}

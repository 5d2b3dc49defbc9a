//! Instantaneous polarization direction of a q-plate output beam.
//!
//! A θ-polarized `m = 0` photon leaving a q-plate is linearly polarized at
//! angle `2qφ − θ` at azimuth `φ`, i.e. `(E_x, E_y) = (cos(2qφ − θ), sin(2qφ − θ))`.
//! Only the direction field is modelled; the radial mode profile is not.

use std::f64::consts::TAU;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("q-plate charge must be nonzero")]
    ZeroCharge,
    #[error("invalid grid: {rings} rings x {points} points (need rings >= 1, points >= 4)")]
    InvalidGrid { rings: usize, points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub ex: f64,
    pub ey: f64,
}

/// Local polarization angle `2qφ − θ`.
pub fn direction_angle(two_q: i32, theta: f64, phi: f64) -> f64 {
    f64::from(two_q) * phi - theta
}

pub fn field_at(two_q: i32, theta: f64, phi: f64) -> (f64, f64) {
    let (s, c) = direction_angle(two_q, theta, phi).sin_cos();
    (c, s)
}

/// Polar grid over the unit disk: ring `i` at radius `(i + 1)/rings`, points
/// at `φ_j = 2πj/points_per_ring`. Rows are ring-major.
pub fn sample_field(
    two_q: i32,
    theta: f64,
    rings: usize,
    points_per_ring: usize,
) -> Result<Vec<FieldSample>, FieldError> {
    if two_q == 0 {
        return Err(FieldError::ZeroCharge);
    }
    if rings < 1 || points_per_ring < 4 {
        return Err(FieldError::InvalidGrid {
            rings,
            points: points_per_ring,
        });
    }
    let mut out = Vec::with_capacity(rings * points_per_ring);
    for i in 0..rings {
        let radius = (i + 1) as f64 / rings as f64;
        for j in 0..points_per_ring {
            let phi = TAU * j as f64 / points_per_ring as f64;
            let (ex, ey) = field_at(two_q, theta, phi);
            out.push(FieldSample {
                x: radius * phi.cos(),
                y: radius * phi.sin(),
                ex,
                ey,
            });
        }
    }
    Ok(out)
}

/// Azimuthal period of the pattern, `π/|q| = 2π/|2q|`.
pub fn pattern_period(two_q: i32) -> Result<f64, FieldError> {
    if two_q == 0 {
        return Err(FieldError::ZeroCharge);
    }
    Ok(TAU / f64::from(two_q.unsigned_abs()))
}

/// Direction angles for `(q, θ)` and its conjugate `(−q, −θ)` at the same `φ`.
/// They always sum to zero: the two fields oscillate mirror-opposite.
pub fn conjugate_fields(two_q: i32, theta: f64, phi: f64) -> (f64, f64) {
    (
        direction_angle(two_q, theta, phi),
        direction_angle(-two_q, -theta, phi),
    )
}

/// Writes `x,y,ex,ey` rows with 17 significant digits and LF endings.
pub fn write_csv<W: Write>(samples: &[FieldSample], mut w: W) -> io::Result<()> {
    writeln!(w, "x,y,ex,ey")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            crate::cli::format_f64(s.x),
            crate::cli::format_f64(s.y),
            crate::cli::format_f64(s.ex),
            crate::cli::format_f64(s.ey)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn angle_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn radial_and_azimuthal() {
        let (ex, ey) = field_at(1, 0.0, FRAC_PI_3);
        assert!(angle_diff(ey.atan2(ex), FRAC_PI_3) < 1e-15);
        let (ex, ey) = field_at(1, FRAC_PI_2, 0.0);
        assert!(ex.abs() < 1e-15 && (ey + 1.0).abs() < 1e-15);
        let (ex, ey) = field_at(2, 0.0, PI);
        assert!((ex - 1.0).abs() < 1e-15 && ey.abs() < 1e-15);
    }

    #[test]
    fn small_grid() {
        let s = sample_field(1, 0.0, 1, 4).unwrap();
        assert_eq!(s.len(), 4);
        for p in &s {
            // radial: direction parallel to position on the unit ring
            assert!((p.ex - p.x).abs() < 1e-15 && (p.ey - p.y).abs() < 1e-15);
        }
        assert_eq!(sample_field(1, 0.0, 2, 8).unwrap().len(), 16);
        assert_eq!(
            sample_field(1, 0.0, 0, 8),
            Err(FieldError::InvalidGrid {
                rings: 0,
                points: 8
            })
        );
        assert_eq!(
            sample_field(1, 0.0, 2, 3),
            Err(FieldError::InvalidGrid {
                rings: 2,
                points: 3
            })
        );
        assert_eq!(sample_field(0, 0.0, 2, 8), Err(FieldError::ZeroCharge));
    }

    #[test]
    fn three_fold_pattern() {
        let t = pattern_period(3).unwrap();
        assert!((t - 2.0 * PI / 3.0).abs() < 1e-15);
        for k in 0..24 {
            let phi = f64::from(k) * 0.26;
            let a = field_at(3, FRAC_PI_4, phi);
            let b = field_at(3, FRAC_PI_4, phi + t);
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn periods() {
        assert!((pattern_period(2).unwrap() - PI).abs() < 1e-15);
        assert!((pattern_period(-2).unwrap() - PI).abs() < 1e-15);
        assert!((pattern_period(-3).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((pattern_period(1).unwrap() - TAU).abs() < 1e-15);
        assert_eq!(pattern_period(0), Err(FieldError::ZeroCharge));
    }

    #[test]
    fn conjugate_examples() {
        let (a, b) = conjugate_fields(2, 0.0, FRAC_PI_6);
        assert!((a - FRAC_PI_3).abs() < 1e-15 && (b + FRAC_PI_3).abs() < 1e-15);
        let (a, b) = conjugate_fields(3, FRAC_PI_4, 0.0);
        assert!((a + FRAC_PI_4).abs() < 1e-15 && (b - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(conjugate_fields(5, 0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&sample_field(1, 0.0, 1, 4).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.split('\n').collect();
        assert_eq!(lines[0], "x,y,ex,ey");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[5], "");
        assert!(lines[1].starts_with("1.0000000000000000e0,0.0000000000000000e0,"));
    }

    proptest! {
        #[test]
        fn periodic_unit_and_conjugate(two_q in prop::sample::select(vec![-4, -3, -2, -1, 1, 2, 3, 4]),
                                        theta in -PI..PI, phi in -PI..PI) {
            let (ex, ey) = field_at(two_q, theta, phi);
            prop_assert!((ex * ex + ey * ey - 1.0).abs() <= 1e-12);
            let t = pattern_period(two_q).unwrap();
            let (fx, fy) = field_at(two_q, theta, phi + t);
            prop_assert!((fx - ex).abs() <= 1e-12 && (fy - ey).abs() <= 1e-12);
            let (a, b) = conjugate_fields(two_q, theta, phi);
            prop_assert!(angle_diff(a + b, 0.0) <= 1e-12);
        }
    }
}

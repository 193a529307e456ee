//! Floating-point illustration with a smoothed profile. Nothing here feeds
//! the exact solver.

fn huber_abs(s: f64, w: f64) -> f64 {
    if s.abs() < w {
        s * s / (2.0 * w) + w / 2.0
    } else {
        s.abs()
    }
}

/// Tent profile `1 − |s|` with its kink at `0` rounded off over `|s| < width`
/// and clamped smoothly to `0` near `|s| = 1`.
pub fn smoothed_u(s: f64, width: f64) -> f64 {
    let t = 1.0 - huber_abs(s, width);
    if t <= -width {
        0.0
    } else if t < width {
        (t + width) * (t + width) / (4.0 * width)
    } else {
        t
    }
}

fn wrap(s: f64) -> f64 {
    (s + 1.0).rem_euclid(2.0) - 1.0
}

/// Iterates the block map `(x, y) ↦ (x + λu(y') − νλ, y')`,
/// `y' = y + λu(x) − μλ` with [`smoothed_u`], wrapping both coordinates
/// into `[−1, 1)`. Returns the orbit including the start point.
pub fn demo_orbit(mu: f64, nu: f64, lambda: f64, width: f64, start: (f64, f64), steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut x, mut y) = start;
    out.push((x, y));
    for _ in 0..steps {
        y = wrap(y + lambda * smoothed_u(x, width) - mu * lambda);
        x = wrap(x + lambda * smoothed_u(y, width) - nu * lambda);
        out.push((x, y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothing_agrees_away_from_kinks() {
        assert!((smoothed_u(0.5, 0.01) - 0.5).abs() < 1e-12);
        assert!(smoothed_u(1.0, 0.01) < 0.01);
        assert!((smoothed_u(0.0, 0.01) - 0.995).abs() < 1e-12);
    }

    #[test]
    fn planar_point_is_nearly_fixed() {
        let orbit = demo_orbit(0.5, 0.25, 16.0, 1e-3, (0.5, 0.75), 3);
        for &(x, y) in &orbit {
            assert!((x - 0.5).abs() < 1e-9 && (y - 0.75).abs() < 1e-9);
        }
    }
}

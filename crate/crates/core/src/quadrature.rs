//! Composite Gauss-Legendre quadrature used by the library's integral paths.
//!
//! Tests cross-check these paths with an independent adaptive method, so this
//! module stays deliberately simple: a fixed 5-node rule per panel.

use num_complex::Complex64;

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

/// Integrate `f` over `[a, b]` with `panels` equal subintervals.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut acc = 0.0;
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Complex-valued variant of [`integrate`].
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
) -> Complex64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            acc += f(mid + half * x) * *w;
        }
        total += acc * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomial_exactly() {
        // degree 9 is exact for a 5-point rule
        let value = integrate(|x| x.powi(9) + 3.0 * x * x, 0.0, 1.0, 1);
        assert_abs_diff_eq!(value, 0.1 + 1.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_trig_over_periods() {
        let value = integrate(|t| (3.0 * PI * t).sin().powi(2), 0.0, 2.0, 64);
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn complex_matches_real_parts() {
        let value = integrate_complex(
            |t| Complex64::new((2.0 * t).cos(), (2.0 * t).sin()),
            0.0,
            1.0,
            16,
        );
        assert_abs_diff_eq!(value.re, 2.0_f64.sin() / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(value.im, (1.0 - 2.0_f64.cos()) / 2.0, epsilon = 1e-13);
    }
}

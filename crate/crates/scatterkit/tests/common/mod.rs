//! Shared test oracles and scene builders.
//!
//! Everything here is deliberately independent of the library's computation
//! paths: the hemisphere integrals use Gauss–Legendre quadrature, and the BK
//! series oracle evaluates each term through ln-gamma instead of the
//! incremental recurrence the implementation uses.

#![allow(dead_code)]

use scatterkit::geometry::{arc_position, Antenna, RxLabel, RxPlacement, Scene, Wall};
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// ∫ f(θ, φ) sinθ dθ dφ over the upper hemisphere (θ ∈ [0, π/2],
/// φ ∈ (−π, π]): Gauss–Legendre in θ, uniform midpoint in φ (the integrand
/// is periodic and smooth there, so the midpoint rule converges fast).
pub fn hemisphere_integral(f: impl Fn(f64, f64) -> f64, n_theta: usize, n_phi: usize) -> f64 {
    let rule = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut total = 0.0;
    for &(x, w) in &rule {
        let theta = (x + 1.0) * PI / 4.0;
        let mut ring = 0.0;
        for j in 0..n_phi {
            let phi = -PI + (j as f64 + 0.5) * dphi;
            ring += f(theta, phi);
        }
        total += w * (PI / 4.0) * ring * dphi * theta.sin();
    }
    total
}

// ---------------------------------------------------------------------------
// BK series oracle
// ---------------------------------------------------------------------------

/// High-precision reference for the BK roughness series
/// Σ_{n≥1} gⁿ/(n!·n) · exp(−q/n), evaluated term-by-term through ln-gamma
/// with a 1e-13 relative cutoff (10× stricter than the implementation) and a
/// much larger term cap.
pub fn bk_series_oracle(g: f64, q: f64) -> f64 {
    if g == 0.0 {
        return 0.0;
    }
    let ln_g = g.ln();
    let mut sum = 0.0;
    for n in 1..=8192usize {
        let nf = n as f64;
        let term = (nf * ln_g - statrs::function::gamma::ln_gamma(nf + 1.0) - q / nf).exp() / nf;
        sum += term;
        if nf > g && term < 1e-13 * sum {
            return sum;
        }
    }
    panic!("oracle did not converge for g = {g}, q = {q}");
}

// ---------------------------------------------------------------------------
// Scene builders
// ---------------------------------------------------------------------------

/// Arc-sweep scene: Tx at `tx_angle_deg` incidence on the azimuth-π side,
/// receivers on the 1.5 m arc at the given signed angles and heights, every
/// antenna boresighted at the wall center.
pub fn arc_scene(
    frequency_hz: f64,
    wall_width_m: f64,
    wall_height_m: f64,
    tx_angle_deg: f64,
    rx_angles_deg: &[f64],
    rx_heights_m: &[f64],
    gain_dbi: f64,
    hpbw_deg: f64,
) -> Scene {
    let base_height = 1.7;
    let wall = Wall::vertical_centered(wall_width_m, wall_height_m, base_height).unwrap();
    let center = wall.center();
    let tx = arc_position(1.5, -tx_angle_deg, base_height, &wall);
    let multi_height = rx_heights_m.len() > 1;
    let mut rx = Vec::new();
    for &h in rx_heights_m {
        for &a in rx_angles_deg {
            let p = arc_position(1.5, a, h, &wall);
            rx.push(RxPlacement {
                label: RxLabel {
                    angle_deg: a,
                    height_m: multi_height.then_some(h),
                },
                position: p,
                antenna: Antenna::new(gain_dbi, hpbw_deg, center.sub(p)).unwrap(),
            });
        }
    }
    Scene {
        wall,
        tx_position: tx,
        tx_antenna: Antenna::new(gain_dbi, hpbw_deg, center.sub(tx)).unwrap(),
        rx,
        frequency_hz,
        tx_power_dbm: 10.0,
        max_patch_edge_m: None,
    }
}

/// The 16-point −70°..+80° sweep of the planar measurement layout.
pub fn sixteen_point_arc() -> Vec<f64> {
    (0..16).map(|i| -70.0 + 10.0 * i as f64).collect()
}

/// Sounder parameters per carrier: (gain_dbi, hpbw_deg).
pub fn horn_for(frequency_hz: f64) -> (f64, f64) {
    if frequency_hz < 10e9 {
        (19.4, 18.7)
    } else if frequency_hz < 20e9 {
        (21.8, 12.5)
    } else {
        (15.0, 23.0)
    }
}

pub fn max_rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

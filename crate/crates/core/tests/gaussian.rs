//! Gaussian couplings on the square cell against a semi-analytic oracle.
//!
//! The square ground energy is `-sum |J_b| + 2 min |J_b|` when the sign
//! product is negative and `-sum |J_b|` otherwise. Signs and magnitudes are
//! independent and the frustration probability is 1/2, so for unit variance
//! `Av E = -4 sqrt(2/pi) + int_0^inf P(|J| > t)^4 dt`.

use ea_bounds::bounds::{mc_cell_average, CouplingDistribution};
use ea_bounds::lattice::CellGeometry;

/// `int_0^inf P(|J| > t)^4 dt` with the tail from a Simpson table of the
/// normal density, integrated backwards from `t = 12`.
fn tail_integral(steps: usize) -> f64 {
    let upper = 12.0;
    let h = upper / steps as f64;
    let phi = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    // tail[k] = P(|J| > k h), cumulated panel by panel with Simpson's rule
    let mut tail = vec![0.0; steps + 1];
    for k in (0..steps).rev() {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        let panel = (b - a) / 6.0 * (phi(a) + 4.0 * phi((a + b) / 2.0) + phi(b));
        tail[k] = tail[k + 1] + 2.0 * panel;
    }
    // trapezoid on tail^4, then Richardson against half the resolution
    let trap = |stride: usize| {
        let pts: Vec<f64> = tail.iter().step_by(stride).map(|q| q.powi(4)).collect();
        let hh = h * stride as f64;
        hh * (pts.iter().sum::<f64>() - (pts[0] + pts[pts.len() - 1]) / 2.0)
    };
    (4.0 * trap(1) - trap(2)) / 3.0
}

const FROZEN: f64 = -2.9294559629172756;

#[test]
fn oracle_matches_frozen_value() {
    let oracle = -4.0 * (2.0 / std::f64::consts::PI).sqrt() + tail_integral(24_000);
    assert!((oracle - FROZEN).abs() < 1e-9, "oracle {oracle}");
}

#[test]
fn monte_carlo_agrees_with_oracle() {
    let dist = CouplingDistribution::gaussian(1.0).unwrap();
    let est = mc_cell_average(&CellGeometry::square(), &dist, 100_000, 7).unwrap();
    assert!(
        (est.mean - FROZEN).abs() < 4.0 * est.stderr,
        "mean {} stderr {}",
        est.mean,
        est.stderr
    );
    let again = mc_cell_average(&CellGeometry::square(), &dist, 100_000, 7).unwrap();
    assert_eq!(est, again);
}

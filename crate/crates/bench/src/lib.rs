//! Shared inputs for the benchmarks.

use planar_inv_core::corpus::{base_curve, random_curves};
use planar_inv_core::exactness::TruncationWindow;
use planar_inv_core::{PlanarCurve, ToleranceConfig};

/// Named curves of increasing complexity.
pub fn curves() -> Vec<(String, PlanarCurve)> {
    let cfg = ToleranceConfig::default();
    let mut out: Vec<(String, PlanarCurve)> = [0, 3, -4]
        .into_iter()
        .map(|m| (format!("base{m}"), base_curve(m)))
        .collect();
    let random = random_curves(1, 7, &cfg).remove(0);
    out.push((random.name, random.curve));
    out
}

/// Algebra windows at the default depth.
pub fn windows() -> Vec<TruncationWindow> {
    [(0, 1, 1), (2, -1, 1), (-3, -3, 1)]
        .into_iter()
        .map(|(n, k, l)| TruncationWindow::new(n, k, l, 30).expect("aligned window"))
        .collect()
}

//! Brute-force one-dimensional reference integrator.
//!
//! Deliberately primitive — composite Simpson on a uniform grid — so the test
//! suites can certify expected values through a code path that shares nothing
//! with the production quadrature or Monte Carlo machinery.

/// `∫_a^b f(t) · density(t) dt` by composite Simpson with `resolution` panels
/// (rounded up to the next even number). Error is `O((b-a)^5 / resolution^4)`.
pub fn oracle_integrate_1d(
    f: impl Fn(f64) -> f64,
    density: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    resolution: usize,
) -> f64 {
    assert!(a.is_finite() && b.is_finite() && a < b, "need a finite ordered interval");
    assert!(resolution >= 2, "need at least 2 panels");
    let panels = resolution + resolution % 2;
    let h = (b - a) / panels as f64;
    let g = |t: f64| f(t) * density(t);
    let mut odd = 0.0f64;
    let mut even = 0.0f64;
    for k in 1..panels {
        let t = a + h * k as f64;
        if k % 2 == 1 {
            odd += g(t);
        } else {
            even += g(t);
        }
    }
    (g(a) + g(b) + 4.0 * odd + 2.0 * even) * h / 3.0
}

//! Approximation-guarantee curves over the discount factor.
//!
//! For an FLP sub-solver with guarantee `gamma`, four strategy bounds
//! apply; each reduction's guarantee is the min of its two curves, and
//! running both reductions and keeping the better solution is governed by
//! `min((1+alpha)*gamma, 1/alpha)`, whose worst case sits at the curve
//! intersection.

/// Baseline reduction, single-hub routing: `1 / alpha`.
pub fn bap1(alpha: f64) -> f64 {
    1.0 / alpha
}

/// Baseline reduction, two-hub routing: `(1 + alpha) * gamma + alpha`.
pub fn bap2(alpha: f64, gamma: f64) -> f64 {
    (1.0 + alpha) * gamma + alpha
}

/// Mid-point reduction, single-hub routing:
/// `gamma + 1 / ((1 + alpha) * alpha)`.
pub fn pa1(alpha: f64, gamma: f64) -> f64 {
    gamma + 1.0 / ((1.0 + alpha) * alpha)
}

/// Mid-point reduction, two-hub routing: `(1 + alpha) * gamma`.
pub fn pa2(alpha: f64, gamma: f64) -> f64 {
    (1.0 + alpha) * gamma
}

/// Worst-case guarantee of the best-of-both combination together with the
/// discount factor attaining it: the root of `(1+a)*gamma = 1/a`.
pub fn combined_guarantee(gamma: f64) -> (f64, f64) {
    assert!(gamma > 0.0, "gamma must be positive");
    let alpha = (-gamma + (gamma * gamma + 4.0 * gamma).sqrt()) / (2.0 * gamma);
    (alpha, 1.0 / alpha)
}

/// Worst-case guarantee of the baseline reduction alone: intersection of
/// its two curves, which closes to `1 + gamma`.
pub fn bap_guarantee(gamma: f64) -> (f64, f64) {
    let alpha = 1.0 / (1.0 + gamma);
    (alpha, 1.0 + gamma)
}

/// Worst-case guarantee of the mid-point reduction alone: intersection of
/// its two curves, found by bisection on `gamma*a^2*(1+a) = 1`.
pub fn pa_guarantee(gamma: f64) -> (f64, f64) {
    assert!(gamma >= 0.5, "curves only intersect in (0,1] for gamma >= 1/2");
    let f = |a: f64| gamma * a * a * (1.0 + a) - 1.0;
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    (alpha, pa2(alpha, gamma))
}

//! Branch-stable scalar thermal factors.
//!
//! Arguments are `x = βλ`. No expression exponentiates a large positive
//! number: each factor switches form on the sign of `x`.

/// `(1 − e^{−x})^{-1}`.
pub fn bose_plus(x: f64) -> f64 {
    if x > 0.0 {
        -1.0 / (-x).exp_m1()
    } else {
        // e^{x} / (e^{x} − 1)
        x.exp() / x.exp_m1()
    }
}

/// `(1 − e^{x})^{-1}`.
pub fn bose_minus(x: f64) -> f64 {
    bose_plus(-x)
}

/// `1 / (2 sinh(x/2))`, which equals `e^{−x/2}(1 − e^{−x})^{-1}`.
pub fn half_csch(x: f64) -> f64 {
    0.5 / (0.5 * x).sinh()
}

/// Occupation number `(e^{|x|} − 1)^{-1}`.
pub fn occupation(x: f64) -> f64 {
    1.0 / x.abs().exp_m1()
}

/// Scalar thermal Green kernel `e^{−sλ}(1_{s>0}(1 − e^{−βλ})^{-1} − 1_{s<0}(1 − e^{βλ})^{-1})`.
///
/// `right` selects the `s ≥ 0` branch, so `s = 0` evaluates a one-sided limit.
/// `beta = ∞` gives the vacuum kernel.
pub fn green_scalar(s: f64, beta: f64, lambda: f64, right: bool) -> f64 {
    if beta.is_infinite() {
        return match (right, lambda > 0.0) {
            (true, true) => (-s * lambda).exp(),
            (false, false) => -(-s * lambda).exp(),
            _ => 0.0,
        };
    }
    let x = beta * lambda;
    if right {
        if lambda > 0.0 {
            (-s * lambda).exp() / -(-x).exp_m1()
        } else {
            ((beta - s) * lambda).exp() / x.exp_m1()
        }
    } else if lambda > 0.0 {
        (-(s + beta) * lambda).exp() / -(-x).exp_m1()
    } else {
        (-s * lambda).exp() / x.exp_m1()
    }
}

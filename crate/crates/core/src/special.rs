//! Error-function family on the domains the measurement formulas need.
//!
//! `erfc` is the FreeBSD msun routine (via `libm`). The inverse starts from
//! `statrs`' rational approximation and is polished with Halley steps on
//! `erfc` itself, which keeps it accurate to a few ulp even deep in the tail.

use std::f64::consts::PI;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Inverse of `erfc` on `[0, 2]`; `±∞` at the endpoints, NaN outside.
pub fn erfc_inv(y: f64) -> f64 {
    if y.is_nan() || !(0.0..=2.0).contains(&y) {
        return f64::NAN;
    }
    if y == 0.0 {
        return f64::INFINITY;
    }
    if y == 2.0 {
        return f64::NEG_INFINITY;
    }
    // erfc(-x) = 2 - erfc(x): solve in the upper half where erfc is small and
    // relative precision is available.
    if y > 1.0 {
        return -erfc_inv_upper(2.0 - y);
    }
    erfc_inv_upper(y)
}

fn erfc_inv_upper(y: f64) -> f64 {
    let mut x = statrs::function::erf::erfc_inv(y);
    let two_over_sqrt_pi = 2.0 / PI.sqrt();
    for _ in 0..3 {
        let slope = -two_over_sqrt_pi * (-x * x).exp();
        if slope == 0.0 || !x.is_finite() {
            break;
        }
        let t = (erfc(x) - y) / slope;
        let next = x - t / (1.0 + x * t);
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// Inverse error function on `[-1, 1]`.
pub fn erf_inv(x: f64) -> f64 {
    erfc_inv(1.0 - x)
}

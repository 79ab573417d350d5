//! Overflow- and cancellation-safe building blocks for the closed forms.
//!
//! `θ` below always denotes a nonnegative phase `τ k L`.

/// `sin(x) / x`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `tanh(x) / x`.
pub(crate) fn tanhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 3.0
    } else {
        x.tanh() / x
    }
}

/// `x - sin x` without cancellation for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // x³/3! - x⁵/5! + x⁷/7! - ...
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for n in 1..12 {
            let k = (2 * n + 2) as f64 * (2 * n + 3) as f64;
            term *= -x2 / k;
            sum += term;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// `sinh x - x` without cancellation for small `x`.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for n in 1..12 {
            let k = (2 * n + 2) as f64 * (2 * n + 3) as f64;
            term *= x2 / k;
            sum += term;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// `θ / sinh²θ`, finite for all `θ > 0`.
fn theta_over_sinh2(theta: f64) -> f64 {
    if theta > 20.0 {
        let e = (-2.0 * theta).exp();
        4.0 * theta * e / ((1.0 - e) * (1.0 - e))
    } else {
        theta / theta.sinh().powi(2)
    }
}

/// `∫₀¹ sin²(θs) ds / sin²θ`; tends to `1/3` as `θ → 0`.
pub(crate) fn mass_osc(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0 / 3.0;
    }
    x_minus_sin(2.0 * theta) / (4.0 * theta * theta.sin().powi(2))
}

/// `∫₀¹ sinh²(θs) ds / sinh²θ`; tends to `1/3` as `θ → 0`.
pub(crate) fn mass_ev(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0 / 3.0;
    }
    if theta < 20.0 {
        sinh_minus_x(2.0 * theta) / (4.0 * theta * theta.sinh().powi(2))
    } else {
        (1.0 / theta.tanh() - theta_over_sinh2(theta)) / (2.0 * theta)
    }
}

/// `θ² ∫₀¹ cos²(θs) ds / sin²θ`; tends to `1` as `θ → 0`.
pub(crate) fn stiff_osc(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0;
    }
    let s = theta.sin();
    theta * (2.0 * theta + (2.0 * theta).sin()) / (4.0 * s * s)
}

/// `θ² ∫₀¹ cosh²(θs) ds / sinh²θ`; tends to `1` as `θ → 0`.
pub(crate) fn stiff_ev(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0;
    }
    0.5 * theta / theta.tanh() + 0.5 * theta * theta_over_sinh2(theta)
}

/// `sinh(y) / sinh(θ)` for `0 ≤ y ≤ θ`, safe for large `θ`.
pub(crate) fn sinh_ratio(y: f64, theta: f64) -> f64 {
    if theta < 20.0 {
        y.sinh() / theta.sinh()
    } else {
        (y - theta).exp() * (1.0 - (-2.0 * y).exp()) / (1.0 - (-2.0 * theta).exp())
    }
}

/// `cosh(y) / sinh(θ)` for `0 ≤ y ≤ θ`, safe for large `θ`.
pub(crate) fn cosh_over_sinh(y: f64, theta: f64) -> f64 {
    if theta < 20.0 {
        y.cosh() / theta.sinh()
    } else {
        (y - theta).exp() * (1.0 + (-2.0 * y).exp()) / (1.0 - (-2.0 * theta).exp())
    }
}

//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here touches the library's own numerical paths: the ODE
//! integrator is a generic adaptive Runge-Kutta scheme, the quadrature is
//! tanh-sinh, and the ladder scanner re-derives crossing times from first
//! principles on a dense series.

#![allow(dead_code)]

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = f(t, y) from `t0`
/// to `t1`, with absolute/relative tolerance `tol`.
pub fn rk45<F: Fn(f64, f64) -> f64>(f: F, t0: f64, y0: f64, t1: f64, tol: f64) -> f64 {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    // 5th-order solution weights
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // embedded 4th-order weights
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;

    if t1 <= t0 {
        return y0;
    }
    let mut t = t0;
    let mut y = y0;
    // conservative initial step from the local derivative scale
    let d0 = f(t0, y0).abs().max(1e-12);
    let mut h = (tol.powf(0.2) / d0).min((t1 - t0) / 16.0).max(1e-14);

    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let k1 = f(t, y);
        let k2 = f(t + h * 0.2, y + h * A21 * k1);
        let k3 = f(t + h * 0.3, y + h * (A31 * k1 + A32 * k2));
        let k4 = f(t + h * 0.8, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(
            t + h * 8.0 / 9.0,
            y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
        );
        let y5 = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        let k6 = f(t + h, y5);
        let ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = f(t + h, ynew);
        let y4 = y + h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let err = (ynew - y4).abs();
        let scale = tol * (1.0 + y.abs().max(ynew.abs()));
        if err <= scale || h <= 1e-14 {
            t += h;
            y = ynew;
        }
        let factor = if err > 0.0 {
            0.9 * (scale / err).powf(0.2)
        } else {
            4.0
        };
        h *= factor.clamp(0.2, 4.0);
    }
    y
}

/// Tanh-sinh (double-exponential) quadrature of ∫ f over (0, 1), robust to
/// integrable endpoint singularities. The integrand receives both x and
/// 1−x exactly (so endpoint factors never cancel). Level-doubles until the
/// estimate is stable to `tol`.
pub fn tanh_sinh_unit<F: Fn(f64, f64) -> f64>(f: F, tol: f64) -> f64 {
    // x(t) = logistic(2u) with u = (π/2) sinh t; the logistic form keeps
    // both endpoint distances exact (no cancellation), which matters for
    // strong integrable singularities
    let g = |t: f64| {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let (x, one_minus_x) = if u >= 0.0 {
            let em = (-2.0 * u).exp();
            (1.0 / (1.0 + em), em / (1.0 + em))
        } else {
            let ep = (2.0 * u).exp();
            (ep / (1.0 + ep), 1.0 / (1.0 + ep))
        };
        let w = std::f64::consts::PI * t.cosh() * x * one_minus_x;
        (x, one_minus_x, w)
    };
    let t_max: f64 = 6.5;
    let mut h: f64 = 0.5;
    let mut prev = f64::NAN;
    for _level in 0..14 {
        let n = (t_max / h).ceil() as i64;
        let mut sum = 0.0;
        for i in -n..=n {
            let (x, one_minus_x, w) = g(i as f64 * h);
            if x > 0.0 && one_minus_x > 0.0 && w.is_finite() && w > 0.0 {
                let v = f(x, one_minus_x);
                if v.is_finite() {
                    sum += v * w;
                }
            }
        }
        let val = sum * h;
        if (val - prev).abs() <= tol * (1.0 + val.abs()) {
            return val;
        }
        prev = val;
        h *= 0.5;
    }
    prev
}

/// Brute-force crossing extraction from a dense (t, sup-norm) series:
/// an independent batch re-implementation of the ladder convention
/// (activation at 3c0 with cascades, up at 3x the anchor, down at a third
/// with the floor at 3c0).
pub fn brute_force_crossings(c0: f64, series: &[(f64, f64)]) -> Vec<(f64, i8, u32)> {
    let level = |n: u32| c0 * 3f64.powi(n as i32);
    let mut out: Vec<(f64, i8, u32)> = Vec::new();
    let mut anchor: Option<u32> = None;
    for &(t, s) in series {
        if anchor.is_none() {
            if s >= level(1) {
                out.push((t, 1, 1));
                anchor = Some(1);
            } else {
                continue;
            }
        }
        let mut n = anchor.unwrap();
        loop {
            if s >= level(n + 1) {
                n += 1;
                out.push((t, 1, n));
            } else if n >= 2 && s <= level(n - 1) {
                n -= 1;
                out.push((t, -1, n));
            } else {
                break;
            }
        }
        anchor = Some(n);
    }
    out
}

/// Mean and standard error of a sample.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

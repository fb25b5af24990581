//! Thermal correction integrals on the imaginary frequency axis, reduced
//! units. At w = i xi with xi > 0 the branch bookkeeping of the real axis
//! disappears: G has strictly negative imaginary part for v > 0, so the
//! principal square root is the analytic one everywhere.

use super::GrapheneError;
use num_complex::Complex64;
use quadrature::{integrate, integrate_semi_infinite, QuadraturePolicy, TailRule};

fn fermi_pair(v: f64, mu: f64, t: f64) -> f64 {
    1.0 / (((v - 2.0 * mu) / (2.0 * t)).exp() + 1.0)
        + 1.0 / (((v + 2.0 * mu) / (2.0 * t)).exp() + 1.0)
}

/// Integrated brackets at imaginary frequency xi > 0:
///   I00 = int_{2m} wgt(v) [1 + Re((x^2 - k^2)/sqrt(G))] dv
///   IPi = int_{2m} wgt(v) [Re(sqrt(G) - k^2 Q^2 / sqrt(G)) - xi^2] dv
/// with x = v + i xi, Q^2 = xi^2 + k^2, G = k^2 (Q^2 + 4 m^2) - Q^2 x^2.
pub fn reduced(xi: f64, k: f64, m: f64, mu: f64, t: f64) -> Result<(f64, f64), GrapheneError> {
    let q2 = xi * xi + k * k;
    let b00 = move |v: f64| {
        let x = Complex64::new(v, xi);
        let g = (k * k * (q2 + 4.0 * m * m) - q2 * x * x).sqrt();
        1.0 + ((x * x - k * k) / g).re
    };
    let bpi = move |v: f64| {
        let x = Complex64::new(v, xi);
        let g = (k * k * (q2 + 4.0 * m * m) - q2 * x * x).sqrt();
        (g - k * k * q2 / g).re - xi * xi
    };
    let vth = (k * k + 4.0 * m * m).sqrt();
    // Crossover where |Re G| = 0 along the real-v line.
    let v_star = (k * k * (q2 + 4.0 * m * m) / q2 + xi * xi).sqrt();
    let mut brk = vec![k, vth, 2.0 * mu, v_star];
    brk.retain(|&b| b > 2.0 * m);
    // Absolute floor: corrections this small are invisible next to the O(1)
    // temperature independent part, and pure-noise integrands (weight fully
    // underflowed) must still converge.
    let policy = QuadraturePolicy::default()
        .with_rel_tol(1e-9)
        .with_abs_tol(1e-14)
        .with_breakpoints(brk)
        .with_tail(TailRule::Exponential(1.0 / (2.0 * t)));
    let i00 = integrate_semi_infinite(
        |v| fermi_pair(v, mu, t) * b00(v),
        2.0 * m,
        &policy,
    )?;
    let ipi = integrate_semi_infinite(
        |v| fermi_pair(v, mu, t) * bpi(v),
        2.0 * m,
        &policy,
    )?;
    Ok((i00.value, ipi.value))
}

/// xi -> 0 limit taken before k -> 0. Below vth = sqrt(k^2 + 4m^2) the 00
/// bracket collapses to 1 + (v^2 - k^2)/(k sqrt(vth^2 - v^2)); above vth the
/// square root continues to -i|.| (Im G < 0 from xi -> 0+) so the Re part
/// drops and the bracket is exactly 1, whose Fermi tail has a closed form.
/// The trace bracket keeps only k (4m^2 - v^2)/sqrt(vth^2 - v^2) inside the
/// root region and vanishes above it.
///
/// The head integrals are taken in the variable u = sqrt(vth^2 - v^2), which
/// removes the endpoint singularity analytically. With vth^2 - 4m^2 = k^2:
///   I00_head = int_0^k w(v(u)) [u + (4m^2 - u^2)/k] / sqrt(vth^2 - u^2) du
///   IPi      = -k int_0^k w(v(u)) (k^2 - u^2) / sqrt(vth^2 - u^2) du
/// with v(u) = sqrt(vth^2 - u^2). Both integrands are bounded on [0, k] for
/// every m >= 0, including m = 0 where vth = k.
pub fn static_reduced(k: f64, m: f64, mu: f64, t: f64) -> Result<(f64, f64), GrapheneError> {
    let vth = (k * k + 4.0 * m * m).sqrt();
    let mut brk = vec![2.0 * m];
    if 2.0 * mu < vth {
        brk.push((vth * vth - 4.0 * mu * mu).sqrt());
    }
    brk.retain(|&b| b > 0.0 && b < k);
    let policy = QuadraturePolicy::default()
        .with_rel_tol(1e-9)
        .with_abs_tol(1e-14)
        .with_breakpoints(brk);
    let i00_head = integrate(
        |u| {
            let v = ((vth - u) * (vth + u)).max(0.0).sqrt();
            fermi_pair(v, mu, t) * (u + (4.0 * m * m - u * u) / k) / v.max(f64::MIN_POSITIVE)
        },
        0.0,
        k,
        &policy,
    )?
    .value;
    // int_vth^inf fermi_pair dv, exactly.
    let tail = (2.0 * t)
        * ((-(vth - 2.0 * mu) / (2.0 * t)).exp().ln_1p()
            + (-(vth + 2.0 * mu) / (2.0 * t)).exp().ln_1p());
    let ipi = -k
        * integrate(
            |u| {
                let v = ((vth - u) * (vth + u)).max(0.0).sqrt();
                fermi_pair(v, mu, t) * (k - u) * (k + u) / v.max(f64::MIN_POSITIVE)
            },
            0.0,
            k,
            &policy,
        )?
        .value;
    Ok((i00_head + tail, ipi))
}

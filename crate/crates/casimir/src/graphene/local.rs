//! Spatially local limit of the sheet response: leading k -> 0 behavior.
//!
//! Away from the static point both tensor components scale as k^2, so the
//! stored coefficients are Pi_00 / k^2 and Pi / k^2 (`k2_scaled = true`) and
//! the trace part follows from the 00 part algebraically. The static point is
//! the exception: the xi -> 0 and k -> 0 limits do not commute, Pi_00 tends to
//! a k-independent screening constant and Pi to zero, so it is stored
//! unscaled (`k2_scaled = false`).

use super::{psi_real, sub_bracket, GrapheneError, GrapheneSheet};
use crate::constants::{ALPHA, C, HBAR, K_B};
use num_complex::Complex64;
use quadrature::{integrate, integrate_semi_infinite, QuadraturePolicy, TailRule};

/// Frequency argument for the local evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// Real lab frequency omega >= 0 in rad/s; 0 selects the static limit.
    Real(f64),
    /// Imaginary lab frequency xi >= 0 in rad/s; 0 selects the static limit.
    Imag(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct LocalTensor {
    pub c00: Complex64,
    pub cpi: Complex64,
    /// True when c00, cpi hold Pi_00 / k^2 and Pi / k^2.
    pub k2_scaled: bool,
}

impl LocalTensor {
    /// Materialize (Pi_00, Pi) at a given transverse wavenumber.
    pub fn at_k(&self, k: f64) -> (Complex64, Complex64) {
        if self.k2_scaled {
            (self.c00 * (k * k), self.cpi * (k * k))
        } else {
            (self.c00, self.cpi)
        }
    }
}

/// Fermi occupation pair at frequency v (rad/s).
fn weight(v: f64, sheet: &GrapheneSheet) -> f64 {
    let kt2 = 2.0 * K_B * sheet.temperature;
    1.0 / (((HBAR * v - 2.0 * sheet.mu) / kt2).exp() + 1.0)
        + 1.0 / (((HBAR * v + 2.0 * sheet.mu) / kt2).exp() + 1.0)
}

/// int_dh^inf weight dv, in closed form.
fn weight_tail_integral(dh: f64, sheet: &GrapheneSheet) -> f64 {
    let kt2 = 2.0 * K_B * sheet.temperature;
    (kt2 / HBAR)
        * ((-(HBAR * dh - 2.0 * sheet.mu) / kt2).exp().ln_1p()
            + (-(HBAR * dh + 2.0 * sheet.mu) / kt2).exp().ln_1p())
}

pub fn pi_local(axis: Axis, sheet: &GrapheneSheet) -> Result<LocalTensor, GrapheneError> {
    match axis {
        Axis::Real(omega) if omega > 0.0 => local_real_axis(omega, sheet),
        Axis::Imag(xi) if xi > 0.0 => local_matsubara(xi, sheet),
        Axis::Real(_) | Axis::Imag(_) => Ok(local_static(sheet)),
    }
}

fn local_static(sheet: &GrapheneSheet) -> LocalTensor {
    let dh = sheet.delta / HBAR;
    let thermal = if sheet.temperature > 0.0 {
        weight_tail_integral(dh, sheet) + dh * weight(dh, sheet)
    } else {
        0.0
    };
    let c00 = 4.0 * ALPHA * HBAR * C / (sheet.v_f * sheet.v_f) * thermal;
    LocalTensor {
        c00: Complex64::new(c00, 0.0),
        cpi: Complex64::new(0.0, 0.0),
        k2_scaled: false,
    }
}

fn local_matsubara(xi: f64, sheet: &GrapheneSheet) -> Result<LocalTensor, GrapheneError> {
    let dh = sheet.delta / HBAR;
    let vac = 2.0 * ALPHA * HBAR * C / xi * psi_real(dh / xi);
    let thermal = if sheet.temperature > 0.0 {
        let i0 = weight_tail_integral(dh, sheet);
        let rate = HBAR / (2.0 * K_B * sheet.temperature);
        let mut brk = vec![xi, 2.0 * sheet.mu / HBAR];
        brk.retain(|&b| b > dh);
        let policy = QuadraturePolicy::default()
            .with_rel_tol(1e-10)
            .with_abs_tol(1e-30)
            .with_breakpoints(brk)
            .with_tail(TailRule::Exponential(rate));
        let j = integrate_semi_infinite(|v| weight(v, sheet) / (v * v + xi * xi), dh, &policy)?
            .value;
        2.0 * ALPHA * HBAR * C / (xi * xi) * (i0 + (dh * dh - xi * xi) * j)
    } else {
        0.0
    };
    let c00 = Complex64::new(vac + thermal, 0.0);
    Ok(LocalTensor {
        c00,
        cpi: c00 * (xi * xi / (C * C)),
        k2_scaled: true,
    })
}

fn local_real_axis(omega: f64, sheet: &GrapheneSheet) -> Result<LocalTensor, GrapheneError> {
    let dh = sheet.delta / HBAR;
    let y = dh / omega;
    let pref = 2.0 * ALPHA * HBAR * C;

    let vac = if dh == 0.0 || omega > dh {
        let g = (1.0 + y * y) * y.atanh() - y;
        let jump = std::f64::consts::PI * (1.0 + y * y) / 2.0;
        Complex64::new(g, jump) * (pref / omega)
    } else if omega < dh {
        Complex64::new(-pref / omega * sub_bracket(y), 0.0)
    } else {
        Complex64::new(8.0 / 3.0 * ALPHA * HBAR * HBAR * C / sheet.delta, 0.0)
    };

    let thermal = if sheet.temperature > 0.0 {
        let i0 = weight_tail_integral(dh, sheet);
        let w_up = 2.0 * omega + dh.max(2.0 * sheet.mu / HBAR) + 60.0 * K_B * sheet.temperature / HBAR;
        // P = PV int_dh^W weight(v)/(omega^2 - v^2) dv; the remainder past W is
        // below the weight's exponential floor.
        let p = if omega > dh {
            let w_pole = weight(omega, sheet);
            let mut brk = vec![omega, 2.0 * sheet.mu / HBAR];
            brk.retain(|&b| b > dh && b < w_up);
            let policy = QuadraturePolicy::default()
                .with_rel_tol(1e-8)
                .with_abs_tol(1e-30)
                .with_max_subdivisions(400)
                .with_breakpoints(brk);
            let reg = integrate(
                |v| (weight(v, sheet) - w_pole) / ((omega - v) * (omega + v)),
                dh,
                w_up,
                &policy,
            )?
            .value;
            let f = |v: f64| (0.5 / omega) * ((omega + v).abs() / (omega - v).abs()).ln();
            reg + w_pole * (f(w_up) - f(dh))
        } else {
            let mut brk = vec![2.0 * sheet.mu / HBAR];
            brk.retain(|&b| b > dh && b < w_up);
            let policy = QuadraturePolicy::default()
                .with_rel_tol(1e-8)
                .with_abs_tol(1e-30)
                .with_max_subdivisions(400)
                .with_breakpoints(brk);
            integrate(
                |v| weight(v, sheet) / ((omega - v) * (omega + v)),
                dh,
                w_up,
                &policy,
            )?
            .value
        };
        let re = 2.0 * pref * (-i0 / (2.0 * omega * omega) + (1.0 + y * y) / 2.0 * p);
        let im = if omega > dh {
            -std::f64::consts::PI * ALPHA * HBAR * C * (1.0 + y * y) * weight(omega, sheet) / omega
        } else {
            0.0
        };
        Complex64::new(re, im)
    } else {
        Complex64::new(0.0, 0.0)
    };

    let c00 = vac + thermal;
    Ok(LocalTensor {
        c00,
        cpi: -c00 * (omega * omega / (C * C)),
        k2_scaled: true,
    })
}

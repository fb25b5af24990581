//! Reflection coefficients of a substrate optionally coated with a conducting
//! sheet, on both frequency axes.
//!
//! Real-axis algebra is written in the dimensionless pair (u, t) with
//! u = 2 a omega / c and t = c k / omega: kappa0 = sqrt(t^2 - 1) continued to
//! -i sqrt(1 - t^2) in the propagating sector, kappa = sqrt(t^2 - eps) on the
//! branch Re >= 0, Im <= 0. The sheet enters through the dimensionless
//! combinations p00 = (omega / hbar c) Pi_00 / k^2 and
//! ppi = (c / omega hbar) Pi / k^2.
//!
//! Imaginary-axis algebra stays in SI wavenumbers q = sqrt(k^2 + xi^2/c^2),
//! qt = sqrt(k^2 + eps xi^2/c^2), where everything is real.

use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

use crate::constants::{C, HBAR};
use crate::dielectric::{DielectricError, Permittivity};
use crate::graphene::{
    pi_local, pi_matsubara, pi_real_axis, Axis, GrapheneError, GrapheneSheet, LocalTensor,
    TensorValue,
};

#[derive(Debug, Error)]
pub enum FresnelError {
    #[error(transparent)]
    Graphene(#[from] GrapheneError),
    #[error(transparent)]
    Dielectric(#[from] DielectricError),
}

/// How the sheet response is evaluated inside reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TensorMode {
    /// Full wave-vector dependence everywhere.
    Full,
    /// Spatially local coefficients everywhere.
    LocalOnly,
    /// Local where v_F k is negligible against the frequency, full elsewhere.
    #[default]
    Auto,
}

/// Dispatch thresholds for `TensorMode::Auto`. At the real-axis seam the local
/// coefficient differs from the full tensor by about 1e-5 relative.
pub(crate) const AUTO_REAL_AXIS_RATIO: f64 = 1e-2;
pub(crate) const AUTO_IMAG_AXIS_RATIO: f64 = 3e-3;

/// One plate: substrate half-space, optionally coated with a sheet.
/// The permittivity is shared so coated and bare variants of the same
/// substrate reuse one memoized dispersion table.
#[derive(Debug, Clone)]
pub struct Plate {
    pub permittivity: Arc<Permittivity>,
    pub sheet: Option<GrapheneSheet>,
}

impl Plate {
    pub fn new(permittivity: Permittivity, sheet: Option<GrapheneSheet>) -> Self {
        Plate {
            permittivity: Arc::new(permittivity),
            sheet,
        }
    }

    /// Same substrate, no sheet.
    pub fn stripped(&self) -> Self {
        Plate {
            permittivity: Arc::clone(&self.permittivity),
            sheet: None,
        }
    }

    /// Same substrate and sheet parameters, sheet occupation at `temp_k`.
    pub fn at_temperature(&self, temp_k: f64) -> Self {
        Plate {
            permittivity: Arc::clone(&self.permittivity),
            sheet: self.sheet.map(|s| s.with_temperature(temp_k)),
        }
    }
}

/// sqrt(t^2 - eps) with Re >= 0, Im <= 0.
pub fn kappa_eps(t: f64, eps: Complex64) -> Complex64 {
    let s = (Complex64::new(t * t, 0.0) - eps).sqrt();
    if s.im > 0.0 {
        -s
    } else {
        s
    }
}

/// sqrt(t^2 - 1): real for t >= 1, -i sqrt(1 - t^2) in the propagating sector.
pub fn kappa_vacuum(t: f64) -> Complex64 {
    if t >= 1.0 {
        Complex64::new((t * t - 1.0).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -((1.0 - t * t).sqrt()))
    }
}

/// Real-axis reflection pair (r_tm, r_te) from dimensionless inputs.
pub fn rtm_rte_real(t: f64, eps: Complex64, p00: Complex64, ppi: Complex64) -> (Complex64, Complex64) {
    let k0 = kappa_vacuum(t);
    let ke = kappa_eps(t, eps);
    let rtm = (eps * k0 - ke + k0 * ke * p00) / (eps * k0 + ke + k0 * ke * p00);
    let rte = (k0 - ke - ppi) / (k0 + ke + ppi);
    (rtm, rte)
}

/// Imaginary-axis reflection pair from SI inputs; pi00_k2 = Pi_00 / k^2,
/// pi_k2 = Pi / k^2. Handles xi = 0, where both wavenumbers collapse to k.
pub fn rtm_rte_matsubara(xi: f64, k: f64, eps: f64, pi00_k2: f64, pi_k2: f64) -> (f64, f64) {
    let q = (k * k + xi * xi / (C * C)).sqrt();
    let qt = (k * k + eps * xi * xi / (C * C)).sqrt();
    let tm_coat = q * qt * pi00_k2 / HBAR;
    let rtm = (eps * q - qt + tm_coat) / (eps * q + qt + tm_coat);
    let te_coat = pi_k2 / HBAR;
    let rte = (q - qt - te_coat) / (q + qt + te_coat);
    (rtm, rte)
}

/// One-bounce propagation factor exp(-u kappa0): oscillatory for t < 1,
/// exponentially decaying for t > 1.
pub fn round_trip_phase(u: f64, t: f64) -> Complex64 {
    (-u * kappa_vacuum(t)).exp()
}

/// Denominator 1 - r1 r2 exp(-u kappa0) of the multiple-reflection sum.
pub fn d_factor(u: f64, t: f64, r1r2: Complex64) -> Complex64 {
    1.0 - r1r2 * round_trip_phase(u, t)
}

pub(crate) fn per_k2(local: &LocalTensor, k: f64) -> (Complex64, Complex64) {
    if local.k2_scaled {
        (local.c00, local.cpi)
    } else {
        (local.c00 / (k * k), local.cpi / (k * k))
    }
}

pub(crate) fn tensor_per_k2(v: &TensorValue, k: f64) -> (Complex64, Complex64) {
    (v.pi00 / (k * k), v.pi / (k * k))
}

/// Reflection pair of a plate at real frequency omega > 0 and wavenumber k > 0.
pub fn reflect_real_axis(
    plate: &Plate,
    omega: f64,
    k: f64,
    mode: TensorMode,
) -> Result<(Complex64, Complex64), FresnelError> {
    let eps = plate.permittivity.eps_real_axis(omega);
    let t = C * k / omega;
    let (p00, ppi) = match &plate.sheet {
        None => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        Some(sheet) => {
            let use_local = match mode {
                TensorMode::LocalOnly => true,
                TensorMode::Full => false,
                TensorMode::Auto => sheet.v_f * k <= AUTO_REAL_AXIS_RATIO * omega,
            };
            let (c00, cpi) = if use_local {
                per_k2(&pi_local(Axis::Real(omega), sheet)?, k)
            } else {
                tensor_per_k2(&pi_real_axis(omega, k, sheet)?, k)
            };
            (
                c00 * (omega / (HBAR * C)),
                cpi * (C / (omega * HBAR)),
            )
        }
    };
    Ok(rtm_rte_real(t, eps, p00, ppi))
}

/// Reflection pair of a plate at imaginary frequency xi >= 0 and k > 0.
/// Both coefficients are real there.
pub fn reflect_matsubara(
    plate: &Plate,
    xi: f64,
    k: f64,
    mode: TensorMode,
) -> Result<(f64, f64), FresnelError> {
    let eps = plate.permittivity.eps_imag_axis(xi)?;
    let (pi00_k2, pi_k2) = match &plate.sheet {
        None => (0.0, 0.0),
        Some(sheet) => {
            let use_local = match mode {
                TensorMode::LocalOnly => true,
                TensorMode::Full => false,
                TensorMode::Auto => sheet.v_f * k <= AUTO_IMAG_AXIS_RATIO * xi,
            };
            let (c00, cpi) = if use_local {
                per_k2(&pi_local(Axis::Imag(xi), sheet)?, k)
            } else {
                let v = pi_matsubara(xi, k, sheet)?;
                tensor_per_k2(&v, k)
            };
            (c00.re, cpi.re)
        }
    };
    Ok(rtm_rte_matsubara(xi, k, eps, pi00_k2, pi_k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::OscillatorModel;

    fn bare(eps_model: OscillatorModel) -> Plate {
        Plate::new(Permittivity::Model(eps_model), None)
    }

    #[test]
    fn bare_normal_incidence_closed_form() {
        let eps = Complex64::new(2.25, 0.0);
        let (rtm, rte) = rtm_rte_real(0.0, eps, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let want = (1.5 - 1.0) / (1.5 + 1.0);
        assert!((rtm - want).norm() < 1e-12, "rtm {rtm}");
        assert!((rte + want).norm() < 1e-12, "rte {rte}");
    }

    #[test]
    fn bare_static_silica_value() {
        let (rtm, rte) = rtm_rte_matsubara(0.0, 1.0e5, 3.81, 0.0, 0.0);
        assert!((rtm - 2.81 / 4.81).abs() < 1e-12);
        assert_eq!(rte, 0.0);
    }

    #[test]
    fn coated_static_long_wavelength_saturates() {
        let plate = Plate::new(
            Permittivity::Model(OscillatorModel::silica()),
            Some(GrapheneSheet::from_lab(0.1, 0.25, 1.0 / 300.0, 300.0)),
        );
        let (rtm_small, _) = reflect_matsubara(&plate, 0.0, 1.0e2, TensorMode::Full).unwrap();
        let (rtm_large, _) = reflect_matsubara(&plate, 0.0, 1.0e9, TensorMode::Full).unwrap();
        assert!(rtm_small > 0.999, "screened static limit {rtm_small}");
        assert!(rtm_large < rtm_small);
        let bare_plate = bare(OscillatorModel::silica());
        let (rtm_bare, _) = reflect_matsubara(&bare_plate, 0.0, 1.0e2, TensorMode::Full).unwrap();
        assert!(rtm_small > rtm_bare);
    }

    #[test]
    fn coating_strengthens_tm_on_imaginary_axis() {
        let coated = Plate::new(
            Permittivity::Model(OscillatorModel::silica()),
            Some(GrapheneSheet::from_lab(0.1, 0.0, 1.0 / 300.0, 300.0)),
        );
        let bare_plate = bare(OscillatorModel::silica());
        for &xi in &[1.0e13, 1.0e14, 1.0e15] {
            for &k in &[1.0e5, 1.0e6, 1.0e7] {
                let (c, _) = reflect_matsubara(&coated, xi, k, TensorMode::Full).unwrap();
                let (b, _) = reflect_matsubara(&bare_plate, xi, k, TensorMode::Full).unwrap();
                assert!(c > b, "xi={xi:.1e} k={k:.1e}: coated {c} <= bare {b}");
            }
        }
    }

    #[test]
    fn auto_dispatch_is_continuous() {
        let plate = Plate::new(
            Permittivity::Model(OscillatorModel::silica()),
            Some(GrapheneSheet::from_lab(0.1, 0.25, 1.0 / 300.0, 300.0)),
        );
        // Real axis: seam at v_F k = 1e-2 omega.
        let omega = 1.0e15;
        let sheet = plate.sheet.as_ref().unwrap();
        let k_seam = AUTO_REAL_AXIS_RATIO * omega / sheet.v_f;
        let (lo_tm, lo_te) =
            reflect_real_axis(&plate, omega, k_seam * 0.9999, TensorMode::Auto).unwrap();
        let (hi_tm, hi_te) =
            reflect_real_axis(&plate, omega, k_seam * 1.0001, TensorMode::Auto).unwrap();
        assert!((lo_tm - hi_tm).norm() < 1e-3 * hi_tm.norm().max(1e-3), "tm jump {lo_tm} {hi_tm}");
        assert!((lo_te - hi_te).norm() < 1e-3 * hi_te.norm().max(1e-3), "te jump {lo_te} {hi_te}");
        // Imaginary axis: seam at v_F k = 3e-3 xi.
        let xi = 1.0e15;
        let k_seam = AUTO_IMAG_AXIS_RATIO * xi / sheet.v_f;
        let (lo_tm, _) = reflect_matsubara(&plate, xi, k_seam * 0.9999, TensorMode::Auto).unwrap();
        let (hi_tm, _) = reflect_matsubara(&plate, xi, k_seam * 1.0001, TensorMode::Auto).unwrap();
        assert!((lo_tm - hi_tm).abs() < 1e-3 * hi_tm.abs(), "matsubara jump {lo_tm} {hi_tm}");
    }

    #[test]
    fn propagating_tm_reflection_is_passive() {
        let plate = Plate::new(
            Permittivity::Model(OscillatorModel::silica()),
            Some(GrapheneSheet::from_lab(0.1, 0.25, 1.0 / 300.0, 300.0)),
        );
        let omega = 5.0e14;
        for i in 1..20 {
            let t = i as f64 / 20.0;
            let k = t * omega / C;
            let (rtm, _) = reflect_real_axis(&plate, omega, k, TensorMode::Auto).unwrap();
            assert!(rtm.norm() <= 1.0 + 1e-12, "t={t}: |rtm|={}", rtm.norm());
        }
    }

    #[test]
    fn round_trip_phase_regimes() {
        let u = 2.0;
        let p = round_trip_phase(u, 0.5);
        assert!((p.norm() - 1.0).abs() < 1e-12, "propagating modulus {p}");
        let e = round_trip_phase(u, 2.0);
        assert!((e.re - (-u * 3.0f64.sqrt()).exp()).abs() < 1e-12 && e.im == 0.0);
    }
}

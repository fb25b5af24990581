//! Polarization response of a gapped, doped graphene sheet.
//!
//! The response is the pair (Pi_00, Pi): the density-density component and the
//! combination entering the TE channel. Each splits into a temperature
//! independent part with closed forms (`zero_t` equivalents inlined here) and
//! a thermal correction given by one-dimensional integrals over quasiparticle
//! energies (`thermal` on the real axis, `matsubara` on the imaginary axis).
//! `local` holds the spatially local (small wave-vector) limits.
//!
//! Internally the integrals are computed in reduced form: pick an energy scale
//! E0, then w = hbar*omega/E0, kk = hbar*v_F*k/E0, m = delta/(2 E0),
//! mu = mu/E0, t = k_B*T/E0. Physical prefactors are applied afterwards:
//! Pi_00 = (4 alpha hbar c / v_F^2) (E0/hbar) I00 and
//! Pi    = (4 alpha hbar / (c v_F^2)) (E0/hbar)^3 IPi.

pub mod local;
pub mod matsubara;
pub mod thermal;

use crate::constants::{ALPHA, C, HBAR};
use num_complex::Complex64;
use quadrature::QuadratureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrapheneError {
    #[error("omega and k cannot both be zero")]
    OriginUndefined,
    #[error("gapless response is singular exactly at omega = v_F k")]
    ThresholdSingular,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Material parameters of one graphene sheet, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrapheneSheet {
    /// Energy gap, J, >= 0.
    pub delta: f64,
    /// Chemical potential, J, >= 0.
    pub mu: f64,
    /// Fermi velocity, m/s, < c.
    pub v_f: f64,
    /// Sheet temperature, K, > 0.
    pub temperature: f64,
}

impl GrapheneSheet {
    /// Build from laboratory units (eV, K) and a v_F/c ratio.
    pub fn from_lab(delta_ev: f64, mu_ev: f64, vf_over_c: f64, temp_k: f64) -> Self {
        GrapheneSheet {
            delta: crate::units::ev_to_joule(delta_ev),
            mu: crate::units::ev_to_joule(mu_ev),
            v_f: vf_over_c * C,
            temperature: temp_k,
        }
    }

    pub fn with_temperature(mut self, temp_k: f64) -> Self {
        self.temperature = temp_k;
        self
    }
}

/// The response pair at one frequency/wave-vector point.
/// pi00 carries units J s / m, pi carries J s / m^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorValue {
    pub pi00: Complex64,
    pub pi: Complex64,
}

impl TensorValue {
    pub const ZERO: TensorValue = TensorValue {
        pi00: Complex64 { re: 0.0, im: 0.0 },
        pi: Complex64 { re: 0.0, im: 0.0 },
    };

    fn add(self, other: TensorValue) -> TensorValue {
        TensorValue {
            pi00: self.pi00 + other.pi00,
            pi: self.pi + other.pi,
        }
    }
}

/// Kinematic sectors of the (omega, k) quadrant. Boundary points go to the
/// branch whose condition holds with >= .
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KinematicRegion {
    /// omega < v_F k
    Evanescent,
    /// omega >= v_F k and hbar sqrt(omega^2 - v_F^2 k^2) < delta
    Subthreshold,
    /// omega >= v_F k and hbar sqrt(omega^2 - v_F^2 k^2) >= delta
    AboveThreshold,
}

impl KinematicRegion {
    pub fn tag(&self) -> &'static str {
        match self {
            KinematicRegion::Evanescent => "evanescent",
            KinematicRegion::Subthreshold => "subthreshold",
            KinematicRegion::AboveThreshold => "above_threshold",
        }
    }
}

pub fn classify(
    omega: f64,
    k: f64,
    sheet: &GrapheneSheet,
) -> Result<KinematicRegion, GrapheneError> {
    if omega == 0.0 && k == 0.0 {
        return Err(GrapheneError::OriginUndefined);
    }
    let vfk = sheet.v_f * k;
    if omega < vfk {
        return Ok(KinematicRegion::Evanescent);
    }
    let rho = (omega * omega - vfk * vfk).sqrt();
    if HBAR * rho < sheet.delta {
        Ok(KinematicRegion::Subthreshold)
    } else {
        Ok(KinematicRegion::AboveThreshold)
    }
}

/// sqrt(omega^2 - v_F^2 k^2) with the branch that is purely positive-imaginary
/// below the light cone of the sheet (omega < v_F k) and real non-negative on
/// or above it.
pub fn branched_root(omega: f64, k: f64, v_f: f64) -> Complex64 {
    let r2 = omega * omega - v_f * v_f * k * k;
    if r2 >= 0.0 {
        Complex64::new(r2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-r2).sqrt())
    }
}

/// psi(x) = x + (1 - x^2) arctan(1/x), principal branch, with the x -> 0 limit
/// pi/2 filled in.
pub fn psi(x: Complex64) -> Complex64 {
    if x.norm() == 0.0 {
        return Complex64::new(std::f64::consts::FRAC_PI_2, 0.0);
    }
    x + (1.0 - x * x) * (1.0 / x).atan()
}

/// psi on the non-negative real half-line. Large arguments use the asymptotic
/// series because the direct form loses all digits to cancellation.
pub fn psi_real(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    if x < 50.0 {
        return x + (1.0 - x * x) * (1.0 / x).atan();
    }
    // psi(x) = sum_{n>=0} (-1)^n (4n+4)/((2n+1)(2n+3)) x^-(2n+1)
    let x2 = x * x;
    let mut term = 4.0 / 3.0 / x;
    let mut sum = term;
    let mut n = 1.0f64;
    loop {
        term = -term
            * ((4.0 * n + 4.0) * (2.0 * n - 1.0))
            / ((4.0 * n) * (2.0 * n + 3.0))
            / x2;
        sum += term;
        n += 1.0;
        if term.abs() < 1e-18 * sum.abs() || n > 40.0 {
            return sum;
        }
    }
}

/// y - (1 + y^2) artanh(1/y) for y >= 1 (negative), series-protected for large y.
fn sub_bracket(y: f64) -> f64 {
    debug_assert!(y >= 1.0);
    if y < 50.0 {
        return y - (1.0 + y * y) * (1.0 / y).atanh();
    }
    // -(sum_{n>=1} 4n/(4n^2-1) y^(1-2n))
    let y2 = y * y;
    let mut term = (4.0 / 3.0) / y;
    let mut sum = term;
    let mut n = 2.0f64;
    loop {
        term = term * ((4.0 * n) * (4.0 * (n - 1.0) * (n - 1.0) - 1.0))
            / ((4.0 * (n - 1.0)) * (4.0 * n * n - 1.0))
            / y2;
        sum += term;
        n += 1.0;
        if term.abs() < 1e-18 * sum.abs() || n > 40.0 {
            return -sum;
        }
    }
}

/// Temperature independent part of the response, valid on the whole real axis.
pub fn pi_zero_temperature(
    omega: f64,
    k: f64,
    sheet: &GrapheneSheet,
) -> Result<TensorValue, GrapheneError> {
    if k == 0.0 {
        if omega == 0.0 {
            return Err(GrapheneError::OriginUndefined);
        }
        // Both components vanish like k^2.
        return Ok(TensorValue::ZERO);
    }
    let vfk = sheet.v_f * k;
    let dh = sheet.delta / HBAR;
    let k2 = k * k;
    let s2 = vfk * vfk - omega * omega;
    if s2 > 0.0 {
        let s = s2.sqrt();
        let p = psi_real(dh / s);
        return Ok(TensorValue {
            pi00: Complex64::new(2.0 * ALPHA * HBAR * C * k2 * p / s, 0.0),
            pi: Complex64::new(2.0 * ALPHA * HBAR * k2 * s * p / C, 0.0),
        });
    }
    let rho = (-s2).sqrt();
    if rho == 0.0 {
        if sheet.delta > 0.0 {
            // Finite limit at the light-cone seam.
            return Ok(TensorValue {
                pi00: Complex64::new(8.0 / 3.0 * ALPHA * HBAR * HBAR * C * k2 / sheet.delta, 0.0),
                pi: Complex64::new(0.0, 0.0),
            });
        }
        return Err(GrapheneError::ThresholdSingular);
    }
    let y = dh / rho;
    if y >= 1.0 {
        let h = sub_bracket(y);
        Ok(TensorValue {
            pi00: Complex64::new(-2.0 * ALPHA * HBAR * C * k2 * h / rho, 0.0),
            pi: Complex64::new(2.0 * ALPHA * HBAR * k2 * rho * h / C, 0.0),
        })
    } else {
        let g = (1.0 + y * y) * y.atanh() - y;
        let jump = std::f64::consts::PI * (1.0 + y * y) / 2.0;
        Ok(TensorValue {
            pi00: Complex64::new(g, jump) * (2.0 * ALPHA * HBAR * C * k2 / rho),
            pi: Complex64::new(-g, -jump) * (2.0 * ALPHA * HBAR * k2 * rho / C),
        })
    }
}

/// Helper entering the thermal integrands:
/// (x^2 - v_F^2 k^2) / sqrt((omega^2 - v_F^2 k^2)(x^2 - v_F^2 k^2 A)),
/// A = 1 - delta^2/(hbar^2 (omega^2 - v_F^2 k^2)). Each square root takes the
/// positive-imaginary branch on a negative radicand. Inside `thermal` the
/// branch is instead fixed by continuity tracing; this standalone form is the
/// single-valued reference used where no tracing is needed.
pub fn x1(x: f64, omega: f64, k: f64, sheet: &GrapheneSheet) -> Complex64 {
    let (num, den) = x_parts(x, omega, k, sheet);
    num.0 / den
}

/// Companion helper: (hbar^2 (omega^2 - v_F^2 k^2) x^2 + v_F^2 k^2 delta^2)
/// normalized by the same branched denominator (in units where the gap enters
/// as delta/hbar).
pub fn x2(x: f64, omega: f64, k: f64, sheet: &GrapheneSheet) -> Complex64 {
    let (num, den) = x_parts(x, omega, k, sheet);
    num.1 / den
}

fn x_parts(x: f64, omega: f64, k: f64, sheet: &GrapheneSheet) -> ((f64, f64), Complex64) {
    let vfk = sheet.v_f * k;
    let dh = sheet.delta / HBAR;
    let r2 = omega * omega - vfk * vfk;
    let a_fac = 1.0 - dh * dh / r2;
    let root1 = branched_root(omega, k, sheet.v_f);
    let arg2 = x * x - vfk * vfk * a_fac;
    let root2 = if arg2 >= 0.0 {
        Complex64::new(arg2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-arg2).sqrt())
    };
    (
        (x * x - vfk * vfk, r2 * x * x + vfk * vfk * dh * dh),
        root1 * root2,
    )
}

/// Sum of the two Fermi occupation factors at energy hbar*v (v in rad/s):
/// w(v) = sum_{s=+-1} [exp((hbar v + 2 s mu)/(2 k_B T)) + 1]^-1.
/// Overflow-safe: exp saturates to +inf and the term cleanly underflows to 0.
pub fn thermal_weight(v: f64, sheet: &GrapheneSheet) -> f64 {
    let two_t = 2.0 * crate::constants::K_B * sheet.temperature;
    let e = HBAR * v;
    1.0 / (((e - 2.0 * sheet.mu) / two_t).exp() + 1.0)
        + 1.0 / (((e + 2.0 * sheet.mu) / two_t).exp() + 1.0)
}

/// Reduced parameters for one sheet at a common energy scale e0 (in rad/s;
/// the actual scale is hbar*e0).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reduced {
    pub e0: f64,
    pub k: f64,
    pub m: f64,
    pub mu: f64,
    pub t: f64,
}

pub(crate) fn reduce(freq: f64, k: f64, sheet: &GrapheneSheet) -> Reduced {
    let dh = sheet.delta / HBAR;
    let vfk = sheet.v_f * k;
    let e0 = freq.max(vfk).max(dh).max(1e-60);
    Reduced {
        e0,
        k: vfk / e0,
        m: 0.5 * dh / e0,
        mu: sheet.mu / (HBAR * e0),
        t: crate::constants::K_B * sheet.temperature / (HBAR * e0),
    }
}

fn prefactors(e0: f64, v_f: f64) -> (f64, f64) {
    (
        4.0 * ALPHA * HBAR * C / (v_f * v_f) * e0,
        4.0 * ALPHA * HBAR / (C * v_f * v_f) * e0 * e0 * e0,
    )
}

/// Thermal correction on the real frequency axis.
pub fn pi_thermal(
    omega: f64,
    k: f64,
    sheet: &GrapheneSheet,
) -> Result<TensorValue, GrapheneError> {
    let (v, _) = pi_thermal_pair(omega, k, sheet, None)?;
    Ok(v)
}

#[doc(hidden)]
pub static PAIR_CALLS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Thermal corrections for two sheets sharing gap and Fermi velocity (they may
/// differ in mu and temperature). The expensive branch bookkeeping depends only
/// on (omega, k, delta, v_F) and is computed once.
pub fn pi_thermal_pair(
    omega: f64,
    k: f64,
    sheet: &GrapheneSheet,
    other: Option<&GrapheneSheet>,
) -> Result<(TensorValue, Option<TensorValue>), GrapheneError> {
    if let Some(o) = other {
        debug_assert!(o.delta == sheet.delta && o.v_f == sheet.v_f);
    }
    let red = reduce(omega, k, sheet);
    let (pre00, prepi) = prefactors(red.e0, sheet.v_f);
    if omega == 0.0 {
        let one = {
            let (i00, ipi) = matsubara::static_reduced(red.k, red.m, red.mu, red.t)?;
            TensorValue {
                pi00: Complex64::new(pre00 * i00, 0.0),
                pi: Complex64::new(prepi * ipi, 0.0),
            }
        };
        let two = match other {
            None => None,
            Some(o) => {
                let ro = reduce(omega, k, o);
                let (i00, ipi) = matsubara::static_reduced(ro.k, ro.m, ro.mu, ro.t)?;
                Some(TensorValue {
                    pi00: Complex64::new(pre00 * i00, 0.0),
                    pi: Complex64::new(prepi * ipi, 0.0),
                })
            }
        };
        return Ok((one, two));
    }
    let w = omega / red.e0;
    let table = thermal::ThermalTable::new(w, red.k, red.m);
    let (i00, ipi) = table.integrate(red.mu, red.t)?;
    let one = TensorValue {
        pi00: pre00 * i00,
        pi: prepi * ipi,
    };
    let two = match other {
        None => None,
        Some(o) => {
            let ro = reduce(omega, k, o);
            let (j00, jpi) = table.integrate(ro.mu, ro.t)?;
            Some(TensorValue {
                pi00: pre00 * j00,
                pi: prepi * jpi,
            })
        }
    };
    Ok((one, two))
}

/// Full response on the real axis: temperature independent part plus thermal
/// correction.
pub fn pi_real_axis(
    omega: f64,
    k: f64,
    sheet: &GrapheneSheet,
) -> Result<TensorValue, GrapheneError> {
    let vac = pi_zero_temperature(omega, k, sheet)?;
    let th = pi_thermal(omega, k, sheet)?;
    Ok(vac.add(th))
}

/// As `pi_real_axis` for two sheets sharing (delta, v_F).
pub fn pi_real_axis_pair(
    omega: f64,
    k: f64,
    sheet1: &GrapheneSheet,
    sheet2: &GrapheneSheet,
) -> Result<(TensorValue, TensorValue), GrapheneError> {
    let vac = pi_zero_temperature(omega, k, sheet1)?;
    let (t1, t2) = pi_thermal_pair(omega, k, sheet1, Some(sheet2))?;
    Ok((vac.add(t1), vac.add(t2.expect("pair requested"))))
}

/// Full response at imaginary frequency omega = i xi (xi >= 0, k > 0). Both
/// components are real there; xi = 0 returns the finite static limit.
pub fn pi_matsubara(xi: f64, k: f64, sheet: &GrapheneSheet) -> Result<TensorValue, GrapheneError> {
    if k <= 0.0 {
        return Err(GrapheneError::OriginUndefined);
    }
    let vfk = sheet.v_f * k;
    let dh = sheet.delta / HBAR;
    let k2 = k * k;
    // Temperature independent part: the evanescent-sector closed form continues
    // to s = sqrt(v_F^2 k^2 + xi^2) with no branch subtlety.
    let s = (vfk * vfk + xi * xi).sqrt();
    let p = psi_real(dh / s);
    let vac = TensorValue {
        pi00: Complex64::new(2.0 * ALPHA * HBAR * C * k2 * p / s, 0.0),
        pi: Complex64::new(2.0 * ALPHA * HBAR * k2 * s * p / C, 0.0),
    };
    let red = reduce(xi, k, sheet);
    let (pre00, prepi) = prefactors(red.e0, sheet.v_f);
    let (i00, ipi) = if xi == 0.0 {
        matsubara::static_reduced(red.k, red.m, red.mu, red.t)?
    } else {
        matsubara::reduced(xi / red.e0, red.k, red.m, red.mu, red.t)?
    };
    Ok(vac.add(TensorValue {
        pi00: Complex64::new(pre00 * i00, 0.0),
        pi: Complex64::new(prepi * ipi, 0.0),
    }))
}

pub use local::{pi_local, Axis, LocalTensor};

//! Unit conversions and the dimensionless variable mappings shared by the
//! numerical modules. Inputs arrive in laboratory units (eV, K, µm); all
//! internal math is SI.

use crate::constants::{C, EV, HBAR, K_B};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UnitsError {
    #[error("t = ck/omega is undefined at omega = 0")]
    OmegaZero,
}

/// One point of the fluctuation spectrum: angular frequency and in-plane
/// wave-vector magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePoint {
    /// rad/s, >= 0
    pub omega: f64,
    /// 1/m, >= 0
    pub k: f64,
}

pub fn ev_to_joule(e: f64) -> f64 {
    e * EV
}

pub fn joule_to_ev(e: f64) -> f64 {
    e / EV
}

pub fn um_to_m(um: f64) -> f64 {
    um * 1e-6
}

/// Thermal energy k_B T in joules.
pub fn thermal_energy(temp_k: f64) -> f64 {
    K_B * temp_k
}

/// Matsubara frequency xi_l = 2 pi k_B T l / hbar in rad/s.
pub fn matsubara_xi(l: usize, temp_k: f64) -> f64 {
    2.0 * std::f64::consts::PI * K_B * temp_k * (l as f64) / HBAR
}

/// Map (omega, k) to the scaled variables u = 2 a omega / c and t = c k / omega.
pub fn to_dimensionless(p: WavePoint, a: f64) -> Result<(f64, f64), UnitsError> {
    if p.omega <= 0.0 {
        return Err(UnitsError::OmegaZero);
    }
    Ok((2.0 * a * p.omega / C, C * p.k / p.omega))
}

/// Inverse of `to_dimensionless`.
pub fn from_dimensionless(u: f64, t: f64, a: f64) -> WavePoint {
    let omega = C * u / (2.0 * a);
    WavePoint {
        omega,
        k: t * omega / C,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensionless_mapping_examples() {
        let a = 0.5e-6;
        let w = C / (2.0 * a);
        let (u, t) = to_dimensionless(WavePoint { omega: w, k: w / C }, a).unwrap();
        assert!((u - 1.0).abs() < 1e-14 && (t - 1.0).abs() < 1e-14);

        let (u, t) = to_dimensionless(WavePoint { omega: C / a, k: 0.0 }, a).unwrap();
        assert!((u - 2.0).abs() < 1e-14 && t == 0.0);

        let (u, t) = to_dimensionless(
            WavePoint {
                omega: C / (2.0 * a),
                k: 2.0 * w / C,
            },
            a,
        )
        .unwrap();
        assert!((u - 1.0).abs() < 1e-14 && (t - 2.0).abs() < 1e-14);

        assert!(to_dimensionless(WavePoint { omega: 0.0, k: 1.0 }, a).is_err());
    }

    #[test]
    fn round_trips() {
        let a = 1.3e-6;
        let p = WavePoint {
            omega: 7.7e14,
            k: 3.1e6,
        };
        let (u, t) = to_dimensionless(p, a).unwrap();
        let q = from_dimensionless(u, t, a);
        assert!((q.omega - p.omega).abs() / p.omega < 1e-14);
        assert!((q.k - p.k).abs() / p.k < 1e-14);

        let e = 0.731;
        assert!((joule_to_ev(ev_to_joule(e)) - e).abs() / e < 1e-14);
    }
}

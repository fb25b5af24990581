//! Substrate permittivity: tabulated optical data with a dispersion transform
//! to the imaginary axis, and a Lorentz oscillator model as a closed-form
//! alternative.

use num_complex::Complex64;
use quadrature::{integrate, QuadraturePolicy};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use thiserror::Error;

use crate::config::SubstrateSpec;
use crate::constants::{EV, HBAR};

#[derive(Debug, Error)]
pub enum DielectricError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Quadrature(#[from] quadrature::QuadratureError),
}

/// Directory holding bundled data tables: $CASIMIR_DATA_DIR if set, else the
/// `data/` directory at the workspace root.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os("CASIMIR_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

/// Tabulated complex permittivity on a strictly increasing frequency grid.
#[derive(Debug)]
pub struct OpticalTable {
    /// rad/s, strictly increasing.
    omega: Vec<f64>,
    re: Vec<f64>,
    /// >= 0 everywhere.
    im: Vec<f64>,
    kk_cache: Mutex<HashMap<u64, f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TableFormat {
    /// Rows: photon energy (eV), refractive index n, extinction k.
    EvNk,
    /// Rows: angular frequency (rad/s), Re eps, Im eps.
    RadsEps,
}

impl OpticalTable {
    pub fn from_path(path: &Path) -> Result<OpticalTable, DielectricError> {
        let text = std::fs::read_to_string(path).map_err(|e| DielectricError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::from_text(&text)
    }

    /// Parse a whitespace-separated table. Lines starting with '#' are
    /// comments, except a `#format=ev_nk` or `#format=rads_eps` directive,
    /// which is required before the first data row.
    pub fn from_text(text: &str) -> Result<OpticalTable, DielectricError> {
        let mut format: Option<TableFormat> = None;
        let mut omega = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('#') {
                if let Some(tag) = rest.trim().strip_prefix("format=") {
                    format = Some(match tag.trim() {
                        "ev_nk" => TableFormat::EvNk,
                        "rads_eps" => TableFormat::RadsEps,
                        other => {
                            return Err(DielectricError::Parse {
                                line,
                                msg: format!("unknown format {other:?}"),
                            })
                        }
                    });
                }
                continue;
            }
            let Some(fmt) = format else {
                return Err(DielectricError::Parse {
                    line,
                    msg: "data before a #format= directive".into(),
                });
            };
            let cols: Vec<f64> = s
                .split_whitespace()
                .map(|c| {
                    c.parse::<f64>().map_err(|_| DielectricError::Parse {
                        line,
                        msg: format!("not a number: {c:?}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if cols.len() != 3 {
                return Err(DielectricError::Parse {
                    line,
                    msg: format!("expected 3 columns, got {}", cols.len()),
                });
            }
            let (w, er, ei) = match fmt {
                TableFormat::EvNk => {
                    let (ev, n, k) = (cols[0], cols[1], cols[2]);
                    if ev <= 0.0 || n < 0.0 || k < 0.0 {
                        return Err(DielectricError::Parse {
                            line,
                            msg: "need energy > 0 and n, k >= 0".into(),
                        });
                    }
                    (ev * EV / HBAR, n * n - k * k, 2.0 * n * k)
                }
                TableFormat::RadsEps => {
                    let (w, er, ei) = (cols[0], cols[1], cols[2]);
                    if w <= 0.0 {
                        return Err(DielectricError::Parse {
                            line,
                            msg: "need frequency > 0".into(),
                        });
                    }
                    if ei < 0.0 {
                        return Err(DielectricError::Parse {
                            line,
                            msg: "Im eps must be >= 0".into(),
                        });
                    }
                    (w, er, ei)
                }
            };
            if let Some(&prev) = omega.last() {
                if w <= prev {
                    return Err(DielectricError::Parse {
                        line,
                        msg: "frequencies must be strictly increasing".into(),
                    });
                }
            }
            omega.push(w);
            re.push(er);
            im.push(ei);
        }
        if omega.len() < 2 {
            return Err(DielectricError::Invalid(format!(
                "table needs at least 2 rows, got {}",
                omega.len()
            )));
        }
        Ok(OpticalTable {
            omega,
            re,
            im,
            kk_cache: Mutex::new(HashMap::new()),
        })
    }

    fn segment(&self, w: f64) -> usize {
        // Index i with omega[i] <= w < omega[i+1], clamped to valid segments.
        let n = self.omega.len();
        let i = self.omega.partition_point(|&x| x <= w);
        i.clamp(1, n - 1) - 1
    }

    /// Im eps interpolated inside the tabulated range: log-log where both
    /// endpoints are positive, linear in ln(omega) otherwise.
    fn im_interp(&self, w: f64) -> f64 {
        let i = self.segment(w);
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let (y0, y1) = (self.im[i], self.im[i + 1]);
        let t = (w / w0).ln() / (w1 / w0).ln();
        if y0 > 0.0 && y1 > 0.0 {
            (y0.ln() + t * (y1.ln() - y0.ln())).exp()
        } else {
            y0 + t * (y1 - y0)
        }
    }

    fn re_interp(&self, w: f64) -> f64 {
        let i = self.segment(w);
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let t = (w / w0).ln() / (w1 / w0).ln();
        self.re[i] + t * (self.re[i + 1] - self.re[i])
    }

    /// Complex permittivity at real frequency. Outside the tabulated range the
    /// same asymptotic models as the dispersion tails are used: Im ~ omega
    /// below, Im ~ omega^-3 and Re - 1 ~ omega^-2 above.
    pub fn eps_real_axis(&self, omega: f64) -> Complex64 {
        let (w1, wn) = (self.omega[0], *self.omega.last().unwrap());
        if omega < w1 {
            return Complex64::new(self.re[0], self.im[0] * omega / w1);
        }
        if omega > wn {
            let n = self.omega.len() - 1;
            let r = wn / omega;
            return Complex64::new(1.0 + (self.re[n] - 1.0) * r * r, self.im[n] * r * r * r);
        }
        Complex64::new(self.re_interp(omega), self.im_interp(omega))
    }

    /// Permittivity on the imaginary axis from the absorptive data:
    /// eps(i xi) = 1 + (2/pi) int_0^inf w Im eps(w) / (w^2 + xi^2) dw,
    /// with the data extended below the first knot by Im ~ w and above the
    /// last by Im ~ w^-3 so both tails integrate in closed form.
    pub fn eps_imag_axis(&self, xi: f64) -> Result<f64, DielectricError> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(DielectricError::Invalid(format!(
                "imaginary frequency must be finite and >= 0, got {xi}"
            )));
        }
        if let Some(&v) = self.kk_cache.lock().unwrap().get(&xi.to_bits()) {
            return Ok(v);
        }
        let (w1, wn) = (self.omega[0], *self.omega.last().unwrap());
        let (im1, imn) = (self.im[0], *self.im.last().unwrap());

        let below = im1 / w1 * (w1 - xi * (w1 / xi).atan());

        let y = xi / wn;
        // (1/wn - atan(y)/xi) / y^2 without the 0/0 at small y.
        let bracket_over_y2 = if y < 1e-3 {
            (1.0 / 3.0 - y * y / 5.0 + y.powi(4) / 7.0) / wn
        } else {
            (1.0 / wn - y.atan() / xi) / (y * y)
        };
        let above = imn * wn * bracket_over_y2;

        let policy = QuadraturePolicy::default()
            .with_rel_tol(1e-8)
            .with_abs_tol(1e-12)
            .with_max_subdivisions(400)
            .with_breakpoints(self.omega[1..self.omega.len() - 1].to_vec());
        let mid = integrate(
            |w| w * self.im_interp(w) / (w * w + xi * xi),
            w1,
            wn,
            &policy,
        )?
        .value;

        let eps = 1.0 + std::f64::consts::FRAC_2_PI * (below + mid + above);
        self.kk_cache.lock().unwrap().insert(xi.to_bits(), eps);
        Ok(eps)
    }
}

/// Lorentz oscillator permittivity
///   eps(w)    = eps_inf + sum_j f_j w0_j^2 / (w0_j^2 - w^2 - i gamma_j w)
///   eps(i xi) = eps_inf + sum_j f_j w0_j^2 / (w0_j^2 + xi^2 + gamma_j xi)
#[derive(Debug, Clone)]
pub struct OscillatorModel {
    pub eps_inf: f64,
    /// (strength f, resonance w0 rad/s, width gamma rad/s)
    pub terms: Vec<(f64, f64, f64)>,
}

impl OscillatorModel {
    /// Fit to amorphous silica: three infrared lattice resonances and three
    /// ultraviolet electronic ones. Static value 3.81, optical value near 2.1.
    pub fn silica() -> OscillatorModel {
        OscillatorModel {
            eps_inf: 1.0,
            terms: vec![
                (0.70, 8.7e13, 5.0e12),
                (0.25, 1.51e14, 8.0e12),
                (0.76, 2.03e14, 1.2e13),
                (0.60, 1.58e16, 2.0e15),
                (0.35, 1.80e16, 3.0e15),
                (0.15, 2.50e16, 6.0e15),
            ],
        }
    }

    pub fn eps_real_axis(&self, omega: f64) -> Complex64 {
        let mut eps = Complex64::new(self.eps_inf, 0.0);
        for &(f, w0, g) in &self.terms {
            eps += f * w0 * w0 / Complex64::new(w0 * w0 - omega * omega, -g * omega);
        }
        eps
    }

    pub fn eps_imag_axis(&self, xi: f64) -> f64 {
        let mut eps = self.eps_inf;
        for &(f, w0, g) in &self.terms {
            eps += f * w0 * w0 / (w0 * w0 + xi * xi + g * xi);
        }
        eps
    }
}

/// A plate material as seen by the reflection layer.
#[derive(Debug)]
pub enum Permittivity {
    Vacuum,
    Table(OpticalTable),
    Model(OscillatorModel),
}

impl Permittivity {
    pub fn eps_real_axis(&self, omega: f64) -> Complex64 {
        match self {
            Permittivity::Vacuum => Complex64::new(1.0, 0.0),
            Permittivity::Table(t) => t.eps_real_axis(omega),
            Permittivity::Model(m) => m.eps_real_axis(omega),
        }
    }

    pub fn eps_imag_axis(&self, xi: f64) -> Result<f64, DielectricError> {
        match self {
            Permittivity::Vacuum => Ok(1.0),
            Permittivity::Table(t) => t.eps_imag_axis(xi),
            Permittivity::Model(m) => Ok(m.eps_imag_axis(xi)),
        }
    }
}

/// Resolve a substrate choice to a permittivity, loading tables relative to
/// `default_data_dir` when the spec names the bundled material.
pub fn load_substrate(spec: &SubstrateSpec) -> Result<Permittivity, DielectricError> {
    match spec {
        SubstrateSpec::Vacuum => Ok(Permittivity::Vacuum),
        SubstrateSpec::Silica => {
            let path = default_data_dir().join("silica_ev_nk.dat");
            Ok(Permittivity::Table(OpticalTable::from_path(&path)?))
        }
        SubstrateSpec::Path(p) => Ok(Permittivity::Table(OpticalTable::from_path(Path::new(p))?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_formats() {
        let t = OpticalTable::from_text(
            "# comment\n#format=rads_eps\n1.0e14 2.0 0.1\n2.0e14 1.9 0.2\n",
        )
        .unwrap();
        assert_eq!(t.omega.len(), 2);
        let t = OpticalTable::from_text("#format=ev_nk\n1.0 1.5 0.0\n2.0 1.4 0.1\n").unwrap();
        // eps = (n + ik)^2
        assert!((t.re[1] - (1.4 * 1.4 - 0.1 * 0.1)).abs() < 1e-12);
        assert!((t.im[1] - 2.0 * 1.4 * 0.1).abs() < 1e-12);
        assert!((t.omega[0] - EV / HBAR).abs() / (EV / HBAR) < 1e-12);
    }

    #[test]
    fn rejects_bad_tables() {
        let cases = [
            ("1.0e14 2.0 0.1\n", "data before"),
            ("#format=rads_eps\n1.0e14 2.0 0.1\n", "at least 2 rows"),
            ("#format=rads_eps\n1e14 2.0 0.1\n1e14 1.9 0.2\n", "strictly increasing"),
            ("#format=rads_eps\n1e14 2.0 -0.1\n2e14 1.9 0.2\n", "Im eps"),
            ("#format=rads_eps\n1e14 2.0\n", "3 columns"),
            ("#format=nonsense\n", "unknown format"),
        ];
        for (text, needle) in cases {
            let err = OpticalTable::from_text(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err:?} missing {needle:?}");
        }
    }

    #[test]
    fn silica_model_reference_values() {
        let m = OscillatorModel::silica();
        assert!((m.eps_imag_axis(0.0) - 3.81).abs() < 1e-12);
        let opt = m.eps_real_axis(3.0e15).re;
        assert!((1.9..2.3).contains(&opt), "optical eps {opt}");
        // Monotone decrease along the imaginary axis.
        let mut prev = m.eps_imag_axis(0.0);
        for &xi in &[1e13, 1e14, 1e15, 1e16, 1e17] {
            let e = m.eps_imag_axis(xi);
            assert!(e < prev && e > 1.0);
            prev = e;
        }
    }

    /// Dispersion transform of a tabulated Lorentz absorption reproduces the
    /// model's own imaginary-axis form.
    #[test]
    fn dispersion_transform_matches_model() {
        let m = OscillatorModel::silica();
        let n = 12000;
        let (lo, hi) = (1.0e11f64, 1.0e19f64);
        let mut text = String::from("#format=rads_eps\n");
        for i in 0..n {
            let w = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
            let e = m.eps_real_axis(w);
            text.push_str(&format!("{:.12e} {:.12e} {:.12e}\n", w, e.re, e.im));
        }
        let t = OpticalTable::from_text(&text).unwrap();
        for &xi in &[0.0, 1.0e12, 1.0e13, 1.0e14, 1.0e15, 1.0e16, 1.0e17] {
            let got = t.eps_imag_axis(xi).unwrap();
            let want = m.eps_imag_axis(xi);
            let rel = (got - want).abs() / want;
            let tol = if xi == 0.0 { 3e-4 } else { 1e-4 };
            assert!(rel < tol, "xi={xi:.2e}: got {got}, want {want}, rel {rel:.2e}");
        }
        // Second query hits the cache and must be identical.
        assert_eq!(t.eps_imag_axis(1.0e15).unwrap(), t.eps_imag_axis(1.0e15).unwrap());
    }
}

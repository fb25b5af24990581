//! Reference-value tests for the sheet response.
//!
//! The reduced thermal integrals are pinned against values computed with an
//! independent implementation; tolerances reflect that implementation's own
//! integration accuracy. Closed-form limits are checked at much tighter
//! tolerances.

use casimir::constants::{ALPHA, C, HBAR};
use casimir::graphene::{
    matsubara, pi_local, pi_matsubara, pi_real_axis, pi_zero_temperature, psi, psi_real,
    thermal::ThermalTable, Axis, GrapheneSheet,
};
use num_complex::Complex64;

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let denom = want.abs().max(1e-300);
    let rel = (got - want).abs() / denom;
    assert!(
        rel <= tol,
        "{what}: got {got:.12e}, want {want:.12e}, rel err {rel:.3e} > {tol:.1e}"
    );
}

fn assert_c_rel(got: Complex64, want: Complex64, tol: f64, what: &str) {
    let denom = want.norm().max(1e-300);
    let rel = (got - want).norm() / denom;
    assert!(
        rel <= tol,
        "{what}: got {got:.12e}, want {want:.12e}, rel err {rel:.3e} > {tol:.1e}"
    );
}

/// Reduced thermal integrals on the real axis against pinned reference values.
/// Columns: w, k, m, mu, t, Re I00, Im I00, Re IPi, Im IPi.
#[test]
fn real_axis_thermal_pins() {
    #[rustfmt::skip]
    let pins: [(&str, [f64; 5], [f64; 4]); 10] = [
        ("evan_deep",  [0.3, 1.0, 0.35, 0.2, 0.5],
         [8.714194343845e-01, 3.575201872163e-01, -1.641010887179e-01, -3.812959721387e-01]),
        ("evan_flip",  [0.8, 1.0, 0.35, 0.2, 0.5],
         [5.877064348061e-01, 1.658297837590e+00, 6.737491339116e-01, -5.407593674621e-01]),
        ("evan_doped", [1.6, 2.0, 0.3, 1.2, 0.5],
         [9.568447046662e-01, 2.578279904730e+00, 4.619515742579e+00, -5.381404056760e+00]),
        ("sub_deep",   [1.1, 1.0, 0.8, 0.2, 0.5],
         [-5.048365879289e-01, 0.0, 3.635208376782e-01, 0.0]),
        ("sub_negx",   [1.0, 0.95, 0.2, 0.1, 0.5],
         [-2.824482391059e+00, 0.0, 8.841879135429e-01, 0.0]),
        ("abov_nthr",  [1.2410580163715152, 1.0, 0.35, 0.2, 0.5],
         [-1.203650713806e+00, -9.528480161824e-01, 9.781226071453e-01, 5.149694375929e-01]),
        ("abov_deep",  [2.0, 1.0, 0.3, 0.4, 0.5],
         [-2.683612295335e-02, -1.561358318709e-01, 2.179601476935e-01, 5.044575360937e-01]),
        ("abov_far",   [3.0, 1.0, 0.2, 0.0, 0.5],
         [1.173823405218e-02, -2.986862847276e-02, -5.917093120176e-02, 2.840909995121e-01]),
        ("gapless_ev", [0.6, 1.5, 1e-4, 0.3, 0.5],
         [6.116731158902e-01, 3.694338121636e-01, -6.850943679908e-01, -1.330225939350e+00]),
        ("gapless_ab", [1.5, 1.0, 1e-4, 0.3, 0.5],
         [-1.927969696786e-01, -2.934821517803e-01, 4.996564814939e-01, 4.001338064480e-01]),
    ];
    for (name, [w, k, m, mu, t], [re00, im00, repi, impi]) in pins {
        let table = ThermalTable::new(w, k, m);
        let (i00, ipi) = table.integrate(mu, t).unwrap();
        assert_c_rel(i00, Complex64::new(re00, im00), 5e-5, &format!("{name} I00"));
        assert_c_rel(ipi, Complex64::new(repi, impi), 5e-5, &format!("{name} IPi"));
    }
}

/// Reduced thermal integrals at imaginary frequency against pinned values.
#[test]
fn matsubara_thermal_pins() {
    #[rustfmt::skip]
    let pins: [([f64; 5], [f64; 2]); 3] = [
        ([0.5, 1.0, 0.35, 0.2, 0.5], [4.050352312189e-01, 7.998986420326e-02]),
        ([2.0, 0.7, 0.1, 0.6, 0.5], [2.711596184470e-02, 1.039289501467e-01]),
        ([0.05, 1.0, 0.0, 0.0, 0.5], [7.133480836775e-01, -4.004813708088e-01]),
    ];
    for ([xi, k, m, mu, t], [i00_want, ipi_want]) in pins {
        let (i00, ipi) = matsubara::reduced(xi, k, m, mu, t).unwrap();
        assert_rel(i00, i00_want, 1e-7, &format!("matsubara I00 xi={xi}"));
        assert_rel(ipi, ipi_want, 1e-7, &format!("matsubara IPi xi={xi}"));
    }
}

/// Static-limit reduced integrals against pinned values.
#[test]
fn static_thermal_pins() {
    #[rustfmt::skip]
    let pins: [([f64; 4], [f64; 2]); 2] = [
        ([1.0, 0.35, 0.2, 0.5], [8.800717193217e-01, -3.018984487178e-01]),
        ([0.6, 0.0, 0.4, 0.5], [1.121952548881e+00, -1.331830075513e-01]),
    ];
    for ([k, m, mu, t], [i00_want, ipi_want]) in pins {
        let (i00, ipi) = matsubara::static_reduced(k, m, mu, t).unwrap();
        assert_rel(i00, i00_want, 1e-7, &format!("static I00 k={k}"));
        assert_rel(ipi, ipi_want, 1e-7, &format!("static IPi k={k}"));
    }
}

#[test]
fn psi_closed_values() {
    assert!((psi_real(0.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((psi_real(1.0) - 1.0).abs() < 1e-15);
    assert_rel(psi_real(2.0), 0.6090571729975816, 1e-14, "psi(2)");
    // Series and direct form agree across the switchover.
    assert_rel(psi_real(49.999), psi_real(50.001) * (psi_real(49.999) / psi_real(50.001)), 1e-12, "psi cont");
    let direct = 49.0 + (1.0 - 49.0 * 49.0) * (1.0f64 / 49.0).atan();
    assert_rel(psi_real(49.0), direct, 1e-9, "psi(49) direct");
    // Complex version agrees with the real one on the real line.
    let z = psi(Complex64::new(2.0, 0.0));
    assert_rel(z.re, psi_real(2.0), 1e-12, "psi complex vs real");
    assert!(z.im.abs() < 1e-15);
}

/// Gapless sheet exactly between the sheet light cone and far field:
/// omega = 2 v_F k gives a purely imaginary density response
/// i pi alpha hbar c k / (sqrt(3) v_F).
#[test]
fn gapless_closed_point() {
    let sheet = GrapheneSheet::from_lab(0.0, 0.0, 1.0 / 300.0, 300.0);
    let k = 1.0e7;
    let omega = 2.0 * sheet.v_f * k;
    let v = pi_zero_temperature(omega, k, &sheet).unwrap();
    let want = std::f64::consts::PI * ALPHA * HBAR * C * k / (3.0f64.sqrt() * sheet.v_f);
    assert!(v.pi00.re.abs() < 1e-12 * want);
    assert_rel(v.pi00.im, want, 1e-12, "gapless pi00 at omega = 2 v_F k");
}

/// Large gap suppresses the temperature independent response as 1/gap.
#[test]
fn large_gap_decay() {
    let k = 1.0e7;
    let omega = 0.0;
    let s1 = GrapheneSheet::from_lab(1.0, 0.0, 1.0 / 300.0, 1.0);
    let s2 = GrapheneSheet::from_lab(2.0, 0.0, 1.0 / 300.0, 1.0);
    let a = pi_zero_temperature(omega, k, &s1).unwrap().pi00.re;
    let b = pi_zero_temperature(omega, k, &s2).unwrap().pi00.re;
    assert_rel(a / b, 2.0, 1e-3, "pi00 ~ 1/gap");
}

/// Undoped cold sheet at imaginary frequency: closed form
/// pi alpha hbar c k^2 / sqrt(v_F^2 k^2 + xi^2).
#[test]
fn matsubara_undoped_closed_form() {
    let sheet = GrapheneSheet::from_lab(0.0, 0.0, 1.0 / 300.0, 1e-6);
    for &xi in &[1.0e12, 1.0e14, 3.0e15] {
        for &k in &[1.0e5, 1.0e7, 5.0e8] {
            let v = pi_matsubara(xi, k, &sheet).unwrap();
            let s = (sheet.v_f * sheet.v_f * k * k + xi * xi).sqrt();
            let want = std::f64::consts::PI * ALPHA * HBAR * C * k * k / s;
            assert_rel(v.pi00.re, want, 1e-8, "undoped matsubara pi00");
            let want_pi = std::f64::consts::PI * ALPHA * HBAR * k * k * s / C;
            assert_rel(v.pi.re, want_pi, 1e-8, "undoped matsubara pi");
        }
    }
}

/// The spatially local coefficient reproduces the full tensor once
/// v_F k << omega (real axis) or v_F k << xi (imaginary axis).
#[test]
fn local_limit_agrees_with_full() {
    let sheet = GrapheneSheet::from_lab(0.1, 0.25, 1.0 / 300.0, 300.0);
    let omega = 1.0e15;
    let k = 1.0e-3 * omega / sheet.v_f;
    let full = pi_real_axis(omega, k, &sheet).unwrap();
    let loc = pi_local(Axis::Real(omega), &sheet).unwrap();
    let (c00, cpi) = loc.at_k(k);
    assert_c_rel(c00, full.pi00, 2e-3, "local vs full pi00, real axis");
    assert_c_rel(cpi, full.pi, 2e-3, "local vs full pi, real axis");

    let xi = 7.0e14;
    let k = 1.0e-3 * xi / sheet.v_f;
    let full = pi_matsubara(xi, k, &sheet).unwrap();
    let loc = pi_local(Axis::Imag(xi), &sheet).unwrap();
    let (c00, cpi) = loc.at_k(k);
    assert_c_rel(c00, full.pi00, 2e-3, "local vs full pi00, imaginary axis");
    assert_c_rel(cpi, full.pi, 2e-3, "local vs full pi, imaginary axis");

    let k = 1.0e2;
    let full = pi_matsubara(0.0, k, &sheet).unwrap();
    let loc = pi_local(Axis::Imag(0.0), &sheet).unwrap();
    let (c00, cpi) = loc.at_k(k);
    assert_c_rel(c00, full.pi00, 2e-3, "local vs full pi00, static");
    assert!(cpi.norm() <= 1e-6 * full.pi00.norm(), "static trace part vanishes");
}

/// Gapless sheet: the imaginary part of the local density coefficient obeys
/// Im c00 = pi alpha hbar c (1 - w(omega)) / omega, the occupation-blocking
/// form of the universal sheet conductivity.
#[test]
fn local_occupation_blocking() {
    let sheet = GrapheneSheet::from_lab(0.0, 0.15, 1.0 / 300.0, 350.0);
    for &omega in &[2.0e14, 8.0e14, 3.0e15] {
        let loc = pi_local(Axis::Real(omega), &sheet).unwrap();
        let kt2 = 2.0 * casimir::constants::K_B * sheet.temperature;
        let w = 1.0 / (((HBAR * omega - 2.0 * sheet.mu) / kt2).exp() + 1.0)
            + 1.0 / (((HBAR * omega + 2.0 * sheet.mu) / kt2).exp() + 1.0);
        let want = std::f64::consts::PI * ALPHA * HBAR * C * (1.0 - w) / omega;
        assert_rel(loc.c00.im, want, 1e-9, "occupation-blocked Im c00");
    }
}

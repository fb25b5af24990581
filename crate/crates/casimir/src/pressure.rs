//! Casimir pressure between two parallel plates, in and out of thermal
//! equilibrium.
//!
//! Pressures are in pascals; negative values mean the plates attract. The
//! out-of-equilibrium pressure splits into a quasi-equilibrium part (the mean
//! of the two equilibrium expressions taken at each plate temperature, with
//! every sheet kept at its own temperature) plus a correction driven by the
//! difference of the thermal photon populations on the real frequency axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use quadrature::{
    integrate, integrate_semi_infinite, sum_until_converged, QuadratureError, QuadraturePolicy,
    TailRule,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::{C, HBAR, K_B};
use crate::fresnel::{
    per_k2, rtm_rte_matsubara, rtm_rte_real, tensor_per_k2, FresnelError, Plate, TensorMode,
    AUTO_IMAG_AXIS_RATIO, AUTO_REAL_AXIS_RATIO,
};
use crate::graphene::{
    pi_local, pi_matsubara, pi_real_axis, pi_real_axis_pair, Axis, GrapheneError, LocalTensor,
};
use crate::units::matsubara_xi;

pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Floor for squared multiple-reflection denominators. Physical inputs keep
/// |1 - r1 r2 phase|^2 far above this; the floor only guards lossless
/// mirror-like limits against division blowup.
const D2_FLOOR: f64 = 1e-24;

#[derive(Debug, Error)]
pub enum PressureError {
    #[error(transparent)]
    Fresnel(#[from] FresnelError),
    #[error(transparent)]
    Graphene(#[from] GrapheneError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<crate::dielectric::DielectricError> for PressureError {
    fn from(e: crate::dielectric::DielectricError) -> Self {
        PressureError::Fresnel(FresnelError::Dielectric(e))
    }
}

/// Trilogarithm on [0, 1] by direct series; li3(1) returns zeta(3).
pub fn li3(x: f64) -> f64 {
    if x == 1.0 {
        return ZETA3;
    }
    let mut sum = 0.0;
    let mut xn = x;
    let mut n = 1.0f64;
    loop {
        let term = xn / (n * n * n);
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() || term == 0.0 {
            return sum;
        }
        xn *= x;
        n += 1.0;
    }
}

/// Large-separation limit for two identical bare half-spaces with static
/// permittivity `eps0`: only the zero-frequency TM term survives.
pub fn p_classical(a: f64, temp_k: f64, eps0: f64) -> f64 {
    let r0 = (eps0 - 1.0) / (eps0 + 1.0);
    -(K_B * temp_k) / (8.0 * PI * a.powi(3)) * li3(r0 * r0)
}

fn check_sheet_temp(plate: &Plate, temp_k: f64, which: &str) -> Result<(), PressureError> {
    if let Some(s) = &plate.sheet {
        if s.temperature != temp_k {
            return Err(PressureError::Invalid(format!(
                "{which} sheet occupation is at {} K but the plate is assigned {} K",
                s.temperature, temp_k
            )));
        }
    }
    Ok(())
}

/// Per-frequency state reused across the wavenumber integral of one
/// Matsubara term.
struct ImagCtx<'a> {
    plate: &'a Plate,
    xi: f64,
    eps: f64,
    local: Option<LocalTensor>,
    mode: TensorMode,
}

impl<'a> ImagCtx<'a> {
    fn new(plate: &'a Plate, xi: f64, mode: TensorMode) -> Result<Self, PressureError> {
        let eps = plate.permittivity.eps_imag_axis(xi)?;
        let local = match (&plate.sheet, mode) {
            (Some(sheet), TensorMode::LocalOnly | TensorMode::Auto) => {
                Some(pi_local(Axis::Imag(xi), sheet)?)
            }
            _ => None,
        };
        Ok(ImagCtx {
            plate,
            xi,
            eps,
            local,
            mode,
        })
    }

    fn reflect(&self, k: f64) -> Result<(f64, f64), PressureError> {
        let (c00, cpi) = match &self.plate.sheet {
            None => (0.0, 0.0),
            Some(sheet) => {
                let use_local = match self.mode {
                    TensorMode::LocalOnly => true,
                    TensorMode::Full => false,
                    TensorMode::Auto => sheet.v_f * k <= AUTO_IMAG_AXIS_RATIO * self.xi,
                };
                let (c00, cpi) = if use_local {
                    per_k2(self.local.as_ref().expect("local tensor prepared"), k)
                } else {
                    tensor_per_k2(&pi_matsubara(self.xi, k, sheet)?, k)
                };
                (c00.re, cpi.re)
            }
        };
        Ok(rtm_rte_matsubara(self.xi, k, self.eps, c00, cpi))
    }
}

/// One equilibrium-form pressure evaluation.
#[derive(Debug, Clone, Copy)]
pub struct BlockResult {
    /// Pa; negative attracts.
    pub pressure: f64,
    /// Matsubara terms actually summed.
    pub matsubara_terms: usize,
    /// Accumulated wavenumber-quadrature error estimate, Pa.
    pub err_est: f64,
}

fn block_term(
    a: f64,
    l: usize,
    temp_k: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
    err_acc: &mut f64,
) -> Result<f64, PressureError> {
    let xi = matsubara_xi(l, temp_k);
    let zl = 2.0 * a * xi / C;
    let ctx1 = ImagCtx::new(p1, xi, mode)?;
    let ctx2 = ImagCtx::new(p2, xi, mode)?;

    // In Auto mode the sheet evaluation switches from local to full where
    // v_F k = AUTO_IMAG_AXIS_RATIO * xi; in the z variable that is a fixed
    // multiple of z_l.
    let mut brk: Vec<f64> = Vec::new();
    if zl > 0.0 && mode == TensorMode::Auto {
        for p in [p1, p2] {
            if let Some(s) = &p.sheet {
                let r = AUTO_IMAG_AXIS_RATIO * C / s.v_f;
                let z_star = zl * (1.0 + r * r).sqrt();
                if !brk.contains(&z_star) {
                    brk.push(z_star);
                }
            }
        }
    }
    let policy = QuadraturePolicy::default()
        .with_rel_tol(1e-9)
        .with_abs_tol(1e-15)
        .with_breakpoints(brk)
        .with_max_subdivisions(400)
        .with_tail(TailRule::Exponential(1.0));

    let mut slot: Option<PressureError> = None;
    let est = integrate_semi_infinite(
        |z| {
            if slot.is_some() {
                return 0.0;
            }
            let k = ((z - zl) * (z + zl)).max(0.0).sqrt() / (2.0 * a);
            if k <= 0.0 {
                return 0.0;
            }
            let pair = ctx1.reflect(k).and_then(|r1| ctx2.reflect(k).map(|r2| (r1, r2)));
            match pair {
                Err(e) => {
                    slot = Some(e);
                    0.0
                }
                Ok(((r1tm, r1te), (r2tm, r2te))) => {
                    let e = (-z).exp();
                    let geometric = |rr: f64| {
                        let x = rr * e;
                        x / (1.0 - x)
                    };
                    z * z * (geometric(r1tm * r2tm) + geometric(r1te * r2te))
                }
            }
        },
        zl,
        &policy,
    );
    if let Some(e) = slot {
        return Err(e);
    }
    let est = est?;
    *err_acc += est.err_est;
    Ok(est.value)
}

/// Equilibrium-form pressure at Matsubara temperature `temp_k` with the given
/// plates; sheet occupations stay whatever the plates carry. This is the
/// building block of both the equilibrium and the quasi-equilibrium pressure.
pub fn lifshitz_block(
    a: f64,
    temp_k: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
) -> Result<BlockResult, PressureError> {
    lifshitz_block_with_min_terms(a, temp_k, p1, p2, mode, 0)
}

/// As `lifshitz_block`, forcing at least `extra_min_terms` Matsubara terms.
/// Used for truncation-convergence checks.
pub fn lifshitz_block_with_min_terms(
    a: f64,
    temp_k: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
    extra_min_terms: usize,
) -> Result<BlockResult, PressureError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(PressureError::Invalid(format!(
            "separation must be positive and finite, got {a}"
        )));
    }
    if !(temp_k > 0.0 && temp_k.is_finite()) {
        return Err(PressureError::Invalid(format!(
            "Matsubara temperature must be positive, got {temp_k}"
        )));
    }
    let z1 = 4.0 * PI * a * K_B * temp_k / (HBAR * C);
    let min_terms = 10usize
        .max((30.0 / z1).ceil() as usize)
        .max(extra_min_terms);

    let mut slot: Option<PressureError> = None;
    let mut err_acc = 0.0f64;
    let sum_policy = QuadraturePolicy::default();
    let summed = sum_until_converged(
        |l| {
            if slot.is_some() {
                return 0.0;
            }
            match block_term(a, l, temp_k, p1, p2, mode, &mut err_acc) {
                Ok(v) => {
                    if l == 0 {
                        0.5 * v
                    } else {
                        v
                    }
                }
                Err(e) => {
                    slot = Some(e);
                    0.0
                }
            }
        },
        &sum_policy,
        min_terms,
        1e-10,
    );
    if let Some(e) = slot {
        return Err(e);
    }
    let (total, used) = summed?;
    let pref = -(K_B * temp_k) / (8.0 * PI * a.powi(3));
    Ok(BlockResult {
        pressure: pref * total,
        matsubara_terms: used,
        err_est: pref.abs() * err_acc,
    })
}

/// Equilibrium pressure at temperature `temp_k`. Every sheet must carry that
/// same occupation temperature.
pub fn p_eq(
    a: f64,
    temp_k: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
) -> Result<BlockResult, PressureError> {
    check_sheet_temp(p1, temp_k, "plate 1")?;
    check_sheet_temp(p2, temp_k, "plate 2")?;
    lifshitz_block(a, temp_k, p1, p2, mode)
}

fn bose(u: f64, a: f64, temp_k: f64) -> f64 {
    if temp_k <= 0.0 {
        return 0.0;
    }
    let x = HBAR * C * u / (2.0 * a * K_B * temp_k);
    1.0 / x.exp_m1()
}

/// Per-frequency state shared by the two plates on the real axis. When both
/// sheets agree in (gap, v_F) the full-dispersion evaluation reuses one
/// branch-traced table for both occupations.
struct RealPairCtx<'a> {
    p1: &'a Plate,
    p2: &'a Plate,
    omega: f64,
    eps1: Complex64,
    eps2: Complex64,
    loc1: Option<LocalTensor>,
    loc2: Option<LocalTensor>,
    mode: TensorMode,
    share: bool,
}

impl<'a> RealPairCtx<'a> {
    fn new(
        p1: &'a Plate,
        p2: &'a Plate,
        omega: f64,
        mode: TensorMode,
    ) -> Result<Self, PressureError> {
        let local_of = |p: &Plate| -> Result<Option<LocalTensor>, PressureError> {
            match (&p.sheet, mode) {
                (Some(s), TensorMode::LocalOnly | TensorMode::Auto) => {
                    Ok(Some(pi_local(Axis::Real(omega), s)?))
                }
                _ => Ok(None),
            }
        };
        let share = match (&p1.sheet, &p2.sheet) {
            (Some(s1), Some(s2)) => s1.delta == s2.delta && s1.v_f == s2.v_f,
            _ => false,
        };
        Ok(RealPairCtx {
            p1,
            p2,
            omega,
            eps1: p1.permittivity.eps_real_axis(omega),
            eps2: p2.permittivity.eps_real_axis(omega),
            loc1: local_of(p1)?,
            loc2: local_of(p2)?,
            mode,
            share,
        })
    }

    fn wants_full(&self, plate: &Plate, k: f64) -> bool {
        match (&plate.sheet, self.mode) {
            (None, _) => false,
            (_, TensorMode::LocalOnly) => false,
            (Some(_), TensorMode::Full) => true,
            (Some(s), TensorMode::Auto) => s.v_f * k > AUTO_REAL_AXIS_RATIO * self.omega,
        }
    }

    fn coat(
        &self,
        plate: &Plate,
        local: &Option<LocalTensor>,
        full: bool,
        k: f64,
    ) -> Result<(Complex64, Complex64), PressureError> {
        match &plate.sheet {
            None => Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))),
            Some(s) => {
                if full {
                    let v = pi_real_axis(self.omega, k, s);
                    if let Err(e) = &v {
                        eprintln!(
                            "pi_real_axis failed: omega={:e} k={k:e} delta={:e} mu={:e} T={} err={e:?}",
                            self.omega, s.delta, s.mu, s.temperature
                        );
                    }
                    Ok(tensor_per_k2(&v?, k))
                } else {
                    Ok(per_k2(local.as_ref().expect("local tensor prepared"), k))
                }
            }
        }
    }

    /// ((r1_tm, r1_te), (r2_tm, r2_te)) at t = c k / omega.
    #[allow(clippy::type_complexity)]
    fn reflect_pair(
        &self,
        t: f64,
    ) -> Result<((Complex64, Complex64), (Complex64, Complex64)), PressureError> {
        let k = t * self.omega / C;
        let full1 = self.wants_full(self.p1, k);
        let full2 = self.wants_full(self.p2, k);
        let (c1, c2) = if full1 && full2 && self.share {
            let s1 = self.p1.sheet.as_ref().expect("share implies sheets");
            let s2 = self.p2.sheet.as_ref().expect("share implies sheets");
            let pair = pi_real_axis_pair(self.omega, k, s1, s2);
            if let Err(e) = &pair {
                eprintln!("pair failed: omega={:e} k={k:e} err={e:?}", self.omega);
            }
            let (v1, v2) = pair?;
            (tensor_per_k2(&v1, k), tensor_per_k2(&v2, k))
        } else {
            (
                self.coat(self.p1, &self.loc1, full1, k)?,
                self.coat(self.p2, &self.loc2, full2, k)?,
            )
        };
        let scale00 = self.omega / (HBAR * C);
        let scalepi = C / (self.omega * HBAR);
        let r1 = rtm_rte_real(t, self.eps1, c1.0 * scale00, c1.1 * scalepi);
        let r2 = rtm_rte_real(t, self.eps2, c2.0 * scale00, c2.1 * scalepi);
        Ok((r1, r2))
    }
}

/// Integrand of the population-difference correction at one dimensionless
/// frequency u = 2 a omega / c.
fn neq_kernel(
    u: f64,
    a: f64,
    t1: f64,
    t2: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
    rel_tol: f64,
) -> Result<f64, PressureError> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    let dn = bose(u, a, t1) - bose(u, a, t2);
    let u3dn = u.powi(3) * dn;
    // The angular brackets stay O(1-1e3); below this weight the point cannot
    // move the u integral at its 1e-7 tolerance.
    if u3dn.abs() < 1e-16 {
        return Ok(0.0);
    }
    let omega = C * u / (2.0 * a);
    let ctx = RealPairCtx::new(p1, p2, omega, mode)?;
    // Graphene coatings leave a small noise floor on the reflection
    // coefficients near the dispatch seam; accept a stalled estimate one and
    // a half orders above the target rather than fail the whole pressure.
    let inner = QuadraturePolicy::default()
        .with_rel_tol(rel_tol)
        .with_abs_tol(1e-13)
        .with_plateau((30.0 * rel_tol).min(1e-2), 0.0)
        .with_max_subdivisions(300);

    // Travelling sector, t in (0, 1): phase factor of unit modulus.
    let mut slot: Option<PressureError> = None;
    let prop = integrate(
        |t| {
            if slot.is_some() {
                return 0.0;
            }
            match ctx.reflect_pair(t) {
                Err(e) => {
                    slot = Some(e);
                    0.0
                }
                Ok(((r1tm, r1te), (r2tm, r2te))) => {
                    let cos = (1.0 - t * t).max(0.0).sqrt();
                    let phase = Complex64::from_polar(1.0, u * cos);
                    let dtm = (1.0 - r1tm * r2tm * phase).norm_sqr().max(D2_FLOOR);
                    let dte = (1.0 - r1te * r2te * phase).norm_sqr().max(D2_FLOOR);
                    t * cos
                        * ((r2tm.norm_sqr() - r1tm.norm_sqr()) / dtm
                            + (r2te.norm_sqr() - r1te.norm_sqr()) / dte)
                }
            }
        },
        0.0,
        1.0,
        &inner,
    );
    if let Some(e) = slot.take() {
        return Err(e);
    }
    let prop = prop?;

    // Evanescent sector, t = sqrt(1 + s^2): exponentially damped round trip.
    // The reflection structure sits at s = O(1-300) while the damping hump
    // sits at s ~ 2/u, so integrate in sigma = ln(1 + s) where both features
    // are O(1) wide. Beyond u s = 60 the weight is below double precision.
    // The Auto dispatch seam v_F k = AUTO_REAL_AXIS_RATIO * omega sits at a
    // fixed s independent of u.
    let mut seams: Vec<f64> = Vec::new();
    if ctx.mode == TensorMode::Auto {
        for p in [p1, p2] {
            if let Some(sh) = &p.sheet {
                let t_star = AUTO_REAL_AXIS_RATIO * C / sh.v_f;
                if t_star > 1.0 {
                    let sigma_star = (t_star * t_star - 1.0).sqrt().ln_1p();
                    if !seams.contains(&sigma_star) {
                        seams.push(sigma_star);
                    }
                }
            }
        }
    }
    let sigma_max = (60.0 / u).ln_1p();
    let evan_policy = inner
        .clone()
        .with_breakpoints(seams)
        .with_max_subdivisions(400);
    let evan = integrate(
        |sigma| {
            if slot.is_some() {
                return 0.0;
            }
            let s = sigma.exp_m1();
            if s <= 0.0 {
                return 0.0;
            }
            let t = (1.0 + s * s).sqrt();
            match ctx.reflect_pair(t) {
                Err(e) => {
                    slot = Some(e);
                    0.0
                }
                Ok(((r1tm, r1te), (r2tm, r2te))) => {
                    let damp = (-u * s).exp();
                    let dtm = (1.0 - r1tm * r2tm * damp).norm_sqr().max(D2_FLOOR);
                    let dte = (1.0 - r1te * r2te * damp).norm_sqr().max(D2_FLOOR);
                    let jacobian = 1.0 + s;
                    s * s
                        * damp
                        * jacobian
                        * ((r1tm * r2tm.conj()).im / dtm + (r1te * r2te.conj()).im / dte)
                }
            }
        },
        0.0,
        sigma_max,
        &evan_policy,
    );
    if let Some(e) = slot {
        return Err(e);
    }
    let evan = evan?;
    Ok(u3dn * (prop.value - 2.0 * evan.value))
}

#[doc(hidden)]
pub fn neq_kernel_probe(
    u: f64,
    a: f64,
    t1: f64,
    t2: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
    rel_tol: f64,
) -> Result<f64, PressureError> {
    neq_kernel(u, a, t1, t2, p1, p2, mode, rel_tol)
}

/// Correction to the quasi-equilibrium pressure from the difference of the
/// two plate photon populations; exactly zero when `t1 == t2`. Returns
/// (pressure, quadrature error estimate), both Pa.
pub fn delta_p_neq(
    a: f64,
    t1: f64,
    t2: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
) -> Result<(f64, f64), PressureError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(PressureError::Invalid(format!(
            "separation must be positive and finite, got {a}"
        )));
    }
    if !(t1 >= 0.0 && t2 >= 0.0) {
        return Err(PressureError::Invalid(format!(
            "temperatures must be non-negative, got {t1} and {t2}"
        )));
    }
    check_sheet_temp(p1, t1, "plate 1")?;
    check_sheet_temp(p2, t2, "plate 2")?;
    if t1 == t2 {
        return Ok((0.0, 0.0));
    }

    // Populations die as exp(-u / u_th); 45 thermal scales is past double
    // precision. The first panel isolates the integrable u -> 0 corner.
    let u_th = 2.0 * a * K_B * t1.max(t2) / (HBAR * C);
    let u_min = 1e-3 * u_th;
    let u_max = 45.0 * u_th;
    const PANELS: usize = 28;
    let mut edges = Vec::with_capacity(PANELS + 2);
    edges.push(0.0);
    let ratio = (u_max / u_min).powf(1.0 / PANELS as f64);
    for i in 0..PANELS {
        edges.push(u_min * ratio.powi(i as i32));
    }
    edges.push(u_max);

    // In the u -> 0 corner the surface-mode resonances of the evanescent
    // sector become loss-limited needles; that panel contributes below 1e-6
    // of the total, so it runs at a loose tolerance instead of fighting them.
    // Elsewhere the panel tolerance stays an order above the inner-integral
    // tolerance, which bounds the noise floor of the kernel.
    let spans: Vec<(f64, f64, f64, f64)> = edges
        .windows(2)
        .map(|w| {
            if w[1] <= u_min {
                (w[0], w[1], 1e-3, 1e-3)
            } else {
                (w[0], w[1], 1e-6, 1e-7)
            }
        })
        .collect();
    let parts: Result<Vec<(f64, f64)>, PressureError> = spans
        .par_iter()
        .map(|&(lo, hi, rel, inner_rel)| {
            let panel_policy = QuadraturePolicy::default()
                .with_rel_tol(rel)
                .with_abs_tol(1e-14)
                .with_plateau((30.0 * rel).min(1e-2), 0.0)
                .with_max_subdivisions(200);
            let mut slot: Option<PressureError> = None;
            let est = integrate(
                |u| {
                    if slot.is_some() {
                        return 0.0;
                    }
                    match neq_kernel(u, a, t1, t2, p1, p2, mode, inner_rel) {
                        Ok(v) => v,
                        Err(e) => {
                            slot = Some(e);
                            0.0
                        }
                    }
                },
                lo,
                hi,
                &panel_policy,
            );
            if let Some(e) = slot {
                return Err(e);
            }
            let est = est?;
            Ok((est.value, est.err_est))
        })
        .collect();
    let parts = parts?;
    let pref = HBAR * C / (64.0 * PI * PI * a.powi(4));
    let value: f64 = parts.iter().map(|p| p.0).sum::<f64>();
    let err: f64 = parts.iter().map(|p| p.1).sum::<f64>();
    Ok((pref * value, pref * err))
}

/// Out-of-equilibrium pressure decomposition. `p_neq = p_qeq + delta_p_neq`
/// holds exactly; at `t1 == t2` it reduces bit-for-bit to the equilibrium
/// pressure.
#[derive(Debug, Clone, Copy)]
pub struct PressureBreakdown {
    pub p_qeq: f64,
    pub delta_p_neq: f64,
    pub p_neq: f64,
    pub matsubara_terms: usize,
    pub err_est: f64,
}

/// Pressure between plate 1 held at `t1` and plate 2 held at `t2`. Sheet
/// occupations must match their plate temperatures.
pub fn p_neq(
    a: f64,
    t1: f64,
    t2: f64,
    p1: &Plate,
    p2: &Plate,
    mode: TensorMode,
) -> Result<PressureBreakdown, PressureError> {
    check_sheet_temp(p1, t1, "plate 1")?;
    check_sheet_temp(p2, t2, "plate 2")?;
    let (b1, b2) = if t1 == t2 {
        let b = lifshitz_block(a, t1, p1, p2, mode)?;
        (b, b)
    } else {
        let (r1, r2) = rayon::join(
            || lifshitz_block(a, t1, p1, p2, mode),
            || lifshitz_block(a, t2, p1, p2, mode),
        );
        (r1?, r2?)
    };
    let p_qeq = 0.5 * (b1.pressure + b2.pressure);
    let (dp, dp_err) = delta_p_neq(a, t1, t2, p1, p2, mode)?;
    Ok(PressureBreakdown {
        p_qeq,
        delta_p_neq: dp,
        p_neq: p_qeq + dp,
        matsubara_terms: b1.matsubara_terms.max(b2.matsubara_terms),
        err_est: 0.5 * (b1.err_est + b2.err_est) + dp_err,
    })
}

/// Relative shift of the equilibrium pressure when the sheets are evaluated
/// with the spatially local coefficients instead of the full dispersion.
pub fn local_shift_eq(
    a: f64,
    temp_k: f64,
    p1: &Plate,
    p2: &Plate,
) -> Result<f64, PressureError> {
    let full = lifshitz_block(a, temp_k, p1, p2, TensorMode::Auto)?.pressure;
    let local = lifshitz_block(a, temp_k, p1, p2, TensorMode::LocalOnly)?.pressure;
    Ok((local - full) / full)
}

/// As `local_shift_eq` for the out-of-equilibrium pressure.
pub fn local_shift_neq(
    a: f64,
    t1: f64,
    t2: f64,
    p1: &Plate,
    p2: &Plate,
) -> Result<f64, PressureError> {
    let full = p_neq(a, t1, t2, p1, p2, TensorMode::Auto)?.p_neq;
    let local = p_neq(a, t1, t2, p1, p2, TensorMode::LocalOnly)?.p_neq;
    Ok((local - full) / full)
}

/// Derived quantities exposed by the scan interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// p_neq / p_classical at the mean temperature.
    NeqOverClassical,
    /// p_eq / p_classical; needs t1 == t2.
    EqOverClassical,
    /// p_eq with sheets over p_eq of the bare substrates; needs t1 == t2.
    EqOverBareEq,
    /// p_neq with sheets over p_neq of the bare substrates.
    NeqOverBareNeq,
    /// Relative local-evaluation shift of p_eq; needs t1 == t2.
    LocalShiftEq,
    /// Relative local-evaluation shift of p_neq.
    LocalShiftNeq,
    /// p_neq(t1, t2) over p_eq(t1).
    NeqOverEq,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanScenario<'a> {
    pub plate1: &'a Plate,
    pub plate2: &'a Plate,
    pub t1: f64,
    pub t2: f64,
    pub mode: TensorMode,
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    /// Separation, m.
    pub a: f64,
    /// NaN when the point failed; see `note`.
    pub value: f64,
    pub note: Option<String>,
}

fn scan_value(q: Quantity, a: f64, sc: &ScanScenario) -> Result<f64, PressureError> {
    match q {
        Quantity::EqOverClassical => {
            let p = p_eq(a, sc.t1, sc.plate1, sc.plate2, sc.mode)?.pressure;
            let eps0 = sc.plate1.permittivity.eps_imag_axis(0.0)?;
            Ok(p / p_classical(a, sc.t1, eps0))
        }
        Quantity::NeqOverClassical => {
            let p = p_neq(a, sc.t1, sc.t2, sc.plate1, sc.plate2, sc.mode)?.p_neq;
            let eps0 = sc.plate1.permittivity.eps_imag_axis(0.0)?;
            Ok(p / p_classical(a, 0.5 * (sc.t1 + sc.t2), eps0))
        }
        Quantity::EqOverBareEq => {
            let p = p_eq(a, sc.t1, sc.plate1, sc.plate2, sc.mode)?.pressure;
            let b = lifshitz_block(
                a,
                sc.t1,
                &sc.plate1.stripped(),
                &sc.plate2.stripped(),
                sc.mode,
            )?
            .pressure;
            Ok(p / b)
        }
        Quantity::NeqOverBareNeq => {
            let p = p_neq(a, sc.t1, sc.t2, sc.plate1, sc.plate2, sc.mode)?.p_neq;
            let b = p_neq(
                a,
                sc.t1,
                sc.t2,
                &sc.plate1.stripped(),
                &sc.plate2.stripped(),
                sc.mode,
            )?
            .p_neq;
            Ok(p / b)
        }
        Quantity::LocalShiftEq => local_shift_eq(a, sc.t1, sc.plate1, sc.plate2),
        Quantity::LocalShiftNeq => local_shift_neq(a, sc.t1, sc.t2, sc.plate1, sc.plate2),
        Quantity::NeqOverEq => {
            let pn = p_neq(a, sc.t1, sc.t2, sc.plate1, sc.plate2, sc.mode)?.p_neq;
            let p1e = sc.plate1.at_temperature(sc.t1);
            let p2e = sc.plate2.at_temperature(sc.t1);
            let pe = p_eq(a, sc.t1, &p1e, &p2e, sc.mode)?.pressure;
            Ok(pn / pe)
        }
    }
}

/// Evaluate `q` over a separation grid. Points run in parallel; a failed
/// point yields a NaN row with the failure message instead of aborting the
/// whole scan.
pub fn figure_scan(
    q: Quantity,
    a_grid: &[f64],
    sc: &ScanScenario,
) -> Result<Vec<ScanRow>, PressureError> {
    let eq_only = matches!(
        q,
        Quantity::EqOverClassical | Quantity::EqOverBareEq | Quantity::LocalShiftEq
    );
    if eq_only && sc.t1 != sc.t2 {
        return Err(PressureError::Invalid(format!(
            "{q:?} is an equilibrium quantity but t1 = {} K, t2 = {} K",
            sc.t1, sc.t2
        )));
    }
    Ok(a_grid
        .par_iter()
        .map(|&a| match scan_value(q, a, sc) {
            Ok(v) => ScanRow {
                a,
                value: v,
                note: None,
            },
            Err(e) => ScanRow {
                a,
                value: f64::NAN,
                note: Some(e.to_string()),
            },
        })
        .collect())
}

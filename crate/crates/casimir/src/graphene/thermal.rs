//! Thermal correction integrals on the real frequency axis, reduced units.
//!
//! The integrands contain sqrt(G(v)) with
//!     G(v) = (w^2 - k^2) x^2 - k^2 (w^2 - k^2 - 4 m^2),   x = v + lambda w,
//! where the square root must be the analytic continuation of the principal
//! branch from large imaginary frequency down to the real axis, not the
//! principal branch of G(v) itself. On the real axis that continuation is
//! sigma(v) * sqrt(|G(v)|) with sigma in {+1, -1, +i, -i} piecewise constant
//! between the real zeros of G.
//!
//! sigma is found by tracing sqrt(G(z)) in the complex frequency plane along a
//! path from z = i xi0 (where the principal branch is correct) to z = w. The
//! path detours around the zeros of the quartic z -> G(z; v). Tracing is done
//! per sample v; zones between known zeros get a constant sigma after sampling
//! agrees across the zone.

use super::GrapheneError;
use num_complex::Complex64;
use quadrature::{integrate, EndpointRule, QuadraturePolicy};

type C = Complex64;

const LAMBDAS: [f64; 2] = [1.0, -1.0];

/// G(v) on the real axis.
fn g_real(w: f64, k: f64, m: f64, lam: f64, v: f64) -> f64 {
    let x = v + lam * w;
    let rho2 = w * w - k * k;
    rho2 * x * x - k * k * (rho2 - 4.0 * m * m)
}

/// G as a monic quartic in complex frequency z at fixed v:
/// z^4 + 2 lam v z^3 + (v^2 - 2k^2) z^2 - 2 lam k^2 v z + k^2(k^2 + 4m^2 - v^2).
fn g_quartic_coeffs(k: f64, m: f64, lam: f64, v: f64) -> [f64; 4] {
    [
        2.0 * lam * v,
        v * v - 2.0 * k * k,
        -2.0 * lam * k * k * v,
        k * k * (k * k + 4.0 * m * m - v * v),
    ]
}

fn eval_quartic(c: &[f64; 4], z: C) -> C {
    (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3]
}

/// All four roots of the monic quartic by the Durand-Kerner iteration.
/// Deterministic: fixed starting points, fixed iteration cap.
fn quartic_roots(c: &[f64; 4]) -> [C; 4] {
    let radius = 1.0 + c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let seed = C::new(0.4, 0.9);
    let mut r = [C::new(0.0, 0.0); 4];
    let mut p = C::new(1.0, 0.0);
    for slot in r.iter_mut() {
        p *= seed;
        *slot = p * radius;
    }
    for _ in 0..80 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            let num = eval_quartic(c, r[i]);
            let mut den = C::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    den *= r[i] - r[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = num / den;
            r[i] -= step;
            worst = worst.max(step.norm());
        }
        if worst < 1e-13 * radius {
            break;
        }
    }
    r
}

/// Classify the branch at one real sample point v: returns sigma with
/// sqrt(G(v)) continued from the imaginary axis = sigma * sqrt(|G(v)|),
/// sigma in {+-1, +-i}.
///
/// Closed form from the root layout of the quartic z -> G(z; v). Continuing
/// along a descent from i*inf to w + i0 that stays left of no root it does
/// not have to, the running argument of each factor (z - r) ends at its
/// principal value except when the path passes the root on its left, which
/// happens exactly for Re r >= w in the upper half plane; real roots right
/// of w end at argument pi. Summing the half-angles, with the z^4 reference
/// at the start contributing -1:
///   sigma = i^(2 + n_real_right + 2 * n_pairs_right)
/// where n_real_right counts real roots above w and n_pairs_right counts
/// conjugate pairs with real part at or above w. A root within rounding of
/// the classification boundary shifts between the counters without changing
/// the product.
fn sigma_at(w: f64, k: f64, m: f64, lam: f64, v: f64) -> Option<C> {
    let g_end = g_real(w, k, m, lam, v);
    if g_end == 0.0 || !g_end.is_finite() {
        return None;
    }
    let coeffs = g_quartic_coeffs(k, m, lam, v);
    let roots = quartic_roots(&coeffs);
    let radius = 1.0 + coeffs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let real_tol = 1e-8 * radius;
    let mut q = 2usize;
    for r in roots {
        if r.im.abs() <= real_tol {
            if r.re > w {
                q += 1;
            }
        } else if r.im > 0.0 && r.re >= w {
            q += 2;
        }
    }
    // The parity of q must reproduce the sign of G; a mismatch means a root
    // sat too close to w to classify.
    if (q % 2 == 0) != (g_end > 0.0) {
        return None;
    }
    Some(match q % 4 {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    })
}

#[derive(Debug, Clone, Copy)]
struct Zone {
    a: f64,
    /// f64::INFINITY marks the final open-ended zone.
    b: f64,
    sigma: [C; 2],
}

/// Precomputed branch table for one (w, k, m) kinematic point, reusable across
/// different (mu, t) weight functions.
#[derive(Debug)]
pub struct ThermalTable {
    pub w: f64,
    pub k: f64,
    pub m: f64,
    zones: Vec<Zone>,
}

enum ZoneSigma {
    Uniform(C),
    /// Sign flip located inside the zone at the carried abscissa.
    Split(f64),
    /// No sample could be classified; caller falls back to +1.
    Unknown,
}

fn zone_sigma(w: f64, k: f64, m: f64, lam: f64, a: f64, b: f64) -> ZoneSigma {
    let span = b - a;
    let lo = a + 5e-4 * span;
    let hi = b - 5e-4 * span;
    let nudges = [0.0, 1e-5, -1e-5, 4e-5, -4e-5];
    let mut samples: Vec<(f64, C)> = Vec::with_capacity(9);
    for i in 0..9 {
        let v0 = lo + (hi - lo) * i as f64 / 8.0;
        for &dt in &nudges {
            let v = v0 + dt * span;
            if v <= a || v >= b {
                continue;
            }
            if let Some(s) = sigma_at(w, k, m, lam, v) {
                samples.push((v, s));
                break;
            }
        }
    }
    let Some(&(_, first)) = samples.first() else {
        return ZoneSigma::Unknown;
    };
    if samples.iter().all(|&(_, s)| s == first) {
        return ZoneSigma::Uniform(first);
    }
    // A flip inside the zone means an undetected real zero of G; bisect it so
    // the caller can split the zone there.
    let flip = samples.windows(2).find(|p| p[0].1 != p[1].1).unwrap();
    let (mut va, sa) = flip[0];
    let mut vb = flip[1].0;
    while vb - va > 1e-7 * span {
        let vm = 0.5 * (va + vb);
        match sigma_at(w, k, m, lam, vm) {
            Some(s) if s == sa => va = vm,
            Some(_) => vb = vm,
            None => break,
        }
    }
    ZoneSigma::Split(0.5 * (va + vb))
}

impl ThermalTable {
    pub fn new(w: f64, k: f64, m: f64) -> ThermalTable {
        let scale = w.max(k).max(2.0 * m).max(1e-30);
        let mut edges = vec![2.0 * m];
        let rho2 = w * w - k * k;
        if rho2 != 0.0 {
            let a_fac = 1.0 - 4.0 * m * m / rho2;
            if a_fac >= 0.0 {
                let b = k * a_fac.sqrt();
                for cand in [(w - b).abs(), w + b] {
                    if cand.is_finite() && cand > 2.0 * m + 1e-12 * scale {
                        edges.push(cand);
                    }
                }
            }
        }
        edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
        edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * scale);

        // Width used to sample the final zone, which has no upper zero.
        let open_span = (w + k + 2.0 * m).max(scale) * 2.0;
        let extent = edges.last().unwrap() + open_span - 2.0 * m;

        let mut pending: Vec<(f64, f64)> = edges
            .windows(2)
            .map(|e| (e[0], e[1]))
            .chain(std::iter::once((*edges.last().unwrap(), f64::INFINITY)))
            .collect();
        let mut zones: Vec<Zone> = Vec::new();
        let mut splits_left = 32usize;
        while let Some((a, b)) = pending.pop() {
            let b_samp = if b.is_finite() { b } else { a + open_span };
            if b_samp - a < 1e-6 * extent {
                // Pinched zone: tracing is unreliable and the contribution is
                // negligible; take the principal-like sign.
                zones.push(Zone {
                    a,
                    b,
                    sigma: [C::new(1.0, 0.0); 2],
                });
                continue;
            }
            let mut sigma = [C::new(1.0, 0.0); 2];
            let mut split: Option<f64> = None;
            for (idx, &lam) in LAMBDAS.iter().enumerate() {
                match zone_sigma(w, k, m, lam, a, b_samp) {
                    ZoneSigma::Uniform(s) => sigma[idx] = s,
                    ZoneSigma::Unknown => sigma[idx] = C::new(1.0, 0.0),
                    ZoneSigma::Split(v) => {
                        split = Some(v);
                        break;
                    }
                }
            }
            if let (Some(v), true) = (split, splits_left > 0) {
                splits_left -= 1;
                if v > a && v < b_samp {
                    pending.push((a, v));
                    pending.push((v, b));
                    continue;
                }
            }
            zones.push(Zone { a, b, sigma });
        }
        zones.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
        ThermalTable { w, k, m, zones }
    }

    /// Integrate the weighted brackets over v in [2m, vmax(mu, t)]:
    ///   I00 = int wgt(v) [1 + 1/2 sum_lam (x^2 - k^2)/sqrtG] dv
    ///   IPi = int wgt(v) [w^2 + 1/2 sum_lam (sqrtG + k^2 rho^2 / sqrtG)] dv
    /// with sqrtG = sigma_lam * sqrt(|G(v)|) from the branch table.
    pub fn integrate(&self, mu: f64, t: f64) -> Result<(C, C), GrapheneError> {
        let (w, k, m) = (self.w, self.k, self.m);
        let rho2 = w * w - k * k;
        let vmax = 2.0 * m + 80.0 * t + 3.0 * mu.abs() + 4.0 * (k + w);
        let wgt = |v: f64| {
            1.0 / (((v - 2.0 * mu) / (2.0 * t)).exp() + 1.0)
                + 1.0 / (((v + 2.0 * mu) / (2.0 * t)).exp() + 1.0)
        };
        let mut i00 = C::new(0.0, 0.0);
        let mut ipi = C::new(0.0, 0.0);
        for zone in &self.zones {
            let hi = zone.b.min(vmax);
            if hi <= zone.a {
                continue;
            }
            // G can collapse to exactly zero at nodes within one ulp of a zone
            // edge; the contribution there is measure zero, so report 0 rather
            // than aborting on the infinity.
            let f00 = |v: f64| {
                let g = g_real(w, k, m, 1.0, v).abs().sqrt();
                let gm = g_real(w, k, m, -1.0, v).abs().sqrt();
                if g == 0.0 || gm == 0.0 {
                    return C::new(0.0, 0.0);
                }
                let xp = v + w;
                let xm = v - w;
                let sum = (xp * xp - k * k) / (zone.sigma[0] * g)
                    + (xm * xm - k * k) / (zone.sigma[1] * gm);
                wgt(v) * (1.0 + 0.5 * sum)
            };
            let fpi = |v: f64| {
                let g = g_real(w, k, m, 1.0, v).abs().sqrt();
                let gm = g_real(w, k, m, -1.0, v).abs().sqrt();
                if g == 0.0 || gm == 0.0 {
                    return C::new(0.0, 0.0);
                }
                let sp = zone.sigma[0] * g;
                let sm = zone.sigma[1] * gm;
                let sum = sp + k * k * rho2 / sp + sm + k * k * rho2 / sm;
                wgt(v) * (w * w + 0.5 * sum)
            };
            // Zone ends sit at zeros of G; split at the midpoint and remove the
            // inverse-square-root behavior on each side by substitution. On a
            // regular end the substitution is harmless.
            let mid = 0.5 * (zone.a + hi);
            for (lo_v, hi_v, rule) in [
                (zone.a, mid, EndpointRule::InverseSqrtLeft),
                (mid, hi, EndpointRule::InverseSqrtRight),
            ] {
                if hi_v <= lo_v {
                    continue;
                }
                // Absolute floor serves two cases: fully underflowed weights
                // (cold sheets far below the pair threshold) converge to zero,
                // and near-degenerate kinematics (w, k both tiny against the
                // gap) where G dips close to zero off the sampled roots and
                // the value itself is below 1e-3. The vacuum part is O(0.1-1)
                // in the same reduced units, so 1e-9 stays below 1e-8 of the
                // assembled tensor.
                // Roundoff in G near its roots leaves noise in sqrt|G| that
                // subdivision cannot remove. The error estimate then stalls
                // at a plateau scaling like wgt / sqrt(2B |w^2 - k^2|), a
                // few 1e-9 generically but up to ~1e-5 absolute close to the
                // v_F light cone under a dominant gap, where the piece value
                // grows by the same factor. Accept the stalled estimate when
                // it is already small against the piece.
                let policy = QuadraturePolicy::default()
                    .with_rel_tol(1e-8)
                    .with_abs_tol(1e-9)
                    .with_plateau(3e-5, 3e-7)
                    .with_max_subdivisions(400)
                    .with_endpoint(rule);
                i00 += integrate(f00, lo_v, hi_v, &policy)?.value;
                ipi += integrate(fpi, lo_v, hi_v, &policy)?.value;
            }
        }
        Ok((i00, ipi))
    }
}

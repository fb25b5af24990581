//! Physical constants (SI, CODATA 2018 exact or recommended values).

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Fine-structure constant, dimensionless.
pub const ALPHA: f64 = 7.297_352_569_3e-3;
/// One electron volt, J.
pub const EV: f64 = 1.602_176_634e-19;
/// Default Fermi velocity as a fraction of c.
pub const VF_OVER_C_DEFAULT: f64 = 1.0 / 300.0;

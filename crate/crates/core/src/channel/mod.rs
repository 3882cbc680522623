//! Geometric doubly-dispersive channel between two planar apertures.
//!
//! Apertures lie in planes parallel to x–z and face each other along y.
//! Each path couples the apertures through a 3×3 polarization operator and a
//! plane-wave phase on each side; the per-path coupling is either a double
//! surface integral over continuous currents or a double sum over a
//! half-wavelength element grid.

mod aperture;
mod coupling;
mod discrete;
mod paths;
mod quadrature;

pub use aperture::{
    matched_current, multi_beam_current, transverse_polarization, ApertureConfig, CurrentDesign,
    PlaneWave, Side,
};
pub use coupling::{effective_path_matrix_capa, QuadratureGrid};
pub use discrete::{
    effective_path_matrix_discrete, matched_weights, DiscreteArray, DiscreteWeights,
};
pub use paths::{
    path_gain, polarization_operator, sample_paths, strongest_path, Path, PathScenario,
};
pub use quadrature::{gauss_legendre_rule, Rule, SurfaceRule};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.9979e8;

pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Wavenumber `2π/λ`.
#[inline]
pub fn wavenumber(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI / wavelength
}

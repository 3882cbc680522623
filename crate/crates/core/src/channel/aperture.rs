//! Planar apertures and plane-wave current designs.

use num_complex::Complex64;

use super::{dot, norm, wavenumber, Path, Vec3};
use crate::error::{Result, SimError};

/// Rectangular aperture in a plane parallel to x–z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureConfig {
    pub side_x: f64,
    pub side_z: f64,
    pub center: Vec3,
}

impl ApertureConfig {
    pub fn new(side_x: f64, side_z: f64, center: Vec3) -> Result<Self> {
        if !(side_x > 0.0 && side_z > 0.0) || !side_x.is_finite() || !side_z.is_finite() {
            return Err(SimError::InvalidGeometry(format!(
                "aperture sides must be positive, got {side_x} x {side_z}"
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(SimError::InvalidGeometry(
                "aperture center must be finite".into(),
            ));
        }
        Ok(Self {
            side_x,
            side_z,
            center,
        })
    }

    /// Square aperture of the given area.
    pub fn square(area: f64, center: Vec3) -> Result<Self> {
        if !(area > 0.0) {
            return Err(SimError::InvalidGeometry(format!(
                "aperture area must be positive, got {area}"
            )));
        }
        let side = area.sqrt();
        Self::new(side, side, center)
    }

    pub fn area(&self) -> f64 {
        self.side_x * self.side_z
    }

    /// Global position of an in-plane offset.
    #[inline]
    pub fn point(&self, x: f64, z: f64) -> Vec3 {
        [self.center[0] + x, self.center[1], self.center[2] + z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

/// One plane-wave component `w·u·exp(−j(2π/λ) kᵀp)` of a current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub direction: Vec3,
    pub polarization: Vec3,
    pub weight: Complex64,
}

/// Surface current built from plane waves.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentDesign {
    pub waves: Vec<PlaneWave>,
    pub wavelength: f64,
}

/// `∫ exp(jκ dᵀp) dp` over the aperture.
fn plane_wave_integral(aperture: &ApertureConfig, d: &Vec3, kappa: f64) -> Complex64 {
    let sinc = |x: f64| if x.abs() < 1e-12 { 1.0 } else { x.sin() / x };
    let fx = aperture.side_x * sinc(kappa * d[0] * aperture.side_x / 2.0);
    let fz = aperture.side_z * sinc(kappa * d[2] * aperture.side_z / 2.0);
    Complex64::from_polar(fx * fz, kappa * dot(d, &aperture.center))
}

impl CurrentDesign {
    pub fn at(&self, p: &Vec3) -> [Complex64; 3] {
        let kappa = wavenumber(self.wavelength);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for w in &self.waves {
            let phase = w.weight * Complex64::from_polar(1.0, -kappa * dot(&w.direction, p));
            for (o, u) in out.iter_mut().zip(w.polarization) {
                *o += phase * u;
            }
        }
        out
    }

    /// `∫ ‖J(p)‖² dp` over `aperture`, in closed form.
    pub fn power(&self, aperture: &ApertureConfig) -> f64 {
        let kappa = wavenumber(self.wavelength);
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.waves {
            for b in &self.waves {
                let d = [
                    b.direction[0] - a.direction[0],
                    b.direction[1] - a.direction[1],
                    b.direction[2] - a.direction[2],
                ];
                total += a.weight
                    * b.weight.conj()
                    * dot(&a.polarization, &b.polarization)
                    * plane_wave_integral(aperture, &d, kappa);
            }
        }
        total.re
    }

    /// Rescales to unit power over `aperture`.
    pub fn normalized(mut self, aperture: &ApertureConfig) -> Self {
        let p = self.power(aperture);
        if p > 0.0 {
            let s = 1.0 / p.sqrt();
            self.waves.iter_mut().for_each(|w| w.weight *= s);
        }
        self
    }
}

fn steering(path: &Path, side: Side) -> Vec3 {
    match side {
        Side::Tx => path.k_tx,
        Side::Rx => path.k_rx.map(|v| -v),
    }
}

/// Unit vector orthogonal to `k`: the normalized projection of `e_z`, or
/// `e_x` when `k` is (nearly) parallel to `e_z`.
pub fn transverse_polarization(k: &Vec3) -> Vec3 {
    let proj = [-k[2] * k[0], -k[2] * k[1], 1.0 - k[2] * k[2]];
    let len = norm(&proj);
    if len > 1e-9 {
        proj.map(|v| v / len)
    } else {
        let proj = [1.0 - k[0] * k[0], -k[0] * k[1], -k[0] * k[2]];
        let len = norm(&proj);
        proj.map(|v| v / len)
    }
}

/// Unit-power current `a·u·exp(−j(2π/λ) kᵀp)` with `a = 1/√area`, steered
/// at `path`. On the receive side the steering direction is `−k_rx`, so that
/// `J_Rᴴ` cancels the arrival phase.
pub fn matched_current(
    aperture: &ApertureConfig,
    path: &Path,
    side: Side,
    wavelength: f64,
) -> CurrentDesign {
    let direction = steering(path, side);
    CurrentDesign {
        waves: vec![PlaneWave {
            direction,
            polarization: transverse_polarization(&direction),
            weight: Complex64::new(1.0 / aperture.area().sqrt(), 0.0),
        }],
        wavelength,
    }
}

/// Equal-weight superposition of the matched currents of every path,
/// normalized to unit power.
pub fn multi_beam_current(
    aperture: &ApertureConfig,
    paths: &[Path],
    side: Side,
    wavelength: f64,
) -> CurrentDesign {
    let waves = paths
        .iter()
        .map(|p| {
            let direction = steering(p, side);
            PlaneWave {
                direction,
                polarization: transverse_polarization(&direction),
                weight: Complex64::new(1.0, 0.0),
            }
        })
        .collect();
    CurrentDesign { waves, wavelength }.normalized(aperture)
}

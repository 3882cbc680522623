//! Geometric multipath: path gains, polarization operators, random path sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{norm, Vec3, SPEED_OF_LIGHT};
use crate::error::{Result, SimError};
use crate::linalg::ComplexMatrix;
use crate::waveform::NormalizedPath;

const UNIT_TOLERANCE: f64 = 1e-9;

/// Large-scale gain `1 / (√L (4π)² d_rx d_tx)`.
pub fn path_gain(d_tx: f64, d_rx: f64, num_paths: usize) -> Result<f64> {
    if !(d_tx > 0.0) || !(d_rx > 0.0) || !d_tx.is_finite() || !d_rx.is_finite() {
        return Err(SimError::InvalidGeometry(format!(
            "path legs must be positive, got d_tx={d_tx}, d_rx={d_rx}"
        )));
    }
    if num_paths == 0 {
        return Err(SimError::InvalidGeometry("need at least one path".into()));
    }
    let four_pi_sq = (4.0 * PI) * (4.0 * PI);
    Ok(1.0 / ((num_paths as f64).sqrt() * four_pi_sq * d_rx * d_tx))
}

fn projector(k: &Vec3) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        Complex64::new(id - k[r] * k[c], 0.0)
    })
}

/// `Ξ = (I − k_rx k_rxᵀ) Γ (I − k_tx k_txᵀ)`.
pub fn polarization_operator(
    k_tx: &Vec3,
    k_rx: &Vec3,
    gamma: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    for (name, k) in [("k_tx", k_tx), ("k_rx", k_rx)] {
        if (norm(k) - 1.0).abs() > UNIT_TOLERANCE {
            return Err(SimError::InvalidInput(format!(
                "{name} is not a unit vector"
            )));
        }
    }
    if (gamma.rows(), gamma.cols()) != (3, 3) {
        return Err(SimError::InvalidDimension(
            "polarization transfer must be 3x3".into(),
        ));
    }
    Ok(projector(k_rx).matmul(gamma).matmul(&projector(k_tx)))
}

/// One propagation path via a single scatterer.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub gain: f64,
    /// Seconds.
    pub delay: f64,
    /// Hz.
    pub doppler: f64,
    /// Unit vector from the transmitter towards the scatterer.
    pub k_tx: Vec3,
    /// Unit vector from the scatterer towards the receiver.
    pub k_rx: Vec3,
    pub gamma: ComplexMatrix,
    pub xi: ComplexMatrix,
    pub d_tx: f64,
    pub d_rx: f64,
}

impl Path {
    /// Builds a path from its scatterer geometry. Delay is the two-leg
    /// travel time; Doppler comes from the scatterer's radial velocity.
    #[allow(clippy::too_many_arguments)]
    pub fn from_geometry(
        d_tx: f64,
        d_rx: f64,
        k_tx: Vec3,
        k_rx: Vec3,
        radial_velocity: f64,
        gamma: ComplexMatrix,
        num_paths: usize,
        carrier_hz: f64,
    ) -> Result<Self> {
        let gain = path_gain(d_tx, d_rx, num_paths)?;
        let xi = polarization_operator(&k_tx, &k_rx, &gamma)?;
        Ok(Self {
            gain,
            delay: (d_tx + d_rx) / SPEED_OF_LIGHT,
            doppler: radial_velocity * carrier_hz / SPEED_OF_LIGHT,
            k_tx,
            k_rx,
            gamma,
            xi,
            d_tx,
            d_rx,
        })
    }

    /// Delay in whole samples and Doppler in cycles per `n`-sample block.
    pub fn normalized(&self, sampling_hz: f64, n: usize) -> NormalizedPath {
        NormalizedPath {
            delay_taps: (self.delay * sampling_hz).round() as usize,
            doppler: self.doppler * n as f64 / sampling_hz,
        }
    }
}

/// Scenario parameters needed to draw path sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathScenario {
    pub carrier_hz: f64,
    pub num_paths: usize,
    pub max_range: f64,
    pub max_velocity: f64,
}

impl PathScenario {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Shortest leg length allowed, keeping scatterers in the far field.
    pub fn min_leg(&self) -> f64 {
        10.0 * self.wavelength()
    }

    pub fn max_doppler_hz(&self) -> f64 {
        self.max_velocity * self.carrier_hz / SPEED_OF_LIGHT
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_paths == 0 {
            return Err(SimError::Config("need at least one path".into()));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(SimError::Config(
                "carrier frequency must be positive".into(),
            ));
        }
        if !(self.max_range > self.min_leg()) {
            return Err(SimError::Config(format!(
                "max range {} m must exceed the far-field minimum {:.3} m",
                self.max_range,
                self.min_leg()
            )));
        }
        if !(self.max_velocity >= 0.0) {
            return Err(SimError::Config("max velocity must be >= 0".into()));
        }
        Ok(())
    }
}

/// Uniform direction on the hemisphere `y > 0`.
fn front_hemisphere<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let len = norm(&v);
        if len > 1e-12 {
            return [v[0] / len, v[1].abs() / len, v[2] / len];
        }
    }
}

fn random_gamma<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let mut g = ComplexMatrix::from_fn(3, 3, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let fro = g.frobenius_norm();
    g = g.scale(Complex64::new(1.0 / fro, 0.0));
    g
}

/// Draws `L` paths. Each scatterer has an independent departure direction in
/// the transmitter's front hemisphere, an arrival direction in the receiver's
/// front hemisphere, leg lengths uniform in `[10 λ, R_max]`, and a radial
/// velocity uniform in `[−V_max, V_max]`.
pub fn sample_paths<R: Rng + ?Sized>(scenario: &PathScenario, rng: &mut R) -> Result<Vec<Path>> {
    scenario.validate()?;
    let lo = scenario.min_leg();
    let hi = scenario.max_range;
    (0..scenario.num_paths)
        .map(|_| {
            let k_tx = front_hemisphere(rng);
            let k_rx = front_hemisphere(rng);
            let d_tx = rng.random_range(lo..=hi);
            let d_rx = rng.random_range(lo..=hi);
            let v = if scenario.max_velocity > 0.0 {
                rng.random_range(-scenario.max_velocity..=scenario.max_velocity)
            } else {
                0.0
            };
            let gamma = random_gamma(rng);
            Path::from_geometry(
                d_tx,
                d_rx,
                k_tx,
                k_rx,
                v,
                gamma,
                scenario.num_paths,
                scenario.carrier_hz,
            )
        })
        .collect()
}

/// Index of the path with the largest large-scale gain.
pub fn strongest_path(paths: &[Path]) -> usize {
    paths
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bg), (i, p)| {
            if p.gain > bg {
                (i, p.gain)
            } else {
                (bi, bg)
            }
        })
        .0
}

#[cfg(test)]
fn transverse_residual(xi: &ComplexMatrix, k: &Vec3, left: bool) -> f64 {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            *o += if left {
                xi[(j, i)] * kj
            } else {
                xi[(i, j)] * kj
            };
        }
    }
    out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
fn unit_check(k: &Vec3) -> bool {
    (norm(k) - 1.0).abs() <= UNIT_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gain_values() {
        let g1 = path_gain(1.0, 1.0, 1).unwrap();
        assert!((g1 - 1.0 / (16.0 * PI * PI)).abs() < 1e-18);
        assert!((g1 - 6.3326e-3).abs() < 1e-7);
        assert!((path_gain(1.0, 1.0, 4).unwrap() - g1 / 2.0).abs() < 1e-18);
        assert!((path_gain(2.0, 2.0, 1).unwrap() - g1 / 4.0).abs() < 1e-18);
        assert!(matches!(
            path_gain(0.0, 1.0, 1),
            Err(SimError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn polarization_cases() {
        let ey = [0.0, 1.0, 0.0];
        let xi = polarization_operator(&ey, &ey, &ComplexMatrix::identity(3)).unwrap();
        let want = ComplexMatrix::from_diag(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        assert!(xi.max_abs_diff(&want) < 1e-15);
        let zero = polarization_operator(&ey, &ey, &ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(zero.frobenius_norm(), 0.0);
        assert!(polarization_operator(&[1.0, 1.0, 0.0], &ey, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn boresight_delay() {
        let ey = [0.0, 1.0, 0.0];
        let p = Path::from_geometry(
            100.0,
            100.0,
            ey,
            ey,
            0.0,
            ComplexMatrix::identity(3),
            1,
            2.4e9,
        )
        .unwrap();
        assert!((p.delay - 200.0 / SPEED_OF_LIGHT).abs() < 1e-18);
        assert!((p.delay * 1e9 - 667.1).abs() < 0.05);
        assert_eq!(p.doppler, 0.0);
    }

    #[test]
    fn sampled_paths_are_deterministic_and_transverse() {
        let sc = PathScenario {
            carrier_hz: 2.4e9,
            num_paths: 5,
            max_range: 1500.0,
            max_velocity: 122.0,
        };
        let a = sample_paths(&sc, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_paths(&sc, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!(unit_check(&p.k_tx) && unit_check(&p.k_rx));
            assert!(transverse_residual(&p.xi, &p.k_tx, false) < 1e-12);
            assert!(transverse_residual(&p.xi, &p.k_rx, true) < 1e-12);
            assert!(p.doppler.abs() <= sc.max_doppler_hz() + 1e-9);
            assert!(p.d_tx >= sc.min_leg() && p.d_tx <= sc.max_range);
            assert!((p.gamma.frobenius_norm() - 1.0).abs() < 1e-12);
        }
    }
}

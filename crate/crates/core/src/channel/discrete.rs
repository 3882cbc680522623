//! Half-wavelength element grids filling an aperture.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{dot, matched_current, wavenumber, ApertureConfig, CurrentDesign, Path, Side, Vec3};
use crate::error::{Result, SimError};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteArray {
    pub positions: Vec<Vec3>,
    /// Effective aperture of one element, m².
    pub element_area: f64,
    pub wavelength: f64,
}

impl DiscreteArray {
    /// `⌊side/(λ/2)⌋ + 1` elements per axis at `λ/2` spacing, centred on the
    /// aperture, each with effective area `λ²/4π`.
    pub fn half_wavelength(aperture: &ApertureConfig, wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(SimError::InvalidGeometry(
                "wavelength must be positive".into(),
            ));
        }
        let d = wavelength / 2.0;
        let count = |side: f64| (side / d).floor() as usize + 1;
        let offsets = |n: usize| (0..n).map(move |i| (i as f64 - (n - 1) as f64 / 2.0) * d);
        let (nx, nz) = (count(aperture.side_x), count(aperture.side_z));
        let positions = offsets(nx)
            .flat_map(|x| offsets(nz).map(move |z| aperture.point(x, z)))
            .collect();
        Ok(Self {
            positions,
            element_area: wavelength * wavelength / (4.0 * PI),
            wavelength,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Sum of element effective areas.
    pub fn total_area(&self) -> f64 {
        self.len() as f64 * self.element_area
    }
}

/// Per-element complex vector weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWeights {
    pub weights: Vec<[Complex64; 3]>,
}

impl DiscreteWeights {
    /// Samples `current` at the element positions and scales to unit total power.
    pub fn sampled(array: &DiscreteArray, current: &CurrentDesign) -> Self {
        let mut weights: Vec<[Complex64; 3]> =
            array.positions.iter().map(|p| current.at(p)).collect();
        let power: f64 = weights.iter().flatten().map(|c| c.norm_sqr()).sum();
        if power > 0.0 {
            let s = 1.0 / power.sqrt();
            weights.iter_mut().flatten().for_each(|c| *c *= s);
        }
        Self { weights }
    }

    pub fn power(&self) -> f64 {
        self.weights.iter().flatten().map(|c| c.norm_sqr()).sum()
    }
}

/// Conjugate-phase weights steered at `path`, unit total power.
pub fn matched_weights(array: &DiscreteArray, path: &Path, side: Side) -> DiscreteWeights {
    let aperture = ApertureConfig::new(1.0, 1.0, [0.0; 3]).expect("unit aperture");
    DiscreteWeights::sampled(
        array,
        &matched_current(&aperture, path, side, array.wavelength),
    )
}

/// `Σ_p w_p e^{jκ kᵀp}`, conjugating the weights on the receive side.
fn array_factor(
    array: &DiscreteArray,
    w: &DiscreteWeights,
    k: &Vec3,
    conjugate: bool,
) -> [Complex64; 3] {
    let kappa = wavenumber(array.wavelength);
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (p, wi) in array.positions.iter().zip(&w.weights) {
        let wave = Complex64::from_polar(1.0, kappa * dot(k, p));
        for (a, c) in acc.iter_mut().zip(wi) {
            *a += wave * if conjugate { c.conj() } else { *c };
        }
    }
    acc
}

/// Discrete counterpart of the continuous coupling: integrals become sums
/// over elements, each weighted by `√A_d`.
pub fn effective_path_matrix_discrete(
    tx: &DiscreteArray,
    tx_weights: &DiscreteWeights,
    rx: &DiscreteArray,
    rx_weights: &DiscreteWeights,
    path: &Path,
) -> Result<ComplexMatrix> {
    if tx_weights.weights.len() != tx.len() || rx_weights.weights.len() != rx.len() {
        return Err(SimError::InvalidDimension(
            "weight count must match element count".into(),
        ));
    }
    let b = array_factor(tx, tx_weights, &path.k_tx, false);
    let a = array_factor(rx, rx_weights, &path.k_rx, true);
    let mut h = Complex64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            h += ai * path.xi[(i, j)] * bj;
        }
    }
    let scale = path.gain * (tx.element_area * rx.element_area).sqrt();
    Ok(ComplexMatrix::from_diag(&[h * scale]))
}

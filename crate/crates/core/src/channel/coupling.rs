//! Continuous-aperture coupling by tensor-product Gauss–Legendre quadrature.

use num_complex::Complex64;

use super::{dot, wavenumber, ApertureConfig, CurrentDesign, Path, SurfaceRule};
use crate::error::Result;
use crate::linalg::ComplexMatrix;

/// Quadrature rules over the transmit and receive apertures.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub tx: SurfaceRule,
    pub rx: SurfaceRule,
}

impl QuadratureGrid {
    /// `tx_points = (M̄_x, M̄_z)`, `rx_points = (K̄_x, K̄_z)`.
    pub fn new(
        tx: &ApertureConfig,
        rx: &ApertureConfig,
        tx_points: (usize, usize),
        rx_points: (usize, usize),
    ) -> Result<Self> {
        Ok(Self {
            tx: SurfaceRule::new(tx_points.0, tx_points.1, tx.side_x, tx.side_z)?,
            rx: SurfaceRule::new(rx_points.0, rx_points.1, rx.side_x, rx.side_z)?,
        })
    }

    pub fn uniform(tx: &ApertureConfig, rx: &ApertureConfig, points: usize) -> Result<Self> {
        Self::new(tx, rx, (points, points), (points, points))
    }
}

/// `Σ_p w_p f(J(p)) e^{jκ kᵀp}` over one aperture.
fn projected_current(
    rule: &SurfaceRule,
    aperture: &ApertureConfig,
    current: &CurrentDesign,
    k: &[f64; 3],
    kappa: f64,
    conjugate: bool,
) -> [Complex64; 3] {
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (x, z, w) in rule.points() {
        let p = aperture.point(x, z);
        let wave = Complex64::from_polar(w, kappa * dot(k, &p));
        let j = current.at(&p);
        for (a, ji) in acc.iter_mut().zip(j) {
            *a += wave * if conjugate { ji.conj() } else { ji };
        }
    }
    acc
}

/// Single-stream coupling `Ĥ = h ∬ J_Rᴴ(r) Ξ J_T(s) e^{jκk_Rᵀr} e^{jκk_Tᵀs} dr ds`
/// as a 1×1 matrix. The double integral factorizes into one sum per
/// aperture.
pub fn effective_path_matrix_capa(
    j_tx: &CurrentDesign,
    j_rx: &CurrentDesign,
    path: &Path,
    grid: &QuadratureGrid,
    tx: &ApertureConfig,
    rx: &ApertureConfig,
) -> ComplexMatrix {
    let kappa = wavenumber(j_tx.wavelength);
    let b = projected_current(&grid.tx, tx, j_tx, &path.k_tx, kappa, false);
    let a = projected_current(&grid.rx, rx, j_rx, &path.k_rx, kappa, true);
    let mut h = Complex64::new(0.0, 0.0);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            h += ai * path.xi[(i, j)] * bj;
        }
    }
    ComplexMatrix::from_diag(&[h * path.gain])
}

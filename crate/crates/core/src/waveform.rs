//! Per-path waveform-domain channel matrices for OFDM, OTFS and AFDM.
//!
//! Every path acts on the time-domain block as `Φ Z^f Π^ζ` (prefix phase,
//! Doppler ramp, cyclic delay). A waveform with unitary modulation matrix `U`
//! sees the path as `U Φ Z^f Π^ζ Uᴴ`:
//!
//! | waveform | `U`                 | `Φ`            |
//! |----------|---------------------|----------------|
//! | OFDM     | `F_N`               | `I`            |
//! | OTFS     | `F_{N1} ⊗ I_{N2}`   | `I`            |
//! | AFDM     | `Λ_{c2} F_N Λ_{c1}` | chirp prefix   |
//!
//! The builders below exploit the structure (diagonal times permutation,
//! DFT kernels) and never form the dense triple product. The dense route is
//! still available through [`transform_matrix`] and [`delay_doppler_matrix`]
//! for cross-checking.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::linalg::{self, unit_root, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveformKind {
    Ofdm,
    Otfs { n1: usize, n2: usize },
    Afdm { c1: f64, c2: f64 },
}

/// Validated waveform choice together with the subcarrier count `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformSpec {
    n: usize,
    kind: WaveformKind,
}

impl WaveformSpec {
    pub fn ofdm(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            kind: WaveformKind::Ofdm,
        })
    }

    pub fn otfs(n: usize, n1: usize, n2: usize) -> Result<Self> {
        check_n(n)?;
        if n1 == 0 || n2 == 0 || n1 * n2 != n {
            return Err(SimError::InvalidSpec(format!(
                "OTFS factorization {n1}x{n2} does not match N={n}"
            )));
        }
        Ok(Self {
            n,
            kind: WaveformKind::Otfs { n1, n2 },
        })
    }

    pub fn afdm(n: usize, c1: f64, c2: f64) -> Result<Self> {
        check_n(n)?;
        if !(c1 > 0.0) || !c1.is_finite() || !c2.is_finite() {
            return Err(SimError::InvalidSpec(format!(
                "AFDM needs finite c1 > 0 and finite c2 (got c1={c1}, c2={c2})"
            )));
        }
        Ok(Self {
            n,
            kind: WaveformKind::Afdm { c1, c2 },
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> WaveformKind {
        self.kind
    }

    /// Short lower-case tag used in CSV output.
    pub fn tag(&self) -> &'static str {
        match self.kind {
            WaveformKind::Ofdm => "ofdm",
            WaveformKind::Otfs { .. } => "otfs",
            WaveformKind::Afdm { .. } => "afdm",
        }
    }
}

impl fmt::Display for WaveformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WaveformKind::Ofdm => write!(f, "OFDM(N={})", self.n),
            WaveformKind::Otfs { n1, n2 } => write!(f, "OTFS(N={}, {}x{})", self.n, n1, n2),
            WaveformKind::Afdm { c1, c2 } => write!(f, "AFDM(N={}, c1={}, c2={})", self.n, c1, c2),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(SimError::InvalidDimension(
            "subcarrier count must be >= 1".into(),
        ));
    }
    Ok(())
}

/// A path after sampling: integer delay in samples and Doppler in cycles
/// per block (fractional values allowed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPath {
    pub delay_taps: usize,
    pub doppler: f64,
}

impl NormalizedPath {
    pub fn new(delay_taps: usize, doppler: f64) -> Self {
        Self {
            delay_taps,
            doppler,
        }
    }
}

/// Default AFDM first chirp rate `(2 α_max + 1) / (2N)` where `α_max` is the
/// largest Doppler (cycles per block) rounded to an integer.
pub fn default_afdm_c1(n: usize, max_doppler: f64) -> f64 {
    let alpha = max_doppler.abs().round();
    (2.0 * alpha + 1.0) / (2.0 * n as f64)
}

pub fn doppler_diagonal(n: usize, f: f64) -> Vec<Complex64> {
    (0..n)
        .map(|m| Complex64::from_polar(1.0, -2.0 * PI * f * m as f64 / n as f64))
        .collect()
}

pub fn chirp_diagonal(n: usize, c: f64) -> Vec<Complex64> {
    (0..n)
        .map(|m| {
            let m = m as f64;
            let cycles = (c * m * m).fract();
            Complex64::from_polar(1.0, -2.0 * PI * cycles)
        })
        .collect()
}

pub fn cpp_diagonal(n: usize, c1: f64, zeta: usize) -> Result<Vec<Complex64>> {
    if zeta >= n {
        return Err(SimError::InvalidInput(format!(
            "delay {zeta} must be < N={n}"
        )));
    }
    let nf = n as f64;
    Ok((0..n)
        .map(|m| {
            if m < zeta {
                let cycles = (c1 * (nf * nf - 2.0 * nf * (zeta - m) as f64)).fract();
                Complex64::from_polar(1.0, -2.0 * PI * cycles)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect())
}

/// `Z^f`: diagonal Doppler ramp `exp(-j2π f m / n)`.
pub fn doppler_matrix(n: usize, f: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&doppler_diagonal(n, f))
}

/// `Λ_c`: diagonal chirp `exp(-j2π c m²)`.
pub fn afdm_chirp_matrix(n: usize, c: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&chirp_diagonal(n, c))
}

/// `Φ`: chirp-periodic-prefix phase correction for a path delayed by `zeta`.
pub fn cpp_matrix(n: usize, c1: f64, zeta: usize) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_diag(&cpp_diagonal(n, c1, zeta)?))
}

/// Dense time-domain path operator `Φ Z^f Π^ζ` (with `Φ = I` when `c1 = 0`).
pub fn delay_doppler_matrix(n: usize, c1: f64, path: &NormalizedPath) -> Result<ComplexMatrix> {
    let phi = cpp_matrix(n, c1, path.delay_taps)?;
    Ok(phi
        .matmul(&doppler_matrix(n, path.doppler))
        .matmul(&linalg::cyclic_shift_matrix(n, path.delay_taps as i64)))
}

/// Dense modulation matrix `U` of the waveform.
pub fn transform_matrix(spec: &WaveformSpec) -> ComplexMatrix {
    let n = spec.n;
    match spec.kind {
        WaveformKind::Ofdm => linalg::dft_matrix(n).expect("n >= 1"),
        WaveformKind::Otfs { n1, n2 } => linalg::kron(
            &linalg::dft_matrix(n1).expect("n1 >= 1"),
            &ComplexMatrix::identity(n2),
        ),
        WaveformKind::Afdm { c1, c2 } => afdm_chirp_matrix(n, c2)
            .matmul(&linalg::dft_matrix(n).expect("n >= 1"))
            .matmul(&afdm_chirp_matrix(n, c1)),
    }
}

/// `Λ_{c2} F_N Λ_{c1} (D Π^ζ) Λ_{c1}ᴴ F_Nᴴ Λ_{c2}ᴴ` for diagonal `D`, in O(n²).
///
/// Entry `(p, q)` collapses to `λ2_p λ2_q* e^{-j2π qζ/n} W[(p-q) mod n] / n`
/// with `W` the DFT of `w_m = λ1_m d_m λ1*_{m-ζ}`.
fn chirp_conjugated_shift(
    lambda1: &[Complex64],
    lambda2: &[Complex64],
    d: &[Complex64],
    zeta: usize,
) -> ComplexMatrix {
    let n = d.len();
    let twiddle: Vec<Complex64> = (0..n).map(|j| unit_root(j, n)).collect();
    let w: Vec<Complex64> = (0..n)
        .map(|m| lambda1[m] * d[m] * lambda1[(m + n - zeta) % n].conj())
        .collect();
    let inv_n = 1.0 / n as f64;
    let spectrum: Vec<Complex64> = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for wm in &w {
                acc += wm * twiddle[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            acc * inv_n
        })
        .collect();
    let col_phase: Vec<Complex64> = (0..n)
        .map(|q| lambda2[q].conj() * twiddle[(q * zeta) % n])
        .collect();
    let mut g = ComplexMatrix::zeros(n, n);
    for p in 0..n {
        let lp = lambda2[p];
        let row = &mut g.as_mut_slice()[p * n..(p + 1) * n];
        for (q, out) in row.iter_mut().enumerate() {
            *out = lp * col_phase[q] * spectrum[(p + n - q) % n];
        }
    }
    g
}

/// OFDM path matrix `F_N Z^f Π^ζ F_Nᴴ`.
pub fn ofdm_path_matrix(n: usize, path: &NormalizedPath) -> Result<ComplexMatrix> {
    check_n(n)?;
    check_delay(n, path)?;
    let ones = vec![Complex64::new(1.0, 0.0); n];
    let d = doppler_diagonal(n, path.doppler);
    Ok(chirp_conjugated_shift(&ones, &ones, &d, path.delay_taps))
}

/// AFDM path matrix `A Φ Z^f Π^ζ Aᴴ` with `A = Λ_{c2} F_N Λ_{c1}`.
///
/// Takes raw chirp rates, so `c1 = c2 = 0` is accepted and reproduces OFDM.
pub fn afdm_path_matrix(
    n: usize,
    c1: f64,
    c2: f64,
    path: &NormalizedPath,
) -> Result<ComplexMatrix> {
    check_n(n)?;
    check_delay(n, path)?;
    let phi = cpp_diagonal(n, c1, path.delay_taps)?;
    let d: Vec<Complex64> = phi
        .iter()
        .zip(doppler_diagonal(n, path.doppler))
        .map(|(a, b)| a * b)
        .collect();
    Ok(chirp_conjugated_shift(
        &chirp_diagonal(n, c1),
        &chirp_diagonal(n, c2),
        &d,
        path.delay_taps,
    ))
}

/// OTFS path matrix `(F_{N1} ⊗ I_{N2}) Z^f Π^ζ (F_{N1}ᴴ ⊗ I_{N2})`.
pub fn otfs_path_matrix(n1: usize, n2: usize, path: &NormalizedPath) -> Result<ComplexMatrix> {
    if n1 == 0 || n2 == 0 {
        return Err(SimError::InvalidSpec("OTFS factors must be >= 1".into()));
    }
    let n = n1 * n2;
    check_delay(n, path)?;
    let f1 = linalg::dft_matrix(n1)?;
    let d = doppler_diagonal(n, path.doppler);
    let zeta = path.delay_taps;
    let mut g = ComplexMatrix::zeros(n, n);
    // U[p, k] is nonzero only for k ≡ p (mod n2), so each entry of the
    // conjugated operator is a sum over n1 terms.
    for p in 0..n {
        let (p1, p2) = (p / n2, p % n2);
        for k1 in 0..n1 {
            let k = k1 * n2 + p2;
            let l = (k + n - zeta) % n;
            let (l1, l2) = (l / n2, l % n2);
            let a = f1[(p1, k1)] * d[k];
            for q1 in 0..n1 {
                g[(p, q1 * n2 + l2)] += a * f1[(q1, l1)].conj();
            }
        }
    }
    Ok(g)
}

fn check_delay(n: usize, path: &NormalizedPath) -> Result<()> {
    if path.delay_taps >= n {
        return Err(SimError::InvalidInput(format!(
            "path delay {} taps must be shorter than the block N={n}",
            path.delay_taps
        )));
    }
    if !path.doppler.is_finite() {
        return Err(SimError::InvalidInput("non-finite Doppler".into()));
    }
    Ok(())
}

fn kind_mismatch(spec: &WaveformSpec, want: &str) -> SimError {
    SimError::InvalidSpec(format!("expected {want} spec, got {spec}"))
}

pub fn subcarrier_matrix_ofdm(spec: &WaveformSpec, path: &NormalizedPath) -> Result<ComplexMatrix> {
    match spec.kind {
        WaveformKind::Ofdm => ofdm_path_matrix(spec.n, path),
        _ => Err(kind_mismatch(spec, "OFDM")),
    }
}

pub fn subcarrier_matrix_otfs(spec: &WaveformSpec, path: &NormalizedPath) -> Result<ComplexMatrix> {
    match spec.kind {
        WaveformKind::Otfs { n1, n2 } => {
            if n1 * n2 != spec.n {
                return Err(SimError::InvalidSpec("OTFS factorization mismatch".into()));
            }
            otfs_path_matrix(n1, n2, path)
        }
        _ => Err(kind_mismatch(spec, "OTFS")),
    }
}

pub fn subcarrier_matrix_afdm(spec: &WaveformSpec, path: &NormalizedPath) -> Result<ComplexMatrix> {
    match spec.kind {
        WaveformKind::Afdm { c1, c2 } => afdm_path_matrix(spec.n, c1, c2, path),
        _ => Err(kind_mismatch(spec, "AFDM")),
    }
}

/// Waveform-domain path matrix `G_ℓ` for whichever waveform `spec` names.
pub fn subcarrier_matrix(spec: &WaveformSpec, path: &NormalizedPath) -> Result<ComplexMatrix> {
    match spec.kind {
        WaveformKind::Ofdm => subcarrier_matrix_ofdm(spec, path),
        WaveformKind::Otfs { .. } => subcarrier_matrix_otfs(spec, path),
        WaveformKind::Afdm { .. } => subcarrier_matrix_afdm(spec, path),
    }
}

/// `H̄ = Σ_ℓ Ĥ_ℓ ⊗ G_ℓ`.
pub fn assemble_effective_channel(
    per_path_mimo: &[ComplexMatrix],
    per_path_g: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    if per_path_mimo.is_empty() || per_path_mimo.len() != per_path_g.len() {
        return Err(SimError::InvalidInput(format!(
            "need matching non-empty path lists, got {} and {}",
            per_path_mimo.len(),
            per_path_g.len()
        )));
    }
    let (m_rows, m_cols) = (per_path_mimo[0].rows(), per_path_mimo[0].cols());
    let (g_rows, g_cols) = (per_path_g[0].rows(), per_path_g[0].cols());
    let mut total = ComplexMatrix::zeros(m_rows * g_rows, m_cols * g_cols);
    for (h, g) in per_path_mimo.iter().zip(per_path_g) {
        if (h.rows(), h.cols()) != (m_rows, m_cols) || (g.rows(), g.cols()) != (g_rows, g_cols) {
            return Err(SimError::InvalidInput(
                "inconsistent per-path dimensions".into(),
            ));
        }
        if m_rows == 1 && m_cols == 1 {
            total.add_scaled(g, h[(0, 0)]);
        } else {
            total.add_scaled(&linalg::kron(h, g), Complex64::new(1.0, 0.0));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_distance_to_identity;

    fn dense_route(spec: &WaveformSpec, path: &NormalizedPath) -> ComplexMatrix {
        let c1 = match spec.kind() {
            WaveformKind::Afdm { c1, .. } => c1,
            _ => 0.0,
        };
        let u = transform_matrix(spec);
        u.matmul(&delay_doppler_matrix(spec.n(), c1, path).unwrap())
            .matmul(&u.adjoint())
    }

    #[test]
    fn doppler_cases() {
        assert_eq!(doppler_matrix(5, 0.0), ComplexMatrix::identity(5));
        let z = doppler_matrix(4, 1.0);
        assert!((z[(1, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let zp = doppler_matrix(6, 0.37);
        let zm = doppler_matrix(6, -0.37);
        assert!(zp.adjoint().max_abs_diff(&zm) < 1e-15);
    }

    #[test]
    fn chirp_cases() {
        assert_eq!(afdm_chirp_matrix(7, 0.0), ComplexMatrix::identity(7));
        let l = afdm_chirp_matrix(2, 0.25);
        assert!((l[(1, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let l = afdm_chirp_matrix(9, 0.123);
        assert!(frobenius_distance_to_identity(&l) < 1e-13);
    }

    #[test]
    fn cpp_cases() {
        assert_eq!(cpp_matrix(6, 0.3, 0).unwrap(), ComplexMatrix::identity(6));
        assert_eq!(cpp_matrix(6, 0.0, 3).unwrap(), ComplexMatrix::identity(6));
        let phi = cpp_matrix(4, 1.0 / 8.0, 1).unwrap();
        for m in 0..4 {
            assert!((phi[(m, m)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(cpp_matrix(4, 0.1, 4).is_err());
    }

    #[test]
    fn ofdm_delay_only_is_diagonal_phase() {
        let g = ofdm_path_matrix(8, &NormalizedPath::new(2, 0.0)).unwrap();
        for p in 0..8 {
            for q in 0..8 {
                let want = if p == q {
                    Complex64::from_polar(1.0, -2.0 * PI * 2.0 * p as f64 / 8.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((g[(p, q)] - want).norm() < 1e-12);
            }
        }
        let g = ofdm_path_matrix(8, &NormalizedPath::new(0, 0.0)).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-14);
    }

    #[test]
    fn fast_builders_match_dense_products() {
        let path = NormalizedPath::new(3, 0.37);
        for spec in [
            WaveformSpec::ofdm(12).unwrap(),
            WaveformSpec::otfs(12, 3, 4).unwrap(),
            WaveformSpec::otfs(12, 4, 3).unwrap(),
            WaveformSpec::afdm(12, 0.21, 0.05).unwrap(),
            WaveformSpec::afdm(12, 1.0 / 24.0, 0.0).unwrap(),
        ] {
            let fast = subcarrier_matrix(&spec, &path).unwrap();
            let dense = dense_route(&spec, &path);
            assert!(fast.max_abs_diff(&dense) < 1e-12, "{spec}");
        }
    }

    #[test]
    fn otfs_2x2_against_explicit_product() {
        // ζ = 1, f = 0 on N = 4: spell out F_2 ⊗ I_2 and Π by hand.
        let s = 1.0 / 2f64.sqrt();
        let r = |x: f64| Complex64::new(x, 0.0);
        let u = ComplexMatrix::from_rows(&[
            vec![r(s), r(0.), r(s), r(0.)],
            vec![r(0.), r(s), r(0.), r(s)],
            vec![r(s), r(0.), r(-s), r(0.)],
            vec![r(0.), r(s), r(0.), r(-s)],
        ])
        .unwrap();
        let pi = ComplexMatrix::from_rows(&[
            vec![r(0.), r(0.), r(0.), r(1.)],
            vec![r(1.), r(0.), r(0.), r(0.)],
            vec![r(0.), r(1.), r(0.), r(0.)],
            vec![r(0.), r(0.), r(1.), r(0.)],
        ])
        .unwrap();
        let mut want = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..4 {
                    for b in 0..4 {
                        acc += u[(i, a)] * pi[(a, b)] * u[(j, b)].conj();
                    }
                }
                want[(i, j)] = acc;
            }
        }
        let spec = WaveformSpec::otfs(4, 2, 2).unwrap();
        let got = subcarrier_matrix_otfs(&spec, &NormalizedPath::new(1, 0.0)).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn otfs_degenerate_factorization() {
        let path = NormalizedPath::new(2, 0.4);
        let g = otfs_path_matrix(1, 6, &path).unwrap();
        let zp = doppler_matrix(6, 0.4).matmul(&linalg::cyclic_shift_matrix(6, 2));
        assert!(g.max_abs_diff(&zp) < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(WaveformSpec::otfs(12, 5, 2).is_err());
        assert!(WaveformSpec::otfs(12, 0, 12).is_err());
        assert!(WaveformSpec::afdm(8, 0.0, 0.0).is_err());
        assert!(WaveformSpec::ofdm(0).is_err());
        let spec = WaveformSpec::ofdm(8).unwrap();
        assert!(subcarrier_matrix_afdm(&spec, &NormalizedPath::new(0, 0.0)).is_err());
        assert!(subcarrier_matrix_ofdm(&spec, &NormalizedPath::new(8, 0.0)).is_err());
    }

    #[test]
    fn default_chirp_rate() {
        assert!((default_afdm_c1(64, 0.0625) - 1.0 / 128.0).abs() < 1e-15);
        assert!((default_afdm_c1(16, 1.6) - 5.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn assemble_cases() {
        let one = ComplexMatrix::identity(1);
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(
            assemble_effective_channel(std::slice::from_ref(&one), std::slice::from_ref(&i4))
                .unwrap(),
            i4
        );
        let two =
            assemble_effective_channel(&[one.clone(), one.clone()], &[i4.clone(), i4.clone()])
                .unwrap();
        assert_eq!(two, i4.scale(Complex64::new(2.0, 0.0)));
        assert!(assemble_effective_channel(std::slice::from_ref(&one), &[]).is_err());
        assert!(
            assemble_effective_channel(&[one, ComplexMatrix::identity(2)], &[i4.clone(), i4])
                .is_err()
        );
    }
}

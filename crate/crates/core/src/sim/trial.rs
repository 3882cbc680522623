//! One Monte-Carlo trial: channel draw, transmission and detection.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::{ArrayMode, BeamDesign, DetectorKind, SimConfig};
use crate::channel::{
    effective_path_matrix_capa, effective_path_matrix_discrete, matched_current,
    multi_beam_current, sample_paths, strongest_path, ApertureConfig, DiscreteArray,
    DiscreteWeights, Path, QuadratureGrid, Side,
};
use crate::detector::{gabp_detect, lmmse_detect, ml_oracle, qpsk_demap, qpsk_map};
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::waveform::{assemble_effective_channel, subcarrier_matrix, NormalizedPath};

/// `σ_w² = E_C · 10^(−snr/10)`.
pub fn snr_to_noise_variance(snr_db: f64, symbol_power: f64) -> f64 {
    symbol_power * 10f64.powf(-snr_db / 10.0)
}

/// Mean over rows of the row energy `Σ_m |H_{n,m}|²`.
pub fn mean_row_energy(h: &ComplexMatrix) -> f64 {
    h.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / h.rows() as f64
}

/// A drawn channel with everything needed to inspect it.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub paths: Vec<Path>,
    /// Path the beamformers are steered at.
    pub steered: usize,
    pub couplings: Vec<ComplexMatrix>,
    pub normalized: Vec<NormalizedPath>,
    pub path_matrices: Vec<ComplexMatrix>,
    /// Effective channel after SNR-convention scaling.
    pub channel: ComplexMatrix,
    /// Mean row energy of the unscaled effective channel.
    pub raw_gain: f64,
}

/// Draws paths and builds the scaled effective channel. Consumes only the
/// path draws from `rng`, identically for every waveform and array mode.
pub fn realize_channel<R: Rng + ?Sized>(
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let paths = sample_paths(&cfg.path_scenario(), rng)?;
    let steered = strongest_path(&paths);
    let wavelength = cfg.wavelength();
    let (tx, rx) = (cfg.tx_aperture()?, cfg.rx_aperture()?);
    let current = |aperture: &ApertureConfig, side: Side| match cfg.beamforming {
        BeamDesign::Strongest => matched_current(aperture, &paths[steered], side, wavelength),
        BeamDesign::AllPaths => multi_beam_current(aperture, &paths, side, wavelength),
    };
    let (j_tx, j_rx) = (current(&tx, Side::Tx), current(&rx, Side::Rx));

    let couplings: Vec<ComplexMatrix> = match cfg.array_mode {
        ArrayMode::Continuous => {
            let grid = QuadratureGrid::uniform(&tx, &rx, cfg.quadrature_points)?;
            paths
                .iter()
                .map(|p| effective_path_matrix_capa(&j_tx, &j_rx, p, &grid, &tx, &rx))
                .collect()
        }
        ArrayMode::Discrete => {
            let tx_arr = DiscreteArray::half_wavelength(&tx, wavelength)?;
            let rx_arr = DiscreteArray::half_wavelength(&rx, wavelength)?;
            let w_tx = DiscreteWeights::sampled(&tx_arr, &j_tx);
            let w_rx = DiscreteWeights::sampled(&rx_arr, &j_rx);
            paths
                .iter()
                .map(|p| effective_path_matrix_discrete(&tx_arr, &w_tx, &rx_arr, &w_rx, p))
                .collect::<Result<_>>()?
        }
    };

    let spec = cfg.waveform_spec()?;
    let normalized: Vec<NormalizedPath> = paths
        .iter()
        .map(|p| p.normalized(cfg.sampling_hz, cfg.n))
        .collect();
    let path_matrices = normalized
        .iter()
        .map(|np| subcarrier_matrix(&spec, np))
        .collect::<Result<Vec<_>>>()?;
    let raw = assemble_effective_channel(&couplings, &path_matrices)?;
    let raw_gain = mean_row_energy(&raw);
    let scale = if cfg.normalize_channel {
        raw_gain
    } else {
        cfg.reference_gain()
    };
    let channel = raw.scale(Complex64::new(1.0 / scale.sqrt(), 0.0));
    Ok(ChannelRealization {
        paths,
        steered,
        couplings,
        normalized,
        path_matrices,
        channel,
        raw_gain,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub bit_errors: u64,
    pub bits_total: u64,
    pub raw_gain: f64,
}

/// Runs the configured detector on `y = H̄ c + w`.
pub fn detect(
    cfg: &SimConfig,
    y: &[Complex64],
    h: &ComplexMatrix,
    noise_variance: f64,
) -> Result<Vec<Complex64>> {
    let e_c = cfg.gabp.symbol_power;
    match cfg.detector {
        DetectorKind::Gabp => gabp_detect(y, h, &cfg.gabp.with_noise_variance(noise_variance)),
        DetectorKind::Lmmse => lmmse_detect(y, h, noise_variance, e_c),
        DetectorKind::Ml => ml_oracle(y, h, e_c),
    }
}

/// One trial at `snr_db`. The generator seeded with `seed` draws, in
/// order, the paths, the payload bits and the noise.
pub fn run_trial(cfg: &SimConfig, snr_db: f64, seed: u64) -> Result<TrialOutcome> {
    cfg.validate()?;
    run_trial_unchecked(cfg, snr_db, seed)
}

pub(crate) fn run_trial_unchecked(cfg: &SimConfig, snr_db: f64, seed: u64) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let realization = realize_channel(cfg, &mut rng)?;
    let h = &realization.channel;
    let e_c = cfg.gabp.symbol_power;

    let bits: Vec<u8> = (0..2 * h.cols())
        .map(|_| rng.random_range(0..=1u8))
        .collect();
    let symbols = qpsk_map(&bits, e_c)?;
    let noise_variance = snr_to_noise_variance(snr_db, e_c);
    let sigma = (noise_variance / 2.0).sqrt();
    let mut y = h.matvec(&symbols);
    for v in &mut y {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(sigma * re, sigma * im);
    }

    let estimate = detect(cfg, &y, h, noise_variance)?;
    let decoded = qpsk_demap(&estimate);
    let bit_errors = decoded.iter().zip(&bits).filter(|(a, b)| a != b).count() as u64;
    Ok(TrialOutcome {
        bit_errors,
        bits_total: bits.len() as u64,
        raw_gain: realization.raw_gain,
    })
}

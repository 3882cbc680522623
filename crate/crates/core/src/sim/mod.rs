//! Monte-Carlo BER harness: configuration, trials, sweeps and file formats.

mod config;
mod io;
mod sweep;
mod trial;

pub use config::{
    parse_snr_grid, ArrayMode, BeamDesign, DetectorKind, SimConfig, WaveformChoice, CONFIG_KEYS,
};
pub use io::{emit_csv, read_csv, read_matrix, write_matrix, CSV_HEADER};
pub use sweep::{sweep, trial_seed, BERRecord};
pub use trial::{
    detect, mean_row_energy, realize_channel, run_trial, snr_to_noise_variance, ChannelRealization,
    TrialOutcome,
};

//! Symbol detectors for the effective channel `y = H̄ c + w`.

pub mod baseline;
pub mod gabp;
pub mod qpsk;

pub use baseline::{lmmse_detect, ml_oracle, ML_MAX_SYMBOLS};
pub use gabp::{
    belief_update, consensus, gabp_detect, gabp_detect_traced, replica_update, sic_update, Beliefs,
    GabpConfig, GabpState, IterationTrace, SicMessages, VARIANCE_FLOOR,
};
pub use qpsk::{
    damp, hard_decision, mse_update, qpsk_amplitude, qpsk_demap, qpsk_denoise, qpsk_map,
};

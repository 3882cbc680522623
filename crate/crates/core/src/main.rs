use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use capa_link::sim::{
    emit_csv, realize_channel, run_trial, snr_to_noise_variance, sweep, write_matrix, SimConfig,
};
use capa_link::{Result, SimError};

#[derive(Parser)]
#[command(
    name = "capa-link",
    version,
    about = "Monte-Carlo BER simulator for continuous-aperture multicarrier links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full BER sweep and write CSV.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a single trial and print a summary of the drawn channel.
    Trial {
        #[command(flatten)]
        config: ConfigArgs,
        /// SNR in dB (first grid point when omitted).
        #[arg(long)]
        snr: Option<f64>,
        /// Trial seed (the master seed when omitted).
        #[arg(long)]
        trial_seed: Option<u64>,
    },
    /// Dump the per-path waveform matrices and the effective channel.
    Matrices {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory (effective channel to stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Config file plus per-field overrides. Flags take precedence over the file.
#[derive(Args)]
struct ConfigArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    carrier_hz: Option<String>,
    #[arg(long)]
    sampling_hz: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    streams: Option<String>,
    #[arg(long)]
    paths: Option<String>,
    #[arg(long)]
    max_range: Option<String>,
    #[arg(long)]
    max_velocity: Option<String>,
    #[arg(long)]
    tx_area: Option<String>,
    #[arg(long)]
    rx_area: Option<String>,
    /// ofdm | otfs | afdm
    #[arg(long)]
    waveform: Option<String>,
    #[arg(long)]
    otfs_n1: Option<String>,
    #[arg(long)]
    otfs_n2: Option<String>,
    #[arg(long)]
    afdm_c1: Option<String>,
    #[arg(long)]
    afdm_c2: Option<String>,
    /// continuous | discrete
    #[arg(long)]
    array_mode: Option<String>,
    /// strongest | all
    #[arg(long)]
    beamforming: Option<String>,
    /// gabp | lmmse | ml
    #[arg(long)]
    detector: Option<String>,
    #[arg(long)]
    iterations: Option<String>,
    #[arg(long)]
    damping: Option<String>,
    #[arg(long)]
    symbol_power: Option<String>,
    #[arg(long)]
    quadrature_points: Option<String>,
    #[arg(long)]
    standoff: Option<String>,
    /// on | off
    #[arg(long)]
    normalize_channel: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Comma list or start:step:stop
    #[arg(long)]
    snr_db: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SimConfig> {
        let mut pairs = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    SimError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                SimConfig::parse_text(&text)?
            }
            None => Vec::new(),
        };
        let flags = [
            ("carrier_hz", &self.carrier_hz),
            ("sampling_hz", &self.sampling_hz),
            ("n", &self.n),
            ("streams", &self.streams),
            ("paths", &self.paths),
            ("max_range", &self.max_range),
            ("max_velocity", &self.max_velocity),
            ("tx_area", &self.tx_area),
            ("rx_area", &self.rx_area),
            ("waveform", &self.waveform),
            ("otfs_n1", &self.otfs_n1),
            ("otfs_n2", &self.otfs_n2),
            ("afdm_c1", &self.afdm_c1),
            ("afdm_c2", &self.afdm_c2),
            ("array_mode", &self.array_mode),
            ("beamforming", &self.beamforming),
            ("detector", &self.detector),
            ("iterations", &self.iterations),
            ("damping", &self.damping),
            ("symbol_power", &self.symbol_power),
            ("quadrature_points", &self.quadrature_points),
            ("standoff", &self.standoff),
            ("normalize_channel", &self.normalize_channel),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("snr_db", &self.snr_db),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.push((key.to_string(), v.clone()));
            }
        }
        for s in &self.set {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| SimError::Config(format!("--set expects KEY=VALUE, got '{s}'")))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        SimConfig::from_pairs(pairs)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config, out } => {
            let cfg = config.resolve()?;
            let records = sweep(&cfg)?;
            match out {
                Some(path) => emit_csv(&records, BufWriter::new(File::create(path)?))?,
                None => emit_csv(&records, io::stdout().lock())?,
            }
        }
        Command::Trial {
            config,
            snr,
            trial_seed,
        } => {
            let cfg = config.resolve()?;
            let snr = snr.unwrap_or(cfg.snr_db[0]);
            let seed = trial_seed.unwrap_or(cfg.seed);
            let realization = realize_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let outcome = run_trial(&cfg, snr, seed)?;
            let mut out = io::stdout().lock();
            writeln!(out, "waveform: {}", cfg.waveform_spec()?)?;
            writeln!(out, "array_mode: {}", cfg.array_mode)?;
            writeln!(out, "beamforming: {}", cfg.beamforming)?;
            writeln!(out, "detector: {}", cfg.detector)?;
            writeln!(out, "strongest_path: {}", realization.steered)?;
            for (i, ((p, np), h)) in realization
                .paths
                .iter()
                .zip(&realization.normalized)
                .zip(&realization.couplings)
                .enumerate()
            {
                writeln!(
                    out,
                    "path {i}: gain={:.6e} delay_s={:.6e} doppler_hz={:.6e} taps={} doppler_bins={:.6} |coupling|={:.6e}",
                    p.gain,
                    p.delay,
                    p.doppler,
                    np.delay_taps,
                    np.doppler,
                    h[(0, 0)].norm()
                )?;
            }
            writeln!(
                out,
                "rx_gain_db: {:.6}",
                10.0 * realization.raw_gain.log10()
            )?;
            writeln!(out, "snr_db: {snr}")?;
            writeln!(
                out,
                "noise_variance: {:.6e}",
                snr_to_noise_variance(snr, cfg.gabp.symbol_power)
            )?;
            writeln!(out, "bit_errors: {}", outcome.bit_errors)?;
            writeln!(out, "bits_total: {}", outcome.bits_total)?;
        }
        Command::Matrices { config, out } => {
            let cfg = config.resolve()?;
            let realization = realize_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(cfg.seed))?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    for (i, g) in realization.path_matrices.iter().enumerate() {
                        write_matrix(
                            g,
                            BufWriter::new(File::create(dir.join(format!("g_{i}.txt")))?),
                        )?;
                    }
                    write_matrix(
                        &realization.channel,
                        BufWriter::new(File::create(dir.join("channel.txt"))?),
                    )?;
                }
                None => write_matrix(&realization.channel, io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

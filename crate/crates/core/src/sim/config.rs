//! Scenario configuration and its flat `key=value` text form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::channel::{ApertureConfig, PathScenario, SPEED_OF_LIGHT};
use crate::detector::{GabpConfig, ML_MAX_SYMBOLS};
use crate::error::{Result, SimError};
use crate::waveform::{default_afdm_c1, WaveformSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayMode {
    Continuous,
    Discrete,
}

/// Which paths the transmit and receive currents are steered at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamDesign {
    Strongest,
    AllPaths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorKind {
    Gabp,
    Lmmse,
    Ml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformChoice {
    Ofdm,
    Otfs,
    Afdm,
}

macro_rules! tagged_enum {
    ($ty:ty { $($variant:ident => $tag:literal),+ $(,)? }) => {
        impl $ty {
            pub fn tag(&self) -> &'static str {
                match self { $(Self::$variant => $tag),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.tag())
            }
        }
        impl FromStr for $ty {
            type Err = SimError;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($tag => Ok(Self::$variant),)+
                    other => Err(SimError::Config(format!(
                        "unknown {} '{other}'", stringify!($ty)
                    ))),
                }
            }
        }
    };
}

tagged_enum!(ArrayMode { Continuous => "continuous", Discrete => "discrete" });
tagged_enum!(BeamDesign { Strongest => "strongest", AllPaths => "all" });
tagged_enum!(DetectorKind { Gabp => "gabp", Lmmse => "lmmse", Ml => "ml" });
tagged_enum!(WaveformChoice { Ofdm => "ofdm", Otfs => "otfs", Afdm => "afdm" });

/// Everything a sweep depends on. Output is a pure function of this value.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub carrier_hz: f64,
    pub sampling_hz: f64,
    pub n: usize,
    pub streams: usize,
    pub num_paths: usize,
    pub max_range: f64,
    pub max_velocity: f64,
    pub tx_area: f64,
    pub rx_area: f64,
    pub waveform: WaveformChoice,
    /// OTFS grid; square root of `n` when unset.
    pub otfs_grid: Option<(usize, usize)>,
    /// AFDM first chirp rate; derived from the maximum Doppler when unset.
    pub afdm_c1: Option<f64>,
    pub afdm_c2: f64,
    pub array_mode: ArrayMode,
    pub beamforming: BeamDesign,
    pub detector: DetectorKind,
    pub gabp: GabpConfig,
    pub quadrature_points: usize,
    pub standoff: f64,
    pub normalize_channel: bool,
    pub seed: u64,
    pub trials: usize,
    pub snr_db: Vec<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 2.4e9,
            sampling_hz: 1e6,
            n: 64,
            streams: 1,
            num_paths: 5,
            max_range: 1500.0,
            max_velocity: 122.0,
            tx_area: 0.25,
            rx_area: 0.25,
            waveform: WaveformChoice::Afdm,
            otfs_grid: None,
            afdm_c1: None,
            afdm_c2: 0.0,
            array_mode: ArrayMode::Continuous,
            beamforming: BeamDesign::AllPaths,
            detector: DetectorKind::Gabp,
            gabp: GabpConfig::default(),
            quadrature_points: 10,
            standoff: 30.0,
            normalize_channel: false,
            seed: 1,
            trials: 100,
            snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        }
    }
}

/// Keys accepted by [`SimConfig::set`], in documentation order.
pub const CONFIG_KEYS: &[&str] = &[
    "carrier_hz",
    "sampling_hz",
    "n",
    "streams",
    "paths",
    "max_range",
    "max_velocity",
    "tx_area",
    "rx_area",
    "waveform",
    "otfs_n1",
    "otfs_n2",
    "afdm_c1",
    "afdm_c2",
    "array_mode",
    "beamforming",
    "detector",
    "iterations",
    "damping",
    "symbol_power",
    "quadrature_points",
    "standoff",
    "normalize_channel",
    "seed",
    "trials",
    "snr_db",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| SimError::Config(format!("cannot parse '{value}' for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(SimError::Config(format!(
            "cannot parse '{value}' for {key}"
        ))),
    }
}

/// `a,b,c` or an inclusive range `start:step:stop`.
pub fn parse_snr_grid(value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    if value.contains(':') {
        let parts: Vec<f64> = value
            .split(':')
            .map(|p| parse("snr_db", p))
            .collect::<Result<_>>()?;
        let [start, step, stop] = parts[..] else {
            return Err(SimError::Config(format!(
                "SNR range '{value}' must be start:step:stop"
            )));
        };
        if !(step > 0.0) || stop < start {
            return Err(SimError::Config(format!("bad SNR range '{value}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse("snr_db", s))
        .collect()
}

impl SimConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        match key.as_str() {
            "carrier_hz" => self.carrier_hz = parse(&key, value)?,
            "sampling_hz" => self.sampling_hz = parse(&key, value)?,
            "n" => self.n = parse(&key, value)?,
            "streams" => self.streams = parse(&key, value)?,
            "paths" => self.num_paths = parse(&key, value)?,
            "max_range" => self.max_range = parse(&key, value)?,
            "max_velocity" => self.max_velocity = parse(&key, value)?,
            "tx_area" => self.tx_area = parse(&key, value)?,
            "rx_area" => self.rx_area = parse(&key, value)?,
            "waveform" => self.waveform = value.parse()?,
            "otfs_n1" => {
                let n1 = parse(&key, value)?;
                self.otfs_grid = Some((n1, self.otfs_grid.map_or(0, |g| g.1)));
            }
            "otfs_n2" => {
                let n2 = parse(&key, value)?;
                self.otfs_grid = Some((self.otfs_grid.map_or(0, |g| g.0), n2));
            }
            "afdm_c1" => self.afdm_c1 = Some(parse(&key, value)?),
            "afdm_c2" => self.afdm_c2 = parse(&key, value)?,
            "array_mode" => self.array_mode = value.parse()?,
            "beamforming" => self.beamforming = value.parse()?,
            "detector" => self.detector = value.parse()?,
            "iterations" => self.gabp.iterations = parse(&key, value)?,
            "damping" => self.gabp.damping = parse(&key, value)?,
            "symbol_power" => self.gabp.symbol_power = parse(&key, value)?,
            "quadrature_points" => self.quadrature_points = parse(&key, value)?,
            "standoff" => self.standoff = parse(&key, value)?,
            "normalize_channel" => self.normalize_channel = parse_bool(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "trials" => self.trials = parse(&key, value)?,
            "snr_db" => self.snr_db = parse_snr_grid(value)?,
            other => return Err(SimError::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a flat text config: one `key = value` per line, `#` comments.
    pub fn parse_text(text: &str) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(SimError::Config(format!(
                    "line {}: expected key=value",
                    lineno + 1
                )));
            };
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }

    /// Defaults overridden by `pairs` in order, then validated.
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut cfg = Self::default();
        for (k, v) in pairs {
            cfg.set(k.as_ref(), v.as_ref())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_pairs(Self::parse_text(text)?)
    }

    /// Flat text form accepted by [`SimConfig::from_text`].
    pub fn to_text(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("carrier_hz", self.carrier_hz.to_string());
        map.insert("sampling_hz", self.sampling_hz.to_string());
        map.insert("n", self.n.to_string());
        map.insert("streams", self.streams.to_string());
        map.insert("paths", self.num_paths.to_string());
        map.insert("max_range", self.max_range.to_string());
        map.insert("max_velocity", self.max_velocity.to_string());
        map.insert("tx_area", self.tx_area.to_string());
        map.insert("rx_area", self.rx_area.to_string());
        map.insert("waveform", self.waveform.to_string());
        if let Some((n1, n2)) = self.otfs_grid {
            map.insert("otfs_n1", n1.to_string());
            map.insert("otfs_n2", n2.to_string());
        }
        if let Some(c1) = self.afdm_c1 {
            map.insert("afdm_c1", c1.to_string());
        }
        map.insert("afdm_c2", self.afdm_c2.to_string());
        map.insert("array_mode", self.array_mode.to_string());
        map.insert("beamforming", self.beamforming.to_string());
        map.insert("detector", self.detector.to_string());
        map.insert("iterations", self.gabp.iterations.to_string());
        map.insert("damping", self.gabp.damping.to_string());
        map.insert("symbol_power", self.gabp.symbol_power.to_string());
        map.insert("quadrature_points", self.quadrature_points.to_string());
        map.insert("standoff", self.standoff.to_string());
        map.insert(
            "normalize_channel",
            if self.normalize_channel { "on" } else { "off" }.to_string(),
        );
        map.insert("seed", self.seed.to_string());
        map.insert("trials", self.trials.to_string());
        let grid: Vec<String> = self.snr_db.iter().map(|s| s.to_string()).collect();
        map.insert("snr_db", grid.join(","));
        CONFIG_KEYS
            .iter()
            .filter_map(|k| map.get(k).map(|v| format!("{k} = {v}\n")))
            .collect()
    }

    pub fn path_scenario(&self) -> PathScenario {
        PathScenario {
            carrier_hz: self.carrier_hz,
            num_paths: self.num_paths,
            max_range: self.max_range,
            max_velocity: self.max_velocity,
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Largest delay any sampled path can have, in samples.
    pub fn max_delay_taps(&self) -> usize {
        (2.0 * self.max_range / SPEED_OF_LIGHT * self.sampling_hz).round() as usize
    }

    /// Largest Doppler in cycles per block.
    pub fn max_doppler_per_block(&self) -> f64 {
        self.path_scenario().max_doppler_hz() * self.n as f64 / self.sampling_hz
    }

    pub fn waveform_spec(&self) -> Result<WaveformSpec> {
        match self.waveform {
            WaveformChoice::Ofdm => WaveformSpec::ofdm(self.n),
            WaveformChoice::Otfs => {
                let (n1, n2) = match self.otfs_grid {
                    Some(g) => g,
                    None => {
                        let r = (self.n as f64).sqrt().round() as usize;
                        if r * r != self.n {
                            return Err(SimError::Config(format!(
                                "N={} is not a square; set otfs_n1 and otfs_n2",
                                self.n
                            )));
                        }
                        (r, r)
                    }
                };
                WaveformSpec::otfs(self.n, n1, n2).map_err(|e| SimError::Config(e.to_string()))
            }
            WaveformChoice::Afdm => {
                let c1 = self
                    .afdm_c1
                    .unwrap_or_else(|| default_afdm_c1(self.n, self.max_doppler_per_block()));
                WaveformSpec::afdm(self.n, c1, self.afdm_c2)
                    .map_err(|e| SimError::Config(e.to_string()))
            }
        }
    }

    pub fn tx_aperture(&self) -> Result<ApertureConfig> {
        ApertureConfig::square(self.tx_area, [0.0; 3]).map_err(|e| SimError::Config(e.to_string()))
    }

    /// Receive aperture, parallel to the transmitter and `standoff` metres away along y.
    pub fn rx_aperture(&self) -> Result<ApertureConfig> {
        ApertureConfig::square(self.rx_area, [0.0, self.standoff, 0.0])
            .map_err(|e| SimError::Config(e.to_string()))
    }

    /// Gain used to scale the channel when `normalize_channel` is off: an
    /// aligned path with both legs at half the maximum range.
    pub fn reference_gain(&self) -> f64 {
        let d = self.max_range / 2.0;
        let four_pi = 4.0 * std::f64::consts::PI;
        self.tx_area * self.rx_area / (self.num_paths as f64 * four_pi.powi(4) * d.powi(4))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_hz", self.carrier_hz),
            ("sampling_hz", self.sampling_hz),
            ("tx_area", self.tx_area),
            ("rx_area", self.rx_area),
            ("standoff", self.standoff),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SimError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.n == 0 {
            return Err(SimError::Config("n must be >= 1".into()));
        }
        if self.streams != 1 {
            return Err(SimError::Config(format!(
                "only single-stream links are supported, got streams={}",
                self.streams
            )));
        }
        self.path_scenario().validate()?;
        if self.max_delay_taps() >= self.n {
            return Err(SimError::Config(format!(
                "maximum delay of {} samples does not fit in a block of N={}",
                self.max_delay_taps(),
                self.n
            )));
        }
        if self.quadrature_points == 0 {
            return Err(SimError::Config("quadrature_points must be >= 1".into()));
        }
        self.gabp
            .validate()
            .map_err(|e| SimError::Config(e.to_string()))?;
        if self.detector == DetectorKind::Ml && self.n * self.streams > ML_MAX_SYMBOLS {
            return Err(SimError::Config(format!(
                "exhaustive ML supports at most {ML_MAX_SYMBOLS} symbols, got {}",
                self.n * self.streams
            )));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(SimError::Config(
                "SNR grid must be a non-empty list of finite values".into(),
            ));
        }
        self.waveform_spec()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SimConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.max_delay_taps(), 10);
        assert!((cfg.wavelength() - 0.1249).abs() < 1e-4);
        let spec = cfg.waveform_spec().unwrap();
        assert_eq!(spec.n(), 64);
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = SimConfig::default();
        cfg.set("waveform", "otfs").unwrap();
        cfg.set("n", "144").unwrap();
        cfg.set("snr_db", "0:10:30").unwrap();
        cfg.set("normalize_channel", "on").unwrap();
        assert_eq!(cfg.snr_db, vec![0.0, 10.0, 20.0, 30.0]);
        let back = SimConfig::from_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(
            back.waveform_spec().unwrap().to_string(),
            cfg.waveform_spec().unwrap().to_string()
        );
    }

    #[test]
    fn comments_and_errors() {
        let cfg = SimConfig::from_text("# scenario\nn = 16 # small\nwaveform=ofdm\n\n").unwrap();
        assert_eq!(cfg.n, 16);
        assert!(matches!(
            SimConfig::from_text("bogus = 1"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("n"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("n = x"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("streams = 2"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("n = 8"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("detector = ml"),
            Err(SimError::Config(_))
        ));
        assert!(matches!(
            SimConfig::from_text("waveform = otfs\nn = 32"),
            Err(SimError::Config(_))
        ));
        assert!(SimConfig::from_text("waveform = otfs\nn = 32\notfs_n1 = 4\notfs_n2 = 8").is_ok());
        assert!(matches!(
            SimConfig::from_text("snr_db ="),
            Err(SimError::Config(_))
        ));
    }
}

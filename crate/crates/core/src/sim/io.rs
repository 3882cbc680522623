//! CSV results and plain-text matrix dumps.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;
use serde::Deserialize;

use super::sweep::BERRecord;
use crate::error::{Result, SimError};
use crate::linalg::ComplexMatrix;

pub const CSV_HEADER: [&str; 10] = [
    "snr_db",
    "waveform",
    "array_mode",
    "detector",
    "n",
    "bit_errors",
    "bits_total",
    "ber",
    "seed",
    "rx_gain_db",
];

/// Header plus one row per record. Reals use ten significant digits.
pub fn emit_csv<W: Write>(records: &[BERRecord], destination: W) -> Result<()> {
    if records.is_empty() {
        return Err(SimError::InvalidInput("no records to write".into()));
    }
    let mut w = csv::Writer::from_writer(destination);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            format!("{:.9e}", r.snr_db),
            r.waveform.clone(),
            r.array_mode.clone(),
            r.detector.clone(),
            r.n.to_string(),
            r.bit_errors.to_string(),
            r.bits_total.to_string(),
            format!("{:.9e}", r.ber),
            r.seed.to_string(),
            format!("{:.9e}", r.rx_gain_db),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct Row {
    snr_db: f64,
    waveform: String,
    array_mode: String,
    detector: String,
    n: usize,
    bit_errors: u64,
    bits_total: u64,
    ber: f64,
    seed: u64,
    rx_gain_db: f64,
}

pub fn read_csv<R: Read>(source: R) -> Result<Vec<BERRecord>> {
    let mut rdr = csv::Reader::from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(SimError::InvalidInput(format!(
            "unexpected CSV header {headers:?}"
        )));
    }
    rdr.deserialize::<Row>()
        .map(|row| {
            let r = row?;
            Ok(BERRecord {
                snr_db: r.snr_db,
                waveform: r.waveform,
                array_mode: r.array_mode,
                detector: r.detector,
                n: r.n,
                bit_errors: r.bit_errors,
                bits_total: r.bits_total,
                ber: r.ber,
                seed: r.seed,
                rx_gain_db: r.rx_gain_db,
            })
        })
        .collect()
}

/// `rows cols` header, then one line per row of space-separated `re,im`
/// pairs. Values are written in shortest round-trip form.
pub fn write_matrix<W: Write>(m: &ComplexMatrix, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    for r in 0..m.rows() {
        let line: Vec<String> = m
            .row(r)
            .iter()
            .map(|z| format!("{:e},{:e}", z.re, z.im))
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(input: R) -> Result<ComplexMatrix> {
    let bad = |msg: String| SimError::InvalidInput(msg);
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad("empty matrix file".into()))??;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(format!("bad header '{header}'"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("header must be 'rows cols', got '{header}'")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for line in lines {
        let line = line?;
        for pair in line.split_whitespace() {
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| bad(format!("bad entry '{pair}'")))?;
            let re: f64 = re
                .parse()
                .map_err(|_| bad(format!("bad real part '{re}'")))?;
            let im: f64 = im
                .parse()
                .map_err(|_| bad(format!("bad imaginary part '{im}'")))?;
            data.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

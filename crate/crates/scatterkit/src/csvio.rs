//! CSV schemas for measured and simulated data.
//!
//! All files carry a header row with units embedded in the column names;
//! spectra and profiles are stored in dB, linear in memory.
//!
//! * `angular.csv` — `angle_deg,power_dbm,delay_spread_ns`, or
//!   `angle_deg,height_m,power_dbm,delay_spread_ns` for 3D sweeps.
//! * `pdp.csv` — `delay_ns,power_db`, one row per delay bin from bin 0;
//!   `delay_ns` is the bin center, `power_db` the bin power in dBm
//!   (zero-power bins at the −400 dB floor).
//! * `freqresp.csv` — `freq_hz,re,im`, uniformly spaced bins; the bandwidth
//!   is the bin spacing times the bin count.
//! * `hybrid_table.csv` — `frequency_ghz,theta_i_deg,s_eff,alpha_eff,theta_p_deg`.
//! * `fit_result.csv` / `trace.csv` — one row per (best | evaluated)
//!   candidate with the full parameter tuple and its SMAPE.

use crate::error::{Error, Result};
use crate::fitting::{FitResult, GeneralizationEntry, HybridEntry, TraceEntry};
use crate::geometry::RxLabel;
use crate::pdp::{AngularDataset, AngularEntry, FrequencyResponse, Pdp};
use crate::{dbm_to_watts, watts_to_dbm};
use rustfft::num_complex::Complex;
use std::path::Path;

const ANGULAR_HEADER_2D: [&str; 3] = ["angle_deg", "power_dbm", "delay_spread_ns"];
const ANGULAR_HEADER_3D: [&str; 4] = ["angle_deg", "height_m", "power_dbm", "delay_spread_ns"];
const PDP_HEADER: [&str; 2] = ["delay_ns", "power_db"];
const FREQRESP_HEADER: [&str; 3] = ["freq_hz", "re", "im"];

fn schema_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{}: {msg}", path.display()))
}

fn parse_field(path: &Path, line: usize, name: &str, raw: &str) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("{}: cannot parse {name} from {raw:?}", path.display()),
    })
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| schema_err(path, e))
}

fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

// ---------------------------------------------------------------------------
// Angular datasets
// ---------------------------------------------------------------------------

pub fn write_angular(dataset: &AngularDataset, path: &Path) -> Result<()> {
    let has_height = dataset.entries.iter().any(|e| e.label.height_m.is_some());
    if has_height && dataset.entries.iter().any(|e| e.label.height_m.is_none()) {
        return Err(Error::Schema(
            "mixed 2D and 3D labels in one angular dataset".into(),
        ));
    }
    let mut w = csv::Writer::from_path(path)?;
    if has_height {
        w.write_record(ANGULAR_HEADER_3D)?;
        for e in &dataset.entries {
            w.write_record(&[
                fmt(e.label.angle_deg),
                fmt(e.label.height_m.unwrap()),
                fmt(e.power_dbm),
                fmt(e.delay_spread_ns),
            ])
            ?;
        }
    } else {
        w.write_record(ANGULAR_HEADER_2D)?;
        for e in &dataset.entries {
            w.write_record(&[fmt(e.label.angle_deg), fmt(e.power_dbm), fmt(e.delay_spread_ns)])
                ?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_angular(path: &Path) -> Result<AngularDataset> {
    let mut r = reader(path)?;
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| schema_err(path, e))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let has_height = if headers == ANGULAR_HEADER_2D {
        false
    } else if headers == ANGULAR_HEADER_3D {
        true
    } else {
        return Err(schema_err(
            path,
            format!(
                "angular header must be {:?} or {:?}, got {:?}",
                ANGULAR_HEADER_2D.join(","),
                ANGULAR_HEADER_3D.join(","),
                headers.join(",")
            ),
        ));
    };

    let mut entries = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: format!("{}: {e}", path.display()),
        })?;
        let line = record_line(&record);
        let expected = if has_height { 4 } else { 3 };
        if record.len() != expected {
            return Err(Error::Parse {
                line,
                message: format!(
                    "{}: expected {expected} columns, got {}",
                    path.display(),
                    record.len()
                ),
            });
        }
        let mut col = 0;
        let mut next = |name: &str| -> Result<f64> {
            let v = parse_field(path, line, name, &record[col]);
            col += 1;
            v
        };
        let angle_deg = next("angle_deg")?;
        let height_m = if has_height { Some(next("height_m")?) } else { None };
        let power_dbm = next("power_dbm")?;
        let delay_spread_ns = next("delay_spread_ns")?;
        entries.push(AngularEntry {
            label: RxLabel {
                angle_deg,
                height_m,
            },
            power_dbm,
            delay_spread_ns,
        });
    }
    if entries.is_empty() {
        return Err(schema_err(path, "angular file has no data rows"));
    }
    let dataset = AngularDataset { entries };
    dataset
        .validate()
        .map_err(|e| schema_err(path, e))?;
    Ok(dataset)
}

// ---------------------------------------------------------------------------
// PDPs
// ---------------------------------------------------------------------------

pub fn write_pdp(pdp: &Pdp, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PDP_HEADER)?;
    for (i, &p) in pdp.powers.iter().enumerate() {
        w.write_record(&[fmt(pdp.bin_center_s(i) * 1e9), fmt(watts_to_dbm(p))])
            ?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pdp(path: &Path) -> Result<Pdp> {
    let mut r = reader(path)?;
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| schema_err(path, e))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if headers != PDP_HEADER {
        return Err(schema_err(
            path,
            format!("pdp header must be {:?}, got {:?}", PDP_HEADER.join(","), headers.join(",")),
        ));
    }
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: format!("{}: {e}", path.display()),
        })?;
        let line = record_line(&record);
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("{}: expected 2 columns, got {}", path.display(), record.len()),
            });
        }
        let delay_ns = parse_field(path, line, "delay_ns", &record[0])?;
        let power_db = parse_field(path, line, "power_db", &record[1])?;
        rows.push((delay_ns, power_db));
    }
    if rows.len() < 1 {
        return Err(schema_err(path, "pdp file has no data rows"));
    }
    // Bin centers (i + ½)·w from bin 0: the width is twice the first center.
    let width_ns = rows[0].0 * 2.0;
    if !(width_ns > 0.0) {
        return Err(schema_err(path, "first delay bin center must be positive"));
    }
    for (i, &(delay_ns, _)) in rows.iter().enumerate() {
        let expected = (i as f64 + 0.5) * width_ns;
        if (delay_ns - expected).abs() > 1e-6 * width_ns {
            return Err(schema_err(
                path,
                format!(
                    "delay grid must be consecutive bin centers; row {i} has {delay_ns} ns, expected {expected} ns"
                ),
            ));
        }
    }
    Pdp::new(
        width_ns * 1e-9,
        rows.iter().map(|&(_, db)| dbm_to_watts(db)).collect(),
    )
}

// ---------------------------------------------------------------------------
// Frequency responses
// ---------------------------------------------------------------------------

pub fn read_freqresp(path: &Path) -> Result<FrequencyResponse> {
    let mut r = reader(path)?;
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| schema_err(path, e))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if headers != FREQRESP_HEADER {
        return Err(schema_err(
            path,
            format!(
                "frequency-response header must be {:?}, got {:?}",
                FREQRESP_HEADER.join(","),
                headers.join(",")
            ),
        ));
    }
    let mut freqs = Vec::new();
    let mut samples = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: format!("{}: {e}", path.display()),
        })?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("{}: expected 3 columns, got {}", path.display(), record.len()),
            });
        }
        freqs.push(parse_field(path, line, "freq_hz", &record[0])?);
        samples.push(Complex::new(
            parse_field(path, line, "re", &record[1])?,
            parse_field(path, line, "im", &record[2])?,
        ));
    }
    if samples.len() < 2 {
        return Err(schema_err(path, "frequency response needs at least 2 bins"));
    }
    let df = freqs[1] - freqs[0];
    if !(df > 0.0) {
        return Err(schema_err(path, "frequency bins must be increasing"));
    }
    for (i, w) in freqs.windows(2).enumerate() {
        if ((w[1] - w[0]) - df).abs() > 1e-6 * df {
            return Err(schema_err(
                path,
                format!("frequency bins must be uniformly spaced; step changes at row {}", i + 1),
            ));
        }
    }
    FrequencyResponse::new(samples, df * freqs.len() as f64)
}

pub fn write_freqresp(resp: &FrequencyResponse, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(FREQRESP_HEADER)?;
    let df = resp.bandwidth_hz / resp.samples.len() as f64;
    for (i, c) in resp.samples.iter().enumerate() {
        w.write_record(&[fmt(i as f64 * df), fmt(c.re), fmt(c.im)])
            ?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Fit results, traces, hybrid tables, generalization reports
// ---------------------------------------------------------------------------

const PARAM_COLUMNS: [&str; 6] = [
    "epsilon_r",
    "h_rms_mm",
    "corr_length_t_mm",
    "alpha_r",
    "alpha_i",
    "lambda_mix",
];

fn param_fields(p: &crate::scattering::MaterialParams) -> [String; 6] {
    [
        fmt(p.epsilon_r),
        fmt(p.h_rms_mm),
        fmt(p.corr_length_t_mm),
        p.alpha_r.to_string(),
        p.alpha_i.to_string(),
        fmt(p.lambda_mix),
    ]
}

pub fn write_fit_result(fit: &FitResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<&str> = PARAM_COLUMNS.to_vec();
    header.push("smape");
    w.write_record(&header)?;
    let mut row: Vec<String> = param_fields(&fit.best).to_vec();
    row.push(fmt(fit.smape));
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

pub fn write_trace(trace: &[TraceEntry], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<&str> = PARAM_COLUMNS.to_vec();
    header.push("smape");
    header.push("error");
    w.write_record(&header)?;
    for entry in trace {
        let mut row: Vec<String> = param_fields(&entry.params).to_vec();
        row.push(entry.smape.map_or_else(String::new, fmt));
        row.push(entry.error.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_hybrid_table(entries: &[HybridEntry], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["frequency_ghz", "theta_i_deg", "s_eff", "alpha_eff", "theta_p_deg"])
        ?;
    for e in entries {
        w.write_record(&[
            fmt(e.frequency_hz / 1e9),
            fmt(e.theta_i_deg),
            fmt(e.s_eff),
            e.alpha_eff.to_string(),
            fmt(e.theta_p_deg),
        ])
        ?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_generalization(entries: &[GeneralizationEntry], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["theta_i_deg", "n_points", "smape", "power_rmse_db"])
        ?;
    for e in entries {
        w.write_record(&[
            fmt(e.theta_i_deg),
            e.n_points.to_string(),
            fmt(e.smape),
            fmt(e.power_rmse_db),
        ])
        ?;
    }
    w.flush()?;
    Ok(())
}

fn fmt(v: f64) -> String {
    // Shortest round-trip representation keeps files byte-stable across runs.
    format!("{v}")
}

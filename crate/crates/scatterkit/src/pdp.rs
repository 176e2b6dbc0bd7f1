//! Power-delay-profile processing: back-to-back calibration of sounder
//! frequency responses, threshold/window filtering, and the total-power and
//! RMS-delay-spread statistics consumed by the fitting objective.
//!
//! In-memory profiles are linear (bin powers in watts); files store dB
//! (see [`crate::csvio`] for the CSV schemas).

use crate::error::{Error, Result};
use crate::geometry::RxLabel;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Relative floor under which a calibration reference bin counts as a
/// division hazard: ε_G = 1e-6 · max |G|.
pub const REFERENCE_BIN_FLOOR_REL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Complex channel transfer function over K uniformly spaced frequency bins.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub samples: Vec<Complex<f64>>,
    pub bandwidth_hz: f64,
}

impl FrequencyResponse {
    pub fn new(samples: Vec<Complex<f64>>, bandwidth_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Schema("frequency response needs K > 0 bins".into()));
        }
        if !(bandwidth_hz > 0.0) {
            return Err(Error::Schema(format!(
                "bandwidth must be positive, got {bandwidth_hz}"
            )));
        }
        Ok(Self {
            samples,
            bandwidth_hz,
        })
    }

    /// Delay resolution of the corresponding PDP: 1/bandwidth.
    pub fn delay_resolution_s(&self) -> f64 {
        1.0 / self.bandwidth_hz
    }
}

/// Delay-binned power profile. Bin `i` covers `[i·w, (i+1)·w)` with center
/// `(i + ½)·w`, `w` = `bin_width_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdp {
    pub bin_width_s: f64,
    /// Linear bin powers (watts), all ≥ 0.
    pub powers: Vec<f64>,
}

impl Pdp {
    pub fn new(bin_width_s: f64, powers: Vec<f64>) -> Result<Self> {
        if !(bin_width_s > 0.0) {
            return Err(Error::Schema(format!(
                "bin width must be positive, got {bin_width_s}"
            )));
        }
        if powers.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Schema("bin powers must be >= 0 and finite".into()));
        }
        Ok(Self {
            bin_width_s,
            powers,
        })
    }

    pub fn bin_center_s(&self, index: usize) -> f64 {
        (index as f64 + 0.5) * self.bin_width_s
    }

    pub fn total_linear_watts(&self) -> f64 {
        self.powers.iter().sum()
    }

    /// Index of the strongest bin (first on ties); `None` if all-zero.
    pub fn peak_bin(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &p) in self.powers.iter().enumerate() {
            if p > 0.0 && best.map_or(true, |(_, bp)| p > bp) {
                best = Some((i, p));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Per-Rx-position received power and RMS delay spread: the fitting target.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularEntry {
    pub label: RxLabel,
    pub power_dbm: f64,
    pub delay_spread_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngularDataset {
    pub entries: Vec<AngularEntry>,
}

impl AngularDataset {
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.entries.iter().enumerate() {
            if a.delay_spread_ns < 0.0 {
                return Err(Error::Schema(format!(
                    "delay spread must be >= 0 ns at {}",
                    a.label
                )));
            }
            for b in &self.entries[i + 1..] {
                if a.label.matches(&b.label) {
                    return Err(Error::Schema(format!("duplicate rx label {}", a.label)));
                }
            }
        }
        Ok(())
    }

    /// Require the same label sequence as `other` (same length, same order).
    pub fn check_aligned(&self, other: &AngularDataset) -> Result<()> {
        if self.entries.len() != other.entries.len() {
            return Err(Error::Alignment(format!(
                "datasets have {} vs {} positions",
                self.entries.len(),
                other.entries.len()
            )));
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.label.matches(&b.label) {
                return Err(Error::Alignment(format!(
                    "label mismatch: {} vs {}",
                    a.label, b.label
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Back-to-back calibration: h_cal = IDFT(H_raw[k] / G[k]), PDP = |h_cal|².
///
/// `reference` is the cable-through sounder response. Bins of the reference
/// whose magnitude falls at or below ε_G = 1e-6·max|G| are a division hazard
/// and produce a [`Error::CalibrationFloor`] listing them.
pub fn back_to_back_calibrate(
    raw: &FrequencyResponse,
    reference: &FrequencyResponse,
) -> Result<Pdp> {
    if raw.samples.len() != reference.samples.len() {
        return Err(Error::Alignment(format!(
            "raw and reference have different bin counts: {} vs {}",
            raw.samples.len(),
            reference.samples.len()
        )));
    }
    let bw_rel = (raw.bandwidth_hz - reference.bandwidth_hz).abs()
        / raw.bandwidth_hz.max(reference.bandwidth_hz);
    if bw_rel > 1e-9 {
        return Err(Error::Alignment(format!(
            "raw and reference bandwidths differ: {} vs {} Hz",
            raw.bandwidth_hz, reference.bandwidth_hz
        )));
    }

    let max_mag = reference
        .samples
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let floor = REFERENCE_BIN_FLOOR_REL * max_mag;
    let offending: Vec<usize> = reference
        .samples
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() <= floor)
        .map(|(i, _)| i)
        .collect();
    if !offending.is_empty() {
        return Err(Error::CalibrationFloor { bins: offending });
    }

    let k = raw.samples.len();
    let mut ratio: Vec<Complex<f64>> = raw
        .samples
        .iter()
        .zip(&reference.samples)
        .map(|(h, g)| h / g)
        .collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(k).process(&mut ratio);
    let scale = 1.0 / k as f64;

    let powers = ratio
        .iter()
        .map(|c| {
            let h = c * scale;
            h.norm_sqr()
        })
        .collect();
    Pdp::new(raw.delay_resolution_s(), powers)
}

/// Window-then-threshold filtering: bins farther than `window_ns` from the
/// peak bin are zeroed, then bins more than `threshold_db` below the peak are
/// zeroed. The peak bin always survives. Idempotent.
pub fn threshold_window(pdp: &Pdp, threshold_db: f64, window_ns: f64) -> Result<Pdp> {
    if !(threshold_db > 0.0) {
        return Err(Error::Parameter(format!(
            "threshold must be positive dB, got {threshold_db}"
        )));
    }
    if !(window_ns > 0.0) {
        return Err(Error::Parameter(format!(
            "window must be positive ns, got {window_ns}"
        )));
    }
    let peak = pdp
        .peak_bin()
        .ok_or_else(|| Error::EmptyProfile("cannot filter an all-zero profile".into()))?;
    let peak_power = pdp.powers[peak];
    let peak_center = pdp.bin_center_s(peak);
    let window_s = window_ns * 1e-9;
    let floor = peak_power * 10f64.powf(-threshold_db / 10.0);

    let powers = pdp
        .powers
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let in_window = (pdp.bin_center_s(i) - peak_center).abs() <= window_s;
            if in_window && p >= floor {
                p
            } else {
                0.0
            }
        })
        .collect();
    Pdp::new(pdp.bin_width_s, powers)
}

/// Total profile power in dBm: 10·log10(Σ bin powers / 1 mW).
pub fn total_power(pdp: &Pdp) -> Result<f64> {
    let sum = pdp.total_linear_watts();
    if sum <= 0.0 {
        return Err(Error::EmptyProfile(
            "total power of an all-zero profile".into(),
        ));
    }
    Ok(10.0 * (sum * 1e3).log10())
}

/// Power-weighted RMS delay spread in nanoseconds over bin-center delays:
/// τ_RMS = √(Σ P τ²/ΣP − (Σ P τ/ΣP)²).
pub fn rms_delay_spread(pdp: &Pdp) -> Result<f64> {
    let sum: f64 = pdp.total_linear_watts();
    if sum <= 0.0 {
        return Err(Error::EmptyProfile(
            "delay spread of an all-zero profile".into(),
        ));
    }
    // Two passes: the central moment computed about the mean delay avoids
    // the m2 − m1² cancellation (and is exactly zero for a single tap).
    let mut mean = 0.0;
    for (i, &p) in pdp.powers.iter().enumerate() {
        if p > 0.0 {
            mean += p * pdp.bin_center_s(i);
        }
    }
    mean /= sum;
    let mut var = 0.0;
    for (i, &p) in pdp.powers.iter().enumerate() {
        if p > 0.0 {
            let d = pdp.bin_center_s(i) - mean;
            var += p * d * d;
        }
    }
    Ok((var / sum).max(0.0).sqrt() * 1e9)
}

//! Single-bounce ray sweep: image-method specular path plus one diffuse tap
//! per wall patch, PDP synthesis at sounder resolution, angular spectra, and
//! the specular-only metal-plate validation.
//!
//! Power bookkeeping: the transmit EIRP enters the lobe formulas through
//! |Ē_i|² = 2η·P_t·G_t (η = 120π), and a lobe value converts to received
//! power via P_r = |Ē_s|²/(2η) · A_eff with A_eff = G_r λ²/(4π). The
//! specular tap is the image-method Friis path attenuated by (Γ·ρ)², emitted
//! only when the reflection point falls inside the wall rectangle.
//!
//! Receiver positions are evaluated in parallel; within one receiver the
//! patch sum runs in a fixed order, so results are bit-identical regardless
//! of thread count.

use crate::error::{Error, Result};
use crate::geometry::{
    antenna_gain_toward, scatter_angles, tessellate, Point3, RxLabel, Scene, SurfacePatch,
};
use crate::pdp::{rms_delay_spread, threshold_window, total_power, AngularDataset, AngularEntry, Pdp};
use crate::scattering::{
    bk_pattern, er_backscatter, er_directive, er_lambertian, fresnel_gamma, rayleigh_rho,
    scattering_coeff_s, GeometricFactor, MaterialParams, Polarization, RoughnessForm,
};
use crate::{watts_to_dbm, ETA_FREE_SPACE, SPEED_OF_LIGHT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which diffuse scattering model the simulator evaluates per patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScatterModel {
    Lambertian,
    Directive,
    Backscatter,
    Bk,
}

impl std::fmt::Display for ScatterModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScatterModel::Lambertian => "lambertian",
            ScatterModel::Directive => "directive",
            ScatterModel::Backscatter => "backscatter",
            ScatterModel::Bk => "bk",
        };
        write!(f, "{s}")
    }
}

/// Knobs of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// BK geometric factor (ignored by the ER models).
    pub factor: GeometricFactor,
    /// Fresnel polarization convention.
    pub polarization: Polarization,
    /// Rayleigh reduction-factor form.
    pub roughness_form: RoughnessForm,
    /// PDP bin width in seconds (sounder delay resolution).
    pub resolution_s: f64,
    /// PDP span in seconds.
    pub span_s: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            factor: GeometricFactor::Beckmann,
            polarization: Polarization::Te,
            roughness_form: RoughnessForm::Consistent,
            resolution_s: 650e-12,
            span_s: 100e-9,
        }
    }
}

/// One multipath component: propagation delay and receive-referenced power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub delay_s: f64,
    pub power_watts: f64,
}

/// Per-receiver simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct RxResult {
    pub label: RxLabel,
    /// All taps sorted by delay (specular first among equal delays).
    pub taps: Vec<Tap>,
    /// Unfiltered synthesized PDP.
    pub pdp: Pdp,
    /// 10·log10(Σ tap powers / 1 mW); [`crate::POWER_FLOOR_DBM`] when the
    /// position receives nothing.
    pub total_power_dbm: f64,
    /// RMS delay spread of the unfiltered PDP (0 when empty).
    pub delay_spread_ns: f64,
}

/// Simulation output over the receiver sweep, in scene order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub per_rx: Vec<RxResult>,
}

// ---------------------------------------------------------------------------
// Core simulation
// ---------------------------------------------------------------------------

/// Sweep every receiver: image-method specular tap plus one diffuse tap per
/// wall patch evaluated with the selected scattering model.
pub fn simulate(
    scene: &Scene,
    material: &MaterialParams,
    model: ScatterModel,
    opts: &SimOptions,
) -> Result<SimResult> {
    scene.validate()?;
    material.validate()?;
    let patches = tessellate(&scene.wall, scene.patch_edge_m())?;
    run_sweep(scene, &patches, opts, |tx, rx, rx_antenna| {
        position_taps(scene, material, model, opts, &patches, tx, rx, rx_antenna)
    })
}

/// Specular-only validation: replace the wall with a perfect reflector
/// (|Γ| = 1, ρ = 1) and keep only the image-method path.
pub fn simulate_metal_plate(scene: &Scene, opts: &SimOptions) -> Result<SimResult> {
    scene.validate()?;
    run_sweep(scene, &[], opts, |tx, rx, rx_antenna| {
        Ok(specular_tap(scene, tx, rx, rx_antenna, |_theta| 1.0)
            .into_iter()
            .collect())
    })
}

fn run_sweep<F>(
    scene: &Scene,
    _patches: &[SurfacePatch],
    opts: &SimOptions,
    taps_for: F,
) -> Result<SimResult>
where
    F: Fn(Point3, Point3, &crate::geometry::Antenna) -> Result<Vec<Tap>> + Sync,
{
    let per_rx = scene
        .rx
        .par_iter()
        .map(|placement| {
            let mut taps = taps_for(scene.tx_position, placement.position, &placement.antenna)?;
            taps.sort_by(|a, b| a.delay_s.total_cmp(&b.delay_s));
            let pdp = synthesize_pdp(&taps, opts.resolution_s, opts.span_s)?;
            let total = taps.iter().map(|t| t.power_watts).sum::<f64>();
            let delay_spread_ns = if total > 0.0 {
                rms_delay_spread(&pdp)?
            } else {
                0.0
            };
            Ok(RxResult {
                label: placement.label,
                taps,
                pdp,
                total_power_dbm: watts_to_dbm(total),
                delay_spread_ns,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimResult { per_rx })
}

/// All taps for a single receiver: the bounded image-method specular tap and
/// one diffuse tap per patch (in patch order, zero-power taps included).
#[allow(clippy::too_many_arguments)]
fn position_taps(
    scene: &Scene,
    material: &MaterialParams,
    model: ScatterModel,
    opts: &SimOptions,
    patches: &[SurfacePatch],
    tx: Point3,
    rx: Point3,
    rx_antenna: &crate::geometry::Antenna,
) -> Result<Vec<Tap>> {
    let k = scene.wavenumber();
    let lambda = scene.wavelength_m();
    let p_t = scene.tx_power_watts();
    let h_m = material.h_rms_m();
    let t_m = material.corr_length_m();

    let mut taps = Vec::with_capacity(patches.len() + 1);
    taps.extend(specular_tap(scene, tx, rx, rx_antenna, |theta_inc| {
        let gamma = fresnel_gamma(material.epsilon_r, theta_inc, opts.polarization);
        let rho = rayleigh_rho(h_m, k, theta_inc, theta_inc, opts.roughness_form);
        gamma * rho
    }));

    for patch in patches {
        let geom = scatter_angles(tx, patch, rx)?;
        let r_i = tx.distance(patch.center);
        let r_s = rx.distance(patch.center);
        let g_t = antenna_gain_toward(&scene.tx_antenna, patch.center.sub(tx));
        let g_r = antenna_gain_toward(rx_antenna, patch.center.sub(rx));
        let e_i_sq = 2.0 * ETA_FREE_SPACE * p_t * g_t;

        let gamma = fresnel_gamma(material.epsilon_r, geom.theta_i, opts.polarization);
        let lobe = match model {
            ScatterModel::Bk => bk_pattern(
                e_i_sq, gamma, h_m, t_m, k, &geom, r_i, r_s, patch.area, opts.factor,
            )?,
            _ => {
                let rho = rayleigh_rho(h_m, k, geom.theta_i, geom.theta_s, opts.roughness_form);
                let s = scattering_coeff_s(gamma, rho);
                match model {
                    ScatterModel::Lambertian => {
                        er_lambertian(e_i_sq, s, &geom, r_i, r_s, patch.area)
                    }
                    ScatterModel::Directive => {
                        er_directive(e_i_sq, s, material.alpha_r, &geom, r_i, r_s, patch.area)?
                    }
                    ScatterModel::Backscatter => er_backscatter(
                        e_i_sq,
                        s,
                        &geom,
                        r_i,
                        r_s,
                        patch.area,
                        material.alpha_r,
                        material.alpha_i,
                        material.lambda_mix,
                    )?,
                    ScatterModel::Bk => unreachable!(),
                }
            }
        };

        let a_eff = g_r * lambda * lambda / (4.0 * PI);
        taps.push(Tap {
            delay_s: (r_i + r_s) / SPEED_OF_LIGHT,
            power_watts: lobe.e_sq / (2.0 * ETA_FREE_SPACE) * a_eff,
        });
    }
    Ok(taps)
}

/// Image-method specular tap: Friis path through the wall reflection point
/// with field-amplitude attenuation `reflection_amp(theta_inc)` (Γ·ρ):
/// P_r = P_t G_t G_r (λ/4πd)² (Γρ)². `None` when the reflection point falls
/// outside the wall rectangle.
fn specular_tap(
    scene: &Scene,
    tx: Point3,
    rx: Point3,
    rx_antenna: &crate::geometry::Antenna,
    reflection_amp: impl Fn(f64) -> f64,
) -> Option<Tap> {
    let (q, theta_inc) = specular_point(scene, tx, rx)?;
    let d = tx.distance(q) + q.distance(rx);
    let g_t = antenna_gain_toward(&scene.tx_antenna, q.sub(tx));
    let g_r = antenna_gain_toward(rx_antenna, q.sub(rx));
    let spreading = scene.wavelength_m() / (4.0 * PI * d);
    let amp = reflection_amp(theta_inc);
    Some(Tap {
        delay_s: d / SPEED_OF_LIGHT,
        power_watts: scene.tx_power_watts() * g_t * g_r * spreading * spreading * amp * amp,
    })
}

/// Image-method reflection point on the wall, with the incidence angle
/// there. `None` when the ray misses the wall rectangle.
fn specular_point(scene: &Scene, tx: Point3, rx: Point3) -> Option<(Point3, f64)> {
    let n = scene.wall.normal();
    let d_tx = scene.wall.side_of(tx);
    let image = tx.add(n.scale(-2.0 * d_tx));
    let seg = rx.sub(image);
    let denom = seg.dot(n);
    if denom.abs() < 1e-15 {
        return None;
    }
    let t = (scene.wall.origin.sub(image).dot(n)) / denom;
    if !(0.0..=1.0).contains(&t) {
        return None;
    }
    let q = image.add(seg.scale(t));
    let (a, b) = scene.wall.plane_coords(q);
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return None;
    }
    let theta_inc = tx.sub(q).angle_to(n);
    Some((q, theta_inc))
}

// ---------------------------------------------------------------------------
// PDP synthesis and spectra
// ---------------------------------------------------------------------------

/// Accumulate taps into delay bins of width `resolution_s` (bin index =
/// floor(delay/resolution)); total power is preserved.
pub fn synthesize_pdp(taps: &[Tap], resolution_s: f64, span_s: f64) -> Result<Pdp> {
    if !(resolution_s > 0.0) {
        return Err(Error::Parameter(format!(
            "resolution must be positive, got {resolution_s}"
        )));
    }
    let bins = (span_s / resolution_s).ceil().max(1.0) as usize;
    let mut powers = vec![0.0; bins];
    for tap in taps {
        let idx = (tap.delay_s / resolution_s).floor() as usize;
        if tap.delay_s < 0.0 || idx >= bins {
            return Err(Error::SpanExceeded {
                delay_ns: tap.delay_s * 1e9,
                span_ns: span_s * 1e9,
            });
        }
        powers[idx] += tap.power_watts;
    }
    Pdp::new(resolution_s, powers)
}

/// Angular spectra of received power and RMS delay spread over the sweep,
/// applying the measurement-processing rules (window-then-threshold) to each
/// synthesized PDP. Positions with zero received power are emitted at
/// [`crate::POWER_FLOOR_DBM`] with zero spread.
pub fn angular_spectra(
    sim: &SimResult,
    threshold_db: f64,
    window_ns: f64,
) -> Result<AngularDataset> {
    if sim.per_rx.is_empty() {
        return Err(Error::Alignment("empty simulation result".into()));
    }
    let mut entries = Vec::with_capacity(sim.per_rx.len());
    for rx in &sim.per_rx {
        let (power_dbm, delay_spread_ns) = if rx.pdp.total_linear_watts() > 0.0 {
            let filtered = threshold_window(&rx.pdp, threshold_db, window_ns)?;
            (total_power(&filtered)?, rms_delay_spread(&filtered)?)
        } else {
            (crate::POWER_FLOOR_DBM, 0.0)
        };
        entries.push(AngularEntry {
            label: rx.label,
            power_dbm,
            delay_spread_ns,
        });
    }
    let dataset = AngularDataset { entries };
    dataset.validate()?;
    Ok(dataset)
}

/// Root-mean-square error between two spectra over per-angle dB powers.
pub fn rmse_spectra(a: &AngularDataset, b: &AngularDataset) -> Result<f64> {
    a.check_aligned(b)?;
    if a.entries.is_empty() {
        return Err(Error::Alignment("empty datasets".into()));
    }
    let sq_sum: f64 = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| {
            let d = x.power_dbm - y.power_dbm;
            d * d
        })
        .sum();
    Ok((sq_sum / a.entries.len() as f64).sqrt())
}

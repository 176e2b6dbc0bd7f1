//! Closed-form scattering quantities: Fresnel reflection, Rayleigh roughness
//! attenuation, the scattering coefficient S, the ER lobe family (directive,
//! backscattering-lobe, Lambertian) with exact hemisphere normalization, and
//! the Beckmann–Kirchhoff series with both geometric factors.
//!
//! All functions are pure and take angles in radians and lengths in meters.
//! [`MaterialParams`] carries the fitted surface description with roughness
//! lengths in millimeters (the unit used in configs and result tables);
//! convert with [`MaterialParams::h_rms_m`] / [`MaterialParams::corr_length_m`]
//! before calling the pattern functions.

use crate::error::{Error, Result};
use crate::geometry::ScatterAngles;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative threshold at which the BK series stops adding terms.
const BK_SERIES_REL_TOL: f64 = 1e-12;
/// Hard cap on BK series terms; exceeding it is a convergence error.
const BK_SERIES_MAX_TERMS: usize = 512;

// ---------------------------------------------------------------------------
// Material parameters
// ---------------------------------------------------------------------------

/// Fitted surface description shared by the ER and BK models.
///
/// `epsilon_r` feeds the Fresnel coefficient; `h_rms_mm` both the Rayleigh
/// attenuation (ER route) and the BK roughness parameter g; `corr_length_t_mm`
/// is BK-only; the lobe exponents and mixing coefficient are ER-only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Relative permittivity, ≥ 1.
    pub epsilon_r: f64,
    /// Surface height standard deviation in millimeters, ≥ 0.
    pub h_rms_mm: f64,
    /// Surface correlation length in millimeters, > 0.
    pub corr_length_t_mm: f64,
    /// Forward-lobe exponent, integer ≥ 1.
    pub alpha_r: u32,
    /// Back-lobe exponent, integer ≥ 1.
    pub alpha_i: u32,
    /// Forward/back lobe mixing coefficient Λ in [0, 1]; Λ = 1 keeps only
    /// the forward lobe.
    pub lambda_mix: f64,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_r >= 1.0) {
            return Err(Error::Parameter(format!(
                "epsilon_r must be >= 1, got {}",
                self.epsilon_r
            )));
        }
        if !(self.h_rms_mm >= 0.0) {
            return Err(Error::Parameter(format!(
                "h_rms must be >= 0 mm, got {}",
                self.h_rms_mm
            )));
        }
        if !(self.corr_length_t_mm > 0.0) {
            return Err(Error::Parameter(format!(
                "correlation length T must be > 0 mm, got {}",
                self.corr_length_t_mm
            )));
        }
        if self.alpha_r < 1 || self.alpha_i < 1 {
            return Err(Error::Parameter(
                "lobe exponents alpha_R, alpha_i must be integers >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.lambda_mix) {
            return Err(Error::Parameter(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda_mix
            )));
        }
        Ok(())
    }

    pub fn h_rms_m(&self) -> f64 {
        self.h_rms_mm * 1e-3
    }

    pub fn corr_length_m(&self) -> f64 {
        self.corr_length_t_mm * 1e-3
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self {
            epsilon_r: 1.0,
            h_rms_mm: 0.0,
            corr_length_t_mm: 1.0,
            alpha_r: 1,
            alpha_i: 1,
            lambda_mix: 1.0,
        }
    }
}

/// Squared scattered-field intensity |Ē_s|² (per-receive-point, linear scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobeValue {
    pub e_sq: f64,
}

// ---------------------------------------------------------------------------
// Fresnel / Rayleigh / scattering coefficient
// ---------------------------------------------------------------------------

/// Polarization convention for the smooth-surface reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// Perpendicular (s) polarization — default.
    #[default]
    Te,
    /// Parallel (p) polarization.
    Tm,
    /// Power average of TE and TM, √((Γ_TE² + Γ_TM²)/2).
    Average,
}

/// Magnitude of the smooth-surface Fresnel reflection coefficient for a
/// lossless dielectric with relative permittivity `epsilon_r` ≥ 1 at
/// incidence `theta_i` ∈ [0, π/2).
pub fn fresnel_gamma(epsilon_r: f64, theta_i: f64, polarization: Polarization) -> f64 {
    debug_assert!(epsilon_r >= 1.0);
    let c = theta_i.cos();
    let s2 = theta_i.sin() * theta_i.sin();
    let root = (epsilon_r - s2).sqrt();
    let te = ((c - root) / (c + root)).abs();
    match polarization {
        Polarization::Te => te,
        Polarization::Tm => ((epsilon_r * c - root) / (epsilon_r * c + root)).abs(),
        Polarization::Average => {
            let tm = ((epsilon_r * c - root) / (epsilon_r * c + root)).abs();
            ((te * te + tm * tm) / 2.0).sqrt()
        }
    }
}

/// Which algebraic form of the Rayleigh reduction factor to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoughnessForm {
    /// ρ = exp(−½ (k·h_rms·(cosθi + cosθs))²), i.e. ρ = e^{−g/2} with the
    /// same g that drives the BK series — default.
    #[default]
    Consistent,
    /// The double-squared variant ρ = exp(−½ (k²·h_rms²·(cosθi + cosθs))²),
    /// kept for comparison; not dimensionally consistent with g.
    AsPrinted,
}

/// Rayleigh reflection reduction factor ρ ∈ (0, 1].
pub fn rayleigh_rho(
    h_rms_m: f64,
    wavenumber_k: f64,
    theta_i: f64,
    theta_s: f64,
    form: RoughnessForm,
) -> f64 {
    let cos_sum = theta_i.cos() + theta_s.cos();
    let arg = match form {
        RoughnessForm::Consistent => wavenumber_k * h_rms_m * cos_sum,
        RoughnessForm::AsPrinted => wavenumber_k * wavenumber_k * h_rms_m * h_rms_m * cos_sum,
    };
    (-0.5 * arg * arg).exp()
}

/// Scattering coefficient S = √((1 − ρ²) Γ²): the fraction of incident field
/// amplitude redirected from the specular path into diffuse scattering.
pub fn scattering_coeff_s(gamma: f64, rho: f64) -> f64 {
    ((1.0 - rho * rho) * gamma * gamma).max(0.0).sqrt()
}

// ---------------------------------------------------------------------------
// ER lobe normalization
// ---------------------------------------------------------------------------

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The I_j factor of the lobe-normalization sum:
/// I_j = 2π/(j+1) for even j, and
/// I_j = 2π/(j+1) · cosθ · Σ_{w=0}^{(j−1)/2} C(2w, w) (sin²θ / 4)^w for odd j,
/// where θ is the zenith angle of the lobe axis.
fn lobe_i_j(j: u32, axis_zenith: f64) -> f64 {
    let lead = 2.0 * PI / (j + 1) as f64;
    if j % 2 == 0 {
        lead
    } else {
        let s2q = axis_zenith.sin().powi(2) / 4.0;
        let mut sum = 0.0;
        let mut pow = 1.0;
        for w in 0..=(j - 1) / 2 {
            sum += binomial(2 * w, w) * pow;
            pow *= s2q;
        }
        lead * axis_zenith.cos() * sum
    }
}

/// Hemisphere integral of ((1 + cos ψ)/2)^α where ψ is measured from a lobe
/// axis at zenith `axis_zenith`: (1/2^α) Σ_j C(α, j) I_j.
fn lobe_norm(alpha: u32, axis_zenith: f64) -> f64 {
    let mut sum = 0.0;
    for j in 0..=alpha {
        sum += binomial(alpha, j) * lobe_i_j(j, axis_zenith);
    }
    sum / 2f64.powi(alpha as i32)
}

/// Normalization factor F_αR of the directive lobe: the closed-form
/// hemisphere integral of ((1 + cos ψ_r)/2)^αR for incidence `theta_i`.
pub fn normalization_f(alpha_r: u32, theta_i: f64) -> Result<f64> {
    if alpha_r < 1 {
        return Err(Error::Parameter("alpha_R must be an integer >= 1".into()));
    }
    Ok(lobe_norm(alpha_r, theta_i))
}

/// Normalization factor F_{αR,αi} of the Λ-mixed two-lobe pattern. Reduces
/// to [`normalization_f`] when `lambda_mix` = 1 (the back lobe drops out).
/// Both lobe axes sit at zenith `theta_i` (specular and incident), so each
/// contributes the same closed-form sum with its own exponent.
pub fn normalization_f_back(
    alpha_r: u32,
    alpha_i: u32,
    lambda_mix: f64,
    theta_i: f64,
) -> Result<f64> {
    if alpha_r < 1 || alpha_i < 1 {
        return Err(Error::Parameter(
            "alpha_R and alpha_i must be integers >= 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&lambda_mix) {
        return Err(Error::Parameter(format!(
            "lambda must lie in [0, 1], got {lambda_mix}"
        )));
    }
    if lambda_mix == 1.0 {
        return Ok(lobe_norm(alpha_r, theta_i));
    }
    Ok(lambda_mix * lobe_norm(alpha_r, theta_i) + (1.0 - lambda_mix) * lobe_norm(alpha_i, theta_i))
}

// ---------------------------------------------------------------------------
// ER lobes
// ---------------------------------------------------------------------------

/// Common ER prefactor: |Ē_i|² S² cosθi dS / (4π r_i² r_s²), with |Ē_i|²
/// referenced so that |Ē_i|²/(240π) is the transmit EIRP in watts.
fn er_base(e_i_sq: f64, s: f64, theta_i: f64, r_i: f64, r_s: f64, d_s: f64) -> f64 {
    e_i_sq * s * s * theta_i.cos() * d_s / (4.0 * PI * r_i * r_i * r_s * r_s)
}

/// Directive ER lobe: energy concentrated around the specular direction,
/// width set by `alpha_r`.
pub fn er_directive(
    e_i_sq: f64,
    s: f64,
    alpha_r: u32,
    geom: &ScatterAngles,
    r_i: f64,
    r_s: f64,
    d_s: f64,
) -> Result<LobeValue> {
    let f = normalization_f(alpha_r, geom.theta_i)?;
    let lobe = ((1.0 + geom.psi_r.cos()) / 2.0).powi(alpha_r as i32);
    Ok(LobeValue {
        e_sq: er_base(e_i_sq, s, geom.theta_i, r_i, r_s, d_s) / f * lobe,
    })
}

/// Backscattering-lobe ER model: a Λ-weighted forward lobe around the
/// specular direction plus a (1−Λ)-weighted lobe back along the incident
/// direction. Equals the directive model pointwise when Λ = 1.
#[allow(clippy::too_many_arguments)]
pub fn er_backscatter(
    e_i_sq: f64,
    s: f64,
    geom: &ScatterAngles,
    r_i: f64,
    r_s: f64,
    d_s: f64,
    alpha_r: u32,
    alpha_i: u32,
    lambda_mix: f64,
) -> Result<LobeValue> {
    let f = normalization_f_back(alpha_r, alpha_i, lambda_mix, geom.theta_i)?;
    let forward = ((1.0 + geom.psi_r.cos()) / 2.0).powi(alpha_r as i32);
    let back = ((1.0 + geom.psi_i.cos()) / 2.0).powi(alpha_i as i32);
    let bracket = lambda_mix * forward + (1.0 - lambda_mix) * back;
    Ok(LobeValue {
        e_sq: er_base(e_i_sq, s, geom.theta_i, r_i, r_s, d_s) / f * bracket,
    })
}

/// Lambertian ER lobe: cosθs pattern with hemisphere normalization F_L = π.
pub fn er_lambertian(
    e_i_sq: f64,
    s: f64,
    geom: &ScatterAngles,
    r_i: f64,
    r_s: f64,
    d_s: f64,
) -> LobeValue {
    LobeValue {
        e_sq: er_base(e_i_sq, s, geom.theta_i, r_i, r_s, d_s) * geom.theta_s.cos() / PI,
    }
}

// ---------------------------------------------------------------------------
// Beckmann–Kirchhoff
// ---------------------------------------------------------------------------

/// Geometric factor variant of the BK integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometricFactor {
    /// F_Beck = (1 + cosθi cosθs − sinθi sinθs cosφs) / (cosθi (cosθi + cosθs)).
    #[default]
    Beckmann,
    /// F_Ogil = F_Beck · cosθi.
    Ogilvy,
}

/// The wave-vector change components of the BK kernel, in the frame with the
/// incident azimuth at π.
fn bk_v_components(k: f64, geom: &ScatterAngles) -> (f64, f64, f64) {
    let v_x = k * (geom.theta_i.sin() - geom.theta_s.sin() * geom.phi_s.cos());
    let v_y = k * geom.theta_s.sin() * geom.phi_s.sin();
    let v_z = -k * (geom.theta_i.cos() + geom.theta_s.cos());
    (v_x, v_y, v_z)
}

/// The BK roughness series Σ_{n≥1} gⁿ/(n!·n) · exp(−T² v_xy²/(4n)),
/// truncated when the next term drops below 1e-12 of the partial sum;
/// exceeding the 512-term cap is a convergence error carrying g.
pub fn bk_roughness_series(g: f64, quarter_t2_vxy2: f64) -> Result<f64> {
    if g == 0.0 {
        return Ok(0.0);
    }
    let mut g_pow_over_fact = 1.0; // gⁿ/n! carried across iterations
    let mut sum = 0.0;
    for n in 1..=BK_SERIES_MAX_TERMS {
        g_pow_over_fact *= g / n as f64;
        let term = g_pow_over_fact / n as f64 * (-quarter_t2_vxy2 / n as f64).exp();
        sum += term;
        if !sum.is_finite() {
            return Err(Error::SeriesNonConvergence {
                g,
                max_terms: BK_SERIES_MAX_TERMS,
            });
        }
        // Upper bound on the next term: the exponential only grows toward 1.
        let next_bound = g_pow_over_fact * g / ((n + 1) * (n + 1)) as f64;
        if next_bound < BK_SERIES_REL_TOL * sum {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        g,
        max_terms: BK_SERIES_MAX_TERMS,
    })
}

/// Beckmann–Kirchhoff diffuse scattering pattern:
///
/// |Ē_s|² = |Ē_i|² Γ² cosθi dS πT² / ((4π)² r_i² r_s²)
///          · F²/exp(g) · Σ_{n≥1} gⁿ/(n!·n) exp(−T² v_xy²/(4n))
///
/// with g = h_rms² v_z², v_z = −k(cosθi + cosθs), and
/// v_xy² = v_x² + v_y² from the in-plane wave-vector change.
#[allow(clippy::too_many_arguments)]
pub fn bk_pattern(
    e_i_sq: f64,
    gamma: f64,
    h_rms_m: f64,
    corr_length_t_m: f64,
    wavenumber_k: f64,
    geom: &ScatterAngles,
    r_i: f64,
    r_s: f64,
    d_s: f64,
    factor: GeometricFactor,
) -> Result<LobeValue> {
    if !(corr_length_t_m > 0.0) {
        return Err(Error::Parameter(format!(
            "correlation length T must be > 0, got {corr_length_t_m}"
        )));
    }
    if !(h_rms_m >= 0.0) {
        return Err(Error::Parameter(format!(
            "h_rms must be >= 0, got {h_rms_m}"
        )));
    }
    let cti = geom.theta_i.cos();
    let cts = geom.theta_s.cos();
    if cti + cts <= 1e-6 {
        return Err(Error::Geometry(
            "BK geometric factor is singular at grazing (cosθi + cosθs ~ 0)".into(),
        ));
    }
    if h_rms_m == 0.0 {
        // Smooth surface: g = 0, the series vanishes identically.
        return Ok(LobeValue { e_sq: 0.0 });
    }

    let (v_x, v_y, v_z) = bk_v_components(wavenumber_k, geom);
    let g = h_rms_m * h_rms_m * v_z * v_z;
    let t2 = corr_length_t_m * corr_length_t_m;
    let quarter_t2_vxy2 = t2 * (v_x * v_x + v_y * v_y) / 4.0;
    let series = bk_roughness_series(g, quarter_t2_vxy2)?;

    let f_beck =
        (1.0 + cti * cts - geom.theta_i.sin() * geom.theta_s.sin() * geom.phi_s.cos())
            / (cti * (cti + cts));
    let f = match factor {
        GeometricFactor::Beckmann => f_beck,
        GeometricFactor::Ogilvy => f_beck * cti,
    };

    let prefactor = e_i_sq * gamma * gamma * cti * d_s * PI * t2
        / ((4.0 * PI).powi(2) * r_i * r_i * r_s * r_s);
    Ok(LobeValue {
        e_sq: prefactor * f * f * (-g).exp() * series,
    })
}

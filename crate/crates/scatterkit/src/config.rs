//! Structured-text (TOML) configuration schemas.
//!
//! A scene file describes the wall, the Tx placement, the Rx sweep, and the
//! carrier; placements are polar (distance from the wall center's vertical
//! axis, signed angle from the wall normal, height). The Tx sits on the
//! azimuth-π side at its stated incidence angle; positive Rx angles are the
//! specular side. All antennas are boresighted at the wall center, matching
//! the measurement layout.
//!
//! ```toml
//! frequency_ghz = 8.0
//! tx_power_dbm = 10.0
//!
//! [wall]
//! width_m = 1.0
//! height_m = 1.0
//!
//! [tx]
//! distance_m = 1.5
//! angle_deg = 30.0
//! height_m = 1.7
//! [tx.antenna]
//! gain_dbi = 19.4
//! hpbw_deg = 18.7
//!
//! [rx]
//! distance_m = 1.5
//! arc = { start_deg = -70.0, step_deg = 10.0, count = 16 }
//! [rx.antenna]
//! gain_dbi = 19.4
//! hpbw_deg = 18.7
//! ```
//!
//! Material files carry one [`MaterialParams`] table (roughness lengths in
//! mm); fit files name the model, reference a scene file, and optionally
//! override the per-parameter search grids.

use crate::error::{Error, Result};
use crate::fitting::FitConfig;
use crate::geometry::{arc_position, Antenna, RxLabel, RxPlacement, Scene, Wall};
use crate::raytracer::ScatterModel;
use crate::scattering::MaterialParams;
use serde::Deserialize;
use std::path::{Path, PathBuf};

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub frequency_ghz: f64,
    pub tx_power_dbm: f64,
    #[serde(default)]
    pub max_patch_edge_m: Option<f64>,
    pub wall: WallConfig,
    pub tx: TxConfig,
    pub rx: RxConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallConfig {
    pub width_m: f64,
    pub height_m: f64,
    /// Wall-center height; defaults to the Tx height.
    #[serde(default)]
    pub center_height_m: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TxConfig {
    pub distance_m: f64,
    /// Incidence angle (degrees, ≥ 0); the Tx is placed on the azimuth-π side.
    pub angle_deg: f64,
    pub height_m: f64,
    pub antenna: AntennaConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RxConfig {
    pub distance_m: f64,
    /// Explicit list of signed arc angles, or use `arc`.
    #[serde(default)]
    pub angles_deg: Option<Vec<f64>>,
    #[serde(default)]
    pub arc: Option<ArcConfig>,
    /// Rx heights; more than one makes a 3D sweep (heights enter the labels).
    /// Defaults to the Tx height.
    #[serde(default)]
    pub heights_m: Option<Vec<f64>>,
    pub antenna: AntennaConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcConfig {
    pub start_deg: f64,
    pub step_deg: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaConfig {
    pub gain_dbi: f64,
    pub hpbw_deg: f64,
}

impl SceneConfig {
    pub fn build(&self) -> Result<Scene> {
        if self.tx.angle_deg < 0.0 || self.tx.angle_deg >= 90.0 {
            return Err(Error::Schema(format!(
                "tx angle must lie in [0, 90) degrees, got {}",
                self.tx.angle_deg
            )));
        }
        let center_height = self.wall.center_height_m.unwrap_or(self.tx.height_m);
        let wall = Wall::vertical_centered(self.wall.width_m, self.wall.height_m, center_height)?;
        let center = wall.center();

        let tx_position = arc_position(self.tx.distance_m, -self.tx.angle_deg, self.tx.height_m, &wall);
        let tx_antenna = Antenna::new(
            self.tx.antenna.gain_dbi,
            self.tx.antenna.hpbw_deg,
            center.sub(tx_position),
        )?;

        let angles: Vec<f64> = match (&self.rx.angles_deg, &self.rx.arc) {
            (Some(list), None) => list.clone(),
            (None, Some(arc)) => {
                if arc.count == 0 {
                    return Err(Error::Schema("rx arc count must be >= 1".into()));
                }
                (0..arc.count)
                    .map(|i| arc.start_deg + arc.step_deg * i as f64)
                    .collect()
            }
            (Some(_), Some(_)) => {
                return Err(Error::Schema(
                    "give either rx.angles_deg or rx.arc, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Schema(
                    "rx needs angles_deg or an arc block".into(),
                ))
            }
        };
        if angles.is_empty() {
            return Err(Error::Schema("rx sweep has no angles".into()));
        }
        let heights = self
            .rx
            .heights_m
            .clone()
            .unwrap_or_else(|| vec![self.tx.height_m]);
        if heights.is_empty() {
            return Err(Error::Schema("rx heights list is empty".into()));
        }
        let labeled_heights = heights.len() > 1;

        let mut rx = Vec::with_capacity(heights.len() * angles.len());
        for &h in &heights {
            for &a in &angles {
                let position = arc_position(self.rx.distance_m, a, h, &wall);
                rx.push(RxPlacement {
                    label: RxLabel {
                        angle_deg: a,
                        height_m: labeled_heights.then_some(h),
                    },
                    position,
                    antenna: Antenna::new(
                        self.rx.antenna.gain_dbi,
                        self.rx.antenna.hpbw_deg,
                        center.sub(position),
                    )?,
                });
            }
        }

        let scene = Scene {
            wall,
            tx_position,
            tx_antenna,
            rx,
            frequency_hz: self.frequency_ghz * 1e9,
            tx_power_dbm: self.tx_power_dbm,
            max_patch_edge_m: self.max_patch_edge_m,
        };
        scene.validate()?;
        Ok(scene)
    }
}

pub fn parse_scene(toml_text: &str) -> Result<Scene> {
    let config: SceneConfig =
        toml::from_str(toml_text).map_err(|e| Error::Schema(format!("scene config: {e}")))?;
    config.build()
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    parse_scene(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Material
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub epsilon_r: f64,
    pub h_rms_mm: f64,
    #[serde(default = "default_corr_length")]
    pub corr_length_t_mm: f64,
    #[serde(default = "default_alpha")]
    pub alpha_r: u32,
    #[serde(default = "default_alpha")]
    pub alpha_i: u32,
    #[serde(default = "default_lambda")]
    pub lambda_mix: f64,
}

fn default_corr_length() -> f64 {
    1.0
}
fn default_alpha() -> u32 {
    1
}
fn default_lambda() -> f64 {
    1.0
}

impl MaterialConfig {
    pub fn build(&self) -> Result<MaterialParams> {
        let params = MaterialParams {
            epsilon_r: self.epsilon_r,
            h_rms_mm: self.h_rms_mm,
            corr_length_t_mm: self.corr_length_t_mm,
            alpha_r: self.alpha_r,
            alpha_i: self.alpha_i,
            lambda_mix: self.lambda_mix,
        };
        params.validate()?;
        Ok(params)
    }
}

pub fn parse_material(toml_text: &str) -> Result<MaterialParams> {
    let config: MaterialConfig =
        toml::from_str(toml_text).map_err(|e| Error::Schema(format!("material config: {e}")))?;
    config.build()
}

pub fn load_material(path: &Path) -> Result<MaterialParams> {
    parse_material(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Fit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitFileConfig {
    pub model: ScatterModel,
    /// Scene file path, resolved relative to the fit file's directory.
    pub scene: String,
    #[serde(default)]
    pub epsilon_r: Option<Vec<f64>>,
    #[serde(default)]
    pub h_rms_mm: Option<Vec<f64>>,
    #[serde(default)]
    pub corr_length_t_mm: Option<Vec<f64>>,
    #[serde(default)]
    pub alpha_r: Option<Vec<u32>>,
    #[serde(default)]
    pub alpha_i: Option<Vec<u32>>,
    #[serde(default)]
    pub lambda_mix: Option<Vec<f64>>,
}

/// Fallback grids spanning the neighborhoods of the fitted values reported
/// for the three measured surfaces.
pub fn default_grids(model: ScatterModel) -> FitConfig {
    FitConfig {
        model,
        epsilon_r: vec![5.7, 6.0, 6.2, 10.1, 11.5],
        h_rms_mm: vec![1.0, 4.1, 6.5, 8.0],
        corr_length_t_mm: vec![0.8, 2.1, 5.0],
        alpha_r: vec![1, 2, 3, 6],
        alpha_i: vec![4, 10],
        lambda_mix: vec![0.2, 0.8, 1.0],
    }
}

impl FitFileConfig {
    pub fn build(&self) -> FitConfig {
        let d = default_grids(self.model);
        FitConfig {
            model: self.model,
            epsilon_r: self.epsilon_r.clone().unwrap_or(d.epsilon_r),
            h_rms_mm: self.h_rms_mm.clone().unwrap_or(d.h_rms_mm),
            corr_length_t_mm: self.corr_length_t_mm.clone().unwrap_or(d.corr_length_t_mm),
            alpha_r: self.alpha_r.clone().unwrap_or(d.alpha_r),
            alpha_i: self.alpha_i.clone().unwrap_or(d.alpha_i),
            lambda_mix: self.lambda_mix.clone().unwrap_or(d.lambda_mix),
        }
    }

    pub fn scene_path(&self, fit_file: &Path) -> PathBuf {
        let scene = Path::new(&self.scene);
        if scene.is_absolute() {
            scene.to_path_buf()
        } else {
            fit_file.parent().unwrap_or(Path::new(".")).join(scene)
        }
    }
}

pub fn parse_fit(toml_text: &str) -> Result<FitFileConfig> {
    toml::from_str(toml_text).map_err(|e| Error::Schema(format!("fit config: {e}")))
}

pub fn load_fit(path: &Path) -> Result<FitFileConfig> {
    parse_fit(&std::fs::read_to_string(path)?)
}

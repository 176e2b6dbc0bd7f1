//! Measurement-scene geometry: wall, Tx/Rx placements, antennas, and the
//! angle/distance bookkeeping consumed by the scattering models.
//!
//! Conventions (fixed by the measurement layout this toolkit reproduces):
//!
//! * The wall is a rectangle; its unit normal points into the half-space
//!   containing the Tx and every Rx (the illuminated side).
//! * For a surface patch, the incident wave arrives at zenith angle
//!   `theta_i` and azimuth π, so the specular reflection leaves at zenith
//!   `theta_i`, azimuth 0. Scattered directions carry zenith `theta_s` and
//!   azimuth `phi_s` measured in the same frame.
//! * Angles are radians internally; configuration files and CSV outputs use
//!   degrees.

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

const LN2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Points and vectors
// ---------------------------------------------------------------------------

/// A position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A displacement or direction in meters (unit-length where documented).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Displacement from `other` to `self`.
    pub fn sub(&self, other: Point3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn add(&self, v: Vec3) -> Point3 {
        Point3::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }

    pub fn distance(&self, other: Point3) -> f64 {
        self.sub(other).norm()
    }
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(*self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(&self) -> Vec3 {
        let n = self.norm();
        self.scale(1.0 / n)
    }

    pub fn sub(&self, other: Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    /// Angle in radians between two vectors (0..π). Robust to rounding at
    /// the parallel/antiparallel extremes.
    pub fn angle_to(&self, other: Vec3) -> f64 {
        let c = (self.dot(other) / (self.norm() * other.norm())).clamp(-1.0, 1.0);
        c.acos()
    }
}

// ---------------------------------------------------------------------------
// Scattering angles
// ---------------------------------------------------------------------------

/// The five angles of the single-bounce scattering geometry.
///
/// `psi_r` is the spatial angle between the scattered direction and the
/// specular-reflection direction; `psi_i` the angle between the scattered
/// direction and the (surface-to-Tx) incident direction. Both live in
/// `[0, π]`. `phi_s` is the scattered azimuth in `(−π, π]` with the incident
/// wave fixed at azimuth π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAngles {
    pub theta_i: f64,
    pub theta_s: f64,
    pub phi_s: f64,
    pub psi_i: f64,
    pub psi_r: f64,
}

impl ScatterAngles {
    /// Build directly from the angular coordinates (used when sweeping a
    /// pattern over the hemisphere rather than from positions).
    ///
    /// `theta_i`, `theta_s` in `[0, π/2)`, `phi_s` in `(−π, π]`.
    pub fn from_spherical(theta_i: f64, theta_s: f64, phi_s: f64) -> Self {
        let (sti, cti) = theta_i.sin_cos();
        let (sts, cts) = theta_s.sin_cos();
        let cps = phi_s.cos();
        // Scattered direction s = (sinθs cosφs, sinθs sinφs, cosθs);
        // specular r = (sinθi, 0, cosθi); incident (toward Tx) i = (−sinθi, 0, cosθi).
        let cos_psi_r = (sts * cps * sti + cts * cti).clamp(-1.0, 1.0);
        let cos_psi_i = (-sts * cps * sti + cts * cti).clamp(-1.0, 1.0);
        Self {
            theta_i,
            theta_s,
            phi_s,
            psi_i: cos_psi_i.acos(),
            psi_r: cos_psi_r.acos(),
        }
    }
}

// ---------------------------------------------------------------------------
// Surface patch and wall
// ---------------------------------------------------------------------------

/// One tessellation cell of the wall: the discrete `dS` of the scattering
/// integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePatch {
    pub center: Point3,
    /// Unit normal on the illuminated side.
    pub normal: Vec3,
    /// Cell area in m².
    pub area: f64,
}

/// Rectangular scattering surface. `edge_a × edge_b` (normalized) is the
/// illuminated-side normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub origin: Point3,
    pub edge_a: Vec3,
    pub edge_b: Vec3,
}

impl Wall {
    pub fn new(origin: Point3, edge_a: Vec3, edge_b: Vec3) -> Result<Self> {
        if edge_a.norm() <= 0.0 || edge_b.norm() <= 0.0 {
            return Err(Error::InvalidScene(
                "wall edges must have positive length".into(),
            ));
        }
        if edge_a.cross(edge_b).norm() <= 0.0 {
            return Err(Error::InvalidScene("wall edges are collinear".into()));
        }
        Ok(Self {
            origin,
            edge_a,
            edge_b,
        })
    }

    /// Vertical wall in the y = 0 plane, centered laterally at x = 0 and
    /// vertically at `center_height_m`, normal +y (the Tx/Rx side).
    pub fn vertical_centered(width_m: f64, height_m: f64, center_height_m: f64) -> Result<Self> {
        if width_m <= 0.0 || height_m <= 0.0 {
            return Err(Error::InvalidScene(format!(
                "wall extents must be positive, got {width_m} x {height_m} m"
            )));
        }
        // edge_a along +z, edge_b along +x: a × b = +y.
        Wall::new(
            Point3::new(-width_m / 2.0, 0.0, center_height_m - height_m / 2.0),
            Vec3::new(0.0, 0.0, height_m),
            Vec3::new(width_m, 0.0, 0.0),
        )
    }

    pub fn normal(&self) -> Vec3 {
        self.edge_a.cross(self.edge_b).normalized()
    }

    pub fn area(&self) -> f64 {
        self.edge_a.cross(self.edge_b).norm()
    }

    pub fn center(&self) -> Point3 {
        self.origin
            .add(self.edge_a.scale(0.5))
            .add(self.edge_b.scale(0.5))
    }

    /// Signed distance of a point from the wall plane along the normal.
    pub fn side_of(&self, p: Point3) -> f64 {
        p.sub(self.origin).dot(self.normal())
    }

    /// Fractional in-plane coordinates of a point projected onto the wall,
    /// each in [0, 1] when the point lies over the rectangle.
    pub fn plane_coords(&self, p: Point3) -> (f64, f64) {
        let d = p.sub(self.origin);
        let a = self.edge_a;
        let b = self.edge_b;
        (d.dot(a) / a.dot(a), d.dot(b) / b.dot(b))
    }
}

/// Tile the wall with rectangular patches no wider than `max_edge_m` along
/// either edge. Each edge is split into `ceil(len / max_edge)` equal cells,
/// so the patches tile the wall exactly.
pub fn tessellate(wall: &Wall, max_edge_m: f64) -> Result<Vec<SurfacePatch>> {
    if !(max_edge_m > 0.0) {
        return Err(Error::InvalidScene(format!(
            "patch edge must be positive, got {max_edge_m}"
        )));
    }
    let len_a = wall.edge_a.norm();
    let len_b = wall.edge_b.norm();
    let na = (len_a / max_edge_m).ceil().max(1.0) as usize;
    let nb = (len_b / max_edge_m).ceil().max(1.0) as usize;
    let cell_area = (len_a / na as f64) * (len_b / nb as f64);
    let normal = wall.normal();

    let mut patches = Vec::with_capacity(na * nb);
    for ia in 0..na {
        let fa = (ia as f64 + 0.5) / na as f64;
        for ib in 0..nb {
            let fb = (ib as f64 + 0.5) / nb as f64;
            let center = wall
                .origin
                .add(wall.edge_a.scale(fa))
                .add(wall.edge_b.scale(fb));
            patches.push(SurfacePatch {
                center,
                normal,
                area: cell_area,
            });
        }
    }
    Ok(patches)
}

/// Compute the five scattering angles for a Tx–patch–Rx triple.
///
/// Errors if either endpoint is on or behind the patch plane.
pub fn scatter_angles(tx: Point3, patch: &SurfacePatch, rx: Point3) -> Result<ScatterAngles> {
    let n = patch.normal;
    let v_i = tx.sub(patch.center);
    let v_s = rx.sub(patch.center);
    let r_i = v_i.norm();
    let r_s = v_s.norm();
    let cos_ti = v_i.dot(n) / r_i;
    let cos_ts = v_s.dot(n) / r_s;
    if cos_ti <= 0.0 {
        return Err(Error::Geometry(
            "tx is on or behind the patch plane".into(),
        ));
    }
    if cos_ts <= 0.0 {
        return Err(Error::Geometry(
            "rx is on or behind the patch plane".into(),
        ));
    }
    let theta_i = cos_ti.clamp(-1.0, 1.0).acos();
    let theta_s = cos_ts.clamp(-1.0, 1.0).acos();

    let u_i = v_i.scale(1.0 / r_i);
    let u_s = v_s.scale(1.0 / r_s);

    // Specular direction: reflect the propagation direction (−u_i) in the plane.
    let spec = u_i.scale(-1.0).sub(n.scale(-2.0 * cos_ti)); // −u_i + 2cosθi·n
    let psi_r = u_s.angle_to(spec);
    let psi_i = u_s.angle_to(u_i);

    // Azimuth of the scattered direction with the Tx fixed at azimuth π.
    // Tangent frame: x̂ opposite the Tx's in-plane projection, ŷ = n × x̂.
    let t_i = u_i.sub(n.scale(cos_ti));
    let phi_s = if t_i.norm() < 1e-12 {
        // Normal incidence: the incidence plane is undefined and no
        // downstream quantity depends on the azimuth; pick a stable axis.
        let x_axis = pick_perpendicular(n);
        let y_axis = n.cross(x_axis);
        u_s.dot(y_axis).atan2(u_s.dot(x_axis))
    } else {
        let x_axis = t_i.scale(-1.0).normalized();
        let y_axis = n.cross(x_axis);
        u_s.dot(y_axis).atan2(u_s.dot(x_axis))
    };

    Ok(ScatterAngles {
        theta_i,
        theta_s,
        phi_s,
        psi_i,
        psi_r,
    })
}

fn pick_perpendicular(n: Vec3) -> Vec3 {
    let trial = if n.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    trial.sub(n.scale(trial.dot(n))).normalized()
}

// ---------------------------------------------------------------------------
// Antennas
// ---------------------------------------------------------------------------

/// Horn antenna described by boresight gain and half-power beamwidth, with a
/// rotationally symmetric Gaussian main lobe and no side lobes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Antenna {
    pub gain_dbi: f64,
    pub hpbw_deg: f64,
    /// Unit boresight direction.
    pub boresight: Vec3,
}

impl Antenna {
    pub fn new(gain_dbi: f64, hpbw_deg: f64, boresight: Vec3) -> Result<Self> {
        if !gain_dbi.is_finite() {
            return Err(Error::Parameter("antenna gain must be finite".into()));
        }
        if !(hpbw_deg > 0.0 && hpbw_deg < 180.0) {
            return Err(Error::Parameter(format!(
                "antenna HPBW must lie in (0, 180) degrees, got {hpbw_deg}"
            )));
        }
        Ok(Self {
            gain_dbi,
            hpbw_deg,
            boresight: boresight.normalized(),
        })
    }

    pub fn boresight_gain_linear(&self) -> f64 {
        10f64.powf(self.gain_dbi / 10.0)
    }
}

/// Linear gain of the antenna toward a unit `direction`:
/// `G(θ) = G0 · exp(−4 ln2 (θ / HPBW)²)` with θ the off-boresight angle,
/// which puts the −3 dB points at θ = HPBW/2.
pub fn antenna_gain_toward(antenna: &Antenna, direction: Vec3) -> f64 {
    let theta = antenna.boresight.angle_to(direction);
    let ratio = theta.to_degrees() / antenna.hpbw_deg;
    antenna.boresight_gain_linear() * (-4.0 * LN2 * ratio * ratio).exp()
}

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

/// Label identifying one Rx position in a sweep: the arc angle and, for 3D
/// sweeps, the receiver height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxLabel {
    pub angle_deg: f64,
    pub height_m: Option<f64>,
}

impl RxLabel {
    pub fn matches(&self, other: &RxLabel) -> bool {
        self.angle_deg == other.angle_deg && self.height_m == other.height_m
    }
}

impl std::fmt::Display for RxLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.height_m {
            Some(h) => write!(f, "{}deg_h{:.2}m", self.angle_deg, h),
            None => write!(f, "{}deg", self.angle_deg),
        }
    }
}

/// One receiver placement of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxPlacement {
    pub label: RxLabel,
    pub position: Point3,
    pub antenna: Antenna,
}

/// The simulated world: wall, Tx, Rx sweep, carrier, transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub wall: Wall,
    pub tx_position: Point3,
    pub tx_antenna: Antenna,
    pub rx: Vec<RxPlacement>,
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    /// Tessellation edge override; `None` uses [`Scene::default_patch_edge_m`].
    pub max_patch_edge_m: Option<f64>,
}

impl Scene {
    /// Validate the cross-field invariants: positive carrier, and Tx plus
    /// every Rx strictly on the illuminated side of the wall.
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_hz > 0.0) {
            return Err(Error::InvalidScene(format!(
                "frequency must be positive, got {} Hz",
                self.frequency_hz
            )));
        }
        if self.wall.side_of(self.tx_position) <= 0.0 {
            return Err(Error::InvalidScene(
                "tx must lie strictly on the illuminated side of the wall".into(),
            ));
        }
        for r in &self.rx {
            if self.wall.side_of(r.position) <= 0.0 {
                return Err(Error::InvalidScene(format!(
                    "rx {} must lie strictly on the illuminated side of the wall",
                    r.label
                )));
            }
        }
        if self.rx.is_empty() {
            return Err(Error::InvalidScene("at least one rx position".into()));
        }
        if let Some(e) = self.max_patch_edge_m {
            if !(e > 0.0) {
                return Err(Error::InvalidScene(format!(
                    "patch edge must be positive, got {e}"
                )));
            }
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength_m()
    }

    pub fn tx_power_watts(&self) -> f64 {
        10f64.powf((self.tx_power_dbm - 30.0) / 10.0)
    }

    /// Default tessellation edge: 10λ capped at 5 cm, chosen for converged
    /// far-field summation at the ~1.5 m measurement scale.
    pub fn default_patch_edge_m(&self) -> f64 {
        (10.0 * self.wavelength_m()).min(0.05)
    }

    pub fn patch_edge_m(&self) -> f64 {
        self.max_patch_edge_m
            .unwrap_or_else(|| self.default_patch_edge_m())
    }

    /// Zenith angle of the Tx as seen from the wall center (radians).
    pub fn tx_incidence_rad(&self) -> f64 {
        self.tx_position
            .sub(self.wall.center())
            .angle_to(self.wall.normal())
    }
}

/// Position on the measurement arc: signed `angle_deg` from the wall normal
/// in the horizontal plane (positive toward the specular side), at
/// `distance_m` from the wall center's vertical axis and height `height_m`.
pub fn arc_position(distance_m: f64, angle_deg: f64, height_m: f64, wall: &Wall) -> Point3 {
    let c = wall.center();
    let a = angle_deg.to_radians();
    Point3::new(distance_m * a.sin(), distance_m * a.cos(), height_m)
        .add(Vec3::new(c.x, c.y, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_patch() -> SurfacePatch {
        SurfacePatch {
            center: Point3::new(0.0, 0.0, 0.0),
            normal: Vec3::new(0.0, 1.0, 0.0),
            area: 1.0,
        }
    }

    /// Point at zenith `theta` (degrees) from the +y patch normal, azimuth
    /// measured in the x–y plane; `phi = 180` is the Tx side.
    fn at(theta_deg: f64, phi_deg: f64, r: f64) -> Point3 {
        let t = theta_deg.to_radians();
        let p = phi_deg.to_radians();
        Point3::new(r * t.sin() * p.cos(), r * t.cos(), r * t.sin() * p.sin())
    }

    // -- tessellate ---------------------------------------------------------

    #[test]
    fn tessellate_exact_quarters() {
        let wall = Wall::vertical_centered(1.0, 1.0, 0.0).unwrap();
        let patches = tessellate(&wall, 0.5).unwrap();
        assert_eq!(patches.len(), 4);
        for p in &patches {
            assert_relative_eq!(p.area, 0.25, max_relative = 1e-12);
        }
    }

    #[test]
    fn tessellate_identity() {
        let wall = Wall::vertical_centered(1.0, 1.0, 0.0).unwrap();
        let patches = tessellate(&wall, 1.0).unwrap();
        assert_eq!(patches.len(), 1);
        assert_relative_eq!(patches[0].area, 1.0, max_relative = 1e-12);
        let c = wall.center();
        assert_relative_eq!(patches[0].center.x, c.x, epsilon = 1e-12);
        assert_relative_eq!(patches[0].center.z, c.z, epsilon = 1e-12);
    }

    #[test]
    fn tessellate_ceil_split() {
        // 1.5 m x 1.0 m with 0.4 m cap: ceil(1.5/0.4)=4 by ceil(1.0/0.4)=3.
        let wall = Wall::vertical_centered(1.5, 1.0, 0.0).unwrap();
        let patches = tessellate(&wall, 0.4).unwrap();
        assert_eq!(patches.len(), 12);
        let total: f64 = patches.iter().map(|p| p.area).sum();
        assert_relative_eq!(total, 1.5, max_relative = 1e-9);
    }

    #[test]
    fn tessellate_area_is_exact_for_various_edges() {
        let wall = Wall::vertical_centered(1.37, 0.83, 1.2).unwrap();
        for edge in [0.031, 0.05, 0.11, 0.4, 2.0] {
            let patches = tessellate(&wall, edge).unwrap();
            let total: f64 = patches.iter().map(|p| p.area).sum();
            assert_relative_eq!(total, wall.area(), max_relative = 1e-9);
        }
    }

    #[test]
    fn tessellate_rejects_nonpositive_edge() {
        let wall = Wall::vertical_centered(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            tessellate(&wall, 0.0),
            Err(Error::InvalidScene(_))
        ));
    }

    #[test]
    fn wall_rejects_nonpositive_extents() {
        assert!(Wall::vertical_centered(-1.0, 1.0, 0.0).is_err());
        assert!(Wall::vertical_centered(1.0, 0.0, 0.0).is_err());
    }

    // -- scatter_angles -----------------------------------------------------

    #[test]
    fn specular_symmetry() {
        let patch = unit_patch();
        let tx = at(30.0, 180.0, 1.5);
        let rx = at(30.0, 0.0, 1.5);
        let g = scatter_angles(tx, &patch, rx).unwrap();
        assert_relative_eq!(g.theta_i, 30f64.to_radians(), epsilon = 1e-12);
        assert_relative_eq!(g.theta_s, 30f64.to_radians(), epsilon = 1e-12);
        assert!(g.psi_r.abs() < 1e-7, "psi_r = {}", g.psi_r);
        assert!(g.phi_s.abs() < 1e-12);
    }

    #[test]
    fn rx_along_normal() {
        let patch = unit_patch();
        let tx = at(30.0, 180.0, 1.5);
        let rx = Point3::new(0.0, 2.0, 0.0);
        let g = scatter_angles(tx, &patch, rx).unwrap();
        assert!(g.theta_s.abs() < 1e-12);
        assert_relative_eq!(g.psi_r, 30f64.to_radians(), epsilon = 1e-12);
        assert_relative_eq!(g.psi_i, 30f64.to_radians(), epsilon = 1e-12);
    }

    #[test]
    fn out_of_plane_psi_r() {
        // tx at 30 deg, rx at 30 deg zenith with 90 deg azimuth:
        // cos psi_r = cos^2(30) = 0.75.
        let patch = unit_patch();
        let tx = at(30.0, 180.0, 1.5);
        let rx = at(30.0, 90.0, 2.0);
        let g = scatter_angles(tx, &patch, rx).unwrap();
        assert_relative_eq!(g.psi_r.cos(), 0.75, epsilon = 1e-12);
        assert_relative_eq!(g.psi_r.to_degrees(), 0.75f64.acos().to_degrees(), epsilon = 1e-9);
        assert!((g.psi_r.to_degrees() - 41.41).abs() < 0.01);
        // Every consumer is even in phi_s; only the magnitude is pinned.
        assert_relative_eq!(g.phi_s.to_degrees().abs(), 90.0, epsilon = 1e-9);
    }

    #[test]
    fn psi_i_reciprocity() {
        // Swapping tx and rx leaves psi_i (angle between the same two rays)
        // unchanged.
        let patch = unit_patch();
        let a = at(37.0, 180.0, 1.1);
        let b = at(52.0, 25.0, 2.3);
        let g1 = scatter_angles(a, &patch, b).unwrap();
        let g2 = scatter_angles(b, &patch, a).unwrap();
        assert_relative_eq!(g1.psi_i, g2.psi_i, epsilon = 1e-12);
    }

    #[test]
    fn behind_patch_rejected() {
        let patch = unit_patch();
        let tx = at(30.0, 180.0, 1.5);
        let behind = Point3::new(0.3, -1.0, 0.0);
        assert!(matches!(
            scatter_angles(behind, &patch, tx),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            scatter_angles(tx, &patch, behind),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn from_spherical_matches_positions() {
        let patch = unit_patch();
        let tx = at(30.0, 180.0, 1.5);
        for (ts, ps) in [(10.0, 0.0), (45.0, 60.0), (70.0, -120.0), (30.0, 180.0)] {
            let rx = at(ts, ps, 1.8);
            let g = scatter_angles(tx, &patch, rx).unwrap();
            let h = ScatterAngles::from_spherical(
                30f64.to_radians(),
                (ts as f64).to_radians(),
                (ps as f64).to_radians(),
            );
            assert_relative_eq!(g.psi_r, h.psi_r, epsilon = 1e-9);
            assert_relative_eq!(g.psi_i, h.psi_i, epsilon = 1e-9);
        }
    }

    #[test]
    fn arc_positions_match_parameterization() {
        // Rx positions generated on the arc must reproduce theta_s at the
        // wall-center patch to 1e-9 rad.
        let wall = Wall::vertical_centered(1.0, 1.0, 1.7).unwrap();
        let patch = SurfacePatch {
            center: wall.center(),
            normal: wall.normal(),
            area: 1.0,
        };
        let tx = arc_position(1.5, -30.0, 1.7, &wall);
        for angle in [-70.0, -30.0, 0.0, 30.0, 80.0] {
            let rx = arc_position(1.5, angle, 1.7, &wall);
            let g = scatter_angles(tx, &patch, rx).unwrap();
            assert_relative_eq!(
                g.theta_s,
                (angle as f64).abs().to_radians(),
                epsilon = 1e-9
            );
        }
    }

    // -- antenna ------------------------------------------------------------

    #[test]
    fn boresight_gain() {
        let a = Antenna::new(15.0, 23.0, Vec3::new(0.0, -1.0, 0.0)).unwrap();
        let g = antenna_gain_toward(&a, Vec3::new(0.0, -1.0, 0.0));
        assert_relative_eq!(g, 31.6228, max_relative = 1e-4);
    }

    #[test]
    fn half_power_at_half_hpbw() {
        let a = Antenna::new(15.0, 23.0, Vec3::new(0.0, -1.0, 0.0)).unwrap();
        let t = 11.5f64.to_radians();
        let dir = Vec3::new(t.sin(), -t.cos(), 0.0);
        let g = antenna_gain_toward(&a, dir);
        assert_relative_eq!(g, 31.6228 / 2.0, max_relative = 1e-4);
    }

    #[test]
    fn full_hpbw_is_sixteenth() {
        // exp(−4 ln 2) = 2^−4: one full HPBW off boresight sits 12 dB down.
        let a = Antenna::new(19.4, 18.7, Vec3::new(0.0, -1.0, 0.0)).unwrap();
        let t = 18.7f64.to_radians();
        let dir = Vec3::new(t.sin(), -t.cos(), 0.0);
        let g = antenna_gain_toward(&a, dir);
        assert_relative_eq!(g, 10f64.powf(1.94) / 16.0, max_relative = 1e-9);
    }

    #[test]
    fn antenna_rejects_bad_hpbw() {
        assert!(Antenna::new(15.0, 0.0, Vec3::new(1.0, 0.0, 0.0)).is_err());
        assert!(Antenna::new(15.0, 180.0, Vec3::new(1.0, 0.0, 0.0)).is_err());
    }

    // -- scene --------------------------------------------------------------

    fn antenna_toward(from: Point3, to: Point3) -> Antenna {
        Antenna::new(15.0, 23.0, to.sub(from)).unwrap()
    }

    #[test]
    fn scene_validation() {
        let wall = Wall::vertical_centered(1.0, 1.0, 1.7).unwrap();
        let tx = arc_position(1.5, -30.0, 1.7, &wall);
        let rx = arc_position(1.5, 30.0, 1.7, &wall);
        let c = wall.center();
        let mut scene = Scene {
            wall,
            tx_position: tx,
            tx_antenna: antenna_toward(tx, c),
            rx: vec![RxPlacement {
                label: RxLabel {
                    angle_deg: 30.0,
                    height_m: None,
                },
                position: rx,
                antenna: antenna_toward(rx, c),
            }],
            frequency_hz: 8e9,
            tx_power_dbm: 10.0,
            max_patch_edge_m: None,
        };
        scene.validate().unwrap();
        assert_relative_eq!(scene.tx_incidence_rad().to_degrees(), 30.0, epsilon = 1e-9);
        // 10λ = 37.5 cm at 8 GHz, capped at 5 cm.
        assert_relative_eq!(scene.patch_edge_m(), 0.05, epsilon = 1e-12);

        scene.rx[0].position = Point3::new(0.0, -0.5, 1.7);
        assert!(scene.validate().is_err());
    }
}

use crate::error::{Error, Result};
use crate::geom::{pixel_to_direction, rotation_matrix, ErpGrid, RotationAngles};

/// A narrow-field-of-view crop: a rectilinear (perspective) frustum on the
/// sphere, described by its horizontal field of view, width:height aspect
/// ratio, and camera orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NfovSpec {
    fov_h_deg: f64,
    aspect: f64,
    viewpoint: RotationAngles,
}

impl NfovSpec {
    pub fn new(fov_h_deg: f64, aspect: f64, viewpoint: RotationAngles) -> Result<Self> {
        if !(fov_h_deg > 0.0 && fov_h_deg < 180.0) {
            return Err(Error::invalid(format!(
                "horizontal fov must be in (0, 180), got {fov_h_deg}"
            )));
        }
        if !(aspect.is_finite() && aspect > 0.0) {
            return Err(Error::invalid(format!("aspect ratio must be positive, got {aspect}")));
        }
        Ok(NfovSpec { fov_h_deg, aspect, viewpoint })
    }

    /// The 2:1 default aspect with a given fov and orientation.
    pub fn with_default_aspect(fov_h_deg: f64, viewpoint: RotationAngles) -> Result<Self> {
        Self::new(fov_h_deg, 2.0, viewpoint)
    }

    pub fn fov_h_deg(&self) -> f64 {
        self.fov_h_deg
    }

    pub fn aspect(&self) -> f64 {
        self.aspect
    }

    pub fn viewpoint(&self) -> RotationAngles {
        self.viewpoint
    }

    /// Half-angle tangents `(tan(fov_h/2), tan(fov_v/2))` of the frustum,
    /// with `tan(fov_v/2) = tan(fov_h/2) / aspect`.
    pub fn half_tangents(&self) -> (f64, f64) {
        let tan_h = (self.fov_h_deg / 2.0).to_radians().tan();
        (tan_h, tan_h / self.aspect)
    }
}

/// Marks every grid pixel whose direction lies inside the frustum.
///
/// The pixel direction is rotated into the camera frame (forward = `+x`) by
/// the inverse of the viewpoint rotation; it is inside when `x > 0`,
/// `|y| <= x*tan(fov_h/2)` and `|z| <= x*tan(fov_v/2)`. Returns a row-major
/// `H x W` mask of `0`/`1`.
pub fn nfov_mask(grid: ErpGrid, spec: &NfovSpec) -> Vec<u8> {
    let to_camera = rotation_matrix(spec.viewpoint()).inverse();
    let (tan_h, tan_v) = spec.half_tangents();
    let mut mask = Vec::with_capacity(grid.pixels());
    for i in 0..grid.height() {
        for j in 0..grid.width() {
            let d = pixel_to_direction(grid, i, j).expect("in-range pixel");
            let [x, y, z] = to_camera.apply(d.components());
            let inside = x > 0.0 && y.abs() <= x * tan_h && z.abs() <= x * tan_v;
            mask.push(inside as u8);
        }
    }
    mask
}

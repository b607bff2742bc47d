//! Equirectangular-projection geometry.
//!
//! An equirectangular (ERP) panorama stores a full sphere on a `2:1` pixel
//! grid: columns are longitude, rows are latitude, and pixel centers sit at
//! half-integer offsets so neither the seam column nor the poles are counted
//! twice. This module owns the exact pixel <-> direction transforms, 3D
//! rotation matrices built from yaw/pitch/roll, whole-panorama rotation with
//! nearest-neighbor resampling, and perspective (NFOV) frustum masks.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * `z` is up. A direction with longitude `phi` and latitude `theta` is
//!   `(cos(theta)cos(phi), cos(theta)sin(phi), sin(theta))`.
//! * Rotations compose as `R = R_x(roll) * R_y(pitch) * R_z(yaw)` and act on
//!   direction vectors as `v' = R * v`, so a yaw-only rotation adds the yaw
//!   angle to longitude and shifts panorama columns.
//! * Panorama rotation is a pull-back: every output pixel samples the input
//!   at the nearest pixel of the inversely rotated direction, so no output
//!   pixel is left undefined.
//! * Nearest-pixel rounding is half-away-from-zero; longitude wraps modulo
//!   the width, latitude clamps to the grid.

mod grid;
mod image;
mod nfov;
mod rotation;

pub use grid::{direction_to_pixel, pixel_to_direction, ContinuousPixel, ErpGrid, SphericalDirection};
pub use image::{rotate_image, rotate_image_by_matrix, rotation_index_map, yaw_shift, EquirectImage};
pub(crate) use image::{gather, scatter_add, yaw_shift_plane};
pub use nfov::{nfov_mask, NfovSpec};
pub use rotation::{rotation_matrix, RotationAngles, RotationMatrix};

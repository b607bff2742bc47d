use crate::error::{Error, Result};
use crate::geom::{
    direction_to_pixel, pixel_to_direction, rotation_matrix, ErpGrid, RotationAngles,
    RotationMatrix,
};
use crate::tensor::Tensor3;

/// A `C x H x W` scalar field on an equirectangular grid: a panorama, a
/// latent, or any per-channel feature map that lives on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct EquirectImage {
    grid: ErpGrid,
    tensor: Tensor3,
}

impl EquirectImage {
    pub fn zeros(channels: usize, grid: ErpGrid) -> Self {
        EquirectImage { grid, tensor: Tensor3::zeros(channels, grid.height(), grid.width()) }
    }

    /// Validates length and finiteness of `data` (`C*H*W`, channel-major).
    pub fn from_vec(channels: usize, grid: ErpGrid, data: Vec<f64>) -> Result<Self> {
        let tensor = Tensor3::from_vec(channels, grid.height(), grid.width(), data)?;
        if !tensor.all_finite() {
            return Err(Error::NonFinite("equirect image data".into()));
        }
        Ok(EquirectImage { grid, tensor })
    }

    /// Wraps an existing tensor whose spatial dims must be a 2:1 grid.
    pub fn from_tensor(tensor: Tensor3) -> Result<Self> {
        let grid = ErpGrid::new(tensor.height(), tensor.width())?;
        Ok(EquirectImage { grid, tensor })
    }

    pub fn grid(&self) -> ErpGrid {
        self.grid
    }

    pub fn channels(&self) -> usize {
        self.tensor.channels()
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.tensor
    }

    pub fn tensor_mut(&mut self) -> &mut Tensor3 {
        &mut self.tensor
    }

    pub fn into_tensor(self) -> Tensor3 {
        self.tensor
    }

    #[inline]
    pub fn get(&self, c: usize, i: usize, j: usize) -> f64 {
        self.tensor.get(c, i, j)
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: usize, j: usize, v: f64) {
        self.tensor.set(c, i, j, v)
    }

    pub fn values(&self) -> &[f64] {
        self.tensor.values()
    }
}

/// For every output pixel of `grid`, the flat index (`i*W + j`) of the input
/// pixel that a rotation by `rot` pulls its value from: the nearest pixel of
/// `rot^-1 * direction(output pixel)`.
pub fn rotation_index_map(grid: ErpGrid, rot: &RotationMatrix) -> Vec<usize> {
    let inv = rot.inverse();
    let mut map = Vec::with_capacity(grid.pixels());
    for i in 0..grid.height() {
        for j in 0..grid.width() {
            let out_dir = pixel_to_direction(grid, i, j).expect("in-range pixel");
            let src = direction_to_pixel(grid, inv.apply_direction(out_dir));
            let (si, sj) = src.nearest;
            map.push(si * grid.width() + sj);
        }
    }
    map
}

/// Rotates a panorama by an explicit rotation matrix (pull-back resampling,
/// nearest neighbor, identical for every channel).
pub fn rotate_image_by_matrix(image: &EquirectImage, rot: &RotationMatrix) -> EquirectImage {
    let grid = image.grid();
    let map = rotation_index_map(grid, rot);
    gather(image, &map)
}

/// Rotates a panorama by yaw/pitch/roll angles.
pub fn rotate_image(image: &EquirectImage, angles: RotationAngles) -> EquirectImage {
    rotate_image_by_matrix(image, &rotation_matrix(angles))
}

pub(crate) fn gather(image: &EquirectImage, map: &[usize]) -> EquirectImage {
    let grid = image.grid();
    let plane = grid.pixels();
    let channels = image.channels();
    let mut out = Vec::with_capacity(channels * plane);
    for c in 0..channels {
        let src = image.tensor().channel(c);
        out.extend(map.iter().map(|&k| src[k]));
    }
    EquirectImage {
        grid,
        tensor: Tensor3::from_vec(channels, grid.height(), grid.width(), out)
            .expect("gather preserves shape"),
    }
}

/// Transpose of [`gather`] for the same index map: scatter-adds output-pixel
/// gradients back onto the input pixels they were read from.
pub(crate) fn scatter_add(grad_out: &Tensor3, map: &[usize]) -> Tensor3 {
    let mut grad_in = Tensor3::zeros(grad_out.channels(), grad_out.height(), grad_out.width());
    for c in 0..grad_out.channels() {
        let g = grad_out.channel(c);
        let acc = grad_in.channel_mut(c);
        for (dst, &src) in map.iter().enumerate() {
            acc[src] += g[dst];
        }
    }
    grad_in
}

/// Exact circular column shift by `k` (positive shifts content toward larger
/// column indices). Bit-identical to `rotate_image` with yaw `k * 360/W`.
pub fn yaw_shift(image: &EquirectImage, k: i64) -> EquirectImage {
    let grid = image.grid();
    let w = grid.width() as i64;
    let shift = k.rem_euclid(w) as usize;
    let mut out = image.clone();
    if shift == 0 {
        return out;
    }
    for c in 0..image.channels() {
        let src = image.tensor().channel(c);
        let dst = out.tensor_mut().channel_mut(c);
        for i in 0..grid.height() {
            let row = i * grid.width();
            for j in 0..grid.width() {
                dst[row + (j + shift) % grid.width()] = src[row + j];
            }
        }
    }
    out
}

/// Circular column shift of a bare index/id row-major plane, for maps that
/// are not `f64` fields (segmentation ids).
pub(crate) fn yaw_shift_plane<T: Copy>(plane: &[T], height: usize, width: usize, k: i64) -> Vec<T> {
    let shift = k.rem_euclid(width as i64) as usize;
    let mut out = plane.to_vec();
    if shift == 0 {
        return out;
    }
    for i in 0..height {
        let row = i * width;
        for j in 0..width {
            out[row + (j + shift) % width] = plane[row + j];
        }
    }
    out
}

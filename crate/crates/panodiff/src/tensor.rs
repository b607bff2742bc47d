//! Dense channel-major scalar fields.
//!
//! [`Tensor3`] is the numeric carrier shared by the conditioning network, the
//! losses, and the sampler: a `C x H x W` block of `f64` in row-major order
//! within each channel. It makes no claim about geometry; the equirectangular
//! wrapper lives in [`crate::geom`].

use crate::error::{Error, Result};

/// A `channels x height x width` block of `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Tensor3 { channels, height, width, data: vec![0.0; channels * height * width] }
    }

    /// Wraps an existing buffer. `data.len()` must equal `channels*height*width`.
    pub fn from_vec(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::shape(format!(
                "tensor data length {} != {}x{}x{}",
                data.len(),
                channels,
                height,
                width
            )));
        }
        Ok(Tensor3 { channels, height, width, data })
    }

    pub fn full(channels: usize, height: usize, width: usize, value: f64) -> Self {
        Tensor3 { channels, height, width, data: vec![value; channels * height * width] }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `(channels, height, width)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn same_dims(&self, other: &Tensor3) -> bool {
        self.dims() == other.dims()
    }

    #[inline]
    pub fn idx(&self, c: usize, i: usize, j: usize) -> usize {
        (c * self.height + i) * self.width + j
    }

    #[inline]
    pub fn get(&self, c: usize, i: usize, j: usize) -> f64 {
        self.data[self.idx(c, i, j)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: usize, j: usize, v: f64) {
        let k = self.idx(c, i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add_assign_at(&mut self, c: usize, i: usize, j: usize, v: f64) {
        let k = self.idx(c, i, j);
        self.data[k] += v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_values(self) -> Vec<f64> {
        self.data
    }

    /// Row-major `H x W` slice of one channel.
    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.height * self.width;
        &self.data[c * plane..(c + 1) * plane]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        let plane = self.height * self.width;
        &mut self.data[c * plane..(c + 1) * plane]
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Tensor3 {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise `self + scale * other`.
    pub fn add_scaled(&mut self, other: &Tensor3, scale: f64) -> Result<()> {
        if !self.same_dims(other) {
            return Err(Error::shape(format!(
                "add_scaled: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += scale * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_channel_major_row_major() {
        let mut t = Tensor3::zeros(2, 3, 4);
        t.set(1, 2, 3, 7.0);
        assert_eq!(t.values()[1 * 12 + 2 * 4 + 3], 7.0);
        assert_eq!(t.get(1, 2, 3), 7.0);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(Tensor3::from_vec(1, 2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn channel_views_are_disjoint_planes() {
        let t = Tensor3::from_vec(2, 1, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(t.channel(0), &[1.0, 2.0]);
        assert_eq!(t.channel(1), &[3.0, 4.0]);
    }
}

//! Desk-scale spherical panorama generation toolkit.
//!
//! `panodiff` packages the numerics needed to experiment with
//! geometry-aware diffusion on equirectangular panoramas without any
//! pretrained model in the loop:
//!
//! * [`geom`] — exact equirectangular pixel/direction transforms, 3D
//!   rotations, panorama rotation, and perspective frustum masks;
//! * [`semantics`] — segmentation maps with an explicit unknown class,
//!   binary mask stacks, and per-pixel label embeddings;
//! * [`nn`] — a small hand-differentiated convolution stack: standard and
//!   deformable 2D convolution with clamped offsets, a zero-initialized
//!   conditioning hint block, and a two-layer perceptron head;
//! * [`train`] — spherical reprojection augmentation, the stop-gradient
//!   contrastive loss over rotated feature maps, the diffusion epsilon loss,
//!   and a deterministic SGD training step;
//! * [`sample`] — noise schedules, the rotation-scheduled sampling loop, an
//!   analytic Gaussian denoiser used as an exact oracle, and the seam
//!   continuity metric;
//! * [`io`] — binary tensor / embedding-table files, JSON experiment
//!   configuration, checkpoints, and synthetic data generation;
//! * [`gradcheck`] — central finite-difference verification for every
//!   hand-derived gradient in the crate.
//!
//! The companion command-line tool (`panodiff-cli`) exposes these pieces as
//! runnable experiments; the `book/` directory of the repository walks
//! through the concepts with runnable snippets.

pub mod error;
pub mod geom;
pub mod gradcheck;
pub mod io;
pub mod nn;
pub mod sample;
pub mod semantics;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};
pub use geom::{
    direction_to_pixel, nfov_mask, pixel_to_direction, rotate_image, rotation_matrix, yaw_shift,
    EquirectImage, ErpGrid, NfovSpec, RotationAngles, RotationMatrix, SphericalDirection,
};
pub use semantics::{
    fill_unknown, masks_from_seg, pixel_embedding, prompt_template, BinaryMaskStack,
    LabelEmbeddingTable, PerPixelEmbedding, SegmentationMap,
};
pub use tensor::Tensor3;

//! A small, fully hand-differentiated convolution stack.
//!
//! Everything here is written for exactness over speed: `f64` end to end,
//! plain loops, and an analytic backward pass for every parameter. The
//! [`crate::gradcheck`] module verifies each gradient against central finite
//! differences.

mod activation;
mod conv;
mod deform;
mod hint;
mod linear;
mod param;

pub use activation::Activation;
pub use conv::{Conv2dGrads, Conv2dLayer};
pub use deform::{
    bilinear_sample, clamp_offsets, DeformableConv2d, DeformableConvGrads, OffsetClamp,
};
pub use hint::{HintBlock, HintBlockConfig, HintBlockGrads};
pub use linear::{Linear, LinearGrads, Mlp, MlpGrads};
pub use param::{
    assign_params, flatten_params, get_param, param_count, set_param, Parameterized,
};

//! Baseline JPEG transmission with all but four corner DC coefficients
//! removed, receiver-side DC recovery by boundary-smoothness search, and a
//! small db4 wavelet toolkit (BayesShrink denoising and the wavelet channel
//! extension used as a classifier preprocessing step).
//!
//! Everything operates on 8-bit grayscale [`Image`]s except the channel
//! extension, which takes an [`RgbImage`].

pub mod blockdct;
#[cfg(feature = "cli")]
pub mod cli;
pub mod dcrecover;
mod error;
pub mod image;
pub mod jpegstream;
pub mod metrics;
pub mod wavelet;
pub mod wavext;

pub use crate::blockdct::{CoeffBlock, CoeffGrid, QuantTable};
pub use crate::dcrecover::{DcGrid, Loss, RecoveryConfig, ScanMode};
pub use crate::error::{Error, Result};
pub use crate::image::{Image, ImageFormat, Plane, RgbImage};
pub use crate::jpegstream::{CornerDcs, EncodedJpeg};
pub use crate::wavelet::Subbands;
pub use crate::wavext::ExtendedTensor;

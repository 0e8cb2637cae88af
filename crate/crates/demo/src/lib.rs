//! Browser bindings for the cornerdc pipeline.
//!
//! The exported functions take 8-bit grayscale pixel buffers (row-major) so
//! the page can feed them straight from a canvas. Each has a plain Rust
//! counterpart that the native tests call.

use cornerdc::blockdct::{coeff_grid_to_image, image_to_coeff_grid_padded};
use cornerdc::dcrecover::{recover_grid, Corner};
use cornerdc::image::{luma, Plane};
use cornerdc::jpegstream::{compression_ratio, decode_baseline, drop_dc, encode_baseline};
use cornerdc::metrics::psnr;
use cornerdc::wavelet::wd_denoise;
use cornerdc::wavext::wavelet_extension;
use cornerdc::{Error, Image, Loss, QuantTable, RecoveryConfig, Result, ScanMode};
use wasm_bindgen::prelude::*;

/// Outcome of one drop-and-recover run.
#[wasm_bindgen]
pub struct Recovery {
    reference: Vec<u8>,
    zero_dc: Vec<u8>,
    recovered: Vec<u8>,
    orig_bytes: usize,
    drop_bytes: usize,
    ratio: f64,
    psnr_zero: f64,
    psnr_rec: f64,
}

#[wasm_bindgen]
impl Recovery {
    /// Standard Q50 decode.
    pub fn reference(&self) -> Vec<u8> {
        self.reference.clone()
    }

    /// The dropped stream decoded without recovery.
    pub fn zero_dc(&self) -> Vec<u8> {
        self.zero_dc.clone()
    }

    pub fn recovered(&self) -> Vec<u8> {
        self.recovered.clone()
    }

    pub fn orig_bytes(&self) -> usize {
        self.orig_bytes
    }

    pub fn drop_bytes(&self) -> usize {
        self.drop_bytes
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn psnr_zero(&self) -> f64 {
        self.psnr_zero
    }

    pub fn psnr_rec(&self) -> f64 {
        self.psnr_rec
    }
}

pub fn parse_config(mode: &str, loss: &str) -> Result<RecoveryConfig> {
    let scan = match mode {
        "single" => ScanMode::SingleCorner(Corner::TopLeft),
        "avg4" => ScanMode::FourCornerAverage,
        other => return Err(Error::Config(format!("unknown scan mode {other:?}"))),
    };
    let loss = match loss {
        "mse" => Loss::BoundaryMse,
        "trend" => Loss::GradientTrend,
        "both" => Loss::Both,
        other => return Err(Error::Config(format!("unknown loss {other:?}"))),
    };
    Ok(RecoveryConfig::default().with_scan(scan).with_loss(loss))
}

/// Encode, drop the DCs, push the bytes through the decoder and recover.
pub fn run_recovery(gray: &[u8], width: usize, height: usize, cfg: &RecoveryConfig) -> Result<Recovery> {
    let img = Image::new(width, height, gray.to_vec())?;
    let grid = image_to_coeff_grid_padded(&img, &QuantTable::q50())?;
    let standard = encode_baseline(&grid)?;
    let dropped = encode_baseline(&drop_dc(&grid))?;
    let received = decode_baseline(dropped.bytes())?;

    let reference = coeff_grid_to_image(&grid);
    let zero_dc = coeff_grid_to_image(&received);
    let recovered = coeff_grid_to_image(&recover_grid(&received, cfg)?);
    Ok(Recovery {
        psnr_zero: psnr(&reference, &zero_dc)?,
        psnr_rec: psnr(&reference, &recovered)?,
        orig_bytes: standard.total_len(),
        drop_bytes: dropped.total_len(),
        ratio: compression_ratio(&standard, &dropped).total,
        reference: reference.into_data(),
        zero_dc: zero_dc.into_data(),
        recovered: recovered.into_data(),
    })
}

pub fn run_denoise(gray: &[u8], width: usize, height: usize) -> Result<Vec<u8>> {
    Ok(wd_denoise(&Image::new(width, height, gray.to_vec())?)?.into_data())
}

/// Wavelet extension channel of a square grayscale image, as 8-bit pixels.
pub fn run_extension(gray: &[u8], size: usize) -> Result<Vec<u8>> {
    let plane = Plane::from_image(&Image::new(size, size, gray.to_vec())?);
    Ok(wavelet_extension(&plane)?.to_image()?.into_data())
}

pub fn rgba_to_gray(rgba: &[u8]) -> Vec<u8> {
    rgba.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect()
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = dropAndRecover)]
pub fn drop_and_recover(
    gray: &[u8],
    width: usize,
    height: usize,
    mode: &str,
    loss: &str,
) -> std::result::Result<Recovery, JsError> {
    run_recovery(gray, width, height, &parse_config(mode, loss).map_err(js)?).map_err(js)
}

#[wasm_bindgen]
pub fn denoise(gray: &[u8], width: usize, height: usize) -> std::result::Result<Vec<u8>, JsError> {
    run_denoise(gray, width, height).map_err(js)
}

#[wasm_bindgen(js_name = waveletExtension)]
pub fn wavelet_extension_js(gray: &[u8], size: usize) -> std::result::Result<Vec<u8>, JsError> {
    run_extension(gray, size).map_err(js)
}

#[wasm_bindgen(js_name = rgbaToGray)]
pub fn rgba_to_gray_js(rgba: &[u8]) -> Vec<u8> {
    rgba_to_gray(rgba)
}

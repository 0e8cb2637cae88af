//! 8×8 block DCT, quantization and image ↔ coefficient-grid conversion.
//!
//! The transform is the orthonormal type-II DCT, so after the −128 level
//! shift the DC term is exactly one eighth of the block sum. The DC term is
//! computed and synthesised separately from the AC terms: it is a flat offset
//! on the block, and keeping it out of the separable passes makes
//! `inverse_dct` bit-identical to "AC synthesis + dc/8" for every DC value.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::image::{pad_replicate, Image};

pub const BLOCK: usize = 8;
pub const BLOCK_LEN: usize = BLOCK * BLOCK;

/// JPEG Annex K luminance table (quality 50), natural row-major order.
pub const Q50_LUMA: [u16; BLOCK_LEN] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantTable([u16; BLOCK_LEN]);

impl QuantTable {
    pub fn new(entries: [u16; BLOCK_LEN]) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Config("quantization divisors must be >= 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn q50() -> Self {
        Self(Q50_LUMA)
    }

    pub fn entries(&self) -> &[u16; BLOCK_LEN] {
        &self.0
    }

    pub fn dc_divisor(&self) -> u16 {
        self.0[0]
    }
}

impl Default for QuantTable {
    fn default() -> Self {
        Self::q50()
    }
}

/// Quantized coefficients of one block, natural row-major order; index 0 is DC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffBlock(pub [i32; BLOCK_LEN]);

impl CoeffBlock {
    pub const ZERO: CoeffBlock = CoeffBlock([0; BLOCK_LEN]);

    pub fn dc(&self) -> i32 {
        self.0[0]
    }

    pub fn set_dc(&mut self, dc: i32) {
        self.0[0] = dc;
    }

    pub fn with_dc(mut self, dc: i32) -> Self {
        self.0[0] = dc;
        self
    }

    pub fn ac(&self) -> &[i32] {
        &self.0[1..]
    }
}

impl Default for CoeffBlock {
    fn default() -> Self {
        Self::ZERO
    }
}

/// `v_n`×`h_n` blocks covering a (padded) image.
///
/// `width`/`height` are the displayed dimensions; the blocks cover the
/// image after edge padding to multiples of 8.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffGrid {
    width: usize,
    height: usize,
    block_rows: usize,
    block_cols: usize,
    blocks: Vec<CoeffBlock>,
    quant: QuantTable,
}

impl CoeffGrid {
    pub fn new(width: usize, height: usize, quant: QuantTable) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("empty grid {width}x{height}")));
        }
        let block_rows = height.div_ceil(BLOCK);
        let block_cols = width.div_ceil(BLOCK);
        Ok(Self {
            width,
            height,
            block_rows,
            block_cols,
            blocks: vec![CoeffBlock::ZERO; block_rows * block_cols],
            quant,
        })
    }

    pub fn from_blocks(width: usize, height: usize, quant: QuantTable, blocks: Vec<CoeffBlock>) -> Result<Self> {
        let mut grid = Self::new(width, height, quant)?;
        if blocks.len() != grid.blocks.len() {
            return Err(Error::Dimension(format!(
                "{width}x{height} needs {} blocks, got {}",
                grid.blocks.len(),
                blocks.len()
            )));
        }
        grid.blocks = blocks;
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `v_n`
    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    /// `h_n`
    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn quant(&self) -> &QuantTable {
        &self.quant
    }

    pub fn blocks(&self) -> &[CoeffBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [CoeffBlock] {
        &mut self.blocks
    }

    #[inline]
    pub fn block(&self, row: usize, col: usize) -> &CoeffBlock {
        &self.blocks[row * self.block_cols + col]
    }

    #[inline]
    pub fn block_mut(&mut self, row: usize, col: usize) -> &mut CoeffBlock {
        &mut self.blocks[row * self.block_cols + col]
    }

    pub fn dc(&self, row: usize, col: usize) -> i32 {
        self.block(row, col).dc()
    }
}

struct Basis {
    // basis[u][x] = a(u) cos((2x + 1) u pi / 16), a(0) = sqrt(1/8), a(u) = 1/2
    cos: [[f64; BLOCK]; BLOCK],
}

fn basis() -> &'static Basis {
    static BASIS: OnceLock<Basis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut cos = [[0.0; BLOCK]; BLOCK];
        for (u, row) in cos.iter_mut().enumerate() {
            let scale = if u == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
            for (x, c) in row.iter_mut().enumerate() {
                *c = scale * (((2 * x + 1) * u) as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        Basis { cos }
    })
}

/// Level shift by −128 followed by the orthonormal 2D DCT-II.
pub fn forward_dct(block: &[u8; BLOCK_LEN]) -> [f64; BLOCK_LEN] {
    let b = &basis().cos;
    let shifted: [f64; BLOCK_LEN] = std::array::from_fn(|i| f64::from(block[i]) - 128.0);

    // rows: tmp[y][u] = sum_x b[u][x] s[y][x]
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..BLOCK {
        for u in 0..BLOCK {
            tmp[y * BLOCK + u] = (0..BLOCK).map(|x| b[u][x] * shifted[y * BLOCK + x]).sum();
        }
    }
    // columns: out[v][u] = sum_y b[v][y] tmp[y][u]
    let mut out = [0.0; BLOCK_LEN];
    for v in 0..BLOCK {
        for u in 0..BLOCK {
            out[v * BLOCK + u] = (0..BLOCK).map(|y| b[v][y] * tmp[y * BLOCK + u]).sum();
        }
    }
    out[0] = shifted.iter().sum::<f64>() / 8.0;
    out
}

/// Synthesis of the AC terms only (coefficient 0 is ignored), without the
/// +128 level shift or rounding.
pub fn inverse_dct_ac(coeffs: &[f64; BLOCK_LEN]) -> [f64; BLOCK_LEN] {
    let b = &basis().cos;
    let mut c = *coeffs;
    c[0] = 0.0;

    // columns: tmp[y][u] = sum_v b[v][y] c[v][u]
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..BLOCK {
        for u in 0..BLOCK {
            tmp[y * BLOCK + u] = (0..BLOCK).map(|v| b[v][y] * c[v * BLOCK + u]).sum();
        }
    }
    let mut out = [0.0; BLOCK_LEN];
    for y in 0..BLOCK {
        for x in 0..BLOCK {
            out[y * BLOCK + x] = (0..BLOCK).map(|u| b[u][x] * tmp[y * BLOCK + u]).sum();
        }
    }
    out
}

/// Rounds and clamps one reconstructed sample given its AC part and the
/// dequantized DC value.
#[inline]
pub fn reconstruct_sample(ac_part: f64, dc: f64) -> u8 {
    (ac_part + dc / 8.0 + 128.0).round().clamp(0.0, 255.0) as u8
}

/// Inverse orthonormal DCT, +128, round half away from zero, clamp to [0, 255].
pub fn inverse_dct(coeffs: &[f64; BLOCK_LEN]) -> [u8; BLOCK_LEN] {
    let ac = inverse_dct_ac(coeffs);
    std::array::from_fn(|i| reconstruct_sample(ac[i], coeffs[0]))
}

pub fn quantize(coeffs: &[f64; BLOCK_LEN], q: &QuantTable) -> CoeffBlock {
    CoeffBlock(std::array::from_fn(|i| (coeffs[i] / f64::from(q.0[i])).round() as i32))
}

pub fn dequantize(block: &CoeffBlock, q: &QuantTable) -> [f64; BLOCK_LEN] {
    std::array::from_fn(|i| f64::from(block.0[i]) * f64::from(q.0[i]))
}

/// Decoder output for one quantized block.
pub fn block_pixels(block: &CoeffBlock, q: &QuantTable) -> [u8; BLOCK_LEN] {
    inverse_dct(&dequantize(block, q))
}

fn read_block(img: &Image, row: usize, col: usize) -> [u8; BLOCK_LEN] {
    std::array::from_fn(|i| img.get(col * BLOCK + i % BLOCK, row * BLOCK + i / BLOCK))
}

/// Forward pipeline over an image whose dimensions are multiples of 8.
pub fn image_to_coeff_grid(img: &Image, q: &QuantTable) -> Result<CoeffGrid> {
    if !img.width().is_multiple_of(BLOCK) || !img.height().is_multiple_of(BLOCK) {
        return Err(Error::Dimension(format!(
            "{}x{} is not a multiple of {BLOCK}; pad first",
            img.width(),
            img.height()
        )));
    }
    let mut grid = CoeffGrid::new(img.width(), img.height(), *q)?;
    for row in 0..grid.block_rows {
        for col in 0..grid.block_cols {
            *grid.block_mut(row, col) = quantize(&forward_dct(&read_block(img, row, col)), q);
        }
    }
    Ok(grid)
}

/// Pads with edge replication, transforms, and records the original size
/// as the grid's display dimensions.
pub fn image_to_coeff_grid_padded(img: &Image, q: &QuantTable) -> Result<CoeffGrid> {
    let padded = pad_replicate(img, BLOCK);
    let full = image_to_coeff_grid(&padded, q)?;
    CoeffGrid::from_blocks(img.width(), img.height(), *q, full.blocks)
}

/// Inverse pipeline; the result is cropped to the grid's display dimensions.
pub fn coeff_grid_to_image(grid: &CoeffGrid) -> Image {
    let full_w = grid.block_cols * BLOCK;
    let mut data = vec![0u8; full_w * grid.block_rows * BLOCK];
    for row in 0..grid.block_rows {
        for col in 0..grid.block_cols {
            let px = block_pixels(grid.block(row, col), &grid.quant);
            for y in 0..BLOCK {
                let start = (row * BLOCK + y) * full_w + col * BLOCK;
                data[start..start + BLOCK].copy_from_slice(&px[y * BLOCK..(y + 1) * BLOCK]);
            }
        }
    }
    let full = Image::new(full_w, grid.block_rows * BLOCK, data).expect("non-empty grid");
    if full.width() == grid.width && full.height() == grid.height {
        full
    } else {
        full.crop(grid.width, grid.height).expect("display dims fit the blocks")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn flat_blocks() {
        assert_eq!(forward_dct(&[128; 64]), [0.0; 64]);
        let c = forward_dct(&[255; 64]);
        assert_eq!(c[0], 1016.0);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-9));
        assert_eq!(inverse_dct(&[0.0; 64]), [128; 64]);
        let mut dc = [0.0; 64];
        dc[0] = 1016.0;
        assert_eq!(inverse_dct(&dc), [255; 64]);
    }

    #[test]
    fn quantization_rounds_half_away() {
        let q = QuantTable::q50();
        let mut c = [0.0; 64];
        c[0] = 1016.0;
        assert_eq!(quantize(&c, &q).dc(), 64);
        c[0] = -24.0;
        assert_eq!(quantize(&c, &q).dc(), -2);
        assert_eq!(quantize(&[0.0; 64], &q), CoeffBlock::ZERO);

        let block = CoeffBlock::ZERO.with_dc(64);
        assert_eq!(dequantize(&block, &q)[0], 1024.0);
        assert_eq!(dequantize(&CoeffBlock::ZERO.with_dc(-2), &q)[0], -32.0);
        assert_eq!(dequantize(&CoeffBlock::ZERO, &q), [0.0; 64]);
    }

    #[test]
    fn zero_divisor_rejected() {
        let mut e = Q50_LUMA;
        e[5] = 0;
        assert!(QuantTable::new(e).is_err());
    }

    #[test]
    fn flat_image_grid() {
        let img = Image::filled(16, 16, 200);
        let grid = image_to_coeff_grid(&img, &QuantTable::q50()).unwrap();
        assert_eq!((grid.block_rows(), grid.block_cols()), (2, 2));
        for b in grid.blocks() {
            assert_eq!(b.dc(), 36);
            assert!(b.ac().iter().all(|&v| v == 0));
        }
        assert_eq!(coeff_grid_to_image(&grid), img);

        let grid = image_to_coeff_grid(&Image::filled(8, 8, 3), &QuantTable::q50()).unwrap();
        assert_eq!((grid.block_rows(), grid.block_cols()), (1, 1));
    }

    #[test]
    fn unaligned_image_rejected_but_padded_helper_works() {
        let img = Image::from_fn(13, 9, |x, y| (x * 11 + y * 5) as u8);
        assert!(matches!(image_to_coeff_grid(&img, &QuantTable::q50()), Err(Error::Dimension(_))));
        let grid = image_to_coeff_grid_padded(&img, &QuantTable::q50()).unwrap();
        assert_eq!((grid.block_rows(), grid.block_cols()), (2, 2));
        let back = coeff_grid_to_image(&grid);
        assert_eq!((back.width(), back.height()), (13, 9));
    }

    #[test]
    fn dc_only_synthesis_matches_offset_form() {
        let q = QuantTable::q50();
        let mut block = CoeffBlock::ZERO;
        block.0[1] = 3;
        block.0[9] = -2;
        block.0[36] = 1;
        let deq = dequantize(&block, &q);
        let ac = inverse_dct_ac(&deq);
        for dc in -64..=64 {
            let full = block_pixels(&block.with_dc(dc), &q);
            let fast: [u8; 64] = std::array::from_fn(|i| reconstruct_sample(ac[i], f64::from(dc * 16)));
            assert_eq!(full, fast);
        }
    }

    proptest! {
        #[test]
        fn parseval(block in proptest::array::uniform32(any::<u8>()), rest in proptest::array::uniform32(any::<u8>())) {
            let mut px = [0u8; 64];
            px[..32].copy_from_slice(&block);
            px[32..].copy_from_slice(&rest);
            let c = forward_dct(&px);
            let e_px: f64 = px.iter().map(|&v| (f64::from(v) - 128.0).powi(2)).sum();
            let e_c: f64 = c.iter().map(|v| v * v).sum();
            prop_assert!((e_px - e_c).abs() <= 1e-9 * e_px.max(1.0));
        }

        #[test]
        fn dct_round_trip_is_identity(block in proptest::array::uniform32(any::<u8>()), rest in proptest::array::uniform32(any::<u8>())) {
            let mut px = [0u8; 64];
            px[..32].copy_from_slice(&block);
            px[32..].copy_from_slice(&rest);
            prop_assert_eq!(inverse_dct(&forward_dct(&px)), px);
        }

        #[test]
        fn quantized_dc_within_q50_bound(block in proptest::array::uniform32(any::<u8>()), rest in proptest::array::uniform32(any::<u8>())) {
            let mut px = [0u8; 64];
            px[..32].copy_from_slice(&block);
            px[32..].copy_from_slice(&rest);
            let dc = quantize(&forward_dct(&px), &QuantTable::q50()).dc();
            prop_assert!((-64..=64).contains(&dc));
        }
    }
}

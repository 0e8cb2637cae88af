//! Recovery of zeroed DC coefficients from the AC terms and the four
//! transmitted corner DCs.
//!
//! Each block's DC is chosen by exhaustive search over the quantized DC
//! range: every candidate is reconstructed exactly as a decoder would show
//! it (dequantize, inverse DCT, round, clamp) and scored by how smoothly its
//! edge pixels continue the already-recovered neighbours. Blocks are visited
//! in raster order away from a seed corner, so each block sees at most two
//! recovered neighbours.

use rayon::prelude::*;

use crate::blockdct::{
    block_pixels, coeff_grid_to_image, dequantize, inverse_dct_ac, reconstruct_sample, CoeffBlock, CoeffGrid,
    QuantTable, BLOCK, BLOCK_LEN,
};
use crate::error::{Error, Result};
use crate::image::{to_u8, Image, Plane};
use crate::jpegstream::{decode_baseline, extract_corner_dcs, CornerDcs};

/// Per-neighbour smoothness score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Loss {
    /// Mean squared jump across the shared edge.
    #[default]
    BoundaryMse,
    /// Mean squared deviation of the jump from the neighbour's own last step.
    GradientTrend,
    /// Sum of the two.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corner {
    #[default]
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::TopLeft, Corner::TopRight, Corner::BottomLeft, Corner::BottomRight];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// One raster scan away from the given corner.
    SingleCorner(Corner),
    /// One scan from each corner, averaged per block.
    #[default]
    FourCornerAverage,
}

/// Search range, loss and scan strategy. Ties always go to the lowest DC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecoveryConfig {
    pub dc_min: i32,
    pub dc_max: i32,
    pub loss: Loss,
    pub scan: ScanMode,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self { dc_min: -64, dc_max: 64, loss: Loss::BoundaryMse, scan: ScanMode::FourCornerAverage }
    }
}

impl RecoveryConfig {
    /// The raster scan from the top-left corner with boundary MSE.
    pub fn single_corner() -> Self {
        Self { scan: ScanMode::SingleCorner(Corner::TopLeft), ..Self::default() }
    }

    pub fn with_loss(self, loss: Loss) -> Self {
        Self { loss, ..self }
    }

    pub fn with_scan(self, scan: ScanMode) -> Self {
        Self { scan, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dc_min > self.dc_max {
            return Err(Error::Config(format!("dc_min {} > dc_max {}", self.dc_min, self.dc_max)));
        }
        if self.dc_min < -2047 || self.dc_max > 2047 {
            return Err(Error::Config("DC search range exceeds the codable range".into()));
        }
        Ok(())
    }
}

/// Recovered quantized DC per block, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcGrid {
    rows: usize,
    cols: usize,
    values: Vec<i32>,
}

impl DcGrid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, values: vec![0; rows * cols] }
    }

    /// The DCs currently stored in a coefficient grid.
    pub fn from_coeff_grid(grid: &CoeffGrid) -> Self {
        Self {
            rows: grid.block_rows(),
            cols: grid.block_cols(),
            values: grid.blocks().iter().map(CoeffBlock::dc).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.values[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: i32) {
        self.values[row * self.cols + col] = v;
    }

    /// Copy of `grid` with these DCs written in; AC terms are untouched.
    pub fn apply(&self, grid: &CoeffGrid) -> Result<CoeffGrid> {
        if grid.block_rows() != self.rows || grid.block_cols() != self.cols {
            return Err(Error::Dimension(format!(
                "DC grid {}x{} does not match {}x{} blocks",
                self.rows,
                self.cols,
                grid.block_rows(),
                grid.block_cols()
            )));
        }
        let mut out = grid.clone();
        for (block, &dc) in out.blocks_mut().iter_mut().zip(&self.values) {
            block.set_dc(dc);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Side-by-side blocks: the first is on the left.
    Horizontal,
    /// Stacked blocks: the first is on top.
    Vertical,
}

/// Where a recovered neighbour sits relative to the block being predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Above,
    Below,
}

/// A recovered neighbouring block in pixel form.
#[derive(Debug, Clone, Copy)]
pub struct Neighbor<'a> {
    pub pixels: &'a [u8; BLOCK_LEN],
    pub side: Side,
}

#[inline]
fn px(block: &[u8; BLOCK_LEN], row: usize, col: usize) -> f64 {
    f64::from(block[row * BLOCK + col])
}

/// Mean of `(b_edge - a_edge)^2` over the 8 pixel pairs across the shared edge;
/// `a` is the left (horizontal) or upper (vertical) block.
pub fn boundary_mse(a: &[u8; BLOCK_LEN], b: &[u8; BLOCK_LEN], orientation: Orientation) -> f64 {
    let sum: f64 = (0..BLOCK)
        .map(|i| {
            let d = match orientation {
                Orientation::Horizontal => px(b, i, 0) - px(a, i, 7),
                Orientation::Vertical => px(b, 0, i) - px(a, 7, i),
            };
            d * d
        })
        .sum();
    sum / BLOCK as f64
}

/// How far the jump from `prev` into `cur` departs from `prev`'s own step
/// between its last two columns (horizontal) or rows (vertical).
pub fn gradient_trend_loss(prev: &[u8; BLOCK_LEN], cur: &[u8; BLOCK_LEN], orientation: Orientation) -> f64 {
    let sum: f64 = (0..BLOCK)
        .map(|i| {
            let d = match orientation {
                Orientation::Horizontal => (px(cur, i, 0) - px(prev, i, 7)) - (px(prev, i, 7) - px(prev, i, 6)),
                Orientation::Vertical => (px(cur, 0, i) - px(prev, 7, i)) - (px(prev, 7, i) - px(prev, 6, i)),
            };
            d * d
        })
        .sum();
    sum / BLOCK as f64
}

/// Pixel index of the `i`-th sample along the edge of a block facing `side`,
/// and of the sample one step further inside.
#[inline]
fn edge_index(side: Side, i: usize) -> (usize, usize) {
    match side {
        Side::Left => (i * BLOCK, i * BLOCK + 1),
        Side::Right => (i * BLOCK + 7, i * BLOCK + 6),
        Side::Above => (i, BLOCK + i),
        Side::Below => (7 * BLOCK + i, 6 * BLOCK + i),
    }
}

fn opposite(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
        Side::Above => Side::Below,
        Side::Below => Side::Above,
    }
}

/// Edge data of one neighbour, precomputed once per block.
struct EdgeTerm {
    /// Indices into the candidate block of its edge facing the neighbour.
    cur: [usize; BLOCK],
    /// Neighbour's facing edge and the row/column behind it.
    edge: [f64; BLOCK],
    inner: [f64; BLOCK],
}

impl EdgeTerm {
    fn new(n: &Neighbor<'_>) -> Self {
        // the neighbour on our left faces us with its right edge, and so on
        let facing = opposite(n.side);
        let mut term = EdgeTerm { cur: [0; BLOCK], edge: [0.0; BLOCK], inner: [0.0; BLOCK] };
        for i in 0..BLOCK {
            let (e, inner) = edge_index(facing, i);
            term.cur[i] = edge_index(n.side, i).0;
            term.edge[i] = f64::from(n.pixels[e]);
            term.inner[i] = f64::from(n.pixels[inner]);
        }
        term
    }

    fn loss(&self, cur_edge: &[f64; BLOCK], loss: Loss) -> f64 {
        let mut mse = 0.0;
        let mut trend = 0.0;
        for ((&cur, &edge), &inner) in cur_edge.iter().zip(&self.edge).zip(&self.inner) {
            let jump = cur - edge;
            mse += jump * jump;
            let dev = jump - (edge - inner);
            trend += dev * dev;
        }
        let n = BLOCK as f64;
        match loss {
            Loss::BoundaryMse => mse / n,
            Loss::GradientTrend => trend / n,
            Loss::Both => mse / n + trend / n,
        }
    }
}

/// Best quantized DC for a block given its AC terms and recovered
/// neighbours. The losses against all neighbours are summed; ties go to the
/// lowest candidate.
pub fn predict_block_dc(
    ac: &CoeffBlock,
    neighbors: &[Neighbor<'_>],
    quant: &QuantTable,
    cfg: &RecoveryConfig,
) -> Result<i32> {
    if neighbors.is_empty() {
        return Err(Error::NoNeighbor { row: 0, col: 0 });
    }
    cfg.validate()?;
    let ac_part = inverse_dct_ac(&dequantize(&ac.with_dc(0), quant));
    let terms: Vec<EdgeTerm> = neighbors.iter().map(EdgeTerm::new).collect();
    let q_dc = i64::from(quant.dc_divisor());

    let mut best = (f64::INFINITY, cfg.dc_min);
    let mut edge = [0.0; BLOCK];
    for dc in cfg.dc_min..=cfg.dc_max {
        let dc_value = (i64::from(dc) * q_dc) as f64;
        let mut total = 0.0;
        for term in &terms {
            for (e, &idx) in edge.iter_mut().zip(&term.cur) {
                *e = f64::from(reconstruct_sample(ac_part[idx], dc_value));
            }
            total += term.loss(&edge, cfg.loss);
        }
        if total < best.0 {
            best = (total, dc);
        }
    }
    Ok(best.1)
}

fn corner_position(corner: Corner, rows: usize, cols: usize) -> (usize, usize) {
    match corner {
        Corner::TopLeft => (0, 0),
        Corner::TopRight => (0, cols - 1),
        Corner::BottomLeft => (rows - 1, 0),
        Corner::BottomRight => (rows - 1, cols - 1),
    }
}

fn corner_value(corners: &CornerDcs, corner: Corner) -> i32 {
    match corner {
        Corner::TopLeft => corners.top_left,
        Corner::TopRight => corners.top_right,
        Corner::BottomLeft => corners.bottom_left,
        Corner::BottomRight => corners.bottom_right,
    }
}

/// One raster scan seeded at `seed`, which takes `seed_dc`. Every other
/// block, including the remaining corners, is predicted from its already
/// visited neighbours in the scan's row and column directions.
fn scan_from(grid: &CoeffGrid, seed: Corner, seed_dc: i32, cfg: &RecoveryConfig) -> Result<DcGrid> {
    let (rows, cols) = (grid.block_rows(), grid.block_cols());
    let (row_back, col_back) = match seed {
        Corner::TopLeft => (false, false),
        Corner::TopRight => (false, true),
        Corner::BottomLeft => (true, false),
        Corner::BottomRight => (true, true),
    };
    // side of the previously visited block along each axis
    let prev_col_side = if col_back { Side::Right } else { Side::Left };
    let prev_row_side = if row_back { Side::Below } else { Side::Above };

    let mut dcs = DcGrid::new(rows, cols);
    let mut pixels: Vec<[u8; BLOCK_LEN]> = vec![[0; BLOCK_LEN]; rows * cols];
    for ri in 0..rows {
        let r = if row_back { rows - 1 - ri } else { ri };
        for ci in 0..cols {
            let c = if col_back { cols - 1 - ci } else { ci };
            let block = grid.block(r, c);
            let dc = if ri == 0 && ci == 0 {
                seed_dc
            } else {
                let mut neighbors = Vec::with_capacity(2);
                if ci > 0 {
                    let pc = if col_back { c + 1 } else { c - 1 };
                    neighbors.push(Neighbor { pixels: &pixels[r * cols + pc], side: prev_col_side });
                }
                if ri > 0 {
                    let pr = if row_back { r + 1 } else { r - 1 };
                    neighbors.push(Neighbor { pixels: &pixels[pr * cols + c], side: prev_row_side });
                }
                predict_block_dc(block, &neighbors, grid.quant(), cfg).map_err(|e| match e {
                    Error::NoNeighbor { .. } => Error::NoNeighbor { row: r, col: c },
                    other => other,
                })?
            };
            dcs.set(r, c, dc);
            pixels[r * cols + c] = block_pixels(&block.with_dc(dc), grid.quant());
        }
    }
    Ok(dcs)
}

/// Recovers every DC of a grid whose non-corner DCs were zeroed. The
/// transmitted corner values are written into the result whatever the scan
/// predicted there.
pub fn recover_dc_grid(grid: &CoeffGrid, corners: &CornerDcs, cfg: &RecoveryConfig) -> Result<DcGrid> {
    cfg.validate()?;
    let (rows, cols) = (grid.block_rows(), grid.block_cols());
    let mut out = match cfg.scan {
        ScanMode::SingleCorner(seed) => scan_from(grid, seed, corner_value(corners, seed), cfg)?,
        ScanMode::FourCornerAverage => {
            let scans: Vec<DcGrid> = Corner::ALL
                .par_iter()
                .map(|&c| scan_from(grid, c, corner_value(corners, c), cfg))
                .collect::<Result<_>>()?;
            let mut avg = DcGrid::new(rows, cols);
            for (i, v) in avg.values.iter_mut().enumerate() {
                let sum: i32 = scans.iter().map(|s| s.values[i]).sum();
                *v = (f64::from(sum) / 4.0).round() as i32;
            }
            avg
        }
    };
    for c in Corner::ALL {
        let (r, col) = corner_position(c, rows, cols);
        out.set(r, col, corner_value(corners, c));
    }
    Ok(out)
}

/// Recovers a DC-dropped grid in coefficient form.
pub fn recover_grid(dropped: &CoeffGrid, cfg: &RecoveryConfig) -> Result<CoeffGrid> {
    let corners = extract_corner_dcs(dropped);
    recover_dc_grid(dropped, &corners, cfg)?.apply(dropped)
}

/// Decode, recover the DCs, reconstruct.
pub fn recover_image(dropped_jpeg: &[u8], cfg: &RecoveryConfig) -> Result<Image> {
    let grid = decode_baseline(dropped_jpeg)?;
    Ok(coeff_grid_to_image(&recover_grid(&grid, cfg)?))
}

/// Adds a residual given in units of full scale (`[-1, 1]` ↔ `[-255, 255]`)
/// and rounds back to 8 bits.
pub fn apply_correction(recovered: &Image, residual: &Plane) -> Result<Image> {
    if recovered.width() != residual.width() || recovered.height() != residual.height() {
        return Err(Error::Dimension(format!(
            "residual {}x{} does not match image {}x{}",
            residual.width(),
            residual.height(),
            recovered.width(),
            recovered.height()
        )));
    }
    let data = recovered.data().iter().zip(residual.data()).map(|(&p, &r)| to_u8(f64::from(p) + r * 255.0)).collect();
    Image::new(recovered.width(), recovered.height(), data)
}

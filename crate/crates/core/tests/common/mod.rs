//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's transform or recovery code: the
//! inverse DCT is the textbook double sum and the DC search rebuilds whole
//! candidate blocks.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use cornerdc::{CoeffGrid, Image};

pub fn photo_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/photos")
}

pub fn photos() -> Vec<(String, Image)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(photo_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pgm"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap().to_string_lossy().into_owned();
            let img = cornerdc::image::load_image(&p, cornerdc::ImageFormat::Pgm).unwrap();
            (id, img)
        })
        .collect()
}

fn c(k: usize) -> f64 {
    if k == 0 {
        1.0 / 2f64.sqrt()
    } else {
        1.0
    }
}

/// Textbook 8×8 inverse DCT of quantized coefficients (index `v*8 + u`),
/// level shift, rounding half away from zero and clamping.
pub fn naive_pixels(coeffs: &[i32; 64], q: &[u16; 64]) -> [u8; 64] {
    let mut out = [0u8; 64];
    for y in 0..8 {
        for x in 0..8 {
            let mut s = 0.0;
            for v in 0..8 {
                for u in 0..8 {
                    let f = f64::from(coeffs[v * 8 + u]) * f64::from(q[v * 8 + u]);
                    s += c(u) * c(v) / 4.0
                        * f
                        * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos()
                        * ((2 * y + 1) as f64 * v as f64 * PI / 16.0).cos();
                }
            }
            out[y * 8 + x] = (s + 128.0).round().clamp(0.0, 255.0) as u8;
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleLoss {
    Mse,
    Trend,
    Both,
}

fn p(b: &[u8; 64], y: usize, x: usize) -> f64 {
    f64::from(b[y * 8 + x])
}

/// Loss between a candidate block and a neighbour sitting at offset (dy, dx)
/// from it, where exactly one of dy, dx is -1 or +1.
fn pair_loss(cand: &[u8; 64], nb: &[u8; 64], dy: isize, dx: isize, loss: OracleLoss) -> f64 {
    let mut mse = 0.0;
    let mut trend = 0.0;
    for i in 0..8 {
        // (cand edge, neighbour edge, neighbour one step further away)
        let (ce, ne, ni) = match (dy, dx) {
            (0, -1) => (p(cand, i, 0), p(nb, i, 7), p(nb, i, 6)),
            (0, 1) => (p(cand, i, 7), p(nb, i, 0), p(nb, i, 1)),
            (-1, 0) => (p(cand, 0, i), p(nb, 7, i), p(nb, 6, i)),
            (1, 0) => (p(cand, 7, i), p(nb, 0, i), p(nb, 1, i)),
            _ => unreachable!(),
        };
        mse += (ce - ne).powi(2);
        trend += ((ce - ne) - (ne - ni)).powi(2);
    }
    match loss {
        OracleLoss::Mse => mse / 8.0,
        OracleLoss::Trend => trend / 8.0,
        OracleLoss::Both => mse / 8.0 + trend / 8.0,
    }
}

/// Candidate DC in [-64, 64] minimising the summed loss against `neighbours`
/// (pixels, dy, dx); the first minimum wins.
pub fn oracle_predict(ac: &[i32; 64], q: &[u16; 64], neighbours: &[([u8; 64], isize, isize)], loss: OracleLoss) -> i32 {
    let mut best = (f64::INFINITY, 0);
    for dc in -64..=64 {
        let mut coeffs = *ac;
        coeffs[0] = dc;
        let cand = naive_pixels(&coeffs, q);
        let total: f64 = neighbours.iter().map(|(nb, dy, dx)| pair_loss(&cand, nb, *dy, *dx, loss)).sum();
        if total < best.0 {
            best = (total, dc);
        }
    }
    best.1
}

/// Single raster scan from the top-left corner over a DC-dropped grid.
/// The top-left block keeps the DC it carries and every other block is
/// searched against the blocks directly left of and above it; the four
/// corner values are then put back.
pub fn oracle_scan_top_left(grid: &CoeffGrid, loss: OracleLoss) -> Vec<i32> {
    let (rows, cols) = (grid.block_rows(), grid.block_cols());
    let q = grid.quant().entries();
    let corner = |r: usize, c: usize| (r == 0 || r == rows - 1) && (c == 0 || c == cols - 1);
    let mut dcs = vec![0; rows * cols];
    let mut pix = vec![[0u8; 64]; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let coeffs = grid.block(r, c).0;
            let dc = if r == 0 && c == 0 {
                coeffs[0]
            } else {
                let mut nbs = Vec::new();
                if c > 0 {
                    nbs.push((pix[r * cols + c - 1], 0, -1));
                }
                if r > 0 {
                    nbs.push((pix[(r - 1) * cols + c], -1, 0));
                }
                oracle_predict(&coeffs, q, &nbs, loss)
            };
            let mut full = coeffs;
            full[0] = dc;
            dcs[r * cols + c] = dc;
            pix[r * cols + c] = naive_pixels(&full, q);
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            if corner(r, c) {
                dcs[r * cols + c] = grid.block(r, c).0[0];
            }
        }
    }
    dcs
}

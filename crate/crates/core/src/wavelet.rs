//! Separable 2D DWT with the 8-tap Daubechies (db4) filter bank and
//! BayesShrink soft-threshold denoising.
//!
//! Analysis follows the usual convolve-and-decimate convention: for an input
//! of length `n` and filter length 8, symmetric (half-point) extension gives
//! `floor((n + 7) / 2)` coefficients per band, so a 32-sample line yields 19.

use crate::error::{Error, Result};
use crate::image::{Image, Plane};

const TAPS: usize = 8;

/// db4 decomposition low-pass taps.
pub const DB4_DEC_LO: [f64; TAPS] = [
    -0.010597401785069032,
    0.0328830116668852,
    0.030841381835560764,
    -0.18703481171909309,
    -0.027983769416859854,
    0.6308807679298589,
    0.7148465705529157,
    0.2303778133088965,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extension {
    /// Half-point mirror: `x[-1] = x[0]`, `x[-2] = x[1]`, ...
    #[default]
    Symmetric,
    /// Periodic wrap with exactly `n / 2` coefficients per band (even `n` only).
    /// The transform is then orthogonal.
    Periodization,
}

/// Analysis and synthesis filters plus boundary handling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletSpec {
    pub dec_lo: [f64; TAPS],
    pub dec_hi: [f64; TAPS],
    pub rec_lo: [f64; TAPS],
    pub rec_hi: [f64; TAPS],
    pub extension: Extension,
}

impl WaveletSpec {
    pub fn db4() -> Self {
        let dec_lo = DB4_DEC_LO;
        // quadrature mirror: hi[k] = (-1)^(k+1) lo[7-k]
        let dec_hi: [f64; TAPS] =
            std::array::from_fn(|k| if k % 2 == 0 { -dec_lo[TAPS - 1 - k] } else { dec_lo[TAPS - 1 - k] });
        let rec_lo: [f64; TAPS] = std::array::from_fn(|k| dec_lo[TAPS - 1 - k]);
        let rec_hi: [f64; TAPS] = std::array::from_fn(|k| dec_hi[TAPS - 1 - k]);
        Self { dec_lo, dec_hi, rec_lo, rec_hi, extension: Extension::Symmetric }
    }

    pub fn with_extension(self, extension: Extension) -> Self {
        Self { extension, ..self }
    }

    /// Coefficients per band for an input line of length `n`.
    pub fn band_len(&self, n: usize) -> usize {
        match self.extension {
            Extension::Symmetric => (n + TAPS - 1) / 2,
            Extension::Periodization => n / 2,
        }
    }
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self::db4()
    }
}

/// One level of a 2D decomposition.
///
/// The first letter names the filter applied along rows (horizontal
/// direction), the second the one applied along columns: `lh` holds
/// horizontal edges, `hl` vertical edges and `hh` diagonal detail.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands {
    pub ll: Plane,
    pub lh: Plane,
    pub hl: Plane,
    pub hh: Plane,
    pub source_width: usize,
    pub source_height: usize,
}

#[inline]
fn symmetric_index(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

fn check_line_len(n: usize, ext: Extension) -> Result<()> {
    if n < TAPS {
        return Err(Error::Size(format!("wavelet input of length {n} is shorter than the {TAPS}-tap filter")));
    }
    if ext == Extension::Periodization && !n.is_multiple_of(2) {
        return Err(Error::Size(format!("periodized transform needs an even length, got {n}")));
    }
    Ok(())
}

/// `out_lo[k] = sum_j lo[j] x[2k + 1 - j]` (and likewise for the high band).
fn analyze_line(x: &[f64], spec: &WaveletSpec, lo: &mut [f64], hi: &mut [f64]) {
    let n = x.len();
    for k in 0..lo.len() {
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..TAPS {
            let idx = 2 * k as isize + 1 - j as isize;
            let i = match spec.extension {
                Extension::Symmetric => symmetric_index(idx, n),
                Extension::Periodization => idx.rem_euclid(n as isize) as usize,
            };
            a += spec.dec_lo[j] * x[i];
            d += spec.dec_hi[j] * x[i];
        }
        lo[k] = a;
        hi[k] = d;
    }
}

/// Adjoint of `analyze_line` restricted to the output range. For the
/// orthonormal bank this is the exact inverse in both extension modes.
fn synthesize_line(lo: &[f64], hi: &[f64], spec: &WaveletSpec, out: &mut [f64]) {
    out.fill(0.0);
    let n = out.len() as isize;
    for k in 0..lo.len() {
        for j in 0..TAPS {
            // dec_lo[j] = rec_lo[7 - j]
            let idx = 2 * k as isize + 1 - j as isize;
            let i = match spec.extension {
                Extension::Symmetric if idx < 0 || idx >= n => continue,
                Extension::Symmetric => idx as usize,
                Extension::Periodization => idx.rem_euclid(n) as usize,
            };
            out[i] += spec.rec_lo[TAPS - 1 - j] * lo[k] + spec.rec_hi[TAPS - 1 - j] * hi[k];
        }
    }
}

/// One-level db4 decomposition with symmetric extension.
pub fn dwt2(plane: &Plane) -> Result<Subbands> {
    dwt2_with(plane, &WaveletSpec::db4())
}

pub fn dwt2_with(plane: &Plane, spec: &WaveletSpec) -> Result<Subbands> {
    let (w, h) = (plane.width(), plane.height());
    check_line_len(w, spec.extension)?;
    check_line_len(h, spec.extension)?;
    let (sw, sh) = (spec.band_len(w), spec.band_len(h));

    // rows
    let mut row_lo = Plane::zeros(sw, h);
    let mut row_hi = Plane::zeros(sw, h);
    let mut lo = vec![0.0; sw];
    let mut hi = vec![0.0; sw];
    for y in 0..h {
        analyze_line(&plane.data()[y * w..(y + 1) * w], spec, &mut lo, &mut hi);
        row_lo.data_mut()[y * sw..(y + 1) * sw].copy_from_slice(&lo);
        row_hi.data_mut()[y * sw..(y + 1) * sw].copy_from_slice(&hi);
    }

    // columns
    let columns = |src: &Plane| -> (Plane, Plane) {
        let mut out_lo = Plane::zeros(sw, sh);
        let mut out_hi = Plane::zeros(sw, sh);
        let mut col = vec![0.0; h];
        let mut lo = vec![0.0; sh];
        let mut hi = vec![0.0; sh];
        for x in 0..sw {
            for (y, c) in col.iter_mut().enumerate() {
                *c = src.get(x, y);
            }
            analyze_line(&col, spec, &mut lo, &mut hi);
            for k in 0..sh {
                out_lo.set(x, k, lo[k]);
                out_hi.set(x, k, hi[k]);
            }
        }
        (out_lo, out_hi)
    };
    let (ll, lh) = columns(&row_lo);
    let (hl, hh) = columns(&row_hi);
    Ok(Subbands { ll, lh, hl, hh, source_width: w, source_height: h })
}

/// Inverse of [`dwt2`] to an `width`×`height` plane.
pub fn idwt2(sb: &Subbands, width: usize, height: usize) -> Result<Plane> {
    idwt2_with(sb, width, height, &WaveletSpec::db4())
}

pub fn idwt2_with(sb: &Subbands, width: usize, height: usize, spec: &WaveletSpec) -> Result<Plane> {
    check_line_len(width, spec.extension)?;
    check_line_len(height, spec.extension)?;
    let (sw, sh) = (spec.band_len(width), spec.band_len(height));
    for band in [&sb.ll, &sb.lh, &sb.hl, &sb.hh] {
        if band.width() != sw || band.height() != sh {
            return Err(Error::Dimension(format!(
                "subband {}x{} does not match a {width}x{height} output ({sw}x{sh} expected)",
                band.width(),
                band.height()
            )));
        }
    }

    // columns back to row-filtered planes
    let columns = |lo_band: &Plane, hi_band: &Plane| -> Plane {
        let mut out = Plane::zeros(sw, height);
        let mut lo = vec![0.0; sh];
        let mut hi = vec![0.0; sh];
        let mut col = vec![0.0; height];
        for x in 0..sw {
            for k in 0..sh {
                lo[k] = lo_band.get(x, k);
                hi[k] = hi_band.get(x, k);
            }
            synthesize_line(&lo, &hi, spec, &mut col);
            for (y, &v) in col.iter().enumerate() {
                out.set(x, y, v);
            }
        }
        out
    };
    let row_lo = columns(&sb.ll, &sb.lh);
    let row_hi = columns(&sb.hl, &sb.hh);

    let mut out = Plane::zeros(width, height);
    let mut line = vec![0.0; width];
    for y in 0..height {
        synthesize_line(&row_lo.data()[y * sw..(y + 1) * sw], &row_hi.data()[y * sw..(y + 1) * sw], spec, &mut line);
        out.data_mut()[y * width..(y + 1) * width].copy_from_slice(&line);
    }
    Ok(out)
}

/// Robust noise level from the finest diagonal band: `median(|hh|) / 0.6745`.
pub fn noise_sigma(hh: &Plane) -> f64 {
    let mut mags: Vec<f64> = hh.data().iter().map(|v| v.abs()).collect();
    if mags.is_empty() {
        return 0.0;
    }
    mags.sort_by(f64::total_cmp);
    let n = mags.len();
    let median = if n % 2 == 1 { mags[n / 2] } else { 0.5 * (mags[n / 2 - 1] + mags[n / 2]) };
    median / 0.6745
}

/// BayesShrink threshold `sigma^2 / sigma_x` with
/// `sigma_x = sqrt(max(mean(subband^2) - sigma^2, 0))`.
///
/// Returns 0 when `sigma` is 0 and `f64::INFINITY` (zero the band) when
/// the band carries no signal energy above the noise.
pub fn bayes_threshold(subband: &Plane, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let n = subband.data().len().max(1) as f64;
    let energy = subband.data().iter().map(|v| v * v).sum::<f64>() / n;
    let sigma_x = (energy - sigma * sigma).max(0.0).sqrt();
    if sigma_x == 0.0 {
        f64::INFINITY
    } else {
        sigma * sigma / sigma_x
    }
}

#[inline]
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    x.signum() * (x.abs() - t).max(0.0)
}

fn shrink(band: &mut Plane, sigma: f64) {
    let t = bayes_threshold(band, sigma);
    for v in band.data_mut() {
        *v = soft_threshold(*v, t);
    }
}

/// One-level BayesShrink denoising.
pub fn wd_denoise(img: &Image) -> Result<Image> {
    wd_denoise_levels(img, 1)
}

/// BayesShrink over `levels` decomposition levels. The noise level is
/// estimated once from the finest `hh` band; every detail band gets its own
/// threshold and the coarsest approximation is kept as is.
pub fn wd_denoise_levels(img: &Image, levels: usize) -> Result<Image> {
    if levels == 0 {
        return Err(Error::Config("at least one decomposition level is needed".into()));
    }
    let spec = WaveletSpec::db4();
    let mut stack: Vec<Subbands> = Vec::with_capacity(levels);
    let mut current = Plane::from_image(img);
    for _ in 0..levels {
        let sb = dwt2_with(&current, &spec)?;
        current = sb.ll.clone();
        stack.push(sb);
    }
    let sigma = noise_sigma(&stack[0].hh);
    for sb in stack.iter_mut() {
        shrink(&mut sb.lh, sigma);
        shrink(&mut sb.hl, sigma);
        shrink(&mut sb.hh, sigma);
    }
    let mut approx: Option<Plane> = None;
    for mut sb in stack.into_iter().rev() {
        if let Some(a) = approx.take() {
            sb.ll = a;
        }
        approx = Some(idwt2_with(&sb, sb.source_width, sb.source_height, &spec)?);
    }
    approx.expect("levels >= 1").to_image()
}

//! Wavelet channel extension: an `N×N×3` image becomes an `N×N×6` tensor
//! whose extra channels are the (cropped, normalised, upsampled) db4
//! approximation band of each input channel.
//!
//! Training tensors carry the raw image in the first three channels;
//! inference tensors carry its BayesShrink-denoised version instead. The
//! extension channels are always computed from the raw input.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{Plane, RgbImage};
use crate::wavelet::{dwt2, wd_denoise};

pub const CHANNELS: usize = 6;

/// Relative spread below which an approximation band counts as flat.
const FLAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMode {
    Train,
    Inference,
}

/// `N×N×6` values in [0, 1], stored height-width-channel (C order).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedTensor {
    size: usize,
    data: Vec<f64>,
    mode: TensorMode,
}

impl ExtendedTensor {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.size, self.size, CHANNELS]
    }

    pub fn mode(&self) -> TensorMode {
        self.mode
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[(y * self.size + x) * CHANNELS + c]
    }

    pub fn channel(&self, c: usize) -> Plane {
        assert!(c < CHANNELS);
        Plane::from_fn(self.size, self.size, |x, y| self.get(y, x, c))
    }
}

fn check_square(width: usize, height: usize) -> Result<usize> {
    if width != height || !width.is_multiple_of(2) || width < 16 {
        return Err(Error::Size(format!("channel extension needs an even square side >= 16, got {width}x{height}")));
    }
    Ok(width)
}

/// Catmull-Rom (a = -0.5) cubic weight.
fn cubic(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        ((A + 2.0) * t - (A + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        (((t - 5.0) * t + 8.0) * t - 4.0) * A
    } else {
        0.0
    }
}

/// Separable bicubic resampling with half-pixel centre alignment and
/// edge-clamped taps.
pub fn bicubic_resize(src: &Plane, width: usize, height: usize) -> Plane {
    let axis = |src_len: usize, dst_len: usize| -> Vec<([usize; 4], [f64; 4])> {
        let scale = src_len as f64 / dst_len as f64;
        (0..dst_len)
            .map(|d| {
                let s = (d as f64 + 0.5) * scale - 0.5;
                let base = s.floor();
                let frac = s - base;
                let base = base as isize;
                let idx = std::array::from_fn(|k| (base - 1 + k as isize).clamp(0, src_len as isize - 1) as usize);
                let w = std::array::from_fn(|k| cubic(frac - (k as f64 - 1.0)));
                (idx, w)
            })
            .collect()
    };
    let xs = axis(src.width(), width);
    let ys = axis(src.height(), height);
    let mut rows = Plane::zeros(width, src.height());
    for y in 0..src.height() {
        for (x, (idx, w)) in xs.iter().enumerate() {
            rows.set(x, y, (0..4).map(|k| w[k] * src.get(idx[k], y)).sum());
        }
    }
    let mut out = Plane::zeros(width, height);
    for (y, (idx, w)) in ys.iter().enumerate() {
        for x in 0..width {
            out.set(x, y, (0..4).map(|k| w[k] * rows.get(x, idx[k])).sum());
        }
    }
    out
}

/// Extension channel for one `N×N` input channel, values in [0, 255].
pub fn wavelet_extension(channel: &Plane) -> Result<Plane> {
    let n = check_square(channel.width(), channel.height())?;
    let ll = dwt2(channel)?.ll;
    let s = ll.width();
    let half = n / 2;
    // 19 -> 16 at N = 32: two leading rows/cols dropped, one trailing
    let lead = (s - half).div_ceil(2);
    let cropped = Plane::from_fn(half, half, |x, y| ll.get(x + lead, y + lead));

    let (min, max) =
        cropped.data().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let spread = max - min;
    let normalised = if spread <= FLAT_TOLERANCE * max.abs().max(min.abs()).max(1.0) {
        Plane::zeros(half, half)
    } else {
        cropped.map(|v| (v - min) / spread * 255.0)
    };
    Ok(bicubic_resize(&normalised, n, n).map(|v| v.clamp(0.0, 255.0)))
}

fn assemble(base: [Plane; 3], ext: [Plane; 3], n: usize, mode: TensorMode) -> ExtendedTensor {
    let mut data = Vec::with_capacity(n * n * CHANNELS);
    for y in 0..n {
        for x in 0..n {
            for b in &base {
                data.push(b.get(x, y));
            }
            for e in &ext {
                data.push(e.get(x, y) / 255.0);
            }
        }
    }
    ExtendedTensor { size: n, data, mode }
}

fn extensions(img: &RgbImage) -> Result<[Plane; 3]> {
    let ext: Vec<Plane> =
        (0..3).map(|c| wavelet_extension(&Plane::from_image(&img.channel(c)))).collect::<Result<_>>()?;
    Ok(ext.try_into().expect("three channels"))
}

/// Raw image (scaled to [0, 1]) followed by its three extension channels.
pub fn build_training_tensor(img: &RgbImage) -> Result<ExtendedTensor> {
    let n = check_square(img.width(), img.height())?;
    let ext = extensions(img)?;
    let base = [0, 1, 2].map(|c| Plane::from_image(&img.channel(c)).map(|v| v / 255.0));
    Ok(assemble(base, ext, n, TensorMode::Train))
}

/// Denoised image (scaled to [0, 1]) followed by the extension channels of
/// the raw image.
pub fn build_inference_tensor(img: &RgbImage) -> Result<ExtendedTensor> {
    let n = check_square(img.width(), img.height())?;
    let ext = extensions(img)?;
    let denoised: Vec<Plane> = (0..3)
        .map(|c| Ok(Plane::from_image(&wd_denoise(&img.channel(c))?).map(|v| v / 255.0)))
        .collect::<Result<_>>()?;
    Ok(assemble(denoised.try_into().expect("three channels"), ext, n, TensorMode::Inference))
}

pub fn build_tensor(img: &RgbImage, mode: TensorMode) -> Result<ExtendedTensor> {
    match mode {
        TensorMode::Train => build_training_tensor(img),
        TensorMode::Inference => build_inference_tensor(img),
    }
}

/// NPY v1.0, little-endian float32, C order.
pub fn encode_npy(t: &ExtendedTensor) -> Vec<u8> {
    let [a, b, c] = t.shape();
    let dict = format!("{{'descr': '<f4', 'fortran_order': False, 'shape': ({a}, {b}, {c}), }}");
    // magic(6) + version(2) + header length(2) + dict + padding + '\n' is a multiple of 64
    let unpadded = 10 + dict.len() + 1;
    let padding = (64 - unpadded % 64) % 64;
    let header_len = dict.len() + padding + 1;

    let mut out = Vec::with_capacity(10 + header_len + t.data.len() * 4);
    out.extend_from_slice(b"\x93NUMPY\x01\x00");
    out.extend_from_slice(&(header_len as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', padding));
    out.push(b'\n');
    for &v in &t.data {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

pub fn export_tensor(t: &ExtendedTensor, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path.as_ref(), encode_npy(t))?;
    Ok(())
}

/// Reads back a C-order `<f4` NPY v1.0 array: `(shape, values)`.
pub fn parse_npy(bytes: &[u8]) -> Result<(Vec<usize>, Vec<f32>)> {
    if bytes.len() < 10 || &bytes[..6] != b"\x93NUMPY" {
        return Err(Error::Format("not an NPY file".into()));
    }
    if bytes[6] != 1 {
        return Err(Error::Format(format!("NPY version {}.{} unsupported", bytes[6], bytes[7])));
    }
    let header_len = usize::from(u16::from_le_bytes([bytes[8], bytes[9]]));
    let header = bytes.get(10..10 + header_len).ok_or_else(|| Error::Format("short NPY header".into()))?;
    let header = std::str::from_utf8(header).map_err(|_| Error::Format("NPY header is not ASCII".into()))?;
    if !header.contains("'descr': '<f4'") || !header.contains("'fortran_order': False") {
        return Err(Error::Format("only C-order <f4 arrays are supported".into()));
    }
    let open = header.find("'shape': (").ok_or_else(|| Error::Format("NPY header lacks a shape".into()))? + 10;
    let close = header[open..].find(')').ok_or_else(|| Error::Format("unterminated NPY shape".into()))? + open;
    let shape: Vec<usize> = header[open..close]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Format(format!("bad NPY dimension {s}"))))
        .collect::<Result<_>>()?;
    let count: usize = shape.iter().product();
    let body = &bytes[10 + header_len..];
    if body.len() != count * 4 {
        return Err(Error::Format(format!("NPY body has {} bytes, expected {}", body.len(), count * 4)));
    }
    let values = body.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
    Ok((shape, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Image;

    fn textured(n: usize) -> RgbImage {
        let r = Image::from_fn(n, n, |x, y| ((x * 13 + y * 7) % 200 + 20) as u8);
        let g = Image::from_fn(n, n, |x, y| ((x * y) % 97 + 60) as u8);
        let b = Image::from_fn(n, n, |x, y| ((x as f64 / 3.0).sin() * 60.0 + 120.0 + y as f64) as u8);
        RgbImage::from_channels(&r, &g, &b).unwrap()
    }

    #[test]
    fn cubic_kernel() {
        assert_eq!(cubic(0.0), 1.0);
        assert_eq!(cubic(1.0), 0.0);
        assert_eq!(cubic(2.0), 0.0);
        for t in [0.1, 0.25, 0.5, 0.9] {
            let sum: f64 = (-2..=2).map(|k| cubic(t - k as f64)).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bicubic_preserves_constants_and_linear_ramps() {
        let flat = Plane::from_fn(16, 16, |_, _| 42.0);
        assert!(bicubic_resize(&flat, 32, 32).data().iter().all(|v| (v - 42.0).abs() < 1e-12));
        // interior samples of a ramp are reproduced exactly
        let ramp = Plane::from_fn(16, 16, |x, _| x as f64);
        let up = bicubic_resize(&ramp, 32, 32);
        for x in 4..28 {
            let expected = (x as f64 + 0.5) / 2.0 - 0.5;
            assert!((up.get(x, 5) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_shape_and_range() {
        let img = textured(32);
        let ext = wavelet_extension(&Plane::from_image(&img.channel(0))).unwrap();
        assert_eq!((ext.width(), ext.height()), (32, 32));
        assert!(ext.data().iter().all(|v| (0.0..=255.0).contains(v)));
        let again = wavelet_extension(&Plane::from_image(&img.channel(0))).unwrap();
        assert_eq!(ext, again);

        let flat = wavelet_extension(&Plane::from_fn(32, 32, |_, _| 77.0)).unwrap();
        assert!(flat.data().iter().all(|&v| v == 0.0));

        assert!(matches!(wavelet_extension(&Plane::zeros(14, 14)), Err(Error::Size(_))));
        assert!(matches!(wavelet_extension(&Plane::zeros(32, 30)), Err(Error::Size(_))));
        assert!(matches!(wavelet_extension(&Plane::zeros(33, 33)), Err(Error::Size(_))));
    }

    #[test]
    fn extension_ignores_uniform_shift() {
        let base = Image::from_fn(32, 32, |x, y| ((x * 5 + y * 3) % 150 + 10) as u8);
        let shifted = Image::from_fn(32, 32, |x, y| base.get(x, y) + 40);
        let a = wavelet_extension(&Plane::from_image(&base)).unwrap();
        let b = wavelet_extension(&Plane::from_image(&shifted)).unwrap();
        let diff = a.data().iter().zip(b.data()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-9, "{diff}");
    }

    #[test]
    fn training_tensor() {
        let img = textured(32);
        let t = build_training_tensor(&img).unwrap();
        assert_eq!(t.shape(), [32, 32, 6]);
        assert_eq!(t.mode(), TensorMode::Train);
        assert!(t.data().iter().all(|v| (0.0..=1.0).contains(v)));
        for c in 0..3 {
            let ch = img.channel(c);
            for y in 0..32 {
                for x in 0..32 {
                    assert_eq!((t.get(y, x, c) * 255.0).round() as u8, ch.get(x, y));
                }
            }
        }
    }

    #[test]
    fn gray_input_gives_identical_extensions() {
        let gray = Image::from_fn(32, 32, |x, y| ((x * 9 + y * y) % 256) as u8);
        let t = build_training_tensor(&RgbImage::from_gray(&gray)).unwrap();
        assert_eq!(t.channel(3), t.channel(4));
        assert_eq!(t.channel(4), t.channel(5));
    }

    #[test]
    fn inference_tensor() {
        let flat = RgbImage::from_gray(&Image::filled(32, 32, 90));
        let train = build_training_tensor(&flat).unwrap();
        let infer = build_inference_tensor(&flat).unwrap();
        assert_eq!(train.data(), infer.data());

        let img = textured(32);
        let train = build_training_tensor(&img).unwrap();
        let infer = build_inference_tensor(&img).unwrap();
        for c in 3..6 {
            assert_eq!(train.channel(c), infer.channel(c));
        }
    }

    #[test]
    fn npy_layout() {
        let t = build_training_tensor(&textured(32)).unwrap();
        let bytes = encode_npy(&t);
        assert_eq!(&bytes[..8], b"\x93NUMPY\x01\x00");
        let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
        assert_eq!((10 + header_len) % 64, 0);
        assert_eq!(bytes[10 + header_len - 1], b'\n');
        let header = std::str::from_utf8(&bytes[10..10 + header_len]).unwrap();
        assert!(header.starts_with("{'descr': '<f4', 'fortran_order': False, 'shape': (32, 32, 6), }"));
        assert_eq!(bytes.len(), 10 + header_len + 32 * 32 * 6 * 4);

        let (shape, values) = parse_npy(&bytes).unwrap();
        assert_eq!(shape, vec![32, 32, 6]);
        for (a, b) in t.data().iter().zip(&values) {
            assert_eq!(*a as f32, *b);
        }
        assert!(parse_npy(b"nope").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn extension_ignores_uniform_shift(data in proptest::collection::vec(0u8..=180, 32 * 32), k in 1u8..=75) {
                let a = Image::new(32, 32, data).unwrap();
                let b = Image::from_fn(32, 32, |x, y| a.get(x, y) + k);
                let ea = wavelet_extension(&Plane::from_image(&a)).unwrap();
                let eb = wavelet_extension(&Plane::from_image(&b)).unwrap();
                for (p, q) in ea.data().iter().zip(eb.data()) {
                    prop_assert!((p - q).abs() < 1e-6);
                }
                prop_assert!(ea.data().iter().all(|v| (0.0..=255.0).contains(v)));
            }

            #[test]
            fn training_base_channels_round_trip(data in proptest::collection::vec(any::<u8>(), 16 * 16 * 3)) {
                let img = RgbImage::new(16, 16, data.clone()).unwrap();
                let t = build_training_tensor(&img).unwrap();
                let (_, values) = parse_npy(&encode_npy(&t)).unwrap();
                for (i, &v) in data.iter().enumerate() {
                    let (pixel, c) = (i / 3, i % 3);
                    prop_assert_eq!((f64::from(values[pixel * CHANNELS + c]) * 255.0).round() as u8, v);
                }
            }
        }
    }
}
